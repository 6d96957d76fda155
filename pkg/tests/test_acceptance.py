"""Acceptance battery: one recorded pass/fail line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import FIXTURE_NAMES, FIXTURES, fixture, random_code, random_product, random_span, random_trellis  # noqa: E402
from tbtrellis import analysis  # noqa: E402
from tbtrellis.duality import constraint_is_proper, constraint_is_trim, dual  # noqa: E402
from tbtrellis.errors import GuardExceeded  # noqa: E402
from tbtrellis.formats import build_from_generator_file, parse_generator_file  # noqa: E402
from tbtrellis.gflinalg import Subspace, orthogonal_complement  # noqa: E402
from tbtrellis.kv import kv_trellis  # noqa: E402
from tbtrellis.oracle import are_isomorphic, verify  # noqa: E402
from tbtrellis.reduce import (  # noqa: E402
    check_code_hypothesis,
    is_locally_irreducible,
    mirror_trace,
    reduce_step,
    reduce_to_irreducible,
)
from tbtrellis.trellis import code, from_generators  # noqa: E402

CODE5 = Subspace(2, 5, ((0, 1, 1, 1, 0), (1, 0, 0, 1, 0), (0, 1, 1, 0, 1)))
CODE6 = Subspace(2, 6, ((1, 1, 0, 0, 1, 0), (0, 0, 1, 1, 1, 0), (1, 0, 0, 0, 1, 1)))
PROFILE_KEYS = ("state_trim", "branch_trim", "proper", "observable", "controllable", "span_one_observable")

NAMES = {
    1: "five-section profile and dual",
    2: "five-section reduction and mirror",
    3: "six-section span-two reduction",
    4: "duality suite",
    5: "trim/proper and dimension/observability suites",
    6: "oracle equivalence",
    7: "fixpoint soundness",
    8: "shortest-span product trellis suite",
    9: "implication chains",
}


def key(n: int) -> str:
    return f"{n} {NAMES[n]}"


def timed(fn):
    t = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t


def population(seed: int = 2024, count: int = 200):
    rng = random.Random(seed)
    return [random_trellis(rng, max_m=5, max_state=2, max_symbol=2) for _ in range(count)]


# --- the criteria ----------------------------------------------------------------------------


def five_section() -> tuple[bool, str]:
    def body():
        spec = parse_generator_file((FIXTURES / "generators" / "fig1a.txt").read_text())
        T = build_from_generator_file(spec)
        flags = analysis.property_report(T).flags()
        D = dual(T)
        dflags = analysis.property_report(D).flags()
        ok = (
            T == fixture("fig1a") and code(T) == CODE5
            and {k: flags[k] for k in PROFILE_KEYS} == dict.fromkeys(PROFILE_KEYS[:5], True) | {"span_one_observable": False}
            and D == fixture("fig1b") and dflags["branch_trim"] is False
        )
        return ok, f"profile {[k for k in PROFILE_KEYS if flags[k]]}, dual branch_trim={dflags['branch_trim']}"
    (ok, detail), secs = timed(body)
    return ok and secs < 1, f"{detail}; {secs:.3f} s"


def five_section_reduction() -> tuple[bool, str]:
    def body():
        T = fixture("fig1a")
        after, steps = reduce_step(T)
        expand, trim = steps
        ok = (
            [(s.rule, s.kind, s.time) for s in steps] == [(5, "branch_expand", 4), (5, "trim_state", 4)]
            and expand.space_used == Subspace(2, 5, ((0, 1, 0, 0, 1),))
            and set(trim.space_used.elements()) == {(0, 0), (1, 1)}
            and code(after) == CODE5
            and (T.state_dims[4], after.state_dims[4]) == (2, 1)
        )
        mirrored = mirror_trace(T, steps)
        ok = ok and mirrored[-1] == fixture("fig3b") and code(mirrored[-1]) == orthogonal_complement(CODE5)
        return ok, f"dim S_4 {T.state_dims[4]} -> {after.state_dims[4]}, mirrored dual matches fig3b={mirrored[-1] == fixture('fig3b')}"
    (ok, detail), secs = timed(body)
    return ok and secs < 1, f"{detail}; {secs:.3f} s"


def six_section() -> tuple[bool, str]:
    def body():
        T = fixture("fig4a")
        r = analysis.property_report(T)
        w = r.witnesses.get("span_two_observable", {})
        ok = (
            code(T) == CODE6 and r.span_one_observable and r.span_one_controllable and not r.span_two_observable
            and (w.get("start"), w.get("stop")) == (4, 2)
            and w["path"][0] == [1, 1] and w["path"][-1] == [1, 0]
        )
        after, steps = reduce_step(T)
        ok = ok and [s.rule for s in steps] == [7, 7, 7] and \
            [s.after for s in steps] == [fixture("fig4b"), fixture("fig4c"), fixture("fig4d")]
        r2 = analysis.property_report(after)
        ok = ok and r2.span_two_observable and r2.span_one_controllable and not r2.span_two_controllable
        again = reduce_step(after)
        ok = ok and again is not None
        return ok, (f"witness {w.get('path', [None])[0]}@S_{w.get('start')} -> {w.get('path', [None])[-1]}@S_{w.get('stop')}, "
                    f"rule 7 reaches fig4d, then rule {again[1][0].rule if again else None} fires")
    (ok, detail), secs = timed(body)
    return ok and secs < 1, f"{detail}; {secs:.3f} s"


def duality_suite() -> tuple[bool, str]:
    def body():
        bad = 0
        checked_iso = 0
        for T in population():
            D = dual(T)
            if code(D) != orthogonal_complement(code(T)) or dual(D) != T:
                bad += 1
            elif max(T.state_dims) <= 1:
                checked_iso += 1
                bad += not are_isomorphic(dual(D), T)
        return bad, checked_iso
    (bad, iso), secs = timed(body)
    return bad == 0 and secs < 10, f"200 trellises, {bad} failures (double dual equal; {iso} also matched by isomorphism search); {secs:.2f} s"


def trim_proper_suite() -> tuple[bool, str]:
    sections = bad = 0
    for T in population():
        D = dual(T)
        for i in range(T.m):
            sections += 1
            bad += constraint_is_trim(T, i) != constraint_is_proper(D, i)
            bad += constraint_is_proper(T, i) != constraint_is_trim(D, i)
        bad += (analysis.dimension_deficit(T) == 0) != bool(analysis.is_observable(D))
    return bad == 0, f"{sections} sections over 200 trellises, {bad} failures"


def oracle_suite() -> tuple[bool, str]:
    rng = random.Random(77)
    trellises = [fixture(n) for n in FIXTURE_NAMES]
    skipped = 0
    while len(trellises) < len(FIXTURE_NAMES) + 100:
        T = random_trellis(rng, max_m=5, max_state=2, max_symbol=2)
        try:
            results = verify(T)
        except GuardExceeded:
            skipped += 1
            continue
        trellises.append(T)
        if not all(results.values()):
            return False, f"discrepancy {results}"
    bad = [n for n in FIXTURE_NAMES if not all(verify(fixture(n)).values())]
    return not bad, f"{len(FIXTURE_NAMES)} fixtures + 100 random, {len(bad)} discrepancies ({skipped} draws over the guard redrawn)"


@functools.cache
def fixpoint_suite() -> dict:
    rng = random.Random(7)
    out = {"literal_misses": 0, "hypothesis_cases": 0, "hypothesis_misses": 0, "other": 0,
           "conditioned_misses": 0}
    t = time.perf_counter()
    for _ in range(100):
        T = random_product(rng)
        target = code(T)
        final, steps = reduce_to_irreducible(T, T.state_dim_sum)
        if any(code(s.after) != target for s in steps) or reduce_step(final) is not None:
            out["other"] += 1
        v = is_locally_irreducible(final)
        out["literal_misses"] += not v
        if v.hypothesis:
            out["hypothesis_cases"] += 1
            out["hypothesis_misses"] += not (v and v.caveat is None)
    # a second population drawn only from codes meeting the short-support hypothesis
    got = 0
    while got < 100:
        p, m = rng.choice((2, 3)), rng.randint(6, 8)
        C = random_code(rng, m, rng.randint(2, m - 2), p)
        if not check_code_hypothesis(C):
            continue
        got += 1
        T = from_generators([(w, random_span(rng, w, m)) for w in C.basis], m=m, p=p)
        final, steps = reduce_to_irreducible(T, T.state_dim_sum)
        if any(code(s.after) != C for s in steps):
            out["other"] += 1
        v = is_locally_irreducible(final)
        out["conditioned_misses"] += not (v and v.caveat is None)
    out["seconds"] = time.perf_counter() - t
    return out


def fixpoint_detail(r: dict) -> str:
    where = "all" if r["hypothesis_misses"] == 0 else "not all"
    return (f"literal: {r['literal_misses']}/100 fixpoints miss the five-predicate criterion "
            f"({where} on codes violating the short-support hypothesis); "
            f"hypothesis holds: {r['hypothesis_cases']} + 100 conditioned cases, "
            f"{r['hypothesis_misses'] + r['conditioned_misses']} misses; "
            f"termination/code failures {r['other']}; {r['seconds']:.1f} s")


def fixpoint_scoped_ok(r: dict) -> bool:
    return r["other"] == 0 and r["hypothesis_misses"] == 0 and r["conditioned_misses"] == 0 and r["seconds"] < 60


def kv_suite() -> tuple[bool, str]:
    rng = random.Random(99)
    bad = hyp = 0

    def check(C, strong):
        T = kv_trellis(C)
        r = analysis.property_report(T)
        fails = not (code(T) == C and r.trim_proper and r.observable and r.controllable)
        if strong:
            fails |= not (r.span_two_observable and r.span_two_controllable and reduce_step(T) is None)
        return fails

    for _ in range(50):
        n = rng.randint(2, 8)
        C = random_code(rng, n, rng.randint(1, min(4, n)))
        strong = check_code_hypothesis(C)
        hyp += strong
        bad += check(C, strong)
    # the uniform draw rarely meets the hypothesis, so add 50 codes that do
    extra = 0
    while extra < 50:
        n = rng.randint(6, 8)
        C = random_code(rng, n, rng.randint(2, min(4, n - 2)))
        if check_code_hypothesis(C):
            extra += 1
            bad += check(C, True)
    return bad == 0, f"50 codes ({hyp} meet the short-support hypothesis) + 50 that do, {bad} failures"


def chain_suite(tracker) -> tuple[bool, str]:
    rng = random.Random(5)
    for _ in range(100):
        analysis.property_report(random_trellis(rng))
        analysis.property_report(random_product(rng))
    return not tracker.violations, f"{tracker.checked} property reports so far, {len(tracker.violations)} violations"


# --- pytest entry points ---------------------------------------------------------------------


def record(log, n, result):
    ok, detail = result
    log[key(n)] = (ok, detail)
    assert ok, detail


def test_criterion_1(acceptance_log):
    record(acceptance_log, 1, five_section())


def test_criterion_2(acceptance_log):
    record(acceptance_log, 2, five_section_reduction())


def test_criterion_3(acceptance_log):
    record(acceptance_log, 3, six_section())


def test_criterion_4(acceptance_log):
    record(acceptance_log, 4, duality_suite())


def test_criterion_5(acceptance_log):
    record(acceptance_log, 5, trim_proper_suite())


def test_criterion_6(acceptance_log):
    record(acceptance_log, 6, oracle_suite())


def test_criterion_7_under_short_support_hypothesis():
    r = fixpoint_suite()
    assert fixpoint_scoped_ok(r), fixpoint_detail(r)


@pytest.mark.xfail(strict=True, reason="trellises of codes with short-support words can be irreducible "
                                       "without meeting the five-predicate criterion")
def test_criterion_7(acceptance_log):
    r = fixpoint_suite()
    record(acceptance_log, 7, (r["literal_misses"] == 0 and fixpoint_scoped_ok(r), fixpoint_detail(r)))


def test_criterion_8(acceptance_log):
    record(acceptance_log, 8, kv_suite())


def test_criterion_9(acceptance_log, chain_tracker):
    record(acceptance_log, 9, chain_suite(chain_tracker))


def main() -> int:
    from conftest import CHAIN
    CHAIN.install()
    results = {
        1: five_section(), 2: five_section_reduction(), 3: six_section(), 4: duality_suite(),
        5: trim_proper_suite(), 6: oracle_suite(),
    }
    r = fixpoint_suite()
    results[7] = (r["literal_misses"] == 0 and fixpoint_scoped_ok(r), fixpoint_detail(r))
    results[8] = kv_suite()
    results[9] = chain_suite(CHAIN)
    for n, (ok, detail) in results.items():
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {key(n)}: {detail}")
    return 0 if all(ok for ok, _ in results.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
