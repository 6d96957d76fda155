"""Random instances and fixture access shared by the test modules."""

from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from tbtrellis.formats import read_trellis
from tbtrellis.gflinalg import Subspace
from tbtrellis.trellis import CircularSpan, Trellis, from_generators, make_trellis

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_NAMES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig4c", "fig4d")


def fixture(name: str) -> Trellis:
    return read_trellis(FIXTURES / f"{name}.json")


def random_trellis(rng: random.Random, p: int | None = None, max_m: int = 5,
                   max_state: int = 2, max_symbol: int = 2) -> Trellis:
    """Arbitrary constraint codes: usually untrim, improper and so on."""
    if p is None:
        p = rng.choice((2, 3))
    m = rng.randint(1, max_m)
    sd = [rng.randint(0, max_state) for _ in range(m)]
    ad = [rng.randint(0, max_symbol) for _ in range(m)]
    cons = []
    for i in range(m):
        n = sd[i] + ad[i] + sd[(i + 1) % m]
        k = rng.randint(0, n)
        cons.append([[rng.randrange(p) for _ in range(n)] for _ in range(k)])
    return make_trellis(p, sd, cons, ad)


def random_code(rng: random.Random, n: int, k: int, p: int = 2) -> Subspace:
    """A uniformly drawn ``k``-dimensional code (retrying dependent draws)."""
    while True:
        C = Subspace(p, n, tuple(tuple(rng.randrange(p) for _ in range(n)) for _ in range(k)))
        if C.dim == k:
            return C


def random_span(rng: random.Random, word, m: int) -> CircularSpan:
    """A circular span that contains the support of ``word``, not necessarily the shortest."""
    sup = [i for i, x in enumerate(word) if x]
    start = rng.choice(sup)
    least = max((i - start) % m for i in sup) + 1
    length = rng.randint(least, m)
    return CircularSpan(start, (start + length - 1) % m)


def random_product(rng: random.Random, p: int | None = None, max_m: int = 6, max_k: int = 3) -> Trellis:
    """Product trellis of a random basis of a random code, with random valid spans."""
    if p is None:
        p = rng.choice((2, 3))
    m = rng.randint(2, max_m)
    k = rng.randint(1, min(max_k, m))
    C = random_code(rng, m, k, p)
    # random change of basis so the generators are not always in RREF
    gens = []
    while len(gens) < k:
        coeffs = [rng.randrange(p) for _ in range(k)]
        w = tuple(sum(c * r[j] for c, r in zip(coeffs, C.basis)) % p for j in range(m))
        if any(w) and Subspace(p, m, tuple(g for g, _ in gens) + (w,)).dim == len(gens) + 1:
            gens.append((w, random_span(rng, w, m)))
    return from_generators(gens, m=m, p=p)


@st.composite
def trellises(draw, primes=(2, 3), max_m: int = 4, max_state: int = 2, max_symbol: int = 2):
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from(primes))
    return random_trellis(random.Random(seed), p, max_m, max_state, max_symbol)


@st.composite
def product_trellises(draw, primes=(2, 3), max_m: int = 5, max_k: int = 3):
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from(primes))
    return random_product(random.Random(seed), p, max_m, max_k)


@st.composite
def subspaces(draw, n=None, primes=(2, 3, 5), max_n: int = 5):
    p = draw(st.sampled_from(primes))
    if n is None:
        n = draw(st.integers(0, max_n))
    k = draw(st.integers(0, n + 1))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return Subspace(p, n, tuple(map(tuple, rows)))
