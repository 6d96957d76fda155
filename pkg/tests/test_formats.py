from __future__ import annotations

import json

import pytest
from hypothesis import given

from helpers import FIXTURE_NAMES, FIXTURES, fixture, trellises
from tbtrellis.formats import (
    FormatError,
    build_from_generator_file,
    dumps,
    format_word,
    loads,
    parse_code_file,
    parse_generator_file,
    parse_span,
    parse_word,
)
from tbtrellis.gflinalg import Subspace
from tbtrellis.trellis import CircularSpan, code


@given(trellises(primes=(2, 3, 5)))
def test_round_trip(T):
    assert loads(dumps(T)) == T
    assert dumps(loads(dumps(T))) == dumps(T)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_are_canonical(name):
    text = (FIXTURES / f"{name}.json").read_text()
    assert dumps(loads(text)) == text


class TestTrellisJson:
    def base(self):
        return json.loads(dumps(fixture("fig4a")))

    def test_missing_key(self):
        d = self.base()
        del d["constraints"]
        with pytest.raises(FormatError, match="constraints"):
            loads(json.dumps(d))

    def test_unknown_key(self):
        d = self.base()
        d["extra"] = 1
        with pytest.raises(FormatError):
            loads(json.dumps(d))

    def test_bad_entries(self):
        d = self.base()
        d["constraints"][0][0][0] = 7
        with pytest.raises(FormatError):
            loads(json.dumps(d))

    def test_wrong_lengths(self):
        d = self.base()
        d["state_dims"] = d["state_dims"][:-1]
        with pytest.raises(FormatError):
            loads(json.dumps(d))

    def test_not_json(self):
        with pytest.raises(FormatError):
            loads("{")

    def test_sign_flags_optional(self):
        d = self.base()
        del d["sign_flags"]
        assert loads(json.dumps(d)) == fixture("fig4a")


class TestWords:
    def test_digits_and_commas(self):
        assert parse_word("0110", 2) == (0, 1, 1, 0)
        assert parse_word("3, 12, 0", 13) == (3, 12, 0)
        assert format_word((3, 12, 0), 13) == "3,12,0"
        assert format_word((0, 1), 2) == "01"

    def test_errors(self):
        for text, p in (("012", 2), ("1a", 2), ("", 2), ("312", 13)):
            with pytest.raises(FormatError):
                parse_word(text, p)

    def test_span(self):
        assert parse_span(" 3..0 ") == CircularSpan(3, 0)
        with pytest.raises(FormatError):
            parse_span("3-0")


class TestGeneratorFiles:
    def test_default_spans(self):
        spec = parse_generator_file("01110\n10010;span=3..0\n")
        assert spec.generators == [((0, 1, 1, 1, 0), None), ((1, 0, 0, 1, 0), CircularSpan(3, 0))]
        assert build_from_generator_file(spec).state_dims == (1, 0, 1, 1, 1)

    def test_field_and_dims(self):
        spec = parse_generator_file("field 3\nsymbol_dims 2 1\n120  # comment\n")
        T = build_from_generator_file(spec)
        assert T.p == 3 and T.symbol_dims == (2, 1)
        assert code(T) == Subspace(3, 3, ((1, 2, 0),))

    def test_field_override(self):
        assert parse_generator_file("field 3\n11\n", p=5).p == 5

    def test_shipped_files_build_the_fixtures(self):
        for name in ("fig1a", "fig4a"):
            spec = parse_generator_file((FIXTURES / "generators" / f"{name}.txt").read_text())
            assert build_from_generator_file(spec) == fixture(name)

    def test_relabel(self):
        spec = parse_generator_file("11;span=0..1\nrelabel 1: 1\n")
        assert spec.relabels == [(1, ((1,),))]
        with pytest.raises(FormatError):
            build_from_generator_file(parse_generator_file("11;span=0..1\nrelabel 5: 1\n"))

    def test_errors_carry_line_numbers(self):
        with pytest.raises(FormatError, match="line 2"):
            parse_generator_file("011\n01;span=x\n")
        with pytest.raises(FormatError, match="unknown generator option"):
            parse_generator_file("011;weight=2\n")
        with pytest.raises(FormatError):
            build_from_generator_file(parse_generator_file("011\n01\n"))


class TestCodeFiles:
    def test_basic(self):
        C, dims = parse_code_file("# rows\n110\n011\n")
        assert C == Subspace(2, 3, ((1, 1, 0), (0, 1, 1))) and dims == (1, 1, 1)

    def test_sectioned_ternary(self):
        C, dims = parse_code_file("field 3\nsymbol_dims 2 2\n1201\n")
        assert C.p == 3 and dims == (2, 2)

    def test_errors(self):
        with pytest.raises(FormatError):
            parse_code_file("110\n01\n")
        with pytest.raises(FormatError):
            parse_code_file("# nothing\n")
