"""Tests for the space definition file format."""

from fractions import Fraction

import pytest

from mvspace_engine.cli import EXIT_INVARIANT, main
from mvspace_engine.errors import DimensionMismatch, NotAMultiVectorSpace, SpaceFileError
from mvspace_engine.exact_linalg import RATIONALS
from mvspace_engine.mvspace import count, equals
from mvspace_engine.spacefile import (
    parse,
    parse_file,
    parse_scalar,
    parse_vector,
    parse_vector_list,
    serialize,
)
from tests.conftest import GF5

HEADER = "field Q\nambient 2\nomega 4\n"
ZERO_IN_MIDDLE = HEADER + (
    "space A\n"
    "  level 3 span { (0,1) }\n"
    "  level 0 span { (1,0) (0,1) }\n"
    "  level 1 span { (1,0) (0,1) }\n"
    "end\n"
)


class TestParse:
    def test_example_file(self, spacefile_text):
        sf = parse(spacefile_text)
        assert sf.field == RATIONALS
        assert (sf.ambient, sf.omega) == (2, 6)
        assert list(sf.spaces) == ["V", "W"]
        assert sf.get("V").counts == (5, 3, 1)
        assert sf.get("W").counts == (6, 2, 1)
        assert count(sf.get("V"), (0, 1)) == 3

    def test_prime_field_reduces_entries(self):
        sf = parse("field GF 5\nambient 2\nomega 3\nspace A\n  level 2 span { (6,1) }\nend\n")
        assert sf.field == GF5
        assert sf.get("A").levels[0].rows == ((1, 1),)

    def test_fraction_entries(self):
        sf = parse(HEADER + "space A\n  level 3 span { (1/2,1) }\nend\n")
        assert sf.get("A").levels[0].rows == ((Fraction(1), Fraction(2)),)

    def test_level_zero_is_dropped(self):
        sf = parse(HEADER + "space A\n  level 3 span {}\n  level 0 span { (1,0) (0,1) }\nend\n")
        assert sf.get("A").counts == (3,)

    def test_level_after_zero_is_rejected(self):
        with pytest.raises(NotAMultiVectorSpace, match="counts not strictly decreasing"):
            parse(ZERO_IN_MIDDLE)

    def test_comments_and_blank_lines(self):
        sf = parse("# header\n\n" + HEADER + "space A # trailing\n  level 1 span { (1,0) }\nend\n")
        assert "A" in sf.spaces

    def test_unknown_space(self, spacefile_text):
        with pytest.raises(KeyError, match="unknown space 'X'"):
            parse(spacefile_text).get("X")


class TestParseErrors:
    def test_no_spaces(self):
        with pytest.raises(SpaceFileError, match="no spaces defined"):
            parse(HEADER)

    def test_missing_declaration(self):
        with pytest.raises(SpaceFileError, match="missing ambient"):
            parse("field Q\nomega 3\nspace V\nend\n")

    def test_duplicate_declaration(self):
        with pytest.raises(SpaceFileError) as excinfo:
            parse("field Q\nfield Q\nambient 2\nomega 3\n")
        assert excinfo.value.line == 2

    def test_unknown_field(self):
        with pytest.raises(SpaceFileError, match="unknown field 'R'"):
            parse("field R\nambient 2\nomega 3\n")

    def test_composite_characteristic(self):
        with pytest.raises(SpaceFileError):
            parse("field GF 6\nambient 2\nomega 3\nspace A\nend\n")

    def test_duplicate_space_name(self):
        text = HEADER + "space A\nend\nspace A\nend\n"
        with pytest.raises(SpaceFileError, match="duplicate space name") as excinfo:
            parse(text)
        assert (excinfo.value.line, excinfo.value.column) == (6, 7)

    def test_unbalanced_parenthesis_position(self):
        text = HEADER + "space A\n  level 1 span { (1,0 }\nend\n"
        with pytest.raises(SpaceFileError) as excinfo:
            parse(text)
        assert (excinfo.value.line, excinfo.value.column) == (5, 18)
        assert str(excinfo.value).startswith("line 5, column 18:")

    def test_bare_scalar_in_span(self):
        with pytest.raises(SpaceFileError, match="expected a vector"):
            parse(HEADER + "space A\n  level 1 span { 3 }\nend\n")

    def test_wrong_vector_length(self):
        with pytest.raises(SpaceFileError, match="expected 2") as excinfo:
            parse(HEADER + "space A\n  level 1 span { (1,0,0) }\nend\n")
        assert excinfo.value.line == 5

    def test_unexpected_end(self):
        with pytest.raises(SpaceFileError, match="unexpected end of file"):
            parse(HEADER + "space A\n  level 1 span { (1,0)\n")

    def test_invariant_violation_names_space(self):
        text = HEADER + "space A\n  level 1 span { (1,0) }\n  level 2 span { (1,0) (0,1) }\nend\n"
        with pytest.raises(NotAMultiVectorSpace, match=r"space A \(line 4\): counts not strictly"):
            parse(text)

    def test_levels_must_nest(self):
        text = HEADER + "space A\n  level 3 span { (1,0) }\n  level 1 span { (0,1) }\nend\n"
        with pytest.raises(NotAMultiVectorSpace, match="not strictly nested"):
            parse(text)


class TestLiterals:
    def test_scalars(self):
        assert parse_scalar(RATIONALS, "-3/6") == Fraction(-1, 2)
        assert parse_scalar(GF5, "7") == 2
        with pytest.raises(SpaceFileError, match="zero denominator"):
            parse_scalar(RATIONALS, "1/0")
        with pytest.raises(SpaceFileError):
            parse_scalar(RATIONALS, "1.5")

    def test_vectors(self):
        assert parse_vector(RATIONALS, "(1, 2)") == (1, 2)
        assert parse_vector(RATIONALS, "3,4") == (3, 4)
        with pytest.raises(DimensionMismatch):
            parse_vector(RATIONALS, "(1,2)", 3)

    def test_vector_list(self):
        assert parse_vector_list(RATIONALS, "(1,0);(0,1)", 2) == [(1, 0), (0, 1)]
        assert parse_vector_list(RATIONALS, "(1,0);", 2) == [(1, 0)]


class TestSerialize:
    def test_round_trip(self, spacefile_text):
        sf = parse(spacefile_text)
        again = parse(serialize(sf))
        assert list(again.spaces) == list(sf.spaces)
        for name, space in sf.spaces.items():
            assert equals(again.get(name), space)

    def test_canonical_generators(self):
        sf = parse(HEADER + "space A\n  level 2 span { (2,4) }\n  level 1 span { (1,0) (1,1) }\nend\n")
        text = serialize(sf)
        assert "  level 2 span { (1,2) }" in text
        assert "  level 1 span { (1,0) (0,1) }" in text

    def test_prime_field_header(self):
        sf = parse("field GF 3\nambient 1\nomega 2\nspace A\n  level 2 span { }\nend\n")
        assert serialize(sf).startswith("field GF 3\nambient 1\nomega 2\n")


class TestParseFile:
    def test_reads_file(self, tmp_path, spacefile_text):
        path = tmp_path / "spaces.mvs"
        path.write_text(spacefile_text, encoding="utf-8")
        assert len(parse_file(str(path)).spaces) == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="File not found"):
            parse_file(str(tmp_path / "missing.mvs"))

    def test_level_after_zero_fails_validate(self, tmp_path, capsys):
        path = tmp_path / "zero.mvs"
        path.write_text(ZERO_IN_MIDDLE, encoding="utf-8")
        assert main([str(path), "validate"]) == EXIT_INVARIANT
        assert "counts not strictly decreasing" in capsys.readouterr().err
