"""Tests for the pair, cover, dimension vector and box file formats."""

import pytest

from nilsub.catalog import x_family
from nilsub.covering import from_box_diagram, pi, validate
from nilsub.errors import ParseError
from nilsub.exactla import Field
from nilsub.formats import (
    format_box_entry,
    format_cover,
    format_dimvec,
    format_pair,
    parse_box_file,
    parse_cover,
    parse_dimvec,
    parse_pair,
    read_pair,
    write_pair,
)
from nilsub.kform import DimVector
from nilsub.nilmod import DimPair

X2_TEXT = """\
# X_2 over F_5
field 5
nilpotency 6
partition 6 4 2
generator e3 + e8
generator e11 - e8
generator 2*e4 + e9 + e12
"""

COLUMN_COVER = """\
field 2
nilpotency 2
window 0 1
bottom 1 1
top 1 1
alpha 1
1
alphaprime 1
1
beta 0
1
beta 1
1
"""


class TestPairFiles:
    """Tests for pair files."""

    def test_parse_x_family_member(self):
        """Test the text form of X_2 gives the catalog object."""
        x = parse_pair(X2_TEXT)
        assert x == x_family(Field.prime(5), 2)
        assert x.dim_pair == DimPair(12, 6)

    def test_two_generators(self):
        """Test the first two generators span a 5-dimensional subspace."""
        text = "\n".join(X2_TEXT.splitlines()[:6])
        assert parse_pair(text).dim_pair == DimPair(12, 5)

    def test_field_override(self, f3):
        """Test a missing field line falls back to the given field."""
        x = parse_pair("nilpotency 2\npartition 2\ngenerator e1\n", field=f3)
        assert x.field == f3
        assert x.u == 1

    def test_rational_coefficients(self):
        """Test fractional coefficients over Q."""
        x = parse_pair("field Q\nnilpotency 1\npartition 1 1\ngenerator 1/2*e1 - e2\n")
        assert x.u == 1

    def test_write_and_read(self, tmp_path, f5):
        """Test a written file reads back as the same object."""
        x = x_family(f5, 3)
        path = tmp_path / "x3.pair"
        write_pair(x, path)
        assert path.read_text().startswith("field 5\nnilpotency 6\npartition 6 4 2\n")
        assert read_pair(path) == x

    def test_format_signs(self):
        """Test negative coefficients print as subtraction."""
        x = parse_pair("field 3\nnilpotency 1\npartition 1 1\ngenerator e1 - e2\n")
        assert "generator e1 + 2*e2" in format_pair(x)

    @pytest.mark.parametrize(
        "text, message",
        [
            ("nilpotency 2\npartition 2\n", "missing field"),
            ("field 2\npartition 2\n", "missing nilpotency"),
            ("field 2\nnilpotency 2\n", "missing partition"),
            ("field 2\nnilpotency 2\npartition 2\ngenerator f1\n", "bad term"),
            ("field 2\nnilpotency 2\npartition 2\ngenerator e3\n", "outside"),
            ("field 2\nnilpotency 2\npartition 3\n", "exceeds"),
            ("field 2\nnilpotency two\n", "integer"),
            ("field 2\ncolour blue\n", "unknown key"),
        ],
    )
    def test_errors(self, text, message):
        """Test malformed pair files raise ParseError."""
        with pytest.raises(ParseError, match=message):
            parse_pair(text)

    def test_error_location(self):
        """Test errors carry path and line number."""
        with pytest.raises(ParseError) as info:
            parse_pair("field 2\nnilpotency 2\npartition 2\ngenerator e1 +\n", path="bad.pair")
        assert info.value.path == "bad.pair"
        assert info.value.line == 4
        assert str(info.value).startswith("bad.pair:4:")


class TestCoverFiles:
    """Tests for cover files."""

    def test_parse_column(self, f2):
        """Test a single full column."""
        r = parse_cover(COLUMN_COVER)
        assert validate(r).ok
        assert pi(r).dim_pair == DimPair(2, 2)
        assert r == from_box_diagram(f2, 2, [(2, 1)], [(1, [(0, 0, 1)])])

    def test_format_parses_back(self, f3):
        """Test format_cover output is accepted by parse_cover."""
        r = from_box_diagram(f3, 3, [(3, 2), (1, 1)], [(1, [(0, 1, 1), (1, 0, 2)])])
        assert parse_cover(format_cover(r)) == r

    def test_missing_blocks_are_zero(self):
        """Test omitted matrices default to zero."""
        r = parse_cover("field 2\nnilpotency 2\nwindow 0 0\nbottom 1\ntop 0\n")
        assert validate(r).ok
        assert pi(r).dim_pair == DimPair(1, 0)

    def test_wrong_row_count(self):
        """Test a block with too many rows."""
        text = COLUMN_COVER.replace("alpha 1\n1\n", "alpha 1\n1\n1\n")
        with pytest.raises(ParseError, match="rows"):
            parse_cover(text)

    def test_block_outside_window(self):
        """Test blocks must lie inside the window."""
        with pytest.raises(ParseError, match="outside"):
            parse_cover(COLUMN_COVER + "beta 5\n1\n")

    def test_missing_window(self):
        """Test the window line is required."""
        with pytest.raises(ParseError, match="window"):
            parse_cover("field 2\nnilpotency 2\n")


class TestDimvec:
    """Tests for dimension vector text."""

    def test_compact_with_start(self):
        """Test the compact form with a start index."""
        x = parse_dimvec("0110/1221@-2")
        assert x == DimVector.from_digits("0110/1221", lo=-2)
        assert (x.lo, x.hi) == (-2, 1)

    def test_long_form(self):
        """Test the long form and its output."""
        x = parse_dimvec("dimvec -2..1 | bottom: 1 2 2 1 | top: 0 1 1 0")
        assert x == parse_dimvec("0110/1221@-2")
        assert format_dimvec(x) == "dimvec -2..1 | bottom: 1 2 2 1 | top: 0 1 1 0"
        assert parse_dimvec(format_dimvec(x)) == x

    def test_zero(self):
        """Test the zero vector in long form."""
        assert parse_dimvec(format_dimvec(DimVector.zero())).is_zero()

    @pytest.mark.parametrize(
        "text",
        ["12/1x", "dimvec 0..1 | bottom: 1 | top: 0 0", "dimvec 0..1 | bottom: 1 1", "1/1@z"],
    )
    def test_errors(self, text):
        """Test malformed dimension vectors raise ParseError."""
        with pytest.raises(ParseError):
            parse_dimvec(text)


class TestBoxFiles:
    """Tests for box files."""

    BOX = """\
nilpotency 3
entry n3-x
  provenance hand-made
  dimvec 0110/1221
  column 3 2
  column 1 1
  generator 1 a1x + 2*a2
end
"""

    def test_parse_entry(self):
        """Test one entry with two columns and a generator."""
        n, entries = parse_box_file(self.BOX)
        assert n == 3
        (entry,) = entries
        assert entry.id == "n3-x"
        assert entry.provenance == "hand-made"
        assert entry.columns == [(3, 2), (1, 1)]
        index, terms = entry.generators[0]
        assert index == 1
        assert [(t.column, t.power, t.coeff) for t in terms] == [(0, 1, "1"), (1, 0, "2")]
        assert entry.line == 2

    def test_format_entry(self):
        """Test an entry prints in the file syntax."""
        _, (entry,) = parse_box_file(self.BOX)
        text = format_box_entry(entry)
        assert "  generator 1 a1x + 2*a2" in text
        assert parse_box_file("nilpotency 3\n" + text)[1][0].columns == entry.columns

    def test_duplicate_id(self):
        """Test entry ids must be unique."""
        with pytest.raises(ParseError, match="duplicate"):
            parse_box_file(self.BOX + self.BOX.split("\n", 1)[1])

    def test_unclosed_entry(self):
        """Test a missing end line."""
        with pytest.raises(ParseError, match="not closed"):
            parse_box_file(self.BOX.replace("end\n", ""))

    def test_line_outside_entry(self):
        """Test keys other than nilpotency need an entry."""
        with pytest.raises(ParseError, match="outside an entry"):
            parse_box_file("nilpotency 3\ncolumn 1 1\n")

    def test_bad_term(self):
        """Test generator terms use a<j>[x^k]."""
        with pytest.raises(ParseError, match="bad term"):
            parse_box_file(self.BOX.replace("a1x", "b1x"))
