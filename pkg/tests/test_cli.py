"""Tests for the command-line interface."""

import json

import pytest

from nilsub.arfun import boundary_objects
from nilsub.cli import main, parse_dimvec_arg
from nilsub.errors import ParseError
from nilsub.formats import read_cover, read_pair, write_pair
from nilsub.kform import h0, h_inf
from nilsub.nilmod import DimPair
from nilsub.types import BoundaryName


@pytest.fixture
def pair_files(tmp_path):
    """Small pair files over F_2."""
    files = {
        "mixed": "field 2\nnilpotency 2\npartition 2 1\ngenerator e1 + e3\n",
        "socle": "field 2\nnilpotency 3\npartition 3\ngenerator e1\n",
        "column": "field 2\nnilpotency 2\npartition 2\n",
        "split": "field 2\nnilpotency 2\npartition 2 1\ngenerator e3\n",
    }
    paths = {}
    for name, text in files.items():
        paths[name] = tmp_path / f"{name}.pair"
        paths[name].write_text(text)
    return {name: str(path) for name, path in paths.items()}


@pytest.fixture
def cover_files(tmp_path):
    """A column of length 2 lying in the subspace, and a copy whose squares do not commute."""
    good = (
        "field 2\nnilpotency 2\nwindow 0 1\nbottom 1 1\ntop 1 1\n"
        "alpha 1\n1\nalphaprime 1\n1\nbeta 0\n1\nbeta 1\n1\n"
    )
    paths = {
        "column": tmp_path / "column.cover",
        "twisted": tmp_path / "twisted.cover",
    }
    paths["column"].write_text(good)
    paths["twisted"].write_text(good.replace("alphaprime 1\n1\n", ""))
    return {name: str(path) for name, path in paths.items()}


class TestDimvecArgument:
    """Tests for parse_dimvec_arg."""

    def test_named_vectors(self):
        """Test h0, h_inf and their sums."""
        assert parse_dimvec_arg("h0") == h0()
        assert parse_dimvec_arg("2*h0 + h_inf") == 2 * h0() + h_inf()

    def test_digits(self):
        """Test a compact vector with a start index."""
        assert parse_dimvec_arg("0/1@3").lo == 3

    def test_bad_coefficient(self):
        """Test coefficients must be non-negative integers."""
        with pytest.raises(ParseError):
            parse_dimvec_arg("x*h0")


class TestFormCommands:
    """Tests for chi, iota, classify and pi --dimvec."""

    def test_chi(self, capsys):
        """Test chi(h0) = 0."""
        assert main(["chi", "--dimvec", "h0"]) == 0
        assert capsys.readouterr().out.strip() == "0"

    def test_chi_json(self, capsys):
        """Test structured output of chi."""
        assert main(["chi", "--dimvec", "12210000/12221100", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["chi"] == 1
        assert data["t"] == 6

    def test_iota(self, capsys):
        """Test iota(h_inf) = (6, 0)."""
        assert main(["iota", "--dimvec", "h_inf"]) == 0
        assert capsys.readouterr().out.strip() == "iota_0 = 6, iota_inf = 0"

    def test_classify(self, capsys):
        """Test h0 + h_inf lies in the tube family with parameter 1."""
        assert main(["classify", "--dimvec", "h0+h_inf"]) == 0
        assert capsys.readouterr().out.strip() == "T_1"

    def test_pi_dimvec(self, capsys):
        """Test pi(h0) = (12, 6)."""
        assert main(["pi", "--dimvec", "h0"]) == 0
        assert capsys.readouterr().out.strip() == "dimpair (12,6)"

    def test_window_error(self, capsys):
        """Test a vector outside the window exits with status 2."""
        assert main(["iota", "--dimvec", "0/1@7"]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_pi_needs_input(self, capsys):
        """Test pi without a file or vector."""
        assert main(["pi"]) == 2
        assert "cover file" in capsys.readouterr().err


class TestCoverCommands:
    """Tests for cover validate, pi and shift."""

    def test_validate(self, cover_files, capsys):
        """Test a commuting cover is reported valid."""
        assert main(["cover", "validate", cover_files["column"]]) == 0
        assert capsys.readouterr().out.startswith("valid: dimvec 0..1")

    def test_validate_non_commuting(self, cover_files, capsys):
        """Test a square that does not commute fails with status 1."""
        assert main(["cover", "validate", cover_files["twisted"], "--json"]) == 1
        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is False
        assert data["kind"] == "commutativity"
        assert data["index"] == 1

    def test_validate_text(self, cover_files, capsys):
        """Test the failing relation is named in plain output."""
        assert main(["cover", "validate", cover_files["twisted"]]) == 1
        assert capsys.readouterr().out.startswith("invalid: commutativity at index 1:")

    def test_pi(self, cover_files, capsys):
        """Test the pushed-down column is the full pair (2, 2)."""
        assert main(["cover", "pi", cover_files["column"], "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert (data["v"], data["u"]) == (2, 2)

    def test_pi_refuses_invalid_cover(self, cover_files, capsys):
        """Test pi on a non-commuting cover exits with status 2."""
        assert main(["cover", "pi", cover_files["twisted"]]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_shift(self, cover_files, tmp_path, capsys):
        """Test shift moves the window and writes a cover file."""
        out = tmp_path / "shifted.cover"
        assert main(["cover", "shift", cover_files["column"], "-2", "--out", str(out)]) == 0
        assert "window -2 -1" in capsys.readouterr().out
        shifted = read_cover(out)
        assert shifted.lo == -2
        assert (shifted.bottom, shifted.top) == ((1, 1), (1, 1))

    def test_shift_needs_amount(self, cover_files, capsys):
        """Test shift without an amount."""
        assert main(["cover", "shift", cover_files["column"]]) == 2
        assert "shift amount" in capsys.readouterr().err


class TestObjectCommands:
    """Tests for commands on pair files."""

    def test_decompose(self, pair_files, capsys):
        """Test the mixed generator splits into two summands."""
        assert main(["decompose", pair_files["mixed"], "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert sorted((s["v"], s["u"]) for s in data["summands"]) == [(1, 1), (2, 0)]

    def test_hom(self, pair_files, capsys):
        """Test dim Hom((k[x]/x^2, 0), (k[x]/x^2, 0)) = 2."""
        assert main(["hom", pair_files["column"], pair_files["column"]]) == 0
        assert capsys.readouterr().out.strip() == "dim Hom = 2"

    def test_iso(self, pair_files, capsys):
        """Test the mixed pair is isomorphic to the split one."""
        assert main(["iso", pair_files["mixed"], pair_files["split"]]) == 0
        assert capsys.readouterr().out.strip() == "isomorphic"
        assert main(["iso", pair_files["mixed"], pair_files["column"]]) == 0
        assert capsys.readouterr().out.strip() == "NOT isomorphic"

    def test_tau(self, pair_files, capsys):
        """Test tau of (k[x]/x^3, soc) is (k[x]/x^2, 0)."""
        assert main(["tau", pair_files["socle"]]) == 0
        out = capsys.readouterr().out
        assert "partition 2" in out
        assert "generator" not in out

    def test_tau_orbit_of_k(self, f2, tmp_path, capsys):
        """Test the orbit of K for n = 4 runs through J, R, P'/K, R', S and back."""
        path = tmp_path / "k.pair"
        write_pair(boundary_objects(f2, 4)[BoundaryName.K], path)
        assert main(["tau", str(path), "--iterate", "6"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert [line.split()[0] for line in lines] == ["0", "1", "2", "3", "4", "5", "6"]
        assert [line.split()[1] for line in lines] == [
            "(1,1)", "(4,1)", "(3,0)", "(3,3)", "(4,3)", "(1,0)", "(1,1)",
        ]
        assert not any("projective" in line for line in lines)

    def test_tau_orbit_json(self, f2, tmp_path, capsys):
        """Test the structured orbit."""
        path = tmp_path / "k.pair"
        write_pair(boundary_objects(f2, 4)[BoundaryName.K], path)
        assert main(["tau", str(path), "--iterate", "2", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert [(row["v"], row["u"]) for row in data["orbit"]] == [(1, 1), (4, 1), (3, 0)]
        assert data["stopped"] is False

    def test_tau_orbit_stops_at_projective(self, pair_files, capsys):
        """Test the orbit of a projective object stops at once."""
        assert main(["tau", pair_files["column"], "--iterate", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].split()[:2] == ["0", "(2,0)"]
        assert lines[0].endswith("projective")
        assert lines[-1] == "stopped at a projective after 0 steps"

    def test_tau_of_projective(self, pair_files, capsys):
        """Test tau refuses a projective object."""
        assert main(["tau", pair_files["column"]]) == 2
        assert "projective" in capsys.readouterr().err

    def test_dual_writes_file(self, pair_files, tmp_path):
        """Test --out writes the dual as a pair file."""
        out = tmp_path / "dual.pair"
        assert main(["dual", pair_files["socle"], "--out", str(out)]) == 0
        assert read_pair(out).dim_pair == DimPair(3, 2)

    def test_field_override(self, pair_files, capsys):
        """Test --field does not replace a field line in the file."""
        assert main(["hom", pair_files["column"], pair_files["column"], "--field", "3"]) == 0
        assert capsys.readouterr().out.strip() == "dim Hom = 2"

    def test_missing_file(self, tmp_path, capsys):
        """Test an unreadable file exits with status 2."""
        assert main(["dual", str(tmp_path / "absent.pair")]) == 2
        assert capsys.readouterr().err.startswith("error:")


class TestDataCommands:
    """Tests for census, catalog, roots and verify."""

    def test_census(self, capsys):
        """Test the census table for n = 2."""
        assert main(["census", "--n", "2", "--dim", "3"]) == 0
        out = capsys.readouterr().out
        assert "total : 5" in out
        assert "|v - 2u| <= n: True" in out

    def test_census_rationals(self):
        """Test a census over Q is refused."""
        assert main(["census", "--n", "2", "--dim", "2", "--field", "Q"]) == 2

    def test_catalog_list(self, capsys):
        """Test five entries for n = 2."""
        assert main(["catalog", "list", "--n", "2"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 5
        assert all(line.startswith("n2-") for line in lines)

    def test_catalog_show(self, capsys):
        """Test showing an entry prints its provenance and pair file."""
        assert main(["catalog", "show", "n2-01"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# n2-01:")
        assert "nilpotency 2" in out

    def test_catalog_show_needs_id(self):
        """Test show without an id."""
        assert main(["catalog", "show"]) == 2

    def test_catalog_unknown_id(self, capsys):
        """Test an unknown id exits with status 2."""
        assert main(["catalog", "show", "n2-99"]) == 2
        assert "n2-99" in capsys.readouterr().err

    def test_roots(self, capsys):
        """Test the root table accounts for 120 roots."""
        assert main(["roots"]) == 0
        assert capsys.readouterr().out.strip().splitlines()[-1] == "total 120"

    def test_verify(self, capsys):
        """Test a passing check exits with status 0."""
        assert main(["verify", "iota"]) == 0
        out = capsys.readouterr().out
        assert "[PASS] iota" in out
        assert out.strip().endswith("1/1 checks passed")

    def test_unknown_check(self, capsys):
        """Test argparse rejects unknown check names."""
        with pytest.raises(SystemExit):
            main(["verify", "nope"])

    def test_version(self, capsys):
        """Test --version."""
        with pytest.raises(SystemExit):
            main(["--version"])
        assert capsys.readouterr().out.startswith("nilsub ")
