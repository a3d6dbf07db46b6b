"""Tests for the command line."""

import json

import pytest

from metaward import __version__
from metaward.cli import HANDLERS, build_parser, main, split_expressions
from metaward.config import InvalidConfig, InvalidGridFile, load_grid, validate_input
from metaward.const import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, SUBCOMMANDS
from metaward.metawardpy import reps

from .common import run_cli, run_json


def test_every_subcommand_has_a_handler():
    """The parser and the dispatch table agree."""
    assert set(HANDLERS) == set(SUBCOMMANDS)


def test_version(capsys):
    """--version prints the manifest version."""
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


# ──────────────────────────────────────────────────────────────
# Exact algebra subcommands
# ──────────────────────────────────────────────────────────────

def test_algebra_check_json_envelope(capsys):
    """JSON output wraps the report with tool, version, subcommand and config."""
    code, data = run_json(capsys, "algebra-check")
    assert code == EXIT_OK
    assert data["tool"] == "metaward"
    assert data["version"] == __version__
    assert data["subcommand"] == "algebra-check"
    assert data["config"]["nmax"] == 3
    assert data["report"]["all_zero"] is True
    assert len(data["report"]["pairs"]) == 75


@pytest.mark.parametrize("family", ["meta", "meta_dual", "cga", "ortho_chiral"])
def test_algebra_check_families(capsys, family):
    """Every algebra family closes."""
    code, out, _ = run_cli(capsys, "algebra-check", "--family", family, "--nmax", "2")
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1].endswith("all zero")


def test_algebra_check_explicit_parameters(capsys):
    """Numeric flags become exact values in the generators."""
    code, data = run_json(capsys, "algebra-check", "--mu", "0.5", "--x", "0.25", "--nmax", "2")
    assert code == EXIT_OK
    assert data["config"]["mu"] == 0.5
    assert any(pair["rhs"] == "1*1/2*Y_1" for pair in data["report"]["pairs"])


def test_algebra_check_csv(capsys):
    """CSV has one row per checked bracket."""
    code, out, _ = run_cli(capsys, "algebra-check", "--nmax", "1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "lhs,rhs,residual,zero"
    assert len(lines) == 1 + 3 * 3 * 3
    assert all(line.endswith(",0,true") for line in lines[1:])


def test_algebra_check_detects_mutation(capsys, monkeypatch):
    """A sign flip in Y_0 turns the run into a failed check."""
    original = reps.make_generator

    def flipped(spec):
        op = original(spec)
        if spec.family is reps.Family.META and spec.kind is reps.Kind.Y and spec.index == 0:
            return -op
        return op

    monkeypatch.setattr(reps, "make_generator", flipped)
    code, out, _ = run_cli(capsys, "algebra-check", "--nmax", "2")
    assert code == EXIT_FAILURE
    assert "FAIL" in out


@pytest.mark.parametrize("subcommand", ["n-check", "dynsym-check", "chiral-check"])
def test_extension_checks(capsys, subcommand):
    """N extension, dynamical symmetry and chiral isomorphism all hold."""
    code, _, _ = run_cli(capsys, subcommand, "--nmax", "2")
    assert code == EXIT_OK


def test_contract(capsys):
    """The contraction lists the mu = 0 generators and checks their algebra."""
    code, data = run_json(capsys, "contract", "--nmax", "2")
    assert code == EXIT_OK
    assert set(data["report"]["generators"]) == {f"{k}_{n}" for k in "XY" for n in range(-1, 3)}
    assert data["report"]["algebra"]["all_zero"] is True
    assert "mu" not in data["report"]["generators"]["Y_0"]


@pytest.mark.parametrize("left, right, expected", [
    ("dt", "t", "1"),
    ("dt", "dr", "0"),
    ("r*dt", "t*dr", "-t*dt + r*dr"),
])
def test_commutator(capsys, left, right, expected):
    """Brackets of parsed operators in canonical text form."""
    code, out, _ = run_cli(capsys, "commutator", left, right)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_commutator_of_negated_generators(capsys):
    """[-dr, -t*dt - r*dr - x] = dr; leading minus signs are expressions, not flags."""
    code, out, _ = run_cli(capsys, "commutator", "-dr", "-t*dt-r*dr-x")
    assert code == EXIT_OK
    assert out.strip() == "dr"


def test_commutator_expressions_before_options(capsys):
    """Options after the expressions still parse."""
    code, data = run_json(capsys, "commutator", "-dr", "-t*dt-r*dr-x", "-q")
    assert code == EXIT_OK
    assert data["report"] == {"lhs": "-dr", "rhs": "-t*dt-r*dr-x", "commutator": "dr"}


def test_split_expressions():
    """Only the tokens right after commutator are taken out."""
    assert split_expressions(["commutator", "-dr", "t", "--format", "csv"]) == (
        ["commutator", "--format", "csv"], ["-dr", "t"])
    assert split_expressions(["-v", "commutator", "-x", "-v"]) == (["-v", "commutator", "-v"], ["-x"])
    assert split_expressions(["hardy-m2", "--nu1", "2"]) == (["hardy-m2", "--nu1", "2"], [])


def test_commutator_needs_two_expressions(capsys):
    """One expression is a usage error."""
    code, out, err = run_cli(capsys, "commutator", "dt")
    assert code == EXIT_USAGE
    assert out == ""
    assert "two expressions" in err


def test_commutator_syntax_error(capsys):
    """Parse errors carry their position to stderr."""
    code, _, err = run_cli(capsys, "commutator", "t +", "dt")
    assert code == EXIT_USAGE
    assert "column" in err


# ──────────────────────────────────────────────────────────────
# Correlator subcommands
# ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("family", ["meta_naive", "meta_final", "cga", "dual"])
def test_ward_residual(capsys, family):
    """Covariant forms pass on the standard grid."""
    code, data = run_json(capsys, "ward-residual", "--family", family)
    assert code == EXIT_OK
    assert data["report"]["passed"] is True
    assert data["report"]["max_rel_residual"] <= 1e-10


def test_ward_residual_on_grid_file(capsys, grid_file):
    """A grid file replaces the standard grid; each point sits at three offsets."""
    path = grid_file([(1.0, 0.5, 0, 0), (2.0, 1.0, 0, 0), (-1.0, -3.0, 0, 0)])
    code, data = run_json(capsys, "ward-residual", "--family", "meta_naive", "--grid", path)
    assert code == EXIT_OK
    assert data["report"]["sample_points"] == 9


def test_ward_residual_csv(capsys):
    """CSV lists one residual per generator."""
    code, out, _ = run_cli(capsys, "ward-residual", "--family", "cga", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "generator,max_rel_residual"
    assert {line.split(",")[0] for line in lines[1:]} == {"X_-1", "X_0", "X_1", "Y_-1", "Y_0", "Y_1"}


def test_ward_residual_usage_errors(capsys, grid_file):
    """Unknown families, families without generators and bad grids exit with 2."""
    assert run_cli(capsys, "ward-residual", "--family", "bogus")[0] == EXIT_USAGE
    assert run_cli(capsys, "ward-residual", "--family", "ortho")[0] == EXIT_USAGE
    assert run_cli(capsys, "ward-residual", "--grid", "/nonexistent/grid.csv")[0] == EXIT_USAGE
    bad_header = grid_file([(1.0, 0.5)], header="t,r")
    code, _, err = run_cli(capsys, "ward-residual", "--grid", bad_header)
    assert code == EXIT_USAGE
    assert "header" in err


def test_domain_error_is_usage_error(capsys):
    """Parameters outside the domain are reported, not raised."""
    code, out, err = run_cli(capsys, "ward-residual", "--family", "meta_final", "--mu", "-1")
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("error: Domain violation")


def test_reduced_system(capsys):
    """The reduced operators are printed before their residuals."""
    code, out, _ = run_cli(capsys, "reduced-system")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert len(lines) == 5 + 5 + 1
    assert lines[-1].endswith("(pass)")
    assert run_cli(capsys, "reduced-system", "--family", "meta_final")[0] == EXIT_USAGE


def test_w_collapse(capsys):
    """Samples collapse on the w curve; CSV keeps one row per sample."""
    code, out, _ = run_cli(capsys, "w-collapse", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "u,v,w_re,w_im,g_re,g_im,curve_gap,pair_gap"
    assert len(lines) == 1 + 7
    assert run_cli(capsys, "w-collapse", "--mu", "0")[0] == EXIT_USAGE


def test_correlator_table_csv(capsys, grid_file):
    """Values at grid points, full precision."""
    path = grid_file([(3.0, 4.0, 0, 0)])
    code, out, _ = run_cli(capsys, "correlator-table", "--family", "ortho", "--x", "0.5",
                           "--grid", path, "--format", "csv")
    header, row = out.strip().splitlines()
    assert code == EXIT_OK
    assert header == "family,x1,gamma1,mu,t,r,re,im"
    cells = row.split(",")
    assert cells[:6] == ["ortho", "0.5", "1", "1", "3", "4"]
    assert float(cells[6]) == pytest.approx(0.2, rel=1e-15)
    assert float(cells[7]) == 0.0


def test_correlator_table_skips_outside_points(capsys, caplog, grid_file):
    """Points outside the domain are dropped with a warning."""
    path = grid_file([(1.0, 0.5, 0, 0), (1.0, -2.0, 0, 0)])
    code, data = run_json(capsys, "correlator-table", "--family", "meta_naive", "--grid", path)
    assert code == EXIT_OK
    assert len(data["report"]["rows"]) == 1
    assert "Skipping 1 grid points" in caplog.text


def test_correlator_table_text(capsys):
    """Text output has one line per standard grid point."""
    code, out, _ = run_cli(capsys, "correlator-table", "--family", "cga")
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 48


def test_properties(capsys):
    """All qualitative checks hold at unit parameters."""
    code, data = run_json(capsys, "properties")
    assert code == EXIT_OK
    assert set(data["report"]) >= {"causality", "contraction-limit", "non-analyticity",
                                   "symmetry:meta_final", "boundedness:cga"}
    assert all(report["passed"] for report in data["report"].values())


def test_singularity_demo(capsys):
    """The naive form diverges at mu r = -t; a weak rapidity does not."""
    code, out, _ = run_cli(capsys, "singularity-demo")
    assert code == EXIT_OK
    assert out.strip().endswith("diverges")
    assert run_cli(capsys, "singularity-demo", "--gamma", "0.25")[0] == EXIT_FAILURE


# ──────────────────────────────────────────────────────────────
# Hardy subcommands
# ──────────────────────────────────────────────────────────────

def test_hardy_m2(capsys):
    """Default s = 2, lambda = 1."""
    code, data = run_json(capsys, "hardy-m2")
    assert code == EXIT_OK
    assert data["report"]["closed_form"] == pytest.approx(1.5707963267948966)


def test_hardy_m2_divergent(capsys):
    """s <= 1/2 is reported as a usage error."""
    code, _, err = run_cli(capsys, "hardy-m2", "--nu1", "0.25")
    assert code == EXIT_USAGE
    assert "diverges" in err


def test_hardy_spectrum(capsys):
    """The spectrum of the profile is one-sided."""
    code, out, _ = run_cli(capsys, "hardy-spectrum", "--nu1", "1.5", "--N", "16384", "--L", "200")
    assert code == EXIT_OK
    assert out.strip().endswith("(pass)")


def test_roundtrip(capsys):
    """Forward and inverse transforms agree with the model density."""
    code, data = run_json(capsys, "roundtrip", "--nu1", "1.5", "--N", "65536", "--L", "1000")
    assert code == EXIT_OK
    assert data["report"]["N"] == 65536
    assert data["report"]["shape_gap"] <= 1e-4


# ──────────────────────────────────────────────────────────────
# Output destination and configuration
# ──────────────────────────────────────────────────────────────

def test_out_file(capsys, tmp_path):
    """--out writes the report and leaves stdout empty."""
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "chiral-check", "--nmax", "1", "--format", "json", "--out", str(target))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["subcommand"] == "chiral-check"


def test_text_fallback_flattens_report(capsys):
    """Reports without columns render as field,value CSV."""
    code, out, _ = run_cli(capsys, "hardy-m2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "field,value"
    assert "passed,true" in lines
    assert "params.nu_sum,2" in lines


def test_validate_input():
    """Schema defaults and rejections."""
    config = validate_input({"subcommand": "hardy-m2", "verbose": True})
    assert config.nmax == 3
    assert config.taper == 0.1
    assert config.spectrum_shape() == (2 ** 16, 200.0)
    with pytest.raises(InvalidConfig):
        validate_input({"subcommand": "hardy-m2", "taper": 2.0})
    with pytest.raises(InvalidConfig):
        validate_input({"subcommand": "roundtrip", "size": 8})
    with pytest.raises(InvalidConfig):
        validate_input({"subcommand": "nonsense"})


def test_load_grid(grid_file):
    """Grid files need the exact header and finite coordinates."""
    grid = load_grid(grid_file([(1, 2, 3, 4), (-1, 0.5, 0, 0)]))
    assert list(grid.t) == [1.0, -1.0]
    assert list(grid.zeta2) == [4.0, 0.0]
    with pytest.raises(InvalidGridFile):
        load_grid(grid_file([(1, "nan", 0, 0)], name="nan.csv"))
    with pytest.raises(InvalidGridFile):
        load_grid(grid_file([(1, "x", 0, 0)], name="text.csv"))
    with pytest.raises(InvalidGridFile):
        load_grid(grid_file([], name="empty.csv"))


# ──────────────────────────────────────────────────────────────
# Determinism
# ──────────────────────────────────────────────────────────────

@pytest.mark.parametrize("argv", [
    ("algebra-check", "--nmax", "2"),
    ("n-check", "--nmax", "2"),
    ("dynsym-check", "--nmax", "2"),
    ("chiral-check", "--nmax", "2"),
    ("contract", "--nmax", "2"),
    ("ward-residual", "--family", "meta_final"),
    ("reduced-system",),
    ("w-collapse",),
    ("correlator-table", "--family", "cga"),
    ("properties",),
    ("singularity-demo",),
    ("hardy-m2",),
    ("hardy-spectrum", "--nu1", "1.5", "--N", "16384", "--L", "200"),
    ("roundtrip", "--nu1", "1.5", "--N", "65536", "--L", "1000"),
    ("commutator", "r*dt", "t*dr"),
])
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_reports_are_byte_identical(capsys, argv, fmt):
    """The same configuration twice gives the same bytes."""
    first = run_cli(capsys, *argv, "--format", fmt)
    second = run_cli(capsys, *argv, "--format", fmt)
    assert first[0] in (EXIT_OK, EXIT_FAILURE)
    assert first[:2] == second[:2]
    assert first[1]
