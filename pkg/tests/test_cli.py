import importlib.util
import json
import math
from pathlib import Path

import numpy as np
import pytest

from lagdiff.cli import EXIT_BREAKDOWN, EXIT_NO_CACHE, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, main
from lagdiff.io import parse_matrix_text
from lagdiff.stability import CACHE_ENV, first_breakdown, stability_study

ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return [ln.split(",") for ln in text.splitlines() if ln and not ln.startswith("#")]


@pytest.fixture(scope="module")
def oracle_cache(tmp_path_factory):
    spec = importlib.util.spec_from_file_location("build_oracle_cache", ROOT / "scripts" / "build_oracle_cache.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    directory = tmp_path_factory.mktemp("oracle")
    for npts in (25, 50):
        mod.write_size(directory, "augmented-gauss", npts)
    return directory


class TestNodes:
    def test_hand_case(self, capsys):
        code, out, _ = run(capsys, "nodes", "--family", "augmented-gauss", "--npts", "2")
        assert code == EXIT_OK
        assert out.splitlines()[0].startswith("# laguerre-nodes v1, family=augmented-gauss")
        rows = csv_rows(out)
        assert [float(v) for v in rows[0]] == [0, 0, 1]
        assert float(rows[1][1]) == 1.0
        assert float(rows[1][2]) == pytest.approx(-0.6065306597126334, rel=1e-15)

    def test_bad_npts(self, capsys):
        code, _, err = run(capsys, "nodes", "--npts", "0")
        assert code == EXIT_USAGE and err

    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "nodes", "--npts", "5", "--format", "json")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert {"family", "alpha", "nodes", "coeffs"} <= set(doc)
        assert len(doc["nodes"]) == len(doc["coeffs"]) == 5

    def test_alpha_for_fixed_family(self, capsys):
        assert run(capsys, "nodes", "--family", "gauss-radau", "--npts", "4", "--alpha", "0")[0] == EXIT_USAGE


class TestDifmat:
    def test_second_order_hand_case(self, capsys):
        code, out, _ = run(capsys, "difmat", "--npts", "2", "--order", "2", "--family", "augmented-gauss")
        assert code == EXIT_OK
        meta, m = parse_matrix_text(out)
        assert meta["order"] == "2"
        e = math.exp(0.5)
        np.testing.assert_allclose(m, [[1.25, -e], [1 / e, -0.75]], rtol=1e-15)

    def test_classic_breakdown(self, capsys):
        code, out, err = run(capsys, "difmat", "--npts", "200", "--mode", "classic")
        assert code == EXIT_BREAKDOWN
        report = json.loads(out)
        assert report["breakdown"] is True
        assert report["intermediate"] in ("c", "D")
        assert len(report["index"]) >= 1
        assert "broke down" in err

    def test_classic_small_ok(self, capsys):
        assert run(capsys, "difmat", "--npts", "20", "--mode", "classic")[0] == EXIT_OK

    def test_large_stable(self, capsys, tmp_path):
        path = tmp_path / "d.csv"
        code, _, _ = run(capsys, "difmat", "--npts", "500", "--order", "1", "--out", str(path))
        assert code == EXIT_OK
        _, m = parse_matrix_text(path.read_text())
        assert m.shape == (500, 500) and np.all(np.isfinite(m))

    def test_range_limit_is_usage_error(self, capsys):
        code, _, err = run(capsys, "difmat", "--npts", "500", "--order", "3")
        assert code == EXIT_USAGE
        assert "max safe degree" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["difmat", "--npts", "5", "--order", "0"],
            ["difmat", "--npts", "5", "--order", "2", "--mode", "classic"],
            ["difmat", "--npts", "5", "--precision", "5"],
            ["difmat"],
            ["frobnicate"],
        ],
    )
    def test_usage(self, capsys, argv):
        assert run(capsys, *argv)[0] == EXIT_USAGE

    def test_precision(self, capsys):
        _, out, _ = run(capsys, "difmat", "--npts", "3", "--precision", "6")
        assert all(len(v.split("e")[0].replace("-", "").replace(".", "")) == 6 for v in csv_rows(out)[0])

    def test_json_matches_csv(self, capsys):
        _, a, _ = run(capsys, "difmat", "--npts", "12", "--order", "2")
        _, b, _ = run(capsys, "difmat", "--npts", "12", "--order", "2", "--format", "json")
        np.testing.assert_array_equal(parse_matrix_text(a)[1], np.array(json.loads(b)["entries"]))


class TestSolvers:
    def test_bvp_sweep(self, capsys):
        code, out, _ = run(capsys, "bvp", "--beta", "4.03", "--gamma", "2", "--npts", "40:230:10")
        assert code == EXIT_OK
        rows = csv_rows(out)[1:]
        errs = np.array([float(r[1]) for r in rows])
        assert [int(r[0]) for r in rows] == list(range(40, 231, 10))
        assert errs[-1] <= 1e-12
        assert np.all(errs[1:] <= 10 * errs[:-1])

    def test_bvp_values(self, capsys):
        code, out, _ = run(capsys, "bvp", "--npts", "60", "--values", "--format", "json")
        doc = json.loads(out)
        assert code == EXIT_OK and len(doc["rows"]) == 60
        assert doc["rows"][0]["u"] == 0.0

    def test_schrodinger(self, capsys):
        code, out, _ = run(capsys, "schrodinger", "--beta", "10", "--npts", "200", "--count", "6")
        assert code == EXIT_OK
        rows = csv_rows(out)[1:]
        assert len(rows) == 6
        assert all(float(r[3]) < 1e-10 for r in rows)

    def test_missing_flag(self, capsys):
        code, _, err = run(capsys, "schrodinger")
        assert code == EXIT_USAGE and "usage" in err

    def test_solver_failure(self, capsys):
        # the weight underflows at far nodes when the surface is very thin
        code, _, err = run(capsys, "schrodinger", "--npts", "200", "--a", "0.01", "--count", "2")
        assert code == EXIT_SOLVER
        assert "solver failure" in err

    def test_bad_range(self, capsys):
        assert run(capsys, "bvp", "--npts", "50:10:5")[0] == EXIT_USAGE


class TestStabilityStudy:
    def test_missing_cache(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(CACHE_ENV, str(tmp_path / "nowhere"))
        code, _, err = run(capsys, "stability-study", "--max-n", "30")
        assert code == EXIT_NO_CACHE
        assert "build_oracle_cache.py" in err

    def test_env_cache(self, capsys, oracle_cache, monkeypatch):
        monkeypatch.setenv(CACHE_ENV, str(oracle_cache))
        code, out, _ = run(capsys, "stability-study", "--max-n", "50", "--step", "25", "--format", "json")
        assert code == EXIT_OK
        rows = json.loads(out)["rows"]
        assert [r["npts"] for r in rows] == [25, 50]
        assert all(r["stable_offdiag_max_rel_err"] <= 1e-11 for r in rows)

    def test_breakdowns(self, oracle_cache):
        table = stability_study(400, 10, cache=oracle_cache)
        assert 100 <= first_breakdown(table, "product_finite") <= 160
        assert 360 <= first_breakdown(table, "derivative_finite") <= 400
        col = table.columns.index("stable_offdiag_max_rel_err")
        assert all(r[col] <= 1e-11 for r in table.rows if r[col] is not None)
        assert all(math.isfinite(r[table.columns.index("stable_min_abs_entry")]) for r in table.rows)
