import io
import math
import subprocess
import sys

import pytest

from prophet_regions.cli import main, parse_env, parse_region
from prophet_regions import boundaries as B


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def rows(text):
    return [ln.split(",") for ln in text.splitlines() if not ln.startswith("#")]


class TestBoundary:
    def test_general_u(self):
        code, out = run("boundary", "--env", "general", "--pair", "u,m", "--n", "4", "--points", "5")
        assert code == 0
        assert out.startswith("# prophet-regions boundary")
        assert rows(out) == [["x", "boundary"], ["0", "0"], ["0.25", "1"], ["0.5", "1"],
                             ["0.75", "1"], ["1", "1"]]

    def test_independent_v(self):
        _, out = run("boundary", "--env", "independent", "--pair", "v,m", "--points", "3")
        assert rows(out)[1:] == [["0", "0"], ["0.5", "0.75"], ["1", "1"]]

    def test_columns(self):
        _, out = run("boundary", "--env", "general", "--pair", "u,m", "--points", "3",
                     "--columns", "boundary,inverse,diagonal")
        assert rows(out)[0] == ["x", "boundary", "inverse", "diagonal"]
        assert rows(out)[2] == ["0.5", "1", "unsupported", "0.5"]

    def test_bad_env(self):
        code, _ = run("boundary", "--env", "bogus", "--pair", "v,m")
        assert code == 2

    def test_unsupported_combination(self):
        code, _ = run("boundary", "--env", "iid", "--pair", "u,m", "--n", "3")
        assert code == 2

    def test_argparse_errors_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["boundary", "--env", "general", "--points", "1"], out=io.StringIO())
        assert exc.value.code == 2


class TestStats:
    def test_general(self):
        _, out = run("stats", "--env", "general", "--pair", "v,m")
        head, vals = rows(out)
        rec = dict(zip(head, vals))
        assert float(rec["area"]) == 0.25
        assert float(rec["typical_difference"]) == pytest.approx(4 / 27, abs=1e-15)
        assert float(rec["typical_ratio"]) == 1.5
        assert rec["max_ratio"] == "unbounded"

    def test_independent(self):
        _, out = run("stats", "--env", "indep", "--pair", "v,m")
        vals = [float(v) for v in rows(out)[1]]
        assert vals[:3] == [pytest.approx(1 / 6), pytest.approx(0.1), 1.25]

    def test_iid_degenerate(self):
        _, out = run("stats", "--env", "iid", "--pair", "v,m")
        assert rows(out)[1][:3] == ["0", "degenerate", "degenerate"]

    def test_divergent(self):
        _, out = run("stats", "--env", "general", "--pair", "u,m")
        assert rows(out)[1][2] == "divergent"


class TestTail:
    def test_sweep(self):
        _, out = run("tail", "--env", "independent", "--pair", "v,m", "--ratio",
                     "--from", "1", "--to", "2", "--points", "3")
        assert rows(out) == [["c", "probability"], ["1", "1"], ["1.5", "0.125"], ["2", "0"]]

    def test_at(self):
        _, out = run("tail", "--env", "general", "--pair", "u,m", "--n", "4", "--diff", "--at", "0")
        assert rows(out)[1] == ["0", "1"]
        _, out = run("tail", "--env", "general", "--pair", "v,m", "--ratio", "--at", "2")
        assert float(rows(out)[1][1]) == pytest.approx(math.exp(-2), abs=1e-15)

    def test_needs_grid(self):
        assert run("tail", "--env", "general", "--ratio")[0] == 2

    def test_domain(self):
        assert run("tail", "--env", "general", "--ratio", "--at", "0.5")[0] == 2


class TestCompare:
    def test_environments(self):
        code, out = run("compare", "--a", "independent:v,m", "--b", "general:v,m")
        assert code == 0
        r = {row[0]: row[1:] for row in rows(out)[1:]}
        assert float(r["vertical"][0]) == pytest.approx(0.2032, abs=1e-4)
        assert float(r["vertical"][1]) == pytest.approx(0.162, abs=1e-3)
        assert float(r["horizontal"][0]) == pytest.approx(0.70, abs=0.01)
        assert float(r["horizontal"][1]) == pytest.approx(0.119, abs=0.01)
        assert float(r["area"][1]) == 1 / 12

    def test_same_region(self):
        _, out = run("compare", "--a", "general@4:u,m", "--b", "general@4:u,m")
        for row in rows(out)[1:]:
            assert all(float(v) == 0.0 for v in row[1:] if v)

    def test_study(self):
        _, out = run("compare", "--discount-alpha-study")
        r = {row[0]: [float(v) for v in row[1:]] for row in rows(out)[1:]}
        p, _, _, diff = r["equal_parameter_peak"]
        assert (p, diff) == (pytest.approx(0.45, abs=0.01), pytest.approx(0.077, abs=0.001))
        level, a, b, gap = r["equal_area_peak"]
        assert level == pytest.approx(0.125, abs=0.001) and gap == pytest.approx(0.452, abs=0.001)

    def test_dominance_error(self):
        assert run("compare", "--a", "general:v,m", "--b", "independent:v,m")[0] == 2

    def test_missing_regions(self):
        assert run("compare", "--a", "general:v,m")[0] == 2


class TestConstructEval:
    def test_construct_files(self, tmp_path):
        code, out = run("construct", "iid-bernoulli", "--n", "2", "--x", "0.5")
        assert code == 0
        body = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert body[0] == "n 2 independent 1" and len(body) == 5
        _, out = run("construct", "unit-vectors", "--n", "4", "--x", "0.25")
        body = [ln for ln in out.splitlines() if not ln.startswith("#")]
        assert body[0] == "n 4 independent 0" and len(body) == 5
        _, worst = run("construct", "worst-u-diff", "--env", "general", "--n", "4")
        assert worst.splitlines()[1:] == out.splitlines()[1:]

    def test_eval_pair(self, tmp_path):
        path = tmp_path / "uv.txt"
        path.write_text(run("construct", "unit-vectors", "--n", "4", "--x", "0.25")[1])
        code, out = run("eval", str(path), "--pair", "u,m")
        assert code == 0
        assert rows(out)[1:] == [["u", "0.25"], ["m", "1"]]

    def test_eval_all_levels(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text(run("construct", "statistician", "--x", "0.5")[1])
        _, out = run("eval", str(path), "--j", "1")
        r = dict(rows(out)[1:])
        assert (float(r["u"]), float(r["v"]), float(r["m"]), float(r["w"])) == (0.5, 0.5, 0.75, 0.5)

    def test_eval_monte_carlo_reproducible(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text(run("construct", "iid-bernoulli", "--n", "3", "--x", "0.3")[1])
        a = run("eval", str(path), "--mc", "200000", "--seed", "7")[1]
        b = run("eval", str(path), "--mc", "200000", "--seed", "7")[1]
        c = run("eval", str(path), "--mc", "200000", "--seed", "7", "--threads", "3")[1]
        assert a == b
        assert a.splitlines()[1:] == c.splitlines()[1:]
        r = {row[0]: row[1:] for row in rows(a)[1:]}
        exact, est, se = (float(v) for v in r["m"])
        assert abs(exact - est) <= 4 * se

    def test_eval_stdin(self, monkeypatch):
        text = run("construct", "unit-vectors", "--n", "3", "--x", "0.5")[1]
        monkeypatch.setattr(sys, "stdin", io.StringIO(text))
        code, out = run("eval", "-", "--pair", "v,m")
        assert code == 0 and rows(out)[1][0] == "v"

    def test_random_construct(self):
        a = run("construct", "random", "--env", "general", "--n", "3", "--seed", "5")[1]
        b = run("construct", "random", "--env", "general", "--n", "3", "--seed", "5")[1]
        assert a == b

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("n 2 independent 0\n0.5 0 0\n")
        assert run("eval", str(path))[0] == 2
        assert run("eval", str(tmp_path / "missing.txt"))[0] == 2

    def test_missing_flags(self):
        assert run("construct", "iid-bernoulli", "--n", "3")[0] == 2
        assert run("construct", "worst-u-diff", "--env", "disc:0.5", "--n", "3")[0] == 2


class TestVerify:
    def test_pass(self):
        code, out = run("verify", "boundaries")
        assert code == 0 and "[PASS]" in out

    def test_oracle_suite(self):
        code, _ = run("verify", "oracle-vs-analytic", "--grid", "50")
        assert code == 0

    def test_failure_exit_code(self):
        # the comparison suite contains the sub-check that misses its tolerance
        code, out = run("verify", "comparisons")
        assert code == 1 and "[FAIL]" in out


def test_deterministic_output():
    argv = ("boundary", "--env", "disc:0.4", "--pair", "v,m", "--points", "50", "--columns", "boundary,inverse")
    assert run(*argv)[1] == run(*argv)[1]


def test_tags():
    assert parse_env("disc:0.5") == B.discounted(0.5)
    assert parse_env("alpha2:0.3") == B.alpha_bounded(0.3)
    assert parse_env("general@4") == B.general(4)
    assert parse_region("indep@3:u,m") == B.region(B.independent(3), B.UM)
    assert parse_region("disc:0.5:v,m") == B.region(B.discounted(0.5), B.VM)
    for bad in ("disc", "alpha2:0.2@3", "general@x"):
        with pytest.raises(ValueError):
            parse_env(bad)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "prophet_regions", "boundary", "--env", "general",
                          "--pair", "u,m", "--n", "2", "--points", "3"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1] == "1,1"
    res = subprocess.run([sys.executable, "-m", "prophet_regions", "stats", "--env", "nope"],
                         capture_output=True, text=True)
    assert res.returncode == 2
