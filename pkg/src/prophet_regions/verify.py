"""Acceptance checks, shared by ``prophet-regions verify`` and the test suite.

Each criterion returns a :class:`CriterionResult` made of named sub-checks;
a criterion passes when every sub-check passes and it finishes inside its
time budget.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import boundaries as B
from . import constructions as K
from . import measures as Q
from .comparisons import discount_alpha_study, gap_area, gap_horizontal, gap_vertical
from .oracle import eval_m, eval_u, eval_v, eval_w, region_point
from .special_functions import harmonic, lambert_w0, lambert_wm1


@dataclass
class SubCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list[SubCheck] = field(default_factory=list)
    elapsed: float = 0.0
    budget: Optional[float] = None

    @property
    def in_budget(self) -> bool:
        return self.budget is None or self.elapsed < self.budget

    @property
    def passed(self) -> bool:
        return self.in_budget and all(c.passed for c in self.checks)

    def failures(self) -> list[SubCheck]:
        out = [c for c in self.checks if not c.passed]
        if not self.in_budget:
            out.append(SubCheck("runtime", False, f"{self.elapsed:.2f}s >= {self.budget}s"))
        return out

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"[{status}] criterion {self.number} {self.title}: " \
               f"{sum(c.passed for c in self.checks)}/{len(self.checks)} checks, {self.elapsed:.2f}s"
        bad = self.failures()
        if bad:
            line += "; failed: " + "; ".join(f"{c.name} ({c.detail})" for c in bad)
        return line


class _Recorder:
    def __init__(self, result: CriterionResult):
        self.result = result

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        self.result.checks.append(SubCheck(name, bool(ok), detail))

    def close(self, name: str, got: float, want: float, tol: float) -> None:
        err = abs(got - want)
        self.check(name, err <= tol, f"got {got:.15g}, want {want:.15g}, |err| {err:.3g} > {tol:g}"
                   if err > tol else f"|err| {err:.3g}")


def _run(number: int, title: str, budget: Optional[float], body: Callable[[_Recorder], None]) -> CriterionResult:
    res = CriterionResult(number, title, budget=budget)
    t0 = time.perf_counter()
    body(_Recorder(res))
    res.elapsed = time.perf_counter() - t0
    return res


# -- 1 -------------------------------------------------------------------------

def check_boundaries() -> CriterionResult:
    def body(r: _Recorder) -> None:
        f_i = B.region(B.independent(), B.VM)
        f_g = B.region(B.general(), B.VM)
        h4 = B.region(B.general(4), B.UM)
        r.check("f_I(1/2) == 3/4", B.boundary(f_i, 0.5) == 0.75, f"got {B.boundary(f_i, 0.5)!r}")
        r.close("f_G(1/e) = 2/e", B.boundary(f_g, math.exp(-1.0)), 2.0 * math.exp(-1.0), 1e-12)
        xs = np.linspace(0.0, 1.0, 1001)
        worst = float(np.max(np.abs(B.boundary(h4, xs) - np.minimum(4.0 * xs, 1.0))))
        r.check("h_4(x) = min(4x, 1) on grid", worst == 0.0, f"max |err| {worst:.3g}")
    return _run(1, "boundary values", 1.0, body)


# -- 2 -------------------------------------------------------------------------

def check_areas() -> CriterionResult:
    def body(r: _Recorder) -> None:
        a_i = Q.area_exact(B.region(B.independent(), B.VM))
        a_g = Q.area_exact(B.region(B.general(), B.VM))
        r.check("area C_I = 1/6", a_i == Fraction(1, 6), f"got {a_i}")
        r.check("area C_G = 1/4", a_g == Fraction(1, 4), f"got {a_g}")
        for n, want in [(2, Fraction(1, 6)), (3, Fraction(1, 5)), (4, Fraction(3, 14)),
                        (5, Fraction(2, 9)), (6, Fraction(5, 22))]:
            got = Q.area_exact(B.region(B.general(n), B.VM))
            r.check(f"q_G({n}) = {want}", got == want, f"got {got}")
            r.close(f"q_G({n}) float", Q.area(B.region(B.general(n), B.VM)), float(want), 1e-12)
        worst, where = 0.0, ""
        for desc in B.supported_regions():
            err = abs(Q.area(desc) - Q.area_quadrature(desc))
            if err > worst:
                worst, where = err, desc.label()
        r.check("closed form = quadrature (all regions)", worst <= 1e-9, f"max |err| {worst:.3g} at {where}")
    return _run(2, "areas", 5.0, body)


# -- 3 -------------------------------------------------------------------------

def check_typical() -> CriterionResult:
    def body(r: _Recorder) -> None:
        for label, desc, d, c in [
            ("C_I", B.region(B.independent(), B.VM), 0.1, 1.25),
            ("C_G", B.region(B.general(), B.VM), 4.0 / 27.0, 1.5),
            ("C(I,2) u,m", B.region(B.independent(2), B.UM), 0.1, 1.25),
        ]:
            s = Q.region_stats(desc)
            r.close(f"{label} typical difference", s.typical_difference, d, 1e-12)
            r.close(f"{label} typical ratio", s.typical_ratio, c, 1e-12)
        # closed forms in n against those at n = 2
        n = 2
        r.close("d_I(2)", 2 * (n - 1) * (n + 1) / (3 * (n + 2) * (2 * n + 1)), 0.1, 1e-12)
        r.close("r_I(2)", (n + 1) * (2 * harmonic(n) - harmonic(2 * n) - 0.5) / (n - 1), 1.25, 1e-12)
    return _run(3, "typical statistics", None, body)


# -- 4 -------------------------------------------------------------------------

def _indicator_estimate(mask: np.ndarray) -> Q.Estimate:
    p = float(mask.mean())
    return Q.Estimate(p, math.sqrt(max(p * (1.0 - p), 0.0) / mask.size))


def check_tails(samples: int = 10**6, seed: int = 0, threads: int = 1) -> CriterionResult:
    def body(r: _Recorder) -> None:
        f_i = B.region(B.independent(), B.VM)
        f_g = B.region(B.general(), B.VM)
        cs = np.linspace(1.0, 2.0, 21)
        ds = np.linspace(0.0, 0.25, 21)
        worst = max(abs(Q.tail_ratio(f_i, c) - (2.0 - c) ** 3) for c in cs)
        r.check("C_I ratio = (2-c)^3", worst <= 1e-12, f"max |err| {worst:.3g}")
        worst = max(abs(Q.tail_ratio(f_g, c) - math.exp(2.0 * (1.0 - c))) for c in np.linspace(1.0, 4.0, 31))
        r.check("C_G ratio = e^(2(1-c))", worst <= 1e-12, f"max |err| {worst:.3g}")
        worst = max(abs(Q.tail_difference(f_i, d) - math.sqrt(1 - 4 * d) * (1 - 4 * d)) for d in ds)
        r.check("C_I difference = (1-4d)^(3/2)", worst <= 1e-12, f"max |err| {worst:.3g}")
        for n in (2, 4, 8):
            h = B.region(B.general(n), B.UM)
            worst = max(abs(Q.tail_ratio(h, c) - (n - c) / (c * (n - 1)))
                        for c in np.linspace(1.0, n, 25))
            r.check(f"C(G,{n}) ratio = (n-c)/(c(n-1))", worst <= 1e-12, f"max |err| {worst:.3g}")
            dmax = (n - 1) / n
            worst = max(abs(Q.tail_difference(h, d) - (1 - (d * n / (n - 1)) * (2 - d - d / (n - 1))))
                        for d in np.linspace(0.0, dmax, 25))
            r.check(f"C(G,{n}) difference closed form", worst <= 1e-12, f"max |err| {worst:.3g}")

        # the same probabilities from uniform points of each region
        h4 = B.region(B.general(4), B.UM)
        plan = [
            (f_i, "ratio", (1.25, 1.5, 1.75)),
            (f_i, "diff", (0.05, 0.1, 0.15)),
            (f_g, "ratio", (1.25, 1.5, 2.0)),
            (f_g, "diff", (0.05, 0.15, 0.25)),
            (h4, "ratio", (1.5, 2.0, 3.0)),
            (h4, "diff", (0.1, 0.3, 0.5)),
        ]
        cache: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        for desc, what, params in plan:
            key = desc.label()
            if key not in cache:
                cache[key] = Q.sample_region(desc, samples, seed, threads)
            x, y = cache[key]
            for t in params:
                if what == "ratio":
                    est, exact = _indicator_estimate(y >= t * x), Q.tail_ratio(desc, t)
                else:
                    est, exact = _indicator_estimate(y - x >= t), Q.tail_difference(desc, t)
                z = abs(est.mean - exact) / est.stderr if est.stderr > 0 else 0.0
                r.check(f"MC {key} {what} {t:g}", est.within(exact, 3.0),
                        f"estimate {est.mean:.5f}, exact {exact:.5f}, {z:.2f} SE")
    return _run(4, "tail probabilities", 30.0, body)


# -- 5 -------------------------------------------------------------------------

def check_lambert(points: int = 10**4) -> CriterionResult:
    def body(r: _Recorder) -> None:
        lo = -math.exp(-1.0)
        xm = np.linspace(lo, 0.0, points + 1)[:-1]
        x0 = np.concatenate([np.linspace(lo, 1.0, points // 2), np.logspace(0.0, 6.0, points - points // 2)])

        def worst(fn, xs) -> float:
            return max(abs(w * math.exp(w) - x) / max(1.0, abs(x)) for x in xs for w in (fn(float(x)),))

        e0, em = worst(lambert_w0, x0), worst(lambert_wm1, xm)
        r.check("W_0 residual", e0 <= 1e-10, f"max residual {e0:.3g}")
        r.check("W_-1 residual", em <= 1e-10, f"max residual {em:.3g}")
        r.close("W_-1(-2/e^2) = -2", lambert_wm1(-2.0 * math.exp(-2.0)), -2.0, 1e-12)
    return _run(5, "Lambert W", None, body)


# -- 6 -------------------------------------------------------------------------

def check_comparisons(grid: int = 200) -> CriterionResult:
    def body(r: _Recorder) -> None:
        a = B.region(B.independent(), B.VM)
        b = B.region(B.general(), B.VM)
        vert = gap_vertical(a, b)
        r.close("vertical gap location", vert.location, -lambert_w0(-2.0 * math.exp(-2.0)) / 2.0, 1e-12)
        r.close("vertical gap value", vert.value, 0.162, 1e-3)
        hor = gap_horizontal(a, b)
        r.close("horizontal gap location", hor.location, 0.70, 0.01)
        r.close("horizontal gap value", hor.value, 0.119, 0.01)
        area = gap_area(a, b)
        r.check("area gap == 1/12", area == float(Fraction(1, 12)), f"got {area!r}")
        study = discount_alpha_study(grid)
        p, _, _, diff = study.size_peak
        r.close("equal-parameter peak location", p, 0.45, 0.01)
        r.close("equal-parameter peak value", diff, 0.077, 0.01)
        level, alpha, beta, gap = study.parameter_peak
        r.close("equal-area peak area", level, 0.125, 0.01)
        r.close("equal-area peak alpha", alpha, 0.38, 0.01)
        r.close("equal-area peak beta", beta, 0.83, 0.01)
        r.close("equal-area peak beta - alpha", gap, 0.452, 0.01)
    return _run(6, "environment comparison", None, body)


# -- 7 -------------------------------------------------------------------------

def check_oracle_vs_analytic(grid: int = 50, ns=(2, 3, 4, 8)) -> CriterionResult:
    def body(r: _Recorder) -> None:
        xs = [i / (grid - 1) for i in range(grid)]
        f_i = B.region(B.independent(), B.VM)
        for n in ns:
            fn = B.region(B.independent(n), B.UM)
            hn = B.region(B.general(n), B.UM)
            for label, make, desc, pair in [
                ("f", lambda x: K.iid_bernoulli(n, x), fn, B.UM),
                ("h", lambda x: K.unit_vectors_general(n, x), hn, B.UM),
            ]:
                worst = 0.0
                for x in xs:
                    low, m = region_point(make(x), pair)
                    worst = max(worst, abs(low - x), abs(m - float(B.boundary(desc, x))))
                r.check(f"{label}_{n} attained", worst <= 1e-12, f"max |err| {worst:.3g}")
            s = K.worst_case_u_difference(B.independent(n))
            r.close(f"C(I,{n}) max M-U", eval_m(s) - eval_u(s), Q.max_gap_fn(n), 1e-12)
            s = K.worst_case_u_difference(B.general(n))
            r.close(f"C(G,{n}) max M-U", eval_m(s) - eval_u(s), 1.0 - 1.0 / n, 1e-12)
        worst = 0.0
        for x in xs:
            v, m = region_point(K.statistician_worst_case(x), B.VM)
            worst = max(worst, abs(v - x), abs(m - float(B.boundary(f_i, x))))
        r.check("f_I attained", worst <= 1e-12, f"max |err| {worst:.3g}")
    return _run(7, "oracle versus analytic", 10.0, body)


# -- 8 -------------------------------------------------------------------------

ORDER_TOL = 1e-12


def check_observer_ordering(count: int = 500, pairs: int = 200, seed: int = 0) -> CriterionResult:
    def body(r: _Recorder) -> None:
        rng = np.random.default_rng(seed)
        bad = []
        for k in range(count):
            n = int(rng.integers(2, 6))
            if rng.random() < 0.5:
                seq = K.random_dependent(rng, n, 64)
            else:
                support = max(1, int(64 ** (1.0 / n)))
                seq = K.random_sequence(B.independent(n), rng, support=support)
            u, v, m = eval_u(seq), eval_v(seq), eval_m(seq)
            ok = u <= v + ORDER_TOL and v <= m + ORDER_TOL
            for j in range(1, n):
                w = eval_w(seq, j)
                ok = ok and u <= w + ORDER_TOL and w <= m + ORDER_TOL
            if not ok:
                bad.append(k)
        r.check(f"u <= v <= m and u <= w <= m ({count} sequences)", not bad, f"violations at {bad[:5]}")
        bad = []
        for k in range(pairs):
            seq = K.random_dependent(rng, 2, 64)
            w, m = eval_w(seq, 1), eval_m(seq)
            if not (w <= m + ORDER_TOL and m <= 2 * w - w * w + ORDER_TOL):
                bad.append(k)
        r.check(f"w <= m <= 2w - w^2 ({pairs} two-step sequences)", not bad, f"violations at {bad[:5]}")
    return _run(8, "observer ordering", 30.0, body)


# -- 9 -------------------------------------------------------------------------

def check_limits(n: int = 10**6) -> CriterionResult:
    def body(r: _Recorder) -> None:
        h = B.region(B.general(n), B.UM)
        worst = max(abs(Q.tail_ratio(h, c) - 1.0 / c) for c in np.linspace(1.0, 10.0, 37))
        r.check("ratio tail -> 1/c", worst <= 1e-4, f"max |err| {worst:.3g}")
        worst = max(abs(Q.tail_difference(h, d) - (1.0 - d) ** 2) for d in np.linspace(0.0, 0.99, 34))
        r.check("difference tail -> (1-d)^2", worst <= 1e-4, f"max |err| {worst:.3g}")
    return _run(9, "large-horizon limits", None, body)


SUITES: dict[str, Callable[..., CriterionResult]] = {
    "boundaries": check_boundaries,
    "areas": check_areas,
    "typical": check_typical,
    "tails": check_tails,
    "lambert": check_lambert,
    "comparisons": check_comparisons,
    "oracle-vs-analytic": check_oracle_vs_analytic,
    "observer-ordering": check_observer_ordering,
    "limits": check_limits,
}


def run_all(**options) -> list[CriterionResult]:
    """Run every suite; ``options`` maps suite name to keyword arguments."""
    return [fn(**options.get(name, {})) for name, fn in SUITES.items()]
