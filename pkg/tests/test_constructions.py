import math

import numpy as np
import pytest

from prophet_regions import boundaries as B
from prophet_regions import constructions as K
from prophet_regions import measures as Q
from prophet_regions.errors import DomainError, UnsupportedRegion
from prophet_regions.oracle import eval_m, eval_u, eval_v, eval_w, region_point

GRID = np.linspace(0.0, 1.0, 50)
NS = (2, 3, 4, 8)


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


class TestExamples:
    def test_iid_bernoulli(self):
        assert region_point(K.iid_bernoulli(2, 0.5), B.UM) == (0.5, 0.75)
        assert region_point(K.iid_bernoulli(4, 0.0), B.UM) == (0.0, 0.0)
        u, m = region_point(K.iid_bernoulli(4, 0.3), B.UM)
        assert u == 0.3 and m == pytest.approx(0.7599, abs=1e-15)

    def test_dilated(self):
        x = 0.4
        assert K.dilated_bernoulli(3, x, 1.0).atoms == K.iid_bernoulli(3, x).atoms
        assert region_point(K.dilated_bernoulli(3, x, 0.0), B.UM) == pytest.approx((x, x), abs=1e-16)
        u, m = region_point(K.dilated_bernoulli(3, x, 0.5), B.UM)
        assert u == pytest.approx(0.4, abs=1e-15)
        assert 0.4 <= m <= 1 - 0.6 ** 3

    def test_unit_vectors(self):
        assert region_point(K.unit_vectors_general(4, 0.25), B.UM) == (0.25, 1.0)
        u, m = region_point(K.unit_vectors_general(5, 0.1), B.UM)
        assert u == 0.1 and m == pytest.approx(0.5, abs=1e-15)
        assert region_point(K.unit_vectors_general(4, 0.5, 0.0), B.UM) == (0.5, 0.5)

    def test_worst_case(self):
        s = K.worst_case_u_difference(B.independent(2))
        assert s.marginals[0] == ((0.5, 0.0), (0.5, 1.0))
        assert eval_m(s) - eval_u(s) == 0.25
        s = K.worst_case_u_difference(B.general(4))
        assert eval_m(s) - eval_u(s) == 0.75
        s = K.worst_case_u_difference(B.independent(4))
        assert eval_m(s) - eval_u(s) == pytest.approx(4 ** (-1 / 3) - 4 ** (-4 / 3), abs=1e-15)

    def test_statistician(self):
        assert region_point(K.statistician_worst_case(0.5), B.VM) == (0.5, 0.75)
        assert region_point(K.statistician_worst_case(0.0), B.VM) == (0.0, 0.0)
        assert region_point(K.statistician_worst_case(1.0), B.VM) == (1.0, 1.0)


@pytest.mark.parametrize("n", NS)
def test_boundary_attainment(n):
    fn = B.region(B.independent(n), B.UM)
    hn = B.region(B.general(n), B.UM)
    for x in GRID:
        u, m = region_point(K.iid_bernoulli(n, x), B.UM)
        assert close(u, x) and close(m, float(B.boundary(fn, x)))
        u, m = region_point(K.unit_vectors_general(n, x), B.UM)
        assert close(u, x) and close(m, float(B.boundary(hn, x)))
        # the dilated family at lambda = 1 sits on the same curve
        u, m = region_point(K.dilated_bernoulli(n, x, 1.0), B.UM) if x > 0 else (0.0, 0.0)
        assert close(u, x) and close(m, float(B.boundary(fn, x)))


def test_statistician_attains_f_i():
    f_i = B.region(B.independent(), B.VM)
    w2 = B.region(B.general(2), B.WM)
    for x in GRID:
        s = K.statistician_worst_case(x)
        v, m = region_point(s, B.VM)
        assert close(v, x) and close(m, float(B.boundary(f_i, x)))
        w, m = region_point(s, B.WM)
        assert close(w, x) and close(m, float(B.boundary(w2, x)))


@pytest.mark.parametrize("beta", [0.0, 0.2, 0.5, 0.83, 1.0])
def test_discounted_extremal(beta):
    d = B.region(B.discounted(beta), B.VM)
    for x in GRID:
        s = K.discounted_extremal(x, beta)
        # the second value carries the discount
        assert max(v for _, v in s.marginals[1]) <= beta + 1e-15
        v, m = region_point(s, B.VM)
        assert close(v, x) and close(m, float(B.boundary(d, x)))


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.7, 1.0])
def test_alpha_extremal(alpha):
    d = B.region(B.alpha_bounded(alpha), B.VM)
    for x in GRID:
        s = K.alpha_extremal(x, alpha)
        assert max(v for _, v in s.marginals[0]) <= alpha + 1e-15
        v, m = region_point(s, B.VM)
        assert close(v, x) and close(m, float(B.boundary(d, x)))


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("x", [0.05, 0.2, 0.5, 0.9])
def test_interior_sweep(n, x):
    lams = np.linspace(0.0, 1.0, 41)
    fn = float(B.boundary(B.region(B.independent(n), B.UM), x))
    hn = float(B.boundary(B.region(B.general(n), B.UM), x))
    for make, top in ((K.dilated_bernoulli, fn), (K.unit_vectors_general, hn)):
        ms = []
        for lam in lams:
            u, m = region_point(make(n, x, lam), B.UM)
            assert close(u, x, 1e-15)
            ms.append(m)
        assert all(b >= a - 1e-15 for a, b in zip(ms, ms[1:]))
        assert close(ms[0], x) and close(ms[-1], top)


def _member_envs():
    yield B.region(B.independent(3), B.UM), B.independent(3)
    yield B.region(B.independent(5), B.UM), B.independent(5)
    yield B.region(B.general(3), B.UM), B.general(3)
    yield B.region(B.general(4), B.VM), B.general(4)
    yield B.region(B.general(4), B.UM), B.general(4)
    yield B.region(B.general(2), B.WM), B.general(2)
    yield B.region(B.independent(), B.VM), B.independent(4)
    yield B.region(B.independent(), B.VM), B.iid(3)
    yield B.region(B.general(), B.VM), B.general(5)
    yield B.region(B.discounted(0.6), B.VM), B.discounted(0.6, 2)
    yield B.region(B.discounted(0.3), B.VM), B.discounted(0.3, 2)
    yield B.region(B.alpha_bounded(0.4), B.VM), B.alpha_bounded(0.4)


@pytest.mark.parametrize("desc,env", list(_member_envs()), ids=lambda v: getattr(v, "label", lambda: "")())
def test_random_members_inside_region(desc, env):
    rng = np.random.default_rng(2024)
    for _ in range(200):
        s = K.random_sequence(env, rng)
        assert B.contains(desc, region_point(s, desc.pair), tol=1e-12)


def test_random_members_respect_environment():
    rng = np.random.default_rng(1)
    s = K.random_sequence(B.iid(4), rng)
    assert len(set(s.marginals)) == 1
    s = K.random_sequence(B.discounted(0.5, 3), rng)
    assert max(v for _, v in s.marginals[2]) <= 0.25
    s = K.random_sequence(B.general(3), rng)
    assert not s.independent
    with pytest.raises(DomainError):
        K.random_sequence(B.general(), rng)
    assert K.random_sequence(B.general(), rng, n=3).n == 3


def test_errors():
    for bad in (-0.1, 1.1):
        with pytest.raises(DomainError):
            K.iid_bernoulli(3, bad)
        with pytest.raises(DomainError):
            K.statistician_worst_case(bad)
    with pytest.raises(DomainError):
        K.iid_bernoulli(1, 0.5)
    with pytest.raises(DomainError):
        K.dilated_bernoulli(3, 0.0, 0.0)
    with pytest.raises(UnsupportedRegion):
        K.worst_case_u_difference(B.general())
    with pytest.raises(UnsupportedRegion):
        K.worst_case_u_difference(B.discounted(0.5, 3))


@pytest.mark.parametrize("n", [2, 3, 4, 8, 12])
def test_worst_case_gaps(n):
    s = K.worst_case_u_difference(B.independent(n))
    assert close(eval_m(s) - eval_u(s), Q.max_gap_fn(n))
    s = K.worst_case_u_difference(B.general(n))
    assert close(eval_m(s) - eval_u(s), 1 - 1 / n)


def test_probability_sums_exact_where_possible():
    s = K.unit_vectors_general(4, 0.25)
    assert math.fsum(p for p, _ in s.atoms) == 1.0
    for x in GRID:
        s = K.unit_vectors_general(5, x, 0.3)
        assert abs(math.fsum(p for p, _ in s.atoms) - 1.0) <= 1e-12
