import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prophet_regions.constructions import iid_bernoulli, random_dependent, unit_vectors_general
from prophet_regions.errors import SequenceError
from prophet_regions.sequences import ATOM_CAP, DiscreteSequence


def test_product_expansion():
    s = DiscreteSequence.from_marginals([[(0.5, 0.0), (0.5, 1.0)], [(0.25, 0.2), (0.75, 0.6)]])
    assert s.independent and s.atom_count == 4
    probs = {vals: p for p, vals in s.atoms}
    assert probs[(1.0, 0.6)] == 0.375
    assert s.means == pytest.approx((0.5, 0.5), abs=1e-16)


def test_marginals_merge_duplicates_and_drop_zero():
    s = DiscreteSequence.from_marginals([[(0.25, 0.5), (0.25, 0.5), (0.5, 1.0), (0.0, 0.3)],
                                         [(1.0, 0.0)]])
    assert s.marginals[0] == ((0.5, 0.5), (0.5, 1.0))


def test_constant():
    s = DiscreteSequence.constant(3, 0.2)
    assert s.atoms == ((1.0, (0.2, 0.2, 0.2)),)


@pytest.mark.parametrize("atoms", [
    [(0.5, (0.0, 1.0)), (0.4, (1.0, 0.0))],        # mass 0.9
    [(1.0, (0.0, 1.5))],                           # value out of range
    [(-0.1, (0.0, 0.0)), (1.1, (0.0, 0.0))],       # negative mass
    [(1.0, (0.0,))],                               # wrong arity
    [(0.0, (0.0, 0.0))],                           # nothing with positive mass
])
def test_invalid_atoms(atoms):
    with pytest.raises(SequenceError):
        DiscreteSequence(2, atoms=atoms)


def test_constructor_arguments():
    with pytest.raises(SequenceError):
        DiscreteSequence(2)
    with pytest.raises(SequenceError):
        DiscreteSequence(0, atoms=[(1.0, ())])
    with pytest.raises(SequenceError):
        DiscreteSequence(2, marginals=[[(1.0, 0.0)]])


def test_atom_cap():
    s = iid_bernoulli(21, 0.5)
    assert s.atom_count == 2 ** 21 > ATOM_CAP
    with pytest.raises(SequenceError):
        s.atoms


def test_text_round_trip():
    for s in (unit_vectors_general(4, 0.1, 0.5), random_dependent(np.random.default_rng(3), 4)):
        assert DiscreteSequence.from_text(s.to_text()) == s


def test_independent_round_trip():
    # marginals are rebuilt by summing atom weights, so agreement is up to rounding
    s = iid_bernoulli(3, 0.3)
    back = DiscreteSequence.from_text(s.to_text())
    assert back.independent
    for (p, v), (q, w) in zip(back.atoms, s.atoms):
        assert v == w
        assert p == pytest.approx(q, abs=1e-15)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_round_trip_property(seed, n):
    s = random_dependent(np.random.default_rng(seed), n, 16)
    assert DiscreteSequence.from_text(s.to_text()) == s


def test_text_comments_and_format():
    text = "# made by hand\nn 2 independent 0\n0.5 0 1\n# mid comment\n0.5 1 0\n"
    s = DiscreteSequence.from_text(text)
    assert s.n == 2 and s.atom_count == 2
    assert s.to_text().splitlines()[0] == "n 2 independent 0"


@pytest.mark.parametrize("text", [
    "",
    "garbage\n",
    "n 2 independent 2\n1 0 0\n",
    "n two independent 0\n1 0 0\n",
    "n 2 independent 0\n1 0 x\n",
    "n 2 independent 0\n0.5 0 0\n",
    "n 2 independent 0\n",
    # marked independent but correlated
    "n 2 independent 1\n0.5 0 0\n0.5 1 1\n",
])
def test_malformed_text(text):
    with pytest.raises(SequenceError):
        DiscreteSequence.from_text(text)


def test_independent_flag_with_product_law():
    text = "n 2 independent 1\n0.25 0 0\n0.25 0 1\n0.25 1 0\n0.25 1 1\n"
    s = DiscreteSequence.from_text(text)
    assert s.independent
    assert s.marginals == (((0.5, 0.0), (0.5, 1.0)), ((0.5, 0.0), (0.5, 1.0)))


def test_dependent_view():
    s = iid_bernoulli(2, 0.5)
    d = s.dependent_view()
    assert not d.independent and d.atoms == s.atoms
