from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mouldcalc.series import TruncSeries, compose_maps

N = 5
coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)
mono = st.tuples(st.integers(0, 3), st.integers(0, 3))
series = st.dictionaries(mono, coef, max_size=5).map(lambda d: TruncSeries(2, d, N))
# series without constant term, usable as substitutions
maps_ = st.dictionaries(mono.filter(lambda m: sum(m) >= 1), coef, max_size=4).map(lambda d: TruncSeries(2, d, N))


def test_truncation_drops_high_degrees():
    x = TruncSeries.variable(1, 0, 3)
    assert (x ** 4).terms == {}
    assert (x + x ** 2) * (x + x ** 2) == TruncSeries(1, {(2,): 1, (3,): 2}, 3)


def test_zero_coefficients_are_not_stored():
    s = TruncSeries(1, {(1,): 1, (2,): 0})
    assert s.terms == {(1,): 1}
    assert (s - s).terms == {}


def test_rejects_negative_exponents():
    with pytest.raises(ValueError):
        TruncSeries(2, {(-1, 2): 1})


@settings(max_examples=40)
@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@settings(max_examples=30, deadline=None)
@given(series, maps_, maps_)
def test_composition_is_a_ring_morphism(a, u, v):
    subs = [u, v]
    sq = (a * a).compose(subs, N)
    assert sq == a.compose(subs, N) * a.compose(subs, N)


@settings(max_examples=20, deadline=None)
@given(maps_, maps_, maps_, maps_)
def test_map_composition_associative(p1, p2, q1, q2):
    x = TruncSeries.identity(2, N)
    phi = [x[0] + p1, x[1] + p2]
    psi = [x[0] + q1, x[1] + q2]
    left = compose_maps(compose_maps(phi, psi, N), phi, N)
    right = compose_maps(phi, compose_maps(psi, phi, N), N)
    assert left == right


def test_derivative_and_leibniz():
    x, y = TruncSeries.identity(2)
    f = x ** 2 * y + y.scale(3)
    assert f.derivative(0) == (x * y).scale(2)
    assert f.derivative(1) == x ** 2 + TruncSeries(2, {(0, 0): 3})
    g = x * y ** 3
    assert (f * g).derivative(0) == f.derivative(0) * g + f * g.derivative(0)


def test_accessors():
    s = TruncSeries(1, {(1,): Fraction(1, 2), (3,): 2}, 4)
    assert s.coeff((3,)) == 2 and s.coeff((2,)) == 0
    assert s.min_degree() == 1
    assert s.homogeneous_part(3).terms == {(3,): 2}
    assert TruncSeries(1, {(1,): 1e-12}).is_zero(tol=1e-9)
    assert TruncSeries.zero(1).min_degree() is None


def test_substitution_needs_zero_constant_term():
    with pytest.raises(ValueError):
        TruncSeries.variable(1, 0).compose([TruncSeries(1, {(0,): 1})], 3)
