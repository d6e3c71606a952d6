from fractions import Fraction

import pytest

from mouldcalc.core import Resonance, convolve
from mouldcalc.linearizer import (chi_arbo_diffeo, counting_bound, growth_report, linearize, linearize_diffeo,
                                  linearize_field, majorant_fit, mould_chi_diffeo, mould_chi_diffeo_inverse,
                                  mould_chi_field, mould_xi_field, oracle_linearize, solve_character_diffeo,
                                  solve_character_field, xi_arbo_field)
from mouldcalc.operators import DiffeoSpec, FieldSpec
from mouldcalc.series import TruncSeries
from mouldcalc.trees import CONNES_KREIMER, EMPTY, antipode as ck_antipode, enumerate_forests
from mouldcalc.words import QUASISHUFFLE, SHUFFLE, antipode_qsh, antipode_sh, words_up_to

F = Fraction
LAM = (F(3), F(17, 5))   # no resonance reachable at grade <= 6
L = (F(2), F(1, 3))
LETTERS = [(1, 0), (0, 1), (-1, 2), (2, -1)]
WORDS6 = words_up_to(LETTERS, 6)
FORESTS5 = [f for f in enumerate_forests(LETTERS, 5) if f.size <= 5]


def _pf(eta, lam=LAM):
    return sum(a * b for a, b in zip(lam, eta))


def test_mould_small_values():
    a, b = (-1, 2), (1, 0)
    assert mould_xi_field((), LAM) == 1
    assert mould_xi_field((a, b), LAM) == 1 / (_pf((0, 2)) * _pf(b))
    assert mould_chi_diffeo(((1,),), (F(2),)) == 1
    assert mould_chi_diffeo((), L) == 1


def _compose_antipode(mould, antipode, w):
    return sum((c * mould(v) for v, c in antipode(w).items()), F(0))


def test_field_inverse_is_xi_after_antipode():
    xi = lambda w: mould_xi_field(w, LAM)
    for w in words_up_to(LETTERS, 4):
        try:
            want = mould_chi_field(w, LAM)
        except Resonance:
            continue
        assert _compose_antipode(xi, antipode_sh, w) == want


def test_diffeo_inverse_is_chi_after_qsh_antipode():
    chi = lambda w: mould_chi_diffeo(w, L)
    for w in words_up_to(LETTERS, 3):
        assert _compose_antipode(chi, antipode_qsh, w) == mould_chi_diffeo_inverse(w, L)


def test_plain_alternating_head_product_is_not_the_diffeo_inverse():
    # the naive analogue of the additive formula misses a factor l^a at length two
    a, b = (1, 0), (0, 1)
    naive = 1 / ((2 - 1) * (F(2, 3) - 1))
    assert mould_chi_diffeo_inverse((a, b), L) == 2 * naive
    chi = lambda w: mould_chi_diffeo(w, L)
    prod = convolve(lambda w: mould_chi_diffeo_inverse(w, L), chi, QUASISHUFFLE.coproduct)
    assert all(prod(w) == (1 if w == () else 0) for w in words_up_to(LETTERS, 4))


def test_resonant_mould_names_weight():
    with pytest.raises(Resonance) as err:
        mould_xi_field(((-1, 2), (2, -1)), (F(1), F(2)))
    assert err.value.weight == (2, -1)


def test_word_solvers_reproduce_closed_forms():
    xi = solve_character_field(LAM, "word")
    chi = solve_character_field(LAM, "word", inverse=True)
    chd = solve_character_diffeo(L, "word")
    for w in WORDS6:
        assert xi(w) == mould_xi_field(w, LAM)
        assert chi(w) == mould_chi_field(w, LAM)
        assert chd(w) == mould_chi_diffeo(w, L)
    inv = solve_character_diffeo(L, "word", inverse=True)
    for w in words_up_to(LETTERS, 4):
        assert inv(w) == mould_chi_diffeo_inverse(w, L)


def test_forest_solvers_reproduce_closed_forms():
    xi = solve_character_field(LAM, "forest")
    chd = solve_character_diffeo(L, "forest")
    for f in FORESTS5:
        assert xi(f) == xi_arbo_field(f, LAM)
        assert chd(f) == chi_arbo_diffeo(f, L)


def test_orientations_are_convolution_inverses():
    for basis, hopf, antipode, samples in (("word", SHUFFLE, antipode_sh, words_up_to(LETTERS, 4)),
                                           ("forest", CONNES_KREIMER, ck_antipode, FORESTS5[:300])):
        xi = solve_character_field(LAM, basis)
        chi = solve_character_field(LAM, basis, inverse=True)
        prod = convolve(xi, chi, hopf.coproduct)
        for b in samples:
            assert prod(b) == hopf.counit(b)
            assert chi(b) == _compose_antipode(xi, antipode, b)
    for basis, hopf, samples in (("word", QUASISHUFFLE, words_up_to(LETTERS, 4)),
                                 ("forest", CONNES_KREIMER, FORESTS5[:300])):
        chi = solve_character_diffeo(L, basis)
        inv = solve_character_diffeo(L, basis, inverse=True)
        prod = convolve(inv, chi, hopf.coproduct)
        assert all(prod(b) == hopf.counit(b) for b in samples)


def test_zero_infinitesimal_gives_counit():
    xi = solve_character_field(LAM, "word", u=lambda w: 0)
    assert xi(()) == 1 and xi(((1, 0),)) == 0
    xi = solve_character_field(LAM, "forest", u=lambda f: 0)
    assert xi(EMPTY) == 1 and all(xi(f) == 0 for f in FORESTS5[1:20])


def test_solver_rejects_unknown_basis():
    with pytest.raises(ValueError):
        solve_character_field(LAM, "tree")


X1 = TruncSeries.variable(1, 0, 3)


@pytest.mark.parametrize("basis", ["word", "forest"])
def test_one_dimensional_field(basis):
    r = linearize_field(FieldSpec([2], {(0, (1,)): 1}, 3), basis)
    assert r.series == [X1 + (X1 ** 2).scale(F(1, 2)) + (X1 ** 3).scale(F(1, 4))]
    assert r.residual_zero and r.residual_min_degree is None
    assert r.coefficients() == [(0, (1,), F(1, 2)), (0, (2,), F(1, 4))]


@pytest.mark.parametrize("basis", ["word", "forest"])
def test_zero_perturbation_gives_identity(basis):
    for spec in (FieldSpec([1, 3], {}, 4), DiffeoSpec([2, 3], {}, 4)):
        r = linearize(spec, basis)
        assert r.series == TruncSeries.identity(2, 4)


# phi coefficients for l = 2, f(x) = x + x^2, order 8
GOLDEN_DIFFEO = [F(1), F(1), F(2, 3), F(1, 3), F(2, 15), F(2, 45), F(4, 315), F(1, 315)]


@pytest.mark.parametrize("basis", ["word", "forest"])
def test_one_dimensional_diffeo_golden(basis):
    r = linearize_diffeo(DiffeoSpec([2], {(0, (1,)): 1}, 8), basis)
    assert [r.series[0].coeff((n,)) for n in range(1, 9)] == GOLDEN_DIFFEO
    assert r.residual_zero


def test_one_dimensional_field_golden_against_hand_recursion():
    from oracles import series_coeffs_field_1d
    spec = FieldSpec([F(5, 2)], {(0, (1,)): F(-3, 4)}, 8)
    want = series_coeffs_field_1d(F(5, 2), F(-3, 4), 8)
    for basis in ("word", "forest"):
        got = linearize_field(spec, basis).series[0]
        assert [got.coeff((n,)) for n in range(1, 9)] == [want[n] for n in range(1, 9)]


SPECS = [
    FieldSpec([F(3, 2)], {(0, (1,)): 1, (0, (2,)): F(-1, 3)}, 8),
    FieldSpec([1, F(1414213, 1000000)], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2), (0, (1, 0)): F(-2, 3)}, 8),
    DiffeoSpec([F(1, 2)], {(0, (1,)): 2, (0, (3,)): 1}, 8),
    DiffeoSpec([2, 3], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2)}, 8),
    DiffeoSpec([F(1, 2), 3], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2), (1, (0, 1)): -1}, 8),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.mode}-nu{s.nu}-{s.lam}")
def test_word_basis_matches_oracle(spec):
    r = linearize(spec, "word")
    assert r.series == oracle_linearize(spec)
    assert r.residual_zero


@pytest.mark.parametrize("spec", SPECS[:1] + SPECS[2:], ids=lambda s: f"{s.mode}-nu{s.nu}-{s.lam}")
def test_forest_basis_matches_oracle(spec):
    r = linearize(spec, "forest")
    assert r.series == oracle_linearize(spec)
    assert r.residual_zero


def test_two_dimensional_field_bases_agree_at_order_four():
    spec = FieldSpec([1, F(1414213, 1000000)], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2)}, 4)
    a, b = linearize(spec, "word"), linearize(spec, "forest")
    assert a.series == b.series and a.residual_zero


def test_oracle_golden_values():
    psi = oracle_linearize(FieldSpec([2], {(0, (1,)): 1}, 3))[0]
    assert psi.coeff((2,)) == F(1, 2) and psi.coeff((3,)) == F(1, 4)
    phi = oracle_linearize(DiffeoSpec([2], {(0, (1,)): 1}, 2))[0]
    assert phi.coeff((2,)) == 1


@pytest.mark.parametrize("basis", ["word", "forest"])
def test_resonant_spec_names_weight(basis):
    spec = FieldSpec([1, 2], {(1, (2, -1)): 1}, 4)
    with pytest.raises(Resonance) as err:
        linearize(spec, basis)
    assert err.value.weight == (2, -1)
    with pytest.raises(Resonance):
        oracle_linearize(spec)
    dspec = DiffeoSpec([2, 4], {(1, (2, -1)): 1}, 4)
    with pytest.raises(Resonance) as err:
        linearize(dspec, basis)
    assert err.value.weight == (2, -1)


WEAK = FieldSpec([5, 2], {(0, (-1, 2)): 1, (0, (-1, 3)): F(1, 2), (1, (2, -1)): 1, (1, (1, 0)): F(-1, 3)}, 6)


def test_weak_resonance_fails_on_words_only():
    with pytest.raises(Resonance) as err:
        linearize(WEAK, "word")
    assert err.value.weight == (-2, 5)
    assert _pf((-2, 5), WEAK.lam) == 0
    r = linearize(WEAK, "forest")
    assert r.residual_zero
    assert r.series == oracle_linearize(WEAK)


def test_diag_scalar_mode():
    spec = FieldSpec([2], {(0, (1,)): 1}, 5)
    r = linearize(spec, "word", scalar="diag")
    exact = linearize(spec, "word")
    assert r.residual_zero
    for n in range(1, 6):
        assert r.series[0].coeff((n,)) == pytest.approx(float(exact.series[0].coeff((n,))))
    with pytest.raises(ValueError):
        linearize(spec, scalar="fast")


def test_majorant_fit():
    r = linearize_field(FieldSpec([2], {(0, (1,)): 1}, 3))
    assert majorant_fit(r) == pytest.approx(0.5)
    ident = linearize_field(FieldSpec([2], {}, 3))
    assert majorant_fit(ident) == 0
    # a profile of 2 on grade one doubles that coefficient's allowance
    assert majorant_fit(r, {(1,): 2, (2,): 1}) == pytest.approx(0.5)
    assert majorant_fit(r, lambda eta: 4 ** sum(eta)) == pytest.approx(0.125)


def test_counting_bound_branches():
    assert counting_bound(3, 2, 2) == 0
    assert counting_bound(8, 2, 2) == 2 * 2 * 8 / 4 - 1


def test_growth_one_dimensional():
    rep = growth_report([2], 6, decorations=[(1,), (2,)])
    assert rep.violations == []
    assert rep.constant <= 1
    assert rep.last_grades_nonincreasing()


def test_growth_report_from_spec():
    rep = growth_report(DiffeoSpec([2, 3], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2)}, 4), 4)
    assert rep.mode == "diffeo" and rep.violations == []
    assert rep.n_forests > 0
