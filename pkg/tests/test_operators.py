import hashlib
from fractions import Fraction
from math import factorial

import pytest

from mouldcalc.arborification import arborify
from mouldcalc.core import LinComb
from mouldcalc.operators import (Coarborification, DiffeoSpec, DiffOperator, FieldSpec, apply_word,
                                 compose_diffeos, diffeo_components, eval_automorphism, exp_field,
                                 field_component, field_components, invert_diffeo, log_diffeo, rho, rho_arbo)
from mouldcalc.series import TruncSeries
from mouldcalc.trees import (B_plus, EMPTY, Forest, enumerate_forests, gl_product, in_ck_plus, leaf,
                             symmetry_factor)
from mouldcalc.words import grade, quasishuffle, unshuffle, words_up_to

F = Fraction
X = TruncSeries.variable(1, 0)


def op1(*terms):
    """One-variable operator from (power of x, number of derivatives, coefficient)."""
    return DiffOperator(1, {((m,), (k,)): F(c) for m, k, c in terms})


def test_field_component_examples():
    spec = FieldSpec([2], {(0, (1,)): 1}, 4)
    assert field_component(spec, (1,)) == op1((2, 1, 1))
    spec2 = FieldSpec([1, 2], {(0, (-1, 2)): 1}, 4)
    assert field_component(spec2, (-1, 2)) == DiffOperator(2, {((0, 2), (1, 0)): 1})
    assert field_component(spec2, (2, -1)).is_zero()


def test_spec_rejects_inadmissible_exponents():
    with pytest.raises(ValueError):
        FieldSpec([1, 2], {(1, (-1, 2)): 1}, 3)
    with pytest.raises(ValueError):
        FieldSpec([1], {}, 0)


def test_diffeo_components_example():
    comps = diffeo_components(DiffeoSpec([2], {(0, (1,)): 1}, 4))
    assert comps[(1,)] == op1((2, 1, 1))
    assert comps[(2,)] == op1((4, 2, F(1, 2)))
    assert set(comps) == {(1,), (2,), (3,), (4,)}
    assert diffeo_components(DiffeoSpec([2], {}, 4)) == {}


def test_diffeo_components_are_the_substitution_automorphism():
    # sum_eta D_eta . g = g o phi for any polynomial g
    spec = DiffeoSpec([2, 3], {(0, (-1, 2)): F(1, 2), (1, (1, 0)): 3, (0, (0, 1)): -1}, 5)
    comps = diffeo_components(spec)
    x, y = TruncSeries.identity(2, 5)
    g = x * y + x ** 3 - y.scale(2)
    total = g
    for D in comps.values():
        total = total + D.apply(g)
    assert total == g.compose(spec.tangent_map(5), 5)


def test_components_are_homogeneous():
    spec = DiffeoSpec([2, 3], {(0, (-1, 2)): 1, (1, (2, -1)): F(1, 2)}, 4)
    for eta, D in diffeo_components(spec).items():
        assert D.homogeneities == {eta}
        for m in [(1, 0), (2, 3), (0, 4)]:
            out = D.apply(TruncSeries.monomial(m))
            assert set(out.terms) <= {tuple(a + b for a, b in zip(m, eta))}


def test_operator_algebra():
    assert op1((2, 1, 1)).apply(X) == X ** 2
    d, x = op1((0, 1, 1)), op1((1, 0, 1))
    assert d @ x == op1((1, 1, 1), (0, 0, 1))
    a = DiffOperator(2, {((2, 0), (0, 1)): 1})
    b = DiffOperator(2, {((0, 3), (1, 0)): 1})
    assert (a @ b).homogeneities == {(1, 2)}
    assert DiffOperator.identity(1) @ d == d


def test_rho_empty_and_order():
    comps = {(1,): op1((2, 1, 1)), (2,): op1((3, 1, 5))}
    assert rho((), comps, 1) == DiffOperator.identity(1)
    # the first letter acts first
    assert rho(((1,), (2,)), comps, 1) == comps[(2,)] @ comps[(1,)]
    assert rho(((1,), (2,)), comps, 1).apply(X) == apply_word(((1,), (2,)), comps, X)


@pytest.mark.parametrize("r", range(1, 7))
def test_power_of_x_squared_d_on_x(r):
    # (x^2 d)^r . x = r! x^(r+1)
    comps = {(1,): op1((2, 1, 1))}
    assert apply_word(((1,),) * r, comps, X) == X.scale(0) + (X ** (r + 1)).scale(factorial(r))


def test_rho_arbo_examples():
    comps = {(1,): op1((2, 1, 1))}
    a = leaf((1,))
    assert rho_arbo(a, comps, 1) == op1((2, 1, 1))
    assert rho_arbo(Forest([a, a]), comps, 1) == op1((4, 2, F(1, 2)))
    assert rho_arbo(EMPTY, comps, 1) == DiffOperator.identity(1)
    spec = FieldSpec([1, 3], {(0, (-1, 2)): 1}, 4)
    ladder = B_plus((-1, 2), [leaf((-1, 2))])
    assert rho_arbo(ladder, field_components(spec), 2).is_zero()


SPEC2 = FieldSpec([1, 2], {(0, (1, 0)): 2, (1, (1, 0)): F(-1, 3), (0, (0, 1)): 5, (1, (0, 1)): F(3, 7),
                           (0, (-1, 2)): F(1, 2), (1, (2, -1)): -4}, 9)
DECOS2 = [(1, 0), (0, 1), (-1, 2), (2, -1)]


def test_order_and_homogeneity():
    co = Coarborification(field_components(SPEC2), 2)
    for f in enumerate_forests(DECOS2, 4):
        op = co.operator(f)
        if op.is_zero():
            continue
        assert op.order == len(f)
        assert op.homogeneities == {f.weight(2)}


def test_coarborification_is_a_hopf_morphism():
    # rho<(F) o rho<(G) = sum_H c_H s_H / (s_F s_G) rho<(H) over the grafting product
    co = Coarborification(field_components(SPEC2), 2)
    small = [f for f in enumerate_forests(DECOS2, 4) if f.size <= 4]
    for f in small:
        for g in small:
            if f.size + g.size > 4:
                continue
            lhs = co.operator(f) @ co.operator(g)
            rhs = DiffOperator(2)
            sfg = symmetry_factor(f) * symmetry_factor(g)
            for h, c in gl_product(f, g).items():
                rhs = rhs + co.operator(h).scale(F(c * symmetry_factor(h), sfg))
            assert lhs == rhs, (f, g)


def _two_products(n):
    x, y = TruncSeries.identity(2)
    return [(x ** 2, y), (x * y, x + y ** 2), (y ** 3, x ** 2 * y)][:n]


def test_field_comould_is_cosymmetral():
    # rho(w).(uv) = sum over the unshuffle of w of (rho(w1).u)(rho(w2).v)
    comps = field_components(SPEC2)
    for w in words_up_to(DECOS2, 3):
        for u, v in _two_products(3):
            lhs = apply_word(w, comps, u * v)
            rhs = TruncSeries.zero(2)
            for (w1, w2), c in unshuffle(w).items():
                rhs = rhs + (apply_word(w1, comps, u) * apply_word(w2, comps, v)).scale(c)
            assert lhs == rhs, w


def test_diffeo_comould_is_cosymmetrel():
    # same with the dual of the quasishuffle: coefficient of w in w1 * w2
    spec = DiffeoSpec([2, 3], {(0, (-1, 2)): F(1, 2), (1, (2, -1)): 3, (0, (1, 0)): -1}, 3)
    comps = diffeo_components(spec)
    letters = list(comps)
    ws = words_up_to(letters, 3)
    for w in ws:
        if len(w) > 2:
            continue
        g = grade(w)
        for u, v in _two_products(2):
            lhs = apply_word(w, comps, u * v)
            rhs = TruncSeries.zero(2)
            for w1 in ws:
                for w2 in ws:
                    if grade(w1) + grade(w2) != g:
                        continue
                    c = quasishuffle(w1, w2).coeff(w)
                    if c:
                        rhs = rhs + (apply_word(w1, comps, u) * apply_word(w2, comps, v)).scale(c)
            assert lhs == rhs, w


def _random_mould(seed):
    def m(w):
        h = int(hashlib.sha256(repr((seed, w)).encode()).hexdigest(), 16) % 201
        return F(h - 100, 17)
    return m


def _factorization(spec, comps_words, comps_forest, letters, decos, mode, order):
    chi = _random_mould(mode)
    words = words_up_to(letters, order - 1)
    lhs = eval_automorphism(chi, words, comps_words, 2, order, "word")
    forests = list(enumerate_forests(decos, order - 1))
    chi_arbo = lambda f: sum((c * chi(w) for w, c in arborify(f, mode).items()), F(0))
    rhs = eval_automorphism(chi_arbo, forests, comps_forest, 2, order, "forest")
    return lhs, rhs


def test_factorization_through_arborification_field():
    decos = [(1, 0), (-1, 2), (2, -1)]
    spec = FieldSpec([1, 2], {(0, (1, 0)): 2, (1, (1, 0)): -1, (0, (-1, 2)): F(1, 2), (1, (2, -1)): 3}, 6)
    comps = field_components(spec)
    lhs, rhs = _factorization(spec, comps, comps, decos, decos, "sh", 6)
    assert lhs == rhs


def test_factorization_through_arborification_diffeo():
    decos = [(1, 0), (-1, 2), (2, -1)]
    spec = DiffeoSpec([2, 3], {(0, (1, 0)): 2, (1, (1, 0)): -1, (0, (-1, 2)): F(1, 2), (1, (2, -1)): 3}, 5)
    words_comps = diffeo_components(spec)
    vertex_comps = field_components(FieldSpec([1, 1], spec.coeffs, 5))
    lhs, rhs = _factorization(spec, words_comps, vertex_comps, list(words_comps), decos, "qsh", 5)
    assert lhs == rhs


def test_letters_of_diffeo_comould_are_singleton_forests():
    spec = DiffeoSpec([2, 3], {(0, (1, 0)): 2, (1, (1, 0)): -1, (0, (-1, 2)): F(1, 2), (1, (2, -1)): 3}, 4)
    comps = diffeo_components(spec)
    co = Coarborification(field_components(FieldSpec([1, 1], spec.coeffs, 4)), 2)
    decos = [(1, 0), (-1, 2), (2, -1)]
    singles = [f for f in enumerate_forests(decos, 4) if all(not t.children for t in f) and f]
    for eta, D in comps.items():
        total = DiffOperator(2)
        for f in singles:
            if f.weight(2) == eta:
                total = total + co.operator(f)
        assert total == D, eta


def test_vanishing_outside_ck_plus():
    coeffs = {(0, (-1, 2)): 3, (1, (2, -1)): F(5, 7), (0, (1, 0)): F(-2, 3), (1, (1, 0)): F(11, 13)}
    co = Coarborification(field_components(FieldSpec([1, 2], coeffs, 9)), 2)
    seen = 0
    # grade-one decorations, so five vertices means grade five
    for f in enumerate_forests([(-1, 2), (2, -1), (1, 0)], 5):
        if in_ck_plus(f):
            continue
        seen += 1
        assert co.operator(f).is_zero(), f
    assert seen > 100


def test_eval_automorphism_examples():
    spec = FieldSpec([2], {(0, (1,)): 1}, 3)
    comps = field_components(spec)
    xi = {(): 1, ((1,),): F(1, 2), ((1,), (1,)): F(1, 8)}
    got = eval_automorphism(lambda w: xi.get(w, 0), words_up_to([(1,)], 2), comps, 1, 3)
    assert got[0] == TruncSeries(1, {(1,): 1, (2,): F(1, 2), (3,): F(1, 4)}, 3)
    eps = lambda w: 1 if w == () else 0
    assert eval_automorphism(eps, words_up_to([(1,)], 2), comps, 1, 3)[0] == X.truncate(3)


def test_group_operations():
    x = TruncSeries.variable(1, 0, 3)
    phi = [x + x ** 2]
    assert compose_diffeos(phi, [x], 3) == phi
    assert compose_diffeos(phi, [x + x ** 3], 3) == [x + x ** 2 + x ** 3]
    inv = invert_diffeo(phi, 3)
    assert inv == [x - x ** 2 + (x ** 3).scale(2)]
    assert compose_diffeos(phi, inv, 3) == [x]
    assert invert_diffeo(inv, 3) == phi


def test_exp_and_log():
    x = TruncSeries.variable(1, 0, 3)
    assert exp_field([x ** 2], 3) == [x + x ** 2 + x ** 3]
    assert exp_field([TruncSeries.zero(1, 3)], 3) == [x]
    x2 = TruncSeries.identity(2, 5)
    X = [x2[0] * x2[1] + x2[1] ** 2, (x2[0] ** 2).scale(F(1, 3))]
    assert log_diffeo(exp_field(X, 5), 5) == [p.truncate(5) for p in X]
