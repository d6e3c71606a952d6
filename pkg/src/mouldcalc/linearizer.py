"""Linearizing characters, normalizing maps and their independent check.

Field mode: for X = X_lin + sum_eta B_eta, the character xi solves
<lambda, ||b||> xi(b) = (xi * u)(b) and psi = sum_b xi(b) rho(b).x satisfies
X_lin.psi_i - lambda_i psi_i = P_i o psi.

Diffeo mode: for the map l o f with f tangent to identity, the character
chi solves chi o sigma = xi_f * chi (words) or chi * xi_f (forests) and
phi = sum_b chi(b) rho(b).x satisfies l o f o phi = phi o l.

Words run over the letters whose component is nonzero; forests over the
positive subalgebra CK+, where only trees act on coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import trees as T
from .alphabet import add, grade as deco_grade, omega, pair_diffeo, pair_field, unit_vector
from .core import Character, Resonance
from .operators import (Coarborification, DiffeoSpec, FieldSpec, SystemSpec, components_for,
                        compose_diffeos, field_component)
from .series import TruncSeries
from .trees import Forest, Tree, as_forest
from .words import deconcat, weight as word_weight


# closed forms on words

def _check(d, eta):
    if d == 0:
        raise Resonance(eta)
    return d


def mould_xi_field(w: Sequence, lam: Sequence):
    """1 / prod_j <lambda, w_j + ... + w_s>."""
    out = Fraction(1)
    for j in range(len(w)):
        eta = word_weight(w[j:])
        out /= _check(pair_field(lam, eta), eta)
    return out


def mould_chi_field(w: Sequence, lam: Sequence):
    """(-1)^s / prod_j <lambda, w_1 + ... + w_j>; the inverse of xi for the shuffle."""
    out = Fraction((-1) ** len(w))
    for j in range(1, len(w) + 1):
        eta = word_weight(w[:j])
        out /= _check(pair_field(lam, eta), eta)
    return out


def mould_chi_diffeo(w: Sequence, l: Sequence):
    """1 / prod_j (l^(w_j + ... + w_s) - 1)."""
    out = Fraction(1)
    for j in range(len(w)):
        eta = word_weight(w[j:])
        out /= _check(pair_diffeo(l, eta) - 1, eta)
    return out


def mould_chi_diffeo_inverse(w: Sequence, l: Sequence):
    """(-1)^s prod_{j<s} l^(w_1 + ... + w_j) / prod_{j<=s} (l^(w_1 + ... + w_j) - 1).

    This is the convolution inverse of `mould_chi_diffeo`.  The head-sum
    multipliers in the numerator do not cancel, unlike in the additive case.
    """
    out = Fraction((-1) ** len(w))
    for j in range(1, len(w) + 1):
        eta = word_weight(w[:j])
        m = pair_diffeo(l, eta)
        out /= _check(m - 1, eta)
        if j < len(w):
            out *= m
    return out


# closed forms on forests

def xi_arbo_field(f, lam: Sequence):
    """prod over vertices v of 1 / <lambda, ||t_v||>."""
    out = Fraction(1)
    for t in T.forest_vertices(as_forest(f)):
        eta = t.weight
        out /= _check(pair_field(lam, eta), eta)
    return out


def chi_arbo_diffeo(f, l: Sequence):
    """prod over vertices v of 1 / (l^||t_v|| - 1)."""
    out = Fraction(1)
    for t in T.forest_vertices(as_forest(f)):
        eta = t.weight
        out /= _check(pair_diffeo(l, eta) - 1, eta)
    return out


# recursive solutions of the character equations

def _word_u(w) -> int:
    return 1 if len(w) == 1 else 0


def _forest_u(f) -> int:
    f = as_forest(f)
    return 1 if len(f) == 1 and not f[0].children else 0


def _word_xi_f(w) -> int:
    return 1 if len(w) <= 1 else 0


def _forest_xi_f(f) -> int:
    return 1 if all(not t.children for t in as_forest(f)) else 0


def _nu_of(spectrum) -> int:
    return len(spectrum)


def solve_character_field(lam: Sequence, basis: str = "word", u: Callable | None = None,
                          inverse: bool = False) -> Character:
    """Character with <lambda,||b||> xi(b) = (xi * u)(b), solved recursively and memoised.

    With `inverse=True` solves <lambda,||b||> chi(b) = -(chi * u)(b) on words and
    -(u * chi)(b) on forests, which gives the convolution inverse.
    """
    lam = tuple(lam)
    nu = _nu_of(lam)
    if basis == "word":
        u = u or _word_u
        memo: dict = {(): Fraction(1)}

        def xi(w):
            w = tuple(w)
            if w in memo:
                return memo[w]
            eta = word_weight(w, nu)
            d = _check(pair_field(lam, eta), eta)
            if inverse:
                rhs = -sum((xi(a) * u(b) for a, b in _splits(w) if b), Fraction(0))
            else:
                rhs = sum((u(a) * xi(b) for a, b in _splits(w) if a), Fraction(0))
            memo[w] = rhs / d
            return memo[w]

        return Character(xi)
    if basis == "forest":
        u = u or _forest_u
        memo_t: dict = {}

        def xi_tree(t: Tree):
            if t in memo_t:
                return memo_t[t]
            eta = t.weight
            d = _check(pair_field(lam, eta), eta)
            rhs = Fraction(0)
            for c in T.admissible_cuts(t):
                if inverse:
                    if c.pruned:
                        rhs -= u(c.pruned) * xi_forest(c.trunk)
                elif c.trunk:
                    rhs += xi_forest(c.pruned) * u(c.trunk)
            memo_t[t] = rhs / d
            return memo_t[t]

        def xi_forest(f):
            out = Fraction(1)
            for t in as_forest(f):
                out *= xi_tree(t)
            return out

        return Character(xi_forest)
    raise ValueError(f"basis must be 'word' or 'forest', got {basis!r}")


def _inverse_word_form(f: Callable) -> Callable:
    memo: dict = {(): Fraction(1)}

    def g(w):
        w = tuple(w)
        if w not in memo:
            memo[w] = -sum((f(a) * g(b) for a, b in _splits(w) if a), Fraction(0))
        return memo[w]

    return g


def _inverse_forest_form(f: Callable) -> Callable:
    # f is a character, so its inverse is f composed with the antipode
    return lambda x: sum((c * f(y) for y, c in T.antipode(as_forest(x)).items()), Fraction(0))


def solve_character_diffeo(l: Sequence, basis: str = "word", xi: Callable | None = None,
                           inverse: bool = False) -> Character:
    """Character with chi o sigma = xi * chi (words) or chi * xi (forests), sigma(b) = l^||b|| b.

    With `inverse=True` returns the convolution inverse theta, from
    theta o sigma = theta * xi^-1 (words) or xi^-1 * theta (forests).
    """
    l = tuple(l)
    nu = _nu_of(l)
    if basis == "word":
        xi = xi or _word_xi_f
        xinv = _inverse_word_form(xi) if inverse else None
        memo: dict = {(): Fraction(1)}

        def chi(w):
            w = tuple(w)
            if w in memo:
                return memo[w]
            eta = word_weight(w, nu)
            d = _check(pair_diffeo(l, eta) - xi(()), eta)
            if inverse:
                rhs = sum((chi(a) * xinv(b) for a, b in _splits(w) if b), Fraction(0))
            else:
                rhs = sum((xi(a) * chi(b) for a, b in _splits(w) if a), Fraction(0))
            memo[w] = rhs / d
            return memo[w]

        return Character(chi)
    if basis == "forest":
        xi = xi or _forest_xi_f
        xinv = _inverse_forest_form(xi) if inverse else None
        memo_t: dict = {}

        def chi_tree(t: Tree):
            if t in memo_t:
                return memo_t[t]
            eta = t.weight
            d = _check(pair_diffeo(l, eta) - xi(T.EMPTY), eta)
            rhs = Fraction(0)
            for c in T.admissible_cuts(t):
                if inverse:
                    if c.pruned:
                        rhs += xinv(c.pruned) * chi_forest(c.trunk)
                elif c.trunk:
                    rhs += chi_forest(c.pruned) * xi(c.trunk)
            memo_t[t] = rhs / d
            return memo_t[t]

        def chi_forest(f):
            out = Fraction(1)
            for t in as_forest(f):
                out *= chi_tree(t)
            return out

        return Character(chi_forest)
    raise ValueError(f"basis must be 'word' or 'forest', got {basis!r}")


def _splits(w):
    for (a, b), _ in deconcat(w).items():
        yield a, b


# results

DIRECTIONS = {
    "field": "X o psi = Dpsi . X_lin  (psi carries the linear field to X)",
    "diffeo": "(l o f) o phi = phi o l  (phi carries the linear map to l o f)",
}


@dataclass
class LinearizationResult:
    mode: str
    basis: str
    order: int
    nu: int
    series: list
    residual: list
    direction: str
    grade_stats: dict = field(default_factory=dict)
    n_terms: int = 0
    tol: float = 0

    def coefficients(self) -> list[tuple[int, tuple, object]]:
        """(i, eta, value) with series_i = x_i (1 + sum value x^eta), i zero-based."""
        out = []
        for i, s in enumerate(self.series):
            e = unit_vector(self.nu, i)
            for m, c in s.terms.items():
                if m == e:
                    continue
                out.append((i, tuple(a - b for a, b in zip(m, e)), c))
        out.sort(key=lambda t: (deco_grade(t[1]), t[0], t[1]))
        return out

    @property
    def residual_zero(self) -> bool:
        return all(r.is_zero(self.tol) for r in self.residual)

    @property
    def residual_min_degree(self) -> int | None:
        degs = [d for r in self.residual
                for d in [min((sum(m) for m, c in r.terms.items() if abs(c) > self.tol), default=None)]
                if d is not None]
        return min(degs, default=None)


def _grade_stats(series: Sequence[TruncSeries]) -> dict:
    stats: dict = {}
    for s in series:
        for m, c in s.terms.items():
            g = sum(m) - 1
            if g >= 1:
                stats[g] = max(stats.get(g, 0), abs(c))
    return dict(sorted(stats.items()))


def _linear_part(spectrum: Sequence, mode: str, nu: int, order: int) -> list[TruncSeries]:
    return [TruncSeries.monomial(unit_vector(nu, i), spectrum[i], order) for i in range(nu)]


def field_residual(spec: FieldSpec, psi: Sequence[TruncSeries], order: int, lam=None) -> list[TruncSeries]:
    """X_lin.psi_i - lambda_i psi_i - P_i o psi, truncated at `order`."""
    lam = spec.lam if lam is None else lam
    P = spec.perturbation(order)
    out = []
    for i in range(spec.nu):
        lhs = TruncSeries(spec.nu, {m: c * (pair_field(lam, m) - lam[i]) for m, c in psi[i].terms.items()},
                          order)
        out.append(lhs - P[i].compose(list(psi), order))
    return out


def diffeo_residual(spec: DiffeoSpec, phi: Sequence[TruncSeries], order: int, l=None) -> list[TruncSeries]:
    """l o f o phi - phi o l, truncated at `order`."""
    l = spec.lam if l is None else l
    nu = spec.nu
    lin = _linear_part(l, "diffeo", nu, order)
    lhs = compose_diffeos(lin, compose_diffeos(spec.tangent_map(order), phi, order), order)
    rhs = compose_diffeos(phi, lin, order)
    return [a - b for a, b in zip(lhs, rhs)]


# summation engines

def _word_sum(character: Callable, components: Mapping, nu: int, order: int):
    """sum over words of grade <= order-1 of chi(w) rho(w).x, words built letter by letter.

    Every word over the alphabet is visited in grade order, so the character
    is evaluated (and any resonance detected) even where rho(w).x vanishes.
    """
    letters = sorted(components, key=lambda e: (deco_grade(e), e))
    x = TruncSeries.identity(nu, order)
    total = [xi for xi in x]
    levels: list[list] = [[((), x)]]
    count = 0
    for g in range(1, order):
        level = []
        for a in letters:
            ga = deco_grade(a)
            if ga > g:
                continue
            E = components[a]
            for u, vals in levels[g - ga]:
                w = u + (a,)
                new = None if vals is None else [E.apply(v) for v in vals]
                if new is not None and not any(v.terms for v in new):
                    new = None
                level.append((w, new))
        level.sort(key=lambda t: t[0])
        for w, vals in level:
            c = character(w)
            count += 1
            if vals is not None and c:
                for i in range(nu):
                    if vals[i].terms:
                        total[i] = total[i] + vals[i].scale(c)
        levels.append(level)
    return total, count


def _forest_sum(character: Callable, components: Mapping, nu: int, order: int):
    """sum over CK+ trees of grade <= order-1 of chi(t) rho<(t).x."""
    coarbo = Coarborification(components, nu)
    total = TruncSeries.identity(nu, order)
    count = 0
    decos = sorted(components, key=lambda e: (deco_grade(e), e))
    for t in T.enumerate_trees(decos, order - 1, plus_only=True):
        c = character(Forest((t,)))
        count += 1
        if not c:
            continue
        vals = coarbo.apply_x(Forest((t,)), order)
        for i in range(nu):
            if vals[i].terms:
                total[i] = total[i] + vals[i].scale(c)
    return total, count


def _prepare(spec: SystemSpec, order, scalar: str):
    N = spec.order if order is None else int(order)
    if N < 1:
        raise ValueError("order must be at least 1")
    if scalar not in ("exact", "diag"):
        raise ValueError(f"scalar must be 'exact' or 'diag', got {scalar!r}")
    spectrum = tuple(float(v) for v in spec.lam) if scalar == "diag" else spec.lam
    return N, spectrum, (1e-9 if scalar == "diag" else 0)


def linearize_field(spec: FieldSpec, basis: str = "word", order: int | None = None,
                    scalar: str = "exact") -> LinearizationResult:
    if spec.mode != "field":
        raise ValueError("linearize_field needs a field spec")
    N, lam, tol = _prepare(spec, order, scalar)
    comps = components_for(spec)
    xi = solve_character_field(lam, basis)
    if basis == "word":
        psi, n = _word_sum(xi, comps, spec.nu, N)
    elif basis == "forest":
        psi, n = _forest_sum(xi, comps, spec.nu, N)
    else:
        raise ValueError(f"basis must be 'word' or 'forest', got {basis!r}")
    res = field_residual(spec, psi, N, lam)
    return LinearizationResult("field", basis, N, spec.nu, psi, res, DIRECTIONS["field"],
                               _grade_stats(psi), n, tol)


def linearize_diffeo(spec: DiffeoSpec, basis: str = "word", order: int | None = None,
                     scalar: str = "exact") -> LinearizationResult:
    if spec.mode != "diffeo":
        raise ValueError("linearize_diffeo needs a diffeo spec")
    N, l, tol = _prepare(spec, order, scalar)
    chi = solve_character_diffeo(l, basis)
    if basis == "word":
        comps = components_for(spec, N - 1)
        phi, n = _word_sum(chi, comps, spec.nu, N)
    elif basis == "forest":
        # CK+ trees over the decorations carrying a nonzero phi^i_eta
        phi, n = _forest_sum(chi, _forest_components(spec), spec.nu, N)
    else:
        raise ValueError(f"basis must be 'word' or 'forest', got {basis!r}")
    res = diffeo_residual(spec, phi, N, l)
    return LinearizationResult("diffeo", basis, N, spec.nu, phi, res, DIRECTIONS["diffeo"],
                               _grade_stats(phi), n, tol)


def _forest_components(spec: DiffeoSpec) -> dict:
    """A vertex decorated by eta acts on x_i through D_eta.x_i = phi^i_eta x^(eta + e_i)."""
    return {eta: field_component(spec, eta) for eta in spec.support}


def linearize(spec: SystemSpec, basis: str = "word", order: int | None = None,
              scalar: str = "exact") -> LinearizationResult:
    if spec.mode == "field":
        return linearize_field(spec, basis, order, scalar)
    return linearize_diffeo(spec, basis, order, scalar)


# independent order-by-order solution

def oracle_linearize(spec: SystemSpec, order: int | None = None) -> list[TruncSeries]:
    """Solve the conjugacy identity degree by degree with series arithmetic only.

    Field: (<lambda,m> - lambda_i) psi_{i,m} = [P_i o psi]_m.
    Diffeo: (l^m / l_i - 1) phi_{i,m} = [(f_i - x_i) o phi]_m.
    A vanishing divisor with a vanishing right-hand side leaves the coefficient at 0.
    """
    N = spec.order if order is None else int(order)
    nu = spec.nu
    lam = spec.lam
    P = spec.perturbation(N)
    sol = TruncSeries.identity(nu, N)
    for d in range(2, N + 1):
        rhs = [p.compose(sol, d).homogeneous_part(d) for p in P]
        new = [s for s in sol]
        for i in range(nu):
            e = unit_vector(nu, i)
            for m, c in sorted(rhs[i].terms.items()):
                eta = tuple(a - b for a, b in zip(m, e))
                if spec.mode == "field":
                    div = pair_field(lam, eta)
                else:
                    div = pair_diffeo(lam, eta) - 1
                if div == 0:
                    raise Resonance(eta)
                new[i] = new[i] + TruncSeries.monomial(m, c / div, N)
        sol = new
    return sol


# growth diagnostics

@dataclass
class GrowthReport:
    mode: str
    spectrum: tuple
    max_grade: int
    decorations: list
    per_grade_max: dict
    fitted: dict
    constant: float
    omega: dict
    k_max: int
    violations: list
    n_forests: int

    def last_grades_nonincreasing(self, count: int = 3) -> bool:
        grades = sorted(self.fitted)[-count:]
        vals = [self.fitted[g] for g in grades]
        return all(a >= b for a, b in zip(vals, vals[1:]))


def counting_bound(s: int, k: int, nu: int) -> float:
    """Upper bound on the number of subtrees in slice k of a forest of grade s."""
    if s < 2 ** k:
        return 0
    return 2 * nu * s / 2 ** k - 1


def growth_report(spec_or_spectrum, max_grade: int, decorations: Iterable | None = None,
                  mode: str | None = None, k_cap: int = 8, slack: float = 1e-9) -> GrowthReport:
    """Float diagnostics of the arborified linearizing mould on CK+ forests.

    For every forest of grade <= max_grade: |M^F| = prod_v 1/|d(||t_v||)| with
    d the small divisor; per-grade maxima and C_g = (max)^(1/g); and the
    slice counts N_k(F) against the counting bound, for every k until half
    of Omega(2^k) drops below the smallest subtree divisor (or k_cap).
    """
    if isinstance(spec_or_spectrum, SystemSpec):
        mode = mode or spec_or_spectrum.mode
        spectrum = tuple(float(v) for v in spec_or_spectrum.lam)
        if decorations is None:
            decorations = spec_or_spectrum.support
    else:
        spectrum = tuple(float(v) for v in spec_or_spectrum)
        mode = mode or "field"
    nu = len(spectrum)
    if decorations is None:
        from .alphabet import H_elements
        decorations = H_elements(nu, 1)
    decorations = sorted({tuple(d) for d in decorations}, key=lambda e: (deco_grade(e), e))

    def div(eta):
        if mode == "field":
            return abs(sum(a * b for a, b in zip(spectrum, eta)))
        return abs(math.prod(a ** b for a, b in zip(spectrum, eta)) - 1)

    trees_all = list(T.enumerate_trees(decorations, max_grade, plus_only=True))
    tree_div = {}
    for t in trees_all:
        for v in T.vertices(t):
            if v not in tree_div:
                tree_div[v] = div(v.weight)
    positive = [d for d in tree_div.values() if d > 0]
    smallest = min(positive, default=0.0)

    omegas = {}
    k = 0
    while True:
        omegas[2 ** k] = omega(spectrum, 2 ** k) if mode == "field" else _omega_diffeo(spectrum, 2 ** k)
        if k >= k_cap or 0.5 * omegas[2 ** k] < smallest:
            break
        k += 1
    k_max = k
    omegas[2 ** (k_max + 1)] = (omega(spectrum, 2 ** (k_max + 1)) if mode == "field"
                                else _omega_diffeo(spectrum, 2 ** (k_max + 1)))

    def slice_counts(t: Tree) -> list:
        counts = [0] * (k_max + 1)
        for v in T.vertices(t):
            p = tree_div[v]
            for kk in range(k_max + 1):
                lo, hi = 0.5 * omegas[2 ** (kk + 1)], 0.5 * omegas[2 ** kk]
                if lo - slack <= p < hi - slack:
                    counts[kk] += 1
        return counts

    tree_counts = {t: slice_counts(t) for t in trees_all}
    tree_mag = {}
    for t in trees_all:
        m = 1.0
        for v in T.vertices(t):
            d = tree_div[v]
            m = math.inf if d == 0 else m / d
        tree_mag[t] = m

    per_grade: dict = {}
    violations = []
    n = 0
    for f in T.enumerate_forests(decorations, max_grade, plus_only=True):
        if not f:
            continue
        n += 1
        s = f.grade
        mag = math.prod(tree_mag[t] for t in f)
        per_grade[s] = max(per_grade.get(s, 0.0), mag)
        if div(f.weight(nu)) == 0:
            continue
        for kk in range(k_max + 1):
            nk = sum(tree_counts[t][kk] for t in f)
            bound = counting_bound(s, kk, nu)
            if nk > bound + 1e-12:
                violations.append({"forest": repr(f), "k": kk, "count": nk, "bound": bound})
    fitted = {g: per_grade[g] ** (1.0 / g) for g in sorted(per_grade)}
    constant = max(fitted.values(), default=0.0)
    return GrowthReport(mode, spectrum, max_grade, decorations, dict(sorted(per_grade.items())), fitted,
                        constant, omegas, k_max, violations, n)


def _omega_diffeo(l: Sequence[float], h: int) -> float:
    import itertools
    best = math.inf
    for n in itertools.product(range(-h, h + 1), repeat=len(l)):
        if sum(n) > h:
            continue
        v = abs(math.prod(a ** b for a, b in zip(l, n)) - 1)
        if 0 < v < best:
            best = v
    return best


def majorant_fit(result: LinearizationResult, B: Callable | Mapping | None = None) -> float:
    """Smallest A with |coeff_eta| <= B_eta A^|eta| over the computed coefficients (0 if none)."""
    best = 0.0
    for _, eta, c in result.coefficients():
        if isinstance(B, Mapping):
            b = B.get(eta, 1)
        elif B is not None:
            b = B(eta)
        else:
            b = 1
        g = deco_grade(eta)
        best = max(best, (abs(float(c)) / float(b)) ** (1.0 / g))
    return best
