"""Polynomial differential operators, homogeneous components and comoulds.

A `DiffOperator` is a finite sum of normal-ordered terms c x^m d^k, stored
as {(m, k): c} with m, k tuples of nonnegative ints.  Composition is done by
the Leibniz rule, optionally dropping terms of large homogeneity |m| - |k|.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .alphabet import Spectrum, add, grade as deco_grade, in_H_i, unit_vector
from .core import to_scalar
from .series import TruncSeries, compose_maps
from .trees import Forest, Tree, as_forest


def falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def _mfalling(n: Sequence[int], k: Sequence[int]) -> int:
    out = 1
    for a, b in zip(n, k):
        out *= falling(a, b)
        if not out:
            return 0
    return out


def _mbinom(k: Sequence[int], j: Sequence[int]) -> int:
    out = 1
    for a, b in zip(k, j):
        out *= comb(a, b)
    return out


class DiffOperator:
    __slots__ = ("nu", "terms")

    def __init__(self, nu: int, terms: Mapping | Iterable = ()):
        self.nu = nu
        self.terms: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (m, k), c in items:
            self._add(tuple(m), tuple(k), c)

    def _add(self, m, k, c):
        if not c:
            return
        key = (m, k)
        new = self.terms.get(key, 0) + c
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    @classmethod
    def identity(cls, nu: int) -> "DiffOperator":
        z = (0,) * nu
        return cls(nu, {(z, z): Fraction(1)})

    @classmethod
    def zero(cls, nu: int) -> "DiffOperator":
        return cls(nu)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        """Highest number of derivatives, -1 for the zero operator."""
        return max((sum(k) for _, k in self.terms), default=-1)

    @property
    def homogeneities(self) -> set:
        """The set of vector homogeneities m - k of the terms."""
        return {tuple(a - b for a, b in zip(m, k)) for m, k in self.terms}

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = DiffOperator(self.nu, self.terms)
        for (m, k), c in other.terms.items():
            out._add(m, k, c)
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator(self.nu, {key: c * v for key, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.nu == other.nu and self.terms == other.terms

    def __hash__(self):
        return hash((self.nu, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, k), c in sorted(self.terms.items()):
            xs = "".join(f"x{i + 1}^{e}" for i, e in enumerate(m) if e)
            ds = "".join(f"d{i + 1}^{e}" for i, e in enumerate(k) if e)
            parts.append(f"{c}*{xs}{ds}" if xs or ds else str(c))
        return " + ".join(parts)

    def apply(self, f: TruncSeries) -> TruncSeries:
        """D.f, truncated at the order of f."""
        out = TruncSeries(self.nu, (), f.order)
        for (m, k), c in self.terms.items():
            for n, a in f.terms.items():
                fall = _mfalling(n, k)
                if fall:
                    out._add(tuple(ni - ki + mi for ni, ki, mi in zip(n, k, m)), c * a * fall)
        return out

    def compose(self, other: "DiffOperator", max_homogeneity: int | None = None) -> "DiffOperator":
        """self o other (other acts first), normal ordered by Leibniz."""
        out = DiffOperator(self.nu)
        for (m1, k1), c1 in self.terms.items():
            for (m2, k2), c2 in other.terms.items():
                if max_homogeneity is not None and sum(m1) + sum(m2) - sum(k1) - sum(k2) > max_homogeneity:
                    continue
                for j in itertools.product(*(range(min(a, b) + 1) for a, b in zip(k1, m2))):
                    coef = _mbinom(k1, j) * _mfalling(m2, j)
                    if not coef:
                        continue
                    m = tuple(a + b - c for a, b, c in zip(m1, m2, j))
                    k = tuple(a - c + b for a, b, c in zip(k1, k2, j))
                    out._add(m, k, c1 * c2 * coef)
        return out

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return self.compose(other)


def op_apply(D: DiffOperator, f: TruncSeries) -> TruncSeries:
    return D.apply(f)


def op_compose(D1: DiffOperator, D2: DiffOperator, max_homogeneity: int | None = None) -> DiffOperator:
    return D1.compose(D2, max_homogeneity)


# systems

class SystemSpec:
    """A perturbed linear system: spectrum, coefficients (i, eta) -> value and an order.

    Field mode: X = sum lambda_i x_i d_i + sum_eta sum_i a^i_eta x^eta x_i d_i.
    Diffeo mode: the map is l o phi with phi_i = x_i (1 + sum_eta phi^i_eta x^eta).
    Coordinate indices are 0-based here; the JSON form uses 1-based ones.
    """

    mode = "field"

    def __init__(self, spectrum: Sequence, coeffs: Mapping, order: int):
        if isinstance(spectrum, Spectrum):
            spectrum = spectrum.values
        self.spectrum = Spectrum(tuple(v if isinstance(v, float) else to_scalar(v) for v in spectrum),
                                 self.mode)
        self.nu = self.spectrum.nu
        self.order = int(order)
        if self.order < 1:
            raise ValueError("order must be at least 1")
        kept = {}
        for (i, eta), c in coeffs.items():
            eta = tuple(eta)
            if not 0 <= i < self.nu or len(eta) != self.nu:
                raise ValueError(f"bad coefficient index {(i, eta)}")
            if not in_H_i(eta, i):
                raise ValueError(f"exponent {eta} is not admissible for coordinate {i + 1}")
            c = to_scalar(c)
            if c and deco_grade(eta) <= self.order:
                kept[(i, eta)] = kept.get((i, eta), 0) + c
        self.coeffs = {k: v for k, v in sorted(kept.items()) if v}

    @property
    def lam(self):
        return self.spectrum.values

    @property
    def support(self) -> list:
        """Decorations carrying a nonzero coefficient, sorted."""
        return sorted({eta for (_, eta) in self.coeffs}, key=lambda e: (deco_grade(e), e))

    def perturbation(self, order: int | None = None) -> list[TruncSeries]:
        """P_i = sum_eta a^i_eta x^(eta + e_i)."""
        order = self.order if order is None else order
        out = [TruncSeries.zero(self.nu, order) for _ in range(self.nu)]
        for (i, eta), c in self.coeffs.items():
            out[i] = out[i] + TruncSeries.monomial(add(eta, unit_vector(self.nu, i)), c, order)
        return out

    def with_spectrum(self, values) -> "SystemSpec":
        return type(self)(values, self.coeffs, self.order)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.lam)}, {self.coeffs}, order={self.order})"


class FieldSpec(SystemSpec):
    mode = "field"


class DiffeoSpec(SystemSpec):
    mode = "diffeo"

    def tangent_map(self, order: int | None = None) -> list[TruncSeries]:
        """phi_i = x_i + P_i."""
        order = self.order if order is None else order
        return [TruncSeries.variable(self.nu, i, order) + p for i, p in enumerate(self.perturbation(order))]


# components

def field_component(spec: FieldSpec, eta: Sequence[int]) -> DiffOperator:
    """B_eta = sum_i a^i_eta x^(eta+e_i) d_i."""
    eta = tuple(eta)
    out = DiffOperator(spec.nu)
    for i in range(spec.nu):
        c = spec.coeffs.get((i, eta))
        if c:
            e = unit_vector(spec.nu, i)
            out._add(add(eta, e), e, c)
    return out


def field_components(spec: FieldSpec) -> dict:
    return {eta: field_component(spec, eta) for eta in spec.support}


def diffeo_components(spec: DiffeoSpec, max_grade: int | None = None) -> dict:
    """D_eta for every eta of grade <= max_grade with D_eta != 0.

    Taylor formula: the substitution automorphism of phi = x + u is
    sum over sequences (i_1, eta_1) ... (i_s, eta_s) of
    phi^{i_1}_{eta_1} ... phi^{i_s}_{eta_s} / s! x^(eta + e_{i_1} + ...) d_{i_1} ... d_{i_s}.
    """
    nu = spec.nu
    max_grade = spec.order if max_grade is None else max_grade
    items = [(i, eta, c) for (i, eta), c in spec.coeffs.items()]
    comps: dict = {}

    def walk(s, eta, k, coef):
        if s:
            m = tuple(a + b for a, b in zip(eta, k))
            comps.setdefault(eta, DiffOperator(nu))._add(m, k, coef / factorial(s))
        for i, e, c in items:
            g = deco_grade(e)
            if deco_grade(eta) + g > max_grade:
                continue
            walk(s + 1, add(eta, e), add(k, unit_vector(nu, i)), coef * c)

    walk(0, (0,) * nu, (0,) * nu, Fraction(1))
    return {eta: D for eta, D in sorted(comps.items(), key=lambda t: (deco_grade(t[0]), t[0]))
            if not D.is_zero()}


def components_for(spec: SystemSpec, max_grade: int | None = None) -> dict:
    if spec.mode == "field":
        return field_components(spec)
    return diffeo_components(spec, max_grade)


# comould and coarborification

def rho(word: Sequence, components: Mapping, nu: int, max_homogeneity: int | None = None) -> DiffOperator:
    """rho(eta_1 ... eta_s) = E_{eta_s} o ... o E_{eta_1}; the first letter acts first."""
    out = DiffOperator.identity(nu)
    for eta in word:
        E = components.get(tuple(eta))
        if E is None:
            return DiffOperator.zero(nu)
        out = E.compose(out, max_homogeneity)
    return out


def apply_word(word: Sequence, components: Mapping, f: TruncSeries) -> TruncSeries:
    """rho(word).f, applying the letters in turn."""
    for eta in word:
        E = components.get(tuple(eta))
        if E is None:
            return TruncSeries.zero(f.nu, f.order)
        f = E.apply(f)
        if not f.terms:
            break
    return f


class Coarborification:
    """Homogeneous coarborification F -> rho<(F) for a fixed set of components.

    rho<(1) = Id; rho<(B+_eta F) = sum_i (rho<(F).(E_eta.x_i)) d_i; a product
    of s trees with multiplicities d_1..d_k gives the symmetrised order-s
    operator with prefactor 1/(d_1! ... d_k!).
    """

    def __init__(self, components: Mapping, nu: int):
        self.components = {tuple(k): v for k, v in components.items()}
        self.nu = nu
        self._ops: dict = {}
        self._coeffs: dict = {}
        self._x = TruncSeries.identity(nu)

    def tree_coefficients(self, t: Tree) -> tuple:
        """The polynomials g^i with rho<(t) = sum_i g^i d_i."""
        hit = self._coeffs.get(t)
        if hit is not None:
            return hit
        E = self.components.get(t.deco)
        if E is None:
            out = tuple(TruncSeries.zero(self.nu) for _ in range(self.nu))
        else:
            inner = self.operator(t.children) if t.children else None
            out = []
            for i in range(self.nu):
                g = E.apply(self._x[i])
                if inner is not None and g.terms:
                    g = inner.apply(g)
                out.append(g)
            out = tuple(out)
        self._coeffs[t] = out
        return out

    def operator(self, f) -> DiffOperator:
        f = as_forest(f)
        hit = self._ops.get(f)
        if hit is not None:
            return hit
        nu = self.nu
        if not f:
            op = DiffOperator.identity(nu)
        else:
            # polynomial coefficient of each derivative multi-index
            acc = {(0,) * nu: TruncSeries(nu, {(0,) * nu: Fraction(1)})}
            for t in f:
                g = self.tree_coefficients(t)
                nxt: dict = {}
                for k, p in acc.items():
                    for i in range(nu):
                        if not g[i].terms:
                            continue
                        kk = add(k, unit_vector(nu, i))
                        term = p * g[i]
                        nxt[kk] = nxt[kk] + term if kk in nxt else term
                acc = nxt
                if not acc:
                    break
            denom = 1
            for mult in Counter(f).values():
                denom *= factorial(mult)
            op = DiffOperator(nu)
            for k, p in acc.items():
                for m, c in p.terms.items():
                    op._add(m, k, Fraction(c) / denom)
        self._ops[f] = op
        return op

    def apply_x(self, f, order: int | None = None) -> list[TruncSeries]:
        """rho<(F).x_i for every i; only the empty forest and single trees are nonzero."""
        f = as_forest(f)
        if not f:
            return [x.truncate(order) for x in self._x]
        if len(f) > 1:
            return [TruncSeries.zero(self.nu, order) for _ in range(self.nu)]
        return [g.truncate(order) for g in self.tree_coefficients(f[0])]


def rho_arbo(f, components: Mapping, nu: int) -> DiffOperator:
    return Coarborification(components, nu).operator(f)


def eval_automorphism(chi, basis: Iterable, components: Mapping, nu: int, order: int,
                      kind: str = "word") -> list[TruncSeries]:
    """Coordinates sum_b chi(b) rho(b).x_i, truncated at total degree `order`.

    `kind` says whether the basis stream holds words or forests.
    """
    out = [TruncSeries.zero(nu, order) for _ in range(nu)]
    xs = TruncSeries.identity(nu, order)
    coarbo = Coarborification(components, nu) if kind == "forest" else None
    for b in basis:
        c = chi(b)
        if kind == "word":
            vals = [apply_word(b, components, x) for x in xs]
        elif kind == "forest":
            vals = coarbo.apply_x(b, order)
        else:
            raise ValueError(f"kind must be 'word' or 'forest', got {kind!r}")
        if not c:
            continue
        for i in range(nu):
            if vals[i].terms:
                out[i] = out[i] + vals[i].scale(c)
    return out


# the group of tangent-to-identity maps

def compose_diffeos(phi: Sequence[TruncSeries], psi: Sequence[TruncSeries], order: int) -> list[TruncSeries]:
    return compose_maps(phi, psi, order)


def invert_diffeo(phi: Sequence[TruncSeries], order: int) -> list[TruncSeries]:
    """Compositional inverse of a tangent-to-identity map, by fixed-point iteration."""
    nu = len(phi)
    x = TruncSeries.identity(nu, order)
    u = [p.truncate(order) - xi for p, xi in zip(phi, x)]
    psi = list(x)
    for _ in range(order):
        psi = [xi - ui.compose(psi, order) for xi, ui in zip(x, u)]
    return psi


def _field_apply(X: Sequence[TruncSeries], f: TruncSeries) -> TruncSeries:
    out = TruncSeries.zero(f.nu, f.order)
    for i, Xi in enumerate(X):
        d = f.derivative(i)
        if d.terms and Xi.terms:
            out = out + Xi * d
    return out


def exp_field(X: Sequence[TruncSeries], order: int) -> list[TruncSeries]:
    """Time-one map of the field sum X_i d_i (no linear part): sum_s X^s.x / s!."""
    nu = len(X)
    X = [Xi.truncate(order) for Xi in X]
    out = []
    for i in range(nu):
        term = TruncSeries.variable(nu, i, order)
        total = term
        for s in range(1, order + 1):
            term = _field_apply(X, term).scale(Fraction(1, s))
            if not term.terms:
                break
            total = total + term
        out.append(total)
    return out


def log_diffeo(phi: Sequence[TruncSeries], order: int) -> list[TruncSeries]:
    """Field X with exp(X) = phi: X_i = sum (-1)^(s-1)/s (Theta - Id)^s . x_i."""
    nu = len(phi)
    phi = [p.truncate(order) for p in phi]
    out = []
    for i in range(nu):
        term = TruncSeries.variable(nu, i, order)
        total = TruncSeries.zero(nu, order)
        for s in range(1, order + 1):
            term = term.compose(phi, order) - term
            if not term.terms:
                break
            total = total + term.scale(Fraction((-1) ** (s - 1), s))
        out.append(total)
    return out
