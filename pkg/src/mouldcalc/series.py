"""Truncated multivariate formal power series.

A `TruncSeries` keeps the coefficients of monomials x^m with total degree
|m| <= order.  `order=None` means an exact polynomial (no truncation).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def _deg(m) -> int:
    return sum(m)


class TruncSeries:
    __slots__ = ("nu", "order", "terms")

    def __init__(self, nu: int, terms: Mapping | Iterable = (), order: int | None = None):
        self.nu = nu
        self.order = order
        self.terms: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            self._add(tuple(m), c)

    def _add(self, m, c):
        if not c or (self.order is not None and _deg(m) > self.order):
            return
        if len(m) != self.nu or any(e < 0 for e in m):
            raise ValueError(f"bad exponent {m} for nu={self.nu}")
        new = self.terms.get(m, 0) + c
        if new:
            self.terms[m] = new
        else:
            self.terms.pop(m, None)

    # constructors

    @classmethod
    def zero(cls, nu: int, order: int | None = None) -> "TruncSeries":
        return cls(nu, (), order)

    @classmethod
    def monomial(cls, m: Sequence[int], c=Fraction(1), order: int | None = None) -> "TruncSeries":
        return cls(len(m), {tuple(m): c}, order)

    @classmethod
    def variable(cls, nu: int, i: int, order: int | None = None) -> "TruncSeries":
        return cls.monomial(tuple(1 if j == i else 0 for j in range(nu)), Fraction(1), order)

    @classmethod
    def identity(cls, nu: int, order: int | None = None) -> list["TruncSeries"]:
        return [cls.variable(nu, i, order) for i in range(nu)]

    # arithmetic

    def _order_with(self, other: "TruncSeries"):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def truncate(self, order: int | None) -> "TruncSeries":
        return TruncSeries(self.nu, self.terms, order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        out = TruncSeries(self.nu, self.terms, self._order_with(other))
        for m, c in other.terms.items():
            out._add(m, c)
        return out

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.nu, {m: -c for m, c in self.terms.items()}, self.order)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, c) -> "TruncSeries":
        return TruncSeries(self.nu, {m: c * v for m, v in self.terms.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        order = self._order_with(other)
        out = TruncSeries(self.nu, (), order)
        for m1, c1 in self.terms.items():
            d1 = _deg(m1)
            for m2, c2 in other.terms.items():
                if order is not None and d1 + _deg(m2) > order:
                    continue
                out._add(tuple(a + b for a, b in zip(m1, m2)), c1 * c2)
        return out

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k: int) -> "TruncSeries":
        out = TruncSeries(self.nu, {(0,) * self.nu: Fraction(1)}, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.nu == other.nu and self.terms == other.terms

    def __hash__(self):
        return hash((self.nu, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (_deg(m), m)):
            mon = "*".join(f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(m) if e)
            parts.append(f"{self.terms[m]}*{mon}" if mon else f"{self.terms[m]}")
        tail = f" + O({self.order + 1})" if self.order is not None else ""
        return " + ".join(parts) + tail

    def coeff(self, m: Sequence[int]):
        return self.terms.get(tuple(m), 0)

    def is_zero(self, tol=0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def min_degree(self) -> int | None:
        return min((_deg(m) for m in self.terms), default=None)

    def homogeneous_part(self, d: int) -> "TruncSeries":
        return TruncSeries(self.nu, {m: c for m, c in self.terms.items() if _deg(m) == d}, self.order)

    def derivative(self, i: int) -> "TruncSeries":
        out = TruncSeries(self.nu, (), self.order)
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out._add(tuple(mm), c * m[i])
        return out

    def compose(self, subs: Sequence["TruncSeries"], order: int | None = None) -> "TruncSeries":
        """self(subs_1, ..., subs_nu); the substituted series must have no constant term."""
        if order is None:
            order = self.order
        for s in subs:
            if s.coeff((0,) * s.nu):
                raise ValueError("substituted series must vanish at the origin")
        nu_out = subs[0].nu if subs else self.nu
        out = TruncSeries(nu_out, (), order)
        cache: dict = {}

        def power(i, k):
            if (i, k) not in cache:
                if k == 0:
                    cache[(i, k)] = TruncSeries(nu_out, {(0,) * nu_out: Fraction(1)}, order)
                else:
                    cache[(i, k)] = power(i, k - 1) * subs[i].truncate(order)
            return cache[(i, k)]

        for m, c in self.terms.items():
            if order is not None and _deg(m) > order:
                continue
            term = TruncSeries(nu_out, {(0,) * nu_out: c}, order)
            for i, k in enumerate(m):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out


def compose_maps(phi: Sequence[TruncSeries], psi: Sequence[TruncSeries], order: int) -> list[TruncSeries]:
    """Coordinates of phi o psi, truncated at total degree `order`."""
    return [p.compose(list(psi), order) for p in phi]
