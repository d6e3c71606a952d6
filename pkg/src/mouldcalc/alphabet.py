"""Decorations, their admissible sets and the pairings with a spectrum.

A decoration is a tuple of integers of length nu.  Its grade is the sum of
its entries.  The admissible set H consists of the decorations with all
entries >= -1, at most one entry equal to -1 and positive grade; H_i is
the part of H with a nonnegative i-th shifted entry, i.e. the exponents
eta for which x^(eta + e_i) is a monomial.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Resonance, ZeroMultiplier, to_scalar

Decoration = tuple


def grade(eta: Sequence[int]) -> int:
    return sum(eta)


def add(a: Sequence[int], b: Sequence[int]) -> Decoration:
    return tuple(x + y for x, y in zip(a, b))


def unit_vector(nu: int, i: int) -> Decoration:
    return tuple(1 if j == i else 0 for j in range(nu))


def in_H(eta: Sequence[int]) -> bool:
    return (all(n >= -1 for n in eta) and sum(1 for n in eta if n == -1) <= 1
            and grade(eta) >= 1)


def in_H_i(eta: Sequence[int], i: int) -> bool:
    return in_H(eta) and eta[i] >= -1 and all(n >= 0 for j, n in enumerate(eta) if j != i)


def H_elements(nu: int, max_grade: int, min_grade: int = 1) -> list[Decoration]:
    """All elements of H with grade in [min_grade, max_grade], sorted by grade then lexicographically."""
    out = []
    for g in range(max(min_grade, 1), max_grade + 1):
        pts = []
        for eta in itertools.product(range(-1, g + 2), repeat=nu):
            if grade(eta) == g and in_H(eta):
                pts.append(eta)
        out.extend(sorted(pts))
    return out


def semigroup_elements(generators: Iterable[Sequence[int]], max_grade: int) -> list[Decoration]:
    """Nonempty sums of generators with grade <= max_grade (generators of positive grade)."""
    gens = sorted({tuple(g) for g in generators})
    if any(grade(g) < 1 for g in gens):
        raise ValueError("generators must have positive grade")
    seen = set(gens if gens else ())
    seen = {g for g in seen if grade(g) <= max_grade}
    frontier = set(seen)
    while frontier:
        new = set()
        for a in frontier:
            for g in gens:
                s = add(a, g)
                if grade(s) <= max_grade and s not in seen:
                    new.add(s)
        seen |= new
        frontier = new
    return sorted(seen, key=lambda e: (grade(e), e))


def pair_field(lam: Sequence, eta: Sequence[int]):
    """<lambda, eta> = sum lambda_i eta_i."""
    return sum((l * n for l, n in zip(lam, eta)), Fraction(0))


def pair_diffeo(mult: Sequence, eta: Sequence[int]):
    """l^eta = prod l_i^eta_i; negative powers of a zero multiplier are rejected."""
    out = Fraction(1)
    for l, n in zip(mult, eta):
        if n < 0 and l == 0:
            raise ZeroMultiplier(f"zero multiplier raised to the power {n}")
        if n:
            # int ** negative int would silently turn into a float
            out *= (Fraction(l) if isinstance(l, int) else l) ** n
    return out


def omega(lam: Sequence[float], h: int) -> float:
    """min |<n, lambda>| > 0 over integer n with |n_i| <= h and sum n_i <= h.

    Evaluated in floating point; the per-coordinate bound keeps the set finite.
    Returns inf if every such pairing vanishes.
    """
    lam = [float(x) for x in lam]
    best = float("inf")
    for n in itertools.product(range(-h, h + 1), repeat=len(lam)):
        if sum(n) > h:
            continue
        v = abs(sum(a * b for a, b in zip(n, lam)))
        if 0 < v < best:
            best = v
    return best


@dataclass(frozen=True)
class Spectrum:
    """Linear part: eigenvalues (field) or multipliers (diffeo)."""

    values: tuple
    mode: str = "field"

    def __post_init__(self):
        if self.mode not in ("field", "diffeo"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.values:
            raise ValueError("empty spectrum")
        if self.mode == "diffeo" and any(v == 0 for v in self.values):
            raise ZeroMultiplier("diffeomorphism multipliers must be nonzero")

    @classmethod
    def parse(cls, values, mode: str = "field") -> "Spectrum":
        return cls(tuple(to_scalar(v) for v in values), mode)

    @property
    def nu(self) -> int:
        return len(self.values)

    def as_float(self) -> "Spectrum":
        return Spectrum(tuple(float(v) for v in self.values), self.mode)

    def divisor(self, eta: Sequence[int]):
        """The small divisor attached to eta: <lambda,eta> or l^eta - 1."""
        if self.mode == "field":
            return pair_field(self.values, eta)
        return pair_diffeo(self.values, eta) - 1

    def check(self, eta: Sequence[int]):
        d = self.divisor(eta)
        if d == 0:
            raise Resonance(eta)
        return d
