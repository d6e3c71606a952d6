"""Sparse linear combinations, convolution and characters.

Everything here is agnostic of the underlying basis: a Hopf algebra is
described by a handful of functions acting on basis keys (see `HopfOps`),
and linear combinations are dictionaries from hashable keys to scalars.
Scalars are `fractions.Fraction` in exact mode and `float` in diagnostic
mode; nothing in this module cares which.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Hashable, Iterable, Mapping


class Resonance(ArithmeticError):
    """A small divisor vanished. `weight` is the offending decoration weight."""

    def __init__(self, weight, message: str | None = None):
        self.weight = tuple(weight)
        super().__init__(message or f"resonance at weight {list(self.weight)}")


class ZeroMultiplier(ValueError):
    """A multiplier is zero so a negative power is undefined."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed."""


def to_scalar(value) -> Fraction:
    """Parse an exact scalar: int, Fraction or a 'p/q' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact scalars; pass a 'p/q' string")
    return Fraction(value)


def scalar_str(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(Fraction(value))


class LinComb(dict):
    """Finite linear combination of basis keys, zero coefficients pruned."""

    def __init__(self, data: Mapping | Iterable = (), /):
        super().__init__()
        items = data.items() if isinstance(data, Mapping) else data
        for key, c in items:
            self.add_term(key, c)

    @classmethod
    def basis(cls, key) -> "LinComb":
        return cls({key: Fraction(1)})

    def add_term(self, key, c) -> None:
        # in-place accumulation; only meant for use while building a result
        if not c:
            return
        new = self.get(key, 0) + c
        if new:
            self[key] = new
        else:
            self.pop(key, None)

    def __add__(self, other: "LinComb") -> "LinComb":
        out = LinComb(self)
        for k, c in other.items():
            out.add_term(k, c)
        return out

    def __neg__(self) -> "LinComb":
        return LinComb({k: -c for k, c in self.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __mul__(self, scalar) -> "LinComb":
        return LinComb({k: c * scalar for k, c in self.items()})

    __rmul__ = __mul__

    def coeff(self, key):
        return self.get(key, 0)

    def __repr__(self) -> str:
        if not self:
            return "0"
        return " + ".join(f"{c}*{k!r}" for k, c in self.items())


def linear(op: Callable[[Hashable], LinComb], x: LinComb) -> LinComb:
    """Extend a basis map linearly."""
    out = LinComb()
    for k, c in x.items():
        for k2, c2 in op(k).items():
            out.add_term(k2, c * c2)
    return out


def bilinear(op: Callable[[Hashable, Hashable], LinComb], x: LinComb, y: LinComb) -> LinComb:
    out = LinComb()
    for a, ca in x.items():
        for b, cb in y.items():
            for k, c in op(a, b).items():
                out.add_term(k, ca * cb * c)
    return out


def tensor(x: LinComb, y: LinComb) -> LinComb:
    return LinComb(((a, b), ca * cb) for a, ca in x.items() for b, cb in y.items())


@dataclass(frozen=True)
class HopfOps:
    """Structure maps of a graded connected Hopf algebra, on basis keys.

    `product(a, b)`, `coproduct(a)` and `antipode(a)` return LinCombs
    (the coproduct with pair keys). `unit` is the empty basis element.
    """

    name: str
    unit: Hashable
    product: Callable
    coproduct: Callable
    antipode: Callable
    grade: Callable

    def counit(self, key) -> int:
        return 1 if key == self.unit else 0

    def mul(self, x: LinComb, y: LinComb) -> LinComb:
        return bilinear(self.product, x, y)


@dataclass(frozen=True)
class Character:
    """A linear form on basis keys, tagged with what it is supposed to be.

    kind is one of 'character', 'infinitesimal', 'linear'.
    """

    func: Callable
    kind: str = "character"

    def __call__(self, key):
        return self.func(key)

    def on(self, x: LinComb):
        return sum((c * self.func(k) for k, c in x.items()), Fraction(0))


def _as_callable(f):
    return f.func if isinstance(f, Character) else f


def convolve(f, g, coproduct: Callable) -> Callable:
    """(f * g)(x) = sum f(x') g(x'') over the coproduct of x."""
    f, g = _as_callable(f), _as_callable(g)

    def h(x):
        return sum((c * f(a) * g(b) for (a, b), c in coproduct(x).items()), Fraction(0))

    return h


def counit_of(hopf: HopfOps) -> Character:
    return Character(lambda x: Fraction(hopf.counit(x)), "character")


def _power_table(u, hopf: HopfOps):
    # u^{*s}(x), memoised; vanishes for s > grade(x) since u kills the unit
    u = _as_callable(u)

    @lru_cache(maxsize=None)
    def power(s: int, x):
        if s == 0:
            return Fraction(hopf.counit(x))
        if hopf.grade(x) < s:
            return Fraction(0)
        if s == 1:
            return u(x)
        return sum((c * u(a) * power(s - 1, b) for (a, b), c in hopf.coproduct(x).items()
                    if a != hopf.unit), Fraction(0))

    return power


def exp_star(u, hopf: HopfOps) -> Character:
    """Convolution exponential of an infinitesimal character."""
    power = _power_table(u, hopf)

    def e(x):
        return sum((power(s, x) * Fraction(1, factorial(s)) for s in range(hopf.grade(x) + 1)), Fraction(0))

    return Character(e, "character")


def log_star(chi, hopf: HopfOps) -> Character:
    """Convolution logarithm of a character: sum (-1)^(s-1)/s (chi - eps)^{*s}."""
    chi_ = _as_callable(chi)
    power = _power_table(lambda x: chi_(x) - hopf.counit(x), hopf)

    def lg(x):
        return sum((Fraction((-1) ** (s - 1), s) * power(s, x)
                    for s in range(1, hopf.grade(x) + 1)), Fraction(0))

    return Character(lg, "infinitesimal")


def character_check(chi, hopf: HopfOps, samples: Iterable[Hashable], infinitesimal: bool = False,
                    tol=0) -> list[tuple]:
    """Return the pairs (a, b) on which chi fails to be a (infinitesimal) character."""
    f = _as_callable(chi)
    samples = list(samples)
    failures = []
    for a in samples:
        for b in samples:
            lhs = sum((c * f(k) for k, c in hopf.product(a, b).items()), Fraction(0))
            if infinitesimal:
                rhs = f(a) * hopf.counit(b) + hopf.counit(a) * f(b)
            else:
                rhs = f(a) * f(b)
            if abs(lhs - rhs) > tol:
                failures.append((a, b))
    return failures
