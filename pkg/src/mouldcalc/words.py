"""Words over decorations: shuffle and quasishuffle Hopf algebras.

A word is a tuple of decorations (themselves tuples of ints).  Both
algebras share the deconcatenation coproduct; they differ in the product
and hence in the antipode.  The contraction used by the quasishuffle is
entrywise addition of letters.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .alphabet import add, grade as letter_grade
from .core import HopfOps, LinComb

Word = tuple
EMPTY: Word = ()


def grade(w: Word) -> int:
    return sum(letter_grade(a) for a in w)


def weight(w: Word, nu: int | None = None) -> tuple:
    """Sum of the letters of w, the zero vector for the empty word."""
    if not w:
        if nu is None:
            raise ValueError("nu is needed for the weight of the empty word")
        return (0,) * nu
    out = w[0]
    for a in w[1:]:
        out = add(out, a)
    return tuple(out)


def concat(u: Word, v: Word) -> Word:
    return tuple(u) + tuple(v)


def prepend(eta, x: LinComb) -> LinComb:
    """L+_eta: prepend the letter eta to every word of x."""
    eta = tuple(eta)
    return LinComb(((eta,) + w, c) for w, c in x.items())


@lru_cache(maxsize=None)
def shuffle(u: Word, v: Word) -> LinComb:
    if not u:
        return LinComb.basis(v)
    if not v:
        return LinComb.basis(u)
    out = LinComb()
    for w, c in shuffle(u[1:], v).items():
        out.add_term((u[0],) + w, c)
    for w, c in shuffle(u, v[1:]).items():
        out.add_term((v[0],) + w, c)
    return out


@lru_cache(maxsize=None)
def quasishuffle(u: Word, v: Word) -> LinComb:
    if not u:
        return LinComb.basis(v)
    if not v:
        return LinComb.basis(u)
    out = LinComb()
    for w, c in quasishuffle(u[1:], v).items():
        out.add_term((u[0],) + w, c)
    for w, c in quasishuffle(u, v[1:]).items():
        out.add_term((v[0],) + w, c)
    merged = add(u[0], v[0])
    for w, c in quasishuffle(u[1:], v[1:]).items():
        out.add_term((merged,) + w, c)
    return out


def deconcat(w: Word) -> LinComb:
    """Sum of u (x) v over all factorizations w = uv (two empty ends included)."""
    w = tuple(w)
    return LinComb(((w[:k], w[k:]), 1) for k in range(len(w) + 1))


def antipode_sh(w: Word) -> LinComb:
    w = tuple(w)
    return LinComb({w[::-1]: (-1) ** len(w)})


def compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n into positive parts, as tuples of block lengths."""
    if n == 0:
        yield ()
        return
    for cuts in itertools.product((False, True), repeat=n - 1):
        blocks, size = [], 1
        for c in cuts:
            if c:
                blocks.append(size)
                size = 1
            else:
                size += 1
        blocks.append(size)
        yield tuple(blocks)


def antipode_qsh(w: Word) -> LinComb:
    """(-1)^len(w) times the sum over block decompositions of the reversed word of block sums."""
    w = tuple(w)
    out = LinComb()
    sign = (-1) ** len(w)
    for comp in compositions(len(w)):
        letters, pos = [], 0
        for size in comp:
            letters.append(weight(w[pos:pos + size]))
            pos += size
        out.add_term(tuple(reversed(letters)), sign)
    return out


def unshuffle(w: Word) -> LinComb:
    """Coproduct dual to the shuffle product for the concatenation pairing."""
    w = tuple(w)
    out = LinComb()
    n = len(w)
    for mask in range(1 << n):
        left = tuple(w[k] for k in range(n) if mask >> k & 1)
        right = tuple(w[k] for k in range(n) if not mask >> k & 1)
        out.add_term((left, right), 1)
    return out


def words_up_to(alphabet: Iterable[Sequence[int]], max_grade: int) -> list[Word]:
    """All words over the alphabet with grade <= max_grade, in grade order (letters of positive grade)."""
    letters = sorted({tuple(a) for a in alphabet}, key=lambda a: (letter_grade(a), a))
    by_grade: list[list[Word]] = [[EMPTY]] + [[] for _ in range(max_grade)]
    for g in range(1, max_grade + 1):
        for a in letters:
            ga = letter_grade(a)
            if 1 <= ga <= g:
                by_grade[g].extend(u + (a,) for u in by_grade[g - ga])
        by_grade[g].sort()
    return [w for level in by_grade for w in level]


def words_of_length(alphabet: Iterable[Sequence[int]], max_length: int) -> list[Word]:
    letters = sorted({tuple(a) for a in alphabet})
    out = []
    for n in range(max_length + 1):
        out.extend(itertools.product(letters, repeat=n))
    return out


SHUFFLE = HopfOps("Sh", EMPTY, shuffle, deconcat, antipode_sh, grade)
QUASISHUFFLE = HopfOps("QSh", EMPTY, quasishuffle, deconcat, antipode_qsh, grade)
