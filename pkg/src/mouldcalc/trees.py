"""Decorated rooted trees and forests, Connes-Kreimer and Grossman-Larson.

Trees are immutable and kept in canonical form: the children of every
vertex are sorted by `Tree.key`, so two isomorphic decorated trees are
equal and hash alike.  A forest is a sorted tuple of trees, the empty
forest being the unit.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, Sequence

from .alphabet import add, grade as deco_grade, in_H
from .core import HopfOps, LinComb


class Tree:
    __slots__ = ("deco", "children", "key", "grade", "size", "_hash")

    def __init__(self, deco: Sequence[int], children: Iterable["Tree"] = ()):
        self.deco = tuple(deco)
        self.children = Forest(children)
        self.grade = deco_grade(self.deco) + sum(t.grade for t in self.children)
        self.size = 1 + sum(t.size for t in self.children)
        self.key = (self.grade, self.size, self.deco, tuple(t.key for t in self.children))
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, Tree) and self.key == other.key

    def __lt__(self, other: "Tree"):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        d = ",".join(map(str, self.deco))
        if not self.children:
            return f"[{d}]"
        return f"[{d}]({' '.join(map(repr, self.children))})"

    @property
    def weight(self) -> tuple:
        w = self.deco
        for t in self.children:
            w = add(w, t.weight)
        return w


class Forest(tuple):
    """Sorted tuple of trees; the commutative product is concatenation."""

    def __new__(cls, trees: Iterable[Tree] = ()):
        return super().__new__(cls, sorted(trees, key=lambda t: t.key))

    def __mul__(self, other: "Forest") -> "Forest":
        return Forest(tuple(self) + tuple(other))

    def __repr__(self):
        return "1" if not self else " ".join(map(repr, self))

    @property
    def grade(self) -> int:
        return sum(t.grade for t in self)

    @property
    def size(self) -> int:
        return sum(t.size for t in self)

    def weight(self, nu: int) -> tuple:
        w = (0,) * nu
        for t in self:
            w = add(w, t.weight)
        return w

    def __getnewargs__(self):
        return (tuple(self),)


EMPTY = Forest()


def leaf(eta: Sequence[int]) -> Tree:
    return Tree(eta)


def B_plus(eta: Sequence[int], forest: Iterable[Tree] = ()) -> Tree:
    """Graft the trees of `forest` on a new root decorated by eta."""
    return Tree(eta, forest)


def as_forest(x) -> Forest:
    if isinstance(x, Tree):
        return Forest((x,))
    return x if isinstance(x, Forest) else Forest(x)


def vertices(t: Tree) -> Iterator[Tree]:
    """Full subtrees t_v, one per vertex, in preorder."""
    yield t
    for c in t.children:
        yield from vertices(c)


def forest_vertices(f: Forest) -> Iterator[Tree]:
    for t in f:
        yield from vertices(t)


@lru_cache(maxsize=None)
def symmetry_factor(f) -> int:
    """Order of the automorphism group of a forest (or tree)."""
    if isinstance(f, Tree):
        return symmetry_factor(f.children)
    out = 1
    for t, mult in Counter(f).items():
        out *= factorial(mult) * symmetry_factor(t) ** mult
    return out


@dataclass(frozen=True)
class Cut:
    pruned: Forest
    trunk: Forest


@lru_cache(maxsize=None)
def admissible_cuts(t: Tree) -> tuple[Cut, ...]:
    """All admissible cuts of a tree, including the empty and the total cut.

    The total cut gives (t, 1), the empty cut (1, t).  Cuts are listed with
    multiplicity: distinct edge sets giving isomorphic results are kept apart.
    """
    out = [Cut(Forest((t,)), EMPTY)]
    per_child = [admissible_cuts(c) for c in t.children]
    for choice in itertools.product(*per_child):
        pruned = Forest(tree for c in choice for tree in c.pruned)
        kept = [tree for c in choice for tree in c.trunk]
        out.append(Cut(pruned, Forest((Tree(t.deco, kept),))))
    return tuple(out)


@lru_cache(maxsize=None)
def _coproduct_tree(t: Tree) -> LinComb:
    out = LinComb()
    for c in admissible_cuts(t):
        out.add_term((c.pruned, c.trunk), 1)
    return out


@lru_cache(maxsize=None)
def coproduct(f) -> LinComb:
    """Connes-Kreimer coproduct, pruned part on the left, multiplicative on forests."""
    f = as_forest(f)
    out = LinComb({(EMPTY, EMPTY): 1})
    for t in f:
        nxt = LinComb()
        for (p1, r1), c1 in out.items():
            for (p2, r2), c2 in _coproduct_tree(t).items():
                nxt.add_term((p1 * p2, r1 * r2), c1 * c2)
        out = nxt
    return out


def product(f, g) -> LinComb:
    return LinComb.basis(as_forest(f) * as_forest(g))


@lru_cache(maxsize=None)
def _antipode_tree(t: Tree) -> LinComb:
    # S(t) = -t - sum over nontrivial cuts of S(P) R
    out = LinComb({Forest((t,)): -1})
    for c in admissible_cuts(t):
        if not c.pruned or c.pruned == (t,):
            continue
        for p, coef in antipode(c.pruned).items():
            out.add_term(p * c.trunk, -coef)
    return out


@lru_cache(maxsize=None)
def antipode(f) -> LinComb:
    f = as_forest(f)
    out = LinComb.basis(EMPTY)
    for t in f:
        nxt = LinComb()
        for a, ca in out.items():
            for b, cb in _antipode_tree(t).items():
                nxt.add_term(a * b, ca * cb)
        out = nxt
    return out


def forest_grade(f) -> int:
    return as_forest(f).grade


CONNES_KREIMER = HopfOps("CK", EMPTY, product, coproduct, antipode, forest_grade)


# Grossman-Larson product

def _to_mutable(t: Tree) -> list:
    return [t.deco, [_to_mutable(c) for c in t.children]]


def _freeze(node: list) -> Tree:
    return Tree(node[0], [_freeze(c) for c in node[1]])


def _nodes(node: list) -> Iterator[list]:
    yield node
    for c in node[1]:
        yield from _nodes(c)


def gl_product(f, g) -> LinComb:
    """Grossman-Larson product: graft each tree of f on a vertex of g or on a phantom root.

    Trees of f are taken with multiplicity, so identical trees grafted on two
    distinct vertices are counted twice.
    """
    f, g = as_forest(f), as_forest(g)
    root = [None, [_to_mutable(t) for t in g]]
    n_sites = sum(1 for _ in _nodes(root))
    out = LinComb()
    for sites in itertools.product(range(n_sites), repeat=len(f)):
        root = [None, [_to_mutable(t) for t in g]]
        nodes = list(_nodes(root))
        for t, s in zip(f, sites):
            nodes[s][1].append(_to_mutable(t))
        out.add_term(Forest(_freeze(c) for c in root[1]), 1)
    return out


def foissy_iso(f) -> LinComb:
    """F -> s(F) F, the isomorphism between the graded dual of CK and GL."""
    f = as_forest(f)
    return LinComb({f: symmetry_factor(f)})


# positive subalgebra

@lru_cache(maxsize=None)
def cut_weights(t: Tree) -> frozenset:
    """Weights of the trunks of the cuts of t that keep the root."""
    opts = [cut_weights(c) | {None} for c in t.children]
    out = set()
    for choice in itertools.product(*opts):
        w = t.deco
        for x in choice:
            if x is not None:
                w = add(w, x)
        out.add(w)
    return frozenset(out)


@lru_cache(maxsize=None)
def tree_in_ck_plus(t: Tree) -> bool:
    return all(tree_in_ck_plus(c) for c in t.children) and all(in_H(w) for w in cut_weights(t))


def in_ck_plus(f) -> bool:
    """Every tree occurring in either side of every cut has weight in H."""
    if isinstance(f, Tree):
        return tree_in_ck_plus(f)
    return all(tree_in_ck_plus(t) for t in f)


def in_ck_plus_by_cuts(f) -> bool:
    """Same predicate, straight from the coproduct (slow, used as a cross-check).

    Every tree appearing on either side of a cut must have weight in H, and
    must itself pass the test, so the set is closed under the coproduct.
    """
    seen: set = set()
    todo = list(as_forest(f))
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        seen.add(t)
        if not in_H(t.weight):
            return False
        for (p, r), _ in coproduct(t).items():
            todo.extend(x for x in tuple(p) + tuple(r) if x != t)
    return True


# enumeration

class _Catalogue:
    """Trees and forests over a decoration set, grown grade by grade."""

    def __init__(self, decorations: Iterable[Sequence[int]], plus_only: bool = False):
        self.decorations = sorted({tuple(d) for d in decorations}, key=lambda d: (deco_grade(d), d))
        if any(deco_grade(d) < 1 for d in self.decorations):
            raise ValueError("decorations must have positive grade")
        self.plus_only = plus_only
        self.trees: list[list[Tree]] = [[]]
        self.forests: list[list[Forest]] = [[EMPTY]]
        self._all: list[Tree] = []

    def _grow(self, g: int) -> None:
        level = []
        for d in self.decorations:
            gd = deco_grade(d)
            if gd > g:
                continue
            for f in self.forests[g - gd]:
                t = Tree(d, f)
                if not self.plus_only or tree_in_ck_plus(t):
                    level.append(t)
        level.sort(key=lambda t: t.key)
        self.trees.append(level)
        self._all.extend(level)
        # a forest of grade g is its largest tree plus a forest of trees no larger
        out = []
        for t in self._all:
            rest = g - t.grade
            if rest < 0:
                continue
            for f in self.forests[rest]:
                if not f or f[-1].key <= t.key:
                    out.append(Forest(tuple(f) + (t,)))
        out.sort(key=lambda f: tuple(t.key for t in f))
        self.forests.append(out)

    def upto(self, g: int) -> None:
        while len(self.trees) <= g:
            self._grow(len(self.trees))


def enumerate_forests(decorations: Iterable[Sequence[int]], max_grade: int,
                      plus_only: bool = False) -> Iterator[Forest]:
    """Every canonical forest of grade <= max_grade exactly once, in grade order."""
    cat = _Catalogue(decorations, plus_only)
    cat.upto(max_grade)
    for g in range(max_grade + 1):
        yield from cat.forests[g]


def enumerate_trees(decorations: Iterable[Sequence[int]], max_grade: int,
                    plus_only: bool = False) -> Iterator[Tree]:
    cat = _Catalogue(decorations, plus_only)
    cat.upto(max_grade)
    for g in range(1, max_grade + 1):
        yield from cat.trees[g]
