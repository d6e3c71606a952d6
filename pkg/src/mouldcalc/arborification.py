"""Arborification: forests to words.

The map sends the empty forest to the empty word, a product of forests
to the (quasi)shuffle of the images and a grafting B+_eta(F) to the letter
eta prepended to the image of F.  Composing a word mould with it gives the
arborified mould.
"""
from __future__ import annotations

from functools import lru_cache

from . import words
from .core import LinComb
from .trees import EMPTY as EMPTY_FOREST, Forest, Tree, as_forest

EMPTY_WORD = ()


def _products(mode: str):
    if mode == "sh":
        return words.shuffle
    if mode == "qsh":
        return words.quasishuffle
    raise ValueError(f"mode must be 'sh' or 'qsh', got {mode!r}")


@lru_cache(maxsize=None)
def _arborify_tree(t: Tree, mode: str) -> LinComb:
    return words.prepend(t.deco, arborify(t.children, mode))


@lru_cache(maxsize=None)
def _arborify_forest(f: Forest, mode: str) -> LinComb:
    prod = _products(mode)
    out = LinComb.basis(EMPTY_WORD)
    for t in f:
        nxt = LinComb()
        for u, cu in out.items():
            for v, cv in _arborify_tree(t, mode).items():
                for w, c in prod(u, v).items():
                    nxt.add_term(w, cu * cv * c)
        out = nxt
    return out


def arborify(f, mode: str = "sh") -> LinComb:
    """Image of a forest (or tree) under the sh or qsh arborification."""
    _products(mode)
    return _arborify_forest(as_forest(f), mode)


def arborify_lincomb(x: LinComb, mode: str = "sh") -> LinComb:
    out = LinComb()
    for f, c in x.items():
        for w, cw in arborify(f, mode).items():
            out.add_term(w, c * cw)
    return out


def arborified(mould, mode: str = "sh"):
    """Forest function F -> mould(arborify(F))."""

    def m(f):
        return sum((c * mould(w) for w, c in arborify(f, mode).items()), 0)

    return m
