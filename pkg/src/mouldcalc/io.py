"""JSON forms of specs, words, forests, linear combinations and results.

Scalars are written as "p/q" strings.  Coordinate indices are 1-based in
JSON and 0-based in Python.  Trees are {"d": decoration, "c": [children]},
a forest is a list of trees and a word a list of decorations.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .core import LinComb, scalar_str, to_scalar
from .operators import DiffeoSpec, FieldSpec, SystemSpec
from .series import TruncSeries
from .trees import Forest, Tree


def scalar_from_json(v) -> Fraction:
    return to_scalar(v)


# specs

def spec_from_json(data: dict) -> SystemSpec:
    try:
        mode = data["mode"]
        nu = int(data["nu"])
        spectrum = [to_scalar(v) for v in data["spectrum"]]
        order = int(data["order"])
        coeffs = {}
        for entry in data.get("coeffs", []):
            key = (int(entry["i"]) - 1, tuple(int(n) for n in entry["eta"]))
            coeffs[key] = coeffs.get(key, 0) + to_scalar(entry["value"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed spec: {exc}") from exc
    if len(spectrum) != nu:
        raise ValueError(f"spectrum has {len(spectrum)} entries, nu is {nu}")
    cls = {"field": FieldSpec, "diffeo": DiffeoSpec}.get(mode)
    if cls is None:
        raise ValueError(f"unknown mode {mode!r}")
    return cls(spectrum, coeffs, order)


def spec_to_json(spec: SystemSpec) -> dict:
    return {
        "mode": spec.mode,
        "nu": spec.nu,
        "spectrum": [scalar_str(v) for v in spec.lam],
        "coeffs": [{"i": i + 1, "eta": list(eta), "value": scalar_str(c)}
                   for (i, eta), c in spec.coeffs.items()],
        "order": spec.order,
    }


# combinatorial objects

def tree_to_json(t: Tree) -> dict:
    return {"d": list(t.deco), "c": [tree_to_json(c) for c in t.children]}


def tree_from_json(data: dict) -> Tree:
    if not isinstance(data, dict) or "d" not in data:
        raise ValueError(f"not a tree: {data!r}")
    return Tree(tuple(int(n) for n in data["d"]), [tree_from_json(c) for c in data.get("c", [])])


def forest_to_json(f) -> list:
    return [tree_to_json(t) for t in f]


def forest_from_json(data: list) -> Forest:
    if not isinstance(data, list):
        raise ValueError(f"not a forest: {data!r}")
    return Forest(tree_from_json(t) for t in data)


def word_to_json(w) -> list:
    return [list(a) for a in w]


def word_from_json(data: list) -> tuple:
    if not isinstance(data, list) or not all(isinstance(a, list) for a in data):
        raise ValueError(f"not a word: {data!r}")
    return tuple(tuple(int(n) for n in a) for a in data)


def element_from_json(data, kind: str | None = None):
    """A word or a forest; the kind is read off the entries unless given (empty defaults to forest)."""
    if kind is None:
        if isinstance(data, list) and data and all(isinstance(a, dict) for a in data):
            kind = "forest"
        elif isinstance(data, list) and data and all(isinstance(a, list) for a in data):
            kind = "word"
        elif data == []:
            kind = "forest"
        else:
            raise ValueError(f"neither a word nor a forest: {data!r}")
    if kind == "word":
        return "word", word_from_json(data)
    if kind == "forest":
        return "forest", forest_from_json(data)
    raise ValueError(f"unknown kind {kind!r}")


def element_to_json(x):
    if isinstance(x, Forest):
        return forest_to_json(x)
    if isinstance(x, Tree):
        return forest_to_json([x])
    return word_to_json(x)


def _sort_key(x):
    if isinstance(x, Forest):
        return (0, x.grade, tuple(t.key for t in x))
    return (1, sum(sum(a) for a in x), len(x), x)


def lincomb_to_json(x: LinComb) -> list:
    terms = sorted(x.items(), key=lambda t: _sort_key(t[0]))
    return [{"coeff": scalar_str(c), "element": element_to_json(k)} for k, c in terms]


def tensor_to_json(x: LinComb) -> list:
    terms = []
    for (a, b), c in x.items():
        terms.append(((_sort_key(a), _sort_key(b)),
                      {"coeff": scalar_str(c), "left": element_to_json(a), "right": element_to_json(b)}))
    terms.sort(key=lambda t: t[0])
    return [t[1] for t in terms]


def lincomb_from_json(data: list, kind: str) -> LinComb:
    out = LinComb()
    for term in data:
        if "element" in term:
            out.add_term(element_from_json(term["element"], kind)[1], to_scalar(term["coeff"]))
        else:
            out.add_term((element_from_json(term["left"], kind)[1], element_from_json(term["right"], kind)[1]),
                         to_scalar(term["coeff"]))
    return out


# series and results

def series_to_json(s: TruncSeries) -> list:
    return [{"m": list(m), "value": scalar_str(c)}
            for m, c in sorted(s.terms.items(), key=lambda t: (sum(t[0]), t[0]))]


def series_from_json(data: list, nu: int, order: int | None) -> TruncSeries:
    return TruncSeries(nu, {tuple(e["m"]): to_scalar(e["value"]) for e in data}, order)


def result_to_json(result) -> dict[str, Any]:
    return {
        "mode": result.mode,
        "basis": result.basis,
        "order": result.order,
        "nu": result.nu,
        "direction": result.direction,
        "coefficients": [{"i": i + 1, "eta": list(eta), "value": scalar_str(c)}
                         for i, eta, c in result.coefficients()],
        "residual_zero": result.residual_zero,
        "residual_min_degree": result.residual_min_degree,
        "grade_stats": {str(g): scalar_str(v) for g, v in result.grade_stats.items()},
        "terms_evaluated": result.n_terms,
    }


def coefficients_from_json(data: dict) -> dict:
    """(i, eta) -> value, 0-based i, from a result document."""
    return {(e["i"] - 1, tuple(e["eta"])): to_scalar(e["value"]) for e in data["coefficients"]}


def growth_to_json(report) -> dict[str, Any]:
    return {
        "mode": report.mode,
        "spectrum": [repr(float(v)) for v in report.spectrum],
        "max_grade": report.max_grade,
        "decorations": [list(d) for d in report.decorations],
        "forests": report.n_forests,
        "per_grade_max": {str(g): v for g, v in report.per_grade_max.items()},
        "fitted": {str(g): v for g, v in report.fitted.items()},
        "constant": report.constant,
        "omega": {str(h): v for h, v in report.omega.items()},
        "k_max": report.k_max,
        "violations": report.violations,
    }
