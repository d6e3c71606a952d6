"""
When words fail and trees do not
================================

With lambda = (5, 2) the weight (-2, 5) is resonant.  It is a sum of
admissible exponents but never the weight of a subtree in the positive
part of the tree algebra, so the tree expansion goes through.
"""
from fractions import Fraction

from mouldcalc.core import Resonance
from mouldcalc.linearizer import linearize, oracle_linearize
from mouldcalc.operators import FieldSpec

spec = FieldSpec([5, 2], {
    (0, (-1, 2)): 1,
    (0, (-1, 3)): Fraction(1, 2),
    (1, (2, -1)): 1,
    (1, (1, 0)): Fraction(-1, 3),
}, order=6)

try:
    linearize(spec, basis="word")
except Resonance as exc:
    print("word expansion stops at weight", exc.weight)

result = linearize(spec, basis="forest")
print("tree expansion residual is zero:", result.residual_zero)
print("matches the direct solve:", result.series == oracle_linearize(spec))
for i, eta, c in result.coefficients()[:8]:
    print(f"  x{i + 1} coefficient of x^{eta}: {c}")
