"""
Linearizing a one-dimensional vector field
==========================================

Take X = 2x d/dx + x^2 d/dx.  We look for the change of variables psi
carrying the linear field 2x d/dx to X, once summed over words and once
over trees, and compare with a plain order-by-order solve.
"""
from fractions import Fraction

from mouldcalc.linearizer import linearize, oracle_linearize
from mouldcalc.operators import FieldSpec

spec = FieldSpec([2], {(0, (1,)): 1}, order=8)

by_words = linearize(spec, basis="word")
by_trees = linearize(spec, basis="forest")
print("psi(x) =", by_words.series[0])

# both expansions and the direct solve agree exactly
assert by_words.series == by_trees.series == oracle_linearize(spec)
print("residual is zero:", by_words.residual_zero)

# here the coefficients are 2^(1-n), so psi(x) = x / (1 - x/2)
for i, eta, c in by_words.coefficients():
    print(eta[0] + 1, c, c == Fraction(1, 2 ** eta[0]))
