"""
Trees, words and arborification
===============================

A decorated tree is flattened into words in two ways: by its linear
extensions (shuffle) and by strict level maps, which may merge vertices
into a single letter (quasishuffle).
"""
from fractions import Fraction

from mouldcalc.arborification import arborify
from mouldcalc.linearizer import mould_xi_field, xi_arbo_field
from mouldcalc.trees import B_plus, coproduct, leaf, symmetry_factor

a, b, c, d = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
t = B_plus(a, [leaf(b), B_plus(c, [leaf(d)])])

print("tree:", t, " symmetry factor:", symmetry_factor(t))
print("admissible cuts:", len(coproduct(t)))

for mode in ("sh", "qsh"):
    print(mode)
    for word, k in arborify(t, mode).items():
        print("   ", k, word)

# pulling the linearizing mould back along the shuffle arborification
# gives a product over the subtrees hanging from each vertex
lam = (Fraction(1), Fraction(3, 2), Fraction(-5, 7), Fraction(11, 4))
pulled = sum(k * mould_xi_field(w, lam) for w, k in arborify(t).items())
print(pulled, xi_arbo_field(t, lam), pulled == xi_arbo_field(t, lam))
