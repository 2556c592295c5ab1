"""From cyclic complexes to fixed-size complexes: the collapse homomorphism.

Classes of cyclic complexes whose wraparound differential is nonzero span a
two-sided ideal; killing them and reindexing the rest identifies the quotient
with the Hall algebra of fixed-size complexes.  On the level of class keys
this is a bijective label translation.
"""

from hallcpx import ModuleCategory, a_n_quiver
from hallcpx.complexes import CYC, WIN, ComplexCategory
from hallcpx.hall import (
    ComplexBackend,
    HallAlgebra,
    HallElt,
    chi,
    chi_key,
    key_in_ideal,
)

m = 2
cat = ModuleCategory(a_n_quiver(2), p=2)
cyc = ComplexCategory(cat, CYC, m)
win = ComplexCategory(cat, WIN, m)
hc = HallAlgebra(ComplexBackend(cyc))
hw = HallAlgebra(ComplexBackend(win))

kP1 = cat.class_key(cat.projective(1))[0][0]
kS1 = cat.class_key(cat.simple(1))[0][0]

examples = [
    ((("K", 1, 0), 1),),          # contractible pair, wraparound-free
    ((("K", 1, m - 1), 1),),      # contractible pair with wraparound
    ((("C", kS1, 0), 1),),        # resolution class of a simple
    ((("C", kS1, m - 1), 1),),    # its wraparound shift: killed
    ((("C", kP1, m - 1), 1),),    # concentrated projective: becomes degree-1
]
for key in examples:
    img = chi_key(cat, m, key)
    tag = "killed" if img is None else f"-> {img}"
    print(f"{hc.backend.key_str(key):16s} ideal={key_in_ideal(cat, m, key)}  {tag}")

# the homomorphism property, on an honest product
x = HallElt.basis(cyc.class_key(cyc.make_cm(cat.simple(1))))
y = HallElt.basis(cyc.class_key(cyc.make_cm(cat.simple(2))))
lhs = chi(cat, m, hc.product(x, y))
rhs = hw.product(chi(cat, m, x), chi(cat, m, y))
assert lhs == rhs
print("\ncollapse of a product equals product of collapses:")
for key, coef in sorted(lhs.terms.items()):
    print(f"  {coef} * [{hw.backend.key_str(key)}]")

# the ideal absorbs products from both sides
z = HallElt.basis(((("K", 1, m - 1), 1),))
for prod in (hc.product(z, x), hc.product(x, z)):
    assert all(key_in_ideal(cat, m, k) for k in prod.terms)
print("\nideal closure spot-check passed")
