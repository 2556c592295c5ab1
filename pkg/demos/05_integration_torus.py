"""Integrating the Hall algebra of two-term complexes into a quantum torus.

Two-term complexes of projectives form a category of global dimension one, so
the character sending a class to the torus monomial of its coordinate vector
is multiplicative.  Coordinates are read off minimal injective resolutions;
the torus twist is the Euler form transported to the coordinate lattice.
"""

from hallcpx import ModuleCategory, a_n_quiver
from hallcpx.hall import HallElt
from hallcpx.integration import TwoTermTorus

cat = ModuleCategory(a_n_quiver(2), p=2)
tt = TwoTermTorus(cat)
win = tt.ccat

objs = {
    "S[P1]": win.make_sp(cat.projective(1)),
    "J[P2]": win.make_jp(cat.projective(2)),
    "T[S1]": win.make_tm(cat.simple(1)),
}
print("coordinate vectors (first block: concentrated parts, second: pairs):")
for name, X in objs.items():
    print(f"  dim {name:6s} = {tt.dim_vec(X)}")

# the pairing on exponents is the Euler form, exactly
ka = win.class_key(objs["T[S1]"])
kb = win.class_key(objs["S[P1]"])
lam = tt.lambda_form(tt.dim_vec_of_key(ka), tt.dim_vec_of_key(kb))
eu = win.euler_form(win.realize(ka), win.realize(kb))
print(f"\npairing vs Euler form on (T[S1], S[P1]): {lam} == {eu}")
assert lam == eu

# multiplicativity: integrate a product and compare with the torus product
x, y = HallElt.basis(kb), HallElt.basis(ka)
lhs = tt.integrate(tt.hall.product(x, y))
rhs = tt.torus_mul(tt.integrate(x), tt.integrate(y))
assert lhs == rhs
print("\nintegral of the product:")
for exps, num, den in lhs.rows():
    print(f"  X^{exps} * {num}/{den}")
print("matches the torus product of the integrals")
