"""Complexes of projectives and their Krull-Schmidt decomposition.

Fixed-size complexes decompose into concentrated degree-1 classes (S), shifted
resolution classes (T), and shifted contractible pairs (J); cyclic complexes
into resolution classes (C) and contractible pairs (K).  The engine strips
contractible pairs by Gaussian elimination on the scalar parts of the
differentials, then reads the rest off the homology.
"""

import numpy as np

from hallcpx import ModuleCategory, a_n_quiver
from hallcpx.complexes import CYC, WIN, ComplexCategory
from hallcpx.reps import RepMap

cat = ModuleCategory(a_n_quiver(2), p=3)
win = ComplexCategory(cat, WIN, m=3)
cyc = ComplexCategory(cat, CYC, m=2)

S1 = cat.simple(1)
P1, P2 = cat.projective(1), cat.projective(2)

X = win.direct_sum([win.make_tm(S1), win.shift(win.make_jp(P2), 1), win.make_sp(P1)])
print("three-term complex, component dims:", [c.dims for c in X.components])
print("decomposition:", win.decompose(X))

# scramble by a random isomorphism and decompose again: same labels
rng = np.random.default_rng(0)


def random_aut(M):
    basis = cat.hom_basis_matrix(M, M)
    while True:
        row = (rng.integers(0, cat.p, size=basis.shape[0]) @ basis) % cat.p
        f = cat.unflatten_hom(M, M, row)
        if cat.is_invertible_map(f):
            return f


gs = [random_aut(c) for c in X.components]
diffs = []
for j, d in enumerate(X.diffs):
    ginv = RepMap([cat.field.inverse(m) if m.size else m.T for m in gs[j].mats])
    diffs.append(cat.compose(cat.compose(gs[j + 1], d), ginv))
from hallcpx.complexes import Cx  # noqa: E402

scrambled = Cx(X.kind, X.m, X.lo, X.components, diffs, X.slots)
print("scrambled decomposition:", win.decompose(scrambled))
assert win.decompose(scrambled) == win.decompose(X)

# the independent peeling splitter agrees
assert win.decompose_window_peeling(scrambled) == win.decompose(X)
print("peeling oracle agrees")

# cyclic: stripping contractibles is where the wraparound matters
Y = cyc.direct_sum([cyc.make_cm(S1), cyc.shift(cyc.make_kp(P1), 1)])
core, stripped = cyc.minimize(Y)
print("\ncyclic sum: stripped contractibles:", stripped)
print("minimal core decomposition:", cyc.decompose(core))
