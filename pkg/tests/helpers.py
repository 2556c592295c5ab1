"""Shared test utilities: random automorphisms and complex scrambling."""

import numpy as np

from hallcpx.complexes import Cx
from hallcpx.reps import RepMap


def random_aut(cat, M, rng):
    basis = cat.hom_basis_matrix(M, M)
    if M.total_dim == 0:
        return cat.identity_map(M)
    while True:
        row = (rng.integers(0, cat.p, size=basis.shape[0]) @ basis) % cat.p
        f = cat.unflatten_hom(M, M, row)
        if cat.is_invertible_map(f):
            return f


def scramble(ccat, X, rng):
    """An isomorphic copy: conjugate differentials by random component automorphisms."""
    cat = ccat.modcat
    X = ccat.standardize(X)
    gs = [random_aut(cat, c, rng) for c in X.components]
    ncomp = len(X.components)
    diffs = []
    for j, d in enumerate(X.diffs):
        k = (j + 1) % ncomp
        ginv = RepMap([cat.field.inverse(m) if m.size else m.T for m in gs[j].mats])
        diffs.append(cat.compose(cat.compose(gs[k], d), ginv))
    return Cx(X.kind, X.m, X.lo, X.components, diffs, X.slots)
