"""The quantum torus of two-term complexes and the integration character.

Only the two-term case is supported: that category has global dimension one,
which is exactly what makes [M] -> X^{class(M)} multiplicative.  Classes are
coordinatized by a 2n-vector read off a minimal injective resolution

    0 -> M  ->  (a_i copies of S_i) + (c_i copies of J_i)  ->  (b_i copies of S_i) -> 0

as (b - a | c); the pairing on exponents is the Euler form transported along
that coordinatization.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .complexes import WIN, ComplexCategory, Cx
from .errors import DomainError, InconsistencyError
from .hall import ComplexBackend, HallAlgebra, HallElt
from .reps import ModuleCategory, RepMap


class TorusElt:
    """Finite map from Z^{2n} exponents to rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, coef in terms.items() if isinstance(terms, dict) else terms:
                self.add(key, coef)

    def add(self, key, coef):
        coef = Fraction(coef)
        if coef == 0:
            return
        key = tuple(int(a) for a in key)
        cur = self.terms.get(key)
        new = coef if cur is None else cur + coef
        if new == 0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other):
        out = TorusElt(dict(self.terms))
        for key, coef in other.terms.items():
            out.add(key, coef)
        return out

    def __eq__(self, other):
        return isinstance(other, TorusElt) and self.terms == other.terms

    def __repr__(self):
        return f"TorusElt({self.terms!r})"

    def rows(self):
        """JSON-friendly rows: (exponent list, numerator, denominator)."""
        return [
            (list(key), coef.numerator, coef.denominator)
            for key, coef in sorted(self.terms.items())
        ]


class TwoTermTorus:
    """Integration target for the Hall algebra of two-term complexes."""

    def __init__(self, modcat: ModuleCategory, m: int = 2):
        if m != 2:
            raise DomainError("the integration map is defined for two-term complexes only")
        self.modcat = modcat
        self.p = modcat.p
        self.ccat = ComplexCategory(modcat, WIN, 2)
        self.backend = ComplexBackend(self.ccat)
        self.hall = HallAlgebra(self.backend)
        self.n = modcat.quiver.n
        self._pairing = self._build_pairing()
        self._dim_cache = {}

    # -- resolutions and dimension vectors ---------------------------------------

    def injective_resolution(self, X: Cx):
        """Explicit conflation X -> middle -> tail with verified exactness.

        middle is (degree-1 component concentrated) + (identity pair on the
        degree-2 component); tail is the degree-2 component concentrated in
        degree 1.  Returns (f, middle, g, tail).
        """
        X = self.ccat.standardize(X)
        M1, M2 = X.components
        d = X.diffs[0]
        mc = self.modcat
        middle = self.ccat.direct_sum([self.ccat.make_sp(M1, check=False), self.ccat.make_jp(M2, check=False)])
        tail = self.ccat.make_sp(M2, check=False)
        n = mc.quiver.n
        # f: X -> middle: degree 1: (id, d); degree 2: id into the J part
        s1 = self.ccat.make_sp(M1, check=False)
        f1 = []
        f2 = []
        for w in range(n):
            top = np.vstack([mc.field.identity(M1.dims[w]), d.mats[w] % self.p])
            f1.append(top)
            f2.append(np.vstack([np.zeros((0, M2.dims[w]), dtype=np.int64), mc.field.identity(M2.dims[w])]))
        # g: middle -> tail: degree 1: (x, y) -> y - d(x); degree 2: zero
        g1 = []
        for w in range(n):
            g1.append(np.hstack([(-d.mats[w]) % self.p, mc.field.identity(M2.dims[w])]))
        # exactness checks, per degree and vertex
        for w in range(n):
            if self.modcat.field.rank(f1[w]) != M1.dims[w]:
                raise InconsistencyError("resolution map not injective in degree 1")
            if self.modcat.field.rank(g1[w]) != M2.dims[w]:
                raise InconsistencyError("resolution map not surjective in degree 1")
            comp = self.modcat.field.matmul(g1[w], f1[w])
            if comp.any():
                raise InconsistencyError("resolution does not compose to zero")
            if M1.dims[w] + M2.dims[w] != f1[w].shape[0]:
                raise InconsistencyError("middle dimension mismatch")
        fmaps = (RepMap(f1), RepMap(f2))
        gmaps = (RepMap(g1),)
        return fmaps, middle, gmaps, tail

    def minimal_resolution_multiplicities(self, X: Cx):
        """(a, b, c) multiplicity vectors of the minimal injective resolution.

        The raw resolution has a = mult(M1), c = mult(M2), b = mult(M2);
        stripping the redundant identity pairs removes, at each vertex, as
        many S-pairs as the scalar rank of the differential's same-vertex
        blocks (its component on tops).
        """
        X = self.ccat.standardize(X)
        M1, M2 = X.components
        mc = self.modcat
        s = mc.projective_multiplicities(M1)
        t = mc.projective_multiplicities(M2)
        r = self._top_rank(X)
        a = tuple(si - ri for si, ri in zip(s, r))
        b = tuple(ti - ri for ti, ri in zip(t, r))
        if any(x < 0 for x in a) or any(x < 0 for x in b):
            raise InconsistencyError("negative multiplicities after stripping")
        return a, b, t

    def top_scalar_matrices(self, X: Cx):
        """Per-vertex matrix of the differential's same-vertex scalar blocks."""
        mc = self.modcat
        X = self.ccat.standardize(X)
        d = X.diffs[0]
        offs1 = self.ccat._gen_offsets(X.slots[0])
        offs2 = self.ccat._gen_offsets(X.slots[1])
        out = []
        for v in range(1, mc.quiver.n + 1):
            rows = [i for i, sv in enumerate(X.slots[1]) if sv == v]
            cols = [i for i, sv in enumerate(X.slots[0]) if sv == v]
            scal = np.zeros((len(rows), len(cols)), dtype=np.int64)
            for ri, rslot in enumerate(rows):
                for ci, cslot in enumerate(cols):
                    scal[ri, ci] = d.mats[v - 1][offs2[rslot], offs1[cslot]]
            out.append(scal)
        return out

    def _top_rank(self, X: Cx):
        """Per-vertex rank of the scalar blocks of the differential."""
        return tuple(self.modcat.field.rank(s) for s in self.top_scalar_matrices(X))

    def dim_vec(self, X: Cx):
        """(b - a | c), read off the stripped resolution."""
        a, b, c = self.minimal_resolution_multiplicities(X)
        return tuple(bi - ai for ai, bi in zip(a, b)) + tuple(c)

    def dim_vec_of_key(self, key):
        hit = self._dim_cache.get(key)
        if hit is None:
            hit = self.dim_vec(self.ccat.realize(key))
            self._dim_cache[key] = hit
        return hit

    def grothendieck_coords(self, X: Cx):
        """Coordinates ((a-b) | c) in the basis of concentrated and pair classes."""
        a, b, c = self.minimal_resolution_multiplicities(X)
        return tuple(ai - bi for ai, bi in zip(a, b)) + tuple(c)

    # -- the pairing and the torus ------------------------------------------------

    def _build_pairing(self):
        n = self.n
        basis = []
        for v in range(1, n + 1):
            basis.append(self.ccat.make_sp(self.modcat.projective(v), check=False))
        for v in range(1, n + 1):
            basis.append(self.ccat.make_jp(self.modcat.projective(v), check=False))
        g = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for i in range(2 * n):
            for j in range(2 * n):
                g[i, j] = self.ccat.euler_form(basis[i], basis[j])
        d = np.diag([-1] * n + [1] * n)
        return d @ g @ d

    def lambda_form(self, e, f) -> int:
        e = np.array(e, dtype=np.int64)
        f = np.array(f, dtype=np.int64)
        return int(e @ self._pairing @ f)

    def one(self) -> TorusElt:
        return TorusElt({(0,) * (2 * self.n): Fraction(1)})

    def torus_mul(self, x: TorusElt, y: TorusElt) -> TorusElt:
        out = TorusElt()
        for e, ce in x.terms.items():
            for f, cf in y.terms.items():
                coef = ce * cf * Fraction(self.p) ** (-self.lambda_form(e, f))
                out.add(tuple(a + b for a, b in zip(e, f)), coef)
        return out

    def integrate(self, x: HallElt) -> TorusElt:
        """The character sending a class to the torus monomial of its coordinates."""
        out = TorusElt()
        for key, coef in x.terms.items():
            out.add(self.dim_vec_of_key(key), coef)
        return out

    def integrate_product_check(self, kM, kN) -> bool:
        """Exact multiplicativity on one basis pair."""
        x, y = HallElt.basis(kM), HallElt.basis(kN)
        lhs = self.integrate(self.hall.product(x, y))
        rhs = self.torus_mul(self.integrate(x), self.integrate(y))
        return lhs == rhs

    def ses_additivity_check(self, kM, kN) -> bool:
        """dim is additive on every extension middle of the pair."""
        target = tuple(
            a + b for a, b in zip(self.dim_vec_of_key(kM), self.dim_vec_of_key(kN))
        )
        for key in self.hall.backend.ext_middle_keys(kM, kN):
            if self.dim_vec_of_key(key) != target:
                return False
        return True
