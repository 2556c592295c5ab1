"""Complexes of projective representations: cyclic, fixed-size, and bounded.

Three indexing kinds share one machinery:

- ``cyc``  degrees Z_m with wraparound differential (m >= 1)
- ``win``  degrees 1..m with no differential out of degree m (m >= 1)
- ``cb``   bounded complexes, finite support inside Z

Components are projective; differentials square to zero.  Complexes used by
the Hall machinery are kept in *standard form*: each component is an ordered
direct sum of indecomposable projectives (a slot list), so that differential
blocks between same-vertex slots have a well-defined scalar part (End(P_v) is
one-dimensional for an acyclic quiver).  Stripping contractible two-term
summands is Gaussian elimination on those scalars with a Schur-complement
update; the minimal core is then read off degree by degree through homology.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import BudgetExceededError, DomainError, InconsistencyError
from .field import iter_coefficient_chunks
from .reps import ModuleCategory, Rep, RepMap

CYC, WIN, CB = "cyc", "win", "cb"
SWEEP_CHUNK = 1 << 14


class Cx:
    """A complex of projectives.  Immutable.

    components[j] is the representation in the j-th stored degree; diffs[j]
    maps components[j] to components[j+1] (cyclic: j+1 mod m).  Stored degree
    j corresponds to actual degree: j (cyclic), j+1 (window), lo+j (bounded).
    ``slots`` records, when known, the slot list of each component as vertex
    types of indecomposable projective summands in layout order.
    """

    __slots__ = ("kind", "m", "lo", "components", "diffs", "slots", "_bkey")

    def __init__(self, kind, m, lo, components, diffs, slots=None):
        self.kind = kind
        self.m = m
        self.lo = lo
        self.components = tuple(components)
        self.diffs = tuple(diffs)
        self.slots = tuple(tuple(s) for s in slots) if slots is not None else None
        self._bkey = None

    @property
    def bkey(self):
        if self._bkey is None:
            self._bkey = (
                self.kind,
                self.m,
                self.lo,
                tuple(c.bkey for c in self.components),
                tuple(tuple(m.tobytes() for m in d.mats) for d in self.diffs),
            )
        return self._bkey

    def degree_of_index(self, j: int) -> int:
        if self.kind == CYC:
            return j
        if self.kind == WIN:
            return j + 1
        return self.lo + j

    @property
    def total_dim(self) -> int:
        return sum(c.total_dim for c in self.components)

    def __repr__(self):
        return f"Cx({self.kind}, m={self.m}, dims={[c.dims for c in self.components]})"


class ComplexCategory:
    """Complexes of a fixed kind over a module category, with memo caches."""

    def __init__(self, modcat: ModuleCategory, kind: str, m: int | None = None):
        if kind not in (CYC, WIN, CB):
            raise DomainError(f"unknown complex kind {kind!r}")
        if kind in (CYC, WIN):
            if m is None or m < 1:
                raise DomainError("cyclic and fixed-size complexes need m >= 1")
        self.modcat = modcat
        self.field = modcat.field
        self.p = modcat.p
        self.kind = kind
        self.m = m
        self._hom_cache = {}
        self._ext_cache = {}
        self._euler_cache = {}
        self._decomp_cache = {}
        self._realize_cache = {}
        self._label_end_cache = {}
        self._label_hom_cache = {}
        self._aut_cache = {}
        self._cb_companion = None

    def bounded_companion(self) -> "ComplexCategory":
        """Shared bounded-complex category over the same module category."""
        if self.kind == CB:
            return self
        if self._cb_companion is None:
            self._cb_companion = ComplexCategory(self.modcat, CB)
        return self._cb_companion

    # -- construction -------------------------------------------------------

    def _std_rep(self, slot_list) -> Rep:
        return self.modcat.direct_sum([self.modcat.projective(v) for v in slot_list])

    def _zero_map(self, src: Rep, tgt: Rep) -> RepMap:
        return RepMap(
            [np.zeros((tgt.dims[v], src.dims[v]), dtype=np.int64) for v in range(self.modcat.quiver.n)]
        )

    def zero_cx(self) -> Cx:
        if self.kind == CB:
            return Cx(CB, None, 0, [], [], slots=[])
        zero = self.modcat.zero_rep()
        comps = [zero] * self.m
        nd = self.m if self.kind == CYC else self.m - 1
        diffs = [self._zero_map(zero, zero)] * nd
        return Cx(self.kind, self.m, None, comps, diffs, slots=[()] * self.m)

    def _check_square_zero(self, comps, diffs, cyclic: bool):
        nd = len(diffs)
        if nd == 0:
            return
        pairs = range(nd) if cyclic else range(nd - 1)
        for j in pairs:
            d1 = diffs[j]
            d2 = diffs[(j + 1) % nd]
            for v in range(self.modcat.quiver.n):
                if self.field.matmul(d2.mats[v], d1.mats[v]).any():
                    raise DomainError("differentials do not square to zero")

    def make_complex(self, components, diffs, slots=None, lo=None, check=True) -> Cx:
        """Assemble and validate a complex of this category's kind."""
        comps = list(components)
        diffs = list(diffs)
        if self.kind == CYC:
            if len(comps) != self.m or len(diffs) != self.m:
                raise DomainError(f"cyclic complex needs {self.m} components and differentials")
        elif self.kind == WIN:
            if len(comps) != self.m or len(diffs) != self.m - 1:
                raise DomainError(f"fixed-size complex needs {self.m} components, {self.m - 1} differentials")
        else:
            if lo is None:
                lo = 0
            if len(diffs) != max(len(comps) - 1, 0):
                raise DomainError("bounded complex needs one differential per adjacent pair")
        if check:
            for c in comps:
                if not self.modcat.is_projective(c):
                    raise DomainError("complex components must be projective")
            n = len(comps)
            for j, d in enumerate(diffs):
                k = (j + 1) % n
                src, tgt = comps[j], comps[k]
                for v in range(self.modcat.quiver.n):
                    if d.mats[v].shape != (tgt.dims[v], src.dims[v]):
                        raise DomainError("differential shape mismatch")
                if not self.modcat.is_rep_map(src, tgt, d):
                    raise DomainError("differential is not a morphism of representations")
            self._check_square_zero(comps, diffs, cyclic=(self.kind == CYC))
        return Cx(self.kind, self.m, lo if self.kind == CB else None, comps, diffs, slots)

    def standardize(self, X: Cx) -> Cx:
        """Isomorphic complex whose components are standard projective sums."""
        if X.slots is not None:
            return X
        isos = []
        slot_lists = []
        comps = []
        for c in X.components:
            cover, epi = self.modcat.projective_cover(c)
            if cover.total_dim != c.total_dim:
                raise DomainError("component is not projective")
            mults = self.modcat.projective_multiplicities(cover)
            slot_list = []
            for v, mv in enumerate(mults, start=1):
                slot_list.extend([v] * mv)
            slot_lists.append(tuple(slot_list))
            comps.append(cover)
            isos.append(epi)  # iso cover -> c
        diffs = []
        n = len(X.components)
        for j, d in enumerate(X.diffs):
            k = (j + 1) % n
            inv_tgt = RepMap([self.field.inverse(m) if m.size else m.T for m in isos[k].mats])
            new = self.modcat.compose(self.modcat.compose(inv_tgt, d), isos[j])
            diffs.append(new)
        return Cx(X.kind, X.m, X.lo, comps, diffs, slots=slot_lists)

    def direct_sum(self, xs) -> Cx:
        xs = [x for x in xs if x.total_dim > 0 or x.components]
        xs = [self.standardize(x) for x in xs]
        if self.kind == CB:
            xs = [x for x in xs if x.components]
            if not xs:
                return self.zero_cx()
            lo = min(x.lo for x in xs)
            hi = max(x.lo + len(x.components) - 1 for x in xs)
            xs = [self._pad(x, lo, hi) for x in xs]
        if not xs:
            return self.zero_cx()
        ncomp = len(xs[0].components)
        comps, slots, diffs = [], [], []
        for j in range(ncomp):
            slot = sum((x.slots[j] for x in xs), ())
            slots.append(slot)
            comps.append(self._std_rep(slot))
        ndiff = len(xs[0].diffs)
        for j in range(ndiff):
            k = (j + 1) % ncomp
            mats = []
            for v in range(self.modcat.quiver.n):
                blocks = [x.diffs[j].mats[v] for x in xs]
                r = sum(b.shape[0] for b in blocks)
                c = sum(b.shape[1] for b in blocks)
                m = np.zeros((r, c), dtype=np.int64)
                ro = co = 0
                for b in blocks:
                    m[ro : ro + b.shape[0], co : co + b.shape[1]] = b
                    ro += b.shape[0]
                    co += b.shape[1]
                mats.append(m)
            diffs.append(RepMap(mats))
        return Cx(self.kind, self.m, xs[0].lo if self.kind == CB else None, comps, diffs, slots)

    def _pad(self, X: Cx, lo: int, hi: int) -> Cx:
        """Extend a bounded standard complex with zero components to [lo, hi]."""
        if self.kind != CB:
            raise DomainError("padding only applies to bounded complexes")
        zero = self.modcat.zero_rep()
        length = hi - lo + 1
        comps = [zero] * length
        slots = [()] * length
        for j, c in enumerate(X.components):
            comps[X.lo - lo + j] = c
            slots[X.lo - lo + j] = X.slots[j]
        diffs = []
        for j in range(length - 1):
            deg = lo + j
            if X.components and X.lo <= deg < X.lo + len(X.diffs):
                diffs.append(X.diffs[deg - X.lo])
            else:
                diffs.append(self._zero_map(comps[j], comps[j + 1]))
        return Cx(CB, None, lo, comps, diffs, slots)

    def trim(self, X: Cx) -> Cx:
        """Drop zero components at the ends of a bounded complex."""
        if self.kind != CB:
            return X
        comps = list(X.components)
        slots = list(X.slots) if X.slots is not None else None
        diffs = list(X.diffs)
        lo = X.lo
        while comps and comps[0].total_dim == 0:
            comps.pop(0)
            if slots is not None:
                slots.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while comps and comps[-1].total_dim == 0:
            comps.pop()
            if slots is not None:
                slots.pop()
            if diffs:
                diffs.pop()
        if not comps:
            return self.zero_cx()
        return Cx(CB, None, lo, comps, diffs, slots)

    # -- named objects -------------------------------------------------------

    def standardize_rep(self, C: Rep):
        """(standard rep, iso std->C, iso C->std, slot list) for projective C."""
        cover, epi = self.modcat.projective_cover(C)
        if cover.total_dim != C.total_dim:
            raise DomainError("not a projective representation")
        mults = self.modcat.projective_multiplicities(cover)
        slot_list = []
        for v, mv in enumerate(mults, start=1):
            slot_list.extend([v] * mv)
        inv = RepMap([self.field.inverse(m) if m.size else m.T for m in epi.mats])
        return cover, epi, inv, tuple(slot_list)

    def make_cf(self, Q: Rep, P: Rep, f: RepMap, check=True) -> Cx:
        """Two-term object of the cyclic/bounded category attached to f: Q -> P.

        Cyclic m >= 2: Q in degree m-1, P in degree 0, wraparound differential
        f.  Cyclic m = 1: single component P + Q with strictly upper block
        differential.  Bounded: Q in degree -1, P in degree 0.
        """
        if self.kind == WIN:
            raise DomainError("make_cf applies to cyclic or bounded complexes")
        if check and (not self.modcat.is_projective(Q) or not self.modcat.is_projective(P)):
            raise DomainError("make_cf needs projective objects")
        sq, sp, g, slq, slp = self._as_projective_pair_full(Q, P, f)
        zero = self.modcat.zero_rep()
        if self.kind == CB:
            comps = [sq, sp]
            slots = [slq, slp]
            return self.trim(Cx(CB, None, -1, comps, [g], slots))
        m = self.m
        if m == 1:
            slot = slp + slq
            comp = self._std_rep(slot)
            mats = []
            for v in range(self.modcat.quiver.n):
                dq, dp = sq.dims[v], sp.dims[v]
                mat = np.zeros((dp + dq, dp + dq), dtype=np.int64)
                mat[:dp, dp:] = g.mats[v]
                mats.append(mat)
            return Cx(CYC, 1, None, [comp], [RepMap(mats)], slots=[slot])
        comps = [zero] * m
        slots = [()] * m
        comps[m - 1], slots[m - 1] = sq, slq
        comps[0], slots[0] = sp, slp
        diffs = []
        for j in range(m):
            tgt = comps[(j + 1) % m]
            if j == m - 1:
                diffs.append(g)
            else:
                diffs.append(self._zero_map(comps[j], tgt))
        return Cx(CYC, m, None, comps, diffs, slots)

    def _as_projective_pair_full(self, Q, P, f):
        sq_cover, sq_epi, sq_inv, slq = self.standardize_rep(Q)
        sp_cover, sp_epi, sp_inv, slp = self.standardize_rep(P)
        g = self.modcat.compose(self.modcat.compose(sp_inv, f), sq_epi)
        return sq_cover, sp_cover, g, slq, slp

    def make_kp(self, P: Rep, check=True) -> Cx:
        return self.make_cf(P, P, self.modcat.identity_map(P), check=check)

    def make_tf(self, Q: Rep, P: Rep, f: RepMap, check=True) -> Cx:
        """Fixed-size two-term object: Q in degree m-1, P in degree m."""
        if self.kind != WIN:
            raise DomainError("make_tf applies to fixed-size complexes")
        if self.m < 2:
            raise DomainError("two-term objects need m >= 2")
        if check and (not self.modcat.is_projective(Q) or not self.modcat.is_projective(P)):
            raise DomainError("make_tf needs projective objects")
        sq, sp, g, slq, slp = self._as_projective_pair_full(Q, P, f)
        zero = self.modcat.zero_rep()
        comps = [zero] * self.m
        slots = [()] * self.m
        comps[self.m - 2], slots[self.m - 2] = sq, slq
        comps[self.m - 1], slots[self.m - 1] = sp, slp
        diffs = []
        for j in range(self.m - 1):
            diffs.append(g if j == self.m - 2 else self._zero_map(comps[j], comps[j + 1]))
        return Cx(WIN, self.m, None, comps, diffs, slots)

    def make_jp(self, P: Rep, check=True) -> Cx:
        return self.make_tf(P, P, self.modcat.identity_map(P), check=check)

    def make_sp(self, P: Rep, check=True) -> Cx:
        """P concentrated in degree 1 of the fixed-size category."""
        if self.kind != WIN:
            raise DomainError("make_sp applies to fixed-size complexes")
        if check and not self.modcat.is_projective(P):
            raise DomainError("make_sp needs a projective object")
        sp, _, _, slp = self.standardize_rep(P)
        zero = self.modcat.zero_rep()
        comps = [zero] * self.m
        slots = [()] * self.m
        comps[0], slots[0] = sp, slp
        diffs = [self._zero_map(comps[j], comps[j + 1]) for j in range(self.m - 1)]
        return Cx(WIN, self.m, None, comps, diffs, slots)

    def make_tp(self, P: Rep, check=True) -> Cx:
        """P concentrated in degree m of the fixed-size category."""
        if self.kind != WIN:
            raise DomainError("make_tp applies to fixed-size complexes")
        if check and not self.modcat.is_projective(P):
            raise DomainError("make_tp needs a projective object")
        sp, _, _, slp = self.standardize_rep(P)
        zero = self.modcat.zero_rep()
        comps = [zero] * self.m
        slots = [()] * self.m
        comps[self.m - 1], slots[self.m - 1] = sp, slp
        diffs = [self._zero_map(comps[j], comps[j + 1]) for j in range(self.m - 1)]
        return Cx(WIN, self.m, None, comps, diffs, slots)

    def make_cm(self, M: Rep) -> Cx:
        """Resolution complex of a module in the cyclic/bounded category."""
        if self.kind == WIN:
            raise DomainError("make_cm applies to cyclic or bounded complexes")
        omega, cover, delta, _ = self.modcat.min_proj_resolution(M)
        return self.make_cf(omega, cover, delta, check=False)

    def make_tm(self, M: Rep) -> Cx:
        """Resolution complex of a module in the fixed-size category (m >= 2)."""
        if self.kind != WIN:
            raise DomainError("make_tm applies to fixed-size complexes")
        if self.m < 2:
            raise DomainError("resolution complexes need m >= 2")
        omega, cover, delta, _ = self.modcat.min_proj_resolution(M)
        return self.make_tf(omega, cover, delta, check=False)

    # -- shift ----------------------------------------------------------------

    def shift(self, X: Cx, t: int) -> Cx:
        """Shift functor: degree i picks up old degree i+t, signs (-1)^t."""
        sign = 1 if t % 2 == 0 else -1
        if X.kind == CYC:
            m = X.m
            comps = [X.components[(j + t) % m] for j in range(m)]
            slots = [X.slots[(j + t) % m] for j in range(m)] if X.slots is not None else None
            diffs = [
                RepMap([(sign * mm) % self.p for mm in X.diffs[(j + t) % m].mats])
                for j in range(m)
            ]
            return Cx(CYC, m, None, comps, diffs, slots)
        if X.kind == CB:
            if not X.components:
                return X
            diffs = [RepMap([(sign * mm) % self.p for mm in d.mats]) for d in X.diffs]
            return Cx(CB, None, X.lo - t, X.components, diffs, X.slots)
        # window: support must stay inside 1..m
        m = X.m
        support = [j + 1 for j, c in enumerate(X.components) if c.total_dim > 0]
        for d in support:
            if not (1 <= d - t <= m):
                raise DomainError(f"shift by {t} pushes support outside 1..{m}")
        zero = self.modcat.zero_rep()
        comps = [zero] * m
        slots = [()] * m if X.slots is not None else None
        newdiffs = [None] * (m - 1)
        for j in range(m):
            src = j + 1 + t
            if 1 <= src <= m:
                comps[j] = X.components[src - 1]
                if slots is not None:
                    slots[j] = X.slots[src - 1]
        for j in range(m - 1):
            src = j + 1 + t
            if 1 <= src <= m - 1 and comps[j].total_dim + comps[j + 1].total_dim > 0:
                newdiffs[j] = RepMap([(sign * mm) % self.p for mm in X.diffs[src - 1].mats])
            else:
                newdiffs[j] = self._zero_map(comps[j], comps[j + 1])
        return Cx(WIN, m, None, comps, newdiffs, slots)

    # -- chain maps and Ext ----------------------------------------------------

    def _aligned_pair(self, X: Cx, Y: Cx):
        for Z in (X, Y):
            if Z.kind != self.kind or (self.kind != CB and Z.m != self.m):
                raise DomainError(
                    f"complex of kind {Z.kind!r} (m={Z.m}) in a {self.kind!r} (m={self.m}) category"
                )
        X, Y = self.standardize(X), self.standardize(Y)
        if self.kind != CB:
            return X, Y
        live = [Z for Z in (X, Y) if Z.components]
        if not live:
            return X, Y
        lo = min(Z.lo for Z in live)
        hi = max(Z.lo + len(Z.components) - 1 for Z in live)
        return self._pad(X, lo, hi), self._pad(Y, lo, hi)

    def cx_hom_basis_matrix(self, X: Cx, Y: Cx) -> np.ndarray:
        """Basis of chain maps X -> Y, flattened per degree then vertex."""
        ck = (X.bkey, Y.bkey)
        hit = self._hom_cache.get(ck)
        if hit is not None:
            return hit
        Xs, Ys = self._aligned_pair(X, Y)
        basis = _chain_hom_basis(self.modcat, Xs, Ys, cyclic=(self.kind == CYC))
        self._hom_cache[ck] = basis
        return basis

    def cx_hom_dim(self, X: Cx, Y: Cx) -> int:
        return self.cx_hom_basis_matrix(X, Y).shape[0]

    def cx_hom_basis(self, X: Cx, Y: Cx):
        """Chain maps as lists of per-degree RepMaps (on the aligned pair)."""
        Xs, Ys = self._aligned_pair(X, Y)
        basis = _chain_hom_basis(self.modcat, Xs, Ys, cyclic=(self.kind == CYC))
        return [_unflatten_chain(self.modcat, Xs, Ys, row) for row in basis]

    def homotopy_hom_dim(self, X: Cx, Y: Cx, i: int) -> int:
        """dim of chain maps X -> Y[i] modulo null-homotopic ones (bounded only)."""
        if self.kind == CYC:
            raise DomainError("homotopy Hom is computed for bounded complexes")
        if i < 1:
            raise DomainError("shift must be >= 1")
        cb = self.bounded_companion()
        Xb = self.embed_bounded(X)
        Yb = self.embed_bounded(Y)
        return cb._homotopy_dim_bounded(Xb, Yb, i)

    def _homotopy_dim_bounded(self, X: Cx, Y: Cx, i: int) -> int:
        ck = (X.bkey, Y.bkey, i)
        hit = self._ext_cache.get(ck)
        if hit is not None:
            return hit
        Yi = self.shift(Y, i)
        if not X.components or not Yi.components:
            self._ext_cache[ck] = 0
            return 0
        lo = min(X.lo, Yi.lo) - 1
        hi = max(X.lo + len(X.components), Yi.lo + len(Yi.components))
        Xp = self._pad(self.standardize(X), lo, hi)
        Yp = self._pad(self.standardize(Yi), lo, hi)
        z = _chain_hom_basis(self.modcat, Xp, Yp, cyclic=False).shape[0]
        b = _homotopy_image_rank(self.modcat, Xp, Yp)
        out = z - b
        if out < 0:
            raise InconsistencyError("homotopy rank exceeds chain-map dimension")
        self._ext_cache[ck] = out
        return out

    def embed_bounded(self, X: Cx) -> Cx:
        """Window complexes land in bounded degrees 1-m..0; bounded pass through."""
        if X.kind == CB:
            return X
        if X.kind != WIN:
            raise DomainError("only fixed-size complexes embed into bounded ones")
        Xs = self.standardize(X)
        cb = self.bounded_companion()
        return cb.trim(Cx(CB, None, 1 - X.m, Xs.components, Xs.diffs, Xs.slots))

    def ext_dim(self, X: Cx, Y: Cx, i: int) -> int:
        """dim Ext^i between complexes, i >= 0 (i = 0 is the chain-map space)."""
        if i == 0:
            return self.cx_hom_dim(X, Y)
        if self.kind == CYC:
            raise DomainError("Ext of cyclic complexes is not provided")
        return self.homotopy_hom_dim(X, Y, i)

    def euler_form(self, X: Cx, Y: Cx) -> int:
        """Alternating Ext sum: all i for bounded, i = 0..m-1 for fixed size."""
        ck = (X.bkey, Y.bkey)
        hit = self._euler_cache.get(ck)
        if hit is not None:
            return hit
        if self.kind == CYC:
            raise DomainError("Euler form is defined for bounded and fixed-size complexes")
        total = self.cx_hom_dim(X, Y)
        if self.kind == WIN:
            upper = self.m - 1
        else:
            Xb, Yb = self.embed_bounded(X), self.embed_bounded(Y)
            if not Xb.components or not Yb.components:
                upper = 0
            else:
                upper = (Yb.lo + len(Yb.components) - 1) - Xb.lo
        sign = -1
        for i in range(1, max(upper, 0) + 1):
            total += sign * self.homotopy_hom_dim(X, Y, i)
            sign = -sign
        self._euler_cache[ck] = total
        return total

    # -- minimization and decomposition ----------------------------------------

    def minimize(self, X: Cx):
        """Strip contractible two-term summands.

        Returns (core, stripped) with stripped a sorted tuple of (vertex,
        level) contractible labels and core + their sum isomorphic to X.
        """
        core, stripped = self._strip(self.standardize(X))
        return core, tuple(sorted(stripped))

    def _gen_offsets(self, slot_list):
        """Per-vertex coordinate of each slot's generator (top coefficient)."""
        q = self.modcat.quiver
        offs = []
        cur = [0] * q.n
        for v in slot_list:
            pv = self.modcat.projective(v)
            offs.append(cur[v - 1])
            for w in range(q.n):
                cur[w] += pv.dims[w]
        return offs

    def _strip(self, X: Cx):
        q = self.modcat.quiver
        p = self.p
        slots = [list(s) for s in X.slots]
        mats = [[m.copy() for m in d.mats] for d in X.diffs]
        ncomp = len(slots)
        cyclic = self.kind == CYC

        def level_of_pair(j):
            # contractible with differential from stored index j: label level
            if self.kind == CYC:
                return (-(j + 1)) % self.m
            if self.kind == WIN:
                return self.m - 1 - (j + 1)
            return -(X.lo + j + 1)

        stripped = []
        while True:
            pivot = None
            for j in range(len(mats)):
                k = (j + 1) % ncomp
                offs_j = self._gen_offsets(slots[j])
                offs_k = self._gen_offsets(slots[k])
                for r_idx, rv in enumerate(slots[k]):
                    for c_idx, cv in enumerate(slots[j]):
                        if rv != cv:
                            continue
                        if cyclic and self.m == 1 and r_idx == c_idx:
                            continue
                        alpha = int(mats[j][rv - 1][offs_k[r_idx], offs_j[c_idx]])
                        if alpha % p:
                            pivot = (j, k, r_idx, c_idx, rv, alpha % p)
                            break
                    if pivot:
                        break
                if pivot:
                    break
            if pivot is None:
                break
            j, k, r_idx, c_idx, v, alpha = pivot
            self._reduce_at(slots, mats, j, k, r_idx, c_idx, v, alpha)
            stripped.append((v, level_of_pair(j)))
        comps = [self._std_rep(s) for s in slots]
        diffs = [RepMap(ms) for ms in mats]
        core = Cx(X.kind, X.m, X.lo, comps, diffs, slots=[tuple(s) for s in slots])
        if self.kind == CB:
            core = self.trim(core)
        return core, stripped

    def _slot_ranges(self, slot_list):
        q = self.modcat.quiver
        ranges = []
        cur = [0] * q.n
        for v in slot_list:
            pv = self.modcat.projective(v)
            ranges.append(tuple((cur[w], cur[w] + pv.dims[w]) for w in range(q.n)))
            for w in range(q.n):
                cur[w] += pv.dims[w]
        return ranges

    def _reduce_at(self, slots, mats, j, k, r_idx, c_idx, v, alpha):
        """Clear the pivot's row and column by shears, then drop the two slots.

        Clearing the column first makes the subsequent row clearing exact even
        when source and target coincide (cyclic m = 1), because d*d = 0 kills
        the re-entrant term once the column is clean.  The differentials in
        and out of the removed slots vanish automatically, again by d*d = 0,
        so dropping their rows/columns realizes the basis change.
        """
        q = self.modcat.quiver
        p = self.p
        inv_alpha = self.field.inv(alpha)
        nj = len(mats)
        same_degree = k == j  # only cyclic m = 1
        out_idx = None
        in_idx = None
        if not same_degree:
            if self.kind == CYC:
                out_idx = k % nj
                in_idx = (j - 1) % nj
            else:
                out_idx = k if k < nj else None
                in_idx = j - 1 if j - 1 >= 0 else None
        src_ranges = self._slot_ranges(slots[j])
        tgt_ranges = self._slot_ranges(slots[k])
        dim_tgt = [sum(self.modcat.projective(s).dims[w] for s in slots[k]) for w in range(q.n)]
        dim_src = [sum(self.modcat.projective(s).dims[w] for s in slots[j]) for w in range(q.n)]
        # u clears the pivot column: u = I - N, N places D[r',c] / alpha into (r', r)
        u = [np.eye(dim_tgt[w], dtype=np.int64) for w in range(q.n)]
        uinv = [np.eye(dim_tgt[w], dtype=np.int64) for w in range(q.n)]
        for r2 in range(len(slots[k])):
            if r2 == r_idx:
                continue
            for w in range(q.n):
                a0, a1 = tgt_ranges[r2][w]
                b0, b1 = tgt_ranges[r_idx][w]
                c0, c1 = src_ranges[c_idx][w]
                block = (mats[j][w][a0:a1, c0:c1] * inv_alpha) % p
                if block.size:
                    u[w][a0:a1, b0:b1] = (-block) % p
                    uinv[w][a0:a1, b0:b1] = block
        if same_degree:
            for w in range(q.n):
                mats[j][w] = (u[w] @ mats[j][w] @ uinv[w]) % p
        else:
            for w in range(q.n):
                mats[j][w] = (u[w] @ mats[j][w]) % p
            if out_idx is not None:
                for w in range(q.n):
                    mats[out_idx][w] = (mats[out_idx][w] @ uinv[w]) % p
        # v clears the pivot row: v = I - M, M places D[r,c'] / alpha into (c, c')
        vs = [np.eye(dim_src[w], dtype=np.int64) for w in range(q.n)]
        vsinv = [np.eye(dim_src[w], dtype=np.int64) for w in range(q.n)]
        for c2 in range(len(slots[j])):
            if c2 == c_idx:
                continue
            for w in range(q.n):
                a0, a1 = src_ranges[c_idx][w]
                b0, b1 = src_ranges[c2][w]
                r0, r1 = tgt_ranges[r_idx][w]
                block = (inv_alpha * mats[j][w][r0:r1, b0:b1]) % p
                if block.size:
                    vs[w][a0:a1, b0:b1] = (-block) % p
                    vsinv[w][a0:a1, b0:b1] = block
        if same_degree:
            for w in range(q.n):
                mats[j][w] = (vs[w] @ mats[j][w] @ vsinv[w]) % p
        else:
            for w in range(q.n):
                mats[j][w] = (mats[j][w] @ vsinv[w]) % p
            if in_idx is not None:
                for w in range(q.n):
                    mats[in_idx][w] = (vs[w] @ mats[in_idx][w]) % p
        # drop slot r from degree k and slot c from degree j
        if same_degree:
            drop = sorted({r_idx, c_idx}, reverse=True)
            keep = self._keep_indices(slots[j], drop)
            for w in range(q.n):
                mats[j][w] = mats[j][w][np.ix_(keep[w], keep[w])]
            for idx in drop:
                slots[j].pop(idx)
            return
        keep_src = self._keep_indices(slots[j], [c_idx])
        keep_tgt = self._keep_indices(slots[k], [r_idx])
        for w in range(q.n):
            mats[j][w] = mats[j][w][np.ix_(keep_tgt[w], keep_src[w])]
        if out_idx is not None and out_idx != j:
            for w in range(q.n):
                mats[out_idx][w] = mats[out_idx][w][:, keep_tgt[w]]
        if in_idx is not None and in_idx != j and in_idx != out_idx:
            for w in range(q.n):
                mats[in_idx][w] = mats[in_idx][w][keep_src[w], :]
        elif in_idx is not None and in_idx == out_idx and in_idx != j:
            # cyclic m = 2: the single other differential loses both ranges
            for w in range(q.n):
                mats[in_idx][w] = mats[in_idx][w][keep_src[w], :]
        slots[k].pop(r_idx)
        slots[j].pop(c_idx)

    def _keep_indices(self, slot_list, drop_slots):
        q = self.modcat.quiver
        ranges = self._slot_ranges(slot_list)
        keep = []
        for w in range(q.n):
            total = sum(self.modcat.projective(s).dims[w] for s in slot_list)
            mask = np.ones(total, dtype=bool)
            for ds in drop_slots:
                a, b = ranges[ds][w]
                mask[a:b] = False
            keep.append(np.nonzero(mask)[0])
        return keep

    def homology(self, X: Cx, j: int) -> Rep:
        """Homology at stored index j: ker(d_j)/im(d_{j-1})."""
        X = self.standardize(X)
        comp = X.components[j]
        n = self.modcat.quiver.n
        ncomp = len(X.components)
        if self.kind == CYC:
            dout = X.diffs[j]
            din = X.diffs[(j - 1) % ncomp]
        else:
            dout = X.diffs[j] if j < len(X.diffs) else None
            din = X.diffs[j - 1] if j - 1 >= 0 else None
        if dout is not None:
            kb = [self.field.kernel_basis(dout.mats[w]) for w in range(n)]
        else:
            kb = [self.field.identity(comp.dims[w]) for w in range(n)]
        ker_rep, incl = self.modcat.subrep_from_bases(comp, kb)
        if din is None:
            return ker_rep
        im_in_ker = []
        for w in range(n):
            img = self.field.column_space_basis(din.mats[w])
            coords = self.field.solve(kb[w], img)
            if coords is None:
                raise InconsistencyError("image not inside kernel")
            im_in_ker.append(coords)
        quot, _ = self.modcat.quotient_by_subrep(ker_rep, im_in_ker)
        return quot

    def decompose(self, X: Cx, verify: bool = True):
        """Indecomposable label multiset of X, as a sorted tuple of (label, mult).

        Labels: ("K", v, r) / ("C", kid, r) in the cyclic and bounded cases;
        ("J", v, r) / ("T", kid, r) / ("S", v) in the fixed-size case, where v
        is the vertex of an indecomposable projective and kid a module class.
        Raises InconsistencyError if the labels do not reassemble to the
        component dimensions of X.
        """
        ck = X.bkey
        hit = self._decomp_cache.get(ck)
        if hit is not None:
            return hit
        if self.kind == WIN:
            cb = self.bounded_companion()
            inner = cb.decompose(self.embed_bounded(X), verify=False)
            counts = {}
            for label, mult in inner:
                counts[self._window_label(label)] = mult
            out = tuple(sorted(counts.items()))
        else:
            core, stripped = self.minimize(X)
            counts = {}
            for v, r in stripped:
                lab = ("K", v, r)
                counts[lab] = counts.get(lab, 0) + 1
            for j in range(len(core.components)):
                if core.components[j].total_dim == 0:
                    continue
                h = self.homology(core, j)
                deg = core.degree_of_index(j)
                r = (-deg) % self.m if self.kind == CYC else -deg
                for kid, mult in self.modcat.decompose(h):
                    lab = ("C", kid, r)
                    counts[lab] = counts.get(lab, 0) + mult
            out = tuple(sorted(counts.items()))
        if verify:
            self._verify_labels(X, out)
        self._decomp_cache[ck] = out
        return out

    def _window_label(self, label):
        if label[0] == "K":
            _, v, r = label
            if not (0 <= r <= self.m - 2):
                raise InconsistencyError("contractible label out of range for fixed size")
            return ("J", v, r)
        _, kid, r = label
        if r == self.m - 1:
            rep = self.modcat.indec_rep(kid)
            mults = self.modcat.projective_multiplicities(rep)
            live = [v for v, mv in enumerate(mults, start=1) if mv]
            if len(live) != 1 or mults[live[0] - 1] != 1:
                raise InconsistencyError("non-projective class at the top level")
            return ("S", live[0])
        if not (0 <= r <= self.m - 2):
            raise InconsistencyError("class label out of range for fixed size")
        return ("T", kid, r)

    def _verify_labels(self, X: Cx, labels):
        built = self.realize(labels)
        want = _component_dims_profile(self, X)
        got = _component_dims_profile(self, built)
        if want != got:
            raise InconsistencyError(
                f"decomposition does not reassemble: {want} vs {got} for labels {labels}"
            )

    # -- label realization -------------------------------------------------------

    def realize_label(self, label) -> Cx:
        kind = label[0]
        if kind == "K":
            _, v, r = label
            base = self.make_kp(self.modcat.projective(v), check=False)
            return self.shift_label(base, r)
        if kind == "C":
            _, kid, r = label
            base = self.make_cm(self.modcat.indec_rep(kid))
            return self.shift_label(base, r)
        if kind == "J":
            _, v, r = label
            return self.shift(self.make_jp(self.modcat.projective(v), check=False), r)
        if kind == "S":
            _, v = label
            return self.make_sp(self.modcat.projective(v), check=False)
        if kind == "T":
            _, kid, r = label
            return self.shift(self.make_tm(self.modcat.indec_rep(kid)), r)
        raise DomainError(f"unknown label {label!r}")

    def shift_label(self, X: Cx, r: int) -> Cx:
        """Shift placing a level-0 object at level r (cyclic or bounded)."""
        return X if r == 0 else self.shift(X, r)

    def realize(self, labels) -> Cx:
        ck = tuple(labels)
        hit = self._realize_cache.get(ck)
        if hit is None:
            parts = []
            for label, mult in labels:
                parts.extend([self.realize_label(label)] * mult)
            hit = self.direct_sum(parts) if parts else self.zero_cx()
            self._realize_cache[ck] = hit
        return hit

    def class_key(self, X: Cx):
        return self.decompose(X)

    def label_dims(self, labels):
        return _component_dims_profile(self, self.realize(labels))

    # -- isomorphism and automorphisms ---------------------------------------------

    def is_isomorphic(self, X: Cx, Y: Cx) -> bool:
        """Krull-Schmidt comparison of decomposition labels."""
        return self.decompose(X) == self.decompose(Y)

    def iso_sweep(self, X: Cx, Y: Cx, budget: int | None = None) -> bool:
        """Search for an invertible chain map (independent, budgeted oracle)."""
        budget = budget if budget is not None else self.modcat.budget
        Xs, Ys = self._aligned_pair(X, Y)
        prof_x = _component_dims_profile(self, Xs)
        prof_y = _component_dims_profile(self, Ys)
        if prof_x != prof_y:
            return False
        basis = _chain_hom_basis(self.modcat, Xs, Ys, cyclic=(self.kind == CYC))
        h = basis.shape[0]
        if sum(c.total_dim for c in Xs.components) == 0:
            return True
        if h == 0:
            return False
        if self.p**h > budget:
            raise BudgetExceededError(f"chain-iso sweep {self.p}^{h} exceeds budget")
        for chunk in iter_coefficient_chunks(h, self.p, SWEEP_CHUNK):
            rows = (chunk @ basis) % self.p
            ok = np.ones(rows.shape[0], dtype=bool)
            at = 0
            for j, comp in enumerate(Xs.components):
                for w in range(self.modcat.quiver.n):
                    r, c = Ys.components[j].dims[w], comp.dims[w]
                    if r != c:
                        return False
                    if r == 0:
                        continue
                    mats = rows[:, at : at + r * c].reshape(-1, r, c)
                    ok &= self.field.batch_invertible(mats)
                    at += r * c
            if ok.any():
                return True
        return False

    def end_data_of_label(self, label):
        """(dim End, |Aut|) of an indecomposable label's realization."""
        hit = self._label_end_cache.get(label)
        if hit is None:
            X = self.realize_label(label)
            e = self.cx_hom_dim(X, X)
            aut = self._aut_sweep(X)
            hit = (e, aut)
            self._label_end_cache[label] = hit
        return hit

    def _aut_sweep(self, X: Cx) -> int:
        Xs = self.standardize(X)
        basis = _chain_hom_basis(self.modcat, Xs, Xs, cyclic=(self.kind == CYC))
        e = basis.shape[0]
        if Xs.total_dim == 0:
            return 1
        if self.p**e > self.modcat.budget:
            raise BudgetExceededError("complex End sweep exceeds budget")
        count = 0
        for chunk in iter_coefficient_chunks(e, self.p, SWEEP_CHUNK):
            rows = (chunk @ basis) % self.p
            ok = np.ones(rows.shape[0], dtype=bool)
            at = 0
            for comp in Xs.components:
                for w in range(self.modcat.quiver.n):
                    d = comp.dims[w]
                    if d == 0:
                        continue
                    mats = rows[:, at : at + d * d].reshape(-1, d, d)
                    ok &= self.field.batch_invertible(mats)
                    at += d * d
            count += int(ok.sum())
        return count

    def label_hom_dim(self, la, lb) -> int:
        key = (la, lb)
        hit = self._label_hom_cache.get(key)
        if hit is None:
            hit = self.cx_hom_dim(self.realize_label(la), self.realize_label(lb))
            self._label_hom_cache[key] = hit
        return hit

    def aut_order(self, labels) -> int:
        """|Aut| of a class from Krull-Schmidt data, as for modules."""
        from .reps import _gl_order

        hit = self._aut_cache.get(labels)
        if hit is not None:
            return hit
        end_dim = 0
        for la, ma in labels:
            for lb, mb in labels:
                end_dim += ma * mb * self.label_hom_dim(la, lb)
        res_dim = 0
        out = 1
        for la, mult in labels:
            e, aut = self.end_data_of_label(la)
            rad_size = self.p**e - aut
            if rad_size == 0:
                r = 0
            else:
                r = round(np.log(rad_size) / np.log(self.p))
                if self.p**r != rad_size:
                    raise InconsistencyError("End ring of indecomposable complex not local")
            f = e - r
            res_dim += mult * mult * f
            out *= _gl_order(mult, self.p**f)
        rad = end_dim - res_dim
        if rad < 0:
            raise InconsistencyError("negative radical dimension for complex class")
        out *= self.p**rad
        self._aut_cache[labels] = out
        return out

    # -- extension classes (componentwise-split presentation) -----------------------

    def ext_cocycle_data(self, M: Cx, N: Cx):
        """Coset representatives of Ext^1(M, N) with middle-term builder.

        Every conflation 0 -> N -> L -> M -> 0 splits componentwise (the
        components of M are projective), so L has components N_j + M_j and
        differential blocks [[dN, s],[0, dM]] for a degree-(+1) intertwiner
        tuple s; equivalent extensions differ by t*dM - dN*t.  Returns
        (rows, build): rows are raw flattened s-tuples, one per Ext class;
        build(row) assembles the middle as a standard complex.
        """
        Ms, Ns = self._aligned_pair(M, N)
        q = self.modcat.quiver
        field = self.field
        p = self.p
        ncomp = len(Ms.components)
        cyclic = self.kind == CYC
        if ncomp == 0:
            zero_rows = np.zeros((1, 0), dtype=np.int64)
            return zero_rows, lambda row: self.zero_cx()
        # s_j : M_j -> N_{j+1}; raw layout degree-major, vertex-minor
        spairs = list(range(ncomp)) if cyclic else list(range(ncomp - 1))
        offs = {}
        tot = 0
        for j in spairs:
            k = (j + 1) % ncomp
            for w in range(q.n):
                offs[(j, w)] = tot
                tot += Ns.components[k].dims[w] * Ms.components[j].dims[w]
        blocks = []
        # each s_j is a morphism of representations
        for j in spairs:
            k = (j + 1) % ncomp
            Mc, Nc = Ms.components[j], Ns.components[k]
            for a, (s, t) in enumerate(q.arrows):
                s -= 1
                t -= 1
                rows_n = Nc.dims[t] * Mc.dims[s]
                if rows_n == 0:
                    continue
                block = np.zeros((rows_n, tot), dtype=np.int64)
                if Nc.dims[t] and Mc.dims[t]:
                    block[:, offs[(j, t)] : offs[(j, t)] + Nc.dims[t] * Mc.dims[t]] = np.kron(
                        field.identity(Nc.dims[t]), Mc.maps[a].T
                    )
                if Nc.dims[s] and Mc.dims[s]:
                    block[:, offs[(j, s)] : offs[(j, s)] + Nc.dims[s] * Mc.dims[s]] -= np.kron(
                        Nc.maps[a], field.identity(Mc.dims[s])
                    )
                blocks.append(block % p)
        # chain coupling: dN_{j+1} s_j + s_{j+1} dM_j = 0
        cpairs = spairs if cyclic else spairs[:-1]
        for j in cpairs:
            k = (j + 1) % ncomp
            kk = (j + 2) % ncomp
            for w in range(q.n):
                rows_n = Ns.components[kk].dims[w] * Ms.components[j].dims[w]
                if rows_n == 0:
                    continue
                block = np.zeros((rows_n, tot), dtype=np.int64)
                if Ns.components[kk].dims[w] and Ms.components[k].dims[w]:
                    block[:, offs[(k, w)] : offs[(k, w)] + Ns.components[kk].dims[w] * Ms.components[k].dims[w]] += np.kron(
                        field.identity(Ns.components[kk].dims[w]), Ms.diffs[j].mats[w].T
                    )
                if Ns.components[k].dims[w] and Ms.components[j].dims[w]:
                    block[:, offs[(j, w)] : offs[(j, w)] + Ns.components[k].dims[w] * Ms.components[j].dims[w]] += np.kron(
                        Ns.diffs[k].mats[w], field.identity(Ms.components[j].dims[w])
                    )
                blocks.append(block % p)
        if blocks:
            z_basis = field.kernel_basis(np.vstack(blocks)).T
        else:
            z_basis = field.identity(tot)
        # coboundaries: images of t-tuples, t_j in Hom_A(M_j, N_j)
        bound = []
        for j in range(ncomp):
            tb = self.modcat.hom_basis_matrix(Ms.components[j], Ns.components[j])
            for rowvec in tb:
                tmap = self.modcat.unflatten_hom(Ms.components[j], Ns.components[j], rowvec)
                vec = np.zeros(tot, dtype=np.int64)
                # contributes t_j dM_{j-1} to s_{j-1} and -dN_j t_j to s_j
                jm = (j - 1) % ncomp if cyclic else j - 1
                if (cyclic or jm >= 0) and (jm in spairs):
                    dM = Ms.diffs[jm]
                    for w in range(q.n):
                        r, c = Ns.components[j].dims[w], Ms.components[jm].dims[w]
                        if r and c:
                            add = field.matmul(tmap.mats[w], dM.mats[w])
                            vec[offs[(jm, w)] : offs[(jm, w)] + r * c] += add.reshape(-1)
                if j in spairs:
                    k = (j + 1) % ncomp
                    dN = Ns.diffs[j]
                    for w in range(q.n):
                        r, c = Ns.components[k].dims[w], Ms.components[j].dims[w]
                        if r and c:
                            add = field.matmul(dN.mats[w], tmap.mats[w])
                            vec[offs[(j, w)] : offs[(j, w)] + r * c] -= add.reshape(-1)
                bound.append(vec % p)
        if z_basis.shape[0] == 0:
            rows = np.zeros((1, tot), dtype=np.int64)
        else:
            if bound:
                bmat = np.array(bound, dtype=np.int64)
                coords = field.solve(z_basis.T, bmat.T)
                if coords is None:
                    raise InconsistencyError("coboundaries escape the cocycle space")
                _, pivots = field.rref(coords.T)
            else:
                pivots = []
            free = [i for i in range(z_basis.shape[0]) if i not in pivots]
            if p ** len(free) > self.modcat.budget:
                raise BudgetExceededError("extension-class enumeration exceeds budget")
            from itertools import product as _iproduct

            if free:
                combos = np.array(list(_iproduct(range(p), repeat=len(free))), dtype=np.int64)
                rows = (combos @ z_basis[free]) % p
            else:
                rows = np.zeros((1, tot), dtype=np.int64)

        def build(row):
            comps = []
            slots = []
            diffs = []
            for j in range(ncomp):
                slot = Ns.slots[j] + Ms.slots[j]
                slots.append(slot)
                comps.append(self._std_rep(slot))
            ndiff = ncomp if cyclic else ncomp - 1
            for j in range(ndiff):
                k = (j + 1) % ncomp
                mats = []
                for w in range(q.n):
                    nr, mr = Ns.components[k].dims[w], Ms.components[k].dims[w]
                    nc, mc = Ns.components[j].dims[w], Ms.components[j].dims[w]
                    mat = np.zeros((nr + mr, nc + mc), dtype=np.int64)
                    mat[:nr, :nc] = Ns.diffs[j].mats[w]
                    mat[nr:, nc:] = Ms.diffs[j].mats[w]
                    if (j, w) in offs:
                        sblock = row[offs[(j, w)] : offs[(j, w)] + nr * mc].reshape(nr, mc)
                        mat[:nr, nc:] = sblock
                    mats.append(mat)
                diffs.append(RepMap(mats))
            X = Cx(self.kind, self.m, Ms.lo, comps, diffs, slots)
            return self.trim(X) if self.kind == CB else X

        return rows, build

    # -- constructive window splitting (independent oracle) -------------------------

    def decompose_window_peeling(self, X: Cx):
        """Split a fixed-size complex by kernels/images and common-summand stripping.

        Independent of minimize(): peels a concentrated bottom piece, then for
        each adjacent pair strips the injective image-to-kernel map into a
        resolution piece plus a contractible part.
        """
        if self.kind != WIN:
            raise DomainError("peeling applies to fixed-size complexes")
        X = self.standardize(X)
        m = self.m
        counts = {}

        def add(lab, mult=1):
            if mult:
                counts[lab] = counts.get(lab, 0) + mult

        if m == 1:
            mults = self.modcat.projective_multiplicities(X.components[0])
            for v, mv in enumerate(mults, start=1):
                add(("S", v), mv)
            out = tuple(sorted(counts.items()))
            self._verify_labels(X, out)
            return out
        # bottom piece: kernel of the first differential, concentrated in degree 1
        first_ker = [self.field.kernel_basis(X.diffs[0].mats[w]) for w in range(self.modcat.quiver.n)]
        ker_rep, _ = self.modcat.subrep_from_bases(X.components[0], first_ker)
        for v, mv in enumerate(self.modcat.projective_multiplicities(ker_rep), start=1):
            add(("S", v), mv)
        for j in range(m - 1):
            # piece between stored degrees j and j+1: image(d_j) -> ker(d_{j+1})
            im_bases = [self.field.column_space_basis(X.diffs[j].mats[w]) for w in range(self.modcat.quiver.n)]
            im_rep, _ = self.modcat.subrep_from_bases(X.components[j + 1], im_bases)
            if j + 1 < m - 1:
                kb = [self.field.kernel_basis(X.diffs[j + 1].mats[w]) for w in range(self.modcat.quiver.n)]
            else:
                kb = [self.field.identity(X.components[j + 1].dims[w]) for w in range(self.modcat.quiver.n)]
            ker_rep, _ = self.modcat.subrep_from_bases(X.components[j + 1], kb)
            mats = []
            for w in range(self.modcat.quiver.n):
                coords = self.field.solve(kb[w], im_bases[w])
                if coords is None:
                    raise InconsistencyError("image escapes kernel in peeling")
                mats.append(coords)
            f = RepMap(mats)
            Y, r_mults = self.modcat.strip_common_summand(im_rep, ker_rep, f)
            r = m - (j + 1) - 1
            for kid, mult in self.modcat.decompose(Y):
                add(("T", kid, r), mult)
            for v, mv in enumerate(r_mults, start=1):
                add(("J", v, r), mv)
        out = tuple(sorted(counts.items()))
        self._verify_labels(X, out)
        return out

    # -- JSON ----------------------------------------------------------------------

    def to_json(self, X: Cx) -> str:
        data = {
            "kind": {"cyc": "cyclic", "win": "window", "cb": "bounded"}[X.kind],
            "m": X.m,
            "lo": X.lo,
            "components": [
                {"dims": list(c.dims), "maps": [m.tolist() for m in c.maps]} for c in X.components
            ],
            "diffs": [[m.tolist() for m in d.mats] for d in X.diffs],
        }
        return json.dumps(data, sort_keys=True)

    def from_json(self, text: str) -> Cx:
        data = json.loads(text)
        kind = {"cyclic": CYC, "window": WIN, "bounded": CB}.get(data.get("kind"))
        if kind != self.kind:
            raise DomainError(f"complex kind {data.get('kind')!r} does not match category")
        comps = []
        for c in data["components"]:
            comps.append(Rep(c["dims"], [np.array(m, dtype=np.int64) for m in c["maps"]]))
        diffs = [RepMap([np.array(m, dtype=np.int64) for m in d]) for d in data["diffs"]]
        return self.make_complex(comps, diffs, lo=data.get("lo"), check=True)


def euler_form_cb(cat: ComplexCategory, X: Cx, Y: Cx) -> int:
    """Euler form of the bounded ambient (alternating Ext sum over all i)."""
    if cat.kind != CB:
        raise DomainError("euler_form_cb needs the bounded category")
    return cat.euler_form(X, Y)


def euler_form_cm(cat: ComplexCategory, X: Cx, Y: Cx) -> int:
    """Euler form of the fixed-size ambient (Ext sum truncated at m - 1)."""
    if cat.kind != WIN:
        raise DomainError("euler_form_cm needs the fixed-size category")
    return cat.euler_form(X, Y)


# -- free helpers ---------------------------------------------------------------


def _component_dims_profile(cat: ComplexCategory, X: Cx):
    """Map degree -> dims tuple over nonzero components (kind-aware degrees)."""
    out = {}
    for j, c in enumerate(X.components):
        if c.total_dim:
            out[X.degree_of_index(j)] = c.dims
    return out


def _chain_offsets(modcat, X: Cx, Y: Cx):
    offs = {}
    tot = 0
    for j in range(len(X.components)):
        for w in range(modcat.quiver.n):
            offs[(j, w)] = tot
            tot += Y.components[j].dims[w] * X.components[j].dims[w]
    return offs, tot


def _chain_hom_basis(modcat, X: Cx, Y: Cx, cyclic: bool) -> np.ndarray:
    """Chain maps X -> Y as flattened rows (degree-major, vertex-minor)."""
    p = modcat.p
    field = modcat.field
    q = modcat.quiver
    ncomp = len(X.components)
    if ncomp == 0 or len(Y.components) != ncomp:
        if ncomp == 0:
            return np.zeros((0, 0), dtype=np.int64)
        raise DomainError("chain maps need complexes over the same degrees")
    offs, tot = _chain_offsets(modcat, X, Y)
    if tot == 0:
        return np.zeros((0, 0), dtype=np.int64)
    blocks = []
    # per-degree morphism constraints
    for j in range(ncomp):
        Xc, Yc = X.components[j], Y.components[j]
        for a, (s, t) in enumerate(q.arrows):
            s -= 1
            t -= 1
            rows = Yc.dims[t] * Xc.dims[s]
            if rows == 0:
                continue
            block = np.zeros((rows, tot), dtype=np.int64)
            if Yc.dims[t] and Xc.dims[t]:
                block[:, offs[(j, t)] : offs[(j, t)] + Yc.dims[t] * Xc.dims[t]] = np.kron(
                    field.identity(Yc.dims[t]), Xc.maps[a].T
                )
            if Yc.dims[s] and Xc.dims[s]:
                block[:, offs[(j, s)] : offs[(j, s)] + Yc.dims[s] * Xc.dims[s]] -= np.kron(
                    Yc.maps[a], field.identity(Xc.dims[s])
                )
            blocks.append(block % p)
    # chain compatibility: f_{j+1} dX_j = dY_j f_j
    pairs = range(ncomp) if cyclic else range(ncomp - 1)
    for j in pairs:
        k = (j + 1) % ncomp
        dX, dY = X.diffs[j], Y.diffs[j]
        for w in range(q.n):
            rows = Y.components[k].dims[w] * X.components[j].dims[w]
            if rows == 0:
                continue
            block = np.zeros((rows, tot), dtype=np.int64)
            if Y.components[k].dims[w] and X.components[k].dims[w]:
                block[:, offs[(k, w)] : offs[(k, w)] + Y.components[k].dims[w] * X.components[k].dims[w]] = np.kron(
                    field.identity(Y.components[k].dims[w]), dX.mats[w].T
                )
            if Y.components[j].dims[w] and X.components[j].dims[w]:
                block[:, offs[(j, w)] : offs[(j, w)] + Y.components[j].dims[w] * X.components[j].dims[w]] -= np.kron(
                    dY.mats[w], field.identity(X.components[j].dims[w])
                )
            blocks.append(block % p)
    if blocks:
        return field.kernel_basis(np.vstack(blocks)).T
    return field.identity(tot)


def _unflatten_chain(modcat, X: Cx, Y: Cx, row: np.ndarray):
    offs, _ = _chain_offsets(modcat, X, Y)
    out = []
    for j in range(len(X.components)):
        mats = []
        for w in range(modcat.quiver.n):
            r, c = Y.components[j].dims[w], X.components[j].dims[w]
            mats.append(row[offs[(j, w)] : offs[(j, w)] + r * c].reshape(r, c))
        out.append(RepMap(mats))
    return out


def _homotopy_image_rank(modcat, X: Cx, Y: Cx) -> int:
    """Rank of (s_j) -> (dY_{j-1} s_j + s_{j+1} dX_j): the null-homotopic maps."""
    field = modcat.field
    p = modcat.p
    ncomp = len(X.components)
    offs, tot = _chain_offsets(modcat, X, Y)
    if tot == 0:
        return 0
    images = []
    for j in range(ncomp):
        if j == 0:
            continue  # s_j : X_j -> Y_{j-1}; stored index j pairs with target j-1
        src = X.components[j]
        tgt = Y.components[j - 1]
        basis = modcat.hom_basis_matrix(src, tgt)
        for rowvec in basis:
            s = modcat.unflatten_hom(src, tgt, rowvec)
            f = np.zeros(tot, dtype=np.int64)
            # contribution dY_{j-1} s to f_j
            dY = Y.diffs[j - 1]
            for w in range(modcat.quiver.n):
                r, c = Y.components[j].dims[w], X.components[j].dims[w]
                if r and c:
                    add = field.matmul(dY.mats[w], s.mats[w])
                    f[offs[(j, w)] : offs[(j, w)] + r * c] += add.reshape(-1)
            # contribution s dX_{j-1} to f_{j-1}
            dX = X.diffs[j - 1]
            for w in range(modcat.quiver.n):
                r, c = Y.components[j - 1].dims[w], X.components[j - 1].dims[w]
                if r and c:
                    add = field.matmul(s.mats[w], dX.mats[w])
                    f[offs[(j - 1, w)] : offs[(j - 1, w)] + r * c] += add.reshape(-1)
            images.append(f % p)
    if not images:
        return 0
    return field.rank(np.array(images, dtype=np.int64))
