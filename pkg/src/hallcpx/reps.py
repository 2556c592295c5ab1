"""The abelian category of finite-dimensional representations of an acyclic
quiver over F_p.

A representation assigns a vector space F_p^{d_v} to each vertex and a matrix
to each arrow.  The category is hereditary with enough projectives; this
module provides Hom/Ext spaces, projective covers and minimal resolutions,
Krull-Schmidt decomposition (Fitting-lemma splitting), isomorphism testing,
automorphism counts, and bounded iso-class enumeration.

All operations are pure functions of immutable values; the memo caches on
``ModuleCategory`` are confined to the owning instance (one worker).
"""

from __future__ import annotations

from itertools import product as iproduct

import numpy as np

from .errors import BudgetExceededError, DomainError, InconsistencyError
from .field import PrimeField, iter_coefficient_chunks
from .quiver import Quiver

DEFAULT_BUDGET = 2**24
SWEEP_CHUNK = 1 << 14


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class Rep:
    """A quiver representation: dims per vertex, one matrix per arrow.

    The matrix of arrow a:(s,t) has shape dims[t-1] x dims[s-1].  Immutable.
    """

    __slots__ = ("dims", "maps", "_bkey")

    def __init__(self, dims, maps):
        self.dims = tuple(int(d) for d in dims)
        self.maps = tuple(_freeze(np.ascontiguousarray(m, dtype=np.int64)) for m in maps)
        self._bkey = None

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def bkey(self):
        """Byte-level identity used for memoization (not iso-invariant)."""
        if self._bkey is None:
            self._bkey = (self.dims, tuple(m.tobytes() for m in self.maps))
        return self._bkey

    def __repr__(self):
        return f"Rep(dims={self.dims})"


class RepMap:
    """A morphism of representations: one matrix per vertex."""

    __slots__ = ("mats",)

    def __init__(self, mats):
        self.mats = tuple(_freeze(np.ascontiguousarray(m, dtype=np.int64)) for m in mats)

    def __repr__(self):
        return f"RepMap(shapes={[m.shape for m in self.mats]})"


def _gl_order(n: int, q: int) -> int:
    out = 1
    for k in range(n):
        out *= q**n - q**k
    return out


class ModuleCategory:
    """rep(kQ) over F_p for an acyclic quiver Q, with memoized class keys."""

    def __init__(self, quiver: Quiver, p: int, budget: int = DEFAULT_BUDGET):
        self.quiver = quiver
        self.field = PrimeField(p)
        self.p = self.field.p
        self.budget = int(budget)
        n = quiver.n
        self._projectives = tuple(self._build_projective(v) for v in range(1, n + 1))
        # fixed path order for fingerprints: nonempty paths sorted by (src, tgt, path)
        self._fp_paths = sorted(
            ((s, t, path) for (s, t), ps in quiver._paths.items() for path in ps if path),
        )
        self._hom_cache = {}
        self._indec_buckets = {}
        self._indec_reps = {}
        self._indec_meta = {}
        self._indec_seq = 0
        self._key_cache = {}
        self._decomp_cache = {}
        self._aut_cache = {}
        # seed the registry with the simples and projectives, in vertex order,
        # so small keys are stable regardless of later discovery order
        for v in range(1, n + 1):
            self.class_key(self.simple(v))
        for v in range(1, n + 1):
            self.class_key(self.projective(v))

    # -- basic objects -----------------------------------------------------

    def zero_rep(self) -> Rep:
        n = self.quiver.n
        dims = (0,) * n
        maps = [np.zeros((0, 0), dtype=np.int64) for _ in self.quiver.arrows]
        return Rep(dims, maps)

    def simple(self, v: int) -> Rep:
        dims = [0] * self.quiver.n
        dims[v - 1] = 1
        maps = []
        for s, t in self.quiver.arrows:
            maps.append(np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64))
        return Rep(dims, maps)

    def _build_projective(self, v: int) -> Rep:
        """Path-space representation at v: basis of paths v -> w at vertex w."""
        q = self.quiver
        bases = {w: sorted(q.paths(v, w), key=lambda pth: (len(pth), pth)) for w in range(1, q.n + 1)}
        dims = [len(bases[w]) for w in range(1, q.n + 1)]
        maps = []
        for a, (s, t) in enumerate(q.arrows):
            m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
            tgt_index = {path: i for i, path in enumerate(bases[t])}
            for j, path in enumerate(bases[s]):
                m[tgt_index[path + (a,)], j] = 1
            maps.append(m)
        return Rep(dims, maps)

    def projective(self, v: int) -> Rep:
        return self._projectives[v - 1]

    def projective_sum(self, mults) -> Rep:
        """Direct sum of projectives with the given multiplicity vector."""
        reps = []
        for v, m in enumerate(mults, start=1):
            reps.extend([self.projective(v)] * int(m))
        return self.direct_sum(reps)

    def direct_sum(self, reps) -> Rep:
        reps = list(reps)
        if not reps:
            return self.zero_rep()
        n = self.quiver.n
        dims = [sum(r.dims[v] for r in reps) for v in range(n)]
        maps = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
            ro = co = 0
            for r in reps:
                rt, cs = r.dims[t - 1], r.dims[s - 1]
                m[ro : ro + rt, co : co + cs] = r.maps[a]
                ro += rt
                co += cs
            maps.append(m)
        return Rep(dims, maps)

    # -- morphisms ---------------------------------------------------------

    def path_composite(self, rep: Rep, path) -> np.ndarray:
        """Composite of rep's arrow matrices along a path (tuple of arrow ids)."""
        if not path:
            raise DomainError("path must be nonempty")
        s = self.quiver.arrows[path[0]][0]
        m = self.field.identity(rep.dims[s - 1])
        for a in path:
            m = self.field.matmul(rep.maps[a], m)
        return m

    def _hom_offsets(self, M: Rep, N: Rep):
        offs, tot = [], 0
        for v in range(self.quiver.n):
            offs.append(tot)
            tot += N.dims[v] * M.dims[v]
        return offs, tot

    def hom_basis_matrix(self, M: Rep, N: Rep) -> np.ndarray:
        """Basis of Hom(M, N), one flattened morphism per row.

        Row layout: concatenation over vertices of the row-major entries of
        f_v (an N.dims[v] x M.dims[v] matrix).
        """
        ck = (M.bkey, N.bkey)
        hit = self._hom_cache.get(ck)
        if hit is not None:
            return hit
        offs, tot = self._hom_offsets(M, N)
        if tot == 0:
            out = np.zeros((0, 0), dtype=np.int64)
            self._hom_cache[ck] = out
            return out
        blocks = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            s -= 1
            t -= 1
            rows = N.dims[t] * M.dims[s]
            if rows == 0:
                continue
            block = np.zeros((rows, tot), dtype=np.int64)
            if N.dims[t] and M.dims[t]:
                block[:, offs[t] : offs[t] + N.dims[t] * M.dims[t]] = np.kron(
                    self.field.identity(N.dims[t]), M.maps[a].T
                )
            if N.dims[s] and M.dims[s]:
                block[:, offs[s] : offs[s] + N.dims[s] * M.dims[s]] -= np.kron(
                    N.maps[a], self.field.identity(M.dims[s])
                )
            blocks.append(block % self.p)
        if blocks:
            system = np.vstack(blocks)
            basis = self.field.kernel_basis(system).T
        else:
            basis = self.field.identity(tot)
        basis = _freeze(np.ascontiguousarray(basis))
        self._hom_cache[ck] = basis
        return basis

    def unflatten_hom(self, M: Rep, N: Rep, row: np.ndarray) -> RepMap:
        offs, _ = self._hom_offsets(M, N)
        mats = []
        for v in range(self.quiver.n):
            r, c = N.dims[v], M.dims[v]
            mats.append(row[offs[v] : offs[v] + r * c].reshape(r, c))
        return RepMap(mats)

    def flatten_hom(self, f: RepMap) -> np.ndarray:
        return np.concatenate([m.reshape(-1) for m in f.mats]) if f.mats else np.zeros(0, dtype=np.int64)

    def hom_basis(self, M: Rep, N: Rep):
        """Basis of the space of morphisms M -> N, as RepMap objects."""
        basis = self.hom_basis_matrix(M, N)
        return [self.unflatten_hom(M, N, row) for row in basis]

    def hom_dim(self, M: Rep, N: Rep) -> int:
        return self.hom_basis_matrix(M, N).shape[0]

    def is_rep_map(self, M: Rep, N: Rep, f: RepMap) -> bool:
        for a, (s, t) in enumerate(self.quiver.arrows):
            lhs = self.field.matmul(f.mats[t - 1], M.maps[a])
            rhs = self.field.matmul(N.maps[a], f.mats[s - 1])
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def compose(self, g: RepMap, f: RepMap) -> RepMap:
        return RepMap([self.field.matmul(gm, fm) for gm, fm in zip(g.mats, f.mats)])

    def identity_map(self, M: Rep) -> RepMap:
        return RepMap([self.field.identity(d) for d in M.dims])

    def is_injective_map(self, f: RepMap) -> bool:
        return all(self.field.rank(m) == m.shape[1] for m in f.mats)

    def is_surjective_map(self, f: RepMap) -> bool:
        return all(self.field.rank(m) == m.shape[0] for m in f.mats)

    def is_invertible_map(self, f: RepMap) -> bool:
        return all(m.shape[0] == m.shape[1] and self.field.is_invertible(m) for m in f.mats)

    # -- Euler form and Ext ------------------------------------------------

    def euler_form(self, dM, dN) -> int:
        """<dM, dN> = sum_v dM_v dN_v - sum_{a:s->t} dM_s dN_t."""
        total = sum(int(a) * int(b) for a, b in zip(dM, dN))
        for s, t in self.quiver.arrows:
            total -= int(dM[s - 1]) * int(dN[t - 1])
        return total

    def ext1_dim(self, M: Rep, N: Rep) -> int:
        d = self.hom_dim(M, N) - self.euler_form(M.dims, N.dims)
        if d < 0:
            raise InconsistencyError("negative Ext dimension; hereditarity violated")
        return d

    # -- sub/quotient machinery ---------------------------------------------

    def subrep_from_bases(self, M: Rep, bases):
        """Subrepresentation spanned by per-vertex basis columns.

        bases[v] is a dims[v] x k_v matrix of independent columns whose spans
        are stable under all arrow maps.  Returns (S, incl) with incl the
        inclusion RepMap.
        """
        dims = [b.shape[1] for b in bases]
        maps = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            image = self.field.matmul(M.maps[a], bases[s - 1])
            x = self.field.solve(bases[t - 1], image)
            if x is None:
                raise InconsistencyError("subspaces not stable under arrow maps")
            maps.append(x)
        sub = Rep(dims, maps)
        return sub, RepMap(list(bases))

    def _complement_columns(self, basis: np.ndarray) -> np.ndarray:
        """Identity columns completing independent columns `basis` to a basis."""
        d = basis.shape[0]
        if basis.shape[1] == 0:
            return self.field.identity(d)
        _, pivots = self.field.rref(basis.T)
        comp = [i for i in range(d) if i not in pivots]
        # pivots of rref(basis^T) index coordinates already covered; the
        # remaining identity columns extend to a full basis
        out = np.zeros((d, len(comp)), dtype=np.int64)
        for j, i in enumerate(comp):
            out[i, j] = 1
        full = np.hstack([basis, out])
        if self.field.rank(full) != d:
            raise InconsistencyError("complement extension failed")
        return out

    def quotient_by_subrep(self, M: Rep, bases):
        """Quotient of M by the stable subspaces `bases`.

        Returns (Q, proj) with proj the projection RepMap M -> Q.
        """
        projs = []
        lifts = []
        dims = []
        for v in range(self.quiver.n):
            b = bases[v]
            c = self._complement_columns(b)
            full = np.hstack([b, c])
            inv = self.field.inverse(full) if full.shape[0] else full.T
            projs.append(inv[b.shape[1] :, :])
            lifts.append(c)
            dims.append(c.shape[1])
        maps = []
        for a, (s, t) in enumerate(self.quiver.arrows):
            maps.append(self.field.mats_mul(projs[t - 1], M.maps[a], lifts[s - 1]))
        return Rep(dims, maps), RepMap(projs)

    def kernel_subrep(self, M: Rep, N: Rep, f: RepMap):
        bases = [self.field.kernel_basis(m) for m in f.mats]
        return self.subrep_from_bases(M, bases)

    def image_subrep(self, N: Rep, f: RepMap):
        bases = [self.field.column_space_basis(m) for m in f.mats]
        return self.subrep_from_bases(N, bases)

    def cokernel(self, N: Rep, f: RepMap):
        bases = [self.field.column_space_basis(m) for m in f.mats]
        return self.quotient_by_subrep(N, bases)

    # -- radical, top, covers, resolutions ----------------------------------

    def radical(self, M: Rep):
        """The subrepresentation rad(M): at v, the sum of incoming images."""
        bases = []
        for v in range(1, self.quiver.n + 1):
            incoming = [M.maps[a] for a in self.quiver.arrows_in[v] if M.maps[a].size]
            if incoming:
                bases.append(self.field.column_space_basis(np.hstack(incoming)))
            else:
                bases.append(np.zeros((M.dims[v - 1], 0), dtype=np.int64))
        return self.subrep_from_bases(M, bases)

    def top(self, M: Rep):
        """M / rad(M): semisimple, returned with the projection map."""
        bases = []
        for v in range(1, self.quiver.n + 1):
            incoming = [M.maps[a] for a in self.quiver.arrows_in[v] if M.maps[a].size]
            if incoming:
                bases.append(self.field.column_space_basis(np.hstack(incoming)))
            else:
                bases.append(np.zeros((M.dims[v - 1], 0), dtype=np.int64))
        return self.quotient_by_subrep(M, bases)

    def projective_cover(self, M: Rep):
        """(P, epi) with P projective, epi surjective, ker(epi) in rad(P)."""
        q = self.quiver
        rad_bases = []
        for v in range(1, q.n + 1):
            incoming = [M.maps[a] for a in q.arrows_in[v] if M.maps[a].size]
            if incoming:
                rad_bases.append(self.field.column_space_basis(np.hstack(incoming)))
            else:
                rad_bases.append(np.zeros((M.dims[v - 1], 0), dtype=np.int64))
        gens = [self._complement_columns(rad_bases[v]) if M.dims[v] else np.zeros((0, 0), dtype=np.int64) for v in range(q.n)]
        mults = [g.shape[1] for g in gens]
        cover = self.projective_sum(mults)
        # epi columns follow the projective_sum layout: vertex v blocks, one
        # copy of P_v per generator, path-basis order inside each copy
        epi_mats = [np.zeros((M.dims[w], cover.dims[w]), dtype=np.int64) for w in range(q.n)]
        col = {w: 0 for w in range(q.n)}
        for v in range(1, q.n + 1):
            pv = self.projective(v)
            path_bases = {w: sorted(q.paths(v, w), key=lambda pth: (len(pth), pth)) for w in range(1, q.n + 1)}
            for copy_idx in range(mults[v - 1]):
                gvec = gens[v - 1][:, copy_idx]
                for w in range(1, q.n + 1):
                    for path in path_bases[w]:
                        if path:
                            target = (self.path_composite(M, path) @ gvec) % self.p
                        else:
                            target = gvec
                        epi_mats[w - 1][:, col[w - 1]] = target
                        col[w - 1] += 1
        for w in range(q.n):
            if col[w] != cover.dims[w]:
                raise InconsistencyError("cover column layout mismatch")
        epi = RepMap(epi_mats)
        if not self.is_rep_map(cover, M, epi):
            raise InconsistencyError("cover map does not commute")
        if not self.is_surjective_map(epi):
            raise InconsistencyError("cover map not surjective")
        return cover, epi

    def min_proj_resolution(self, M: Rep):
        """Minimal resolution (Omega, P, delta, epi): 0 -> Omega -> P -> M -> 0."""
        cover, epi = self.projective_cover(M)
        omega, incl = self.kernel_subrep(cover, M, epi)
        return omega, cover, incl, epi

    def is_projective(self, M: Rep) -> bool:
        cover, _ = self.projective_cover(M)
        return cover.total_dim == M.total_dim

    def projective_multiplicities(self, P: Rep):
        """Multiplicities m with P iso to the sum of P_v^{m_v} (P projective)."""
        dims = list(P.dims)
        mult = [0] * self.quiver.n
        for v in self.quiver.topological:
            mult[v - 1] = dims[v - 1]
            if mult[v - 1] < 0:
                raise InconsistencyError("not a projective dimension vector")
            if mult[v - 1]:
                pv = self.projective(v)
                for w in range(self.quiver.n):
                    dims[w] -= mult[v - 1] * pv.dims[w]
        if any(d != 0 for d in dims):
            raise InconsistencyError("dimension vector not a projective combination")
        return tuple(mult)

    def strip_common_summand(self, Q: Rep, P: Rep, f: RepMap):
        """Split an injective map of projectives as (minimal part) + identity.

        Returns (Y, R_mults) where Y = coker(f) and P iso P_Y + R with P_Y the
        projective cover of Y; then (Q -> P) iso (Omega_Y + R -> P_Y + R).
        """
        if not self.is_injective_map(f):
            raise DomainError("map is not injective")
        Y, _ = self.cokernel(P, f)
        p_y, _ = self.projective_cover(Y)
        mult_p = self.projective_multiplicities(P)
        mult_py = self.projective_multiplicities(p_y)
        r = tuple(a - b for a, b in zip(mult_p, mult_py))
        if any(x < 0 for x in r):
            raise InconsistencyError("cover of cokernel exceeds ambient projective")
        return Y, r

    # -- fingerprints, decomposition, keys -----------------------------------

    def fingerprint(self, M: Rep):
        ranks = tuple(self.field.rank(self.path_composite(M, path)) for _, _, path in self._fp_paths)
        return (M.dims, ranks)

    def _fitting_split(self, M: Rep, u_mats):
        """Try to split M along the stable-power kernel/image of u; None if nil or iso."""
        k = max(M.total_dim, 1)
        power = [m.copy() for m in u_mats]
        steps = 1
        while steps < k:
            power = [self.field.matmul(m, m) for m in power]
            steps *= 2
        kb = [self.field.kernel_basis(m) for m in power]
        kdim = sum(b.shape[1] for b in kb)
        if kdim == 0 or kdim == M.total_dim:
            return None
        ib = [self.field.column_space_basis(m) for m in power]
        for v in range(self.quiver.n):
            joint = np.hstack([kb[v], ib[v]])
            if joint.shape[1] != M.dims[v] or (joint.size and self.field.rank(joint) != M.dims[v]):
                raise InconsistencyError("kernel/image do not split at stable power")
        ker_sub, _ = self.subrep_from_bases(M, kb)
        im_sub, _ = self.subrep_from_bases(M, ib)
        return ker_sub, im_sub

    def _indecomposable_pieces(self, M: Rep):
        if M.total_dim == 0:
            return []
        ends = self.hom_basis_matrix(M, M)
        e = ends.shape[0]
        if e == 1:
            return [M]

        def try_split(row):
            u = self.unflatten_hom(M, M, row)
            split = self._fitting_split(M, u.mats)
            if split is None:
                return None
            a, b = split
            return self._indecomposable_pieces(a) + self._indecomposable_pieces(b)

        # cheap tiers first: basis elements, then pairwise sums; the exhaustive
        # sweep below is only the (budgeted) certificate of indecomposability
        for row in ends:
            out = try_split(row)
            if out is not None:
                return out
        for i in range(e):
            for j in range(i + 1, e):
                out = try_split((ends[i] + ends[j]) % self.p)
                if out is not None:
                    return out
        if self.p**e > self.budget:
            raise BudgetExceededError(
                f"endomorphism sweep {self.p}^{e} exceeds budget {self.budget}"
            )
        for chunk in iter_coefficient_chunks(e, self.p, SWEEP_CHUNK):
            for coeffs in chunk:
                if not coeffs.any():
                    continue
                out = try_split((coeffs @ ends) % self.p)
                if out is not None:
                    return out
        return [M]

    def _register_indec(self, X: Rep):
        fp = self.fingerprint(X)
        bucket = self._indec_buckets.setdefault(fp, [])
        for rep, kid in bucket:
            if self._iso_sweep(rep, X):
                return kid
        kid = (X.dims, self._indec_seq)
        self._indec_seq += 1
        bucket.append((X, kid))
        self._indec_reps[kid] = X
        return kid

    def decompose(self, M: Rep):
        """Indecomposable summand multiset, as a sorted tuple of (key, mult)."""
        ck = M.bkey
        hit = self._decomp_cache.get(ck)
        if hit is not None:
            return hit
        counts = {}
        for piece in self._indecomposable_pieces(M):
            kid = self._register_indec(piece)
            counts[kid] = counts.get(kid, 0) + 1
        out = tuple(sorted(counts.items()))
        self._decomp_cache[ck] = out
        return out

    def class_key(self, M: Rep):
        """Canonical iso-class key: the indecomposable-multiset of M."""
        ck = M.bkey
        hit = self._key_cache.get(ck)
        if hit is None:
            hit = self.decompose(M)
            self._key_cache[ck] = hit
        return hit

    def rep_of_key(self, key) -> Rep:
        reps = []
        for kid, mult in key:
            reps.extend([self._indec_reps[kid]] * mult)
        return self.direct_sum(reps)

    def indec_rep(self, kid) -> Rep:
        return self._indec_reps[kid]

    def dims_of_key(self, key):
        dims = np.zeros(self.quiver.n, dtype=np.int64)
        for kid, mult in key:
            dims += mult * np.array(kid[0], dtype=np.int64)
        return tuple(int(d) for d in dims)

    def key_name(self, key) -> str:
        """Short human-readable name, e.g. 'S1+P1' or '0'."""
        if not key:
            return "0"
        parts = []
        for kid, mult in key:
            rep = self._indec_reps[kid]
            name = None
            for v in range(1, self.quiver.n + 1):
                if kid == self.class_key(self.simple(v))[0][0]:
                    name = f"S{v}"
                    break
                if kid == self.class_key(self.projective(v))[0][0]:
                    name = f"P{v}"
                    break
            if name is None:
                name = f"X{kid[1]}{list(rep.dims)}"
            parts.extend([name] * mult)
        return "+".join(parts)

    # -- isomorphism and automorphisms ---------------------------------------

    def _iso_sweep(self, M: Rep, N: Rep) -> bool:
        """Search Hom(M, N) for an everywhere-invertible element."""
        if M.dims != N.dims:
            return False
        basis = self.hom_basis_matrix(M, N)
        h = basis.shape[0]
        if M.total_dim == 0:
            return True
        if h == 0:
            return False
        if self.p**h > self.budget:
            raise BudgetExceededError(f"isomorphism sweep {self.p}^{h} exceeds budget")
        offs, _ = self._hom_offsets(M, N)
        live = [v for v in range(self.quiver.n) if M.dims[v]]
        for chunk in iter_coefficient_chunks(h, self.p, SWEEP_CHUNK):
            rows = (chunk @ basis) % self.p
            ok = np.ones(rows.shape[0], dtype=bool)
            for v in live:
                d = M.dims[v]
                mats = rows[:, offs[v] : offs[v] + d * d].reshape(-1, d, d)
                ok &= self.field.batch_invertible(mats)
                if not ok.any():
                    break
            if ok.any():
                return True
        return False

    def is_isomorphic(self, M: Rep, N: Rep) -> bool:
        """True iff some morphism M -> N is invertible at every vertex.

        Dimension vectors and path-rank fingerprints reject fast; the sweep
        only runs on surviving pairs.
        """
        if M.dims != N.dims:
            return False
        if self.fingerprint(M) != self.fingerprint(N):
            return False
        return self._iso_sweep(M, N)

    def aut_count(self, M: Rep) -> int:
        """|Aut(M)| by enumerating the endomorphism space."""
        ends = self.hom_basis_matrix(M, M)
        e = ends.shape[0]
        if M.total_dim == 0:
            return 1
        if self.p**e > self.budget:
            raise BudgetExceededError(f"End sweep {self.p}^{e} exceeds budget {self.budget}")
        offs, _ = self._hom_offsets(M, M)
        live = [v for v in range(self.quiver.n) if M.dims[v]]
        count = 0
        for chunk in iter_coefficient_chunks(e, self.p, SWEEP_CHUNK):
            rows = (chunk @ ends) % self.p
            ok = np.ones(rows.shape[0], dtype=bool)
            for v in live:
                d = M.dims[v]
                mats = rows[:, offs[v] : offs[v] + d * d].reshape(-1, d, d)
                ok &= self.field.batch_invertible(mats)
            count += int(ok.sum())
        return count

    def _indec_unit_data(self, kid):
        """(residue field exponent, radical dim) for an indecomposable class."""
        meta = self._indec_meta.get(kid)
        if meta is None:
            X = self._indec_reps[kid]
            e = self.hom_dim(X, X)
            aut = self.aut_count(X)
            rad_size = self.p**e - aut
            if rad_size == 0:
                r = 0
            else:
                r = round(np.log(rad_size) / np.log(self.p))
                if self.p**r != rad_size:
                    raise InconsistencyError("End ring of indecomposable is not local")
            meta = (e - r, r)
            self._indec_meta[kid] = meta
        return meta

    def aut_order(self, key) -> int:
        """|Aut| of a class from its Krull-Schmidt data (fast path).

        Units of End(M) = GL parts over the residue fields times the radical:
        |Aut| = prod_i |GL_{n_i}(p^{f_i})| * p^{dim rad End(M)}.
        """
        hit = self._aut_cache.get(key)
        if hit is not None:
            return hit
        kids = [kid for kid, _ in key]
        mults = [m for _, m in key]
        end_dim = 0
        for i, ki in enumerate(kids):
            for j, kj in enumerate(kids):
                end_dim += mults[i] * mults[j] * self.hom_dim(self._indec_reps[ki], self._indec_reps[kj])
        res_dim = 0
        out = 1
        for ki, m in zip(kids, mults):
            f, _ = self._indec_unit_data(ki)
            res_dim += m * m * f
            out *= _gl_order(m, self.p**f)
        rad = end_dim - res_dim
        if rad < 0:
            raise InconsistencyError("radical dimension negative")
        out *= self.p**rad
        self._aut_cache[key] = out
        return out

    # -- enumeration ---------------------------------------------------------

    def enumerate_iso_classes(self, dmax):
        """One representative per iso class with dims <= dmax componentwise.

        Deterministic: classes are sorted by (dims, fingerprint, first-found
        order within their dimension vector).
        """
        dmax = tuple(int(d) for d in dmax)
        if len(dmax) != self.quiver.n:
            raise DomainError("bound length must equal vertex count")
        found = []
        for dims in iproduct(*(range(d + 1) for d in dmax)):
            shapes = [(dims[t - 1], dims[s - 1]) for s, t in self.quiver.arrows]
            cells = sum(r * c for r, c in shapes)
            if self.p**cells > self.budget:
                raise BudgetExceededError(
                    f"{self.p}^{cells} matrix tuples at dims {dims} exceed budget"
                )
            seen = set()
            order = 0
            for chunk in iter_coefficient_chunks(cells, self.p, SWEEP_CHUNK):
                for row in chunk:
                    maps = []
                    at = 0
                    for r, c in shapes:
                        maps.append(row[at : at + r * c].reshape(r, c))
                        at += r * c
                    rep = Rep(dims, maps)
                    key = self.class_key(rep)
                    if key not in seen:
                        seen.add(key)
                        found.append((dims, self.fingerprint(rep), order, rep))
                        order += 1
        found.sort(key=lambda item: (item[0], item[1], item[2]))
        return [rep for _, _, _, rep in found]

    # -- extension classes (hereditary Ext^1 presentation) --------------------

    def ext_cocycle_data(self, M: Rep, N: Rep):
        """Coset representatives of Ext^1(M, N) with explicit middle terms.

        Uses the minimal resolution 0 -> Omega -> P -> M -> 0: Ext^1(M,N) is
        Hom(Omega, N) modulo restrictions of Hom(P, N).  Returns
        (coset_rows, build) where each row is a flattened Hom(Omega, N)
        element in a fixed complement of the restriction image, one per Ext
        class, and build(row) constructs the middle term with its maps.
        """
        omega, cover, delta, epi = self.min_proj_resolution(M)
        r_basis = self.hom_basis_matrix(omega, N)
        if r_basis.shape[0] == 0:
            rows = np.zeros((1, r_basis.shape[1]), dtype=np.int64)
        else:
            p_basis = self.hom_basis_matrix(cover, N)
            restricted = []
            for prow in p_basis:
                g = self.unflatten_hom(cover, N, prow)
                comp = self.compose(g, delta)
                restricted.append(self.flatten_hom(comp))
            if restricted:
                b = np.array(restricted, dtype=np.int64)
                coords = self.field.solve(r_basis.T, b.T)
                if coords is None:
                    raise InconsistencyError("restriction image escapes Hom(Omega, N)")
                _, pivots = self.field.rref(coords.T)
            else:
                pivots = []
            free = [i for i in range(r_basis.shape[0]) if i not in pivots]
            if self.p ** len(free) > self.budget:
                raise BudgetExceededError("Ext class enumeration exceeds budget")
            combos = np.array(list(iproduct(range(self.p), repeat=len(free))), dtype=np.int64)
            rows = (combos @ r_basis[free]) % self.p if free else np.zeros((1, r_basis.shape[1]), dtype=np.int64)

        def build(row):
            h = self.unflatten_hom(omega, N, row)
            # pushout (N + P) / {(-h w, delta w)}
            total = self.direct_sum([N, cover])
            bases = []
            for v in range(self.quiver.n):
                w_cols = np.vstack([(-h.mats[v]) % self.p, delta.mats[v]])
                bases.append(w_cols)
            middle, proj = self.quotient_by_subrep(total, bases)
            # inclusion of N and projection onto M for SES consumers
            inc_mats = [proj.mats[v][:, : N.dims[v]] for v in range(self.quiver.n)]
            return middle, RepMap(inc_mats)

        return rows, build
