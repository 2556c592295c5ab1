"""Complex categories: constructors, shifts, Ext, minimization, decomposition."""

import itertools

import numpy as np
import pytest

from hallcpx import a_n_quiver
from hallcpx.complexes import CB, CYC, WIN, ComplexCategory, Cx
from hallcpx.errors import DomainError
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
    """Conjugate the differentials by random automorphisms of the components."""
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


def test_constructor_rejects_bad_differentials(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    P1 = cat.projective(1)
    ident = cat.identity_map(P1)
    # d*d != 0 in a cyclic complex
    cyc = ComplexCategory(cat, CYC, 2)
    with pytest.raises(DomainError):
        cyc.make_complex([P1, P1], [ident, ident])
    # non-projective component
    with pytest.raises(DomainError):
        win.make_sp(cat.simple(1))
    # shape mismatch
    bad = RepMap([np.zeros((0, 1), dtype=np.int64), np.zeros((1, 1), dtype=np.int64)])
    with pytest.raises(DomainError):
        win.make_complex([P1, P1], [bad])


def test_named_objects(a2_p2):
    cat = a2_p2
    P1 = cat.projective(1)
    for m in (2, 3):
        cyc = ComplexCategory(cat, CYC, m)
        win = ComplexCategory(cat, WIN, m)
        assert cyc.decompose(cyc.make_kp(P1)) == cyc.decompose(cyc.make_cf(P1, P1, cat.identity_map(P1)))
        assert win.decompose(win.make_jp(P1)) == win.decompose(win.make_tf(P1, P1, cat.identity_map(P1)))
        zero = cat.zero_rep()
        zmap = RepMap([np.zeros((P1.dims[v], 0), dtype=np.int64) for v in range(2)])
        assert win.decompose(win.make_tf(zero, P1, zmap)) == win.decompose(win.make_tp(P1))
    # single-component cyclic complex at m = 1
    cyc1 = ComplexCategory(cat, CYC, 1)
    kp = cyc1.make_kp(P1)
    assert len(kp.components) == 1 and kp.components[0].dims == (2, 2)
    d = kp.diffs[0]
    for v in range(2):
        assert not ((d.mats[v] @ d.mats[v]) % 2).any()


def test_resolution_complexes(a2_p2):
    cat = a2_p2
    cyc = ComplexCategory(cat, CYC, 2)
    win = ComplexCategory(cat, WIN, 2)
    # projective module: concentrated component, zero differential
    cp = cyc.make_cm(cat.projective(1))
    nonzero = [c for c in cp.components if c.total_dim]
    assert len(nonzero) == 1
    # A_2: T of the first simple is the inclusion P_2 -> P_1
    tm = win.make_tm(cat.simple(1))
    assert [c.dims for c in tm.components] == [(0, 1), (1, 1)]
    assert cat.is_injective_map(tm.diffs[0])
    # the zero module gives the zero complex
    assert cyc.make_cm(cat.zero_rep()).total_dim == 0
    with pytest.raises(DomainError):
        ComplexCategory(cat, WIN, 1).make_tm(cat.simple(1))


def test_shift(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 3)
    cyc = ComplexCategory(cat, CYC, 2)
    tm = win.make_tm(cat.simple(1))
    assert win.decompose(win.shift(tm, 0)) == win.decompose(tm)
    zero = win.zero_cx()
    assert win.shift(zero, 1).total_dim == 0
    # window shifts must keep the support inside 1..m
    with pytest.raises(DomainError):
        win.shift(tm, -1)
    with pytest.raises(DomainError):
        win.shift(win.make_sp(cat.projective(1)), 1)
    # cyclic shift by m is isomorphic to the identity via an explicit sign iso
    kp = cyc.make_kp(cat.projective(1))
    shifted = cyc.shift(kp, 2)
    assert cyc.decompose(shifted) == cyc.decompose(kp)
    assert cyc.iso_sweep(shifted, kp)
    # the literal sign convention: odd shift negates differentials
    cs = cyc.make_cm(cat.simple(1))
    twice = cyc.shift(cyc.shift(cs, 1), 1)
    for d1, d2 in zip(twice.diffs, cs.diffs):
        for a, b in zip(d1.mats, d2.mats):
            assert np.array_equal(a, b)


def test_chain_hom_examples(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    ts = win.make_tm(cat.simple(1))
    assert win.cx_hom_dim(ts, ts) >= 1
    assert win.cx_hom_dim(ts, win.zero_cx()) == 0
    # disjoint supports with no connecting map
    sp = win.make_sp(cat.projective(2))
    tp = win.make_tp(cat.projective(1))
    assert win.cx_hom_dim(sp, tp) == 0
    for f in win.cx_hom_basis(ts, ts):
        assert len(f) == 2


def test_ext_and_euler_structure(a2_p3):
    cat = a2_p3
    cb = ComplexCategory(cat, CB)
    classes = [c for c in cat.enumerate_iso_classes((1, 1)) if c.total_dim]
    objs = {}
    for M in classes:
        base = cb.make_cm(M)
        for r in (-1, 0, 1, 2):
            objs[(cat.key_name(cat.class_key(M)), r)] = (M, cb.shift(base, r))
    for (nm, r), (M, X) in objs.items():
        for (nn, l), (N, Y) in objs.items():
            if r == l:
                assert cb.homotopy_hom_dim(X, Y, 1) == cat.ext1_dim(M, N)
                assert cb.homotopy_hom_dim(X, Y, 2) == 0
                assert cb.homotopy_hom_dim(X, Y, 3) == 0
            if l == r + 1:
                assert cb.homotopy_hom_dim(X, Y, 1) == 0
                assert cb.homotopy_hom_dim(X, Y, 2) == 0
            if r - l >= 1:
                assert cb.euler_form(X, Y) == (-1) ** (r - l) * cat.euler_form(M.dims, N.dims)
            if l - r > 1:
                assert cb.euler_form(X, Y) == 0
    # Ext into the contractibles vanishes
    K = cb.make_kp(cat.projective(1))
    for (nm, r), (M, X) in list(objs.items())[:4]:
        for i in (1, 2):
            assert cb.homotopy_hom_dim(X, K, i) == 0


def test_euler_additive(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    xs = [win.make_tm(cat.simple(1)), win.make_sp(cat.projective(2)), win.make_jp(cat.projective(1))]
    for a in xs:
        for b in xs:
            for c in xs:
                lhs = win.euler_form(win.direct_sum([a, b]), c)
                assert lhs == win.euler_form(a, c) + win.euler_form(b, c)
                rhs = win.euler_form(c, win.direct_sum([a, b]))
                assert rhs == win.euler_form(c, a) + win.euler_form(c, b)


def test_ext_cocycles_match_homotopy_route(a2_p3):
    cat = a2_p3
    win = ComplexCategory(cat, WIN, 2)
    cb = ComplexCategory(cat, CB)
    mods = [c for c in cat.enumerate_iso_classes((1, 1)) if c.total_dim]
    for M in mods[:3]:
        for N in mods[:3]:
            for ccat, mk in ((win, "tm"), (cb, "cm")):
                X = ccat.make_tm(M) if mk == "tm" else ccat.make_cm(M)
                Y = ccat.make_tm(N) if mk == "tm" else ccat.make_cm(N)
                rows, _ = ccat.ext_cocycle_data(X, Y)
                assert len(rows) == cat.p ** ccat.homotopy_hom_dim(X, Y, 1)


def test_minimize(a2_p2):
    cat = a2_p2
    cyc = ComplexCategory(cat, CYC, 2)
    core, stripped = cyc.minimize(cyc.make_kp(cat.projective(1)))
    assert core.total_dim == 0 and stripped == ((1, 0),)
    cs = cyc.make_cm(cat.simple(1))
    core, stripped = cyc.minimize(cs)
    assert stripped == () and cyc.decompose(core) == cyc.decompose(cs)
    rng = np.random.default_rng(5)
    big = cyc.direct_sum([cs, cyc.shift(cyc.make_kp(cat.projective(1)), 1)])
    core, stripped = cyc.minimize(scramble(cyc, big, rng))
    assert stripped == ((1, 1),)
    assert cyc.decompose(core) == cyc.decompose(cs)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_scrambled_round_trips(p, m):
    from hallcpx import ModuleCategory

    cat = ModuleCategory(a_n_quiver(2), p)
    rng = np.random.default_rng(100 * p + m)
    cyc = ComplexCategory(cat, CYC, m)
    win = ComplexCategory(cat, WIN, m)
    indec = [c for c in cat.enumerate_iso_classes((1, 1)) if len(cat.class_key(c)) == 1 and c.total_dim]
    for trial in range(8):
        parts = []
        for _ in range(int(rng.integers(1, 4))):
            M = indec[int(rng.integers(0, len(indec)))]
            r = int(rng.integers(0, m))
            if rng.integers(0, 3) == 0:
                parts.append(cyc.shift(cyc.make_kp(cat.projective(int(rng.integers(1, 3)))), r))
            else:
                parts.append(cyc.shift(cyc.make_cm(M), r))
        X = cyc.direct_sum(parts)
        assert cyc.decompose(scramble(cyc, X, rng)) == cyc.decompose(X)
        parts = []
        for _ in range(int(rng.integers(1, 4))):
            M = indec[int(rng.integers(0, len(indec)))]
            choice = int(rng.integers(0, 3))
            if m >= 2 and choice == 0:
                parts.append(win.shift(win.make_jp(cat.projective(int(rng.integers(1, 3)))), int(rng.integers(0, m - 1))))
            elif m >= 2 and choice == 1:
                parts.append(win.shift(win.make_tm(M), int(rng.integers(0, m - 1))))
            else:
                parts.append(win.make_sp(cat.projective(int(rng.integers(1, 3)))))
        Y = win.direct_sum(parts)
        scr = scramble(win, Y, rng)
        want = win.decompose(Y)
        assert win.decompose(scr) == want
        assert win.decompose_window_peeling(scr) == want


def test_window_completeness_small(a2_p2):
    """Every valid two-term window complex decomposes into the stated labels."""
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    projs = [cat.zero_rep(), cat.projective(2), cat.projective(1)]
    seen = 0
    for c1, c2 in itertools.product(projs, repeat=2):
        basis = cat.hom_basis_matrix(c1, c2)
        for bits in itertools.product(range(2), repeat=basis.shape[0]):
            row = (np.array(bits, dtype=np.int64) @ basis) % 2 if basis.shape[0] else np.zeros(basis.shape[1], dtype=np.int64)
            X = win.make_complex([c1, c2], [cat.unflatten_hom(c1, c2, row)])
            for lab, _ in win.decompose(X):
                assert lab[0] in ("S", "T", "J")
            seen += 1
    assert seen >= 12


def test_cyclic_completeness_small(a2_p2):
    cat = a2_p2
    cyc = ComplexCategory(cat, CYC, 2)
    projs = [cat.zero_rep(), cat.projective(2), cat.projective(1)]
    for c1, c2 in itertools.product(projs, repeat=2):
        b01 = cat.hom_basis_matrix(c1, c2)
        b10 = cat.hom_basis_matrix(c2, c1)
        for bits0 in itertools.product(range(2), repeat=b01.shape[0]):
            row0 = (np.array(bits0, dtype=np.int64) @ b01) % 2 if b01.shape[0] else np.zeros(b01.shape[1], dtype=np.int64)
            d0 = cat.unflatten_hom(c1, c2, row0)
            for bits1 in itertools.product(range(2), repeat=b10.shape[0]):
                row1 = (np.array(bits1, dtype=np.int64) @ b10) % 2 if b10.shape[0] else np.zeros(b10.shape[1], dtype=np.int64)
                d1 = cat.unflatten_hom(c2, c1, row1)
                ok1 = not any(((a @ b) % 2).any() for a, b in zip(d1.mats, d0.mats))
                ok2 = not any(((a @ b) % 2).any() for a, b in zip(d0.mats, d1.mats))
                if not (ok1 and ok2):
                    continue
                X = cyc.make_complex([c1, c2], [d0, d1])
                for lab, _ in cyc.decompose(X):
                    assert lab[0] in ("C", "K")


def test_json_roundtrip(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    X = win.direct_sum([win.make_tm(cat.simple(1)), win.make_jp(cat.projective(2))])
    text = win.to_json(X)
    Y = win.from_json(text)
    assert win.decompose(Y) == win.decompose(X)
    with pytest.raises(DomainError):
        ComplexCategory(cat, CYC, 2).from_json(text)


def test_embed_window_into_bounded(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 3)
    X = win.direct_sum([win.make_tm(cat.simple(1)), win.make_sp(cat.projective(2))])
    Xb = win.embed_bounded(X)
    # support lands in degrees 1-m..0 and Ext agrees through the embedding
    assert Xb.lo >= 1 - 3
    assert win.cx_hom_dim(X, X) == win.bounded_companion().cx_hom_dim(Xb, Xb)


def test_euler_form_ambient_helpers(a2_p2):
    from hallcpx.complexes import euler_form_cb, euler_form_cm

    cat = a2_p2
    cb = ComplexCategory(cat, CB)
    win = ComplexCategory(cat, WIN, 2)
    X = cb.make_cm(cat.simple(1))
    Y = win.make_tm(cat.simple(1))
    assert euler_form_cb(cb, X, X) == cb.euler_form(X, X)
    assert euler_form_cm(win, Y, Y) == win.euler_form(Y, Y)
    with pytest.raises(DomainError):
        euler_form_cb(win, Y, Y)
    with pytest.raises(DomainError):
        euler_form_cm(cb, X, X)


def test_hom_rejects_kind_mismatch(a2_p2):
    cat = a2_p2
    win = ComplexCategory(cat, WIN, 2)
    win3 = ComplexCategory(cat, WIN, 3)
    cyc = ComplexCategory(cat, CYC, 2)
    X = win.make_tm(cat.simple(1))
    Y = cyc.make_cm(cat.simple(1))
    with pytest.raises(DomainError):
        win.cx_hom_dim(X, Y)
    with pytest.raises(DomainError):
        cyc.cx_hom_dim(Y, X)
    with pytest.raises(DomainError):
        win3.cx_hom_dim(X, X)
