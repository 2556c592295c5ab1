"""Acceptance suite: every criterion at the fixture sizes, exact equality only.

Fixtures: the linear quivers on two and three vertices, p in {2, 3}, module
dimension vectors bounded by (2,2) / (1,1,1), m in {2, 3}, level window
[-2, 3].  Every comparison is exact rational equality (tolerance 0).  One
pass/fail line is printed per criterion.
"""

import itertools
import random
import sys

import numpy as np
import pytest

from hallcpx import ModuleCategory, Quiver
from hallcpx.complexes import CB, CYC, WIN, ComplexCategory
from hallcpx.hall import ComplexBackend, HallAlgebra, HallElt, ModuleBackend
from hallcpx.localized import basis_check_cb, basis_check_cm
from hallcpx.quiver import a_n_quiver
from hallcpx.suites import (
    RunConfig,
    Workspace,
    suite_assoc,
    suite_embed,
    suite_integration,
    suite_lemma_5_1,
    suite_psi_hat,
    suite_rel_5_5,
    suite_rel_5_7,
    suite_rel_6_4,
    suite_riedtmann_peng,
    suite_thm_3_4,
)

sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))
from helpers import scramble  # noqa: E402

FIXTURE_SPECS = [
    ("a2-p2", 2, 2, (2, 2)),
    ("a2-p3", 2, 3, (2, 2)),
    ("a3-p2", 3, 2, (1, 1, 1)),
    ("a3-p3", 3, 3, (1, 1, 1)),
]


@pytest.fixture(scope="session")
def spaces():
    out = {}
    for name, n, p, dmax in FIXTURE_SPECS:
        cfg = RunConfig(quiver=a_n_quiver(n), p=p, max_dim=dmax, m=2, levels=(-2, 3))
        out[name] = Workspace(cfg)
    return out


def _with_m(ws, m):
    ws.cfg.m = m
    return ws


def _announce(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number:02d} {name}: {status} {detail}", flush=True)
    assert ok, f"criterion {number} {name} failed: {detail}"


def test_criterion_01_riedtmann_peng(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        rep = suite_riedtmann_peng(ws)
        details.append(f"{name}:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
    _announce(1, "riedtmann-peng", ok, " ".join(details))


def test_criterion_02_line_counts():
    ok = True
    for p in (2, 3, 5):
        cat = ModuleCategory(Quiver(1, []), p)
        hall = HallAlgebra(ModuleBackend(cat))
        kk = cat.class_key(cat.simple(1))
        k2 = cat.class_key(cat.direct_sum([cat.simple(1)] * 2))
        ok &= hall.hall_number_g(kk, kk, k2) == p + 1
    _announce(2, "line-count", ok, "p in {2,3,5}")


def test_criterion_03_associativity(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        for m in (2, 3):
            rep = suite_assoc(_with_m(ws, m))
            details.append(f"{name},m={m}:{rep['passed']}/{rep['total']}")
            ok &= rep["pass"] and rep["total"] >= 150
    _announce(3, "associativity", ok, " ".join(details))


def test_criterion_04_collapse_homomorphism(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        for m in (2, 3):
            rep = suite_thm_3_4(_with_m(ws, m))
            details.append(f"{name},m={m}:{rep['passed']}/{rep['total']}")
            ok &= rep["pass"]
    _announce(4, "collapse-homomorphism", ok, " ".join(details))


def test_criterion_05_ideal_closure(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        for m in (2, 3):
            rep = suite_thm_3_4(_with_m(ws, m))
            closures = [e for e in rep["instances"] if e["relation"] == "ideal-closure"]
            ok &= bool(closures) and all(e["pass"] for e in closures)
            details.append(f"{name},m={m}:{len(closures)}")
    _announce(5, "ideal-closure", ok, " ".join(details))


def test_criterion_06_shifted_ext_identities(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        rep = suite_lemma_5_1(ws)
        details.append(f"{name}:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
    _announce(6, "shifted-ext-identities", ok, " ".join(details))


def test_criterion_07_defining_relations(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        rep = suite_rel_5_5(ws)
        details.append(f"{name},cb:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
        for m in (2, 3):
            rep = suite_rel_6_4(_with_m(ws, m))
            details.append(f"{name},m={m}:{rep['passed']}/{rep['total']}")
            ok &= rep["pass"]
    _announce(7, "defining-relations", ok, " ".join(details))


def test_criterion_08_derived_relations_and_roundtrip(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        rep = suite_rel_5_7(ws)
        details.append(f"{name},Z:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
        rep = suite_psi_hat(ws)
        details.append(f"{name},rt:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
    _announce(8, "derived-relations-roundtrip", ok, " ".join(details))


def test_criterion_09_normal_form_bases(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        loc = ws.localized("cb")
        rep = basis_check_cb(loc, ws.class_keys, n_random=100, seed=ws.cfg.seed)
        ok &= rep.passed
        total = 100
        for m in (2, 3):
            locm = ws.localized("cm", m)
            keys = ws.class_keys if len(ws.class_keys) <= 6 else ws.class_keys[:6]
            repm = basis_check_cm(locm, keys, ws.unit_mults(), n_random=50, seed=ws.cfg.seed)
            ok &= repm.passed
            total += 50
        details.append(f"{name}:{total}")
    _announce(9, "normal-form-bases", ok, " ".join(details))


def test_criterion_10_krull_schmidt(spaces):
    ok = True
    details = []
    total_round_trips = {"cyclic": 0, "window": 0}
    for name, ws in spaces.items():
        cat = ws.modcat
        rng = np.random.default_rng(hash(name) % 2**31)
        indec = ws.indec_keys()
        n = cat.quiver.n
        for m in (2, 3):
            cyc = ws.ccat(CYC, m)
            win = ws.ccat(WIN, m)
            for _ in range(13):
                parts = []
                for _ in range(int(rng.integers(1, 4))):
                    r = int(rng.integers(0, m))
                    if rng.integers(0, 3) == 0:
                        parts.append(cyc.shift(cyc.make_kp(cat.projective(int(rng.integers(1, n + 1)))), r))
                    else:
                        kid = indec[int(rng.integers(0, len(indec)))]
                        parts.append(cyc.shift(cyc.make_cm(cat.indec_rep(kid)), r))
                X = cyc.direct_sum(parts)
                ok &= cyc.decompose(scramble(cyc, X, rng)) == cyc.decompose(X)
                total_round_trips["cyclic"] += 1
                parts = []
                for _ in range(int(rng.integers(1, 4))):
                    choice = int(rng.integers(0, 3))
                    if choice == 0:
                        parts.append(win.shift(win.make_jp(cat.projective(int(rng.integers(1, n + 1)))), int(rng.integers(0, m - 1))))
                    elif choice == 1:
                        kid = indec[int(rng.integers(0, len(indec)))]
                        parts.append(win.shift(win.make_tm(cat.indec_rep(kid)), int(rng.integers(0, m - 1))))
                    else:
                        parts.append(win.make_sp(cat.projective(int(rng.integers(1, n + 1)))))
                Y = win.direct_sum(parts)
                want = win.decompose(Y)
                scr = scramble(win, Y, rng)
                ok &= win.decompose(scr) == want
                ok &= win.decompose_window_peeling(scr) == want
                total_round_trips["window"] += 1
        # exhaustive fixed-size complexes with component dims bounded by ones
        win2 = ws.ccat(WIN, 2)
        ones = tuple(1 for _ in range(n))
        projs = [cat.zero_rep()] + [
            cat.projective(v) for v in range(1, n + 1) if all(d <= 1 for d in cat.projective(v).dims)
        ]
        exhaustive = 0
        for c1, c2 in itertools.product(projs, repeat=2):
            basis = cat.hom_basis_matrix(c1, c2)
            h = basis.shape[0]
            for coeffs in itertools.product(range(cat.p), repeat=h):
                row = (np.array(coeffs, dtype=np.int64) @ basis) % cat.p if h else np.zeros(basis.shape[1], dtype=np.int64)
                X = win2.make_complex([c1, c2], [cat.unflatten_hom(c1, c2, row)])
                for lab, _ in win2.decompose(X):
                    ok &= lab[0] in ("S", "T", "J")
                exhaustive += 1
        details.append(f"{name}:exhaustive={exhaustive}")
    ok &= total_round_trips["cyclic"] >= 100 and total_round_trips["window"] >= 100
    _announce(10, "krull-schmidt-round-trip", ok,
              f"cyclic={total_round_trips['cyclic']} window={total_round_trips['window']} " + " ".join(details))


def test_criterion_11_integration_map(spaces):
    details = []
    ok = True
    for name, ws in spaces.items():
        rep = suite_integration(_with_m(ws, 2))
        details.append(f"{name}:{rep['passed']}/{rep['total']}")
        ok &= rep["pass"]
    _announce(11, "integration-map", ok, " ".join(details))


def test_criterion_12_worked_products(spaces):
    ws = spaces["a2-p2"]
    cat = ws.modcat
    hall = ws.module_hall
    mb = ws.module_backend
    kS1, kS2 = cat.class_key(cat.simple(1)), cat.class_key(cat.simple(2))
    kP1 = cat.class_key(cat.projective(1))
    kSum = cat.class_key(cat.direct_sum([cat.simple(1), cat.simple(2)]))
    out = hall.product_pair(kS1, kS2)
    ok = out == {kSum: 1, kP1: 1}
    out2 = hall.product_pair(kS2, kS1)
    ok &= out2 == {kSum: 1}
    # both counting routes agree on every term
    for kM, kN, prod in ((kS1, kS2, out), (kS2, kS1, out2)):
        hom = cat.p ** mb.hom_dim(kM, kN)
        for kL, coef in prod.items():
            g = hall.hall_number_g(kM, kN, kL)
            w = hall.w_count(kM, kN, kL)
            ok &= w == g * mb.aut(kM) * mb.aut(kN)
            ok &= coef == g * mb.aut(kM) * mb.aut(kN) / (mb.aut(kL) * hom)
    _announce(12, "worked-products", ok, "[S1][S2] and [S2][S1] on a2 at p=2")
