"""Acceptance suite: one test per criterion, exact equality throughout.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL line
per criterion together with instance counts and timings.
"""

import itertools
import json
import pathlib
import random
import subprocess
import sys
import time

import pytest

from factories import GROUPS, autos, random_dualizable_bimodule, random_twocell, subgroup_inclusions
from shadowtrace import (
    EquivariantChainComplex,
    GroupHom,
    NerveTuple,
    RingElement,
    RingMatrix,
    RingObject,
    TwoCell,
    automorphisms,
    base_change_pair,
    canonical_dual,
    class_of_endomorphism,
    compose_dual_pairs,
    cyclic,
    degeneracy,
    diagonal_bimodule,
    dihedral4,
    dual_twocell,
    endomorphisms,
    euler_characteristic,
    face,
    free_module_skeleton,
    hattori_stallings_trace,
    hcompose,
    hcompose_cells,
    klein_four,
    lefschetz_via_homology,
    matrix_morita,
    morita_inverse_map,
    nerve_pi0,
    quaternion8,
    reidemeister_trace,
    restriction,
    restriction_transfer_composite,
    shadow,
    shadow_of_twocell,
    symmetric3,
    theta_element,
    torus2_self_map,
    circle_self_map,
    trace,
    trace_eps,
    trace_eps_raw,
    trace_eta,
    trace_eta_raw,
    trace_left,
    transfer,
    trivial_group,
    twisted_conjugacy_classes,
    twisted_unit,
    unit_bimodule,
    verify_dual_pair,
    verify_morita,
)
from shadowtrace.ringoid import RingoidBimodule, ringoid_shadow, ringoid_shadow_cokernel
from shadowtrace.snf import det

GOLDEN = pathlib.Path(__file__).parent / "golden"
COMMANDS = ("hh0", "trace", "euler", "transfer", "twisted-transfer",
            "reidemeister", "nerve-pi0", "morita-check")


def report(number, ok, detail):
    print(f"\nACCEPTANCE criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number} failed: {detail}"


# ---------------------------------------------------------------------------
# 1. shadow axioms


def test_criterion_1_shadow_axioms():
    rng = random.Random(20260810)
    start = time.monotonic()
    instances = 0
    names = ["c2", "c3", "c4", "klein", "c6", "s3", "c8", "d4", "q8"]
    while instances < 200:
        name = rng.choice(names)
        A = RingObject(GROUPS[name]())
        max_rank = 3 if GROUPS[name]().size() <= 6 else 2
        m, _ = random_dualizable_bimodule(rng, A, name, max_rank=max_rank)
        n, _ = random_dualizable_bimodule(rng, A, name, max_rank=max_rank)
        p, _ = random_dualizable_bimodule(rng, A, name, max_rank=max_rank)

        # hexagon: theta against the associators, both composite paths
        mn = hcompose(m, n)
        src = shadow(hcompose(mn, p))
        end = shadow(hcompose(n, hcompose(p, m)))
        mid = shadow(hcompose(m, n))  # also exercises theta ∘ theta below
        for label in src.labels():
            vec = src.generator_vector(label)
            path1 = theta_element(hcompose(p, m), n, theta_element(mn, p, vec))
            path2 = theta_element(m, hcompose(n, p), vec)
            assert end.normalize_vector(path1) == end.normalize_vector(path2)

        # unit coherence triangle
        u = unit_bimodule(A)
        mu = shadow(hcompose(m, u))
        tgt = shadow(m)
        for label in mu.labels():
            vec = mu.generator_vector(label)
            rotated = theta_element(m, u, vec)
            assert tgt.normalize_vector(vec) == tgt.normalize_vector(rotated)

        # theta ∘ theta = id
        for label in mid.labels():
            vec = mid.generator_vector(label)
            back = theta_element(n, m, theta_element(m, n, vec))
            assert mid.normalize_vector(vec) == mid.normalize_vector(back)
        instances += 1
    elapsed = time.monotonic() - start
    report(1, elapsed < 30, f"{instances} instances in {elapsed:.1f}s < 30s")


# ---------------------------------------------------------------------------
# 2. trace structure


def test_criterion_2_trace_structure():
    rng = random.Random(47)
    start = time.monotonic()
    names = ["c2", "c3", "c4", "s3", "klein"]
    counts = {"mate": 0, "composite": 0, "tightening": 0, "simplification": 0}

    for _ in range(100):
        name = rng.choice(names)
        A = RingObject(GROUPS[name]())
        m, w = random_dualizable_bimodule(rng, A, name, max_rank=2)
        q = twisted_unit(A, rng.choice(autos(name)))
        p = twisted_unit(A, rng.choice(autos(name)))
        g = random_twocell(rng, hcompose(w.n, q), hcompose(p, w.n))
        gstar = dual_twocell(g, w, q=q, p=p)
        assert trace_left(g, w, q=q, p=p).equals(trace(gstar, w, q=q, p=p))
        counts["mate"] += 1

    for _ in range(100):
        name = rng.choice(names)
        A = RingObject(GROUPS[name]())
        m1, w1 = random_dualizable_bimodule(rng, A, name, max_rank=2)
        m2, w2 = random_dualizable_bimodule(rng, A, name, max_rank=2)
        q1 = twisted_unit(A, rng.choice(autos(name)))
        q2 = twisted_unit(A, rng.choice(autos(name)))
        q3 = twisted_unit(A, rng.choice(autos(name)))
        f1 = random_twocell(rng, hcompose(q1, m1), hcompose(m1, q2))
        f2 = random_twocell(rng, hcompose(q2, m2), hcompose(m2, q3))
        w12 = compose_dual_pairs(w1, w2)
        big = hcompose_cells(TwoCell.identity(m1), f2).after(
            hcompose_cells(f1, TwoCell.identity(m2)))
        big = TwoCell(hcompose(q1, w12.m), hcompose(w12.m, q3), big.matrix, trusted=True)
        assert trace(big, w12, q=q1, p=q3).equals(
            trace(f2, w2, q=q2, p=q3).compose(trace(f1, w1, q=q1, p=q2)))
        counts["composite"] += 1

    for _ in range(100):
        name = rng.choice(names)
        A = RingObject(GROUPS[name]())
        m, w = random_dualizable_bimodule(rng, A, name, max_rank=2)
        q = twisted_unit(A, rng.choice(autos(name)))
        p = twisted_unit(A, rng.choice(autos(name)))
        qp = twisted_unit(A, rng.choice(autos(name)))
        pp = twisted_unit(A, rng.choice(autos(name)))
        f = random_twocell(rng, hcompose(q, m), hcompose(m, p))
        g = random_twocell(rng, qp, q)
        h = random_twocell(rng, p, pp)
        lhs = shadow_of_twocell(h).compose(trace(f, w, q=q, p=p)).compose(shadow_of_twocell(g))
        inner = hcompose_cells(TwoCell.identity(m), h).after(f).after(
            hcompose_cells(g, TwoCell.identity(m)))
        assert lhs.equals(trace(inner, w, q=qp, p=pp))
        counts["tightening"] += 1

    for _ in range(100):
        name = rng.choice(names)
        A = RingObject(GROUPS[name]())
        m, w = random_dualizable_bimodule(rng, A, name, max_rank=2)
        q, _ = random_dualizable_bimodule(rng, A, name, max_rank=2)
        p, _ = random_dualizable_bimodule(rng, A, name, max_rank=2)
        assert trace_eta(w, q).equals(trace_eta_raw(w, q))
        assert trace_eps(w, p).equals(trace_eps_raw(w, p))
        counts["simplification"] += 1

    elapsed = time.monotonic() - start
    ok = elapsed < 60 and all(v >= 100 for v in counts.values())
    report(2, ok, f"{counts} in {elapsed:.1f}s < 60s")


# ---------------------------------------------------------------------------
# 3. Morita


def test_criterion_3_matrix_morita():
    start = time.monotonic()
    checked = []
    for name in ["triv", "c2", "s3"]:
        ring = RingObject(GROUPS[name]())
        for n in (1, 2, 3):
            w = matrix_morita(ring, n)
            assert verify_dual_pair(w.pair1) and verify_dual_pair(w.pair2)
            assert verify_morita(w)
            chi1 = euler_characteristic(w.pair1.m, w.pair1)
            chi2 = euler_characteristic(w.pair2.m, w.pair2)
            assert chi1.compose(chi2).is_identity()
            assert chi2.compose(chi1).is_identity()
            mn_ring = w.pair1.m.source
            for psi in autos(name)[:2]:
                q = twisted_unit(mn_ring, psi)
                up = trace_eta(w.pair1, q)
                down = trace_eps(w.pair2, q)
                assert down.compose(up).is_identity()
                assert up.compose(down).is_identity()
            checked.append((name, n))
    rank = len(shadow(unit_bimodule(RingObject(symmetric3(), 3))).labels())
    assert rank == 3
    elapsed = time.monotonic() - start
    report(3, True, f"{len(checked)} (ring, n) pairs, HH0(M3(Z[S3])) rank {rank}, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 4. base change squares


def test_criterion_4_base_change():
    from shadowtrace.bicategory import substitute
    from shadowtrace import ShadowMap

    rng = random.Random(99)
    start = time.monotonic()
    squares = 0

    # Lem 5.7: <f> agrees with chi(_fC) for the stock inclusions
    for f in subgroup_inclusions():
        data = base_change_pair(f)
        assert restriction(f).equals(euler_characteristic(data.fC, data.pair))
        squares += 1

    # Ex 5.14 / Thm 5.12: the ring-level square through skeleton inclusions
    for name in ["c2", "c3", "c4", "s3"]:
        ring = RingObject(GROUPS[name]())
        m, w = random_dualizable_bimodule(rng, RingObject(GROUPS[name]()), name, max_rank=2)
        if m.width == 0:
            continue
        r_dom = free_module_skeleton(ring, 1)
        r_cod = free_module_skeleton(ring, max(1, m.width))
        chi = trace(TwoCell.identity(m), w)
        _, section_dom = morita_inverse_map(r_dom)
        _, section_cod = morita_inverse_map(r_cod)
        cok_dom = ringoid_shadow_cokernel(r_dom)
        cok_cod = ringoid_shadow_cokernel(r_cod)

        def tensor_fn(label):
            p, x = cok_dom.generator_endomorphism(label)
            return cok_cod.normalize_endomorphism(p * m.width, substitute(x, m))

        tensor = ShadowMap(cok_dom, cok_cod, tensor_fn)
        base = shadow(unit_bimodule(ring))
        for label in base.labels():
            elem = base.element({label: 1})
            assert section_cod.apply(chi.apply(elem)) == tensor.apply(section_dom.apply(elem))
        squares += 1

    # Cor 5.17: the natural-transformation squares on randomized instances
    for _ in range(10):
        name = rng.choice(["c2", "c3", "c4", "s3"])
        g = GROUPS[name]()
        ring = RingObject(g)
        m = diagonal_bimodule(ring, rng.randint(1, 2))
        w = canonical_dual(m)
        q = twisted_unit(ring, rng.choice(autos(name)))
        p = twisted_unit(ring, rng.choice(autos(name)))
        f = random_twocell(rng, hcompose(q, m), hcompose(m, p))
        r_cod = free_module_skeleton(ring, m.width)
        pres_p = ringoid_shadow(r_cod, RingoidBimodule(r_cod, p))
        dom = shadow(q)
        tr_f = trace(f, w, q=q, p=p)
        for label in dom.labels():
            alpha = RingMatrix(g, q.width, 1, {(0, 0): dom.generator_vector(label)[0]})
            composite = f.matrix @ substitute(alpha, m)
            assert pres_p.normalize_endomorphism(m.width, composite) == tr_f.on_label(label)
        squares += 1

    # the (S3, A3) and (Z/4, Z/2) pairs explicitly, restriction against chi
    for f in subgroup_inclusions()[:2]:
        data = base_change_pair(f)
        chi_cf = euler_characteristic(data.Cf, data.transfer_pair)
        assert chi_cf.equals(transfer(f, data))
        squares += 1

    elapsed = time.monotonic() - start
    report(4, True, f"{squares} commuting squares in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 5. restriction-transfer


def test_criterion_5_restriction_transfer():
    from shadowtrace.twisted import conjugacy_classes

    start = time.monotonic()
    pairs = 0
    for f in subgroup_inclusions():
        data = base_change_pair(f)
        comp, chi, agree = restriction_transfer_composite(f, "res∘trf")
        assert agree
        comp2, chi2, agree2 = restriction_transfer_composite(f, "trf∘res")
        assert agree2
        index = len(data.transversal)
        e_lab = comp.dom.classes.class_of(f.dom.base.identity())
        assert comp.on_label(e_lab).coeffs == {e_lab: index}

        # brute-force induced representation oracle for the full transfer
        a, c = f.dom.base, f.cod.base
        cls_c = conjugacy_classes(c)
        cls_a = conjugacy_classes(a)
        preimage = {f.apply(h): h for h in a.elements()}
        trf = transfer(f, data)
        for lab in cls_c.labels():
            g = cls_c.representative(lab)
            coeffs = {}
            for rep in data.transversal:
                y = c.mul(c.inv(rep), c.mul(g, rep))
                if y in preimage:
                    la = cls_a.class_of(preimage[y])
                    coeffs[la] = coeffs.get(la, 0) + 1
            assert trf.on_label(lab).coeffs == {k: v for k, v in coeffs.items() if v}
        pairs += 1
    elapsed = time.monotonic() - start
    report(5, True, f"{pairs} group-ring pairs, both composites and the oracle agree, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 6. the pi0-level cyclotomic identity


def test_criterion_6_inclusion_of_objects_route():
    from shadowtrace import module_bimodule

    rng = random.Random(606)
    start = time.monotonic()
    checked = 0
    skeletons = {}
    for name in ["triv", "c2", "s3"]:
        g = GROUPS[name]()
        skeletons[name] = free_module_skeleton(RingObject(g), 3)
    while checked < 50:
        name = rng.choice(["triv", "c2", "s3"])
        g = GROUPS[name]()
        ring = RingObject(g)
        rank = rng.randint(1, 3)
        elems = list(g.elements())
        x = RingMatrix(g, rank, rank, {
            (i, j): RingElement.group(g, rng.choice(elems), rng.randint(-2, 2))
            for i in range(rank) for j in range(rank) if rng.random() < 0.8
        })
        # the inclusion-of-objects route through the ringoid Morita inverse
        _, img = class_of_endomorphism(skeletons[name], rank, x)
        # the direct bicategorical trace of x on the free module
        triv = RingObject(trivial_group())
        m = module_bimodule(ring, {}, rank, source=triv)
        tr = trace(TwoCell(m, m, x), canonical_dual(m))
        assert tr.on_label(tr.dom.labels()[0]) == img
        checked += 1
    elapsed = time.monotonic() - start
    report(6, True, f"{checked} random (ring, module, endomorphism) triples, {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# 7. circle fixed points


def test_criterion_7_circle():
    start = time.monotonic()
    for d in [-2, -1, 0, 2, 3, 4, 5]:
        cx, cm = circle_self_map(d)
        res = reidemeister_trace(cx, cm)
        assert res.lefschetz == 1 - d == lefschetz_via_homology(cx, cm)
        assert res.nielsen == abs(1 - d)
        index = 1 if d < 1 else -1
        oracle = {(k % abs(d - 1),): index for k in range(abs(d - 1))}
        assert res.trace == oracle
    elapsed = time.monotonic() - start
    report(7, elapsed < 5, f"d in -2..5 minus 1, {elapsed:.2f}s < 5s")


# ---------------------------------------------------------------------------
# 8. torus fixed points


def test_criterion_8_torus():
    start = time.monotonic()
    for f in [[[2, 1], [1, 1]], [[0, -1], [1, 0]], [[2, 0], [0, 2]], [[2, 0], [0, 3]]]:
        cx, cm = torus2_self_map(f)   # constructors verify d1 d2 = 0 and the
        res = reidemeister_trace(cx, cm)  # twisted chain condition exactly
        i_minus_f = [[(i == j) - f[i][j] for j in range(2)] for i in range(2)]
        d = det(i_minus_f)
        assert res.lefschetz == d == lefschetz_via_homology(cx, cm)
        if d != 0:
            assert res.nielsen == abs(d)
            assert res.classes.class_count() == abs(d)
    elapsed = time.monotonic() - start
    report(8, elapsed < 10, f"4 matrices, {elapsed:.2f}s < 10s")


# ---------------------------------------------------------------------------
# 9. the appendix combinatorics


def _simplicial_identities(g, phi, n, tuples):
    for entries in tuples:
        t = NerveTuple(g, phi, tuple(entries))
        for j in range(n + 1):
            for i in range(j):
                if n >= 2 and face(face(t, j), i) != face(face(t, i), j - 1):
                    return False
        for j in range(n + 1):
            s = degeneracy(t, j)
            for i in range(n + 2):
                ds = face(s, i)
                if i in (j, j + 1):
                    if ds != t:
                        return False
                elif i < j:
                    if ds != degeneracy(face(t, i), j - 1):
                        return False
                elif ds != degeneracy(face(t, i - 1), j):
                    return False
        for j in range(n + 1):
            for i in range(j + 1):
                if degeneracy(degeneracy(t, j), i) != degeneracy(degeneracy(t, i), j + 1):
                    return False
    return True


def test_criterion_9_appendix():
    start = time.monotonic()
    exhaustive = [cyclic(2), cyclic(3), cyclic(4), klein_four(), cyclic(5),
                  cyclic(6), symmetric3(), cyclic(7), cyclic(8), dihedral4(), quaternion8()]
    for g in exhaustive:
        phi = automorphisms(g)[-1]
        for n in (1, 2, 3):
            tuples = itertools.product(g.elements(), repeat=n + 1)
            assert _simplicial_identities(g, phi, n, tuples)

    # pi0 against twisted classes for the stated endomorphism families
    checked = 0
    for n in range(1, 9):
        g = cyclic(n)
        for phi in endomorphisms(g):
            roots, bij = nerve_pi0(g, phi)
            assert bij is not None
            assert len(roots) == twisted_conjugacy_classes(g, phi).class_count()
            checked += 1
    for g in [symmetric3(), dihedral4(), quaternion8()]:
        for phi in automorphisms(g):      # includes all inner automorphisms
            roots, bij = nerve_pi0(g, phi)
            assert bij is not None
            assert len(roots) == twisted_conjugacy_classes(g, phi).class_count()
            checked += 1
    elapsed = time.monotonic() - start
    report(9, elapsed < 120, f"identities exhaustive, {checked} (G, phi) pairs, {elapsed:.1f}s < 120s")


# ---------------------------------------------------------------------------
# 10. CLI golden files


def test_criterion_10_cli_golden():
    start = time.monotonic()
    for command in COMMANDS:
        job = GOLDEN / f"{command}.json"
        expected = (GOLDEN / f"{command}.expected.json").read_text()
        outputs = []
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-m", "shadowtrace.cli", command,
                 "--in", str(job), "--oracle"],
                capture_output=True, text=True,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append(proc.stdout)
        assert outputs[0] == outputs[1] == expected
        assert json.loads(outputs[0]).get("oracle", {}).get("agrees", True)
    elapsed = time.monotonic() - start
    report(10, True, f"8 commands byte-identical with oracle agreement, {elapsed:.1f}s")
