import itertools
import random

import pytest

from factories import GROUPS, autos, random_twocell, subgroup_inclusions
from shadowtrace import (
    GroupHom,
    NoFreeBasis,
    RingElement,
    RingHom,
    RingMatrix,
    RingObject,
    ShapeMismatch,
    SquareNotCommuting,
    TwoCell,
    base_change_pair,
    cyclic,
    euler_characteristic,
    hcompose,
    induced_bimodule,
    matrix_morita,
    restriction,
    restriction_transfer_composite,
    shadow,
    symmetric3,
    trace_eps,
    trace_eta,
    transfer,
    trivial_group,
    twisted_transfer,
    unit_bimodule,
    verify_dual_pair,
    verify_morita,
)
from shadowtrace.snf import smith_normal_form
from shadowtrace.twisted import conjugacy_classes


def a3_in_s3():
    s3, a3 = symmetric3(), cyclic(3)
    g012 = s3.element_names.index("(012)")
    return RingHom.from_group_hom(
        GroupHom.from_generator_images(a3, s3, {1: g012}))


# ---------------------------------------------------------------------------
# base change


def test_identity_base_change():
    ring = RingObject(symmetric3())
    f = RingHom.identity(ring)
    data = base_change_pair(f)
    assert data.fC == unit_bimodule(ring)
    assert data.Cf == unit_bimodule(ring)
    assert verify_dual_pair(data.pair) and verify_dual_pair(data.transfer_pair)


def test_a3_base_change():
    data = base_change_pair(a3_in_s3())
    assert data.Cf.rank == 2
    assert verify_dual_pair(data.pair)
    assert verify_dual_pair(data.transfer_pair)


def test_augmentation():
    # _fC exists (Z with G acting trivially); the transfer pair does not
    s3 = symmetric3()
    triv = trivial_group()
    hom = GroupHom(s3, triv, [0] * 6, check=False)
    f = RingHom(RingObject(s3), RingObject(triv), hom)
    fc = induced_bimodule(f)
    assert fc.rank == 1
    for s in s3.generators():
        assert fc.act(s).is_identity()
    with pytest.raises(NoFreeBasis):
        base_change_pair(f)


# ---------------------------------------------------------------------------
# restriction / transfer: spec examples


def test_restriction_pushes_classes_forward():
    f = a3_in_s3()
    res = restriction(f)
    s3 = f.cod.base
    cls = res.cod
    three_cycle = s3.element_names.index("(012)")
    lab = res.dom.classes.class_of(1)
    assert res.on_label(lab).coeffs == {cls.classes.class_of(three_cycle): 1}


def test_transfer_identity_class_is_index():
    f = a3_in_s3()
    trf = transfer(f)
    e_lab = trf.dom.classes.class_of(f.cod.base.identity())
    out = trf.on_label(e_lab)
    assert out.coeffs == {trf.cod.classes.class_of(f.dom.base.identity()): 2}


def test_transfer_splits_three_cycles():
    f = a3_in_s3()
    trf = transfer(f)
    s3, a3 = f.cod.base, f.dom.base
    lab = trf.dom.classes.class_of(s3.element_names.index("(012)"))
    out = trf.on_label(lab)
    assert out.coeffs == {
        trf.cod.classes.class_of(1): 1,
        trf.cod.classes.class_of(2): 1,
    }


def induced_rep_oracle(f, data):
    """Brute force: transfer [g] = sum of classes of c_i^-1 g c_i that land in H."""
    a, c = f.dom.base, f.cod.base
    cls_c = conjugacy_classes(c)
    cls_a = conjugacy_classes(a)
    preimage = {f.apply(h): h for h in a.elements()}
    table = {}
    for lab in cls_c.labels():
        g = cls_c.representative(lab)
        coeffs: dict = {}
        for rep in data.transversal:
            y = c.mul(c.inv(rep), c.mul(g, rep))
            if y in preimage:
                la = cls_a.class_of(preimage[y])
                coeffs[la] = coeffs.get(la, 0) + 1
        table[lab] = coeffs
    return table


@pytest.mark.parametrize("f", subgroup_inclusions())
def test_transfer_matches_induced_representation_oracle(f):
    data = base_change_pair(f)
    trf = transfer(f, data)
    oracle = induced_rep_oracle(f, data)
    for lab in trf.dom.labels():
        got = trf.on_label(lab).coeffs
        assert got == {k: v for k, v in oracle[lab].items() if v}


@pytest.mark.parametrize("f", subgroup_inclusions())
def test_restriction_transfer_theorem(f):
    comp, chi, agree = restriction_transfer_composite(f, "res∘trf")
    assert agree
    comp2, chi2, agree2 = restriction_transfer_composite(f, "trf∘res")
    assert agree2
    # on the identity class the composite is multiplication by the index
    index = len(base_change_pair(f).transversal)
    e_lab = comp.dom.classes.class_of(f.dom.base.identity())
    assert comp.on_label(e_lab).coeffs == {e_lab: index}


def test_identity_composites():
    ring = RingObject(cyclic(4))
    f = RingHom.identity(ring)
    comp, chi, agree = restriction_transfer_composite(f, "res∘trf")
    assert agree and comp.is_identity()


def test_restriction_is_chi_of_induced_module():
    """Lem-style check: the hom-set map <f> equals chi(_fC)."""
    for f in subgroup_inclusions():
        data = base_change_pair(f)
        res = restriction(f)
        chi = euler_characteristic(data.fC, data.pair)
        assert res.equals(chi)


# ---------------------------------------------------------------------------
# twisted transfer


def test_twisted_transfer_degenerates_to_transfer():
    for f in subgroup_inclusions():
        data = base_change_pair(f)
        ja = GroupHom.identity_hom(f.dom.base)
        kc = GroupHom.identity_hom(f.cod.base)
        assert twisted_transfer(f, ja, kc, data).equals(transfer(f, data))


def test_twisted_transfer_identity_ring_map():
    c4 = cyclic(4)
    ring = RingObject(c4)
    f = RingHom.identity(ring)
    inv = GroupHom(c4, c4, [0, 3, 2, 1])
    tt = twisted_transfer(f, inv, inv)
    assert tt.is_identity()


def element_level_twisted_transfer(f, j, k, data):
    """Oracle: the twisted trace of y -> x k^{-1}(y) on the transversal basis."""
    a, c = f.dom.base, f.cod.base
    from shadowtrace.twisted import hochschild_twisted_classes

    dom_cls = hochschild_twisted_classes(c, k)
    cod_cls = hochschild_twisted_classes(a, j)
    k_inv = k.inverse()
    preimage = {f.apply(h): h for h in a.elements()}
    reps = data.transversal
    table = {}
    for lab in dom_cls.labels():
        x = dom_cls.representative(lab)
        coeffs: dict = {}
        for i, rep in enumerate(reps):
            img = c.mul(x, k_inv.apply(rep))
            # decompose img = rep_l f(h); diagonal entries contribute j(h)
            for l, rep2 in enumerate(reps):
                y = c.mul(c.inv(rep2), img)
                if y in preimage and l == i:
                    la = cod_cls.class_of(j.apply(preimage[y]))
                    coeffs[la] = coeffs.get(la, 0) + 1
        table[lab] = {kk: v for kk, v in coeffs.items() if v}
    return table


def test_twisted_transfer_element_oracle():
    c2, c4 = cyclic(2), cyclic(4)
    f = RingHom.from_group_hom(GroupHom.from_generator_images(c2, c4, {1: 2}))
    j = GroupHom.identity_hom(c2)       # inversion restricted to {0, 2} is trivial
    k = GroupHom(c4, c4, [0, 3, 2, 1])
    data = base_change_pair(f)
    tt = twisted_transfer(f, j, k, data)
    oracle = element_level_twisted_transfer(f, j, k, data)
    for lab in tt.dom.labels():
        assert tt.on_label(lab).coeffs == oracle[lab]


def test_twisted_transfer_square_must_commute():
    # inclusion Z/3 -> Z/6 with k = inversion on Z/6 but j = id on Z/3:
    # k(f(1)) = -2 = 4 while f(j(1)) = 2, so the square does not commute
    c3, c6 = cyclic(3), cyclic(6)
    f = RingHom.from_group_hom(GroupHom.from_generator_images(c3, c6, {1: 2}))
    j = GroupHom.identity_hom(c3)
    k = GroupHom(c6, c6, [(6 - x) % 6 for x in range(6)])
    with pytest.raises(SquareNotCommuting):
        twisted_transfer(f, j, k)


# ---------------------------------------------------------------------------
# matrix Morita


@pytest.mark.parametrize("name,n", [("triv", 1), ("triv", 2), ("c2", 3), ("s3", 2), ("s3", 3)])
def test_matrix_morita_identities(name, n):
    ring = RingObject(GROUPS[name]())
    w = matrix_morita(ring, n)
    assert verify_dual_pair(w.pair1)
    assert verify_dual_pair(w.pair2)
    assert verify_morita(w)


def test_chi_composites_are_inverse_isomorphisms():
    for name, n in [("triv", 2), ("c2", 3), ("s3", 2)]:
        ring = RingObject(GROUPS[name]())
        w = matrix_morita(ring, n)
        chi1 = euler_characteristic(w.pair1.m, w.pair1)
        chi2 = euler_characteristic(w.pair2.m, w.pair2)
        assert chi1.compose(chi2).is_identity()
        assert chi2.compose(chi1).is_identity()


def test_trace_eta_eps_mutually_inverse_over_morita():
    """tr(eta^{M,N}_Q) and tr(eps^{N,M}_Q) invert each other (Morita pairs)."""
    from shadowtrace import twisted_unit

    for name, n in [("c2", 2), ("c3", 2), ("s3", 2)]:
        ring = RingObject(GROUPS[name]())
        w = matrix_morita(ring, n)
        mn_ring = w.pair1.m.source
        for psi in autos(name)[:3]:
            q = twisted_unit(mn_ring, psi)
            up = trace_eta(w.pair1, q)      # <Q> -> <N ⊙ Q ⊙ M>
            down = trace_eps(w.pair2, q)    # <N ⊙ Q ⊙ M> -> <Q>
            assert down.compose(up).is_identity()
            assert up.compose(down).is_identity()


def matrix_ring_hh0_oracle(g, n):
    """Honest HH0(M_n(Z[G])) by Smith reduction over the basis {g E_ij}."""
    elems = list(g.elements())
    symbols = [(x, i, j) for x in elems for i in range(n) for j in range(n)]
    index = {s: k for k, s in enumerate(symbols)}
    dim = len(symbols)

    def mul(s1, s2):
        (x, i, j), (y, k, l) = s1, s2
        if j != k:
            return None
        return (g.mul(x, y), i, l)

    gens = [(x, i, j) for x in list(g.generators()) + [g.identity()]
            for i in range(n) for j in range(n)]
    columns = []
    seen = set()
    for s1 in gens:
        for s2 in symbols:
            col = [0] * dim
            a = mul(s1, s2)
            b = mul(s2, s1)
            if a:
                col[index[a]] += 1
            if b:
                col[index[b]] -= 1
            if any(col):
                t = tuple(col)
                if t not in seen:
                    seen.add(t)
                    columns.append(col)
    rel = [[c[r] for c in columns] for r in range(dim)]
    _, d, _ = smith_normal_form(rel)
    diag = [d[t][t] if t < min(dim, len(columns)) else 0 for t in range(dim)]
    free = sum(1 for t in range(dim) if (diag[t] if t < len(diag) else 0) == 0)
    torsion = [x for x in diag if x > 1]
    return free, torsion


@pytest.mark.parametrize("name,n", [("c2", 2), ("s3", 2), ("s3", 3)])
def test_hh0_of_matrix_ring_oracle(name, n):
    g = GROUPS[name]()
    free, torsion = matrix_ring_hh0_oracle(g, n)
    pres = shadow(unit_bimodule(RingObject(g, n)))
    assert torsion == []
    assert free == len(pres.labels())
    assert free == conjugacy_classes(g).class_count()


def test_diagonal_class_map_kills_matrix_commutators():
    """The normalizer X -> sum of diagonal classes is constant on commutators."""
    rng = random.Random(14)
    g = symmetric3()
    ring = RingObject(g, 2)
    pres = shadow(unit_bimodule(ring))
    cls = pres.classes
    elems = list(g.elements())

    def rand_mat():
        return RingMatrix(g, 2, 2, {
            (i, j): RingElement.group(g, rng.choice(elems), rng.randint(-1, 2))
            for i in range(2) for j in range(2) if rng.random() < 0.8
        })

    for _ in range(40):
        x, y = rand_mat(), rand_mat()
        comm = (x @ y) - (y @ x)
        out = pres.normalize_matrix(comm)
        assert out.is_zero()
