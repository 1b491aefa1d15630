"""Dual pairs, bicategorical traces and Euler characteristics.

The trace of a 2-cell ``f: Q ⊙ M -> M ⊙ P`` with respect to a dual pair
``(M, N)`` is implemented as the literal five-step composite

    <Q> = <Q ⊙ U> --<id ⊙ coev>--> <Q ⊙ M ⊙ N> --<f ⊙ id>--> <M ⊙ P ⊙ N>
        --theta--> <N ⊙ M ⊙ P> --<eval ⊙ id>--> <U ⊙ P> = <P>

evaluated on class generators of ``<Q>``.  When Q and P are (twisted) units
this agrees with the Hattori-Stallings formula, which is exposed separately
as :func:`hattori_stallings_trace` so the two routes can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicategory import (
    Bimodule,
    ClassShadow,
    RingObject,
    ShadowMap,
    ShadowPresentation,
    TwoCell,
    _monomial_data,
    basis_vector,
    hcompose,
    hcompose_cells,
    shadow,
    substitute,
    theta_element,
    twisted_unit,
    unit_bimodule,
    zero_bimodule,
)
from .errors import NotDualizable, ObjectMismatch, ShapeMismatch
from .gring import RingElement, RingMatrix
from .groups import FiniteTable, FreeAbelian, GroupHom


@dataclass
class DualPairWitness:
    """(m, n) with coevaluation U_C -> m ⊙ n and evaluation n ⊙ m -> U_D."""

    m: Bimodule
    n: Bimodule
    coev: TwoCell
    eval: TwoCell

    def __post_init__(self):
        if self.m.source != self.n.target or self.m.target != self.n.source:
            raise ObjectMismatch("dual pair 1-cells must be opposite")


def verify_dual_pair(w: DualPairWitness) -> bool:
    """Check both triangle identities exactly."""
    id_m = TwoCell.identity(w.m)
    id_n = TwoCell.identity(w.n)
    # M = U ⊙ M -> (M ⊙ N) ⊙ M = M ⊙ (N ⊙ M) -> M ⊙ U = M
    tri1 = hcompose_cells(id_m, w.eval).after(hcompose_cells(w.coev, id_m))
    # N = N ⊙ U -> N ⊙ (M ⊙ N) = (N ⊙ M) ⊙ N -> U ⊙ N = N
    tri2 = hcompose_cells(w.eval, id_n).after(hcompose_cells(id_n, w.coev))
    return tri1.matrix.is_identity() and tri2.matrix.is_identity()


# ---------------------------------------------------------------------------
# canonical duals


def canonical_dual(m: Bimodule) -> DualPairWitness:
    """Construct the right dual of a free bimodule, in canonical form.

    Supported shapes: the zero bimodule, twisted units along automorphisms,
    monomial actions over finite groups (this covers units, base-change
    modules, free modules over a trivial source and all their composites),
    and diagonal monomial actions over free abelian bases.  Anything else
    raises :class:`NotDualizable`.
    """
    if m.width == 0:
        n = zero_bimodule(m.target, m.source)
        coev = TwoCell(unit_bimodule(m.source), hcompose(m, n),
                       RingMatrix.zero(m.source.base, 0, 1), trusted=True)
        ev = TwoCell(hcompose(n, m), unit_bimodule(m.target),
                     RingMatrix.zero(m.target.base, 1, 0), trusted=True)
        return DualPairWitness(m, n, coev, ev)

    twist = m.recognize_twist()
    if twist is not None and m.source == m.target:
        if twist.is_automorphism():
            return _twisted_unit_dual(m, twist)
        if twist == GroupHom.identity_hom(m.source.base):
            return _twisted_unit_dual(m, twist)
        raise NotDualizable("twisted unit along a non-automorphism")

    if isinstance(m.target.base, FiniteTable) and isinstance(m.source.base, FiniteTable):
        return _finite_monomial_dual(m)
    if isinstance(m.source.base, FreeAbelian) and isinstance(m.target.base, FreeAbelian):
        return _lattice_diagonal_dual(m)
    raise NotDualizable(f"no dual construction for {m!r}")


def _twisted_unit_dual(m: Bimodule, twist: GroupHom) -> DualPairWitness:
    n = twisted_unit(m.source, twist.inverse())
    one = RingMatrix.identity(m.source.base, 1)
    coev = TwoCell(unit_bimodule(m.source), hcompose(m, n), one)
    ev = TwoCell(hcompose(n, m), unit_bimodule(m.target),
                 RingMatrix.identity(m.target.base, 1))
    w = DualPairWitness(m, n, coev, ev)
    if not verify_dual_pair(w):
        raise NotDualizable("triangle identities failed for a twisted unit")
    return w


def _finite_monomial_dual(m: Bimodule) -> DualPairWitness:
    """Dual of a monomial bimodule over finite groups, by orbit bookkeeping.

    The dual of a right-free module has a basis of functionals ``h . phi_i``;
    the right action of the source permutes these symbols freely exactly when
    the module is dualizable inside the right-free world.  Orbit
    representatives become the right basis of the dual.
    """
    if not m.is_monomial():
        raise NotDualizable("only monomial actions admit the canonical dual here")
    src = m.source.base  # K
    tgt = m.target.base  # H
    symbols = [(h, i) for i in range(m.width) for h in tgt.elements()]
    gen_data = {}
    for s in src.elements():
        sigma, entry = _monomial_data(m.act(s))
        inv_sigma = {row: col for col, row in sigma.items()}
        gen_data[s] = (inv_sigma, entry)

    def act_symbol(sym, g):
        # phi_i . g = entry_{g,j} phi_j with sigma_g(j) = i, so
        # (h phi_i) . g = (h * entry_{g,j}) phi_j
        h, i = sym
        inv_sigma, entry = gen_data[g]
        j = inv_sigma[i]
        return (tgt.mul(h, entry[j]), j)

    # orbits of the right K-action; the action must be free
    orbit_of = {}
    orbit_reps = []
    for sym in symbols:
        if sym in orbit_of:
            continue
        seen = {}
        for g in src.elements():
            img = act_symbol(sym, g)
            if img in seen:
                raise NotDualizable("dual is not free: the symbol action is not free")
            seen[img] = g
        if any(s in orbit_of for s in seen):
            raise NotDualizable("inconsistent orbit decomposition")
        rep = min(seen)
        for s, g in seen.items():
            orbit_of[s] = (rep, None)
        # store the decomposition relative to the representative
        for g in src.elements():
            orbit_of[act_symbol(rep, g)] = (rep, g)
        orbit_reps.append(rep)
    orbit_reps.sort()
    rep_index = {rep: a for a, rep in enumerate(orbit_reps)}
    s_dual = len(orbit_reps)

    # left action of the target on dual symbols: d . (h phi_i) = (d h) phi_i
    nu = {}
    for d in tgt.generators():
        entries = {}
        for a, (h, i) in enumerate(orbit_reps):
            rep, g = orbit_of[(tgt.mul(d, h), i)]
            entries[(rep_index[rep], a)] = RingElement.group(src, g)
        nu[d] = RingMatrix(src, s_dual, s_dual, entries)
    n = Bimodule(m.target, m.source, s_dual, nu)

    # coevaluation 1 |-> sum_i e_i (x) phi_i
    mn = hcompose(m, n)
    coev_entries = {}
    for i in range(m.width):
        rep, g = orbit_of[(tgt.identity(), i)]
        a = rep_index[rep]
        key = (i * s_dual + a, 0)
        prev = coev_entries.get(key, RingElement.zero(src))
        coev_entries[key] = prev + RingElement.group(src, g)
    coev = TwoCell(unit_bimodule(m.source), mn,
                   RingMatrix(src, mn.width, 1, coev_entries))

    # evaluation (h phi_i) (x) e_j |-> delta_ij h
    nm = hcompose(n, m)
    ev_entries = {}
    for a, (h, i) in enumerate(orbit_reps):
        ev_entries[(0, a * m.width + i)] = RingElement.group(tgt, h)
    ev = TwoCell(nm, unit_bimodule(m.target),
                 RingMatrix(tgt, 1, nm.width, ev_entries))

    w = DualPairWitness(m, n, coev, ev)
    if not verify_dual_pair(w):
        raise NotDualizable("triangle identities failed")
    return w


def _lattice_diagonal_dual(m: Bimodule) -> DualPairWitness:
    """Dual of a diagonal monomial bimodule over free abelian groups."""
    src = m.source.base
    tgt = m.target.base
    line_twists = []
    for i in range(m.width):
        images = []
        for s in src.generators():
            data = _monomial_data(m.act(s))
            if data is None or data[0] != {j: j for j in range(m.width)}:
                raise NotDualizable("lattice duals need a diagonal monomial action")
            images.append(data[1][i])
        matrix = [[images[j][r] for j in range(src.rank)] for r in range(tgt.rank)]
        hom = GroupHom(src, tgt, matrix)
        if not hom.is_automorphism():
            raise NotDualizable("line twist is not invertible")
        line_twists.append(hom)
    nu = {}
    for d in tgt.generators():
        entries = {}
        for i, hom in enumerate(line_twists):
            entries[(i, i)] = RingElement.group(src, hom.inverse().apply(d))
        nu[d] = RingMatrix(src, m.width, m.width, entries)
    n = Bimodule(m.target, m.source, m.width, nu)
    mn = hcompose(m, n)
    coev = TwoCell(unit_bimodule(m.source), mn,
                   RingMatrix(src, mn.width, 1,
                              {(i * m.width + i, 0): RingElement.one(src) for i in range(m.width)}))
    nm = hcompose(n, m)
    ev = TwoCell(nm, unit_bimodule(m.target),
                 RingMatrix(tgt, 1, nm.width,
                            {(0, i * m.width + i): RingElement.one(tgt) for i in range(m.width)}))
    w = DualPairWitness(m, n, coev, ev)
    if not verify_dual_pair(w):
        raise NotDualizable("triangle identities failed")
    return w


def compose_dual_pairs(w1: DualPairWitness, w2: DualPairWitness) -> DualPairWitness:
    """The pasted dual pair (M1 ⊙ M2, N2 ⊙ N1)."""
    m1, n1, m2, n2 = w1.m, w1.n, w2.m, w2.n
    if m1.target != m2.source:
        raise ObjectMismatch("dual pairs not composable")
    m = hcompose(m1, m2)
    n = hcompose(n2, n1)
    # coev: U_C -> M1 ⊙ N1 -> M1 ⊙ (M2 ⊙ N2) ⊙ N1
    inner = hcompose_cells(hcompose_cells(TwoCell.identity(m1), w2.coev), TwoCell.identity(n1))
    coev_cell = inner.after(w1.coev)
    coev = TwoCell(unit_bimodule(m1.source), hcompose(m, n), coev_cell.matrix, trusted=True)
    # eval: N2 ⊙ (N1 ⊙ M1) ⊙ M2 -> N2 ⊙ M2 -> U_E
    outer = hcompose_cells(hcompose_cells(TwoCell.identity(n2), w1.eval), TwoCell.identity(m2))
    ev_cell = w2.eval.after(TwoCell(hcompose(hcompose(n2, hcompose(n1, m1)), m2),
                                    hcompose(n2, m2), outer.matrix, trusted=True))
    ev = TwoCell(hcompose(n, m), unit_bimodule(m2.target), ev_cell.matrix, trusted=True)
    w = DualPairWitness(m, n, coev, ev)
    if not verify_dual_pair(w):
        raise NotDualizable("pasted dual pair failed the triangle identities")
    return w


# ---------------------------------------------------------------------------
# the trace


def _check_factorization(f: TwoCell, q: Bimodule, m: Bimodule, p: Bimodule):
    if f.dom != hcompose(q, m):
        raise ShapeMismatch("2-cell domain is not Q ⊙ M")
    if f.cod != hcompose(m, p):
        raise ShapeMismatch("2-cell codomain is not M ⊙ P")


def trace(f: TwoCell, w: DualPairWitness, q: Bimodule | None = None,
          p: Bimodule | None = None) -> ShadowMap:
    """Trace of ``f: Q ⊙ M -> M ⊙ P`` with respect to the dual pair ``w``."""
    if q is None:
        q = unit_bimodule(w.m.source)
    if p is None:
        p = unit_bimodule(w.m.target)
    _check_factorization(f, q, w.m, p)
    m, n = w.m, w.n
    dom = shadow(q)
    cod = shadow(p)
    step1 = hcompose_cells(TwoCell.identity(q), w.coev)   # Q -> Q ⊙ M ⊙ N
    step2 = hcompose_cells(f, TwoCell.identity(n))        # -> M ⊙ P ⊙ N
    mp = hcompose(m, p)
    step4 = hcompose_cells(w.eval, TwoCell.identity(p))   # N ⊙ M ⊙ P -> P

    def fn(label):
        vec = dom.generator_vector(label)
        vec = step1.apply(vec)
        vec = step2.apply(vec)
        vec = theta_element(mp, n, vec)
        vec = step4.apply(vec)
        return cod.normalize_vector(vec)

    return ShadowMap(dom, cod, fn, name="trace")


def trace_left(g: TwoCell, w: DualPairWitness, q: Bimodule | None = None,
               p: Bimodule | None = None) -> ShadowMap:
    """Trace of ``g: N ⊙ Q -> P ⊙ N`` (the second composite of the definition)."""
    m, n = w.m, w.n
    if q is None:
        q = unit_bimodule(n.target)
    if p is None:
        p = unit_bimodule(n.source)
    if g.dom != hcompose(n, q):
        raise ShapeMismatch("2-cell domain is not N ⊙ Q")
    if g.cod != hcompose(p, n):
        raise ShapeMismatch("2-cell codomain is not P ⊙ N")
    dom = shadow(q)
    cod = shadow(p)
    step1 = hcompose_cells(w.coev, TwoCell.identity(q))   # Q -> M ⊙ N ⊙ Q
    step2 = hcompose_cells(TwoCell.identity(m), g)        # -> M ⊙ P ⊙ N
    pn = hcompose(p, n)
    step4 = hcompose_cells(TwoCell.identity(p), w.eval)   # P ⊙ N ⊙ M -> P

    def fn(label):
        vec = dom.generator_vector(label)
        vec = step1.apply(vec)
        vec = step2.apply(vec)
        vec = theta_element(m, pn, vec)
        vec = step4.apply(vec)
        return cod.normalize_vector(vec)

    return ShadowMap(dom, cod, fn, name="trace-left")


def hattori_stallings_trace(f: TwoCell, q: Bimodule | None = None,
                            p: Bimodule | None = None) -> ShadowMap:
    """Fast path for traces of ``f: Q ⊙ M -> M ⊙ P`` with Q, P twisted units.

    Sends the class of ``x`` to the sum of the classes of the diagonal of
    ``S_f . mu_M(x)``, taken in the shadow of ``P``.
    """
    m = f.dom
    q = unit_bimodule(m.source) if q is None else q
    p = unit_bimodule(m.target) if p is None else p
    if q.width != 1 or p.width != 1:
        raise ShapeMismatch("fast path needs twisted-unit corners")
    dom = shadow(q)
    cod: ClassShadow = shadow(p)  # type: ignore[assignment]

    def fn(label):
        x = dom.generator_vector(label)[0]
        mat = f.matrix @ f.dom.act_ring(x)
        return cod.normalize_matrix(mat)

    return ShadowMap(dom, cod, fn, name="hattori-stallings")


def euler_characteristic(m: Bimodule, w: DualPairWitness | None = None) -> ShadowMap:
    """chi(m): the trace of the identity 2-cell, a map <U_C> -> <U_D>."""
    if w is None:
        w = canonical_dual(m)
    return trace(TwoCell.identity(m), w)


def dual_twocell(g: TwoCell, w: DualPairWitness, q: Bimodule | None = None,
                 p: Bimodule | None = None) -> TwoCell:
    """The mate ``g*: Q ⊙ M -> M ⊙ P`` of ``g: N ⊙ Q -> P ⊙ N``; traces agree."""
    m, n = w.m, w.n
    if q is None:
        q = unit_bimodule(n.source)
    if p is None:
        p = unit_bimodule(n.source)
    if g.dom != hcompose(n, q) or g.cod != hcompose(p, n):
        raise ShapeMismatch("2-cell is not of shape N ⊙ Q -> P ⊙ N")
    id_m = TwoCell.identity(m)
    id_qm = TwoCell.identity(hcompose(q, m))
    first = hcompose_cells(w.coev, id_qm)                 # Q ⊙ M -> M ⊙ N ⊙ Q ⊙ M
    middle = hcompose_cells(hcompose_cells(id_m, g), id_m)
    last = hcompose_cells(TwoCell.identity(hcompose(m, p)), w.eval)
    cell = last.after(middle).after(first)
    return TwoCell(hcompose(q, m), hcompose(m, p), cell.matrix, trusted=True)


# ---------------------------------------------------------------------------
# traces of the coevaluation / evaluation 2-cells (the simplified composites)


def trace_eta(w: DualPairWitness, q: Bimodule) -> ShadowMap:
    """tr(eta^{M,N}_Q): <Q> -> <N ⊙ Q ⊙ M> via the simplified composite."""
    m, n = w.m, w.n
    if q.source != m.source or q.target != m.source:
        raise ShapeMismatch("Q must be an endo-1-cell over the source of M")
    dom = shadow(q)
    qm = hcompose(q, m)
    cod = shadow(hcompose(n, qm))
    step = hcompose_cells(TwoCell.identity(q), w.coev)    # Q -> Q ⊙ (M ⊙ N)

    def fn(label):
        vec = step.apply(dom.generator_vector(label))
        vec = theta_element(qm, n, vec)                   # <Q ⊙ M ⊙ N> -> <N ⊙ Q ⊙ M>
        return cod.normalize_vector(vec)

    return ShadowMap(dom, cod, fn, name="tr(eta)")


def trace_eps(w: DualPairWitness, p: Bimodule) -> ShadowMap:
    """tr(eps^{M,N}_P): <M ⊙ P ⊙ N> -> <P> via the simplified composite."""
    m, n = w.m, w.n
    if p.source != m.target or p.target != m.target:
        raise ShapeMismatch("P must be an endo-1-cell over the target of M")
    pn = hcompose(p, n)
    dom = shadow(hcompose(m, pn))
    cod = shadow(p)
    step = hcompose_cells(TwoCell.identity(p), w.eval)    # P ⊙ (N ⊙ M) -> P

    def fn(label):
        vec = theta_element(m, pn, dom.generator_vector(label))
        vec = step.apply(vec)
        return cod.normalize_vector(vec)

    return ShadowMap(dom, cod, fn, name="tr(eps)")


def trace_eta_raw(w: DualPairWitness, q: Bimodule) -> ShadowMap:
    """tr of the 2-cell eta^{M,N}_Q: Q ⊙ M -> M ⊙ (N ⊙ Q ⊙ M), by Defn of trace."""
    m, n = w.m, w.n
    qm = hcompose(q, m)
    cell = hcompose_cells(w.coev, TwoCell.identity(qm))
    target = hcompose(n, qm)
    as_cell = TwoCell(qm, hcompose(m, target), cell.matrix, trusted=True)
    return trace(as_cell, w, q=q, p=target)


def trace_eps_raw(w: DualPairWitness, p: Bimodule) -> ShadowMap:
    """tr of the 2-cell eps^{M,N}_P: (M ⊙ P ⊙ N) ⊙ M -> M ⊙ P."""
    m, n = w.m, w.n
    mp = hcompose(m, p)
    source = hcompose(mp, n)
    cell = hcompose_cells(TwoCell.identity(mp), w.eval)
    as_cell = TwoCell(hcompose(source, m), mp, cell.matrix, trusted=True)
    return trace(as_cell, w, q=source, p=p)
