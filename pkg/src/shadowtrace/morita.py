"""Base-change 1-cells, Morita equivalences, restriction and transfer.

For a ring map ``f: A -> C`` two bimodules matter: ``_fC`` (C with A acting
on the left through f) and ``C_f`` (C with A acting on the right through f).
``_fC`` is right-free of rank 1 always; representing ``C_f`` right-free needs
a free right A-basis of C, computed here as the lex-least left transversal of
the image subgroup.  Restriction pushes classes forward along f; transfer is
the Euler characteristic of ``C_f`` and only exists when the basis does.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicategory import (
    Bimodule,
    RingObject,
    ShadowMap,
    TwoCell,
    hcompose,
    shadow,
    twisted_unit,
    unit_bimodule,
)
from .duality import (
    DualPairWitness,
    euler_characteristic,
    hattori_stallings_trace,
    trace,
    verify_dual_pair,
)
from .errors import (
    NoFreeBasis,
    ObjectMismatch,
    ShapeMismatch,
    SquareNotCommuting,
)
from .gring import RingElement, RingMatrix
from .groups import FiniteTable, FreeAbelian, GroupHom
from .twisted import hochschild_twisted_classes


class RingHom:
    """A map of group rings induced by a group homomorphism (group-like image)."""

    def __init__(self, dom: RingObject, cod: RingObject, group_hom: GroupHom):
        if dom.amp != 1 or cod.amp != 1:
            raise ObjectMismatch("ring maps are supported between unamplified group rings")
        if group_hom.dom != dom.base or group_hom.cod != cod.base:
            raise ObjectMismatch("group homomorphism does not match the ring objects")
        self.dom = dom
        self.cod = cod
        self.group_hom = group_hom

    @classmethod
    def from_group_hom(cls, hom: GroupHom) -> "RingHom":
        return cls(RingObject(hom.dom), RingObject(hom.cod), hom)

    @classmethod
    def identity(cls, ring: RingObject) -> "RingHom":
        return cls(ring, ring, GroupHom.identity_hom(ring.base))

    def apply(self, x):
        return self.group_hom.apply(x)

    def __repr__(self):
        return f"RingHom({self.dom!r} -> {self.cod!r})"


# ---------------------------------------------------------------------------
# base change


@dataclass
class BaseChangeData:
    """Both base-change bimodules for f with their canonical dual pairs."""

    fC: Bimodule            # (A, C), rank 1
    Cf: Bimodule            # (C, A), rank = index of the image
    pair: DualPairWitness   # (_fC, C_f)
    transfer_pair: DualPairWitness  # (C_f, _fC)
    transversal: list


def induced_bimodule(f: RingHom) -> Bimodule:
    """``_fC``: rank-1 bimodule with the left action through f (always exists)."""
    g = f.dom.base
    c = f.cod.base
    gens = {
        s: RingMatrix(c, 1, 1, {(0, 0): RingElement.group(c, f.apply(s))})
        for s in g.generators()
    }
    return Bimodule(f.dom, f.cod, 1, gens, trusted=True)


def _transversal(f: RingHom):
    """Lex-least left coset representatives of im(f), with a decomposition map."""
    a = f.dom.base
    c = f.cod.base
    if isinstance(a, FiniteTable) and isinstance(c, FiniteTable):
        preimage = {}
        for h in a.elements():
            img = f.apply(h)
            if img in preimage:
                raise NoFreeBasis("ring map is not injective on the group")
            preimage[img] = h
        image = set(preimage)
        reps = []
        assigned: dict = {}
        for x in c.elements():
            if x in assigned:
                continue
            reps.append(x)
            for h_img in image:
                assigned[c.mul(x, h_img)] = (len(reps) - 1, preimage[h_img])

        def decompose(x):
            return assigned[x]

        return reps, decompose
    if isinstance(a, FreeAbelian) and isinstance(c, FreeAbelian) and a.rank == c.rank:
        hom = f.group_hom
        if hom.is_automorphism():
            inv = hom.inverse()
            reps = [c.identity()]

            def decompose(x):
                return (0, inv.apply(x))

            return reps, decompose
    raise NoFreeBasis("no computable free right basis for this ring map")


def base_change_pair(f: RingHom) -> BaseChangeData:
    """Construct ``_fC``, ``C_f`` and both canonical dual pair witnesses."""
    a = f.dom.base
    c = f.cod.base
    fC = induced_bimodule(f)
    reps, decompose = _transversal(f)
    t = len(reps)

    # C_f: right A-basis the transversal; g . c_j = c_i . f(h)
    nu = {}
    for s in c.generators():
        entries = {}
        for j, rep in enumerate(reps):
            i, h = decompose(c.mul(s, rep))
            key = (i, j)
            prev = entries.get(key, RingElement.zero(a))
            entries[key] = prev + RingElement.group(a, h)
        nu[s] = RingMatrix(a, t, t, entries)
    Cf = Bimodule(f.cod, f.dom, t, nu)

    # witness for (_fC, C_f): eta(1) = decomposition of 1_C; eps = multiply out
    i0, h0 = decompose(c.identity())
    eta1 = TwoCell(
        unit_bimodule(f.dom), hcompose(fC, Cf),
        RingMatrix(a, t, 1, {(i0, 0): RingElement.group(a, h0)}),
    )
    eps1 = TwoCell(
        hcompose(Cf, fC), unit_bimodule(f.cod),
        RingMatrix(c, 1, t, {(0, j): RingElement.group(c, rep) for j, rep in enumerate(reps)}),
    )
    pair = DualPairWitness(fC, Cf, eta1, eps1)
    if not verify_dual_pair(pair):
        raise NoFreeBasis("triangle identities failed for the base-change pair")

    # witness for (C_f, _fC): eta'(1) = sum c_j (x) c_j^-1 ; eps' = H-coefficient of c_j
    eta2 = TwoCell(
        unit_bimodule(f.cod), hcompose(Cf, fC),
        RingMatrix(c, t, 1, {(j, 0): RingElement.group(c, c.inv(rep)) for j, rep in enumerate(reps)}),
    )
    eps_entries = {}
    for j, rep in enumerate(reps):
        i, h = decompose(rep)
        if i == i0:
            eps_entries[(0, j)] = RingElement.group(a, a.mul(h, a.inv(h0)))
    eps2 = TwoCell(hcompose(fC, Cf), unit_bimodule(f.dom),
                   RingMatrix(a, 1, t, eps_entries))
    transfer_pair = DualPairWitness(Cf, fC, eta2, eps2)
    if not verify_dual_pair(transfer_pair):
        raise NoFreeBasis("triangle identities failed for the transfer pair")
    return BaseChangeData(fC, Cf, pair, transfer_pair, reps)


# ---------------------------------------------------------------------------
# restriction and transfer


def restriction(f: RingHom) -> ShadowMap:
    """<U_A> -> <U_C>: pushforward of classes along f (the hom-set map <f>)."""
    dom = shadow(unit_bimodule(f.dom))
    cod = shadow(unit_bimodule(f.cod))

    def fn(label):
        x = dom.generator_vector(label)[0]
        return cod.normalize_vector([x.apply_hom(f.group_hom)])

    return ShadowMap(dom, cod, fn, name="res")


def transfer(f: RingHom, data: BaseChangeData | None = None) -> ShadowMap:
    """<U_C> -> <U_A>: the Euler characteristic of C_f (needs a free basis)."""
    data = base_change_pair(f) if data is None else data
    out = hattori_stallings_trace(TwoCell.identity(data.Cf))
    out.name = "trf"
    return out


def restriction_transfer_composite(f: RingHom, order: str = "res∘trf"):
    """Both routes of the restriction-transfer theorem.

    ``"res∘trf"`` (restriction first) composes <U_A> -> <U_C> -> <U_A> and
    compares with chi(_fC ⊙ C_f); ``"trf∘res"`` composes the other way round
    and compares with chi(C_f ⊙ _fC).  Returns (composite, chi, agree).
    """
    data = base_change_pair(f)
    res = restriction(f)
    trf = transfer(f, data)
    if order == "res∘trf":
        composite = trf.compose(res)
        chi = euler_characteristic(hcompose(data.fC, data.Cf))
    elif order == "trf∘res":
        composite = res.compose(trf)
        chi = euler_characteristic(hcompose(data.Cf, data.fC))
    else:
        raise ValueError("order must be 'res∘trf' or 'trf∘res'")
    agree = composite.equals(chi)
    return composite, chi, agree


def twisted_transfer(f: RingHom, j: GroupHom, k: GroupHom,
                     data: BaseChangeData | None = None) -> ShadowMap:
    """Trace of the canonical 2-cell C_k ⊙ C_f -> C_f ⊙ A_j over the C_f pair.

    ``j`` and ``k`` must be automorphisms with ``k ∘ f = f ∘ j``; with both
    the identity this degenerates to the ordinary transfer.
    """
    a = f.dom.base
    c = f.cod.base
    if j.dom != a or k.dom != c:
        raise ShapeMismatch("twists must be endomorphisms of the two groups")
    for s in a.generators():
        if k.apply(f.apply(s)) != f.apply(j.apply(s)):
            raise SquareNotCommuting("k ∘ f != f ∘ j")
    if not (j.is_automorphism() and k.is_automorphism()):
        raise ShapeMismatch("twisted transfers need automorphism twists")
    data = base_change_pair(f) if data is None else data
    t = len(data.transversal)
    reps = data.transversal
    _, dec = _transversal(f)
    k_inv = k.inverse()

    # S[i, l] = j(h) where k^-1(c_l) = c_i . f(h)
    entries = {}
    for l, rep in enumerate(reps):
        i, h = dec(k_inv.apply(rep))
        entries[(i, l)] = RingElement.group(a, j.apply(h))
    q = twisted_unit(f.cod, k)
    p = twisted_unit(f.dom, j)
    dom_bim = hcompose(q, data.Cf)
    cod_bim = hcompose(data.Cf, p)
    cell = TwoCell(dom_bim, cod_bim, RingMatrix(a, t, t, entries))
    return trace(cell, data.transfer_pair, q=q, p=p)


# ---------------------------------------------------------------------------
# matrix Morita equivalences


@dataclass
class MoritaWitness:
    """Dual pairs in both orders whose structure maps are mutually inverse."""

    pair1: DualPairWitness  # (M, N)
    pair2: DualPairWitness  # (N, M)


def verify_morita(w: MoritaWitness) -> bool:
    """The four inverse identities between the two pairs' structure maps."""
    eta1, eps1 = w.pair1.coev, w.pair1.eval   # U_C -> M N,  N M -> U_D
    eta2, eps2 = w.pair2.coev, w.pair2.eval   # U_D -> N M,  M N -> U_C
    return (
        eta2.after(eps1).matrix.is_identity()
        and eps2.after(eta1).matrix.is_identity()
        and eta1.after(eps2).matrix.is_identity()
        and eps1.after(eta2).matrix.is_identity()
    )


def matrix_morita(a: RingObject, n: int) -> MoritaWitness:
    """The Morita equivalence between A and the n-by-n matrix ring over A."""
    if n < 1:
        raise ValueError("n must be positive")
    if a.amp != 1:
        raise ObjectMismatch("amplify a plain group ring")
    mn = RingObject(a.base, n)
    g = a.base
    scalar = {s: RingMatrix(g, 1, 1, {(0, 0): RingElement.group(g, s)}) for s in g.generators()}
    col = Bimodule(mn, a, 1, dict(scalar), trusted=True)   # columns: (M_n(A), A)
    row = Bimodule(a, mn, 1, dict(scalar), trusted=True)   # rows: (A, M_n(A))
    one = RingMatrix.identity(g, 1)
    eta1 = TwoCell(unit_bimodule(mn), hcompose(col, row), one, trusted=True)
    eps1 = TwoCell(hcompose(row, col), unit_bimodule(a), one, trusted=True)
    eta2 = TwoCell(unit_bimodule(a), hcompose(row, col), one, trusted=True)
    eps2 = TwoCell(hcompose(col, row), unit_bimodule(mn), one, trusted=True)
    w = MoritaWitness(DualPairWitness(col, row, eta1, eps1),
                      DualPairWitness(row, col, eta2, eps2))
    if not (verify_dual_pair(w.pair1) and verify_dual_pair(w.pair2) and verify_morita(w)):
        raise ObjectMismatch("matrix Morita witness failed verification")
    return w
