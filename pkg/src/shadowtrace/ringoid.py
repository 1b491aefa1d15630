"""Finite skeleta of free-module categories as ringoids, and their shadows.

A ringoid here is the full subcategory of free right modules A^0, ..., A^r
over a group ring A: objects are ranks, homs are matrices, composition is
matrix multiplication.  Its shadow is presented in two independent ways:

* the *fast* presentation: the shadow of the twisting bimodule over A itself,
  with the normalizer summing diagonal blocks (the diagonal-class trace);
* the *cokernel* presentation: the honest coequalizer of ``Y ∘ X ~ tw(X) ∘ Y``
  over all composable pairs, reduced by Smith normal form.

The Morita inverse map identifies the two through the rank-one object.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bicategory import (
    Bimodule,
    RingObject,
    ShadowElement,
    ShadowMap,
    ShadowPresentation,
    TwoCell,
    shadow,
    substitute,
    unit_bimodule,
)
from .errors import MissingBaseObject, ObjectMismatch, ShapeMismatch, UnsupportedShadow
from .gring import RingElement, RingMatrix
from .groups import FiniteTable
from .snf import mat_vec, smith_normal_form, unimodular_inverse


@dataclass
class Ringoid:
    base: RingObject
    ranks: list[int]

    def hom_shape(self, r: int, s: int):
        return (s, r)

    def compose(self, x: RingMatrix, y: RingMatrix) -> RingMatrix:
        """x after y (matrix product)."""
        return x @ y

    def identity_at(self, r: int) -> RingMatrix:
        return RingMatrix.identity(self.base.base, r)

    def check_morphism(self, r: int, s: int, x: RingMatrix):
        if x.shape != (s, r):
            raise ShapeMismatch(f"expected a {s}x{r} matrix for hom({r},{s})")
        if x.base != self.base.base:
            raise ObjectMismatch("morphism over the wrong base ring")


def free_module_skeleton(a: RingObject, max_rank: int) -> Ringoid:
    if max_rank < 1:
        raise ValueError("max_rank must be at least 1")
    return Ringoid(a, list(range(max_rank + 1)))


@dataclass
class RingoidBimodule:
    """Twist of a ringoid by ``- ⊙ Q`` for a bimodule Q over the base ring."""

    over: Ringoid
    twist: Bimodule  # (A, A)-bimodule

    def __post_init__(self):
        if self.twist.source != self.over.base or self.twist.target != self.over.base:
            raise ObjectMismatch("twisting bimodule must be an endo-1-cell over the base")

    def object_map(self, r: int) -> int:
        return r * self.twist.width

    def morphism_map(self, x: RingMatrix) -> RingMatrix:
        """X: r -> s goes to X ⊙ id_Q: r*w -> s*w (blockwise substitution)."""
        return substitute(x, self.twist)


def untwisted(r: Ringoid) -> RingoidBimodule:
    return RingoidBimodule(r, unit_bimodule(r.base))


# ---------------------------------------------------------------------------
# fast presentation: diagonal-class normalizer into the base shadow


class RingoidShadow(ShadowPresentation):
    """Shadow of a ringoid presented on the base ring's shadow."""

    def __init__(self, ringoid: Ringoid, twist: RingoidBimodule):
        self.ringoid = ringoid
        self.twist = twist
        self.ring = ringoid.base
        self.base_shadow = shadow(twist.twist)

    def normalize_endomorphism(self, rank: int, x: RingMatrix) -> ShadowElement:
        """Diagonal-class trace of a morphism rank -> twist(rank)."""
        w = self.twist.twist.width
        if rank not in self.ringoid.ranks:
            raise ShapeMismatch(f"rank {rank} is not an object of the skeleton")
        if x.shape != (rank * w, rank):
            raise ShapeMismatch("endomorphism has the wrong twisted shape")
        out = self.base_shadow.zero()
        for i in range(rank):
            block = [x.entry(i * w + l, i) for l in range(w)]
            out = out + self.base_shadow.normalize_vector(block)
        return out

    def reduce_coeffs(self, coeffs):
        return self.base_shadow.reduce_coeffs(coeffs)

    def normalize_vector(self, vec):
        return self.base_shadow.normalize_vector(vec)

    def is_finite(self):
        return self.base_shadow.is_finite()

    def labels(self):
        return self.base_shadow.labels()

    def generator_vector(self, label):
        return self.base_shadow.generator_vector(label)

    def label_name(self, label):
        return self.base_shadow.label_name(label)

    def __eq__(self, other):
        return (
            isinstance(other, RingoidShadow)
            and self.ringoid == other.ringoid
            and self.base_shadow == other.base_shadow
        )


def ringoid_shadow(r: Ringoid, m: RingoidBimodule | None = None) -> RingoidShadow:
    if m is None:
        m = untwisted(r)
    if m.over is not r and m.over != r:
        raise ObjectMismatch("twist is over a different ringoid")
    return RingoidShadow(r, m)


# ---------------------------------------------------------------------------
# honest coequalizer presentation (finite bases)


class RingoidCokernelShadow(ShadowPresentation):
    """Coequalizer of ``Y ∘ X ~ tw(X) ∘ Y`` on ⊕_p Hom(p, tw(p)), via SNF.

    Basis symbols are ``(p, i, j, h)``: the matrix unit ``h E_{ij}`` inside
    ``Hom(p, tw(p))``.  Relations run over all composable basic pairs.
    """

    def __init__(self, ringoid: Ringoid, twist: RingoidBimodule):
        base = ringoid.base.base
        if not isinstance(base, FiniteTable):
            raise UnsupportedShadow("cokernel presentation needs a finite base group")
        self.ringoid = ringoid
        self.twist = twist
        self.ring = ringoid.base
        w = twist.twist.width
        symbols = []
        for p in ringoid.ranks:
            for i in range(p * w):
                for j in range(p):
                    for h in base.elements():
                        symbols.append((p, i, j, h))
        self._symbols = symbols
        self._index = {s: k for k, s in enumerate(symbols)}
        dim = len(symbols)

        def vectorize(p, mat: RingMatrix):
            col = [0] * dim
            for (i, j), v in mat.entries.items():
                for h, c in v.terms.items():
                    col[self._index[(p, i, j, h)]] += c
            return col

        # Relations for X running over a generating family of morphisms is
        # enough: Y(X1 X2) - tw(X1 X2)Y decomposes as relations for X1 and X2,
        # and every matrix unit h E_ij factors through the rank-one object.
        gen_x = []
        for q in ringoid.ranks:
            for i in range(q):
                gen_x.append((1, q, RingMatrix(base, q, 1, {(i, 0): RingElement.one(base)})))
        for p in ringoid.ranks:
            for j in range(p):
                gen_x.append((p, 1, RingMatrix(base, 1, p, {(0, j): RingElement.one(base)})))
        for h in base.elements():
            gen_x.append((1, 1, RingMatrix(base, 1, 1, {(0, 0): RingElement.group(base, h)})))

        seen = set()
        columns = []
        for p, q, x in gen_x:
            if p not in ringoid.ranks or q not in ringoid.ranks:
                continue
            twx = twist.morphism_map(x)
            for yi in range(p * w):
                for yj in range(q):
                    for yh in base.elements():
                        y = RingMatrix(base, p * w, q, {(yi, yj): RingElement.group(base, yh)})
                        col_a = vectorize(p, y @ x)
                        col_b = vectorize(q, twx @ y)
                        col = tuple(u - v for u, v in zip(col_a, col_b))
                        if any(col) and col not in seen:
                            seen.add(col)
                            columns.append(list(col))
        rel = [[c[r] for c in columns] for r in range(dim)] if columns else [[0] for _ in range(dim)]
        u, d, _ = smith_normal_form(rel)
        self._u = u
        self._u_inv = unimodular_inverse(u)
        ncols = len(rel[0])
        self._diag = [d[t][t] if t < min(dim, ncols) else 0 for t in range(dim)]
        self._live = [t for t in range(dim) if self._diag[t] != 1]

    def reduce_coeffs(self, coeffs):
        out = {}
        for t, v in coeffs.items():
            dt = self._diag[t]
            v = v % dt if dt > 0 else v
            if v:
                out[t] = v
        return out

    def normalize_endomorphism(self, rank: int, x: RingMatrix) -> ShadowElement:
        w = self.twist.twist.width
        if x.shape != (rank * w, rank):
            raise ShapeMismatch("endomorphism has the wrong twisted shape")
        vec = [0] * len(self._symbols)
        for (i, j), v in x.entries.items():
            for h, c in v.terms.items():
                vec[self._index[(rank, i, j, h)]] += c
        y = mat_vec(self._u, vec)
        return ShadowElement(self, {t: y[t] for t in self._live})

    def is_finite(self):
        return True

    def labels(self):
        return list(self._live)

    def generator_endomorphism(self, label):
        """A (rank, matrix) pair representing a presentation generator."""
        base = self.ring.base
        col = [self._u_inv[r][label] for r in range(len(self._symbols))]
        by_rank: dict = {}
        for r, c in enumerate(col):
            if c:
                p, i, j, h = self._symbols[r]
                by_rank.setdefault(p, {})[(i, j)] = (
                    by_rank.get(p, {}).get((i, j), RingElement.zero(base))
                    + RingElement.group(base, h, c)
                )
        # presentation generators always live in a single rank in practice
        if len(by_rank) != 1:
            raise UnsupportedShadow("generator mixes ranks")
        (p, entries), = by_rank.items()
        w = self.twist.twist.width
        return p, RingMatrix(base, p * w, p, entries)

    def free_rank(self):
        return sum(1 for t in self._live if self._diag[t] == 0)

    def label_name(self, label):
        return f"x{label}"

    def __eq__(self, other):
        return (
            isinstance(other, RingoidCokernelShadow)
            and self.ringoid == other.ringoid
            and self.twist == other.twist
        )


_COKERNEL_CACHE: dict = {}


def ringoid_shadow_cokernel(r: Ringoid, m: RingoidBimodule | None = None) -> RingoidCokernelShadow:
    if m is None:
        m = untwisted(r)
    key = (id(r), id(m.twist))
    if key not in _COKERNEL_CACHE:
        _COKERNEL_CACHE[key] = RingoidCokernelShadow(r, m)
    return _COKERNEL_CACHE[key]


# ---------------------------------------------------------------------------
# Morita inverse and the inclusion-of-objects route


def morita_inverse_map(r: Ringoid, m: RingoidBimodule | None = None):
    """(inverse, section) between the cokernel shadow and the base shadow.

    The section is induced by the inclusion of the rank-one object; the
    inverse is the diagonal-class trace.  Both composites are the identity,
    which is verified on the presentation generators before returning.
    """
    if 1 not in r.ranks:
        raise MissingBaseObject("the skeleton has no rank-one object")
    m = untwisted(r) if m is None else m
    cok = ringoid_shadow_cokernel(r, m)
    fast = ringoid_shadow(r, m)
    base_shadow = fast.base_shadow
    w = m.twist.width

    def inverse_fn(label):
        p, mat = cok.generator_endomorphism(label)
        return fast.normalize_endomorphism(p, mat)

    inverse = ShadowMap(cok, base_shadow, inverse_fn, name="diag-class")

    def section_fn(label):
        vec = base_shadow.generator_vector(label)
        mat = RingMatrix(r.base.base, w, 1, {(l, 0): vec[l] for l in range(w)})
        return cok.normalize_endomorphism(1, mat)

    section = ShadowMap(base_shadow, cok, section_fn, name="include-rank-1")

    if not inverse.compose(section).is_identity():
        raise UnsupportedShadow("diag-class is not left inverse to the inclusion")
    if not section.compose(inverse).is_identity():
        raise UnsupportedShadow("inclusion is not left inverse to diag-class")
    return inverse, section


def class_of_endomorphism(r: Ringoid, rank: int, x: RingMatrix,
                          m: RingoidBimodule | None = None):
    """Class of an endomorphism in the ringoid shadow, and its base image.

    Returns ``(ringoid_class, base_class)`` where the base image is computed
    through the Morita inverse; it is asserted to agree with the diagonal
    Hattori-Stallings trace computed directly over the base ring.
    """
    m = untwisted(r) if m is None else m
    if isinstance(r.base.base, FiniteTable):
        cok = ringoid_shadow_cokernel(r, m)
        inverse, _ = morita_inverse_map(r, m)
        ringoid_class = cok.normalize_endomorphism(rank, x)
        image = inverse.apply(ringoid_class)
    else:
        fast = ringoid_shadow(r, m)
        ringoid_class = fast.normalize_endomorphism(rank, x)
        image = ringoid_class
    direct = ringoid_shadow(r, m).normalize_endomorphism(rank, x)
    if image != direct:
        raise UnsupportedShadow("ringoid route disagrees with the direct trace")
    return ringoid_class, image
