"""The algebraic Reidemeister trace.

Chain complexes here are bounded complexes of free right ZZ[pi]-modules with
matrix boundaries.  A twisted chain self-map consists of degreewise matrices
``f_i`` satisfying ``d_i f_i = f_{i-1} phi(d_i)`` for a group endomorphism
``phi``; its Reidemeister trace is the alternating sum of twisted
Hattori-Stallings traces

    R(f) = sum_i (-1)^i sum_j [ (f_i)_jj ]

valued in the free abelian group on the twisted conjugacy classes
``x ~ h x phi(h)^{-1}``.  The Lefschetz number is its augmentation and the
Nielsen number its support size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundaryNotZero, InvalidChainMap, LiftNotFound, UnsupportedGroup
from .gring import RingElement, RingMatrix
from .groups import FreeAbelian, GroupHom, GroupModel, Presented, Word
from .twisted import TwistedClassSet, twisted_conjugacy_classes


# ---------------------------------------------------------------------------
# Fox free differential calculus


def fox_derivative(word: Word, gen: int, projection: GroupHom) -> RingElement:
    """d(word)/d(x_gen), with coefficients pushed through the projection.

    Satisfies d(uv)/dx = du/dx + u dv/dx, dx/dx = 1 and d(x^-1)/dx = -x^-1.
    """
    target = projection.cod
    out = RingElement.zero(target)
    prefix = target.identity()
    for g, s in word:
        img = projection.apply(Word([(g, 1)]))
        if s == 1:
            if g == gen:
                out = out + RingElement.group(target, prefix)
            prefix = target.mul(prefix, img)
        else:
            prefix = target.mul(prefix, target.inv(img))
            if g == gen:
                out = out - RingElement.group(target, prefix)
    return out


# ---------------------------------------------------------------------------
# complexes and twisted chain maps


@dataclass
class EquivariantChainComplex:
    """Bounded complex of free right modules; boundaries[i] is d_{i+1}."""

    base: GroupModel
    ranks: list[int]
    boundaries: list[RingMatrix]

    def __post_init__(self):
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise BoundaryNotZero("need one boundary per adjacent pair of degrees")
        for i, d in enumerate(self.boundaries):
            if d.shape != (self.ranks[i], self.ranks[i + 1]):
                raise BoundaryNotZero(f"boundary {i + 1} has shape {d.shape}")
        for i in range(len(self.boundaries) - 1):
            if not (self.boundaries[i] @ self.boundaries[i + 1]).is_zero():
                raise BoundaryNotZero("d∘d != 0")

    def degree_count(self):
        return len(self.ranks)


@dataclass
class TwistedChainMap:
    """Degreewise matrices with d_i f_i = f_{i-1} phi(d_i)."""

    complex: EquivariantChainComplex
    twist: GroupHom
    maps: list[RingMatrix]

    def __post_init__(self):
        c = self.complex
        if len(self.maps) != c.degree_count():
            raise InvalidChainMap("need one matrix per degree")
        for i, f in enumerate(self.maps):
            if f.shape != (c.ranks[i], c.ranks[i]):
                raise InvalidChainMap(f"degree {i} map has shape {f.shape}")
        for i, d in enumerate(c.boundaries):
            lhs = d @ self.maps[i + 1]
            rhs = self.maps[i] @ d.apply_hom(self.twist)
            if lhs != rhs:
                raise InvalidChainMap(f"twisted chain condition fails at degree {i + 1}")


@dataclass
class ReidemeisterResult:
    classes: TwistedClassSet
    trace: dict            # class label -> integer coefficient
    lefschetz: int
    nielsen: int

    def coefficient(self, label) -> int:
        return self.trace.get(label, 0)


def reidemeister_trace(c: EquivariantChainComplex, m: TwistedChainMap) -> ReidemeisterResult:
    """Alternating twisted Hattori-Stallings trace of a chain self-map."""
    if m.complex is not c and m.complex != c:
        raise InvalidChainMap("map does not live on this complex")
    classes = twisted_conjugacy_classes(c.base, m.twist)
    coeffs: dict = {}
    for i, f in enumerate(m.maps):
        sign = -1 if i % 2 else 1
        for j in range(c.ranks[i]):
            for g, coeff in f.entry(j, j).terms.items():
                label = classes.class_of(g)
                coeffs[label] = coeffs.get(label, 0) + sign * coeff
    coeffs = {k: v for k, v in coeffs.items() if v}
    lefschetz = sum(coeffs.values())
    return ReidemeisterResult(classes, coeffs, lefschetz, len(coeffs))


def lefschetz_via_homology(c: EquivariantChainComplex, m: TwistedChainMap) -> int:
    """Independent route: augment pi -> 1 and take the alternating trace."""
    total = 0
    for i, f in enumerate(m.maps):
        aug = f.augmentation()
        tr = sum(aug[j][j] for j in range(c.ranks[i]))
        total += -tr if i % 2 else tr
    return total


# ---------------------------------------------------------------------------
# presentation complexes


def presentation_complex(g: Presented, quotient: GroupModel, images) -> EquivariantChainComplex:
    """The equivariant 2-complex of a presentation, over ZZ[quotient].

    ``images`` lists the quotient image of each generator; the projection must
    kill every relator.  Ranks are (1, #generators, #relators), the first
    boundary is the column of ``x_i - 1`` and the second the Fox matrix.
    """
    proj = GroupHom(g, quotient, list(images))
    ngen = len(g.generator_names)
    for r in g.relators:
        if proj.apply(r) != quotient.identity():
            raise BoundaryNotZero("projection does not kill a relator")
    d1 = RingMatrix(
        quotient, 1, ngen,
        {(0, j): RingElement.group(quotient, proj.apply(Word([(j, 1)]))) - RingElement.one(quotient)
         for j in range(ngen)},
    )
    entries = {}
    for k, rel in enumerate(g.relators):
        for j in range(ngen):
            v = fox_derivative(rel, j, proj)
            if not v.is_zero():
                entries[(j, k)] = v
    d2 = RingMatrix(quotient, ngen, len(g.relators), entries)
    ranks = [1, ngen] + ([len(g.relators)] if g.relators else [])
    boundaries = [d1] + ([d2] if g.relators else [])
    return EquivariantChainComplex(quotient, ranks, boundaries)


# ---------------------------------------------------------------------------
# the two standard families


def circle_self_map(d: int) -> tuple[EquivariantChainComplex, TwistedChainMap]:
    """Degree-d self map of the circle over ZZ[Z].

    phi(t) = t^d; f_1 is the geometric series 1 + t + ... + t^{d-1} for d > 0,
    empty for d = 0, and -t^-1 - ... - t^-|d| for negative d.
    """
    z = FreeAbelian(1)
    t = (1,)
    d1 = RingMatrix(z, 1, 1, {(0, 0): RingElement.group(z, t) - RingElement.one(z)})
    cx = EquivariantChainComplex(z, [1, 1], [d1])
    phi = GroupHom(z, z, [[d]])
    if d > 0:
        f1 = sum((RingElement.group(z, (k,)) for k in range(d)), RingElement.zero(z))
    elif d == 0:
        f1 = RingElement.zero(z)
    else:
        f1 = sum((RingElement.group(z, (-k,), -1) for k in range(1, -d + 1)), RingElement.zero(z))
    maps = [RingMatrix.identity(z, 1), RingMatrix(z, 1, 1, {(0, 0): f1})]
    return cx, TwistedChainMap(cx, phi, maps)


def torus2_self_map(f: list[list[int]]) -> tuple[EquivariantChainComplex, TwistedChainMap]:
    """Self-map of the 2-torus induced by an integer matrix F.

    Built from the Fox calculus of the standard presentation ⟨a,b | aba⁻¹b⁻¹⟩;
    the degree-2 map is obtained by exact division and certified by the
    twisted chain condition.
    """
    pres = Presented(["a", "b"], ["abAB"])
    z2 = FreeAbelian(2)
    e1, e2 = (1, 0), (0, 1)
    cx = presentation_complex(pres, z2, [e1, e2])
    phi = GroupHom(z2, z2, f)

    def power_word(gen: int, n: int) -> Word:
        return Word([(gen, 1 if n > 0 else -1)] * abs(n))

    # a |-> a^F00 b^F10,  b |-> a^F01 b^F11
    wa = power_word(0, f[0][0]) * power_word(1, f[1][0])
    wb = power_word(0, f[0][1]) * power_word(1, f[1][1])
    proj = GroupHom(pres, z2, [e1, e2])
    f1 = RingMatrix(
        z2, 2, 2,
        {
            (0, 0): fox_derivative(wa, 0, proj),
            (1, 0): fox_derivative(wa, 1, proj),
            (0, 1): fox_derivative(wb, 0, proj),
            (1, 1): fox_derivative(wb, 1, proj),
        },
    )
    d2 = cx.boundaries[1]
    rhs = f1 @ d2.apply_hom(phi)
    f2 = _solve_scalar(d2, rhs)
    maps = [RingMatrix.identity(z2, 1), f1, RingMatrix(z2, 1, 1, {(0, 0): f2})]
    return cx, TwistedChainMap(cx, phi, maps)


def _solve_scalar(d2: RingMatrix, rhs: RingMatrix) -> RingElement:
    """Solve d2 * z = rhs for a single ring element z, exactly."""
    base = d2.base
    for i in range(d2.rows):
        divisor = d2.entry(i, 0)
        if divisor.is_zero():
            continue
        z = _laurent_divide(rhs.entry(i, 0), divisor)
        if z is not None:
            check = RingMatrix(base, d2.rows, 1,
                               {(r, 0): d2.entry(r, 0) * z for r in range(d2.rows)})
            target = RingMatrix(base, d2.rows, 1,
                                {(r, 0): rhs.entry(r, 0) for r in range(d2.rows)})
            if check == target:
                return z
    raise LiftNotFound("no exact solution of the degree-2 lifting equation")


def _laurent_divide(num: RingElement, den: RingElement) -> RingElement | None:
    """Exact division in ZZ[Z^d] (commutative Laurent ring), or None."""
    if den.is_zero():
        return None
    if num.is_zero():
        return RingElement.zero(num.base)
    base = num.base
    if not isinstance(base, FreeAbelian):
        raise UnsupportedGroup("exact division implemented for free abelian bases")
    remainder = dict(num.terms)
    # lead term of the divisor under lex order
    lead = max(den.terms, key=lambda m: m)
    lead_c = den.terms[lead]
    quotient: dict = {}
    for _ in range(len(num.terms) * max(len(den.terms), 1) * 4 + 8):
        if not remainder:
            return RingElement(base, quotient)
        m = max(remainder, key=lambda m: m)
        c = remainder[m]
        if c % lead_c != 0:
            return None
        q_mono = tuple(a - b for a, b in zip(m, lead))
        q_coeff = c // lead_c
        quotient[q_mono] = quotient.get(q_mono, 0) + q_coeff
        for mono, coeff in den.terms.items():
            key = tuple(a + b for a, b in zip(q_mono, mono))
            remainder[key] = remainder.get(key, 0) - q_coeff * coeff
            if remainder[key] == 0:
                del remainder[key]
    return None
