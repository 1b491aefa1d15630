"""Ring objects, bimodules, 2-cells and zeroth-Hochschild shadows.

Conventions
-----------

A ring object is ``M_amp(ZZ[base])``.  A bimodule from ``(G, m)`` to
``(H, n)`` is stored *right-free*: it is determined by its devolved width
``w`` and a ring homomorphism ``mu: ZZ[G] -> M_w(ZZ[H])`` recorded on group
generators.  The spec-visible rank is ``m * w`` (so the unit bimodule of an
amplified ring has rank ``amp``), and the underlying right module is the
``w``-fold sum of the standard row module of ``M_n(ZZ[H])``.

Horizontal composition substitutes the second action into the entries of the
first (a Kronecker-style block construction); with composite indices
flattened row-major, composition is strictly associative and strictly unital,
so the unitors and associator returned by :func:`left_unitor` and friends are
honest relabelling 2-cells that happen to carry identity matrices.

Elements of a bimodule are coefficient vectors over the target group ring,
indexed by the right basis.  The cyclic rotation ``theta`` acts on elements
by ``(e_i (x) f_j) . a  |->  sum_k (f_j (x) e_k) . mu_M(a)[k, i]``; it is only
well defined after passing to shadows, which is where all comparisons happen.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BaseMismatch, ObjectMismatch, ShapeMismatch, UnsupportedShadow
from .gring import RingElement, RingMatrix
from .groups import FiniteTable, FreeAbelian, GroupHom, GroupModel
from .snf import mat_vec, smith_normal_form, unimodular_inverse
from .twisted import TwistedClassSet, hochschild_twisted_classes


@dataclass(frozen=True)
class RingObject:
    """The ring M_amp(ZZ[base]); amp = 1 is the plain group ring."""

    base: GroupModel
    amp: int = 1

    def __post_init__(self):
        if self.amp < 1:
            raise ValueError("amplification degree must be >= 1")

    def __repr__(self):
        inner = f"Z[{self.base!r}]"
        return inner if self.amp == 1 else f"M{self.amp}({inner})"


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """A 1-cell, right-free with an explicit left-action homomorphism."""

    def __init__(self, source: RingObject, target: RingObject, width: int,
                 gen_action: dict, trusted: bool = False):
        if width < 0:
            raise ValueError("width must be non-negative")
        self.source = source
        self.target = target
        self.width = width
        self._gen_action = dict(gen_action)
        self._elem_cache: dict = {}
        self._inv_cache: dict = {}
        if not trusted:
            self._validate()

    # -- construction helpers ------------------------------------------------

    @property
    def rank(self) -> int:
        """Spec-visible rank: source amplification times devolved width."""
        return self.source.amp * self.width

    def _validate(self):
        g = self.source.base
        h = self.target.base
        for s, mat in self._gen_action.items():
            if mat.shape != (self.width, self.width):
                raise ShapeMismatch("action matrices must be width x width")
            if mat.base != h:
                raise BaseMismatch("action matrices must live over the target group")
        if isinstance(g, FiniteTable):
            missing = [s for s in g.generators() if s not in self._gen_action]
            if missing:
                raise ValueError(f"missing action for generators {missing}")
            # well-definedness: check mu(a)mu(b) == mu(ab) against generators
            for a in g.elements():
                for b in g.generators():
                    if self.act(a) @ self.act(b) != self.act(g.mul(a, b)):
                        raise ValueError("action is not a homomorphism")
        elif isinstance(g, FreeAbelian):
            for s in g.generators():
                if s not in self._gen_action:
                    raise ValueError("missing action for a basis generator")
            gens = list(g.generators())
            for i in range(len(gens)):
                for j in range(i + 1, len(gens)):
                    a, b = self._gen_action[gens[i]], self._gen_action[gens[j]]
                    if a @ b != b @ a:
                        raise ValueError("free abelian action matrices must commute")

    # -- the action ----------------------------------------------------------

    def act(self, x) -> RingMatrix:
        """Action matrix of a group element of the source base."""
        if self.width == 0:
            return RingMatrix.zero(self.target.base, 0, 0)
        if x in self._elem_cache:
            return self._elem_cache[x]
        g = self.source.base
        if x == g.identity():
            mat = RingMatrix.identity(self.target.base, self.width)
        elif x in self._gen_action:
            mat = self._gen_action[x]
        elif isinstance(g, FiniteTable):
            mat = self._act_finite(x)
        elif isinstance(g, FreeAbelian):
            mat = self._act_lattice(x)
        else:
            raise BaseMismatch("cannot act by elements of a presented group")
        self._elem_cache[x] = mat
        return mat

    def _act_finite(self, x):
        g = self.source.base
        # walk a word for x in the generators via BFS from the identity
        prev = {g.identity(): RingMatrix.identity(self.target.base, self.width)}
        frontier = [g.identity()]
        while x not in prev:
            y = frontier.pop(0)
            for s in g.generators():
                z = g.mul(y, s)
                if z not in prev:
                    prev[z] = prev[y] @ self._gen_action[s]
                    frontier.append(z)
        self._elem_cache.update(prev)
        return prev[x]

    def _act_lattice(self, x):
        g = self.source.base
        mat = RingMatrix.identity(self.target.base, self.width)
        for gen, exp in zip(g.generators(), x):
            if exp == 0:
                continue
            base = self._gen_action[gen] if exp > 0 else self._invert(self._gen_action[gen])
            for _ in range(abs(exp)):
                mat = mat @ base
        return mat

    def _invert(self, mat: RingMatrix) -> RingMatrix:
        key = id(mat)
        if key not in self._inv_cache:
            inv = _monomial_inverse(mat)
            if inv is None:
                raise UnsupportedShadow("cannot invert a non-monomial action over an infinite group")
            self._inv_cache[key] = inv
        return self._inv_cache[key]

    def act_ring(self, x: RingElement) -> RingMatrix:
        """ZZ-linear extension of the action to group-ring elements."""
        out = RingMatrix.zero(self.target.base, self.width, self.width)
        for g, c in x.terms.items():
            out = out + self.act(g).scale(c)
        return out

    # -- structure recognition ------------------------------------------------

    def recognize_twist(self) -> GroupHom | None:
        """When width 1 with single-group-element entries, the twisting map."""
        if self.width != 1:
            return None
        g = self.source.base
        images = {}
        for s in g.generators():
            elt = self.act(s).entry(0, 0).single_group_term()
            if elt is None:
                return None
            images[s] = elt
        if isinstance(g, FiniteTable):
            full = [self.act(x).entry(0, 0).single_group_term() for x in g.elements()]
            if any(v is None for v in full):
                return None
            return GroupHom(g, self.target.base, full, check=False)
        if isinstance(g, FreeAbelian) and isinstance(self.target.base, FreeAbelian):
            cols = [images[s] for s in g.generators()]
            matrix = [[cols[j][i] for j in range(g.rank)] for i in range(self.target.base.rank)]
            return GroupHom(g, self.target.base, matrix)
        return None

    def is_monomial(self) -> bool:
        """True when every generator acts by a coefficient-one monomial matrix."""
        if self.width == 0:
            return True
        for s in self.source.base.generators():
            if _monomial_data(self.act(s)) is None:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Bimodule):
            return False
        if (self.source, self.target, self.width) != (other.source, other.target, other.width):
            return False
        return all(self.act(s) == other.act(s) for s in self.source.base.generators())

    def __repr__(self):
        return f"Bimodule({self.source!r} -> {self.target!r}, width={self.width})"


def _monomial_data(mat: RingMatrix):
    """Decompose a monomial matrix into (sigma, entries): col j -> row sigma[j]."""
    n = mat.rows
    sigma = {}
    entry = {}
    for (i, j), v in mat.entries.items():
        if j in sigma:
            return None
        g = v.single_group_term()
        if g is None:
            return None
        sigma[j] = i
        entry[j] = g
    if len(sigma) != n or len(set(sigma.values())) != n:
        return None
    return sigma, entry


def _monomial_inverse(mat: RingMatrix):
    data = _monomial_data(mat)
    if data is None:
        return None
    sigma, entry = data
    base = mat.base
    entries = {(j, sigma[j]): RingElement.group(base, base.inv(entry[j])) for j in sigma}
    return RingMatrix(base, mat.rows, mat.cols, entries)


# -- bimodule factories ------------------------------------------------------


def unit_bimodule(c: RingObject) -> Bimodule:
    g = c.base
    gens = {s: RingMatrix(g, 1, 1, {(0, 0): RingElement.group(g, s)}) for s in g.generators()}
    return Bimodule(c, c, 1, gens, trusted=True)


def twisted_unit(c: RingObject, psi: GroupHom) -> Bimodule:
    """Width-1 bimodule where ``a`` acts on the basis vector by ``e . psi(a)``."""
    g = c.base
    if psi.dom != g or psi.cod != g:
        raise ObjectMismatch("twist must be an endomorphism of the base group")
    gens = {s: RingMatrix(g, 1, 1, {(0, 0): RingElement.group(g, psi.apply(s))}) for s in g.generators()}
    return Bimodule(c, c, 1, gens, trusted=True)


def zero_bimodule(source: RingObject, target: RingObject) -> Bimodule:
    return Bimodule(source, target, 0, {}, trusted=True)


def diagonal_bimodule(c: RingObject, n: int) -> Bimodule:
    """The free bimodule A^n with the diagonal left action."""
    g = c.base
    gens = {
        s: RingMatrix(g, n, n, {(i, i): RingElement.group(g, s) for i in range(n)})
        for s in g.generators()
    }
    return Bimodule(c, c, n, gens, trusted=True)


def module_bimodule(c: RingObject, matrices: dict, width: int, source: RingObject | None = None) -> Bimodule:
    """A right module presented as a bimodule from a (possibly trivial) source."""
    if source is None:
        from .groups import trivial_group

        source = RingObject(trivial_group())
    return Bimodule(source, c, width, matrices)


# ---------------------------------------------------------------------------
# horizontal composition


def substitute(outer: RingMatrix, inner: Bimodule) -> RingMatrix:
    """Blockwise substitution of ``inner``'s action into ``outer``'s entries."""
    w_in = inner.width
    out: dict = {}
    for (k, i), elt in outer.entries.items():
        block = inner.act_ring(elt)
        for (l, j), v in block.entries.items():
            out[(k * w_in + l, i * w_in + j)] = v
    return RingMatrix(inner.target.base, outer.rows * w_in, outer.cols * w_in, out)


def hcompose(m: Bimodule, n: Bimodule) -> Bimodule:
    """Tensor of 1-cells; rank multiplies (devolved widths multiply)."""
    if m.target != n.source:
        raise ObjectMismatch(f"cannot compose {m!r} with {n!r}")
    gens = {s: substitute(m.act(s), n) for s in m.source.base.generators()}
    return Bimodule(m.source, n.target, m.width * n.width, gens, trusted=True)


# ---------------------------------------------------------------------------
# 2-cells


class TwoCell:
    """A bimodule map; the matrix is width(cod) x width(dom) over the target."""

    def __init__(self, dom: Bimodule, cod: Bimodule, matrix: RingMatrix, trusted: bool = False):
        if dom.source != cod.source or dom.target != cod.target:
            raise ObjectMismatch("2-cells need parallel 1-cells")
        if matrix.shape != (cod.width, dom.width):
            raise ShapeMismatch(f"matrix shape {matrix.shape} != {(cod.width, dom.width)}")
        if matrix.base != dom.target.base:
            raise BaseMismatch("2-cell matrices live over the target group")
        self.dom = dom
        self.cod = cod
        self.matrix = matrix
        if not trusted:
            self._validate()

    def _validate(self):
        for s in self.dom.source.base.generators():
            if self.matrix @ self.dom.act(s) != self.cod.act(s) @ self.matrix:
                raise ShapeMismatch("matrix is not equivariant for the left actions")

    @classmethod
    def identity(cls, m: Bimodule) -> "TwoCell":
        return cls(m, m, RingMatrix.identity(m.target.base, m.width), trusted=True)

    def after(self, other: "TwoCell") -> "TwoCell":
        """Vertical composition self o other."""
        if other.cod.width != self.dom.width or other.cod != self.dom:
            raise ShapeMismatch("2-cells not vertically composable")
        return TwoCell(other.dom, self.cod, self.matrix @ other.matrix, trusted=True)

    def apply(self, vec: list[RingElement]) -> list[RingElement]:
        """Apply to an element (a coefficient vector over the target ring)."""
        if len(vec) != self.dom.width:
            raise ShapeMismatch("element has the wrong width")
        zero = RingElement.zero(self.dom.target.base)
        out = [zero] * self.cod.width
        for (i, j), v in self.matrix.entries.items():
            if not vec[j].is_zero():
                out[i] = out[i] + v * vec[j]
        return out

    def is_identity(self) -> bool:
        return self.dom.width == self.cod.width and self.matrix.is_identity()

    def __eq__(self, other):
        return (
            isinstance(other, TwoCell)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"TwoCell({self.dom.width} -> {self.cod.width} over {self.dom.target!r})"


def hcompose_cells(a: TwoCell, b: TwoCell) -> TwoCell:
    """Horizontal composition of 2-cells."""
    if a.dom.target != b.dom.source:
        raise ObjectMismatch("2-cells not horizontally composable")
    w_bd, w_bc = b.dom.width, b.cod.width
    out: dict = {}
    for (k, i), t in a.matrix.entries.items():
        block = b.cod.act_ring(t) @ b.matrix
        for (l, j), v in block.entries.items():
            out[(k * w_bc + l, i * w_bd + j)] = v
    dom = hcompose(a.dom, b.dom)
    cod = hcompose(a.cod, b.cod)
    matrix = RingMatrix(b.dom.target.base, cod.width, dom.width, out)
    return TwoCell(dom, cod, matrix, trusted=True)


def left_unitor(m: Bimodule) -> TwoCell:
    """U ⊙ M -> M.  Identity matrix: composition is strictly unital here."""
    return TwoCell(hcompose(unit_bimodule(m.source), m), m,
                   RingMatrix.identity(m.target.base, m.width), trusted=True)


def right_unitor(m: Bimodule) -> TwoCell:
    return TwoCell(hcompose(m, unit_bimodule(m.target)), m,
                   RingMatrix.identity(m.target.base, m.width), trusted=True)


def associator(m: Bimodule, n: Bimodule, p: Bimodule) -> TwoCell:
    """(M ⊙ N) ⊙ P -> M ⊙ (N ⊙ P); row-major flattening makes this strict."""
    lhs = hcompose(hcompose(m, n), p)
    rhs = hcompose(m, hcompose(n, p))
    return TwoCell(lhs, rhs, RingMatrix.identity(p.target.base, lhs.width), trusted=True)


# ---------------------------------------------------------------------------
# element-level cyclic rotation


def basis_vector(m: Bimodule, i: int, coeff: RingElement | None = None) -> list[RingElement]:
    zero = RingElement.zero(m.target.base)
    vec = [zero] * m.width
    vec[i] = coeff if coeff is not None else RingElement.one(m.target.base)
    return vec


def theta_element(m: Bimodule, n: Bimodule, vec: list[RingElement]) -> list[RingElement]:
    """Rotate an element of M ⊙ N into N ⊙ M (valid at the shadow level)."""
    if m.source != n.target or m.target != n.source:
        raise ObjectMismatch("theta needs 1-cells composable in both orders")
    if len(vec) != m.width * n.width:
        raise ShapeMismatch("element has the wrong width")
    zero = RingElement.zero(n.source.base)
    out = [zero] * (n.width * m.width)
    for idx, coeff in enumerate(vec):
        if coeff.is_zero():
            continue
        i, j = divmod(idx, n.width)
        mat = m.act_ring(coeff)
        for (k, i2), v in mat.entries.items():
            if i2 == i:
                out[j * m.width + k] = out[j * m.width + k] + v
    return out


# ---------------------------------------------------------------------------
# shadows: presentations of HH_0


class ShadowElement:
    """A finite integer combination of shadow class labels."""

    def __init__(self, presentation, coeffs: dict):
        self.presentation = presentation
        self.coeffs = presentation.reduce_coeffs(coeffs)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return ShadowElement(self.presentation, out)

    def __neg__(self):
        return ShadowElement(self.presentation, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return ShadowElement(self.presentation, {l: k * v for l, v in self.coeffs.items()})

    def _check(self, other):
        if self.presentation is not other.presentation and self.presentation != other.presentation:
            raise ObjectMismatch("shadow elements live in different shadow groups")

    def is_zero(self):
        return not self.coeffs

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def support_size(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, ShadowElement)
            and self.presentation == other.presentation
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for label in sorted(self.coeffs, key=_label_key):
            c = self.coeffs[label]
            name = self.presentation.label_name(label)
            bits.append(f"{c}[{name}]" if c != 1 else f"[{name}]")
        return " + ".join(bits)


def _label_key(label):
    return label if isinstance(label, tuple) else (label,)


class ShadowPresentation:
    """Base class: a presented HH_0 group with a normal-form map."""

    ring: RingObject
    bimodule: Bimodule

    def zero(self) -> ShadowElement:
        return ShadowElement(self, {})

    def element(self, coeffs: dict) -> ShadowElement:
        return ShadowElement(self, coeffs)

    def reduce_coeffs(self, coeffs: dict) -> dict:
        return {k: v for k, v in coeffs.items() if v != 0}

    def normalize_vector(self, vec) -> ShadowElement:
        raise NotImplementedError

    def is_finite(self) -> bool:
        raise NotImplementedError

    def labels(self):
        raise NotImplementedError

    def generator_vector(self, label):
        raise NotImplementedError

    def label_name(self, label) -> str:
        return str(label)

    def free_rank(self) -> int:
        """Rank of the free part (finite presentations only)."""
        return len(self.labels())


class ClassShadow(ShadowPresentation):
    """HH_0 of a twisted unit: free on twisted conjugacy classes."""

    def __init__(self, ring: RingObject, bimodule: Bimodule, twist: GroupHom):
        self.ring = ring
        self.bimodule = bimodule
        self.twist = twist
        self.classes: TwistedClassSet = hochschild_twisted_classes(ring.base, twist)

    def normalize_vector(self, vec) -> ShadowElement:
        if len(vec) != 1:
            raise ShapeMismatch("class shadows present width-1 bimodules")
        coeffs: dict = {}
        for g, c in vec[0].terms.items():
            label = self.classes.class_of(g)
            coeffs[label] = coeffs.get(label, 0) + c
        return ShadowElement(self, coeffs)

    def normalize_ring_element(self, x: RingElement) -> ShadowElement:
        return self.normalize_vector([x])

    def normalize_matrix(self, x: RingMatrix) -> ShadowElement:
        """Hattori-Stallings class of a square matrix: sum of diagonal classes."""
        if x.rows != x.cols:
            raise ShapeMismatch("need a square matrix")
        out = self.zero()
        for i in range(x.rows):
            out = out + self.normalize_ring_element(x.entry(i, i))
        return out

    def is_finite(self):
        return self.classes.is_finite()

    def labels(self):
        return self.classes.labels()

    def generator_vector(self, label):
        return [RingElement.group(self.ring.base, self.classes.representative(label))]

    def label_name(self, label):
        return self.classes.label_name(label)

    def __eq__(self, other):
        return (
            isinstance(other, ClassShadow)
            and self.ring == other.ring
            and self.classes == other.classes
        )

    def __repr__(self):
        size = self.classes.class_count() if self.is_finite() else "infinitely many"
        return f"ClassShadow({self.ring!r}, {size} classes)"


class OrbitShadow(ShadowPresentation):
    """HH_0 of a monomial bimodule over a finite group: free on symbol orbits.

    Symbols are pairs ``(i, h)`` (basis slot, group element); the commutator
    relations of a monomial action identify symbols pairwise, so the quotient
    is free abelian on the orbits and needs no Smith reduction.
    """

    def __init__(self, ring: RingObject, bimodule: Bimodule):
        g = ring.base
        if not isinstance(g, FiniteTable):
            raise UnsupportedShadow("orbit shadows need a finite base group")
        if not bimodule.is_monomial():
            raise UnsupportedShadow("orbit shadows need a monomial action")
        self.ring = ring
        self.bimodule = bimodule
        symbols = [(i, h) for i in range(bimodule.width) for h in g.elements()]
        index = {s: k for k, s in enumerate(symbols)}
        parent = list(range(len(symbols)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for s in g.generators():
            sigma, entry = _monomial_data(bimodule.act(s))
            for i in range(bimodule.width):
                for h in g.elements():
                    # s.(e_i h) = e_{sigma(i)} (entry_i h)  ~  (e_i h).s
                    left = (sigma[i], g.mul(entry[i], h))
                    right = (i, g.mul(h, s))
                    union(index[left], index[right])
        self._symbols = symbols
        self._indexmap = index
        self._root = [find(k) for k in range(len(symbols))]
        self._labels = sorted(set(self._root))

    def _symbol_label(self, i, h):
        return self._root[self._indexmap[(i, h)]]

    def normalize_vector(self, vec) -> ShadowElement:
        if len(vec) != self.bimodule.width:
            raise ShapeMismatch("element has the wrong width")
        coeffs: dict = {}
        for i, elt in enumerate(vec):
            for h, c in elt.terms.items():
                label = self._symbol_label(i, h)
                coeffs[label] = coeffs.get(label, 0) + c
        return ShadowElement(self, coeffs)

    def is_finite(self):
        return True

    def labels(self):
        return list(self._labels)

    def generator_vector(self, label):
        i, h = self._symbols[label]
        return basis_vector(self.bimodule, i, RingElement.group(self.ring.base, h))

    def label_name(self, label):
        i, h = self._symbols[label]
        return f"e{i}.{self.ring.base.element_name(h)}"

    def __eq__(self, other):
        return (
            isinstance(other, OrbitShadow)
            and self.ring == other.ring
            and self.bimodule == other.bimodule
        )

    def __repr__(self):
        return f"OrbitShadow({self.ring!r}, {len(self._labels)} classes)"


class CokernelShadow(ShadowPresentation):
    """HH_0 of a general bimodule over a finite group, via Smith normal form."""

    def __init__(self, ring: RingObject, bimodule: Bimodule):
        g = ring.base
        if not isinstance(g, FiniteTable):
            raise UnsupportedShadow("cokernel shadows need a finite base group")
        self.ring = ring
        self.bimodule = bimodule
        symbols = [(i, h) for i in range(bimodule.width) for h in g.elements()]
        self._index = {s: k for k, s in enumerate(symbols)}
        self._symbols = symbols
        dim = len(symbols)
        columns = []
        for s in g.generators():
            act = bimodule.act(s)
            for i in range(bimodule.width):
                for h in g.elements():
                    col = [0] * dim
                    # s.(e_i h) - (e_i h).s
                    for (k, i2), v in act.entries.items():
                        if i2 == i:
                            for gg, c in v.terms.items():
                                col[self._index[(k, g.mul(gg, h))]] += c
                    col[self._index[(i, g.mul(h, s))]] -= 1
                    if any(col):
                        columns.append(col)
        rel = [[col[r] for col in columns] for r in range(dim)] if columns else [[0] for _ in range(dim)]
        u, d, _ = smith_normal_form(rel)
        self._u = u
        self._u_inv = unimodular_inverse(u)
        ncols = len(rel[0])
        self._diag = [d[t][t] if t < min(dim, ncols) else 0 for t in range(dim)]
        self._live = [t for t in range(dim) if self._diag[t] != 1]

    def reduce_coeffs(self, coeffs):
        out = {}
        for t, v in coeffs.items():
            d = self._diag[t]
            v = v % d if d > 0 else v
            if v:
                out[t] = v
        return out

    def normalize_vector(self, vec) -> ShadowElement:
        if len(vec) != self.bimodule.width:
            raise ShapeMismatch("element has the wrong width")
        x = [0] * len(self._symbols)
        for i, elt in enumerate(vec):
            for h, c in elt.terms.items():
                x[self._index[(i, h)]] += c
        y = mat_vec(self._u, x)
        return ShadowElement(self, {t: y[t] for t in self._live})

    def is_finite(self):
        return True

    def labels(self):
        return list(self._live)

    def torsion(self, label) -> int:
        return self._diag[label]

    def generator_vector(self, label):
        g = self.ring.base
        col = [self._u_inv[r][label] for r in range(len(self._symbols))]
        vec = [RingElement.zero(g) for _ in range(self.bimodule.width)]
        for r, c in enumerate(col):
            if c:
                i, h = self._symbols[r]
                vec[i] = vec[i] + RingElement.group(g, h, c)
        return vec

    def free_rank(self):
        return sum(1 for t in self._live if self._diag[t] == 0)

    def label_name(self, label):
        return f"x{label}"

    def __eq__(self, other):
        return (
            isinstance(other, CokernelShadow)
            and self.ring == other.ring
            and self.bimodule == other.bimodule
        )

    def __repr__(self):
        tor = [self._diag[t] for t in self._live if self._diag[t] > 1]
        return f"CokernelShadow(free rank {self.free_rank()}, torsion {tor})"


def shadow(q: Bimodule) -> ShadowPresentation:
    """Present HH_0(ring; q) for an endo-1-cell q."""
    if q.source != q.target:
        raise ObjectMismatch("shadows are defined for endo-1-cells")
    ring = q.source
    twist = q.recognize_twist()
    if twist is not None:
        return ClassShadow(ring, q, twist)
    if isinstance(ring.base, FiniteTable):
        if q.is_monomial():
            return OrbitShadow(ring, q)
        return CokernelShadow(ring, q)
    raise UnsupportedShadow("free abelian shadows need a twisted-unit bimodule")


# ---------------------------------------------------------------------------
# maps between shadows


class ShadowMap:
    """A homomorphism between presented shadow groups, given on class labels."""

    def __init__(self, dom: ShadowPresentation, cod: ShadowPresentation, fn, name: str = ""):
        self.dom = dom
        self.cod = cod
        self._fn = fn
        self._cache: dict = {}
        self.name = name

    def on_label(self, label) -> ShadowElement:
        if label not in self._cache:
            self._cache[label] = self._fn(label)
        return self._cache[label]

    def apply(self, elt: ShadowElement) -> ShadowElement:
        if elt.presentation != self.dom:
            raise ObjectMismatch("element is not in the domain shadow")
        out = self.cod.zero()
        for label, c in elt.coeffs.items():
            out = out + self.on_label(label).scale(c)
        return out

    def __call__(self, elt):
        return self.apply(elt)

    def compose(self, other: "ShadowMap") -> "ShadowMap":
        """self o other."""
        if other.cod != self.dom:
            raise ObjectMismatch("shadow maps not composable")
        return ShadowMap(other.dom, self.cod, lambda l: self.apply(other.on_label(l)),
                         name=f"{self.name}∘{other.name}")

    def materialize(self, labels=None) -> dict:
        labels = self.dom.labels() if labels is None else labels
        return {l: self.on_label(l) for l in labels}

    def equals(self, other: "ShadowMap", labels=None) -> bool:
        if self.dom != other.dom or self.cod != other.cod:
            return False
        labels = self.dom.labels() if labels is None else labels
        return all(self.on_label(l) == other.on_label(l) for l in labels)

    def is_identity(self, labels=None) -> bool:
        if self.dom != self.cod:
            return False
        labels = self.dom.labels() if labels is None else labels
        return all(self.on_label(l) == self.dom.element({l: 1}) for l in labels)

    def __repr__(self):
        return f"ShadowMap({self.name or 'unnamed'})"


def identity_shadow_map(pres: ShadowPresentation) -> ShadowMap:
    return ShadowMap(pres, pres, lambda l: pres.element({l: 1}), name="id")


def shadow_of_twocell(alpha: TwoCell, dom_shadow=None, cod_shadow=None) -> ShadowMap:
    """Functoriality of the shadow: <alpha> on class generators."""
    dom_shadow = shadow(alpha.dom) if dom_shadow is None else dom_shadow
    cod_shadow = shadow(alpha.cod) if cod_shadow is None else cod_shadow

    def fn(label):
        return cod_shadow.normalize_vector(alpha.apply(dom_shadow.generator_vector(label)))

    return ShadowMap(dom_shadow, cod_shadow, fn, name="<2-cell>")


def cyclic_iso_theta(m: Bimodule, n: Bimodule) -> ShadowMap:
    """The shadow isomorphism <M ⊙ N> -> <N ⊙ M>."""
    dom = shadow(hcompose(m, n))
    cod = shadow(hcompose(n, m))

    def fn(label):
        return cod.normalize_vector(theta_element(m, n, dom.generator_vector(label)))

    return ShadowMap(dom, cod, fn, name="theta")
