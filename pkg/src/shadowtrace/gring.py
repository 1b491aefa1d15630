"""Exact arithmetic in integral group rings ZZ[G] and matrices over them.

Elements are finitely supported maps from group elements to nonzero integer
coefficients; matrices are sparse maps ``(i, j) -> RingElement``.  Everything
is immutable and canonical (zero coefficients are never stored), so equality
is plain structural comparison.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import BaseMismatch, DimensionMismatch
from .groups import GroupHom, GroupModel


class RingElement:
    __slots__ = ("base", "terms", "_key")

    def __init__(self, base: GroupModel, terms: Mapping = ()):
        self.base = base
        self.terms = {g: c for g, c in dict(terms).items() if c != 0}
        self._key = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, base) -> "RingElement":
        return cls(base)

    @classmethod
    def one(cls, base) -> "RingElement":
        return cls(base, {base.identity(): 1})

    @classmethod
    def group(cls, base, element, coeff: int = 1) -> "RingElement":
        return cls(base, {element: coeff})

    # -- arithmetic --------------------------------------------------------

    def _require_same_base(self, other):
        if self.base != other.base:
            raise BaseMismatch("ring elements live over different groups")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._require_same_base(other)
        terms = dict(self.terms)
        for g, c in other.terms.items():
            terms[g] = terms.get(g, 0) + c
        return RingElement(self.base, terms)

    def __neg__(self):
        return RingElement(self.base, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._require_same_base(other)
        terms: dict = {}
        for g, c in self.terms.items():
            for h, d in other.terms.items():
                k = self.base.mul(g, h)
                terms[k] = terms.get(k, 0) + c * d
        return RingElement(self.base, terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, k: int) -> "RingElement":
        return RingElement(self.base, {g: k * c for g, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> int:
        """Sum of coefficients (image under ZZ[G] -> ZZ)."""
        return sum(self.terms.values())

    def apply_hom(self, hom: GroupHom) -> "RingElement":
        """Push every group term through a homomorphism."""
        terms: dict = {}
        for g, c in self.terms.items():
            k = hom.apply(g)
            terms[k] = terms.get(k, 0) + c
        return RingElement(hom.cod, terms)

    def antipode(self) -> "RingElement":
        return RingElement(self.base, {self.base.inv(g): c for g, c in self.terms.items()})

    def single_group_term(self):
        """The group element, when this is exactly one term with coefficient 1."""
        if len(self.terms) == 1:
            (g, c), = self.terms.items()
            if c == 1:
                return g
        return None

    # -- canonical form ----------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _sort_key(t[0]))

    def _canonical(self):
        if self._key is None:
            self._key = tuple(self.sorted_terms())
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, RingElement)
            and self.base == other.base
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.base, self._canonical()))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for g, c in self.sorted_terms():
            name = self.base.element_name(g)
            if c == 1:
                bits.append(name)
            elif c == -1:
                bits.append(f"-{name}")
            else:
                bits.append(f"{c}*{name}")
        return " + ".join(bits).replace("+ -", "- ")


def _sort_key(g):
    return g if isinstance(g, tuple) else (g,)


class RingMatrix:
    __slots__ = ("base", "rows", "cols", "entries")

    def __init__(self, base: GroupModel, rows: int, cols: int, entries: Mapping = ()):
        if rows < 0 or cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        self.base = base
        self.rows = rows
        self.cols = cols
        self.entries: dict = {}
        for (i, j), v in dict(entries).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise DimensionMismatch("entry index out of range")
            if isinstance(v, RingElement):
                if v.base != base:
                    raise BaseMismatch("matrix entry over a different group")
                if not v.is_zero():
                    self.entries[(i, j)] = v
            elif v != 0:
                raise TypeError("entries must be RingElements")

    @classmethod
    def identity(cls, base, n: int) -> "RingMatrix":
        one = RingElement.one(base)
        return cls(base, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def zero(cls, base, rows: int, cols: int) -> "RingMatrix":
        return cls(base, rows, cols)

    @classmethod
    def from_rows(cls, base, rows: Iterable[Iterable[RingElement]]) -> "RingMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        entries = {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)}
        return cls(base, len(rows), ncols, entries)

    def entry(self, i: int, j: int) -> RingElement:
        return self.entries.get((i, j), RingElement.zero(self.base))

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._require_compatible(other, for_mul=False)
        entries = dict(self.entries)
        for k, v in other.entries.items():
            entries[k] = entries[k] + v if k in entries else v
        return RingMatrix(self.base, self.rows, self.cols, entries)

    def __neg__(self):
        return RingMatrix(self.base, self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        self._require_compatible(other, for_mul=True)
        acc: dict = {}
        by_row: dict = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                prod = u * v
                key = (i, j)
                acc[key] = acc[key] + prod if key in acc else prod
        return RingMatrix(self.base, self.rows, other.cols, acc)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, k: int) -> "RingMatrix":
        return RingMatrix(self.base, self.rows, self.cols, {key: v.scale(k) for key, v in self.entries.items()})

    def _require_compatible(self, other, for_mul):
        if self.base != other.base:
            raise BaseMismatch("matrices over different groups")
        if for_mul:
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        elif self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        one = RingElement.one(self.base)
        for i in range(self.rows):
            if self.entry(i, i) != one:
                return False
        return len(self.entries) == self.rows

    def is_zero(self) -> bool:
        return not self.entries

    def apply_hom(self, hom: GroupHom) -> "RingMatrix":
        return RingMatrix(hom.cod, self.rows, self.cols, {k: v.apply_hom(hom) for k, v in self.entries.items()})

    def augmentation(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v.augmentation()
        return out

    def column(self, j: int) -> list[RingElement]:
        return [self.entry(i, j) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and self.base == other.base
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.base, self.shape, tuple(sorted(self.entries.items(), key=lambda kv: kv[0]))))

    def __repr__(self):
        return f"RingMatrix({self.rows}x{self.cols} over {self.base!r}, {len(self.entries)} entries)"
