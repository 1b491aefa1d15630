"""Twisted conjugacy classes.

For a group endomorphism ``phi`` of ``G`` two twisted conjugation actions
matter here:

* ``reidemeister`` orbits of ``x ~ h * x * phi(h)^-1`` -- the fixed-point
  class relation used throughout the fixed-point machinery;
* ``hochschild`` orbits of ``x ~ phi(h) * x * h^-1`` -- the relation that a
  zeroth Hochschild group of a left-twisted unit bimodule imposes.

The two partitions coincide for abelian groups and for ``phi = id``; for a
non-involutive automorphism of a nonabelian group they genuinely differ, so
the constructor records which relation produced the classes.

Finite groups are handled by orbit enumeration.  For free abelian groups both
relations identify ``x`` with ``x + (I - F) h``, so classes are the cokernel
of ``I - F`` presented through Smith normal form.
"""

from __future__ import annotations

from .errors import UnsupportedGroup
from .groups import FiniteTable, FreeAbelian, GroupHom, GroupModel
from .snf import mat_vec, smith_normal_form, unimodular_inverse


class TwistedClassSet:
    """Partition of a group into twisted conjugacy classes."""

    def __init__(self, base: GroupModel, twist: GroupHom, relation: str, data):
        self.base = base
        self.twist = twist
        self.relation = relation
        if isinstance(base, FiniteTable):
            self.variant = "finite"
            self._class_of = data  # element index -> class index
            orbits: dict[int, list[int]] = {}
            for x, c in enumerate(data):
                orbits.setdefault(c, []).append(x)
            # classes sorted by least representative, relabelled 0..k-1
            reps = sorted(min(v) for v in orbits.values())
            relabel = {}
            for c, members in orbits.items():
                relabel[c] = reps.index(min(members))
            self._class_of = [relabel[c] for c in data]
            self.representatives = reps
            self.orbits = [sorted(x for x in base.elements() if self._class_of[x] == k) for k in range(len(reps))]
        elif isinstance(base, FreeAbelian):
            self.variant = "lattice"
            u, d, _ = data
            self.u = u
            self.u_inv = unimodular_inverse(u) if base.rank else []
            self.diagonal = [d[i][i] for i in range(base.rank)]
        else:
            raise UnsupportedGroup("twisted classes need a finite or free abelian group")

    # -- queries -----------------------------------------------------------

    def class_of(self, x):
        """Canonical label of the class of a group element."""
        if self.variant == "finite":
            return self._class_of[x]
        y = mat_vec(self.u, list(x))
        return tuple(
            (y[i] % self.diagonal[i]) if self.diagonal[i] > 0 else y[i]
            for i in range(len(y))
        )

    def representative(self, label):
        """A group element mapping to the given class label."""
        if self.variant == "finite":
            return self.representatives[label]
        return tuple(mat_vec(self.u_inv, list(label)))

    def is_finite(self) -> bool:
        if self.variant == "finite":
            return True
        return all(d > 0 for d in self.diagonal)

    def class_count(self) -> int:
        if self.variant == "finite":
            return len(self.representatives)
        if not self.is_finite():
            raise UnsupportedGroup("infinitely many twisted classes")
        n = 1
        for d in self.diagonal:
            n *= d
        return n

    def labels(self):
        if self.variant == "finite":
            return list(range(len(self.representatives)))
        if not self.is_finite():
            raise UnsupportedGroup("infinitely many twisted classes")
        out = [()]
        for d in self.diagonal:
            out = [t + (r,) for t in out for r in range(d)]
        return out

    def label_name(self, label) -> str:
        if self.variant == "finite":
            return self.base.element_name(self.representatives[label])
        return "(" + ",".join(str(v) for v in label) + ")"

    def __eq__(self, other):
        if not isinstance(other, TwistedClassSet) or self.base != other.base:
            return False
        if self.variant != other.variant:
            return False
        if self.variant == "finite":
            return self._class_of == other._class_of
        return self.u == other.u and self.diagonal == other.diagonal

    def __repr__(self):
        if self.variant == "finite":
            return f"TwistedClassSet({len(self.representatives)} classes of {self.base!r})"
        return f"TwistedClassSet(lattice, diagonal={self.diagonal})"


def _orbit_partition(g: FiniteTable, step) -> list[int]:
    """Orbits of the maps x -> step(h, x) with h over the generators of g."""
    parent = list(g.elements())

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for h in g.generators():
        for x in g.elements():
            union(x, step(h, x))
    return [find(x) for x in g.elements()]


def _lattice_data(g: FreeAbelian, phi: GroupHom):
    f = phi.matrix
    i_minus_f = [[(1 if i == j else 0) - f[i][j] for j in range(g.rank)] for i in range(g.rank)]
    u, d, v = smith_normal_form(i_minus_f)
    return u, d, v


def twisted_conjugacy_classes(g: GroupModel, phi: GroupHom) -> TwistedClassSet:
    """Classes of ``x ~ h * x * phi(h)^-1`` (the fixed-point class relation)."""
    if isinstance(g, FiniteTable):
        part = _orbit_partition(g, lambda h, x: g.mul(g.mul(h, x), g.inv(phi.apply(h))))
        return TwistedClassSet(g, phi, "reidemeister", part)
    if isinstance(g, FreeAbelian):
        return TwistedClassSet(g, phi, "reidemeister", _lattice_data(g, phi))
    raise UnsupportedGroup("presented groups have no class enumeration")


def hochschild_twisted_classes(g: GroupModel, phi: GroupHom) -> TwistedClassSet:
    """Classes of ``x ~ phi(h) * x * h^-1`` (shadow of a twisted unit)."""
    if isinstance(g, FiniteTable):
        part = _orbit_partition(g, lambda h, x: g.mul(g.mul(phi.apply(h), x), g.inv(h)))
        return TwistedClassSet(g, phi, "hochschild", part)
    if isinstance(g, FreeAbelian):
        return TwistedClassSet(g, phi, "hochschild", _lattice_data(g, phi))
    raise UnsupportedGroup("presented groups have no class enumeration")


def conjugacy_classes(g: FiniteTable) -> TwistedClassSet:
    """Ordinary conjugacy classes (both twisted relations with phi = id)."""
    return twisted_conjugacy_classes(g, GroupHom.identity_hom(g))
