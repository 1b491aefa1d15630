"""The twisted cyclic nerve of a finite group.

Level ``n`` consists of tuples ``(w_0, ..., w_{n-1}, w)`` in ``G^{n+1}``; the
last coordinate is the twisted one.  In the standard simplicial indexing used
internally,

* ``d_0`` rotates with the twist: ``(w_1, ..., w_{n-1}, w * f(w_0))``;
* ``d_i`` (0 < i < n) merges ``w_{i-1} * w_i``;
* ``d_n`` merges into the twisted slot: ``(w_0, ..., g(w_{n-1}) * w)``;
* ``s_j`` inserts the identity at slot ``j``.

``f`` is the twisting endomorphism; an optional second endomorphism ``g``
(defaulting to the identity) twists the left action, giving the two-map
variant of the construction.  :func:`face_appendix` exposes the alternative
labelling of the faces by ``0..n+1`` in which indices below ``n`` multiply
adjacent entries, ``n`` multiplies into the twisted slot and ``n+1`` rotates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IndexOutOfRange, UnsupportedGroup
from .groups import FiniteTable, GroupHom
from .twisted import twisted_conjugacy_classes


@dataclass(frozen=True)
class NerveTuple:
    group: FiniteTable
    twist: GroupHom
    entries: tuple
    left_twist: GroupHom | None = None

    def __post_init__(self):
        if not isinstance(self.group, FiniteTable):
            raise UnsupportedGroup("the nerve is implemented for finite groups")
        if not self.entries:
            raise IndexOutOfRange("a nerve tuple has at least the twisted entry")

    @property
    def level(self) -> int:
        return len(self.entries) - 1

    def _g(self, x):
        return self.left_twist.apply(x) if self.left_twist is not None else x

    def replace(self, entries) -> "NerveTuple":
        return NerveTuple(self.group, self.twist, tuple(entries), self.left_twist)


def face(t: NerveTuple, i: int) -> NerveTuple:
    """Standard simplicial face d_i, 0 <= i <= n."""
    n = t.level
    g = t.group
    if not 0 <= i <= n:
        raise IndexOutOfRange(f"face index {i} out of range at level {n}")
    if n == 0:
        raise IndexOutOfRange("level 0 has no faces")
    body, w = t.entries[:-1], t.entries[-1]
    if i == 0:
        return t.replace(body[1:] + (g.mul(w, t.twist.apply(body[0])),))
    if i == n:
        return t.replace(body[:-1] + (g.mul(t._g(body[-1]), w),))
    return t.replace(body[: i - 1] + (g.mul(body[i - 1], body[i]),) + body[i + 1:] + (w,))


def face_appendix(t: NerveTuple, i: int) -> NerveTuple:
    """Faces labelled 0..n+1: i < n merges entries i, i+1; i = n merges into
    the twisted slot; i = n+1 rotates with the twist."""
    n = t.level
    if not 0 <= i <= n + 1:
        raise IndexOutOfRange(f"face index {i} out of range at level {n}")
    if i == n + 1:
        return face(t, 0)
    if i >= n - 1:
        return face(t, n)
    return face(t, i + 1)


def degeneracy(t: NerveTuple, j: int) -> NerveTuple:
    """s_j inserts the identity at slot j, 0 <= j <= n."""
    n = t.level
    if not 0 <= j <= n:
        raise IndexOutOfRange(f"degeneracy index {j} out of range at level {n}")
    e = t.group.identity()
    return t.replace(t.entries[:j] + (e,) + t.entries[j:])


def nerve_pi0(g: FiniteTable, twist: GroupHom, left_twist: GroupHom | None = None):
    """Components of the coequalizer of the two level-1 faces.

    Returns ``(components, bijection)``: the sorted list of component
    representatives and, when ``left_twist`` is None, a dict matching each
    representative with its twisted conjugacy class label (the two partitions
    are checked to coincide).
    """
    if not isinstance(g, FiniteTable):
        raise UnsupportedGroup("pi0 of the nerve needs a finite group")
    parent = list(g.elements())

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    lt = left_twist
    for w0 in g.elements():
        for w in g.elements():
            merged = g.mul(lt.apply(w0) if lt is not None else w0, w)
            rotated = g.mul(w, twist.apply(w0))
            union(merged, rotated)
    roots = sorted({find(x) for x in g.elements()})
    component_of = {x: find(x) for x in g.elements()}

    bijection = None
    if left_twist is None:
        classes = twisted_conjugacy_classes(g, twist)
        if len(roots) != classes.class_count():
            raise UnsupportedGroup("pi0 does not match the twisted class count")
        bijection = {}
        for rep in roots:
            label = classes.class_of(rep)
            bijection[rep] = label
        # the partitions must literally agree
        for x in g.elements():
            if classes.class_of(x) != bijection[component_of[x]]:
                raise UnsupportedGroup("pi0 partition differs from twisted classes")
    return roots, bijection
