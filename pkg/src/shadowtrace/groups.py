"""Computable group models and homomorphisms.

Three flavours of group are supported:

* :class:`FiniteTable` -- a finite group given by its multiplication table,
  with elements addressed by index (the identity is always index 0);
* :class:`FreeAbelian` -- the free abelian group of a fixed rank, with
  elements given by integer exponent tuples;
* :class:`Presented` -- a finitely presented group.  Presented groups carry
  no word-problem solver; they only feed the free differential calculus, and
  all arithmetic happens in a computable quotient supplied by the caller.

Group elements are plain hashable Python values (ints for finite groups,
tuples for free abelian ones, :class:`Word` for presented ones), so groups
are cheap to share and all models are immutable after construction.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import UnsupportedGroup


# ---------------------------------------------------------------------------
# words over a free group


class Word(tuple):
    """A freely reduced word: a tuple of ``(generator_index, +1 | -1)``."""

    def __new__(cls, letters: Iterable[tuple[int, int]] = ()):
        return super().__new__(cls, _free_reduce(letters))

    def __mul__(self, other):
        return Word(tuple.__add__(self, other))

    def inverse(self) -> "Word":
        return Word((g, -s) for g, s in reversed(self))

    @staticmethod
    def parse(text: str, generators: Sequence[str]) -> "Word":
        """Parse ``"abA"``-style strings; an uppercase letter inverts."""
        letters = []
        for ch in text:
            low = ch.lower()
            if low not in generators:
                raise ValueError(f"unknown generator {ch!r}")
            letters.append((generators.index(low), -1 if ch.isupper() else 1))
        return Word(letters)

    def __repr__(self):
        return f"Word({list(self)!r})"


def _free_reduce(letters):
    out = []
    for g, s in letters:
        if s not in (1, -1):
            raise ValueError("letter exponents must be +1 or -1")
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return out


# ---------------------------------------------------------------------------
# group models


class GroupModel:
    """Common interface; concrete models override everything they support."""

    kind = "abstract"

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise UnsupportedGroup(f"{self.kind} group is not enumerable")

    def generators(self):
        raise NotImplementedError

    def element_name(self, x) -> str:
        return str(x)

    def contains(self, x) -> bool:
        raise NotImplementedError

    def power(self, x, n: int):
        if n < 0:
            return self.power(self.inv(x), -n)
        acc = self.identity()
        for _ in range(n):
            acc = self.mul(acc, x)
        return acc


class FiniteTable(GroupModel):
    """Finite group with explicit multiplication table, identity at index 0."""

    kind = "finite"

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[int]], check: bool = True):
        self.element_names = tuple(elements)
        self.table = tuple(tuple(row) for row in table)
        n = len(self.element_names)
        if check:
            self._check(n)
        self._inv = tuple(next(b for b in range(n) if self.table[a][b] == 0) for a in range(n))
        self._gens = None

    def _check(self, n):
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("table shape does not match element list")
        for row in self.table:
            if sorted(row) != list(range(n)):
                raise ValueError("table rows must be permutations (Latin square)")
        for j in range(n):
            if sorted(self.table[i][j] for i in range(n)) != list(range(n)):
                raise ValueError("table columns must be permutations (Latin square)")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise ValueError("index 0 must be a two-sided identity")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("multiplication table is not associative")

    @classmethod
    def from_mul(cls, elements, mul, names=None) -> "FiniteTable":
        """Build a table from raw element objects and a multiplication callable."""
        elements = list(elements)
        ident = next(e for e in elements if all(mul(e, x) == x == mul(x, e) for x in elements))
        ordered = [ident] + [e for e in elements if e != ident]
        index = {e: i for i, e in enumerate(ordered)}
        table = [[index[mul(a, b)] for b in ordered] for a in ordered]
        labels = [str(e) if names is None else names(e) for e in ordered]
        return cls(labels, table)

    def size(self) -> int:
        return len(self.element_names)

    def is_finite(self):
        return True

    def identity(self):
        return 0

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def elements(self):
        return range(len(self.element_names))

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < len(self.element_names)

    def element_name(self, x):
        return self.element_names[x]

    def element_by_name(self, name: str):
        return self.element_names.index(name)

    def generators(self):
        # Greedy: repeatedly add the least element outside the current closure.
        if self._gens is None:
            gens: list[int] = []
            closure = self._closure(())
            while len(closure) < self.size():
                gens.append(min(x for x in self.elements() if x not in closure))
                closure = self._closure(gens)
            self._gens = tuple(gens)
        return self._gens

    def _closure(self, gens):
        seen = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def __eq__(self, other):
        return (
            isinstance(other, FiniteTable)
            and self.element_names == other.element_names
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.element_names, self.table))

    def __repr__(self):
        return f"FiniteTable({len(self.element_names)} elements)"


class FreeAbelian(GroupModel):
    """Free abelian group of the given rank; elements are exponent tuples."""

    kind = "free_abelian"

    def __init__(self, rank: int):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.rank = rank

    def is_finite(self):
        return self.rank == 0

    def size(self):
        if self.rank == 0:
            return 1
        raise UnsupportedGroup("free abelian group of positive rank is infinite")

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def elements(self):
        if self.rank == 0:
            return [()]
        raise UnsupportedGroup("cannot enumerate an infinite group")

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.rank and all(isinstance(v, int) for v in x)

    def generators(self):
        return [tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank)]

    def element_name(self, x):
        if self.rank == 0:
            return "e"
        if self.rank == 1:
            return f"t^{x[0]}" if x[0] != 1 else "t"
        return "(" + ",".join(str(v) for v in x) + ")"

    def __eq__(self, other):
        return isinstance(other, FreeAbelian) and self.rank == other.rank

    def __hash__(self):
        return hash(("free_abelian", self.rank))

    def __repr__(self):
        return f"FreeAbelian(rank={self.rank})"


class Presented(GroupModel):
    """Finitely presented group; relators are freely reduced words."""

    kind = "presented"

    def __init__(self, generators: Sequence[str], relators: Iterable[Word | str]):
        self.generator_names = tuple(generators)
        rels = []
        for r in relators:
            if isinstance(r, str):
                r = Word.parse(r, self.generator_names)
            rels.append(Word(r))
        self.relators = tuple(rels)

    def identity(self):
        return Word()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def contains(self, x):
        return isinstance(x, Word)

    def generators(self):
        return [Word([(i, 1)]) for i in range(len(self.generator_names))]

    def word(self, text: str) -> Word:
        return Word.parse(text, self.generator_names)

    def __repr__(self):
        rels = ",".join(str(list(r)) for r in self.relators)
        return f"Presented(⟨{','.join(self.generator_names)} | {rels}⟩)"


# ---------------------------------------------------------------------------
# homomorphisms


class GroupHom:
    """A homomorphism between group models.

    Storage depends on the domain: a full image list for finite tables, an
    integer matrix (or basis-image list) for free abelian groups, and
    generator images for presented groups.
    """

    def __init__(self, dom: GroupModel, cod: GroupModel, data, check: bool = True):
        self.dom = dom
        self.cod = cod
        if isinstance(dom, FiniteTable):
            self.images = tuple(data)
            if check:
                self._check_finite()
        elif isinstance(dom, FreeAbelian):
            if isinstance(cod, FreeAbelian):
                self.matrix = tuple(tuple(row) for row in data)
                if len(self.matrix) != cod.rank or any(len(r) != dom.rank for r in self.matrix):
                    raise ValueError("matrix shape must be cod.rank x dom.rank")
            else:
                self.images = tuple(data)
                if check:
                    for a, b in itertools.combinations(self.images, 2):
                        if cod.mul(a, b) != cod.mul(b, a):
                            raise ValueError("images of a free abelian group must commute")
        elif isinstance(dom, Presented):
            self.images = tuple(data)
        else:
            raise UnsupportedGroup("unknown domain kind")

    def _check_finite(self):
        g = self.dom
        if len(self.images) != g.size():
            raise ValueError("need one image per element")
        if self.images[0] != self.cod.identity():
            raise ValueError("identity must map to identity")
        for a in g.elements():
            for b in g.elements():
                if self.images[g.mul(a, b)] != self.cod.mul(self.images[a], self.images[b]):
                    raise ValueError("not a homomorphism")

    @classmethod
    def from_generator_images(cls, dom: FiniteTable, cod: GroupModel, gen_images: dict) -> "GroupHom":
        """Extend images of a generating set of a finite group to all elements."""
        images = {0: cod.identity()}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g, img in gen_images.items():
                y = dom.mul(x, g)
                if y not in images:
                    images[y] = cod.mul(images[x], img)
                    frontier.append(y)
        if len(images) != dom.size():
            raise ValueError("given elements do not generate the group")
        return cls(dom, cod, [images[i] for i in range(dom.size())])

    @classmethod
    def identity_hom(cls, g: GroupModel) -> "GroupHom":
        if isinstance(g, FiniteTable):
            return cls(g, g, list(g.elements()), check=False)
        if isinstance(g, FreeAbelian):
            eye = [[1 if i == j else 0 for j in range(g.rank)] for i in range(g.rank)]
            return cls(g, g, eye)
        if isinstance(g, Presented):
            return cls(g, g, g.generators())
        raise UnsupportedGroup("unknown group kind")

    def apply(self, x):
        if isinstance(self.dom, FiniteTable):
            return self.images[x]
        if isinstance(self.dom, FreeAbelian):
            if isinstance(self.cod, FreeAbelian):
                return tuple(sum(row[j] * x[j] for j in range(self.dom.rank)) for row in self.matrix)
            acc = self.cod.identity()
            for img, exp in zip(self.images, x):
                acc = self.cod.mul(acc, self.cod.power(img, exp))
            return acc
        # presented domain: fold the word through generator images
        acc = self.cod.identity()
        for g, s in x:
            img = self.images[g] if s == 1 else self.cod.inv(self.images[g])
            acc = self.cod.mul(acc, img)
        return acc

    def __call__(self, x):
        return self.apply(x)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self ∘ other."""
        if other.cod != self.dom:
            raise ValueError("homomorphisms not composable")
        if isinstance(other.dom, FiniteTable):
            return GroupHom(other.dom, self.cod, [self.apply(other.apply(x)) for x in other.dom.elements()], check=False)
        if isinstance(other.dom, FreeAbelian) and isinstance(self.cod, FreeAbelian) and isinstance(other.cod, FreeAbelian):
            prod = [
                [sum(self.matrix[i][k] * other.matrix[k][j] for k in range(len(other.matrix))) for j in range(other.dom.rank)]
                for i in range(self.cod.rank)
            ]
            return GroupHom(other.dom, self.cod, prod)
        if isinstance(other.dom, FreeAbelian):
            return GroupHom(other.dom, self.cod, [self.apply(x) for x in other.images], check=False)
        return GroupHom(other.dom, self.cod, [self.apply(x) for x in other.images])

    def is_automorphism(self) -> bool:
        if self.dom is not self.cod and self.dom != self.cod:
            return False
        if isinstance(self.dom, FiniteTable):
            return sorted(self.images) == list(self.dom.elements())
        if isinstance(self.dom, FreeAbelian):
            return abs(_int_det(self.matrix)) == 1
        return False

    def inverse(self) -> "GroupHom":
        if not self.is_automorphism():
            raise ValueError("not invertible")
        if isinstance(self.dom, FiniteTable):
            inv = [0] * self.dom.size()
            for x in self.dom.elements():
                inv[self.images[x]] = x
            return GroupHom(self.dom, self.cod, inv, check=False)
        return GroupHom(self.dom, self.cod, _unimodular_inverse(self.matrix))

    def __eq__(self, other):
        if not isinstance(other, GroupHom) or self.dom != other.dom or self.cod != other.cod:
            return False
        if isinstance(self.dom, FreeAbelian) and isinstance(self.cod, FreeAbelian):
            return self.matrix == other.matrix
        return self.images == other.images

    def __hash__(self):
        payload = self.matrix if hasattr(self, "matrix") else self.images
        return hash((self.dom, self.cod, payload))

    def __repr__(self):
        return f"GroupHom({self.dom!r} -> {self.cod!r})"


GroupEndo = GroupHom  # an endomorphism is a hom with dom == cod


def _int_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        prod = 1
        for i in range(n):
            prod *= m[i][perm[i]]
        total += sign * prod
    return total


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _unimodular_inverse(m):
    n = len(m)
    det = _int_det(m)
    if abs(det) != 1:
        raise ValueError("matrix is not unimodular")
    # adjugate / det
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            inv[i][j] = ((-1) ** (i + j)) * _int_det(minor) * det
    return inv


# ---------------------------------------------------------------------------
# a small catalogue of concrete groups


def trivial_group() -> FiniteTable:
    return FiniteTable(["e"], [[0]])


def cyclic(n: int) -> FiniteTable:
    if n < 1:
        raise ValueError("n must be positive")
    names = ["e"] + [f"g{i}" if n > 9 else f"g^{i}" for i in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteTable(names, table)


def klein_four() -> FiniteTable:
    return direct_product(cyclic(2), cyclic(2))


def symmetric3() -> FiniteTable:
    perms = list(itertools.permutations(range(3)))

    def mul(p, q):  # p after q
        return tuple(p[q[i]] for i in range(3))

    return FiniteTable.from_mul(perms, mul, names=_perm_name)


def dihedral4() -> FiniteTable:
    """Dihedral group of order 8 (symmetries of the square)."""
    elems = [(r, f) for f in (0, 1) for r in range(4)]

    def mul(a, b):
        r1, f1 = a
        r2, f2 = b
        if f1 == 0:
            return ((r1 + r2) % 4, f2)
        return ((r1 - r2) % 4, 1 - f2)

    return FiniteTable.from_mul(elems, mul, names=lambda e: f"r{e[0]}" + ("f" if e[1] else ""))


def quaternion8() -> FiniteTable:
    """Quaternion group {±1, ±i, ±j, ±k}."""
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def split(u):
        return (-1 if u.startswith("-") else 1, u.lstrip("-"))

    def mul(a, b):
        sa, xa = split(a)
        sb, xb = split(b)
        if xa == "1":
            s0, x = 1, xb
        elif xb == "1":
            s0, x = 1, xa
        else:
            s0, x = split(base[(xa, xb)])
        s = sa * sb * s0
        return ("-" if s < 0 else "") + x

    return FiniteTable.from_mul(units, mul)


def _perm_name(p):
    # disjoint cycle notation, e.g. (01)(2) -> "(01)"
    seen = set()
    cycles = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        cycles.append("(" + "".join(str(c) for c in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def direct_product(a: FiniteTable, b: FiniteTable) -> FiniteTable:
    elems = [(x, y) for x in a.elements() for y in b.elements()]

    def mul(p, q):
        return (a.mul(p[0], q[0]), b.mul(p[1], q[1]))

    return FiniteTable.from_mul(elems, mul, names=lambda e: f"({a.element_name(e[0])},{b.element_name(e[1])})")


def endomorphisms(g: FiniteTable) -> list[GroupHom]:
    """All endomorphisms of a finite group, by brute force over generator images."""
    gens = g.generators()
    out = []
    for images in itertools.product(g.elements(), repeat=len(gens)):
        try:
            hom = GroupHom.from_generator_images(g, g, dict(zip(gens, images)))
        except ValueError:
            continue
        if hom not in out:
            out.append(hom)
    return out


def automorphisms(g: FiniteTable) -> list[GroupHom]:
    return [h for h in endomorphisms(g) if h.is_automorphism()]


def inner_automorphisms(g: FiniteTable) -> list[GroupHom]:
    out = []
    for c in g.elements():
        images = [g.mul(g.mul(c, x), g.inv(c)) for x in g.elements()]
        hom = GroupHom(g, g, images, check=False)
        if hom not in out:
            out.append(hom)
    return out
