"""Finite groups, words, group-algebra elements and representations."""

from __future__ import annotations

import json
import random
import re
from collections import deque
from dataclasses import dataclass
from importlib import resources
from itertools import permutations
from typing import Callable, Mapping, Sequence

from .matrices import SquareMatrix, block_diagonal, det, random_invertible
from .rings import PolynomialRing, Ring, RingValue, embed

Word = tuple  # sequence of letter indices; the empty word is the identity


class FiniteGroup:
    """A finite group given by its multiplication table on indices 0..order-1."""

    def __init__(self, table, name: str = "G", labels=None, check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(self.order))
        if any(len(r) != self.order for r in self.table):
            raise ValueError("multiplication table must be square")
        ids = [e for e in range(self.order) if all(self.table[e][x] == x == self.table[x][e] for x in range(self.order))]
        if len(ids) != 1:
            raise ValueError("table has no two-sided identity")
        self.identity = ids[0]
        inv = []
        for x in range(self.order):
            ys = [y for y in range(self.order) if self.table[x][y] == self.identity]
            if len(ys) != 1 or self.table[ys[0]][x] != self.identity:
                raise ValueError(f"element {x} has no inverse")
            inv.append(ys[0])
        self.inverse_table = tuple(inv)
        if check and self.order <= 64:
            t = self.table
            for a in range(self.order):
                for b in range(self.order):
                    ab = t[a][b]
                    for c in range(self.order):
                        if t[ab][c] != t[a][t[b][c]]:
                            raise ValueError(f"not associative at ({a}, {b}, {c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse_table[a]

    def elements(self) -> range:
        return range(self.order)

    def power(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def product(self, elems) -> int:
        out = self.identity
        for x in elems:
            out = self.table[out][x]
        return out

    def subgroup(self, gens) -> frozenset:
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def generators(self) -> tuple[int, ...]:
        """A small generating set, greedily preferring elements of large order."""
        gens: list[int] = []
        current = frozenset([self.identity])
        for x in sorted(self.elements(), key=lambda a: (-self.element_order(a), a)):
            if x not in current:
                gens.append(x)
                current = self.subgroup(gens)
            if len(current) == self.order:
                break
        return tuple(gens)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements() for b in self.elements())

    def to_json(self) -> dict:
        return {"name": self.name, "order": self.order, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, obj) -> "FiniteGroup":
        table = obj["table"]
        if int(obj.get("order", len(table))) != len(table):
            raise ValueError("order does not match table size")
        return cls(table, obj.get("name", "G"))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


# --------------------------------------------------------------------------
# built-in groups

def cyclic(n: int) -> FiniteGroup:
    if not 1 <= n <= 24:
        raise ValueError("cyclic(n) supports 1 <= n <= 24")
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)], f"C{n}",
                       ["e" if i == 0 else f"g^{i}" if i > 1 else "g" for i in range(n)])


def symmetric(n: int) -> FiniteGroup:
    """S_n with products read left to right: (s t)(x) = t(s(x))."""
    if not 1 <= n <= 5:
        raise ValueError("symmetric(n) supports 1 <= n <= 5")
    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(t[s[x]] for x in range(n))] for t in perms] for s in perms]
    return FiniteGroup(table, f"S{n}", [_cycle_label(p) for p in perms])


def _cycle_label(p) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        out.append("(" + "".join(cyc) + ")")
    return "".join(out) or "e"


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; index i + n*j encodes r^i s^j."""
    if not 2 <= n <= 12:
        raise ValueError("dihedral(n) supports 2 <= n <= 12")

    def mul(x, y):
        a, b = x % n, x // n
        c, e = y % n, y // n
        return (a + (c if b == 0 else -c)) % n + n * ((b + e) % 2)

    labels = [("e" if i == 0 else f"r^{i}") if j == 0 else (f"r^{i}s" if i else "s") for j in range(2) for i in range(n)]
    return FiniteGroup([[mul(x, y) for y in range(2 * n)] for x in range(2 * n)], f"D{n}", labels)


def quaternion8() -> FiniteGroup:
    # units 1, i, j, k with signs; index = unit + 4 * (sign is negative)
    unit_mul = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }

    def mul(x, y):
        u, s = unit_mul[(x % 4, y % 4)]
        return u + 4 * ((s + x // 4 + y // 4) % 2)

    labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return FiniteGroup([[mul(x, y) for y in range(8)] for x in range(8)], "Q8", labels)


def klein4() -> FiniteGroup:
    return FiniteGroup([[x ^ y for y in range(4)] for x in range(4)], "V4", ["e", "a", "b", "ab"])


_NAME_PATTERNS = [
    (r"(?:cyclic\((\d+)\)|C(\d+))", cyclic),
    (r"(?:symmetric\((\d+)\)|S(\d+))", symmetric),
    (r"(?:dihedral\((\d+)\)|D(\d+))", dihedral),
]

GROUP_NAME_HELP = "cyclic(n)/Cn (n<=24), symmetric(n)/Sn (n<=5), dihedral(n)/Dn (n<=12), quaternion8/Q8, klein4/V4"


def builtin_group(name: str) -> FiniteGroup:
    name = name.strip()
    if name in ("quaternion8", "Q8"):
        return quaternion8()
    if name in ("klein4", "V4"):
        return klein4()
    for pattern, factory in _NAME_PATTERNS:
        m = re.fullmatch(pattern, name)
        if m:
            return factory(int(m.group(1) or m.group(2)))
    raise ValueError(f"unknown group {name!r}; valid names: {GROUP_NAME_HELP}")


def load_catalog() -> dict[str, FiniteGroup]:
    """Groups shipped in ``data/groups.json``, re-verified on load."""
    text = resources.files("pseudochar").joinpath("data/groups.json").read_text()
    return {entry["name"]: FiniteGroup.from_json(entry) for entry in json.loads(text)}


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, u: Sequence[int]) -> bool:
    return all(u[src.mul(a, b)] == dst.mul(u[a], u[b]) for a in src.elements() for b in src.elements())


def extend_homomorphism(group: FiniteGroup, gen_images: Mapping[int, object],
                        mul: Callable, identity) -> list | None:
    """Extend generator images to all of ``group``; None if inconsistent.

    Walks the Cayley graph and checks every edge x -> x g, which is enough
    for the resulting map to be a homomorphism.
    """
    images: list = [None] * group.order
    images[group.identity] = identity
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        for g, img in gen_images.items():
            y = group.mul(x, g)
            val = mul(images[x], img)
            if images[y] is None:
                images[y] = val
                queue.append(y)
            elif images[y] != val:
                return None
    if any(v is None for v in images):
        return None
    return images


# --------------------------------------------------------------------------
# words

def evaluate_word_in_group(group: FiniteGroup, w: Word, assignment) -> int:
    """Product of the assigned elements, left to right; the empty word gives e."""
    out = group.identity
    for letter in w:
        try:
            x = assignment[letter]
        except (KeyError, IndexError):
            raise ValueError(f"unassigned letter {letter}") from None
        out = group.table[out][x]
    return out


def cyclic_canonical(w: Word) -> Word:
    """Lexicographically least rotation."""
    w = tuple(w)
    if len(w) <= 1:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def slot_assignment(elems: Sequence[int]) -> dict[int, int]:
    """Letter i (1-based) -> elems[i-1]."""
    return {i + 1: x for i, x in enumerate(elems)}


# --------------------------------------------------------------------------
# group algebra and free algebra

class GroupAlgebraElement:
    """A finite sum of group elements with coefficients in ``ring``."""

    __slots__ = ("ring", "group", "terms")

    def __init__(self, ring: Ring, group: FiniteGroup, coeffs: Mapping[int, object] | None = None):
        self.ring = ring
        self.group = group
        acc: dict[int, RingValue] = {}
        for g, c in (coeffs or {}).items():
            c = embed(c, ring)
            acc[g] = acc[g] + c if g in acc else c
        self.terms = tuple(sorted((g, c) for g, c in acc.items() if c))

    @classmethod
    def basis(cls, ring: Ring, group: FiniteGroup, g: int, coeff=1) -> "GroupAlgebraElement":
        return cls(ring, group, {g: coeff})

    @classmethod
    def one(cls, ring, group):
        return cls.basis(ring, group, group.identity)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(g for g, _ in self.terms)

    def coefficient(self, g: int) -> RingValue:
        for h, c in self.terms:
            if h == g:
                return c
        return self.ring.zero()

    def _same(self, other):
        if not isinstance(other, GroupAlgebraElement) or other.group != self.group:
            raise ValueError("group mismatch")
        if other.ring != self.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other):
        self._same(other)
        acc = dict(self.terms)
        for g, c in other.terms:
            acc[g] = acc[g] + c if g in acc else c
        return GroupAlgebraElement(self.ring, self.group, acc)

    def __neg__(self):
        return GroupAlgebraElement(self.ring, self.group, {g: -c for g, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            self._same(other)
            acc: dict[int, RingValue] = {}
            for g, a in self.terms:
                for h, b in other.terms:
                    k = self.group.mul(g, h)
                    acc[k] = acc[k] + a * b if k in acc else a * b
            return GroupAlgebraElement(self.ring, self.group, acc)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, b) -> "GroupAlgebraElement":
        b = embed(b, self.ring)
        return GroupAlgebraElement(self.ring, self.group, {g: b * c for g, c in self.terms})

    def convert(self, ring: Ring) -> "GroupAlgebraElement":
        return GroupAlgebraElement(ring, self.group, {g: embed(c, ring) for g, c in self.terms})

    def pushforward(self, target: FiniteGroup, u: Sequence[int]) -> "GroupAlgebraElement":
        acc: dict[int, RingValue] = {}
        for g, c in self.terms:
            acc[u[g]] = acc[u[g]] + c if u[g] in acc else c
        return GroupAlgebraElement(self.ring, target, acc)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.group == other.group \
            and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __repr__(self):
        body = " + ".join(f"({c})*{self.group.labels[g]}" for g, c in self.terms) or "0"
        return f"<{body} in {self.ring}[{self.group.name}]>"


class FreeAlgebraElement:
    """An element of the free algebra on letters 1..n: a finite sum of words."""

    __slots__ = ("ring", "n", "terms")

    def __init__(self, ring: Ring, n: int, coeffs: Mapping[Word, object] | None = None):
        self.ring = ring
        self.n = n
        acc: dict[Word, RingValue] = {}
        for w, c in (coeffs or {}).items():
            w = tuple(w)
            if any(not 1 <= x <= n for x in w):
                raise ValueError(f"word {w} uses letters outside 1..{n}")
            c = embed(c, ring)
            acc[w] = acc[w] + c if w in acc else c
        self.terms = tuple(sorted((w, c) for w, c in acc.items() if c))

    @classmethod
    def letter(cls, ring, n, i, coeff=1):
        return cls(ring, n, {(i,): coeff})

    def __add__(self, other):
        acc = dict(self.terms)
        for w, c in other.terms:
            acc[w] = acc[w] + c if w in acc else c
        return FreeAlgebraElement(self.ring, self.n, acc)

    def __neg__(self):
        return FreeAlgebraElement(self.ring, self.n, {w: -c for w, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FreeAlgebraElement):
            acc: dict[Word, RingValue] = {}
            for w, a in self.terms:
                for v, b in other.terms:
                    k = w + v
                    acc[k] = acc[k] + a * b if k in acc else a * b
            return FreeAlgebraElement(self.ring, self.n, acc)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, b):
        b = embed(b, self.ring)
        return FreeAlgebraElement(self.ring, self.n, {w: b * c for w, c in self.terms})

    def convert(self, ring):
        return FreeAlgebraElement(ring, self.n, {w: embed(c, ring) for w, c in self.terms})

    def __eq__(self, other):
        return isinstance(other, FreeAlgebraElement) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __repr__(self):
        return "<" + (" + ".join(f"({c})*{w}" for w, c in self.terms) or "0") + ">"


# --------------------------------------------------------------------------
# representations

class Representation:
    """A homomorphism from a finite group to GL_d of a ring, stored elementwise."""

    def __init__(self, group: FiniteGroup, ring: Ring, images: Sequence[SquareMatrix], check: bool = True):
        if len(images) != group.order:
            raise ValueError("need one image per group element")
        self.group = group
        self.ring = ring
        self.images = tuple(m.convert(ring) for m in images)
        self.d = self.images[0].d
        if check:
            if self.images[group.identity] != SquareMatrix.identity(ring, self.d):
                raise ValueError("identity must map to the identity matrix")
            for a in group.elements():
                if not det(self.images[a]).is_unit():
                    raise ValueError(f"image of {group.labels[a]} is not invertible")
                for b in group.elements():
                    if self.images[a] * self.images[b] != self.images[group.mul(a, b)]:
                        raise ValueError(f"not a homomorphism at ({group.labels[a]}, {group.labels[b]})")

    def __call__(self, g: int) -> SquareMatrix:
        return self.images[g]

    @classmethod
    def from_generators(cls, group: FiniteGroup, ring: Ring, gen_images: Mapping[int, SquareMatrix]) -> "Representation":
        mats = {g: m.convert(ring) for g, m in gen_images.items()}
        d = next(iter(mats.values())).d
        images = extend_homomorphism(group, mats, lambda a, b: a * b, SquareMatrix.identity(ring, d))
        if images is None:
            raise ValueError("generator images do not define a homomorphism")
        return cls(group, ring, images)

    @classmethod
    def trivial(cls, group: FiniteGroup, ring: Ring, d: int) -> "Representation":
        return cls(group, ring, [SquareMatrix.identity(ring, d)] * group.order, check=False)

    @classmethod
    def character(cls, group: FiniteGroup, ring: Ring, values: Sequence) -> "Representation":
        return cls(group, ring, [SquareMatrix(ring, [[v]]) for v in values])

    def direct_sum(self, other: "Representation") -> "Representation":
        if other.group != self.group or other.ring != self.ring:
            raise ValueError("direct sum needs the same group and ring")
        return Representation(self.group, self.ring,
                              [block_diagonal(a, b) for a, b in zip(self.images, other.images)], check=False)

    def conjugate(self, p: SquareMatrix) -> "Representation":
        pinv = p.inverse()
        return Representation(self.group, self.ring, [p * m * pinv for m in self.images], check=False)

    def compose(self, u: Sequence[int], source: FiniteGroup) -> "Representation":
        """The representation of ``source`` given by g -> rho(u(g))."""
        return Representation(source, self.ring, [self.images[u[g]] for g in source.elements()])

    def convert(self, ring: Ring) -> "Representation":
        return Representation(self.group, ring, [m.convert(ring) for m in self.images], check=False)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "ring": self.ring.to_json(),
                "images": [m.to_json() for m in self.images]}

    def __eq__(self, other):
        return isinstance(other, Representation) and self.group == other.group and self.images == other.images

    def __hash__(self):
        return hash(self.images)


def rho_B(rho: Representation, x: GroupAlgebraElement) -> SquareMatrix:
    """The matrix sum_i b_i rho(g_i), computed over the coefficient ring of x."""
    if x.group != rho.group:
        raise ValueError("incompatible rings: group mismatch")
    ring = x.ring
    out = SquareMatrix.zeros(ring, rho.d)
    for g, b in x.terms:
        out = out + rho.images[g].convert(ring).scale(b)
    return out


# --------------------------------------------------------------------------
# stock of representations for tests and suites

def _root_candidates(ring: Ring, order: int) -> list[RingValue]:
    if ring.is_finite:
        pool = ring.elements()
    else:
        base = ring
        while isinstance(base, PolynomialRing):
            base = base.base
        pool = [embed(1, ring), embed(-1, ring)]
    return [u for u in pool if u.is_unit() and u ** order == 1]


def all_characters(group: FiniteGroup, ring: Ring) -> list[Representation]:
    """All one-dimensional representations with values in ``ring``."""
    gens = group.generators()
    cands = [_root_candidates(ring, group.element_order(g)) for g in gens]
    out = []

    def rec(i, chosen):
        if i == len(gens):
            imgs = extend_homomorphism(group, dict(zip(gens, chosen)), lambda a, b: a * b, ring.one())
            if imgs is not None:
                out.append(Representation.character(group, ring, imgs))
            return
        for c in cands[i]:
            rec(i + 1, chosen + [c])

    rec(0, [])
    return out


def permutation_representation(group: FiniteGroup, ring: Ring, subgroup: frozenset) -> Representation:
    """Action on the right cosets H g, by right multiplication."""
    cosets: list[frozenset] = []
    for g in group.elements():
        c = frozenset(group.mul(h, g) for h in subgroup)
        if c not in cosets:
            cosets.append(c)
    index = {c: i for i, c in enumerate(cosets)}
    n = len(cosets)
    images = []
    for g in group.elements():
        rows = [[0] * n for _ in range(n)]
        for c, i in index.items():
            j = index[frozenset(group.mul(x, g) for x in c)]
            rows[i][j] = 1
        images.append(SquareMatrix(ring, rows))
    return Representation(group, ring, images)


_INTEGRAL_ROTATIONS = {3: [[0, -1], [1, -1]], 4: [[0, -1], [1, 0]], 6: [[1, -1], [1, 0]]}


def standard_blocks(group: FiniteGroup, ring: Ring, max_dim: int = 3) -> list[Representation]:
    """Characters, small permutation representations and integral 2-dim blocks."""
    blocks = list(all_characters(group, ring))
    seen = set()
    for g in group.elements():
        h = group.subgroup([g])
        idx = group.order // len(h)
        if 2 <= idx <= max_dim and h not in seen:
            seen.add(h)
            blocks.append(permutation_representation(group, ring, h))
    # faithful 2-dim blocks from an element of order 3, 4 or 6
    for g in group.generators():
        k = group.element_order(g)
        if k in _INTEGRAL_ROTATIONS and max_dim >= 2:
            gens = group.generators()
            rot = SquareMatrix(ring, _INTEGRAL_ROTATIONS[k])
            for flip in ([[0, 1], [1, 0]], [[1, 0], [0, -1]]):
                imgs = {}
                for x in gens:
                    if x == g:
                        imgs[x] = rot
                    else:
                        imgs[x] = SquareMatrix(ring, flip)
                try:
                    blocks.append(Representation.from_generators(group, ring, imgs))
                    break
                except ValueError:
                    continue
            if len(gens) == 1:
                blocks.append(Representation.from_generators(group, ring, {g: rot}))
    uniq = []
    for b in blocks:
        if b not in uniq:
            uniq.append(b)
    return uniq


def random_representation(group: FiniteGroup, ring: Ring, d: int, rng: random.Random,
                          blocks: list[Representation] | None = None) -> Representation:
    """Direct sum of random stock blocks of total dimension d, randomly conjugated."""
    blocks = blocks if blocks is not None else standard_blocks(group, ring, max_dim=d)
    by_dim: dict[int, list[Representation]] = {}
    for b in blocks:
        by_dim.setdefault(b.d, []).append(b)
    parts: list[Representation] = []
    remaining = d
    while remaining:
        dims = [k for k in by_dim if k <= remaining]
        k = rng.choice(dims)
        parts.append(rng.choice(by_dim[k]))
        remaining -= k
    rho = parts[0]
    for p in parts[1:]:
        rho = rho.direct_sum(p)
    return rho.conjugate(random_invertible(ring, d, rng))


@dataclass(frozen=True)
class GroupMorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.order or not is_homomorphism(self.source, self.target, self.images):
            raise ValueError("u is not a homomorphism")

    def __call__(self, g):
        return self.images[g]
