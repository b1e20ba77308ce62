"""Square matrices over the exact rings, with a division-free characteristic polynomial."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations

from .rings import PolynomialRing, Ring, RingValue, adjoin, embed, fresh_names


class SquareMatrix:
    """An immutable d x d matrix over a single ring."""

    __slots__ = ("ring", "d", "rows")

    def __init__(self, ring: Ring, rows):
        rows = tuple(tuple(embed(x, ring) for x in row) for row in rows)
        d = len(rows)
        if d < 1 or any(len(r) != d for r in rows):
            raise ValueError("SquareMatrix needs a nonempty square array")
        self.ring = ring
        self.d = d
        self.rows = rows

    @classmethod
    def _raw(cls, ring, rows):
        m = cls.__new__(cls)
        m.ring, m.d, m.rows = ring, len(rows), rows
        return m

    @classmethod
    def identity(cls, ring: Ring, d: int) -> "SquareMatrix":
        one, zero = ring.one(), ring.zero()
        return cls._raw(ring, tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d)))

    @classmethod
    def zeros(cls, ring: Ring, d: int) -> "SquareMatrix":
        zero = ring.zero()
        return cls._raw(ring, tuple((zero,) * d for _ in range(d)))

    @classmethod
    def diagonal(cls, ring: Ring, entries) -> "SquareMatrix":
        entries = [embed(x, ring) for x in entries]
        d, zero = len(entries), ring.zero()
        return cls._raw(ring, tuple(tuple(entries[i] if i == j else zero for j in range(d)) for i in range(d)))

    @classmethod
    def random(cls, ring: Ring, d: int, rng: random.Random) -> "SquareMatrix":
        return cls._raw(ring, tuple(tuple(ring.random_element(rng) for _ in range(d)) for _ in range(d)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if not isinstance(other, SquareMatrix):
            return False
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return SquareMatrix._raw(self.ring, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return SquareMatrix._raw(self.ring, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return SquareMatrix._raw(self.ring, tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, other):
        if isinstance(other, SquareMatrix):
            self._check(other)
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = r[0] * c[0]
                    for k in range(1, self.d):
                        acc = acc + r[k] * c[k]
                    row.append(acc)
                out.append(tuple(row))
            return SquareMatrix._raw(self.ring, tuple(out))
        if isinstance(other, (RingValue, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RingValue, int)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "SquareMatrix":
        c = embed(c, self.ring)
        return SquareMatrix._raw(self.ring, tuple(tuple(c * a for a in r) for r in self.rows))

    def __pow__(self, e: int) -> "SquareMatrix":
        if e < 0:
            return self.inverse() ** (-e)
        out = SquareMatrix.identity(self.ring, self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    def __repr__(self):
        return f"SquareMatrix({self.ring}, {[[str(x) for x in r] for r in self.rows]})"

    def convert(self, ring: Ring) -> "SquareMatrix":
        if ring == self.ring:
            return self
        return SquareMatrix._raw(ring, tuple(tuple(embed(x, ring) for x in r) for r in self.rows))

    def trace(self) -> RingValue:
        acc = self.rows[0][0]
        for i in range(1, self.d):
            acc = acc + self.rows[i][i]
        return acc

    def submatrix(self, idx) -> "SquareMatrix":
        return SquareMatrix._raw(self.ring, tuple(tuple(self.rows[i][j] for j in idx) for i in idx))

    def is_invertible(self) -> bool:
        return det(self).is_unit()

    def inverse(self) -> "SquareMatrix":
        """Inverse through Cayley-Hamilton; raises ZeroDivisionError if det is not a unit."""
        lam = charpoly(self).lambdas
        d = self.d
        # M (sum_{i<d} lam_i M^{d-1-i}) = -lam_d I
        acc = SquareMatrix.identity(self.ring, d)
        for i in range(1, d):
            acc = acc * self + SquareMatrix.identity(self.ring, d).scale(lam[i])
        return acc.scale(-lam[d].inverse())

    def to_json(self):
        return [[self.ring.value_to_json(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, ring: Ring, obj) -> "SquareMatrix":
        return cls._raw(ring, tuple(tuple(ring.value_from_json(x) for x in r) for r in obj))


def block_diagonal(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    zero = a.ring.zero()
    rows = [r + (zero,) * b.d for r in a.rows] + [(zero,) * a.d + r for r in b.rows]
    return SquareMatrix._raw(a.ring, tuple(rows))


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of det(T I - M) = sum_i lambdas[i] T^(d-i); lambdas[0] = 1."""

    d: int
    lambdas: tuple

    def __getitem__(self, i):
        return self.lambdas[i]


def charpoly(m: SquareMatrix) -> CharPoly:
    """Berkowitz's division-free algorithm.

    Splitting ``M = [[a, R], [C, M1]]``, the coefficient vector of M is a
    lower-triangular Toeplitz matrix with first column
    ``1, -a, -R C, -R M1 C, ..., -R M1^(k-2) C`` applied to that of M1.
    Only ring operations are used, so zero divisors are harmless.
    """
    ring, d = m.ring, m.d
    rows = m.rows
    one = ring.one()
    vec = [one]  # charpoly of the empty trailing block
    for s in range(d - 1, -1, -1):
        size = d - s  # current block is rows/cols s..d-1
        a = rows[s][s]
        r = rows[s][s + 1:]
        c = [rows[i][s] for i in range(s + 1, d)]
        col = [one, -a]
        v = c
        for _ in range(size - 1):
            acc = ring.zero()
            for x, y in zip(r, v):
                acc = acc + x * y
            col.append(-acc)
            # v <- M1 v
            v = [sum_products(rows[i][s + 1:], v, ring) for i in range(s + 1, d)]
        new = []
        for i in range(size + 1):
            acc = ring.zero()
            for j in range(min(i, size - 1) + 1):
                if j < len(vec):
                    acc = acc + col[i - j] * vec[j]
            new.append(acc)
        vec = new
    return CharPoly(d, tuple(vec))


def sum_products(xs, ys, ring) -> RingValue:
    acc = ring.zero()
    for x, y in zip(xs, ys):
        acc = acc + x * y
    return acc


def det(m: SquareMatrix) -> RingValue:
    lam = charpoly(m).lambdas[m.d]
    return lam if m.d % 2 == 0 else -lam


def det_cofactor(m: SquareMatrix) -> RingValue:
    """Laplace expansion along the first row; test oracle for small d."""
    if m.d == 1:
        return m.rows[0][0]
    if m.d == 2:
        (a, b), (c, e) = m.rows
        return a * e - b * c
    total = m.ring.zero()
    for j in range(m.d):
        x = m.rows[0][j]
        if not x:
            continue
        minor = SquareMatrix._raw(m.ring, tuple(r[:j] + r[j + 1:] for r in m.rows[1:]))
        term = x * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_leibniz(m: SquareMatrix) -> RingValue:
    """Sum over permutations; independent oracle for d <= 4."""
    total = m.ring.zero()
    for perm in permutations(range(m.d)):
        inv = sum(1 for i in range(m.d) for j in range(i + 1, m.d) if perm[i] > perm[j])
        term = m.ring.one()
        for i, j in enumerate(perm):
            term = term * m.rows[i][j]
        total = total - term if inv % 2 else total + term
    return total


def charpoly_cofactor(m: SquareMatrix) -> CharPoly:
    """Characteristic polynomial by cofactor expansion of T I - M over ring[T]."""
    (name,) = fresh_names(m.ring, "T", 1)
    big = adjoin(m.ring, [name])
    t = big.var(name)
    rows = tuple(
        tuple((t if i == j else big.zero()) - embed(m.rows[i][j], big) for j in range(m.d))
        for i in range(m.d)
    )
    p = det_cofactor(SquareMatrix._raw(big, rows))
    return CharPoly(m.d, tuple(big.coefficient(p, name, m.d - i) for i in range(m.d + 1)))


def exterior_trace(m: SquareMatrix, k: int) -> RingValue:
    """Trace of the k-th exterior power: the sum of all principal k x k minors."""
    if not 0 <= k <= m.d:
        raise ValueError(f"k={k} out of range 0..{m.d}")
    if k == 0:
        return m.ring.one()
    total = m.ring.zero()
    for idx in combinations(range(m.d), k):
        total = total + det_cofactor(m.submatrix(idx))
    return total


def generic_matrix(ring: PolynomialRing, d: int, prefix: str) -> SquareMatrix:
    """Matrix whose (i, j) entry is the variable ``{prefix}_{i+1}{j+1}``."""
    return SquareMatrix._raw(ring, tuple(
        tuple(ring.var(f"{prefix}_{i + 1}{j + 1}") for j in range(d)) for i in range(d)))


def generic_names(d: int, prefix: str) -> list[str]:
    return [f"{prefix}_{i + 1}{j + 1}" for i in range(d) for j in range(d)]


def random_invertible(ring: Ring, d: int, rng: random.Random, attempts: int = 200) -> SquareMatrix:
    """Random matrix with unit determinant.

    Over rings with few units (Z, Z[t]) this falls back to a product of
    elementary and signed permutation matrices.
    """
    if ring.is_finite:
        for _ in range(attempts):
            m = SquareMatrix.random(ring, d, rng)
            if det(m).is_unit():
                return m
    m = SquareMatrix.identity(ring, d)
    for _ in range(3 * d):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        rows = [list(r) for r in SquareMatrix.identity(ring, d).rows]
        if i != j:
            rows[i][j] = embed(rng.randint(-2, 2), ring)
        else:
            rows[0][0] = embed(rng.choice([1, -1]), ring)
        m = m * SquareMatrix(ring, rows)
    return m
