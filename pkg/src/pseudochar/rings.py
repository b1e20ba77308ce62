"""Exact arithmetic over a small tower of commutative rings.

Supported descriptors: ``Integers``, ``IntegersMod(n)``, ``PrimeField(p)``,
``ExtensionField(p, modulus)``, ``PolynomialRing(base, variables)`` and
``Rationals``.  Elements are :class:`RingValue` objects wrapping a payload in
canonical form, so equality of values is equality of payloads.

Payloads:

* ``Integers``, ``IntegersMod``, ``PrimeField``: ``int``
* ``ExtensionField``: tuple of residues, lowest degree first, length = degree
* ``Rationals``: :class:`fractions.Fraction`
* ``PolynomialRing``: tuple of ``(exponents, coefficient_payload)`` pairs,
  sorted by descending graded-lexicographic order of the exponent tuples.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct


class RingMismatchError(TypeError):
    """Two operands live in different rings."""


class IncompatibleRingsError(TypeError):
    """No canonical map exists between two rings."""


# --------------------------------------------------------------------------
# number theory helpers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division then Pollard rho."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in range(2, 10_000):
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        f = _pollard_rho(m)
        stack.extend([f, m // f])
    return dict(sorted(factors.items()))


def radical(n: int) -> int:
    return math.prod(factorize(n))


# --------------------------------------------------------------------------
# univariate helpers over F_p (coefficient lists, lowest degree first)

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim(a[:dm])


def _is_irreducible(modulus, p: int) -> bool:
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] != 1:
        return False
    for k in range(1, deg // 2 + 1):
        for low in iproduct(range(p), repeat=k):
            if _poly_mod(modulus, list(low) + [1], p) == []:
                return False
    return True


def find_irreducible(p: int, degree: int) -> tuple[int, ...]:
    """First monic irreducible of the given degree, enumerating low coefficients."""
    for low in iproduct(range(p), repeat=degree):
        cand = tuple(reversed(low)) + (1,)
        if cand[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {degree} over F_{p}")


# --------------------------------------------------------------------------
# ring values

class RingValue:
    """An immutable element of a ring, held in canonical form."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: "Ring", payload):
        self.ring = ring
        self.payload = payload

    def _other(self, other):
        if isinstance(other, RingValue):
            if other.ring is self.ring or other.ring == self.ring:
                return other.payload
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
        if isinstance(other, int):
            return self.ring._from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring._add(self.payload, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        r = self.ring
        return RingValue(r, r._add(self.payload, r._neg(b)))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        r = self.ring
        return RingValue(r, r._add(b, r._neg(self.payload)))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return RingValue(self.ring, self.ring._mul(self.payload, b))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring._neg(self.payload))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return (other.ring is self.ring or other.ring == self.ring) and self.payload == other.payload
        if isinstance(other, int):
            return self.payload == self.ring._from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.payload))

    def __bool__(self):
        return not self.ring._is_zero(self.payload)

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.payload)

    def is_unit(self) -> bool:
        return self.ring._inverse(self.payload) is not None

    def inverse(self) -> "RingValue":
        inv = self.ring._inverse(self.payload)
        if inv is None:
            raise ZeroDivisionError(f"{self} is not a unit in {self.ring}")
        return RingValue(self.ring, inv)

    def is_nilpotent(self) -> bool:
        return self.ring._is_nilpotent(self.payload)

    def __repr__(self):
        return f"RingValue({self.ring}, {self.ring._format(self.payload)})"

    def __str__(self):
        return self.ring._format(self.payload)


def is_unit(a: RingValue) -> tuple[bool, RingValue | None]:
    """Return ``(True, inverse)`` when ``a`` is invertible, else ``(False, None)``."""
    inv = a.ring._inverse(a.payload)
    if inv is None:
        return False, None
    return True, RingValue(a.ring, inv)


# --------------------------------------------------------------------------
# descriptors

class Ring:
    """Base class of ring descriptors.  Subclasses are frozen dataclasses."""

    def __call__(self, x) -> RingValue:
        return embed(x, self)

    def zero(self) -> RingValue:
        return RingValue(self, self._from_int(0))

    def one(self) -> RingValue:
        return RingValue(self, self._from_int(1))

    def _format(self, a) -> str:
        return str(a)

    @property
    def is_field(self) -> bool:
        return False

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self):
        raise TypeError(f"{self} is not a finite ring")

    def characteristic(self) -> int:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def value_to_json(self, a: RingValue):
        return a.payload

    def value_from_json(self, obj) -> RingValue:
        return self(obj)


@dataclass(frozen=True)
class Integers(Ring):
    def _from_int(self, n):
        return n

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _is_zero(self, a):
        return a == 0

    def _inverse(self, a):
        return a if a in (1, -1) else None

    def _is_nilpotent(self, a):
        return a == 0

    def characteristic(self):
        return 0

    def random_element(self, rng: random.Random, bound: int = 9) -> RingValue:
        return RingValue(self, rng.randint(-bound, bound))

    def to_json(self):
        return {"kind": "Integers"}

    def __str__(self):
        return "Z"


class _Modular(Ring):
    """Shared arithmetic for Z/n and F_p; payloads are residues in [0, modulus)."""

    def _from_int(self, n):
        return n % self.modulus

    def _add(self, a, b):
        return (a + b) % self.modulus

    def _neg(self, a):
        return -a % self.modulus

    def _mul(self, a, b):
        return a * b % self.modulus

    def _is_zero(self, a):
        return a == 0

    def _inverse(self, a):
        if math.gcd(a, self.modulus) != 1:
            return None
        return pow(a, -1, self.modulus)

    @property
    def is_finite(self):
        return True

    def characteristic(self):
        return self.modulus

    def elements(self):
        return [RingValue(self, a) for a in range(self.modulus)]

    def random_element(self, rng: random.Random, **_) -> RingValue:
        return RingValue(self, rng.randrange(self.modulus))


@dataclass(frozen=True)
class IntegersMod(_Modular):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("IntegersMod requires n >= 2")

    @property
    def modulus(self):
        return self.n

    def _is_nilpotent(self, a):
        return a % radical(self.n) == 0

    @property
    def is_field(self):
        return is_prime(self.n)

    def to_json(self):
        return {"kind": "IntegersMod", "n": self.n}

    def __str__(self):
        return f"Z/{self.n}"


@dataclass(frozen=True)
class PrimeField(_Modular):
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"PrimeField requires a prime, got {self.p}")

    @property
    def modulus(self):
        return self.p

    def _is_nilpotent(self, a):
        return a == 0

    @property
    def is_field(self):
        return True

    @property
    def order(self):
        return self.p

    def to_json(self):
        return {"kind": "PrimeField", "p": self.p}

    def __str__(self):
        return f"F{self.p}"


@dataclass(frozen=True)
class ExtensionField(Ring):
    """F_p[x]/(modulus) with ``modulus`` monic irreducible, lowest coefficient first."""

    p: int
    modulus: tuple

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(c % self.p for c in self.modulus))
        if not is_prime(self.p):
            raise ValueError(f"ExtensionField requires a prime characteristic, got {self.p}")
        if not 1 <= self.degree <= 8:
            raise ValueError("ExtensionField supports degree 1..8")
        if not _is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is not monic irreducible over F_{self.p}")

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def order(self) -> int:
        return self.p ** self.degree

    def _pad(self, a):
        return tuple(a) + (0,) * (self.degree - len(a))

    def _from_int(self, n):
        return self._pad((n % self.p,))

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def _mul(self, a, b):
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._pad(_poly_mod(prod, self.modulus, self.p))

    def _is_zero(self, a):
        return not any(a)

    def _inverse(self, a):
        if not any(a):
            return None
        # a^(q-2) by square and multiply
        result, base, e = self._from_int(1), a, self.order - 2
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _is_nilpotent(self, a):
        return not any(a)

    @property
    def is_field(self):
        return True

    @property
    def is_finite(self):
        return True

    def characteristic(self):
        return self.p

    def generator(self) -> RingValue:
        """The class of x."""
        if self.degree == 1:
            return RingValue(self, self._pad((-self.modulus[0] % self.p,)))
        return RingValue(self, self._pad((0, 1)))

    def elements(self):
        return [RingValue(self, tuple(c)) for c in iproduct(range(self.p), repeat=self.degree)]

    def random_element(self, rng: random.Random, **_) -> RingValue:
        return RingValue(self, tuple(rng.randrange(self.p) for _ in range(self.degree)))

    def _format(self, a):
        terms = []
        for i, c in enumerate(a):
            if c:
                mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
                terms.append(mono if c == 1 and mono else f"{c}{mono}")
        return "+".join(reversed(terms)) or "0"

    def to_json(self):
        return {"kind": "ExtensionField", "p": self.p, "modulus": list(self.modulus)}

    def value_to_json(self, a):
        return list(a.payload)

    def value_from_json(self, obj):
        if isinstance(obj, int):
            return self(obj)
        return RingValue(self, self._pad(tuple(c % self.p for c in obj)))

    def __str__(self):
        return f"F{self.order}"


@dataclass(frozen=True)
class Rationals(Ring):
    def _from_int(self, n):
        return Fraction(n)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _is_zero(self, a):
        return a == 0

    def _inverse(self, a):
        return None if a == 0 else 1 / a

    def _is_nilpotent(self, a):
        return a == 0

    @property
    def is_field(self):
        return True

    def characteristic(self):
        return 0

    def random_element(self, rng, bound: int = 9):
        return RingValue(self, Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))

    def to_json(self):
        return {"kind": "Rationals"}

    def value_to_json(self, a):
        return str(a.payload)

    def value_from_json(self, obj):
        return RingValue(self, Fraction(obj))

    def __str__(self):
        return "Q"


def _grlex_key(exps):
    return (sum(exps), exps)


@dataclass(frozen=True)
class PolynomialRing(Ring):
    """Sparse multivariate polynomials over ``base`` in the named variables."""

    base: Ring
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise ValueError("PolynomialRing needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if isinstance(self.base, PolynomialRing) and isinstance(self.base.base, PolynomialRing):
            raise ValueError("PolynomialRing nesting depth is limited to 2")
        if isinstance(self.base, PolynomialRing) and set(self.base.variables) & set(self.variables):
            raise ValueError("variables clash with the base ring")

    # canonical form
    def _canon(self, terms: dict):
        bz = self.base._is_zero
        items = [(e, c) for e, c in terms.items() if not bz(c)]
        items.sort(key=lambda t: _grlex_key(t[0]), reverse=True)
        return tuple(items)

    def _from_int(self, n):
        c = self.base._from_int(n)
        if self.base._is_zero(c):
            return ()
        return (((0,) * len(self.variables), c),)

    def _from_base(self, c):
        if self.base._is_zero(c):
            return ()
        return (((0,) * len(self.variables), c),)

    def _add(self, a, b):
        if not a:
            return b
        if not b:
            return a
        out = dict(a)
        badd = self.base._add
        for e, c in b:
            if e in out:
                out[e] = badd(out[e], c)
            else:
                out[e] = c
        return self._canon(out)

    def _neg(self, a):
        bneg = self.base._neg
        return tuple((e, bneg(c)) for e, c in a)

    def _mul(self, a, b):
        if not a or not b:
            return ()
        out: dict = {}
        base = self.base
        badd, bmul = base._add, base._mul
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                c = bmul(c1, c2)
                if e in out:
                    out[e] = badd(out[e], c)
                else:
                    out[e] = c
        return self._canon(out)

    def _is_zero(self, a):
        return not a

    def _constant(self, a):
        zero = (0,) * len(self.variables)
        for e, c in a:
            if e == zero:
                return c
        return self.base._from_int(0)

    def _is_nilpotent(self, a):
        return all(self.base._is_nilpotent(c) for _, c in a)

    def _inverse(self, a):
        # unit iff constant term is a unit and the other coefficients are nilpotent
        zero = (0,) * len(self.variables)
        c0 = self._constant(a)
        c0_inv = self.base._inverse(c0)
        if c0_inv is None:
            return None
        if not all(self.base._is_nilpotent(c) for e, c in a if e != zero):
            return None
        # a = c0 (1 + N) with N nilpotent; inverse = c0^-1 sum (-N)^i
        inv0 = self._from_base(c0_inv)
        minus_n = self._neg(self._add(self._mul(a, inv0), self._neg(self._from_int(1))))
        total, power = self._from_int(1), self._from_int(1)
        while True:
            power = self._mul(power, minus_n)
            if not power:
                break
            total = self._add(total, power)
        return self._mul(total, inv0)

    @property
    def is_finite(self):
        return False

    def characteristic(self):
        return self.base.characteristic()

    # constructors and accessors
    def var(self, name: str) -> RingValue:
        i = self.variables.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(self.variables)))
        return RingValue(self, ((e, self.base._from_int(1)),))

    def gens(self) -> list[RingValue]:
        return [self.var(v) for v in self.variables]

    def from_terms(self, terms) -> RingValue:
        """Build from ``(coefficient, exponents)`` pairs; coefficients are base values or ints."""
        out: dict = {}
        badd = self.base._add
        for c, e in terms:
            e = tuple(e)
            if len(e) != len(self.variables):
                raise ValueError("exponent vector length mismatch")
            cp = embed(c, self.base).payload
            out[e] = badd(out[e], cp) if e in out else cp
        return RingValue(self, self._canon(out))

    def terms(self, a: RingValue) -> list[tuple[RingValue, tuple]]:
        return [(RingValue(self.base, c), e) for e, c in a.payload]

    def constant_coefficient(self, a: RingValue) -> RingValue:
        return RingValue(self.base, self._constant(a.payload))

    def total_degree(self, a: RingValue) -> int:
        return max((sum(e) for e, _ in a.payload), default=-1)

    def without(self, names) -> Ring:
        """The ring obtained by dropping the named variables."""
        keep = tuple(v for v in self.variables if v not in names)
        return PolynomialRing(self.base, keep) if keep else self.base

    def coefficient(self, a: RingValue, name: str, power: int) -> RingValue:
        """Coefficient of ``name**power`` as an element of :meth:`without` (name)."""
        i = self.variables.index(name)
        target = self.without((name,))
        out: dict = {}
        for e, c in a.payload:
            if e[i] == power:
                out[e[:i] + e[i + 1:]] = c
        if isinstance(target, PolynomialRing):
            return RingValue(target, target._canon(out))
        return RingValue(target, out.get((), target._from_int(0)))

    def substitute(self, a: RingValue, values: dict, target: Ring) -> RingValue:
        """Evaluate at ``values`` (variable name -> element of ``target``).

        Variables not in ``values`` must exist in ``target``; base coefficients
        are embedded into ``target``.
        """
        images = []
        for v in self.variables:
            if v in values:
                images.append(embed(values[v], target))
            else:
                images.append(target.var(v))
        total = target.zero()
        for e, c in a.payload:
            term = embed(RingValue(self.base, c), target)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            total = total + term
        return total

    def random_element(self, rng: random.Random, terms: int = 3, degree: int = 2, **kw) -> RingValue:
        out = self.zero()
        for _ in range(terms):
            e = [0] * len(self.variables)
            for _ in range(rng.randint(0, degree)):
                e[rng.randrange(len(e))] += 1
            mono = RingValue(self, ((tuple(e), self.base._from_int(1)),))
            out = out + embed(self.base.random_element(rng, **kw), self) * mono
        return out

    def _format(self, a):
        if not a:
            return "0"
        parts = []
        for e, c in a:
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            cs = self.base._format(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    def to_json(self):
        return {"kind": "PolynomialRing", "base": self.base.to_json(), "variables": list(self.variables)}

    def value_to_json(self, a):
        return [[self.base.value_to_json(RingValue(self.base, c)), list(e)] for e, c in a.payload]

    def value_from_json(self, obj):
        if isinstance(obj, int):
            return self(obj)
        return self.from_terms((self.base.value_from_json(c), e) for c, e in obj)

    def __str__(self):
        return f"{self.base}[{','.join(self.variables)}]"


# --------------------------------------------------------------------------
# canonical maps between rings

def embed(x, ring: Ring) -> RingValue:
    """Map ``x`` into ``ring`` along the canonical morphism, if there is one."""
    if isinstance(x, RingValue):
        src = x.ring
        if src is ring or src == ring:
            return x
        if isinstance(src, Integers):
            return RingValue(ring, ring._from_int(x.payload))
        if isinstance(ring, PolynomialRing):
            if isinstance(src, PolynomialRing) and src.base == ring.base and set(src.variables) <= set(ring.variables):
                idx = [ring.variables.index(v) for v in src.variables]
                out = {}
                for e, c in x.payload:
                    ne = [0] * len(ring.variables)
                    for i, k in zip(idx, e):
                        ne[i] = k
                    out[tuple(ne)] = c
                return RingValue(ring, ring._canon(out))
            return RingValue(ring, ring._from_base(embed(x, ring.base).payload))
        if isinstance(ring, ExtensionField) and isinstance(src, (PrimeField, IntegersMod)) and src.modulus == ring.p:
            return RingValue(ring, ring._from_int(x.payload))
        if isinstance(ring, (IntegersMod, PrimeField)) and isinstance(src, (IntegersMod, PrimeField)) \
                and src.modulus % ring.modulus == 0:
            return RingValue(ring, ring._from_int(x.payload))
        if isinstance(ring, Rationals) and isinstance(src, Integers):
            return RingValue(ring, Fraction(x.payload))
        raise IncompatibleRingsError(f"incompatible rings: no canonical map {src} -> {ring}")
    if isinstance(x, bool):
        raise TypeError("booleans are not ring elements")
    if isinstance(x, int):
        return RingValue(ring, ring._from_int(x))
    if isinstance(x, Fraction) and isinstance(ring, Rationals):
        return RingValue(ring, x)
    raise TypeError(f"cannot convert {x!r} into {ring}")


def adjoin(ring: Ring, names) -> PolynomialRing:
    """Adjoin fresh variables, flattening into an existing polynomial ring."""
    names = tuple(names)
    if isinstance(ring, PolynomialRing):
        clash = set(names) & set(ring.variables)
        if clash:
            raise ValueError(f"variables {sorted(clash)} are not fresh")
        return PolynomialRing(ring.base, ring.variables + names)
    return PolynomialRing(ring, names)


def fresh_names(ring: Ring, prefix: str, count: int) -> tuple[str, ...]:
    used = set()
    r = ring
    while isinstance(r, PolynomialRing):
        used |= set(r.variables)
        r = r.base
    candidates = ([prefix] if count == 1 else []) + [f"{prefix}{i}" for i in range(len(used) + count + 1)]
    return tuple([c for c in candidates if c not in used][:count])


def finite_field(q: int) -> Ring:
    """F_q as a PrimeField or an ExtensionField with the first irreducible modulus."""
    f = factorize(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, k), = f.items()
    if k == 1:
        return PrimeField(p)
    return ExtensionField(p, find_irreducible(p, k))


# --------------------------------------------------------------------------
# serialization

def ring_from_json(obj: dict) -> Ring:
    kind = obj.get("kind")
    if kind == "Integers":
        return Integers()
    if kind == "Rationals":
        return Rationals()
    if kind == "IntegersMod":
        return IntegersMod(int(obj["n"]))
    if kind == "PrimeField":
        return PrimeField(int(obj["p"]))
    if kind == "ExtensionField":
        return ExtensionField(int(obj["p"]), tuple(obj["modulus"]))
    if kind == "PolynomialRing":
        return PolynomialRing(ring_from_json(obj["base"]), tuple(obj["variables"]))
    raise ValueError(f"unknown ring kind {kind!r}")


RING_NAME_HELP = "Z, Q, Z/<n>, F<q> (q a prime power), or <ring>[t1,t2,...]"


def ring_from_name(name: str) -> Ring:
    """Parse short names such as ``Z``, ``Z/25``, ``F5``, ``F4``, ``Z[t]``."""
    name = name.strip()
    if name.endswith("]") and "[" in name:
        head, _, vars_ = name[:-1].partition("[")
        return adjoin(ring_from_name(head), [v.strip() for v in vars_.split(",") if v.strip()])
    if name in ("Z", "ZZ"):
        return Integers()
    if name in ("Q", "QQ"):
        return Rationals()
    if name.startswith("Z/"):
        return IntegersMod(int(name[2:]))
    if name.startswith("F") and name[1:].isdigit():
        return finite_field(int(name[1:]))
    raise ValueError(f"unknown ring {name!r}; expected {RING_NAME_HELP}")


# --------------------------------------------------------------------------
# exact linear algebra over Q

class InconsistentSystemError(ValueError):
    """The linear system has no solution."""


@dataclass(frozen=True)
class LinearSolution:
    solution: tuple
    nullspace: tuple


def solve_rational(system, rhs) -> LinearSolution:
    """Solve ``system @ x = rhs`` exactly over Q by Gauss-Jordan elimination.

    Free variables are set to zero in the returned particular solution, so
    earlier columns are preferred as pivots.  Raises
    :class:`InconsistentSystemError` when no solution exists.
    """
    rows = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(system, rhs)]
    if len(rows) != len(rhs):
        raise ValueError("system and rhs have different lengths")
    ncols = len(system[0]) if system else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            raise InconsistentSystemError("inconsistent system")
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    null = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        null.append(tuple(v))
    return LinearSolution(tuple(x), tuple(null))
