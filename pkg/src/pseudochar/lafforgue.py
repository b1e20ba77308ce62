"""Lafforgue GL_d-pseudocharacters acting on Donkin expressions.

Invariant functions on tuples (g_1, ..., g_n) of invertible matrices are
written as integer polynomials in the generators

* ``("L", k, w)``: the k-th characteristic polynomial coefficient of the
  product g_{w_1} ... g_{w_r} (word ``w`` over 1-based slots, stored as its
  least rotation), and
* ``("Dinv", i)``: det(g_i)^(-1).

A pseudocharacter evaluates such an expression at a tuple of group elements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Callable, Mapping, Sequence

from .groups_words import FiniteGroup, Representation, cyclic_canonical, evaluate_word_in_group
from .matrices import SquareMatrix, charpoly, det, random_invertible
from .rings import PrimeField, Ring, RingValue, embed


def _gen_key(g):
    return (0, g[1], g[2]) if g[0] == "L" else (1, g[1], ())


def _normalize_gen(g):
    if g[0] == "L":
        k, w = int(g[1]), tuple(int(x) for x in g[2])
        if k < 1:
            raise ValueError("LambdaGen needs k >= 1")
        return ("L", k, cyclic_canonical(w))
    if g[0] == "Dinv":
        return ("Dinv", int(g[1]))
    raise ValueError(f"unknown generator {g!r}")


class DonkinExpression:
    """An integer polynomial in Lambda generators and inverse determinants."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, int] | None = None):
        self.n = n
        acc: dict[tuple, int] = {}
        for mono, c in (terms or {}).items():
            if c:
                key = self._normalize_mono(mono)
                acc[key] = acc.get(key, 0) + c
        self.terms = tuple(sorted(((m, c) for m, c in acc.items() if c), key=lambda t: [(_gen_key(g), e) for g, e in t[0]]))

    def _normalize_mono(self, mono):
        powers: dict[tuple, int] = {}
        for g, e in mono:
            g = _normalize_gen(g)
            letters = g[2] if g[0] == "L" else (g[1],)
            if any(not 1 <= x <= self.n for x in letters):
                raise ValueError(f"generator {g} uses a slot outside 1..{self.n}")
            powers[g] = powers.get(g, 0) + e
        return tuple(sorted(((g, e) for g, e in powers.items() if e), key=lambda t: _gen_key(t[0])))

    # constructors
    @classmethod
    def constant(cls, n: int, c: int = 1) -> "DonkinExpression":
        return cls(n, {(): c})

    @classmethod
    def lambda_gen(cls, n: int, k: int, word) -> "DonkinExpression":
        return cls(n, {((("L", k, tuple(word)), 1),): 1})

    @classmethod
    def det_inv(cls, n: int, i: int) -> "DonkinExpression":
        return cls(n, {((("Dinv", i), 1),): 1})

    # algebra
    def _coerce(self, other):
        if isinstance(other, int):
            return DonkinExpression.constant(self.n, other)
        if isinstance(other, DonkinExpression):
            if other.n != self.n:
                raise ValueError("arity mismatch")
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return DonkinExpression(self.n, acc)

    __radd__ = __add__

    def __neg__(self):
        return DonkinExpression(self.n, {m: -c for m, c in self.terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[tuple, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 + m2
                key = self._normalize_mono(m)
                acc[key] = acc.get(key, 0) + c1 * c2
        return DonkinExpression(self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = DonkinExpression.constant(self.n)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, DonkinExpression) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.terms))

    def generators(self) -> set:
        return {g for m, _ in self.terms for g, _ in m}

    # substitutions
    def _map_gens(self, n_new: int, fn: Callable[[tuple], "DonkinExpression"]) -> "DonkinExpression":
        out = DonkinExpression(n_new)
        for mono, c in self.terms:
            term = DonkinExpression.constant(n_new, c)
            for g, e in mono:
                term = term * fn(g) ** e
            out = out + term
        return out

    def relabel(self, zeta: Sequence[int], n_new: int) -> "DonkinExpression":
        """f^zeta: slot i becomes slot zeta[i-1] of an n_new-ary expression."""
        if len(zeta) != self.n:
            raise ValueError("arity mismatch: zeta must have one entry per slot")
        if any(not 1 <= z <= n_new for z in zeta):
            raise ValueError("zeta leaves 1..n")

        def fn(g):
            if g[0] == "L":
                return DonkinExpression.lambda_gen(n_new, g[1], [zeta[x - 1] for x in g[2]])
            return DonkinExpression.det_inv(n_new, zeta[g[1] - 1])

        return self._map_gens(n_new, fn)

    def hat(self) -> "DonkinExpression":
        """f-hat: the last slot n is replaced by the product g_n g_{n+1}."""
        n = self.n

        def fn(g):
            if g[0] == "L":
                w = []
                for x in g[2]:
                    w.extend((n, n + 1) if x == n else (x,))
                return DonkinExpression.lambda_gen(n + 1, g[1], w)
            if g[1] == n:
                return DonkinExpression.det_inv(n + 1, n) * DonkinExpression.det_inv(n + 1, n + 1)
            return DonkinExpression.det_inv(n + 1, g[1])

        return self._map_gens(n + 1, fn)

    def simplify(self, d: int) -> "DonkinExpression":
        """Cancel Dinv(i) against Lambda_d((i)) using det(g) = (-1)^d Lambda_d(g)."""
        acc: dict[tuple, int] = {}
        for mono, c in self.terms:
            powers = dict(mono)
            for g in [g for g in powers if g[0] == "Dinv"]:
                lam = ("L", d, (g[1],))
                m = min(powers.get(g, 0), powers.get(lam, 0))
                if m:
                    powers[g] -= m
                    powers[lam] -= m
                    if d * m % 2:
                        c = -c
            key = tuple((g, e) for g, e in powers.items() if e)
            acc[key] = acc.get(key, 0) + c
        return DonkinExpression(self.n, acc)

    def evaluate(self, ring: Ring, gen_value: Callable[[tuple], RingValue]) -> RingValue:
        """Substitute generator values; this is a ring morphism in the expression."""
        total = ring.zero()
        cache: dict[tuple, RingValue] = {}
        for mono, c in self.terms:
            term = embed(c, ring)
            for g, e in mono:
                if g not in cache:
                    cache[g] = gen_value(g)
                term = term * cache[g] ** e
            total = total + term
        return total

    # serialization
    @staticmethod
    def factor_json(g):
        return ["L", g[1], list(g[2])] if g[0] == "L" else ["Dinv", g[1]]

    def flat_terms_json(self) -> list:
        """``[[coeff, factor, factor, ...], ...]`` with repeated factors spelled out."""
        out = []
        for mono, c in self.terms:
            row = [c]
            for g, e in mono:
                row.extend([self.factor_json(g)] * e)
            out.append(row)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "terms": [[row[0], row[1:]] for row in self.flat_terms_json()]}

    @classmethod
    def from_flat_terms(cls, n: int, rows) -> "DonkinExpression":
        acc: dict[tuple, int] = {}
        for row in rows:
            c, factors = int(row[0]), row[1:]
            mono = tuple(((f[0], f[1], tuple(f[2])) if f[0] == "L" else (f[0], f[1]), 1) for f in factors)
            e = cls(n, {mono: c})
            for m, cc in e.terms:
                acc[m] = acc.get(m, 0) + cc
        return cls(n, acc)

    @classmethod
    def from_json(cls, obj) -> "DonkinExpression":
        return cls.from_flat_terms(int(obj["n"]), [[c, *fs] for c, fs in obj["terms"]])

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            fs = []
            for g, e in mono:
                s = f"L{g[1]}({','.join(map(str, g[2]))})" if g[0] == "L" else f"Dinv({g[1]})"
                fs.append(s if e == 1 else f"{s}^{e}")
            parts.append(f"{c}" + ("*" + "*".join(fs) if fs else ""))
        return " + ".join(parts)


def LambdaGen(n: int, k: int, word) -> DonkinExpression:
    return DonkinExpression.lambda_gen(n, k, word)


def DetInv(n: int, i: int) -> DonkinExpression:
    return DonkinExpression.det_inv(n, i)


def evaluate_on_matrices(f: DonkinExpression, mats: Sequence[SquareMatrix]) -> RingValue:
    """Interpret f as a function of actual matrices."""
    if len(mats) != f.n:
        raise ValueError("arity mismatch")
    ring, d = mats[0].ring, mats[0].d

    def gen_value(g):
        if g[0] == "L":
            m = SquareMatrix.identity(ring, d)
            for x in g[2]:
                m = m * mats[x - 1]
            return charpoly(m).lambdas[g[1]] if g[1] <= d else ring.zero()
        return det(mats[g[1] - 1]).inverse()

    return f.evaluate(ring, gen_value)


# --------------------------------------------------------------------------
# pseudocharacters

class LafforguePC:
    """A GL_d pseudocharacter on a finite group, backed by a representation or theta data.

    ``theta[(k, g)]`` is the value of Lambda_k at the group element g.
    """

    def __init__(self, group: FiniteGroup, ring: Ring, d: int,
                 rep: Representation | None = None, theta: Mapping | None = None, check: bool = True):
        if (rep is None) == (theta is None):
            raise ValueError("give exactly one of rep or theta")
        self.group, self.ring, self.d = group, ring, d
        self.rep = rep
        self.theta = dict(theta) if theta is not None else None
        self._cp_cache: dict[tuple, tuple] = {}
        if theta is not None and check:
            e = group.identity
            for k in range(1, d + 1):
                if self.theta[(k, e)] != embed(comb(d, k) * (-1) ** k, ring):
                    raise ValueError(f"theta({k}, e) must be binomial(d,k)(-1)^k")
            for g in group.elements():
                if not self.theta[(d, g)].is_unit():
                    raise ValueError(f"theta({d}, {group.labels[g]}) is not a unit")

    @property
    def backing(self) -> str:
        return "rep" if self.rep is not None else "theta"

    def _lambdas_of_product(self, elems: tuple) -> tuple:
        if elems not in self._cp_cache:
            m = SquareMatrix.identity(self.ring, self.d)
            for g in elems:
                m = m * self.rep.images[g]
            self._cp_cache[elems] = charpoly(m).lambdas
        return self._cp_cache[elems]

    def generator_value(self, gen: tuple, elems: Sequence[int]) -> RingValue:
        d, ring = self.d, self.ring
        if gen[0] == "L":
            k, w = gen[1], gen[2]
            if k > d:
                return ring.zero()
            if self.rep is not None:
                return self._lambdas_of_product(tuple(elems[x - 1] for x in w))[k]
            g = evaluate_word_in_group(self.group, w, {i + 1: x for i, x in enumerate(elems)})
            if not w:
                return embed(comb(d, k) * (-1) ** k, ring)
            return self.theta[(k, g)]
        # Dinv
        g = elems[gen[1] - 1]
        if self.rep is not None:
            return det(self.rep.images[g]).inverse()
        dval = self.theta[(d, g)] if d % 2 == 0 else -self.theta[(d, g)]
        if not dval.is_unit():
            raise ZeroDivisionError(f"theta({d}, {self.group.labels[g]}) is not a unit")
        return dval.inverse()

    def theta_table(self) -> dict:
        """theta(k, g) for k = 1..d and every g (the fingerprint)."""
        if self.theta is not None:
            return dict(self.theta)
        return {(k, g): self.generator_value(("L", k, (1,)), (g,))
                for k in range(1, self.d + 1) for g in self.group.elements()}


def lpc_from_rep(rho: Representation) -> LafforguePC:
    return LafforguePC(rho.group, rho.ring, rho.d, rep=rho)


def harvest_theta(rho: Representation) -> dict:
    out = {}
    for g in rho.group.elements():
        lam = charpoly(rho.images[g]).lambdas
        for k in range(1, rho.d + 1):
            out[(k, g)] = lam[k]
    return out


def lpc_from_theta(group: FiniteGroup, ring: Ring, d: int, theta: Mapping, check: bool = True) -> LafforguePC:
    return LafforguePC(group, ring, d, theta=theta, check=check)


def theta_evaluate(pc: LafforguePC, f: DonkinExpression, elems: Sequence[int]) -> RingValue:
    elems = tuple(elems)
    if len(elems) != f.n:
        raise ValueError(f"arity mismatch: expression has {f.n} slots, tuple has {len(elems)}")
    return f.evaluate(pc.ring, lambda g: pc.generator_value(g, elems))


def lpc1_defect(pc: LafforguePC, f: DonkinExpression, zeta: Sequence[int], elems: Sequence[int]) -> RingValue:
    """Theta_m(f)(g_zeta(1), ..., g_zeta(m)) - Theta_n(f^zeta)(g_1, ..., g_n)."""
    elems = tuple(elems)
    if len(zeta) != f.n:
        raise ValueError("arity mismatch")
    pulled = tuple(elems[z - 1] for z in zeta)
    return theta_evaluate(pc, f, pulled) - theta_evaluate(pc, f.relabel(zeta, len(elems)), elems)


def lpc2_defect(pc: LafforguePC, f: DonkinExpression, elems: Sequence[int]) -> RingValue:
    """Theta_{n+1}(f-hat)(g_1..g_{n+1}) - Theta_n(f)(g_1, ..., g_{n-1}, g_n g_{n+1})."""
    elems = tuple(elems)
    n = f.n
    if len(elems) != n + 1:
        raise ValueError(f"arity mismatch: need {n + 1} elements")
    merged = elems[:n - 1] + (pc.group.mul(elems[n - 1], elems[n]),)
    return theta_evaluate(pc, f.hat(), elems) - theta_evaluate(pc, f, merged)


# --------------------------------------------------------------------------
# samplers and checkers

def random_word(n: int, rng: random.Random, max_len: int = 3) -> tuple:
    return tuple(rng.randint(1, n) for _ in range(rng.randint(1, max_len)))


def random_donkin_expression(n: int, d: int, rng: random.Random, terms: int = 3,
                             max_factors: int = 2, with_dinv: bool = True) -> DonkinExpression:
    out = DonkinExpression(n)
    for _ in range(terms):
        term = DonkinExpression.constant(n, rng.choice([-2, -1, 1, 2, 3]))
        for _ in range(rng.randint(1, max_factors)):
            if with_dinv and rng.random() < 0.3:
                term = term * DetInv(n, rng.randint(1, n))
            else:
                term = term * LambdaGen(n, rng.randint(1, d), random_word(n, rng))
        out = out + term
    return out


def generator_expressions(n: int, d: int, max_len: int = 3) -> list[DonkinExpression]:
    """Every LambdaGen(k, w) with |w| <= max_len (canonical words) and every DetInv(i)."""
    words = set()
    for r in range(1, max_len + 1):
        for w in product(range(1, n + 1), repeat=r):
            words.add(cyclic_canonical(w))
    out = [LambdaGen(n, k, w) for w in sorted(words, key=lambda w: (len(w), w)) for k in range(1, d + 1)]
    out += [DetInv(n, i) for i in range(1, n + 1)]
    return out


@dataclass
class LPCVerdict:
    accepted: bool
    checked: int = 0
    witness: dict | None = None

    def to_json(self):
        return {"accepted": self.accepted, "checked": self.checked, "witness": self.witness}


def check_lpc2(pc: LafforguePC, seed: int = 0, trials: int = 2000, max_arity: int = 2,
               exhaustive: bool = False) -> LPCVerdict:
    """Search for a nonzero LPC2 defect.

    Sampled mode draws a random expression (a single generator two times in
    three, otherwise a random polynomial) and a random tuple.  Exhaustive mode
    runs every generator expression of arity <= max_arity on every tuple,
    when |G|^(n+1) <= 1e4.
    """
    G = pc.group
    verdict = LPCVerdict(True)

    def defect(f, tup):
        try:
            return lpc2_defect(pc, f, tup)
        except ZeroDivisionError as exc:
            return str(exc)

    def record(f, tup, val):
        verdict.accepted = False
        verdict.witness = {"f": f.to_json(), "tuple": [G.labels[x] for x in tup],
                           "indices": list(tup), "defect": str(val)}

    if exhaustive:
        for n in range(1, max_arity + 1):
            if G.order ** (n + 1) > 10_000:
                continue
            gens = generator_expressions(n, pc.d)
            for tup in product(G.elements(), repeat=n + 1):
                for f in gens:
                    verdict.checked += 1
                    val = defect(f, tup)
                    if val:
                        record(f, tup, val)
                        return verdict
        return verdict
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(1, max_arity)
        if rng.random() < 2 / 3:
            f = rng.choice(generator_expressions(n, pc.d, max_len=2))
        else:
            f = random_donkin_expression(n, pc.d, rng)
        tup = tuple(rng.randrange(G.order) for _ in range(n + 1))
        verdict.checked += 1
        val = defect(f, tup)
        if val:
            record(f, tup, val)
            break
    return verdict


def check_lpc1(pc: LafforguePC, seed: int = 0, trials: int = 200, max_arity: int = 3) -> LPCVerdict:
    G = pc.group
    rng = random.Random(seed)
    verdict = LPCVerdict(True)
    for _ in range(trials):
        m = rng.randint(1, max_arity)
        n = rng.randint(1, max_arity)
        f = random_donkin_expression(m, pc.d, rng)
        zeta = tuple(rng.randint(1, n) for _ in range(m))
        tup = tuple(rng.randrange(G.order) for _ in range(n))
        verdict.checked += 1
        try:
            val = lpc1_defect(pc, f, zeta, tup)
        except ZeroDivisionError as exc:
            val = str(exc)
        if val:
            verdict.accepted = False
            verdict.witness = {"f": f.to_json(), "zeta": list(zeta), "indices": list(tup), "defect": str(val)}
            break
    return verdict


@dataclass
class PITVerdict:
    accepted: bool
    trials: int
    witness: dict | None = field(default=None)


def invariance_pit(f, d: int, p: int = 101, trials: int = 20, seed: int = 0, n: int | None = None) -> PITVerdict:
    """Randomized test that f((t g_i t^-1)_i) = f((g_i)_i) over F_p.

    ``f`` is a DonkinExpression or any callable taking a list of matrices.
    """
    if p < 101:
        raise ValueError("invariance_pit needs p >= 101")
    field_ = PrimeField(p)
    rng = random.Random(seed)
    if isinstance(f, DonkinExpression):
        n = f.n
        fn = lambda mats: evaluate_on_matrices(f, mats)  # noqa: E731
    else:
        if n is None:
            raise ValueError("give the arity n for a callable probe")
        fn = f
    for i in range(trials):
        gs = [random_invertible(field_, d, rng) for _ in range(n)]
        t = random_invertible(field_, d, rng)
        tinv = t.inverse()
        if fn(gs) != fn([t * g * tinv for g in gs]):
            return PITVerdict(False, i + 1, {"t": t.to_json(), "g": [g.to_json() for g in gs]})
    return PITVerdict(True, trials)
