"""Trace-style pseudocharacters and the alternating cycle-product identity."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import permutations, product

from .groups_words import FiniteGroup, Representation
from .rings import Ring, RingValue, embed, factorize

MAX_DIMENSION = 6
EXHAUSTIVE_LIMIT = 100_000


@dataclass(frozen=True)
class TaylorPC:
    group: FiniteGroup
    ring: Ring
    d: int
    values: tuple  # values[g] for each group index

    def __call__(self, g: int) -> RingValue:
        return self.values[g]


def taylor_from_rep(rho: Representation) -> TaylorPC:
    return TaylorPC(rho.group, rho.ring, rho.d, tuple(m.trace() for m in rho.images))


def cycle_decompose(sigma) -> tuple[list[tuple[int, ...]], int]:
    """Cycles of a permutation of {1..m} given as ``sigma[i-1] = sigma(i)``.

    Fixed points are kept as 1-cycles; each cycle starts at its least element
    and cycles are sorted by that element.  Returns ``(cycles, sign)``.
    """
    m = len(sigma)
    if sorted(sigma) != list(range(1, m + 1)):
        raise ValueError("not a permutation of 1..m")
    seen = [False] * (m + 1)
    cycles = []
    for start in range(1, m + 1):
        if seen[start]:
            continue
        cyc, j = [], start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = sigma[j - 1]
        cycles.append(tuple(cyc))
    sign = -1 if (m - len(cycles)) % 2 else 1
    return cycles, sign


def _permutation_table(m: int):
    # lexicographic order; cycles are 0-based index tuples
    out = []
    for perm in permutations(range(1, m + 1)):
        cycles, sign = cycle_decompose(perm)
        out.append((sign, tuple(tuple(i - 1 for i in c) for c in cycles)))
    return out


_PERM_CACHE: dict[int, list] = {}


def taylor_defect(T: TaylorPC, elems) -> RingValue:
    """Signed sum over S_{d+1} of products of T over the cycles of each permutation."""
    elems = tuple(elems)
    if len(elems) != T.d + 1:
        raise ValueError(f"tuple length {len(elems)} != d+1 = {T.d + 1}")
    if T.d > MAX_DIMENSION:
        raise ValueError(f"d <= {MAX_DIMENSION} only")
    table = _PERM_CACHE.setdefault(T.d + 1, _permutation_table(T.d + 1))
    G = T.group
    total = T.ring.zero()
    for sign, cycles in table:
        term = T.ring.one()
        for cyc in cycles:
            term = term * T.values[G.product(elems[i] for i in cyc)]
        total = total + term if sign > 0 else total - term
    return total


@dataclass
class TaylorVerdict:
    accepted: bool
    witness: tuple | None = None
    precondition_failures: list = field(default_factory=list)
    checked: int = 0

    def to_json(self) -> dict:
        return {"accepted": self.accepted,
                "witness": list(self.witness) if self.witness is not None else None,
                "precondition_failures": list(self.precondition_failures),
                "checked": self.checked}


def factorial_obstructions(ring: Ring, d: int) -> list[int]:
    """Primes p <= d that are not units in ``ring`` (empty iff d! is a unit)."""
    bad = []
    for p in factorize(math.factorial(d)) if d > 1 else []:
        if not embed(p, ring).is_unit():
            bad.append(p)
    return bad


def is_taylor_pc(T: TaylorPC, mode: str = "auto", seed: int = 0, trials: int = 2000) -> TaylorVerdict:
    """Check the unit precondition, T(1) = d, centrality and the identity.

    ``mode`` is ``"exhaustive"``, ``"sampled"`` or ``"auto"`` (exhaustive when
    |G|^(d+1) <= 1e5).  Precondition failures are reported separately from
    identity failures; the identity is still checked.
    """
    G, ring = T.group, T.ring
    verdict = TaylorVerdict(True)
    for p in factorial_obstructions(ring, T.d):
        verdict.precondition_failures.append(f"{p} not a unit")
    if T.values[G.identity] != embed(T.d, ring):
        verdict.precondition_failures.append("T(1) != d")
    for a in G.elements():
        for b in G.elements():
            if T.values[G.mul(a, b)] != T.values[G.mul(b, a)]:
                verdict.accepted = False
                verdict.witness = (a, b)
                verdict.precondition_failures.append("not central")
                return verdict
    if verdict.precondition_failures:
        verdict.accepted = False
    if mode == "auto":
        mode = "exhaustive" if G.order ** (T.d + 1) <= EXHAUSTIVE_LIMIT else "sampled"
    if mode == "exhaustive":
        tuples = product(G.elements(), repeat=T.d + 1)
    else:
        rng = random.Random(seed)
        tuples = (tuple(rng.randrange(G.order) for _ in range(T.d + 1)) for _ in range(trials))
    for tup in tuples:
        verdict.checked += 1
        if taylor_defect(T, tup):
            verdict.accepted = False
            verdict.witness = tuple(tup)
            break
    return verdict
