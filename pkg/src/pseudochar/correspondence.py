"""Passing between pseudocharacters, determinants and trace functions.

``alpha`` turns a Lafforgue pseudocharacter into a determinant by expanding
det(sum b_i g_i) into Lambda values of words; ``alpha_inverse`` reads the
Lambda values of a determinant back off through :func:`lambda_of`.
"""

from __future__ import annotations

import random
import time
from math import comb
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Sequence

from .determinants import (DataBacked, Determinant, check_multiplicative_homogeneous, det_from_rep, det_from_theta,
                           is_gl_valued, lambda_of, MAX_TABLE_N)
from .groups_words import (FiniteGroup, FreeAlgebraElement, GroupAlgebraElement, Representation, cyclic,
                           extend_homomorphism)
from .lafforgue import (LafforguePC, LambdaGen, check_lpc2, harvest_theta, lpc_from_rep, lpc_from_theta,
                        theta_evaluate)
from .matrices import SquareMatrix, charpoly, det
from .rings import Ring, RingValue, adjoin, finite_field, fresh_names, is_prime
from .taylor import TaylorPC, factorial_obstructions, is_taylor_pc


class NotGLValuedError(ValueError):
    """A free-domain determinant whose letters are not sent to units."""


@dataclass
class ConversionReport:
    """Outcome of a conversion or verification run; never ok when defects exist."""

    direction: str
    fingerprint: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    defects: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    elapsed_ms: float | None = None

    @property
    def ok(self) -> bool:
        return not self.defects

    def to_json(self, timing: bool = False) -> dict:
        out = {"direction": self.direction, "ok": self.ok, "checks": list(self.checks),
               "defects": list(self.defects), "counts": dict(self.counts), "fingerprint": self.fingerprint}
        out.update(self.extra)
        if timing and self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def fingerprint_json(group: FiniteGroup, d: int, theta) -> dict:
    """theta tables as strings keyed by element label, one list per k."""
    return {f"theta{k}": {group.labels[g]: str(theta[(k, g)]) for g in group.elements()} for k in range(1, d + 1)}


# --------------------------------------------------------------------------
# the two directions

def alpha(pc: LafforguePC) -> Determinant:
    """The data-backed determinant with theta(k, g) = Theta(Lambda_k(g_1))(g)."""
    theta = {(k, g): theta_evaluate(pc, LambdaGen(1, k, (1,)), (g,))
             for k in range(1, pc.d + 1) for g in pc.group.elements()}
    return det_from_theta(pc.group, pc.ring, pc.d, theta)


class FreeMonoid:
    """Words over 1..n under concatenation, standing in for a group in LPC evaluation."""

    def __init__(self, n: int):
        self.n = n
        self.name = f"Free({n})"
        self.identity = ()

    def mul(self, a, b):
        return tuple(a) + tuple(b)


class FreeLafforguePC:
    """Pseudocharacter on the free monoid read off a GL-valued determinant."""

    def __init__(self, D: Determinant):
        self.D, self.d, self.ring = D, D.d, D.ring
        self.group = FreeMonoid(D.domain)
        self._cache: dict = {}

    def _word_element(self, w):
        return FreeAlgebraElement(self.ring, self.D.domain, {tuple(w): 1})

    def generator_value(self, gen, elems) -> RingValue:
        if gen[0] == "L":
            w = tuple(x for slot in gen[2] for x in elems[slot - 1])
            key = (gen[1], w)
            if key not in self._cache:
                self._cache[key] = lambda_of(self.D, self._word_element(w), gen[1]) if gen[1] <= self.d \
                    else self.ring.zero()
            return self._cache[key]
        return self.D.evaluate(self._word_element(elems[gen[1] - 1])).inverse()


def alpha_inverse(D: Determinant):
    """theta(k, g) = Lambda_k(g) read off D; free domains must pass the unit criterion."""
    if D.is_free:
        verdict = is_gl_valued(D)
        if not verdict.accepted:
            raise NotGLValuedError(f"not GL-valued: D(letter {verdict.witness['letter']}) = "
                                   f"{verdict.witness['value']} is not a unit")
        return FreeLafforguePC(D)
    G = D.domain
    theta = {(k, g): lambda_of(D, D.basis(g), k) for k in range(1, D.d + 1) for g in G.elements()}
    return lpc_from_theta(G, D.ring, D.d, theta, check=False)


# --------------------------------------------------------------------------
# round trips

def support_elements(group: FiniteGroup, ring: Ring, max_support: int = 3):
    """Every element with support <= max_support and nonzero coefficients from a finite ring."""
    nonzero = [c for c in ring.elements() if c]
    for s in range(1, max_support + 1):
        for supp in combinations(group.elements(), s):
            for coeffs in product(nonzero, repeat=s):
                yield GroupAlgebraElement(ring, group, dict(zip(supp, coeffs)))


def count_support_elements(group: FiniteGroup, q: int, max_support: int = 3) -> int:
    return sum(comb(group.order, s) * (q - 1) ** s for s in range(1, max_support + 1))


def compare_on_supports(D1: Determinant, D2: Determinant, seed: int = 0, samples: int = 200,
                        exhaustive_limit: int = 20_000, max_support: int = MAX_TABLE_N):
    """Compare two determinants on support <= 3 elements; returns (checked, first mismatch or None)."""
    G, ring = D1.domain, D1.ring
    if ring.is_finite and count_support_elements(G, len(list(ring.elements())), max_support) <= exhaustive_limit:
        elements = support_elements(G, ring, max_support)
    else:
        rng = random.Random(seed)
        elements = (
            GroupAlgebraElement(ring, G, {g: ring.random_element(rng)
                                          for g in rng.sample(range(G.order), rng.randint(1, min(max_support, G.order)))})
            for _ in range(samples))
    checked = 0
    for x in elements:
        checked += 1
        if D1.evaluate(x) != D2.evaluate(x):
            return checked, x
    return checked, None


def roundtrip_check(source, seed: int = 0, samples: int = 200, lpc_trials: int = 500) -> ConversionReport:
    """Verify both composites of alpha and alpha_inverse are identities.

    ``source`` is a Representation or a data-backed Determinant (theta data).
    Theta data is additionally checked for validity (multiplicativity of the
    induced law and LPC2), since a bad table can still round-trip.
    """
    start = time.perf_counter()
    report = ConversionReport("roundtrip")
    if isinstance(source, Representation):
        D = det_from_rep(source)
        pc = lpc_from_rep(source)
    elif isinstance(source, Determinant) and isinstance(source.backing, DataBacked):
        D = source
        pc = lpc_from_theta(source.domain, source.ring, source.d, source.backing.theta, check=False)
    else:
        raise TypeError("roundtrip_check takes a Representation or a data-backed Determinant")
    G = D.domain
    theta = pc.theta_table()
    report.fingerprint = fingerprint_json(G, D.d, theta)
    report.counts.update({"d": D.d, "group_order": G.order})

    # D -> Theta -> D
    report.checks.append("alpha(alpha_inverse(D)) = D")
    back = alpha(alpha_inverse(D))
    checked, bad = compare_on_supports(D, back, seed=seed, samples=samples)
    report.counts["determinant_evaluations"] = checked
    if bad is not None:
        report.defects.append({"check": "alpha(alpha_inverse(D))", "element": repr(bad)})

    # Theta -> D -> Theta
    report.checks.append("alpha_inverse(alpha(Theta)) = Theta")
    theta_back = alpha_inverse(alpha(pc)).theta_table()
    for g in G.elements():
        bad_k = [k for k in range(1, D.d + 1) if theta_back[(k, g)] != theta[(k, g)]]
        if bad_k:
            report.defects.append({"check": "alpha_inverse(alpha(Theta))", "element": G.labels[g], "k": bad_k[0]})
            break
    report.counts["theta_values"] = len(theta)

    # validity of the data
    report.checks.append("multiplicative and homogeneous")
    law = check_multiplicative_homogeneous(alpha(pc), seed=seed, trials=60)
    if not law.accepted:
        report.defects.append({"check": "multiplicative", "witness": law.witness})
    report.checks.append("LPC2")
    lpc = check_lpc2(lpc_from_theta(G, D.ring, D.d, theta, check=False), seed=seed, trials=lpc_trials)
    report.counts["lpc2_samples"] = lpc.checked
    if not lpc.accepted:
        report.defects.append({"check": "LPC2", "witness": lpc.witness})
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def taylor_bridge(D: Determinant) -> TaylorPC:
    """The trace function g -> -Lambda_1(g); needs d! to be a unit."""
    bad = factorial_obstructions(D.ring, D.d)
    if bad:
        raise ValueError(f"{bad[0]} not a unit in {D.ring}")
    G = D.domain
    return TaylorPC(G, D.ring, D.d, tuple(-lambda_of(D, D.basis(g), 1) for g in G.elements()))


# --------------------------------------------------------------------------
# two-dimensional representations over finite fields

def _nullspace(rows: list[list[RingValue]], ring: Ring, ncols: int) -> list[list[RingValue]]:
    """Basis of {v : rows v = 0} over a field, by Gauss-Jordan elimination."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [ring.zero()] * ncols
        v[f] = ring.one()
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def intertwiners(src: Sequence[SquareMatrix], dst: Sequence[SquareMatrix]) -> list[SquareMatrix]:
    """Basis of {X : X src[i] = dst[i] X for all i}."""
    ring, d = src[0].ring, src[0].d
    rows = []
    for a, b in zip(src, dst):
        for i in range(d):
            for j in range(d):
                # (X a)_{ij} - (b X)_{ij}, X flattened row-major
                row = [ring.zero()] * (d * d)
                for k in range(d):
                    row[i * d + k] = row[i * d + k] + a[k, j]
                    row[k * d + j] = row[k * d + j] - b[i, k]
                rows.append(row)
    return [SquareMatrix(ring, [v[i * d:(i + 1) * d] for i in range(d)]) for v in _nullspace(rows, ring, d * d)]


def _invertible_combination(basis: list[SquareMatrix], ring: Ring, limit: int = 70_000):
    """Search ring^m for coefficients c with det(sum c_i B_i) nonzero (exhaustive, bounded)."""
    if not basis:
        return None
    elements = list(ring.elements())
    if len(elements) ** len(basis) > limit:
        raise RuntimeError("conjugacy search exceeds budget")
    for cs in product(elements, repeat=len(basis)):
        m = SquareMatrix.zeros(ring, basis[0].d)
        for c, b in zip(cs, basis):
            if c:
                m = m + b.scale(c)
        if det(m):
            return m
    return None


def conjugacy_witness(rho: Representation, sigma: Representation, max_degree: int = 4):
    """Return (k, P) with P rho(g) P^-1 = sigma(g) over F_{q^k}, or None for k <= max_degree.

    The intertwiner space is computed over F_q and det(sum c_i X_i) is formed
    as a polynomial in the c_i.  If it vanishes identically no extension
    helps.  Otherwise it has degree d, so it has a non-root over any field
    with more than d elements; extensions are tried only for prime q, where
    F_q embeds canonically.
    """
    field_ = rho.ring
    gens = rho.group.generators()
    basis = intertwiners([rho.images[g] for g in gens], [sigma.images[g] for g in gens])
    if not basis:
        return None
    cring = adjoin(field_, fresh_names(field_, "c", len(basis)))
    generic = SquareMatrix.zeros(cring, rho.d)
    for c, b in zip(cring.gens(), basis):
        generic = generic + b.convert(cring).scale(c)
    if not det(generic):
        return None
    q = len(list(field_.elements()))
    for k in range(1, max_degree + 1):
        if k == 1:
            big = field_
        elif is_prime(q):
            big = finite_field(q ** k)
        else:
            break
        found = _invertible_combination([b.convert(big) for b in basis], big)
        if found is not None:
            return k, found
    return None


def stable_lines(images: Sequence[SquareMatrix]) -> list[tuple]:
    """Lines of F_q^2 (as spanning vectors) fixed by every matrix in ``images``."""
    ring = images[0].ring
    zero, one = ring.zero(), ring.one()
    lines = [(one, a) for a in ring.elements()] + [(zero, one)]
    out = []
    for v in lines:
        # v spans a stable line iff det[v, m v] = 0
        if all(v[0] * (m[1, 0] * v[0] + m[1, 1] * v[1]) == v[1] * (m[0, 0] * v[0] + m[0, 1] * v[1])
               for m in images):
            out.append(v)
    return out


def is_semisimple_2d(rho: Representation) -> bool:
    """Irreducible (no stable line) or a sum of two stable lines."""
    if rho.d != 2:
        raise NotImplementedError("semisimplicity is implemented for d = 2 only")
    return len(stable_lines([rho.images[g] for g in rho.group.generators()])) != 1


def all_homomorphisms_gl2(group: FiniteGroup, field_: Ring) -> list[Representation]:
    """Every homomorphism group -> GL_2(field_), via generator images of the right orders."""
    one, zero = field_.one(), field_.zero()
    ident = SquareMatrix(field_, [[one, zero], [zero, one]])
    elems = list(field_.elements())
    mats = []
    for a, b, c, e in product(elems, repeat=4):
        if a * e - b * c:
            mats.append(SquareMatrix(field_, [[a, b], [c, e]]))
    gens = group.generators()
    cands = []
    for g in gens:
        o = group.element_order(g)
        cands.append([m for m in mats if m ** o == ident])
    out = []
    for choice in product(*cands):
        images = extend_homomorphism(group, dict(zip(gens, choice)), lambda x, y: x * y, ident)
        if images is not None:
            out.append(Representation(group, field_, images, check=False))
    return out


def _fingerprint_key(rho: Representation) -> tuple:
    return tuple(charpoly(m).lambdas[1:] for m in rho.images)


def semisimple_bijection_check(group: FiniteGroup, q: int, d: int = 2, max_homs: int = 50_000) -> ConversionReport:
    """Census: equal fingerprints iff conjugate, among semisimple 2-dimensional reps over F_q."""
    if d != 2:
        raise NotImplementedError("the census is implemented for d = 2 only")
    if group.order > 12 or q > 9:
        raise ValueError("census limits: |G| <= 12, q <= 9")
    start = time.perf_counter()
    field_ = finite_field(q)
    report = ConversionReport("census", checks=["within-class conjugacy", "cross-class non-conjugacy"])
    homs = all_homomorphisms_gl2(group, field_)
    if len(homs) > max_homs:
        report.counts["partial"] = True
        report.defects.append({"check": "budget", "homomorphisms": len(homs)})
        homs = homs[:max_homs]
    classes: dict[tuple, list[Representation]] = {}
    non_semisimple = []
    for rho in homs:
        if is_semisimple_2d(rho):
            classes.setdefault(_fingerprint_key(rho), []).append(rho)
        else:
            non_semisimple.append(rho)
    max_k = 1
    for key, members in classes.items():
        rep = members[0]
        for other in members[1:]:
            w = conjugacy_witness(rep, other)
            if w is None:
                report.defects.append({"check": "within-class", "fingerprint": [[str(x) for x in t] for t in key]})
                break
            max_k = max(max_k, w[0])
    reps = [m[0] for m in classes.values()]
    for a, b in combinations(reps, 2):
        if conjugacy_witness(a, b) is not None:
            report.defects.append({"check": "cross-class", "a": a.to_json()["images"], "b": b.to_json()["images"]})
    matched = sum(1 for rho in non_semisimple if _fingerprint_key(rho) in classes)
    report.counts.update({
        "homomorphisms": len(homs),
        "semisimple": sum(len(m) for m in classes.values()),
        "non_semisimple": len(non_semisimple),
        "non_semisimple_sharing_a_fingerprint": matched,
        "classes": len(classes),
        "max_extension_degree": max_k,
    })
    report.extra.update({"group": group.name, "q": q})
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


def char_p_separation_demo() -> ConversionReport:
    """Two non-conjugate semisimple reps of C3 over F_4 with equal traces but different determinants."""
    report = ConversionReport("char-p-separation", checks=["traces", "determinants", "semisimple", "conjugacy"])
    G = cyclic(3)
    F4 = finite_field(4)
    w = F4.generator()
    chi = Representation.character(G, F4, [1, 1, 1])
    psi = Representation.character(G, F4, [1, w, w * w])
    rho1, rho2 = chi.direct_sum(chi), psi.direct_sum(psi)
    th1, th2 = harvest_theta(rho1), harvest_theta(rho2)
    traces1 = [-th1[(1, g)] for g in G.elements()]
    traces2 = [-th2[(1, g)] for g in G.elements()]
    dets_equal = all(th1[(2, g)] == th2[(2, g)] for g in G.elements())
    traces_equal = traces1 == traces2
    semisimple = is_semisimple_2d(rho1) and is_semisimple_2d(rho2)
    conjugate = conjugacy_witness(rho1, rho2) is not None
    report.fingerprint = {"rho1": fingerprint_json(G, 2, th1), "rho2": fingerprint_json(G, 2, th2)}
    # control: the same construction in characteristic 5, where 2 is a unit
    F5 = finite_field(5)
    C2 = cyclic(2)
    one, sgn = Representation.character(C2, F5, [1, 1]), Representation.character(C2, F5, [1, -1])
    c1, c2 = harvest_theta(one.direct_sum(one)), harvest_theta(sgn.direct_sum(sgn))
    control_traces_equal = all(c1[(1, g)] == c2[(1, g)] for g in C2.elements())
    report.extra.update({
        "traces_equal": traces_equal,
        "determinants_equal": dets_equal,
        "semisimple": semisimple,
        "conjugate": conjugate,
        "traces": {"rho1": [str(t) for t in traces1], "rho2": [str(t) for t in traces2]},
        "control": {"group": C2.name, "ring": str(F5), "traces_equal": control_traces_equal},
    })
    if not traces_equal:
        report.defects.append("traces differ over F4")
    if dets_equal:
        report.defects.append("determinant data coincide over F4")
    if not semisimple or conjugate:
        report.defects.append("representations are not semisimple and non-conjugate")
    if control_traces_equal:
        report.defects.append("control over F5 has equal traces")
    return report


def taylor_verdict_for(D: Determinant):
    """Convenience: bridge to a trace function and run the identity check."""
    return is_taylor_pc(taylor_bridge(D))
