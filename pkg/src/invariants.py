"""Group actions on R_V and S_V, Dickson invariants and invariant dimensions.

The unipotent dimension formula counts |H \\ G / L_s| through H-orbits on
ordered s-frames, since G/L_s is the set of frames (g X_1, ..., g X_s).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint

from config import DEFAULT_SEED, MAX_GROUP_ORDER
from src.errors import ConsistencyError, InfeasibleError, NotUnipotentError
from src.gfq import FieldDesc
from src.linalg import (GroupElem, all_vectors, count_orbits_on_frames, double_cosets, frames,
                        generating_set, gl_order, group_elements, index_P_UL, projective_reps,
                        small_generators)
from src.ratfun import LinFrac, MPoly
from src.rvring import RVRing, poly_binomial

logger = logging.getLogger(__name__)

INVARIANT_GROUPS = {"G": "GL", "G'": "SL", "U": "U"}
WEIGHT_CASES = ("a", "b", "c", "d", "e", "f")


# ----------------------------------------------------------------------
# averaging operators

def reynolds_sum(H: Sequence[GroupElem], x: LinFrac) -> LinFrac:
    """sum over sigma in H of sigma(x)."""
    return LinFrac.sum((x.act(g) for g in H), field=x.field, nvars=x.nvars)


def m_operator(ring: RVRing, x: LinFrac) -> LinFrac:
    """M_r = sum over W_r."""
    return reynolds_sum(group_elements("W", ring.r, ring.field), x)


def n_operator(ring: RVRing, x: LinFrac) -> LinFrac:
    """N_r = sum over U_r."""
    return reynolds_sum(group_elements("U", ring.r, ring.field), x)


# ----------------------------------------------------------------------
# invariant dimensions

def is_unipotent(H: Sequence[GroupElem]) -> bool:
    return all(g.has_p_power_order() for g in H)


def invariant_dim_bruteforce(ring: RVRing, H: Sequence[GroupElem], n: int,
                             method: str = "auto", gens: Optional[Sequence[GroupElem]] = None) -> int:
    """dim of the H-fixed subspace of R_{V,-n}, from the graded basis."""
    if n < 0:
        return 0
    gens = list(gens) if gens is not None else generating_set(H)
    return ring.graded_basis(n, method).fixed_space_dim(gens)


def parabolic_index(r: int, q: int, s: int) -> int:
    """[P_s : U L_s] = prod_{i=1}^s (q^i - 1)."""
    return prod(q ** i - 1 for i in range(1, s + 1))


def unipotent_dim_formula(H: Sequence[GroupElem], n: int, r: int, field: FieldDesc,
                          cap: int = MAX_GROUP_ORDER) -> int:
    """sum_s |H\\G/L_s| / [P_s:UL_s] * C(n-1, s-1), with polynomial binomials."""
    if not is_unipotent(H):
        raise NotUnipotentError("subgroup contains an element whose order is not a power of p")
    q = field.q
    if gl_order(r, q) > cap:
        raise InfeasibleError(f"GL_{r}(F_{q}) exceeds the group order cap {cap}")
    total = Fraction(0)
    for s in range(1, r + 1):
        cosets = count_orbits_on_frames(H, r, field, s)
        index = parabolic_index(r, q, s)
        if cosets % index:
            raise ConsistencyError(f"|H\\G/L_{s}| = {cosets} is not divisible by {index}")
        total += (cosets // index) * poly_binomial(n - 1, s - 1)
    if total.denominator != 1:
        raise ConsistencyError(f"unipotent formula gave the non-integer {total}")
    return int(total)


def coset_check(r: int, field: FieldDesc, cap: int = MAX_GROUP_ORDER) -> List[Dict]:
    """Per s: the parabolic index by enumeration, and U-orbits on frames against U\\G/L_s."""
    q = field.q
    G = group_elements("GL", r, field, cap=cap)
    U = group_elements("U", r, field)
    rows = []
    for s in range(1, r + 1):
        L = group_elements("L", r, field, s)
        index = index_P_UL(r, field, s)
        orbits = count_orbits_on_frames(U, r, field, s)
        cosets = double_cosets(U, G, L)
        n_frames = len(frames(r, field, s))
        rows.append({"s": s, "index": index, "orbits": orbits, "double_cosets": cosets,
                     "ok": index == parabolic_index(r, q, s) and orbits == cosets
                     and n_frames * len(L) == len(G)})
    return rows


def weighted_monomial_count(weights: Sequence[int], n: int) -> int:
    """#{m : sum m_i w_i = n}."""
    if n < 0:
        return 0
    counts = [1] + [0] * n
    for w in weights:
        for t in range(w, n + 1):
            counts[t] += counts[t - w]
    return counts[n]


def invariant_generator_weights(which: str, r: int, q: int) -> List[int]:
    """Degrees (in -n) of the free generators of R_V^H for H = G, G' or U."""
    if which == "G":
        return [q ** i - 1 for i in range(1, r + 1)]
    if which == "G'":
        return [q ** i - 1 for i in range(1, r)] + [(q ** r - 1) // (q - 1)]
    if which == "U":
        return [1] * r
    raise ValueError(f"unknown invariant group {which!r}")


def invariant_hilbert_check(ring: RVRing, which: str, n_max: int,
                            method: str = "auto") -> List[Dict]:
    """Brute-force dim (R_{V,-n})^H against the count of monomials in the free generators."""
    kind = INVARIANT_GROUPS[which]
    gens = small_generators(kind, ring.r, ring.field, seed=ring.seed)
    weights = invariant_generator_weights(which, ring.r, ring.q)
    rows = []
    for n in range(n_max + 1):
        brute = ring.graded_basis(n, method).fixed_space_dim(gens)
        expected = weighted_monomial_count(weights, n)
        rows.append({"group": which, "n": n, "bruteforce": brute, "monomials": expected,
                     "ok": brute == expected})
        logger.debug(f"{which}-invariants n={n}: brute={brute} monomials={expected}")
    return rows


def invariant_rings_table(ring: RVRing, n_max: int, method: str = "auto") -> List[Dict]:
    rows = []
    for which in INVARIANT_GROUPS:
        rows.extend(invariant_hilbert_check(ring, which, n_max, method))
    return rows


# ----------------------------------------------------------------------
# Dickson invariants

@dataclass
class DicksonData:
    r: int
    field: FieldDesc
    k: List[MPoly]          # k_0..k_{r-1}
    g: List[MPoly]          # g_1..g_r
    k0_prime: MPoly
    k_of_T: MPoly           # k(T) in variables X_1..X_r, T


def _restrict_T(p: MPoly, power: int, r: int) -> MPoly:
    """Coefficient of T^power in a polynomial in X_1..X_r, T."""
    return MPoly(p.field, r, {e[:r]: c for e, c in p.terms.items() if e[r] == power})


def dickson(r: int, field: FieldDesc) -> DicksonData:
    """Expand k(T) = prod_{v in V}(T - v) and read off k_i; also g_i and k'_0."""
    f = field
    q = f.q
    T = MPoly.variable(f, r + 1, r)
    kT = MPoly.one(f, r + 1)
    for v in all_vectors(r, f):
        kT = kT * (T - MPoly.linear(f, tuple(v) + (0,)))
    powers = {q ** i for i in range(r + 1)}
    stray = [e for e in kT.terms if e[r] not in powers]
    if stray:
        raise ConsistencyError(f"k(T) has terms outside the q-power degrees: {stray[:3]}")
    k = [_restrict_T(kT, q ** i, r) for i in range(r)]
    if _restrict_T(kT, q ** r, r) != MPoly.one(f, r):
        raise ConsistencyError("k(T) is not monic")

    g = []
    for i in range(1, r + 1):
        gi = MPoly.one(f, r)
        for u in all_vectors(i - 1, f):
            gi = gi * MPoly.linear(f, tuple(1 if j == i - 1 else (u[j] if j < i - 1 else 0)
                                            for j in range(r)))
        g.append(gi)

    k0p = MPoly.one(f, r)
    for v in projective_reps(r, f):
        k0p = k0p * MPoly.linear(f, v)
    logger.info(f"Expanded Dickson polynomial for r={r}, q={q} with {len(kT.terms)} terms")
    return DicksonData(r, f, k, g, k0p, kT)


def dickson_recursive(r: int, field: FieldDesc) -> MPoly:
    """k_{V_i}(T) = k_{V_{i-1}}(T)^q - k_{V_{i-1}}(X_i)^{q-1} k_{V_{i-1}}(T), as a polynomial in X, T."""
    f = field
    q = f.q
    variables = [MPoly.variable(f, r + 1, j) for j in range(r + 1)]
    P = variables[r]
    for i in range(r):
        at_Xi = P.substitute(variables[:r] + [variables[i]])
        P = P ** q - (at_Xi ** (q - 1)) * P
    return P


def k0_constant(data: DicksonData) -> int:
    """The scalar c with k_0 = c * k'_0^(q-1), as observed."""
    f = data.field
    power = data.k0_prime ** (f.q - 1)
    exp, lead = power.sorted_terms()[0]
    c = f.div(data.k[0].coefficient(exp), lead)
    if data.k[0] != power.scale(c):
        raise ConsistencyError("k_0 is not a scalar multiple of k'_0^(q-1)")
    return c


def dickson_invariance(data: DicksonData, seed: int = DEFAULT_SEED) -> List[Dict]:
    """Check k_i under GL generators, g_i under U generators and k'_0 under SL generators."""
    f, r = data.field, data.r
    rows = []
    cases = [("GL", [(f"k_{i}", p) for i, p in enumerate(data.k)]),
             ("U", [(f"g_{i}", p) for i, p in enumerate(data.g, start=1)]),
             ("SL", [("k'_0", data.k0_prime)])]
    for kind, named in cases:
        gens = small_generators(kind, r, f, seed=seed)
        for label, p in named:
            ok = all(p.act(gen) == p for gen in gens)
            rows.append({"element": label, "group": kind, "ok": ok})
    return rows


class UniPolyOverK:
    """Univariate polynomial in T with LinFrac coefficients (constant term first)."""

    def __init__(self, coeffs: Sequence[LinFrac]):
        self.coeffs = list(coeffs)

    @classmethod
    def one(cls, field: FieldDesc, nvars: int) -> "UniPolyOverK":
        return cls([LinFrac.one(field, nvars)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def times_linear(self, c: LinFrac) -> "UniPolyOverK":
        """self * (T - c)."""
        zero = LinFrac.zero(c.field, c.nvars)
        out = []
        for i in range(len(self.coeffs) + 1):
            low = self.coeffs[i - 1] if i >= 1 else zero
            here = self.coeffs[i] * c if i < len(self.coeffs) else zero
            out.append(low - here)
        return UniPolyOverK(out)

    def evaluate(self, x: LinFrac) -> LinFrac:
        out = LinFrac.zero(x.field, x.nvars)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out


def h_invariants(r: int, field: FieldDesc, data: Optional[DicksonData] = None) -> List[LinFrac]:
    """h_i = k_i / k_0 for 1 <= i < r and h_r = 1 / k_0."""
    data = data or dickson(r, field)
    k0 = LinFrac.from_poly(data.k[0])
    out = [LinFrac.from_poly(data.k[i]) / k0 for i in range(1, r)]
    out.append(LinFrac.one(field, r) / k0)
    return out


def h_polynomial(ring: RVRing) -> UniPolyOverK:
    """prod over v in V minus 0 of (T - 1/v)."""
    poly = UniPolyOverK.one(ring.field, ring.r)
    for v in all_vectors(ring.r, ring.field):
        if any(v):
            poly = poly.times_linear(ring.gen_recip(v))
    return poly


def h_polynomial_check(ring: RVRing, certify_membership: bool = True) -> List[Dict]:
    """Coefficient identity for h(T), roots 1/v, and membership h_i in R_V."""
    f, r, q = ring.field, ring.r, ring.q
    hs = h_invariants(r, f)
    poly = h_polynomial(ring)
    rows = []
    top = q ** r - 1
    expected: Dict[int, LinFrac] = {top: LinFrac.one(f, r)}
    for i, h in enumerate(hs, start=1):
        expected[q ** r - q ** i] = h
    for power in range(top + 1):
        want = expected.get(power, LinFrac.zero(f, r))
        rows.append({"check": "coefficient", "power": power, "ok": poly.coeffs[power] == want})
    roots_ok = all(poly.evaluate(ring.gen_recip(v)).is_zero()
                   for v in projective_reps(r, f))
    rows.append({"check": "roots", "power": None, "ok": roots_ok})
    if certify_membership:
        for i, h in enumerate(hs, start=1):
            coords = ring.coords_in_basis(h, q ** i - 1)
            rows.append({"check": f"h_{i} in R_V", "power": q ** i - 1, "ok": coords is not None})
    return rows


# ----------------------------------------------------------------------
# weighted projective spaces

def wp_weights(case: str, r: int, q: int) -> List[int]:
    """Weights of the quotients Q_V/U (a), P_V/U (b), Q_V/G (c), P_V/G (d), Q_V/G' (e), P_V/G' (f)."""
    if case == "a":
        return [1] * r
    if case == "b":
        return [q ** i for i in range(r)]
    if case == "c":
        return [q ** i - 1 for i in range(1, r + 1)]
    if case == "d":
        return [q ** r - q ** i for i in range(r)]
    if case == "e":
        return [q ** i - 1 for i in range(1, r)] + [(q ** r - 1) // (q - 1)]
    if case == "f":
        return [(q ** r - 1) // (q - 1)] + [q ** r - q ** i for i in range(1, r)]
    raise ValueError(f"unknown case {case!r}, expected one of {WEIGHT_CASES}")


def wp_regular(weights: Sequence[int]) -> bool:
    """For every prime l, max ord_l(d_i) is attained at least r-1 times (after removing the common factor)."""
    if not weights or any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    common = 0
    for w in weights:
        common = gcd(common, w)
    reduced = [w // common for w in weights]
    r = len(reduced)
    primes = set()
    for w in reduced:
        primes.update(factorint(w))
    for ell in primes:
        ords = [factorint(w).get(ell, 0) for w in reduced]
        top = max(ords)
        if ords.count(top) < r - 1:
            return False
    return True
