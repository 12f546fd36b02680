"""The ideal I_V of R_V, its free basis over the U-invariants and the trace pairing.

I_V is generated by the fractions 1/(v_0 ... v_r) whose vectors are in general
position.  As a module over F_q[f_1, ..., f_r] it is free on the products
hat_1 ... hat_r with hat_i taken from

    hatDelta_i = {f_i/X_i} + {1/(X_i+u) - 1/X_i : u nonzero in V_{i-1}},

which are paired against Delta_1 ... Delta_r by N_r(delta * hat') = f_1^2 ... f_r^2
when delta and delta' correspond and 0 otherwise.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, symbols

from config import DEFAULT_SEED, MAX_BRUTE_FORCE
from src.errors import InfeasibleError, NonHomogeneousError
from src.gfq import FieldDesc
from src.graded import GradedSpan, monomials
from src.linalg import Vec, nonzero_vectors, projective_reps, rank, unit_vector
from src.ratfun import LinFrac
from src.rvring import RVRing
from src.invariants import m_operator, n_operator

logger = logging.getLogger(__name__)

_x = symbols("x")


@dataclass(frozen=True)
class IVGenerator:
    """1/(v_0 ... v_r) for r+1 vectors any r of which are independent."""
    field: FieldDesc
    vectors: Tuple[Vec, ...]

    @property
    def r(self) -> int:
        return len(self.vectors) - 1

    @property
    def degree(self) -> int:
        return -len(self.vectors)

    @property
    def fraction(self) -> LinFrac:
        out = LinFrac.one(self.field, self.r)
        for v in self.vectors:
            out = out * LinFrac.reciprocal(self.field, v)
        return out

    def is_admissible(self) -> bool:
        r = self.r
        return all(rank(list(sub), self.field) == r
                   for sub in itertools.combinations(self.vectors, r))

    def to_text(self) -> str:
        return "1/(" + " * ".join("(" + ",".join(str(a) for a in v) + ")" for v in self.vectors) + ")"


def iv_generators(r: int, field: FieldDesc, dedupe: bool = True,
                  cap: int = MAX_BRUTE_FORCE) -> List[IVGenerator]:
    """Admissible generator tuples.

    With `dedupe` the tuples are taken up to scaling of each vector and permutation,
    i.e. as multisets of projective representatives.
    """
    if dedupe:
        pool = projective_reps(r, field)
        candidates = itertools.combinations_with_replacement(pool, r + 1)
        total = comb(len(pool) + r, r + 1)
    else:
        pool = nonzero_vectors(r, field)
        candidates = itertools.product(pool, repeat=r + 1)
        total = len(pool) ** (r + 1)
    if total > cap:
        raise InfeasibleError(f"{total} candidate tuples exceed the brute-force cap {cap}")
    out = []
    for vecs in candidates:
        gen = IVGenerator(field, tuple(vecs))
        if gen.is_admissible():
            out.append(gen)
    logger.info(f"I_V generators r={r} q={field.q} dedupe={dedupe}: {len(out)} of {total}")
    return out


def hat_of(ring: RVRing, i: int, u: Optional[Sequence[int]]) -> LinFrac:
    """Image of delta in Delta_i: 1 -> f_i/X_i and 1/(X_i+u) -> 1/(X_i+u) - 1/X_i."""
    x_i = ring.gen_recip(unit_vector(ring.r, i - 1))
    if u is None:
        return ring.f_elem(i) * x_i
    return ring.gen_recip(ring.shifted(i, u)) - x_i


def hat_bijection(ring: RVRing, i: int) -> List[Tuple[LinFrac, LinFrac]]:
    """Pairs (delta, hat(delta)) in the order of ring.delta_set(i)."""
    deltas = ring.delta_set(i)
    us = [None] + [u for u in ring.flag_vectors(i - 1) if any(u)]
    return [(d, hat_of(ring, i, u)) for d, u in zip(deltas, us)]


def hat_delta_set(ring: RVRing, i: int) -> List[LinFrac]:
    return [h for _, h in hat_bijection(ring, i)]


def iv_dim_formula(r: int, q: int, n: int) -> int:
    """dim I_{V,-n} read off the degrees of the hat-products.

    hatDelta_i holds one element of degree -2 and q^{i-1}-1 of degree -1, so the
    products of degree -(r+t) are counted by the x^t coefficient of
    prod_i (x + q^{i-1} - 1).
    """
    counts = Poly(prod(_x + (q ** (i - 1) - 1) for i in range(1, r + 1)), _x).all_coeffs()[::-1]
    total = 0
    for t, c in enumerate(counts):
        m = n - r - t
        if m >= 0 and c:
            total += int(c) * comb(m + r - 1, r - 1)
    return total


class DualizingIdeal:
    """I_V inside a fixed RVRing, with its hat-product basis in each degree."""

    def __init__(self, ring: RVRing, method: str = "auto"):
        self.ring = ring
        self.method = method
        self._spans: Dict[int, GradedSpan] = {}

    def _hat_atoms(self) -> Tuple[List[LinFrac], Dict[Tuple[int, Optional[Vec]], int]]:
        ring = self.ring
        atoms = [ring.f_elem(i) for i in range(1, ring.r + 1)]
        index: Dict[Tuple[int, Optional[Vec]], int] = {}
        for i in range(1, ring.r + 1):
            for u in [None] + [u for u in ring.flag_vectors(i - 1) if any(u)]:
                index[(i, u)] = len(atoms)
                atoms.append(hat_of(ring, i, u))
        return atoms, index

    def hat_products(self) -> List[Tuple[Tuple[Optional[Vec], ...], List[int]]]:
        """(u-choices, atom word) for every product hat_1 ... hat_r; None marks f_i/X_i."""
        ring = self.ring
        _, index = self._hat_atoms()
        choices = [[None] + [u for u in ring.flag_vectors(i - 1) if any(u)]
                   for i in range(1, ring.r + 1)]
        return [(us, [index[(i, u)] for i, u in enumerate(us, start=1)])
                for us in itertools.product(*choices)]

    def basis_span(self, n: int) -> GradedSpan:
        """{hat * m : hat a hat-product, m an f-monomial} in degree -n."""
        if n in self._spans:
            return self._spans[n]
        ring = self.ring
        atoms, _ = self._hat_atoms()
        words, labels = [], []
        for us, word in self.hat_products():
            t = sum(1 for u in us if u is None)
            m = n - ring.r - t
            if m < 0:
                continue
            for exps in monomials(ring.r, m):
                f_word = []
                for i, k in enumerate(exps):
                    f_word.extend([i] * k)
                words.append(tuple(word) + tuple(f_word))
                labels.append((us, exps))
        span = GradedSpan(ring.field, ring.r, n, atoms, words, labels=labels,
                          method=self.method, seed=ring.seed)
        self._spans[n] = span
        return span

    def membership(self, x: LinFrac, n: int) -> Optional[Tuple[int, ...]]:
        """Coordinates of x over basis_span(n), or None when x is not in I_{V,-n}."""
        if not x.is_zero():
            deg = x.degree()
            if deg is None:
                raise NonHomogeneousError(f"{x.to_text()} is not homogeneous")
            if deg != -n:
                return None
        if n < self.ring.r + 1:
            return None if not x.is_zero() else ()
        return self.basis_span(n).solve(x)

    def dim_generators(self, n: int, gens: Optional[Sequence[IVGenerator]] = None) -> int:
        """Rank of {generator * b : b in the R_V basis of degree -(n-r-1)}."""
        ring = self.ring
        m = n - ring.r - 1
        if m < 0:
            return 0
        gens = list(gens) if gens is not None else iv_generators(ring.r, ring.field)
        base = ring.graded_basis(m, self.method)
        atoms = list(base.atoms) + [g.fraction for g in gens]
        offset = len(base.atoms)
        words = [tuple(w) + (offset + j,) for j in range(len(gens)) for w in base.words]
        span = GradedSpan(ring.field, ring.r, n, atoms, words, method=self.method, seed=ring.seed)
        return span.rank()


def iv_membership(ring: RVRing, x: LinFrac, n: int, method: str = "auto") -> Optional[Tuple[int, ...]]:
    return DualizingIdeal(ring, method).membership(x, n)


def iv_dim_generators(ring: RVRing, n: int, method: str = "auto") -> int:
    return DualizingIdeal(ring, method).dim_generators(n)


def iv_dimension_check(ring: RVRing, n_max: int, method: str = "auto") -> List[Dict]:
    """dim I_{V,-n} three ways: hat-basis rank, generator multiples, degree count."""
    ideal = DualizingIdeal(ring, method)
    gens = iv_generators(ring.r, ring.field)
    rows = []
    for n in range(ring.r + 1, n_max + 1):
        span = ideal.basis_span(n)
        basis_rank = span.rank()
        from_gens = ideal.dim_generators(n, gens)
        formula = iv_dim_formula(ring.r, ring.q, n)
        rows.append({"n": n, "basis_size": len(span), "basis_rank": basis_rank,
                     "generators": from_gens, "formula": formula,
                     "ok": basis_rank == len(span) == from_gens == formula})
        logger.debug(f"I_V n={n}: basis {basis_rank}/{len(span)} generators {from_gens} formula {formula}")
    return rows


def _scalar_of(x: LinFrac, target: LinFrac, n: int, field: FieldDesc, r: int,
               seed: int) -> Optional[int]:
    """c with x = c * target, or None when x is not a multiple of target."""
    if x.is_zero():
        return 0
    if x.degree() != -n:
        return None
    coeffs = GradedSpan.from_elements(field, r, n, [target], seed=seed).solve(x)
    return coeffs[0] if coeffs is not None else None


def pairing_table(ring: RVRing) -> Dict:
    """[N_r(delta * hat(delta'))] as multiples of f_1^2 ... f_r^2."""
    ideal = DualizingIdeal(ring)
    deltas = ring.delta_products()
    hats = ideal.hat_products()
    size = len(deltas)
    if size * size * ring.q ** (ring.r * (ring.r - 1) // 2) > MAX_BRUTE_FORCE:
        raise InfeasibleError(f"pairing table with {size}x{size} entries exceeds the brute-force cap")
    atoms, _, _ = ring._atoms()
    hat_atoms, _ = ideal._hat_atoms()
    target = LinFrac.one(ring.field, ring.r)
    for i in range(1, ring.r + 1):
        target = target * ring.f_elem(i) ** 2

    def product(word, pool) -> LinFrac:
        out = LinFrac.one(ring.field, ring.r)
        for a in word:
            out = out * pool[a]
        return out

    table = np.zeros((size, size), dtype=object)
    for a, (_, dword) in enumerate(deltas):
        delta = product(dword, atoms)
        for b, (_, hword) in enumerate(hats):
            value = n_operator(ring, delta * product(hword, hat_atoms))
            table[a, b] = _scalar_of(value, target, 2 * ring.r, ring.field, ring.r, ring.seed)
    ok = all(table[a, b] == (1 if a == b else 0) for a in range(size) for b in range(size))
    logger.info(f"Pairing table r={ring.r} q={ring.q}: {size}x{size}, identity={ok}")
    return {"labels": [us for us, _ in deltas], "table": table, "ok": ok}


def mr_orthogonality(ring: RVRing) -> List[Dict]:
    """M_r(delta * hat(delta')) for delta, delta' in Delta_r, as multiples of f_r^2."""
    r = ring.r
    pairs = hat_bijection(ring, r)
    target = ring.f_elem(r) ** 2
    rows = []
    for a, (delta, _) in enumerate(pairs):
        for b, (_, hat) in enumerate(pairs):
            value = m_operator(ring, delta * hat)
            scalar = _scalar_of(value, target, 2, ring.field, r, ring.seed)
            expected = 1 if a == b else 0
            rows.append({"delta": a, "hat": b, "scalar": scalar, "expected": expected,
                         "ok": scalar == expected})
    return rows


def ideal_closure_check(ring: RVRing, samples: int = 20, seed: int = DEFAULT_SEED,
                        method: str = "auto") -> List[Dict]:
    """Random generator times random 1/v stays in I_V."""
    ideal = DualizingIdeal(ring, method)
    gens = iv_generators(ring.r, ring.field)
    vecs = nonzero_vectors(ring.r, ring.field)
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(samples):
        gen = gens[int(rng.integers(len(gens)))]
        v = vecs[int(rng.integers(len(vecs)))]
        x = gen.fraction * ring.gen_recip(v)
        coords = ideal.membership(x, ring.r + 2)
        rows.append({"generator": gen.to_text(), "v": v, "ok": coords is not None})
    return rows
