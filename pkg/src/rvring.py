"""The graded ring R_V generated by the reciprocals 1/v of nonzero vectors.

Coordinates are X_1..X_r and V_i = span(X_1..X_i).  The element
f_i = sum_{u in V_{i-1}} 1/(X_i + u) and the sets Delta_i, E_i give the
free-module structure used to build explicit bases of the pieces R_{V,-n}.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, binomial, expand_func, symbols

from config import DEFAULT_SEED
from src.errors import ConsistencyError
from src.gfq import FieldDesc
from src.graded import GradedSpan, monomials
from src.linalg import Vec, nonzero_vectors, unit_vector, vec_add, vec_sub
from src.ratfun import LinFrac

logger = logging.getLogger(__name__)

_T = symbols("T")


def subset_weights(r: int, q: int, s: int) -> int:
    """sum over s-subsets I of {2..r} of q^{sum(i-1)}."""
    return sum(q ** sum(i - 1 for i in I) for I in itertools.combinations(range(2, r + 1), s))


def poly_binomial(t: int, k: int) -> Fraction:
    """C(t, k) as the polynomial t(t-1)...(t-k+1)/k!, valid for every integer t."""
    return Fraction(prod(t - j for j in range(k)), prod(range(1, k + 1)))


def hilbert_h(r: int, q: int, n: int) -> int:
    """dim R_{V,-n}; zero for n < 0."""
    if n < 0:
        return 0
    return sum(subset_weights(r, q, s) * comb(n, s) for s in range(r))


def hilbert_value(r: int, q: int, t: int) -> Fraction:
    """Value of the polynomial h_r(T) at any integer t."""
    return sum((subset_weights(r, q, s) * poly_binomial(t, s) for s in range(r)), Fraction(0))


@lru_cache(maxsize=None)
def hilbert_polynomial(r: int, q: int) -> Tuple[Fraction, ...]:
    """Coefficients of h_r(T), constant term first."""
    expr = sum(subset_weights(r, q, s) * expand_func(binomial(_T, s)) for s in range(r))
    coeffs = Poly(expr, _T).all_coeffs()[::-1]
    return tuple(Fraction(int(c.p), int(c.q)) for c in coeffs)


def a_rs(r: int, q: int, s: int) -> int:
    """sum over s-subsets I of {2..r} of prod (q^{i-1} - 1)."""
    if not 0 <= s <= r - 1:
        raise ValueError(f"s must lie in 0..{r - 1}, got {s}")
    return sum(prod(q ** (i - 1) - 1 for i in I) for I in itertools.combinations(range(2, r + 1), s))


def coh_dim(i: int, n: int, r: int, q: int) -> int:
    """dim H^i(Q_V, O(n))."""
    if not 0 <= i <= r - 1:
        raise ValueError(f"cohomological degree must lie in 0..{r - 1}, got {i}")
    if i == 0 and n >= 0:
        return hilbert_h(r, q, n)
    if i == r - 1 and n < 0:
        value = hilbert_value(r, q, n)
        if value.denominator != 1:
            raise ConsistencyError(f"h_{r}({n}) is not an integer")
        return abs(int(value))
    return 0


def cohomology_identity(r: int, q: int, n: int) -> Tuple[int, int]:
    """(sum_s a_{r,s} C(r-1+n-s, r-1), h_r(n)); the two agree for n >= 0."""
    lhs = sum(a_rs(r, q, s) * comb(r - 1 + n - s, r - 1) for s in range(r) if r - 1 + n - s >= 0)
    return lhs, hilbert_h(r, q, n)


@dataclass(frozen=True)
class RelationResidue:
    family: int
    vectors: Tuple[Vec, ...]
    scalar: int
    residual: LinFrac

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()


class RVRing:
    """R_V for V = F_q^r with the coordinate flag V_0 < V_1 < ... < V_r."""

    def __init__(self, field: FieldDesc, r: int, seed: int = DEFAULT_SEED):
        if r < 1:
            raise ValueError(f"rank must be >= 1, got {r}")
        self.field = field
        self.q = field.q
        self.r = r
        self.seed = seed
        self._f: Dict[int, LinFrac] = {}
        self._bases: Dict[Tuple[int, str], GradedSpan] = {}
        logger.info(f"Initialized R_V with r={r} over F_{self.q}")

    # generators -------------------------------------------------------

    def flag_vectors(self, i: int) -> List[Vec]:
        """All vectors of V_i in canonical order."""
        return [tuple(u) + (0,) * (self.r - i)
                for u in itertools.product(self.field.elements(), repeat=i)]

    def gen_recip(self, v: Sequence[int]) -> LinFrac:
        if not any(v):
            raise ValueError("1/v needs a nonzero vector")
        return LinFrac.reciprocal(self.field, v)

    def shifted(self, i: int, u: Sequence[int]) -> Vec:
        """X_i + u."""
        return vec_add(self.field, unit_vector(self.r, i - 1), u)

    def _check_index(self, i: int):
        if not 1 <= i <= self.r:
            raise ValueError(f"index must lie in 1..{self.r}, got {i}")

    def f_elem(self, i: int) -> LinFrac:
        self._check_index(i)
        if i not in self._f:
            self._f[i] = LinFrac.sum(self.gen_recip(self.shifted(i, u)) for u in self.flag_vectors(i - 1))
        return self._f[i]

    def e_set(self, i: int) -> List[LinFrac]:
        self._check_index(i)
        return [self.gen_recip(self.shifted(i, u)) for u in self.flag_vectors(i - 1)]

    def delta_set(self, i: int) -> List[LinFrac]:
        self._check_index(i)
        one = LinFrac.one(self.field, self.r)
        return [one] + [self.gen_recip(self.shifted(i, u)) for u in self.flag_vectors(i - 1) if any(u)]

    def hilbert_h(self, n: int) -> int:
        return hilbert_h(self.r, self.q, n)

    # graded pieces ----------------------------------------------------

    def _atoms(self) -> Tuple[List[LinFrac], Dict[int, int], Dict[Tuple[int, Vec], int]]:
        """Atoms f_1..f_r followed by 1/(X_i+u) for i >= 2 and u in V_{i-1}."""
        atoms = [self.f_elem(i) for i in range(1, self.r + 1)]
        f_index = {i: i - 1 for i in range(1, self.r + 1)}
        e_index: Dict[Tuple[int, Vec], int] = {}
        for i in range(2, self.r + 1):
            for u in self.flag_vectors(i - 1):
                e_index[(i, u)] = len(atoms)
                atoms.append(self.gen_recip(self.shifted(i, u)))
        return atoms, f_index, e_index

    def graded_basis(self, n: int, method: str = "auto") -> GradedSpan:
        """Basis of R_{V,-n}: e * f_1^a * prod_{i in I} f_i^{b_i} with e in E_I, I a subset of {2..r}.

        Order: I by size then lexicographically, then e in E_I, then the exponents
        (a, b_i) in descending lexicographic order.
        """
        key = (n, method)
        if key in self._bases:
            return self._bases[key]
        atoms, f_index, e_index = self._atoms()
        words, labels = [], []
        for s in range(self.r):
            for I in itertools.combinations(range(2, self.r + 1), s):
                if n - s < 0:
                    continue
                for us in itertools.product(*[self.flag_vectors(i - 1) for i in I]):
                    e_word = tuple(e_index[(i, u)] for i, u in zip(I, us))
                    for exps in monomials(s + 1, n - s):
                        f_word = []
                        for i, k in zip((1,) + I, exps):
                            f_word.extend([f_index[i]] * k)
                        words.append(e_word + tuple(f_word))
                        labels.append((I, us, exps))
        span = GradedSpan(self.field, self.r, n, atoms, words, labels=labels,
                          method=method, seed=self.seed)
        if len(span) != self.hilbert_h(n):
            raise ConsistencyError(f"basis of R_(-{n}) has {len(span)} elements, expected {self.hilbert_h(n)}")
        self._bases[key] = span
        return span

    def coords_in_basis(self, x: LinFrac, n: int, method: str = "auto") -> Optional[Tuple[int, ...]]:
        """Coordinates of x in graded_basis(n); None when x is not in R_{V,-n}."""
        if n < 0:
            return None
        return self.graded_basis(n, method).solve(x)

    def delta_products(self) -> List[Tuple[Tuple[Vec, ...], List[int]]]:
        """The products delta_1...delta_r as (u-choices, atom words); None entries mean delta_i = 1."""
        _, _, e_index = self._atoms()
        choices = []
        for i in range(1, self.r + 1):
            opts = [None] + [u for u in self.flag_vectors(i - 1) if any(u)]
            choices.append([(i, u) for u in opts])
        out = []
        for combo in itertools.product(*choices):
            us = tuple(u for _, u in combo)
            word = [e_index[(i, u)] for i, u in combo if u is not None]
            out.append((us, word))
        return out

    def freeness_family(self, n: int, method: str = "auto") -> GradedSpan:
        """{delta * m : delta in Delta_1...Delta_r, m an f-monomial} in degree -n."""
        atoms, f_index, _ = self._atoms()
        words, labels = [], []
        for us, word in self.delta_products():
            d = len(word)
            if n - d < 0:
                continue
            for exps in monomials(self.r, n - d):
                f_word = []
                for i, k in enumerate(exps, start=1):
                    f_word.extend([f_index[i]] * k)
                words.append(tuple(word) + tuple(f_word))
                labels.append((us, exps))
        return GradedSpan(self.field, self.r, n, atoms, words, labels=labels, method=method, seed=self.seed)

    def freeness_check(self, n_max: int, method: str = "auto") -> List[Dict]:
        rows = []
        for n in range(n_max + 1):
            family = self.freeness_family(n, method)
            rk = family.rank()
            h = self.hilbert_h(n)
            rows.append({"n": n, "size": len(family), "rank": rk, "h": h,
                         "ok": rk == h == len(family)})
            logger.debug(f"freeness n={n}: size={len(family)} rank={rk} h={h}")
        return rows

    def u_invariant_monomials(self, n: int, method: str = "auto") -> GradedSpan:
        """The f-monomials of degree -n, a basis of the U_r-invariants."""
        atoms = [self.f_elem(i) for i in range(1, self.r + 1)]
        words, labels = [], []
        for exps in monomials(self.r, n):
            word = []
            for i, k in enumerate(exps):
                word.extend([i] * k)
            words.append(tuple(word))
            labels.append(exps)
        return GradedSpan(self.field, self.r, n, atoms, words, labels=labels, method=method, seed=self.seed)

    def reciprocals_span(self, method: str = "auto") -> GradedSpan:
        """{1/v : v projective representative} inside R_{V,-1}."""
        reps = [v for v in nonzero_vectors(self.r, self.field) if next(a for a in v if a) == 1]
        return GradedSpan.from_elements(self.field, self.r, 1, [self.gen_recip(v) for v in reps],
                                        labels=reps, method=method, seed=self.seed)

    # relations --------------------------------------------------------

    def relation_residues(self, families: Sequence[int] = (1, 2, 3)) -> List[RelationResidue]:
        """Images of the generators of a_V under Y_v -> 1/v (family 3 is the difference form)."""
        f = self.field
        vecs = nonzero_vectors(self.r, f)
        out: List[RelationResidue] = []
        if 1 in families:
            for v in vecs:
                for alpha in f.nonzero():
                    if alpha == 1:
                        continue
                    av = tuple(f.mul(alpha, a) for a in v)
                    res = self.gen_recip(av) - self.gen_recip(v).scale(f.inv(alpha))
                    out.append(RelationResidue(1, (v,), alpha, res))
        if 2 in families or 3 in families:
            for v, w in itertools.combinations_with_replacement(vecs, 2):
                rv, rw = self.gen_recip(v), self.gen_recip(w)
                if 2 in families:
                    s = vec_add(f, v, w)
                    if any(s):
                        res = rv * rw - self.gen_recip(s) * (rv + rw)
                        out.append(RelationResidue(2, (v, w), 1, res))
                if 3 in families:
                    d = vec_sub(f, v, w)
                    if any(d):
                        res = rv * rw - self.gen_recip(d) * (rw - rv)
                        out.append(RelationResidue(3, (v, w), 1, res))
        bad = sum(1 for x in out if not x.ok)
        logger.info(f"Checked {len(out)} relation residues for r={self.r}, q={self.q}: {bad} nonzero")
        return out

    def coh_table(self, n_range: Sequence[int]) -> List[Dict]:
        return [{"i": i, "n": n, "dim": coh_dim(i, n, self.r, self.q)}
                for n in n_range for i in range(self.r)]
