"""Exact linear algebra inside one graded piece R_{V,-n}.

A `GradedSpan` holds a family of homogeneous elements, each a product of "atoms"
(LinFracs such as f_i or 1/(X_i+u)).  Two ways of turning elements into vectors:

* numerator: multiply by the common denominator D_n = prod over projective l of l^n
  and read coefficients over the monomials of the resulting degree;
* evaluation: evaluate at points of Omega_V(k) for an extension k of F_q with
  at least EVAL_FIELD_MIN_SIZE elements.

Full column rank of the evaluation matrix proves independence over F_q, and an
inconsistent system proves non-membership.  Solutions found by evaluation are
checked by exact back-substitution before they are returned.
"""
from __future__ import annotations

import logging
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import (DEFAULT_SEED, EVAL_EXTRA_POINTS, EVAL_FIELD_MIN_SIZE,
                    MAX_GRADED_DIM, NUMERATOR_SUPPORT_CAP)
from src.errors import ConsistencyError, InfeasibleError, NonHomogeneousError
from src.gfq import FieldDesc, embedding, extension, restriction
from src.linalg import GroupElem, projective_reps, rank, solve_many
from src.ratfun import LinFrac, LinForm

logger = logging.getLogger(__name__)

METHODS = ("auto", "numerator", "evaluation")


def evaluation_field(field: FieldDesc, min_size: int = EVAL_FIELD_MIN_SIZE) -> FieldDesc:
    m = 1
    while field.q ** m < min_size:
        m += 1
    return extension(field, m)


def omega_sample(field: FieldDesc, ext: FieldDesc, r: int, count: int,
                 rng: np.random.Generator) -> np.ndarray:
    """`count` random points of k^r at which no F_q-rational linear form vanishes."""
    forms = np.array(projective_reps(r, field), dtype=np.int64)
    table = np.array(embedding(field, ext), dtype=np.int64)
    forms_k = table[forms]
    chosen: List[np.ndarray] = []
    have = 0
    while have < count:
        batch = rng.integers(0, ext.q, size=(2 * count + 8, r), dtype=np.int64)
        ok = np.ones(batch.shape[0], dtype=bool)
        for ell in forms_k:
            value = np.zeros(batch.shape[0], dtype=np.int64)
            for i, c in enumerate(ell):
                if c:
                    value = ext.vadd(value, ext.vmul(batch[:, i], c))
            ok &= value != 0
        good = batch[ok]
        chosen.append(good)
        have += good.shape[0]
    return np.vstack(chosen)[:count]


def transform_points(points: np.ndarray, g: GroupElem, ext: FieldDesc) -> np.ndarray:
    """Rows x -> M^T x, so that (g.F)(x) = F(M^T x)."""
    table = embedding(g.field, ext)
    r = g.r
    out = np.zeros_like(points)
    for i in range(r):
        col = np.zeros(points.shape[0], dtype=np.int64)
        for j in range(r):
            c = table[g.matrix[j][i]]
            if c:
                col = ext.vadd(col, ext.vmul(points[:, j], c))
        out[:, i] = col
    return out


def monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    """Exponent tuples of the given total degree, grlex-descending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


class GradedSpan:
    """A family of elements of R_{V,-n} with exact rank, solve and group-matrix operations."""

    def __init__(self, field: FieldDesc, r: int, n: int, atoms: Sequence[LinFrac],
                 words: Sequence[Tuple[int, ...]], labels: Optional[Sequence] = None,
                 method: str = "auto", seed: int = DEFAULT_SEED, cap: int = MAX_GRADED_DIM):
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
        if len(words) > cap:
            raise InfeasibleError(f"graded family of size {len(words)} exceeds the cap {cap}")
        self.field = field
        self.r = r
        self.n = n
        self.atoms = list(atoms)
        self.words = [tuple(w) for w in words]
        self.labels = list(labels) if labels is not None else list(range(len(self.words)))
        self.seed = seed
        self._elements: Dict[int, LinFrac] = {}
        self._matrices: Dict[GroupElem, np.ndarray] = {}

        self.numerator_degree = len(projective_reps(r, field)) * n - n
        self.support_size = comb(self.numerator_degree + r - 1, r - 1) if r else 1
        if method == "auto":
            method = "numerator" if self.support_size <= NUMERATOR_SUPPORT_CAP else "evaluation"
        self.method = method

        if method == "evaluation":
            self.work = evaluation_field(field)
            rng = np.random.default_rng(seed)
            self.points = omega_sample(field, self.work, r, len(self.words) + EVAL_EXTRA_POINTS, rng)
            self._back = restriction(field, self.work)
        else:
            self.work = field
            self.points = None
            self._common = {LinForm(v): n for v in projective_reps(r, field)}
            self._support = {e: i for i, e in enumerate(monomials(r, self.numerator_degree))}

        self.matrix = self._build_matrix()
        logger.info(f"Graded family n={n} r={r} q={field.q}: {len(self.words)} elements, "
                    f"method={self.method}")

    @classmethod
    def from_elements(cls, field: FieldDesc, r: int, n: int, elements: Sequence[LinFrac],
                      **kwargs) -> "GradedSpan":
        return cls(field, r, n, elements, [(i,) for i in range(len(elements))], **kwargs)

    def __len__(self):
        return len(self.words)

    # element access ---------------------------------------------------

    def element(self, j: int) -> LinFrac:
        if j not in self._elements:
            out = LinFrac.one(self.field, self.r)
            for a in self.words[j]:
                out = out * self.atoms[a]
            self._elements[j] = out
        return self._elements[j]

    def elements(self) -> List[LinFrac]:
        return [self.element(j) for j in range(len(self.words))]

    # vectors ----------------------------------------------------------

    def _numerator_vector(self, x: LinFrac) -> Optional[np.ndarray]:
        vec = np.zeros(len(self._support), dtype=np.int64)
        if x.is_zero():
            return vec
        try:
            num = x.numerator_over(self._common)
        except ValueError:
            return None
        for e, c in num.terms.items():
            idx = self._support.get(e)
            if idx is None:
                return None
            vec[idx] = c
        return vec

    def _atom_values(self, points: np.ndarray) -> List[np.ndarray]:
        return [a.evaluate_many(points, self.work) for a in self.atoms]

    def _word_values(self, atom_values: List[np.ndarray]) -> np.ndarray:
        k = self.work
        N = atom_values[0].shape[0] if atom_values else self.points.shape[0]
        cols = np.ones((N, len(self.words)), dtype=np.int64)
        for j, w in enumerate(self.words):
            col = np.ones(N, dtype=np.int64)
            for a in w:
                col = k.vmul(col, atom_values[a])
            cols[:, j] = col
        return cols

    def _build_matrix(self) -> np.ndarray:
        if not self.words:
            rows = self.points.shape[0] if self.points is not None else len(self._support)
            return np.zeros((rows, 0), dtype=np.int64)
        if self.method == "evaluation":
            return self._word_values(self._atom_values(self.points))
        cols = []
        for j in range(len(self.words)):
            vec = self._numerator_vector(self.element(j))
            if vec is None:
                raise NonHomogeneousError(f"element {self.labels[j]} is not of degree -{self.n}")
            cols.append(vec)
        return np.stack(cols, axis=1)

    def vector(self, x: LinFrac) -> Optional[np.ndarray]:
        """Column vector of x in the working coordinates, or None if x cannot lie in R_{V,-n}."""
        if self.method == "evaluation":
            if not x.is_zero() and any(m > self.n for _, m in x.den):
                return None
            return x.evaluate_many(self.points, self.work)
        return self._numerator_vector(x)

    # linear algebra ---------------------------------------------------

    def rank(self) -> int:
        if not self.words:
            return 0
        return rank(self.matrix, self.work)

    def is_independent(self) -> bool:
        return self.rank() == len(self.words)

    def _to_base(self, values) -> Optional[Tuple[int, ...]]:
        if self.method != "evaluation":
            return tuple(int(v) for v in values)
        out = []
        for v in values:
            b = self._back.get(int(v))
            if b is None:
                return None
            out.append(b)
        return tuple(out)

    def solve(self, x: LinFrac, certify: bool = True) -> Optional[Tuple[int, ...]]:
        """Coordinates c with x = sum c_j element_j, or None when x is not in the span."""
        if not x.is_zero():
            deg = x.degree()
            if deg != -self.n:
                return None
        if not self.words:
            return () if x.is_zero() else None
        vec = self.vector(x)
        if vec is None:
            return None
        X = solve_many(self.matrix, vec.reshape(-1, 1), self.work)
        if X is None:
            return None
        coeffs = self._to_base(X[:, 0])
        if coeffs is None:
            return None
        if certify and self.method == "evaluation":
            combo = LinFrac.sum([self.element(j).scale(c) for j, c in enumerate(coeffs) if c],
                                field=self.field, nvars=self.r)
            if not combo.cross_equal(x):
                raise ConsistencyError(f"evaluation solve for {x.to_text()} failed back-substitution")
        return coeffs

    def matrix_of(self, g: GroupElem) -> np.ndarray:
        """C over F_q with g.element_j = sum_i C[i, j] element_i; needs an independent family."""
        if g in self._matrices:
            return self._matrices[g]
        C = solve_many(self.matrix, self._images(g), self.work)
        if C is None:
            raise ConsistencyError("the family is not stable under the group element")
        C_base = np.zeros_like(C)
        for idx, v in np.ndenumerate(C):
            b = self._to_base([v])
            if b is None:
                raise ConsistencyError("group matrix has entries outside F_q")
            C_base[idx] = b[0]
        self._matrices[g] = C_base
        return C_base

    def _images(self, g: GroupElem) -> np.ndarray:
        """Columns: working coordinates of g.element_j."""
        if self.method == "evaluation":
            moved = self._word_values(self._atom_values(transform_points(self.points, g, self.work)))
        else:
            moved = np.stack([self._numerator_vector(self.element(j).act(g))
                              for j in range(len(self.words))], axis=1)
        return moved

    def moved_matrix(self, g: GroupElem) -> np.ndarray:
        """Columns: working coordinates of g.element_j - element_j."""
        return self.work.vsub(self._images(g), self.matrix)

    def fixed_space_dim(self, gens: Sequence[GroupElem]) -> int:
        """dim of {x in span : g x = x for all g in gens}.

        With the evaluation method the rank of the stacked differences can only drop
        at special points, so the result never undercounts and is exact at generic points.
        """
        size = len(self.words)
        if not size:
            return 0
        if not gens:
            return size
        blocks = [self.moved_matrix(g) for g in gens]
        return size - rank(np.vstack(blocks), self.work)

    def span_dim_of(self, xs: Sequence[LinFrac]) -> int:
        """Rank of an arbitrary list of degree -n elements in the working coordinates."""
        cols = []
        for x in xs:
            v = self.vector(x)
            if v is None:
                raise NonHomogeneousError(f"{x.to_text()} is not in the ambient coordinates")
            cols.append(v)
        if not cols:
            return 0
        return rank(np.stack(cols, axis=1), self.work)
