"""Points of Q_V, P_V and Omega_V over finite extensions k = F_{q^m}.

A k-point of Q_V is a reciprocal map on V minus 0 taken up to scaling by k^x.
Every nonzero reciprocal map is the extension by zero of 1/lambda for an
injective F_q-linear lambda on its support, which gives the stratification of
Q_V by the Omega_{V'}.  The strange maps g_V, f_V pass between reciprocal maps
on V and linear maps on the dual V*, identified with F_q^r through the standard
pairing.
"""
from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SAMPLES, DEFAULT_SEED, MAX_BRUTE_FORCE
from src.errors import ConsistencyError, InfeasibleError, NotReciprocalError
from src.gfq import FieldDesc, embedding
from src.linalg import (Subspace, Vec, all_vectors, gaussian_binomial, nonzero_vectors,
                        normalize, pairing, projective_reps, rank, subspaces, unit_vector)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _rep_index(r: int, field: FieldDesc) -> Tuple[Tuple[Vec, ...], Dict[Vec, int]]:
    reps = tuple(projective_reps(r, field))
    return reps, {v: i for i, v in enumerate(reps)}


def _span_in_k(field: FieldDesc, ext: FieldDesc, images: Sequence[int]) -> set:
    """All F_q-combinations of the given elements of k."""
    table = embedding(field, ext)
    out = {0}
    for x in images:
        multiples = [ext.mul(table[a], x) for a in field.elements()]
        out = {ext.add(y, m) for y in out for m in multiples}
    return out


# ----------------------------------------------------------------------
# linear maps to k

@dataclass(frozen=True)
class LinearMapToK:
    """F_q-linear lambda: F_q^s -> k given by its values on the standard basis."""
    field: FieldDesc
    ext: FieldDesc
    images: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.images)

    def value(self, v: Sequence[int]) -> int:
        table = embedding(self.field, self.ext)
        return self.ext.sum(self.ext.mul(table[a], x) for a, x in zip(v, self.images) if a)

    def is_zero(self) -> bool:
        return not any(self.images)

    def kernel(self) -> Subspace:
        """The F_q-rational vectors on which lambda vanishes."""
        zeros = [v for v in nonzero_vectors(self.dim, self.field) if self.value(v) == 0]
        ker = Subspace.span(self.field, self.dim, zeros)
        if len(ker.nonzero_vectors()) != len(zeros):
            raise ConsistencyError("zero set of a linear map is not a subspace")
        return ker

    def is_injective(self) -> bool:
        return len(_span_in_k(self.field, self.ext, self.images)) == self.field.q ** self.dim

    def power(self, k: int) -> "LinearMapToK":
        return LinearMapToK(self.field, self.ext, tuple(self.ext.pow(x, k) for x in self.images))

    def scale(self, c: int) -> "LinearMapToK":
        return LinearMapToK(self.field, self.ext, tuple(self.ext.mul(c, x) for x in self.images))

    def normalized(self) -> "LinearMapToK":
        """Scaled so that the first nonzero image is 1."""
        lead = next((x for x in self.images if x), 0)
        if not lead:
            raise ValueError("the zero map has no normalization")
        return self.scale(self.ext.inv(lead))

    def to_text(self) -> str:
        return "(" + ", ".join(self.ext.format(x) for x in self.images) + ")"


# ----------------------------------------------------------------------
# reciprocal maps

@dataclass(frozen=True)
class ReciprocalMap:
    """rho on F_q^r minus 0 stored on projective representatives; rho(a v) = rho(v)/a."""
    field: FieldDesc
    ext: FieldDesc
    r: int
    values: Tuple[int, ...]

    @classmethod
    def zero(cls, field: FieldDesc, ext: FieldDesc, r: int) -> "ReciprocalMap":
        return cls(field, ext, r, (0,) * len(_rep_index(r, field)[0]))

    @classmethod
    def from_function(cls, field: FieldDesc, ext: FieldDesc, r: int, fn) -> "ReciprocalMap":
        reps, _ = _rep_index(r, field)
        return cls(field, ext, r, tuple(fn(v) for v in reps))

    @property
    def reps(self) -> Tuple[Vec, ...]:
        return _rep_index(self.r, self.field)[0]

    def value(self, v: Sequence[int]) -> int:
        alpha, rep = normalize(self.field, v)
        x = self.values[_rep_index(self.r, self.field)[1][rep]]
        if not x:
            return 0
        return self.ext.div(x, embedding(self.field, self.ext)[alpha])

    def is_zero(self) -> bool:
        return not any(self.values)

    def power(self, k: int) -> "ReciprocalMap":
        return ReciprocalMap(self.field, self.ext, self.r, tuple(self.ext.pow(x, k) for x in self.values))

    def scale(self, c: int) -> "ReciprocalMap":
        return ReciprocalMap(self.field, self.ext, self.r, tuple(self.ext.mul(c, x) for x in self.values))

    def normalized(self) -> "ReciprocalMap":
        lead = next((x for x in self.values if x), 0)
        if not lead:
            raise ValueError("the zero map has no normalization")
        return self.scale(self.ext.inv(lead))

    def to_text(self) -> str:
        return "{" + ", ".join(f"{''.join(str(a) for a in v)}: {self.ext.format(x)}"
                               for v, x in zip(self.reps, self.values)) + "}"


@dataclass(frozen=True)
class QPoint:
    """A k-point of Q_V: a nonzero reciprocal map whose first nonzero value is 1."""
    rho: ReciprocalMap

    def __post_init__(self):
        lead = next((x for x in self.rho.values if x), 0)
        if lead != 1:
            raise ValueError("a Q-point needs a nonzero, canonically scaled reciprocal map")

    @classmethod
    def of(cls, rho: ReciprocalMap) -> "QPoint":
        return cls(rho.normalized())


def is_reciprocal(rho: ReciprocalMap) -> Tuple[bool, Optional[Tuple[Vec, Vec]]]:
    """Check rho(v) rho(v') = rho(v+v') (rho(v) + rho(v')) whenever v + v' != 0.

    Returns the verdict and a violating pair (v, v') when there is one.
    """
    k = rho.ext
    field = rho.field
    vecs = nonzero_vectors(rho.r, field)
    for v in rho.reps:
        a = rho.value(v)
        for w in vecs:
            s = tuple(field.add(x, y) for x, y in zip(v, w))
            if not any(s):
                continue
            b = rho.value(w)
            if k.mul(a, b) != k.mul(rho.value(s), k.add(a, b)):
                return False, (v, w)
    return True, None


def support(rho: ReciprocalMap) -> Subspace:
    ok, witness = is_reciprocal(rho)
    if not ok:
        raise NotReciprocalError(f"reciprocal identity fails at {witness}")
    nonzero = [v for v, x in zip(rho.reps, rho.values) if x]
    sub = Subspace.span(rho.field, rho.r, nonzero)
    if len(sub.projective_reps()) != len(nonzero):
        raise ConsistencyError(f"support of {rho.to_text()} is not a subspace")
    return sub


def reciprocal_of(lam: LinearMapToK) -> ReciprocalMap:
    """v -> 1/lambda(v) for an injective lambda."""
    k = lam.ext

    def value(v):
        x = lam.value(v)
        if not x:
            raise ValueError(f"lambda {lam.to_text()} vanishes at {v}")
        return k.inv(x)

    return ReciprocalMap.from_function(lam.field, k, lam.dim, value)


def extend_by_zero(sub: Subspace, rho_sub: ReciprocalMap) -> ReciprocalMap:
    """i_* rho': rho' on sub (in echelon coordinates) and 0 outside sub."""
    if rho_sub.r != sub.dim:
        raise ValueError(f"map on F_q^{rho_sub.r} does not match a subspace of dimension {sub.dim}")

    def value(v):
        coords = sub.coordinates(v)
        return 0 if coords is None else rho_sub.value(coords)

    return ReciprocalMap.from_function(sub.field, rho_sub.ext, sub.ambient_dim, value)


def classify(rho: ReciprocalMap) -> Tuple[Subspace, LinearMapToK]:
    """(V', lambda) with rho = i_*(1/lambda) and lambda injective on V' (echelon coordinates)."""
    if rho.is_zero():
        raise ValueError("the zero map lies on no stratum")
    sub = support(rho)
    k = rho.ext
    lam = LinearMapToK(rho.field, k, tuple(k.inv(rho.value(b)) for b in sub.basis))
    for v in sub.nonzero_vectors():
        if k.mul(rho.value(v), lam.value(sub.coordinates(v))) != 1:
            raise ConsistencyError(f"rho is not 1/lambda on its support at {v}")
    return sub, lam


def stratum_of(pt: QPoint) -> Subspace:
    return support(pt.rho)


# ----------------------------------------------------------------------
# Omega, Q and P points

def omega_count(q: int, s: int, m: int) -> int:
    """|Omega_{V'}(F_{q^m})| for dim V' = s."""
    num = 1
    for i in range(s):
        num *= q ** m - q ** i
    return num // (q ** m - 1)


def omega_points(field: FieldDesc, s: int, ext: FieldDesc) -> List[LinearMapToK]:
    """Injective lambda: F_q^s -> k with lambda(X_1) = 1."""
    if s < 1:
        return []
    count = omega_count(field.q, s, ext.e // field.e)
    if count > MAX_BRUTE_FORCE:
        raise InfeasibleError(f"Omega of dimension {s} has {count} points over F_{ext.q}")
    out: List[LinearMapToK] = []

    def extend(images: List[int], span: set):
        if len(images) == s:
            out.append(LinearMapToK(field, ext, tuple(images)))
            return
        for x in ext.elements():
            if x not in span:
                extend(images + [x], _span_in_k(field, ext, images + [x]))

    extend([1], _span_in_k(field, ext, [1]))
    return out


def qv_count_formula(q: int, r: int, m: int) -> int:
    return sum(gaussian_binomial(r, s, q) * omega_count(q, s, m) for s in range(1, r + 1))


def qv_points(field: FieldDesc, r: int, ext: FieldDesc) -> List[QPoint]:
    """Q_V(k) through the classification: extensions by zero of 1/lambda, stratum by stratum."""
    points = []
    for sub in subspaces(r, field):
        if sub.dim == 0:
            continue
        for lam in omega_points(field, sub.dim, ext):
            points.append(QPoint.of(extend_by_zero(sub, reciprocal_of(lam))))
    logger.info(f"Q_V(F_{ext.q}) for r={r}, q={field.q}: {len(points)} points")
    return points


def qv_points_bruteforce(field: FieldDesc, r: int, ext: FieldDesc,
                         cap: int = MAX_BRUTE_FORCE) -> List[QPoint]:
    """All canonically scaled value tables that satisfy the reciprocal identity."""
    reps, _ = _rep_index(r, field)
    total = ext.q ** len(reps)
    if total > cap:
        raise InfeasibleError(f"{total} value tables exceed the brute-force cap {cap}")
    points = []
    for values in itertools.product(ext.elements(), repeat=len(reps)):
        if next((x for x in values if x), 0) != 1:
            continue
        rho = ReciprocalMap(field, ext, r, values)
        if is_reciprocal(rho)[0]:
            points.append(QPoint(rho))
    logger.info(f"Brute-force Q_V(F_{ext.q}) for r={r}, q={field.q}: {len(points)} points")
    return points


def strata_counts(points: Sequence[QPoint]) -> Counter:
    return Counter(stratum_of(pt) for pt in points)


def pv_count_formula(q: int, r: int, m: int) -> int:
    return (q ** (m * r) - 1) // (q ** m - 1)


def pv_points(field: FieldDesc, r: int, ext: FieldDesc, cap: int = MAX_BRUTE_FORCE) -> List[LinearMapToK]:
    """Nonzero lambda: F_q^r -> k up to k^x, normalized."""
    if ext.q ** r > cap:
        raise InfeasibleError(f"{ext.q ** r} linear maps exceed the brute-force cap {cap}")
    points = []
    for images in itertools.product(ext.elements(), repeat=r):
        if next((x for x in images if x), 0) == 1:
            points.append(LinearMapToK(field, ext, images))
    return points


def pv_stratum(lam: LinearMapToK) -> Subspace:
    """ker lambda; the point lies on the stratum of the quotient V/ker lambda."""
    return lam.kernel()


def pv_strata_formula(q: int, r: int, m: int) -> int:
    """sum over quotients V'' of |Omega_{V''}(k)|."""
    return sum(gaussian_binomial(r, s, q) * omega_count(q, s, m) for s in range(1, r + 1))


# ----------------------------------------------------------------------
# strange maps

def g_map(rho: ReciprocalMap, check: bool = True) -> LinearMapToK:
    """g_V(rho)(l) = sum of rho(v) over v with <l, v> = 1, as a map on V*."""
    field, k, r = rho.field, rho.ext, rho.r
    vecs = nonzero_vectors(r, field)

    def at(ell):
        return k.sum(rho.value(v) for v in vecs if pairing(field, ell, v) == 1)

    lam = LinearMapToK(field, k, tuple(at(unit_vector(r, i)) for i in range(r)))
    if check:
        for ell in all_vectors(r, field):
            if at(ell) != lam.value(ell):
                raise ConsistencyError(f"g_V({rho.to_text()}) is not linear at {ell}")
    return lam


def f_map(lam: LinearMapToK, check: bool = True) -> ReciprocalMap:
    """f_V(lambda)(v) = product of lambda(l) over l in V* with <l, v> = 1."""
    field, k, r = lam.field, lam.ext, lam.dim
    duals = nonzero_vectors(r, field)

    def value(v):
        return k.prod(lam.value(ell) for ell in duals if pairing(field, ell, v) == 1)

    rho = ReciprocalMap.from_function(field, k, r, value)
    if check:
        ok, witness = is_reciprocal(rho)
        if not ok:
            raise ConsistencyError(f"f_V({lam.to_text()}) violates the reciprocal identity at {witness}")
    return rho


def pullback(sub: Subspace, lam_sub: LinearMapToK) -> LinearMapToK:
    """pi^* lambda' on V*, where pi: V* -> (V')* restricts a functional to V'."""
    r = sub.ambient_dim
    return LinearMapToK(sub.field, lam_sub.ext,
                        tuple(lam_sub.value(tuple(b[i] for b in sub.basis)) for i in range(r)))


def _sample(items: Sequence, samples: Optional[int], rng: np.random.Generator) -> List:
    if samples is None or samples >= len(items):
        return list(items)
    return [items[int(j)] for j in rng.integers(len(items), size=samples)]


def _linear_maps(field: FieldDesc, ext: FieldDesc, s: int, samples: Optional[int],
                 rng: np.random.Generator) -> Iterator[LinearMapToK]:
    if samples is None:
        if ext.q ** s > MAX_BRUTE_FORCE:
            raise InfeasibleError(f"{ext.q ** s} linear maps exceed the brute-force cap")
        for images in itertools.product(ext.elements(), repeat=s):
            yield LinearMapToK(field, ext, images)
    else:
        for _ in range(samples):
            yield LinearMapToK(field, ext, tuple(int(x) for x in rng.integers(ext.q, size=s)))


def gf_composition_check(field: FieldDesc, r: int, ext: FieldDesc, samples: Optional[int] = None,
                         seed: int = DEFAULT_SEED) -> List[Dict]:
    """(g o f)(lambda) = lambda^{q^{r-1}} and (f o g)(rho) = rho^{q^{r-1}}.

    Exhaustive when `samples` is None, otherwise that many random inputs per composite.
    """
    rng = np.random.default_rng(seed)
    power = field.q ** (r - 1)
    rows = []

    checked, failures = 0, []
    for lam in _linear_maps(field, ext, r, samples, rng):
        checked += 1
        if g_map(f_map(lam, check=False), check=False) != lam.power(power):
            failures.append(lam.to_text())
    rows.append({"composite": "g o f", "checked": checked, "failures": len(failures),
                 "witness": failures[0] if failures else None, "ok": not failures})

    points = [pt.rho for pt in qv_points(field, r, ext)] + [ReciprocalMap.zero(field, ext, r)]
    checked, failures = 0, []
    for rho in _sample(points, samples, rng):
        checked += 1
        if f_map(g_map(rho, check=False), check=False) != rho.power(power):
            failures.append(rho.to_text())
    rows.append({"composite": "f o g", "checked": checked, "failures": len(failures),
                 "witness": failures[0] if failures else None, "ok": not failures})
    for row in rows:
        if not row["ok"]:
            logger.error(f"{row['composite']} differs from the q^{r - 1} power map at {row['witness']}")
    return rows


def gf_compat_check(sub: Subspace, ext: FieldDesc, samples: Optional[int] = None,
                    seed: int = DEFAULT_SEED) -> List[Dict]:
    """Compatibility of g and f with i_* and pi^* for the inclusion of sub into V."""
    field = sub.field
    rng = np.random.default_rng(seed)
    s = sub.dim
    codim = sub.ambient_dim - s
    rows = []

    checked, failures = 0, []
    local_points = [pt.rho for pt in qv_points(field, s, ext)]
    for rho_sub in _sample(local_points, samples, rng):
        checked += 1
        if pullback(sub, g_map(rho_sub)) != g_map(extend_by_zero(sub, rho_sub)):
            failures.append(rho_sub.to_text())
    rows.append({"square": "g", "checked": checked, "failures": len(failures),
                 "witness": failures[0] if failures else None, "ok": not failures})

    checked, failures = 0, []
    for lam_sub in _linear_maps(field, ext, s, samples, rng):
        checked += 1
        left = extend_by_zero(sub, f_map(lam_sub, check=False).power(field.q ** codim))
        if left != f_map(pullback(sub, lam_sub), check=False):
            failures.append(lam_sub.to_text())
    rows.append({"square": "f", "checked": checked, "failures": len(failures),
                 "witness": failures[0] if failures else None, "ok": not failures})
    return rows


def strange_bijection_check(field: FieldDesc, r: int, ext: FieldDesc) -> List[Dict]:
    """g_V: Q_V(k) -> P_{V*}(k) and f_V: P_{V*}(k) -> Q_V(k) are bijections on points."""
    q_points = qv_points(field, r, ext)
    p_points = pv_points(field, r, ext)
    g_images = {g_map(pt.rho, check=False).normalized() for pt in q_points}
    f_images = {QPoint.of(f_map(lam, check=False)) for lam in p_points}
    return [
        {"map": "g", "source": len(q_points), "image": len(g_images), "target": len(p_points),
         "ok": len(g_images) == len(q_points) == len(p_points)},
        {"map": "f", "source": len(p_points), "image": len(f_images), "target": len(q_points),
         "ok": len(f_images) == len(p_points) == len(q_points)},
    ]


# ----------------------------------------------------------------------
# tangent spaces

def jacobian(pt: QPoint) -> np.ndarray:
    """Jacobian over k of the relations Y_v Y_v' - Y_{v+v'} (Y_v + Y_v') in the Y_rep coordinates.

    Y_{a w} = Y_w / a is substituted for every non-normalized vector, and the
    matrix is evaluated at the value table of the point.
    """
    rho = pt.rho
    field, k, r = rho.field, rho.ext, rho.r
    reps, index = _rep_index(r, field)
    table = embedding(field, k)
    y = rho.values

    def coord(v):
        alpha, rep = normalize(field, v)
        return index[rep], k.inv(table[alpha])

    rows = []
    for v in reps:
        for w in nonzero_vectors(r, field):
            s = tuple(field.add(a, b) for a, b in zip(v, w))
            if not any(s):
                continue
            (ia, ca), (ib, cb), (ic, cc) = coord(v), coord(w), coord(s)
            row = [0] * len(reps)
            cab = k.mul(ca, cb)
            row[ia] = k.add(row[ia], k.mul(cab, y[ib]))
            row[ib] = k.add(row[ib], k.mul(cab, y[ia]))
            row[ia] = k.sub(row[ia], k.mul(cc, k.mul(ca, y[ic])))
            row[ib] = k.sub(row[ib], k.mul(cc, k.mul(cb, y[ic])))
            row[ic] = k.sub(row[ic], k.mul(cc, k.add(k.mul(ca, y[ia]), k.mul(cb, y[ib]))))
            rows.append(row)
    return np.array(rows, dtype=np.int64)


def tangent_dim(pt: QPoint) -> Tuple[int, int]:
    """(dim of the Jacobian kernel at the cone point, dim of the projective tangent space)."""
    J = jacobian(pt)
    kernel = J.shape[1] - rank(J, pt.rho.ext)
    return kernel, kernel - 1


def local_tangent_prediction(sub: Subspace) -> int:
    """Projective tangent dimension on the stratum of sub from the local cone model."""
    quotient_reps = (sub.field.q ** (sub.ambient_dim - sub.dim) - 1) // (sub.field.q - 1)
    return (sub.dim - 1) + quotient_reps


def singular_strata(field: FieldDesc, r: int) -> List[Subspace]:
    """Strata of codimension >= 2."""
    return [sub for sub in subspaces(r, field) if 1 <= sub.dim <= r - 2]


def singular_locus_check(field: FieldDesc, r: int, ext: FieldDesc,
                         per_stratum: int = 2) -> List[Dict]:
    """Tangent dimensions on the strata that have k-points, against the cone prediction."""
    rows = []
    for sub in subspaces(r, field):
        if sub.dim == 0:
            continue
        lams = omega_points(field, sub.dim, ext)[:per_stratum]
        if not lams:
            logger.warning(f"stratum {sub} has no points over F_{ext.q}")
            continue
        predicted = local_tangent_prediction(sub)
        for lam in lams:
            pt = QPoint.of(extend_by_zero(sub, reciprocal_of(lam)))
            kernel, projective = tangent_dim(pt)
            codim = r - sub.dim
            rows.append({"stratum": repr(sub), "codim": codim, "kernel": kernel,
                         "tangent": projective, "predicted": predicted,
                         "singular": projective > r - 1,
                         "ok": projective == predicted and (projective > r - 1) == (codim >= 2)})
    return rows
