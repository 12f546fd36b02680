"""Sparse polynomials over F_q and fractions with products of linear forms as denominators.

Every element of R_V is a polynomial in the reciprocals 1/v, so it can be written as
num / prod(l^m) with l running over projectively normalized linear forms.  `LinFrac`
keeps that representation reduced: no denominator form divides the numerator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.errors import FieldMismatchError, NonHomogeneousError
from src.gfq import FieldDesc, embedding
from src.linalg import GroupElem, Vec, normalize, projective_reps

logger = logging.getLogger(__name__)

Exp = Tuple[int, ...]


def _grlex_key(exp: Exp):
    return (sum(exp), exp)


class MPoly:
    """Polynomial in X_1..X_r over F_q stored as {exponent tuple: encoded coefficient}."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldDesc, nvars: int, terms: Optional[Mapping[Exp, int]] = None):
        self.field = field
        self.nvars = nvars
        self.terms: Dict[Exp, int] = {e: c for e, c in (terms or {}).items() if c}

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldDesc, nvars: int) -> "MPoly":
        return cls(field, nvars)

    @classmethod
    def constant(cls, field: FieldDesc, nvars: int, c: int) -> "MPoly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, field: FieldDesc, nvars: int) -> "MPoly":
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field: FieldDesc, nvars: int, i: int) -> "MPoly":
        """X_{i+1} (0-based index)."""
        return cls(field, nvars, {tuple(1 if j == i else 0 for j in range(nvars)): 1})

    @classmethod
    def linear(cls, field: FieldDesc, v: Sequence[int]) -> "MPoly":
        """The degree-1 polynomial sum v_i X_i."""
        n = len(v)
        return cls(field, n, {tuple(1 if j == i else 0 for j in range(n)): c
                              for i, c in enumerate(v) if c})

    # basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "MPoly"):
        if other.field != self.field:
            raise FieldMismatchError(f"F_{self.field.q} vs F_{other.field.q}")
        if other.nvars != self.nvars:
            raise ValueError(f"{self.nvars} vs {other.nvars} variables")

    def sorted_terms(self) -> List[Tuple[Exp, int]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def min_degree(self, i: int) -> int:
        """Smallest exponent of X_{i+1} over the terms (order of vanishing along X_{i+1} = 0)."""
        if not self.terms:
            raise ValueError("order of the zero polynomial is infinite")
        return min(e[i] for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def coefficient(self, exp: Exp) -> int:
        return self.terms.get(tuple(exp), 0)

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    # arithmetic -------------------------------------------------------

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = f.add(out.get(e, 0), c)
        return MPoly(f, self.nvars, out)

    def __neg__(self) -> "MPoly":
        f = self.field
        return MPoly(f, self.nvars, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def scale(self, c: int) -> "MPoly":
        if not c:
            return MPoly.zero(self.field, self.nvars)
        f = self.field
        return MPoly(f, self.nvars, {e: f.mul(c, a) for e, a in self.terms.items()})

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        f = self.field
        out: Dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = f.add(out.get(e, 0), f.mul(c1, c2))
        return MPoly(f, self.nvars, out)

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """p(X_1 -> images[0], ..., X_r -> images[r-1])."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0] if images else None
        nv = target.nvars if target is not None else self.nvars
        f = self.field
        out = MPoly.zero(f, nv)
        cache: Dict[Tuple[int, int], MPoly] = {}
        for e, c in self.terms.items():
            term = MPoly.constant(f, nv, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def act(self, g: GroupElem) -> "MPoly":
        """Substitution X_i -> g(X_i), the i-th column of g."""
        images = [MPoly.linear(self.field, g.column(i)) for i in range(self.nvars)]
        return self.substitute(images)

    # evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence[int], ext: Optional[FieldDesc] = None) -> int:
        """Value at a point with coordinates in `ext` (default: the coefficient field)."""
        ext = ext or self.field
        table = embedding(self.field, ext)
        total = 0
        for e, c in self.terms.items():
            term = table[c]
            for x, k in zip(point, e):
                if k:
                    term = ext.mul(term, ext.pow(x, k))
            total = ext.add(total, term)
        return total

    def evaluate_many(self, points: np.ndarray, ext: Optional[FieldDesc] = None) -> np.ndarray:
        """Values at the rows of an (N, nvars) array of encoded elements of `ext`."""
        ext = ext or self.field
        table = embedding(self.field, ext)
        points = np.asarray(points, dtype=np.int64)
        out = np.zeros(points.shape[0], dtype=np.int64)
        for e, c in self.terms.items():
            term = np.full(points.shape[0], table[c], dtype=np.int64)
            for i, k in enumerate(e):
                if k:
                    term = ext.vmul(term, ext.vpow(points[:, i], k))
            out = ext.vadd(out, term)
        return out

    # text -------------------------------------------------------------

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"X{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            coeff = self.field.format(c)
            if factors:
                parts.append("*".join(([coeff] if c != 1 else []) + factors))
            else:
                parts.append(coeff)
        return " + ".join(parts)

    def __repr__(self):
        return f"MPoly({self.to_text()})"


@dataclass(frozen=True, order=True)
class LinForm:
    """A projectively normalized nonzero linear form sum v_i X_i (first nonzero v_i = 1)."""
    coeffs: Vec

    @classmethod
    def of(cls, field: FieldDesc, v: Sequence[int]) -> Tuple[int, "LinForm"]:
        """(alpha, l) with v = alpha * l."""
        alpha, rep = normalize(field, v)
        return alpha, cls(rep)

    @property
    def lead(self) -> int:
        return next(i for i, a in enumerate(self.coeffs) if a)

    def poly(self, field: FieldDesc) -> MPoly:
        return _linear_power(field, self.coeffs, 1)

    def power(self, field: FieldDesc, k: int) -> MPoly:
        return _linear_power(field, self.coeffs, k)

    def to_text(self, field: FieldDesc) -> str:
        return MPoly.linear(field, self.coeffs).to_text()


@lru_cache(maxsize=4096)
def _linear_power(field: FieldDesc, coeffs: Vec, k: int) -> MPoly:
    if k == 0:
        return MPoly.one(field, len(coeffs))
    if k == 1:
        return MPoly.linear(field, coeffs)
    half = _linear_power(field, coeffs, k // 2)
    out = half * half
    if k % 2:
        out = out * MPoly.linear(field, coeffs)
    return out


def divide_by_linform(p: MPoly, ell: LinForm) -> Optional[MPoly]:
    """Exact quotient p / ell, or None when ell does not divide p."""
    f, n = p.field, p.nvars
    if p.is_zero():
        return MPoly.zero(f, n)
    j = ell.lead
    # ell = X_j + rest with rest free of X_j; divide as a polynomial in X_j
    rest = MPoly.linear(f, tuple(0 if i == j else c for i, c in enumerate(ell.coeffs)))
    by_deg: Dict[int, Dict[Exp, int]] = {}
    for e, c in p.terms.items():
        d = e[j]
        by_deg.setdefault(d, {})[e[:j] + (0,) + e[j + 1:]] = c
    top = max(by_deg)
    coeffs = [MPoly(f, n, by_deg.get(d, {})) for d in range(top + 1)]
    if top == 0:
        return None
    quot = [MPoly.zero(f, n)] * top
    quot[top - 1] = coeffs[top]
    for d in range(top - 1, 0, -1):
        quot[d - 1] = coeffs[d] - rest * quot[d]
    remainder = coeffs[0] - rest * quot[0]
    if not remainder.is_zero():
        return None
    out: Dict[Exp, int] = {}
    for d, qd in enumerate(quot):
        for e, c in qd.terms.items():
            out[e[:j] + (d,) + e[j + 1:]] = c
    return MPoly(f, n, out)


def factor_linear(p: MPoly) -> Optional[Tuple[int, Dict[LinForm, int]]]:
    """(scalar, {l: mult}) with p = scalar * prod l^mult, or None if p is not such a product."""
    if p.is_zero():
        return None
    factors: Dict[LinForm, int] = {}
    current = p
    for v in projective_reps(p.nvars, p.field):
        ell = LinForm(v)
        while current.degree() > 0:
            quot = divide_by_linform(current, ell)
            if quot is None:
                break
            factors[ell] = factors.get(ell, 0) + 1
            current = quot
    if current.degree() != 0:
        return None
    return current.constant_term(), factors


Den = Tuple[Tuple[LinForm, int], ...]


def _den_poly(field: FieldDesc, nvars: int, den: Mapping[LinForm, int]) -> MPoly:
    out = MPoly.one(field, nvars)
    for ell, m in sorted(den.items()):
        out = out * ell.power(field, m)
    return out


class LinFrac:
    """num / prod(l^m), kept reduced."""

    __slots__ = ("field", "nvars", "num", "den")

    def __init__(self, num: MPoly, den: Optional[Mapping[LinForm, int]] = None, reduce: bool = True):
        self.field = num.field
        self.nvars = num.nvars
        den = {ell: m for ell, m in (den or {}).items() if m > 0}
        # zero has the empty denominator whether or not we reduce
        if num.is_zero():
            den = {}
        elif reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den: Den = tuple(sorted(den.items()))

    @staticmethod
    def _reduce(num: MPoly, den: Dict[LinForm, int]):
        if num.is_zero():
            return num, {}
        for ell in sorted(den):
            while den[ell] > 0:
                quot = divide_by_linform(num, ell)
                if quot is None:
                    break
                num = quot
                den[ell] -= 1
        return num, {ell: m for ell, m in den.items() if m > 0}

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldDesc, nvars: int) -> "LinFrac":
        return cls(MPoly.zero(field, nvars))

    @classmethod
    def one(cls, field: FieldDesc, nvars: int) -> "LinFrac":
        return cls(MPoly.one(field, nvars))

    @classmethod
    def constant(cls, field: FieldDesc, nvars: int, c: int) -> "LinFrac":
        return cls(MPoly.constant(field, nvars, c))

    @classmethod
    def from_poly(cls, p: MPoly) -> "LinFrac":
        return cls(p)

    @classmethod
    def reciprocal(cls, field: FieldDesc, v: Sequence[int]) -> "LinFrac":
        """1/v = alpha^{-1} / l for v = alpha * l."""
        alpha, ell = LinForm.of(field, v)
        return cls(MPoly.constant(field, len(v), field.inv(alpha)), {ell: 1}, reduce=False)

    @classmethod
    def reciprocal_of_poly(cls, p: MPoly) -> "LinFrac":
        if p.degree() != 1 or not p.is_homogeneous():
            raise ValueError("reciprocal_of_poly needs a nonzero linear form")
        v = tuple(p.coefficient(tuple(1 if j == i else 0 for j in range(p.nvars))) for i in range(p.nvars))
        return cls.reciprocal(p.field, v)

    @classmethod
    def sum(cls, fracs: Iterable["LinFrac"], field: Optional[FieldDesc] = None,
            nvars: Optional[int] = None) -> "LinFrac":
        """Sum over one common denominator, reduced once at the end."""
        fracs = list(fracs)
        if not fracs:
            if field is None or nvars is None:
                raise ValueError("empty sum needs field and nvars")
            return cls.zero(field, nvars)
        field, nvars = fracs[0].field, fracs[0].nvars
        lcm: Dict[LinForm, int] = {}
        for a in fracs:
            for ell, m in a.den:
                lcm[ell] = max(lcm.get(ell, 0), m)
        num = MPoly.zero(field, nvars)
        for a in fracs:
            if not a.num.is_zero():
                num = num + a.numerator_over(lcm)
        return cls(num, lcm)

    # queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_dict(self) -> Dict[LinForm, int]:
        return dict(self.den)

    def den_poly(self) -> MPoly:
        return _den_poly(self.field, self.nvars, self.den_dict())

    def numerator_over(self, common: Mapping[LinForm, int]) -> MPoly:
        """num * prod l^(common[l] - m): the numerator over a multiple of the denominator."""
        out = self.num
        mine = self.den_dict()
        for ell in sorted(set(common) | set(mine)):
            k = common.get(ell, 0) - mine.get(ell, 0)
            if k < 0:
                raise ValueError("common denominator does not cover this fraction")
            if k:
                out = out * ell.power(self.field, k)
        return out

    def degree(self) -> Optional[int]:
        """deg(num) - sum of multiplicities; None for the zero fraction."""
        if self.num.is_zero():
            return None
        if not self.num.is_homogeneous():
            raise NonHomogeneousError(f"{self.to_text()} is not homogeneous")
        return self.num.degree() - sum(m for _, m in self.den)

    # arithmetic -------------------------------------------------------

    def _check(self, other: "LinFrac"):
        if other.field != self.field:
            raise FieldMismatchError(f"F_{self.field.q} vs F_{other.field.q}")
        if other.nvars != self.nvars:
            raise ValueError(f"{self.nvars} vs {other.nvars} variables")

    def __add__(self, other: "LinFrac") -> "LinFrac":
        self._check(other)
        return LinFrac.sum([self, other])

    def __neg__(self) -> "LinFrac":
        return LinFrac(-self.num, self.den_dict(), reduce=False)

    def __sub__(self, other: "LinFrac") -> "LinFrac":
        return self + (-other)

    def scale(self, c: int) -> "LinFrac":
        return LinFrac(self.num.scale(c), self.den_dict(), reduce=False)

    def __mul__(self, other: "LinFrac") -> "LinFrac":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return LinFrac.zero(self.field, self.nvars)
        den = self.den_dict()
        for ell, m in other.den:
            den[ell] = den.get(ell, 0) + m
        return LinFrac(self.num * other.num, den)

    def __pow__(self, k: int) -> "LinFrac":
        out = LinFrac.one(self.field, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other: "LinFrac") -> "LinFrac":
        """Division by fractions whose numerator is a product of linear forms."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero fraction")
        factored = factor_linear(other.num)
        if factored is None:
            raise ValueError(f"numerator {other.num.to_text()} is not a product of linear forms")
        scalar, factors = factored
        den = self.den_dict()
        for ell, m in factors.items():
            den[ell] = den.get(ell, 0) + m
        num = self.num.scale(self.field.inv(scalar)) * other.den_poly()
        return LinFrac(num, den)

    def cross_equal(self, other: "LinFrac") -> bool:
        """a/b == c/d decided as a*d == c*b."""
        self._check(other)
        return self.num * other.den_poly() == other.num * self.den_poly()

    def __eq__(self, other):
        if not isinstance(other, LinFrac):
            return NotImplemented
        if self.field != other.field or self.nvars != other.nvars:
            return False
        if self.num == other.num and self.den == other.den:
            return True
        return self.cross_equal(other)

    def __hash__(self):
        return hash((self.num, self.den))

    def act(self, g: GroupElem) -> "LinFrac":
        """Substitution X_i -> g(X_i); each denominator form goes to the normalization of g(l)."""
        f = self.field
        num = self.num.act(g)
        den: Dict[LinForm, int] = {}
        scalar = 1
        for ell, m in self.den:
            alpha, image = LinForm.of(f, g.apply(ell.coeffs))
            den[image] = den.get(image, 0) + m
            scalar = f.mul(scalar, f.pow(alpha, m))
        return LinFrac(num.scale(f.inv(scalar)), den, reduce=False)

    # evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence[int], ext: Optional[FieldDesc] = None) -> int:
        ext = ext or self.field
        value = self.num.evaluate(point, ext)
        for ell, m in self.den:
            d = MPoly.linear(self.field, ell.coeffs).evaluate(point, ext)
            if not d:
                raise ZeroDivisionError(f"{ell.to_text(self.field)} vanishes at the point")
            value = ext.mul(value, ext.pow(ext.inv(d), m))
        return value

    def evaluate_many(self, points: np.ndarray, ext: Optional[FieldDesc] = None) -> np.ndarray:
        ext = ext or self.field
        values = self.num.evaluate_many(points, ext)
        for ell, m in self.den:
            d = MPoly.linear(self.field, ell.coeffs).evaluate_many(points, ext)
            values = ext.vmul(values, ext.vpow(ext.vinv(d), m))
        return values

    # text -------------------------------------------------------------

    def to_text(self) -> str:
        num = self.num.to_text()
        if not self.den:
            return num
        den = "".join(f"({ell.to_text(self.field)})" + (f"^{m}" if m > 1 else "") for ell, m in self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        return f"{num} / {den}"

    def __repr__(self):
        return f"LinFrac({self.to_text()})"
