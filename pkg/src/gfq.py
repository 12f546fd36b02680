"""Finite fields F_p^e with canonical moduli, log/exp tables and embeddings.

Elements are encoded as integers: the element c_0 + c_1 g + ... + c_{e-1} g^{e-1}
is stored as sum(c_i * p**i).  This encoding coincides with the canonical
enumeration order 0, 1, ..., g, g+1, ... used for every deterministic choice.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, factorint, isprime, primefactors, symbols

from config import MAX_FIELD_SIZE
from src.errors import FieldMismatchError, FieldSpecError, InfeasibleError

logger = logging.getLogger(__name__)

_x = symbols("x")


def _smallest_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e, low-to-high."""
    for low in itertools.product(range(p), repeat=e):
        coeffs = tuple(low) + (1,)
        if e == 1:
            return coeffs
        if coeffs[0] == 0:
            continue
        poly = Poly(list(reversed(coeffs)), _x, modulus=p)
        if poly.is_irreducible:
            return coeffs
    raise FieldSpecError(f"no irreducible polynomial of degree {e} over F_{p}")


class FieldDesc:
    """The field F_q, q = p^e, built on its canonical modulus."""

    def __init__(self, p: int, e: int):
        if e < 1:
            raise FieldSpecError(f"extension degree must be >= 1, got {e}")
        if not isprime(p):
            raise FieldSpecError(f"characteristic must be prime, got {p}")
        if p ** e > MAX_FIELD_SIZE:
            raise InfeasibleError(f"field of size {p}^{e} exceeds MAX_FIELD_SIZE={MAX_FIELD_SIZE}")

        self.p = p
        self.e = e
        self.q = p ** e
        self.order = self.q - 1
        self.modulus = _smallest_irreducible(p, e)
        self._powers = [p ** i for i in range(e)]
        self._build_tables()

        logger.info(f"Constructed F_{self.q} with modulus {self.modulus_text()} "
                    f"and primitive element {self.format(self.primitive)}")

    # ------------------------------------------------------------------
    # construction helpers (polynomial arithmetic on digit lists)

    def digits(self, a: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_digits(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * w for c, w in zip(coeffs, self._powers))

    def _poly_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus from the top down
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for i in range(e + 1):
                    prod[k - e + i] = (prod[k - e + i] - c * self.modulus[i]) % p
        return self.from_digits(prod[:e])

    def _poly_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def _poly_pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            k >>= 1
        return result

    def _build_tables(self):
        order = self.order
        if order == 1:
            self.primitive = 1
        else:
            primes = primefactors(order)
            for g in range(2, self.q):
                if all(self._poly_pow(g, order // ell) != 1 for ell in primes):
                    self.primitive = g
                    break

        exp = [1] * order
        for i in range(1, order):
            exp[i] = self._poly_mul(exp[i - 1], self.primitive)
        log = [-1] * self.q
        for i, a in enumerate(exp):
            log[a] = i
        zech = [-1] * order
        for n in range(order):
            s = self._poly_add(1, exp[n])
            zech[n] = log[s] if s else -1

        self._exp = exp + exp
        self._log = log
        self._zech = zech
        self.neg_one = 1 if self.p == 2 else exp[order // 2]
        self._half = 0 if self.p == 2 else order // 2

        self.exp_np = np.array(self._exp, dtype=np.int64)
        self.log_np = np.array([max(x, 0) for x in log], dtype=np.int64)
        self.zech_np = np.array(zech, dtype=np.int64)

    # ------------------------------------------------------------------
    # identity

    def __eq__(self, other):
        return isinstance(other, FieldDesc) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash(("FieldDesc", self.p, self.e))

    def __repr__(self):
        return f"FieldDesc(p={self.p}, e={self.e})"

    def modulus_text(self) -> str:
        terms = []
        for i in range(self.e, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coeff = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coeff}{mono}")
        return "+".join(terms)

    def format(self, a: int) -> str:
        """Human-readable element: an integer for prime fields, a polynomial in g otherwise."""
        if self.e == 1 or a < self.p:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(a)))):
            if not c:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            coeff = "" if (c == 1 and i > 0) else str(c)
            terms.append(f"{coeff}{mono}")
        return "+".join(terms)

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def element(self, a: int) -> "FqElem":
        return FqElem(self, a)

    @property
    def generator(self) -> int:
        """The class of x modulo the modulus (equals 0 for prime fields with modulus x)."""
        return self.p % self.q if self.e > 1 else 0

    # ------------------------------------------------------------------
    # scalar arithmetic on encoded elements

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.order]
        if z < 0:
            return 0
        return self._exp[(la + z) % self.order]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self._exp[self._log[a] + self._half]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.q}")
        return self._exp[(self.order - self._log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k > 0:
                return 0
            if k == 0:
                return 1
            raise ZeroDivisionError(f"negative power of zero in F_{self.q}")
        return self._exp[(self._log[a] * k) % self.order]

    def log(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("logarithm of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % self.order]

    def frobenius(self, a: int, q: int, n: int = 1) -> int:
        """a^(q^n) for the base field F_q of the tower."""
        if n < 0:
            raise ValueError("frobenius power count must be >= 0")
        qp, qe = parse_prime_power(q)
        if qp != self.p or self.e % qe:
            raise FieldSpecError(f"F_{q} is not a subfield of F_{self.q}")
        if a == 0:
            return 0
        return self._exp[(self._log[a] * pow(q, n, self.order)) % self.order]

    def sum(self, values) -> int:
        total = 0
        for v in values:
            total = self.add(total, v)
        return total

    def prod(self, values) -> int:
        total = 1
        for v in values:
            total = self.mul(total, v)
        return total

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        total = 0
        for a, b in zip(u, v):
            if a and b:
                total = self.add(total, self.mul(a, b))
        return total

    # ------------------------------------------------------------------
    # vectorised arithmetic on numpy arrays of encoded elements

    def vadd(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.p == 2:
            return np.bitwise_xor(a, b)
        out = np.where(a == 0, b, a)
        both = (a != 0) & (b != 0)
        if both.any():
            la = self.log_np[a[both]]
            z = self.zech_np[(self.log_np[b[both]] - la) % self.order]
            out[both] = np.where(z < 0, 0, self.exp_np[(la + np.maximum(z, 0)) % self.order])
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        return np.where(a == 0, 0, self.exp_np[(self.log_np[a] + self._half) % self.order])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return np.where((a == 0) | (b == 0), 0,
                        self.exp_np[(self.log_np[a] + self.log_np[b]) % self.order])

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError(f"inverse of zero in F_{self.q}")
        return self.exp_np[(self.order - self.log_np[a]) % self.order]

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, self.exp_np[(self.log_np[a] * k) % self.order])


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldDesc:
    """Canonical field F_{p^e}; repeated calls return the same object."""
    return FieldDesc(p, e)


def parse_prime_power(q: int) -> Tuple[int, int]:
    if q < 2:
        raise FieldSpecError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldSpecError(f"{q} is not a prime power")
    (p, e), = factors.items()
    return int(p), int(e)


def field_of_size(q: int) -> FieldDesc:
    return field_make(*parse_prime_power(q))


def extension(field: FieldDesc, m: int) -> FieldDesc:
    """The field F_{q^m} containing `field` through the canonical embedding."""
    if m < 1:
        raise FieldSpecError(f"extension degree must be >= 1, got {m}")
    return field_make(field.p, field.e * m)


@lru_cache(maxsize=None)
def embedding(source: FieldDesc, target: FieldDesc) -> Tuple[int, ...]:
    """Table of the canonical embedding source -> target, indexed by encoded element."""
    if source.p != target.p or target.e % source.e:
        raise FieldSpecError(f"F_{source.q} does not embed into F_{target.q}")
    if source == target:
        return tuple(range(source.q))

    root = None
    for t in target.elements():
        value = 0
        for c in reversed(source.modulus):
            value = target.add(target.mul(value, t), c)
        if value == 0:
            root = t
            break
    if root is None:
        raise FieldSpecError(f"modulus of F_{source.q} has no root in F_{target.q}")

    root_powers = [target.pow(root, i) for i in range(source.e)]
    table = []
    for a in source.elements():
        image = 0
        for c, w in zip(source.digits(a), root_powers):
            for _ in range(c):
                image = target.add(image, w)
        table.append(image)
    logger.debug(f"Embedding F_{source.q} -> F_{target.q} sends g to {target.format(root)}")
    return tuple(table)


@lru_cache(maxsize=None)
def restriction(source: FieldDesc, target: FieldDesc) -> Dict[int, int]:
    """Inverse of `embedding(source, target)` on its image."""
    return {image: a for a, image in enumerate(embedding(source, target))}


def subfield_elements(field: FieldDesc, q: int) -> List[int]:
    """Elements a with a^q = a, i.e. the copy of F_q inside `field`."""
    return [a for a in field.elements() if field.frobenius(a, q) == a]


@dataclass(frozen=True)
class FqElem:
    """A field element carrying its field; thin wrapper over the integer encoding."""
    field: FieldDesc
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element of F_{self.field.q}")

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.digits(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldMismatchError(f"F_{self.field.q} vs F_{other.field.q}")
            return other.value
        if isinstance(other, int):
            # integers act through the prime field
            return self.field.from_digits([other % self.field.p])
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FqElem(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FqElem(self.field, self.field.pow(self.value, k))

    def inv(self) -> "FqElem":
        return FqElem(self.field, self.field.inv(self.value))

    def frobenius(self, base: FieldDesc, n: int = 1) -> "FqElem":
        """a^(q^n) where F_q = base is the declared base field."""
        return FqElem(self.field, self.field.frobenius(self.value, base.q, n))

    def embed(self, target: FieldDesc) -> "FqElem":
        return FqElem(target, embedding(self.field, target)[self.value])

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FqElem({self.field.format(self.value)} in F_{self.field.q})"

    def __str__(self):
        return self.field.format(self.value)


def embed(a: FqElem, target: FieldDesc) -> FqElem:
    return a.embed(target)


def frobenius(a: FqElem, base: FieldDesc, n: int = 1) -> FqElem:
    return a.frobenius(base, n)
