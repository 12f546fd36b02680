"""Linear algebra over finite fields: echelon forms, subspaces, flags and matrix groups.

Vectors are tuples of encoded field elements (see src.gfq); matrices handed to the
elimination routines are numpy int64 arrays of encoded elements.  Group elements
act on column vectors, so g(X_i) is the i-th column of the matrix.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import prod
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from config import MAX_GROUP_ORDER, MAX_NONZERO_VECTORS
from src.errors import ConsistencyError, InfeasibleError, NotClosedError
from src.gfq import FieldDesc, embedding

logger = logging.getLogger(__name__)

Vec = Tuple[int, ...]


# ----------------------------------------------------------------------
# vectors

def zero_vector(r: int) -> Vec:
    return (0,) * r


def unit_vector(r: int, i: int) -> Vec:
    """X_{i+1} in 0-based indexing."""
    return tuple(1 if j == i else 0 for j in range(r))


def vec_add(field: FieldDesc, u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(field.add(a, b) for a, b in zip(u, v))


def vec_sub(field: FieldDesc, u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(field.sub(a, b) for a, b in zip(u, v))


def vec_scale(field: FieldDesc, c: int, v: Sequence[int]) -> Vec:
    return tuple(field.mul(c, a) for a in v)


def pairing(field: FieldDesc, ell: Sequence[int], v: Sequence[int]) -> int:
    """<ell, v> = sum ell_i v_i for ell in V* and v in V."""
    return field.dot(ell, v)


def embed_vector(v: Sequence[int], source: FieldDesc, target: FieldDesc) -> Vec:
    table = embedding(source, target)
    return tuple(table[a] for a in v)


def all_vectors(r: int, field: FieldDesc) -> Iterator[Vec]:
    return itertools.product(field.elements(), repeat=r)


def nonzero_vectors(r: int, field: FieldDesc, cap: int = MAX_NONZERO_VECTORS) -> List[Vec]:
    count = field.q ** r - 1
    if count > cap:
        raise InfeasibleError(f"{count} nonzero vectors exceed the cap {cap}")
    return [v for v in all_vectors(r, field) if any(v)]


def projective_reps(r: int, field: FieldDesc, cap: int = MAX_NONZERO_VECTORS) -> List[Vec]:
    """Nonzero vectors whose first nonzero coordinate is 1."""
    return [v for v in nonzero_vectors(r, field, cap) if _leading(v) == 1]


def _leading(v: Sequence[int]) -> int:
    for a in v:
        if a:
            return a
    return 0


def normalize(field: FieldDesc, v: Sequence[int]) -> Tuple[int, Vec]:
    """Return (alpha, rep) with v = alpha * rep and rep projectively normalized."""
    alpha = _leading(v)
    if not alpha:
        raise ValueError("cannot normalize the zero vector")
    inv = field.inv(alpha)
    return alpha, tuple(field.mul(inv, a) for a in v)


# ----------------------------------------------------------------------
# elimination

def as_matrix(rows, cols: Optional[int] = None) -> np.ndarray:
    M = np.array(rows, dtype=np.int64)
    if M.size == 0:
        return np.zeros((0, cols or 0), dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    return M


def row_reduce(matrix, field: FieldDesc, cols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form; returns the nonzero rows and the pivot columns."""
    M = as_matrix(matrix, cols).copy()
    rows, ncols = M.shape
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        if row == rows:
            break
        nz = np.flatnonzero(M[row:, col])
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            M[[row, pr]] = M[[pr, row]]
        # rows from `row` down are zero left of `col`
        M[row, col:] = field.vmul(M[row, col:], field.inv(int(M[row, col])))
        others = np.flatnonzero(M[:, col])
        others = others[others != row]
        if others.size:
            factors = M[others, col]
            M[others, col:] = field.vsub(M[others, col:], field.vmul(factors[:, None], M[row, col:][None, :]))
        pivots.append(col)
        row += 1
    return M[:row], pivots


def rank(matrix, field: FieldDesc) -> int:
    """Rank by forward elimination on the trailing submatrix."""
    M = as_matrix(matrix).copy()
    rows, cols = M.shape
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.flatnonzero(M[row:, col])
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            M[[row, pr]] = M[[pr, row]]
        below = row + 1 + np.flatnonzero(M[row + 1:, col])
        if below.size:
            factors = field.vmul(M[below, col], field.inv(int(M[row, col])))
            M[below, col:] = field.vsub(M[below, col:], field.vmul(factors[:, None], M[row, col:][None, :]))
        row += 1
    return row


def nullspace(matrix, field: FieldDesc, cols: Optional[int] = None) -> List[Vec]:
    """Basis of {x : M x = 0}."""
    R, pivots = row_reduce(matrix, field, cols)
    ncols = R.shape[1] if R.size else (cols if cols is not None else as_matrix(matrix).shape[1])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = field.neg(int(R[i, f]))
        basis.append(tuple(x))
    return basis


def solve_many(A, B, field: FieldDesc) -> Optional[np.ndarray]:
    """A solution X of A X = B (free variables set to 0), or None if inconsistent."""
    A = as_matrix(A)
    B = as_matrix(B)
    n = A.shape[1]
    R, pivots = row_reduce(np.hstack([A, B]), field)
    if pivots and pivots[-1] >= n:
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        X[pc] = R[i, n:]
    return X


def solve(A, b: Sequence[int], field: FieldDesc) -> Optional[Vec]:
    X = solve_many(A, np.array(b, dtype=np.int64).reshape(-1, 1), field)
    if X is None:
        return None
    return tuple(int(x) for x in X[:, 0])


def coordinates_in(vectors: Sequence[Sequence[int]], v: Sequence[int], field: FieldDesc) -> Optional[Vec]:
    """Coefficients c with sum c_i vectors_i = v, or None."""
    if not vectors:
        return () if not any(v) else None
    A = as_matrix(vectors).T
    return solve(A, v, field)


def gaussian_binomial(r: int, s: int, q: int) -> int:
    """Number of s-dimensional subspaces of F_q^r."""
    if s < 0 or s > r:
        return 0
    num = prod(q ** (r - i) - 1 for i in range(s))
    den = prod(q ** (i + 1) - 1 for i in range(s))
    return num // den


# ----------------------------------------------------------------------
# subspaces and flags

@dataclass(frozen=True)
class Subspace:
    """Subspace of field^r stored by its reduced row echelon basis."""
    field: FieldDesc
    ambient_dim: int
    basis: Tuple[Vec, ...]

    @classmethod
    def span(cls, field: FieldDesc, r: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return cls(field, r, ())
        R, _ = row_reduce(vectors, field, r)
        return cls(field, r, tuple(tuple(int(a) for a in row) for row in R))

    @classmethod
    def zero(cls, field: FieldDesc, r: int) -> "Subspace":
        return cls(field, r, ())

    @classmethod
    def full(cls, field: FieldDesc, r: int) -> "Subspace":
        return cls(field, r, tuple(unit_vector(r, i) for i in range(r)))

    @classmethod
    def coordinate(cls, field: FieldDesc, r: int, i: int) -> "Subspace":
        """span(X_1..X_i)."""
        return cls(field, r, tuple(unit_vector(r, j) for j in range(i)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, a in enumerate(row) if a) for row in self.basis)

    def coordinates(self, v: Sequence[int]) -> Optional[Vec]:
        """Coordinates of v in the echelon basis, or None when v is not in the subspace."""
        coeffs = tuple(v[j] for j in self.pivots)
        rebuilt = self.combine(coeffs)
        return coeffs if rebuilt == tuple(v) else None

    def combine(self, coeffs: Sequence[int]) -> Vec:
        out = zero_vector(self.ambient_dim)
        for c, row in zip(coeffs, self.basis):
            if c:
                out = vec_add(self.field, out, vec_scale(self.field, c, row))
        return out

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)

    def annihilator(self) -> "Subspace":
        if not self.basis:
            return Subspace.full(self.field, self.ambient_dim)
        return Subspace.span(self.field, self.ambient_dim,
                             nullspace(self.basis, self.field, self.ambient_dim))

    def __and__(self, other: "Subspace") -> "Subspace":
        return (self.annihilator() + other.annihilator()).annihilator()

    def vectors(self) -> Iterator[Vec]:
        for coeffs in itertools.product(self.field.elements(), repeat=self.dim):
            yield self.combine(coeffs)

    def nonzero_vectors(self) -> List[Vec]:
        return [v for v in self.vectors() if any(v)]

    def projective_reps(self) -> List[Vec]:
        return [v for v in self.nonzero_vectors() if _leading(v) == 1]

    def complement_basis(self, sub: "Subspace") -> List[Vec]:
        """Echelon basis vectors of self that extend a basis of `sub` to one of self."""
        chosen: List[Vec] = []
        current = sub
        for row in self.basis:
            if not current.contains(row):
                chosen.append(row)
                current = Subspace.span(self.field, self.ambient_dim, current.basis + (row,))
        return chosen

    def quotient_coordinates(self, sub: "Subspace", complement: Sequence[Vec], v: Sequence[int]) -> Vec:
        """Coordinates of v + sub in self/sub with respect to the images of `complement`."""
        coeffs = coordinates_in(list(complement) + list(sub.basis), v, self.field)
        if coeffs is None:
            raise ValueError("vector is not in the subspace")
        return coeffs[:len(complement)]

    def extend_scalars(self, target: FieldDesc) -> "Subspace":
        table = embedding(self.field, target)
        return Subspace(target, self.ambient_dim,
                        tuple(tuple(table[a] for a in row) for row in self.basis))

    def sort_key(self):
        return (self.dim, self.basis)

    def __repr__(self):
        rows = ", ".join("(" + ",".join(self.field.format(a) for a in row) + ")" for row in self.basis)
        return f"<{rows}>"


def subspaces(r: int, field: FieldDesc, dim: Optional[int] = None) -> List[Subspace]:
    """All subspaces of field^r (or those of one dimension) in canonical order."""
    dims = range(r + 1) if dim is None else [dim]
    out = []
    for s in dims:
        for piv in itertools.combinations(range(r), s):
            slots = [(i, j) for i, c in enumerate(piv) for j in range(c + 1, r) if j not in piv]
            for values in itertools.product(field.elements(), repeat=len(slots)):
                rows = [[0] * r for _ in range(s)]
                for i, c in enumerate(piv):
                    rows[i][c] = 1
                for (i, j), a in zip(slots, values):
                    rows[i][j] = a
                out.append(Subspace(field, r, tuple(tuple(row) for row in rows)))
    return out


@dataclass(frozen=True)
class Flag:
    """Chain 0 = V_0 < V_1 < ... < V_m = V."""
    members: Tuple[Subspace, ...]

    def __post_init__(self):
        ms = self.members
        if not ms or ms[0].dim != 0 or ms[-1].dim != ms[-1].ambient_dim:
            raise ValueError("a flag must start at 0 and end at V")
        for a, b in zip(ms, ms[1:]):
            if not a < b:
                raise ValueError("flag members must be strictly increasing")

    @classmethod
    def of(cls, field: FieldDesc, r: int, middle: Iterable[Subspace] = ()) -> "Flag":
        members = sorted(set(middle), key=Subspace.sort_key)
        members = [m for m in members if 0 < m.dim < r]
        return cls(tuple([Subspace.zero(field, r)] + members + [Subspace.full(field, r)]))

    @classmethod
    def standard(cls, field: FieldDesc, r: int) -> "Flag":
        return cls(tuple(Subspace.coordinate(field, r, i) for i in range(r + 1)))

    @property
    def jumps(self) -> List[int]:
        return [b.dim - a.dim for a, b in zip(self.members, self.members[1:])]

    @property
    def is_complete(self) -> bool:
        return all(j == 1 for j in self.jumps)

    @property
    def minimal_nonzero(self) -> Subspace:
        return self.members[1]

    def __contains__(self, W: Subspace) -> bool:
        return W in self.members

    def __le__(self, other: "Flag") -> bool:
        return all(W in other.members for W in self.members)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return "Flag[" + " < ".join(repr(m) for m in self.members) + "]"


def flags(r: int, field: FieldDesc, complete_only: bool = False) -> List[Flag]:
    zero, full = Subspace.zero(field, r), Subspace.full(field, r)
    proper = [S for S in subspaces(r, field) if 0 < S.dim < r]
    out: List[Flag] = []

    def extend(chain: List[Subspace]):
        last = chain[-1]
        if not complete_only or last.dim == r - 1:
            out.append(Flag(tuple(chain + [full])))
        for W in proper:
            if W.dim > last.dim and last <= W and (not complete_only or W.dim == last.dim + 1):
                extend(chain + [W])

    if r == 0:
        return [Flag((zero,))]
    extend([zero])
    return out


# ----------------------------------------------------------------------
# matrix groups

@dataclass(frozen=True)
class GroupElem:
    field: FieldDesc
    matrix: Tuple[Vec, ...]

    @classmethod
    def identity(cls, field: FieldDesc, r: int) -> "GroupElem":
        return cls(field, tuple(unit_vector(r, i) for i in range(r)))

    @classmethod
    def from_columns(cls, field: FieldDesc, columns: Sequence[Sequence[int]]) -> "GroupElem":
        r = len(columns)
        return cls(field, tuple(tuple(columns[j][i] for j in range(r)) for i in range(r)))

    @property
    def r(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> Vec:
        return tuple(row[j] for row in self.matrix)

    def transpose(self) -> "GroupElem":
        return GroupElem(self.field, tuple(self.column(j) for j in range(self.r)))

    def apply(self, v: Sequence[int]) -> Vec:
        return tuple(self.field.dot(row, v) for row in self.matrix)

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        cols = [other.column(j) for j in range(other.r)]
        return GroupElem(self.field, tuple(tuple(self.field.dot(row, c) for c in cols)
                                           for row in self.matrix))

    def inverse(self) -> "GroupElem":
        r = self.r
        aug = [list(row) + list(unit_vector(r, i)) for i, row in enumerate(self.matrix)]
        R, pivots = row_reduce(aug, self.field)
        if pivots[:r] != list(range(r)):
            raise ZeroDivisionError("matrix is singular")
        return GroupElem(self.field, tuple(tuple(int(a) for a in R[i, r:]) for i in range(r)))

    def det(self) -> int:
        f = self.field
        M = [list(row) for row in self.matrix]
        r = self.r
        d = 1
        for c in range(r):
            pr = next((i for i in range(c, r) if M[i][c]), None)
            if pr is None:
                return 0
            if pr != c:
                M[c], M[pr] = M[pr], M[c]
                d = f.neg(d)
            d = f.mul(d, M[c][c])
            inv = f.inv(M[c][c])
            for i in range(c + 1, r):
                if M[i][c]:
                    factor = f.mul(M[i][c], inv)
                    M[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(M[i], M[c])]
        return d

    def is_identity(self) -> bool:
        return self.matrix == GroupElem.identity(self.field, self.r).matrix

    def order(self, limit: int = MAX_GROUP_ORDER) -> int:
        x, n = self, 1
        while not x.is_identity():
            x = x * self
            n += 1
            if n > limit:
                raise ConsistencyError("element order exceeds the group order cap")
        return n

    def has_p_power_order(self) -> bool:
        n = self.order()
        return n == 1 or set(factorint(n)) == {self.field.p}


def gl_order(r: int, q: int) -> int:
    return prod(q ** r - q ** i for i in range(r))


def _check_order(count: int, cap: int, what: str):
    if count > cap:
        raise InfeasibleError(f"{what} has {count} elements, cap is {cap}")


def _gl_columns(r: int, field: FieldDesc) -> Iterator[List[Vec]]:
    vecs = list(all_vectors(r, field))

    def extend(cols: List[Vec], span: Subspace):
        if len(cols) == r:
            yield list(cols)
            return
        for v in vecs:
            if not span.contains(v):
                yield from extend(cols + [v], Subspace.span(field, r, span.basis + (v,)))

    yield from extend([], Subspace.zero(field, r))


def _block(field: FieldDesc, A, B, D) -> GroupElem:
    s, t = len(A), len(D)
    rows = []
    for i in range(s):
        rows.append(tuple(A[i]) + tuple(B[i]))
    for i in range(t):
        rows.append((0,) * s + tuple(D[i]))
    return GroupElem(field, tuple(rows))


def _gl_matrices(n: int, field: FieldDesc) -> List[Tuple[Vec, ...]]:
    if n == 0:
        return [()]
    return [GroupElem.from_columns(field, cols).matrix for cols in _gl_columns(n, field)]


def group_elements(kind: str, r: int, field: FieldDesc, s: Optional[int] = None,
                   cap: int = MAX_GROUP_ORDER) -> List[GroupElem]:
    """Enumerate GL, SL, U (= U_r), W (= W_r), P (= P_s) or L (= L_s) over `field`."""
    q = field.q
    kind = {"U_r": "U", "W_r": "W", "P_s": "P", "L_s": "L"}.get(kind, kind)
    if kind == "GL":
        _check_order(gl_order(r, q), cap, f"GL_{r}(F_{q})")
        return [GroupElem.from_columns(field, cols) for cols in _gl_columns(r, field)]
    if kind == "SL":
        _check_order(gl_order(r, q) // (q - 1), cap, f"SL_{r}(F_{q})")
        return [g for g in group_elements("GL", r, field, cap=cap * (q - 1)) if g.det() == 1]
    if kind == "U":
        slots = [(i, j) for i in range(r) for j in range(i + 1, r)]
        _check_order(q ** len(slots), cap, f"U_{r}(F_{q})")
        out = []
        for values in itertools.product(field.elements(), repeat=len(slots)):
            M = [list(unit_vector(r, i)) for i in range(r)]
            for (i, j), a in zip(slots, values):
                M[i][j] = a
            out.append(GroupElem(field, tuple(tuple(row) for row in M)))
        return out
    if kind == "W":
        _check_order(q ** (r - 1), cap, f"W_{r}(F_{q})")
        out = []
        for u in all_vectors(r - 1, field):
            M = [list(unit_vector(r, i)) for i in range(r)]
            for i, a in enumerate(u):
                M[i][r - 1] = a
            out.append(GroupElem(field, tuple(tuple(row) for row in M)))
        return out
    if kind in ("P", "L"):
        if s is None or not 1 <= s <= r:
            raise ValueError(f"{kind}_s needs 1 <= s <= r, got s={s}")
        t = r - s
        size = q ** (s * t) * gl_order(t, q) * (gl_order(s, q) if kind == "P" else 1)
        _check_order(size, cap, f"{kind}_{s} in GL_{r}(F_{q})")
        A_list = _gl_matrices(s, field) if kind == "P" else [GroupElem.identity(field, s).matrix]
        D_list = _gl_matrices(t, field)
        out = []
        for A in A_list:
            for D in D_list:
                for values in itertools.product(field.elements(), repeat=s * t):
                    B = [values[i * t:(i + 1) * t] for i in range(s)]
                    out.append(_block(field, A, B, D))
        return out
    raise ValueError(f"unknown group kind {kind!r}")


def subgroup_closure(gens: Sequence[GroupElem], cap: int = MAX_GROUP_ORDER) -> List[GroupElem]:
    """The subgroup generated by `gens`, in breadth-first order starting at the identity."""
    if not gens:
        raise ValueError("subgroup_closure needs at least one generator to know the dimension")
    one = GroupElem.identity(gens[0].field, gens[0].r)
    seen = {one}
    order = [one]
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(order) > cap:
                        raise InfeasibleError(f"subgroup exceeds the cap {cap}")
        frontier = nxt
    return order


def generating_set(elements: Sequence[GroupElem]) -> List[GroupElem]:
    """Greedy generating set of the group formed by `elements`; checks closure."""
    members = set(elements)
    gens: List[GroupElem] = []
    generated = set()
    for x in elements:
        if x in generated or x.is_identity():
            continue
        gens.append(x)
        closure = subgroup_closure(gens)
        if len(closure) > len(members) or not members.issuperset(closure):
            raise NotClosedError("element list is not closed under multiplication")
        generated = set(closure)
    if gens and len(generated) != len(members):
        raise NotClosedError("element list is not closed under multiplication")
    if not gens and any(not x.is_identity() for x in elements):
        raise NotClosedError("element list is not closed under multiplication")
    return gens


def double_cosets(H: Sequence[GroupElem], G: Sequence[GroupElem], K: Sequence[GroupElem]) -> int:
    """Number of orbits of H x K on G under (h, k).g = h g k^{-1}."""
    h_gens = generating_set(H)
    k_gens = generating_set(K)
    G_set = set(G)
    seen = set()
    count = 0
    for g in G:
        if g in seen:
            continue
        count += 1
        seen.add(g)
        stack = [g]
        while stack:
            x = stack.pop()
            for h in h_gens:
                y = h * x
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
            for k in k_gens:
                y = x * k
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    if not seen <= G_set:
        raise NotClosedError("H or K does not lie in G")
    return count


def frames(r: int, field: FieldDesc, s: int) -> List[Tuple[Vec, ...]]:
    """Ordered s-tuples of linearly independent vectors, i.e. the coset space G/L_s."""
    vecs = [v for v in all_vectors(r, field) if any(v)]
    out = []

    def extend(frame: List[Vec], span: Subspace):
        if len(frame) == s:
            out.append(tuple(frame))
            return
        for v in vecs:
            if not span.contains(v):
                extend(frame + [v], Subspace.span(field, r, span.basis + (v,)))

    extend([], Subspace.zero(field, r))
    return out


def count_orbits_on_frames(H: Sequence[GroupElem], r: int, field: FieldDesc, s: int) -> int:
    """|H \\ G / L_s| computed as the number of H-orbits on s-frames."""
    gens = generating_set(H)
    seen = set()
    count = 0
    for fr in frames(r, field, s):
        if fr in seen:
            continue
        count += 1
        seen.add(fr)
        stack = [fr]
        while stack:
            x = stack.pop()
            for h in gens:
                y = tuple(h.apply(v) for v in x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def index_P_UL(r: int, field: FieldDesc, s: int) -> int:
    """[P_s : U L_s] by enumeration."""
    P = group_elements("P", r, field, s)
    U = group_elements("U", r, field)
    L = group_elements("L", r, field, s)
    UL = {u * l for u in U for l in L}
    if len(P) % len(UL):
        raise ConsistencyError("U L_s does not divide P_s")
    return len(P) // len(UL)


def standard_generators(kind: str, r: int, field: FieldDesc) -> List[GroupElem]:
    """Small generating sets: transvections (and a diagonal element for GL)."""
    q = field.q
    # 1, g, ..., g^{e-1} span F_q over F_p
    basis_scalars = [field.pow(field.primitive, i) for i in range(field.e)] if q > 2 else [1]
    gens = []

    def elementary(i, j, a):
        M = [list(unit_vector(r, k)) for k in range(r)]
        M[i][j] = a
        return GroupElem(field, tuple(tuple(row) for row in M))

    if kind == "U":
        for i in range(r - 1):
            for j in range(i + 1, r):
                for a in basis_scalars:
                    gens.append(elementary(i, j, a))
        return gens or [GroupElem.identity(field, r)]
    if kind in ("SL", "GL"):
        for i in range(r):
            for j in range(r):
                if i != j:
                    for a in basis_scalars:
                        gens.append(elementary(i, j, a))
        if kind == "GL" and q > 2:
            M = [list(unit_vector(r, k)) for k in range(r)]
            M[0][0] = field.primitive
            gens.append(GroupElem(field, tuple(tuple(row) for row in M)))
        return gens or [GroupElem.identity(field, r)]
    raise ValueError(f"no standard generators for {kind!r}")


def p_subgroups(G: Sequence[GroupElem]) -> List[List[GroupElem]]:
    """All subgroups of p-power order (the unipotent subgroups) of an enumerated group."""
    if not G:
        return []
    field, r = G[0].field, G[0].r
    p = field.p
    max_p_order = p ** factorint(len(G)).get(p, 0)
    p_elems = [g for g in G if g.has_p_power_order() and not g.is_identity()]
    one = GroupElem.identity(field, r)

    found: Dict[FrozenSet[GroupElem], List[GroupElem]] = {frozenset([one]): []}
    frontier = [frozenset([one])]
    while frontier:
        nxt = []
        for H in frontier:
            for g in p_elems:
                if g in H:
                    continue
                gens = found[H] + [g]
                try:
                    closure = subgroup_closure(gens, cap=max_p_order)
                except InfeasibleError:
                    continue
                size = len(closure)
                if set(factorint(size)) - {p}:
                    continue
                key = frozenset(closure)
                if key not in found:
                    found[key] = gens
                    nxt.append(key)
        frontier = nxt
    out = [sorted(H, key=lambda x: x.matrix) for H in found]
    out.sort(key=lambda H: (len(H), [x.matrix for x in H]))
    logger.info(f"Found {len(out)} p-subgroups in a group of order {len(G)}")
    return out


def small_generators(kind: str, r: int, field: FieldDesc, seed: int = 0,
                     attempts: int = 64) -> List[GroupElem]:
    """A short generating set: root elements for U, a seeded random pair for GL and SL."""
    q = field.q
    if kind == "U":
        basis_scalars = [field.pow(field.primitive, i) for i in range(field.e)] if q > 2 else [1]
        gens = []
        for i in range(r - 1):
            for a in basis_scalars:
                M = [list(unit_vector(r, k)) for k in range(r)]
                M[i][i + 1] = a
                gens.append(GroupElem(field, tuple(tuple(row) for row in M)))
        return gens or [GroupElem.identity(field, r)]
    if kind not in ("GL", "SL"):
        raise ValueError(f"no small generators for {kind!r}")
    order = gl_order(r, q) // (q - 1 if kind == "SL" else 1)
    if order == 1:
        return [GroupElem.identity(field, r)]
    rng = np.random.default_rng(seed)

    def random_element() -> GroupElem:
        while True:
            M = [[int(a) for a in row] for row in rng.integers(0, q, size=(r, r))]
            g = GroupElem(field, tuple(tuple(row) for row in M))
            d = g.det()
            if not d:
                continue
            if kind == "SL":
                M[0] = [field.mul(field.inv(d), a) for a in M[0]]
                g = GroupElem(field, tuple(tuple(row) for row in M))
            return g

    for _ in range(attempts):
        pair = [random_element(), random_element()]
        try:
            if len(subgroup_closure(pair, cap=order)) == order:
                return pair
        except InfeasibleError:
            continue
    logger.warning(f"No generating pair found for {kind}_{r}(F_{q}); using transvections")
    return standard_generators(kind, r, field)
