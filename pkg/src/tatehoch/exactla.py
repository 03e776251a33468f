"""Exact dense linear algebra over the rationals and prime fields.

Matrices are numpy arrays.  Over F_p they hold int64 residues in [0, p)
(object dtype for very large p); over Q they hold Fraction objects.
Matrices act on column vectors; a Subspace keeps its basis as rows.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_SMALL_PRIME = 1 << 20


class LinAlgError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _float_matmul(a, b, p):
    # exact through float64 BLAS: each partial sum stays below 2^53
    k = a.shape[1]
    chunk = max(1, (1 << 52) // ((p - 1) ** 2 or 1))
    af, bf = a.astype(np.float64), b.astype(np.float64)
    if k <= chunk:
        return np.fmod(af @ bf, p).astype(np.int64)
    out = None
    for s in range(0, k, chunk):
        part = np.fmod(af[:, s:s + chunk] @ bf[s:s + chunk], p)
        out = part if out is None else np.fmod(out + part, p)
    return out.astype(np.int64)


class Field:
    """The ground field: rationals (p is None) or F_p."""

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise LinAlgError(f"{p} is not prime")
        self.p = p
        if p is None:
            self.dtype = object
        elif p < _SMALL_PRIME:
            self.dtype = np.int64
        else:
            self.dtype = object

    @classmethod
    def rationals(cls):
        return cls(None)

    @classmethod
    def prime(cls, p):
        return cls(p)

    @property
    def kind(self):
        return "rationals" if self.p is None else "prime"

    @property
    def char(self):
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F{self.p}"

    # scalars

    def scalar(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p is None:
            x = Fraction(x)
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / x
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def neg(self, x):
        return self.scalar(-x)

    # arrays

    def array(self, data):
        a = np.array(data, dtype=object)
        if a.ndim == 0:
            return self.scalar(a.item())
        flat = [self.scalar(x) for x in a.ravel()]
        out = np.empty(len(flat), dtype=self.dtype)
        out[:] = flat
        return out.reshape(a.shape)

    def zeros(self, *shape):
        if self.dtype is object:
            a = np.empty(shape, dtype=object)
            a.fill(Fraction(0) if self.p is None else 0)
            return a
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.scalar(1)
        return a

    def reduce(self, a):
        """Bring an integer-valued array back into canonical residues."""
        if self.p is None:
            return a
        return a % self.p

    def matmul(self, a, b):
        if self.dtype is np.int64 and a.ndim == 2 and b.ndim >= 1 and a.size and b.size:
            return _float_matmul(a % self.p, b % self.p, self.p)
        return self.reduce(a @ b)

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(self.scalar(c) * a)

    def is_zero(self, a):
        return not np.any(a != 0)

    def to_list(self, a):
        """Plain Python nested lists (ints or "n/d" strings) for reports."""
        def conv(x):
            if self.p is None:
                x = Fraction(x)
                return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            return int(x)
        if np.ndim(a) == 0:
            return conv(a)
        return [self.to_list(r) if np.ndim(r) else conv(r) for r in a]


def _as_matrix(F, m):
    if isinstance(m, np.ndarray) and (m.dtype == F.dtype or F.dtype is object):
        if m.ndim == 2:
            return m
    a = F.array(m)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def rref(F, m):
    """Reduced row-echelon form and pivot columns (first nonzero pivot)."""
    a = _as_matrix(F, m).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        piv = a[r, c]
        if p is None:
            if piv != 1:
                a[r] = a[r] / piv
        else:
            if piv != 1:
                a[r] = a[r] * F.inv(piv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            upd = np.outer(col[hit], a[r])
            if p is None:
                a[hit] = a[hit] - upd
            else:
                a[hit] = (a[hit] - upd) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(F, m):
    m = _as_matrix(F, m)
    if m.size == 0:
        return 0
    return len(rref(F, m)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F^ambient_dim spanned by the (independent) rows of basis."""
    field: Field
    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[0]

    @classmethod
    def span(cls, F, vectors, ambient_dim):
        vectors = _as_matrix(F, vectors) if len(vectors) else F.zeros(0, ambient_dim)
        if vectors.shape[0] == 0:
            return cls(F, ambient_dim, F.zeros(0, ambient_dim))
        r, piv = rref(F, vectors)
        return cls(F, ambient_dim, r[: len(piv)])

    @classmethod
    def zero(cls, F, n):
        return cls(F, n, F.zeros(0, n))

    @classmethod
    def full(cls, F, n):
        return cls(F, n, F.eye(n))

    def contains(self, vectors):
        vectors = _as_matrix(self.field, vectors)
        if vectors.shape[0] == 0:
            return True
        if self.dim == 0:
            return self.field.is_zero(vectors)
        both = np.vstack([self.basis, vectors])
        return rank(self.field, both) == self.dim

    def contains_space(self, other):
        return self.contains(other.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.dim == other.dim and self.contains_space(other))

    __hash__ = None

    def coordinates(self, vectors):
        """Coordinates (rows) of vectors (rows) in this basis; raises if outside."""
        F = self.field
        vectors = _as_matrix(F, vectors)
        if self.dim == 0:
            if not F.is_zero(vectors):
                raise LinAlgError("vector outside subspace")
            return F.zeros(vectors.shape[0], 0)
        x = solve(F, self.basis.T, vectors.T)
        if x is None:
            raise LinAlgError("vector outside subspace")
        return x.T


def kernel(F, m):
    """Null space {x : m x = 0}."""
    m = _as_matrix(F, m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return Subspace.full(F, cols)
    r, piv = rref(F, m)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = F.zeros(len(free), cols)
    one = F.scalar(1)
    for k, c in enumerate(free):
        basis[k, c] = one
        for i, pc in enumerate(piv):
            basis[k, pc] = F.neg(r[i, c])
    return Subspace(F, cols, basis)


def image(F, m):
    """Column space of m."""
    m = _as_matrix(F, m)
    rows, cols = m.shape
    if cols == 0:
        return Subspace.zero(F, rows)
    return Subspace.span(F, m.T, rows)


def solve(F, m, b):
    """A solution x of m x = b (b a vector or a matrix of columns), or None."""
    m = _as_matrix(F, m)
    vec = np.ndim(b) == 1
    b = F.array(b) if not isinstance(b, np.ndarray) else b
    if vec:
        b = b.reshape(-1, 1)
    rows, cols = m.shape
    nrhs = b.shape[1]
    if rows == 0:
        x = F.zeros(cols, nrhs)
        return x[:, 0] if vec else x
    aug = np.hstack([m, b])
    r, piv = rref(F, aug)
    if piv and piv[-1] >= cols:
        return None
    x = F.zeros(cols, nrhs)
    for i, pc in enumerate(piv):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


@dataclass(frozen=True, eq=False)
class Quotient:
    """V/W with coset representatives and the projection onto them.

    projection is a (dim x ambient) matrix sending x in V to the
    coordinates of its class in the representative basis.
    """
    dim: int
    projection: np.ndarray
    representatives: Subspace

    def __iter__(self):
        return iter((self.dim, self.projection))


def quotient(F, v, w):
    """Quotient v/w, representatives the lexicographically first complement."""
    if v.ambient_dim != w.ambient_dim:
        raise LinAlgError("ambient dimension mismatch")
    if not v.contains_space(w):
        raise LinAlgError("w is not contained in v")
    n = v.ambient_dim
    if w.dim:
        rw, pw = rref(F, w.basis)
        rw = rw[: len(pw)]
        red = F.sub(v.basis, F.matmul(v.basis[:, pw], rw)) if v.dim else v.basis
    else:
        rw, pw = F.zeros(0, n), []
        red = v.basis
    comp = Subspace.span(F, red, n) if v.dim else Subspace.zero(F, n)
    if comp.dim:
        _, pc = rref(F, comp.basis)
    else:
        pc = []
    q = len(pc)
    proj = F.zeros(q, n)
    for k, c in enumerate(pc):
        proj[k, c] = F.scalar(1)
    if q and pw:
        # x' = x - sum_k x[pw[k]] rw[k];  coordinates = x'[pc]
        corr = rw[:, pc].T
        for j, c in enumerate(pw):
            proj[:, c] = F.sub(proj[:, c], corr[:, j])
    return Quotient(q, proj, comp)


def intersect(F, v, w):
    if v.ambient_dim != w.ambient_dim:
        raise LinAlgError("ambient dimension mismatch")
    n = v.ambient_dim
    if v.dim == 0 or w.dim == 0:
        return Subspace.zero(F, n)
    stacked = np.hstack([v.basis.T, F.reduce(-w.basis.T)])
    k = kernel(F, stacked)
    if k.dim == 0:
        return Subspace.zero(F, n)
    alpha = k.basis[:, : v.dim]
    return Subspace.span(F, F.matmul(alpha, v.basis), n)


def sum_spaces(F, v, w):
    return Subspace.span(F, np.vstack([v.basis, w.basis]), v.ambient_dim)


def inverse(F, m):
    m = _as_matrix(F, m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise LinAlgError("inverse of a non-square matrix")
    x = solve(F, m, F.eye(n))
    if x is None:
        raise LinAlgError("singular matrix")
    return x

