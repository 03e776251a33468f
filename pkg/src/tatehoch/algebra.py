"""Finite-dimensional algebras given by structure constants.

table[i, j, k] is the coefficient of u_k in u_i u_j; u_0 is the unit.
"""
from dataclasses import dataclass

import numpy as np

from .errors import MathError, RadicalUnavailable, SpecError
from .exactla import Field, Subspace, inverse, kernel, rank


class Algebra:
    def __init__(self, field, table, labels=None, name="", check=True):
        self.field = field
        self.table = table
        self.dim = table.shape[0]
        self.labels = list(labels) if labels else [f"e{i}" for i in range(self.dim)]
        self.name = name
        self.unit_index = 0
        self._L = self._R = None
        if check:
            self.check()

    def check(self):
        F, n, c = self.field, self.dim, self.table
        if c.shape != (n, n, n):
            raise MathError(f"table has shape {c.shape}, expected {(n, n, n)}")
        one = F.zeros(n)
        one[0] = F.scalar(1)
        for i in range(n):
            e = F.zeros(n)
            e[i] = F.scalar(1)
            if not (np.array_equal(c[0, i], e) and np.array_equal(c[i, 0], e)):
                raise MathError(f"basis element 0 is not a two-sided unit (fails on u{i})")
        # (u_i u_j) u_k = u_i (u_j u_k) for all triples
        lhs = F.reduce(np.einsum("ijs,skt->ijkt", c, c))
        rhs = F.reduce(np.einsum("jks,ist->ijkt", c, c))
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if len(bad):
            i, j, k = (int(x) for x in bad[0])
            raise MathError(f"multiplication is not associative on the triple ({i}, {j}, {k})")

    @property
    def one(self):
        e = self.field.zeros(self.dim)
        e[0] = self.field.scalar(1)
        return e

    def basis_vector(self, i):
        e = self.field.zeros(self.dim)
        e[i] = self.field.scalar(1)
        return e

    def mul(self, x, y):
        return self.field.reduce(np.einsum("i,j,ijk->k", x, y, self.table))

    @property
    def L(self):
        """L[i] is the matrix of left multiplication by u_i."""
        if self._L is None:
            self._L = np.ascontiguousarray(np.transpose(self.table, (0, 2, 1)))
        return self._L

    @property
    def R(self):
        """R[j] is the matrix of right multiplication by u_j."""
        if self._R is None:
            self._R = np.ascontiguousarray(np.transpose(self.table, (1, 2, 0)))
        return self._R

    def left_matrix(self, x):
        return self.field.reduce(np.tensordot(x, self.L, axes=(0, 0)))

    def right_matrix(self, x):
        return self.field.reduce(np.tensordot(x, self.R, axes=(0, 0)))

    def is_commutative(self):
        return np.array_equal(self.table, np.transpose(self.table, (1, 0, 2)))

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field!r})"


class Automorphism:
    def __init__(self, algebra, matrix, check=True):
        self.algebra = algebra
        self.matrix = matrix
        if check:
            self.check()

    def check(self):
        a, F = self.algebra, self.algebra.field
        m = self.matrix
        if rank(F, m) != a.dim:
            raise MathError("automorphism matrix is singular")
        if not np.array_equal(m[:, 0], a.one):
            raise MathError("automorphism does not fix the unit")
        # alpha(u_i u_j) = alpha(u_i) alpha(u_j)
        lhs = F.reduce(np.einsum("ijk,lk->ijl", a.table, m))
        rhs = F.reduce(np.einsum("si,tj,stl->ijl", m, m, a.table))
        bad = np.argwhere(np.any(lhs != rhs, axis=2))
        if len(bad):
            i, j = (int(x) for x in bad[0])
            raise MathError(f"map is not multiplicative on the pair ({i}, {j})")

    def __call__(self, x):
        return self.algebra.field.matmul(self.matrix, x)

    def inverse(self):
        return Automorphism(self.algebra, inverse(self.algebra.field, self.matrix), check=False)

    def compose(self, other):
        """self after other."""
        return Automorphism(self.algebra, self.algebra.field.matmul(self.matrix, other.matrix), check=False)

    def is_identity(self):
        return np.array_equal(self.matrix, self.algebra.field.eye(self.algebra.dim))

    def order(self, bound=64):
        cur = self
        for k in range(1, bound + 1):
            if cur.is_identity():
                return k
            cur = cur.compose(self)
        return None


def identity_automorphism(a):
    return Automorphism(a, a.field.eye(a.dim), check=False)


def make_algebra(field, table, labels=None, name=""):
    t = field.array(table)
    return Algebra(field, t, labels, name)


def opposite(a):
    return Algebra(a.field, np.ascontiguousarray(np.transpose(a.table, (1, 0, 2))),
                   [f"{l}^o" for l in a.labels], f"{a.name}^op", check=False)


def enveloping(a):
    """A (x) A^op with basis u_i (x) u_j^o at index i*dim + j."""
    n, c, F = a.dim, a.table, a.field
    # (u_i (x) u_j^o)(u_k (x) u_l^o) = u_i u_k (x) (u_l u_j)^o
    t = F.reduce(np.einsum("iks,ljt->ijklst", c, c)).reshape(n * n, n * n, n * n)
    labels = [f"{a.labels[i]}*{a.labels[j]}^o" for i in range(n) for j in range(n)]
    return Algebra(F, t, labels, f"{a.name}^e", check=False)


@dataclass(eq=False)
class FrobeniusData:
    algebra: Algebra
    lam: np.ndarray
    gram: np.ndarray
    dual_basis: np.ndarray
    nakayama: Automorphism
    nakayama_inv: Automorphism

    @property
    def lambda_(self):
        return self.lam

    def pairing(self, x, y):
        return self.algebra.field.reduce(x @ self.gram @ y)

    def u(self, i):
        return self.algebra.basis_vector(i)

    def v(self, i):
        return self.dual_basis[i]


def frobenius(a, lam):
    """Frobenius data for the form <x, y> = lam(xy)."""
    F = a.field
    lam = F.array(lam)
    if lam.shape != (a.dim,):
        raise MathError("functional has the wrong length")
    gram = F.reduce(np.tensordot(a.table, lam, axes=(2, 0)))
    if rank(F, gram) != a.dim:
        raise MathError("the form lambda(xy) is degenerate (gram matrix singular)")
    ginv = inverse(F, gram)
    # <v_i, u_j> = delta_ij  =>  V gram = I
    dual = ginv
    # <u_i, u_j> = <u_j, nu(u_i)>  =>  gram^T = gram N
    nmat = F.matmul(ginv, gram.T)
    try:
        nu = Automorphism(a, nmat)
    except MathError as e:
        raise MathError(f"Nakayama map is not an automorphism: {e}")
    f = FrobeniusData(a, lam, gram, dual, nu, nu.inverse())
    check_frobenius(f)
    return f


def check_frobenius(f):
    a, F = f.algebra, f.algebra.field
    n = a.dim
    g = f.gram
    if not np.array_equal(F.matmul(f.dual_basis, g), F.eye(n)):
        raise MathError("dual basis check failed")
    if not np.array_equal(F.matmul(g, f.nakayama.matrix), g.T):
        raise MathError("Nakayama identity <a,b> = <b,nu(a)> failed")
    # <ab, c> = <a, bc>
    left = F.reduce(np.einsum("ijs,sk->ijk", a.table, g))
    right = F.reduce(np.einsum("jks,is->ijk", a.table, g))
    if not np.array_equal(left, right):
        raise MathError("form is not associative")


def is_symmetric(f):
    return bool(np.array_equal(f.gram, f.gram.T))


@dataclass(eq=False)
class RadicalData:
    basis: Subspace
    nilpotency_index: int

    @property
    def dim(self):
        return self.basis.dim


def _product_space(a, x, y):
    F = a.field
    if x.dim == 0 or y.dim == 0:
        return Subspace.zero(F, a.dim)
    prods = F.reduce(np.einsum("ai,bj,ijk->abk", x.basis, y.basis, a.table)).reshape(-1, a.dim)
    return Subspace.span(F, prods, a.dim)


def radical(a):
    """Jacobson radical via the trace form; needs char 0 or p > dim."""
    F = a.field
    if F.p is not None and F.p <= a.dim:
        raise RadicalUnavailable(
            f"radical needs characteristic 0 or p > dim (p = {F.p}, dim = {a.dim})")
    c = a.table
    tr = F.reduce(np.einsum("kaa->k", c))          # trace of L_{u_k}
    form = F.reduce(np.tensordot(c, tr, axes=(2, 0)))  # form[i, j] = tr(L_{u_i u_j})
    rad = kernel(F, form.T)
    full = Subspace.full(F, a.dim)
    if not (full.contains_space(_product_space(a, full, rad))
            and rad.contains_space(_product_space(a, full, rad))
            and rad.contains_space(_product_space(a, rad, full))):
        raise MathError("trace radical is not an ideal")
    power, index = rad, 1
    while power.dim:
        power = _product_space(a, power, rad)
        index += 1
        if index > a.dim + 1:
            raise MathError("trace radical is not nilpotent")
    return RadicalData(rad, index)


def parse_algebra(text):
    """Parse an algebra spec file (TOML text) into an Algebra."""
    from .specfile import load_spec_text
    return load_spec_text(text).algebra


def field_from_name(name):
    name = str(name).strip()
    if name in ("Q", "QQ"):
        return Field.rationals()
    if name.startswith("F") and name[1:].isdigit():
        return Field.prime(int(name[1:]))
    raise SpecError(f"unknown field {name!r}; expected 'Q' or 'F<p>'")
