"""Bimodules over A stored as left/right action matrices.

left[i] is the action of u_i on the left, right[i] the action of u_i on
the right.  Free bimodules A^e^r use coordinates (j, a, b) at index
j*n*n + a*n + b for the element u_a g_j u_b.
"""
from dataclasses import dataclass

import numpy as np

from .errors import MathError
from .exactla import Subspace, image, kernel, quotient, solve


class Bimodule:
    def __init__(self, algebra, dim, left, right, name="", check=True):
        self.algebra = algebra
        self.dim = dim
        self._left = left
        self._right = right
        self.name = name
        if check:
            self.check()

    @property
    def field(self):
        return self.algebra.field

    @property
    def left(self):
        return self._left

    @property
    def right(self):
        return self._right

    def check(self):
        a, F, d = self.algebra, self.field, self.dim
        n = a.dim
        L, R = self.left, self.right
        if L.shape != (n, d, d) or R.shape != (n, d, d):
            raise MathError("action matrices have the wrong shape")
        eye = F.eye(d)
        if not (np.array_equal(L[0], eye) and np.array_equal(R[0], eye)):
            raise MathError("the unit does not act as the identity")
        for i in range(n):
            for j in range(n):
                prod = a.table[i, j]
                if not np.array_equal(F.matmul(L[i], L[j]), F.reduce(np.tensordot(prod, L, axes=(0, 0)))):
                    raise MathError(f"left action not multiplicative on the pair ({i}, {j})")
                if not np.array_equal(F.matmul(R[j], R[i]), F.reduce(np.tensordot(prod, R, axes=(0, 0)))):
                    raise MathError(f"right action not multiplicative on the pair ({i}, {j})")
                if not np.array_equal(F.matmul(L[i], R[j]), F.matmul(R[j], L[i])):
                    raise MathError(f"left and right actions do not commute on the pair ({i}, {j})")

    def left_by(self, x):
        return self.field.reduce(np.tensordot(x, self.left, axes=(0, 0)))

    def right_by(self, x):
        return self.field.reduce(np.tensordot(x, self.right, axes=(0, 0)))

    def ae_action(self, a, b):
        """Action of u_a (x) u_b^o, i.e. m -> u_a m u_b."""
        return self.field.matmul(self.left[a], self.right[b])

    def ae_actions(self):
        """All n*n matrices L_a R_b stacked as [a, b, :, :]."""
        F = self.field
        return F.reduce(np.einsum("aij,bjk->abik", self.left, self.right))

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


class FreeBimodule(Bimodule):
    """A^e^rank with the standard (j, a, b) coordinates; actions built lazily."""

    def __init__(self, algebra, rank, name=""):
        n = algebra.dim
        super().__init__(algebra, rank * n * n, None, None, name or f"free({rank})", check=False)
        self.rank = rank

    @property
    def left(self):
        if self._left is None:
            F, n, r = self.field, self.algebra.dim, self.rank
            eye_r, eye_n = F.eye(r), F.eye(n)
            self._left = np.stack([np.kron(np.kron(eye_r, self.algebra.L[c]), eye_n) for c in range(n)])
        return self._left

    @property
    def right(self):
        if self._right is None:
            F, n, r = self.field, self.algebra.dim, self.rank
            eye_rn = F.eye(r * n)
            self._right = np.stack([np.kron(eye_rn, self.algebra.R[c]) for c in range(n)])
        return self._right


@dataclass(eq=False)
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    matrix: np.ndarray

    def check(self):
        F = self.source.field
        for i in range(self.source.algebra.dim):
            if not np.array_equal(F.matmul(self.matrix, self.source.left[i]),
                                  F.matmul(self.target.left[i], self.matrix)):
                raise MathError(f"map is not left linear for u{i}")
            if not np.array_equal(F.matmul(self.matrix, self.source.right[i]),
                                  F.matmul(self.target.right[i], self.matrix)):
                raise MathError(f"map is not right linear for u{i}")
        return self

    def __call__(self, x):
        return self.source.field.matmul(self.matrix, x)

    def compose(self, other):
        """self after other."""
        return BimoduleMap(other.source, self.target, self.source.field.matmul(self.matrix, other.matrix))


def bimodule(a, dim, left, right, name=""):
    F = a.field
    return Bimodule(a, dim, F.array(left).reshape(a.dim, dim, dim),
                    F.array(right).reshape(a.dim, dim, dim), name)


def regular(a):
    return Bimodule(a, a.dim, a.L, a.R, "A", check=False)


def zero_bimodule(a):
    F = a.field
    return Bimodule(a, 0, F.zeros(a.dim, 0, 0), F.zeros(a.dim, 0, 0), "0", check=False)


def twist(m, alpha, beta):
    """_alpha M _beta:  a * x * b = alpha(a) x beta(b)."""
    F = m.field
    left = F.reduce(np.tensordot(alpha.matrix.T, m.left, axes=(1, 0)))
    right = F.reduce(np.tensordot(beta.matrix.T, m.right, axes=(1, 0)))
    return Bimodule(m.algebra, m.dim, left, right, f"twist({m.name})", check=False)


def submodule(m, space, name=""):
    """The sub-bimodule spanned by a stable subspace, with its inclusion."""
    F, n = m.field, m.algebra.dim
    B = space.basis
    k = space.dim
    if k == 0:
        return zero_bimodule(m.algebra), BimoduleMap(zero_bimodule(m.algebra), m, F.zeros(m.dim, 0))
    inc = np.ascontiguousarray(B.T)
    acts = np.concatenate([F.reduce(np.einsum("cij,kj->cik", m.left, B)),
                           F.reduce(np.einsum("cij,kj->cik", m.right, B))], axis=0)
    # coordinates of every action image in the basis B
    rhs = np.concatenate(list(acts), axis=1)
    coords = solve(F, inc, rhs)
    if coords is None:
        raise MathError("subspace is not a sub-bimodule")
    coords = coords.reshape(k, 2 * n, k).transpose(1, 0, 2)
    sub = Bimodule(m.algebra, k, np.ascontiguousarray(coords[:n]), np.ascontiguousarray(coords[n:]),
                   name, check=False)
    return sub, BimoduleMap(sub, m, inc)


def quotient_module(m, space, name=""):
    """M / S for a sub-bimodule S, with the projection and representatives."""
    F, n = m.field, m.algebra.dim
    q = quotient(F, Subspace.full(F, m.dim), space)
    reps = q.representatives.basis.T
    P = q.projection
    left = np.stack([F.matmul(P, F.matmul(m.left[c], reps)) for c in range(n)]) if q.dim else F.zeros(n, 0, 0)
    right = np.stack([F.matmul(P, F.matmul(m.right[c], reps)) for c in range(n)]) if q.dim else F.zeros(n, 0, 0)
    Q = Bimodule(m.algebra, q.dim, left, right, name, check=False)
    return Q, BimoduleMap(m, Q, P), reps


def generated_submodule(m, vectors):
    """Smallest sub-bimodule containing the given vectors (rows)."""
    F = m.field
    if len(vectors) == 0:
        return Subspace.zero(F, m.dim)
    acts = m.ae_actions().reshape(-1, m.dim, m.dim)
    imgs = F.reduce(np.einsum("xij,kj->xki", acts, vectors)).reshape(-1, m.dim)
    return Subspace.span(F, imgs, m.dim)


def is_submodule(m, space):
    F = m.field
    if space.dim == 0:
        return True
    for c in range(m.algebra.dim):
        if not space.contains(F.matmul(space.basis, m.left[c].T)):
            return False
        if not space.contains(F.matmul(space.basis, m.right[c].T)):
            return False
    return True


def tensor_over_A(m, n):
    """M (x)_A N with its projection from the k-tensor M (x) N."""
    F, a = m.field, m.algebra
    dm, dn = m.dim, n.dim
    eye_m, eye_n = F.eye(dm), F.eye(dn)
    rel = [F.sub(np.kron(m.right[c], eye_n), np.kron(eye_m, n.left[c])) for c in range(1, a.dim)]
    rel_space = image(F, np.hstack(rel)) if rel else Subspace.zero(F, dm * dn)
    full = Bimodule(a, dm * dn,
                    np.stack([np.kron(m.left[c], eye_n) for c in range(a.dim)]),
                    np.stack([np.kron(eye_m, n.right[c]) for c in range(a.dim)]),
                    check=False)
    Q, proj, _ = quotient_module(full, rel_space, f"{m.name}(x)_A {n.name}")
    return Q, proj.matrix


def tensor_over_Ae(m, n):
    """M (x)_{A^e} N as a vector space: (b x a) (x) y = x (x) (a y b)."""
    F, a = m.field, m.algebra
    dm, dn = m.dim, n.dim
    eye_m, eye_n = F.eye(dm), F.eye(dn)
    rel = []
    for c in range(1, a.dim):
        rel.append(F.sub(np.kron(m.left[c], eye_n), np.kron(eye_m, n.right[c])))
        rel.append(F.sub(np.kron(m.right[c], eye_n), np.kron(eye_m, n.left[c])))
    rel_space = image(F, np.hstack(rel)) if rel else Subspace.zero(F, dm * dn)
    return quotient(F, Subspace.full(F, dm * dn), rel_space)


def hom_Ae(m, n):
    """All A^e-linear maps M -> N as a subspace of row-major flattened matrices."""
    F, a = m.field, m.algebra
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return Subspace.zero(F, dm * dn)
    eye_m, eye_n = F.eye(dm), F.eye(dn)
    cons = []
    for c in range(1, a.dim):
        # X L^m - L^n X = 0 (row-major vec: vec(XB) = (I (x) B^T) vec X)
        cons.append(F.sub(np.kron(eye_n, m.left[c].T), np.kron(n.left[c], eye_m)))
        cons.append(F.sub(np.kron(eye_n, m.right[c].T), np.kron(n.right[c], eye_m)))
    if not cons:
        return Subspace.full(F, dm * dn)
    return kernel(F, np.vstack(cons))


def hom_basis(m, n):
    h = hom_Ae(m, n)
    return [h.basis[k].reshape(n.dim, m.dim) for k in range(h.dim)]


def k_dual(m):
    """D(M) = Hom_k(M, k) with (a f)(x) = f(x a) and (f a)(x) = f(a x)."""
    left = np.ascontiguousarray(np.transpose(m.right, (0, 2, 1)))
    right = np.ascontiguousarray(np.transpose(m.left, (0, 2, 1)))
    return Bimodule(m.algebra, m.dim, left, right, f"D({m.name})", check=False)


def direct_sum(m, n):
    F, a = m.field, m.algebra
    d = m.dim + n.dim
    left, right = F.zeros(a.dim, d, d), F.zeros(a.dim, d, d)
    left[:, : m.dim, : m.dim] = m.left
    left[:, m.dim:, m.dim:] = n.left
    right[:, : m.dim, : m.dim] = m.right
    right[:, m.dim:, m.dim:] = n.right
    return Bimodule(a, d, left, right, f"{m.name}+{n.name}", check=False)


def norm_map(m, f):
    """N(x) = sum_i u_i x v_i."""
    F = m.field
    out = F.zeros(m.dim, m.dim)
    for i in range(m.algebra.dim):
        out = out + F.matmul(m.left[i], m.right_by(f.dual_basis[i]))
    return F.reduce(out)


def norm_prime_map(m, f):
    """N'(x) = sum_i u_i x nu(v_i)."""
    F = m.field
    out = F.zeros(m.dim, m.dim)
    for i in range(m.algebra.dim):
        out = out + F.matmul(m.left[i], m.right_by(f.nakayama(f.dual_basis[i])))
    return F.reduce(out)


@dataclass(eq=False)
class InvariantSpaces:
    M_A: Subspace
    N_image: Subspace
    N_kernel: Subspace
    I_space: Subspace


def centralizer(m):
    F = m.field
    if m.dim == 0:
        return Subspace.zero(F, 0)
    if m.algebra.dim == 1:
        return Subspace.full(F, m.dim)
    return kernel(F, np.vstack([F.sub(m.left[c], m.right[c]) for c in range(1, m.algebra.dim)]))


def commutator_space(m, alpha=None):
    """span{ x alpha(a) - a x }; alpha = None means the identity."""
    F, a = m.field, m.algebra
    if m.dim == 0:
        return Subspace.zero(F, 0)
    mats = []
    for c in range(a.dim):
        r = m.right[c] if alpha is None else m.right_by(alpha.matrix[:, c])
        mats.append(F.sub(r, m.left[c]))
    return image(F, np.hstack(mats))


def invariant_spaces(m, f):
    F = m.field
    N = norm_map(m, f)
    inv = InvariantSpaces(centralizer(m), image(F, N), kernel(F, N),
                          commutator_space(m, f.nakayama_inv))
    if not inv.M_A.contains_space(inv.N_image):
        raise MathError("norm image is not central")
    if not inv.N_kernel.contains_space(inv.I_space):
        raise MathError("I_A(M) is not inside the kernel of the norm")
    return inv


def _solve_weak(m, f, side):
    F, a, d = m.field, m.algebra, m.dim
    eye = F.eye(d)
    # linearity constraints on g (row-major vec)
    cons = []
    for c in range(1, a.dim):
        act = m.right[c] if side == "right" else m.left[c]
        cons.append(F.sub(np.kron(eye, act.T), np.kron(act, eye)))
    total = F.zeros(d * d, d * d)
    for i in range(a.dim):
        u, v = a.basis_vector(i), f.dual_basis[i]
        if side == "right":
            # (u g v)(x) = u g(v x)
            P, Q = m.left_by(u), m.left_by(v)
        else:
            # (u g v)(x) = g(x u) v
            P, Q = m.right_by(v), m.right_by(u)
        total = total + np.kron(P, Q.T)
    total = F.reduce(total)
    rows = cons + [total]
    rhs = [F.zeros(d * d) for _ in cons] + [eye.reshape(-1)]
    return solve(F, np.vstack(rows), np.concatenate(rhs))


def is_weakly_projective(m, f):
    if m.dim == 0:
        return True
    return _solve_weak(m, f, "right") is not None or _solve_weak(m, f, "left") is not None


@dataclass(eq=False)
class ShortExact:
    name: str
    sub: Bimodule
    middle: Bimodule
    quot: Bimodule
    inc: BimoduleMap
    proj: BimoduleMap


def _outer_tensor(m, first_is_A):
    a, F = m.algebra, m.field
    n, d = a.dim, m.dim
    if first_is_A:
        left = np.stack([np.kron(a.L[c], F.eye(d)) for c in range(n)])
        right = np.stack([np.kron(F.eye(n), m.right[c]) for c in range(n)])
        name = f"A(x){m.name}"
    else:
        left = np.stack([np.kron(m.left[c], F.eye(n)) for c in range(n)])
        right = np.stack([np.kron(F.eye(d), a.R[c]) for c in range(n)])
        name = f"{m.name}(x)A"
    return Bimodule(a, n * d, left, right, name, check=False)


def outer_tensor_A(m):
    """A (x) M with a(x (x) y)b = ax (x) yb."""
    return _outer_tensor(m, True)


def _hom_k(m, right_sided):
    """Hom_k(A_A, M_A) (right_sided) or Hom_k(_A A, _A M); f stored by columns f(u_x).

    index x*dim(M) + i.  Right-sided: (a f b)(x) = f(x a) b.
    Left-sided: (a f b)(x) = a f(b x).
    """
    a, F = m.algebra, m.field
    n, d = a.dim, m.dim
    eye_d, eye_n = F.eye(d), F.eye(n)
    if right_sided:
        # (a f)(u_x) = sum_k c[x,a,k] f(u_k): coordinate block x <- k with weight c[x,a,k]
        left = np.stack([np.kron(np.ascontiguousarray(a.table[:, c, :]), eye_d) for c in range(n)])
        right = np.stack([np.kron(eye_n, m.right[c]) for c in range(n)])
    else:
        left = np.stack([np.kron(eye_n, m.left[c]) for c in range(n)])
        right = np.stack([np.kron(np.ascontiguousarray(a.table[c, :, :]), eye_d) for c in range(n)])
    return Bimodule(a, n * d, F.reduce(left), F.reduce(right),
                    "Hom_k(A_A,M_A)" if right_sided else "Hom_k(_AA,_AM)", check=False)


def shift_sequences(m, f, check=True):
    """The four short exact sequences with weakly projective middle terms."""
    a, F = m.algebra, m.field
    n, d = a.dim, m.dim
    out = {}
    # 0 -> K(M) -> A (x) M -> M -> 0,  x (x) y -> x y
    mid = _outer_tensor(m, True)
    mu = F.zeros(d, n * d)
    for x in range(n):
        mu[:, x * d:(x + 1) * d] = m.left[x]
    sub, inc = submodule(mid, kernel(F, mu), f"K({m.name})")
    out["K"] = ShortExact("K", sub, mid, m, inc, BimoduleMap(mid, m, mu))
    # 0 -> K'(M) -> M (x) A -> M -> 0,  y (x) x -> y x
    mid = _outer_tensor(m, False)
    mu = F.zeros(d, d * n)
    for i in range(d):
        for x in range(n):
            mu[:, i * n + x] = m.right[x][:, i]
    sub, inc = submodule(mid, kernel(F, mu), f"K'({m.name})")
    out["K'"] = ShortExact("K'", sub, mid, m, inc, BimoduleMap(mid, m, mu))
    # 0 -> M -> Hom_k(A_A, M_A) -> C(M) -> 0,  y -> (x -> x y)
    mid = _hom_k(m, True)
    emb = np.vstack([m.left[x] for x in range(n)])
    Q, proj, _ = quotient_module(mid, image(F, emb), f"C({m.name})")
    out["C"] = ShortExact("C", m, mid, Q, BimoduleMap(m, mid, emb), proj)
    # 0 -> M -> Hom_k(_A A, _A M) -> C'(M) -> 0,  y -> (x -> y x)
    mid = _hom_k(m, False)
    emb = np.vstack([m.right[x] for x in range(n)])
    Q, proj, _ = quotient_module(mid, image(F, emb), f"C'({m.name})")
    out["C'"] = ShortExact("C'", m, mid, Q, BimoduleMap(m, mid, emb), proj)
    if check:
        for s in out.values():
            verify_short_exact(s)
            if not is_weakly_projective(s.middle, f):
                raise MathError(f"middle term of the {s.name} sequence is not weakly projective")
    return out


def verify_short_exact(s):
    F = s.middle.field
    s.middle.check()
    s.inc.check()
    s.proj.check()
    if s.sub.dim + s.quot.dim != s.middle.dim:
        raise MathError(f"{s.name}: dimensions do not add up")
    if kernel(F, s.inc.matrix).dim != 0:
        raise MathError(f"{s.name}: inclusion not injective")
    if image(F, s.proj.matrix).dim != s.quot.dim:
        raise MathError(f"{s.name}: projection not surjective")
    if not F.is_zero(F.matmul(s.proj.matrix, s.inc.matrix)):
        raise MathError(f"{s.name}: composite is not zero")


def t1_map(f):
    """t_1: _1 A_nu -> D(A), x -> <-, x>, as a matrix."""
    return f.gram.copy()


def t2_map(f):
    """t_2: x -> [y -> sum_i y u_i nu(x) (x) v_i], as the value on y = 1 in A (x) A."""
    a, F = f.algebra, f.algebra.field
    n = a.dim
    mat = F.zeros(n * n, n)
    for x in range(n):
        nx = f.nakayama(a.basis_vector(x))
        for i in range(n):
            left = a.mul(a.basis_vector(i), nx)
            mat[:, x] = F.add(mat[:, x], np.kron(left, f.dual_basis[i]))
    return mat
