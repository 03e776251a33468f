"""Tate-Hochschild cup and cap products.

Two engines:
  stable (Eu-Schedler): classes are maps Omega^i A -> M modulo maps through
      projectives and f cup g = f o Omega^i(g), with Omega^i(g) read off a
      chain map lifting g along the syzygy chain;
  diagonal: an explicit diagonal approximation of the complete bar window T,
      built degree by degree from contracting homotopies.
A comparison chain map T -> (syzygy window) identifies the two.
"""
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import identity_automorphism
from .bimod import regular, shift_sequences, tensor_over_A, twist
from .complex import (apply_first, apply_second, block_extension, extend_along_free,
                      free_images_to_matrix, hom_complex, lift_chain_map, solve_generators,
                      tensor_over_Ae, _generator_columns)
from .errors import MathError, PropertyFailure, WindowError
from .exactla import kernel, rank, solve
from .tate import (complete_bar_window, stable_hom, stable_tensor, syzygies, tate_cohomology,
                   tate_homology, _tensor_map)


# ---------------------------------------------------------------- homotopies of T

def _left_extension(alg, dmat, phi, r_k, r_km1):
    """Left A-linear X : T_{k-1} -> T_k with X d_k = phi (phi : T_k -> T_k).

    Both sides are left linear, so it suffices to match them on the left
    generators g u_b of T_k; the unknowns are the values of X on the left
    generators of T_{k-1}.
    """
    F, n = alg.field, alg.dim
    cols = [(g * n) * n + b for g in range(r_k) for b in range(n)]
    T = len(cols)
    # D[t, (g, beta), alpha]: d_k(left generator t) = sum c u_alpha (g u_beta)
    D = dmat[:, cols].reshape(r_km1, n, n, T).transpose(3, 0, 2, 1).reshape(T, r_km1 * n, n)
    Y = phi[:, cols].reshape(r_k, n, n, T).transpose(3, 1, 0, 2).reshape(T * n, r_k * n)
    M = F.reduce(np.einsum("tja,aAx->tAjx", D, alg.L, optimize=True)).reshape(T * n, r_km1 * n * n)
    X = solve(F, M, Y)
    if X is None:
        raise MathError("no left-linear contracting homotopy at this degree")
    X = X.reshape(r_km1, n, n, r_k, n)                       # [g, beta, alpha, g'', beta'']
    H = np.einsum("aAx,gbxhc->hAcgab", alg.L, X, optimize=True)
    return F.reduce(H).reshape(r_k * n * n, r_km1 * n * n)


def left_contraction(t):
    """Left A-linear h_k : T_k -> T_{k+1} with d h + h d = id on lo < k < hi.

    h_k is the bar extra degeneracy for k >= 0; below, h_{k-1} solves
    h_{k-1} d_k = id - d_{k+1} h_k, starting from h_{-1} d_0 = id - d_1 h_0.
    """
    F = t.field
    alg = t.algebra
    h = {k: t.bar.left_homotopy(k) for k in range(0, t.hi)}
    for k in range(0, t.lo, -1):
        dim = t.component(k).dim
        phi = F.eye(dim)
        if k in h and t.has_d(k + 1):
            phi = F.sub(phi, F.matmul(t.d(k + 1), h[k]))
        h[k - 1] = _left_extension(alg, t.d(k), phi, t.rank(k), t.rank(k - 1))
    return h


def verify_contraction(t, h):
    """d h_k + h_{k-1} d_k = id inside the window, and h is left A-linear."""
    F = t.field
    alg = t.algebra
    for k in range(t.lo + 1, t.hi):
        lhs = F.add(F.matmul(t.d(k + 1), h[k]), F.matmul(h[k - 1], t.d(k)))
        if not np.array_equal(lhs, F.eye(t.component(k).dim)):
            raise MathError(f"contracting homotopy fails at degree {k}")
    for k, hk in h.items():
        src, tgt = t.component(k), t.component(k + 1)
        for c in range(alg.dim):
            if not np.array_equal(F.matmul(hk, src.left[c]), F.matmul(tgt.left[c], hk)):
                raise MathError(f"h_{k} is not left linear")
    return True


# ---------------------------------------------------------------- diagonal approximation

@dataclass(eq=False)
class DiagonalWindow:
    """Components Delta^(n)_p : T_n -> T_{n-p} (x)_A T_p as generator images.

    components[(n, p)] has shape (r_n, r_{n-p}, N, N, r_p, N) with entries
    X[g, g~, a, b, g', c] the coefficient of u_a g~ u_b (x) g' u_c.
    """
    t: object
    h: dict
    components: dict = dc_field(default_factory=dict)
    tau: dict = dc_field(default_factory=dict)

    @property
    def region(self):
        return sorted(self.components)

    def component(self, n, p):
        if (n, p) not in self.components:
            self.components[(n, p)] = _component(self, n, p)
        return self.components[(n, p)]


def _tau0(t, seed=None):
    """(1 (x) 1) (x) (1 (x) 1), plus a random element of ker(eps (x) eps) when seeded."""
    alg = t.algebra
    F, n = alg.field, alg.dim
    X = F.zeros(1, n, n, 1, n)
    X[0, 0, 0, 0, 0] = F.scalar(1)
    if seed is not None:
        # (eps (x) eps)(u_a (x) u_b (x)_A 1 (x) u_c) = u_a u_b u_c
        E = F.reduce(np.einsum("abx,xcy->yabc", alg.table, alg.table)).reshape(n, n ** 3)
        K = kernel(F, E)
        if K.dim:
            rng = np.random.default_rng(seed)
            c = F.array([int(v) for v in rng.integers(0, 97, K.dim)])
            extra = F.matmul(c.reshape(1, -1), K.basis).reshape(n, n, n)
            X[0, :, :, 0, :] = F.add(X[0, :, :, 0, :], extra)
    return X


def _tau(dw, i):
    """tau_i in T_i (x)_A T_{-i}, the image of the generator of T_0 under Delta^(0)_{-i}."""
    if i in dw.tau:
        return dw.tau[i]
    t = dw.t
    F, n = t.field, t.algebra.dim
    if not (t.lo <= i <= t.hi and t.lo <= -i <= t.hi):
        raise WindowError(f"tau_{i} needs T_{i} and T_{-i}")
    if i > 0:
        if i - 1 not in dw.h or not t.has_d(-i + 1):
            raise WindowError(f"tau_{i} needs h_{i - 1} and d_{-i + 1}")
        prev = _tau(dw, i - 1)
        Y = F.reduce(apply_second(prev, t.d(-i + 1), t.rank(-i), n))
        if (i - 1) % 2:
            Y = F.reduce(-Y)
        out = F.reduce(-apply_first(Y, dw.h[i - 1], t.rank(i), t.rank(-i), n))
    else:
        if -i > t.hi or not t.has_d(i + 1):
            raise WindowError(f"tau_{i} needs the right homotopy into T_{-i} and d_{i + 1}")
        prev = _tau(dw, i + 1)
        Y = F.reduce(apply_first(prev, t.d(i + 1), t.rank(i), t.rank(-i - 1), n))
        sp = t.bar.right_homotopy(-i - 1)
        out = F.reduce(apply_second(Y, sp, t.rank(-i), n))
        if i % 2 == 0:
            out = F.reduce(-out)
    dw.tau[i] = out
    return out


def _batch_extend(alg, images, X, r_src):
    """Evaluate the A^e-linear map with generator images on every row of X (rows in A^e^r_src)."""
    F, n = alg.field, alg.dim
    Xs = X.reshape(X.shape[0], r_src, n, n)
    out = np.einsum("skab,aAx,kgxyhz,bCz->sgAyhC", Xs, alg.L, images, alg.R, optimize=True)
    return F.reduce(out)


def _component(dw, n, p):
    t = dw.t
    alg = t.algebra
    F, k = alg.field, alg.dim
    for deg in (n, n - p, p):
        if not (t.lo <= deg <= t.hi):
            raise WindowError(f"Delta^({n})_{p} needs T_{deg}")
    if n == 0:
        return _tau(dw, -p)[None]
    if n > 0:
        if p - 1 not in dw.h or not t.has_d(n):
            raise WindowError(f"Delta^({n})_{p} needs h_{p - 1}")
        prev = dw.component(n - 1, p - 1)
        Y = _batch_extend(alg, prev, t.d_images(n), t.rank(n - 1))
        if not len(Y):
            return F.zeros(0, t.rank(n - p), k, k, t.rank(p), k)
        out = np.stack([F.reduce(apply_second(y, dw.h[p - 1], t.rank(p), k)) for y in Y])
        if (n - p) % 2:
            out = F.reduce(-out)
        return out
    # n < 0: Delta^(n)_p d_{n+1} = D' Delta^(n+1)_p + D'' Delta^(n+1)_{p+1}
    r = t.rank(n + 1)
    Y = F.zeros(r, t.rank(n - p), k, k, t.rank(p), k)
    if t.has_d(n + 1 - p) and n + 1 - p <= t.hi:
        prev = dw.component(n + 1, p)
        for s in range(r):
            Y[s] = F.add(Y[s], F.reduce(apply_first(prev[s], t.d(n + 1 - p), t.rank(n - p), t.rank(p), k)))
    else:
        raise WindowError(f"Delta^({n})_{p} needs d_{n + 1 - p}")
    if t.has_d(p + 1):
        prev = dw.component(n + 1, p + 1)
        sgn = -1 if (n - p) % 2 else 1
        for s in range(r):
            Z = F.reduce(apply_second(prev[s], t.d(p + 1), t.rank(p), k))
            Y[s] = F.add(Y[s], Z if sgn == 1 else F.reduce(-Z))
    else:
        raise WindowError(f"Delta^({n})_{p} needs d_{p + 1}")
    Yl = Y.reshape(r, t.rank(n - p), k, k * t.rank(p), k)
    X = block_extension(alg, t.d_images(n + 1), Yl, t.rank(n), layout="tensor")
    return np.ascontiguousarray(X.reshape(t.rank(n), t.rank(n - p), k, k, t.rank(p), k))


def diagonal_window(t, region, seed=None, verify=True):
    """Build Delta^(n)_p for (n, p) in region and verify the defining identities."""
    h = left_contraction(t)
    verify_contraction(t, h)
    dw = DiagonalWindow(t, h)
    dw.tau[0] = _tau0(t, seed)
    for n, p in region:
        dw.component(n, p)
    if verify:
        verify_diagonal(dw)
    return dw


def diagonal_region(D, W):
    """Components needed for products of degrees |r|, |s| <= D (|n| <= 2D, n - W <= p <= W)."""
    if W < 2 * D + 2:
        raise WindowError(f"products up to degree {D} need a window W >= {2 * D + 2}, got {W}")
    return [(n, p) for n in range(-2 * D, 2 * D + 1) for p in range(-D, D + 1)
            if n - W <= p <= W and abs(n - p) <= D]


def verify_diagonal(dw):
    """(eps (x) eps) Delta = eps in degree 0 and D Delta^(n) = Delta^(n-1) d_n on computed pairs."""
    t = dw.t
    alg = t.algebra
    F, k = alg.field, alg.dim
    X = dw.component(0, 0)[0, 0]
    val = F.reduce(np.einsum("abc,abx,xcy->y", X[:, :, 0, :], alg.table, alg.table))
    if not np.array_equal(val, alg.one):
        raise MathError("diagonal does not preserve the augmentation")
    checked = 0
    comps = dw.components
    for (n, p) in sorted(comps):
        # target component (n - 1 - p, p): D' Delta^(n)_p + D'' Delta^(n)_{p+1} = Delta^(n-1)_p d_n
        if (n - 1, p) not in comps or (n, p + 1) not in comps:
            continue
        if not (t.has_d(n) and t.has_d(n - p) and t.has_d(p + 1)):
            continue
        if t.rank(n) == 0:
            checked += 1
            continue
        lhs = np.stack([F.reduce(apply_first(x, t.d(n - p), t.rank(n - 1 - p), t.rank(p), k))
                        for x in comps[(n, p)]])
        Z = np.stack([F.reduce(apply_second(x, t.d(p + 1), t.rank(p), k)) for x in comps[(n, p + 1)]])
        if (n - 1 - p) % 2:
            Z = F.reduce(-Z)
        lhs = F.add(lhs, Z)
        rhs = _batch_extend(alg, comps[(n - 1, p)], t.d_images(n), t.rank(n - 1))
        if not np.array_equal(lhs, rhs):
            raise MathError(f"diagonal is not a chain map at degree {n}, component {(n - 1 - p, p)}")
        checked += 1
    dw.checked = checked
    return checked


# ---------------------------------------------------------------- products through the diagonal

def pairing_tensor(m, nmod, kind="tensor"):
    """P[k, i, j] : M (x)_k N -> target.

    kind "tensor": M (x)_A N (returns (P, target module));
    kind "algebra": M = N = A with multiplication;
    kind "right": N is A (possibly twisted on the right), m (x) a -> m a in M;
    kind "left": M is A, a (x) n -> a n in N.
    """
    F = m.field
    if kind == "algebra":
        a = m.algebra
        return F.reduce(np.transpose(a.table, (2, 0, 1))), m
    if kind == "right":
        R = np.stack(m.right)                                # [j, k, i]
        return F.reduce(np.transpose(R, (1, 2, 0))), None
    if kind == "left":
        Lm = np.stack(nmod.left)                             # [i, k, j]
        return F.reduce(np.transpose(Lm, (1, 0, 2))), None
    tmod, proj = tensor_over_A(m, nmod)
    return proj.reshape(tmod.dim, m.dim, nmod.dim), tmod


def cup_via_diagonal(dw, u, r, v, s, m, nmod, P):
    """(-1)^{rs} mu (u (x) v) Delta^(r+s)_s on generators of T_{r+s}.

    u : values on generators of T_r (shape (r_r, dim M)); v likewise on T_s.
    """
    t = dw.t
    alg = t.algebra
    F = alg.field
    X = dw.component(r + s, s)
    LRm, LRn = m.ae_actions(), nmod.ae_actions()
    Uab = F.reduce(np.einsum("abij,kj->kabi", LRm, u.reshape(t.rank(r), m.dim)))
    Vg = F.reduce(np.einsum("cij,kj->kci", LRn[0], v.reshape(t.rank(s), nmod.dim)))
    T1 = F.reduce(np.einsum("gkabhc,kabi->ghci", X, Uab, optimize=True))
    out = F.reduce(np.einsum("ghci,hcj,zij->gz", T1, Vg, P, optimize=True))
    if (r * s) % 2:
        out = F.reduce(-out)
    return out


def cap_via_diagonal(dw, u, r, z, s, m, nmod, P):
    """u cap z with u on T_r (values in M) and z in T_s (x)_{A^e} N (values on generators).

    (x (x) y) (x) n -> (-1)^{r(s-r)} x (x) (u(y) (x) n); the value on g~ of the
    result is sum u_b u(g') u_c (x) n u_a.
    """
    t = dw.t
    F = t.field
    X = dw.component(s, r)
    LRm, LRn = m.ae_actions(), nmod.ae_actions()
    Ub = F.reduce(np.einsum("bcij,kj->kbci", LRm, u.reshape(t.rank(r), m.dim)))
    Na = F.reduce(np.einsum("aij,gj->gai", LRn[0], z.reshape(t.rank(s), nmod.dim)))
    T1 = F.reduce(np.einsum("gkabhc,hbci->gkai", X, Ub, optimize=True))
    out = F.reduce(np.einsum("gkai,gaj,zij->kz", T1, Na, P, optimize=True))
    if (r * (s - r)) % 2:
        out = F.reduce(-out)
    return out


# ---------------------------------------------------------------- comparison T -> syzygy window

@dataclass(eq=False)
class Comparison:
    source: object
    target: object
    images: dict

    def matrix(self, n):
        return free_images_to_matrix(self.source.algebra, self.images[n], self.target.component(n))


def comparison_map(t, s):
    """Chain map T -> S over the identity of A (eps phi_0 = eps, phi_{-1} eta = eta up to homotopy)."""
    F = t.field
    alg = t.algebra
    rhs = t.eps[:, _generator_columns(alg, t.rank(0))].T
    phi0 = solve_generators(F, s.eps, rhs, "comparison")
    top = min(t.hi, s.hi)
    ch = lift_chain_map({0: phi0}, t, s, top)
    images = dict(ch.images)
    cmp = Comparison(t, s, images)
    for n in range(-1, max(t.lo, s.lo) - 1, -1):
        Y = F.matmul(s.d(n + 1), cmp.matrix(n + 1))[:, _generator_columns(alg, t.rank(n + 1))].T
        images[n] = extend_along_free(alg, t.d_images(n + 1), Y, s.component(n), t.rank(n))
    for n in images:
        if n - 1 in images and t.has_d(n) and s.has_d(n):
            if not np.array_equal(F.matmul(s.d(n), cmp.matrix(n)), F.matmul(cmp.matrix(n - 1), t.d(n))):
                raise MathError(f"comparison map fails at degree {n}")
    return cmp


# ---------------------------------------------------------------- stable engine

@dataclass(eq=False)
class StableClass:
    """A map Omega^i A -> M (matrix dim M x dim Omega^i), taken modulo projectives."""
    degree: int
    rep: np.ndarray
    module: object
    chain: object = None


class StableEngine:
    """Eu-Schedler products on a syzygy chain; lifts are cached per class."""

    def __init__(self, a, f, d, chain=None):
        self.algebra, self.frob = a, f
        self.chain = chain if chain is not None else syzygies(a, f, d)
        self.window = self.chain.as_window()
        self.A = regular(a)
        self._lifts = {}
        self._sections = {}
        self._groups = {}

    # groups
    def group(self, i, m=None):
        m = self.A if m is None else m
        key = (i, id(m))
        if key not in self._groups:
            ch = self.chain
            self._groups[key] = stable_hom(ch.omega(i), m, embedding=(ch.free[i - 1], ch.iota[i]))
        return self._groups[key]

    def basis(self, i, m=None):
        m = self.A if m is None else m
        g = self.group(i, m)
        reps = g.quot.representatives.basis if g.dim else []
        dimO = self.chain.omega(i).dim
        return [StableClass(i, r.reshape(m.dim, dimO), m, self.chain) for r in reps]

    def coords(self, x, m=None):
        """Coordinates of a class in the basis of its degree (zero iff x factors through projectives)."""
        g = self.group(x.degree, x.module if m is None else m)
        F = self.algebra.field
        vec = x.rep.reshape(-1)
        if not g.hom.contains(vec.reshape(1, -1)):
            raise MathError("representative is not a bimodule map")
        return F.matmul(g.quot.projection, vec) if g.dim else F.zeros(0)

    def unit(self):
        n = self.algebra.dim
        return StableClass(0, self.algebra.field.eye(n), self.A, self.chain)

    # cochains on the syzygy window
    def cocycle(self, x):
        """u = f o pi_i as values on the generators of F_i."""
        F = self.algebra.field
        pi = self.chain.pi[x.degree]
        u = F.matmul(x.rep, pi)
        return np.ascontiguousarray(u[:, _generator_columns(self.algebra, self.chain.free[x.degree].rank)].T)

    def from_cocycle(self, i, u, m=None):
        """f with f o pi_i = u (u given as generator values)."""
        m = self.A if m is None else m
        F = self.algebra.field
        full = free_images_to_matrix(self.algebra, u, m)
        return StableClass(i, F.matmul(full, self._section(i)), m, self.chain)

    def _section(self, i):
        if i not in self._sections:
            F = self.algebra.field
            pi = self.chain.pi[i]
            sec = solve(F, pi, F.eye(pi.shape[0]))
            if sec is None:
                raise MathError(f"pi_{i} is not onto")
            self._sections[i] = sec
        return self._sections[i]

    # lifting
    def lift(self, g, top):
        """G_l : F_{l+j} -> F_l, eps G_0 = g pi_j, d G_l = (-1)^j G_{l-1} d, for l between 0 and top."""
        key = (id(g), top)
        if key in self._lifts:
            return self._lifts[key][1]
        S = self.window
        alg = self.algebra
        F = alg.field
        j = g.degree
        for deg in (j, top, top + j):
            if not (S.lo <= deg <= S.hi):
                raise WindowError(f"syzygy window [{S.lo}, {S.hi}] does not reach degree {deg}")
        u = self.cocycle(g)
        G = {0: solve_generators(F, S.eps, u, "stable lift")}
        sign = -1 if j % 2 else 1
        for l in range(1, top + 1):
            prev = free_images_to_matrix(alg, G[l - 1], S.component(l - 1))
            rhs = F.matmul(prev, S.d(l + j))[:, _generator_columns(alg, S.rank(l + j))].T
            if sign == -1:
                rhs = F.reduce(-rhs)
            G[l] = solve_generators(F, S.d(l), rhs, "stable lift")
        for l in range(-1, top - 1, -1):
            nxt = free_images_to_matrix(alg, G[l + 1], S.component(l + 1))
            Y = F.matmul(S.d(l + 1), nxt)[:, _generator_columns(alg, S.rank(l + j + 1))].T
            if sign == -1:
                Y = F.reduce(-Y)
            G[l] = extend_along_free(alg, S.d_images(l + j + 1), Y, S.component(l), S.rank(l + j))
        self._lifts[key] = (g, G)
        return G

    def omega_map(self, g, i):
        """Omega^i(g) : Omega^{i+j} -> Omega^i with pi_i G_i = Omega^i(g) pi_{i+j}."""
        F = self.algebra.field
        G = self.lift(g, i)
        Gi = free_images_to_matrix(self.algebra, G[i], self.window.component(i))
        return F.matmul(F.matmul(self.chain.pi[i], Gi), self._section(i + g.degree))

    def cup(self, f, g):
        """f cup g = f o Omega^i(g) (g has coefficients in A)."""
        F = self.algebra.field
        rep = F.matmul(f.rep, self.omega_map(g, f.degree))
        return StableClass(f.degree + g.degree, rep, f.module, self.chain)

    def cap(self, f, zeta, j, nmod):
        """f cap zeta = (Omega^{j-i}(f) (x) N)(zeta) for zeta in the stable tensor Omega^j (x) N."""
        i = f.degree
        phi = self.omega_map(f, j - i)
        ch = self.chain
        _, _, mat = _tensor_map(ch.omega(j), nmod, phi, ch.omega(j - i))
        return self.algebra.field.matmul(mat, zeta)

    def tensor_group(self, j, nmod):
        ch = self.chain
        return stable_tensor(ch.omega(j), nmod, self.frob, embedding=(ch.free[j - 1], ch.iota[j]))


# ---------------------------------------------------------------- comparing the engines

class Products:
    """Both engines for Ĥ*(A, A) on one algebra, with the comparison between them."""

    def __init__(self, a, f, D=2, chain_depth=None, seed=None):
        self.algebra, self.frob, self.D = a, f, D
        self.es = StableEngine(a, f, chain_depth or 3 * D + 1)
        self.seed = seed
        self._diag = None

    @property
    def diag(self):
        if self._diag is None:
            a, f, D = self.algebra, self.frob, self.D
            W = 2 * D + 2
            t = complete_bar_window(a, f, W)
            dw = diagonal_window(t, diagonal_region(D, W), seed=self.seed)
            cmp = comparison_map(t, self.es.window)
            self._diag = (t, dw, cmp, hom_complex(t, self.es.A))
        return self._diag

    def pull(self, x):
        """The cocycle on T representing a stable class (values on generators)."""
        t, _, cmp, _ = self.diag
        a = self.algebra
        F = a.field
        full = free_images_to_matrix(a, self.es.cocycle(x), x.module)
        m = F.matmul(full, cmp.matrix(x.degree))
        return np.ascontiguousarray(m[:, _generator_columns(a, t.rank(x.degree))].T)

    def t_coords(self, deg, vec):
        """Coordinates of a cocycle on T in the pulled-back stable basis of its degree."""
        t, _, _, cx = self.diag
        F = self.algebra.field
        H = cx.group(deg)
        basis = self.es.basis(deg)
        if not basis:
            if H.dim:
                raise MathError(f"engines disagree on the dimension in degree {deg}")
            return F.zeros(0)
        B = np.array([H.coords(self.pull(b).reshape(-1)) for b in basis], dtype=F.dtype).T
        c = solve(F, B, H.coords(vec.reshape(-1)).reshape(-1, 1))
        if c is None or B.shape[0] != B.shape[1] or rank(F, B) != B.shape[1]:
            raise MathError(f"comparison map is not an isomorphism in degree {deg}")
        return c.reshape(-1)

    def cup_coords(self, x, y, engine="stable"):
        if engine == "stable":
            return self.es.coords(self.es.cup(x, y))
        t, dw, _, _ = self.diag
        A = self.es.A
        P, _ = pairing_tensor(A, A, "algebra")
        v = cup_via_diagonal(dw, self.pull(x), x.degree, self.pull(y), y.degree, A, A, P)
        return self.t_coords(x.degree + y.degree, v)


def compare_engines(a, f, D=2, seed=None):
    """es_cup and cup_via_diagonal give the same class for all basis pairs with |i|, |j| <= D."""
    pr = Products(a, f, D, seed=seed)
    rows = []
    for i in range(-D, D + 1):
        for j in range(-D, D + 1):
            for x in pr.es.basis(i):
                for y in pr.es.basis(j):
                    s = pr.cup_coords(x, y, "stable")
                    d = pr.cup_coords(x, y, "diagonal")
                    rows.append(((i, j), bool(np.array_equal(s, d))))
    bad = [r for r in rows if not r[1]]
    if bad:
        raise PropertyFailure(f"cup engines disagree on {len(bad)} pairs, first {bad[0][0]}")
    return rows


# ---------------------------------------------------------------- ring table

def ring_table(a, f, lo=-2, hi=2, engine="stable", pr=None):
    """Structure constants of Ĥ*(A, A) on the stable bases; unit, associativity and
    graded commutativity are asserted."""
    D = max(abs(lo), abs(hi))
    pr = pr or Products(a, f, D)
    es = pr.es
    F = a.field
    basis = {i: es.basis(i) for i in range(lo, hi + 1)}
    dims = {i: len(b) for i, b in basis.items()}
    table = {}
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            if not basis[i] or not basis[j]:
                continue
            table[(i, j)] = [[F.to_list(pr.cup_coords(x, y, engine)) for y in basis[j]] for x in basis[i]]
    unit = es.unit()
    checks = {"unit": True, "associative": True, "commutative": True}
    if dims.get(0):
        for i in range(lo, hi + 1):
            for x in basis[i]:
                cx = es.coords(x)
                if not (np.array_equal(es.coords(es.cup(unit, x)), cx)
                        and np.array_equal(es.coords(es.cup(x, unit)), cx)):
                    raise PropertyFailure(f"unit law fails in degree {i}")
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            for x in basis[i]:
                for y in basis[j]:
                    xy, yx = es.coords(es.cup(x, y)), es.coords(es.cup(y, x))
                    if (i * j) % 2:
                        yx = F.reduce(-yx)
                    if not np.array_equal(xy, yx):
                        raise PropertyFailure(f"graded commutativity fails in degrees {(i, j)}")
                    xyc = es.cup(x, y)
                    for k in range(lo, hi + 1):
                        for z in basis[k]:
                            left = es.coords(es.cup(xyc, z))
                            right = es.coords(es.cup(x, es.cup(y, z)))
                            if not np.array_equal(left, right):
                                raise PropertyFailure(f"associativity fails in degrees {(i, j, k)}")
    return {"dims": dims, "table": table, "checks": checks, "engine": engine}


# ---------------------------------------------------------------- duality

@dataclass(eq=False)
class FundamentalClass:
    rep: np.ndarray          # value on the generator of T_{-1}, in 1A_{nu^-1}
    group: object            # Ĥ_{-1}(A, 1A_{nu^-1}) on T
    coords: np.ndarray
    nonzero: bool


def duality_window(a, f, lo=-3, hi=3, seed=None):
    """T and the diagonal components Delta^(-1)_n needed for -cap omega in degrees lo..hi."""
    tlo, thi = min(lo - 1, -hi - 2), max(hi + 1, -lo, 1)
    t = complete_bar_window(a, f, thi, lo=tlo)
    region = [(-1, n) for n in range(lo, hi + 1)]
    return diagonal_window(t, region, seed=seed)


def _twisted(a, f, m):
    return twist(m, identity_automorphism(a), f.nakayama_inv)


def fundamental_class(a, f, dw=None):
    """omega = [gamma (x) 1] in Ĥ_{-1}(A, 1A_{nu^-1}), with 1 cap omega = omega checked."""
    dw = dw or duality_window(a, f, 0, 0)
    t = dw.t
    F = a.field
    A = regular(a)
    N = _twisted(a, f, A)
    cx = tensor_over_Ae(t, N, degrees=[-2, -1, 0])
    H = cx.group(-1)
    rep = a.one.reshape(1, -1).copy()
    if not H.cycles.contains(rep.reshape(1, -1)):
        raise MathError("gamma (x) 1 is not a cycle")
    coords = H.coords(rep.reshape(-1))
    one = F.matmul(t.eps, F.eye(a.dim * a.dim))[:, [0]].T              # the unit cocycle on T_0
    P, _ = pairing_tensor(A, N, "right")
    back = cap_via_diagonal(dw, one, 0, rep, -1, A, N, P)
    if not H.boundaries.contains(F.sub(back.reshape(-1), rep.reshape(-1)).reshape(1, -1)):
        raise PropertyFailure("1 cap omega differs from omega")
    return FundamentalClass(rep, H, coords, bool(H.dim and not F.is_zero(coords)))


def duality_map(a, f, m, n, dw=None):
    """Matrix of -cap omega : Ĥ^n(A, M) -> Ĥ_{-n-1}(A, 1M_{nu^-1}); full rank is asserted."""
    dw = dw or duality_window(a, f, n, n)
    t = dw.t
    F = a.field
    N = _twisted(a, f, regular(a))
    target_mod = _twisted(a, f, m)
    src = hom_complex(t, m, degrees=[n - 1, n, n + 1]).group(n)
    tgt = tensor_over_Ae(t, target_mod, degrees=[-n - 2, -n - 1, -n]).group(-n - 1)
    if src.dim != tgt.dim:
        raise PropertyFailure(f"duality: dim Ĥ^{n} = {src.dim} but dim Ĥ_{-n - 1} = {tgt.dim}")
    P, _ = pairing_tensor(m, N, "right")
    omega = a.one.reshape(1, -1)
    cols = []
    for u in src.representatives:
        z = cap_via_diagonal(dw, u, n, omega, -1, m, N, P).reshape(-1)
        cols.append(tgt.coords(z))
    mat = np.array(cols, dtype=F.dtype).T if cols else F.zeros(tgt.dim, 0)
    if rank(F, mat) != src.dim:
        raise PropertyFailure(f"-cap omega is not an isomorphism in degree {n}")
    return mat


def verify_duality(a, f, modules, lo=-3, hi=3):
    """Full rank of -cap omega for each module in modules (name -> bimodule)."""
    dw = duality_window(a, f, lo, hi)
    out = {}
    for name, m in modules.items():
        out[name] = {n: int(duality_map(a, f, m, n, dw).shape[0]) for n in range(lo, hi + 1)}
    return out


def verify_duality_naturality(a, f, c, n, dw=None):
    """-cap omega commutes with the bimodule map A -> A, x -> c x, c central."""
    F = a.field
    if not np.array_equal(a.left_matrix(c), a.right_matrix(c)):
        raise MathError("naturality needs a central element")
    dw = dw or duality_window(a, f, n, n)
    t = dw.t
    A = regular(a)
    N = _twisted(a, f, A)
    src = hom_complex(t, A, degrees=[n - 1, n, n + 1]).group(n)
    tgt = tensor_over_Ae(t, N, degrees=[-n - 2, -n - 1, -n]).group(-n - 1)
    P, _ = pairing_tensor(A, N, "right")
    Lc = a.left_matrix(c)
    omega = a.one.reshape(1, -1)
    for u in src.representatives:
        U = u.reshape(t.rank(n), a.dim)
        cu = F.matmul(U, Lc.T)
        lhs = cap_via_diagonal(dw, cu, n, omega, -1, A, N, P)
        rhs = F.matmul(cap_via_diagonal(dw, U, n, omega, -1, A, N, P), Lc.T)
        if not tgt.boundaries.contains(F.sub(lhs, rhs).reshape(1, -1)):
            raise PropertyFailure(f"duality is not natural in degree {n}")
    return True


def verify_dual_dimensions(a, f, lo=-3, hi=3):
    """dim Ĥ_i(A,A) = dim Ĥ_{-i-1}(A,A) and dim Ĥ^i(A,A) = dim Ĥ^{-i-1}(A, 1A_{nu^2})."""
    A = regular(a)
    one = identity_automorphism(a)
    nu2 = f.nakayama.compose(f.nakayama)
    A2 = twist(A, one, nu2)
    W = max(abs(lo), abs(hi)) + 2
    rows = []
    for i in range(lo, hi + 1):
        r = (i, tate_homology(a, f, A, i, W).dim, tate_homology(a, f, A, -i - 1, W).dim,
             tate_cohomology(a, f, A, i, W).dim, tate_cohomology(a, f, A2, -i - 1, W).dim)
        rows.append(r)
        if r[1] != r[2] or r[3] != r[4]:
            raise PropertyFailure(f"dual dimensions fail at {i}: {r}")
    return {"rows": rows, "nu2_trivial": bool(nu2.is_identity())}


# ---------------------------------------------------------------- compatibility with Hochschild

def verify_compatibility(a, f, top=2, dw=None):
    """The cup square, the three cap squares and the corollary square, M = N = A.

    Hochschild classes live on T_{>=0} = Bar, so the vertical maps are the
    identity on representatives (a quotient in cohomological degree 0 and an
    inclusion in homological degree 0).
    """
    from .barres import (CohClass, HomClass, cap_bar_AA, cup_bar_AA, hochschild_cohomology,
                         hochschild_homology)
    W = 2 * top + 2
    if dw is None:
        t = complete_bar_window(a, f, W)
        dw = diagonal_window(t, diagonal_region(top, W))
    t = dw.t
    F = a.field
    A = regular(a)
    N = _twisted(a, f, A)
    P, _ = pairing_tensor(A, A, "algebra")
    Pt, _ = pairing_tensor(A, N, "right")
    coh = hom_complex(t, A)
    hom = tensor_over_Ae(t, A)
    homN = tensor_over_Ae(t, N)
    bar = t.bar
    HH = {r: hochschild_cohomology(a, A, r, bar) for r in range(0, top + 1)}
    Hh = {s: hochschild_homology(a, A, s, bar) for s in range(1, top + 1)}
    Hh[0] = hom.group(0)                         # Tate Ĥ_0 inside H_0
    report = {"cup": 0, "cap_00": 0, "cap_0s": 0, "cap_rs": 0, "corollary": 0}
    for r in range(0, top + 1):
        for s in range(0, top + 1):
            G = coh.group(r + s)
            for u in HH[r].representatives:
                for v in HH[s].representatives:
                    cl = cup_bar_AA(a, CohClass(r, u, A), CohClass(s, v, A)).rep
                    tv = cup_via_diagonal(dw, u, r, v, s, A, A, P).reshape(-1)
                    if not G.boundaries.contains(F.sub(cl, tv).reshape(1, -1)):
                        raise PropertyFailure(f"cup square fails in degrees {(r, s)}")
                    report["cup"] += 1
    for r in range(0, top + 1):
        for s in range(r, top + 1):
            B = hom.group(s - r).boundaries
            key = "cap_00" if r == s == 0 else ("cap_0s" if r == 0 else "cap_rs")
            for u in HH[r].representatives:
                for z in Hh[s].representatives:
                    cl = cap_bar_AA(a, CohClass(r, u, A), HomClass(s, z, A)).rep
                    tv = cap_via_diagonal(dw, u, r, z, s, A, A, P).reshape(-1)
                    if not B.contains(F.sub(cl, tv).reshape(1, -1)):
                        raise PropertyFailure(f"cap square fails in degrees {(r, s)}")
                    report[key] += 1
    # (alpha cup beta) cap omega = alpha cap_classical (beta cap omega), r >= 0, s >= 1, r <= s - 1
    omega = a.one.reshape(1, -1)
    for s in range(1, top + 1):
        Gs = coh.group(-s)
        for r in range(0, s):
            B = homN.group(s - r - 1).boundaries
            for al in HH[r].representatives:
                for be in Gs.representatives:
                    ab = cup_via_diagonal(dw, al, r, be, -s, A, A, P)
                    lhs = cap_via_diagonal(dw, ab, r - s, omega, -1, A, N, Pt).reshape(-1)
                    bo = cap_via_diagonal(dw, be, -s, omega, -1, A, N, Pt).reshape(-1)
                    rhs = cap_bar_AA(a, CohClass(r, al, A), HomClass(s - 1, bo, N)).rep
                    if not B.contains(F.sub(lhs, rhs).reshape(1, -1)):
                        raise PropertyFailure(f"corollary square fails in degrees {(r, -s)}")
                    report["corollary"] += 1
    return report


def verify_cap_associativity(a, f, lo=-2, hi=2, dw=None):
    """(alpha cup beta) cap omega = alpha cap (beta cap omega) on basis classes."""
    D = max(abs(lo), abs(hi))
    W = 2 * D + 2
    if dw is None:
        t = complete_bar_window(a, f, W)
        dw = diagonal_window(t, diagonal_region(D, W))
    t = dw.t
    F = a.field
    A = regular(a)
    N = _twisted(a, f, A)
    P, _ = pairing_tensor(A, A, "algebra")
    Pt, _ = pairing_tensor(A, N, "right")
    coh = hom_complex(t, A)
    homN = tensor_over_Ae(t, N)
    omega = a.one.reshape(1, -1)
    count = 0
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            deg = -(i + j) - 1
            if not (t.lo < deg < t.hi and t.lo <= -j - 1 and -j - 1 - i >= t.lo):
                continue
            B = homN.group(deg).boundaries
            for al in coh.group(i).representatives:
                for be in coh.group(j).representatives:
                    ab = cup_via_diagonal(dw, al, i, be, j, A, A, P)
                    lhs = cap_via_diagonal(dw, ab, i + j, omega, -1, A, N, Pt).reshape(-1)
                    bo = cap_via_diagonal(dw, be, j, omega, -1, A, N, Pt)
                    rhs = cap_via_diagonal(dw, al, i, bo, -j - 1, A, N, Pt).reshape(-1)
                    if not B.contains(F.sub(lhs, rhs).reshape(1, -1)):
                        raise PropertyFailure(f"cap associativity fails in degrees {(i, j)}")
                    count += 1
    verify_diagonal(dw)
    return count


# ---------------------------------------------------------------- connecting maps

def connecting_cochain(t, seq, u, r):
    """Cochain-level connecting map Ĥ^r(A, quot) -> Ĥ^{r+1}(A, sub) of a short exact sequence."""
    F = t.field
    mid = seq.middle
    rr = t.rank(r)
    lift = solve(F, seq.proj.matrix, u.reshape(rr, -1).T)
    if lift is None:
        raise MathError("cannot lift through the projection")
    delta = hom_complex(t, mid, degrees=[r, r + 1]).maps[r]
    vals = F.matmul(delta, lift.T.reshape(-1)).reshape(t.rank(r + 1), mid.dim)
    y = solve(F, seq.inc.matrix, vals.T)
    if y is None:
        raise MathError("connecting cochain does not land in the submodule")
    return np.ascontiguousarray(y.T)


def verify_connecting_axioms(a, f, top=1, dw=None):
    """d(g cup x) = (dg) cup x and d(x cup g) = (-1)^r x cup (dg) on the K(A) sequence."""
    A = regular(a)
    seq = shift_sequences(A, f)["K"]
    K = seq.sub
    W = 2 * top + 2
    if dw is None:
        t = complete_bar_window(a, f, W)
        dw = diagonal_window(t, diagonal_region(top, W))
    t = dw.t
    F = a.field
    P, _ = pairing_tensor(A, A, "algebra")
    PKr, _ = pairing_tensor(K, A, "right")
    PKl, _ = pairing_tensor(A, K, "left")
    coh = hom_complex(t, A)
    cohK = hom_complex(t, K)
    count = 0
    for r in range(-top, top):
        for s in range(-top, top):
            B = cohK.group(r + s + 1).boundaries
            for g in coh.group(r).representatives:
                for x in coh.group(s).representatives:
                    gx = cup_via_diagonal(dw, g, r, x, s, A, A, P)
                    lhs = connecting_cochain(t, seq, gx, r + s)
                    rhs = cup_via_diagonal(dw, connecting_cochain(t, seq, g, r), r + 1, x, s, K, A, PKr)
                    if not B.contains(F.sub(lhs, rhs).reshape(1, -1)):
                        raise PropertyFailure(f"d(g cup x) != (dg) cup x in degrees {(r, s)}")
                    xg = cup_via_diagonal(dw, x, s, g, r, A, A, P)
                    lhs2 = connecting_cochain(t, seq, xg, r + s)
                    rhs2 = cup_via_diagonal(dw, x, s, connecting_cochain(t, seq, g, r), r + 1, A, K, PKl)
                    if s % 2:
                        rhs2 = F.reduce(-rhs2)
                    if not B.contains(F.sub(lhs2, rhs2).reshape(1, -1)):
                        raise PropertyFailure(f"d(x cup g) != (-1)^s x cup (dg) in degrees {(s, r)}")
                    count += 1
    return count
