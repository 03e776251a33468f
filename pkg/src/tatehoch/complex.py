"""Windowed chain complexes of bimodules, Hom/tensor complexes and lifting.

Most complexes here have free components A^e^r.  A map out of a free
module is stored by its generator images (an array of shape
(rank, dim target)); the k-matrix is assembled on demand.
"""
from dataclasses import dataclass, field as dc_field

import numpy as np

from .bimod import FreeBimodule, hom_Ae, tensor_over_Ae as _tensor_Ae_module
from .errors import MathError, WindowError
from .exactla import Subspace, image, kernel, quotient, solve


# ---------------------------------------------------------------- free maps

def free_images_to_matrix(alg, images, target):
    """k-matrix of the A^e-linear map from A^e^r sending g_j to images[j]."""
    F, n = alg.field, alg.dim
    r = images.shape[0]
    if r == 0:
        return F.zeros(target.dim, 0)
    if isinstance(target, FreeBimodule):
        rt = target.rank
        V = images.reshape(r, rt, n, n)
        # (u_a v u_b)[k, s, t] = sum LA[a][s, x] v[k, x, y] RA[b][t, y]
        out = np.einsum("asx,jkxy,bty->kstjab", alg.L, V, alg.R, optimize=True)
        return F.reduce(out).reshape(target.dim, r * n * n)
    acts = target.ae_actions()                     # [a, b, out, in]
    out = np.einsum("abij,rj->irab", acts, images)
    return F.reduce(out).reshape(target.dim, r * n * n)


def matrix_to_free_images(alg, matrix):
    """Generator images of an A^e-linear map out of A^e^r given its k-matrix."""
    n = alg.dim
    cols = matrix.shape[1]
    r = cols // (n * n)
    return np.ascontiguousarray(matrix[:, [j * n * n for j in range(r)]].T)


def act_free(alg, x, rank, a=None, b=None):
    """u_a x u_b for x in A^e^rank (a or b None = no action on that side)."""
    F, n = alg.field, alg.dim
    v = x.reshape(rank, n, n)
    if a is not None:
        v = np.einsum("sx,kxy->ksy", alg.L[a], v)
    if b is not None:
        v = np.einsum("ty,kxy->kxt", alg.R[b], v)
    return F.reduce(v).reshape(-1)


# ---------------------------------------------------------------- windows

class ComplexWindow:
    """Components C_lo..C_hi with d_n : C_n -> C_{n-1} for lo < n <= hi.

    images[n] (optional) holds generator images of d_n when C_n is free.
    augmentation is an optional pair (eps: C_0 -> A, eta: A -> C_{-1}) of k-matrices.
    """

    def __init__(self, algebra, lo, hi, components, differentials=None, images=None,
                 augmentation=None, tag=""):
        self.algebra = algebra
        self.lo, self.hi = lo, hi
        self.components = dict(components)
        self._d = dict(differentials or {})
        self.images = dict(images or {})
        self.augmentation = augmentation
        self.tag = tag

    @property
    def field(self):
        return self.algebra.field

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def component(self, n):
        if n < self.lo or n > self.hi:
            raise WindowError(f"degree {n} outside the window [{self.lo}, {self.hi}]")
        return self.components[n]

    def rank(self, n):
        c = self.component(n)
        return c.rank if isinstance(c, FreeBimodule) else None

    def has_d(self, n):
        return self.lo < n <= self.hi

    def d(self, n):
        """k-matrix of d_n : C_n -> C_{n-1}."""
        if not self.has_d(n):
            raise WindowError(f"no differential d_{n} in the window [{self.lo}, {self.hi}]")
        if n not in self._d:
            self._d[n] = free_images_to_matrix(self.algebra, self.images[n], self.components[n - 1])
        return self._d[n]

    def d_images(self, n):
        if n not in self.images:
            if not isinstance(self.components[n], FreeBimodule):
                raise MathError(f"component {n} is not free")
            self.images[n] = matrix_to_free_images(self.algebra, self.d(n))
        return self.images[n]

    def check(self):
        F = self.field
        for n in range(self.lo + 2, self.hi + 1):
            if not F.is_zero(F.matmul(self.d(n - 1), self.d(n))):
                raise MathError(f"d_{n - 1} d_{n} != 0")
        if self.augmentation is not None and self.lo < 0 < self.hi:
            eps, eta = self.augmentation
            if not np.array_equal(F.matmul(eta, eps), self.d(0)):
                raise MathError("d_0 != eta eps")
        return self


def homology_data(F, d_out, d_in, dim):
    """ker d_out / im d_in on a space of the given dimension."""
    z = kernel(F, d_out) if d_out is not None and d_out.shape[0] else Subspace.full(F, dim)
    b = image(F, d_in) if d_in is not None and d_in.shape[1] else Subspace.zero(F, dim)
    q = quotient(F, z, b)
    return Homology(q.dim, z, b, q)


@dataclass(eq=False)
class Homology:
    dim: int
    cycles: Subspace
    boundaries: Subspace
    quot: object
    degree: int = 0
    extra: dict = dc_field(default_factory=dict)

    @property
    def representatives(self):
        return self.quot.representatives.basis

    def coords(self, vec):
        """Class coordinates of a cycle (vector) in the representative basis."""
        F = self.cycles.field
        if not self.cycles.contains(vec.reshape(1, -1)):
            raise MathError("vector is not a cycle")
        return F.matmul(self.quot.projection, vec)


def homology_at(c, n):
    if not (c.lo < n < c.hi):
        raise WindowError(f"homology at {n} needs both adjacent differentials in [{c.lo}, {c.hi}]")
    h = homology_data(c.field, c.d(n), c.d(n + 1), c.component(n).dim)
    h.degree = n
    return h


class LinearComplex:
    """A cochain (up=True) or chain complex of vector spaces with explicit maps."""

    def __init__(self, field, dims, maps, up=True):
        self.field = field
        self.dims = dict(dims)
        self.maps = dict(maps)    # up: maps[n]: C^n -> C^{n+1};  down: maps[n]: C_n -> C_{n-1}
        self.up = up

    def group(self, n):
        F = self.field
        if n not in self.dims:
            raise WindowError(f"degree {n} not in the complex")
        if self.up:
            out, inn = self.maps.get(n), self.maps.get(n - 1)
        else:
            out, inn = self.maps.get(n), self.maps.get(n + 1)
        if out is None and (n + (1 if self.up else -1)) in self.dims:
            raise WindowError(f"missing map out of degree {n}")
        if inn is None and (n - (1 if self.up else -1)) in self.dims:
            raise WindowError(f"missing map into degree {n}")
        h = homology_data(F, out, inn, self.dims[n])
        h.degree = n
        return h


def hom_complex(c, m, degrees=None):
    """Hom_{A^e}(C, M) with delta^n f = (-1)^{n+1} f d_{n+1}.

    For free C_n the component is M^{rank} (values on generators).
    """
    F = c.field
    degrees = list(degrees) if degrees is not None else list(c.degrees())
    dims, maps = {}, {}
    free = all(isinstance(c.component(n), FreeBimodule) for n in degrees)
    if free:
        LR = m.ae_actions()
        for n in degrees:
            dims[n] = c.rank(n) * m.dim
        for n in degrees:
            if n + 1 in dims:
                maps[n] = F.scale((-1) ** (n + 1), hom_precompose_free(c, n + 1, m, LR))
        return LinearComplex(F, dims, maps, up=True)
    homs = {n: hom_Ae(c.component(n), m) for n in degrees}
    for n in degrees:
        dims[n] = homs[n].dim
    for n in degrees:
        if n + 1 in dims:
            src, tgt = homs[n], homs[n + 1]
            d = c.d(n + 1)
            cols = []
            for k in range(src.dim):
                f = src.basis[k].reshape(m.dim, c.component(n).dim)
                g = F.matmul(f, d).reshape(-1)
                cols.append(tgt.coordinates(g)[0] if tgt.dim else F.zeros(0))
            mat = np.array(cols, dtype=F.dtype).T if cols else F.zeros(tgt.dim, 0)
            maps[n] = F.scale((-1) ** (n + 1), mat.reshape(tgt.dim, src.dim))
    return LinearComplex(F, dims, maps, up=True)


def hom_precompose_free(c, n, m, LR=None):
    """Matrix of f -> f o d_n : M^{r_{n-1}} -> M^{r_n} (free C)."""
    F = c.field
    a = c.algebra
    k = a.dim
    LR = m.ae_actions() if LR is None else LR
    imgs = c.d_images(n).reshape(c.rank(n), c.rank(n - 1), k, k)
    out = np.einsum("jkab,abxy->jxky", imgs, LR, optimize=True)
    return F.reduce(out).reshape(c.rank(n) * m.dim, c.rank(n - 1) * m.dim)


def tensor_apply_free(c, n, m, LR=None):
    """Matrix of d_n (x) id : M^{r_n} -> M^{r_{n-1}} on C (x)_{A^e} M (free C).

    (u_a g u_b) (x) x = g (x) u_b x u_a.
    """
    F = c.field
    k = c.algebra.dim
    LR = m.ae_actions() if LR is None else LR
    imgs = c.d_images(n).reshape(c.rank(n), c.rank(n - 1), k, k)
    out = np.einsum("jkab,baxy->kxjy", imgs, LR, optimize=True)
    return F.reduce(out).reshape(c.rank(n - 1) * m.dim, c.rank(n) * m.dim)


def tensor_over_Ae(c, m, degrees=None):
    """C (x)_{A^e} M as a chain complex of vector spaces."""
    F = c.field
    degrees = list(degrees) if degrees is not None else list(c.degrees())
    dims, maps = {}, {}
    if all(isinstance(c.component(n), FreeBimodule) for n in degrees):
        LR = m.ae_actions()
        for n in degrees:
            dims[n] = c.rank(n) * m.dim
        for n in degrees:
            if n - 1 in dims:
                maps[n] = tensor_apply_free(c, n, m, LR)
        return LinearComplex(F, dims, maps, up=False)
    qs = {n: _tensor_Ae_module(c.component(n), m) for n in degrees}
    for n in degrees:
        dims[n] = qs[n].dim
    for n in degrees:
        if n - 1 in dims:
            src, tgt = qs[n], qs[n - 1]
            big = np.kron(c.d(n), F.eye(m.dim))
            reps = src.representatives.basis.T
            maps[n] = F.matmul(tgt.projection, F.matmul(big, reps)) if src.dim else F.zeros(tgt.dim, 0)
    return LinearComplex(F, dims, maps, up=False)


# ---------------------------------------------------------------- lifting

def solve_generators(F, matrix, rhs_rows, what="lift"):
    """Solve matrix x = rhs for every row of rhs_rows; rows of the result."""
    if rhs_rows.shape[0] == 0:
        return F.zeros(0, matrix.shape[1])
    x = solve(F, matrix, rhs_rows.T)
    if x is None:
        raise MathError(f"{what}: no solution (target not exact or source not projective)")
    return np.ascontiguousarray(x.T)


@dataclass(eq=False)
class ChainMapWindow:
    source: ComplexWindow
    target: ComplexWindow
    shift: int            # f_n : S_n -> T_{n - shift}
    images: dict          # n -> generator images (rank S_n, dim T_{n-shift})

    def matrix(self, n):
        return free_images_to_matrix(self.source.algebra, self.images[n],
                                     self.target.component(n - self.shift))

    def check(self, sign=1):
        """d f_n = sign^shift f_{n-1} d on the overlap."""
        F = self.source.field
        for n in sorted(self.images):
            if n - 1 in self.images and self.source.has_d(n) and self.target.has_d(n - self.shift):
                lhs = F.matmul(self.target.d(n - self.shift), self.matrix(n))
                rhs = F.matmul(self.matrix(n - 1), self.source.d(n))
                if self.shift % 2 and sign == -1:
                    rhs = F.reduce(-rhs)
                if not np.array_equal(lhs, rhs):
                    raise MathError(f"chain map identity fails at degree {n}")
        return self


def lift_chain_map(partial, source, target, top, shift=0, sign=1):
    """Extend a family f_i (i <= r, generator images) upward to degree top.

    Solves d f_{n} = s f_{n-1} d degreewise on generators, s = sign^shift.
    """
    F = source.field
    images = dict(partial)
    start = max(images) + 1
    s = sign ** shift if shift % 2 else 1
    for n in range(start, top + 1):
        prev = free_images_to_matrix(source.algebra, images[n - 1], target.component(n - 1 - shift))
        rhs = F.matmul(prev, source.d(n))
        gen_cols = rhs[:, _generator_columns(source.algebra, source.rank(n))].T
        if s == -1:
            gen_cols = F.reduce(-gen_cols)
        images[n] = solve_generators(F, target.d(n - shift), gen_cols, "lift_chain_map")
    return ChainMapWindow(source, target, shift, images)


def _generator_columns(alg, r):
    n = alg.dim
    return [j * n * n for j in range(r)]


def extend_homotopy(f, g, partial, top, direction="up"):
    """Extend h with d h_n + h_{n-1} d = f_n - g_n (h_n : S_n -> T_{n+1}).

    direction "up" solves through the target differential on generators;
    "down" solves the A^e-linear extension problem along d of the source.
    """
    src, tgt = f.source, f.target
    F = src.field
    alg = src.algebra
    h = dict(partial)
    if direction == "up":
        start = max(h) + 1
        for n in range(start, top + 1):
            diff = F.sub(f.matrix(n), g.matrix(n))
            if n - 1 in h and src.has_d(n):
                hd = F.matmul(free_images_to_matrix(alg, h[n - 1], tgt.component(n)), src.d(n))
                diff = F.sub(diff, hd)
            rhs = diff[:, _generator_columns(alg, src.rank(n))].T
            h[n] = solve_generators(F, tgt.d(n + 1), rhs, "extend_homotopy")
        return h
    # downward: h_{n-1} d_n = f_n - g_n - d h_n  on S_n
    start = min(h) - 1
    for n in range(start, top - 1, -1):
        m = n + 1
        diff = F.sub(f.matrix(m), g.matrix(m))
        diff = F.sub(diff, F.matmul(tgt.d(m + 1), free_images_to_matrix(alg, h[m], tgt.component(m + 1))))
        Y = diff[:, _generator_columns(alg, src.rank(m))].T
        h[n] = extend_along_free(alg, src.d_images(m), Y, tgt.component(n + 1), src.rank(n))
    return h


def extend_along_free(alg, d_images, Y, target, r_src):
    """Find X : A^e^{r_src} -> target (free) with X o d = Y.

    d_images: (r, r_src*n*n) images of the generators of the domain of d.
    Y: (r, dim target) prescribed values on those generators.
    Returns generator images of X, shape (r_src, dim target).
    """
    n = alg.dim
    if not isinstance(target, FreeBimodule):
        raise MathError("extension needs a free target")
    return block_extension(alg, d_images, Y.reshape(Y.shape[0], target.rank, n, n), r_src,
                           layout="free").reshape(r_src, target.dim)


def block_extension(alg, d_images, Y, r_src, layout="free"):
    """Solve sum_k d[t,k,a,b] u_a X_k u_b = Y_t for X (A^e-linear extension).

    Left multiplication only touches one axis of the target and right
    multiplication another, so the system splits over the untouched
    coordinates and a single reduction serves all of them.

    layout "free": Y[t, mid, a, b] (target A^e^rank, mid = rank index).
    layout "tensor": Y[t, g, a, mid..., c] with left axis 2 and right axis -1,
    given flattened as Y[t, g, alpha, middle, gamma].
    """
    F, n = alg.field, alg.dim
    r = d_images.shape[0]
    D = d_images.reshape(r, r_src, n, n)
    if layout == "free":
        t_, mid, _, _ = Y.shape
        Yp = Y.transpose(0, 2, 3, 1).reshape(r * n * n, mid)           # rows (t, A, C)
    else:
        t_, g, _, mid, _ = Y.shape
        Yp = Y.transpose(0, 2, 4, 1, 3).reshape(r * n * n, g * mid)
    M = F.reduce(np.einsum("tkab,aAx,bCy->tACkxy", D, alg.L, alg.R, optimize=True))
    M = M.reshape(r * n * n, r_src * n * n)
    X = solve(F, M, Yp)
    if X is None:
        raise MathError("A^e-linear extension has no solution")
    if layout == "free":
        return np.ascontiguousarray(X.reshape(r_src, n, n, mid).transpose(0, 3, 1, 2))
    return np.ascontiguousarray(X.reshape(r_src, n, n, g, mid).transpose(0, 3, 1, 4, 2))


# ---------------------------------------------------------------- tensor windows

def tensor_free_dim(alg, r1, r2):
    n = alg.dim
    return r1 * r2 * n ** 3


def apply_first(X, mat, r1_out, r2, n):
    """Apply a k-matrix on the first-factor coordinates (g, a, b) of X[g, a, b, g', c]."""
    r1 = X.shape[0]
    flat = X.reshape(r1 * n * n, r2 * n)
    return (mat @ flat).reshape(r1_out, n, n, r2, n)


def apply_second(X, mat, r2_out, n):
    """Apply a k-matrix on the second-factor coordinates (b, g', c), read as u_b g' u_c."""
    r1, _, _, r2, _ = X.shape
    Xt = X.transpose(0, 1, 3, 2, 4).reshape(r1 * n, r2 * n * n)   # (g, a) x (g', b, c)
    out = Xt @ mat.T
    return out.reshape(r1, n, r2_out, n, n).transpose(0, 1, 3, 2, 4)


def complete_tensor_window(c1, c2, out_lo, out_hi, margin_lo=None, margin_hi=None):
    """Degrees out_lo..out_hi of the complete tensor product C (x)^_A C' (free inputs).

    Degree n is the sum of C_{n-i} (x)_A C'_i over i with both factors in their
    windows; the window is valid only if every pair with |i| within the margin
    exists.  d = d (x) 1 + (-1)^{n-i} 1 (x) d.
    """
    alg = c1.algebra
    F, n = alg.field, alg.dim
    lo_i = c2.lo if margin_lo is None else margin_lo
    hi_i = c2.hi if margin_hi is None else margin_hi
    comps, offs = {}, {}
    for deg in range(out_lo, out_hi + 1):
        pairs = []
        for i in range(lo_i, hi_i + 1):
            j = deg - i
            if not (c1.lo <= j <= c1.hi):
                raise WindowError(f"missing degree pair ({j}, {i}) for output degree {deg}")
            if not (c2.lo <= i <= c2.hi):
                raise WindowError(f"missing degree pair ({j}, {i}) for output degree {deg}")
            pairs.append((j, i))
        comps[deg] = pairs
        off, o = {}, 0
        for (j, i) in pairs:
            off[(j, i)] = o
            o += tensor_free_dim(alg, c1.rank(j), c2.rank(i))
        offs[deg] = (off, o)
    dmats = {}
    for deg in range(out_lo + 1, out_hi + 1):
        off_s, dim_s = offs[deg]
        off_t, dim_t = offs[deg - 1]
        D = F.zeros(dim_t, dim_s)
        for (j, i), o in off_s.items():
            r1, r2 = c1.rank(j), c2.rank(i)
            size = tensor_free_dim(alg, r1, r2)
            eye_cols = F.eye(size).reshape(size, r1, n, n, r2, n)
            for k in range(size):
                X = eye_cols[k]
                if (j - 1, i) in off_t and c1.has_d(j):
                    Y = F.reduce(apply_first(X, c1.d(j), c1.rank(j - 1), r2, n))
                    t = off_t[(j - 1, i)]
                    D[t:t + Y.size, o + k] = F.add(D[t:t + Y.size, o + k], Y.reshape(-1))
                if (j, i - 1) in off_t and c2.has_d(i):
                    Y = F.reduce(apply_second(X, c2.d(i), c2.rank(i - 1), n))
                    if j % 2:
                        Y = F.reduce(-Y)
                    t = off_t[(j, i - 1)]
                    D[t:t + Y.size, o + k] = F.add(D[t:t + Y.size, o + k], Y.reshape(-1))
        dmats[deg] = D
    dims = {deg: offs[deg][1] for deg in comps}
    return TensorWindow(alg, out_lo, out_hi, comps, offs, dims, dmats)


@dataclass(eq=False)
class TensorWindow:
    algebra: object
    lo: int
    hi: int
    pairs: dict
    offsets: dict
    dims: dict
    differentials: dict

    def d(self, n):
        return self.differentials[n]


# ---------------------------------------------------------------- shift / truncation

def shift(c, i):
    """(Sigma^i C)_n = C_{n-i}, d = (-1)^i d."""
    F = c.field
    comps = {n + i: c.components[n] for n in c.degrees()}
    diffs, imgs = {}, {}
    for n in range(c.lo + 1, c.hi + 1):
        if i % 2:
            if n in c.images:
                imgs[n + i] = F.reduce(-c.images[n])
            else:
                diffs[n + i] = F.reduce(-c.d(n))
        else:
            if n in c.images:
                imgs[n + i] = c.images[n]
            else:
                diffs[n + i] = c.d(n)
    return ComplexWindow(c.algebra, c.lo + i, c.hi + i, comps, diffs, imgs, None, c.tag)


def truncate_geq(c, n):
    lo = max(c.lo, n)
    comps = {k: c.components[k] for k in range(lo, c.hi + 1)}
    imgs = {k: v for k, v in c.images.items() if k > lo}
    diffs = {k: v for k, v in c._d.items() if k > lo}
    aug = c.augmentation if lo <= 0 else None
    return ComplexWindow(c.algebra, lo, c.hi, comps, diffs, imgs, aug, c.tag)


def truncate_lt(c, n):
    hi = min(c.hi, n - 1)
    comps = {k: c.components[k] for k in range(c.lo, hi + 1)}
    imgs = {k: v for k, v in c.images.items() if k <= hi}
    diffs = {k: v for k, v in c._d.items() if k <= hi}
    return ComplexWindow(c.algebra, c.lo, hi, comps, diffs, imgs, None, c.tag)
