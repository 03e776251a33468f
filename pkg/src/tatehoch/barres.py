"""Normalized bar resolution, Hochschild (co)homology, classical cup and cap.

Bar_n = A (x) Abar^{(x)n} (x) A is free over A^e on the words
w = (w_1, ..., w_n) with letters in 1..dim-1 (Abar is spanned by the
non-unit basis elements).  Word index = base-(dim-1) number.
"""
from dataclasses import dataclass
from itertools import product as iproduct

import numpy as np

from .bimod import FreeBimodule, regular, tensor_over_A
from .complex import (ComplexWindow, apply_first, apply_second, hom_complex, lift_chain_map,
                      tensor_over_Ae)
from .errors import MathError, WindowError


def words(k, n):
    """All words of length n in letters 1..k, in index order."""
    return list(iproduct(range(1, k + 1), repeat=n))


def word_index(w, k):
    idx = 0
    for x in w:
        idx = idx * k + (x - 1)
    return idx


class BarWindow(ComplexWindow):
    """Bar_0..Bar_N with augmentation eps : Bar_0 -> A and both extra degeneracies."""

    def __init__(self, algebra, N):
        n = algebra.dim
        self.letters = n - 1
        comps = {d: FreeBimodule(algebra, self.letters ** d) for d in range(N + 1)}
        super().__init__(algebra, 0, N, comps, tag="bar")
        self.images = {d: _bar_images(algebra, d) for d in range(1, N + 1)}
        self.eps = bar_augmentation(algebra)

    def left_homotopy(self, d):
        """s : Bar_d -> Bar_{d+1}, s(u_a w u_b) = (-1)^{d+1} u_a (w, b) 1 (left A-linear).

        d = -1 gives A -> Bar_0, x -> x (x) 1.
        """
        return _left_s(self.algebra, self.letters, d)

    def right_homotopy(self, d):
        """s' : Bar_d -> Bar_{d+1}, s'(u_a w u_b) = (a, w) u_b (right A-linear)."""
        return _right_s(self.algebra, self.letters, d)


def _bar_images(alg, d):
    F, n = alg.field, alg.dim
    k = n - 1
    tab = alg.table
    r_src, r_tgt = k ** d, k ** (d - 1)
    img = F.zeros(r_src, r_tgt, n, n)
    one, neg = F.scalar(1), F.scalar(-1)
    for w in words(k, d):
        s = word_index(w, k)
        img[s, word_index(w[1:], k), w[0], 0] += one
        for i in range(1, d):
            sign = one if i % 2 == 0 else neg
            for c in range(1, n):
                coef = tab[w[i - 1], w[i], c]
                if coef != 0:
                    t = word_index(w[:i - 1] + (c,) + w[i + 1:], k)
                    img[s, t, 0, 0] += sign * coef
        img[s, word_index(w[:-1], k), 0, w[-1]] += one if d % 2 == 0 else neg
    return F.reduce(img).reshape(r_src, r_tgt * n * n)


def bar_augmentation(alg):
    """k-matrix of eps : Bar_0 = A (x) A -> A, u_a (x) u_b -> u_a u_b."""
    n = alg.dim
    return np.ascontiguousarray(alg.table.reshape(n * n, n).T)


def _left_s(alg, k, d):
    F, n = alg.field, alg.dim
    one = F.scalar(1) if (d + 1) % 2 == 0 else F.scalar(-1)
    if d == -1:
        S = F.zeros(n * n, n)
        for a in range(n):
            S[a * n, a] = F.scalar(1)
        return S
    r, r1 = k ** d, k ** (d + 1)
    S = F.zeros(r1 * n * n, r * n * n)
    for w in words(k, d):
        s = word_index(w, k)
        for a in range(n):
            for b in range(1, n):
                t = word_index(w + (b,), k)
                S[(t * n + a) * n, (s * n + a) * n + b] = one
    return S


def _right_s(alg, k, d):
    F, n = alg.field, alg.dim
    if d == -1:
        S = F.zeros(n * n, n)
        for b in range(n):
            S[b, b] = F.scalar(1)
        return S
    r, r1 = k ** d, k ** (d + 1)
    S = F.zeros(r1 * n * n, r * n * n)
    for w in words(k, d):
        s = word_index(w, k)
        for b in range(n):
            for a in range(1, n):
                t = word_index((a,) + w, k)
                S[t * n * n + b, (s * n + a) * n + b] = F.scalar(1)
    return S


def bar_window(a, N):
    if N < 1:
        raise WindowError("bar window needs N >= 1")
    b = BarWindow(a, N)
    verify_bar(b)
    return b


def verify_bar(b):
    """d^2 = 0, eps d_1 = 0 and the left homotopy identities (hence exactness)."""
    F = b.field
    b.check()
    if b.hi >= 1 and not F.is_zero(F.matmul(b.eps, b.d(1))):
        raise MathError("eps d_1 != 0")
    s_prev = b.left_homotopy(-1)
    lhs = F.add(F.matmul(s_prev, b.eps), F.matmul(b.d(1), b.left_homotopy(0))) if b.hi >= 1 else None
    if lhs is not None and not np.array_equal(lhs, F.eye(lhs.shape[0])):
        raise MathError("bar homotopy identity fails in degree 0")
    for d in range(1, b.hi):
        lhs = F.add(F.matmul(b.left_homotopy(d - 1), b.d(d)), F.matmul(b.d(d + 1), b.left_homotopy(d)))
        if not np.array_equal(lhs, F.eye(lhs.shape[0])):
            raise MathError(f"bar homotopy identity fails in degree {d}")
    return True


# ---------------------------------------------------------------- (co)homology

def _bar_for(a, n, bar=None):
    if bar is not None and bar.hi >= n + 1:
        return bar
    return bar_window(a, n + 1)


def hochschild_cochains(a, m, top, bar=None):
    bar = _bar_for(a, top, bar)
    return hom_complex(bar, m, degrees=range(0, top + 2)), bar


def hochschild_cohomology(a, m, n, bar=None):
    """H^n(A, M) with cochains M^{words of length n} = Hom_k(Abar^{(x)n}, M)."""
    if n < 0:
        raise WindowError("Hochschild cohomology degree must be >= 0")
    cx, _ = hochschild_cochains(a, m, n, bar)
    return cx.group(n)


def hochschild_chains(a, m, top, bar=None):
    bar = _bar_for(a, top, bar)
    return tensor_over_Ae(bar, m, degrees=range(0, top + 2)), bar


def hochschild_homology(a, m, n, bar=None):
    if n < 0:
        raise WindowError("Hochschild homology degree must be >= 0")
    cx, _ = hochschild_chains(a, m, n, bar)
    return cx.group(n)


@dataclass(eq=False)
class CohClass:
    degree: int
    rep: np.ndarray          # cochain in M^{r_n}
    module: object


@dataclass(eq=False)
class HomClass:
    degree: int
    rep: np.ndarray          # chain in N^{r_n}
    module: object


# ---------------------------------------------------------------- diagonal

def bar_diagonal(b, top=None):
    """Alexander-Whitney diagonal: images[n][(n - i, i)] of shape (r_n, r_{n-i}, N, N, r_i, N).

    Delta(1 (x) a_1..a_n (x) 1) = sum_i (1 (x) a_1..a_{n-i} (x) 1) (x)_A (1 (x) a_{n-i+1}..a_n (x) 1).
    """
    a = b.algebra
    F, n = a.field, a.dim
    k = b.letters
    top = b.hi if top is None else top
    out = {}
    for d in range(top + 1):
        comp = {}
        for i in range(d + 1):
            j = d - i
            arr = F.zeros(k ** d, k ** j, n, n, k ** i, n)
            for w in words(k, d):
                arr[word_index(w, k), word_index(w[:j], k), 0, 0, word_index(w[j:], k), 0] = F.scalar(1)
            comp[(j, i)] = arr
        out[d] = comp
    return out


def tensor_extend(alg, images, x, r_src):
    """Evaluate an A^e-linear map on x in A^e^{r_src}, given images[k] as arrays (g, a, b, g', c)."""
    F, n = alg.field, alg.dim
    X = x.reshape(r_src, n, n)
    out = np.einsum("kab,aAx,kgxyhz,bCz->gAyhC", X, alg.L, images, alg.R, optimize=True)
    return F.reduce(out)


def tensor_total_d(b1, b2, comp, deg):
    """Total differential of an element comp[(j, i)] of degree deg in B1 (x)_A B2."""
    a = b1.algebra
    F, n = a.field, a.dim
    out = {}
    for (j, i), X in comp.items():
        if j - 1 >= b1.lo and b1.has_d(j):
            Y = F.reduce(apply_first(X, b1.d(j), b1.rank(j - 1), b2.rank(i), n))
            out[(j - 1, i)] = F.add(out[(j - 1, i)], Y) if (j - 1, i) in out else Y
        if i - 1 >= b2.lo and b2.has_d(i):
            Y = F.reduce(apply_second(X, b2.d(i), b2.rank(i - 1), n))
            if j % 2:
                Y = F.reduce(-Y)
            out[(j, i - 1)] = F.add(out[(j, i - 1)], Y) if (j, i - 1) in out else Y
    return out


def verify_bar_diagonal(b, diag=None):
    """d Delta = Delta d on every generator and (eps (x) eps) Delta = eps in degree 0."""
    a = b.algebra
    F, n = a.field, a.dim
    diag = diag or bar_diagonal(b)
    for d in range(1, max(diag) + 1):
        for s in range(b.rank(d)):
            elem = {key: arr[s] for key, arr in diag[d].items()}
            lhs = tensor_total_d(b, b, elem, d)
            x = b.d_images(d)[s]
            rhs = {}
            for key, arr in diag[d - 1].items():
                rhs[key] = tensor_extend(a, arr, x, b.rank(d - 1))
            for key in set(lhs) | set(rhs):
                l = lhs.get(key)
                r = rhs.get(key)
                l = F.zeros(*r.shape) if l is None else l
                r = F.zeros(*l.shape) if r is None else r
                if not np.array_equal(F.reduce(l), F.reduce(r)):
                    raise MathError(f"bar diagonal is not a chain map at degree {d}, component {key}")
    # (eps (x) eps) Delta(1 (x) 1) = 1
    X = diag[0][(0, 0)][0]
    val = F.zeros(n)
    for al, be, ga in iproduct(range(n), repeat=3):
        c = X[0, al, be, 0, ga]
        if c:
            val = F.add(val, F.scale(c, a.mul(a.mul(a.basis_vector(al), a.basis_vector(be)), a.basis_vector(ga))))
    if not np.array_equal(val, a.one):
        raise MathError("bar diagonal does not preserve the augmentation")
    return True


# ---------------------------------------------------------------- cup / cap

def _tensor_values(a, m, nmod, x, y, proj):
    """x (x)_A y as coordinates in M (x)_A N (proj from tensor_over_A)."""
    return a.field.matmul(proj, np.kron(x, y))


def cup_bar(a, u, v, m, nmod, mn=None):
    """Cochain (-1)^{|u||v|} (u (x)_A v) Delta on Abar^{(x)(p+q)}.

    u: cochain of degree p as an array (r_p, dim M); v likewise.
    Returns (cochain of degree p+q in (M (x)_A N)^{r}, the tensor bimodule).
    """
    F = a.field
    k = a.dim - 1
    p, q = u.degree, v.degree
    U = u.rep.reshape(k ** p, m.dim)
    V = v.rep.reshape(k ** q, nmod.dim)
    if mn is None:
        mn = tensor_over_A(m, nmod)
    tmod, proj = mn
    prods = np.einsum("ix,jy->ijxy", U, V).reshape(k ** p * k ** q, m.dim * nmod.dim)
    vals = F.matmul(F.reduce(prods), proj.T)
    if (p * q) % 2:
        vals = F.reduce(-vals)
    return CohClass(p + q, vals.reshape(-1), tmod)


def cup_bar_AA(a, u, v):
    """Cup on H*(A, A): products land in A (x)_A A = A via multiplication."""
    F = a.field
    k, n = a.dim - 1, a.dim
    p, q = u.degree, v.degree
    U = u.rep.reshape(k ** p, n)
    V = v.rep.reshape(k ** q, n)
    vals = F.reduce(np.einsum("ix,jy,xyz->ijz", U, V, a.table)).reshape(k ** (p + q), n)
    if (p * q) % 2:
        vals = F.reduce(-vals)
    return CohClass(p + q, vals.reshape(-1), u.module)


def cap_bar(a, u, w, m, nmod, mn=None):
    """u (deg m cochain in M) cap w (deg p chain in N) -> deg p - m chain in M (x)_A N.

    On generators: g_w (x) y -> (-1)^{m(p-m)} g_{w front} (x) (u(w back) (x) y).
    """
    F = a.field
    k = a.dim - 1
    dm, p = u.degree, w.degree
    if p < dm:
        raise WindowError("cap needs chain degree >= cochain degree")
    U = u.rep.reshape(k ** dm, m.dim)
    Wc = w.rep.reshape(k ** (p - dm), k ** dm, nmod.dim)
    if mn is None:
        mn = tensor_over_A(m, nmod)
    tmod, proj = mn
    prods = np.einsum("jx,ijy->ixy", U, Wc).reshape(k ** (p - dm), m.dim * nmod.dim)
    vals = F.matmul(F.reduce(prods), proj.T)
    if (dm * (p - dm)) % 2:
        vals = F.reduce(-vals)
    return HomClass(p - dm, vals.reshape(-1), tmod)


def cap_bar_AA(a, u, w):
    """Cap with M = N = A; values in A (x)_A A = A, u(back) times y."""
    F = a.field
    k, n = a.dim - 1, a.dim
    dm, p = u.degree, w.degree
    if p < dm:
        raise WindowError("cap needs chain degree >= cochain degree")
    U = u.rep.reshape(k ** dm, n)
    Wc = w.rep.reshape(k ** (p - dm), k ** dm, n)
    vals = F.reduce(np.einsum("jx,ijy,xyz->iz", U, Wc, a.table)).reshape(-1)
    if (dm * (p - dm)) % 2:
        vals = F.reduce(-vals)
    return HomClass(p - dm, vals, u.module)


def composition_product(a, u, v, bar):
    """Yoneda composite u o G_p, where G lifts v : Bar_q -> A to Bar_{*+q} -> Bar_*.

    G_0 is chosen as the generator-wise lift x -> x (x) 1 of v, and the
    lift satisfies d G_l = (-1)^q G_{l-1} d.
    """
    F, n = a.field, a.dim
    k = n - 1
    p, q = u.degree, v.degree
    V = v.rep.reshape(k ** q, n)
    s = bar.left_homotopy(-1)                      # A -> Bar_0, x -> x (x) 1
    G0 = F.matmul(s, V.T).T                        # images of Bar_q generators in Bar_0
    src = _ShiftedBar(bar, q)
    g = lift_chain_map({0: G0}, src, bar, p, shift=0, sign=1)
    Gp = g.images[p]                                # (r_{p+q}, r_p * n * n)
    U = u.rep.reshape(k ** p, n)
    LR = regular(a).ae_actions()
    imgs = Gp.reshape(k ** (p + q), k ** p, n, n)
    vals = F.reduce(np.einsum("skab,abxy,ky->sx", imgs, LR, U, optimize=True))
    return CohClass(p + q, vals.reshape(-1), u.module)


class _ShiftedBar(ComplexWindow):
    """Bar shifted down by q with d multiplied by (-1)^q (so lifts satisfy d G = (-1)^q G d)."""

    def __init__(self, bar, q):
        F = bar.field
        comps = {d - q: bar.components[d] for d in range(q, bar.hi + 1)}
        imgs = {}
        for d in range(q + 1, bar.hi + 1):
            imgs[d - q] = bar.d_images(d) if q % 2 == 0 else F.reduce(-bar.d_images(d))
        super().__init__(bar.algebra, 0, bar.hi - q, comps, images=imgs, tag="bar-shift")


def verify_composition_product(a, bound=2, bar=None):
    """Cup equals composition product in H*(A, A) for all basis classes of degree <= bound."""
    A = regular(a)
    bar = bar if bar is not None and bar.hi >= 2 * bound + 1 else bar_window(a, 2 * bound + 1)
    cx = hom_complex(bar, A, degrees=range(0, 2 * bound + 2))
    groups = {d: cx.group(d) for d in range(0, 2 * bound + 1)}
    report = []
    for p in range(bound + 1):
        for q in range(bound + 1):
            H = groups[p + q]
            for x in groups[p].representatives:
                for y in groups[q].representatives:
                    cu = cup_bar_AA(a, CohClass(p, x, A), CohClass(q, y, A))
                    co = composition_product(a, CohClass(p, x, A), CohClass(q, y, A), bar)
                    diff = a.field.sub(cu.rep, co.rep)
                    ok = H.cycles.contains(co.rep.reshape(1, -1)) and H.boundaries.contains(diff.reshape(1, -1))
                    report.append(((p, q), ok))
    return report
