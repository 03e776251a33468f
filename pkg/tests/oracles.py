"""Independent brute-force oracles.

Written against sympy's GF(p) matrices and plain Python lists only, so
they share no code with the package.  They are deliberately slow and
only used on tiny algebras.
"""
import itertools

from sympy import GF
from sympy.polys.matrices import DomainMatrix


def _dm(rows, ncols, p):
    K = GF(p)
    return DomainMatrix([[K(int(x)) for x in r] for r in rows], (len(rows), ncols), K)


def rank_mod(rows, ncols, p):
    if not rows or ncols == 0:
        return 0
    return _dm(rows, ncols, p).rank()


def nullspace_mod(rows, ncols, p):
    """Basis of {x : rows . x = 0} as lists of ints."""
    if ncols == 0:
        return []
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols, p).nullspace().to_list()
    return [[int(x) % p for x in v] for v in ns]


def mul(table, x, y, p):
    n = len(table)
    out = [0] * n
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            c = x[i] * y[j]
            for k in range(n):
                out[k] = (out[k] + c * table[i][j][k]) % p
    return out


def nakayama_bruteforce(table, lam, p):
    """nu as a list of images nu(u_i), found by exhaustive search."""
    n = len(table)
    basis = [[int(i == j) for j in range(n)] for i in range(n)]

    def form(x, y):
        return sum(c * l for c, l in zip(mul(table, x, y, p), lam)) % p

    images = []
    for i in range(n):
        hits = []
        for cand in itertools.product(range(p), repeat=n):
            cand = list(cand)
            if all(form(basis[i], basis[j]) == form(basis[j], cand) for j in range(n)):
                hits.append(cand)
        assert len(hits) == 1
        images.append(hits[0])
    return images


def envelope_table(table, p):
    """Structure constants of A (x) A^op, basis index i*n + j for u_i (x) u_j^o."""
    n = len(table)
    N = n * n
    out = [[[0] * N for _ in range(N)] for _ in range(N)]
    for i, j, k, l in itertools.product(range(n), repeat=4):
        for s in range(n):
            if table[i][k][s] == 0:
                continue
            for t in range(n):
                if table[l][j][t] == 0:
                    continue
                out[i * n + j][k * n + l][s * n + t] = (out[i * n + j][k * n + l][s * n + t]
                                                        + table[i][k][s] * table[l][j][t]) % p
    return out


def nilpotent_span(table, p):
    """Span of all nilpotent elements (enumerates the whole algebra)."""
    n = len(table)
    nil = []
    for x in itertools.product(range(p), repeat=n):
        x = list(x)
        y = x
        for _ in range(n + 1):
            y = mul(table, y, x, p)
        if not any(y):
            nil.append(x)
    r = rank_mod(nil, n, p)
    basis = _dm(nil, n, p).rref()[0].to_list()[:r] if nil else []
    return [[int(v) % p for v in row] for row in basis]


def _act_on_bimodule(table, p, a, b, m):
    """u_a m u_b in the regular bimodule."""
    n = len(table)
    ua = [int(i == a) for i in range(n)]
    ub = [int(i == b) for i in range(n)]
    return mul(table, mul(table, ua, m, p), ub, p)


def hochschild_cohomology_minimal(table, p, nmax, rad=None):
    """dim H^n(A, A) for n = 0..nmax from a minimal A^e-resolution of A.

    A^e must be commutative local (true for commutative local A), so that the
    radical of A^e is its set of nilpotents.  rad may be given as a spanning
    list of A^e vectors when enumerating the algebra is too slow.
    """
    n = len(table)
    N = n * n
    et = envelope_table(table, p)
    rad = nilpotent_span(et, p) if rad is None else rad

    def emul(x, y):
        return mul(et, x, y, p)

    # elements of a free module of rank r are lists of r elements of A^e
    # P_0 = A^e -> A,  u_a (x) u_b^o -> u_a u_b
    def eps(x):
        out = [0] * n
        for a in range(n):
            for b in range(n):
                c = x[a * n + b]
                if c:
                    prod = mul(table, [int(i == a) for i in range(n)], [int(i == b) for i in range(n)], p)
                    out = [(o + c * v) % p for o, v in zip(out, prod)]
        return out

    def flat(vecs):
        return [v for vec in vecs for v in vec]

    # map matrix of P_r -> (target as k-space), given generator images
    def free_map_matrix(gen_images, target_mul):
        cols = []
        for g in gen_images:
            for e in range(N):
                ee = [int(i == e) for i in range(N)]
                cols.append(target_mul(ee, g))
        return cols  # list of columns

    ranks = [1]
    # d_1's generators: minimal generators of ker(eps)
    eps_rows = [[eps([int(i == e) for i in range(N)])[k] for e in range(N)] for k in range(n)]
    kernel_vecs = nullspace_mod(eps_rows, N, p)
    diffs = []   # diffs[k] = generator images of d_{k+1} as lists of elements of P_k (rank r_k)
    current_kernel = [[v] for v in kernel_vecs]   # elements of P_0 (rank 1)
    current_rank = 1
    for deg in range(1, nmax + 2):
        # choose minimal generators of the kernel modulo rad * kernel
        dim_amb = current_rank * N

        def act(e, elem):
            return [emul(e, comp) for comp in elem]

        kflat = [flat(k) for k in current_kernel]
        radk = [flat(act(r, k)) for r in rad for k in current_kernel]
        base_rank = rank_mod(radk, dim_amb, p)
        gens = []
        span = list(radk)
        for k, kf in zip(current_kernel, kflat):
            trial = span + [kf]
            if rank_mod(trial, dim_amb, p) > rank_mod(span, dim_amb, p):
                gens.append(k)
                span = trial
        del base_rank
        diffs.append(gens)
        new_rank = len(gens)
        ranks.append(new_rank)
        # kernel of P_deg -> P_{deg-1}
        cols = []
        for g in gens:
            for e in range(N):
                ee = [int(i == e) for i in range(N)]
                cols.append(flat(act(ee, g)))
        rows = [[cols[c][r] for c in range(len(cols))] for r in range(dim_amb)]
        ker = nullspace_mod(rows, new_rank * N, p)
        current_kernel = [[v[j * N:(j + 1) * N] for j in range(new_rank)] for v in ker]
        current_rank = new_rank
    # Hom(P_k, A) = A^{r_k};  delta_k : Hom(P_k, A) -> Hom(P_{k+1}, A)
    def delta_matrix(k):
        gens = diffs[k]          # images of generators of P_{k+1} in P_k
        rk, rk1 = ranks[k], ranks[k + 1]
        rows = []
        for j, g in enumerate(gens):
            for out_coord in range(n):
                row = []
                for src in range(rk):
                    for basis_m in range(n):
                        m = [int(i == basis_m) for i in range(n)]
                        val = [0] * n
                        for e in range(N):
                            c = g[src][e]
                            if c:
                                a, b = divmod(e, n)
                                img = _act_on_bimodule(table, p, a, b, m)
                                val = [(v + c * w) % p for v, w in zip(val, img)]
                        row.append(val[out_coord])
                rows.append(row)
        return rows, rk * n, rk1 * n

    dims = []
    for deg in range(0, nmax + 1):
        rows, ncols, _ = delta_matrix(deg)
        ker = ncols - rank_mod(rows, ncols, p)
        if deg == 0:
            im = 0
        else:
            prow, pcols, _ = delta_matrix(deg - 1)
            im = rank_mod(prow, pcols, p)
        dims.append(ker - im)
    return dims, ranks


def dual_numbers_tate_oracle(p, lo, hi):
    """Tate-Hochschild data of k[x]/(x^2) from its 1-periodic complete resolution.

    A^e = k[x, y]/(x^2, y^2) with x = x (x) 1, y = 1 (x) x^o.  T_n = A^e for
    all n, d_n = multiplication by x - y (n odd) or x + y (n even); d_0 = eta eps.
    Returns (dims, product_ranks) where product_ranks[(i, j)] is the rank of the
    Yoneda product map H^i (x) H^j -> H^{i+j}.
    """
    # A^e basis 1, x, y, xy; A basis 1, x.  Elements of A^e act on A by
    # (x^s y^t) . a = x^{s+t} a.
    def act(e, a):
        # e = [c1, cx, cy, cxy]; a = [a0, a1]
        s0 = e[0]
        s1 = (e[1] + e[2]) % p
        return [(s0 * a[0]) % p, (s0 * a[1] + s1 * a[0]) % p]

    def emul(e, f):
        # commutative, x^2 = y^2 = 0
        c1 = e[0] * f[0]
        cx = e[0] * f[1] + e[1] * f[0]
        cy = e[0] * f[2] + e[2] * f[0]
        cxy = e[0] * f[3] + e[3] * f[0] + e[1] * f[2] + e[2] * f[1]
        return [c1 % p, cx % p, cy % p, cxy % p]

    def d(n):
        return [0, 1, p - 1, 0] if n % 2 else [0, 1, 1, 0]

    def eps(e):
        return act(e, [1, 0])

    # cochains C^n = Hom(T_n, A) = A (value on the generator);  delta: C^n -> C^{n+1}
    def delta(n):
        cols = [act(d(n + 1), [1, 0]), act(d(n + 1), [0, 1])]
        return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]

    def cohom(n):
        out = delta(n)
        inn = delta(n - 1)
        zbasis = nullspace_mod(out, 2, p)
        bspace = [[inn[0][c], inn[1][c]] for c in range(2)]
        rb = rank_mod(bspace, 2, p)
        return zbasis, bspace, len(zbasis) - rb

    dims = {n: cohom(n)[2] for n in range(lo, hi + 1)}

    def lift(n, j, value):
        """Chain map G with eps G_0 = f (f: T_j -> A with value) and d G = (-1)^j G d."""
        # G_l : T_{l+j} -> T_l  is multiplication by g_l in A^e
        g = {}
        sols = [e for e in itertools.product(range(p), repeat=4) if eps(list(e)) == value]
        g[0] = list(sols[0])
        sign = 1 if j % 2 == 0 else p - 1
        for l in range(1, max(n, 0) + 1):
            target = [(sign * v) % p for v in emul(g[l - 1], d(l + j))]
            for e in itertools.product(range(p), repeat=4):
                if emul(d(l), list(e)) == target:
                    g[l] = list(e)
                    break
            else:
                raise AssertionError("lift failed")
        for l in range(-1, min(n, 0) - 1, -1):
            # G_l d_{l+j+1} = (-1)^j d_{l+1} G_{l+1}
            target = [(sign * v) % p for v in emul(d(l + 1), g[l + 1])]
            for e in itertools.product(range(p), repeat=4):
                if emul(list(e), d(l + j + 1)) == target:
                    g[l] = list(e)
                    break
            else:
                raise AssertionError("lift failed")
        return g

    def product(i, fi, j, gj):
        """class of f o G_i where G lifts g (degree j)."""
        G = lift(i, j, gj)
        return act(G[i], fi)

    ranks = {}
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            if not (lo <= i + j <= hi):
                continue
            zi, _, di = cohom(i)
            zj, _, dj = cohom(j)
            zk, bk, dk = cohom(i + j)
            if di == 0 or dj == 0 or dk == 0:
                ranks[(i, j)] = 0
                continue
            vals = [product(i, f, j, g) for f in zi for g in zj]
            r = rank_mod(bk + vals, 2, p) - rank_mod(bk, 2, p)
            ranks[(i, j)] = r
    return dims, ranks
