"""Independent reference computations used by the tests.

Nothing here calls into hypkit; each routine works by a different route
than the library does (quaternions, the hyperboloid, mpmath trigonometry,
brute-force basis enumeration).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath as mp
import numpy as np

# ---------------------------------------------------------------- quaternions
# q = z + w j with z, w complex (Cayley-Dickson: j z = conj(z) j)


def qmul(p, q):
    z1, w1 = p
    z2, w2 = q
    return (z1 * z2 - w1 * w2.conjugate(), z1 * w2 + w1 * z2.conjugate())


def qinv(q):
    z, w = q
    n = abs(z) ** 2 + abs(w) ** 2
    return (z.conjugate() / n, -w / n)


def quat_mobius(a, b, c, d, z, t):
    """(a q + b)(c q + d)^-1 for the point q = z + t j of upper half-space."""
    q = (complex(z), complex(t))
    num = qmul((complex(a), 0j), q)
    num = (num[0] + b, num[1])
    den = qmul((complex(c), 0j), q)
    den = (den[0] + d, den[1])
    r = qmul(num, qinv(den))
    return r[0], r[1].real


# ---------------------------------------------------------------- hyperboloid


def hyperboloid(z, t):
    z = complex(z)
    s = abs(z) ** 2 + t * t
    return ((s + 1) / (2 * t), (s - 1) / (2 * t), z.real / t, z.imag / t)


def hyperboloid_dist(p, q):
    X, Y = hyperboloid(*p), hyperboloid(*q)
    inner = X[0] * Y[0] - X[1] * Y[1] - X[2] * Y[2] - X[3] * Y[3]
    return float(mp.acosh(max(inner, 1.0)))


# ---------------------------------------------------------------- trigonometry


def hexagon_opposite_mp(s1, s3, s5, dps=50):
    """Widths s4, s6, s2 opposite s1, s3, s5 from the law of cosines, in mpmath."""
    with mp.workdps(dps):
        s = [mp.mpc(s1), mp.mpc(s3), mp.mpc(s5)]
        out = []
        for i in range(3):
            x, y, z = s[i], s[(i + 1) % 3], s[(i + 2) % 3]
            c = (mp.cosh(x) - mp.cosh(y) * mp.cosh(z)) / (mp.sinh(y) * mp.sinh(z))
            out.append(complex(mp.acosh(c)))
        return out


def m_symmetric_mp(L, dps=60):
    """Short side of the symmetric right-angled hexagon with long sides L/2."""
    with mp.workdps(dps):
        a = mp.mpf(L) / 2
        c = (mp.cosh(a) + mp.cosh(a) ** 2) / mp.sinh(a) ** 2
        return float(mp.acosh(c))


def trace_length_mp(entries, dps=60):
    a, b, c, d = [mp.mpc(x) for x in entries]
    with mp.workdps(dps):
        mu = 2 * mp.acosh((a + d) / 2)
        if mp.re(mu) < 0:
            mu = -mu
        return mu


# ---------------------------------------------------------------- flows


def edge_flow_system(n, edges):
    """Flow conditions with the vertex weights eliminated.

    f(v) equals the a-sum at v, so the unknowns are the edge weights alone:
    a-sum = b-sum and a-sum = c-sum at every vertex, total vertex weight 1.
    A loop at v counts once in the sum of its label.
    """
    m = len(edges)
    rows, rhs = [], []

    def dsum(v, lab):
        r = [0] * m
        for k, (x, y, d) in enumerate(edges):
            if d == lab and (x == v or y == v):
                r[k] = 1
        return r
    for v in range(n):
        ra = dsum(v, "a")
        for lab in "bc":
            r = dsum(v, lab)
            rows.append([Fraction(ra[k] - r[k]) for k in range(m)])
            rhs.append(Fraction(0))
    total = [Fraction(0)] * m
    for v in range(n):
        for k, x in enumerate(dsum(v, "a")):
            total[k] += x
    rows.append(total)
    rhs.append(Fraction(1))
    return rows, rhs


def _solve_support(cols, rhs):
    """Unique solution on a column support, by fraction-free elimination.

    cols are integer column tuples; returns a tuple of Fractions, or None
    when the columns are dependent or the system is inconsistent.
    """
    k = len(cols)
    m = len(rhs)
    M = [[cols[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    prev = 1
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        for i in range(r + 1, m):
            M[i] = [(M[r][c] * M[i][j] - M[i][c] * M[r][j]) // prev for j in range(k + 1)]
            # columns left of c are already zero below the pivot
        prev = M[r][c]
        r += 1
    if any(M[i][k] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * k
    for i in range(k - 1, -1, -1):
        acc = Fraction(M[i][k]) - sum((M[i][j] * x[j] for j in range(i + 1, k)), Fraction(0))
        x[i] = acc / M[i][i]
    return tuple(x)


_SUPPORT_CACHE = {}


def polytope_vertex(A, b):
    """A basic feasible solution of {A x = b, x >= 0} by trying every column support.

    Integer data only. Returns the full vector or None. A nonempty
    polyhedron in the nonnegative orthant always has a vertex, and every
    vertex is the unique solution on its support, so exhausting the
    supports decides feasibility.
    """
    n = len(A[0]) if A else 0
    columns = [tuple(int(A[i][j]) for i in range(len(A))) for j in range(n)]
    rhs = tuple(int(x) for x in b)
    for size in range(0, n + 1):
        for cols in itertools.combinations(range(n), size):
            key = tuple(columns[j] for j in cols)
            if len(set(key)) < size:
                continue  # repeated column, dependent
            ck = (frozenset(key), rhs)
            if ck in _SUPPORT_CACHE:
                sol = _SUPPORT_CACHE[ck]
                if sol is not None:
                    sol = tuple(sol[c] for c in key)
            else:
                x = _solve_support(key, rhs)
                _SUPPORT_CACHE[ck] = None if x is None else dict(zip(key, x))
                sol = x
            if sol is not None and all(v >= 0 for v in sol):
                full = [Fraction(0)] * n
                for j, v in zip(cols, sol):
                    full[j] = v
                return full
    return None


def flow_feasible(n, edges):
    if not edges:
        return False, None
    A, b = edge_flow_system(n, edges)
    x = polytope_vertex(A, b)
    return x is not None, x


# ---------------------------------------------------------------- graph enumeration


def edge_types(n):
    return [(u, v, d) for u in range(n) for v in range(u, n) for d in "abc"]


def _type_permutations(n):
    types = edge_types(n)
    index = {t: i for i, t in enumerate(types)}
    perms = []
    for pv in itertools.permutations(range(n)):
        for pl in itertools.permutations("abc"):
            lab = dict(zip("abc", pl))
            img = []
            for u, v, d in types:
                x, y = sorted((pv[u], pv[v]))
                img.append(index[(x, y, lab[d])])
            # canonical vector position i reads the count of the type sent to i
            inv = [0] * len(types)
            for i, j in enumerate(img):
                inv[j] = i
            perms.append(inv)
    return types, np.array(perms)


def _canonical_keys(counts, perms):
    # lexicographic minimum over the group, as a pair of base-8 integers
    imgs = counts[:, perms]  # (N, G, T)
    T = imgs.shape[2]
    half = (T + 1) // 2
    w_hi = 8 ** np.arange(half - 1, -1, -1, dtype=np.int64)
    w_lo = 8 ** np.arange(T - half - 1, -1, -1, dtype=np.int64)
    hi = imgs[:, :, :half] @ w_hi
    lo = imgs[:, :, half:] @ w_lo
    mhi = hi.min(axis=1)
    lo = np.where(hi == mhi[:, None], lo, np.iinfo(np.int64).max)
    return list(zip(mhi.tolist(), lo.min(axis=1).tolist()))


def graphs_up_to_iso(n, max_edges):
    """Edge-labeled multigraphs on n vertices, loops allowed, up to relabeling.

    Vertex permutations and permutations of the three labels are both
    quotiented out; yields lists of (u, v, label) with u <= v.
    """
    types, perms = _type_permutations(n)
    T = len(types)
    level = {(0, 0): np.zeros(T, dtype=np.int64)}
    for v in level.values():
        yield []
    for _ in range(max_edges):
        cands = []
        for vec in level.values():
            for i in range(T):
                w = vec.copy()
                w[i] += 1
                cands.append(w)
        arr = np.array(cands)
        keys = []
        for j in range(0, len(arr), 2000):
            keys += _canonical_keys(arr[j:j + 2000], perms)
        nxt = {}
        for k, w in zip(keys, arr):
            if k not in nxt:
                nxt[k] = w
        level = nxt
        for w in level.values():
            yield [types[i] for i in range(T) for _ in range(int(w[i]))]
