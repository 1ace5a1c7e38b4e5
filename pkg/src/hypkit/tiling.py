"""Tilings of the (Z/2 * Z/2 * Z/2) Cayley tree by labeled graphs, and positive flows.

Everything here is exact: values are Fractions and the linear program is
solved by a rational simplex. A self-loop with label d at v appears once in
D(v); in a quotient complex a loop edge of Y is realized by an involution
whose fixed points become label self-loops.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexMismatch, InvalidTiling, NotAFlow, NotIntegral

LABELS = ("a", "b", "c")


# ---------------------------------------------------------------- graphs


@dataclass(frozen=True)
class TilesetGraph:
    vertices: tuple
    edges: tuple  # (u, v, label) with u, v vertex indices

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((int(u), int(v), str(d)) for u, v, d in self.edges))
        n = len(self.vertices)
        for k, (u, v, d) in enumerate(self.edges):
            if d not in LABELS:
                raise ValueError(f"edge {k} has label {d!r}, expected one of a, b, c")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {k} has an endpoint outside the vertex set")

    @classmethod
    def from_names(cls, vertices, edges):
        idx = {name: i for i, name in enumerate(vertices)}
        return cls(tuple(vertices), tuple((idx[u], idx[v], d) for u, v, d in edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def incident(self, v: int, label: str):
        """Indices of label-d edges at v, loops once, in index order."""
        return [k for k, (a, b, d) in enumerate(self.edges) if d == label and (a == v or b == v)]

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"u": self.vertices[u], "v": self.vertices[v], "label": d} for u, v, d in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TilesetGraph":
        names = [str(x) for x in data["vertices"]]
        if len(set(names)) != len(names):
            raise ValueError("vertex names must be distinct")
        edges = [(e["u"], e["v"], e["label"]) for e in data["edges"]]
        for u, v, _ in edges:
            if u not in names or v not in names:
                raise ValueError(f"edge endpoint {u!r} or {v!r} is not a vertex")
        return cls.from_names(names, edges)


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("flows are exact; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


@dataclass(frozen=True)
class FlowVector:
    vertex: tuple
    edge: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertex", tuple(_frac(x) for x in self.vertex))
        object.__setattr__(self, "edge", tuple(_frac(x) for x in self.edge))

    def entries(self):
        return self.vertex + self.edge

    def scaled(self, k) -> "FlowVector":
        k = _frac(k)
        return FlowVector(tuple(k * x for x in self.vertex), tuple(k * x for x in self.edge))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.entries())

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries())

    def to_json(self, Y: TilesetGraph | None = None) -> dict:
        def s(x):
            return f"{x.numerator}/{x.denominator}"
        if Y is None:
            return {"vertex": [s(x) for x in self.vertex], "edge": [s(x) for x in self.edge]}
        return {
            "vertex": {Y.vertices[i]: s(x) for i, x in enumerate(self.vertex)},
            "edge": [s(x) for x in self.edge],
        }

    @classmethod
    def from_json(cls, data: dict, Y: TilesetGraph | None = None) -> "FlowVector":
        vx = data["vertex"]
        if isinstance(vx, dict):
            if Y is None:
                raise ValueError("named vertex values need the tileset graph")
            vx = [vx[name] for name in Y.vertices]
        return cls(tuple(Fraction(x) for x in vx), tuple(Fraction(x) for x in data["edge"]))


def _check_index(Y: TilesetGraph, f: FlowVector):
    if len(f.vertex) != Y.n_vertices or len(f.edge) != Y.n_edges:
        raise IndexMismatch(
            f"flow has {len(f.vertex)}+{len(f.edge)} entries, graph has {Y.n_vertices}+{Y.n_edges}")


def flow_residual(Y: TilesetGraph, f: FlowVector) -> dict:
    """(vertex name, label) -> f(v) - sum of f(e) over label-d edges at v."""
    _check_index(Y, f)
    out = {}
    for v in range(Y.n_vertices):
        for d in LABELS:
            out[(Y.vertices[v], d)] = f.vertex[v] - sum((f.edge[k] for k in Y.incident(v, d)), Fraction(0))
    return out


def is_flow(Y: TilesetGraph, f: FlowVector) -> bool:
    return all(r == 0 for r in flow_residual(Y, f).values())


def is_positive_flow(Y: TilesetGraph, f: FlowVector) -> bool:
    return is_flow(Y, f) and f.is_nonnegative() and any(x != 0 for x in f.entries())


# ---------------------------------------------------------------- linear program


def flow_system(Y: TilesetGraph):
    """Rows of A x = b for x = (f(v)..., f(e)...): the flow equations, then sum f(v) = 1."""
    nv, ne = Y.n_vertices, Y.n_edges
    rows, rhs = [], []
    for v in range(nv):
        for d in LABELS:
            r = [Fraction(0)] * (nv + ne)
            r[v] = Fraction(1)
            for k in Y.incident(v, d):
                r[nv + k] -= 1
            rows.append(r)
            rhs.append(Fraction(0))
    rows.append([Fraction(1)] * nv + [Fraction(0)] * ne)
    rhs.append(Fraction(1))
    return rows, rhs


@dataclass(frozen=True)
class Infeasible:
    """No positive flow. `certificate` is y with y.A <= 0 and y.b > 0."""

    certificate: tuple
    report: str = ""

    def __bool__(self):
        return False

    def verify(self, Y: TilesetGraph) -> bool:
        A, b = flow_system(Y)
        if len(self.certificate) != len(A):
            return False
        # the system is integral, so clear y's denominators and stay in integers
        y = _int_row([_frac(x) for x in self.certificate])
        yb = sum(yi * int(bi) for yi, bi in zip(y, b))
        if yb <= 0:
            return False
        for j in range(len(A[0]) if A else 0):
            if sum(y[i] * int(A[i][j]) for i in range(len(A)) if y[i]) > 0:
                return False
        return True


def _int_row(row):
    """Positive multiple of a rational row with coprime integer entries."""
    den = 1
    for x in row:
        q = x.denominator
        if q != 1:
            den = den * q // math.gcd(den, q)
    ints = [x.numerator * (den // x.denominator) for x in row]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def phase_one(A, b):
    """Exact phase-1 simplex with Bland's rule.

    Returns ("feasible", x) or ("infeasible", y) where y is a Farkas
    certificate for {A x = b, x >= 0}. Tableau rows are kept as integer
    vectors up to a positive factor, which leaves every sign and ratio
    test unchanged.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    N = n + m
    # make b >= 0 row by row, remember the flips for the certificate
    flip = [1] * m
    T = []
    for i in range(m):
        row = [x if isinstance(x, (int, Fraction)) else _frac(x) for x in A[i]]
        bi = _frac(b[i])
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
            flip[i] = -1
        art = [0] * m
        art[i] = 1
        T.append(_int_row(row + art + [bi]))
    basis = [n + i for i in range(m)]
    cost = [0] * n + [1] * m

    # reduced costs c_j - c_B B^-1 A_j, carried as an extra tableau row;
    # each row is scaled so its basic entry acts as the unit
    lcm = 1
    for i in range(m):
        s_i = T[i][basis[i]]
        lcm = lcm * s_i // math.gcd(lcm, s_i)
    rc = [lcm * c for c in cost] + [0]
    for i in range(m):
        k = lcm // T[i][basis[i]]
        for j in range(N + 1):
            if T[i][j]:
                rc[j] -= k * T[i][j]
    rc = _int_row(rc)

    while True:
        enter = next((j for j in range(N) if rc[j] < 0), None)
        if enter is None:
            break
        r = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                if r is None:
                    r = i
                    continue
                # compare T[i][N]/a with the current best ratio, ties by basis index
                lhs, rhs = T[i][N] * T[r][enter], T[r][N] * a
                if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                    r = i
        if r is None:
            # cannot happen for phase 1 (objective bounded below by 0)
            raise RuntimeError("unbounded phase-one problem")
        Tr = T[r]
        piv = Tr[enter]
        nz = [j for j in range(N + 1) if Tr[j]]
        rows = [i for i in range(m) if i != r]
        for i in rows + [None]:
            row = rc if i is None else T[i]
            f = row[enter]
            if not f:
                continue
            new_row = [x * piv for x in row]
            for j in nz:
                new_row[j] -= f * Tr[j]
            g = 0
            for x in new_row:
                g = math.gcd(g, x)
            if g > 1:
                new_row = [x // g for x in new_row]
            if i is None:
                rc = new_row
            else:
                T[i] = new_row
        basis[r] = enter
    scale = [T[i][basis[i]] for i in range(m)]
    value = sum((Fraction(cost[bv] * T[i][N], scale[i]) for i, bv in enumerate(basis)), Fraction(0))
    if value == 0:
        x = [Fraction(0)] * n
        for i, bv in enumerate(basis):
            if bv < n:
                x[bv] = Fraction(T[i][N], scale[i])
        return "feasible", x
    # dual y = c_B B^-1; the artificial columns of the tableau hold B^-1
    y = []
    for i in range(m):
        acc = Fraction(0)
        for k, bv in enumerate(basis):
            if cost[bv]:
                acc += Fraction(T[k][n + i], scale[k])
        y.append(acc * flip[i])
    return "infeasible", y


def find_positive_flow(Y: TilesetGraph):
    """A positive flow with total vertex weight 1, or Infeasible with a certificate."""
    if Y.n_vertices == 0:
        raise ValueError("tileset graph has no vertices")
    A, b = flow_system(Y)
    status, sol = phase_one(A, b)
    if status == "infeasible":
        return Infeasible(tuple(sol), "phase-one optimum is positive")
    nv = Y.n_vertices
    return FlowVector(tuple(sol[:nv]), tuple(sol[nv:]))


def integerize(f: FlowVector) -> FlowVector:
    """Scale by the least common denominator."""
    den = 1
    for x in f.entries():
        den = den * x.denominator // math.gcd(den, x.denominator)
    return f.scaled(den)


# ---------------------------------------------------------------- quotient complexes


@dataclass(frozen=True)
class QuotientComplex:
    """Finite labeled graph; a valid one has exactly one edge per label at every vertex."""

    n: int
    edges: tuple  # (x, y, label)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(x), int(y), str(d)) for x, y, d in self.edges))

    @classmethod
    def from_neighbor_maps(cls, maps: dict) -> "QuotientComplex":
        n = len(next(iter(maps.values())))
        edges = []
        for d in LABELS:
            nb = maps[d]
            for x in range(n):
                y = nb[x]
                if x <= y:
                    edges.append((x, y, d))
        return cls(n, tuple(edges))

    @classmethod
    def from_graph(cls, Y: TilesetGraph) -> "QuotientComplex":
        return cls(Y.n_vertices, Y.edges)

    def label_violations(self):
        out = []
        for x in range(self.n):
            for d in LABELS:
                cnt = sum(1 for a, b, e in self.edges if e == d and (a == x or b == x))
                if cnt != 1:
                    out.append(f"vertex {x} has {cnt} edges labeled {d}")
        for k, (a, b, d) in enumerate(self.edges):
            if d not in LABELS or not (0 <= a < self.n and 0 <= b < self.n):
                out.append(f"edge {k} is malformed")
        return out

    def neighbor_maps(self) -> dict:
        bad = self.label_violations()
        if bad:
            raise InvalidTiling("; ".join(bad))
        maps = {d: [None] * self.n for d in LABELS}
        for x, y, d in self.edges:
            maps[d][x] = y
            maps[d][y] = x
        return maps

    def edge_at(self) -> dict:
        """(vertex, label) -> edge index."""
        out = {}
        for k, (x, y, d) in enumerate(self.edges):
            out[(x, d)] = k
            out[(y, d)] = k
        return out

    def components(self):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for x, y, _ in self.edges:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        groups = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values(), key=lambda g: g[0])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [{"x": x, "y": y, "label": d} for x, y, d in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "QuotientComplex":
        return cls(int(data["n"]), tuple((e["x"], e["y"], e["label"]) for e in data["edges"]))


@dataclass(frozen=True)
class TilingMorphism:
    vertex_map: tuple
    edge_map: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(int(x) for x in self.vertex_map))
        object.__setattr__(self, "edge_map", tuple(int(x) for x in self.edge_map))

    def to_json(self) -> dict:
        return {"vertex_map": list(self.vertex_map), "edge_map": list(self.edge_map)}

    @classmethod
    def from_json(cls, data: dict) -> "TilingMorphism":
        return cls(tuple(data["vertex_map"]), tuple(data["edge_map"]))


def _loop_pairing(block):
    # (1 2)(3 4)... and a fixed point at the end if the block is odd
    pairs = []
    for k in range(0, len(block) - 1, 2):
        pairs.append((block[k], block[k + 1]))
    if len(block) % 2:
        pairs.append((block[-1], block[-1]))
    return pairs


def build_quotient(Y: TilesetGraph, Z: FlowVector):
    """The full quotient complex Q for an integral positive flow Z, all components."""
    _check_index(Y, Z)
    if not Z.is_integral():
        raise NotIntegral("tiling needs an integral flow; call integerize first")
    if not Z.is_nonnegative() or not is_flow(Y, Z) or not any(Z.entries()):
        raise NotAFlow("input is not a positive flow")
    offset, n = [], 0
    for v in range(Y.n_vertices):
        offset.append(n)
        n += int(Z.vertex[v])
    vertex_map = [0] * n
    for v in range(Y.n_vertices):
        for x in range(offset[v], offset[v] + int(Z.vertex[v])):
            vertex_map[x] = v
    # X_{v,e}: consecutive blocks of X_v, edges in index order
    blocks = {}
    for v in range(Y.n_vertices):
        for d in LABELS:
            start = offset[v]
            for k in Y.incident(v, d):
                size = int(Z.edge[k])
                blocks[(v, k)] = list(range(start, start + size))
                start += size
    qedges, emap = [], []
    for k, (u, v, d) in enumerate(Y.edges):
        if Z.edge[k] == 0:
            continue
        if u == v:
            pairs = _loop_pairing(blocks[(u, k)])
        else:
            pairs = list(zip(blocks[(u, k)], blocks[(v, k)]))
        for x, y in pairs:
            qedges.append((min(x, y), max(x, y), d))
            emap.append(k)
    return QuotientComplex(n, tuple(qedges)), TilingMorphism(tuple(vertex_map), tuple(emap))


def restrict(Q: QuotientComplex, m: TilingMorphism, keep):
    keep = sorted(keep)
    new = {x: i for i, x in enumerate(keep)}
    edges, emap = [], []
    for (x, y, d), k in zip(Q.edges, m.edge_map):
        if x in new:
            edges.append((new[x], new[y], d))
            emap.append(k)
    return (QuotientComplex(len(keep), tuple(edges)),
            TilingMorphism(tuple(m.vertex_map[x] for x in keep), tuple(emap)))


def build_periodic_tiling(Y: TilesetGraph, Z: FlowVector):
    """Connected quotient (component of the lowest-indexed vertex) and its morphism to Y."""
    Q, m = build_quotient(Y, Z)
    return restrict(Q, m, Q.components()[0])


def verify_tiling(Q: QuotientComplex, m: TilingMorphism, Y: TilesetGraph):
    """(ok, violations): m must preserve labels and incidence, Q one edge per label."""
    bad = list(Q.label_violations())
    if len(m.vertex_map) != Q.n:
        bad.append(f"vertex map has {len(m.vertex_map)} entries for {Q.n} vertices")
    if len(m.edge_map) != len(Q.edges):
        bad.append(f"edge map has {len(m.edge_map)} entries for {len(Q.edges)} edges")
    if bad:
        return False, bad
    for x, v in enumerate(m.vertex_map):
        if not 0 <= v < Y.n_vertices:
            bad.append(f"vertex {x} maps outside Y")
    if bad:
        return False, bad
    for j, ((x, y, d), k) in enumerate(zip(Q.edges, m.edge_map)):
        if not 0 <= k < Y.n_edges:
            bad.append(f"edge {j} maps outside Y")
            continue
        u, v, dy = Y.edges[k]
        if dy != d:
            bad.append(f"edge {j} labeled {d} maps to edge {k} labeled {dy}")
        if {m.vertex_map[x], m.vertex_map[y]} != {u, v}:
            bad.append(f"edge {j} endpoints do not map to the endpoints of edge {k}")
    return not bad, bad


def tiling_to_flow(Q: QuotientComplex, m: TilingMorphism, Y: TilesetGraph) -> FlowVector:
    """Preimage counts. An edge counts the vertices over one endpoint whose edge maps to it.

    For edges between distinct vertices this is the number of preimage edges;
    over a loop every vertex of the block counts, fixed or paired.
    """
    ok, bad = verify_tiling(Q, m, Y)
    if not ok:
        raise InvalidTiling("; ".join(bad))
    vc = [0] * Y.n_vertices
    for v in m.vertex_map:
        vc[v] += 1
    ec = [0] * Y.n_edges
    for (x, y, _), k in zip(Q.edges, m.edge_map):
        u, v, _ = Y.edges[k]
        if u == v:
            ec[k] += 1 if x == y else 2
        else:
            ec[k] += 1
    return FlowVector(tuple(vc), tuple(ec))


def disjoint_union(parts):
    n, edges, vm, em = 0, [], [], []
    for Q, m in parts:
        edges += [(x + n, y + n, d) for x, y, d in Q.edges]
        vm += list(m.vertex_map)
        em += list(m.edge_map)
        n += Q.n
    return QuotientComplex(n, tuple(edges)), TilingMorphism(tuple(vm), tuple(em))


# ---------------------------------------------------------------- the tree


def tree_reduce(word: str) -> str:
    """Cancel doubled letters: a^2 = b^2 = c^2 = 1."""
    out = []
    for ch in word:
        if ch not in LABELS:
            raise ValueError(f"{ch!r} is not a generator")
        if out and out[-1] == ch:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def tree_ball(radius: int):
    """Reduced words of length <= radius, shortlex."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    words, layer = [""], [""]
    for _ in range(radius):
        layer = [w + d for w in layer for d in LABELS if not w or w[-1] != d]
        words += layer
    return words


@dataclass(frozen=True)
class BallTiling:
    radius: int
    quotient_vertex: dict  # word -> vertex of Q
    vertex: dict           # word -> vertex of Y
    edge: dict             # (word, label) -> edge of Y, for |word d| <= radius

    def to_json(self, Y: TilesetGraph | None = None) -> dict:
        name = (lambda v: Y.vertices[v]) if Y is not None else (lambda v: v)
        return {
            "radius": self.radius,
            "vertex": {w or "1": name(v) for w, v in self.vertex.items()},
            "edge": [{"word": w or "1", "label": d, "edge": k} for (w, d), k in self.edge.items()],
        }


def lift_to_tree(Q: QuotientComplex, m: TilingMorphism, basepoint: int, radius: int,
                 Y: TilesetGraph | None = None) -> BallTiling:
    """Pull the tiling back to the radius-R ball of the tree around the identity.

    The identity goes to `basepoint`, and vertex w.d sits across the d-edge from w.
    """
    if Y is not None:
        ok, bad = verify_tiling(Q, m, Y)
        if not ok:
            raise InvalidTiling("; ".join(bad))
    maps = Q.neighbor_maps()
    at = Q.edge_at()
    if not 0 <= basepoint < Q.n:
        raise InvalidTiling("basepoint is not a vertex of the quotient")
    qv = {"": basepoint}
    edge = {}
    for w in tree_ball(radius):
        if w == "":
            continue
        parent, d = w[:-1], w[-1]
        qv[w] = maps[d][qv[parent]]
        edge[(parent, d)] = m.edge_map[at[(qv[parent], d)]]
    return BallTiling(radius, qv, {w: m.vertex_map[x] for w, x in qv.items()}, edge)


def translate_ball(ball: BallTiling, g: str) -> dict:
    """(g^-1 phi)(w) = phi(g w), on the words w with |g w| inside the ball."""
    g = tree_reduce(g)
    out = {}
    for w in ball.vertex:
        gw = tree_reduce(g + w)
        if len(gw) <= ball.radius:
            out[w] = ball.vertex[gw]
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
