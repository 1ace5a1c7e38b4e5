"""Boundary arithmetic, Mobius maps, geodesics and distances in upper half-space."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import (
    DegenerateCrossRatio,
    IdentityInput,
    NotLoxodromic,
    NotPerpendicular,
    SharedEndpoint,
    WrongAxis,
)

TWO_PI = 2.0 * math.pi
PERP_TOL = 1e-9


def reduce_imag(mu: complex) -> complex:
    """Representative of mu mod 2*pi*i with imaginary part in (-pi, pi]."""
    mu = complex(mu)
    im = math.pi - math.fmod(math.pi - mu.imag, TWO_PI)
    if im <= -math.pi:
        im += TWO_PI
    elif im > math.pi:
        im -= TWO_PI
    return complex(mu.real, im)


class Displacement(complex):
    """Complex displacement reduced to the strip Im in (-pi, pi]."""

    def __new__(cls, mu=0.0):
        r = reduce_imag(complex(mu))
        return super().__new__(cls, r.real, r.imag)

    def __repr__(self):
        return f"Displacement({complex(self)!r})"


def mu_close(x: complex, y: complex, tol: float = 1e-9) -> bool:
    """Compare two displacements mod 2*pi*i."""
    d = reduce_imag(complex(x) - complex(y))
    return abs(d) <= tol


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of C u {oo}. The point at infinity is tagged, never a big float."""

    z: complex = 0j
    inf: bool = False

    def __post_init__(self):
        if self.inf:
            object.__setattr__(self, "z", 0j)
        else:
            object.__setattr__(self, "z", complex(self.z))

    def __repr__(self):
        return "INF" if self.inf else f"BoundaryPoint({self.z!r})"

    def isclose(self, other, tol: float = 1e-10) -> bool:
        other = as_point(other)
        if self.inf or other.inf:
            return self.inf == other.inf
        return abs(self.z - other.z) <= tol * max(1.0, abs(self.z), abs(other.z))


INF = BoundaryPoint(inf=True)


def as_point(p) -> BoundaryPoint:
    if isinstance(p, BoundaryPoint):
        return p
    return BoundaryPoint(complex(p))


@dataclass(frozen=True, eq=False)
class Mobius:
    """Element of PSL2(C), stored with determinant one."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix")
        s = cmath.sqrt(det)
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, v / s)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, z: complex):
        return cls(z, 0, 0, 1 / z)

    @classmethod
    def translation(cls, mu: complex):
        """z -> exp(mu) z, the displacement-mu map along 0 -> oo."""
        return cls.diag(cmath.exp(complex(mu) / 2))

    def entries(self):
        return self.a, self.b, self.c, self.d

    def __matmul__(self, o: "Mobius") -> "Mobius":
        return Mobius(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self):
        return Mobius(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def conj(self, A: "Mobius") -> "Mobius":
        """A m A^-1."""
        return A @ self @ A.inverse()

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        e, f = self.entries(), other.entries()
        return e == f or e == tuple(-x for x in f)

    __hash__ = None

    def isclose(self, other: "Mobius", tol: float = 1e-9) -> bool:
        e, f = self.entries(), other.entries()
        scale = max(1.0, max(abs(x) for x in e))
        plus = max(abs(x - y) for x, y in zip(e, f))
        minus = max(abs(x + y) for x, y in zip(e, f))
        return min(plus, minus) <= tol * scale

    def __call__(self, p):
        return mobius_apply(self, p)

    def apply_h3(self, p: "PointH") -> "PointH":
        """Action on upper half-space (Poincare extension)."""
        a, b, c, d = self.entries()
        z, t = p.z, p.t
        w = c * z + d
        den = abs(w) ** 2 + abs(c) ** 2 * t * t
        nz = ((a * z + b) * w.conjugate() + a * c.conjugate() * t * t) / den
        return PointH(nz, t / den)

    def apply_geodesic(self, g: "OrientedGeodesic") -> "OrientedGeodesic":
        return OrientedGeodesic(self(g.start), self(g.end))


def mobius_apply(m: Mobius, p) -> BoundaryPoint:
    p = as_point(p)
    if p.inf:
        if m.c == 0:
            return INF
        return BoundaryPoint(m.a / m.c)
    den = m.c * p.z + m.d
    if den == 0:
        return INF
    return BoundaryPoint((m.a * p.z + m.b) / den)


def _diff(x: BoundaryPoint, y: BoundaryPoint):
    """x - y, or None when exactly one is infinite (the factor cancels)."""
    if x.inf or y.inf:
        return None
    return x.z - y.z


def cross_ratio(a, b, c, d) -> complex:
    """R(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c)), with the oo limits."""
    a, b, c, d = (as_point(x) for x in (a, b, c, d))
    if sum(p.inf for p in (a, b, c, d)) > 1:
        raise DegenerateCrossRatio("more than one point at infinity")
    num = [_diff(a, c), _diff(b, d)]
    den = [_diff(a, d), _diff(b, c)]
    n = math.prod(x for x in num if x is not None)
    m = math.prod(x for x in den if x is not None)
    if m == 0:
        raise DegenerateCrossRatio("coincident points in the denominator")
    return n / m


@dataclass(frozen=True)
class OrientedGeodesic:
    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        s, e = as_point(self.start), as_point(self.end)
        if s.isclose(e, 0.0):
            raise ValueError("geodesic endpoints must differ")
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    def reverse(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.end, self.start)

    __neg__ = reverse

    def same_line(self, other: "OrientedGeodesic", tol: float = 1e-9) -> bool:
        s, e = self.start, self.end
        return (s.isclose(other.start, tol) and e.isclose(other.end, tol)) or (
            s.isclose(other.end, tol) and e.isclose(other.start, tol)
        )

    def isclose(self, other: "OrientedGeodesic", tol: float = 1e-9) -> bool:
        return self.start.isclose(other.start, tol) and self.end.isclose(other.end, tol)


def geodesic(u, v) -> OrientedGeodesic:
    return OrientedGeodesic(as_point(u), as_point(v))


def normalizer(g: OrientedGeodesic) -> Mobius:
    """A Mobius map sending g.start to 0 and g.end to oo."""
    u, v = g.start, g.end
    if u.inf:
        return Mobius(0, 1, 1, -v.z)
    if v.inf:
        return Mobius(1, -u.z, 0, 1)
    return Mobius(1, -u.z, 1, -v.z)


def along(g: OrientedGeodesic, mu: complex) -> Mobius:
    """The loxodromic with oriented axis g and displacement mu."""
    A = normalizer(g)
    return Mobius.translation(mu).conj(A.inverse())


def half_turn(g: OrientedGeodesic) -> Mobius:
    """Rotation by pi about the geodesic g."""
    return along(g, 1j * math.pi)


@dataclass(frozen=True)
class PointH:
    """Point (z, t) of upper half-space; the plane case has z real."""

    z: complex
    t: float

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "t", float(self.t))
        if not self.t > 0:
            raise ValueError("height must be positive")


def cosh_dist(p: PointH, q: PointH) -> float:
    return 1.0 + (abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2) / (2.0 * p.t * q.t)


def dist_point(p: PointH, q: PointH) -> float:
    # acosh(1 + x) written via asinh for accuracy when the points are close
    x = (abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2) / (4.0 * p.t * q.t)
    return 2.0 * math.asinh(math.sqrt(x))


def _is_hyperbolic_class(m: Mobius) -> bool:
    tr = m.trace
    if abs(tr.imag) > 1e-12 * max(1.0, abs(tr)):
        return True
    return abs(tr.real) > 2.0 + 1e-12


def displacement(m: Mobius, axis: OrientedGeodesic, tol: float = 1e-9) -> Displacement:
    """mu(m, axis): conjugate the axis to 0 -> oo and read off exp(mu/2)."""
    if not _is_hyperbolic_class(m):
        raise NotLoxodromic(f"trace {m.trace} is not loxodromic")
    for p in (axis.start, axis.end):
        if not m(p).isclose(p, tol):
            raise WrongAxis("axis endpoints are not fixed by the map")
    A = normalizer(axis)
    n = m.conj(A)
    if abs(n.b) + abs(n.c) > 1e-6 * (abs(n.a) + abs(n.d)):
        raise WrongAxis("conjugated map is not diagonal")
    return Displacement(2.0 * cmath.log(n.a))


def translation_length(m: Mobius) -> Displacement:
    """Displacement along the repelling -> attracting orientation (Re > 0)."""
    if not _is_hyperbolic_class(m):
        raise NotLoxodromic(f"trace {m.trace} is not loxodromic")
    mu = 2.0 * cmath.acosh(m.trace / 2.0)
    if mu.real < 0:
        mu = -mu
    return Displacement(mu)


class FixedPoints(tuple):
    """Pair of fixed points; `parabolic` marks the doubled case."""

    def __new__(cls, p, q, parabolic=False):
        self = super().__new__(cls, (p, q))
        self.parabolic = parabolic
        return self


def fixed_points(m: Mobius, tol: float = 1e-12) -> FixedPoints:
    a, b, c, d = m.entries()
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(b) <= tol * scale and abs(c) <= tol * scale and abs(a - d) <= tol * scale:
        raise IdentityInput("identity has no isolated fixed points")
    disc = cmath.sqrt((a + d) ** 2 - 4)
    parabolic = abs(disc) <= 1e-9 * max(1.0, abs(a + d))
    if abs(c) <= tol * scale:
        if parabolic:
            return FixedPoints(INF, INF, True)
        return FixedPoints(BoundaryPoint(b / (d - a)), INF)
    if parabolic:
        p = BoundaryPoint((a - d) / (2 * c))
        return FixedPoints(p, p, True)
    # pick the cancellation-free root first, get the other from the product
    s = a - d
    q = s + disc if abs(s + disc) >= abs(s - disc) else s - disc
    r1 = q / (2 * c)
    r2 = -b / (c * r1) if r1 != 0 else (s - (q - s)) / (2 * c)
    roots = sorted([r1, r2], key=lambda z: (round(abs(z), 12), z.real, z.imag))
    return FixedPoints(BoundaryPoint(roots[0]), BoundaryPoint(roots[1]))


def repelling_attracting(m: Mobius) -> OrientedGeodesic:
    """Axis of a loxodromic m oriented from repelling to attracting point."""
    if not _is_hyperbolic_class(m):
        raise NotLoxodromic(f"trace {m.trace} is not loxodromic")
    p, q = fixed_points(m)
    g = OrientedGeodesic(p, q)
    if displacement(m, g, tol=1e-6).real < 0:
        g = g.reverse()
    return g


def perpendicular_residual(g1: OrientedGeodesic, g2: OrientedGeodesic) -> float:
    """|R(w, w', u, u') + 1|; zero exactly when the lines meet at a right angle."""
    try:
        r = cross_ratio(g2.start, g2.end, g1.start, g1.end)
    except DegenerateCrossRatio:
        return math.inf
    return abs(r + 1.0)


def is_perpendicular(g1, g2, tol: float = PERP_TOL) -> bool:
    return perpendicular_residual(g1, g2) <= tol


def _width_value(g1, g2, g3) -> complex:
    u, u2 = g1.start, g1.end
    v, v2 = g2.start, g2.end
    w, w2 = g3.start, g3.end
    for x, y, sign in ((u, v, 1), (u, v2, -1), (u2, v, -1), (u2, v2, 1)):
        try:
            r = cross_ratio(x, y, w2, w)
        except DegenerateCrossRatio:
            continue
        if r != 0:
            return sign * r
    raise DegenerateCrossRatio("double cross width undefined")


def double_cross_width(g1, g2, g3, tol: float = PERP_TOL) -> Displacement:
    """Width mu(g1, g2; g3) with exp(mu) = R(u, v, w', w)."""
    for g in (g1, g2):
        res = perpendicular_residual(g, g3)
        if res > tol:
            raise NotPerpendicular(f"perpendicularity residual {res:.3e}")
    return Displacement(cmath.log(_width_value(g1, g2, g3)))


def common_perpendicular(g1: OrientedGeodesic, g2: OrientedGeodesic) -> OrientedGeodesic:
    """The geodesic perpendicular to g1 and g2, oriented from g1 toward g2."""
    pts = [g1.start, g1.end, g2.start, g2.end]
    for i in range(4):
        for j in range(i + 1, 4):
            if pts[i].isclose(pts[j], 1e-14):
                raise SharedEndpoint("geodesics share an endpoint")
    A = normalizer(g1)
    r, s = A(g2.start).z, A(g2.end).z
    k = cmath.sqrt(r * s)
    Ai = A.inverse()

    def back(z):
        # an endpoint whose pole cancels to rounding is the point at infinity
        den = Ai.c * z + Ai.d
        if abs(den) <= 1e-13 * max(abs(Ai.c * z), abs(Ai.d)):
            return INF
        return Ai(BoundaryPoint(z))
    # orient by the heights at which the candidate meets g1 and g2 after
    # moving the candidate to 0 -> oo
    cand = OrientedGeodesic(back(-k), back(k))
    B = normalizer(cand)
    h1 = abs(B(g1.start).z)
    h2 = abs(B(g2.start).z)
    if h2 < h1:
        cand = cand.reverse()
    return cand


def meeting_residual(g1: OrientedGeodesic, g2: OrientedGeodesic) -> float:
    """Zero when the two lines cross; the angle by which 0 misses the chord otherwise."""
    A = normalizer(g1)
    r, s = A(g2.start), A(g2.end)
    if r.inf or s.inf or r.z == 0 or s.z == 0:
        return math.inf
    return abs(cmath.phase(-r.z / s.z))


def intersection(g1: OrientedGeodesic, g2: OrientedGeodesic, tol: float = 1e-7) -> PointH:
    """Meeting point of two crossing geodesics."""
    if meeting_residual(g1, g2) > tol:
        raise NotPerpendicular("geodesics do not meet")
    A = normalizer(g1)
    r, s = A(g2.start).z, A(g2.end).z
    return A.inverse().apply_h3(PointH(0, math.sqrt(abs(r) * abs(s))))


def midpoint(p: PointH, q: PointH) -> PointH:
    """Hyperbolic midpoint of the segment pq."""
    if abs(p.z - q.z) == 0:
        return PointH(p.z, math.sqrt(p.t * q.t))
    # put both points on the vertical line through 0 and take the geometric mean
    g = _geodesic_through(p, q)
    A = normalizer(g)
    a, b = A.apply_h3(p), A.apply_h3(q)
    return A.inverse().apply_h3(PointH(0, math.sqrt(a.t * b.t)))


def _geodesic_through(p: PointH, q: PointH) -> OrientedGeodesic:
    if abs(p.z - q.z) == 0:
        return OrientedGeodesic(BoundaryPoint(p.z), INF)
    # the geodesic lies in the vertical plane over the segment pz -> qz
    u = (q.z - p.z) / abs(q.z - p.z)
    x1, x2 = 0.0, abs(q.z - p.z)
    # circle center c on the real x-axis with c^2 - 2 c x + x^2 + t^2 = r^2 equal for both
    c = ((x2 * x2 + q.t * q.t) - (x1 * x1 + p.t * p.t)) / (2 * (x2 - x1))
    r = math.hypot(x1 - c, p.t)
    return OrientedGeodesic(BoundaryPoint(p.z + u * (c - r)), BoundaryPoint(p.z + u * (c + r)))


def geodesic_through(p: PointH, q: PointH) -> OrientedGeodesic:
    """The geodesic through p and q, oriented from p toward q."""
    g = _geodesic_through(p, q)
    A = normalizer(g)
    if A.apply_h3(q).t < A.apply_h3(p).t:
        g = g.reverse()
    return g


def point_on(g: OrientedGeodesic, p: PointH, tol: float = 1e-8) -> float:
    """Residual measuring how far p is from lying on g (zero when on it)."""
    A = normalizer(g)
    q = A.apply_h3(p)
    return abs(q.z) / q.t if q.t > 0 else math.inf


def foot(g: OrientedGeodesic, p: PointH) -> PointH:
    """Orthogonal projection of p onto g."""
    A = normalizer(g)
    q = A.apply_h3(p)
    h = math.hypot(abs(q.z), q.t)
    return A.inverse().apply_h3(PointH(0, h))


def shift_point(g: OrientedGeodesic, p: PointH, s: float) -> PointH:
    """Move a point of g by signed distance s along g."""
    return along(g, s).apply_h3(p)


def as_json_complex(z):
    if isinstance(z, BoundaryPoint):
        if z.inf:
            return {"inf": True}
        z = z.z
    z = complex(z)
    return {"re": z.real, "im": z.imag}
