"""Explicit bi-Lipschitz building blocks: the trirectangle map and the annulus shear.

Rectangular (Fermi) coordinates (x, y) carry ds^2 = cosh^2(y) dx^2 + dy^2:
x runs along a base geodesic and y is the signed distance from it. A
differential is measured through K = Z_F(p) . DF_p . Z_p^-1, which is the
differential between orthonormal frames, so its singular values bound the
local stretch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import AlphaTooLarge, DomainError, HypothesisViolated
from .polygons import m_exact


@dataclass(frozen=True)
class RectCoordPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("coordinates must be finite")


def rect_metric(p: RectCoordPoint):
    """Z_p = diag(cosh y, 1)."""
    return ((math.cosh(p.y), 0.0), (0.0, 1.0))


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def singular_values(K):
    (a, b), (c, d) = K
    # sigma_1^2 + sigma_2^2 = |K|_F^2, sigma_1 sigma_2 = |det K|
    fro = a * a + b * b + c * c + d * d
    det = abs(a * d - b * c)
    disc = math.sqrt(max(fro * fro - 4 * det * det, 0.0))
    s1 = math.sqrt((fro + disc) / 2)
    s2 = det / s1 if s1 > 0 else 0.0
    return s1, s2


def stretch(K) -> float:
    """Local bi-Lipschitz constant of a linear map: max(sigma_max, 1/sigma_min)."""
    s1, s2 = singular_values(K)
    if s2 <= 0:
        return math.inf
    return max(s1, 1 / s2)


def deviation(K) -> float:
    """||K - I|| in the max-row-sum norm."""
    return max(abs(K[i][0] - (i == 0)) + abs(K[i][1] - (i == 1)) for i in range(2))


# ---------------------------------------------------------------- trirectangle


def trirect_map(a_scale: float, b_scale: float, p: RectCoordPoint) -> RectCoordPoint:
    if a_scale <= 0 or b_scale <= 0:
        raise ValueError("scales must be positive")
    return RectCoordPoint(a_scale * p.x, b_scale * p.y)


def trirect_k_matrix(p: RectCoordPoint, a_scale: float, b_scale: float):
    if a_scale <= 0 or b_scale <= 0:
        raise ValueError("scales must be positive")
    return ((a_scale * math.cosh(b_scale * p.y) / math.cosh(p.y), 0.0), (0.0, b_scale))


def _lambert_cosh(x: float, Y: float) -> float:
    # cosh g for tanh g = tanh Y cosh x, via 1 - tanh^2 g = (1 - sinh^2 Y sinh^2 x)/cosh^2 Y
    q = math.sinh(Y) * math.sinh(x)
    if abs(q) >= 1:
        raise DomainError("geodesic does not reach this abscissa")
    return math.cosh(Y) / math.sqrt((1 - q) * (1 + q))


def lambert_rise(x: float, Y: float) -> float:
    """lambert_height(x, Y) - Y without cancellation near x = 0."""
    # sinh(g - Y) = (tanh g - tanh Y) cosh g cosh Y and tanh g - tanh Y = 2 tanh Y sinh^2(x/2)
    return math.asinh(2 * math.sinh(Y) * math.sinh(x / 2) ** 2 * _lambert_cosh(x, Y))


def lambert_height(x: float, Y: float) -> float:
    """Height over (x, 0) of the geodesic leaving (0, Y) perpendicular to the y-axis."""
    return Y + lambert_rise(x, Y)


def lambert_arc(x: float, Y: float) -> float:
    """Distance from (0, Y) along that geodesic to its point over (x, 0)."""
    return math.asinh(math.sinh(x) * _lambert_cosh(x, Y))


def lambert_abscissa(u: float, Y: float) -> float:
    """Inverse of lambert_arc in x."""
    su = math.sinh(u)
    return math.asinh(su / (math.cosh(Y) * math.sqrt(1 + math.tanh(Y) ** 2 * su * su)))


def _to_hyperboloid(x: float, y: float):
    return (math.cosh(y) * math.cosh(x), math.cosh(y) * math.sinh(x), math.sinh(y))


def _from_hyperboloid(X):
    return math.atanh(X[1] / X[0]), math.asinh(X[2])


def rect_dist(p, q) -> float:
    (x1, y1), (x2, y2) = p, q
    # cosh d - 1 = 2 sinh^2(dy/2) + 2 cosh y1 cosh y2 sinh^2(dx/2)
    v = math.sinh((y1 - y2) / 2) ** 2 + math.cosh(y1) * math.cosh(y2) * math.sinh((x1 - x2) / 2) ** 2
    return 2 * math.asinh(math.sqrt(v))


def _geodesic_interp(p, q, lam: float):
    """Point at fraction lam of the way from p to q, in rectangular coordinates."""
    A, B = _to_hyperboloid(*p), _to_hyperboloid(*q)
    d = rect_dist(p, q)
    if d < 1e-15:
        return p
    sa, sb, s = math.sinh((1 - lam) * d), math.sinh(lam * d), math.sinh(d)
    return _from_hyperboloid(tuple((sa * a + sb * b) / s for a, b in zip(A, B)))


@dataclass(frozen=True)
class Trirectangle:
    """Three right angles at w = (0,0), x = (X, 0), y = (0, Y); z is the acute vertex."""

    X: float
    Y: float

    def __post_init__(self):
        if self.X <= 0 or self.Y <= 0:
            raise ValueError("sides must be positive")
        lambert_height(self.X, self.Y)

    @property
    def z(self) -> RectCoordPoint:
        return RectCoordPoint(self.X, lambert_height(self.X, self.Y))

    def top(self, x: float) -> float:
        return lambert_height(x, self.Y)

    def top_length(self) -> float:
        return lambert_arc(self.X, self.Y)

    def contains(self, p: RectCoordPoint, slack: float = 1e-12) -> bool:
        return -slack <= p.x <= self.X + slack and -slack <= p.y <= self.top(min(max(p.x, 0), self.X)) + slack

    def in_triangle(self, p: RectCoordPoint) -> bool:
        """Whether p lies in the curvilinear triangle above the equidistant y = Y."""
        return p.y > self.Y


@dataclass(frozen=True)
class TrirectangleMap:
    """F: Q1 -> Q0 for the trirectangles of a nearly-symmetric pants decomposition.

    Q0 has sides M(L)/2 and L/4, Q1 has (1+tau)e^{-L/4} and L/4 + rho.
    On the rectangle below the equidistant curve F is (a x, b y). On the
    curvilinear triangle above it each vertical segment, which is the
    geodesic perpendicular to the equidistant curve, goes by a similarity
    to the geodesic segment joining its forced endpoints; the top side goes
    by a similarity of arc length.
    """

    L: float
    tau: float = 0.0
    rho: float = 0.0

    @cached_property
    def source(self) -> Trirectangle:
        return Trirectangle((1 + self.tau) * math.exp(-self.L / 4), self.L / 4 + self.rho)

    @cached_property
    def target(self) -> Trirectangle:
        return Trirectangle(m_exact(self.L) / 2, self.L / 4)

    @cached_property
    def a(self) -> float:
        return self.target.X / self.source.X

    @cached_property
    def b(self) -> float:
        return self.target.Y / self.source.Y

    def __call__(self, p: RectCoordPoint) -> RectCoordPoint:
        Q1, Q0 = self.source, self.target
        if p.y <= Q1.Y:
            return trirect_map(self.a, self.b, p)
        lam = (p.y - Q1.Y) / lambert_rise(p.x, Q1.Y)
        u = lambert_arc(p.x, Q1.Y) * Q0.top_length() / Q1.top_length()
        x_top = lambert_abscissa(u, Q0.Y)
        x, y = _geodesic_interp((self.a * p.x, Q0.Y), (x_top, Q0.Y + lambert_rise(x_top, Q0.Y)), lam)
        return RectCoordPoint(x, y)

    def k_matrix(self, p: RectCoordPoint, h: float | None = None):
        """K at p: closed form on the rectangle, central differences on the triangle."""
        Q1 = self.source
        if p.y <= Q1.Y:
            return trirect_k_matrix(p, self.a, self.b)
        if h is not None:
            return numeric_k(self, p, h, h)
        # steps well inside the triangle, which is pinched near (0, Y)
        rise = lambert_rise(p.x, Q1.Y)
        lam = (p.y - Q1.Y) / rise
        room = min(lam, 1 - lam) * rise
        return numeric_k(self, p, 1e-4 * min(p.x, Q1.X - p.x), 1e-2 * room)

    def rectangle_samples(self, n: int = 200):
        Q1 = self.source
        for i in range(n):
            for j in range(n):
                yield RectCoordPoint(Q1.X * i / (n - 1), Q1.Y * j / (n - 1))

    def triangle_samples(self, n: int = 200):
        Q1 = self.source
        # interior grid in (x, fraction of the vertical segment)
        for i in range(n):
            x = Q1.X * (i + 0.5) / n
            rise = lambert_rise(x, Q1.Y)
            for j in range(1, n + 1):
                yield RectCoordPoint(x, Q1.Y + rise * j / (n + 1))


def numeric_k(F, p: RectCoordPoint, hx: float = 1e-6, hy: float = 1e-6):
    """Z_F(p) DF_p Z_p^-1 with DF from central differences."""
    cols = []
    for dx, dy in ((hx, 0.0), (0.0, hy)):
        step = dx + dy
        f1 = F(RectCoordPoint(p.x + dx, p.y + dy))
        f0 = F(RectCoordPoint(p.x - dx, p.y - dy))
        cols.append(((f1.x - f0.x) / (2 * step), (f1.y - f0.y) / (2 * step)))
    DF = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
    Fp = F(p)
    Zf = rect_metric(Fp)
    Zi = ((1 / math.cosh(p.y), 0.0), (0.0, 1.0))
    return _mat_mul(_mat_mul(Zf, DF), Zi)


@dataclass(frozen=True)
class Certificate:
    region: str
    samples: int
    max_deviation: float
    constant: float
    empirical: bool

    def as_row(self):
        return [self.region, str(self.samples), f"{self.max_deviation:.12e}", f"{self.constant:.12e}",
                "empirical" if self.empirical else "analytic"]


CSV_HEADER = ["region", "samples", "max_deviation", "bilipschitz_constant", "kind"]


def certify_trirectangle(F: TrirectangleMap, n: int = 200):
    """Sampled certificates for the rectangle part and the curvilinear triangle."""
    dev = const = 0.0
    count = 0
    for p in F.rectangle_samples(n):
        K = trirect_k_matrix(p, F.a, F.b)
        dev, const = max(dev, deviation(K)), max(const, stretch(K))
        count += 1
    # cosh(b y)/cosh(y) is monotone in y, so the extremes sit at y = 0 and y = Y
    analytic = [trirect_k_matrix(RectCoordPoint(0.0, y), F.a, F.b) for y in (0.0, F.source.Y)]
    a_dev = max(deviation(K) for K in analytic)
    a_const = max(stretch(K) for K in analytic)
    rect = Certificate("rectangle", count, max(dev, a_dev), max(const, a_const), False)
    dev = const = 0.0
    count = 0
    for p in F.triangle_samples(n):
        K = F.k_matrix(p)
        dev, const = max(dev, deviation(K)), max(const, stretch(K))
        count += 1
    tri = Certificate("triangle", count, dev, const, True)
    return rect, tri


# ---------------------------------------------------------------- annulus


@dataclass(frozen=True)
class AnnulusShearSpec:
    l: float
    t: float
    w: float
    L: float | None = None
    E: float | None = None

    def __post_init__(self):
        if self.l <= 0:
            raise ValueError("curve length must be positive")
        if self.t < 0:
            raise HypothesisViolated("shear must be nonnegative")
        if self.w < 0:
            raise ValueError("collar width must be nonnegative")
        if self.L is not None:
            q = math.exp(-self.L / 4)
            if self.w < q / 2:
                raise HypothesisViolated("collar width below exp(-L/4)/2")
            if self.E is not None and self.t > self.E * q:
                raise HypothesisViolated("shear above E exp(-L/4)")

    @property
    def alpha(self) -> float:
        """Angle of the ray at distance w from the imaginary axis: sin(alpha) = 1/cosh(w)."""
        return math.atan2(1.0, math.sinh(self.w))

    @property
    def ramp(self) -> float:
        """pi - 2 alpha, computed without cancellation."""
        return 2 * math.atan(math.sinh(self.w))


def _check_alpha(spec: AnnulusShearSpec):
    if spec.alpha >= math.pi / 2 or spec.ramp <= 0:
        raise AlphaTooLarge("collar of width zero leaves no room for the ramp")


def annulus_f(theta: float, spec: AnnulusShearSpec) -> float:
    if not 0 < theta < math.pi:
        raise DomainError("theta must lie in (0, pi)")
    _check_alpha(spec)
    al = spec.alpha
    if theta >= math.pi - al:
        return 1.0
    if theta <= al:
        return math.exp(spec.t)
    s = (theta - al) / spec.ramp
    return s + (1 - s) * math.exp(spec.t)


def annulus_f_prime(theta: float, spec: AnnulusShearSpec) -> float:
    if not 0 < theta < math.pi:
        raise DomainError("theta must lie in (0, pi)")
    _check_alpha(spec)
    al = spec.alpha
    if theta >= math.pi - al or theta <= al:
        return 0.0
    return -math.expm1(spec.t) / spec.ramp


def annulus_map(z: complex, spec: AnnulusShearSpec) -> complex:
    """r e^{i theta} -> f(theta) r e^{i theta} on the upper half plane."""
    if z.imag <= 0:
        raise DomainError("point must be in the upper half plane")
    return annulus_f(cmath.phase(z), spec) * z


def annulus_k_matrix(theta: float, spec: AnnulusShearSpec):
    return ((1.0, annulus_f_prime(theta, spec) / annulus_f(theta, spec)), (0.0, 1.0))


def annulus_k_deviation(spec: AnnulusShearSpec) -> float:
    """sup |f'/f| = (e^t - 1)/(pi - 2 alpha), reached where the ramp meets f = 1."""
    _check_alpha(spec)
    return math.expm1(spec.t) / spec.ramp


def certify_annulus(spec: AnnulusShearSpec, n: int = 200):
    """Analytic certificate, plus a sampled check over the ramp."""
    dev = annulus_k_deviation(spec)
    K = ((1.0, dev), (0.0, 1.0))
    analytic = Certificate("annulus", 0, dev, stretch(K), False)
    al = spec.alpha
    sd = sc = 0.0
    for i in range(n):
        th = al + spec.ramp * (i + 0.5) / n
        Ki = annulus_k_matrix(th, spec)
        sd, sc = max(sd, deviation(Ki)), max(sc, stretch(Ki))
    return analytic, Certificate("annulus-ramp", n, sd, sc, True)
