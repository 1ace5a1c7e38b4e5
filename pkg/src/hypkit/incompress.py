"""Altitude planes of nearly-symmetric hexagons and the disjointness checks around them.

A plane of upper half-space is stored by the Hermitian form of its boundary
circle, q(z) = a|z|^2 + 2 Re(conj(b) z) + d, scaled so that |b|^2 - a d = 1.
Two planes are disjoint exactly when the inversive product of their circles
exceeds 1 in absolute value, and then the distance between them is its acosh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConstructionFailed, HypothesisViolated, NotShortSide
from .hypcore import (
    BoundaryPoint,
    Mobius,
    OrientedGeodesic,
    PointH,
    along,
    common_perpendicular,
    dist_point,
    half_turn,
    intersection,
    normalizer,
    reduce_imag,
)
from .polygons import IPI, NearlySymmetricSpec, RealizedHexagon, hexagon_realize, orient_standard


# ---------------------------------------------------------------- planes


@dataclass(frozen=True)
class PlaneH3:
    a: float
    b: complex
    d: float

    def __post_init__(self):
        a, b, d = float(self.a), complex(self.b), float(self.d)
        disc = abs(b) ** 2 - a * d
        if not disc > 0:
            raise ValueError("form does not describe a circle or line")
        s = math.sqrt(disc)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "d", d / s)

    @classmethod
    def from_circle(cls, center: complex, radius: float) -> "PlaneH3":
        if not radius > 0:
            raise ValueError("radius must be positive")
        c = complex(center)
        return cls(1.0, -c, abs(c) ** 2 - radius * radius)

    @classmethod
    def from_line(cls, point: complex, direction: complex) -> "PlaneH3":
        """Vertical plane over the line point + R * direction."""
        direction = complex(direction)
        if direction == 0:
            raise ValueError("direction must be nonzero")
        n = 1j * direction / abs(direction)
        return cls(0.0, n / 2, -(n.conjugate() * complex(point)).real)

    @property
    def is_vertical(self) -> bool:
        return abs(self.a) < 1e-14 * (abs(self.b) + abs(self.d))

    @property
    def center(self) -> complex:
        return -self.b / self.a

    @property
    def radius(self) -> float:
        return 1.0 / abs(self.a)

    def describe(self) -> dict:
        if self.is_vertical:
            n = self.b / abs(self.b)
            p = -self.d * n / (2 * abs(self.b))
            u = -1j * n
            return {"kind": "line", "point": [p.real, p.imag], "direction": [u.real, u.imag]}
        c = self.center
        return {"kind": "circle", "center": [c.real, c.imag], "radius": self.radius}

    def form(self, z: complex, t: float = 0.0) -> float:
        return self.a * (abs(z) ** 2 + t * t) + 2 * (self.b.conjugate() * z).real + self.d

    def signed_distance(self, p: PointH) -> float:
        """Signed hyperbolic distance from p; the sign tells the side."""
        return math.asinh(self.form(p.z, p.t) / (2 * p.t))

    def contains_point(self, p: PointH, tol: float = 1e-8) -> bool:
        return abs(self.signed_distance(p)) <= tol

    def boundary_residual(self, z: BoundaryPoint) -> float:
        """How far an ideal point is from the boundary circle (chordal scale)."""
        if z.inf:
            return abs(self.a)
        return abs(self.form(z.z)) / (1 + abs(z.z)) ** 2 * 2

    def geodesic_residual(self, g: OrientedGeodesic) -> float:
        return max(self.boundary_residual(g.start), self.boundary_residual(g.end))

    def transform(self, m: Mobius) -> "PlaneH3":
        """Image under m: the form pulled back by m^-1."""
        p, q, r, s = m.inverse().entries()
        # q'(w) = q(m^-1 w) |r w + s|^2, i.e. H' = N^* H N with N = m^-1
        a, b, d = self.a, self.b, self.d
        H = ((a, b), (b.conjugate(), d))
        N = ((p, q), (r, s))
        Nh = ((p.conjugate(), r.conjugate()), (q.conjugate(), s.conjugate()))
        M1 = [[sum(Nh[i][k] * H[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        M2 = [[sum(M1[i][k] * N[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        return PlaneH3(M2[0][0].real, M2[0][1], M2[1][1].real)

    def inversive(self, other: "PlaneH3") -> float:
        return (self.a * other.d + other.a * self.d) / 2 - (self.b * other.b.conjugate()).real

    def angle(self, other: "PlaneH3") -> float:
        """Angle between intersecting planes in [0, pi/2]."""
        v = abs(self.inversive(other))
        if v >= 1:
            return 0.0
        return math.acos(v)

    def side(self, p: PointH) -> int:
        s = self.signed_distance(p)
        return 0 if s == 0 else (1 if s > 0 else -1)


def plane_perpendicular(g: OrientedGeodesic, p: PointH) -> PlaneH3:
    """The plane through p (a point of g) meeting g at a right angle."""
    A = normalizer(g)
    q = A.apply_h3(p)
    return PlaneH3.from_circle(0, math.hypot(abs(q.z), q.t)).transform(A.inverse())


def plane_containing(g: OrientedGeodesic, p: PointH) -> PlaneH3:
    """The plane through the geodesic g and a point off it."""
    A = normalizer(g)
    q = A.apply_h3(p)
    if abs(q.z) == 0:
        raise ConstructionFailed("point lies on the geodesic")
    return PlaneH3.from_line(0, q.z).transform(A.inverse())


def planes_disjoint(p1: PlaneH3, p2: PlaneH3):
    """(disjoint, separation). Tangent circles count as meeting."""
    v = abs(p1.inversive(p2))
    if v > 1:
        return True, math.acosh(v)
    return False, 0.0


# ---------------------------------------------------------------- altitude planes


@dataclass(frozen=True)
class AltitudePlane:
    plane: PlaneH3
    short_side: int
    altitude: OrientedGeodesic
    foot: PointH         # where the altitude meets the short side
    far_end: PointH      # where it meets the opposite long side

    def transform(self, m: Mobius) -> "AltitudePlane":
        return AltitudePlane(self.plane.transform(m), self.short_side, m.apply_geodesic(self.altitude),
                             m.apply_h3(self.foot), m.apply_h3(self.far_end))


def short_sides(h: RealizedHexagon, L: float | None = None, eps: float | None = None):
    w = h.widths if h.widths is not None else h.measure()
    out = []
    for k in range(1, 7):
        r = abs(w[k].real)
        if L is not None:
            e = eps or 0.0
            limit = 2 * (1 + e) * math.exp(-L / 4) + 10 * math.exp(-3 * L / 4)
            ok = r < limit
        else:
            ok = r < abs(w[k - 1].real) and r < abs(w[k + 1].real)
        if ok:
            out.append(k)
    return out


def altitude_plane_data(h: RealizedHexagon, k: int, L: float | None = None, eps: float | None = None) -> AltitudePlane:
    """Plane through the altitude at short side k, perpendicular to that side.

    The altitude is the common perpendicular of side k and side k + 3.
    """
    if k not in short_sides(h, L, eps):
        raise NotShortSide(f"side {k} is not a short side")
    alt = h.altitude(k)
    foot = intersection(alt, h.side(k), tol=1e-6)
    far = intersection(alt, h.side(k + 3), tol=1e-6)
    return AltitudePlane(plane_perpendicular(h.side(k), foot), k, alt, foot, far)


def altitude_plane(h: RealizedHexagon, k: int, L: float | None = None, eps: float | None = None) -> PlaneH3:
    return altitude_plane_data(h, k, L, eps).plane


def altitude_plane_residuals(ap: AltitudePlane, h: RealizedHexagon) -> dict:
    """Containment of the altitude and orthogonality to the short side."""
    # with the short side moved to 0 -> oo, a perpendicular plane is a hemisphere centred at 0
    img = ap.plane.transform(normalizer(h.side(ap.short_side)))
    ortho = math.inf if img.is_vertical else abs(img.center) / img.radius
    return {
        "altitude": ap.plane.geodesic_residual(ap.altitude),
        "foot": abs(ap.plane.signed_distance(ap.foot)),
        "far_end": abs(ap.plane.signed_distance(ap.far_end)),
        "perpendicular": ortho,
    }


# ---------------------------------------------------------------- triangles


@dataclass(frozen=True)
class TriangleVerdict:
    feasible: bool
    cos_third: float
    margin: float   # cos^2((A+B)/2) - sin A sin B sinh^2(s/2); positive iff feasible

    def __bool__(self):
        return self.feasible


def triangle_feasibility(side: float, angle1: float, angle2: float) -> TriangleVerdict:
    """Can a triangle have this side between these two angles?

    The third angle C obeys cos C = -cos A cos B + sin A sin B cosh(side),
    and the triangle closes iff cos C < 1. Written as
    cos C - 1 = 2 sin A sin B sinh^2(side/2) - 2 cos^2((A+B)/2)
    so that right angles and short sides lose nothing to rounding.
    """
    if not side > 0:
        raise ValueError("side must be positive")
    for a in (angle1, angle2):
        if not 0 < a < math.pi:
            raise ValueError("angles must lie in (0, pi)")
    sa, sb = math.sin(angle1), math.sin(angle2)
    ch = math.cos((angle1 + angle2) / 2)
    margin = ch * ch - sa * sb * math.sinh(side / 2) ** 2
    cos_c = 1 - 2 * margin
    return TriangleVerdict(margin > 0, cos_c, margin)


# ---------------------------------------------------------------- case synthesis


@dataclass(frozen=True)
class CaseConfig:
    case_id: int
    L: float = 30.0
    eps: float = 0.01
    That: float = 1.0

    def __post_init__(self):
        if self.case_id not in range(1, 10):
            raise ValueError("case_id must be one of 1..9")
        if not self.eps > 0 or not self.L > 0:
            raise ValueError("L and eps must be positive")


FAMILY = {1: "1&8", 8: "1&8", 2: "2&5&6", 5: "2&5&6", 6: "2&5&6", 3: "3&7", 7: "3&7", 4: "4&9", 9: "4&9"}

# worst-case shapes: each cuff parameter pushed to the edge of the eps ball
RHO_PATTERNS = ((1, 1, 1), (-1, -1, -1), (1, -1, 1), (-1, 1, -1), (1j, -1j, 1), (-1j, 1, 1j))


def _hexagon(L: float, eps: float, pattern, center: int = 1) -> RealizedHexagon:
    spec = NearlySymmetricSpec(L, *(eps * complex(p) for p in pattern))
    try:
        h = hexagon_realize(spec.hexagon())
    except Exception as exc:  # several failure modes, all meaning no realization
        raise ConstructionFailed(f"hexagon realization failed: {exc}") from exc
    # put the vertex where the case happens at height 1, so the region of interest has unit scale
    v = h.vertex(center)
    D = Mobius.diag(1 / math.sqrt(v.t))
    return h.transform(D)


def _measure_lines(lines):
    try:
        return orient_standard(lines)
    except Exception as exc:
        raise ConstructionFailed(f"auxiliary hexagon failed: {exc}") from exc


@dataclass
class CaseReport:
    case_id: int
    family: str
    L: float
    eps: float
    That: float
    disjoint: bool
    separation: float
    triangle_feasible: bool
    triangle_margin: float
    triangle_cos: float
    worst: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    variants: int = 0

    def as_dict(self):
        return {
            "case": self.case_id, "family": self.family, "L": self.L, "eps": self.eps, "That": self.That,
            "disjoint": self.disjoint, "separation": self.separation,
            "triangle_feasible": self.triangle_feasible, "triangle_margin": self.triangle_margin,
            "triangle_cos": self.triangle_cos,
            "variants": self.variants, "worst": self.worst, "extra": self.extra,
        }


def _twist_offsets(cfg: CaseConfig):
    q = math.exp(-cfg.L / 4)
    s = cfg.That * q
    phi = cfg.eps * q
    return [(ss, pp) for ss in (s, -s) for pp in (phi, -phi)]


def _across(h: RealizedHexagon, shift: complex) -> Mobius:
    """Isometry placing a copy of h on the other side of the cuff S_1, twisted by shift."""
    return along(h.side(1), shift + IPI)


def _aux_verdict(lines, extra_angle=(0.0, 0.0)):
    """Widths of the auxiliary hexagon G and the triangle z v2 v3 test built from them."""
    G = _measure_lines(lines)
    w = G.widths
    d2 = abs(reduce_imag(complex(w[2]) - IPI).imag) + extra_angle[0]
    d4 = abs(reduce_imag(complex(w[4]) - IPI).imag) + extra_angle[1]
    v = triangle_feasibility(abs(w[3].real), math.pi / 2 - d2, math.pi / 2 - d4)
    return v, {"G2": complex(w[2]), "G3": complex(w[3]), "G4": complex(w[4])}


def _plane_tilt(ap: AltitudePlane, long_line: OrientedGeodesic) -> float:
    """Angle between an altitude plane and the plane through its altitude perpendicular to the long side."""
    other = plane_perpendicular(long_line, ap.far_end)
    return ap.plane.angle(other) if not planes_disjoint(ap.plane, other)[0] else 0.0


def _case_1(h, cfg, s, phi):
    Pi1 = altitude_plane_data(h, 2)
    T = _across(h, s + 1j * phi)
    Pi2 = Pi1.transform(T)
    b = h.vertex(1)
    c = T.apply_h3(b)
    Pi3 = plane_perpendicular(h.side(2), b)
    Pi4 = Pi3.transform(T)
    ce = dist_point(c, Pi2.foot)
    tilt = Pi3.angle(Pi4) if not planes_disjoint(Pi3, Pi4)[0] else 0.0
    v = triangle_feasibility(ce, math.pi / 2, math.pi / 2 - tilt)
    d13, s13 = planes_disjoint(Pi1.plane, Pi3)
    d23, s23 = planes_disjoint(Pi2.plane, Pi3)
    return Pi1.plane, Pi2.plane, v, {
        "d_ce": ce, "angle_Pi3_Pi4": tilt, "Pi3_vs_Pi1": [d13, s13], "Pi3_vs_Pi2": [d23, s23],
        "Pi3_separates": bool(d13 and d23 and Pi3.side(Pi1.foot) * Pi3.side(Pi2.foot) < 0),
    }


def _case_2(h, cfg, s, phi):
    # ab on S_2 at b = v_1; cd on the far short side of the hexagon across the cuff
    Pi1 = altitude_plane_data(h, 2)
    T = _across(h, s + 1j * phi)
    Pi2 = altitude_plane_data(h, 6).transform(T)
    lines = [h.side(2), Pi1.altitude, None, Pi2.altitude, T.apply_geodesic(h.side(6)), h.side(1)]
    lines[2] = common_perpendicular(lines[1], lines[3])
    v, widths = _aux_verdict(lines)
    return Pi1.plane, Pi2.plane, v, widths


def _case_5(h, cfg, s, phi):
    # as case 2, but cd lies on the twin (across its seam through b) of the hexagon across the cuff
    Pi1 = altitude_plane_data(h, 2)
    T = _across(h, s + 1j * phi)
    T = half_turn(T.apply_geodesic(h.side(2))) @ T
    Pi2 = altitude_plane_data(h, 6).transform(T)
    lines = [h.side(2), Pi1.altitude, None, Pi2.altitude, T.apply_geodesic(h.side(6)), h.side(1)]
    lines[2] = common_perpendicular(lines[1], lines[3])
    v, widths = _aux_verdict(lines)
    return Pi1.plane, Pi2.plane, v, widths


def _case_6(h, cfg, s, phi):
    # mirror of case 2: ab on the across-cuff copy of S_2, cd on S_6 of the base hexagon
    T = _across(h, s + 1j * phi)
    Pi1 = altitude_plane_data(h, 2).transform(T)
    Pi2 = altitude_plane_data(h, 6)
    lines = [T.apply_geodesic(h.side(2)), Pi1.altitude, None, Pi2.altitude, h.side(6), h.side(1)]
    lines[2] = common_perpendicular(lines[1], lines[3])
    v, widths = _aux_verdict(lines)
    return Pi1.plane, Pi2.plane, v, widths


def _case_3(h, cfg, s, phi):
    # a = far end of the altitude at S_4 (on S_1); d = far end of the altitude at S_2
    # in the twin across the seam S_6, so b, c are the ends of S_6
    Pi1 = altitude_plane_data(h, 4)
    R = half_turn(h.side(6))
    Pi2 = altitude_plane_data(h, 2).transform(R)
    return _short_pair(h, Pi1, Pi2, h.side(1), R.apply_geodesic(h.side(5)))


def _case_7(h, cfg, s, phi):
    # mirror of case 3: a in the twin across S_6, d in the base hexagon
    R = half_turn(h.side(6))
    Pi1 = altitude_plane_data(h, 4).transform(R)
    Pi2 = altitude_plane_data(h, 2)
    return _short_pair(h, Pi1, Pi2, R.apply_geodesic(h.side(1)), h.side(5))


def _short_pair(h, Pi1, Pi2, long1, long2):
    # long1, long2: the copies of the long sides that actually carry a and d
    lines = [long1, Pi1.altitude, None, Pi2.altitude, long2, h.side(6)]
    lines[2] = common_perpendicular(lines[1], lines[3])
    tilt = (_plane_tilt(Pi1, long1), _plane_tilt(Pi2, long2))
    v, widths = _aux_verdict(lines, tilt)
    widths["tilts"] = list(tilt)
    return Pi1.plane, Pi2.plane, v, widths


def _case_4(h, cfg, s, phi):
    # a and b: altitude ends on the cuff S_1, in h and in its neighbour across the seam S_2
    Pi1 = altitude_plane_data(h, 4)
    R = half_turn(h.side(2))
    Pi2 = Pi1.transform(R)
    return _long_pair(Pi1, Pi2, h.side(1), R.apply_geodesic(h.side(1)))


def _case_9(h, cfg, s, phi):
    # b on the hexagon across the cuff, one half-length further along it
    Pi1 = altitude_plane_data(h, 4)
    half = complex(h.widths[1]).real
    T = _across(h, half + s + 1j * phi)
    Pi2 = Pi1.transform(T)
    return _long_pair(Pi1, Pi2, h.side(1), T.apply_geodesic(h.side(1)))


def _long_pair(Pi1, Pi2, line1, line2):
    a, b = Pi1.far_end, Pi2.far_end
    ab = dist_point(a, b)
    t1, t2 = _plane_tilt(Pi1, line1), _plane_tilt(Pi2, line2)
    v = triangle_feasibility(ab, math.pi / 2 - t1, math.pi / 2 - t2)
    return Pi1.plane, Pi2.plane, v, {"d_ab": ab, "tilts": [t1, t2]}


_BUILDERS = {1: _case_1, 8: _case_1, 2: _case_2, 5: _case_5, 6: _case_6,
             3: _case_3, 7: _case_7, 4: _case_4, 9: _case_9}
_TWISTED = {1, 8, 2, 5, 6, 9}
# vertex of the base hexagon placed at unit height for each case
_CENTER = {1: 1, 8: 1, 2: 1, 5: 1, 6: 1, 3: 6, 7: 6, 4: 1, 9: 1}


def _jsonable(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def case_check(cfg: CaseConfig) -> CaseReport:
    """Build each variant of the case and keep the worst one (least separated planes).

    Variants run over cuff-length patterns at the eps boundary and, for
    configurations glued across a cuff, twists of real part +-That e^{-L/4}
    and imaginary part +-eps e^{-L/4}.
    """
    if cfg.case_id in _TWISTED and 2 * cfg.That * math.exp(-cfg.L / 4) >= cfg.eps:
        raise HypothesisViolated("needs eps > 2 That exp(-L/4)")
    build = _BUILDERS[cfg.case_id]
    twists = _twist_offsets(cfg) if cfg.case_id in _TWISTED else [(0.0, 0.0)]
    worst = None
    count = 0
    for pat in RHO_PATTERNS:
        h = _hexagon(cfg.L, cfg.eps, pat, _CENTER[cfg.case_id])
        for s, phi in twists:
            try:
                P1, P2, verdict, extra = build(h, cfg, s, phi)
            except (NotShortSide, ConstructionFailed):
                raise
            except Exception as exc:
                raise ConstructionFailed(f"case {cfg.case_id}: {exc}") from exc
            dis, sep = planes_disjoint(P1, P2)
            count += 1
            key = (dis, sep)
            if worst is None or key < worst[0]:
                worst = (key, pat, s, phi, verdict, extra)
    (dis, sep), pat, s, phi, verdict, extra = worst
    return CaseReport(
        cfg.case_id, FAMILY[cfg.case_id], cfg.L, cfg.eps, cfg.That, dis, sep,
        verdict.feasible, verdict.margin, verdict.cos_third,
        worst=_jsonable({"rho_over_eps": [complex(p) for p in pat], "twist": complex(s, phi)}),
        extra=_jsonable(extra), variants=count,
    )
