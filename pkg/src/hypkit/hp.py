"""Extended-precision Mobius helpers (mpmath) for constructions that chain many maps."""

from __future__ import annotations

import mpmath as mp

from .hypcore import INF, BoundaryPoint, OrientedGeodesic

DPS = 50
CTX = mp.MPContext()
CTX.dps = DPS


def to_mp(p: BoundaryPoint):
    return None if p.inf else CTX.mpc(p.z)


def from_mp(z) -> BoundaryPoint:
    return INF if z is None else BoundaryPoint(complex(z))


def geo_to_mp(g: OrientedGeodesic):
    return (to_mp(g.start), to_mp(g.end))


def geo_from_mp(g) -> OrientedGeodesic:
    return OrientedGeodesic(from_mp(g[0]), from_mp(g[1]))


def normalizer(g):
    u, v = g
    if u is None:
        return (CTX.mpc(0), CTX.mpc(1), CTX.mpc(1), -v)
    if v is None:
        return (CTX.mpc(1), -u, CTX.mpc(0), CTX.mpc(1))
    return (CTX.mpc(1), -u, CTX.mpc(1), -v)


def mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def inverse(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def apply(m, z):
    a, b, c, d = m
    if z is None:
        return None if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return None
    return (a * z + b) / den


def apply_geo(m, g):
    return (apply(m, g[0]), apply(m, g[1]))


def along(g, mu):
    A = normalizer(g)
    e = CTX.exp(CTX.mpc(mu) / 2)
    return mul(inverse(A), mul((e, CTX.mpc(0), CTX.mpc(0), 1 / e), A))


def point_gap(p, q) -> float:
    if p is None or q is None:
        if p is None and q is None:
            return 0.0
        z = q if p is None else p
        return float(1 / (1 + abs(z)))
    return float(abs(p - q) / ((1 + abs(p)) * (1 + abs(q))))


def geo_gap(g, h) -> float:
    return max(point_gap(g[0], h[0]), point_gap(g[1], h[1]))


def common_perpendicular(g1: OrientedGeodesic, g2: OrientedGeodesic) -> OrientedGeodesic:
    """Same line as the double-precision routine, but the square root is taken at 50 digits.

    Altitudes of long thin hexagons join lines that are far apart, and in
    doubles their endpoints lose several digits.
    """
    a, b = geo_to_mp(g1), geo_to_mp(g2)
    A = normalizer(a)
    r, s = apply(A, b[0]), apply(A, b[1])
    k = CTX.sqrt(r * s)
    Ai = inverse(A)
    cand = (apply(Ai, -k), apply(Ai, k))
    B = normalizer(cand)
    h1 = abs(apply(B, a[0]))
    h2 = abs(apply(B, b[0]))
    if h2 < h1:
        cand = (cand[1], cand[0])
    return geo_from_mp(cand)
