"""Right-angled hexagons and pentagons: exact solvers, realization, estimates."""

from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass, field

from . import hp
from .errors import DegenerateSide, InconsistentWidths
from .hypcore import (
    INF,
    Displacement,
    Mobius,
    OrientedGeodesic,
    PointH,
    cosh_dist,
    double_cross_width,
    geodesic,
    intersection,
    midpoint,
    normalizer,
    reduce_imag,
)

IPI = 1j * math.pi


class Branch(enum.Enum):
    PRINCIPAL = "principal"
    PREFER_PI = "prefer_pi"


SNAP_TOL = 1e-12


def apply_branch(mu: complex, branch: Branch = Branch.PREFER_PI) -> Displacement:
    d = Displacement(mu)
    if branch is Branch.PREFER_PI and d.imag < -math.pi + SNAP_TOL:
        d = Displacement(complex(d.real, math.pi))
    return d


def _strip_dist(x: complex, y: complex) -> float:
    return abs(reduce_imag(complex(x) - complex(y)))


def _solve_from_halves(ch2: complex, sh2: complex) -> complex:
    """sigma with cosh^2(sigma/2) = ch2 and sinh^2(sigma/2) = sh2, Re >= 0.

    Both inputs come from product formulas, so they carry full relative
    precision even when sigma sits next to 0 or i*pi.
    """
    c = cmath.sqrt(ch2)
    s = cmath.sqrt(sh2)
    if abs(c + s) >= abs(c - s):
        v = 2 * cmath.log(c + s)
    else:
        v = -2 * cmath.log(c - s)
    if _strip_dist(v, IPI) < 0.5:
        x = 2 * cmath.asinh(-1j * c)
        v = min((IPI + x, IPI - x), key=lambda w: _strip_dist(w, v))
    elif _strip_dist(v, 0) < 0.5:
        x = 2 * cmath.asinh(s)
        v = min((x, -x), key=lambda w: _strip_dist(w, v))
    v = reduce_imag(v)
    if v.real < 0 or (v.real == 0 and v.imag < 0):
        v = reduce_imag(-v)
    return v


def _opposite(s_op: complex, s_a: complex, s_b: complex) -> complex:
    """Side opposite s_op from the law of cosines with neighbours s_a, s_b."""
    den = cmath.sinh(s_a) * cmath.sinh(s_b)
    if abs(den) < 1e-300:
        raise DegenerateSide("sinh of an adjacent width vanishes")
    ch2 = cmath.sinh((s_op + s_a - s_b) / 2) * cmath.sinh((s_op - s_a + s_b) / 2) / den
    sh2 = cmath.sinh((s_op + s_a + s_b) / 2) * cmath.sinh((s_op - s_a - s_b) / 2) / den
    return _solve_from_halves(ch2, sh2)


@dataclass(frozen=True)
class HexagonWidths:
    sigma: tuple

    def __post_init__(self):
        if len(self.sigma) != 6:
            raise ValueError("a hexagon has six widths")
        object.__setattr__(self, "sigma", tuple(Displacement(s) for s in self.sigma))

    def __getitem__(self, i: int) -> Displacement:
        """1-based, indices mod 6."""
        return self.sigma[(i - 1) % 6]

    def sines_ratios(self):
        return tuple(cmath.sinh(self[i]) / cmath.sinh(self[i + 3]) for i in (1, 3, 5))

    def law_of_sines_residual(self) -> float:
        r = self.sines_ratios()
        return max(abs(r[i] - r[j]) / max(abs(r[i]), abs(r[j]), 1e-300) for i, j in ((0, 1), (1, 2), (0, 2)))

    def law_of_cosines_residuals(self):
        out = []
        for i in range(1, 7):
            a, b, c = self[i - 2], self[i + 2], self[i + 3]
            lhs = cmath.cosh(self[i])
            rhs = cmath.cosh(a) * cmath.cosh(b) + cmath.sinh(a) * cmath.sinh(b) * cmath.cosh(c)
            scale = max(abs(lhs), abs(cmath.cosh(a) * cmath.cosh(b)), 1.0)
            out.append(abs(lhs - rhs) / scale)
        return out

    def max_residual(self) -> float:
        return max(self.law_of_sines_residual(), *self.law_of_cosines_residuals())

    def shifted(self, k: int) -> "HexagonWidths":
        return HexagonWidths(tuple(self[i + k] for i in range(1, 7)))

    def is_standard(self) -> bool:
        return all(s.real > 0 or (s.real == 0 and s.imag >= 0) for s in self.sigma)


def hexagon_complete(s1, s3, s5, branch: Branch = Branch.PREFER_PI) -> HexagonWidths:
    """Fill in sigma_2, sigma_4, sigma_6 from the odd widths."""
    s1, s3, s5 = complex(s1), complex(s3), complex(s5)
    for s in (s1, s3, s5):
        if abs(cmath.sinh(s)) < 1e-14:
            raise DegenerateSide(f"sinh({s}) vanishes")
    s4 = _opposite(s1, s3, s5)
    s6 = _opposite(s3, s5, s1)
    s2 = _opposite(s5, s1, s3)
    # the law of cosines fixes each even width up to sign; the law of sines
    # ties the three signs together
    best = None
    for e2, e4, e6 in itertools.product((1, -1), repeat=3):
        w = HexagonWidths((s1, e2 * s2, s3, e4 * s4, s5, e6 * s6))
        key = (round(w.law_of_sines_residual(), 10), -(e2 + e4 + e6))
        if best is None or key < best[0]:
            best = (key, w)
    w = best[1]
    return HexagonWidths(tuple(apply_branch(s, branch) for s in w.sigma))


@dataclass(frozen=True)
class PentagonWidths:
    sigma: tuple

    def __post_init__(self):
        if len(self.sigma) != 5:
            raise ValueError("a pentagon has five widths")
        object.__setattr__(self, "sigma", tuple(Displacement(s) for s in self.sigma))

    def __getitem__(self, i: int) -> Displacement:
        return self.sigma[(i - 1) % 5]

    def identity_residuals(self):
        r1, r2 = [], []
        for n in range(1, 6):
            c = cmath.cosh(self[n])
            a = -cmath.sinh(self[n - 2]) * cmath.sinh(self[n + 2])
            b = -cmath.cosh(self[n - 1]) / cmath.sinh(self[n - 1]) * cmath.cosh(self[n + 1]) / cmath.sinh(self[n + 1])
            scale = max(abs(c), 1.0)
            r1.append(abs(c - a) / scale)
            r2.append(abs(c - b) / scale)
        return r1, r2

    def max_residual(self) -> float:
        r1, r2 = self.identity_residuals()
        return max(r1 + r2)


def _coth(x: complex) -> complex:
    s = cmath.sinh(x)
    if abs(s) < 1e-300:
        raise DegenerateSide("coth pole")
    return cmath.cosh(x) / s


def _from_coth_pair(a: complex, b: complex) -> complex:
    """sigma with cosh(sigma) = -coth(a) coth(b)."""
    den = cmath.sinh(a) * cmath.sinh(b)
    if abs(den) < 1e-300:
        raise DegenerateSide("sinh vanishes")
    ch2 = -cmath.cosh(a - b) / (2 * den)
    sh2 = -cmath.cosh(a + b) / (2 * den)
    return _solve_from_halves(ch2, sh2)


def _from_sinh_pair(a: complex, b: complex) -> complex:
    """sigma with cosh(sigma) = -sinh(a) sinh(b)."""
    p = cmath.sinh(a) * cmath.sinh(b)
    return _solve_from_halves((1 - p) / 2, (-1 - p) / 2)


def pentagon_complete(s_a, s_b, gap: int = 1, branch: Branch = Branch.PREFER_PI) -> PentagonWidths:
    """Complete a pentagon from sigma_gap = s_a and sigma_{gap+1} = s_b."""
    s_a, s_b = complex(s_a), complex(s_b)
    for s in (s_a, s_b):
        if abs(cmath.sinh(s)) < 1e-14:
            raise DegenerateSide(f"sinh({s}) vanishes")
    # work in local labels: 1 = s_a, 2 = s_b
    w = [None] * 5
    w[0], w[1] = s_a, s_b
    w[3] = _from_sinh_pair(s_a, s_b)  # local 4, opposite the given pair
    w[4] = _from_coth_pair(w[3], s_a)  # local 5, between 4 and 1
    w[2] = _from_coth_pair(s_b, w[3])  # local 3, between 2 and 4
    out = [None] * 5
    for k in range(5):
        out[(gap - 1 + k) % 5] = apply_branch(w[k], branch)
    return PentagonWidths(tuple(out))


@dataclass(frozen=True)
class NearlySymmetricSpec:
    L: float
    rho1: complex = 0j
    rho3: complex = 0j
    rho5: complex = 0j
    eps: float = 0.0

    def violations(self):
        out = []
        for name in ("rho1", "rho3", "rho5"):
            if abs(getattr(self, name)) > self.eps + 1e-15:
                out.append(f"|{name}| > eps")
        if not self.eps < 0.5:
            out.append("eps >= 1/2")
        if self.L < 4 * self.eps:
            out.append("L < 4 eps")
        return out

    def rho(self, j: int) -> complex:
        return {1: self.rho1, 3: self.rho3, 5: self.rho5}[((j - 1) % 6) + 1]

    def odd_widths(self):
        return tuple(self.L / 2 + self.rho(j) / 2 + IPI for j in (1, 3, 5))

    def hexagon(self) -> HexagonWidths:
        return hexagon_complete(*self.odd_widths())


@dataclass(frozen=True)
class EstimateBundle:
    G2: complex
    G4: complex
    G6: complex
    K1: complex
    K4: complex
    K5: complex
    G5_fifth: complex
    M: float
    midpoint_cosh: float

    def as_dict(self):
        return dict(self.__dict__)


def nearly_symmetric_estimates(spec: NearlySymmetricSpec) -> EstimateBundle:
    """Leading-order closed forms, no solving."""
    L = spec.L
    r = spec.rho

    def short(k):
        return 2 * cmath.exp(-L / 4 + r(k + 3) / 4 - r(k + 1) / 4 - r(k - 1) / 4) + IPI

    r1, r3, r5 = spec.rho1, spec.rho3, spec.rho5
    return EstimateBundle(
        G2=short(2),
        G4=short(4),
        G6=short(6),
        K1=L / 4 + (r5 - r3 - r1) / 4 + IPI,
        K4=cmath.exp(-L / 4 - r5 / 4 - r3 / 4 + r1 / 4) + IPI,
        K5=L / 4 + math.log(2) + (r5 + r3 - r1) / 4 + IPI,
        G5_fifth=L / 2 + r1 / 2 + r3 / 2 + IPI,
        M=2 * math.exp(-L / 4),
        midpoint_cosh=1.5,
    )


def symmetric_hexagon(L: float) -> HexagonWidths:
    s = L / 2 + IPI
    return hexagon_complete(s, s, s)


def m_exact(L: float) -> float:
    """Real part of the short width of the symmetric hexagon."""
    return symmetric_hexagon(L)[2].real


def midpoint_distance_exact(L: float) -> float:
    """cosh of the distance between midpoints of two long sides."""
    M = m_exact(L)
    # -sinh^2(L/4) + cosh^2(L/4) cosh(M), written without cancellation
    return 1.0 + 2.0 * math.cosh(L / 4) ** 2 * math.sinh(M / 2) ** 2


@dataclass(frozen=True)
class RealizedHexagon:
    sides: tuple
    widths: HexagonWidths = field(default=None)

    def side(self, i: int) -> OrientedGeodesic:
        return self.sides[(i - 1) % 6]

    @property
    def vertices(self):
        """v_i = S_i meet S_{i+1}."""
        return tuple(intersection(self.side(i), self.side(i + 1), tol=1e-6) for i in range(1, 7))

    def vertex(self, i: int) -> PointH:
        return intersection(self.side(i), self.side(i + 1), tol=1e-6)

    def measure(self) -> HexagonWidths:
        return HexagonWidths(
            tuple(double_cross_width(self.side(i - 1), self.side(i + 1), self.side(i), tol=1e-7) for i in range(1, 7))
        )

    def transform(self, m: Mobius) -> "RealizedHexagon":
        return RealizedHexagon(tuple(m.apply_geodesic(s) for s in self.sides), self.widths)

    def altitude(self, i: int) -> OrientedGeodesic:
        """Common perpendicular of S_i and S_{i+3}."""
        return hp.common_perpendicular(self.side(i), self.side(i + 3))

    def side_midpoint(self, i: int) -> PointH:
        """Midpoint of the segment of S_i between v_{i-1} and v_i."""
        return midpoint(self.vertex(i - 1), self.vertex(i))


# realization normalization: S_1 = 0 -> oo and S_6 = -1 -> 1
ANCHOR_S1 = geodesic(0, INF)
ANCHOR_S6 = geodesic(-1, 1)


def hexagon_realize(w: HexagonWidths, tol: float = 1e-8) -> RealizedHexagon:
    """Six concrete sides; S_{i+1} is S_{i-1} moved by sigma_i along S_i.

    The chain of transports runs in extended precision so that the rounded
    sides re-measure to the input widths.
    """
    if w.max_residual() > tol:
        raise InconsistentWidths(f"hexagon laws fail (residual {w.max_residual():.3e})")
    a1, a6 = hp.geo_to_mp(ANCHOR_S1), hp.geo_to_mp(ANCHOR_S6)
    S = {0: a6, 1: a1}
    for i in range(1, 7):
        S[i + 1] = hp.apply_geo(hp.along(S[i], complex(w[i])), S[i - 1])
    gap = max(hp.geo_gap(S[6], a6), hp.geo_gap(S[7], a1))
    if gap > 1e-6:
        raise InconsistentWidths(f"realization does not close (gap {gap:.3e})")
    sides = (ANCHOR_S1,) + tuple(hp.geo_from_mp(S[i]) for i in range(2, 6)) + (ANCHOR_S6,)
    h = RealizedHexagon(sides, w)
    m = h.measure()
    bad = max(abs(reduce_imag(complex(a) - complex(b))) for a, b in zip(m.sigma, w.sigma))
    if bad > 1e-6:
        raise InconsistentWidths(f"re-measured widths differ by {bad:.3e}")
    return h


def midpoint_distance_geometric(L: float) -> float:
    h = hexagon_realize(symmetric_hexagon(L))
    return cosh_dist(h.side_midpoint(1), h.side_midpoint(3))


def orient_standard(lines) -> RealizedHexagon:
    """Orient six cyclically perpendicular lines by the standard rule and measure.

    Each side runs from its meeting point with the previous side toward its
    meeting point with the next one. A side whose two neighbours meet it at
    the same point keeps the orientation it was given.
    """
    lines = list(lines)
    out = []
    for i in range(6):
        s = lines[i]
        p = intersection(lines[i - 1], s, tol=1e-6)
        q = intersection(s, lines[(i + 1) % 6], tol=1e-6)
        A = normalizer(s)
        hp_, hq = A.apply_h3(p).t, A.apply_h3(q).t
        if abs(math.log(hq / hp_)) > 1e-12 and hq < hp_:
            s = s.reverse()
        out.append(s)
    h = RealizedHexagon(tuple(out))
    return RealizedHexagon(h.sides, h.measure())
