"""Labeled pants: cuff lengths, the two right-angled hexagons, complex twists."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import WrongAxis
from .hypcore import (
    Displacement,
    OrientedGeodesic,
    double_cross_width,
    reduce_imag,
)
from .polygons import IPI, Branch, HexagonWidths, hexagon_complete


@dataclass(frozen=True)
class Cuff:
    geodesic: OrientedGeodesic | None
    length: complex


@dataclass(frozen=True)
class LabeledPants:
    """Pants with ordered boundary; index k in 1..3 picks the k-th cuff."""

    boundary: tuple

    def __post_init__(self):
        if len(self.boundary) != 3:
            raise ValueError("a pair of pants has exactly three cuffs")
        object.__setattr__(self, "boundary", tuple(
            c if isinstance(c, Cuff) else Cuff(None, complex(c)) for c in self.boundary))

    def __getitem__(self, k: int) -> Cuff:
        if not 1 <= k <= 3:
            raise IndexError("cuffs are numbered 1, 2, 3")
        return self.boundary[k - 1]

    @property
    def lengths(self):
        return tuple(c.length for c in self.boundary)

    def hexagons(self):
        return pants_from_cuff_lengths(*self.lengths)

    def seam_widths(self):
        """Distances between cuffs (1,2), (2,3), (3,1)."""
        h = self.hexagons()[0]
        return (h[2], h[4], h[6])


def pants_from_cuff_lengths(l1, l2, l3, branch: Branch = Branch.PREFER_PI):
    """Cut along the three seams: two congruent hexagons with odd widths l_k/2 + i pi."""
    ls = [complex(x) for x in (l1, l2, l3)]
    for x in ls:
        if not x.real > 0:
            raise ValueError("cuff lengths need positive real part")
    h = hexagon_complete(*(x / 2 + IPI for x in ls), branch=branch)
    return h, HexagonWidths(h.sigma)


@dataclass(frozen=True)
class TwistMeasurement:
    twist0: complex | None
    twist: complex | None
    sign: int
    length: complex | None = None
    reason: str = ""

    @property
    def defined(self) -> bool:
        return self.twist0 is not None

    @classmethod
    def undefined(cls, reason: str) -> "TwistMeasurement":
        return cls(None, None, 0, None, reason)


def reduce_twist(t: complex, length: complex) -> complex:
    """Shift t by a multiple of the curve length so |Re| is minimal; Im into (-pi, pi]."""
    length = complex(length)
    if length.real <= 0:
        raise ValueError("curve length needs positive real part")
    k = math.floor(t.real / length.real + 0.5)
    r = t - k * length
    # break the tie at exactly half a length toward the negative side
    if r.real > length.real / 2:
        r -= length
    return reduce_imag(r)


def complex_twist(axis: OrientedGeodesic, m1: OrientedGeodesic, m2: OrientedGeodesic,
                  length: complex | None = None, curve: OrientedGeodesic | None = None,
                  injective: bool = True, tol: float = 1e-9) -> TwistMeasurement:
    """Displacement along `axis` of the isometry carrying m1 to m2.

    `curve` is the oriented geodesic of the curve being twisted; when it runs
    against `axis` the sign is -1, so the result does not depend on which way
    the axis was handed in. With `injective=False` the twist has no meaning
    and an undefined measurement comes back instead of a number.
    """
    if not injective:
        return TwistMeasurement.undefined("restriction is not injective on fundamental groups")
    sign = 1
    if curve is not None:
        if curve.isclose(axis, 1e-9):
            sign = 1
        elif curve.isclose(axis.reverse(), 1e-9):
            sign = -1
        else:
            raise WrongAxis("curve and axis are different lines")
    w = complex(double_cross_width(m1, m2, axis, tol))
    t0 = Displacement(sign * w)
    t = reduce_twist(t0, length) if length is not None else t0
    return TwistMeasurement(complex(t0), complex(t), sign, None if length is None else complex(length))
