import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypkit.errors import ConstructionFailed, HypothesisViolated, NotShortSide
from hypkit.hypcore import Mobius, PointH, geodesic
from hypkit.incompress import (
    CaseConfig,
    PlaneH3,
    altitude_plane,
    altitude_plane_data,
    altitude_plane_residuals,
    case_check,
    plane_containing,
    plane_perpendicular,
    planes_disjoint,
    short_sides,
    triangle_feasibility,
)
from hypkit.polygons import IPI, NearlySymmetricSpec, hexagon_complete, hexagon_realize, symmetric_hexagon


def circles_disjoint(c1, r1, c2, r2):
    # plain circle geometry: apart, or one strictly inside the other
    d = abs(c1 - c2)
    return d > r1 + r2 or d < abs(r1 - r2)


def inversive_distance(c1, r1, c2, r2):
    return math.acosh(abs((abs(c1 - c2) ** 2 - r1 * r1 - r2 * r2) / (2 * r1 * r2)))


def random_mobius(rng, scale=0.6):
    a, b, c = (complex(rng.gauss(0, scale), rng.gauss(0, scale)) for _ in range(3))
    return Mobius(1 + a, b, c, (1 + b * c) / (1 + a))


# ---------------------------------------------------------------- planes


def test_far_apart_hemispheres():
    ok, sep = planes_disjoint(PlaneH3.from_circle(0, 1), PlaneH3.from_circle(10, 1))
    assert ok and abs(sep - math.acosh(49)) < 1e-12


def test_concentric_hemispheres():
    ok, sep = planes_disjoint(PlaneH3.from_circle(0, 1), PlaneH3.from_circle(0, 2))
    assert ok and abs(sep - math.log(2)) < 1e-14


def test_overlapping_circles():
    assert planes_disjoint(PlaneH3.from_circle(0, 1), PlaneH3.from_circle(1, 1)) == (False, 0.0)
    assert planes_disjoint(PlaneH3.from_circle(0, 1), PlaneH3.from_line(0, 1j)) == (False, 0.0)


def test_tangent_circles_meet():
    assert not planes_disjoint(PlaneH3.from_circle(0, 1), PlaneH3.from_circle(2, 1))[0]


def test_plane_constructors():
    with pytest.raises(ValueError):
        PlaneH3.from_circle(0, 0)
    with pytest.raises(ValueError):
        PlaneH3.from_line(0, 0)
    P = PlaneH3.from_circle(1 + 1j, 2)
    assert abs(P.center - (1 + 1j)) < 1e-15 and abs(P.radius - 2) < 1e-15
    assert P.contains_point(PointH(1 + 1j, 2.0))
    assert PlaneH3.from_line(1, 1j).is_vertical


def test_separation_matches_point_distance():
    # signed distance from the top of one hemisphere to a concentric one is log of the radius ratio
    P = PlaneH3.from_circle(0, 3)
    assert abs(abs(P.signed_distance(PointH(0j, 1.0))) - math.log(3)) < 1e-14


def test_perpendicular_and_containing_planes():
    g = geodesic(-1, 1)
    p = PointH(0j, 1.0)
    P = plane_perpendicular(g, p)
    assert P.contains_point(p)
    assert P.is_vertical and abs(P.inversive(PlaneH3.from_line(0, 1)) ) < 1e-14
    Q = plane_containing(g, PointH(0j, 2.0))
    assert Q.geodesic_residual(g) < 1e-14 and Q.contains_point(PointH(0j, 2.0))
    with pytest.raises(ConstructionFailed):
        plane_containing(g, p)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_disjoint_oracle_symmetry_and_invariance(seed):
    rng = random.Random(seed)
    c1, c2 = (complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(2))
    r1, r2 = rng.uniform(0.2, 3), rng.uniform(0.2, 3)
    P1, P2 = PlaneH3.from_circle(c1, r1), PlaneH3.from_circle(c2, r2)
    ok, sep = planes_disjoint(P1, P2)
    if abs(abs(P1.inversive(P2)) - 1) < 1e-6:
        return
    assert ok == circles_disjoint(c1, r1, c2, r2)
    assert planes_disjoint(P2, P1) == (ok, sep)
    if ok:
        assert abs(sep - inversive_distance(c1, r1, c2, r2)) < 1e-9 * max(1, sep)
    m = random_mobius(rng)
    ok2, sep2 = planes_disjoint(P1.transform(m), P2.transform(m))
    assert ok2 == ok
    assert abs(sep2 - sep) < 1e-7 * max(1, sep)


def test_transform_moves_points_consistently():
    rng = random.Random(3)
    P = PlaneH3.from_circle(0.3 - 0.2j, 1.4)
    on = PointH(0.3 - 0.2j + 0.5, math.sqrt(1.4 ** 2 - 0.25))
    for _ in range(20):
        m = random_mobius(rng)
        assert abs(P.transform(m).signed_distance(m.apply_h3(on))) < 1e-9


# ---------------------------------------------------------------- altitude planes


def test_altitude_plane_planar_hexagon():
    h = hexagon_realize(hexagon_complete(3 + IPI, 3.5 + IPI, 4 + IPI))
    flat = PlaneH3.from_line(0, 1)   # the hexagon lies over the real axis
    for k in (1, 2, 3, 4, 5, 6):
        for j in range(2):
            assert flat.boundary_residual(h.side(k).start if j == 0 else h.side(k).end) < 1e-9
    for k in short_sides(h):
        ap = altitude_plane_data(h, k)
        res = altitude_plane_residuals(ap, h)
        assert max(res.values()) < 1e-8
        assert abs(ap.plane.inversive(flat)) < 1e-8   # meets the hexagon's plane at a right angle


def test_altitude_planes_symmetric_distinct():
    L = 20.0
    h = hexagon_realize(symmetric_hexagon(L))
    sides = short_sides(h, L, 0.0)
    assert sides == [2, 4, 6]
    planes = [altitude_plane(h, k, L, 0.0) for k in sides]
    for i in range(3):
        for j in range(i + 1, 3):
            P, Q = planes[i], planes[j]
            assert abs(P.a - Q.a) + abs(P.b - Q.b) + abs(P.d - Q.d) > 1e-3
            # the altitudes of one hexagon are concurrent, so its planes meet
            assert not planes_disjoint(P, Q)[0]


def test_altitude_plane_nearly_symmetric_residuals():
    spec = NearlySymmetricSpec(30.0, 0.01, -0.01j, 0.01 + 0.005j, eps=0.02)
    h = hexagon_realize(spec.hexagon())
    for k in short_sides(h, 30.0, 0.02):
        res = altitude_plane_residuals(altitude_plane_data(h, k, 30.0, 0.02), h)
        assert res["altitude"] < 1e-8 and res["foot"] < 1e-8 and res["far_end"] < 1e-8
        assert res["perpendicular"] < 1e-8


def test_altitude_plane_transport():
    rng = random.Random(4)
    h = hexagon_realize(symmetric_hexagon(20.0))
    for _ in range(10):
        m = random_mobius(rng)
        hm = h.transform(m)
        for k in (2, 4):
            P, Q = altitude_plane(h, k).transform(m), altitude_plane(hm, k)
            # same plane: inversive product of a plane with itself is -1 in this normalization
            assert abs(abs(P.inversive(Q)) - 1) < 1e-6
            ap = altitude_plane_data(hm, k)
            assert max(altitude_plane_residuals(ap, hm).values()) < 1e-7


def test_not_short_side():
    h = hexagon_realize(symmetric_hexagon(20.0))
    with pytest.raises(NotShortSide):
        altitude_plane(h, 1)
    with pytest.raises(NotShortSide):
        altitude_plane(h, 3, 20.0, 0.01)


# ---------------------------------------------------------------- triangles


def test_triangle_contradiction():
    eps, L = 0.01, 30.0
    q = math.exp(-L / 4)
    v = triangle_feasibility((1 - eps) * q, math.pi / 2 - eps * q, math.pi / 2 - eps * q)
    assert not v and v.cos_third > 1


def test_triangle_small_acute():
    v = triangle_feasibility(0.1, math.pi / 3, math.pi / 3)
    assert v and -1 <= v.cos_third < 1


def test_triangle_case2_scale():
    for eps in (1e-3, 1e-4):
        assert not triangle_feasibility(math.acosh(1.5), math.pi / 2 - eps, math.pi / 2 - eps)


def test_triangle_cosine_rule():
    rng = random.Random(5)
    for _ in range(100):
        s, A, B = rng.uniform(0.01, 2), rng.uniform(0.1, 3), rng.uniform(0.1, 3)
        v = triangle_feasibility(s, A, B)
        direct = -math.cos(A) * math.cos(B) + math.sin(A) * math.sin(B) * math.cosh(s)
        assert abs(v.cos_third - direct) < 1e-12 * max(1, abs(direct))
        assert v.feasible == (direct < 1) or abs(direct - 1) < 1e-12


def test_triangle_bad_input():
    with pytest.raises(ValueError):
        triangle_feasibility(0, 1, 1)
    with pytest.raises(ValueError):
        triangle_feasibility(1, math.pi, 1)


# ---------------------------------------------------------------- cases


@pytest.mark.parametrize("L", [25.0, 30.0, 35.0])
def test_all_cases_disjoint(L):
    for c in range(1, 10):
        r = case_check(CaseConfig(c, L, 0.01))
        assert r.disjoint and r.separation > 0, c
        assert r.variants >= 6


def test_long_side_separation_grows():
    for c in (4, 9):
        seps = [case_check(CaseConfig(c, L, 0.01)).separation for L in (25.0, 30.0, 35.0)]
        assert seps[0] < seps[1] < seps[2]


def test_case_4_reference():
    r = case_check(CaseConfig(4, 30.0, 0.01))
    assert r.disjoint and r.family == "4&9"


def test_case_1_separating_plane():
    r = case_check(CaseConfig(1, 30.0, 0.01))
    assert r.disjoint and r.extra["Pi3_separates"]
    assert not r.triangle_feasible and r.triangle_cos > 1


def test_case_families_match():
    for a, b in ((1, 8), (2, 5), (2, 6), (3, 7)):
        ra, rb = case_check(CaseConfig(a)), case_check(CaseConfig(b))
        assert ra.family == rb.family
        assert abs(ra.separation - rb.separation) < 1e-6 * max(1, ra.separation)


def test_low_parameters_report_only():
    for c in range(1, 10):
        try:
            r = case_check(CaseConfig(c, 5.0, 0.4))
        except (HypothesisViolated, ConstructionFailed):
            continue
        assert isinstance(r.disjoint, bool)


def test_case_hypothesis_and_config_errors():
    with pytest.raises(HypothesisViolated):
        case_check(CaseConfig(1, 30.0, 0.01, That=10.0))
    with pytest.raises(ValueError):
        CaseConfig(10)
    with pytest.raises(ValueError):
        CaseConfig(1, 30.0, 0.0)


def test_report_json_shape():
    import json
    d = case_check(CaseConfig(2)).as_dict()
    s = json.dumps(d, sort_keys=True)
    assert json.loads(s)["case"] == 2
