import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypkit.bilip import (
    AnnulusShearSpec,
    RectCoordPoint,
    Trirectangle,
    TrirectangleMap,
    annulus_f,
    annulus_f_prime,
    annulus_k_deviation,
    annulus_map,
    certify_annulus,
    certify_trirectangle,
    deviation,
    lambert_abscissa,
    lambert_arc,
    lambert_height,
    lambert_rise,
    numeric_k,
    rect_dist,
    singular_values,
    stretch,
    trirect_k_matrix,
    trirect_map,
)
from hypkit.errors import AlphaTooLarge, DomainError, HypothesisViolated
from hypkit.hypcore import PointH, dist_point

from oracles import hyperboloid_dist


def rect_to_plane(x, y):
    # Fermi coordinates about the imaginary axis in the upper half plane
    return PointH(complex(math.exp(x) * math.tanh(y)), math.exp(x) / math.cosh(y))


# ---------------------------------------------------------------- trirectangle map


def test_trirect_map_examples():
    p = RectCoordPoint(0.3, -0.7)
    assert trirect_map(1, 1, p) == p
    assert trirect_map(2, 1, RectCoordPoint(0.1, 0)) == RectCoordPoint(0.2, 0)
    assert trirect_map(2, 3, RectCoordPoint(0, 0)) == RectCoordPoint(0, 0)
    with pytest.raises(ValueError):
        trirect_map(0, 1, p)


def test_vertical_segments_scale_by_b():
    b = 0.8
    for y in (0.5, 1.0, 3.0):
        q = trirect_map(1.3, b, RectCoordPoint(0.2, y))
        d0 = rect_dist((0.2, 0.0), (0.2, y))
        d1 = rect_dist((0.26, 0.0), (q.x, q.y))
        assert abs(d0 - y) < 1e-12 and abs(d1 - b * d0) < 1e-12


def test_rect_dist_against_hyperboloid():
    rng = random.Random(1)
    for _ in range(50):
        x1, y1, x2, y2 = (rng.uniform(-2, 2) for _ in range(4))
        p = rect_to_plane(x1, y1)
        q = rect_to_plane(x2, y2)
        want = hyperboloid_dist((p.z, p.t), (q.z, q.t))
        assert abs(rect_dist((x1, y1), (x2, y2)) - want) < 1e-7 * max(1, want)


def test_k_matrix_examples():
    p = RectCoordPoint(0.4, 1.7)
    assert trirect_k_matrix(p, 1, 1) == ((1.0, 0.0), (0.0, 1.0))
    assert trirect_k_matrix(RectCoordPoint(0.4, 0.0), 0.9, 1.1) == ((0.9, 0.0), (0.0, 1.1))


def test_k_matrix_matches_numeric_differential():
    a, b = 0.97, 1.02
    F = lambda p: trirect_map(a, b, p)
    for y in (0.0, 0.8, 3.0):
        p = RectCoordPoint(0.2, y)
        K, Kn = trirect_k_matrix(p, a, b), numeric_k(F, p)
        assert all(abs(K[i][j] - Kn[i][j]) < 1e-7 for i in range(2) for j in range(2))


def test_rect_deviation_at_reference_point():
    tau, rho, L = 0.01, 0.01, 30.0
    a, b = 1 / (1 + tau), 1 / (1 + 4 * rho / L)
    worst = max(deviation(trirect_k_matrix(RectCoordPoint(0, L / 4 * j / 199), a, b)) for j in range(200))
    assert worst < 0.05
    F = TrirectangleMap(L, tau, rho)
    assert abs(F.a - a) < 1e-6 and abs(F.b - b) < 1e-12


def test_singular_values():
    s1, s2 = singular_values(((3.0, 0.0), (0.0, 0.5)))
    assert (s1, s2) == (3.0, 0.5)
    assert stretch(((3.0, 0.0), (0.0, 0.5))) == 3.0
    assert stretch(((1.0, 1.0), (1.0, 1.0))) == math.inf
    c, s = math.cos(0.3), math.sin(0.3)
    assert abs(stretch(((c, -s), (s, c))) - 1) < 1e-12


def test_lambert_quadrilateral():
    X, Y = 0.001, 7.0
    Q = Trirectangle(X, Y)
    assert lambert_height(0, Y) == Y
    assert abs(math.tanh(lambert_height(X, Y)) - math.tanh(Y) * math.cosh(X)) < 1e-15
    assert abs(lambert_rise(X, Y) - (Q.z.y - Y)) < 1e-12
    u = lambert_arc(X, Y)
    assert abs(lambert_abscissa(u, Y) - X) < 1e-14
    assert abs(u - rect_dist((0, Y), (X, Q.z.y))) < 1e-10
    with pytest.raises(DomainError):
        Trirectangle(2.0, 2.0)


def test_trirect_map_corners():
    F = TrirectangleMap(30.0, 0.01, 0.01)
    Q1, Q0 = F.source, F.target
    for p, q in (((0, 0), (0, 0)), ((Q1.X, 0), (Q0.X, 0)), ((0, Q1.Y), (0, Q0.Y))):
        img = F(RectCoordPoint(*p))
        assert abs(img.x - q[0]) < 1e-12 and abs(img.y - q[1]) < 1e-12
    top = F(Q1.z)
    assert abs(top.x - Q0.z.x) < 1e-9 and abs(top.y - Q0.z.y) < 1e-9


def test_trirect_map_continuous_across_equidistant():
    F = TrirectangleMap(30.0, 0.01, 0.01)
    Y = F.source.Y
    for x in (0.2, 0.5, 0.9):
        x *= F.source.X
        below, above = F(RectCoordPoint(x, Y)), F(RectCoordPoint(x, Y + 1e-12))
        assert abs(below.x - above.x) < 1e-9 and abs(below.y - above.y) < 1e-9


def test_certificates_shrink_with_parameters():
    consts = []
    for s in (1e-2, 1e-3, 1e-4, 0.0):
        rect, tri = certify_trirectangle(TrirectangleMap(30.0, s, s), 40)
        assert not rect.empirical and tri.empirical
        consts.append((rect.constant, tri.constant))
    for (r1, t1), (r2, t2) in zip(consts, consts[1:]):
        assert r2 <= r1 and t2 <= t1
    assert consts[-1][0] - 1 < 1e-6 and consts[-1][1] - 1 < 1e-4


def test_triangle_cusp_is_not_close_to_isometry():
    # recorded finding: near the pinched corner of the triangle the sampled
    # K at (0.01, 0.01, 30) is far from I, unlike the rectangle part
    rect, tri = certify_trirectangle(TrirectangleMap(30.0, 0.01, 0.01), 60)
    assert rect.max_deviation < 0.05
    assert tri.max_deviation > 1.0


# ---------------------------------------------------------------- annulus


def spec30(t_factor=0.1):
    q = math.exp(-7.5)
    return AnnulusShearSpec(1.0, t_factor * q, q / 2)


def test_alpha_relation():
    for w in (1e-4, 0.3, 2.0):
        s = AnnulusShearSpec(1.0, 0.0, w)
        assert abs(math.sin(s.alpha) * math.cosh(w) - 1) < 1e-12
        assert abs(math.cos(s.alpha) - math.tanh(w)) < 1e-12
        assert abs(s.ramp - (math.pi - 2 * s.alpha)) < 1e-12


def test_equidistant_point_distance():
    for w in (1e-3, 0.5, 1.5):
        a = AnnulusShearSpec(1.0, 0.0, w).alpha
        d = dist_point(PointH(complex(math.cos(a)), math.sin(a)), PointH(0j, 1.0))
        assert abs(d - w) < 1e-9


def test_f_plateaus_and_midpoint():
    s = AnnulusShearSpec(1.0, 0.2, 0.5)
    a = s.alpha
    assert annulus_f(a, s) == pytest.approx(math.exp(0.2), abs=1e-15)
    assert annulus_f(a / 2, s) == math.exp(0.2)
    assert annulus_f(math.pi - a, s) == 1.0
    # affine in theta: halfway along the ramp is the average of the plateaus
    assert abs(annulus_f(math.pi / 2, s) - (1 + math.exp(0.2)) / 2) < 1e-15
    assert all(annulus_f(th, AnnulusShearSpec(1.0, 0.0, 0.5)) == 1 for th in (0.1, 1.5, 3.0))
    with pytest.raises(DomainError):
        annulus_f(0.0, s)
    with pytest.raises(DomainError):
        annulus_f(math.pi, s)


def test_f_continuous_and_monotone():
    s = AnnulusShearSpec(1.0, 0.3, 0.2)
    ths = [math.pi * (k + 0.5) / 2000 for k in range(2000)]
    vals = [annulus_f(th, s) for th in ths]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert max(abs(a - b) for a, b in zip(vals, vals[1:])) < 1e-2
    h = 1e-7
    th = math.pi / 2
    num = (annulus_f(th + h, s) - annulus_f(th - h, s)) / (2 * h)
    assert abs(num - annulus_f_prime(th, s)) < 1e-6


def test_deviation_examples():
    assert annulus_k_deviation(spec30(0.0)) == 0.0
    d = annulus_k_deviation(spec30(0.1))
    assert abs(d - 0.1) < 0.01
    assert abs(d - math.expm1(spec30().t) / (2 * math.atan(math.sinh(spec30().w)))) < 1e-15


def test_deviation_linear_in_t():
    q = math.exp(-7.5)
    w = q / 2
    for t in (0.01 * q, 0.1 * q, q / 4):
        d = [annulus_k_deviation(AnnulusShearSpec(1.0, k * t, w)) for k in (1, 2, 4)]
        assert abs(d[1] / d[0] - 2) < 0.02 and abs(d[2] / d[0] - 4) < 0.04


def test_deviation_is_sup_of_sampled_ratio():
    s = spec30(0.5)
    analytic, sampled = certify_annulus(s, 200)
    assert abs(sampled.max_deviation - analytic.max_deviation) <= 1e-2 * analytic.max_deviation
    assert sampled.max_deviation <= analytic.max_deviation * (1 + 1e-12)


def test_annulus_errors():
    with pytest.raises(AlphaTooLarge):
        annulus_k_deviation(AnnulusShearSpec(1.0, 0.1, 0.0))
    with pytest.raises(HypothesisViolated):
        AnnulusShearSpec(1.0, -0.1, 0.1)
    with pytest.raises(HypothesisViolated):
        AnnulusShearSpec(1.0, 0.0, 1e-6, L=30.0)
    with pytest.raises(HypothesisViolated):
        AnnulusShearSpec(1.0, 1.0, 0.1, L=30.0, E=1.0)
    with pytest.raises(DomainError):
        annulus_map(-1j, spec30())


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.01, 2.0), st.floats(0.01, math.pi - 0.01), st.floats(0.1, 10))
def test_annulus_map_is_radial_homeomorphism(t, w, th, r):
    s = AnnulusShearSpec(1.0, t, w)
    z = r * complex(math.cos(th), math.sin(th))
    fz = annulus_map(z, s)
    f = annulus_f(th, s)
    assert f >= 1 and f <= math.exp(t) * (1 + 1e-15)
    assert abs(fz - f * z) < 1e-12 * abs(fz)
    assert abs(fz.imag * z.real - fz.real * z.imag) < 1e-9 * abs(fz) * abs(z)
