"""The parametrized isometry g(L, T, nu, delta, theta), hexagon H, and word-ball search."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath

from . import hp
from .errors import AmbiguousBranch, AxisDegenerate, HypothesisViolated, NotFactorizable
from .hypcore import (
    BoundaryPoint,
    Displacement,
    Mobius,
    PointH,
    dist_point,
    double_cross_width,
    geodesic,
    translation_length,
)
from .polygons import RealizedHexagon, m_exact, orient_standard

# The side of -X~ .. X~ on which H~_5 sits. With -1 the endpoints of H~_5
# are -tanh(M~/2) X~ and -X~/tanh(M~/2).
H5_SIDE = -1


@dataclass(frozen=True)
class GParams:
    L: float
    T: complex = 0j
    nu: complex = 0j
    delta: float = 0.0
    theta: float = 0.0

    def violations(self, eps: float, That: float):
        out = []
        if abs(self.nu) > eps:
            out.append("|nu| > eps")
        if abs(self.delta) > eps:
            out.append("|delta| > eps")
        if abs(self.theta) > eps:
            out.append("|theta| > eps")
        if abs(complex(self.T).imag) > eps:
            out.append("|Im T| > eps")
        if abs(complex(self.T).real) > That:
            out.append("|Re T| > That")
        return out

    def as_dict(self):
        T, nu = complex(self.T), complex(self.nu)
        return {
            "L": self.L,
            "T": {"re": T.real, "im": T.imag},
            "nu": {"re": nu.real, "im": nu.imag},
            "delta": self.delta,
            "theta": self.theta,
        }


def g_entries(p: GParams):
    L, T, nu, de, th = p.L, complex(p.T), complex(p.nu), p.delta, p.theta
    cd, sd = math.cos(de), math.sin(de)
    a = cmath.exp(L / 2 + nu + 1j * th) * cd
    b = cmath.exp(L / 2 + nu - 1j * th) * sd
    c = math.exp(-L / 2) * (T * cmath.exp(nu + 1j * th) * cd - cmath.exp(-nu + 1j * th) * sd)
    d = math.exp(-L / 2) * (T * cmath.exp(nu - 1j * th) * sd + cmath.exp(-nu - 1j * th) * cd)
    return a, b, c, d


def g_matrix(p: GParams) -> Mobius:
    return Mobius(*g_entries(p))


def g_factors(p: GParams):
    """The five factors diag(e^{L/2}), N_T, C_nu, R_delta, C_{i theta}."""
    e = math.exp(p.L / 2)
    en = cmath.exp(complex(p.nu))
    et = cmath.exp(1j * p.theta)
    cd, sd = math.cos(p.delta), math.sin(p.delta)
    return (
        Mobius(e, 0, 0, 1 / e),
        Mobius(1, 0, complex(p.T), 1),
        Mobius(en, 0, 0, 1 / en),
        Mobius(cd, sd, -sd, cd),
        Mobius(et, 0, 0, 1 / et),
    )


AMBIGUITY_TOL = 1e-8


def g_decompose(m: Mobius, L: float) -> GParams:
    """Inverse of g_matrix for a fixed L."""
    a, b, c, d = m.entries()
    scale = max(abs(x) for x in (a, b, c, d))
    p = a * math.exp(-L / 2)
    q = b * math.exp(-L / 2)
    r = c * math.exp(L / 2)
    s = d * math.exp(L / 2)
    if abs(a) <= 1e-14 * scale:
        raise NotFactorizable("a-entry vanishes")
    # q/p = e^{-2 i theta} tan(delta) with tan(delta) real
    if abs(q) <= 1e-15 * abs(p):
        theta = 0.0
    else:
        theta = -0.5 * cmath.phase(q / p)
        while theta > math.pi / 4:
            theta -= math.pi / 2
        while theta <= -math.pi / 4:
            theta += math.pi / 2
    tan_d = (q / p * cmath.exp(2j * theta)).real
    delta = math.atan(tan_d)
    if math.pi / 2 - abs(delta) < AMBIGUITY_TOL:
        raise AmbiguousBranch("delta is at the edge of its range")
    cd, sd = math.cos(delta), math.sin(delta)
    e_nu = p * cmath.exp(-1j * theta) / cd
    nu = cmath.log(e_nu)
    # nu is defined mod i*pi projectively; keep Im nu in (-pi/2, pi/2]
    sign = 1
    while nu.imag > math.pi / 2:
        nu -= 1j * math.pi
        sign = -sign
    while nu.imag <= -math.pi / 2:
        nu += 1j * math.pi
        sign = -sign
    r, s = sign * r, sign * s
    p_ = cmath.exp(nu + 1j * theta) * cd
    if abs(cd) >= abs(sd):
        T = (r + cmath.exp(-nu + 1j * theta) * sd) / p_
    else:
        T = (s - cmath.exp(-nu - 1j * theta) * cd) / (cmath.exp(nu - 1j * theta) * sd)
    out = GParams(L, T, nu, delta, theta)
    if not g_matrix(out).isclose(m, 1e-8):
        raise NotFactorizable("matrix is not in the image of the factorization")
    return out


def tr_length_estimate(p: GParams) -> complex:
    return p.L + 2 * complex(p.nu) + 2j * p.theta + 2 * math.log(math.cos(p.delta))


def tr_length_exact(p: GParams) -> Displacement:
    return translation_length(g_matrix(p))


def tr_length_gap_mp(p: GParams, dps: int = 60) -> float:
    """|exact - estimate| computed in extended precision.

    The gap is of order e^{-L}, far below double resolution once L > 35.
    """
    ctx = mpmath.MPContext()
    ctx.dps = dps
    L = ctx.mpf(p.L)
    T, nu = ctx.mpc(complex(p.T)), ctx.mpc(complex(p.nu))
    de, th = ctx.mpf(p.delta), ctx.mpf(p.theta)
    I = ctx.mpc(0, 1)
    cd, sd = ctx.cos(de), ctx.sin(de)
    a = ctx.exp(L / 2 + nu + I * th) * cd
    d = ctx.exp(-L / 2) * (T * ctx.exp(nu - I * th) * sd + ctx.exp(-nu - I * th) * cd)
    mu = 2 * ctx.acosh((a + d) / 2)
    if ctx.re(mu) < 0:
        mu = -mu
    est = L + 2 * nu + 2 * I * th + 2 * ctx.log(cd)
    diff = mu - est
    # compare mod 2 pi i
    k = ctx.nint(ctx.im(diff) / (2 * ctx.pi))
    diff -= 2 * ctx.pi * I * k
    return float(abs(diff))


@dataclass(frozen=True)
class HexHQuantities:
    N1: complex
    N2: complex
    D: complex
    Z: complex
    Q: complex
    Xtilde: complex
    Mtilde: complex
    alpha: float
    Mbar: complex
    e0: BoundaryPoint
    e1: BoundaryPoint
    f0: BoundaryPoint
    f1: BoundaryPoint
    N1sq_minus_N2sq: complex

    def identity_closed_form(self, p: GParams) -> complex:
        """-2 sin(delta) exp(L/2 + nu - i theta)."""
        return -2 * math.sin(p.delta) * cmath.exp(p.L / 2 + complex(p.nu) - 1j * p.theta)


def _mp_entries(p: GParams, ctx):
    L = ctx.mpf(p.L)
    T, nu = ctx.mpc(complex(p.T)), ctx.mpc(complex(p.nu))
    de, th = ctx.mpf(p.delta), ctx.mpf(p.theta)
    I = ctx.mpc(0, 1)
    cd, sd = ctx.cos(de), ctx.sin(de)
    a = ctx.exp(L / 2 + nu + I * th) * cd
    b = ctx.exp(L / 2 + nu - I * th) * sd
    c = ctx.exp(-L / 2) * (T * ctx.exp(nu + I * th) * cd - ctx.exp(-nu + I * th) * sd)
    d = ctx.exp(-L / 2) * (T * ctx.exp(nu - I * th) * sd + ctx.exp(-nu - I * th) * cd)
    return a, b, c, d


def hex_h_quantities(p: GParams, Xtilde: complex, Mtilde: complex, alpha: float = 0.0) -> HexHQuantities:
    """N1, N2, D and the derived quantities, evaluated in extended precision."""
    ctx = hp.CTX
    a, b, c, d = _mp_entries(p, ctx)
    N1 = a - d
    N2 = ctx.sqrt((a + d) ** 2 - 4)
    if ctx.re(N2) < 0:
        N2 = -N2
    D = 2 * c
    if abs(D) == 0:
        raise AxisDegenerate("g fixes infinity; its axis meets 0 -> oo")
    diff = N1 ** 2 - N2 ** 2
    X = ctx.mpc(complex(Xtilde))
    M = ctx.mpc(complex(Mtilde))
    Z = (D * X ** 2 + diff / D) / (X * N2)
    Q = (D ** 2 * X ** 4 + diff ** 2 / D ** 2) / (X ** 2 * N2 ** 2)
    Mbar = ctx.tanh(M / 2)
    # e0 = (N1 - N2)/D without the cancellation: N1^2 - N2^2 = -4bc
    e0 = -2 * b / (N1 + N2)
    e1 = (N1 + N2) / D
    f0 = H5_SIDE * Mbar * X
    f1 = H5_SIDE * X / Mbar
    return HexHQuantities(
        N1=complex(N1),
        N2=complex(N2),
        D=complex(D),
        Z=complex(Z),
        Q=complex(Q),
        Xtilde=complex(Xtilde),
        Mtilde=complex(Mtilde),
        alpha=float(alpha),
        Mbar=complex(Mbar),
        e0=BoundaryPoint(complex(e0)),
        e1=BoundaryPoint(complex(e1)),
        f0=BoundaryPoint(complex(f0)),
        f1=BoundaryPoint(complex(f1)),
        N1sq_minus_N2sq=complex(diff),
    )


def default_xm(L: float, alpha: float = 0.0):
    return math.exp(L / 2), math.exp(alpha) * m_exact(L)


@dataclass(frozen=True)
class HexagonH:
    hexagon: RealizedHexagon
    quantities: HexHQuantities
    f0: BoundaryPoint
    f1: BoundaryPoint

    def width(self, k: int) -> Displacement:
        return self.hexagon.widths[k]

    def h4_endpoint_width(self) -> Displacement:
        """H4 with H3 run e0 -> e1 and H5 run f0 -> f1.

        This is the orientation in which the closed form for cosh H4 holds; the
        standard orientation reverses H5 and so differs by i pi.
        """
        q = self.quantities
        return double_cross_width(geodesic(q.e0, q.e1), geodesic(self.f0, self.f1), self.hexagon.side(4), tol=1e-7)


def _mp_perp(g1, g2):
    """Common perpendicular in extended precision (unoriented)."""
    ctx = hp.CTX
    A = hp.normalizer(g1)
    r = hp.apply(A, g2[0])
    s = hp.apply(A, g2[1])
    k = ctx.sqrt(r * s)
    Ai = hp.inverse(A)
    return (hp.apply(Ai, -k), hp.apply(Ai, k))


def hexagon_h_build(p: GParams, Xtilde: complex, Mtilde: complex, alpha: float = 0.0) -> HexagonH:
    """The right-angled hexagon with H1 = 0..oo, H3 = Axis(g), H6 = -X~..X~, H6 width M~ + i pi."""
    q = hex_h_quantities(p, Xtilde, Mtilde, alpha)
    ctx = hp.CTX
    a, b, c, d = _mp_entries(p, ctx)
    N1, N2 = a - d, ctx.sqrt((a + d) ** 2 - 4)
    if ctx.re(N2) < 0:
        N2 = -N2
    e0, e1 = -2 * b / (N1 + N2), (N1 + N2) / (2 * c)
    if abs(e0) < ctx.mpf(10) ** (-40) or abs(e0 - e1) == 0:
        raise AxisDegenerate("axis of g shares an endpoint with 0 -> oo")
    X = ctx.mpc(complex(Xtilde))
    l1 = (ctx.mpc(0), None)
    l3 = (e0, e1)
    l6 = (-H5_SIDE * X, H5_SIDE * X)
    # push H1 a distance M~ along H6 toward the H5_SIDE endpoint
    l5 = hp.apply_geo(hp.along(l6, complex(Mtilde)), l1)
    l2 = _mp_perp(l1, l3)
    l4 = _mp_perp(l3, l5)
    lines = [hp.geo_from_mp(g) for g in (l1, l2, l3, l4, l5, l6)]
    h = orient_standard(lines)
    f = sorted(hp.geo_from_mp(l5).__dict__.values(), key=lambda z: abs(z.z))
    return HexagonH(h, q, f[0], f[1])


@dataclass(frozen=True)
class H5Estimate:
    value: complex
    tau: complex
    root: complex


H5_COEFF_STATED = math.sqrt(2) / 2
# coefficient exhibited by the exact construction of H
H5_COEFF_GEOMETRIC = 1.0


def h5_estimate(p: GParams, q: HexHQuantities, eps: float | None = None,
                coefficient: float = H5_COEFF_STATED) -> H5Estimate:
    """Leading term of H5 with the explicit square-root discrepancy tau.

    The leading coefficient defaults to sqrt(2)/2; pass
    H5_COEFF_GEOMETRIC to compare with a measured hexagon.
    """
    tan_d = math.tan(p.delta)
    e2nu = cmath.exp(-2 * complex(p.nu))
    if eps is not None:
        if abs(tan_d) > 2 * eps + 1e-15 or abs(e2nu) > 2:
            raise HypothesisViolated("needs |tan delta| <= 2 eps and |exp(-2 nu)| <= 2")
    T = complex(p.T)
    rad = (T - tan_d * e2nu) ** 2 + tan_d ** 2 * cmath.exp(-4j * p.theta)
    root = cmath.sqrt(rad)
    if abs(-root - T) < abs(root - T):
        root = -root
    tau = root - T
    M = complex(q.Mtilde)
    coth = cmath.cosh(M) / cmath.sinh(M)
    val = coefficient * coth * math.exp(-p.L / 2) * (T + tau) + 1j * math.pi
    return H5Estimate(val, tau, root)


# ---------------------------------------------------------------- search


@dataclass
class SearchConfig:
    generators: list
    A: Mobius = field(default_factory=Mobius.identity)
    L: float = 8.0
    eps: float = 0.3
    That: float = 3.0
    max_word_length: int = 12
    trace_window: float | None = None
    names: list | None = None
    radius_slack: float | None = None

    def __post_init__(self):
        if self.max_word_length < 1:
            raise ValueError("max_word_length must be at least 1")
        if self.names is None:
            self.names = [f"g{i}" for i in range(len(self.generators))]
        if self.trace_window is None:
            self.trace_window = 4 * math.exp(self.eps)


@dataclass(frozen=True)
class SearchHit:
    word: tuple
    params: GParams
    tr_length: complex

    def word_str(self) -> str:
        return " ".join(self.word)


def _key(m: Mobius, digits: int = 6):
    e = list(m.entries())
    # projective normalization: first non-negligible entry gets positive real part
    scale = max(abs(x) for x in e)
    for x in e:
        if abs(x) > 1e-6 * scale:
            if x.real < 0 or (x.real == 0 and x.imag < 0):
                e = [-y for y in e]
            break
    return tuple((round(x.real, digits), round(x.imag, digits)) for x in e)


def _hit(cfg: SearchConfig, m: Mobius, word) -> SearchHit | None:
    conj = cfg.A @ m @ cfg.A.inverse()
    tr = abs(conj.trace)
    half = math.exp(cfg.L / 2)
    if not (half / cfg.trace_window <= tr <= half * cfg.trace_window):
        return None
    try:
        params = g_decompose(conj, cfg.L)
    except (NotFactorizable, AmbiguousBranch):
        return None
    if params.violations(cfg.eps, cfg.That):
        return None
    try:
        tl = complex(translation_length(conj))
    except Exception:
        return None
    d = tl - cfg.L
    if abs(d.real) > cfg.eps or abs(d.imag) > cfg.eps:
        return None
    return SearchHit(tuple(word), params, tl)


def word_ball_search(cfg: SearchConfig) -> list:
    """Breadth-first enumeration of group elements, returning shortlex-first words that hit."""
    gens = list(cfg.generators)
    if not gens:
        return []
    names = cfg.names
    # basepoint: the preimage under A of (0, 1), the point g(L, 0, ...) moves along its axis
    base = cfg.A.inverse().apply_h3(PointH(0, 1))
    # a hit moves some point by about L; elements moving the base much further
    # are dropped together with their extensions
    slack = cfg.radius_slack if cfg.radius_slack is not None else 5.0
    bound = cfg.L + slack
    ident = Mobius.identity()
    seen = {_key(ident)}
    frontier = [((), ident)]
    hits = []
    for _length in range(1, cfg.max_word_length + 1):
        nxt = []
        for word, m in frontier:
            for i, g in enumerate(gens):
                w = m @ g
                k = _key(w)
                if k in seen:
                    continue
                seen.add(k)
                dd = dist_point(base, w.apply_h3(base))
                if dd > bound:
                    continue
                nw = word + (names[i],)
                nxt.append((nw, w))
                h = _hit(cfg, w, nw)
                if h is not None:
                    hits.append(h)
        frontier = nxt
        if not frontier:
            break
    order = {n: i for i, n in enumerate(names)}
    hits.sort(key=lambda h: (len(h.word), [order[x] for x in h.word]))
    return hits


def octagon_generators():
    """Side pairings of the regular octagon with angles pi/4, as elements of PSL2(R).

    Returns (names, matrices) with inverses listed explicitly.
    """
    ell = 2 * math.acosh(1 / math.tan(math.pi / 8))
    ch, sh = math.cosh(ell / 2), math.sinh(ell / 2)
    cay = Mobius(1, -1j, 1, 1j)  # upper half plane -> disk
    names, mats = [], []
    letters = "abcd"
    for k in range(4):
        phi = k * math.pi / 4
        rot = Mobius(cmath.exp(1j * phi / 2), 0, 0, cmath.exp(-1j * phi / 2))
        t = Mobius(ch, sh, sh, ch)
        g_disk = rot @ t @ rot.inverse()
        g = cay.inverse() @ g_disk @ cay
        # clean tiny imaginary parts: these are real matrices
        g = Mobius(*(complex(x.real, 0) if abs(x.imag) < 1e-13 else x for x in g.entries()))
        names += [letters[k], letters[k].upper()]
        mats += [g, g.inverse()]
    return names, mats
