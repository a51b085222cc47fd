"""Pants and hamster-wheel components as explicit holonomy data.

A component carries, per cuff: a marked geodesic (a chosen lift with a base
frame at a distinguished orthogeodesic foot), the cuff holonomy, the complex
half-length, the formal feet as torsor coordinates, and the slow constant
turning field.  Everything a goodness check reports is measured directly
from the holonomy, never read back from construction inputs.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .moebius import (
    Frame,
    GeometryError,
    MarkedGeodesic,
    MoebiusMap,
    NotLoxodromic,
    TorsorPoint,
    X,
    common_orthogonal,
    complex_distance,
    foot_coordinate,
    half_turn,
    loxodromic_about,
    torus_distance,
    translation_length,
)
from .trig import hexagon_solve

# rung length of the perfect wheel: cosh(rung) = (cosh R + cosh^2 1)/sinh^2 1
RUNG_OFFSET = -2.0 * math.log(math.sinh(1.0))
# short-orthogeodesic scale constant: eta0 = e^(-R/2 + C_SHORT), measured
# from the inner cuff to a rung; adjacent inner cuffs sit at 2*eta0.
C_SHORT = math.log(2.0 * math.cosh(1.0))
# medium orthogeodesic limit length (inner cuff to rim)
MEDIUM_LIMIT = 0.5 * math.log((math.cosh(1.0) + 1.0) / (math.cosh(1.0) - 1.0))


class SolveFailed(GeometryError):
    pass


class Infeasible(GeometryError):
    pass


class AdjustmentAmbiguous(GeometryError):
    pass


@dataclass(frozen=True)
class Cuff:
    geodesic: MarkedGeodesic
    holonomy: MoebiusMap
    half_length: complex
    formal_feet: tuple
    turning_base: complex
    turning_slope: float
    role: str = "cuff"

    @property
    def length(self):
        return 2.0 * self.half_length

    def foot_points(self):
        return [TorsorPoint(f, self.length).reduce() for f in self.formal_feet]

    def field_value(self, s: float) -> complex:
        """Turning-field torsor value at arc position s along the cuff."""
        return self.turning_base + s * complex(1.0, self.turning_slope)


@dataclass(frozen=True)
class ComponentGeometry:
    kind: str  # "pants" | "wheel"
    R: float
    eps: float
    seed: int | None
    cuffs: tuple
    params: dict = field(default_factory=dict)

    @property
    def n_cuffs(self):
        return len(self.cuffs)

    def rims(self):
        return [c for c in self.cuffs if c.role.startswith("rim")]

    def inner_cuffs(self):
        return [c for c in self.cuffs if c.role == "inner"]


def _wrapped_abs(z: complex) -> float:
    """Modulus of a complex-length difference, 2*pi*i-periodic."""
    from .moebius import reduce_angle

    return abs(complex(z.real, reduce_angle(z.imag)))


def axis_of(m: MoebiusMap) -> MarkedGeodesic:
    """Axis of a loxodromic, oriented toward the attracting fixed point."""
    a, b, c, d = m.a, m.b, m.c, m.d
    if abs(c) < 1e-14:
        if abs(d - a) < 1e-14:
            raise NotLoxodromic("no axis: map fixes infinity parabolically")
        zf = b / (d - a)
        if abs(a) > abs(d):
            return MarkedGeodesic.axis(zf, None)
        return MarkedGeodesic.axis(None, zf)
    disc = cmath.sqrt((a - d) ** 2 + 4.0 * b * c)
    z1 = (a - d + disc) / (2.0 * c)
    z2 = (a - d - disc) / (2.0 * c)
    if abs(c * z1 + d) > abs(c * z2 + d):
        return MarkedGeodesic.axis(z2, z1)
    return MarkedGeodesic.axis(z1, z2)


def rebase(g: MarkedGeodesic, v) -> MarkedGeodesic:
    """Move the base frame to torsor coordinate v."""
    return MarkedGeodesic(g.p, g.q, Frame(g.frame.map @ X(v)))


def center_near_zero(v: complex, ell: complex) -> complex:
    """The lattice representative with real part in [-Re(ell)/2, Re(ell)/2).

    Builders rebase marked geodesics at measured feet; wrapping a foot
    coordinate by a full period would move the base a period along the
    chosen lift (an e^R-size displacement in the developed picture).
    """
    v = TorsorPoint(v, ell).reduce().value
    if v.real >= 0.5 * ell.real:
        v -= ell
    return v


def _turning_slope(ell: complex) -> float:
    """Slope of the slow constant turning field for a cuff of length ell."""
    return ell.imag / ell.real


# ---------------------------------------------------------------------------
# pants


def build_pants_from_half_lengths(hl0, hl1, hl2, R, eps, seed) -> ComponentGeometry:
    """Pants with prescribed complex half-lengths, via the hexagon walk.

    The right-angled hexagon with alternating sides (hl0, hl1, hl2) is
    walked explicitly; cuff holonomies are products of half-turns about the
    two adjacent seam lines, so feet separations equal the half-lengths by
    construction and all matrices are exact compositions.
    """
    hls = [complex(hl0), complex(hl1), complex(hl2)]
    hexa = hexagon_solve(*hls)
    sides = hexa.cyclic()  # hl0, seam2, hl1, seam0, hl2, seam1
    from .moebius import E, IDENTITY

    lines = []
    frames = []
    prefix = IDENTITY
    for s in sides:
        frames.append(prefix)
        lines.append(MarkedGeodesic.axis(0.0, None).transported(prefix))
        prefix = prefix @ X(s) @ E(math.pi / 2.0)
    cuffs = []
    for i in range(3):
        # cuff i occupies walk position 2i; its seams are the common
        # orthogonals to the other two cuff lines (measured, not assumed)
        gamma = MarkedGeodesic.from_frame(Frame(frames[2 * i]))
        hl = hls[i]
        ell = 2.0 * hl
        eta_before = common_orthogonal(gamma, lines[(2 * i + 4) % 6])
        eta_after = common_orthogonal(gamma, lines[(2 * i + 2) % 6])
        f_before = foot_coordinate(gamma, eta_before, ell)
        gamma = rebase(gamma, center_near_zero(f_before.value, ell))
        f_after = foot_coordinate(gamma, eta_after, ell).reduce()
        if torus_distance(f_after, TorsorPoint(hl, ell)) > 1e-8:
            raise GeometryError("pants feet do not sit a half-length apart")
        hol = half_turn(eta_after) @ half_turn(eta_before)
        cuffs.append(
            Cuff(
                geodesic=gamma,
                holonomy=hol,
                half_length=hl,
                # actual feet, stored at their definitional values (the
                # measured second foot agrees to the tolerance checked above)
                formal_feet=(0.0 + 0.0j, hl),
                turning_base=0.0 + 0.0j,
                turning_slope=_turning_slope(ell),
                role="cuff",
            )
        )
    return ComponentGeometry(
        kind="pants",
        R=float(R),
        eps=float(eps),
        seed=seed,
        cuffs=tuple(cuffs),
        params={"hl": hls},
    )


def build_perfect_pants(R: float) -> ComponentGeometry:
    """The Fuchsian pants with all three half-lengths exactly R."""
    if R < 1:
        raise Infeasible("R must be at least 1")
    return build_pants_from_half_lengths(R, R, R, R=R, eps=0.0, seed=None)


def draw_half_lengths(R, eps, seed):
    """Seeded half-length perturbations: |hl - R| < eps, Im != 0."""
    rng = random.Random(seed)
    hls = []
    for _ in range(3):
        re = (rng.random() - 0.5) * 0.9 * eps
        im = 0.0
        while abs(im) < 0.05 * eps:
            im = (rng.random() - 0.5) * 0.9 * eps
        z = complex(re, im)
        if abs(z) >= eps:
            z *= 0.9 * eps / abs(z)
        hls.append(R + z)
    return hls


def build_good_pants(R, eps, seed) -> ComponentGeometry:
    """Seeded (R, eps)-good pants; eps = 0 reproduces the perfect pants."""
    if eps == 0.0:
        return build_pants_from_half_lengths(R, R, R, R=R, eps=0.0, seed=seed)
    if not (0.0 < eps < 0.2):
        raise Infeasible("need 0 < eps < 0.2")
    if R < 4:
        raise Infeasible("need R >= 4 for good pants")
    hls = draw_half_lengths(R, eps, seed)
    return build_pants_from_half_lengths(*hls, R=R, eps=eps, seed=seed)


# ---------------------------------------------------------------------------
# hamster wheels


def perfect_rung_length(R: float) -> float:
    """Exact rung length of the perfect wheel:
    2 * arcsinh(cosh(R/2)/sinh 1)."""
    return 2.0 * math.asinh(math.cosh(0.5 * R) / math.sinh(1.0))


def _wheel_skeleton(s_l, s_r, t):
    """Rims, rim translations and the inner-cuff word for given parameters."""
    gl = MarkedGeodesic.axis(0.0, None)
    lam0 = MarkedGeodesic.axis(-1.0, 1.0)
    push = loxodromic_about(lam0, t)
    gr = gl.transported(push).reverse()
    T_l = loxodromic_about(gl, s_l)
    T_r = loxodromic_about(gr, s_r)
    return gl, gr, lam0, T_l, T_r, T_r @ T_l


def _closing_residual(t, s_l, s_r, R):
    *_, w0 = _wheel_skeleton(s_l, s_r, t)
    return translation_length(w0).real - 2.0 * R


def build_wheel_from_params(R, eps, seed, s_l, s_r, dt=0.0) -> ComponentGeometry:
    """Wheel with rim steps s_l, s_r; rung length root-solved for closure.

    The fundamental piece (one rung, the two rims, one inner-cuff word) is
    developed by the degree-R symmetry, conjugating by the rim translation.
    """
    R_int = int(round(R))
    if R_int < 3:
        raise Infeasible("need integer R >= 3 for a wheel")
    guess = perfect_rung_length(R_int)
    lo, hi = guess - 1.0, guess + 1.0
    f_lo = _closing_residual(lo, s_l, s_r, R_int)
    f_hi = _closing_residual(hi, s_l, s_r, R_int)
    if f_lo * f_hi > 0:
        raise SolveFailed("closing equation has no root in the bracketing interval")
    t = brentq(lambda x: _closing_residual(x, s_l, s_r, R_int), lo, hi, xtol=1e-13)
    # derivative sign check: the root is transverse and unique in the bracket
    h = 1e-6
    if (_closing_residual(t + h, s_l, s_r, R_int) - _closing_residual(t - h, s_l, s_r, R_int)) <= 0:
        raise SolveFailed("closing equation is not increasing at the root")
    t = t + dt
    gl, gr, lam0, T_l, T_r, w0 = _wheel_skeleton(s_l, s_r, t)
    ell_inner = translation_length(w0)
    hl_inner = 0.5 * ell_inner

    # inner cuff k = T_l^sigma(k) conjugate with balanced exponents
    # sigma(k) = k or k - R, so stored matrices stay well conditioned;
    # marked at the foot of the short orthogeodesic toward cuff k-1
    shift_start = R_int // 2 + 1
    T_l_inv = T_l.inverse()

    def conjugator(k):
        m = MoebiusMap(1.0, 0.0, 0.0, 1.0)
        step = T_l if k >= 0 else T_l_inv
        for _ in range(abs(k)):
            m = m @ step
        return m

    c0_axis = axis_of(w0)
    c1_axis = c0_axis.transported(T_l)
    cm1_axis = c0_axis.transported(T_l.inverse())
    short_prev = common_orthogonal(c0_axis, cm1_axis)
    f_minus = foot_coordinate(c0_axis, short_prev, ell_inner)
    c0 = rebase(c0_axis, center_near_zero(f_minus.value, ell_inner))
    short_next = common_orthogonal(c0, c1_axis)
    f_plus = foot_coordinate(c0, short_next, ell_inner).reduce()
    a_minus, a_plus = 0.0 + 0.0j, f_plus.value
    if a_plus.real < 0:
        a_plus += ell_inner
    fp_minus, fp_plus = formal_feet_from_actual(a_minus, a_plus, hl_inner)

    inner_cuffs = []
    for k in range(R_int):
        conj = conjugator(k if k < shift_start else k - R_int)
        hol = conj @ w0 @ conj.inverse()
        geo = c0.transported(conj)
        inner_cuffs.append(
            Cuff(
                geodesic=geo,
                holonomy=hol,
                half_length=hl_inner,
                formal_feet=(fp_minus, fp_plus),
                turning_base=fp_minus,
                turning_slope=_turning_slope(ell_inner),
                role="inner",
            )
        )

    # rim holonomies as single conjugated translations (a power iteration
    # of T_r loses digits: its axis endpoints are e^{-t}-close)
    ell_l = R_int * complex(s_l)
    ell_r = R_int * complex(s_r)
    rim_l = Cuff(
        geodesic=gl,
        holonomy=loxodromic_about(gl, ell_l),
        half_length=0.5 * ell_l,
        formal_feet=(),
        turning_base=0.0 + 0.0j,
        turning_slope=_turning_slope(ell_l),
        role="rim_l",
    )
    rim_r = Cuff(
        geodesic=gr,
        holonomy=loxodromic_about(gr, ell_r),
        half_length=0.5 * ell_r,
        formal_feet=(),
        turning_base=foot_coordinate(gr, lam0.reverse(), ell_r).value,
        turning_slope=_turning_slope(ell_r),
        role="rim_r",
    )
    return ComponentGeometry(
        kind="wheel",
        R=float(R_int),
        eps=float(eps),
        seed=seed,
        cuffs=tuple([rim_l, rim_r] + inner_cuffs),
        params={
            "s_l": complex(s_l),
            "s_r": complex(s_r),
            "t": complex(t),
            "shift_start": complex(shift_start),
        },
    )


def formal_feet_from_actual(a_minus, a_plus, hl):
    """Symmetric adjustment making the feet separation exactly hl."""
    gap = a_plus - a_minus - hl
    if abs(gap) >= 0.5:
        raise AdjustmentAmbiguous(
            f"feet separation is {abs(gap):.3g} away from the half-length"
        )
    return a_minus + 0.5 * gap, a_plus - 0.5 * gap


def build_perfect_wheel(R: int) -> ComponentGeometry:
    """The degree-R symmetric wheel: rim steps 2, inner cuffs of length 2R."""
    return build_wheel_from_params(R, 0.0, None, 2.0, 2.0)


def build_good_wheel(R, eps, seed) -> ComponentGeometry:
    """Seeded good wheel: rim and rung data perturbed within eps/(2R)."""
    if eps == 0.0:
        return build_perfect_wheel(int(round(R)))
    rng = random.Random(seed)
    scale = eps / (2.0 * R)

    def draw():
        return scale * complex(rng.random() - 0.5, rng.random() - 0.5)

    s_l = 2.0 + draw()
    s_r = 2.0 + draw()
    dt = draw() * 0.5
    return build_wheel_from_params(R, eps, seed, s_l, s_r, dt=dt)


def formal_feet(wheel: ComponentGeometry, inner_index: int):
    """Formal feet of a wheel inner cuff, re-measured from holonomy.

    Adjacent inner cuffs are taken as the neighboring lifts under the wheel
    symmetry (the stored list holds one lift per quotient cuff, so index
    arithmetic alone would pick lifts far around the wheel).
    """
    inner = wheel.inner_cuffs()
    n = len(inner)
    cuff = inner[inner_index % n]
    T_l = loxodromic_about(wheel.cuffs[0].geodesic, wheel.params["s_l"])
    g = cuff.geodesic
    prev_lift = g.transported(T_l.inverse())
    next_lift = g.transported(T_l)
    a_minus = foot_coordinate(g, common_orthogonal(g, prev_lift), cuff.length)
    a_plus = foot_coordinate(g, common_orthogonal(g, next_lift), cuff.length)
    am, ap = a_minus.value, a_plus.reduce().value
    if ap.real < am.real:
        ap += cuff.length
    fm, fp = formal_feet_from_actual(am, ap, cuff.half_length)
    return (
        TorsorPoint(fm, cuff.length).reduce(),
        TorsorPoint(fp, cuff.length).reduce(),
    )


def reverse_component(c: ComponentGeometry) -> ComponentGeometry:
    """The same component with the opposite orientation.

    Cuff geodesics reverse, holonomies invert, torsor coordinates negate.
    """
    cuffs = []
    for cuff in c.cuffs:
        ell = cuff.length
        cuffs.append(
            Cuff(
                geodesic=cuff.geodesic.reverse(),
                holonomy=cuff.holonomy.inverse(),
                half_length=cuff.half_length,
                formal_feet=tuple(
                    TorsorPoint(-f, ell).reduce().value for f in cuff.formal_feet
                ),
                turning_base=TorsorPoint(-cuff.turning_base, ell).reduce().value,
                turning_slope=cuff.turning_slope,
                role=cuff.role,
            )
        )
    return ComponentGeometry(c.kind, c.R, c.eps, c.seed, tuple(cuffs), dict(c.params))


# ---------------------------------------------------------------------------
# goodness


@dataclass
class Condition:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return self.residual < self.tolerance


@dataclass
class GoodnessReport:
    kind: str
    R: float
    eps: float
    conditions: list
    quantities: dict

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    def failing(self):
        return [c for c in self.conditions if not c.passed]


def _measure_pants(c: ComponentGeometry, eps: float):
    tol = max(eps, 1e-9)
    conds, quants = [], {}
    lines = [cf.geodesic for cf in c.cuffs]
    for i in range(3):
        g = lines[i]
        ell = c.cuffs[i].length
        eta_before = common_orthogonal(g, lines[(i + 2) % 3])
        eta_after = common_orthogonal(g, lines[(i + 1) % 3])
        f0 = foot_coordinate(g, eta_before, ell).reduce()
        f1 = foot_coordinate(g, eta_after, ell).reduce()
        hl_feet = TorsorPoint(f1.value - f0.value, ell).reduce().value
        hl_hol = 0.5 * translation_length(c.cuffs[i].holonomy)
        quants[f"hl_feet_{i}"] = hl_feet
        quants[f"hl_holonomy_{i}"] = hl_hol
        conds.append(
            Condition(f"cuff {i}: |hl - R| < eps", abs(hl_feet - c.R), tol)
        )
        conds.append(
            Condition(
                f"cuff {i}: feet/holonomy half-length agreement",
                min(abs(hl_feet - hl_hol), abs(hl_feet + hl_hol - ell)),
                1e-8,
            )
        )
        for f_meas, f_stored in ((f0, c.cuffs[i].formal_feet[0]), (f1, c.cuffs[i].formal_feet[1])):
            conds.append(
                Condition(
                    f"cuff {i}: measured foot at stored formal foot",
                    torus_distance(f_meas, TorsorPoint(f_stored, ell)),
                    1e-8,
                )
            )
    return conds, quants


def _measure_wheel(c: ComponentGeometry, eps: float):
    R = int(round(c.R))
    tol_fine = max(eps / R, 1e-8)
    tol_cuff = max(eps, 1e-8)
    conds, quants = [], {}
    rim_l, rim_r = c.cuffs[0], c.cuffs[1]
    inner = list(c.inner_cuffs())
    perfect = _perfect_wheel_cached(R)
    p_inner = perfect.inner_cuffs()

    # rungs: re-derive as common orthogonals between the rim lifts
    T_l = loxodromic_about(rim_l.geodesic, c.params["s_l"])
    lam0 = common_orthogonal(rim_l.geodesic, rim_r.geodesic)
    rung_target = R + RUNG_OFFSET
    d_rung = complex_distance(rim_l.geodesic, rim_r.geodesic)
    quants["rung_distance"] = d_rung
    quants["rung_defect"] = abs(d_rung - rung_target)
    quants["rung_defect_scaled"] = abs(d_rung - rung_target) * math.exp(0.5 * R)
    conds.append(
        Condition("rung complex distance near R - 2 log sinh 1", abs(d_rung - rung_target), tol_fine)
    )
    # rung feet against the turning fields, and consecutive spacing
    f_l0 = foot_coordinate(rim_l.geodesic, lam0, rim_l.length).reduce()
    lam1 = lam0.transported(T_l)
    f_l1 = foot_coordinate(rim_l.geodesic, lam1, rim_l.length).reduce()
    spacing = TorsorPoint(f_l1.value - f_l0.value, rim_l.length).reduce()
    d_spacing = min(abs(spacing.value - 2.0), abs(spacing.value - rim_l.length + 2.0))
    conds.append(Condition("rim rung spacing near 2", d_spacing, tol_fine))
    field_res = torus_distance(
        f_l0, TorsorPoint(rim_l.field_value(f_l0.value.real), rim_l.length)
    )
    conds.append(Condition("rung foot on the rim turning field", field_res, tol_fine))

    # inner cuff half-lengths and feet
    for k in (0, 1):
        cuff = inner[k]
        hl = 0.5 * translation_length(cuff.holonomy)
        conds.append(Condition(f"inner {k}: |hl - R| < eps", abs(hl - R), tol_cuff))
    quants["inner_length"] = translation_length(inner[0].holonomy)

    # omnibus quantities on the fundamental piece
    g0 = inner[0].geodesic
    g1 = inner[1].geodesic
    short = complex_distance(g0, g1)
    p_short = complex_distance(p_inner[0].geodesic, p_inner[1].geodesic)
    quants["short_ortho"] = short
    quants["short_ortho_perfect"] = p_short
    quants["short_pred"] = 2.0 * math.exp(-0.5 * R + C_SHORT)
    omni1 = abs(short / p_short - 1.0)
    quants["omnibus1_ratio_minus_1"] = omni1
    conds.append(Condition("omnibus 1: short length ratio", omni1, 50.0 * max(eps, 1e-9)))

    medium = complex_distance(g0, rim_l.geodesic)
    p_medium = complex_distance(p_inner[0].geodesic, perfect.cuffs[0].geodesic)
    quants["medium_ortho"] = medium
    quants["medium_ortho_perfect"] = p_medium
    omni2 = _wrapped_abs(medium - p_medium)
    quants["omnibus2_diff"] = omni2
    conds.append(Condition("omnibus 2: medium length difference", omni2, 50.0 * max(eps, 1e-9)))

    fm, fp = formal_feet(c, 0)
    stored = inner[0].foot_points()
    omni3 = max(torus_distance(fm, stored[0]), torus_distance(fp, stored[1]))
    # actual feet against formal feet
    prev_lift = g0.transported(T_l.inverse())
    a_minus = foot_coordinate(g0, common_orthogonal(g0, prev_lift), inner[0].length)
    omni3 = max(omni3, torus_distance(a_minus, stored[0]))
    quants["omnibus3_feet"] = omni3
    conds.append(
        Condition("omnibus 3: short feet near formal feet", omni3, 50.0 * max(eps / R, 1e-9))
    )

    med_co = common_orthogonal(rim_l.geodesic, g0)
    f_med = foot_coordinate(rim_l.geodesic, med_co, rim_l.length).reduce()
    omni4 = torus_distance(
        f_med, TorsorPoint(rim_l.field_value(f_med.value.real), rim_l.length)
    )
    quants["omnibus4_medium_foot"] = omni4
    conds.append(Condition("omnibus 4: medium feet on the field", omni4, 50.0 * max(eps, 1e-9)))

    # omnibus 5: distance between rung foot and medium foot along the rim
    pair = TorsorPoint(f_med.value - f_l0.value, rim_l.length).reduce().value
    lam0_p = common_orthogonal(perfect.cuffs[0].geodesic, perfect.cuffs[1].geodesic)
    f_l0_p = foot_coordinate(perfect.cuffs[0].geodesic, lam0_p, perfect.cuffs[0].length)
    med_p = common_orthogonal(perfect.cuffs[0].geodesic, p_inner[0].geodesic)
    f_med_p = foot_coordinate(perfect.cuffs[0].geodesic, med_p, perfect.cuffs[0].length)
    pair_p = TorsorPoint(f_med_p.value - f_l0_p.value, perfect.cuffs[0].length).reduce().value
    omni5 = _wrapped_abs(pair - pair_p)
    quants["omnibus5_pair"] = omni5
    conds.append(Condition("omnibus 5: feet pair distances vs perfect", omni5, 50.0 * max(eps, 1e-9)))
    return conds, quants


_PERFECT_WHEELS = {}


def _perfect_wheel_cached(R: int) -> ComponentGeometry:
    if R not in _PERFECT_WHEELS:
        _PERFECT_WHEELS[R] = build_perfect_wheel(R)
    return _PERFECT_WHEELS[R]


def goodness_check(c: ComponentGeometry, eps: float) -> GoodnessReport:
    """Measure every goodness condition directly from holonomy data."""
    if c.kind == "pants":
        conds, quants = _measure_pants(c, eps)
    elif c.kind == "wheel":
        conds, quants = _measure_wheel(c, eps)
    else:
        raise GeometryError(f"unknown component kind {c.kind!r}")
    return GoodnessReport(c.kind, c.R, eps, conds, quants)


def _rel_diff(lhs: MoebiusMap, rhs: MoebiusMap) -> float:
    lhs = lhs.sign_normalized()
    rhs = rhs.sign_normalized()
    num = math.sqrt(
        abs(lhs.a - rhs.a) ** 2 + abs(lhs.b - rhs.b) ** 2
        + abs(lhs.c - rhs.c) ** 2 + abs(lhs.d - rhs.d) ** 2
    )
    den = math.sqrt(abs(rhs.a) ** 2 + abs(rhs.b) ** 2 + abs(rhs.c) ** 2 + abs(rhs.d) ** 2)
    return num / den


def wheel_closure_residual(c: ComponentGeometry) -> float:
    """Residual certifying the boundary relation around the full wheel.

    The planar relation c_{R-1}...c_0 = g_l T_l^-1 g_r T_l factors through
    well-conditioned identities whose max relative residual is returned:

    * every stored inner holonomy is the T_l^sigma(k) conjugate of c_0
      (checked stepwise by wheel_symmetry_residual),
    * the single-period relation c_0 = T_r T_l,
    * g_l is the R-th power of the rim-l step,
    * g_r is the R-th power of the rim-r step.

    The monolithic boundary word is exposed separately by
    boundary_word_residual; its entries span e^{+-2R} so evaluating it in
    doubles loses ~e^{2R} eps, which is why the factored form is the check.
    """
    if c.kind != "wheel":
        raise GeometryError("closure word is a wheel relation")
    R = int(round(c.R))
    T_l = loxodromic_about(c.cuffs[0].geodesic, c.params["s_l"])
    T_r = loxodromic_about(c.cuffs[1].geodesic, c.params["s_r"])
    res = wheel_symmetry_residual(c)
    res = max(res, _rel_diff(c.inner_cuffs()[0].holonomy, T_r @ T_l))
    res = max(
        res,
        _rel_diff(
            c.cuffs[0].holonomy,
            loxodromic_about(c.cuffs[0].geodesic, R * c.params["s_l"]),
        ),
    )
    res = max(
        res,
        _rel_diff(
            c.cuffs[1].holonomy,
            loxodromic_about(c.cuffs[1].geodesic, R * c.params["s_r"]),
        ),
    )
    return res


def boundary_word_residual(c: ComponentGeometry) -> float:
    """Raw product of the stored holonomies around the boundary relation.

    Diagnostic only: the word's entries span e^{+-2R}, so in doubles the
    attainable residual degrades like e^{2R} * machine epsilon.
    """
    if c.kind != "wheel":
        raise GeometryError("closure word is a wheel relation")
    s = int(c.params["shift_start"].real)
    T_l = loxodromic_about(c.cuffs[0].geodesic, c.params["s_l"])
    inner = c.inner_cuffs()
    lhs = MoebiusMap(1.0, 0.0, 0.0, 1.0)
    for k in range(len(inner) - 1, s - 1, -1):
        lhs = lhs @ inner[k].holonomy
    lhs = lhs @ c.cuffs[0].holonomy.inverse()
    for k in range(s - 1, -1, -1):
        lhs = lhs @ inner[k].holonomy
    rhs = T_l.inverse() @ c.cuffs[1].holonomy @ T_l
    return _rel_diff(lhs, rhs)


def wheel_symmetry_residual(c: ComponentGeometry) -> float:
    """Conjugating by the rim step permutes the inner-cuff holonomies.

    Relative residual over the consecutive pairs that share the balanced
    lift branch (the wrap pair differs by the rim holonomy, by design).
    """
    if c.kind != "wheel":
        raise GeometryError("symmetry is a wheel property")
    s = int(c.params["shift_start"].real)
    T_l = loxodromic_about(c.cuffs[0].geodesic, c.params["s_l"])
    inner = c.inner_cuffs()
    worst = 0.0
    for k in range(len(inner) - 1):
        if k + 1 == s:
            continue
        moved = T_l @ inner[k].holonomy @ T_l.inverse()
        worst = max(worst, _rel_diff(moved, inner[k + 1].holonomy))
    return worst


# ---------------------------------------------------------------------------
# serialization (GACOMP/1)


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.16g} {z.imag:.16g}"


def dump_component(c: ComponentGeometry) -> str:
    lines = ["GACOMP/1"]
    lines.append(f"kind {c.kind}")
    lines.append(f"R {c.R:.16g}")
    lines.append(f"eps {c.eps:.16g}")
    lines.append(f"seed {'-' if c.seed is None else c.seed}")
    for key in sorted(c.params):
        v = c.params[key]
        if isinstance(v, list):
            lines.append(f"param {key} " + " ".join(_fmt(x) for x in v))
        else:
            lines.append(f"param {key} {_fmt(v)}")
    for i, cuff in enumerate(c.cuffs):
        lines.append(f"cuff {i} role {cuff.role} hl {_fmt(cuff.half_length)}")
        m = cuff.geodesic.frame.map
        lines.append(f"frame {i} {_fmt(m.a)} {_fmt(m.b)} {_fmt(m.c)} {_fmt(m.d)}")
        h = cuff.holonomy
        lines.append(f"holonomy {i} {_fmt(h.a)} {_fmt(h.b)} {_fmt(h.c)} {_fmt(h.d)}")
        feet = " ".join(_fmt(f) for f in cuff.formal_feet)
        lines.append(f"feet {i} {feet}".rstrip())
        lines.append(f"field {i} {_fmt(cuff.turning_base)} {cuff.turning_slope:.16g}")
    return "\n".join(lines) + "\n"


def _parse_complex(tokens, k):
    return complex(float(tokens[k]), float(tokens[k + 1]))


def load_component(text: str) -> ComponentGeometry:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "GACOMP/1":
        raise GeometryError("not a GACOMP/1 record")
    kind, R, eps, seed = None, None, None, None
    params = {}
    cuff_data = {}
    for ln in lines[1:]:
        toks = ln.split()
        tag = toks[0]
        if tag == "kind":
            kind = toks[1]
        elif tag == "R":
            R = float(toks[1])
        elif tag == "eps":
            eps = float(toks[1])
        elif tag == "seed":
            seed = None if toks[1] == "-" else int(toks[1])
        elif tag == "param":
            vals = [_parse_complex(toks, k) for k in range(2, len(toks), 2)]
            params[toks[1]] = vals if len(vals) > 1 else vals[0]
        elif tag in ("cuff", "frame", "holonomy", "feet", "field"):
            i = int(toks[1])
            cuff_data.setdefault(i, {})[tag] = toks
    cuffs = []
    for i in sorted(cuff_data):
        d = cuff_data[i]
        role = d["cuff"][3]
        hl = _parse_complex(d["cuff"], 5)
        fm = d["frame"]
        frame_map = MoebiusMap(
            _parse_complex(fm, 2), _parse_complex(fm, 4),
            _parse_complex(fm, 6), _parse_complex(fm, 8),
        )
        hm = d["holonomy"]
        hol = MoebiusMap(
            _parse_complex(hm, 2), _parse_complex(hm, 4),
            _parse_complex(hm, 6), _parse_complex(hm, 8),
        )
        feet_toks = d["feet"][2:]
        feet = tuple(_parse_complex(feet_toks, k) for k in range(0, len(feet_toks), 2))
        fld = d["field"]
        base = _parse_complex(fld, 2)
        slope = float(fld[4])
        cuffs.append(
            Cuff(
                geodesic=MarkedGeodesic.from_frame(Frame(frame_map)),
                holonomy=hol,
                half_length=hl,
                formal_feet=feet,
                turning_base=base,
                turning_slope=slope,
                role=role,
            )
        )
    return ComponentGeometry(kind, R, eps, seed, tuple(cuffs), params)
