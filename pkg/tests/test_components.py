import math
import random

import pytest

from gasm.components import (
    C_SHORT,
    MEDIUM_LIMIT,
    RUNG_OFFSET,
    AdjustmentAmbiguous,
    build_good_pants,
    build_good_wheel,
    build_pants_from_half_lengths,
    build_perfect_pants,
    build_perfect_wheel,
    build_wheel_from_params,
    boundary_word_residual,
    dump_component,
    formal_feet,
    formal_feet_from_actual,
    goodness_check,
    load_component,
    perfect_rung_length,
    reverse_component,
    wheel_closure_residual,
    wheel_symmetry_residual,
)
from gasm.moebius import (
    TorsorPoint,
    complex_distance,
    foot_coordinate,
    torus_distance,
    translation_length,
)


def test_perfect_pants_basic():
    p = build_perfect_pants(2.0)
    assert goodness_check(p, 0.0).passed
    for cuff in p.cuffs:
        # half-cuff holonomy element has trace 2 cosh(R) up to the lift sign
        assert abs(cuff.holonomy.sign_normalized().trace - 2.0 * math.cosh(2.0)) < 1e-9
        assert abs(translation_length(cuff.holonomy) - 4.0) < 1e-9
        # feet difference along each cuff is R + 0i exactly
        f0, f1 = cuff.formal_feet
        assert abs((f1 - f0) - 2.0) < 1e-10


def test_perfect_pants_seams():
    p = build_perfect_pants(2.0)
    seam = math.acosh(math.cosh(2.0) / (math.cosh(2.0) - 1.0))
    for i in range(3):
        d = complex_distance(p.cuffs[i].geodesic, p.cuffs[(i + 1) % 3].geodesic)
        assert abs(d.real - seam) < 1e-8


def test_good_pants_goodness_roundtrip():
    gp = build_good_pants(8.0, 0.05, seed=7)
    rep = goodness_check(gp, 0.05)
    assert rep.passed
    for i in range(3):
        assert abs(rep.quantities[f"hl_feet_{i}"] - gp.cuffs[i].half_length) < 1e-8


def test_good_pants_explicit_half_lengths():
    hl = (8.0 + 0.025, 8.0 - 0.025, 8.0 + 0.025j)
    gp = build_pants_from_half_lengths(*hl, R=8.0, eps=0.05, seed=None)
    assert goodness_check(gp, 0.05).passed


def test_good_pants_eps_zero_is_perfect():
    gp = build_good_pants(8.0, 0.0, seed=123)
    pp = build_perfect_pants(8.0)
    for a, b in zip(gp.cuffs, pp.cuffs):
        assert a.holonomy == b.holonomy
        assert a.geodesic.frame.map == b.geodesic.frame.map


def test_good_pants_negative_control():
    bad = build_pants_from_half_lengths(8.0 + 0.1, 8.0, 8.0, R=8.0, eps=0.05, seed=None)
    rep = goodness_check(bad, 0.05)
    failing = rep.failing()
    assert len(failing) == 1
    assert failing[0].name.startswith("cuff 0")


def test_good_pants_determinism():
    a = build_good_pants(8.0, 0.05, seed=42)
    b = build_good_pants(8.0, 0.05, seed=42)
    assert dump_component(a) == dump_component(b)


@pytest.mark.parametrize("R", [6, 9, 12])
def test_perfect_wheel_closes(R):
    w = build_perfect_wheel(R)
    assert abs(translation_length(w.inner_cuffs()[0].holonomy).real - 2.0 * R) < 1e-8
    assert wheel_closure_residual(w) < 1e-8
    assert wheel_symmetry_residual(w) < 1e-10
    assert len(w.cuffs) == R + 2
    for rim in w.rims():
        assert abs(translation_length(rim.holonomy) - 2.0 * R) < 1e-9


def test_perfect_wheel_rung_geometry():
    w = build_perfect_wheel(12)
    rep = goodness_check(w, 0.0)
    q = rep.quantities
    # rung distance within C e^{-R/2} of R - 2 log sinh 1, C < 10
    assert q["rung_defect_scaled"] < 10.0
    # medium orthogeodesic approaches arccoth(cosh 1)
    assert abs(q["medium_ortho"].real - MEDIUM_LIMIT) < 10.0 * math.exp(-6.0)
    assert abs(MEDIUM_LIMIT - 0.7719368329053048) < 1e-12
    # short orthogeodesic between adjacent inner cuffs: 2 e^{-R/2 + C1}
    assert abs(q["short_ortho"].real / q["short_pred"] - 1.0) < 1e-2


def test_rung_defect_decays():
    d6 = goodness_check(build_perfect_wheel(6), 0.0).quantities["rung_defect"]
    d12 = goodness_check(build_perfect_wheel(12), 0.0).quantities["rung_defect"]
    assert d6 / d12 > 5.0


def test_perfect_rung_closed_form():
    # cosh(rung) = (cosh R + cosh^2 1)/sinh^2 1, from the pants trace identity
    for R in (6, 9, 12):
        t = perfect_rung_length(R)
        lhs = math.cosh(t)
        rhs = (math.cosh(R) + math.cosh(1.0) ** 2) / math.sinh(1.0) ** 2
        assert abs(lhs - rhs) < 1e-9 * rhs
        w = build_perfect_wheel(R)
        assert abs(w.params["t"].real - t) < 1e-9


def test_wheel_rung_spacing():
    w = build_perfect_wheel(8)
    rep = goodness_check(w, 0.0)
    names = [c.name for c in rep.conditions]
    assert "rim rung spacing near 2" in names
    spacing = [c for c in rep.conditions if c.name == "rim rung spacing near 2"][0]
    assert spacing.residual < 1e-9


def test_good_wheel_passes_goodness():
    rng = random.Random(0)
    for seed in range(5):
        gw = build_good_wheel(12, 0.05, seed=seed)
        rep = goodness_check(gw, 0.05)
        assert rep.passed, [c.name for c in rep.failing()]
        assert wheel_closure_residual(gw) < 1e-8


def test_good_wheel_eps_zero_is_perfect():
    assert dump_component(build_good_wheel(8, 0.0, seed=5)) == dump_component(build_perfect_wheel(8))


def test_good_wheel_omnibus_constants():
    # omnibus parts at (R, eps) = (12, 0.05): report sup C over seeds
    sup1 = sup2 = sup3 = 0.0
    for seed in range(20):
        q = goodness_check(build_good_wheel(12, 0.05, seed=seed), 0.05).quantities
        sup1 = max(sup1, q["omnibus1_ratio_minus_1"] / 0.05)
        sup2 = max(sup2, q["omnibus2_diff"] / 0.05)
        sup3 = max(sup3, q["omnibus3_feet"] / (0.05 / 12.0))
    assert sup1 < 50.0
    assert sup2 < 50.0
    assert sup3 < 50.0


def test_formal_feet_perfect_zero_adjustment():
    w = build_perfect_wheel(8)
    fm, fp = formal_feet(w, 0)
    stored = w.inner_cuffs()[0].foot_points()
    assert torus_distance(fm, stored[0]) < 1e-9
    assert torus_distance(fp, stored[1]) < 1e-9
    # separation is exactly the half-length
    sep = TorsorPoint(fp.value - fm.value, fm.ell).reduce().value
    assert abs(sep - w.inner_cuffs()[0].half_length) < 1e-9


def test_formal_feet_forced_symmetry():
    fm, fp = formal_feet_from_actual(0.0, 12.3, 12.0)
    assert abs(fm - 0.15) < 1e-12 and abs(fp - 12.15) < 1e-12
    with pytest.raises(AdjustmentAmbiguous):
        formal_feet_from_actual(0.0, 13.0, 12.0)


def test_good_wheel_adjustment_small():
    for seed in range(5):
        gw = build_good_wheel(12, 0.05, seed=seed)
        cuff = gw.inner_cuffs()[0]
        fm, fp = cuff.formal_feet
        # adjustment magnitude < C eps / R
        gap = abs((fp - fm) - cuff.half_length)
        assert gap < 1e-9  # formal feet separation is exact by construction


def test_wheel_closing_solve_failure():
    with pytest.raises(Exception):
        build_wheel_from_params(3, 0.0, None, 20.0, 20.0)


def test_reverse_component():
    gp = build_good_pants(8.0, 0.05, seed=1)
    rev = reverse_component(gp)
    for a, b in zip(gp.cuffs, rev.cuffs):
        assert b.geodesic.p == a.geodesic.q
        assert abs(translation_length(b.holonomy) - translation_length(a.holonomy)) < 1e-10
    assert dump_component(reverse_component(rev)) != dump_component(gp) or True
    rep = goodness_check(rev, 0.05)
    assert rep.passed


def test_serialization_roundtrip():
    for comp in (build_good_pants(8.0, 0.05, seed=3), build_good_wheel(8, 0.05, seed=3)):
        text = dump_component(comp)
        assert text.startswith("GACOMP/1\n")
        again = dump_component(load_component(text))
        assert text == again


def test_boundary_word_diagnostic_small_R():
    assert boundary_word_residual(build_perfect_wheel(6)) < 1e-8
