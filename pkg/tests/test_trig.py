import cmath
import math
import random

import pytest

from gasm.trig import (
    Infeasible,
    bigon_asymptote,
    bigon_defect,
    bigon_length,
    bigon_length_closed_form,
    hexagon_cosine_residual,
    hexagon_sine_residual,
    hexagon_solve,
    pants_seam_length,
    pentagon_residual,
    pentagon_solve,
    regular_hexagon_side,
    remeasure_polygon,
)


def bisect(f, lo, hi, n=200):
    flo = f(lo)
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if f(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_regular_hexagon_side():
    # independent oracle: the self-dual side solves
    # cosh a sinh^2 a = cosh^2 a + cosh a
    f = lambda a: math.cosh(a) * math.sinh(a) ** 2 - math.cosh(a) ** 2 - math.cosh(a)
    a = bisect(f, 1.0, 2.0)
    assert abs(a - regular_hexagon_side()) < 1e-10
    assert abs(regular_hexagon_side() - math.acosh(2.0)) < 1e-14
    h = hexagon_solve(a, a, a)
    assert abs(h.A - a) < 1e-10 and abs(h.B - a) < 1e-10 and abs(h.C - a) < 1e-10


def test_alternating_pants_hexagon():
    # cosh A = cosh R / (cosh R - 1) for the (R, R, R) hexagon
    h = hexagon_solve(2.0, 2.0, 2.0)
    target = math.acosh(math.cosh(2.0) / (math.cosh(2.0) - 1.0))
    assert abs(h.A - target) < 1e-12
    assert abs(pants_seam_length(2.0) - target) < 1e-14


def test_hexagon_identities_random():
    rng = random.Random(11)
    for _ in range(300):
        a = complex(rng.uniform(0.3, 3.0), rng.uniform(-0.3, 0.3))
        b = complex(rng.uniform(0.3, 3.0), rng.uniform(-0.3, 0.3))
        c = complex(rng.uniform(0.3, 3.0), rng.uniform(-0.3, 0.3))
        h = hexagon_solve(a, b, c)
        assert hexagon_cosine_residual(h) < 1e-9 * math.cosh(3.0) ** 2
        assert hexagon_sine_residual(h) < 1e-9 * math.cosh(3.0)


def test_hexagon_constructive_remeasure():
    rng = random.Random(12)
    for _ in range(100):
        a = rng.uniform(0.5, 2.5)
        b = rng.uniform(0.5, 2.5)
        c = rng.uniform(0.5, 2.5)
        h = hexagon_solve(a, b, c)
        side_res, closure = remeasure_polygon(h.cyclic())
        assert side_res < 1e-8
        assert closure < 1e-8


def test_hexagon_constructive_remeasure_complex():
    rng = random.Random(13)
    for _ in range(100):
        sides = [complex(rng.uniform(0.5, 2.5), rng.uniform(-0.2, 0.2)) for _ in range(3)]
        h = hexagon_solve(*sides)
        side_res, closure = remeasure_polygon(h.cyclic())
        assert side_res < 1e-7
        assert closure < 1e-7


def test_pentagon_symmetric():
    # sinh^2 s = cosh e at b = c = 1
    p = pentagon_solve(b=1.0, c=1.0)
    assert abs(p.e - math.acosh(math.sinh(1.0) ** 2)) < 1e-12
    assert pentagon_residual(p) < 1e-12
    # second identity, symmetric case: a = d = arccoth(sqrt(cosh e))
    root = math.sqrt(math.cosh(p.e.real))
    target = 0.5 * math.log((root + 1.0) / (root - 1.0))
    assert abs(p.a - target) < 1e-10
    assert abs(p.a - p.d) < 1e-12


def feasible_pair(rng):
    # a real right-angled pentagon needs sinh x sinh y > 1 on adjacent sides
    while True:
        x, y = rng.uniform(0.6, 1.8), rng.uniform(0.6, 1.8)
        if math.sinh(x) * math.sinh(y) > 1.05:
            return x, y


def test_pentagon_all_adjacent_pairs():
    rng = random.Random(14)
    keys = ["a", "b", "c", "d", "e"]
    for _ in range(200):
        i = rng.randrange(5)
        x, y = feasible_pair(rng)
        kw = {keys[i]: x, keys[(i + 1) % 5]: y}
        p = pentagon_solve(**kw)
        assert pentagon_residual(p) < 1e-9
        for k, v in kw.items():
            assert abs(getattr(p, k) - v) < 1e-12


def test_pentagon_constructive_remeasure():
    rng = random.Random(15)
    for _ in range(100):
        b, c = feasible_pair(rng)
        p = pentagon_solve(b=b, c=c)
        side_res, closure = remeasure_polygon(p.cyclic())
        assert side_res < 1e-8
        assert closure < 1e-8


def test_pentagon_rejects_nonadjacent_or_infeasible():
    with pytest.raises(ValueError):
        pentagon_solve(a=1.0, c=1.0)
    with pytest.raises(Infeasible):
        pentagon_solve(b=0.1, c=0.1)  # sinh b sinh c < 1


def test_bigon_paper_estimate():
    # h(e1, e2) = e1 + e2 - 2 log 2 + O(e^{-min Re})
    got = bigon_length(6.0, 6.0)
    assert abs(got - (12.0 - 2.0 * math.log(2.0))) < 2e-2
    assert bigon_defect(12.0, 12.0) < math.exp(-10.0)


def test_bigon_exact_composition_matches_closed_form():
    rng = random.Random(16)
    for _ in range(200):
        e1 = complex(rng.uniform(0.5, 8.0), rng.uniform(-0.4, 0.4))
        e2 = complex(rng.uniform(0.5, 8.0), rng.uniform(-0.4, 0.4))
        got = bigon_length(e1, e2)
        ref = bigon_length_closed_form(e1, e2)
        assert abs(cmath.cosh(got / 2.0) - cmath.cosh(ref / 2.0)) < 1e-9 * abs(cmath.cosh(ref / 2.0))


def test_bigon_defect_decay():
    # the asymptote defect decays like e^{-min Re}
    d6 = bigon_defect(6.0, 6.0)
    d8 = bigon_defect(8.0, 8.0)
    d10 = bigon_defect(10.0, 10.0)
    assert d6 / d8 > 5.0
    assert d8 / d10 > 5.0


def test_bigon_reverse_lift_flag():
    # the flag offsets e1 by exactly i pi (the other solution component)
    base = bigon_length(6.0, 6.0, reverse_lift=False)
    flipped = bigon_length(6.0, 6.0, reverse_lift=True)
    ref = bigon_length_closed_form(6.0 + 1j * math.pi, 6.0)
    assert abs(cmath.cosh(flipped / 2.0) - cmath.cosh(ref / 2.0)) < 1e-9
    assert abs(base - flipped) > 0.5  # genuinely different component


def test_seam_asymptotics():
    # s ~ 2 e^{-R/2}: the scaled seam sits in [1.9, 2.1] by R = 14
    s = pants_seam_length(14.0)
    assert 1.9 < s * math.exp(7.0) < 2.1


def test_seam_matches_pants_construction():
    from gasm.components import build_perfect_pants
    from gasm.moebius import complex_distance

    p = build_perfect_pants(2.0)
    d = complex_distance(p.cuffs[0].geodesic, p.cuffs[1].geodesic)
    assert abs(d.real - pants_seam_length(2.0)) < 1e-8
