import cmath
import math
import random

import pytest

from gasm.moebius import (
    BASE_FRAME,
    Degenerate,
    Frame,
    J_FLIP,
    MarkedGeodesic,
    MoebiusMap,
    NotLoxodromic,
    NotOrthogonal,
    SharedEndpoint,
    TorsorPoint,
    X,
    common_orthogonal,
    complex_distance,
    foot_coordinate,
    frame_delta,
    frame_distance,
    geodesic_between_points,
    loxodromic_about,
    torus_distance,
    translation_length,
)

AXIS = MarkedGeodesic.axis(0.0, None)


def random_geodesic(rng):
    while True:
        p = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(p - q) > 0.1:
            return MarkedGeodesic.axis(p, q)


def test_composition_associative():
    # bounded geometry steps (translation + turn), as in the polygon walks
    from gasm.moebius import E

    rng = random.Random(0)
    ms = [
        X(complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))) @ E(rng.uniform(-2, 2))
        for _ in range(100)
    ]
    # normalizing after every composition keeps the determinant pinned
    left = ms[0]
    for m in ms[1:]:
        prod = left @ m
        left = MoebiusMap.from_entries(prod.a, prod.b, prod.c, prod.d)
        assert abs(left.det - 1.0) < 1e-12
    # associativity of the raw products to accumulated tolerance
    left = ms[0]
    for m in ms[1:]:
        left = left @ m
    right = ms[-1]
    for m in reversed(ms[:-1]):
        right = m @ right
    scale = max(abs(right.a), abs(right.b), abs(right.c), abs(right.d))
    for x, y in ((left.a, right.a), (left.b, right.b), (left.c, right.c), (left.d, right.d)):
        assert abs(x - y) < 1e-10 * scale


def test_complex_distance_orthogonal_intersection():
    d = complex_distance(AXIS, MarkedGeodesic.axis(-1.0, 1.0))
    assert abs(d.real) < 1e-12
    assert abs(abs(d.imag) - math.pi / 2) < 1e-12


def test_complex_distance_cross_ratio_form():
    # cosh(d + i theta) = (1 + z^2)/(1 - z^2) with endpoints (1/z, z); z = i
    d = complex_distance(AXIS, MarkedGeodesic.axis(-1j, 1j))
    assert abs(cmath.cosh(d)) < 1e-12
    assert abs(abs(d.imag) - math.pi / 2) < 1e-12


def test_complex_distance_disjoint():
    # normalize axis(1,2) by z -> z/sqrt(2) into the (1/z0, z0) form, z0 = sqrt 2,
    # then (1 + z0^2)/(1 - z0^2) = -3; unsigned distance arccosh(3)
    d = complex_distance(AXIS, MarkedGeodesic.axis(1.0, 2.0))
    assert abs(d.real - math.acosh(3.0)) < 1e-12
    assert abs(abs(d.imag) - math.pi) < 1e-12
    d2 = complex_distance(AXIS, MarkedGeodesic.axis(2.0, 1.0))
    assert abs(d2.real - math.acosh(3.0)) < 1e-12
    assert abs(d2.imag) < 1e-12


def test_complex_distance_shared_endpoint():
    with pytest.raises(SharedEndpoint):
        complex_distance(AXIS, MarkedGeodesic.axis(0.0, 1.0))


def test_cross_ratio_residual_bulk():
    # |cosh(d) - (1+z^2)/(1-z^2)| after normalizing to the (1/z, z) form
    rng = random.Random(1)
    checked = 0
    while checked < 10_000:
        g1 = random_geodesic(rng)
        g2 = random_geodesic(rng)
        try:
            d = complex_distance(g1, g2)
        except (SharedEndpoint, Degenerate):
            continue
        t = g1.normalizer()
        u, v = t(g2.p), t(g2.q)
        z = cmath.sqrt(v / u)
        ref = (1.0 + z * z) / (1.0 - z * z)
        assert abs(cmath.cosh(d) - ref) < 1e-8 * max(1.0, abs(ref))
        checked += 1


def test_complex_distance_symmetry():
    # d(g1,g2) and d(g2,g1) agree up to conjugation/negation of the angle
    rng = random.Random(2)
    for _ in range(1000):
        g1, g2 = random_geodesic(rng), random_geodesic(rng)
        try:
            d12 = complex_distance(g1, g2)
            d21 = complex_distance(g2, g1)
        except (SharedEndpoint, Degenerate):
            continue
        assert abs(d12.real - d21.real) < 1e-9
        assert min(
            abs(d12.imag - d21.imag), abs(d12.imag + d21.imag),
            abs(abs(d12.imag) - math.pi) + abs(abs(d21.imag) - math.pi),
        ) < 1e-9


def test_common_orthogonal_explicit():
    co = common_orthogonal(AXIS, MarkedGeodesic.axis(1.0, 2.0))
    # fixed-point set of z -> 2/z
    r = math.sqrt(2.0)
    assert abs(co.p + r) < 1e-12 and abs(co.q - r) < 1e-12


def test_common_orthogonal_concentric():
    co = common_orthogonal(MarkedGeodesic.axis(-1.0, 1.0), MarkedGeodesic.axis(-4.0, 4.0))
    assert abs(co.p) < 1e-12 and co.q is None


def test_common_orthogonal_perpendicular_and_oriented():
    rng = random.Random(3)
    for _ in range(200):
        g1, g2 = random_geodesic(rng), random_geodesic(rng)
        try:
            if complex_distance(g1, g2).real < 0.05:
                continue
            co = common_orthogonal(g1, g2)
        except (SharedEndpoint, Degenerate):
            continue
        for g in (g1, g2):
            d = complex_distance(co, g)
            assert d.real < 1e-9
            assert abs(abs(d.imag) - math.pi / 2) < 1e-9
        # oriented from g1 to g2: feet appear in increasing height order
        s = co.normalizer()
        r1 = 0.5 * abs(s(g1.p) - s(g1.q))
        r2 = 0.5 * abs(s(g2.p) - s(g2.q))
        assert r2 > r1


def test_translation_length_normal_forms():
    assert abs(translation_length(X(1.7)) - 1.7) < 1e-12
    got = translation_length(X(2.2 + 0.4j))
    assert abs(got - (2.2 + 0.4j)) < 1e-12
    with pytest.raises(NotLoxodromic):
        translation_length(MoebiusMap(1.0, 1.0, 0.0, 1.0))  # parabolic
    with pytest.raises(NotLoxodromic):
        translation_length(MoebiusMap.from_entries(math.cos(0.3), -math.sin(0.3), math.sin(0.3), math.cos(0.3)))


def test_translation_length_conjugation_invariant():
    rng = random.Random(4)
    ell = 1.3 + 0.2j
    for _ in range(100):
        g = MoebiusMap.from_entries(
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            1.0,
        )
        got = translation_length(g @ X(ell) @ g.inverse())
        assert abs(got - ell) < 1e-10


def test_foot_coordinate_base():
    assert abs(foot_coordinate(AXIS, MarkedGeodesic.axis(-1.0, 1.0)).value) < 1e-12


def test_foot_coordinate_height_ratio():
    # the common orthogonal to axis(a, 2a) meets the vertical axis at
    # height sqrt(2)|a|; the real part is the log of the height ratio
    a = math.e ** 2
    co = common_orthogonal(AXIS, MarkedGeodesic.axis(a, 2 * a))
    v = foot_coordinate(AXIS, co)
    assert abs(v.value.real - (2.0 + 0.5 * math.log(2.0))) < 1e-10
    rng = random.Random(5)
    for _ in range(50):
        g = random_geodesic(rng)
        try:
            co = common_orthogonal(AXIS, g)
        except Exception:
            continue
        v = foot_coordinate(AXIS, co)
        s = co.normalizer()
        # foot height equals the semicircle radius after normalizing
        h = 0.5 * abs(s(AXIS.p) - s(AXIS.q)) if s(AXIS.q) is not None else None
        w = cmath.sqrt(s(AXIS.p) * 0 + 1)  # placeholder to keep branch simple
        base_height = 1.0
        foot_height = math.exp(v.value.real) * base_height
        # re-derive the foot height directly: the orthogonal's crossing point
        t2 = AXIS.normalizer()
        p2, q2 = t2(co.p), t2(co.q)
        assert abs(foot_height - abs(q2)) < 1e-9 * max(1.0, abs(q2))


def test_foot_coordinate_rotation_equivariance():
    eta = MarkedGeodesic.axis(-1.0, 1.0)
    for phi in (0.3, -0.9, 2.0):
        rot = X(1j * phi)
        v = foot_coordinate(AXIS, eta.transported(rot))
        assert abs(v.value - 1j * phi) < 1e-12


def test_foot_coordinate_rejects_non_orthogonal():
    with pytest.raises(NotOrthogonal):
        foot_coordinate(AXIS, MarkedGeodesic.axis(1.0, 2.0))


def test_frame_delta_identity_and_cocycle():
    rng = random.Random(6)
    frames = [
        Frame(MoebiusMap.from_entries(
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            rng.gauss(0, 1) + 1j * rng.gauss(0, 1),
            1.0,
        ))
        for _ in range(30)
    ]
    for u in frames[:5]:
        assert frame_distance(u, u) < 1e-12
    for u, v, w in zip(frames, frames[1:], frames[2:]):
        lhs = frame_delta(u, w)
        rhs = frame_delta(u, v) @ frame_delta(v, w)
        assert max(abs(lhs.a - rhs.a), abs(lhs.b - rhs.b), abs(lhs.c - rhs.c), abs(lhs.d - rhs.d)) < 1e-10


def test_frame_distance_translation_formula():
    for t in (0.1, 0.5, 1.2, 3.0):
        u = BASE_FRAME
        v = Frame(X(t))
        pred = 2.0 * math.sqrt(2.0) * abs(math.sinh(t / 4.0)) * math.sqrt(math.cosh(t / 2.0))
        assert abs(frame_distance(u, v) - pred) < 1e-10
    ds = [frame_distance(BASE_FRAME, Frame(X(t))) for t in (0.1, 0.2, 0.5, 1.0, 2.0)]
    assert ds == sorted(ds)


def test_frame_distance_left_invariant():
    rng = random.Random(7)
    g = MoebiusMap.from_entries(1.5, 0.3 + 0.4j, -0.2j, 1.0)
    for _ in range(50):
        u = Frame(MoebiusMap.from_entries(rng.gauss(0, 1) + 0.1j, rng.gauss(0, 1), rng.gauss(0, 1), 1.0))
        v = Frame(MoebiusMap.from_entries(rng.gauss(0, 1) - 0.2j, rng.gauss(0, 1), rng.gauss(0, 1), 1.0))
        d0 = frame_distance(u, v)
        d1 = frame_distance(Frame(g @ u.map), Frame(g @ v.map))
        assert abs(d0 - d1) < 1e-9 * max(1.0, d0)


def test_torsor_reduce_idempotent():
    rng = random.Random(8)
    for _ in range(500):
        ell = complex(rng.uniform(0.5, 20.0), rng.uniform(-0.3, 0.3))
        p = TorsorPoint(complex(rng.uniform(-100, 100), rng.uniform(-50, 50)), ell)
        r1 = p.reduce()
        r2 = r1.reduce()
        assert r1.value == r2.value
        assert 0.0 <= r1.value.real < ell.real
        assert -math.pi < r1.value.imag <= math.pi


def test_torus_distance_metric():
    ell = 12.0 + 0.01j
    rng = random.Random(9)
    pts = [TorsorPoint(complex(rng.uniform(0, 12), rng.uniform(-3, 3)), ell) for _ in range(40)]
    for p in pts[:10]:
        for q in pts[:10]:
            assert abs(torus_distance(p, q) - torus_distance(q, p)) < 1e-12
    for p, q, r in zip(pts, pts[1:], pts[2:]):
        assert torus_distance(p, r) <= torus_distance(p, q) + torus_distance(q, r) + 1e-12
    # wrap-around
    assert torus_distance(TorsorPoint(0.05, ell), TorsorPoint(11.99, ell)) < 0.1


def test_marked_geodesic_reverse():
    g = MarkedGeodesic.axis(1.0 + 1j, -2.0)
    r = g.reverse()
    assert r.p == g.q and r.q == g.p
    assert frame_distance(g.frame, g.reverse().reverse().frame) < 1e-12
    # base point is preserved
    b0, b1 = g.frame.basepoint(), r.frame.basepoint()
    assert max(abs(b0[i] - b1[i]) for i in range(3)) < 1e-12


def test_base_frame_on_geodesic():
    # basepoint of a marked geodesic lies on it: normalized height check
    rng = random.Random(10)
    for _ in range(100):
        g = random_geodesic(rng)
        x, y, t = g.frame.basepoint()
        z = complex(x, y)
        c = 0.5 * (g.p + g.q)
        r = 0.5 * abs(g.p - g.q)
        assert abs(abs(z - c) ** 2 + t * t - r * r) < 1e-9 * max(1.0, r * r)


def test_geodesic_between_points():
    p = (0.3, -0.2, 0.7)
    q = (1.5, 0.4, 1.1)
    g = geodesic_between_points(p, q)
    for pt in (p, q):
        z = complex(pt[0], pt[1])
        c = 0.5 * (g.p + g.q)
        r = 0.5 * abs(g.p - g.q)
        assert abs(abs(z - c) ** 2 + pt[2] ** 2 - r * r) < 1e-9
