"""Distortion measurement and the appendix-style estimate suites.

Covers: frame-pair distortion profiles between a good development and its
perfect model, limit-set sampling with circle fits, quasisymmetry and
Holder diagnostics of boundary maps, operator-norm bounds for products of
perturbed matrix exponentials, linear-sequence local-to-global checks, and
the dihedral-angle lemma.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .assembly import DevelopedAssembly, ComplianceMap
from .moebius import (
    Frame,
    GeometryError,
    IDENTITY,
    MarkedGeodesic,
    MoebiusMap,
    X,
    YT,
    reduce_angle,
)

# Cayley-type root placement: maps the real line (the Fuchsian limit set of
# the component builders) onto the unit circle, keeping developments bounded
CAYLEY = MoebiusMap.from_entries(1.0, -1j, 1.0, 1j)

ROT_HALF = MoebiusMap(1j, 0.0, 0.0, -1j)


class NoPairsFound(GeometryError):
    pass


class InsufficientSamples(GeometryError):
    pass


class HypothesisViolated(GeometryError):
    pass


def dist_isom(g: MoebiusMap, h: MoebiusMap) -> float:
    """Left-invariant metric between isometries (Frobenius of the quotient)."""
    return (g.inverse() @ h).frobenius_from_identity()


def opnorm(m) -> float:
    """Exact operator norm of a 2x2 complex matrix via singular values."""
    a, b, c, d = m
    t = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    det = abs(a * d - b * c) ** 2
    disc = max(t * t - 4.0 * det, 0.0)
    return math.sqrt(0.5 * (t + math.sqrt(disc)))


def opnorm_map(m: MoebiusMap) -> float:
    return opnorm((m.a, m.b, m.c, m.d))


# ---------------------------------------------------------------------------
# distortion profiles


@dataclass
class DistortionProfile:
    D: float
    samples: list  # (pair distance, distortion)

    @property
    def sup(self):
        return max((d for _, d in self.samples), default=0.0)

    def quantile(self, q):
        if not self.samples:
            return 0.0
        vals = sorted(d for _, d in self.samples)
        return vals[min(len(vals) - 1, int(q * len(vals)))]


def _boundary_frames(dev: DevelopedAssembly, per_cuff: int):
    """Frames along every placed cuff, tagged by (node, cuff, coordinate)."""
    out = []
    for pc in dev.nodes:
        comp = dev.assembly.components[pc.comp]
        for j, cuff in enumerate(comp.cuffs):
            L = cuff.length.real
            coords = [complex(f) for f in cuff.formal_feet]
            coords += [complex(k * L / per_cuff, 0.0) for k in range(per_cuff)]
            placed = cuff.geodesic.transported(pc.placement)
            for u in coords:
                out.append(((pc.node, j), u, placed.frame_at(u)))
    return out


def distortion_profile(
    good: DevelopedAssembly,
    perfect: DevelopedAssembly,
    e: ComplianceMap,
    D: float,
    n_samples: int = 2000,
    seed: int = 0,
    per_cuff: int = 6,
) -> DistortionProfile:
    """Sample boundary-frame pairs of the perfect development within
    distance D and record d(u -> v, e(u) -> e(v)) on the good side.

    The developments must share combinatorics (same node tree).
    """
    if len(good.nodes) != len(perfect.nodes):
        raise GeometryError("developments do not correspond combinatorially")
    perf_frames = _boundary_frames(perfect, per_cuff)
    good_nodes = {pc.node: pc for pc in good.nodes}
    rng = random.Random(seed)
    samples = []
    n_frames = len(perf_frames)
    attempts = 0
    max_attempts = 50 * n_samples
    while len(samples) < n_samples and attempts < max_attempts:
        attempts += 1
        (key1, u1, f1) = perf_frames[rng.randrange(n_frames)]
        (key2, u2, f2) = perf_frames[rng.randrange(n_frames)]
        delta_p = f1.map.inverse() @ f2.map
        dist = delta_p.frobenius_from_identity()
        if dist > D or (key1 == key2 and abs(u1 - u2) < 1e-12):
            continue
        g1 = _image_frame(good, e, key1, u1, good_nodes)
        g2 = _image_frame(good, e, key2, u2, good_nodes)
        delta_g = g1.map.inverse() @ g2.map
        samples.append((dist, dist_isom(delta_p, delta_g)))
    if not samples:
        raise NoPairsFound(f"no frame pairs within distance {D}")
    return DistortionProfile(D, samples)


def _image_frame(good, e, key, u, good_nodes):
    node, j = key
    pc = good_nodes[node]
    comp = good.assembly.components[pc.comp]
    corr = e.cuff_maps[(pc.comp, j)]
    placed = comp.cuffs[j].geodesic.transported(pc.placement)
    return placed.frame_at(corr(u))


# ---------------------------------------------------------------------------
# limit sets and circle fits


def limit_set(dev: DevelopedAssembly, resolution: float = 1e-9):
    """Endpoints of all placed boundary geodesics, deduplicated."""
    pts = []
    for _, _, g in dev.placed_cuffs():
        for z in (g.p, g.q):
            if z is not None:
                pts.append(z)
    seen = {}
    for z in pts:
        key = (round(z.real / resolution), round(z.imag / resolution))
        seen.setdefault(key, z)
    return list(seen.values())


def circle_fit(points):
    """Least-squares circle through a point cloud.

    Returns (center, radius, max residual) where the residual of a point is
    | |z - c| - r |.  Linear (Kasa) fit.
    """
    if len(points) < 3:
        raise InsufficientSamples("need at least 3 points for a circle fit")
    z = np.asarray(points, dtype=complex)
    x, y = z.real, z.imag
    A = np.column_stack([2.0 * x, 2.0 * y, np.ones_like(x)])
    b = x * x + y * y
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    cx, cy, t = sol
    r = math.sqrt(max(t + cx * cx + cy * cy, 0.0))
    c = complex(cx, cy)
    res = np.abs(np.abs(z - c) - r)
    return c, r, float(res.max())


# ---------------------------------------------------------------------------
# boundary map samples, quasisymmetry, Holder


@dataclass
class BoundaryMapSample:
    """Pairs (point on the reference boundary, image point).

    ``reference`` is "circle" (unit circle) or "line" (R + {inf}); points at
    infinity are None.
    """

    pairs: list
    reference: str = "circle"


def boundary_map_sample(perfect: DevelopedAssembly, good: DevelopedAssembly) -> BoundaryMapSample:
    """Corresponding geodesic endpoints of the two developments."""
    if len(good.nodes) != len(perfect.nodes):
        raise GeometryError("developments do not correspond combinatorially")
    pairs = []
    pc = {p.node: p for p in perfect.nodes}
    gc = {p.node: p for p in good.nodes}
    for node in pc:
        comp_p = perfect.assembly.components[pc[node].comp]
        comp_g = good.assembly.components[gc[node].comp]
        for j in range(len(comp_p.cuffs)):
            gp = comp_p.cuffs[j].geodesic.transported(pc[node].placement)
            gg = comp_g.cuffs[j].geodesic.transported(gc[node].placement)
            pairs.append((gp.p, gg.p))
            pairs.append((gp.q, gg.q))
    dedup = {}
    for zp, zg in pairs:
        if zp is None:
            key = None
        else:
            key = (round(zp.real * 1e9), round(zp.imag * 1e9))
        dedup.setdefault(key, (zp, zg))
    return BoundaryMapSample(list(dedup.values()), "circle")


def _normalize_to_standard(a, b, c, d):
    """Image of d under the Moebius sending (a, b, c) -> (-1, 0, inf)."""

    def cr(z):
        # m(z) = -((z - b)(a - c)) / ((z - c)(a - b)), with None = infinity
        if z is None:
            num = a - c
            den = a - b
            return -num / den
        if c is None:
            return -(z - b) / (a - b)
        if a is None:
            return -(z - b) / (z - c)
        if b is None:
            raise GeometryError("triple base point at infinity")
        return -((z - b) * (a - c)) / ((z - c) * (a - b))

    return cr(d)


def quasisymmetry_estimate(s: BoundaryMapSample, n_rotations: int = 1000) -> float:
    """Worst cross-ratio distortion of standard quadruples, >= 1.

    A standard quadruple is a symmetric triple (x-, x, x+) plus a far
    point; both quadruples are normalized by the Moebius map sending the
    triple's outer points and the far point to (-1, 0, inf), and the
    estimate is the worst modulus ratio of the images of x+.
    """
    pairs = [p for p in s.pairs]
    if len(pairs) < 4:
        raise InsufficientSamples("need at least 4 boundary points")
    if s.reference == "circle":
        pairs = [p for p in pairs if p[0] is not None]
        order = sorted(range(len(pairs)), key=lambda i: cmath.phase(pairs[i][0]))
    else:
        finite = [i for i in range(len(pairs)) if pairs[i][0] is not None]
        order = sorted(finite, key=lambda i: pairs[i][0].real)
        inf_idx = [i for i in range(len(pairs)) if pairs[i][0] is None]
    n = len(order)
    est = 1.0
    steps = max(1, n // max(1, min(n_rotations, n)))
    ks = [1, max(1, n // 8)]
    for start in range(0, n, steps):
        for k in ks:
            i0 = order[(start - k) % n]
            i1 = order[start % n]
            i2 = order[(start + k) % n]
            if s.reference == "circle":
                ifar = order[(start + n // 2) % n]
            else:
                if not inf_idx:
                    continue
                ifar = inf_idx[0]
            idx = [i0, i1, i2, ifar]
            if len(set(idx)) < 4:
                continue
            zs = [pairs[i][0] for i in idx]
            ws = [pairs[i][1] for i in idx]
            try:
                sp = _normalize_to_standard(zs[0], zs[1], zs[3], zs[2])
                sg = _normalize_to_standard(ws[0], ws[1], ws[3], ws[2])
            except (ZeroDivisionError, GeometryError):
                continue
            if sp is None or sg is None or abs(sp) < 1e-12 or abs(sg) < 1e-12:
                continue
            ratio = abs(sg) / abs(sp)
            est = max(est, ratio, 1.0 / ratio)
    return est


@dataclass
class HolderReport:
    K: float
    n_pairs: int
    violations: list
    min_separated_image_distance: float

    @property
    def passed(self):
        return not self.violations


def holder_check(s: BoundaryMapSample, K: float, injectivity_gap: float = 0.5) -> HolderReport:
    """Check |f(z0) - f(z1)| < 64 |z0 - z1|^(1/K) on the sampled circle.

    Images are rescaled so their diameter is at most 2 first.  Also probes
    uniform injectivity: reports the smallest image distance over pairs
    whose sources are at least ``injectivity_gap`` apart; a collision there
    (below 1e-6) is recorded as a violation of injectivity.
    """
    pts = [(z, w) for z, w in s.pairs if z is not None and w is not None]
    if len(pts) < 2:
        raise InsufficientSamples("need at least 2 finite pairs")
    ws = [w for _, w in pts]
    diam = max(abs(w1 - w2) for w1 in ws[:200] for w2 in ws[:200])
    scale = 2.0 / diam if diam > 2.0 else 1.0
    violations = []
    min_sep = float("inf")
    n = len(pts)
    for i in range(n):
        z0, w0 = pts[i]
        for j in range(i + 1, n):
            z1, w1 = pts[j]
            dz = abs(z0 - z1)
            dw = abs(w0 - w1) * scale
            if dz > 1e-15 and dw >= 64.0 * dz ** (1.0 / K):
                violations.append((z0, z1, dw, 64.0 * dz ** (1.0 / K)))
            if dz >= injectivity_gap:
                min_sep = min(min_sep, dw)
    if min_sep < 1e-6:
        violations.append(("injectivity", min_sep))
    return HolderReport(K, n * (n - 1) // 2, violations, min_sep)


# ---------------------------------------------------------------------------
# matrix estimate suite (products of perturbed exponentials)


def _factor(a, b):
    """Y(b) X(a) Y(-b) in closed form: cosh(a/2) I + sinh(a/2) M(b)."""
    ch, sh = cmath.cosh(0.5 * a), cmath.sinh(0.5 * a)
    cb, sb = cmath.cosh(b), cmath.sinh(b)
    return (
        ch + sh * cb,
        -sh * sb,
        sh * sb,
        ch - sh * cb,
    )


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _draw_instance(rng, n_max, A, B, eps):
    m = rng.randint(1, n_max)
    bs, raw = [], []
    for _ in range(m):
        mag = rng.uniform(0.0, 1.5)
        bs.append(cmath.rect(mag, rng.uniform(-math.pi, math.pi)))
        raw.append(rng.uniform(0.1, 1.0))
    total = sum(raw)
    budget = B * rng.uniform(0.5, 1.0)
    cs = [min(budget * r / total, 0.999 * A / (2.0 * math.e)) for r in raw]
    a_s = [
        cmath.rect(c * math.exp(-abs(b)), rng.uniform(-math.pi, math.pi))
        for c, b in zip(cs, bs)
    ]
    a_p = [a * (1.0 + 0.999 * eps * rng.uniform(0.0, 1.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))) for a in a_s]
    b_p = [b + 0.999 * eps * rng.uniform(0.0, 1.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi)) for b in bs]
    # verify the hypotheses hold as drawn
    assert sum(abs(a) * math.exp(abs(b)) for a, b in zip(a_s, bs)) <= B + 1e-12
    for a, b, ap, bp in zip(a_s, bs, a_p, b_p):
        assert 2.0 * abs(a) * math.exp(abs(b) + 1.0) <= A + 1e-12
        assert abs(b - bp) < eps and abs(a - ap) < eps * abs(a) + 1e-18
    return a_s, bs, a_p, b_p


def _product_difference(a_s, bs, a_p, b_p):
    P = (1.0, 0.0, 0.0, 1.0)
    Q = (1.0, 0.0, 0.0, 1.0)
    for a, b, ap, bp in zip(a_s, bs, a_p, b_p):
        P = _mul(P, _factor(a, b))
        Q = _mul(Q, _factor(ap, bp))
    return opnorm(tuple(p - q for p, q in zip(P, Q)))


@dataclass
class MatrixBoundReport:
    n_instances: int
    bound: float
    max_measured: float
    max_ratio: float
    violations: int
    lemma_violations: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.violations == 0 and all(v == 0 for v in self.lemma_violations.values())


def matrix_bound_suite(
    n_instances: int,
    n_max: int,
    A: float,
    B: float,
    eps: float,
    seed: int = 0,
    lemma_instances: int = 1000,
) -> MatrixBoundReport:
    """Product-perturbation bound plus the four supporting lemma bounds.

    Main bound: || prod Y(b)X(a)Y(-b) - prod Y(b')X(a')Y(-b') ||
    <= 12 e^{A+2B} B eps over admissible random instances.
    """
    if eps >= min(1.0 / A, 1.0 / math.e):
        raise HypothesisViolated("need eps < min(1/A, 1/e)")
    rng = random.Random(seed)
    bound = 12.0 * math.exp(A + 2.0 * B) * B * eps
    worst = 0.0
    violations = 0
    for _ in range(n_instances):
        inst = _draw_instance(rng, n_max, A, B, eps)
        diff = _product_difference(*inst)
        worst = max(worst, diff)
        if diff > bound:
            violations += 1
    lemma_violations = {
        "badY": _lemma_badY(rng, lemma_instances),
        "UA": _lemma_UA(rng, lemma_instances),
        "change-b": _lemma_change_b(rng, lemma_instances),
        "change-a": _lemma_change_a(rng, lemma_instances),
    }
    return MatrixBoundReport(
        n_instances, bound, worst, worst / bound if bound else 0.0, violations, lemma_violations
    )


def _rand_c(rng, scale=1.0):
    return cmath.rect(rng.uniform(0, scale), rng.uniform(-math.pi, math.pi))


def _lemma_badY(rng, n):
    """|| e^{b ad_Y} aX || <= |a| e^{|b|}, and the explicit expansion."""
    bad = 0
    for _ in range(n):
        a, b = _rand_c(rng, 2.0), _rand_c(rng, 2.0)
        cb, sb = cmath.cosh(b), cmath.sinh(b)
        m = (0.5 * a * cb, -0.5 * a * sb, 0.5 * a * sb, -0.5 * a * cb)
        # conjugation identity: Y(b) (aX) Y(-b) equals the expansion
        yb = (cmath.cosh(0.5 * b), cmath.sinh(0.5 * b), cmath.sinh(0.5 * b), cmath.cosh(0.5 * b))
        ym = (cmath.cosh(0.5 * b), -cmath.sinh(0.5 * b), -cmath.sinh(0.5 * b), cmath.cosh(0.5 * b))
        ax = (0.5 * a, 0.0, 0.0, -0.5 * a)
        conj = _mul(_mul(yb, ax), ym)
        if opnorm(tuple(x - y for x, y in zip(conj, m))) > 1e-9 * max(1.0, opnorm(m)):
            bad += 1
            continue
        if opnorm(m) > abs(a) * math.exp(abs(b)) + 1e-12:
            bad += 1
    return bad


def _lemma_UA(rng, n):
    """|| U - A U A^-1 || <= 2 ||U - 1|| ||A - 1|| ||A^-1||."""
    bad = 0
    eye = (1.0, 0.0, 0.0, 1.0)
    for _ in range(n):
        U = tuple(x + e for x, e in zip((_rand_c(rng), _rand_c(rng), _rand_c(rng), _rand_c(rng)), eye))
        A = tuple(x + e for x, e in zip((_rand_c(rng), _rand_c(rng), _rand_c(rng), _rand_c(rng)), eye))
        det = A[0] * A[3] - A[1] * A[2]
        if abs(det) < 1e-6:
            continue
        Ainv = (A[3] / det, -A[1] / det, -A[2] / det, A[0] / det)
        lhs = opnorm(tuple(u - v for u, v in zip(U, _mul(_mul(A, U), Ainv))))
        rhs = (
            2.0
            * opnorm(tuple(u - e for u, e in zip(U, eye)))
            * opnorm(tuple(a - e for a, e in zip(A, eye)))
            * opnorm(Ainv)
        )
        if lhs > rhs + 1e-12:
            bad += 1
    return bad


def _lemma_change_b(rng, n):
    """|| Y(b)X(a)Y(-b) - Y(b')X(a)Y(-b') || <= 10 e^A |a| e^{|b|} |b'-b|."""
    bad = 0
    for _ in range(n):
        a, b = _rand_c(rng, 0.5), _rand_c(rng, 1.5)
        bp = b + _rand_c(rng, 1.0)
        A = abs(a) * math.exp(abs(b))
        lhs = opnorm(tuple(x - y for x, y in zip(_factor(a, b), _factor(a, bp))))
        rhs = 10.0 * math.exp(A) * abs(a) * math.exp(abs(b)) * abs(bp - b)
        if lhs > rhs + 1e-12:
            bad += 1
    return bad


def _lemma_change_a(rng, n):
    """|| Y(b)X(a')Y(-b) - Y(b)X(a)Y(-b) || <= 2 e^{A+|b|} |a'-a|."""
    bad = 0
    for _ in range(n):
        a, b = _rand_c(rng, 0.5), _rand_c(rng, 1.5)
        da = _rand_c(rng, min(1.0, math.exp(-abs(b))))
        ap = a + da
        A = abs(a) * math.exp(abs(b))
        lhs = opnorm(tuple(x - y for x, y in zip(_factor(ap, b), _factor(a, b))))
        rhs = 2.0 * math.exp(A + abs(b)) * abs(ap - a)
        if lhs > rhs + 1e-12:
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# linear sequences of geodesics


@dataclass
class LinearSequenceReport:
    n: int
    D: float
    marching_bound_ok: bool
    homologous_ok: bool
    distortion_sup: float
    K_empirical: float


def _walk_sequence(us, vs):
    """Frames at the orthogeodesic feet of a (semi-)linear sequence.

    prefix[i] is the frame at the foot of eta_i on gamma_i; crossing uses
    translation along the normal direction and a half-turn so that feet map
    to negated feet.
    """
    prefixes = [IDENTITY]
    for i, u in enumerate(us):
        step = YT(u) @ ROT_HALF
        if i + 1 < len(us) + 1 and i < len(vs):
            step = step @ X(vs[i]) @ ROT_HALF
        prefixes.append(prefixes[-1] @ step)
    return prefixes


def _sequence_lines(us, vs):
    prefixes = _walk_sequence(us, vs)
    return [MarkedGeodesic.axis(0.0, None).transported(p) for p in prefixes], prefixes


def linear_sequence_check(R: float, B: float, eps: float, n: int, seed: int = 0) -> LinearSequenceReport:
    """Construct matched linear (H^2) and semi-linear (H^3) sequences and
    verify the homologous-point inequality, the marching bound, and the
    endpoint comparison map's distortion.
    """
    from .moebius import complex_distance, frame_distance

    rng = random.Random(seed)
    us = [math.exp(-0.5 * R) * math.exp(rng.uniform(-math.log(B), math.log(B))) for _ in range(n)]
    vs = [1.0] * (n - 1)
    us_p = [u * (1.0 + eps * rng.uniform(0, 1) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))) for u in us]
    vs_p = [v + (eps / R) * rng.uniform(0, 1) * cmath.exp(1j * rng.uniform(-math.pi, math.pi)) for v in vs]

    lines, prefixes = _sequence_lines(us, vs)
    lines_p, prefixes_p = _sequence_lines(us_p, vs_p)

    # consecutive distances re-measure to the drawn u_i
    for i in range(len(us)):
        d = complex_distance(lines[i], lines[i + 1])
        assert abs(d.real - us[i]) < 1e-9, (i, d, us[i])

    # homologous inequality: d(x_n, y) <= d(x_0, y)
    homologous_ok = True
    for _ in range(20):
        c = rng.uniform(-2.0, 2.0)
        x0 = Frame(prefixes[0].inverse() @ prefixes[0] @ X(c))  # frame on gamma_0
        x0 = Frame(X(c))
        xn = Frame(prefixes[-1] @ X(c))
        y = Frame(prefixes[-1] @ X(rng.uniform(-2.0, 2.0)))
        d0 = _hyperbolic_distance(x0, y)
        dn = _hyperbolic_distance(xn, y)
        if dn > d0 + 1e-9:
            homologous_ok = False

    D = complex_distance(lines[0], lines[-1]).real

    # distortion of the endpoint comparison at frame-metric distance <= D;
    # compensate the marching shift so the sampled pairs are genuinely close
    distortion_sup = 0.0
    full = prefixes[-1]
    full_p = prefixes_p[-1]
    sigma = 2.0 * cmath.log(full.sign_normalized().a)
    D_frames = 5.0
    for _ in range(200):
        c1 = rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-0.5, 0.5)
        c2 = c1 - sigma + rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-0.5, 0.5)
        delta = X(-c1) @ full @ X(c2)
        delta_p = X(-c1) @ full_p @ X(c2)
        if delta.frobenius_from_identity() > D_frames:
            continue
        distortion_sup = max(distortion_sup, dist_isom(delta, delta_p))
    return LinearSequenceReport(
        n=n,
        D=D,
        marching_bound_ok=marching_bound_check(seed=seed, trials=50),
        homologous_ok=homologous_ok,
        distortion_sup=distortion_sup,
        K_empirical=distortion_sup / eps if eps > 0 else 0.0,
    )


def _hyperbolic_distance(u: Frame, v: Frame) -> float:
    (x1, y1, t1) = u.basepoint()
    (x2, y2, t2) = v.basepoint()
    q = ((x1 - x2) ** 2 + (y1 - y2) ** 2 + (t1 - t2) ** 2) / (2.0 * t1 * t2)
    return math.acosh(1.0 + q)


def marching_bound_check(seed: int = 0, trials: int = 1000) -> bool:
    """|sum v_i| <= D + 2 log D - log u_0 - log u_n + 3 on random sequences."""
    from .moebius import complex_distance

    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(2, 12)
        us = [rng.uniform(0.05, 1.0) for _ in range(n + 1)]
        vs = [rng.uniform(-2.0, 2.0) for _ in range(n)]
        lines, _ = _sequence_lines(us, vs)
        D = complex_distance(lines[0], lines[-1]).real
        if D < 1e-6:
            continue
        lhs = abs(sum(vs))
        rhs = D + 2.0 * math.log(D) - math.log(us[0]) - math.log(us[-1]) + 3.0
        if lhs > rhs + 1e-9:
            return False
    return True


def sequence_length_bound(D: float, R: float, B: float) -> float:
    """The n-bound for unit-spaced well-matched sequences:
    n < D + 2 log D + R + 2 log B + 3."""
    return D + 2.0 * math.log(D) + R + 2.0 * math.log(B) + 3.0


# ---------------------------------------------------------------------------
# dihedral lemma


@dataclass
class DihedralReport:
    d: float
    theta: float
    identity_residual: float
    max_dihedral: float
    bound: float

    @property
    def passed(self):
        return self.identity_residual < 1e-9 and self.max_dihedral <= self.bound + 1e-12


def dihedral_check(d: float, theta: float, n_samples: int = 41) -> DihedralReport:
    """Verify arg z = arg(sinh d + i sin theta) and the |theta|/d bound.

    Builds gamma = axis(0, inf) and gamma_1 = axis(1/z, z) with
    cosh(d + i theta) = (1 + z^2)/(1 - z^2); any plane through gamma and a
    point of gamma_1 makes dihedral angle at most |theta|/d with the plane
    through gamma and the common orthogonal.
    """
    if d <= 0 or abs(theta) > math.pi / 2:
        raise HypothesisViolated("need d > 0 and |theta| <= pi/2")
    q = cmath.cosh(complex(d, theta))
    z2 = (q - 1.0) / (q + 1.0)
    z = cmath.sqrt(z2)
    if z.real < 0:
        z = -z
    ident = abs(
        reduce_angle(cmath.phase(z) - cmath.phase(complex(math.sinh(d), math.sin(theta))))
    )
    g1 = MarkedGeodesic.axis(1.0 / z, z)
    worst = 0.0
    for k in range(n_samples):
        s = -6.0 + 12.0 * k / (n_samples - 1)
        x, y, t = g1.frame_at(s).basepoint()
        phi = abs(cmath.phase(complex(x, y)))
        worst = max(worst, min(phi, math.pi - phi))
    bound = abs(theta) / d
    return DihedralReport(d, theta, ident, worst, bound)
