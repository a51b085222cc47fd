"""Core PSL(2,C) geometry in the upper half-space model of H^3.

Conventions used throughout the package:

* A point of H^3 is (x, y, t) with t > 0; the boundary is C-hat = C + {inf},
  where the point at infinity is represented by ``None``.
* The base frame sits at (0, 0, 1) with first vector pointing up the vertical
  axis (toward inf), second vector toward +x, third toward +y.
* ``X(v)`` translates along the vertical axis by the complex length v
  (real part: distance toward inf, imaginary part: rotation about the axis).
* Complex distances carry Re >= 0 and Im in (-pi, pi].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

_TOL = 1e-12


class GeometryError(Exception):
    pass


class SharedEndpoint(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class NotLoxodromic(GeometryError):
    pass


class NotOrthogonal(GeometryError):
    pass


class Intersecting(GeometryError):
    pass


def reduce_angle(x):
    """Reduce a real number into (-pi, pi]."""
    x = math.fmod(x, 2.0 * math.pi)
    if x > math.pi:
        x -= 2.0 * math.pi
    elif x <= -math.pi:
        x += 2.0 * math.pi
    return x


def acosh_c(z):
    """Principal arccosh: Re >= 0, Im in (-pi, pi]."""
    w = cmath.acosh(complex(z))
    if w.real < 0.0:
        w = -w
    return complex(w.real, reduce_angle(w.imag))


@dataclass(frozen=True)
class MoebiusMap:
    """Element of PSL(2,C) stored as a determinant-1 matrix [[a,b],[c,d]]."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_entries(cls, a, b, c, d):
        det = a * d - b * c
        if abs(det) < _TOL:
            raise Degenerate("matrix is singular")
        s = cmath.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def __matmul__(self, other):
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        """Act on C-hat; None stands for the point at infinity."""
        if z is None:
            if abs(self.c) < _TOL:
                return None
            return self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if abs(den) < _TOL * max(1.0, abs(num)):
            return None
        return num / den

    def sign_normalized(self):
        """The SL(2,C) lift with nonnegative real trace.

        Near-imaginary traces tiebreak on nonnegative imaginary trace; a
        trace near zero falls back to the first entry of largest modulus
        being in the right half plane.  Deterministic for any input.
        """
        t = self.trace
        if t.real > 1e-9:
            return self
        if t.real < -1e-9:
            return MoebiusMap(-self.a, -self.b, -self.c, -self.d)
        if t.imag > 1e-9:
            return self
        if t.imag < -1e-9:
            return MoebiusMap(-self.a, -self.b, -self.c, -self.d)
        for w in (self.a, self.b, self.c, self.d):
            if abs(w) > 1e-9:
                if w.real > 1e-12 or (abs(w.real) <= 1e-12 and w.imag > 0.0):
                    return self
                return MoebiusMap(-self.a, -self.b, -self.c, -self.d)
        return self

    def frobenius_from_identity(self):
        g = self.sign_normalized()
        return math.sqrt(
            abs(g.a - 1.0) ** 2 + abs(g.b) ** 2 + abs(g.c) ** 2 + abs(g.d - 1.0) ** 2
        )

    def apply_point(self, p):
        """Act on an interior point p = (x, y, t) of upper half-space."""
        x, y, t = p
        z = complex(x, y)
        u = self.a * z + self.b
        v = self.c * z + self.d
        den = abs(v) ** 2 + abs(self.c) ** 2 * t * t
        w = (u * v.conjugate() + self.a * self.c.conjugate() * t * t) / den
        return (w.real, w.imag, t / den)

    def apply_frame_vectors(self, p, vecs):
        """Push forward tangent vectors at p by the derivative of the action.

        Uses exact directional derivatives of apply_point; the action is an
        isometry so orthonormality is preserved up to rounding.
        """
        out = []
        x, y, t = p
        base = self.apply_point(p)
        h = 1e-7 * max(1.0, t)
        for v in vecs:
            q = (x + h * v[0], y + h * v[1], t + h * v[2])
            fq = self.apply_point(q)
            d = tuple((fq[i] - base[i]) / h for i in range(3))
            # renormalize in the hyperbolic metric (conformal factor 1/t)
            scale = base[2] / t
            d = tuple(di / scale for di in d)
            n = math.sqrt(sum(di * di for di in d))
            out.append(tuple(di / n for di in d))
        return out


IDENTITY = MoebiusMap(1.0, 0.0, 0.0, 1.0)

# half-turn about the geodesic (-1, 1): z -> 1/z
J_FLIP = MoebiusMap(0.0, 1j, 1j, 0.0)
# half-turn about the vertical axis (0, inf): z -> -z
HALF_TURN_AXIS = MoebiusMap(1j, 0.0, 0.0, -1j)


def X(v):
    """Translation by complex length v along the vertical axis (0, inf)."""
    e = cmath.exp(0.5 * complex(v))
    return MoebiusMap(e, 0.0, 0.0, 1.0 / e)


def YT(v):
    """Translation by complex length v along the geodesic (-1, 1), toward +1."""
    c = cmath.cosh(0.5 * complex(v))
    s = cmath.sinh(0.5 * complex(v))
    return MoebiusMap(c, s, s, c)


def E(psi):
    """Rotation fixing the base point (0,0,1) within the x-t plane by psi."""
    c = math.cos(0.5 * psi)
    s = math.sin(0.5 * psi)
    return MoebiusMap(c, s, -s, c)


@dataclass(frozen=True)
class Frame:
    """An orthonormal 3-frame, encoded as the isometry carrying the base frame."""

    map: MoebiusMap

    def basepoint(self):
        return self.map.apply_point((0.0, 0.0, 1.0))

    def vectors(self):
        """The three frame vectors at the basepoint (hyperbolic-unit)."""
        return self.map.apply_frame_vectors(
            (0.0, 0.0, 1.0),
            [(0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)],
        )


BASE_FRAME = Frame(IDENTITY)


def frame_delta(u: Frame, v: Frame) -> MoebiusMap:
    """The g with u.map o g = v.map (relative position of v seen from u)."""
    return u.map.inverse() @ v.map


def frame_distance(u: Frame, v: Frame) -> float:
    """Left-invariant metric: Frobenius norm of (sign-normalized delta - I)."""
    return frame_delta(u, v).frobenius_from_identity()


@dataclass(frozen=True)
class TorsorPoint:
    """A point of the normal-bundle torsor N^1, as a coordinate in C.

    ``ell`` is the complex period of the underlying closed geodesic (the
    translation length, or the half-length when working on N^1(sqrt));
    ``None`` for a non-closed geodesic, where only 2*pi*i is a period.
    """

    value: complex
    ell: complex | None = None

    def reduce(self):
        v = complex(self.value)
        ell = self.ell
        if ell is not None:
            re = ell.real
            if re <= 0:
                raise Degenerate("torsor period must have positive real part")
            k = math.floor(v.real / re)
            v -= k * ell
            if v.real >= re:
                v -= ell
            if v.real < 0.0:
                v += ell
        m = math.floor((v.imag + math.pi) / (2.0 * math.pi))
        v -= complex(0.0, 2.0 * math.pi * m)
        if v.imag > math.pi:
            v -= 2j * math.pi
        if v.imag <= -math.pi:
            v += 2j * math.pi
        return TorsorPoint(v, ell)

    def __add__(self, w):
        return TorsorPoint(self.value + complex(w), self.ell)

    def __sub__(self, other):
        if isinstance(other, TorsorPoint):
            return TorsorPoint(self.value - other.value, self.ell)
        return TorsorPoint(self.value - complex(other), self.ell)


def torus_distance(p: TorsorPoint, q: TorsorPoint) -> float:
    """Distance on C/(2*pi*i*Z + ell*Z) between reduced representatives."""
    if p.ell is None or q.ell is None:
        ells = [x.ell for x in (p, q) if x.ell is not None]
        ell = ells[0] if ells else None
    else:
        ell = p.ell
    d = p.reduce().value - q.reduce().value
    best = float("inf")
    for k in (-1, 0, 1):
        for m in (-1, 0, 1):
            shift = 2j * math.pi * m + (k * ell if ell is not None else 0.0)
            if ell is None and k != 0:
                continue
            best = min(best, abs(d + shift))
    return best


@dataclass(frozen=True)
class MarkedGeodesic:
    """An oriented geodesic with a base normal frame.

    ``p`` and ``q`` are the negative and positive endpoints on C-hat; the
    frame's first vector is tangent, pointing toward q, and its second
    vector is the marked normal direction.
    """

    p: complex | None
    q: complex | None
    frame: Frame

    @classmethod
    def axis(cls, p, q):
        """Canonical marked geodesic from p to q.

        For axis(0, inf) this is the base frame at (0,0,1) with the normal
        toward +x; in general the frame is pushed forward by the canonical
        normalizing map.
        """
        if p is None and q is None:
            raise Degenerate("need two distinct endpoints")
        if p is None:
            m = MoebiusMap.from_entries(q, -1.0, 1.0, 0.0)
        elif q is None:
            m = MoebiusMap.from_entries(1.0, p, 0.0, 1.0)
        else:
            if abs(p - q) < _TOL * max(1.0, abs(p), abs(q)):
                raise Degenerate("endpoints coincide")
            m = MoebiusMap.from_entries(q, p, 1.0, 1.0)
        return cls(p, q, Frame(m))

    @classmethod
    def from_frame(cls, frame: Frame):
        m = frame.map
        return cls(m(0.0), m(None), frame)

    def transported(self, g: MoebiusMap):
        return MarkedGeodesic(g(self.p), g(self.q), Frame(g @ self.frame.map))

    def reverse(self):
        """Swap endpoints; the marked normal at the basepoint is kept."""
        return MarkedGeodesic(self.q, self.p, Frame(self.frame.map @ J_FLIP))

    def frame_at(self, v) -> Frame:
        """Frame at torsor coordinate v (position Re v, normal angle Im v)."""
        return Frame(self.frame.map @ X(v))

    def normalizer(self) -> MoebiusMap:
        """Map sending this geodesic (with its frame) to axis(0, inf)/base."""
        return self.frame.map.inverse()


def endpoints_distinct(g1: MarkedGeodesic, g2: MarkedGeodesic, tol=1e-12):
    pts = [g1.p, g1.q, g2.p, g2.q]
    for i in range(4):
        for j in range(i + 1, 4):
            a, b = pts[i], pts[j]
            if a is None and b is None:
                return False
            if a is None or b is None:
                continue
            if abs(a - b) <= tol * max(1.0, abs(a), abs(b)):
                return False
    return True


def _normalized_endpoints(g1: MarkedGeodesic, g2: MarkedGeodesic):
    t = g1.normalizer()
    u = t(g2.p)
    v = t(g2.q)
    if u is None or v is None:
        raise SharedEndpoint("second geodesic passes through an endpoint of the first")
    if min(abs(u), abs(v)) < 1e-13 * max(1.0, abs(u), abs(v)):
        raise SharedEndpoint("geodesics are asymptotic")
    return u, v


def complex_distance(g1: MarkedGeodesic, g2: MarkedGeodesic) -> complex:
    """Complex distance d + i*theta between oriented geodesics.

    Computed from the cross-ratio form: after normalizing g1 to (0, inf)
    the second geodesic has endpoints (u, v) and cosh(d + i*theta)
    = (u + v)/(u - v).  Re >= 0 always; intersecting geodesics give Re = 0
    with theta the intersection angle.
    """
    if not endpoints_distinct(g1, g2):
        raise SharedEndpoint("geodesics share an endpoint")
    u, v = _normalized_endpoints(g1, g2)
    if abs(u - v) < 1e-13 * max(abs(u), abs(v)):
        raise Degenerate("endpoints of second geodesic coincide after normalization")
    return acosh_c((u + v) / (u - v))


def common_orthogonal(g1: MarkedGeodesic, g2: MarkedGeodesic) -> MarkedGeodesic:
    """The common perpendicular geodesic, oriented from g1 to g2."""
    dc = complex_distance(g1, g2)
    if dc.real < 1e-10:
        raise Intersecting("geodesics intersect; no common orthogonal")
    t = g1.normalizer()
    u, v = _normalized_endpoints(g1, g2)
    w = cmath.sqrt(u * v)
    back = g1.frame.map
    cand = MarkedGeodesic.axis(back(-w), back(w))
    # orient from g1 to g2: in the candidate's own coordinates both input
    # geodesics are concentric semicircles; the foot on g2 must sit higher.
    s = cand.normalizer()
    r1 = _semicircle_radius(s(g1.p), s(g1.q))
    r2 = _semicircle_radius(s(g2.p), s(g2.q))
    if r2 < r1:
        cand = MarkedGeodesic.axis(back(w), back(-w))
    return cand


def _semicircle_radius(p, q):
    if p is None or q is None:
        raise GeometryError("expected a finite semicircle")
    return 0.5 * abs(p - q)


def translation_length(m: MoebiusMap) -> complex:
    """Complex translation length of a loxodromic: 2*cosh(l/2) = +-tr."""
    ell = 2.0 * acosh_c(0.5 * m.trace)
    ell = complex(ell.real, reduce_angle(ell.imag))
    if ell.real < 1e-9:
        raise NotLoxodromic(f"trace {m.trace} is not loxodromic")
    return ell


def loxodromic_about(g: MarkedGeodesic, ell) -> MoebiusMap:
    """Translation by complex length ell along the marked geodesic."""
    f = g.frame.map
    return f @ X(ell) @ f.inverse()


def half_turn(g: MarkedGeodesic) -> MoebiusMap:
    """Rotation by pi about the geodesic."""
    f = g.frame.map
    return f @ HALF_TURN_AXIS @ f.inverse()


def foot_coordinate(gamma: MarkedGeodesic, eta: MarkedGeodesic, ell=None) -> TorsorPoint:
    """Torsor coordinate on gamma of the foot of the orthogonal geodesic eta.

    Re = signed distance along gamma from the base frame, Im = angle from
    the marked normal; equals log(q') where q' is eta's positive endpoint
    after normalizing gamma to (0, inf).
    """
    t = gamma.normalizer()
    p2, q2 = t(eta.p), t(eta.q)
    if p2 is None or q2 is None:
        raise NotOrthogonal("orthogonal geodesic cannot pass through gamma's endpoints")
    scale = max(abs(p2), abs(q2))
    if abs(p2 + q2) > 1e-8 * max(1.0, scale):
        raise NotOrthogonal(
            f"geodesic does not meet gamma at a right angle (residual {abs(p2 + q2):.3g})"
        )
    return TorsorPoint(cmath.log(q2), ell).reduce()


def geodesic_between_points(p, q) -> MarkedGeodesic:
    """Oriented geodesic through two interior points of H^3."""
    x1, y1, t1 = p
    x2, y2, t2 = q
    z1, z2 = complex(x1, y1), complex(x2, y2)
    if abs(z1 - z2) < 1e-14 * max(1.0, t1, t2):
        return MarkedGeodesic.axis(z1, None) if t2 > t1 else MarkedGeodesic.axis(None, z1)
    # vertical plane through z1, z2: semicircle centered on the line through them
    u = (z2 - z1) / abs(z2 - z1)
    a1 = ((z2 - z1) * (z2 - z1).conjugate()).real
    # center offset s from z1 along u: |s|^2 + t1^2 = |s - L|^2 + t2^2
    L = abs(z2 - z1)
    s = (L * L + t2 * t2 - t1 * t1) / (2.0 * L)
    center = z1 + s * u
    r = math.sqrt(s * s + t1 * t1)
    e1, e2 = center - r * u, center + r * u
    # orient from p to q
    return MarkedGeodesic.axis(e1, e2) if s > 0 else MarkedGeodesic.axis(e2, e1)


def point_to_boundary(z):
    return None if z is None else complex(z)
