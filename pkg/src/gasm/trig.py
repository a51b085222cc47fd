"""Closed-form hyperbolic trigonometry.

Right-angled hexagon and pentagon laws with complex side lengths, the
two-orthogonal bigon length, and pants seam lengths.  Every solver here has
a constructive counterpart that rebuilds the polygon from explicit geodesics
so the identities can be cross-checked by direct measurement.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .moebius import (
    IDENTITY,
    E,
    GeometryError,
    MarkedGeodesic,
    MoebiusMap,
    X,
    YT,
    acosh_c,
    complex_distance,
    translation_length,
)


class Infeasible(GeometryError):
    pass


_PENTAGON_KEYS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class HexagonSides:
    """Sides of a right-angled hexagon in cyclic order a, C, b, A, c, B."""

    a: complex
    C: complex
    b: complex
    A: complex
    c: complex
    B: complex

    def cyclic(self):
        return [self.a, self.C, self.b, self.A, self.c, self.B]


@dataclass(frozen=True)
class PentagonSides:
    """Sides of a right-angled pentagon in cyclic order a, b, c, d, e."""

    a: complex
    b: complex
    c: complex
    d: complex
    e: complex

    def cyclic(self):
        return [self.a, self.b, self.c, self.d, self.e]


def _opposite(a, b, c):
    sb, sc = cmath.sinh(b), cmath.sinh(c)
    if min(abs(sb), abs(sc)) < 1e-12:
        raise Infeasible("degenerate hexagon: sinh of a side vanishes")
    return acosh_c((cmath.cosh(b) * cmath.cosh(c) + cmath.cosh(a)) / (sb * sc))


def hexagon_solve(a, b, c) -> HexagonSides:
    """Fill in the sides opposite the alternating sides a, b, c.

    Cosine law: cosh A = (cosh b cosh c + cosh a) / (sinh b sinh c), and
    cyclic rotations.
    """
    a, b, c = complex(a), complex(b), complex(c)
    for s in (a, b, c):
        if s.real <= 0:
            raise Infeasible("alternating sides need positive real part")
    A = _opposite(a, b, c)
    B = _opposite(b, c, a)
    C = _opposite(c, a, b)
    return HexagonSides(a=a, C=C, b=b, A=A, c=c, B=B)


def hexagon_cosine_residual(h: HexagonSides) -> float:
    """Max residual of the cosine law over the three cyclic rotations."""
    res = 0.0
    for a, b, A, c in ((h.a, h.b, h.A, h.c), (h.b, h.c, h.B, h.a), (h.c, h.a, h.C, h.b)):
        lhs = cmath.cosh(A) * cmath.sinh(b) * cmath.sinh(c)
        rhs = cmath.cosh(b) * cmath.cosh(c) + cmath.cosh(a)
        res = max(res, abs(lhs - rhs))
    return res


def hexagon_sine_residual(h: HexagonSides) -> float:
    """Max pairwise disagreement of sinh(A)/sinh(a) over the three pairs."""
    ratios = [
        cmath.sinh(h.A) / cmath.sinh(h.a),
        cmath.sinh(h.B) / cmath.sinh(h.b),
        cmath.sinh(h.C) / cmath.sinh(h.c),
    ]
    # the sine law holds up to sign of the common ratio
    r0 = ratios[0]
    return max(min(abs(r - r0), abs(r + r0)) for r in ratios[1:])


def polygon_walk(sides, turn=+1):
    """Walk a right-angled polygon: translate along each side, turn 90 deg.

    Returns (lines, closure) where lines[i] is the geodesic carrying side i
    and closure is the full product (+-identity for a genuine polygon).
    """
    lines = []
    prefix = IDENTITY
    for s in sides:
        lines.append(MarkedGeodesic.axis(0.0, None).transported(prefix))
        prefix = prefix @ X(s) @ E(turn * math.pi / 2.0)
    return lines, prefix


def closure_residual(m: MoebiusMap) -> float:
    g = m.sign_normalized()
    return max(abs(g.a - 1.0), abs(g.b), abs(g.c), abs(g.d - 1.0))


def remeasure_polygon(sides, turn=+1):
    """Rebuild a right-angled polygon and re-measure every side.

    Side i+1 is the complex distance between the lines carrying sides i and
    i+2; comparison is on cosh to stay clear of branch conventions.
    Returns (max side residual, closure residual).
    """
    n = len(sides)
    lines, closure = polygon_walk(sides, turn)
    worst = 0.0
    for i in range(n):
        measured = complex_distance(lines[i], lines[(i + 2) % n])
        target = sides[(i + 1) % n]
        worst = max(worst, abs(cmath.cosh(measured) - cmath.cosh(target)))
    return worst, closure_residual(closure)


def pentagon_solve(**known) -> PentagonSides:
    """Solve a right-angled pentagon from two adjacent known sides.

    Sides are cyclic a, b, c, d, e with the laws
    cosh e = sinh b sinh c and cosh e = coth a coth d (and rotations).
    """
    keys = [k for k in _PENTAGON_KEYS if k in known]
    if len(keys) != 2 or len(known) != 2:
        raise ValueError("give exactly two of a, b, c, d, e")
    i, j = _PENTAGON_KEYS.index(keys[0]), _PENTAGON_KEYS.index(keys[1])
    if (j - i) % 5 not in (1, 4):
        raise ValueError("the two known sides must be adjacent")
    if (j - i) % 5 == 4:
        i, j = j, i
    # treat the known pair as the (b, c) positions of a rotated pentagon
    b = complex(known[_PENTAGON_KEYS[i]])
    c = complex(known[_PENTAGON_KEYS[j]])
    e = acosh_c(cmath.sinh(b) * cmath.sinh(c))
    if e.real <= 1e-12:
        raise Infeasible("no pentagon with positive side e for these inputs")
    # rotations of cosh e = coth a coth d peel off the remaining sides
    a = _arccoth(cmath.cosh(b) * cmath.tanh(c))
    d = _arccoth(cmath.cosh(c) * cmath.tanh(b))
    out = [a, b, c, d, e]
    sides = PentagonSides(*[out[(k + 1 - i) % 5] for k in range(5)])
    res = pentagon_residual(sides)
    if res > 1e-8:
        raise Infeasible(f"pentagon identities do not close (residual {res:.3g})")
    return sides


def _arccoth(z):
    z = complex(z)
    if abs(z - 1.0) < 1e-14 or abs(z + 1.0) < 1e-14:
        raise Infeasible("arccoth at a pole")
    w = 0.5 * cmath.log((z + 1.0) / (z - 1.0))
    if w.real < 0:
        w = -w
    return w


def pentagon_residual(p: PentagonSides) -> float:
    """Max residual of both pentagon laws over all cyclic rotations."""
    s = p.cyclic()
    res = 0.0
    for k in range(5):
        a, b, c, d, e = (s[(k + m) % 5] for m in range(5))
        res = max(res, abs(cmath.cosh(e) - cmath.sinh(b) * cmath.sinh(c)))
        res = max(res, abs(cmath.cosh(e) * cmath.tanh(a) * cmath.tanh(d) - 1.0))
    return res


def bigon_length(e1, e2, reverse_lift=False) -> complex:
    """Exact complex length of the closed-up two-orthogonal bigon.

    Composes the four explicit isometries (translation by e1 along one axis,
    conjugated translation by e2 along the orthogonal axis) and extracts the
    translation length; asymptotically e1 + e2 - 2 log 2.  The
    ``reverse_lift`` flag toggles the lift-orientation convention, offsetting
    e1 by i*pi and selecting the other solution component.
    """
    e1 = complex(e1) + (1j * math.pi if reverse_lift else 0.0)
    e2 = complex(e2)
    if e2.real <= 0 or (complex(e1).real <= 0 and not reverse_lift):
        raise Infeasible("bigon sides need positive real part")
    m = YT(e2) @ X(e1)
    return translation_length(m)


def bigon_length_closed_form(e1, e2) -> complex:
    """Reference identity: cosh(l/2) = cosh(e1/2) cosh(e2/2)."""
    return 2.0 * acosh_c(cmath.cosh(0.5 * complex(e1)) * cmath.cosh(0.5 * complex(e2)))


def bigon_asymptote(e1, e2) -> complex:
    return complex(e1) + complex(e2) - 2.0 * math.log(2.0)


def bigon_defect(e1, e2) -> float:
    """|exact - asymptote|; decays like exp(-min(Re e1, Re e2))."""
    return abs(bigon_length(e1, e2) - bigon_asymptote(e1, e2))


def pants_seam_length(R: float) -> float:
    """Seam of the perfect pants with cuff half-length R:
    cosh s = cosh R / (cosh R - 1)."""
    if R <= 0:
        raise Infeasible("R must be positive")
    return math.acosh(math.cosh(R) / (math.cosh(R) - 1.0))


def regular_hexagon_side() -> float:
    """Side of the self-dual right-angled hexagon (equals arccosh 2)."""
    return math.acosh(2.0)
