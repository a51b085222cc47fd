"""Gluing graphs of components and their developments into H^3.

A pairing between two cuff slots stores a torsor ``offset`` o: measuring
positions from each slot's designated base point (first formal foot, or the
turning-field base), the gluing identifies coordinate w on side B with
coordinate -w + (base_A - o + base_B) on side A, an orientation-reversing
torsor map.  With that convention o is exactly the quantity the
well-matched conditions compare against 1 + i*pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .components import ComponentGeometry, reverse_component
from .moebius import (
    Frame,
    GeometryError,
    J_FLIP,
    MarkedGeodesic,
    MoebiusMap,
    TorsorPoint,
    X,
    reduce_angle,
    torus_distance,
)

TAU_OFFSET = 1.0 + 1j * math.pi


class LengthMismatch(GeometryError):
    pass


class PathNotClosed(GeometryError):
    pass


class DepthOverflow(GeometryError):
    pass


@dataclass(frozen=True)
class Slot:
    comp: int
    cuff: int


@dataclass(frozen=True)
class Pairing:
    a: Slot
    b: Slot
    offset: complex


@dataclass
class Assembly:
    components: list
    pairings: list
    labels: dict = field(default_factory=dict)  # informational slot labels
    orientations: list = field(default_factory=list)  # +1 / -1 per component

    def __post_init__(self):
        if not self.orientations:
            self.orientations = [1] * len(self.components)

    def cuff(self, s: Slot):
        return self.components[s.comp].cuffs[s.cuff]

    def glued_slots(self):
        out = []
        for p in self.pairings:
            out.extend([p.a, p.b])
        return out

    def boundary_slots(self):
        glued = set(self.glued_slots())
        out = []
        for i, comp in enumerate(self.components):
            for j in range(len(comp.cuffs)):
                s = Slot(i, j)
                if s not in glued:
                    out.append(s)
        return out

    def validate_involution(self):
        glued = self.glued_slots()
        if len(glued) != len(set(glued)):
            raise GeometryError("a slot is glued twice")
        for p in self.pairings:
            if p.a == p.b:
                raise GeometryError("pairing fixes a slot")

    def euler_characteristic(self):
        chi = 0
        for comp in self.components:
            chi += -1 if comp.kind == "pants" else -int(round(comp.R))
        return chi


def _slot_base(cuff):
    if cuff.formal_feet:
        return complex(cuff.formal_feet[0])
    return complex(cuff.turning_base)


def well_matched(asm: Assembly, pairing: Pairing, eps: float):
    """Check one gluing: returns (passed, residual).

    Formal-feet case: |offset - (1 + i pi)| < eps/R on the torus.
    Turning-field case: maximal bend between the two fields <= 100 eps.
    """
    ca = asm.cuff(pairing.a)
    cb = asm.cuff(pairing.b)
    if abs(ca.length - cb.length) > 1e-9 * max(1.0, abs(ca.length)):
        raise LengthMismatch(
            f"paired cuffs have lengths {ca.length} and {cb.length}"
        )
    R = asm.components[pairing.a.comp].R
    if ca.formal_feet and cb.formal_feet:
        res = torus_distance(
            TorsorPoint(pairing.offset, ca.length),
            TorsorPoint(TAU_OFFSET, ca.length),
        )
        return res < eps / R, res
    bend = gluing_bend(asm, pairing)
    return bend <= 100.0 * eps, bend


def gluing_bend(asm: Assembly, pairing: Pairing, samples: int = 16) -> float:
    """Max angle between one cuff's turning field and the image of the other.

    The image of B's field under the orientation-reversing gluing sits at
    angle pi from A's field when the gluing is perfectly aligned; the bend
    is the worst deviation from that over the cuff.
    """
    ca = asm.cuff(pairing.a)
    cb = asm.cuff(pairing.b)
    base_a = _slot_base(ca)
    base_b = _slot_base(cb)
    c = base_a - pairing.offset + base_b
    L = ca.length.real
    worst = 0.0
    for k in range(samples):
        s = k * L / samples
        # A-side field angle at position s
        ang_a = (ca.field_value(s)).imag + 0 * s
        pos_a = s
        # the B-coordinate landing at A-position s: w with Re(c - w) = s
        w_re = c.real - s
        ang_b_img = (c - (cb.field_value(w_re))).imag
        diff = reduce_angle(ang_a - ang_b_img - math.pi)
        worst = max(worst, abs(diff))
    return worst


def glue_transition(asm: Assembly, src: Slot, pairing: Pairing) -> MoebiusMap:
    """Isometry placing the far component when crossing a pairing from src.

    If P is the returned map and the source component is placed by G, the
    far component is placed by G @ P.
    """
    if pairing.a == src:
        dst = pairing.b
        offset = pairing.offset
    elif pairing.b == src:
        dst = pairing.a
        # the inverse torsor map has the same form with the roles swapped
        offset = pairing.offset
    else:
        raise GeometryError("slot is not part of the pairing")
    ca = asm.cuff(src)
    cb = asm.cuff(dst)
    base_a = _slot_base(ca)
    base_b = _slot_base(cb)
    c = base_a - offset + base_b
    f_a = ca.geodesic.frame.map
    f_b = cb.geodesic.frame.map
    return f_a @ X(c) @ J_FLIP @ f_b.inverse()


@dataclass
class PlacedComponent:
    node: int
    comp: int
    placement: MoebiusMap
    depth: int
    parent: int | None
    via: Pairing | None
    via_src: Slot | None = None


@dataclass
class DevelopedAssembly:
    assembly: Assembly
    nodes: list
    recentering: MoebiusMap

    def placed_cuffs(self):
        """All placed boundary geodesics as (node, cuff index, geodesic)."""
        out = []
        for pc in self.nodes:
            comp = self.assembly.components[pc.comp]
            for j, cuff in enumerate(comp.cuffs):
                out.append((pc.node, j, cuff.geodesic.transported(pc.placement)))
        return out


def develop(
    asm: Assembly,
    root: int = 0,
    depth: int = 2,
    root_placement: MoebiusMap | None = None,
    max_nodes: int = 100_000,
) -> DevelopedAssembly:
    """Breadth-first development of the gluing graph to the given depth.

    Crossing a pairing applies the gluing isometry; traversal order is by
    (component id, slot id) so the development is deterministic.  The
    development is the universal-cover tree of the gluing graph truncated
    at ``depth``.
    """
    asm.validate_involution()
    if root_placement is None:
        root_placement = MoebiusMap(1.0, 0.0, 0.0, 1.0)
    by_slot = {}
    for p in asm.pairings:
        by_slot[p.a] = p
        by_slot[p.b] = p
    nodes = [PlacedComponent(0, root, root_placement, 0, None, None)]
    frontier = [nodes[0]]
    recenter = MoebiusMap(1.0, 0.0, 0.0, 1.0)
    for level in range(depth):
        new_frontier = []
        for pc in frontier:
            comp = asm.components[pc.comp]
            for j in range(len(comp.cuffs)):
                src = Slot(pc.comp, j)
                pairing = by_slot.get(src)
                if pairing is None:
                    continue
                dst = pairing.b if pairing.a == src else pairing.a
                # do not cross straight back through the arrival slot
                back = pc.via is not None and pairing == pc.via and src == pc.via_src
                if back:
                    continue
                trans = glue_transition(asm, src, pairing)
                placement = pc.placement @ trans
                node = PlacedComponent(
                    len(nodes), dst.comp, placement, pc.depth + 1, pc.node, pairing, dst
                )
                nodes.append(node)
                new_frontier.append(node)
                if len(nodes) > max_nodes:
                    raise DepthOverflow(f"development exceeded {max_nodes} components")
        frontier = new_frontier
    # recenter if coordinates ran away (records the isometry used)
    worst = 0.0
    for pc in nodes:
        x, y, t = Frame(pc.placement).basepoint()
        worst = max(worst, abs(x), abs(y), t, 1.0 / t)
    if worst > 1e6:
        g0 = nodes[0].placement
        recenter = g0.inverse()
        for pc in nodes:
            pc.placement = recenter @ pc.placement
    return DevelopedAssembly(asm, nodes, recenter)


def adjacency_residual(dev: DevelopedAssembly) -> float:
    """Placed neighbors agree on the shared cuff's axis (endpoint residual)."""
    asm = dev.assembly
    worst = 0.0
    for pc in dev.nodes:
        if pc.via is None:
            continue
        parent = dev.nodes[pc.parent]
        dst = pc.via_src
        src = pc.via.b if dst == pc.via.a else pc.via.a
        ga = asm.cuff(src).geodesic.transported(parent.placement)
        gb = asm.cuff(dst).geodesic.transported(pc.placement)
        pts_a = sorted(
            [p for p in (ga.p, ga.q)], key=lambda z: (1e18 if z is None else z.real)
        )
        pts_b = sorted(
            [p for p in (gb.p, gb.q)], key=lambda z: (1e18 if z is None else z.real)
        )
        for u, v in zip(pts_a, pts_b):
            if u is None or v is None:
                worst = max(worst, 0.0 if u is v else 1.0)
            else:
                worst = max(worst, abs(u - v))
    return worst


# ---------------------------------------------------------------------------
# doubling


def double_assembly(components, sigma=None, offset_rule=None) -> Assembly:
    """The doubling trick: close up a multiset of components.

    Takes components with labelled boundary slots; ``sigma`` gives, per
    label, a permutation (as a dict index->index) of the slots in that
    label's fiber.  Each slot of the positive copy is glued to the image
    slot of the negative (orientation-reversed) copy.  ``offset_rule``
    maps (slot, slot) to a gluing offset; the default is the perfect
    1 + i*pi shear on every gluing.
    """
    comps, labels = zip(*components) if components and isinstance(components[0], tuple) else (components, None)
    comps = list(comps)
    n = len(comps)
    doubled = comps + [reverse_component(c) for c in comps]
    fibers = {}
    for i, c in enumerate(comps):
        for j in range(len(c.cuffs)):
            if labels is not None:
                lab = labels[i][j]
            else:
                lab = (i, j)
            fibers.setdefault(lab, []).append(Slot(i, j))
    pairings = []
    label_map = {}
    for lab, slots in sorted(fibers.items(), key=lambda kv: str(kv[0])):
        perm = sigma.get(lab) if sigma else None
        for k, s in enumerate(slots):
            img = slots[perm[k] if perm else k]
            neg = Slot(img.comp + n, img.cuff)
            o = offset_rule(s, neg) if offset_rule else TAU_OFFSET
            pairings.append(Pairing(s, neg, o))
            label_map[s] = lab
            label_map[neg] = lab
    asm = Assembly(doubled, pairings, label_map, [1] * n + [-1] * n)
    asm.validate_involution()
    return asm


def doubled_pants(R: float, eps: float = 0.0, seed=None) -> Assembly:
    from .components import build_good_pants

    p = build_good_pants(R, eps, seed)
    return double_assembly([p])


# ---------------------------------------------------------------------------
# perfect model and compliance


@dataclass
class CuffCorrespondence:
    """Affine reparameterization of one cuff: perfect u -> good a*u + b."""

    a: complex
    b: complex

    def __call__(self, u):
        return self.a * complex(u) + self.b


@dataclass
class ComplianceMap:
    perfect: Assembly
    good: Assembly
    cuff_maps: dict  # (comp, cuff) -> CuffCorrespondence


def perfect_model(asm: Assembly):
    """The perfect assembly with the same combinatorics plus the comparison.

    Perfect components of matching kind and R replace each component;
    formal-feet gluings are joined at offset exactly 1 + i*pi, other
    gluings keep their shear and are aligned on the turning fields.
    """
    from .components import build_perfect_pants, build_perfect_wheel

    cache = {}
    perfect_comps = []
    for comp, orient in zip(asm.components, asm.orientations):
        key = (comp.kind, int(round(comp.R)), orient)
        if key not in cache:
            base = (
                build_perfect_pants(comp.R)
                if comp.kind == "pants"
                else build_perfect_wheel(int(round(comp.R)))
            )
            cache[key] = reverse_component(base) if orient < 0 else base
        perfect_comps.append(cache[key])
    pairings = []
    tmp = Assembly(perfect_comps, [], {})
    for p in asm.pairings:
        ca = tmp.cuff(p.a)
        cb = tmp.cuff(p.b)
        if ca.formal_feet and cb.formal_feet:
            o = TAU_OFFSET
        else:
            o = _field_aligned_offset(tmp, p)
        pairings.append(Pairing(p.a, p.b, o))
    perf = Assembly(perfect_comps, pairings, dict(asm.labels), list(asm.orientations))
    cuff_maps = {}
    for i, (pc, gc) in enumerate(zip(perfect_comps, asm.components)):
        for j, (cp, cg) in enumerate(zip(pc.cuffs, gc.cuffs)):
            a = cg.length / cp.length
            if cp.formal_feet:
                b = complex(cg.formal_feet[0]) - a * complex(cp.formal_feet[0])
            else:
                b = complex(cg.turning_base) - a * complex(cp.turning_base)
            cuff_maps[(i, j)] = CuffCorrespondence(a, b)
    return perf, ComplianceMap(perf, asm, cuff_maps)


def _field_aligned_offset(asm: Assembly, pairing: Pairing, shear: complex = 0.0):
    """Offset with zero bend and base points aligned (perfect gluing rule)."""
    base = Pairing(pairing.a, pairing.b, complex(shear))
    bend0 = _bend_at_base(asm, base)
    return complex(shear) + 1j * bend0


def _bend_at_base(asm: Assembly, pairing: Pairing) -> float:
    ca = asm.cuff(pairing.a)
    cb = asm.cuff(pairing.b)
    base_a = _slot_base(ca)
    base_b = _slot_base(cb)
    c = base_a - pairing.offset + base_b
    ang_a = ca.field_value(0.0).imag
    ang_b_img = (c - cb.field_value(c.real - 0.0)).imag
    return reduce_angle(ang_a - ang_b_img - math.pi)


def compliance_affine_residual(cm: ComplianceMap) -> float:
    """Second differences of parameter images vanish (affineness check)."""
    worst = 0.0
    for corr in cm.cuff_maps.values():
        us = [0.0, 1.0, 2.0]
        vs = [corr(u) for u in us]
        worst = max(worst, abs((vs[2] - vs[1]) - (vs[1] - vs[0])))
    return worst


def compliance_feet_residual(cm: ComplianceMap) -> float:
    """Formal feet map to formal feet exactly."""
    worst = 0.0
    for (i, j), corr in cm.cuff_maps.items():
        cp = cm.perfect.components[i].cuffs[j]
        cg = cm.good.components[i].cuffs[j]
        for fp, fg in zip(cp.formal_feet, cg.formal_feet):
            worst = max(
                worst,
                torus_distance(
                    TorsorPoint(corr(fp), cg.length), TorsorPoint(complex(fg), cg.length)
                ),
            )
    return worst


# ---------------------------------------------------------------------------
# holonomy along paths in the gluing graph


def holonomy(asm: Assembly, path, start: int = 0) -> MoebiusMap:
    """Product of transitions along a path in the gluing graph.

    Path elements: ("cross", pairing_index) crosses a gluing from the
    current component; ("cuff", cuff_index, n) inserts the n-th power of a
    cuff holonomy.  The path must end on the component it started on.
    """
    g = MoebiusMap(1.0, 0.0, 0.0, 1.0)
    comp = start
    for step in path:
        if step[0] == "cuff":
            _, j, n = step
            h = asm.components[comp].cuffs[j].holonomy
            m = h if n >= 0 else h.inverse()
            for _ in range(abs(n)):
                g = g @ m
        elif step[0] == "cross":
            p = asm.pairings[step[1]]
            if p.a.comp == comp:
                src = p.a
            elif p.b.comp == comp:
                src = p.b
            else:
                raise PathNotClosed(f"pairing {step[1]} does not touch component {comp}")
            g = g @ glue_transition(asm, src, p)
            comp = (p.b if src == p.a else p.a).comp
        else:
            raise GeometryError(f"unknown path step {step[0]!r}")
    if comp != start:
        raise PathNotClosed("path does not return to its starting component")
    return g


# ---------------------------------------------------------------------------
# assembly spec files (GASM/1)


def dump_assembly_spec(asm: Assembly) -> str:
    lines = ["GASM/1"]
    for comp, orient in zip(asm.components, asm.orientations):
        seed = "-" if comp.seed is None else comp.seed
        rev = 1 if orient < 0 else 0
        lines.append(f"component {comp.kind} {comp.R:.16g} {comp.eps:.16g} {seed} {rev}")
    for p in asm.pairings:
        lines.append(
            f"pairing {p.a.comp} {p.a.cuff} {p.b.comp} {p.b.cuff} "
            f"{p.offset.real:.16g} {p.offset.imag:.16g}"
        )
    return "\n".join(lines) + "\n"


def load_assembly_spec(text: str) -> Assembly:
    from .components import build_good_pants, build_good_wheel

    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "GASM/1":
        raise GeometryError("not a GASM/1 record")
    comps = []
    orients = []
    pairings = []
    for idx, ln in enumerate(lines[1:], start=2):
        toks = ln.split()
        if toks[0] == "component":
            kind, R, eps, seed, rev = toks[1], float(toks[2]), float(toks[3]), toks[4], toks[5]
            seed = None if seed == "-" else int(seed)
            if kind == "pants":
                c = build_good_pants(R, eps, seed)
            elif kind == "wheel":
                c = build_good_wheel(int(round(R)), eps, seed)
            else:
                raise GeometryError(f"line {idx}: unknown component kind {kind!r}")
            if rev == "1":
                c = reverse_component(c)
            comps.append(c)
            orients.append(-1 if rev == "1" else 1)
        elif toks[0] == "pairing":
            a = Slot(int(toks[1]), int(toks[2]))
            b = Slot(int(toks[3]), int(toks[4]))
            pairings.append(Pairing(a, b, complex(float(toks[5]), float(toks[6]))))
        else:
            raise GeometryError(f"line {idx}: unknown GASM record {toks[0]!r}")
    asm = Assembly(comps, pairings, {}, orients)
    asm.validate_involution()
    return asm
