"""Real-rel deformations as exact surgery.

Forward rel by L > 0 slits the three leftward horizontal separatrices of
the black singularity for length L and re-glues each slit's top bank to the
next slit's bottom bank in counterclockwise order; the black point becomes
three regular points and the far slit ends fuse into the new 6*pi black
singularity.  Backward rel conjugates by -I (the hyperelliptic involution
fixes both singularities), and imaginary rel conjugates by the quarter
turn.  Small deformations can instead translate the white vertex in place
(the edge-shift picture), collapsing any edge that reaches length zero.
"""

from __future__ import annotations

from ayrel.errors import (Collision, PreconditionViolated,
                          SegmentHitsSingularity, VerificationFailed)
from ayrel.field import NFElem, ZERO
from ayrel.geom import Vec2, minus_identity, orient, rot90
from ayrel.mesh import MeshBuilder
from ayrel.surface import BLACK, REGULAR, WHITE, Surface
from ayrel.trace import trace


class RelVector:
    """An element of the rel plane, evaluated on a black -> white path."""

    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        self.dx = NFElem.coerce(dx)
        self.dy = NFElem.coerce(dy)

    def __repr__(self):
        return f"RelVector({self.dx}, {self.dy})"


def _black_corner(mb):
    for t in range(len(mb.tris)):
        if not mb.alive[t]:
            continue
        for i in range(3):
            if mb.labs[t][i] == BLACK:
                return (t, i)
    raise PreconditionViolated("surface has no black singularity")


def rel_h_slit(surface: Surface, length) -> Surface:
    """Rel^(h) by length > 0 via the three-slit surgery."""
    return rel_h_slit_tracked(surface, length)[0]


def rel_h_slit_tracked(surface: Surface, length):
    """The slit surgery, also returning (builder, slit chains) so callers
    can transport chains through the refinement and re-anchor endpoints."""
    length = NFElem.coerce(length)
    if length.sign() <= 0:
        raise PreconditionViolated("slit length must be positive")
    mb = MeshBuilder(surface)
    dvec = Vec2(-length, ZERO)
    direction = Vec2(-1, 0)

    chains = []
    for step in range(3):
        corner = _black_corner(mb)
        first_edges = set()
        for ch in chains:
            first_edges.add(mb.resolve_edge(ch[0])[0])
        occs = mb.direction_occurrences(corner, direction)
        if len(occs) != 3:
            raise PreconditionViolated(
                f"black singularity has {len(occs)} leftward separatrices, "
                "expected 3")
        todo = [o for o in occs
                if not (o[0] == "germ" and o[1] in first_edges)]
        if len(todo) != 3 - step:
            raise PreconditionViolated("slit bookkeeping lost a separatrix")
        # probe before mutating so a mid-course hit leaves the surface alone
        probe = trace(mb, ("vertex", todo[0]), direction,
                      max_displacement=dvec, budget=200000)
        if probe.kind == "singular":
            raise SegmentHitsSingularity(
                f"separatrix meets a {probe.label} point after "
                f"{-probe.consumed.x} of {length}",
                hit_length=probe.consumed)
        if probe.kind != "end":
            raise PreconditionViolated(f"separatrix probe: {probe.kind}")
        chain, _end = mb.embed_segment(todo[0], dvec)
        chains.append(chain)

    # final cyclic (ccw) order of the three slits around the black point
    corner = _black_corner(mb)
    occs = mb.direction_occurrences(corner, direction)
    order = []
    resolved = [mb.resolve_chain([(t, e, 1) for (t, e) in ch])
                for ch in chains]
    firsts = [steps[0][:2] for steps in resolved]
    for occ in occs:
        if occ[0] != "germ":
            raise PreconditionViolated("slit germ lost after embedding")
        order.append(firsts.index(occ[1]))
    if sorted(order) != [0, 1, 2]:
        raise PreconditionViolated("slit germs do not enumerate all slits")
    cyclic = [resolved[i] for i in order]

    refined = _common_refinement(mb, cyclic, length)
    _reglue_slits(mb, refined)

    # relabel: old black corners become regular, far ends fuse into black
    for steps in refined:
        t, e, _ = steps[0]
        mb.set_class_label((t, e), REGULAR)
    t, e, _ = refined[0][-1]
    far = (t, (e + 1) % 3)
    mb.set_class_label(far, BLACK)

    out = mb.to_surface()
    _post_checks(out)
    return out, mb, refined


def _chain_pieces(mb, steps):
    """[(start_offset, end_offset, ref)] along a leftward chain."""
    out = []
    acc = ZERO
    for (t, e, sgn) in steps:
        assert sgn == 1
        vec = mb.edge_vector(t, e)
        assert vec.y.is_zero() and vec.x.sign() < 0
        nxt = acc - vec.x
        out.append((acc, nxt, (t, e)))
        acc = nxt
    return out


def _common_refinement(mb, cyclic, length):
    """Split the three chains so their breakpoint offsets agree."""
    cuts = {}
    for steps in cyclic:
        for (a, b, _ref) in _chain_pieces(mb, steps):
            if a.sign() > 0:
                cuts[a.key()] = a
    chains = [list(steps) for steps in cyclic]
    for idx in range(3):
        for cut in cuts.values():
            chains[idx] = mb.resolve_chain(chains[idx])
            for (a, b, ref) in _chain_pieces(mb, chains[idx]):
                if (cut - a).sign() > 0 and (cut - b).sign() < 0:
                    t, e = ref
                    p = mb.tris[t][e] + Vec2(-(cut - a), ZERO)
                    mb.split_edge((t, e), p)
                    break
    refined = [mb.resolve_chain(ch) for ch in chains]
    offsets = {tuple(x.key() for (x, _, _) in _chain_pieces(mb, ch))
               for ch in refined}
    if len(offsets) != 1:
        raise PreconditionViolated("slit refinement out of sync")
    return refined


def _reglue_slits(mb, refined):
    """Re-pair the slit banks so the old black point closes up regular.

    Rotating ccw away from a leftward cut dips below it, so the sector
    between cut_i and cut_{i+1} is flanked by the bottom bank of cut_i and
    the top bank of cut_{i+1}; gluing those two banks (for each i, ccw)
    closes each sector into a 2*pi point and fuses the far ends into the
    new 6*pi black point.
    """
    souths = []
    norths = []
    for steps in refined:
        s_refs = [(t, e) for (t, e, _s) in steps]
        souths.append(s_refs)
        norths.append([mb.glue[r] for r in s_refs])
    for i in range(3):
        for south, north in zip(souths[i], norths[i]):
            mb.glue.pop(south, None)
            mb.glue.pop(north, None)
    for i in range(3):
        nxt = (i + 1) % 3
        for south, north in zip(souths[i], norths[nxt]):
            mb._pair(south, north)


def _post_checks(surface):
    blacks = surface.class_by_label(BLACK)
    whites = surface.class_by_label(WHITE)
    if len(blacks) != 1 or len(whites) != 1:
        raise VerificationFailed("slit surgery broke the singularity count")
    if surface.cone_angle(blacks[0]) != 6 or surface.cone_angle(whites[0]) != 6:
        raise VerificationFailed("slit surgery broke a cone angle")
    for idx in range(len(surface.vertex_classes())):
        if surface.class_label(idx) == REGULAR and surface.cone_angle(idx) != 2:
            raise VerificationFailed(
                "slit surgery left a cone point at a regular vertex")


def rel_h(surface: Surface, r) -> Surface:
    """Rel^(h)_r for any exact r (negative values conjugate by -I)."""
    r = NFElem.coerce(r)
    if r.is_zero():
        return surface
    if r.sign() > 0:
        return rel_h_slit(surface, r)
    flipped = surface.linear_apply(minus_identity())
    moved = rel_h_slit(flipped, -r)
    return moved.linear_apply(minus_identity())


def rel_apply(surface: Surface, v) -> Surface:
    """Rel^u for u = (dx, dy): horizontal part first, then vertical.

    On vertically periodic surfaces the vertical part runs through the
    twist chart (the slit picture degenerates whenever the moving
    singularity would slide through its own boundary circle); elsewhere it
    conjugates the slit by the quarter turn: Rel^(0,s) =
    rot^-1 . Rel^(h)_{-s} . rot.  Obstructions surface as Collision.
    """
    if isinstance(v, RelVector):
        dx, dy = v.dx, v.dy
    else:
        dx, dy = NFElem.coerce(v[0]), NFElem.coerce(v[1])
    out = surface
    try:
        if not dx.is_zero():
            out = rel_h(out, dx)
        if not dy.is_zero():
            chart = _vertical_chart(out)
            if chart is not None:
                out = chart.rel_v(dy).rebuild()
            else:
                rot = rot90()
                out = rel_h(out.linear_apply(rot),
                            -dy).linear_apply(rot.inverse())
    except SegmentHitsSingularity as err:
        raise Collision(f"rel deformation obstructed: {err}") from err
    return out


def rel_v_slit(surface: Surface, s) -> Surface:
    """Vertical rel by the quarter-turn-conjugated slit surgery.

    Valid while no singularity lies on the three downward separatrix
    segments of length |s|; the independent counterpart of the twist-chart
    flow for conjugacy testing.
    """
    s = NFElem.coerce(s)
    if s.is_zero():
        return surface
    rot = rot90()
    return rel_h(surface.linear_apply(rot), -s).linear_apply(rot.inverse())


def _vertical_chart(surface, budget=100000):
    from ayrel.cylinders import vertical_decomposition
    from ayrel.errors import AyrelError, MixedBoundary
    from ayrel.twist import extract_chart
    try:
        decomp = vertical_decomposition(surface, budget=budget)
        if decomp.mixed:
            return None
        chart = extract_chart(decomp)
        chart.w_vector()
        return chart
    except AyrelError:
        return None


def rel_h_edgeshift(surface: Surface, r) -> Surface:
    """Rel^(h)_r by translating the white vertex class in place.

    Valid while every triangle stays positively oriented along the motion;
    an edge shrinking to zero exactly at the end is collapsed (the regular
    endpoint merges into white).  Raises PreconditionViolated when a
    triangle would invert or degenerate without a collapsing edge, and
    Collision when white would land on black.
    """
    r = NFElem.coerce(r)
    if r.is_zero():
        return surface
    mb = MeshBuilder(surface)
    dvec = Vec2(r, ZERO)
    corners = []
    for t in range(len(mb.tris)):
        if mb.alive[t]:
            for i in range(3):
                if mb.labs[t][i] == WHITE:
                    corners.append((t, i))
    if not corners:
        raise PreconditionViolated("no white singularity to shift")
    mb.move_class(corners, dvec)
    zero_refs = mb.zero_edges()
    for t in range(len(mb.tris)):
        if not mb.alive[t]:
            continue
        sgn = orient(*mb.tris[t])
        if sgn < 0:
            raise PreconditionViolated(
                "edge shift inverts a triangle; use the slit mechanism")
        if sgn == 0 and not any(mb.edge_vector(t, e).is_zero()
                                for e in range(3)):
            raise PreconditionViolated(
                "edge shift flattens a triangle without collapsing an edge")
    seen = set()
    for ref in zero_refs:
        if ref in seen or not mb.alive[ref[0]]:
            continue
        seen.add(ref)
        seen.add(mb.glue[ref])
        mb.collapse_zero_edge(ref)
    return mb.to_surface()
