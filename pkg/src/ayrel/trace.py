"""Exact straight-line tracing through a triangulated surface.

Works on either a Surface or a MeshBuilder (anything exposing vertex,
edge_vector, label, corner_walk and a gluing map).  All positions and
crossing parameters are exact; nothing here mutates the surface.
"""

from __future__ import annotations

from ayrel.errors import SegmentNotEmbedded
from ayrel.field import ZERO, ONE
from ayrel.geom import Vec2
from ayrel.surface import SINGULAR_LABELS


def _gluing(surf):
    return surf.gluing if hasattr(surf, "gluing") else surf.glue


class TraceOutcome:
    """End state of a trace.

    kind: 'end'      - full displacement consumed (corner/edge/point set
                       when the endpoint is special)
          'singular' - met a vertex whose label is in stop_labels (possibly
                       exactly at the far end; compare consumed)
          'crossed'  - crossed an edge from stop_edges at ``point``
          'budget'   - step budget exhausted
    """

    def __init__(self, kind, consumed, steps, corner=None, edge=None,
                 point=None, label=None):
        self.kind = kind
        self.consumed = consumed
        self.steps = steps
        self.corner = corner
        self.edge = edge
        self.point = point
        self.label = label

    def __repr__(self):
        return f"TraceOutcome({self.kind}, steps={self.steps})"


def occurrences_at(surf, corner, d):
    """Corners/germs of the vertex class from which direction d emanates."""
    if hasattr(surf, "direction_occurrences"):
        return surf.direction_occurrences(corner, d)
    out = []
    for (t, i) in surf.corner_walk(corner):
        v = surf.vertex(t, i)
        r1 = surf.vertex(t, (i + 1) % 3) - v
        r2 = surf.vertex(t, (i + 2) % 3) - v
        if r1.cross(d).is_zero() and r1.dot(d).sign() > 0:
            out.append(("germ", (t, i)))
        elif r1.cross(d).sign() > 0 and d.cross(r2).sign() > 0:
            out.append(("cone", (t, i)))
    return out


def trace(surf, start, direction, max_displacement=None, budget=100000,
          stop_labels=SINGULAR_LABELS, stop_edges=None):
    """March along ``direction`` from ``start`` until something happens.

    start: ('vertex', occurrence) with occurrence ('germ', edge_ref) or
           ('cone', corner), or ('edge_point', (edge_ref, point)) with the
           point in the edge's chart and the flow entering that triangle.
    max_displacement: optional Vec2 (parallel to direction, same sense);
           the trace ends exactly there with kind 'end'.
    stop_edges: set of edge refs; transversal crossings of these edges (in
           either copy) end the trace with kind 'crossed'.
    """
    glue = _gluing(surf)
    consumed = Vec2(ZERO, ZERO)
    rem = max_displacement
    steps = 0
    stop_edges = stop_edges or frozenset()
    axis_cache = {}

    mode, payload = start
    if mode == "vertex":
        state = ("at_vertex", payload)
    elif mode == "edge_point":
        (t, e), p = payload
        if surf.edge_vector(t, e).cross(direction).sign() <= 0:
            raise SegmentNotEmbedded("direction does not enter the triangle")
        state = ("interior", (t, p))
    else:
        raise ValueError(f"unknown start mode {mode}")

    while True:
        if steps > budget:
            return TraceOutcome("budget", consumed, steps)
        kind, where = state
        if kind == "at_vertex":
            occ_kind, occ = where
            if occ_kind == "germ":
                ref = occ
                vec = surf.edge_vector(*ref)
                if rem is not None:
                    ratio = (rem.x / vec.x if not vec.x.is_zero()
                             else rem.y / vec.y)
                    if ratio < ONE:
                        return TraceOutcome("end", consumed + rem, steps + 1,
                                            edge=ref)
                consumed = consumed + vec
                if rem is not None:
                    rem = rem - vec
                steps += 1
                end_corner = (ref[0], (ref[1] + 1) % 3)
                out = _arrive(surf, end_corner, rem, consumed, steps,
                              stop_labels)
                if out is not None:
                    return out
                state = ("at_vertex", _unique_occ(surf, end_corner,
                                                  direction))
            else:
                t, i = occ
                p0 = surf.vertex(t, i)
                res = _march(surf, glue, t, p0, direction, rem, consumed,
                             steps, stop_labels, stop_edges, axis_cache)
                if isinstance(res, TraceOutcome):
                    return res
                state, consumed, rem, steps = res
        else:
            t, p = where
            res = _march(surf, glue, t, p, direction, rem, consumed, steps,
                         stop_labels, stop_edges, axis_cache)
            if isinstance(res, TraceOutcome):
                return res
            state, consumed, rem, steps = res


def _arrive(surf, corner, rem, consumed, steps, stop_labels):
    lab = surf.label(*corner)
    if lab in stop_labels:
        return TraceOutcome("singular", consumed, steps, corner=corner,
                            label=lab)
    if rem is not None and rem.is_zero():
        return TraceOutcome("end", consumed, steps, corner=corner)
    return None


def _unique_occ(surf, corner, direction):
    occs = occurrences_at(surf, corner, direction)
    if len(occs) != 1:
        raise SegmentNotEmbedded(
            f"expected a unique continuation at a regular vertex, found "
            f"{len(occs)}")
    return occs[0]


def _march(surf, glue, t, p, direction, rem, consumed, steps, stop_labels,
           stop_edges, axis_cache=None):
    """Advance through one triangle from p (chart of t)."""
    if direction.x.is_zero() or direction.y.is_zero():
        return _march_axis(surf, glue, t, p, direction, rem, consumed,
                           steps, stop_labels, stop_edges,
                           axis_cache if axis_cache is not None else {})
    d = rem if rem is not None else direction
    best = None
    for e in range(3):
        u = surf.vertex(t, e)
        vec = surf.edge_vector(t, e)
        slope = vec.cross(d)
        if slope.sign() >= 0:
            continue
        s = vec.cross(p - u) / (-slope)
        if best is None or s < best[0]:
            best = (s, e)
    if best is None:
        raise SegmentNotEmbedded("flow finds no exit (degenerate chart)")
    s_exit, e = best
    if rem is not None and s_exit >= ONE:
        endpoint = p + rem
        consumed = consumed + rem
        steps += 1
        if s_exit == ONE:
            corner = _vertex_at(surf, t, endpoint)
            if corner is not None:
                out = _arrive(surf, corner, rem - rem, consumed, steps,
                              stop_labels)
                return out
            return TraceOutcome("end", consumed, steps, edge=(t, e),
                                point=endpoint)
        return TraceOutcome("end", consumed, steps, point=(t, endpoint))
    q = p + d.scale(s_exit)
    step_vec = q - p
    corner = _vertex_at(surf, t, q)
    if corner is not None:
        consumed = consumed + step_vec
        if rem is not None:
            rem = rem - step_vec
        steps += 1
        out = _arrive(surf, corner, rem, consumed, steps, stop_labels)
        if out is not None:
            return out
        return (("at_vertex", _unique_occ(surf, corner, direction)),
                consumed, rem, steps)
    ref = (t, e)
    partner = glue[ref]
    if ref in stop_edges or partner in stop_edges:
        return TraceOutcome("crossed", consumed + step_vec, steps + 1,
                            edge=ref, point=q)
    consumed = consumed + step_vec
    if rem is not None:
        rem = rem - step_vec
    steps += 1
    t2, e2 = partner
    u_param = _param_on_edge(surf, ref, q)
    p2 = surf.vertex(t2, e2) + surf.edge_vector(t2, e2).scale(ONE - u_param)
    return ("interior", (t2, p2)), consumed, rem, steps


def _param_on_edge(surf, ref, q):
    t, e = ref
    start = surf.vertex(t, e)
    vec = surf.edge_vector(t, e)
    dd = q - start
    return dd.x / vec.x if not vec.x.is_zero() else dd.y / vec.y


def _vertex_at(surf, t, q):
    for i in range(3):
        if surf.vertex(t, i) == q:
            return (t, i)
    return None


def _march_axis(surf, glue, t, p, direction, rem, consumed, steps,
                stop_labels, stop_edges, axis_cache):
    """Axis-aligned marching with componentwise arithmetic (hot path)."""
    vertical = direction.x.is_zero()
    if vertical:
        sgn = direction.y.sign()
        p_c, p_o = p.y, p.x
        flip = 1
    else:
        sgn = direction.x.sign()
        p_c, p_o = p.x, p.y
        flip = -1
    cached = axis_cache.get(t)
    if cached is None:
        tri = (surf.triangles[t] if hasattr(surf, "triangles")
               else surf.tris[t])
        if vertical:
            ces = (tri[0].y, tri[1].y, tri[2].y)
            oes = (tri[0].x, tri[1].x, tri[2].x)
        else:
            ces = (tri[0].x, tri[1].x, tri[2].x)
            oes = (tri[0].y, tri[1].y, tri[2].y)
        spans = []
        for e in range(3):
            e1 = e + 1 if e < 2 else 0
            du = oes[e1] - oes[e]
            spans.append(du.sign() * flip * sgn)
        cached = (ces, oes, spans)
        axis_cache[t] = cached
    ces, oes, spans = cached
    best = None
    for e in range(3):
        # exit edges see the flow leaving: slope = cross(vec, d) < 0
        if spans[e] >= 0:
            continue
        e1 = e + 1 if e < 2 else 0
        frac = (p_o - oes[e]) / (oes[e1] - oes[e])
        cross_c = ces[e] + (ces[e1] - ces[e]) * frac
        s = (cross_c - p_c) * sgn
        if best is None or (s - best[0]).sign() < 0:
            best = (s, e, cross_c)
    if best is None:
        raise SegmentNotEmbedded("flow finds no exit (degenerate chart)")
    s_exit, e, cross_c = best
    if rem is not None:
        rem_len = (rem.y if vertical else rem.x) * sgn
        if (s_exit - rem_len).sign() >= 0:
            endpoint = p + rem
            consumed = consumed + rem
            steps += 1
            if (s_exit - rem_len).sign() == 0:
                corner = _vertex_at(surf, t, endpoint)
                if corner is not None:
                    return _arrive(surf, corner, rem - rem, consumed, steps,
                                   stop_labels)
                return TraceOutcome("end", consumed, steps, edge=(t, e),
                                    point=endpoint)
            return TraceOutcome("end", consumed, steps, point=(t, endpoint))
    if vertical:
        q = Vec2(p.x, cross_c)
    else:
        q = Vec2(cross_c, p.y)
    step_vec = q - p
    corner = _vertex_at(surf, t, q)
    if corner is not None:
        consumed = consumed + step_vec
        if rem is not None:
            rem = rem - step_vec
        steps += 1
        out = _arrive(surf, corner, rem, consumed, steps, stop_labels)
        if out is not None:
            return out
        return (("at_vertex", _unique_occ(surf, corner, direction)),
                consumed, rem, steps)
    ref = (t, e)
    partner = glue[ref]
    if ref in stop_edges or partner in stop_edges:
        return TraceOutcome("crossed", consumed + step_vec, steps + 1,
                            edge=ref, point=q)
    consumed = consumed + step_vec
    if rem is not None:
        rem = rem - step_vec
    steps += 1
    t2, e2 = partner
    u_param = _param_on_edge(surf, ref, q)
    p2 = surf.vertex(t2, e2) + surf.edge_vector(t2, e2).scale(ONE - u_param)
    return ("interior", (t2, p2)), consumed, rem, steps
