"""Canonical forms and translation-equivalence of surfaces.

The isomorphism test reduces both sides to Delaunay form, merges triangles
across cocircular edges into canonical Delaunay cells (rectilinear
presentations are full of cocircular quadruples, so bare Delaunay
triangulations are not canonical), and then propagates a seed cell match
across gluings.  Matches preserve edge vectors and the black/white labels.
"""

from __future__ import annotations

from ayrel.errors import AyrelError, GuardExceeded, SegmentNotEmbedded
from ayrel.geom import incircle
from ayrel.mesh import MeshBuilder
from ayrel.surface import REGULAR, Surface


class AmbiguousDelaunay(AyrelError):
    """A cocircular cell did not assemble into an embedded disk."""


def _developed_apex(surf, ref):
    """Apex of the partner triangle developed into ref's chart."""
    t, e = ref
    gl = surf.gluing if hasattr(surf, "gluing") else surf.glue
    t2, e2 = gl[ref]
    tau = surf.vertex(t, e) - surf.vertex(t2, (e2 + 1) % 3)
    return surf.vertex(t2, (e2 + 2) % 3) + tau


def _incircle_across(surf, ref):
    t, e = ref
    a = surf.vertex(t, e)
    b = surf.vertex(t, (e + 1) % 3)
    c = surf.vertex(t, (e + 2) % 3)
    return incircle(a, b, c, _developed_apex(surf, ref))


def delaunay_mesh(mb: MeshBuilder, guard=200000):
    """Flip until every edge satisfies the (non-strict) incircle condition."""
    work = [(t, e) for t in range(len(mb.tris)) if mb.alive[t]
            for e in range(3)]
    count = 0
    while work:
        ref = work.pop()
        if not mb.alive[ref[0]] or ref not in mb.glue:
            continue
        if _incircle_across(mb, ref) > 0:
            count += 1
            if count > guard:
                raise GuardExceeded("delaunay flip guard exceeded")
            new_diag = mb.flip(ref)
            m1 = new_diag[0]
            m2 = mb.glue[new_diag][0]
            for t in (m1, m2):
                for e in range(3):
                    work.append((t, e))
    return mb


def delaunay(surface: Surface) -> Surface:
    """Delaunay retriangulation; isomorphic to the input."""
    mb = MeshBuilder(surface)
    delaunay_mesh(mb)
    return mb.to_surface()


def strip_regular_vertices(surface: Surface) -> Surface:
    """Remove removable regular marked points (presentation cleanup).

    Removal attempts run on a scratch copy and are adopted only on success,
    so unremovable vertices (e.g. the one marked point of a torus, whose
    link meets its own class) leave the mesh untouched.
    """
    mb = MeshBuilder(surface)
    while True:
        progressed = False
        # cheap sweep first: plain ear clips, rescanning after each success
        # so chains of helper vertices fall quickly
        while True:
            removed = False
            for rep in _regular_reps(mb):
                trial = mb.copy()
                if trial.remove_regular_vertex(rep, budget=1,
                                               split_loops=False):
                    mb = trial
                    removed = True
                    progressed = True
                    break
            if not removed:
                break
        # full flip search only for the stubborn leftovers
        for rep in _regular_reps(mb):
            if not mb.alive[rep[0]] or mb.class_label(rep) != REGULAR:
                continue
            trial = mb.copy()
            if trial.remove_regular_vertex(rep):
                mb = trial
                progressed = True
        if not progressed:
            break
    return mb.to_surface()


def _regular_reps(mb):
    reps = []
    seen = set()
    for t in range(len(mb.tris)):
        if not mb.alive[t]:
            continue
        for i in range(3):
            if (t, i) in seen:
                continue
            seen.update(mb.corner_walk((t, i)))
            if mb.class_label((t, i)) == REGULAR:
                reps.append((t, i))
    return reps


class Cell:
    """A Delaunay cell: triangles sharing one circumdisk, as a disk."""

    __slots__ = ("tris", "boundary", "key_cache")

    def __init__(self, tris, boundary):
        self.tris = tris
        self.boundary = boundary  # list of (edge_ref, vector, start_label)
        self.key_cache = None

    def shape_key(self):
        """Rotation-invariant canonical key of (vectors, labels)."""
        if self.key_cache is None:
            seq = [(v.key(), lab) for (_, v, lab) in self.boundary]
            n = len(seq)
            best = min(tuple(seq[(i + k) % n] for k in range(n))
                       for i in range(n))
            self.key_cache = best
        return self.key_cache


def delaunay_cells(surface: Surface):
    """Canonical cell decomposition of a Delaunay surface.

    Returns (cells, edge_home) with edge_home mapping each boundary edge ref
    to (cell index, boundary position).
    """
    n = len(surface.triangles)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    removable = set()
    for (t, e) in surface.edges():
        if (t, e) in removable:
            continue
        if _incircle_across(surface, (t, e)) == 0:
            removable.add((t, e))
            removable.add(surface.gluing[(t, e)])
            ra, rb = find(t), find(surface.gluing[(t, e)][0])
            if ra != rb:
                parent[ra] = rb
    groups = {}
    for t in range(n):
        groups.setdefault(find(t), []).append(t)
    cells = []
    edge_home = {}
    for root in sorted(groups, key=lambda r: min(groups[r])):
        tris = sorted(groups[root])
        boundary_edges = [(t, e) for t in tris for e in range(3)
                          if (t, e) not in removable]
        if not boundary_edges:
            raise AmbiguousDelaunay("cell with empty boundary")
        start = min(boundary_edges)
        loop = []
        cur = start
        while True:
            loop.append(cur)
            # next boundary edge ccw around the cell
            nxt = (cur[0], (cur[1] + 1) % 3)
            while nxt in removable:
                t2, e2 = surface.gluing[nxt]
                nxt = (t2, (e2 + 1) % 3)
            cur = nxt
            if cur == start:
                break
            if len(loop) > len(boundary_edges):
                raise AmbiguousDelaunay("cell boundary fails to close")
        if len(loop) != len(boundary_edges):
            raise AmbiguousDelaunay("cell boundary is not a single loop")
        boundary = [(ref, surface.edge_vector(*ref), surface.label(*ref))
                    for ref in loop]
        for pos, (ref, _, _) in enumerate(boundary):
            edge_home[ref] = (len(cells), pos)
        cells.append(Cell(tuple(tris), boundary))
    return cells, edge_home


class IsoMapping:
    """A label- and holonomy-preserving match of Delaunay cell complexes."""

    def __init__(self, cell_map, surf_a, surf_b):
        self.cell_map = cell_map  # cell index in a -> (cell in b, rotation)
        self.surf_a = surf_a
        self.surf_b = surf_b

    def __repr__(self):
        return f"IsoMapping({len(self.cell_map)} cells)"


def iso_check(a: Surface, b: Surface):
    """Translation equivalence preserving black/white labels.

    Both surfaces are stripped of removable regular vertices and Delaunay
    reduced; cells are then matched from a deterministic seed (lowest
    canonical key first).  Returns an IsoMapping or None.
    """
    sa = delaunay(strip_regular_vertices(a))
    sb = delaunay(strip_regular_vertices(b))
    if len(sa.triangles) != len(sb.triangles):
        return None
    if sa.area() != sb.area():
        return None
    if sa.stratum_check() != sb.stratum_check():
        return None
    cells_a, home_a = delaunay_cells(sa)
    cells_b, home_b = delaunay_cells(sb)
    if len(cells_a) != len(cells_b):
        return None
    keys_a = sorted(c.shape_key() for c in cells_a)
    keys_b = sorted(c.shape_key() for c in cells_b)
    if keys_a != keys_b:
        return None

    seed_a = min(range(len(cells_a)), key=lambda i: cells_a[i].shape_key())
    seed_key = cells_a[seed_a].shape_key()
    nb = len(cells_b)
    for cb in range(nb):
        if cells_b[cb].shape_key() != seed_key:
            continue
        size = len(cells_b[cb].boundary)
        for rot in range(size):
            mapping = _propagate(cells_a, home_a, sa, cells_b, home_b, sb,
                                 seed_a, cb, rot)
            if mapping is not None:
                return IsoMapping(mapping, sa, sb)
    return None


def _match_rotation(cell_a, cell_b, rot):
    size = len(cell_a.boundary)
    if len(cell_b.boundary) != size:
        return False
    for k in range(size):
        _, va, la = cell_a.boundary[k]
        _, vb, lb = cell_b.boundary[(k + rot) % size]
        if va != vb or la != lb:
            return False
    return True


def _propagate(cells_a, home_a, sa, cells_b, home_b, sb, seed_a, seed_b,
               rot):
    assignment = {seed_a: (seed_b, rot)}
    stack = [seed_a]
    if not _match_rotation(cells_a[seed_a], cells_b[seed_b], rot):
        return None
    while stack:
        ca = stack.pop()
        cb, r = assignment[ca]
        size = len(cells_a[ca].boundary)
        for pos in range(size):
            ref_a = cells_a[ca].boundary[pos][0]
            ref_b = cells_b[cb].boundary[(pos + r) % size][0]
            pa = sa.gluing[ref_a]
            pb = sb.gluing[ref_b]
            ca2, pos_a2 = home_a[pa]
            cb2, pos_b2 = home_b[pb]
            rot2 = (pos_b2 - pos_a2) % len(cells_a[ca2].boundary)
            if len(cells_a[ca2].boundary) != len(cells_b[cb2].boundary):
                return None
            if ca2 in assignment:
                if assignment[ca2] != (cb2, rot2):
                    return None
            else:
                if not _match_rotation(cells_a[ca2], cells_b[cb2], rot2):
                    return None
                assignment[ca2] = (cb2, rot2)
                stack.append(ca2)
    if len(assignment) != len(cells_a):
        return None
    used = {v[0] for v in assignment.values()}
    if len(used) != len(cells_b):
        return None
    return assignment


def cut_paste(surface: Surface, point, displacement):
    """Re-triangulate so the straight segment from ``point`` along
    ``displacement`` becomes an edge chain; the translation structure (and
    hence every holonomy) is unchanged.

    ``point`` addresses a surface point as (triangle, barycentric NFElem
    triple).  The segment must avoid singularities in its interior and at
    its far end (SegmentHitsSingularity) and must be embeddable
    (SegmentNotEmbedded).
    """
    from ayrel.field import NFElem, ONE, ZERO
    from ayrel.geom import Vec2
    from ayrel.trace import occurrences_at
    mb = MeshBuilder(surface)
    t, bary = point
    b = [NFElem.coerce(x) for x in bary]
    if sum(x.sign() < 0 for x in b) or (b[0] + b[1] + b[2]) != ONE:
        raise ValueError("barycentric coordinates must be a convex triple")
    tri = surface.triangles[t]
    pos = Vec2(b[0] * tri[0].x + b[1] * tri[1].x + b[2] * tri[2].x,
               b[0] * tri[0].y + b[1] * tri[1].y + b[2] * tri[2].y)
    zeros = [i for i in range(3) if b[i].is_zero()]
    if len(zeros) == 2:
        corner = (t, next(i for i in range(3) if i not in zeros))
    elif len(zeros) == 1:
        e = (zeros[0] + 1) % 3
        _halves, corner = mb.split_edge((t, e), pos)
    else:
        corner = mb.fan_split(t, pos)
    occs = mb.direction_occurrences(corner, displacement)
    if not occs:
        raise SegmentNotEmbedded("no sector contains the cut direction")
    mb.embed_segment(occs[0], displacement)
    return mb.to_surface()
