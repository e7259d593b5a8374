"""Build translation surfaces from vertical-cylinder data.

A cylinder is a vertical strip [0, w] x (R mod c): its left and right
boundary circles carry marked singular points at exact heights, partitioned
into named vertical connections; equally named connections on a right and a
left circle are glued by translation.  Each cylinder is cut open along the
horizontal segment at height 0 and triangulated as a convex polygon, with
all breakpoints induced by partner circles inserted up front so glued edges
match one to one.
"""

from __future__ import annotations

from ayrel.errors import GluingMismatch, PreconditionViolated
from ayrel.field import NFElem, ZERO
from ayrel.geom import Vec2
from ayrel.surface import REGULAR, Surface


class CircleEntry:
    __slots__ = ("conn", "height", "label")

    def __init__(self, conn, height, label):
        self.conn = conn
        self.height = height
        self.label = label


class CylSpec:
    def __init__(self, width, circumference, left, right):
        self.width = NFElem.coerce(width)
        self.circumference = NFElem.coerce(circumference)
        self.left = [CircleEntry(c, NFElem.coerce(h), lab)
                     for (c, h, lab) in left]
        self.right = [CircleEntry(c, NFElem.coerce(h), lab)
                      for (c, h, lab) in right]


class Assembly:
    """The assembled surface plus edge bookkeeping for path construction."""

    def __init__(self, surface, sides, bottoms, tops, heights, labels_at):
        self.surface = surface
        # sides[(cyl, 'L'|'R')] = list of (lo, hi, ref); left refs run
        # downward (hi -> lo), right refs upward (lo -> hi)
        self.sides = sides
        self.bottoms = bottoms  # cyl -> bottom edge ref (rightward)
        self.tops = tops
        self.heights = heights  # (cyl, side) -> sorted list of heights
        self.labels_at = labels_at  # (cyl, side, height-key) -> label

    def segment_between(self, cyl, side, lo):
        for (a, b, ref) in self.sides[(cyl, side)]:
            if a == lo:
                return (a, b, ref)
        raise KeyError((cyl, side, lo))

    def walk_circle(self, cyl, side, start, end, upward=True, loops=0):
        """Edge steps along a boundary circle from height start to end.

        Heights are taken mod the circumference; ``loops`` adds that many
        extra full turns (sign follows ``upward``).
        """
        c = self._circ[cyl]
        segs = self.sides[(cyl, side)]
        hs = self.heights[(cyl, side)]
        n = len(hs)
        idx = {h.key(): i for i, h in enumerate(hs)}
        start = _mod(start, c)
        end = _mod(end, c)
        if start.key() not in idx or end.key() not in idx:
            raise KeyError("walk endpoints must be circle vertices")
        i = idx[start.key()]
        j = idx[end.key()]
        steps = []
        total_segments = (j - i) % n if upward else (i - j) % n
        total_segments += loops * n
        pos = i
        for _ in range(total_segments):
            if upward:
                lo = hs[pos]
                seg = self.segment_between(cyl, side, lo)
                pos = (pos + 1) % n
            else:
                pos = (pos - 1) % n
                seg = self.segment_between(cyl, side, hs[pos])
            ref = seg[2]
            if side == "L":
                # left refs run downward
                steps.append((ref[0], ref[1], -1 if upward else 1))
            else:
                steps.append((ref[0], ref[1], 1 if upward else -1))
        return steps

    def cross_cut(self, cyl, rightward=True):
        ref = self.bottoms[cyl]
        return [(ref[0], ref[1], 1 if rightward else -1)]

    def vertex_corner(self, cyl, side, height):
        """A corner of the triangulation at the given circle vertex."""
        c = self._circ[cyl]
        h = _mod(height, c)
        x = ZERO if side == "L" else self._width[cyl]
        target = Vec2(x, h)
        s = self.surface
        for (a, b, ref) in self.sides[(cyl, side)]:
            t, e = ref
            if s.vertex(t, e) == target:
                return (t, e)
            if s.vertex(t, (e + 1) % 3) == target:
                return (t, (e + 1) % 3)
        raise KeyError((cyl, side, height))


def _mod(h, c):
    while h.sign() < 0:
        h = h + c
    while (h - c).sign() >= 0:
        h = h - c
    return h


def assemble(cyls, conns):
    """Build the surface from CylSpec data and conn lengths.

    Returns an Assembly.  Raises PreconditionViolated on inconsistent
    circles and GluingMismatch when conn copies do not align.
    """
    conns = {k: NFElem.coerce(v) for k, v in conns.items()}
    # locate both copies of every conn
    left_of = {}
    right_of = {}
    for ci, spec in enumerate(cyls):
        for entry in spec.left:
            if entry.conn in left_of:
                raise GluingMismatch(f"conn {entry.conn} on two left circles")
            left_of[entry.conn] = (ci, entry)
        for entry in spec.right:
            if entry.conn in right_of:
                raise GluingMismatch(
                    f"conn {entry.conn} on two right circles")
            right_of[entry.conn] = (ci, entry)
    if set(left_of) != set(conns) or set(right_of) != set(conns):
        raise GluingMismatch("every conn needs one left and one right copy")

    # validate circle structure
    for ci, spec in enumerate(cyls):
        for side_entries in (spec.left, spec.right):
            from functools import cmp_to_key
            entries = sorted(side_entries,
                             key=cmp_to_key(
                                 lambda a, b: (a.height - b.height).sign()))
            hs = [en.height for en in entries]
            if any((h - spec.circumference).sign() >= 0 or h.sign() < 0
                   for h in hs):
                raise PreconditionViolated("marked height out of range")
            total = ZERO
            for pos, en in enumerate(entries):
                nxt = entries[(pos + 1) % len(entries)].height
                gap = _mod(nxt - en.height, spec.circumference)
                if len(entries) == 1:
                    gap = spec.circumference
                if gap != conns[en.conn]:
                    raise PreconditionViolated(
                        f"conn {en.conn} length does not fit its circle gap")
                total = total + gap
            if total != spec.circumference:
                raise PreconditionViolated("circle lengths do not add up")

    # induced breakpoints: cut positions of both copies, as offsets
    offsets = {conn: {} for conn in conns}
    for conn, length in conns.items():
        for (ci, entry) in (left_of[conn], right_of[conn]):
            c = cyls[ci].circumference
            off = _mod(-entry.height, c)
            if off.sign() > 0 and (off - length).sign() < 0:
                offsets[conn][off.key()] = off
    offsets_nf = {conn: _sorted_heights(vals.values())
                  for conn, vals in offsets.items()}

    # full vertex height set per circle
    heights = {}
    labels_at = {}
    for ci, spec in enumerate(cyls):
        c = spec.circumference
        for side, entries in (("L", spec.left), ("R", spec.right)):
            hs = {ZERO.key(): ZERO}
            for en in entries:
                hs[en.height.key()] = en.height
                labels_at[(ci, side, en.height.key())] = en.label
                for off in offsets_nf[en.conn]:
                    h2 = _mod(en.height + off, c)
                    hs[h2.key()] = h2
            ordered = _sorted_heights(hs.values())
            heights[(ci, side)] = ordered
            for h in ordered:
                labels_at.setdefault((ci, side, h.key()), REGULAR)

    # triangulate each cylinder polygon by a two-chain zigzag
    triangles = []
    labels = []
    gluing = {}
    sides = {}
    bottoms = {}
    tops = {}

    for ci, spec in enumerate(cyls):
        w, c = spec.width, spec.circumference
        lh = heights[(ci, "L")]
        rh = heights[(ci, "R")]
        lab_l = [labels_at[(ci, "L", h.key())] for h in lh]
        lab_r = [labels_at[(ci, "R", h.key())] for h in rh]
        lpts = ([Vec2(ZERO, h) for h in lh] + [Vec2(ZERO, c)])
        rpts = ([Vec2(w, h) for h in rh] + [Vec2(w, c)])
        llabs = lab_l + [lab_l[0]]
        rlabs = lab_r + [lab_r[0]]
        refs = _zigzag(triangles, labels, gluing, lpts, llabs, rpts, rlabs)
        left_refs, right_refs, bottom_ref, top_ref = refs
        sides[(ci, "L")] = [(lh[i], lh[i + 1] if i + 1 < len(lh) else c,
                             left_refs[i]) for i in range(len(lh))]
        sides[(ci, "R")] = [(rh[i], rh[i + 1] if i + 1 < len(rh) else c,
                             right_refs[i]) for i in range(len(rh))]
        bottoms[ci] = bottom_ref
        tops[ci] = top_ref
        gluing[bottom_ref] = top_ref
        gluing[top_ref] = bottom_ref

    # glue conn copies segment by segment
    for conn, length in conns.items():
        ci_l, en_l = left_of[conn]
        ci_r, en_r = right_of[conn]
        segs_l = _conn_segments(cyls[ci_l], heights[(ci_l, "L")],
                                sides[(ci_l, "L")], en_l.height, length)
        segs_r = _conn_segments(cyls[ci_r], heights[(ci_r, "R")],
                                sides[(ci_r, "R")], en_r.height, length)
        if len(segs_l) != len(segs_r):
            raise GluingMismatch(f"conn {conn} splits differently on its "
                                 f"two circles")
        for (len_l, ref_l), (len_r, ref_r) in zip(segs_l, segs_r):
            if len_l != len_r:
                raise GluingMismatch(f"conn {conn} pieces differ in length")
            gluing[ref_l] = ref_r
            gluing[ref_r] = ref_l

    surf = Surface(triangles, gluing, labels)
    asm = Assembly(surf, sides, bottoms, tops, heights, labels_at)
    asm._circ = {ci: cyls[ci].circumference for ci in range(len(cyls))}
    asm._width = {ci: cyls[ci].width for ci in range(len(cyls))}
    return asm


def _sorted_heights(values):
    from functools import cmp_to_key
    return sorted(values, key=cmp_to_key(lambda a, b: (a - b).sign()))


def _conn_segments(spec, hs, side_segs, start, length):
    """Ordered (length, ref) pieces of a conn copy, walking upward."""
    c = spec.circumference
    n = len(hs)
    idx = {h.key(): i for i, h in enumerate(hs)}
    start = _mod(start, c)
    i = idx[start.key()]
    out = []
    consumed = ZERO
    guard = 0
    while consumed != length:
        guard += 1
        if guard > n + 2:
            raise GluingMismatch("conn does not close on circle vertices")
        lo = hs[i]
        seg = next(s for s in side_segs if s[0] == lo)
        seg_len = seg[1] - seg[0]
        out.append((seg_len, seg[2]))
        consumed = consumed + seg_len
        i = (i + 1) % n
        if (consumed - length).sign() > 0:
            raise GluingMismatch("conn does not end on a circle vertex")
    return out


def _zigzag(triangles, labels, gluing, lpts, llabs, rpts, rlabs):
    """Triangulate the cut cylinder polygon between two vertical chains.

    Chains run bottom to top and include both corners.  Returns
    (left_refs, right_refs, bottom_ref, top_ref): left_refs[i] is the
    downward edge over [lpts[i], lpts[i+1]]; right_refs upward.
    """
    nl, nr = len(lpts), len(rpts)
    left_refs = [None] * (nl - 1)
    right_refs = [None] * (nr - 1)
    i, j = 0, 0
    prev_diag = None  # ref of the previous triangle's edge to re-glue
    bottom_ref = None
    top_ref = None
    while i < nl - 1 or j < nr - 1:
        if i < nl - 1 and (j == nr - 1
                           or (lpts[i + 1].y - rpts[j + 1].y).sign() <= 0):
            # advance the left chain: triangle (L_i, R_j, L_{i+1})
            t = len(triangles)
            triangles.append((lpts[i], rpts[j], lpts[i + 1]))
            labels.append((llabs[i], rlabs[j], llabs[i + 1]))
            left_refs[i] = (t, 2)  # L_{i+1} -> L_i, downward
            if prev_diag is None:
                bottom_ref = (t, 0)
            else:
                gluing[prev_diag] = (t, 0)
                gluing[(t, 0)] = prev_diag
            prev_diag = (t, 1)  # R_j -> L_{i+1}; next tri edge0 reversed
            i += 1
        else:
            # advance the right chain: triangle (L_i, R_j, R_{j+1})
            t = len(triangles)
            triangles.append((lpts[i], rpts[j], rpts[j + 1]))
            labels.append((llabs[i], rlabs[j], rlabs[j + 1]))
            right_refs[j] = (t, 1)  # R_j -> R_{j+1}, upward
            if prev_diag is None:
                bottom_ref = (t, 0)
            else:
                gluing[prev_diag] = (t, 0)
                gluing[(t, 0)] = prev_diag
            prev_diag = (t, 2)  # R_{j+1} -> L_i ... reversed next
            j += 1
    top_ref = prev_diag
    return left_refs, right_refs, bottom_ref, top_ref
