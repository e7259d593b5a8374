"""Mutable triangulation editor backing all surgeries.

Every operation preserves the translation structure exactly: coordinates are
only copied, split, or developed by translations, and gluing stays an
involution with opposite vectors.  Triangles are replaced, never edited, so
an edge reference is stable until a mutation touches its triangle; mutations
record relocations in ``reloc`` so callers can transport chains across
refinements.
"""

from __future__ import annotations

from fractions import Fraction

from ayrel.errors import (Collision, DegenerateTriangle, GluingMismatch,
                          SegmentHitsSingularity, SegmentNotEmbedded)
from ayrel.field import NFElem, ZERO, ONE
from ayrel.geom import Vec2, orient, segments_cross
from ayrel.surface import REGULAR, SINGULAR_LABELS, Surface

_HALF_ELEM = NFElem(Fraction(1, 2))


class MeshBuilder:
    def __init__(self, surface: Surface):
        self.tris = [tuple(tri) for tri in surface.triangles]
        self.labs = [tuple(lab) for lab in surface.labels]
        self.glue = dict(surface.gluing)
        self.alive = [True] * len(self.tris)
        # old edge -> ('moved', ref) | ('split', [ref, ref]) | ('detour', refs)
        self.reloc = {}

    # -- read access --------------------------------------------------------

    def copy(self):
        dup = MeshBuilder.__new__(MeshBuilder)
        dup.tris = list(self.tris)
        dup.labs = list(self.labs)
        dup.glue = dict(self.glue)
        dup.alive = list(self.alive)
        dup.reloc = dict(self.reloc)
        return dup

    def vertex(self, t, i):
        return self.tris[t][i]

    def edge_vector(self, t, e):
        tri = self.tris[t]
        return tri[(e + 1) % 3] - tri[e]

    def label(self, t, i):
        return self.labs[t][i]

    def corner_walk(self, corner):
        walk = [corner]
        t, i = corner
        while True:
            t2, e2 = self.glue[(t, (i + 2) % 3)]
            nxt = (t2, e2)
            if nxt == corner:
                return walk
            walk.append(nxt)
            t, i = nxt

    def class_label(self, corner):
        return self.labs[corner[0]][corner[1]]

    def to_surface(self, validate=True):
        remap = {}
        tris, labs = [], []
        for t, ok in enumerate(self.alive):
            if ok:
                remap[t] = len(tris)
                tris.append(self.tris[t])
                labs.append(self.labs[t])
        gluing = {}
        for (t, e), (t2, e2) in self.glue.items():
            if self.alive[t] and self.alive[t2]:
                gluing[(remap[t], e)] = (remap[t2], e2)
        surf = Surface(tris, gluing, labs, validate=validate)
        surf._mesh_remap = remap
        return surf

    def remap_ref(self, surface, ref):
        """Translate a builder edge ref into the compacted surface's ref."""
        return (surface._mesh_remap[ref[0]], ref[1])

    def remap_chain(self, surface, chain):
        return [(surface._mesh_remap[t], e, s) for (t, e, s) in chain]

    # -- relocation bookkeeping ----------------------------------------------

    def _record(self, old_ref, kind, payload):
        self.reloc[old_ref] = (kind, payload)

    def resolve_edge(self, ref):
        """Current directed refs covering an old directed edge, in order."""
        entry = self.reloc.get(ref)
        if entry is None:
            return [ref]
        kind, payload = entry
        if kind == "moved":
            return self.resolve_edge(payload)
        out = []
        for child in payload:
            out.extend(self.resolve_edge(child))
        return out

    def resolve_chain(self, chain):
        """Transport a list of (t, e, sign) steps across recorded mutations."""
        out = []
        for (t, e, sgn) in chain:
            parts = self.resolve_edge((t, e))
            if sgn < 0:
                parts = list(reversed(parts))
            for ref in parts:
                out.append((ref[0], ref[1], sgn))
        return out

    # -- primitive mutations ---------------------------------------------------

    def _new_tri(self, verts, labs):
        self.tris.append(tuple(verts))
        self.labs.append(tuple(labs))
        self.alive.append(True)
        return len(self.tris) - 1

    def _kill(self, t):
        self.alive[t] = False

    def _pair(self, a, b):
        va = self.edge_vector(*a)
        vb = self.edge_vector(*b)
        if not (va + vb).is_zero():
            raise GluingMismatch(f"cannot glue {a} to {b}: not opposite")
        self.glue[a] = b
        self.glue[b] = a

    def _reattach(self, old_ref, new_ref):
        """Point old_ref's partner at new_ref (partner unchanged)."""
        partner = self.glue.pop(old_ref)
        self.glue[partner] = new_ref
        self.glue[new_ref] = partner
        self._record(old_ref, "moved", new_ref)

    def _split_one_side(self, t, e, p):
        """Split triangle t along edge e at point p (chart of t).

        Returns (first_half, second_half) dangling refs.
        """
        i, j, k = e, (e + 1) % 3, (e + 2) % 3
        v = self.tris[t]
        lab = self.labs[t]
        a = self._new_tri((v[i], p, v[k]), (lab[i], REGULAR, lab[k]))
        b = self._new_tri((p, v[j], v[k]), (REGULAR, lab[j], lab[k]))
        for tri in (a, b):
            if orient(*self.tris[tri]) <= 0:
                raise DegenerateTriangle("edge split point off the edge")
        self._kill(t)
        self._pair((a, 1), (b, 2))
        self._reattach((t, j), (b, 1))
        self._reattach((t, k), (a, 2))
        return (a, 0), (b, 0)

    def _live_ref(self, ref):
        while ref in self.reloc and self.reloc[ref][0] == "moved":
            ref = self.reloc[ref][1]
        return ref

    def split_edge(self, ref, p):
        """Split the glued edge pair at point p (given in ref's chart).

        Returns ((h1, h2), corner): h1 runs from the old start to p, h2 from
        p onward; both sides are re-glued crosswise.  The new vertex is
        labeled regular; ``corner`` is its corner on h2's triangle.
        """
        t, e = ref
        partner = self.glue[ref]
        u = self._edge_param(ref, p)
        h1, h2 = self._split_one_side(t, e, p)
        self._record(ref, "split", [h1, h2])
        pref = self._live_ref(partner)
        t2, e2 = pref
        p2 = self.tris[t2][e2] + self.edge_vector(t2, e2).scale(ONE - u)
        g1, g2 = self._split_one_side(t2, e2, p2)
        self._record(pref, "split", [g1, g2])
        if partner != pref:
            self.reloc[partner] = ("split", [g1, g2])
        self.glue.pop(ref, None)
        self.glue.pop(pref, None)
        self._pair(h1, g2)
        self._pair(h2, g1)
        return (h1, h2), (h2[0], 0)

    def _edge_param(self, ref, p):
        t, e = ref
        start = self.tris[t][e]
        vec = self.edge_vector(t, e)
        d = p - start
        u = d.x / vec.x if not vec.x.is_zero() else d.y / vec.y
        if not (vec.scale(u) - d).is_zero():
            raise SegmentNotEmbedded("split point off the edge line")
        if not (ZERO < u < ONE):
            raise SegmentNotEmbedded("split point outside the open edge")
        return u

    def fan_split(self, t, p):
        """Insert interior point p into triangle t as three sub-triangles.

        Returns the corner at p on the sub-triangle over old edge 0.
        """
        v = self.tris[t]
        lab = self.labs[t]
        subs = []
        for e in range(3):
            s = self._new_tri((v[e], v[(e + 1) % 3], p),
                              (lab[e], lab[(e + 1) % 3], REGULAR))
            if orient(*self.tris[s]) <= 0:
                raise DegenerateTriangle("fan point not interior")
            subs.append(s)
        self._kill(t)
        for e in range(3):
            self._reattach((t, e), (subs[e], 0))
            self._pair((subs[e], 1), (subs[(e + 1) % 3], 2))
        return (subs[0], 2)

    # -- directions around a vertex ---------------------------------------------

    def corner_rays(self, corner):
        """(r1, r2): rays from the corner's vertex toward the two others."""
        t, i = corner
        v = self.tris[t]
        return v[(i + 1) % 3] - v[i], v[(i + 2) % 3] - v[i]

    def germs_at(self, corner, d):
        """Outgoing edge refs at the vertex class aligned with direction d."""
        out = []
        for (t, i) in self.corner_walk(corner):
            r1 = self.edge_vector(t, i)
            if r1.cross(d).is_zero() and r1.dot(d).sign() > 0:
                out.append((t, i))
        return out

    def cone_corner(self, corner, d):
        for (t, i) in self.corner_walk(corner):
            r1, r2 = self.corner_rays((t, i))
            if r1.cross(d).sign() > 0 and d.cross(r2).sign() > 0:
                return (t, i)
        return None

    def direction_occurrences(self, corner, d):
        """Corners of the class from which direction d emanates, walk order.

        Entries are ('germ', edge_ref) or ('cone', corner); a vertex of cone
        angle 2*pi*m has exactly m of them.
        """
        out = []
        for (t, i) in self.corner_walk(corner):
            r1, r2 = self.corner_rays((t, i))
            if r1.cross(d).is_zero() and r1.dot(d).sign() > 0:
                out.append(("germ", (t, i)))
            elif r1.cross(d).sign() > 0 and d.cross(r2).sign() > 0:
                out.append(("cone", (t, i)))
        return out

    # -- straight segment embedding ------------------------------------------------

    def embed_segment(self, occurrence, dvec, stop_labels=SINGULAR_LABELS):
        """Embed a straight segment of displacement ``dvec`` as an edge chain.

        ``occurrence`` locates the start direction at a vertex (an entry of
        direction_occurrences).  Vertices labeled in ``stop_labels`` must not
        lie on the open segment or at its far end; hitting one raises
        SegmentHitsSingularity with the exact prefix displacement consumed.
        Returns (chain, end_corner); the chain's vectors sum to ``dvec``.
        """
        chain = []
        consumed = Vec2(ZERO, ZERO)
        rem = dvec
        kind, where = occurrence
        while True:
            if kind == "germ":
                ref = self._live_ref(where)
                if chain:
                    walked = {r for step in chain
                              for r in self.resolve_edge(step)}
                    walked |= {self.glue[r] for r in walked if r in
                               self.glue}
                    if ref in walked:
                        raise SegmentNotEmbedded(
                            "segment runs back over itself")
                vec = self.edge_vector(*ref)
                t_full = self._ray_scale(vec, rem)
                if t_full < ONE:
                    p = self.tris[ref[0]][ref[1]] + vec.scale(t_full)
                    (h1, _h2), newc = self.split_edge(ref, p)
                    chain.append(h1)
                    consumed = consumed + rem
                    return self._finish(chain, newc, consumed, stop_labels)
                chain.append(ref)
                consumed = consumed + vec
                rem = rem - vec
                end = (ref[0], (ref[1] + 1) % 3)
                if rem.is_zero():
                    return self._finish(chain, end, consumed, stop_labels)
                self._hit_check(end, consumed, stop_labels)
                kind, where = self._continue_from(end, rem)
            else:
                t, i = where
                a = self.tris[t][(i + 1) % 3]
                b = self.tris[t][(i + 2) % 3]
                p0 = self.tris[t][i]
                det = rem.cross(b - a)
                s_exit = (a - p0).cross(b - a) / det
                opp = (t, (i + 1) % 3)
                if s_exit > ONE:
                    newc = self.fan_split(t, p0 + rem)
                    chain.append(self._fan_chord(t, i))
                    consumed = consumed + rem
                    return self._finish(chain, newc, consumed, stop_labels)
                q = p0 + rem.scale(s_exit)
                (_h1, h2), newc = self.split_edge(opp, q)
                chain.append((h2[0], 2))
                consumed = consumed + rem.scale(s_exit)
                rem = rem - rem.scale(s_exit)
                if rem.is_zero():
                    return self._finish(chain, newc, consumed, stop_labels)
                self._hit_check(newc, consumed, stop_labels)
                kind, where = self._continue_from(newc, rem)

    def _fan_chord(self, old_t, i):
        # after fan_split(old_t, p) the chord v_i -> p is edge 1 of the
        # sub-triangle rebuilt over old edge (i + 2)
        entry = self.reloc[(old_t, (i + 2) % 3)]
        assert entry[0] == "moved" and entry[1][1] == 0
        return (entry[1][0], 1)

    def _ray_scale(self, vec, rem):
        """rem = t * vec for parallel co-directed vectors: return t."""
        return rem.x / vec.x if not vec.x.is_zero() else rem.y / vec.y

    def _hit_check(self, corner, consumed, stop_labels):
        lab = self.class_label(corner)
        if lab in stop_labels:
            raise SegmentHitsSingularity(
                f"segment meets a {lab} vertex mid-course",
                hit_length=consumed)

    def _finish(self, chain, end_corner, consumed, stop_labels):
        lab = self.class_label(end_corner)
        if lab in stop_labels:
            raise SegmentHitsSingularity(
                "segment ends on a singular vertex", hit_length=consumed)
        return chain, end_corner

    def _continue_from(self, corner, rem):
        germs = self.germs_at(corner, rem)
        if germs:
            return ("germ", germs[0])
        cone = self.cone_corner(corner, rem)
        if cone is None:
            raise SegmentNotEmbedded("no corner cone contains the direction")
        return ("cone", cone)

    # -- vertex motion and collapse ---------------------------------------------

    def move_class(self, corners, dvec):
        """Translate every corner in ``corners`` by dvec (exact edge-shift).

        The caller is responsible for end-state orientation checks; zero-area
        triangles must be collapsed immediately afterwards.
        """
        touched = {}
        for (t, i) in corners:
            touched.setdefault(t, []).append(i)
        for t, idxs in touched.items():
            v = list(self.tris[t])
            for i in idxs:
                v[i] = v[i] + dvec
            self.tris[t] = tuple(v)

    def zero_edges(self):
        return [(t, e) for t in range(len(self.tris)) if self.alive[t]
                for e in range(3) if self.edge_vector(t, e).is_zero()]

    def collapse_zero_edge(self, ref):
        """Remove the degenerate triangle pair around a zero-length edge.

        The edge's endpoint classes merge; black-white merges raise
        Collision, and a surviving singular label repaints the merged class.
        """
        t, e = ref
        t2, e2 = self.glue[ref]
        if t2 == t:
            raise DegenerateTriangle("fully collapsed triangle")
        lab_a = self.labs[t][e]
        lab_b = self.labs[t][(e + 1) % 3]
        if (lab_a in SINGULAR_LABELS and lab_b in SINGULAR_LABELS
                and lab_a != lab_b):
            raise Collision("zero edge joins the two singularities")
        winner = lab_a if lab_a in SINGULAR_LABELS else lab_b
        dead = (t, t2)
        zero_of = {t: e, t2: e2}

        def through(refin):
            # entering a dead triangle via a nonzero edge leaves via the
            # other nonzero edge's old partner
            td, ed = refin
            ez = zero_of[td]
            other = 3 - ed - ez  # the remaining edge index of {0,1,2}
            return self.glue[(td, other)]

        new_pairs = []
        seen = set()
        for td in dead:
            for k in range(3):
                if k == zero_of[td]:
                    continue
                outer = self.glue[(td, k)]
                if outer[0] in dead or (td, k) in seen:
                    continue
                cur = (td, k)
                guard = 0
                while cur[0] in dead:
                    cur = through(cur)
                    guard += 1
                    if guard > 8:
                        raise DegenerateTriangle("collapse cycle")
                seen.add(self.glue[cur])
                new_pairs.append((outer, cur))
        for td in dead:
            self._kill(td)
            for k in range(3):
                self.glue.pop((td, k), None)
        for a, b in new_pairs:
            if a != b:
                self._pair(a, b)
        if winner != REGULAR:
            self.repaint_class_containing(winner)

    def repaint_class_containing(self, label):
        """Repaint every vertex class containing ``label`` uniformly."""
        seen = set()
        for t in range(len(self.tris)):
            if not self.alive[t]:
                continue
            for i in range(3):
                if (t, i) in seen:
                    continue
                walk = self.corner_walk((t, i))
                seen.update(walk)
                labs = {self.labs[c[0]][c[1]] for c in walk}
                if label in labs:
                    for (tc, ic) in walk:
                        row = list(self.labs[tc])
                        row[ic] = label
                        self.labs[tc] = tuple(row)

    def set_class_label(self, corner, label):
        for (t, i) in self.corner_walk(corner):
            row = list(self.labs[t])
            row[i] = label
            self.labs[t] = tuple(row)

    # -- edge flip ----------------------------------------------------------------

    def flip(self, ref):
        """Flip the diagonal ``ref``; the joint quad must be strictly convex.

        Returns the new diagonal's ref.
        """
        t, e = ref
        t2, e2 = self.glue[ref]
        v, lab = self.tris[t], self.labs[t]
        v2, lab2 = self.tris[t2], self.labs[t2]
        a, b, c = v[e], v[(e + 1) % 3], v[(e + 2) % 3]
        tau = a - v2[(e2 + 1) % 3]
        d = v2[(e2 + 2) % 3] + tau
        la, lb, lc = lab[e], lab[(e + 1) % 3], lab[(e + 2) % 3]
        ld = lab2[(e2 + 2) % 3]
        if orient(a, d, c) <= 0 or orient(d, b, c) <= 0:
            raise DegenerateTriangle("flip on a non-convex quad")
        m1 = self._new_tri((a, d, c), (la, ld, lc))
        m2 = self._new_tri((d, b, c), (ld, lb, lc))
        self._kill(t)
        self._kill(t2)
        self.glue.pop(ref, None)
        self.glue.pop((t2, e2), None)
        self._pair((m1, 1), (m2, 2))
        self._reattach((t, (e + 1) % 3), (m2, 1))
        self._reattach((t, (e + 2) % 3), (m1, 2))
        self._reattach((t2, (e2 + 1) % 3), (m1, 0))
        self._reattach((t2, (e2 + 2) % 3), (m2, 0))
        self._record(ref, "detour", [(m1, 0), (m1, 1)])
        self._record((t2, e2), "detour", [(m2, 0), (m2, 1)])
        return (m1, 1)

    # -- regular vertex removal -------------------------------------------------------

    def develop_star(self, corner):
        """Develop the star of a vertex into the first corner's chart."""
        walk = self.corner_walk(corner)
        developed = []
        center = None
        for q, (t, i) in enumerate(walk):
            tri = self.tris[t]
            tau = Vec2(ZERO, ZERO) if q == 0 else center - tri[i]
            if q == 0:
                center = tri[i]
            developed.append(tuple(w + tau for w in tri))
        return walk, developed

    def remove_regular_vertex(self, corner, budget=160, split_loops=True):
        """Remove a 2*pi regular vertex by retriangulating its star.

        Tries to ear-clip the developed link polygon (which tolerates
        collinear link vertices) or to merge a degree-3 star; when blocked,
        runs a bounded best-first search over incident and link edge flips
        ordered by (self-loops at the vertex, star degree), and as a last
        resort splits each loop edge at its midpoint once and retries (the
        helper midpoints are removed by later passes).  Returns False,
        leaving the mesh untouched, when nothing works -- in particular for
        genuinely unremovable vertices such as a torus's only marked point.
        """
        if self.class_label(corner) != REGULAR:
            return False
        import heapq

        counter = 0
        frontier = []
        start = self.copy()
        heapq.heappush(frontier,
                       (start._star_score(start.corner_walk(corner)),
                        counter, start, corner))
        remaining = budget
        while frontier and remaining > 0:
            remaining -= 1
            _score, _, mb, c = heapq.heappop(frontier)
            walk, developed = mb.develop_star(c)
            t_last, i_last = walk[-1]
            t0, i0 = walk[0]
            if developed[-1][(i_last + 2) % 3] != developed[0][(i0 + 1) % 3]:
                continue  # not a flat point; unremovable along this branch
            if len(walk) == 3:
                if mb._merge_degree3(walk, developed):
                    self._adopt(mb)
                    return True
            elif mb._remove_by_earclip(walk, developed):
                self._adopt(mb)
                return True
            if remaining <= 0:
                break  # do not pay for expansions that cannot be explored
            here = mb._star_score(walk)
            for q, (t, i) in enumerate(walk):
                for ref in ((t, i), (t, (i + 1) % 3)):
                    child = mb.copy()
                    try:
                        child.flip(ref)
                    except DegenerateTriangle:
                        continue
                    c2 = next((cc for cc in walk if child.alive[cc[0]]),
                              None)
                    if c2 is None:
                        continue
                    score = child._star_score(child.corner_walk(c2))
                    # prune dominated moves: more loops and no slimmer star
                    if score[0] > here[0] and score[1] >= here[1]:
                        continue
                    counter += 1
                    heapq.heappush(frontier, (score, counter, child, c2))
        if not split_loops:
            return False
        # break self-adjacency: split every loop edge at its midpoint once
        trial = self.copy()
        walk = trial.corner_walk(corner)
        own = set(walk)
        changed = False
        for (t, i) in list(walk):
            if not trial.alive[t]:
                continue
            if any(w2 in own
                   for w2 in trial.corner_walk((t, (i + 1) % 3))):
                mid = trial.vertex(t, i) + \
                    trial.edge_vector(t, i).scale(_HALF_ELEM)
                try:
                    trial.split_edge((t, i), mid)
                except (DegenerateTriangle, SegmentNotEmbedded):
                    continue
                changed = True
                walk = [cc for cc in walk if trial.alive[cc[0]]]
                if not walk:
                    return False
                own = set()
                for cc in walk:
                    own.update(trial.corner_walk(cc))
        if changed and trial.remove_regular_vertex(walk[0], budget=budget,
                                                   split_loops=False):
            self._adopt(trial)
            return True
        return False

    def _adopt(self, other):
        self.tris = other.tris
        self.labs = other.labs
        self.glue = other.glue
        self.alive = other.alive
        self.reloc = other.reloc

    def _star_score(self, walk):
        own = set(walk)
        loops = 0
        for (t, i) in walk:
            j = (i + 1) % 3
            if any(w in own for w in self.corner_walk((t, j))):
                loops += 1
        return (loops, len(walk))

    def _remove_by_earclip(self, walk, developed):
        own = set(walk)
        link = []
        labels = []
        for q, (t, i) in enumerate(walk):
            j = (i + 1) % 3
            if any(w in own for w in self.corner_walk((t, j))):
                return False
            link.append(developed[q][j])
            labels.append(self.labs[t][j])
        n = len(link)
        for p in range(n):
            for q in range(p + 1, n):
                if link[p] == link[q]:
                    return False
        for p in range(n):
            a, b = link[p], link[(p + 1) % n]
            for q in range(n):
                if q in (p, (p - 1) % n, (p + 1) % n):
                    continue
                if segments_cross(a, b, link[q], link[(q + 1) % n]):
                    return False
        ears = _earclip(link)
        if ears is None:
            return False
        old_outer = [self.glue[(t, (i + 1) % 3)] for (t, i) in walk]
        for (t, i) in walk:
            for e in range(3):
                self.glue.pop((t, e), None)
            self._kill(t)
        new_edge_of = {}
        inner = {}
        for (p, q, r) in ears:
            s = self._new_tri((link[p], link[q], link[r]),
                              (labels[p], labels[q], labels[r]))
            for e, (u, w) in enumerate(((p, q), (q, r), (r, p))):
                if (w - u) % n == 1:
                    new_edge_of[u] = (s, e)
                else:
                    rev = inner.pop((w, u), None)
                    if rev is not None:
                        self._pair((s, e), rev)
                    else:
                        inner[(u, w)] = (s, e)
        assert not inner, "ear clipping left open diagonals"
        for q in range(n):
            self._record((walk[q][0], (walk[q][1] + 1) % 3), "moved",
                         new_edge_of[q])
        for q in range(n):
            self._pair(new_edge_of[q], self._live_ref(old_outer[q]))
        return True

    def _merge_degree3(self, walk, developed):
        own = set(walk)
        link = []
        labels = []
        for q, (t, i) in enumerate(walk):
            j = (i + 1) % 3
            if any(w in own for w in self.corner_walk((t, j))):
                return False
            link.append(developed[q][j])
            labels.append(self.labs[t][j])
        if orient(*link) <= 0:
            return False
        if len(set(walk_t for (walk_t, _) in walk)) != 3:
            return False
        old_outer = [self.glue[(t, (i + 1) % 3)] for (t, i) in walk]
        for (t, i) in walk:
            for e in range(3):
                self.glue.pop((t, e), None)
            self._kill(t)
        s = self._new_tri(tuple(link), tuple(labels))
        for q, (t, i) in enumerate(walk):
            self._record((t, (i + 1) % 3), "moved", (s, q))
        for q in range(3):
            self._pair((s, q), self._live_ref(old_outer[q]))
        return True


def _earclip(loop):
    """Index triangles ear-clipping a simple ccw polygon; None on failure."""
    n = len(loop)
    idxs = list(range(n))
    out = []
    while len(idxs) > 3:
        for pos in range(len(idxs)):
            i0 = idxs[pos - 1]
            i1 = idxs[pos]
            i2 = idxs[(pos + 1) % len(idxs)]
            a, b, c = loop[i0], loop[i1], loop[i2]
            if orient(a, b, c) <= 0:
                continue
            ok = True
            for j in idxs:
                if j in (i0, i1, i2):
                    continue
                q = loop[j]
                if (orient(a, b, q) >= 0 and orient(b, c, q) >= 0
                        and orient(c, a, q) >= 0):
                    ok = False
                    break
            if ok:
                out.append((i0, i1, i2))
                idxs.pop(pos)
                break
        else:
            return None
    if orient(loop[idxs[0]], loop[idxs[1]], loop[idxs[2]]) <= 0:
        return None
    out.append(tuple(idxs))
    return out
