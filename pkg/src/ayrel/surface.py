"""Triangulated translation surfaces over Q(alpha).

A surface is a list of positively oriented triangles with exact vertex
coordinates, an involution pairing oriented edges (paired edges carry
opposite vectors: identification by translation), and a black/white/regular
label on every corner, constant along glued vertex classes.

Each triangle lives in its own chart; only edge vectors and the gluing are
intrinsic.  Absolute positions are kept for rendering.
"""

from __future__ import annotations

from fractions import Fraction

from ayrel.errors import (DegenerateTriangle, DisconnectedPath, GluingMismatch,
                          LabelMismatch, NonClosed, SingularMatrix)
from ayrel.field import ZERO, ONE
from ayrel.geom import Mat2, Vec2, orient

BLACK = "black"
WHITE = "white"
REGULAR = "regular"

SINGULAR_LABELS = (BLACK, WHITE)


class Surface:
    def __init__(self, triangles, gluing, labels, validate=True):
        """triangles: sequence of (Vec2, Vec2, Vec2), counterclockwise;
        gluing: dict (tri, edge) -> (tri, edge), an involution on all 3T
        oriented edges; labels: per-corner strings, shape like triangles."""
        self.triangles = tuple(tuple(tri) for tri in triangles)
        self.gluing = dict(gluing)
        self.labels = tuple(tuple(lab) for lab in labels)
        self._classes = None
        self._class_of = None
        if validate:
            self.validate()

    # -- basic structure ---------------------------------------------------

    def num_triangles(self):
        return len(self.triangles)

    def edges(self):
        for t in range(len(self.triangles)):
            for e in range(3):
                yield (t, e)

    def vertex(self, t, i):
        return self.triangles[t][i]

    def edge_vector(self, t, e):
        tri = self.triangles[t]
        return tri[(e + 1) % 3] - tri[e]

    def label(self, t, i):
        return self.labels[t][i]

    def validate(self):
        n = len(self.triangles)
        for t in range(n):
            if orient(*self.triangles[t]) <= 0:
                raise DegenerateTriangle(f"triangle {t} is not ccw")
        for t in range(n):
            for e in range(3):
                partner = self.gluing.get((t, e))
                if partner is None:
                    raise NonClosed(f"edge {(t, e)} is unglued")
                if self.gluing.get(partner) != (t, e):
                    raise GluingMismatch(
                        f"gluing is not an involution at {(t, e)}")
                if partner == (t, e):
                    raise GluingMismatch(f"edge {(t, e)} glued to itself")
                v = self.edge_vector(t, e)
                w = self.edge_vector(*partner)
                if not (v + w).is_zero():
                    raise GluingMismatch(
                        f"edges {(t, e)} and {partner} are not opposite")
        for cls in self.vertex_classes():
            labs = {self.labels[t][i] for (t, i) in cls}
            if len(labs) != 1:
                raise LabelMismatch(f"labels {labs} on one vertex class")

    # -- vertex classes ----------------------------------------------------

    def vertex_classes(self):
        """Corner classes under the gluing, each a sorted tuple of corners."""
        if self._classes is not None:
            return self._classes
        parent = {}

        def find(x):
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return root

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for t in range(len(self.triangles)):
            for i in range(3):
                parent[(t, i)] = (t, i)
        for (t, e), (t2, e2) in self.gluing.items():
            # start of (t,e) is the end of its partner
            union((t, e), (t2, (e2 + 1) % 3))
        groups = {}
        for corner in parent:
            groups.setdefault(find(corner), []).append(corner)
        classes = tuple(tuple(sorted(g)) for g in
                        sorted(groups.values(), key=lambda g: min(g)))
        class_of = {}
        for idx, cls in enumerate(classes):
            for corner in cls:
                class_of[corner] = idx
        self._classes = classes
        self._class_of = class_of
        return classes

    def class_of(self, corner):
        self.vertex_classes()
        return self._class_of[corner]

    def class_label(self, idx):
        t, i = self.vertex_classes()[idx][0]
        return self.labels[t][i]

    def singular_classes(self):
        return tuple(i for i in range(len(self.vertex_classes()))
                     if self.class_label(i) in SINGULAR_LABELS)

    def class_by_label(self, label):
        out = tuple(i for i in range(len(self.vertex_classes()))
                    if self.class_label(i) == label)
        return out

    def corner_walk(self, corner):
        """Corners around the vertex class of ``corner``, in rotation order.

        Successive corners share an edge germ: the outgoing ray of each
        corner equals the second ray of the one before it.
        """
        walk = [corner]
        t, i = corner
        while True:
            t2, e2 = self.gluing[(t, (i + 2) % 3)]
            nxt = (t2, e2)
            if nxt == corner:
                return walk
            walk.append(nxt)
            t, i = nxt

    def cone_angle(self, class_idx):
        """Total angle at the vertex class, in half-turns (cone 2*pi*m -> 2m).

        Counts how often the rotating outgoing ray sweeps past direction
        (1, 0); each full revolution crosses it exactly once.
        """
        corners = self.vertex_classes()[class_idx]
        walk = self.corner_walk(corners[0])
        if len(walk) != len(corners):
            raise LabelMismatch("corner walk does not close over the class")
        revolutions = 0
        d = Vec2(ONE, ZERO)
        for (t, i) in walk:
            a = self.edge_vector(t, i)
            b = self.vertex(t, (i + 2) % 3) - self.vertex(t, i)
            # is d in the half-open ccw cone [a, b)?
            ca = a.cross(d).sign()
            if ca == 0 and a.dot(d).sign() > 0:
                revolutions += 1
            elif ca > 0 and d.cross(b).sign() > 0:
                revolutions += 1
        return 2 * revolutions

    def stratum_check(self):
        """(genus, cone orders) from the Euler characteristic and angles.

        Orders list the r_j with cone angle 2*pi*(r_j + 1) over the labeled
        singular classes; regular marked vertices are not reported.
        """
        n_tri = len(self.triangles)
        chi = len(self.vertex_classes()) - (3 * n_tri) // 2 + n_tri
        genus = (2 - chi) // 2
        orders = []
        for idx in range(len(self.vertex_classes())):
            half_turns = self.cone_angle(idx)
            if self.class_label(idx) in SINGULAR_LABELS:
                orders.append(half_turns // 2 - 1)
        return genus, tuple(sorted(orders, reverse=True))

    # -- geometry ------------------------------------------------------------

    def area(self):
        total = ZERO
        for tri in self.triangles:
            total = total + (tri[1] - tri[0]).cross(tri[2] - tri[0])
        return total * Fraction(1, 2)

    def holonomy(self, path):
        """Sum of edge vectors along ``path``: a list of (tri, edge, sign).

        sign +1 traverses vertex e -> e+1.  Consecutive steps must share a
        vertex class; raises DisconnectedPath otherwise.
        """
        total = Vec2(ZERO, ZERO)
        prev_end = None
        for (t, e, sgn) in path:
            start = (t, e) if sgn > 0 else (t, (e + 1) % 3)
            end = (t, (e + 1) % 3) if sgn > 0 else (t, e)
            if prev_end is not None and self.class_of(start) != prev_end:
                raise DisconnectedPath("path steps do not chain")
            prev_end = self.class_of(end)
            v = self.edge_vector(t, e)
            total = total + (v if sgn > 0 else -v)
        return total

    def chain_holonomy(self, chain):
        """Holonomy of a formal 1-chain {(tri, edge): coeff}."""
        total = Vec2(ZERO, ZERO)
        for (t, e), coeff in chain.items():
            if coeff:
                total = total + self.edge_vector(t, e).scale(coeff)
        return total

    # -- transformations -----------------------------------------------------

    def linear_apply(self, m: Mat2):
        """Post-compose every chart with the matrix ``m`` (det != 0).

        Holonomy of every class transforms by ``m``.  Orientation-reversing
        matrices flip each triangle's vertex order to preserve ccw.
        """
        det_sign = m.det().sign()
        if det_sign == 0:
            raise SingularMatrix("deformation matrix is singular")
        if det_sign > 0:
            tris = [tuple(m.apply(v) for v in tri) for tri in self.triangles]
            return Surface(tris, self.gluing, self.labels)
        # reflection: reorder (0,1,2) -> (0,2,1); old edge k becomes new 2-k
        tris = []
        labels = []
        gluing = {}
        for tri, lab in zip(self.triangles, self.labels):
            a, b, c = (m.apply(v) for v in tri)
            tris.append((a, c, b))
            labels.append((lab[0], lab[2], lab[1]))
        for (t, e), (t2, e2) in self.gluing.items():
            gluing[(t, 2 - e)] = (t2, 2 - e2)
        return Surface(tris, gluing, labels)

    def translated(self, offsets):
        """Translate each triangle chart (presentation only)."""
        tris = [tuple(v + offsets[t] for v in tri)
                for t, tri in enumerate(self.triangles)]
        return Surface(tris, self.gluing, self.labels, validate=False)

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return {
            "polygons": [{"vertices": [v.to_json() for v in tri]}
                         for tri in self.triangles],
            "gluings": sorted([[t, e], [t2, e2]]
                              for (t, e), (t2, e2) in self.gluing.items()
                              if (t, e) < (t2, e2)),
            "labels": [list(lab) for lab in self.labels],
        }

    @staticmethod
    def from_json(obj):
        tris = [tuple(Vec2.from_json(v) for v in poly["vertices"])
                for poly in obj["polygons"]]
        gluing = {}
        for (a, b) in obj["gluings"]:
            gluing[(a[0], a[1])] = (b[0], b[1])
            gluing[(b[0], b[1])] = (a[0], a[1])
        labels = [tuple(lab) for lab in obj["labels"]]
        return Surface(tris, gluing, labels)

    def __repr__(self):
        return f"Surface({len(self.triangles)} triangles)"


def build_surface(polygons, pairings, corner_labels=None):
    """Ear-clip simple polygons and glue their boundary edges.

    polygons: list of vertex loops (ccw, Vec2); pairings: list of pairs
    ((poly, edge), (poly, edge)) covering every boundary edge exactly once;
    corner_labels: optional {(poly, vertex): label}, default regular.
    Raised errors: NonClosed, GluingMismatch, DegenerateTriangle.
    """
    tris = []
    labels = []
    gluing = {}
    boundary = {}  # (poly, edge) -> (tri, edge)

    for p, loop in enumerate(polygons):
        n = len(loop)
        if n < 3:
            raise DegenerateTriangle(f"polygon {p} has fewer than 3 vertices")
        def lab(k):
            if corner_labels is None:
                return REGULAR
            return corner_labels.get((p, k), REGULAR)
        idxs = list(range(n))
        diag = {}
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
                if not ok:
                    continue
                t = len(tris)
                tris.append((a, b, c))
                labels.append((lab(i0), lab(i1), lab(i2)))
                for e, (u, w) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
                    if (w - u) % n == 1:
                        boundary[(p, u)] = (t, e)
                    else:
                        rev = diag.pop((w, u), None)
                        if rev is not None:
                            gluing[(t, e)] = rev
                            gluing[rev] = (t, e)
                        else:
                            diag[(u, w)] = (t, e)
                idxs.pop(pos)
                break
            else:
                raise DegenerateTriangle(f"polygon {p} cannot be ear-clipped")
        i0, i1, i2 = idxs
        a, b, c = loop[i0], loop[i1], loop[i2]
        if orient(a, b, c) <= 0:
            raise DegenerateTriangle(f"polygon {p} has a flat final ear")
        t = len(tris)
        tris.append((a, b, c))
        labels.append((lab(i0), lab(i1), lab(i2)))
        for e, (u, w) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
            if (w - u) % n == 1:
                boundary[(p, u)] = (t, e)
            else:
                rev = diag.pop((w, u), None)
                if rev is not None:
                    gluing[(t, e)] = rev
                    gluing[rev] = (t, e)
                else:
                    diag[(u, w)] = (t, e)
        if diag:
            raise DegenerateTriangle(f"polygon {p} triangulation left "
                                     f"unmatched diagonals")

    seen = set()
    for (pa, pb) in pairings:
        ea = boundary.get(tuple(pa))
        eb = boundary.get(tuple(pb))
        if ea is None or eb is None:
            raise NonClosed(f"pairing {pa} <-> {pb} names a missing edge")
        gluing[ea] = eb
        gluing[eb] = ea
        seen.add(tuple(pa))
        seen.add(tuple(pb))
    for key in boundary:
        if key not in seen:
            raise NonClosed(f"polygon edge {key} is unpaired")
    return Surface(tris, gluing, labels)
