"""Vertical separatrix tracing and cylinder decompositions.

All six upward separatrices (three per 6*pi singularity) are traced
exactly and embedded as edge chains; cutting along them splits the surface
into its vertical cylinders.  Core classes are identified by decomposing
the boundary cycle over the recorded basis paths in the chain complex, and
each cylinder gets a deterministic crossing saddle connection providing its
width and twist.
"""

from __future__ import annotations

from functools import cmp_to_key

from ayrel.errors import (BudgetExceeded, GuardExceeded,
                          NotPeriodicWithinBudget, VerificationFailed)
from ayrel.family import AYSurface, circumference
from ayrel.field import NFElem, ZERO, ONE, alpha_power
from ayrel.geom import Vec2
from ayrel.homology import ChainComplex, RelHomClass
from ayrel.mesh import MeshBuilder
from ayrel.surface import BLACK, SINGULAR_LABELS, WHITE, Surface
from ayrel.trace import occurrences_at, trace

V_UP = Vec2(ZERO, ONE)


class SaddleConnection:
    """A vertical saddle connection found by upward tracing."""

    def __init__(self, start_label, end_label, holonomy, steps, chain=None):
        self.start_label = start_label
        self.end_label = end_label
        self.holonomy = holonomy
        self.steps = steps
        self.chain = chain

    def __repr__(self):
        return (f"SaddleConnection({self.start_label}->{self.end_label}, "
                f"hol=({self.holonomy.x}, {self.holonomy.y}))")


class Cylinder:
    def __init__(self, circumference, width, core_class, twist_hol,
                 left_labels, right_labels, area, left_entries=None,
                 right_entries=None):
        self.circumference = circumference
        self.width = width
        self.core_class = core_class
        self.twist_hol = twist_hol  # holonomy (x_i, y_i) of sigma_i
        self.left_labels = left_labels
        self.right_labels = right_labels
        self.area = area
        # circle structure: [(conn_id, start_height mod c, label)]
        self.left_entries = left_entries or []
        self.right_entries = right_entries or []

    @property
    def kind(self):
        """'white-left', 'black-left' or 'same' per the boundary colors."""
        if self.left_labels == {WHITE} and self.right_labels == {BLACK}:
            return "white-left"
        if self.left_labels == {BLACK} and self.right_labels == {WHITE}:
            return "black-left"
        if len(self.left_labels) == 1 and self.left_labels == \
                self.right_labels:
            return "same"
        return "mixed"

    def __repr__(self):
        return (f"Cylinder(c={self.circumference}, w={self.width}, "
                f"{self.kind})")


class CylinderDecomposition:
    def __init__(self, cylinders, surface, connections, mixed,
                 tri_cylinder=None, basis_steps=None):
        self.cylinders = cylinders  # ordered by increasing circumference
        self.surface = surface  # refined surface with connections embedded
        self.connections = connections
        self.mixed = mixed  # True when some circle carries both colors
        self.tri_cylinder = tri_cylinder or {}
        self.basis_steps = basis_steps or {}

    def partition(self):
        """(k, l, m): white-left, black-left, same-boundary counts."""
        kinds = [c.kind for c in self.cylinders]
        return (kinds.count("white-left"), kinds.count("black-left"),
                kinds.count("same"))

    def total_area(self):
        total = ZERO
        for c in self.cylinders:
            total = total + c.circumference * c.width
        return total

    def __repr__(self):
        return f"CylinderDecomposition({len(self.cylinders)} cylinders)"


def trace_separatrix(surface, sing_class, direction_index, budget=100000):
    """Trace one upward separatrix to the next singularity, exactly.

    Raises BudgetExceeded when no singularity is met within ``budget``
    crossings (the minimal-direction signal).
    """
    if isinstance(surface, AYSurface):
        surface = surface.surface
    corners = surface.vertex_classes()[sing_class]
    occs = occurrences_at(surface, corners[0], V_UP)
    if not 0 <= direction_index < len(occs):
        raise GuardExceeded(f"direction index {direction_index} out of "
                            f"range ({len(occs)} upward sectors)")
    out = trace(surface, ("vertex", occs[direction_index]), V_UP,
                budget=budget)
    if out.kind == "budget":
        raise BudgetExceeded("no singularity met within the trace budget",
                             steps=out.steps)
    if out.kind != "singular":
        raise VerificationFailed(f"unexpected trace outcome {out.kind}")
    if not out.consumed.x.is_zero():
        raise VerificationFailed("vertical trace drifted horizontally")
    return SaddleConnection(surface.class_label(sing_class), out.label,
                            out.consumed, out.steps)


def vertical_decomposition(surface, budget=100000, table=None):
    """Decompose into vertical cylinders by cutting along all upward
    separatrices.

    Accepts an AYSurface (its path table identifies core classes) or a bare
    Surface.  Raises NotPeriodicWithinBudget when some separatrix does not
    close within the budget.
    """
    ay = None
    if isinstance(surface, AYSurface):
        ay = surface
        surface = ay.surface
        table = ay.table if table is None else table
    mb = MeshBuilder(surface)
    chains = []
    guard = 0
    while True:
        guard += 1
        if guard > 16:
            raise GuardExceeded("separatrix embedding loop")
        target = _next_unembedded(mb, chains)
        if target is None:
            break
        probe = trace(mb, ("vertex", target), V_UP, budget=budget)
        if probe.kind == "budget":
            raise NotPeriodicWithinBudget(
                f"an upward separatrix stayed open for {probe.steps} steps")
        if probe.kind != "singular":
            raise VerificationFailed(f"trace outcome {probe.kind}")
        chain, _end = mb.embed_segment(target, probe.consumed,
                                       stop_labels=())
        chains.append(chain)

    resolved = [[r for (t, e, s) in mb.resolve_chain(
        [(t, e, 1) for (t, e) in ch]) for r in [(t, e)]]
        for ch in chains]
    # unglue every connection edge pair
    partners = {}
    for ch in resolved:
        for ref in ch:
            partners[ref] = mb.glue[ref]
    for ref, par in partners.items():
        mb.glue.pop(ref, None)
        mb.glue.pop(par, None)

    comp = {}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for t in range(len(mb.tris)):
        if mb.alive[t]:
            comp[t] = t
    for (a, _e), (b, e2) in list(mb.glue.items()):
        if mb.alive[a] and mb.alive[b]:
            ra, rb = find(a), find(b)
            if ra != rb:
                comp[ra] = rb

    groups = {}
    for t in comp:
        groups.setdefault(find(t), []).append(t)

    # restore the gluing (the cut was bookkeeping only)
    for ref, par in partners.items():
        mb.glue[ref] = par
        mb.glue[par] = ref
    refined = mb.to_surface()
    remap = refined._mesh_remap

    basis_vecs = None
    basis_steps = {}
    cc = None
    if table is not None:
        cc = ChainComplex(refined)
        basis_vecs = {}
        for lab, chain in table.paths.items():
            moved = mb.remap_chain(refined, mb.resolve_chain(chain))
            basis_vecs[lab] = cc.path_to_chain(moved)
            basis_steps[lab] = moved

    cut_edges = set(partners) | set(partners.values())

    cylinders = []
    mixed = False
    for root, tris in sorted(groups.items(), key=lambda kv: min(kv[1])):
        east = []
        west = []
        for t in tris:
            for e in range(3):
                if (t, e) in cut_edges:
                    vec = mb.edge_vector(t, e)
                    if vec.y.sign() > 0:
                        east.append((t, e))
                    else:
                        west.append((t, e))
        circ = ZERO
        for ref in east:
            circ = circ + mb.edge_vector(*ref).y
        circ_w = ZERO
        for ref in west:
            circ_w = circ_w - mb.edge_vector(*ref).y
        if circ != circ_w:
            raise VerificationFailed("cylinder boundary lengths differ")
        dev = _develop_component(mb, tris, cut_edges)
        xs = [dev[t][i].x for t in tris for i in range(3)]
        xmin = xs[0]
        xmax = xs[0]
        for x in xs[1:]:
            if (x - xmin).sign() < 0:
                xmin = x
            if (x - xmax).sign() > 0:
                xmax = x
        width = xmax - xmin
        area = ZERO
        for t in tris:
            a, b, c = mb.tris[t]
            area = area + (b - a).cross(c - a)
        area = area * NFElem.coerce(1) / 2

        west_sing = _boundary_singulars(mb, dev, west, xmin)
        east_sing = _boundary_singulars(mb, dev, east, xmax)
        left_labels = {lab for (lab, _y) in west_sing}
        right_labels = {lab for (lab, _y) in east_sing}
        if len(left_labels) > 1 or len(right_labels) > 1:
            mixed = True
        twist = _twist_connection(west_sing, east_sing, width, circ)
        ref_conn = {}
        for ci, ch in enumerate(resolved):
            for ref in ch:
                ref_conn[ref] = ci
                ref_conn[partners[ref]] = ci
        left_entries = _circle_entries(mb, dev, west, ref_conn, circ,
                                       downward=True)
        right_entries = _circle_entries(mb, dev, east, ref_conn, circ,
                                        downward=False)
        core_class = None
        if basis_vecs is not None:
            core_steps = [(remap[t], e, -1) for (t, e) in west]
            core_vec = cc.path_to_chain(core_steps)
            coeffs = cc.decompose(core_vec,
                                  [basis_vecs[lab] for lab in
                                   sorted(basis_vecs)])
            if coeffs is not None:
                cls = RelHomClass.zero()
                for w, lab in zip(coeffs, sorted(basis_vecs)):
                    kind, k = lab
                    gen = (RelHomClass.beta(k) if kind == "beta"
                           else RelHomClass.gamma(k))
                    cls = cls + w * gen
                core_class = cls
        cylinders.append(Cylinder(circ, width, core_class, twist,
                                  left_labels, right_labels, area,
                                  left_entries, right_entries))

    order = sorted(range(len(cylinders)), key=cmp_to_key(
        lambda a, b: (cylinders[a].circumference
                      - cylinders[b].circumference).sign()))
    roots_sorted = [root for root, _ in
                    sorted(groups.items(), key=lambda kv: min(kv[1]))]
    tri_cylinder = {}
    for pos, idx in enumerate(order):
        for t in groups[roots_sorted[idx]]:
            if t in remap:
                tri_cylinder[remap[t]] = pos
    cylinders = [cylinders[idx] for idx in order]
    conns = []
    for ch in resolved:
        hol = Vec2(ZERO, ZERO)
        first = ch[0]
        last = ch[-1]
        start_lab = mb.labs[first[0]][first[1]]
        end_lab = mb.labs[last[0]][(last[1] + 1) % 3]
        for ref in ch:
            hol = hol + mb.edge_vector(*ref)
        conns.append(SaddleConnection(start_lab, end_lab, hol, len(ch),
                                      chain=ch))
    return CylinderDecomposition(cylinders, refined, conns, mixed,
                                 tri_cylinder, basis_steps)


def _circle_entries(mb, dev, refs, ref_conn, circ, downward):
    """[(conn_id, start_height mod c, bottom label)] for one boundary side.

    Heights use the component's development gauge; the bottom endpoint of a
    connection is its singular corner (interior breakpoints are regular).
    """
    out = []
    by_conn = {}
    for ref in refs:
        by_conn.setdefault(ref_conn[ref], []).append(ref)
    for conn_id, conn_refs in sorted(by_conn.items()):
        bottom = None
        for (t, e) in conn_refs:
            corner = (t, (e + 1) % 3) if downward else (t, e)
            if mb.labs[corner[0]][corner[1]] in SINGULAR_LABELS:
                if bottom is not None:
                    raise VerificationFailed(
                        "connection with two bottom endpoints on one side")
                bottom = corner
        if bottom is None:
            raise VerificationFailed("connection without a singular end")
        h = dev[bottom[0]][bottom[1]].y
        h = _mod_circ(h, circ)
        out.append((conn_id, h, mb.labs[bottom[0]][bottom[1]]))
    return out


def _mod_circ(h, circ):
    while h.sign() < 0:
        h = h + circ
    while (h - circ).sign() >= 0:
        h = h - circ
    return h


def _next_unembedded(mb, chains):
    firsts = set()
    for ch in chains:
        firsts.add(mb.resolve_edge(ch[0])[0])
    for t in range(len(mb.tris)):
        if not mb.alive[t]:
            continue
        for i in range(3):
            if mb.labs[t][i] in SINGULAR_LABELS:
                occs = mb.direction_occurrences((t, i), V_UP)
                for occ in occs:
                    if occ[0] == "germ" and occ[1] in firsts:
                        continue
                    return occ
    return None


def _develop_component(mb, tris, cut_edges):
    """Translate each triangle of a cylinder into one common chart,
    never crossing the cut connections (the development would wrap)."""
    from collections import deque
    tri_set = set(tris)
    dev = {tris[0]: tuple(mb.tris[tris[0]])}
    dq = deque([tris[0]])
    while dq:
        t = dq.popleft()
        for e in range(3):
            if (t, e) in cut_edges:
                continue
            partner = mb.glue.get((t, e))
            if partner is None:
                continue
            t2, e2 = partner
            if t2 not in tri_set or t2 in dev:
                continue
            # the end of (t2,e2) is the start of (t,e)
            tau = dev[t][e] - mb.tris[t2][(e2 + 1) % 3]
            dev[t2] = tuple(v + tau for v in mb.tris[t2])
            dq.append(t2)
    if len(dev) != len(tris):
        raise VerificationFailed("cylinder failed to develop")
    return dev


def _boundary_singulars(mb, dev, refs, x_side):
    """(label, developed height) of singular endpoints on a boundary side."""
    out = {}
    for (t, e) in refs:
        for corner in ((t, e), (t, (e + 1) % 3)):
            lab = mb.labs[corner[0]][corner[1]]
            if lab in SINGULAR_LABELS:
                pos = dev[corner[0]][corner[1]]
                if pos.x != x_side:
                    raise VerificationFailed(
                        "boundary singularity off its side")
                out[(lab, pos.y.key())] = (lab, pos.y)
    return list(out.values())


def _twist_connection(west_sing, east_sing, width, circ):
    """Deterministic crossing saddle connection: minimal |y|, exact ties by
    coordinate key."""
    if not west_sing or not east_sing:
        return None
    best = None
    for (_labw, yw) in west_sing:
        for (_labe, ye) in east_sing:
            base = ye - yw
            # wrap into (-c/2, c/2]
            while (base * 2 - circ).sign() > 0:
                base = base - circ
            while (base * 2 + circ).sign() <= 0:
                base = base + circ
            cand = Vec2(width, base)
            if best is None:
                best = cand
                continue
            d = (abs(cand.y) - abs(best.y)).sign()
            if d < 0 or (d == 0 and cand.y.key() < best.y.key()):
                best = cand
    return best


# -- geometry verification ------------------------------------------------------


class WidthFunction:
    """The two-branch width of C_j as an exact function of the rel time."""

    def __init__(self, j):
        if abs(j) > 40:
            raise GuardExceeded("width function index guard")
        self.j = j
        self.lo = alpha_power(-(j - 3))
        self.mid = alpha_power(-j)
        self.hi = alpha_power(-(j + 1))

    def value(self, r):
        r = NFElem.coerce(r)
        if (r - self.lo).sign() <= 0 or (r - self.hi).sign() >= 0:
            return ZERO
        if (r - self.mid).sign() <= 0:
            return r - self.lo
        return self.hi - r

    def branches_agree_at_mid(self):
        return (self.mid - self.lo) == (self.hi - self.mid)


def cylinder_index(cyl, r=None):
    """The j with circumference 2 alpha^j (1 + alpha^2), or None."""
    for j in range(-40, 41):
        if cyl.circumference == circumference(j):
            return j
    return None


def check_geometry(decomp, r):
    """Match every cylinder against the closed-form circumference, width
    and core class at rel time r; returns a report dict."""
    r = NFElem.coerce(r)
    rows = []
    ok = True
    for cyl in decomp.cylinders:
        j = cylinder_index(cyl)
        row = {"j": j}
        if j is None:
            row["pass"] = False
            ok = False
            rows.append(row)
            continue
        wf = WidthFunction(j)
        row["circumference_ok"] = cyl.circumference == circumference(j)
        row["width_ok"] = cyl.width == wf.value(r)
        row["core_ok"] = (cyl.core_class is None
                          or cyl.core_class == RelHomClass.core(j))
        row["pass"] = (row["circumference_ok"] and row["width_ok"]
                       and row["core_ok"])
        ok = ok and row["pass"]
        rows.append(row)
    area_ok = decomp.total_area() == decomp.surface.area()
    return {"cylinders": rows, "area_ok": area_ok, "pass": ok and area_ok}


def core_dual(decomp):
    """C*_i(gamma) = gamma ^ C_i on the recorded basis paths.

    Computed from the x-holonomy a path accumulates inside each cylinder:
    every full crossing contributes one width, partial excursions cancel.
    Requires the decomposition to carry basis paths (built from an
    AYSurface) and returns {label: [intersection with each cylinder]}.
    """
    if not decomp.basis_steps:
        raise VerificationFailed("decomposition carries no basis paths")
    s = decomp.surface
    out = {}
    for lab, steps in decomp.basis_steps.items():
        acc = [ZERO for _ in decomp.cylinders]
        for (t, e, sgn) in steps:
            cyl = decomp.tri_cylinder[t]
            v = s.edge_vector(t, e)
            acc[cyl] = acc[cyl] + (v.x if sgn > 0 else -v.x)
        nums = []
        for i, cylinder in enumerate(decomp.cylinders):
            ratio = acc[i] / cylinder.width
            if not ratio.is_rational() or ratio.c0.denominator != 1:
                raise VerificationFailed(
                    f"non-integer crossing count for {lab}")
            nums.append(int(ratio.c0))
        out[lab] = nums
    return out


def predicted_core_dual(window, lab):
    """The intersection table forced by the closed forms: expanding the
    x-holonomy over the four width functions of the window.

    Indices follow the decomposition's cylinder order (increasing
    circumference, i.e. decreasing family index j): position p holds C_j
    with j = window + 3 - p.
    """
    kind, k = lab
    rel = k - window
    vec = [0, 0, 0, 0]
    if rel == 0:
        # gamma_k crosses C_k once and the youngest cylinder C_{k+3} twice
        vec[3] = 1
        vec[0] = 2
    elif rel in (1, 2, 3):
        vec[3 - rel] = 1
    else:
        raise GuardExceeded("label outside the window")
    if kind == "beta":
        vec = [-x for x in vec]
    return vec


def width_function(j):
    """The exact two-branch width of C_j as a function of the rel time."""
    return WidthFunction(j)


def decomposition_rows(decomp, r=None):
    """Report rows: per-cylinder index, exact geometry, twist and core."""
    rows = []
    for cyl in decomp.cylinders:
        rows.append({
            "j": cylinder_index(cyl),
            "circumference": str(cyl.circumference),
            "width": str(cyl.width),
            "twist": str(cyl.twist_hol.y) if cyl.twist_hol else "",
            "kind": cyl.kind,
            "core_class": list(cyl.core_class.coeffs)
            if cyl.core_class else None,
        })
    out = {"rel_time": str(r) if r is not None else "",
           "cylinders": rows,
           "partition": list(decomp.partition()),
           "mixed": decomp.mixed}
    return out


def decomposition_tsv(decomp, r=None):
    head = "j\tcircumference\twidth\ttwist\tkind\tcore_class"
    lines = [head]
    for row in decomposition_rows(decomp, r)["cylinders"]:
        core = ";".join(str(c) for c in row["core_class"]) \
            if row["core_class"] else ""
        lines.append(f"{row['j']}\t{row['circumference']}\t{row['width']}"
                     f"\t{row['twist']}\t{row['kind']}\t{core}")
    return "\n".join(lines) + "\n"
