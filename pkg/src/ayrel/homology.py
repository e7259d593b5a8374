"""Relative homology of the Arnoux-Yoccoz family: the beta/gamma classes.

H_1(S, Sigma; Z) is Z^7; we fix the basis
    B = {beta_0, gamma_0, beta_1, gamma_1, beta_2, gamma_2, beta_3}
with gamma_3 the dependent eighth generator,
    gamma_3 = beta_0 + gamma_0 - beta_1 - gamma_1 - beta_2 - gamma_2 - beta_3.
The two bi-infinite families extend by the inductive rules
    beta_{k+4}  = gamma_k - beta_{k+2} - gamma_{k+2} - 2*gamma_{k+3},
    gamma_{k+4} = beta_k  - gamma_{k+2} - beta_{k+2} - 2*beta_{k+3},
applied forward and backward.  beta classes run white -> black (boundary
coefficient -1), gamma classes black -> white (+1); a real-rel deformation
by r adds r times the boundary coefficient to the x-holonomy.

The module also provides the chain complex of a concrete triangulation, so
path classes can be identified exactly (H_1 here is torsion-free, hence
rational solving plus integrality checks decides membership).
"""

from __future__ import annotations

from ayrel import linalg
from ayrel.errors import GuardExceeded, MissingRepresentative
from ayrel.field import NFElem, RAT, alpha_power
from ayrel.geom import Vec2
from ayrel.surface import BLACK, REGULAR, WHITE, Surface

K_GUARD = 64

# index of each basis generator inside B
_B_INDEX = {("beta", 0): 0, ("gamma", 0): 1, ("beta", 1): 2,
            ("gamma", 1): 3, ("beta", 2): 4, ("gamma", 2): 5,
            ("beta", 3): 6}

BASIS_LABELS = (("beta", 0), ("gamma", 0), ("beta", 1), ("gamma", 1),
                ("beta", 2), ("gamma", 2), ("beta", 3))


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vscale(a, k):
    return tuple(k * x for x in a)


_ZERO7 = (0,) * 7
_GAMMA3 = (1, 1, -1, -1, -1, -1, -1)

_gen_cache = {}
for lab, idx in _B_INDEX.items():
    v = [0] * 7
    v[idx] = 1
    _gen_cache[lab] = tuple(v)
_gen_cache[("gamma", 3)] = _GAMMA3


def generator_coords(kind, k):
    """Coordinates of beta_k or gamma_k in the basis B, |k| <= K_GUARD."""
    if abs(k) > K_GUARD:
        raise GuardExceeded(f"family index {k} beyond guard {K_GUARD}")
    key = (kind, k)
    if key in _gen_cache:
        return _gen_cache[key]
    if k > 3:
        # beta_{k} = gamma_{k-4} - beta_{k-2} - gamma_{k-2} - 2 gamma_{k-1}
        b = _vadd(generator_coords("gamma", k - 4),
                  _vadd(_vscale(generator_coords("beta", k - 2), -1),
                        _vadd(_vscale(generator_coords("gamma", k - 2), -1),
                              _vscale(generator_coords("gamma", k - 1),
                                      -2))))
        g = _vadd(generator_coords("beta", k - 4),
                  _vadd(_vscale(generator_coords("gamma", k - 2), -1),
                        _vadd(_vscale(generator_coords("beta", k - 2), -1),
                              _vscale(generator_coords("beta", k - 1),
                                      -2))))
        _gen_cache[("beta", k)] = b
        _gen_cache[("gamma", k)] = g
    else:
        # k < 0: invert the rules
        # beta_k = gamma_{k+4} + gamma_{k+2} + beta_{k+2} + 2 beta_{k+3}
        b = _vadd(generator_coords("gamma", k + 4),
                  _vadd(generator_coords("gamma", k + 2),
                        _vadd(generator_coords("beta", k + 2),
                              _vscale(generator_coords("beta", k + 3), 2))))
        g = _vadd(generator_coords("beta", k + 4),
                  _vadd(generator_coords("beta", k + 2),
                        _vadd(generator_coords("gamma", k + 2),
                              _vscale(generator_coords("gamma", k + 3),
                                      2))))
        _gen_cache[("beta", k)] = b
        _gen_cache[("gamma", k)] = g
    return _gen_cache[key]


class RelHomClass:
    """Integer vector in the basis B, with its boundary coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(int(c) for c in coeffs)
        if len(self.coeffs) != 7:
            raise ValueError("expected 7 coordinates")

    @staticmethod
    def beta(k):
        return RelHomClass(generator_coords("beta", k))

    @staticmethod
    def gamma(k):
        return RelHomClass(generator_coords("gamma", k))

    @staticmethod
    def core(j):
        return RelHomClass.beta(j) + RelHomClass.gamma(j)

    @staticmethod
    def zero():
        return RelHomClass(_ZERO7)

    @property
    def boundary_coeff(self):
        """+1 per gamma summand (black->white), -1 per beta summand."""
        c = self.coeffs
        return (c[1] + c[3] + c[5]) - (c[0] + c[2] + c[4] + c[6])

    def __add__(self, other):
        return RelHomClass(_vadd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return RelHomClass(_vadd(self.coeffs, _vscale(other.coeffs, -1)))

    def __neg__(self):
        return RelHomClass(_vscale(self.coeffs, -1))

    def __mul__(self, k):
        return RelHomClass(_vscale(self.coeffs, int(k)))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RelHomClass) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RelHomClass{self.coeffs}"

    def is_zero(self):
        return self.coeffs == _ZERO7

    def holonomy(self, r):
        """Closed-form holonomy on the surface at rel time r."""
        r = NFElem.coerce(r)
        total = Vec2(0, 0)
        for c, lab in zip(self.coeffs, BASIS_LABELS):
            if c:
                kind, k = lab
                b, g = hol_closed_form(k, r)
                total = total + (b if kind == "beta" else g).scale(c)
        return total

    def to_json(self):
        return list(self.coeffs)


def extend_family(k):
    """(beta_k, gamma_k) as RelHomClass pairs, any |k| <= guard."""
    return RelHomClass.beta(k), RelHomClass.gamma(k)


def hol_closed_form(k, r):
    """Exact holonomies (hol(beta_k, x_r), hol(gamma_k, x_r)).

    hol(beta_k, x_r) = (alpha^(3-k) - r, alpha^k + alpha^(k+2)); the gamma
    class mirrors the x-part.
    """
    if abs(k) > K_GUARD:
        raise GuardExceeded(f"family index {k} beyond guard {K_GUARD}")
    r = NFElem.coerce(r)
    x = alpha_power(3 - k) - r
    y = alpha_power(k) + alpha_power(k + 2)
    return Vec2(x, y), Vec2(-x, y)


_PHI_MATRIX = None


def phi_matrix():
    """Matrix of phi_* on the basis B (columns are images)."""
    global _PHI_MATRIX
    if _PHI_MATRIX is None:
        cols = []
        for (kind, k) in BASIS_LABELS:
            cols.append(generator_coords(kind, k + 1))
        _PHI_MATRIX = tuple(tuple(cols[j][i] for j in range(7))
                            for i in range(7))
    return _PHI_MATRIX

def phi_push(cls: RelHomClass) -> RelHomClass:
    """The shift beta_k -> beta_{k+1}, gamma_k -> gamma_{k+1}, linearly."""
    m = phi_matrix()
    out = [0] * 7
    for i in range(7):
        out[i] = sum(m[i][j] * cls.coeffs[j] for j in range(7))
    return RelHomClass(out)


_WINDOW_LABELS = {}


def window_labels(k):
    """Generator labels of the window basis at k (gamma_{k+3} dropped)."""
    return (("beta", k), ("gamma", k), ("beta", k + 1), ("gamma", k + 1),
            ("beta", k + 2), ("gamma", k + 2), ("beta", k + 3))


_window_inv_cache = {}


def expand_in_window(cls: RelHomClass, k):
    """Integer coordinates of cls over the window basis at k."""
    if k not in _window_inv_cache:
        cols = [generator_coords(kind, kk) for (kind, kk) in
                window_labels(k)]
        m = [[RAT(cols[j][i]) for j in range(7)] for i in range(7)]
        inv = linalg.invert(m)
        if inv is None:
            raise GuardExceeded(f"window basis at {k} is singular")
        _window_inv_cache[k] = inv
    coords = linalg.mat_vec(_window_inv_cache[k],
                            [RAT(c) for c in cls.coeffs])
    if not linalg.is_integral(coords):
        raise MissingRepresentative(
            f"class {cls} is not integral over window {k}")
    return [int(c) for c in coords]


def hol_class(surface: Surface, cls: RelHomClass, table) -> Vec2:
    """Holonomy of ``cls`` evaluated through a PathTable of edge paths."""
    coords = expand_in_window(cls, table.window)
    total = Vec2(0, 0)
    for c, lab in zip(coords, window_labels(table.window)):
        if c:
            chain = table.paths.get(lab)
            if chain is None:
                raise MissingRepresentative(f"no path recorded for {lab}")
            total = total + surface.holonomy(chain).scale(c)
    return total


class PathTable:
    """Edge-path representatives for the window basis on one surface."""

    def __init__(self, window, paths):
        self.window = window
        self.paths = dict(paths)  # (kind, k) -> list of (t, e, sign)

    def labels(self):
        return tuple(self.paths)

    def holonomies(self, surface):
        return {lab: surface.holonomy(chain)
                for lab, chain in self.paths.items()}


# -- chain complex of a triangulation ------------------------------------------


class ChainComplex:
    """Integral 1-chains on a Surface with exact homology solving."""

    def __init__(self, surface: Surface):
        self.surface = surface
        reps = {}
        for (t, e) in surface.edges():
            p = surface.gluing[(t, e)]
            rep = min((t, e), p)
            reps[(t, e)] = rep
        self.rep_of = reps
        self.edge_index = {}
        for rep in sorted(set(reps.values())):
            self.edge_index[rep] = len(self.edge_index)
        self.n_edges = len(self.edge_index)

    def path_to_chain(self, path):
        """Vector over canonical edges from a list of (t, e, sign) steps."""
        vec = [0] * self.n_edges
        for (t, e, sgn) in path:
            rep = self.rep_of[(t, e)]
            idx = self.edge_index[rep]
            if rep == (t, e):
                vec[idx] += sgn
            else:
                vec[idx] -= sgn
        return vec

    def boundary_on_classes(self, vec):
        """Coefficients of the 0-boundary on each vertex class."""
        s = self.surface
        out = {}
        for rep, idx in self.edge_index.items():
            c = vec[idx]
            if not c:
                continue
            t, e = rep
            start = s.class_of((t, e))
            end = s.class_of((t, (e + 1) % 3))
            out[start] = out.get(start, 0) - c
            out[end] = out.get(end, 0) + c
        return {k: v for k, v in out.items() if v}

    def boundary_coeff(self, vec):
        """The rel coefficient: +1 for each net black -> white crossing."""
        s = self.surface
        bnd = self.boundary_on_classes(vec)
        white = [i for i in s.class_by_label(WHITE)]
        black = [i for i in s.class_by_label(BLACK)]
        wsum = sum(bnd.get(i, 0) for i in white)
        bsum = sum(bnd.get(i, 0) for i in black)
        for idx, c in bnd.items():
            if idx not in white and idx not in black and c:
                raise MissingRepresentative(
                    "chain has boundary at a regular vertex")
        assert wsum + bsum == 0
        return wsum

    def triangle_boundaries(self):
        cols = []
        for t in range(len(self.surface.triangles)):
            vec = [0] * self.n_edges
            for e in range(3):
                rep = self.rep_of[(t, e)]
                idx = self.edge_index[rep]
                vec[idx] += 1 if rep == (t, e) else -1
            cols.append(vec)
        return cols

    def holonomy(self, vec):
        total = Vec2(0, 0)
        for rep, idx in self.edge_index.items():
            if vec[idx]:
                total = total + self.surface.edge_vector(*rep).scale(
                    vec[idx])
        return total

    def classes_equal(self, vec_a, vec_b):
        """Equality in H_1(S, Sigma; Z): difference bounds exactly."""
        diff = [a - b for a, b in zip(vec_a, vec_b)]
        if self.boundary_on_classes(diff):
            return False
        cols = self.triangle_boundaries()
        matrix = [[RAT(cols[j][i]) for j in range(len(cols))]
                  for i in range(self.n_edges)]
        return linalg.solve(matrix, [RAT(c) for c in diff]) is not None

    def decompose(self, vec, basis_vecs):
        """Integer coefficients of ``vec`` over basis classes, or None.

        Solves vec = sum n_i b_i + boundary rationally; integrality of the
        n_i suffices because the cokernel of the boundary map is free.
        """
        cols = [list(b) for b in basis_vecs] + self.triangle_boundaries()
        matrix = [[RAT(cols[j][i]) for j in range(len(cols))]
                  for i in range(self.n_edges)]
        sol = linalg.solve(matrix, [RAT(c) for c in vec])
        if sol is None:
            return None
        head = sol[:len(basis_vecs)]
        if not linalg.is_integral(head):
            return None
        return [int(x) for x in head]

    def relative_cycle_basis(self):
        """Rational basis of 1-chains with zero boundary on regular classes."""
        s = self.surface
        reg_classes = [i for i in range(len(s.vertex_classes()))
                       if s.class_label(i) == REGULAR]
        reg_index = {c: i for i, c in enumerate(reg_classes)}
        rows = [[RAT(0)] * self.n_edges for _ in reg_classes]
        for rep, idx in self.edge_index.items():
            t, e = rep
            start = s.class_of((t, e))
            end = s.class_of((t, (e + 1) % 3))
            if start in reg_index:
                rows[reg_index[start]][idx] -= 1
            if end in reg_index:
                rows[reg_index[end]][idx] += 1
        if not rows:
            rows = [[RAT(0)] * self.n_edges]
        return linalg.kernel_basis(rows)

    def holonomy_module_rank(self):
        """Q-rank of hol over the relative cycle space (expect 6 for AY)."""
        basis = self.relative_cycle_basis()
        hol_rows = []
        for vec in basis:
            total_x = [RAT(0)] * 3
            total_y = [RAT(0)] * 3
            for rep, idx in self.edge_index.items():
                c = vec[idx]
                if c == 0:
                    continue
                v = self.surface.edge_vector(*rep)
                for pos, comp in enumerate((v.x.c0, v.x.c1, v.x.c2)):
                    total_x[pos] += c * comp
                for pos, comp in enumerate((v.y.c0, v.y.c1, v.y.c2)):
                    total_y[pos] += c * comp
            hol_rows.append(total_x + total_y)
        return linalg.rank(hol_rows)


def solve_class_chain(cc: ChainComplex, hol_target, bc):
    """An integral edge chain with given holonomy and boundary coefficient.

    The chain runs from white to black for bc = -1 and black to white for
    bc = +1 (any hol-preserving choice differs by the invisible kernel
    class, which no observable distinguishes).  Returns the chain vector or
    None.
    """
    s = cc.surface
    classes = s.vertex_classes()
    rows = []
    rhs = []
    for idx in range(len(classes)):
        lab = s.class_label(idx)
        row = [0] * cc.n_edges
        for rep, col in cc.edge_index.items():
            t, e = rep
            if s.class_of((t, e)) == idx:
                row[col] -= 1
            if s.class_of((t, (e + 1) % 3)) == idx:
                row[col] += 1
        rows.append(row)
        if lab == WHITE:
            rhs.append(-bc)
        elif lab == BLACK:
            rhs.append(bc)
        else:
            rhs.append(0)
    # six holonomy rows with denominators cleared
    from fractions import Fraction
    for comp in range(6):
        row = []
        for rep, col in sorted(cc.edge_index.items(), key=lambda kv: kv[1]):
            v = s.edge_vector(*rep)
            coords = v.x.coords() + v.y.coords()
            row.append(coords[comp])
        tgt = (hol_target.x.coords() + hol_target.y.coords())[comp]
        den = 1
        for q in row + [tgt]:
            den = den * RAT(q).denominator // _gcd(den, RAT(q).denominator)
        rows.append([int(RAT(q) * den) for q in row])
        rhs.append(int(RAT(tgt) * den))
    return linalg.integer_solve(rows, rhs)


def _gcd(a, b):
    import math
    return math.gcd(int(a), int(b))


def chain_to_walk(cc: ChainComplex, vec):
    """Order an integral chain into a traversable step list.

    The chain's boundary must sit on at most two vertex classes (a path) or
    none (a cycle).  Disconnected cycles are attached through canceling
    connector edges.  Returns a list of (t, e, sign) steps.
    """
    s = cc.surface
    steps = []
    for rep, col in cc.edge_index.items():
        c = vec[col]
        for _ in range(abs(c)):
            steps.append((rep[0], rep[1], 1 if c > 0 else -1))
    if not steps:
        return []

    def endpoints(step):
        t, e, sgn = step
        a = s.class_of((t, e))
        b = s.class_of((t, (e + 1) % 3))
        return (a, b) if sgn > 0 else (b, a)

    # connectivity over vertex classes; join components with canceling pairs
    def components(st_list):
        comp = {}
        for st in st_list:
            a, b = endpoints(st)
            comp_join(comp, a, b)
        return comp

    def comp_find(comp, x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    def comp_join(comp, a, b):
        comp.setdefault(a, a)
        comp.setdefault(b, b)
        ra, rb = comp_find(comp, a), comp_find(comp, b)
        if ra != rb:
            comp[ra] = rb

    comp = components(steps)
    roots = {comp_find(comp, c) for st in steps for c in endpoints(st)}
    if len(roots) > 1:
        # BFS in the full edge graph to find connecting paths
        adj = {}
        for rep in cc.edge_index:
            t, e = rep
            a = s.class_of((t, e))
            b = s.class_of((t, (e + 1) % 3))
            adj.setdefault(a, []).append((b, (t, e, 1)))
            adj.setdefault(b, []).append((a, (t, e, -1)))
        base = next(iter(roots))
        for other in list(roots):
            if comp_find(comp, other) == comp_find(comp, base):
                continue
            # BFS from any class in base-component to other-component
            from collections import deque
            starts = [c for c in comp if comp_find(comp, c)
                      == comp_find(comp, base)]
            prev = {starts[0]: None}
            dq = deque(starts)
            for c in starts[1:]:
                prev[c] = None
            hit = None
            while dq:
                cur = dq.popleft()
                if comp_find(comp, cur) == comp_find(comp, other):
                    hit = cur
                    break
                for (nb, st) in adj.get(cur, []):
                    if nb not in prev:
                        prev[nb] = (cur, st)
                        dq.append(nb)
            if hit is None:
                return None
            cur = hit
            while prev[cur] is not None:
                pcur, st = prev[cur]
                steps.append(st)
                steps.append((st[0], st[1], -st[2]))
                comp_join(comp, pcur, cur)
                cur = pcur

    # Hierholzer walk; the degree imbalance determines the start vertex
    outdeg = {}
    for st in steps:
        a, b = endpoints(st)
        outdeg[a] = outdeg.get(a, 0) + 1
        outdeg[b] = outdeg.get(b, 0) - 1
    starts = [c for c, d in outdeg.items() if d > 0]
    start = starts[0] if starts else endpoints(steps[0])[0]
    used_from = {}
    for st in steps:
        used_from.setdefault(endpoints(st)[0], []).append(st)
    stack = [(start, None)]
    trail = []
    while stack:
        cur, via = stack[-1]
        outs = used_from.get(cur)
        if outs:
            st = outs.pop()
            stack.append((endpoints(st)[1], st))
        else:
            stack.pop()
            if via is not None:
                trail.append(via)
    trail.reverse()
    if len(trail) != len(steps):
        return None
    return trail
