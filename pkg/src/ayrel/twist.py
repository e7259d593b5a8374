"""Twist coordinates on a vertical cylinder decomposition.

A chart records, per cylinder, its circumference, width, twist (the y-part
of the chosen crossing saddle connection) and the cyclic structure of both
boundary circles as named connections with exact heights.  Rebuilding with
new twists rotates the right circles; the vertical rel flow is the linear
flow shifting twists by the direction vector w (-1 on white-left
cylinders, +1 on black-left, 0 on same-boundary), and the rel orbit
closure has dimension the rational rank of the w_i / c_i.
"""

from __future__ import annotations

from ayrel import linalg
from ayrel.assembly import CylSpec, assemble
from ayrel.errors import MixedBoundary, PreconditionViolated, \
    VerificationFailed
from ayrel.field import NFElem, RAT, ZERO, alpha_power
from ayrel.homology import hol_closed_form, phi_matrix
from ayrel.surface import Surface

_KIND_W = {"white-left": -1, "black-left": 1, "same": 0}


class TwistChart:
    def __init__(self, cylinders, conns):
        # cylinders: list of dicts with keys
        #   c, w, y (twist), kind, left, right ([(conn, height, label)])
        self.cylinders = cylinders
        self.conns = dict(conns)  # conn_id -> length

    @property
    def m(self):
        return len(self.cylinders)

    def twists(self):
        return [cyl["y"] for cyl in self.cylinders]

    def circumferences(self):
        return [cyl["c"] for cyl in self.cylinders]

    def widths(self):
        return [cyl["w"] for cyl in self.cylinders]

    def lattice(self):
        """The multi-twist lattice M_0 = sum of c_i Z, as its generators."""
        return self.circumferences()

    def w_vector(self):
        """Rel direction per cylinder; MixedBoundary when ill-defined."""
        out = []
        for cyl in self.cylinders:
            if cyl["kind"] == "mixed":
                raise MixedBoundary(
                    "a boundary circle carries both singularities")
            out.append(_KIND_W[cyl["kind"]])
        return out

    def rebuild(self, new_twists=None) -> Surface:
        """Surface with the chart's data and the given twist parameters."""
        if new_twists is None:
            new_twists = self.twists()
        if len(new_twists) != self.m:
            raise PreconditionViolated("one twist per cylinder required")
        specs = []
        for cyl, ny in zip(self.cylinders, new_twists):
            delta = NFElem.coerce(ny) - cyl["y"]
            c = cyl["c"]
            left = list(cyl["left"])
            right = [(conn, _mod(h + delta, c), lab)
                     for (conn, h, lab) in cyl["right"]]
            specs.append(CylSpec(cyl["w"], c, left, right))
        asm = assemble(specs, self.conns)
        return asm.surface

    def rel_v(self, s) -> "TwistChart":
        """The chart after vertical rel by s: y_i += s * w_i."""
        s = NFElem.coerce(s)
        w = self.w_vector()
        cyls = []
        for cyl, wi in zip(self.cylinders, w):
            new = dict(cyl)
            new["y"] = cyl["y"] + s * wi
            new["right"] = [(conn, _mod(h + s * wi, cyl["c"]), lab)
                            for (conn, h, lab) in cyl["right"]]
            cyls.append(new)
        return TwistChart(cyls, self.conns)

    def to_json(self):
        return {
            "cylinders": [{
                "c": cyl["c"].to_json(),
                "w": cyl["w"].to_json(),
                "y": cyl["y"].to_json(),
                "kind": cyl["kind"],
            } for cyl in self.cylinders],
        }


def _mod(h, c):
    while h.sign() < 0:
        h = h + c
    while (h - c).sign() >= 0:
        h = h - c
    return h


def extract_chart(decomp) -> TwistChart:
    """Chart of a CylinderDecomposition (cylinder order preserved)."""
    conns = {}
    for i, sc in enumerate(decomp.connections):
        conns[i] = sc.holonomy.y
    cyls = []
    for cyl in decomp.cylinders:
        if cyl.twist_hol is None:
            raise PreconditionViolated("cylinder without a crossing "
                                       "saddle connection")
        cyls.append({
            "c": cyl.circumference,
            "w": cyl.width,
            "y": cyl.twist_hol.y,
            "kind": cyl.kind,
            "left": list(cyl.left_entries),
            "right": list(cyl.right_entries),
        })
    return TwistChart(cyls, conns)


class OrbitClosure:
    """Dimension and rational tangent basis of the vertical rel closure."""

    def __init__(self, dimension, basis, w):
        self.dimension = dimension
        self.basis = basis  # rational vectors in the m-torus coordinates
        self.w = w

    def __repr__(self):
        return f"OrbitClosure(d={self.dimension})"

    def to_json(self):
        return {"dimension": self.dimension,
                "w": list(self.w),
                "basis": [[str(q) for q in row] for row in self.basis]}


def orbit_closure(chart: TwistChart) -> OrbitClosure:
    """The closure of the vertical rel orbit inside the twist torus.

    d is the rational rank of the vectors w_i / c_i in Q(alpha) viewed as
    Q^3; the tangent space is the smallest rational subspace of the m-torus
    containing the direction vector.
    """
    w = chart.w_vector()
    cs = chart.circumferences()
    m = chart.m
    # columns of M are the Q^3 coordinates of w_i / c_i
    cols = []
    for wi, ci in zip(w, cs):
        if wi == 0:
            cols.append((RAT(0), RAT(0), RAT(0)))
        else:
            val = NFElem.coerce(wi) / ci
            cols.append(val.coords())
    matrix = [[cols[j][comp] for j in range(m)] for comp in range(3)]
    d = linalg.rank(matrix)
    # rational relations annihilating the direction, then their kernel
    relations = linalg.kernel_basis(matrix)
    if relations:
        basis = linalg.kernel_basis(relations)
    else:
        basis = [[RAT(1) if i == j else RAT(0) for j in range(m)]
                 for i in range(m)]
    if len(basis) != d:
        raise VerificationFailed("tangent space dimension mismatch")
    return OrbitClosure(d, basis, w)


def rational_rank_of_reciprocals(circumferences, signs=None):
    """Q-rank of {s_i / c_i}: the derived oracle for the closure dimension."""
    cols = []
    for i, c in enumerate(circumferences):
        s = 1 if signs is None else signs[i]
        if s == 0:
            continue
        val = NFElem.coerce(s) / NFElem.coerce(c)
        cols.append(val.coords())
    matrix = [[col[comp] for col in cols] for comp in range(3)]
    return linalg.rank(matrix)


def dominant_eigenvector_check(k_range=30):
    """The x-holonomy functional of the base surface is the dominant
    eigenvector of the shift action, with cubic eigenvalue 1/alpha.

    Verifies f(phi_push(b)) = alpha^-1 f(b) on the basis B, the closed-form
    recursion hol_x(beta_{k+1}) = alpha^-1 hol_x(beta_k) over |k| <= k_range,
    and that the eigenvalue is irrational (so no rational 2-dimensional
    invariant subspace contains the eigenline).
    """
    inv_alpha = alpha_power(-1)
    checks = []
    m = phi_matrix()
    f = []
    for lab in (("beta", 0), ("gamma", 0), ("beta", 1), ("gamma", 1),
                ("beta", 2), ("gamma", 2), ("beta", 3)):
        kind, k = lab
        b, g = hol_closed_form(k, ZERO)
        f.append((b if kind == "beta" else g).x)
    ok_functional = True
    for j in range(7):
        img = ZERO
        for i in range(7):
            img = img + f[i] * m[i][j]
        if img != inv_alpha * f[j]:
            ok_functional = False
    checks.append(("phi-functional-eigen", ok_functional))
    ok_rec = True
    for k in range(-k_range, k_range + 1):
        xk = hol_closed_form(k, ZERO)[0].x
        xk1 = hol_closed_form(k + 1, ZERO)[0].x
        if xk1 != inv_alpha * xk:
            ok_rec = False
        gk = hol_closed_form(k, ZERO)[1].x
        gk1 = hol_closed_form(k + 1, ZERO)[1].x
        if gk1 != inv_alpha * gk:
            ok_rec = False
    checks.append(("x-holonomy-recursion", ok_rec))
    irrational = not inv_alpha.is_rational()
    checks.append(("eigenvalue-cubic-irrational", irrational))
    passed = all(ok for (_n, ok) in checks)
    if not passed:
        raise VerificationFailed("dominant eigenvector check failed",
                                 log=checks)
    return {"checks": checks, "eigenvalue": inv_alpha, "pass": passed}


def rebuild(chart: TwistChart, new_twists=None) -> Surface:
    """Surface carrying the chart's data with the given twists."""
    return chart.rebuild(new_twists)


def rel_v_chart(chart: TwistChart, s) -> TwistChart:
    """Vertical rel on the chart: y_i += s * w_i (MixedBoundary when the
    direction vector is ill-defined)."""
    return chart.rel_v(s)
