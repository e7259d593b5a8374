"""The Arnoux-Yoccoz real-rel family: construction and renormalization.

For rel times s in the renormalization window [1, 1/alpha) the surface x_s
decomposes into vertical cylinders C_0..C_3 (three at s = 1) whose
circumferences are c_j = 2 alpha^j (1 + alpha^2) and whose widths are the
four affine functions of s.  One fat cylinder C_0 carries the three thin
ones: the right circle of C_0 is split by its three black points into arcs
of lengths c_1, c_2, c_3 glued to the thin cylinders' left circles, and
symmetrically for the white points on its left circle.  The one remaining
discrete datum (the two cyclic arc orders and the relative rotation between
the black and white markings) is pinned by the chain-level homology
relations and the renormalization closure; it is frozen in CANON below.

General rel times reduce to the window: x_r = g~^k x_s with s = alpha^k r,
and x_{-r} = -I x_r.  x_0 itself is produced by the reverse slit surgery
from x_1 and shipped as a frozen fixture.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from ayrel.assembly import Assembly, CylSpec, assemble, _mod
from ayrel.errors import GuardExceeded, PreconditionViolated, \
    VerificationFailed
from ayrel.field import NFElem, ONE, ZERO, alpha_power
from ayrel.geom import g_tilde, minus_identity
from ayrel.homology import (PathTable, RelHomClass, hol_closed_form,
                            window_labels)
from ayrel.surface import BLACK, WHITE, Surface

HALF = Fraction(1, 2)


def circumference(j):
    """c_j = 2 alpha^j + 2 alpha^(j+2), the vertical core length of C_j."""
    return (alpha_power(j) + alpha_power(j + 2)) * 2


def width_in_window(j, s):
    """Width of C_j on x_s for the window 1 <= s < 1/alpha (j = 0..3)."""
    s = NFElem.coerce(s)
    if j == 0:
        return alpha_power(-1) - s
    return s - alpha_power(3 - j)


# The pinned combinatorial data of the window model.  Enumerating the two
# cyclic orders and all crossing-anchor rotations, the chain-level relation
# web (basis relation, core classes, boundary coefficients, rank-6 holonomy
# module) leaves a handful of period twins; the renormalization closure
# (g~ x_0 = x_0, run through the full reverse-surgery pipeline) then pins
# the marking uniquely up to mirror image.  Frozen here: the white points
# sit half a circumference above the black points.
CANON = {
    "u": (1, 2, 3),   # cyclic order of black arcs up the right circle of C0
    "v": (1, 2, 3),   # cyclic order of white arcs up the left circle of C0
    "phi": NFElem(1, 0, 1),  # = c_0/2, height of the first white point
}


def _cum_heights(order, start):
    h = NFElem.coerce(start)
    out = []
    for j in order:
        out.append(h)
        h = h + circumference(j)
    return out


def window_cylspecs(s, config):
    """CylSpec data for x_s, 1 < s < 1/alpha (four cylinders)."""
    s = NFElem.coerce(s)
    c0 = circumference(0)
    u, v, phi = config["u"], config["v"], config["phi"]
    right = [(f"b{j}", _mod(h, c0), BLACK)
             for j, h in zip(u, _cum_heights(u, ZERO))]
    left = [(f"w{j}", _mod(h, c0), WHITE)
            for j, h in zip(v, _cum_heights(v, phi))]
    specs = [CylSpec(width_in_window(0, s), c0, left, right)]
    for j in (1, 2, 3):
        cj = circumference(j)
        specs.append(CylSpec(width_in_window(j, s), cj,
                             [(f"b{j}", ZERO, BLACK)],
                             [(f"w{j}", cj * HALF, WHITE)]))
    conns = {}
    for j in (1, 2, 3):
        conns[f"b{j}"] = circumference(j)
        conns[f"w{j}"] = circumference(j)
    return specs, conns


def x1_cylspecs(config):
    """CylSpec data for x_1: the width of C_3 vanishes and its two circles
    fuse into a pair of mixed half-connections on the fat cylinder."""
    c0 = circumference(0)
    c3 = circumference(3)
    half3 = c3 * HALF
    u, v, phi = config["u"], config["v"], config["phi"]
    right = []
    for j, h in zip(u, _cum_heights(u, ZERO)):
        h = _mod(h, c0)
        if j == 3:
            right.append(("m1", h, BLACK))
            right.append(("m2", _mod(h + half3, c0), WHITE))
        else:
            right.append((f"b{j}", h, BLACK))
    left = []
    for j, h in zip(v, _cum_heights(v, phi)):
        h = _mod(h, c0)
        if j == 3:
            left.append(("m2", h, WHITE))
            left.append(("m1", _mod(h + half3, c0), BLACK))
        else:
            left.append((f"w{j}", h, WHITE))
    specs = [CylSpec(width_in_window(0, ONE), c0, left, right)]
    for j in (1, 2):
        cj = circumference(j)
        specs.append(CylSpec(width_in_window(j, ONE), cj,
                             [(f"b{j}", ZERO, BLACK)],
                             [(f"w{j}", cj * HALF, WHITE)]))
    conns = {"m1": half3, "m2": half3}
    for j in (1, 2):
        conns[f"b{j}"] = circumference(j)
        conns[f"w{j}"] = circumference(j)
    return specs, conns


def _walk_by(asm: Assembly, cyl, side, start, dy):
    """Circle walk from a vertex height through exactly dy (signed)."""
    c = asm._circ[cyl]
    hs = asm.heights[(cyl, side)]
    n = len(hs)
    idx = {h.key(): i for i, h in enumerate(hs)}
    start = _mod(start, c)
    i = idx[start.key()]
    steps = []
    acc = ZERO
    guard = 0
    sign_dy = dy.sign()
    while acc != dy:
        guard += 1
        if guard > 12 * n + 8:
            raise GuardExceeded("circle walk does not close")
        if sign_dy > 0:
            lo = hs[i]
            seg = asm.segment_between(cyl, side, lo)
            ref = seg[2]
            steps.append((ref[0], ref[1], -1 if side == "L" else 1))
            acc = acc + (seg[1] - seg[0])
            i = (i + 1) % n
            if (acc - dy).sign() > 0:
                raise GuardExceeded("walk target is not a vertex")
        else:
            i = (i - 1) % n
            lo = hs[i]
            seg = asm.segment_between(cyl, side, lo)
            ref = seg[2]
            steps.append((ref[0], ref[1], 1 if side == "L" else -1))
            acc = acc - (seg[1] - seg[0])
            if (acc - dy).sign() < 0:
                raise GuardExceeded("walk target is not a vertex")
    return steps


def _thin_gamma(asm, j, cj):
    return asm.cross_cut(j, rightward=True) + \
        _walk_by(asm, j, "R", ZERO, cj * HALF)


def _thin_beta(asm, j, cj):
    return _walk_by(asm, j, "R", cj * HALF, cj * HALF) + \
        asm.cross_cut(j, rightward=False)


def _fused_gamma3(asm, config):
    # on x_1 the class gamma_3 is the vertical run from the black point at
    # the fused arc's start up half its length to the white point
    c0 = circumference(0)
    u = config["u"]
    pos = dict(zip(u, _cum_heights(u, ZERO)))
    q3 = _mod(pos[3], c0)
    return _walk_by(asm, 0, "R", q3, circumference(3) * HALF)


def _fused_beta3(asm, config):
    c0 = circumference(0)
    u = config["u"]
    pos = dict(zip(u, _cum_heights(u, ZERO)))
    q3 = _mod(pos[3] + circumference(3) * HALF, c0)
    return _walk_by(asm, 0, "R", q3, circumference(3) * HALF)


def _crossing(asm, config, y_target, white_to_black):
    """A crossing chain of C_0 with exact vertical part ``y_target``.

    white_to_black: rightward from a white point on the left circle to a
    black point on the right circle; otherwise the leftward mirror.
    Returns None when no anchor pair realizes the value.
    """
    c0 = circumference(0)
    u, v, phi = config["u"], config["v"], config["phi"]
    blacks = [_mod(h, c0) for h in _cum_heights(u, ZERO)]
    whites = [_mod(h, c0) for h in _cum_heights(v, phi)]
    black_keys = {h.key() for h in blacks}
    white_keys = {h.key() for h in whites}
    if white_to_black:
        for p in whites:
            end = _mod(y_target + p, c0)
            if end.key() in black_keys:
                chain = _walk_by(asm, 0, "L", p, -p)
                chain += asm.cross_cut(0, rightward=True)
                chain += _walk_by(asm, 0, "R", ZERO, y_target + p)
                return chain
    else:
        for q in blacks:
            end = _mod(y_target + q, c0)
            if end.key() in white_keys:
                chain = _walk_by(asm, 0, "R", q, -q)
                chain += asm.cross_cut(0, rightward=False)
                chain += _walk_by(asm, 0, "L", ZERO, y_target + q)
                return chain
    return None


def build_window_table(asm, s, config):
    """PathTable for the window basis on the assembled x_s model."""
    s = NFElem.coerce(s)
    at_one = (s == ONE)
    c0 = circumference(0)
    c3 = circumference(3)
    paths = {}
    for j in (1, 2):
        paths[("gamma", j)] = _thin_gamma(asm, j, circumference(j))
        paths[("beta", j)] = _thin_beta(asm, j, circumference(j))
    if at_one:
        paths[("gamma", 3)] = _fused_gamma3(asm, config)
        paths[("beta", 3)] = _fused_beta3(asm, config)
    else:
        paths[("gamma", 3)] = _thin_gamma(asm, 3, c3)
        paths[("beta", 3)] = _thin_beta(asm, 3, c3)
    y_half = c0 * HALF - c3
    sigma = _crossing(asm, config, y_half, white_to_black=True)
    if sigma is None:
        raise PreconditionViolated("no crossing anchor for this config")
    gamma0 = paths[("gamma", 3)] + sigma + paths[("gamma", 3)]
    paths[("gamma", 0)] = gamma0
    # beta_0 = core(C_0) - gamma_0: walk gamma_0 backwards (white to black),
    # then once around the right circle of the fat cylinder (all its marked
    # points lie in the one black class, so any basepoint chains up)
    back = [(t, e, -s) for (t, e, s) in reversed(gamma0)]
    loop = _walk_by(asm, 0, "R", ZERO, c0)
    paths[("beta", 0)] = back + loop
    return PathTable(0, paths)


def verify_table(surface, table, s):
    """Every recorded path must carry its closed-form holonomy exactly."""
    s = NFElem.coerce(s)
    for (kind, k), chain in table.paths.items():
        b, g = hol_closed_form(k, s)
        want = b if kind == "beta" else g
        got = surface.holonomy(chain)
        if got != want:
            return (kind, k, got, want)
    return None


def window_model(s, config=None):
    """(Assembly, PathTable) for x_s with 1 <= s < 1/alpha."""
    config = config or CANON
    s = NFElem.coerce(s)
    if (s - ONE).sign() < 0 or (s - alpha_power(-1)).sign() >= 0:
        raise PreconditionViolated("s outside the renormalization window")
    if s == ONE:
        specs, conns = x1_cylspecs(config)
    else:
        specs, conns = window_cylspecs(s, config)
    asm = assemble(specs, conns)
    table = build_window_table(asm, s, config)
    bad = verify_table(asm.surface, table, s)
    if bad is not None:
        raise VerificationFailed(f"path table mismatch: {bad}")
    return asm, table


class AYSurface:
    """A member of the real-rel family with its recorded path table."""

    def __init__(self, surface, r, table, provenance):
        self.surface = surface
        self.r = NFElem.coerce(r)
        self.table = table
        self.provenance = tuple(provenance)

    def __repr__(self):
        return f"AYSurface(r={self.r}, {self.surface!r})"

    def hol_class(self, cls):
        from ayrel.homology import hol_class
        return hol_class(self.surface, cls, self.table)

    def verify_closed_forms(self):
        """Check every recorded path against the closed forms at this r."""
        return verify_table(self.surface, self.table, self.r)


def window_of(r):
    """The integer k with alpha^-k <= r < alpha^-(k+1), for r > 0."""
    r = NFElem.coerce(r)
    if r.sign() <= 0:
        raise PreconditionViolated("window_of needs r > 0")
    k = 0
    s = r
    alpha = alpha_power(1)
    inv = alpha_power(-1)
    guard = 0
    while (s - ONE).sign() < 0:
        s = s * inv
        k -= 1
        guard += 1
        if guard > 64:
            raise GuardExceeded("rel time too small for the index guard")
    while (s - inv).sign() >= 0:
        s = s * alpha
        k += 1
        guard += 1
        if guard > 64:
            raise GuardExceeded("rel time too large for the index guard")
    return k, s


def _shift_table(table, k):
    if k == 0:
        return table
    return PathTable(table.window + k,
                     {(kind, kk + k): chain
                      for (kind, kk), chain in table.paths.items()})


def _synthesize_chain(table, kind, n):
    """A traversable chain for beta_n/gamma_n from a window table.

    Expands the class over the table's window basis and orders the signed
    pieces by alternating endpoint colors (an Eulerian path on the two
    singularities).
    """
    from ayrel.homology import expand_in_window, window_labels
    cls = RelHomClass.beta(n) if kind == "beta" else RelHomClass.gamma(n)
    coeffs = expand_in_window(cls, table.window)
    pieces = []
    for c, lab in zip(coeffs, window_labels(table.window)):
        for _ in range(abs(c)):
            pieces.append((lab, 1 if c > 0 else -1))
    # orientation of a piece: +beta, -gamma run white->black
    def starts_white(lab, sgn):
        return (lab[0] == "beta") == (sgn > 0)

    want_white_start = (kind == "beta")
    cur_white = want_white_start
    out = []
    remaining = list(pieces)
    guard = 0
    while remaining:
        guard += 1
        if guard > 10000:
            raise GuardExceeded("piece ordering does not alternate")
        for idx, (lab, sgn) in enumerate(remaining):
            if starts_white(lab, sgn) == cur_white:
                chain = table.paths[lab]
                if sgn > 0:
                    out.extend(chain)
                else:
                    out.extend((t, e, -s) for (t, e, s) in reversed(chain))
                cur_white = not cur_white
                remaining.pop(idx)
                break
        else:
            raise GuardExceeded("no piece continues the walk")
    return out


def _negated_table(table, k):
    """Path table for -I x_r from x_r's table (same triangulation refs).

    The class beta_m on the flipped surface is carried by the source chain
    -beta_m - gamma_m + beta_{m+1} + beta_{m+2} + gamma_{m+3}, ordered to
    alternate singularities; gammas mirror it.
    """
    paths = {}
    for m in range(k, k + 4):
        beta = []
        for (kind, n, sgn) in (("beta", m + 1, 1), ("beta", m, -1),
                               ("beta", m + 2, 1), ("gamma", m + 3, 1),
                               ("gamma", m, -1)):
            chain = _synthesize_chain(table, kind, n)
            if sgn > 0:
                beta.extend(chain)
            else:
                beta.extend((t, e, -s) for (t, e, s) in reversed(chain))
        paths[("beta", m)] = beta
        gamma = []
        for (kind, n, sgn) in (("gamma", m + 1, 1), ("gamma", m, -1),
                               ("gamma", m + 2, 1), ("beta", m + 3, 1),
                               ("beta", m, -1)):
            chain = _synthesize_chain(table, kind, n)
            if sgn > 0:
                gamma.extend(chain)
            else:
                gamma.extend((t, e, -s) for (t, e, s) in reversed(chain))
        paths[("gamma", m)] = gamma
    return PathTable(k, paths)


_XR_CACHE = {}


def build_xr(r) -> AYSurface:
    """The surface at rel time r with verified closed-form holonomies.

    Positive r reduces to the renormalization window (x_r = g~^k x_s with
    s = alpha^k r); negative r applies the hyperelliptic -I; r = 0 loads
    the frozen x_0 fixture.
    """
    r = NFElem.coerce(r)
    if r in _XR_CACHE:
        return _XR_CACHE[r]
    if r.is_zero():
        out = build_x0()
    elif r.sign() > 0:
        k, s = window_of(r)
        asm, table = window_model(s)
        surface = asm.surface
        if k:
            surface = surface.linear_apply(g_tilde() ** k)
        table = _shift_table(table, k)
        prov = (f"window s={s}", f"renormalize k={k}")
        out = AYSurface(surface, r, table, prov)
        bad = out.verify_closed_forms()
        if bad is not None:
            raise VerificationFailed(f"closed forms fail at r={r}: {bad}")
    else:
        pos = build_xr(-r)
        surface = pos.surface.linear_apply(minus_identity())
        table = _negated_table(pos.table, pos.table.window)
        out = AYSurface(surface, r, table,
                        pos.provenance + ("mirror by -I",))
        bad = out.verify_closed_forms()
        if bad is not None:
            raise VerificationFailed(f"closed forms fail at r={r}: {bad}")
    _XR_CACHE[r] = out
    return out


# -- the base surface ----------------------------------------------------------


def derive_x0_surface() -> Surface:
    """x_0 by reverse surgery: slit -I x_1 one unit forward."""
    from ayrel.rel import rel_h_slit
    asm, _table = window_model(ONE)
    x1 = asm.surface
    return rel_h_slit(x1.linear_apply(minus_identity()), ONE)


def derive_x0_fixture():
    """Build the frozen fixture payload: surface JSON plus path table."""
    from ayrel.homology import (ChainComplex, chain_to_walk,
                                hol_closed_form, solve_class_chain)
    surf = derive_x0_surface()
    cc = ChainComplex(surf)
    paths = {}
    for k in range(0, 4):
        b_hol, g_hol = hol_closed_form(k, ZERO)
        for kind, hol, bc in (("beta", b_hol, -1), ("gamma", g_hol, 1)):
            if kind == "gamma" and k == 3:
                continue
            vec = solve_class_chain(cc, hol, bc)
            if vec is None:
                raise VerificationFailed(
                    f"no integral chain for {kind}_{k} on x0")
            walk = chain_to_walk(cc, vec)
            if walk is None:
                raise VerificationFailed(
                    f"chain for {kind}_{k} is not traversable")
            paths[(kind, k)] = walk
    # gamma_3 is the dependent generator: build it from the others so the
    # basis relation holds on the nose
    combo = []
    for (kind, n, sgn) in (("gamma", 0, 1), ("beta", 0, 1),
                           ("beta", 1, -1), ("gamma", 1, -1),
                           ("beta", 2, -1), ("gamma", 2, -1),
                           ("beta", 3, -1)):
        chain = paths[(kind, n)]
        if sgn > 0:
            combo.extend(chain)
        else:
            combo.extend((t, e, -s) for (t, e, s) in reversed(chain))
    paths[("gamma", 3)] = combo
    table = PathTable(0, paths)
    return surf, table


def fixture_payload():
    surf, table = derive_x0_fixture()
    return {
        "surface": surf.to_json(),
        "window": table.window,
        "paths": {f"{kind}:{k}": [[t, e, s] for (t, e, s) in chain]
                  for (kind, k), chain in table.paths.items()},
    }


_X0_CACHE = None


def build_x0() -> AYSurface:
    """The base surface from the packaged fixture, fully validated."""
    global _X0_CACHE
    if _X0_CACHE is not None:
        return _X0_CACHE
    data = json.loads(resources.files("ayrel.data").joinpath("x0.json")
                      .read_text())
    surf = Surface.from_json(data["surface"])
    paths = {}
    for key, steps in data["paths"].items():
        kind, k = key.split(":")
        paths[(kind, int(k))] = [(t, e, s) for (t, e, s) in steps]
    table = PathTable(data["window"], paths)
    out = AYSurface(surf, ZERO, table, ("fixture",))
    genus, orders = surf.stratum_check()
    if (genus, orders) != (3, (2, 2)):
        raise VerificationFailed("x0 fixture is not in the right stratum")
    bad = out.verify_closed_forms()
    if bad is not None:
        raise VerificationFailed(f"x0 fixture table mismatch: {bad}")
    _X0_CACHE = out
    return out


def verify_divergence(k_max, s=None, budget=100000):
    """Max vertical circumference at r = s * alpha^-k for k = 1..k_max.

    Runs the actual decomposition; the maximum is 2 alpha^k (1 + alpha^2),
    shrinking by a factor alpha per step (the divergence surrogate).
    """
    from fractions import Fraction
    from ayrel.cylinders import vertical_decomposition
    from ayrel.field import nf_decimal
    if k_max < 1:
        raise PreconditionViolated("k_max must be at least 1")
    s = NFElem.coerce(s if s is not None else Fraction(3, 2))
    rows = []
    for k in range(1, k_max + 1):
        r = s * alpha_power(-k)
        decomp = vertical_decomposition(build_xr(r), budget=budget)
        mx = decomp.cylinders[-1].circumference
        rows.append({
            "k": k,
            "r": r,
            "cylinders": len(decomp.cylinders),
            "max_circumference": mx,
            "max_circumference_float": nf_decimal(mx),
        })
    return rows


def pseudo_anosov_check():
    """Mechanical proof object for the renormalizing automorphism.

    Verifies g~ x_1 = x_{1/alpha}, the closure g~ x_0 = x_0 (both ways),
    and the displayed chain of equalities through the rel flow:
    Rel_{-1/alpha} x_{1/alpha} = x_0.
    """
    from ayrel.canonical import iso_check
    from ayrel.rel import rel_h
    log = []
    g = g_tilde()
    x1 = build_xr(ONE)
    xinv = build_xr(alpha_power(-1))
    x0 = build_x0()
    checks = [
        ("g~ x_1 = x_{1/alpha}",
         iso_check(x1.surface.linear_apply(g), xinv.surface)),
        ("g~ x_0 = x_0", iso_check(x0.surface.linear_apply(g), x0.surface)),
        ("g~^-1 x_0 = x_0",
         iso_check(x0.surface.linear_apply(g.inverse()), x0.surface)),
        ("Rel_{-1/alpha} x_{1/alpha} = x_0",
         iso_check(rel_h(xinv.surface, -alpha_power(-1)), x0.surface)),
    ]
    for name, mapping in checks:
        log.append((name, mapping is not None))
        if mapping is None:
            raise VerificationFailed(f"pseudo-Anosov check failed: {name}",
                                     log=log)
    return {"checks": log, "pass": True}
