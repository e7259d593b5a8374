"""First-return interval exchanges, periodicity, and the SAF invariant.

The transversal is the union of all horizontal edges of a presentation
(full for the rectilinear family surfaces: every cylinder presentation
carries its horizontal cuts, and the base surface keeps its slit chains).
Return maps are computed exactly: domain breakpoints come from downward
traces of all singularities and transversal endpoints, and each piece's
translation from one upward trace of its midpoint.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from functools import cmp_to_key

from ayrel.errors import (TransversalNotFull, VerificationFailed)
from ayrel.field import NFElem, ZERO, ONE, as_fraction, nf_embed
from ayrel.geom import Vec2
from ayrel.surface import SINGULAR_LABELS, Surface
from ayrel.trace import occurrences_at, trace

V_UP = Vec2(ZERO, ONE)
V_DOWN = Vec2(ZERO, -ONE)


class IET:
    """Exact interval exchange: lengths, permutation and translations."""

    def __init__(self, lengths, translations):
        self.lengths = [NFElem.coerce(a) for a in lengths]
        self.translations = [NFElem.coerce(t) for t in translations]
        if len(self.lengths) != len(self.translations):
            raise ValueError("lengths and translations must align")
        self.breaks = [ZERO]
        for a in self.lengths:
            self.breaks.append(self.breaks[-1] + a)
        self.total = self.breaks[-1]
        targets = [(self.breaks[i] + self.translations[i], i)
                   for i in range(len(self.lengths))]
        targets.sort(key=cmp_to_key(lambda p, q: (p[0] - q[0]).sign()))
        self.permutation = tuple(targets.index((self.breaks[i]
                                                + self.translations[i], i))
                                 for i in range(len(self.lengths)))
        self._float_breaks = [float(Fraction(nf_embed(b, Fraction(1, 10**18))[0]))
                              for b in self.breaks]
        self._validate_bijection(targets)

    def _validate_bijection(self, targets):
        pos = ZERO
        for (start, i) in targets:
            if start != pos:
                raise VerificationFailed("interval images do not tile")
            pos = pos + self.lengths[i]
        if pos != self.total:
            raise VerificationFailed("interval images do not tile")

    @property
    def d(self):
        return len(self.lengths)

    def locate(self, x):
        """Index of the interval containing x in [0, total)."""
        guess = bisect_right(self._float_breaks, float(x)) - 1
        guess = max(0, min(guess, self.d - 1))
        for i in (guess, guess - 1, guess + 1):
            if 0 <= i < self.d:
                if (x - self.breaks[i]).sign() >= 0 and \
                        (x - self.breaks[i + 1]).sign() < 0:
                    return i
        for i in range(self.d):
            if (x - self.breaks[i]).sign() >= 0 and \
                    (x - self.breaks[i + 1]).sign() < 0:
                return i
        raise ValueError("point outside the interval")

    def apply(self, x):
        return x + self.translations[self.locate(x)]

    def midpoints(self):
        half = Fraction(1, 2)
        return [self.breaks[i] + self.lengths[i] * half
                for i in range(self.d)]

    def __repr__(self):
        return f"IET(d={self.d}, perm={self.permutation})"


class SAFValue:
    """Sum of a_i wedge t_i in Lambda^2 Q(alpha), as an antisymmetric
    3x3 rational matrix over the power basis."""

    def __init__(self, matrix):
        self.matrix = matrix

    @staticmethod
    def of(iet: IET):
        m = [[Fraction(0)] * 3 for _ in range(3)]
        for a, t in zip(iet.lengths, iet.translations):
            ac = a.as_fractions()
            tc = t.as_fractions()
            for p in range(3):
                for q in range(3):
                    m[p][q] += ac[p] * tc[q] - ac[q] * tc[p]
        return SAFValue(m)

    def is_zero(self):
        return all(x == 0 for row in self.matrix for x in row)

    def entries(self):
        return (self.matrix[0][1], self.matrix[0][2], self.matrix[1][2])

    def __repr__(self):
        return f"SAFValue{self.entries()}"


class PeriodicityVerdict:
    def __init__(self, periodic, periods, steps_used):
        self.periodic = periodic
        self.periods = periods
        self.steps_used = steps_used

    def __repr__(self):
        if self.periodic:
            return f"Periodic(max period {max(self.periods)})"
        return f"Unresolved(after {self.steps_used} steps)"


def _transversal(surface):
    """Canonical east-pointing horizontal edges, with global offsets."""
    segs = []
    for (t, e) in surface.edges():
        vec = surface.edge_vector(t, e)
        if vec.y.is_zero() and vec.x.sign() > 0:
            segs.append(((t, e), vec.x))
    segs.sort(key=lambda kv: kv[0])
    offsets = {}
    pos = ZERO
    for ref, ln in segs:
        offsets[ref] = pos
        pos = pos + ln
    return segs, offsets, pos


def _global_offset(surface, offsets, edge, point):
    """Global transversal coordinate of a crossing at ``point`` on ``edge``."""
    t, e = edge
    vec = surface.edge_vector(t, e)
    start = surface.vertex(t, e)
    u = (point.x - start.x)
    if vec.x.sign() > 0:
        if (t, e) in offsets:
            return offsets[(t, e)] + u
        raise VerificationFailed("crossed a non-canonical east edge")
    partner = surface.gluing[(t, e)]
    if partner not in offsets:
        raise VerificationFailed("crossed edge missing from transversal")
    vec_p = surface.edge_vector(*partner)
    return offsets[partner] + (vec_p.x - (-u))


def first_return_iet(surface, budget=10**6) -> IET:
    """First return of the upward flow to the union of horizontal edges.

    Raises TransversalNotFull when an orbit fails to cross within budget.
    """
    from ayrel.family import AYSurface
    if isinstance(surface, AYSurface):
        surface = surface.surface
    segs, offsets, total = _transversal(surface)
    if not segs:
        raise TransversalNotFull("the presentation has no horizontal edges")
    stop = set(offsets)

    cuts = {ZERO.key(): ZERO}
    for ref, ln in segs:
        o = offsets[ref]
        cuts[o.key()] = o
        cuts[(o + ln).key()] = o + ln
    # downward traces from singularities and transversal endpoints
    marker_corners = []
    classes = surface.vertex_classes()
    endpoint_classes = set()
    for ref, _ln in segs:
        t, e = ref
        endpoint_classes.add(surface.class_of((t, e)))
        endpoint_classes.add(surface.class_of((t, (e + 1) % 3)))
    for idx in range(len(classes)):
        lab = surface.class_label(idx)
        if lab in SINGULAR_LABELS or idx in endpoint_classes:
            marker_corners.append(classes[idx][0])
    for corner in marker_corners:
        for occ in occurrences_at(surface, corner, V_DOWN):
            out = trace(surface, ("vertex", occ), V_DOWN, budget=budget,
                        stop_edges=stop)
            if out.kind == "budget":
                raise TransversalNotFull(
                    "a downward marker trace never crossed the transversal")
            if out.kind == "singular":
                # a vertical saddle connection: the lower singularity's own
                # traces cover the orbits below it
                continue
            if out.kind != "crossed":
                raise VerificationFailed(f"marker trace: {out.kind}")
            o = _global_offset(surface, offsets, out.edge, out.point)
            cuts[o.key()] = o

    points = sorted(cuts.values(),
                    key=cmp_to_key(lambda a, b: (a - b).sign()))
    if points[-1] != total:
        points.append(total)
    pieces = []
    for i in range(len(points) - 1):
        if (points[i + 1] - points[i]).sign() > 0:
            pieces.append((points[i], points[i + 1]))

    lengths = []
    translations = []
    half = Fraction(1, 2)
    seg_starts = [(offsets[ref], ref, ln) for ref, ln in segs]
    for (lo, hi) in pieces:
        mid = lo + (hi - lo) * half
        ref, local = _locate_on_transversal(seg_starts, mid)
        t, e = ref
        start = surface.vertex(t, e)
        point = Vec2(start.x + local, start.y)
        out = trace(surface, ("edge_point", (ref, point)), V_UP,
                    budget=budget, stop_edges=stop)
        if out.kind == "budget":
            raise TransversalNotFull(
                "an upward orbit never returned to the transversal")
        if out.kind != "crossed":
            raise VerificationFailed(
                f"midpoint return trace ended with {out.kind}")
        target = _global_offset(surface, offsets, out.edge, out.point)
        lengths.append(hi - lo)
        translations.append(target - mid)
    return IET(lengths, translations)


def _locate_on_transversal(seg_starts, x):
    for (o, ref, ln) in seg_starts:
        if (x - o).sign() >= 0 and (x - (o + ln)).sign() < 0:
            return ref, x - o
    raise ValueError("transversal coordinate out of range")


def iet_periodicity(iet: IET, budget=10**6) -> PeriodicityVerdict:
    """Exact orbit iteration of every continuity interval's midpoint."""
    periods = []
    steps_used = 0
    for mid in iet.midpoints():
        x = iet.apply(mid)
        n = 1
        while x != mid:
            if steps_used + n > budget:
                return PeriodicityVerdict(False, None, steps_used + n)
            x = iet.apply(x)
            n += 1
        periods.append(n)
        steps_used += n
    return PeriodicityVerdict(True, periods, steps_used)


def saf(iet: IET) -> SAFValue:
    """The SAF invariant sum a_i wedge t_i over Q."""
    return SAFValue.of(iet)


def segment_family(r_values, budget=10**6, shift_window=None):
    """Verdicts for the vertical IETs of x_r along a rel segment.

    Small |r| samples reuse the base presentation deformed in place (fixed
    transversal and combinatorics: the line segment of the corollary);
    larger ones fall back to the window models.  Returns report rows.
    """
    from ayrel.errors import PreconditionViolated
    from ayrel.family import build_x0, build_xr
    from ayrel.field import alpha_power
    from ayrel.rel import rel_h_edgeshift
    if shift_window is None:
        shift_window = alpha_power(3)
    x0 = build_x0()
    rows = []
    for r in r_values:
        r = NFElem.coerce(r)
        row = {"r": r}
        surf = None
        route = None
        if r.is_zero():
            surf = x0.surface
            route = "base"
        elif (abs(r) - shift_window).sign() < 0:
            try:
                surf = rel_h_edgeshift(x0.surface, r)
                route = "edge-shift"
            except PreconditionViolated:
                surf = None
        if surf is None:
            surf = build_xr(r).surface
            route = "window"
        iet = first_return_iet(surf, budget=budget)
        verdict = iet_periodicity(iet, budget=budget)
        row.update({
            "route": route,
            "intervals": iet.d,
            "permutation": iet.permutation,
            "verdict": "periodic" if verdict.periodic else "unresolved",
            "max_period": max(verdict.periods) if verdict.periodic else None,
            "saf_zero": saf(iet).is_zero(),
        })
        rows.append(row)
    return rows
