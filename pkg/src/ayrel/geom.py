"""Exact planar primitives over Q(alpha): vectors, 2x2 matrices, predicates."""

from __future__ import annotations

from ayrel.field import NFElem, ZERO, ONE, alpha_power


class Vec2:
    """Planar vector with NFElem coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x if type(x) is NFElem else NFElem.coerce(x)
        self.y = y if type(y) is NFElem else NFElem.coerce(y)

    def __add__(self, other):
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def scale(self, k):
        return Vec2(self.x * k, self.y * k)

    def cross(self, other):
        return self.x * other.y - self.y * other.x

    def dot(self, other):
        return self.x * other.x + self.y * other.y

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero()

    def __eq__(self, other):
        if not isinstance(other, Vec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def key(self):
        return self.x.key() + self.y.key()

    def __repr__(self):
        return f"Vec2({self.x}, {self.y})"

    def to_json(self):
        return [self.x.to_json(), self.y.to_json()]

    @staticmethod
    def from_json(obj):
        return Vec2(NFElem.from_json(obj[0]), NFElem.from_json(obj[1]))


V_ZERO = Vec2(ZERO, ZERO)
V_UP = Vec2(ZERO, ONE)
V_DOWN = Vec2(ZERO, -ONE)
V_LEFT = Vec2(-ONE, ZERO)
V_RIGHT = Vec2(ONE, ZERO)


class Mat2:
    """2x2 matrix with NFElem entries, acting on Vec2 by multiplication."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        self.a = NFElem.coerce(a)
        self.b = NFElem.coerce(b)
        self.c = NFElem.coerce(c)
        self.d = NFElem.coerce(d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def apply(self, v):
        return Vec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __mul__(self, other):
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d)

    def inverse(self):
        det = self.det()
        if det.is_zero():
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = identity()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b,
                                                    other.c, other.d)

    def __repr__(self):
        return f"Mat2([{self.a}, {self.b}; {self.c}, {self.d}])"


def identity():
    return Mat2(1, 0, 0, 1)


def minus_identity():
    return Mat2(-1, 0, 0, -1)


def rot90():
    # counterclockwise quarter turn
    return Mat2(0, -1, 1, 0)


def g_tilde():
    """The renormalizing diagonal matrix diag(1/alpha, alpha)."""
    return Mat2(alpha_power(-1), 0, 0, alpha_power(1))


def shear_h(s):
    return Mat2(1, NFElem.coerce(s), 0, 1)


def orient(a, b, c):
    """Sign of the signed area of triangle (a, b, c): +1 ccw, -1 cw, 0 flat."""
    return (b - a).cross(c - a).sign()


def incircle(a, b, c, d):
    """Sign of the incircle determinant for ccw triangle (a, b, c) and d.

    +1 when d lies strictly inside the circumcircle, 0 when cocircular.
    """
    ax, ay = a.x - d.x, a.y - d.y
    bx, by = b.x - d.x, b.y - d.y
    cx, cy = c.x - d.x, c.y - d.y
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    det = (a2 * (bx * cy - by * cx)
           - b2 * (ax * cy - ay * cx)
           + c2 * (ax * by - ay * bx))
    return det.sign()


def line_params(p, q, r, s):
    """Intersection parameters (t, u) with p + t*(q-p) = r + u*(s-r).

    Returns None for parallel segments.
    """
    d1 = q - p
    d2 = s - r
    den = d1.cross(d2)
    if den.is_zero():
        return None
    w = r - p
    t = w.cross(d2) / den
    u = w.cross(d1) / den
    return (t, u)


def segments_cross(p, q, r, s):
    """True when the open segments (p,q) and (r,s) intersect transversally."""
    ps = line_params(p, q, r, s)
    if ps is None:
        return False
    t, u = ps
    zero, one = ZERO, ONE
    return zero < t < one and zero < u < one
