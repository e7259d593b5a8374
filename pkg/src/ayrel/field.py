"""Exact arithmetic in the cubic field Q(alpha), where alpha is the unique
real root of  t^3 + t^2 + t - 1.

Elements are stored as rational coordinates (c0, c1, c2) in the power basis
{1, alpha, alpha^2}; products are reduced eagerly through
alpha^3 = 1 - alpha - alpha^2.  Sign determination is exact: a cheap float
screen backed by interval evaluation over a rational interval isolating
alpha, refined by bisection.  No floating point ever decides a predicate.
"""

from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 is optional; it speeds up rational arithmetic considerably
    from gmpy2 import mpq as RAT
except ImportError:  # pragma: no cover
    RAT = Fraction

_R0 = RAT(0)
_R1 = RAT(1)
_RT = type(_R0)


def as_fraction(q):
    """Plain-int Fraction for any rational (safe across gmpy2.mpq)."""
    return Fraction(int(q.numerator), int(q.denominator))

# double approximation of alpha, used only to pre-screen sign computations
_ALPHA_F = 0.5436890126920763
_ALPHA_F2 = _ALPHA_F * _ALPHA_F


class ParseError(ValueError):
    """Malformed field-element expression; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _poly(t):
    # defining polynomial  p(t) = t^3 + t^2 + t - 1
    return t * t * t + t * t + t - 1


class IsolatingInterval:
    """Rational interval (lo, hi) with p(lo) < 0 < p(hi), so alpha in (lo, hi).

    Instances are immutable from the caller's perspective: refinement returns
    new intervals, so sharing the module seed across threads is safe.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = RAT(lo)
        self.hi = RAT(hi)
        if not self.lo < self.hi:
            raise ValueError("empty interval")

    def width(self):
        return self.hi - self.lo

    def bisected(self):
        mid = (self.lo + self.hi) / 2
        if _poly(mid) > 0:
            return IsolatingInterval(self.lo, mid)
        return IsolatingInterval(mid, self.hi)

    def refined(self, width):
        iv = self
        while iv.width() >= width:
            iv = iv.bisected()
        return iv


# seed interval: p(1/2) = -1/8 < 0 < 26/729 = p(5/9)
_SEED = IsolatingInterval(RAT(1, 2), RAT(5, 9))
# best refinement seen so far; only ever replaced by a narrower interval
_BEST = _SEED


def _shared_interval():
    return _BEST


def _remember(iv):
    global _BEST
    if iv.width() < _BEST.width():
        _BEST = iv


class NFElem:
    """An element c0 + c1*alpha + c2*alpha^2 with rational coordinates.

    The representation is canonical ({1, alpha, alpha^2} is a Q-basis), so
    equality is coordinate equality and an element is zero iff all three
    coordinates vanish.  Instances are immutable and hashable.
    """

    __slots__ = ("c0", "c1", "c2", "_hash")

    def __init__(self, c0=0, c1=0, c2=0):
        rt = _RT
        object.__setattr__(self, "c0",
                           c0 if type(c0) is rt else RAT(c0))
        object.__setattr__(self, "c1",
                           c1 if type(c1) is rt else RAT(c1))
        object.__setattr__(self, "c2",
                           c2 if type(c2) is rt else RAT(c2))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("NFElem is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q):
        return NFElem(q, 0, 0)

    @staticmethod
    def coerce(x):
        if isinstance(x, NFElem):
            return x
        if isinstance(x, (int, Fraction)) or type(x) is type(_R0):
            return NFElem(x, 0, 0)
        if isinstance(x, str):
            return nf_parse(x)
        raise TypeError(f"cannot coerce {x!r} to NFElem")

    # -- structure ----------------------------------------------------

    def coords(self):
        return (self.c0, self.c1, self.c2)

    def is_zero(self):
        return not (self.c0 or self.c1 or self.c2)

    def is_rational(self):
        return not (self.c1 or self.c2)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or type(other) is type(_R0):
            other = NFElem(other)
        if not isinstance(other, NFElem):
            return NotImplemented
        return (self.c0 == other.c0 and self.c1 == other.c1
                and self.c2 == other.c2)

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((as_fraction(self.c0), as_fraction(self.c1),
                      as_fraction(self.c2)))
            object.__setattr__(self, "_hash", h)
        return h

    def key(self):
        """Deterministic (non-metric) sort key."""
        return (self.c0, self.c1, self.c2)

    def as_fractions(self):
        """Coordinates as plain-int Fractions."""
        return (as_fraction(self.c0), as_fraction(self.c1),
                as_fraction(self.c2))

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if type(other) is not NFElem:
            other = NFElem.coerce(other)
        return NFElem(self.c0 + other.c0, self.c1 + other.c1,
                      self.c2 + other.c2)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not NFElem:
            other = NFElem.coerce(other)
        return NFElem(self.c0 - other.c0, self.c1 - other.c1,
                      self.c2 - other.c2)

    def __rsub__(self, other):
        return NFElem.coerce(other) - self

    def __neg__(self):
        return NFElem(-self.c0, -self.c1, -self.c2)

    def __mul__(self, other):
        if type(other) is not NFElem:
            other = NFElem.coerce(other)
        if not (other.c1 or other.c2):
            q = other.c0
            return NFElem(self.c0 * q, self.c1 * q, self.c2 * q)
        if not (self.c1 or self.c2):
            q = self.c0
            return NFElem(other.c0 * q, other.c1 * q, other.c2 * q)
        a0, a1, a2 = self.c0, self.c1, self.c2
        b0, b1, b2 = other.c0, other.c1, other.c2
        t0 = a0 * b0
        t1 = a0 * b1 + a1 * b0
        t2 = a0 * b2 + a1 * b1 + a2 * b0
        t3 = a1 * b2 + a2 * b1
        t4 = a2 * b2
        # reduce with alpha^3 = 1 - alpha - alpha^2, alpha^4 = 2*alpha - 1
        return NFElem(t0 + t3 - t4, t1 - t3 + 2 * t4, t2 - t3)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = NFElem.coerce(other)
        if other.is_rational():
            if not other.c0:
                raise ZeroDivisionError("division by zero in Q(alpha)")
            inv = _R1 / other.c0
            return NFElem(self.c0 * inv, self.c1 * inv, self.c2 * inv)
        return self * nf_inv(other)

    def __rtruediv__(self, other):
        return NFElem.coerce(other) * nf_inv(self)

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        if k < 0:
            return nf_inv(self) ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- order (real embedding) -----------------------------------------

    def sign(self):
        return nf_sign(self)

    def __lt__(self, other):
        return (self - NFElem.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - NFElem.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - NFElem.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - NFElem.coerce(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        lo, hi = nf_embed(self, Fraction(1, 10**17))
        return float((lo + hi) / 2)

    # -- i/o -------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for coeff, sym in ((self.c0, ""), (self.c1, "a"), (self.c2, "a^2")):
            if not coeff:
                continue
            mag = -coeff if coeff < 0 else coeff
            if not sym:
                body = str(mag)
            elif mag == 1:
                body = sym
            else:
                body = f"{mag}*{sym}"
            parts.append(("- " if coeff < 0 else "+ ") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __repr__(self):
        return f"NFElem({str(self)!r})"

    def to_json(self):
        return {"c0": str(self.c0), "c1": str(self.c1), "c2": str(self.c2)}

    @staticmethod
    def from_json(obj):
        return NFElem(RAT(obj["c0"]), RAT(obj["c1"]), RAT(obj["c2"]))


ZERO = NFElem(0)
ONE = NFElem(1)
ALPHA = NFElem(0, 1, 0)

_POW_CACHE = {0: ONE, 1: ALPHA}


def alpha_power(k):
    """alpha^k for any integer k, cached."""
    v = _POW_CACHE.get(k)
    if v is None:
        if k > 0:
            v = alpha_power(k - 1) * ALPHA
        else:
            # alpha^-1 = 1 + alpha + alpha^2
            v = alpha_power(k + 1) * NFElem(1, 1, 1)
        _POW_CACHE[k] = v
    return v


def nf_mul(a, b):
    """Exact product, reduced through alpha^3 = 1 - alpha - alpha^2."""
    return NFElem.coerce(a) * NFElem.coerce(b)


_INV_CACHE = {}


def nf_inv(a):
    """Multiplicative inverse, by solving the 3x3 rational system M_a x = e0.

    Raises ZeroDivisionError on zero input.  Results are cached (divisors
    in geometric predicates repeat heavily).
    """
    a = NFElem.coerce(a)
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero in Q(alpha)")
    if a.is_rational():
        return NFElem(_R1 / a.c0)
    key = (a.c0, a.c1, a.c2)
    hit = _INV_CACHE.get(key)
    if hit is not None:
        return hit
    # columns of M_a are the coordinates of a * alpha^j
    cols = [a, a * ALPHA, a * alpha_power(2)]
    m = [[c.c0 for c in cols], [c.c1 for c in cols], [c.c2 for c in cols]]

    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    d = det3(m)
    # d is the field norm up to sign; nonzero since a != 0
    xs = []
    for j in range(3):
        mj = [row[:] for row in m]
        for i in range(3):
            mj[i][j] = _R1 if i == 0 else _R0
        xs.append(det3(mj) / d)
    out = NFElem(*xs)
    if len(_INV_CACHE) > 100000:
        _INV_CACHE.clear()
    _INV_CACHE[key] = out
    return out


def nf_sign(a):
    """Sign of the real value of ``a``: -1, 0 or +1.

    Exact-zero short-circuits on the coordinates; otherwise a float screen
    with a conservative error bound, falling back to interval evaluation
    with bisection refinement of the isolating interval.
    """
    a = NFElem.coerce(a)
    if a.is_zero():
        return 0
    if not (a.c1 or a.c2):
        return 1 if a.c0 > 0 else -1
    try:
        f0, f1, f2 = float(a.c0), float(a.c1), float(a.c2)
        approx = f0 + f1 * _ALPHA_F + f2 * _ALPHA_F2
        guard = (abs(f0) + abs(f1) + abs(f2) + 1.0) * 1e-12
        if approx > guard:
            return 1
        if approx < -guard:
            return -1
    except (OverflowError, ValueError):
        pass
    iv = _shared_interval()
    while True:
        lo, hi = _interval_value(a, iv)
        if lo > 0:
            _remember(iv)
            return 1
        if hi < 0:
            _remember(iv)
            return -1
        iv = iv.bisected()


def _interval_value(a, iv):
    """Rational interval guaranteed to contain the real value of ``a``."""
    lo, hi = iv.lo, iv.hi
    lo2, hi2 = lo * lo, hi * hi
    t1a, t1b = a.c1 * lo, a.c1 * hi
    if t1a > t1b:
        t1a, t1b = t1b, t1a
    t2a, t2b = a.c2 * lo2, a.c2 * hi2
    if t2a > t2b:
        t2a, t2b = t2b, t2a
    return a.c0 + t1a + t2a, a.c0 + t1b + t2b


def nf_embed(a, eps):
    """Rational interval of width < eps containing the real value of ``a``."""
    a = NFElem.coerce(a)
    eps = RAT(eps) if not isinstance(eps, (Fraction, int)) else RAT(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if a.is_zero():
        return (_R0, _R0)
    if a.is_rational():
        return (a.c0, a.c0)
    iv = _shared_interval()
    while True:
        lo, hi = _interval_value(a, iv)
        if hi - lo < eps:
            _remember(iv)
            return (lo, hi)
        iv = iv.bisected()


def nf_parse(text):
    """Parse a signed sum of terms ``p/q``, ``p/q*a``, ``p/q*a^k``.

    ``a`` denotes alpha; exponents of any size reduce on input, so e.g.
    ``"a^3"`` yields coordinates (1, -1, -1).  Whitespace is ignored.
    Raises ParseError with the offending position on malformed input.
    """
    if not isinstance(text, str):
        raise ParseError("expected a string", 0)
    n = len(text)
    i = 0
    total = ZERO
    seen_term = False

    def skip_ws(i):
        while i < n and text[i].isspace():
            i += 1
        return i

    i = skip_ws(i)
    if i >= n:
        raise ParseError("empty expression", i)
    while i < n:
        sign = 1
        i = skip_ws(i)
        if i < n and text[i] in "+-":
            if text[i] == "-":
                sign = -1
            i += 1
        elif seen_term:
            raise ParseError("expected '+' or '-' between terms", i)
        i = skip_ws(i)
        if i >= n:
            raise ParseError("dangling sign", i)

        coeff = None
        if text[i].isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            i = skip_ws(j)
            if i < n and text[i] == "/":
                i = skip_ws(i + 1)
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError("expected denominator", i)
                den = int(text[i:j])
                if den == 0:
                    raise ParseError("zero denominator", i)
                coeff = RAT(num, den)
                i = skip_ws(j)
            else:
                coeff = RAT(num)

        power = 0
        if coeff is not None and i < n and text[i] == "*":
            i = skip_ws(i + 1)
            if i >= n or text[i] != "a":
                raise ParseError("expected 'a' after '*'", i)
        if i < n and text[i] == "a":
            i += 1
            power = 1
            if i < n and text[i] == "^":
                i = skip_ws(i + 1)
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                if j == i:
                    raise ParseError("expected exponent", i)
                power = int(text[i:j])
                i = j
        elif coeff is None:
            raise ParseError("expected a number or 'a'", i)

        term = alpha_power(power) * (coeff if coeff is not None else 1)
        total = total + (term if sign > 0 else -term)
        seen_term = True
        i = skip_ws(i)
    return total


def nf_decimal(a, digits=12):
    """Deterministic float approximation: fixed-depth refinement from the
    seed interval, independent of any cached state."""
    a = NFElem.coerce(a)
    if a.is_zero():
        return 0.0
    if a.is_rational():
        return float(as_fraction(a.c0))
    iv = _SEED.refined(RAT(1, 10 ** (digits + 8)))
    lo, hi = _interval_value(a, iv)
    mid = (lo + hi) / 2
    return float(as_fraction(mid))
