"""Configurable high-precision complex arithmetic.

A :class:`PrecisionContext` owns an independent mpmath context carrying
``digits + guard`` decimal digits; there is no ambient global precision,
so computations at different precisions can coexist (including across
threads).  :class:`HighPrecComplex` wraps an mpmath complex value
together with its context and refuses to mix values from different
contexts.

Values are immutable; any operation that would produce an infinity or
NaN raises instead of letting it escape.
"""

from __future__ import annotations


from fractions import Fraction

import mpmath
from mpmath.ctx_mp import MPContext

from qsum.errors import PrecisionMismatch


class PrecisionContext:
    """Precision policy: significant digits plus internal guard digits."""

    __slots__ = ("digits", "guard", "mp")

    def __init__(self, digits: int = 60, guard: int = 10):
        if digits < 15:
            raise ValueError("digits must be at least 15")
        if guard < 5:
            raise ValueError("guard must be at least 5")
        object.__setattr__(self, "digits", digits)
        object.__setattr__(self, "guard", guard)
        mp = MPContext()
        mp.dps = digits + guard
        object.__setattr__(self, "mp", mp)

    def __setattr__(self, name, value):
        raise AttributeError("PrecisionContext is immutable")

    def __eq__(self, other):
        if not isinstance(other, PrecisionContext):
            return NotImplemented
        return self.digits == other.digits and self.guard == other.guard

    def __hash__(self):
        return hash((self.digits, self.guard))

    def __repr__(self):
        return f"PrecisionContext(digits={self.digits}, guard={self.guard})"

    # -- constructors ------------------------------------------------------

    def complex(self, real=0, imag=0) -> "HighPrecComplex":
        return HighPrecComplex(self.mp.mpc(self.mp.mpf(real), self.mp.mpf(imag)), self)

    def zero(self) -> "HighPrecComplex":
        return self.complex(0)

    def one(self) -> "HighPrecComplex":
        return self.complex(1)

    def from_fraction(self, f) -> "HighPrecComplex":
        f = Fraction(f)
        val = self.mp.mpf(f.numerator) / self.mp.mpf(f.denominator)
        return HighPrecComplex(self.mp.mpc(val), self)

    def from_str(self, text: str) -> "HighPrecComplex":
        return HighPrecComplex(_parse_complex(text, self.mp), self)

    # -- thresholds ----------------------------------------------------------

    def tail_epsilon(self):
        """Stopping-rule scale: 10**-(digits+guard)."""
        return self.mp.mpf(10) ** (-(self.digits + self.guard))

    def pole_threshold(self):
        """Denominators below this magnitude count as vanished."""
        return self.mp.mpf(10) ** (-(self.digits + 10))

    underflow_threshold = pole_threshold


def _parse_real(text, mp):
    text = text.strip()
    if not text:
        raise ValueError("empty numeric literal")
    if text in ("+", "-"):
        text += "1"
    if "/" in text:
        f = Fraction(text)
        return mp.mpf(f.numerator) / mp.mpf(f.denominator)
    return mp.mpf(text)


def _parse_complex(text, mp):
    """Parse ``<real>`` or ``<real>+<imag>i`` (also ``...*i``), where each
    part is a decimal or a p/r rational.  Signs inside exponents are kept."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if not s.endswith("i"):
        return mp.mpc(_parse_real(s, mp))
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return mp.mpc(_parse_real(body[:k], mp),
                          _parse_real(body[k:], mp))
    return mp.mpc(mp.mpf(0), _parse_real(body, mp))


class HighPrecComplex:
    """A complex number bound to a PrecisionContext.

    Arithmetic between values from different contexts raises
    PrecisionMismatch; division by a vanishing value raises
    ZeroDivisionError.
    """

    __slots__ = ("val", "ctx")

    def __init__(self, val, ctx: PrecisionContext):
        val = ctx.mp.mpc(val)
        if not (ctx.mp.isfinite(val.real) and ctx.mp.isfinite(val.imag)):
            raise ArithmeticError(f"non-finite value {val}")
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("HighPrecComplex is immutable")

    @classmethod
    def coerce(cls, x, ctx: PrecisionContext) -> "HighPrecComplex":
        if isinstance(x, HighPrecComplex):
            if x.ctx != ctx:
                raise PrecisionMismatch(
                    f"value from {x.ctx!r} used in {ctx!r}")
            return x
        if isinstance(x, Fraction):
            return ctx.from_fraction(x)
        if isinstance(x, str):
            return ctx.from_str(x)
        if isinstance(x, (int, float, complex)):
            return ctx.complex(ctx.mp.mpf(x.real if isinstance(x, complex) else x),
                               ctx.mp.mpf(x.imag) if isinstance(x, complex) else 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to HighPrecComplex")

    # -- basic structure -----------------------------------------------------

    @property
    def real(self):
        return self.val.real

    @property
    def imag(self):
        return self.val.imag

    def is_zero(self) -> bool:
        return self.val == 0

    def abs(self):
        return self.ctx.mp.fabs(self.val)

    __abs__ = abs

    def conjugate(self) -> "HighPrecComplex":
        return HighPrecComplex(self.ctx.mp.conj(self.val), self.ctx)

    def sqrt(self) -> "HighPrecComplex":
        return HighPrecComplex(self.ctx.mp.sqrt(self.val), self.ctx)

    def __eq__(self, other):
        if isinstance(other, HighPrecComplex):
            return self.ctx == other.ctx and self.val == other.val
        if isinstance(other, (int, float)):
            return self.val == other
        return NotImplemented

    def __hash__(self):
        return hash(self.val)

    # -- arithmetic -----------------------------------------------------------

    def _other(self, x):
        if isinstance(x, HighPrecComplex):
            if x.ctx != self.ctx:
                raise PrecisionMismatch(
                    f"mixing values from {x.ctx!r} and {self.ctx!r}")
            return x.val
        if isinstance(x, (int, Fraction)):
            return HighPrecComplex.coerce(x, self.ctx).val
        return None

    def __add__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return HighPrecComplex(self.val + v, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return HighPrecComplex(-self.val, self.ctx)

    def __sub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return HighPrecComplex(self.val - v, self.ctx)

    def __rsub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return HighPrecComplex(v - self.val, self.ctx)

    def __mul__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return HighPrecComplex(self.val * v, self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # Only exact zero is rejected here.  Tiny-but-exact magnitudes
        # (q**k for large k) are legitimate divisors with unbounded mpf
        # exponents; vanishing-denominator *detection* lives at the pole
        # checks, which compare against ctx.pole_threshold().
        v = self._other(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero")
        return HighPrecComplex(self.val / v, self.ctx)

    def __rtruediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return HighPrecComplex(v, self.ctx) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return self.ctx.one()
        if n < 0:
            return self.ctx.one() / (self ** (-n))
        return HighPrecComplex(self.val ** n, self.ctx)

    # -- serialization ----------------------------------------------------------

    def _fmt_real(self, x, places):
        s = self.ctx.mp.nstr(x, places, min_fixed=1, max_fixed=-1,
                             strip_zeros=False)
        return s

    def to_str(self, full: bool = False) -> str:
        """Decimal serialization; ``full`` carries the guard digits too."""
        places = self.ctx.digits + (self.ctx.guard if full else 0)
        re_s = self._fmt_real(self.val.real, places)
        if self.val.imag == 0:
            return re_s
        im = self.val.imag
        sign = "-" if im < 0 else "+"
        im_s = self._fmt_real(-im if im < 0 else im, places)
        return f"{re_s}{sign}{im_s}*i"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"HighPrecComplex({self.to_str()})"


def hp_close(x: HighPrecComplex, y: HighPrecComplex, rel_tol) -> bool:
    """True iff |x - y| <= rel_tol * max(1, |x|, |y|)."""
    if x.ctx != y.ctx:
        raise PrecisionMismatch("comparing values from different contexts")
    mp = x.ctx.mp
    tol = mp.mpf(rel_tol)
    if tol <= 0:
        raise ValueError("rel_tol must be positive")
    scale = max(mp.mpf(1), mp.fabs(x.val), mp.fabs(y.val))
    return mp.fabs(x.val - y.val) <= tol * scale


def rel_diff(x: HighPrecComplex, y: HighPrecComplex):
    """The comparison metric behind hp_close: |x-y| / max(1, |x|, |y|)."""
    if x.ctx != y.ctx:
        raise PrecisionMismatch("comparing values from different contexts")
    mp = x.ctx.mp
    scale = max(mp.mpf(1), mp.fabs(x.val), mp.fabs(y.val))
    return mp.fabs(x.val - y.val) / scale
