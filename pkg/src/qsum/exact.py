"""Exact arithmetic in Q(q): Laurent polynomials and rational functions.

``QPoly`` is a dense Laurent polynomial over arbitrary-precision
rationals (``fractions.Fraction``); ``QRatFun`` is a normalized ratio of
two of them.  Together they form the scalar field used for terminating
q-series, where every value stays inside Q(q) and equality is decidable
by structural comparison of normal forms.

Normal form of a ``QRatFun``: the denominator is an honest polynomial
(no negative powers) with nonzero constant term scaled to 1, the
numerator carries any monomial factor q**k, and numerator/denominator
have no common polynomial factor.

All values are immutable after construction and every operation is a
pure function, so they are safe to share between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction

from qsum import kernels
from qsum.errors import PoleAtPoint

#: Arbitrary-precision rational scalar; zero is Fraction(0, 1), and the
#: denominator is kept positive and coprime to the numerator by the
#: standard library.
BigRational = Fraction


def _coerce_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an integer or Fraction, got {type(x).__name__}")


# --------------------------------------------------------------------------
# integer-coefficient helpers (thin wrappers over the kernel functions)
# --------------------------------------------------------------------------

def _zx_content(c):
    g = 0
    for v in c:
        g = math.gcd(g, v)
        if g == 1:
            return 1
    return g


def _zx_primitive(c):
    g = _zx_content(c)
    if g > 1:
        return [v // g for v in c]
    return list(c)


def _zx_gcd_prs(a, b):
    """Primitive gcd in Z[x] via the primitive pseudo-remainder sequence."""
    A = _zx_primitive(a) if a else []
    B = _zx_primitive(b) if b else []
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = kernels.zx_prem(A, B)
        A, B = B, _zx_primitive(R) if R else []
    if A and A[-1] < 0:
        A = [-v for v in A]
    return A


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime_64(n):
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _gcd_primes():
    """Word-sized primes for modular gcd images, largest first."""
    n = (1 << 61) - 1
    while n > (1 << 60):
        if _is_prime_64(n):
            yield n
        n -= 2


def _monic_gcd_modp(a, b, p):
    """Monic gcd of a, b in GF(p)[x]; [] never (inputs reduce nonzero)."""
    A = [v % p for v in a]
    B = [v % p for v in b]
    while A and not A[-1]:
        A.pop()
    while B and not B[-1]:
        B.pop()
    while B:
        inv = pow(B[-1], p - 2, p)
        db = len(B) - 1
        while A and len(A) - 1 >= db:
            s = A[-1] * inv % p
            if s:
                off = len(A) - 1 - db
                for j in range(db):
                    A[off + j] = (A[off + j] - s * B[j]) % p
            A.pop()
            while A and not A[-1]:
                A.pop()
        A, B = B, A
    inv = pow(A[-1], p - 2, p)
    return [v * inv % p for v in A]


def _symmetric(v, m):
    v %= m
    return v - m if v > m // 2 else v


def _zx_gcd_modular(a, b):
    """Primitive gcd in Z[x] from prime-field images combined by CRT.

    Each image costs one Euclidean pass over word-sized residues; the
    candidate is certified by exact trial division into both inputs, so
    unlucky primes can only delay, never corrupt, the answer.
    """
    A = _zx_primitive(a)
    B = _zx_primitive(b)
    glc = math.gcd(A[-1], B[-1])
    cur = None
    modulus = 1
    prev_lift = None
    for p in _gcd_primes():
        if A[-1] % p == 0 or B[-1] % p == 0:
            continue
        gp = _monic_gcd_modp(A, B, p)
        if len(gp) == 1:
            return [1]
        gp = [v * glc % p for v in gp]
        if cur is None or len(gp) < len(cur):
            cur = gp
            modulus = p
            prev_lift = None
        elif len(gp) == len(cur):
            inv = pow(modulus % p, p - 2, p)
            combined = []
            for x, y in zip(cur, gp):
                t = (y - x) % p * inv % p
                combined.append(_symmetric(x + modulus * t, modulus * p))
            cur = combined
            modulus *= p
        else:
            continue  # unlucky prime: image degree too high
        lift = _zx_primitive([_symmetric(v, modulus) for v in cur])
        if lift == prev_lift:
            quo_a = kernels.zx_divexact(A, lift)
            if quo_a is not None and kernels.zx_divexact(B, lift) is not None:
                if lift[-1] < 0:
                    lift = [-v for v in lift]
                return lift
        prev_lift = lift
    raise AssertionError("modular gcd ran out of primes")  # pragma: no cover


def _zx_gcd(a, b):
    """Primitive gcd in Z[x]; modular images for large inputs, the
    pseudo-remainder sequence for small ones."""
    if not a or not b:
        return _zx_gcd_prs(a, b)
    if min(len(a), len(b)) > 16:
        return _zx_gcd_modular(a, b)
    return _zx_gcd_prs(a, b)


_GCD_PRIMES = (2147483629, 2147483587, 2147483563)


def _modp_gcd_degree(a, b, p):
    """Degree of gcd(a mod p, b mod p) in GF(p)[x], or None on bad reduction."""
    if a[-1] % p == 0 or b[-1] % p == 0:
        return None
    A = [v % p for v in a]
    B = [v % p for v in b]
    while B and not B[-1]:
        B.pop()
    while B:
        inv = pow(B[-1], p - 2, p)
        db = len(B) - 1
        while len(A) - 1 >= db and A:
            s = A[-1] * inv % p
            if s:
                off = len(A) - 1 - db
                for j in range(db):
                    A[off + j] = (A[off + j] - s * B[j]) % p
            A.pop()
            while A and not A[-1]:
                A.pop()
        A, B = B, A
    return len(A) - 1


def _gcd_with_small(a, g):
    """gcd(a, g) in Z[x] (primitive), where deg g is small.

    A modular degree certificate settles the common coprime case in one
    pass over a; only genuinely shared factors pay for exact arithmetic.
    """
    if not a:
        return _zx_primitive(g)
    for p in _GCD_PRIMES:
        d = _modp_gcd_degree(a, g, p)
        if d is None:
            continue
        if d == 0:
            return [1]
        break
    # exact remainder of a by g over Q (synthetic division by the monic form)
    glc = g[-1]
    dg = len(g) - 1
    rem = [Fraction(v) for v in a]
    for k in range(len(a) - 1, dg - 1, -1):
        c = rem[k]
        if c:
            t = c / glc
            for j in range(dg):
                if g[j]:
                    rem[k - dg + j] -= t * g[j]
    rem = rem[:dg]
    while rem and not rem[-1]:
        rem.pop()
    if not rem:
        return _zx_primitive(g)
    den = 1
    for c in rem:
        den = den * c.denominator // math.gcd(den, c.denominator)
    rem_int = [int(c * den) for c in rem]
    return _zx_gcd(g, rem_int)


# --------------------------------------------------------------------------
# Laurent polynomials
# --------------------------------------------------------------------------

class QPoly:
    """Laurent polynomial in q with BigRational coefficients.

    ``coeffs`` is a tuple ordered by increasing power of q and ``offset``
    is the exponent of the first entry, so negative powers are supported
    natively.  The first and last stored coefficients are nonzero; the
    zero polynomial is the empty tuple with offset 0.
    """

    __slots__ = ("coeffs", "offset")

    def __init__(self, coeffs=(), offset=0):
        coeffs = [_coerce_fraction(c) for c in coeffs]
        lo = 0
        hi = len(coeffs)
        while hi > lo and not coeffs[hi - 1]:
            hi -= 1
        while lo < hi and not coeffs[lo]:
            lo += 1
        if lo == hi:
            object.__setattr__(self, "coeffs", ())
            object.__setattr__(self, "offset", 0)
        else:
            object.__setattr__(self, "coeffs", tuple(coeffs[lo:hi]))
            object.__setattr__(self, "offset", offset + lo)

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls((Fraction(1),))

    @classmethod
    def constant(cls, c):
        return cls((_coerce_fraction(c),))

    @classmethod
    def q_power(cls, e):
        return cls((Fraction(1),), offset=e)

    @classmethod
    def monomial(cls, c, e):
        return cls((_coerce_fraction(c),), offset=e)

    @classmethod
    def one_minus(cls, c, e):
        """The binomial 1 - c*q**e for any integer e."""
        c = _coerce_fraction(c)
        if e == 0:
            return cls.constant(1 - c)
        if e > 0:
            return cls((Fraction(1),) + (Fraction(0),) * (e - 1) + (-c,))
        return cls((-c,) + (Fraction(0),) * (-e - 1) + (Fraction(1),), offset=e)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Highest exponent, or None for the zero polynomial."""
        if not self.coeffs:
            return None
        return self.offset + len(self.coeffs) - 1

    @property
    def valuation(self):
        """Lowest exponent, or None for the zero polynomial."""
        if not self.coeffs:
            return None
        return self.offset

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and self.offset == other.offset

    def __hash__(self):
        return hash((self.coeffs, self.offset))

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def _int_parts(self):
        """(integer coefficient list, positive common denominator)."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [c.numerator * (den // c.denominator) for c in self.coeffs], den

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.constant(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        off = min(self.offset, other.offset)
        n = max(self.offset + len(self.coeffs), other.offset + len(other.coeffs)) - off
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            out[self.offset - off + i] = c
        for i, c in enumerate(other.coeffs):
            out[other.offset - off + i] += c
        return QPoly(out, off)

    __radd__ = __add__

    def __neg__(self):
        return QPoly(tuple(-c for c in self.coeffs), self.offset)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QPoly.constant(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QPoly.zero()
        ia, da = self._int_parts()
        ib, db = other._int_parts()
        prod = kernels.zx_mul(ia, ib)
        den = da * db
        return QPoly([Fraction(c, den) for c in prod], self.offset + other.offset)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("QPoly powers must be non-negative integers")
        out = QPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scaled(self, c):
        c = _coerce_fraction(c)
        if not c:
            return QPoly.zero()
        return QPoly(tuple(v * c for v in self.coeffs), self.offset)

    def shifted(self, k):
        """Multiply by q**k."""
        if not self.coeffs:
            return self
        return QPoly(self.coeffs, self.offset + k)

    def divexact(self, other):
        """self / other when the division is exact, else None.

        Monomial (q**k) mismatches are allowed; the quotient is Laurent.
        """
        if not isinstance(other, QPoly):
            other = QPoly.constant(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.coeffs:
            return QPoly.zero()
        ia, da = self._int_parts()
        ib, db = other._int_parts()
        quo = kernels.zx_divexact(ia, ib)
        if quo is None:
            return None
        scale = Fraction(db, da)
        return QPoly([Fraction(c) * scale for c in quo],
                     self.offset - other.offset)

    # -- evaluation and rendering -------------------------------------------

    def eval_numeric(self, q0, ctx):
        """Value at a numeric point, as a HighPrecComplex in ctx."""
        from qsum.numeric import HighPrecComplex

        q0 = HighPrecComplex.coerce(q0, ctx)
        acc = ctx.zero()
        for c in reversed(self.coeffs):
            acc = acc * q0 + ctx.from_fraction(c)
        if self.offset and self.coeffs:
            if q0.is_zero() and self.offset < 0:
                raise PoleAtPoint("negative power of q at q = 0",
                                  factor=f"q^{self.offset}")
            acc = acc * q0 ** self.offset
        return acc

    def _term_str(self, c, e):
        if e == 0:
            return str(c)
        base = "q" if e == 1 else f"q^{e}"
        if c == 1:
            return base
        if c == -1:
            return f"-{base}"
        return f"{c}*{base}"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            term = self._term_str(c, self.offset + i)
            if not parts:
                parts.append(term)
            elif term.startswith("-"):
                parts.append(f"- {term[1:]}")
            else:
                parts.append(f"+ {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"QPoly({self})"

    def to_dict(self):
        return {"offset": self.offset, "coeffs": [str(c) for c in self.coeffs]}


def qpoly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Greatest common divisor of the polynomial parts (offsets ignored),
    normalized so its lowest nonzero coefficient is 1."""
    if a.is_zero and b.is_zero:
        return QPoly.zero()
    ia, _ = a._int_parts()
    ib, _ = b._int_parts()
    g = _zx_gcd(ia, ib)
    if not g:
        return QPoly.zero()
    lead = Fraction(1, g[0]) if g[0] else None
    if lead is None:
        # valuation > 0 cannot happen: primitive gcd of offset-free parts
        raise AssertionError("gcd with zero constant term")
    return QPoly([Fraction(c) * lead for c in g])


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------

class QRatFun:
    """Normalized element of Q(q): num / den with den canonical.

    Equality is plain structural comparison, which the normal form makes
    sound.  Construct with ``QRatFun(num, den)``; reduction runs a
    polynomial gcd unless the caller certifies coprimality via
    ``_from_reduced``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = self._coerce_poly(num)
        den = QPoly.one() if den is None else self._coerce_poly(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in QRatFun")
        if num.is_zero:
            object.__setattr__(self, "num", QPoly.zero())
            object.__setattr__(self, "den", QPoly.one())
            return
        net_offset = num.offset - den.offset
        num = num.shifted(-num.offset)
        den = den.shifted(-den.offset)
        g = qpoly_gcd(num, den)
        if g.degree and g.degree > 0:
            num = num.divexact(g)
            den = den.divexact(g)
        num, den = self._canonical_pair(num.shifted(net_offset), den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def _coerce_poly(x):
        if isinstance(x, QPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return QPoly.constant(x)
        raise TypeError(f"cannot build QRatFun from {type(x).__name__}")

    @staticmethod
    def _canonical_pair(num, den):
        # strip the denominator's monomial factor into the numerator and
        # scale its lowest-order coefficient to 1
        shift = den.offset
        if shift:
            den = den.shifted(-shift)
            num = num.shifted(-shift)
        c0 = den.coeffs[0]
        if c0 != 1:
            inv = 1 / c0
            den = den.scaled(inv)
            num = num.scaled(inv)
        return num, den

    @classmethod
    def _from_reduced(cls, num: QPoly, den: QPoly):
        """Build from a pair already known to share no polynomial factor."""
        self = object.__new__(cls)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in QRatFun")
        if num.is_zero:
            object.__setattr__(self, "num", QPoly.zero())
            object.__setattr__(self, "den", QPoly.one())
            return self
        num, den = cls._canonical_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("QRatFun is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(QPoly.zero())

    @classmethod
    def one(cls):
        return cls(QPoly.one())

    @classmethod
    def from_fraction(cls, c):
        return cls(QPoly.constant(c))

    @classmethod
    def q_power(cls, e):
        return cls(QPoly.q_power(e))

    @classmethod
    def monomial(cls, c, e):
        return cls(QPoly.monomial(c, e))

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_one(self):
        return self.num == QPoly.one() and self.den == QPoly.one()

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QRatFun.from_fraction(other)
        if not isinstance(other, QRatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- field operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den == other.den:
            return QRatFun(self.num + other.num, self.den)
        return QRatFun(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(QRatFun)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "den", self.den)
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    @staticmethod
    def _cross_reduced_product(a_num, a_den, b_num, b_den):
        """Product of two reduced fractions via cross-cancellation.

        Since each input pair is coprime, cancelling gcd(a_num, b_den)
        and gcd(b_num, a_den) leaves a fully reduced result, skipping
        the large gcd of the expanded product.
        """
        g = qpoly_gcd(a_num, b_den)
        if g.degree and g.degree > 0:
            a_num = a_num.divexact(g)
            b_den = b_den.divexact(g)
        g = qpoly_gcd(b_num, a_den)
        if g.degree and g.degree > 0:
            b_num = b_num.divexact(g)
            a_den = a_den.divexact(g)
        return QRatFun._from_reduced(a_num * b_num, a_den * b_den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return QRatFun.zero()
        return self._cross_reduced_product(self.num, self.den,
                                           other.num, other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero QRatFun")
        if self.is_zero:
            return QRatFun.zero()
        return self._cross_reduced_product(self.num, self.den,
                                           other.den, other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("QRatFun powers must be integers")
        if n < 0:
            return (QRatFun.one() / self) ** (-n)
        out = QRatFun.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    @staticmethod
    def _coerce(x):
        if isinstance(x, QRatFun):
            return x
        if isinstance(x, (int, Fraction)):
            return QRatFun.from_fraction(x)
        if isinstance(x, QPoly):
            return QRatFun(x)
        return NotImplemented

    # -- evaluation and serialization -----------------------------------------

    def eval_numeric(self, q0, ctx):
        """Numeric value at q0, carried at ctx working precision.

        Raises PoleAtPoint when the denominator magnitude falls below the
        underflow threshold 10**-(digits+10).
        """
        from qsum.numeric import HighPrecComplex

        q0 = HighPrecComplex.coerce(q0, ctx)
        den_val = self.den.eval_numeric(q0, ctx)
        if den_val.abs() < ctx.underflow_threshold():
            raise PoleAtPoint(
                f"denominator vanishes at q = {q0} (|den| = {den_val.abs()})",
                factor=str(self.den))
        num_val = self.num.eval_numeric(q0, ctx)
        return num_val / den_val

    def to_text(self):
        """Compact num/den serialization with explicit offsets."""
        def side(p):
            cs = ",".join(str(c) for c in p.coeffs)
            return f"q^{p.offset}:[{cs}]"

        return f"{side(self.num)} / {side(self.den)}"

    def to_dict(self):
        return {"num": self.num.to_dict(), "den": self.den.to_dict()}

    def __str__(self):
        if self.den == QPoly.one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"QRatFun({self})"


# --------------------------------------------------------------------------
# internal integer workhorse used by the series evaluators
# --------------------------------------------------------------------------

class ZPoly:
    """Mutable Laurent polynomial as (int coefficients, common denominator).

    Value = q**off * (c[0] + c[1] q + ...) / den with den a positive int.
    This is the accumulator representation of the series evaluators: all
    hot arithmetic stays on integer lists so the kernels can run.
    """

    __slots__ = ("c", "off", "den")

    def __init__(self, c=None, off=0, den=1):
        self.c = [] if c is None else c
        self.off = off
        self.den = den

    @classmethod
    def one(cls):
        return cls([1])

    @classmethod
    def from_qpoly(cls, p: QPoly):
        ints, den = p._int_parts()
        return cls(ints, p.offset, den)

    @property
    def is_zero(self):
        return not self.c

    def copy(self):
        return ZPoly(list(self.c), self.off, self.den)

    def imul_binomial(self, c: Fraction, e: int):
        """value *= (1 - c*q**e); c nonzero, any integer e (c, e) != (1, 0)."""
        if not self.c:
            return self
        pn, pd = c.numerator, c.denominator
        if e >= 0:
            self.c = kernels.zx_binmul(self.c, pd, pn, e)
        else:
            # 1 - c q^e = q^e (pd q^-e - pn)/pd
            self.c = kernels.zx_binmul(self.c, -pn, -pd, -e)
            self.off += e
        self.den *= pd
        return self

    def imul_mono(self, coeff: Fraction, qexp: int):
        if not coeff:
            self.c = []
            self.off = 0
            self.den = 1
            return self
        if coeff != 1:
            pn, pd = coeff.numerator, coeff.denominator
            if pn != 1:
                self.c = [v * pn for v in self.c]
            self.den *= pd
        self.off += qexp
        return self

    def iadd(self, other: "ZPoly"):
        if other.is_zero:
            return self
        if self.is_zero:
            self.c = list(other.c)
            self.off = other.off
            self.den = other.den
            return self
        g = math.gcd(self.den, other.den)
        sa = other.den // g
        sb = self.den // g
        off = min(self.off, other.off)
        if self.off == off:
            self.c = kernels.zx_lincomb(self.c, other.c, sa, sb, other.off - off)
        else:
            self.c = kernels.zx_lincomb(other.c, self.c, sb, sa, self.off - off)
        self.off = off
        self.den = self.den * sa
        if not self.c:
            self.off = 0
            self.den = 1
        return self

    def normalized_content(self):
        if not self.c:
            return self
        g = math.gcd(_zx_content(self.c), self.den)
        if g > 1:
            self.c = [v // g for v in self.c]
            self.den //= g
        return self

    def to_qpoly(self):
        den = self.den
        return QPoly([Fraction(v, den) for v in self.c], self.off)


def _binomial_primitive_ints(c: Fraction, e: int):
    """(pd - pn q^e) as an integer list; the primitive form of 1 - c q^e."""
    return [c.denominator] + [0] * (e - 1) + [-c.numerator]


def reduce_over_binomials(num: ZPoly, bag: dict) -> QRatFun:
    """Fully reduce num / prod((1 - c*q**e) ** mult for (c, e), mult in bag).

    Keys are canonical binomials (nonzero Fraction c, exponent e >= 1).
    The denominator's factorization is known, so the reduction never runs
    a large-degree gcd: whole factors are cancelled by exact trial
    division and residual overlaps are found by gcds against small-degree
    factors (with a modular coprimality certificate for the common case).
    """
    if num.is_zero:
        return QRatFun.zero()
    num = num.copy().normalized_content()
    scale = Fraction(1, num.den)
    offset = num.off
    ints = num.c
    work = []
    for (c, e), mult in bag.items():
        if mult:
            scale *= Fraction(c.denominator) ** mult
            work.append((_binomial_primitive_ints(c, e), mult))
    final = []
    while work:
        g, m = work.pop()
        while m > 0:
            quo = kernels.zx_divexact(ints, g)
            if quo is None:
                break
            ints = quo
            m -= 1
        if m == 0:
            continue
        h = _gcd_with_small(ints, g)
        if len(h) - 1 <= 0:
            final.append((g, m))
            continue
        g2 = kernels.zx_divexact(g, h)
        if g2 is None:  # pragma: no cover - h divides g by construction
            raise AssertionError("gcd does not divide its argument")
        work.append((h, m))
        if len(g2) - 1 > 0:
            work.append((g2, m))
        else:
            # g = h * (+-1); account for the constant in the denominator
            scale /= Fraction(g2[0]) ** m
    den_ints = [1]
    for g, m in final:
        for _ in range(m):
            den_ints = kernels.zx_mul(den_ints, g)
    cont = _zx_content(ints)
    if cont > 1:
        ints = [v // cont for v in ints]
        scale *= cont
    num_poly = QPoly([Fraction(v) * scale for v in ints], offset)
    den_poly = QPoly(den_ints)
    return QRatFun._from_reduced(num_poly, den_poly)
