"""q-Pochhammer symbols and basic hypergeometric series over two backends.

The exact backend works in Q(q): series parameters are monomials
c*q**e (:class:`MonoParam`) so every Pochhammer symbol, term and sum
stays a :class:`~qsum.exact.QRatFun`.  The numeric backend evaluates the
same objects with :class:`~qsum.numeric.HighPrecComplex` scalars at a
concrete base q.

A :class:`SeriesSpec` describes either a unilateral series

    sum_{k>=0} prod (a_i;q)_k / ((q;q)_k prod (b_j;q)_k) * z**k

(the (q;q)_k factor is implicit) or a bilateral one

    sum_{k in Z} prod (a_i;q)_k / prod (b_j;q)_k * z**k.

Terminating behaviour is never inferred: an upper truncation (a
numerator parameter equal to q**-n) must be declared via ``termination``
and is validated at construction.

Everything here is immutable and purely functional; evaluations are
deterministic and safe to run concurrently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from qsum.errors import DomainError, NonConvergence, PoleError
from qsum.exact import QRatFun, ZPoly, reduce_over_binomials
from qsum.numeric import HighPrecComplex, PrecisionContext

#: Index value selecting the infinite product (a;q)_oo.
INFINITY = math.inf

#: Hard cap on summed terms for non-terminating numeric series.
TERM_CAP = 100_000

#: Consecutive negligible terms required before a numeric sum stops.
STOP_RUN = 3

#: Policy bounds on the numeric base |q|.
Q_ABS_LIMIT = 0.9
Q_ABS_WARN = 0.75


# --------------------------------------------------------------------------
# exact parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MonoParam:
    """Exact series parameter of the form coeff * q**exp, coeff != 0.

    Closed under products, quotients and q-shifts, which is exactly what
    the catalog's parameter substitutions require.
    """

    coeff: Fraction
    exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if not self.coeff:
            raise ValueError("MonoParam coefficient must be nonzero")
        if not isinstance(self.exp, int):
            raise TypeError("MonoParam exponent must be an integer")

    # -- algebra ---------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, MonoParam):
            return MonoParam(self.coeff * other.coeff, self.exp + other.exp)
        if isinstance(other, (int, Fraction)):
            return MonoParam(self.coeff * other, self.exp)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MonoParam):
            return MonoParam(self.coeff / other.coeff, self.exp - other.exp)
        if isinstance(other, (int, Fraction)):
            return MonoParam(self.coeff / other, self.exp)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return MonoParam(other / self.coeff, -self.exp)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return MonoParam(self.coeff ** n, self.exp * n)

    def __neg__(self):
        return MonoParam(-self.coeff, self.exp)

    def q_shift(self, k: int) -> "MonoParam":
        """Multiply by q**k."""
        return MonoParam(self.coeff, self.exp + k)

    def inverse(self) -> "MonoParam":
        return MonoParam(1 / self.coeff, -self.exp)

    @property
    def is_one(self) -> bool:
        return self.coeff == 1 and self.exp == 0

    def is_q_power(self) -> bool:
        return self.coeff == 1

    # -- conversions --------------------------------------------------------

    def as_ratfun(self) -> QRatFun:
        return QRatFun.monomial(self.coeff, self.exp)

    def numeric(self, q0: HighPrecComplex) -> HighPrecComplex:
        return q0.ctx.from_fraction(self.coeff) * q0 ** self.exp

    # -- text ------------------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "MonoParam":
        """Parse ``<p>[/<r>][*q[^<e>]]`` (also bare ``q^<e>``)."""
        s = text.strip().replace(" ", "")
        coeff = Fraction(1)
        if s.startswith("-"):
            coeff = -coeff
            s = s[1:]
        exp = 0
        if "q" in s:
            head, _, tail = s.partition("q")
            if head.endswith("*"):
                head = head[:-1]
            if tail.startswith("^"):
                exp = int(tail[1:])
            elif tail:
                raise ValueError(f"bad exponent in parameter literal {text!r}")
            else:
                exp = 1
            if head:
                coeff *= Fraction(head)
        else:
            if not s:
                raise ValueError(f"empty parameter literal {text!r}")
            coeff *= Fraction(s)
        return cls(coeff, exp)

    def __str__(self):
        if self.exp == 0:
            return str(self.coeff)
        qs = "q" if self.exp == 1 else f"q^{self.exp}"
        if self.coeff == 1:
            return qs
        if self.coeff == -1:
            return f"-{qs}"
        return f"{self.coeff}*{qs}"


#: The formal base of the exact backend.
Q = MonoParam(Fraction(1), 1)
ONE = MonoParam(Fraction(1), 0)


# --------------------------------------------------------------------------
# factored exact products
# --------------------------------------------------------------------------

class Factored:
    """A product of binomials (1 - c*q**e) and a monomial, kept factored.

    Binomials are stored canonically with e >= 1 in ``num``/``den`` bags
    (multiplicity maps); monomial parts are folded into (coeff, qexp).
    Literal zero factors are tracked per side instead of collapsing the
    product, so callers can distinguish a zero value from a pole.
    """

    __slots__ = ("coeff", "qexp", "num", "den", "num_zeros", "den_zeros")

    def __init__(self):
        self.coeff = Fraction(1)
        self.qexp = 0
        self.num = {}
        self.den = {}
        self.num_zeros = []
        self.den_zeros = []

    @property
    def is_zero(self):
        return bool(self.num_zeros) and not self.den_zeros

    @property
    def is_pole(self):
        return bool(self.den_zeros) and not self.num_zeros

    @property
    def is_indeterminate(self):
        return bool(self.den_zeros) and bool(self.num_zeros)

    def mul_mono(self, coeff, qexp=0):
        self.coeff *= Fraction(coeff)
        self.qexp += qexp
        return self

    def mul_binomial(self, c: Fraction, e: int, side: int = 1, label=None):
        """Multiply by (1 - c*q**e) ** side for side in {1, -1}."""
        bag = self.num if side == 1 else self.den
        if e == 0:
            if c == 1:
                (self.num_zeros if side == 1 else self.den_zeros).append(
                    label or "1 - q^0")
                return self
            k = 1 - c
            self.coeff = self.coeff * k if side == 1 else self.coeff / k
            return self
        if e < 0:
            # 1 - c q^e = (-c q^e) (1 - (1/c) q^-e)
            if side == 1:
                self.coeff *= -c
                self.qexp += e
            else:
                self.coeff /= -c
                self.qexp -= e
            c, e = 1 / c, -e
        key = (c, e)
        bag[key] = bag.get(key, 0) + 1
        return self

    def mul_poch(self, a: MonoParam, n: int, side: int = 1, label=None):
        """Multiply by (a;q)_n ** side, n any integer."""
        name = label or str(a)
        if n >= 0:
            for t in range(n):
                self.mul_binomial(a.coeff, a.exp + t, side,
                                  label=f"1 - ({name})*q^{t}")
        else:
            # (a;q)_{-m} = 1 / prod_{t<m} (1 - a q^(t-m))
            m = -n
            for t in range(m):
                self.mul_binomial(a.coeff, a.exp + t - m, -side,
                                  label=f"1 - ({name})*q^{t - m}")
        return self

    def mul(self, other: "Factored"):
        self.coeff *= other.coeff
        self.qexp += other.qexp
        for key, mult in other.num.items():
            self.num[key] = self.num.get(key, 0) + mult
        for key, mult in other.den.items():
            self.den[key] = self.den.get(key, 0) + mult
        self.num_zeros += other.num_zeros
        self.den_zeros += other.den_zeros
        return self

    def _expanded_parts(self):
        """(expanded numerator ZPoly, denominator bag) after cancelling
        identical binomials; None for a zero product; PoleError on poles."""
        if self.den_zeros:
            raise PoleError(
                f"vanishing denominator factor {self.den_zeros[0]}",
                factor=self.den_zeros[0])
        if self.num_zeros:
            return None
        num_bag = dict(self.num)
        den_bag = {}
        for key, mult in self.den.items():
            common = min(mult, num_bag.get(key, 0))
            if common:
                num_bag[key] -= common
                if not num_bag[key]:
                    del num_bag[key]
            if mult - common:
                den_bag[key] = mult - common
        acc = ZPoly.one()
        for (c, e), mult in num_bag.items():
            for _ in range(mult):
                acc.imul_binomial(c, e)
        acc.imul_mono(self.coeff, self.qexp)
        return acc, den_bag

    def value(self) -> QRatFun:
        """Collapse to a normalized QRatFun; poles raise PoleError."""
        parts = self._expanded_parts()
        if parts is None:
            return QRatFun.zero()
        return reduce_over_binomials(*parts)


# --------------------------------------------------------------------------
# Pochhammer symbols
# --------------------------------------------------------------------------

def _is_infinite(n):
    return n == INFINITY


def poch(a, q, n):
    """The q-Pochhammer symbol (a;q)_n.

    Exact backend: a is a MonoParam, q is the formal base Q, n is any
    integer; the result is a QRatFun.  Negative indices follow
    (a;q)_{-m} = 1/(a q^{-m};q)_m and raise PoleError when that
    denominator vanishes.

    Numeric backend: a and q are HighPrecComplex (or coercible through
    q's context); n may also be INFINITY when |q| < 1.
    """
    if isinstance(a, MonoParam):
        if not (isinstance(q, MonoParam) and q == Q):
            raise TypeError("exact poch requires the formal base Q")
        if _is_infinite(n):
            raise DomainError("(a;q)_oo is not an element of Q(q); "
                              "use the numeric backend")
        return Factored().mul_poch(a, int(n)).value()
    if isinstance(q, HighPrecComplex):
        a = HighPrecComplex.coerce(a, q.ctx)
        return _poch_numeric(a, q, n)
    raise TypeError(f"unsupported poch operands {type(a).__name__}, "
                    f"{type(q).__name__}")


def _check_numeric_base(q: HighPrecComplex):
    mag = q.abs()
    if mag > Q_ABS_LIMIT:
        raise DomainError(f"|q| = {mag} exceeds the supported bound "
                          f"{Q_ABS_LIMIT} for infinite products and "
                          f"non-terminating sums")
    if mag > Q_ABS_WARN:
        warnings.warn(f"|q| = {mag} is close to 1; convergence will be slow",
                      RuntimeWarning, stacklevel=3)


def _poch_numeric(a: HighPrecComplex, q: HighPrecComplex, n):
    ctx = q.ctx
    one = ctx.one()
    if _is_infinite(n):
        _check_numeric_base(q)
        eps = ctx.tail_epsilon()
        acc = one
        factor_scale = a.abs()
        qk = one
        denom = 1 - q.abs()
        k = 0
        while factor_scale * qk.abs() / denom > eps:
            acc = acc * (one - a * qk)
            qk = qk * q
            k += 1
            if k > TERM_CAP:
                raise NonConvergence("infinite product did not converge")
        return acc
    n = int(n)
    if n >= 0:
        acc = one
        qk = one
        for _ in range(n):
            acc = acc * (one - a * qk)
            qk = qk * q
        return acc
    m = -n
    acc = one
    thr = ctx.pole_threshold()
    for t in range(m):
        factor = one - a * q ** (t - m)
        if factor.abs() < thr:
            raise PoleError(
                f"(a q^{-m};q)_{m} vanishes: factor 1 - a*q^{t - m} ~ 0",
                param=str(a), index=t, factor=f"1 - a*q^{t - m}")
        acc = acc * factor
    return one / acc


# --------------------------------------------------------------------------
# the four Pochhammer shift rules (each returns both sides)
# --------------------------------------------------------------------------

def _param_shift(a, q, n):
    """a * q**n in whichever backend a lives."""
    if isinstance(a, MonoParam):
        return a.q_shift(n)
    return a * q ** n


def _qpow_param(q, e):
    """q**e as a parameter."""
    return MonoParam(Fraction(1), e) if isinstance(q, MonoParam) else q ** e


def _scalar(x):
    """Lift a parameter to a backend scalar (QRatFun or HighPrecComplex)."""
    return x.as_ratfun() if isinstance(x, MonoParam) else x


def _safe_div(num, den, what):
    try:
        return num / den
    except ZeroDivisionError:
        raise PoleError(f"{what} vanishes", factor=what) from None


def shift_split(a, q, n: int, k: int):
    """Both sides of (a;q)_{n+k} = (a;q)_n * (a q^n;q)_k."""
    lhs = poch(a, q, n + k)
    rhs = poch(a, q, n) * poch(_param_shift(a, q, n), q, k)
    return lhs, rhs


def negate_index(a, q, n: int):
    """Both sides of (a;q)_{-n} = (-q/a)^n q^(n(n-1)/2) / (q/a;q)_n, n >= 0."""
    if n < 0:
        raise ValueError("negate_index requires n >= 0")
    lhs = poch(a, q, -n)
    q_over_a = _qpow_param(q, 1) / a
    mono = (-1) ** n * q_over_a ** n
    mono = _param_shift(mono, q, n * (n - 1) // 2)
    rhs = _safe_div(_scalar(mono), poch(q_over_a, q, n), "(q/a;q)_n")
    return lhs, rhs


def shift_base(a, q, n: int, k: int):
    """Both sides of (a q^-n;q)_k = (a;q)_k (q/a;q)_n / (q^(1-k)/a;q)_n * q^(-nk)."""
    lhs = poch(_param_shift(a, q, -n), q, k)
    num = poch(a, q, k) * poch(_qpow_param(q, 1) / a, q, n)
    den = poch(_qpow_param(q, 1 - k) / a, q, n)
    rhs = _safe_div(num, den, "(q^(1-k)/a;q)_n")
    rhs = rhs * _scalar(_qpow_param(q, -n * k))
    return lhs, rhs


def ratio_shift(a, b, q, n: int, k: int):
    """Both sides of
    (a;q)_{n-k}/(b;q)_{n-k} =
        (a;q)_n/(b;q)_n * (q^(1-n)/b;q)_k/(q^(1-n)/a;q)_k * (b/a)^k."""
    lhs = _safe_div(poch(a, q, n - k), poch(b, q, n - k), "(b;q)_{n-k}")
    rhs = _safe_div(poch(a, q, n), poch(b, q, n), "(b;q)_n")
    rhs = rhs * _safe_div(poch(_qpow_param(q, 1 - n) / b, q, k),
                          poch(_qpow_param(q, 1 - n) / a, q, k),
                          "(q^(1-n)/a;q)_k")
    rhs = rhs * _scalar((b / a) ** k)
    return lhs, rhs


# --------------------------------------------------------------------------
# series specifications
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesSpec:
    """A unilateral or bilateral basic hypergeometric series.

    Exact mode is selected by MonoParam entries (with ``q`` the formal
    base Q); numeric mode by HighPrecComplex entries sharing one context.
    """

    kind: str
    q: object
    num_params: tuple
    den_params: tuple
    z: object
    termination: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "num_params", tuple(self.num_params))
        object.__setattr__(self, "den_params", tuple(self.den_params))
        if self.kind not in ("unilateral", "bilateral"):
            raise ValueError(f"unknown series kind {self.kind!r}")
        if self.kind == "unilateral":
            if len(self.den_params) != len(self.num_params) - 1:
                raise ValueError("unilateral series needs one fewer "
                                 "denominator parameter than numerators")
        elif len(self.den_params) != len(self.num_params):
            raise ValueError("bilateral series needs equally many "
                             "numerator and denominator parameters")
        exact = isinstance(self.q, MonoParam)
        if exact and self.q != Q:
            raise ValueError("exact series must use the formal base Q")
        for p in (*self.num_params, *self.den_params, self.z):
            if exact != isinstance(p, MonoParam):
                raise TypeError("mixed exact/numeric parameters in one spec")
            if not exact and isinstance(p, HighPrecComplex):
                if p.ctx != self.q.ctx:
                    raise TypeError("numeric parameters must share one "
                                    "precision context")
        if self.termination is not None:
            self._validate_termination()

    def _validate_termination(self):
        n = self.termination
        if not isinstance(n, int) or n < 0:
            raise ValueError("termination must be a non-negative integer")
        if self.mode == "exact":
            target = MonoParam(Fraction(1), -n)
            if not any(p == target for p in self.num_params):
                raise ValueError(
                    f"termination {n} declared but no numerator parameter "
                    f"equals q^{-n}")
        else:
            ctx = self.q.ctx
            target = self.q ** (-n)
            tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
            ok = any((p - target).abs() <= tol * target.abs()
                     for p in self.num_params)
            if not ok:
                raise ValueError(
                    f"termination {n} declared but no numerator parameter "
                    f"is within tolerance of q^{-n}")

    @property
    def mode(self) -> str:
        return "exact" if isinstance(self.q, MonoParam) else "numeric"

    @property
    def ctx(self) -> PrecisionContext | None:
        return None if self.mode == "exact" else self.q.ctx

    def lower_truncation(self) -> int | None:
        """N such that all terms with k < -N vanish (a denominator
        parameter equal to q**(N+1)), or None."""
        if self.kind != "bilateral":
            return None
        if self.mode == "exact":
            for p in self.den_params:
                if p.coeff == 1 and p.exp >= 1:
                    return p.exp - 1
            return None
        ctx = self.ctx
        tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
        qabs = self.q.abs()
        if qabs >= 1 or qabs == 0:
            return None
        for p in self.den_params:
            mag = p.abs()
            if mag == 0:
                continue
            j = int(ctx.mp.nint(ctx.mp.log(mag) / ctx.mp.log(qabs)))
            if j >= 1 and (p - self.q ** j).abs() <= tol * mag:
                return j - 1
        return None

    def describe(self) -> dict:
        """Serializable structural form (parameters sorted canonically)."""
        def key(p):
            if isinstance(p, MonoParam):
                return (0, p.exp, p.coeff)
            return (1, str(p))

        def text(p):
            return str(p)

        return {
            "kind": self.kind,
            "q": None if self.mode == "exact" else str(self.q),
            "num_params": [text(p) for p in sorted(self.num_params, key=key)],
            "den_params": [text(p) for p in sorted(self.den_params, key=key)],
            "z": text(self.z),
            "termination": self.termination,
        }


def numeric_twin(spec: SeriesSpec, q0: HighPrecComplex) -> SeriesSpec:
    """The numeric counterpart of an exact spec at base q0."""
    if spec.mode != "exact":
        raise ValueError("numeric_twin expects an exact spec")
    return SeriesSpec(
        kind=spec.kind,
        q=q0,
        num_params=tuple(p.numeric(q0) for p in spec.num_params),
        den_params=tuple(p.numeric(q0) for p in spec.den_params),
        z=spec.z.numeric(q0),
        termination=spec.termination,
    )


# --------------------------------------------------------------------------
# exact evaluation: term recurrences over a shared factored denominator
# --------------------------------------------------------------------------

class _RecurrenceSum:
    """Running sum of terms t_0=1, t_{k+1} = t_k * u_k / v_k where u_k and
    v_k are products of binomials and a monomial.

    The partial sum and the current term are integer polynomials over one
    growing denominator bag, so each step costs a handful of binomial
    multiplications and no divisions.
    """

    def __init__(self):
        self.acc = ZPoly.one()
        self.term = ZPoly.one()
        self.bag = {}
        self.terms = 1
        self.hit_zero = False

    def step(self, num_factors, den_factors, mono=(Fraction(1), 0), index=None):
        """Advance one term and fold it into the sum.

        num_factors/den_factors are iterables of (c, e, label); returns
        False (and stops) when a numerator factor is exactly zero.
        """
        staged = []
        coeff, qexp = mono
        for c, e, _label in num_factors:
            if e == 0:
                if c == 1:
                    self.hit_zero = True
                    return False
                coeff *= 1 - c
            else:
                staged.append((c, e))
        den_staged = []
        for c, e, label in den_factors:
            if e == 0:
                if c == 1:
                    raise PoleError(
                        f"denominator factor {label} vanishes at term "
                        f"{index}", factor=label, index=index)
                coeff /= 1 - c
            elif e < 0:
                coeff /= -c
                qexp -= e
                den_staged.append((1 / c, -e))
            else:
                den_staged.append((c, e))
        for c, e in staged:
            if e < 0:
                coeff *= -c
                qexp += e
                c, e = 1 / c, -e
            self.term.imul_binomial(c, e)
        self.term.imul_mono(coeff, qexp)
        for c, e in den_staged:
            key = (c, e)
            self.bag[key] = self.bag.get(key, 0) + 1
            self.acc.imul_binomial(c, e)
        self.acc.iadd(self.term)
        self.terms += 1
        return True


def sum_factored(terms) -> QRatFun:
    """Exact sum of factored products, reduced once at the end.

    Zero terms are skipped; a term with a vanishing denominator factor
    raises PoleError.
    """
    sides = []
    for f in terms:
        parts = f._expanded_parts()
        if parts is not None:
            sides.append(parts)
    if not sides:
        return QRatFun.zero()
    total, union = _merge_sides(sides)
    return reduce_over_binomials(total, union)


def _nearest_q_power(p, q, ctx):
    """j with p == q**j to the termination tolerance, else None."""
    mag = p.abs()
    qabs = q.abs()
    if mag == 0 or qabs == 0 or qabs >= 1:
        return None
    j = int(ctx.mp.nint(ctx.mp.log(mag) / ctx.mp.log(qabs)))
    tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
    if (p - q ** j).abs() <= tol * mag:
        return j
    return None


def _scan_pole_set(spec):
    """Reject parameter choices on the series' pole set up front.

    A denominator parameter equal to q**-k with k inside the summation
    window makes a term denominator vanish; in a bilateral sum a
    numerator parameter equal to q**j (j >= 1) does the same on the
    k < 0 side.  Catching these before summing matters because an
    earlier numerator zero can otherwise stop the sum and hide the 0/0.
    """
    exact = spec.mode == "exact"
    n = spec.termination
    for p in spec.den_params:
        if exact:
            k = -p.exp if p.coeff == 1 else None
        else:
            j = _nearest_q_power(p, spec.q, spec.ctx)
            k = None if j is None else -j
        if k is not None and k >= 0 and (n is None or k <= n):
            raise PoleError(
                f"denominator parameter {p} equals q^{-k}; the factor "
                f"1 - ({p})*q^{k} vanishes at term {k}",
                param=str(p), index=k, factor=f"1 - ({p})*q^{k}")
    if spec.kind == "bilateral":
        lower = spec.lower_truncation()
        for p in spec.num_params:
            if exact:
                j = p.exp if p.coeff == 1 else None
            else:
                j = _nearest_q_power(p, spec.q, spec.ctx)
            if j is not None and j >= 1 and \
                    (lower is None or j <= lower + 1):
                raise PoleError(
                    f"numerator parameter {p} equals q^{j}; its "
                    f"reciprocal factor vanishes at term {-j}",
                    param=str(p), index=-j, factor=f"1 - ({p})*q^{-j}")


def _merge_sides(sides):
    """Combine (ZPoly, bag) partial sums over the union denominator."""
    union = {}
    for acc, bag in sides:
        for key, mult in bag.items():
            if union.get(key, 0) < mult:
                union[key] = mult
    total = ZPoly()
    for acc, bag in sides:
        lifted = acc.copy()
        for (c, e), mult in union.items():
            for _ in range(mult - bag.get((c, e), 0)):
                lifted.imul_binomial(c, e)
        total.iadd(lifted)
    return total, union


def _ratio_factors(params, k, invert_label=""):
    return [(p.coeff, p.exp + k, f"1 - ({p})*q^{k}") for p in params]


def _mono_pow(z: MonoParam, k: int):
    zz = z ** k
    return zz.coeff, zz.exp


def _eval_unilateral_exact(spec: SeriesSpec):
    _scan_pole_set(spec)
    if spec.termination is None:
        raise DomainError("exact unilateral evaluation requires a declared "
                          "termination")
    n = spec.termination
    s = _RecurrenceSum()
    for k in range(n):
        num = _ratio_factors(spec.num_params, k)
        den = _ratio_factors(spec.den_params, k)
        den.append((Fraction(1), k + 1, f"1 - q^{k + 1}"))
        if not s.step(num, den, mono=(spec.z.coeff, spec.z.exp), index=k + 1):
            break
    return reduce_over_binomials(s.acc, s.bag), s.terms


def _eval_bilateral_exact(spec: SeriesSpec):
    _scan_pole_set(spec)
    if spec.termination is None:
        raise DomainError("exact bilateral evaluation requires a declared "
                          "termination (numerator q^-n)")
    lower = spec.lower_truncation()
    if lower is None:
        raise DomainError("exact bilateral evaluation requires a lower "
                          "truncation (denominator q^(N+1))")
    n, N = spec.termination, lower
    up = _RecurrenceSum()
    for k in range(n):
        num = _ratio_factors(spec.num_params, k)
        den = _ratio_factors(spec.den_params, k)
        if not up.step(num, den, mono=(spec.z.coeff, spec.z.exp), index=k + 1):
            break
    down = _RecurrenceSum()
    zinv = spec.z.inverse() if isinstance(spec.z, MonoParam) else 1 / spec.z
    for k in range(0, -N, -1):
        # t_{k-1} = t_k * prod(1 - b q^{k-1}) / (z * prod(1 - a q^{k-1}))
        num = _ratio_factors(spec.den_params, k - 1)
        den = _ratio_factors(spec.num_params, k - 1)
        if not down.step(num, den, mono=(zinv.coeff, zinv.exp), index=k - 1):
            break
    # the k=0 term lives in both partial sums; drop it from the lower side
    down.acc.iadd(_neg_one_over(down.bag))
    total, union = _merge_sides([(up.acc, up.bag), (down.acc, down.bag)])
    return reduce_over_binomials(total, union), up.terms + down.terms - 1


def _neg_one_over(bag):
    """-1 lifted over the given denominator bag, as a ZPoly."""
    out = ZPoly([-1])
    for (c, e), mult in bag.items():
        for _ in range(mult):
            out.imul_binomial(c, e)
    return out


# --------------------------------------------------------------------------
# numeric evaluation
# --------------------------------------------------------------------------

def _numeric_ratio(spec, k, qk, ctx, forward=True):
    """Term ratio t_{k+1}/t_k (forward, qk = q^k) or t_{k-1}/t_k
    (backward, qk = q^(k-1))."""
    one = ctx.one()
    thr = ctx.pole_threshold()
    num = one
    den = one
    if forward:
        for a in spec.num_params:
            num = num * (one - a * qk)
        num = num * spec.z
        for b in spec.den_params:
            den = den * (one - b * qk)
        if spec.kind == "unilateral":
            den = den * (one - spec.q * qk)
    else:
        for b in spec.den_params:
            num = num * (one - b * qk)
        for a in spec.num_params:
            den = den * (one - a * qk)
        den = den * spec.z
    if den.abs() < thr:
        if num.abs() < thr:
            raise PoleError("indeterminate term ratio (0/0)", index=k)
        raise PoleError(f"denominator factor vanishes near term {k}", index=k)
    return num / den


def _numeric_sum_side(spec, ctx, forward, limit=None):
    """One-sided sum (k >= 0 forward from t_0 = 1, or k <= -1 backward);
    backward sums exclude the k = 0 term."""
    one = ctx.one()
    eps = ctx.tail_epsilon()
    term = one
    total = one if forward else ctx.zero()
    run = 0
    terms = 1 if forward else 0
    k = 0
    qk = one if forward else one / spec.q
    while True:
        if limit is not None and (k >= limit if forward else -k >= limit):
            break
        ratio = _numeric_ratio(spec, k, qk, ctx, forward=forward)
        term = term * ratio
        if forward:
            k += 1
            qk = qk * spec.q
        else:
            k -= 1
            qk = qk / spec.q
        total = total + term
        terms += 1
        if term.is_zero():
            break
        if term.abs() < eps * max(ctx.mp.mpf(1), total.abs()):
            run += 1
            if run >= STOP_RUN:
                break
        else:
            run = 0
        if terms > TERM_CAP:
            raise NonConvergence(
                f"series did not satisfy the stopping rule within "
                f"{TERM_CAP} terms")
    return total, terms


def _eval_unilateral_numeric(spec: SeriesSpec):
    _scan_pole_set(spec)
    ctx = spec.ctx
    if spec.termination is not None:
        total, terms = _numeric_sum_side(spec, ctx, forward=True,
                                         limit=spec.termination)
        return total, terms
    if spec.z.abs() >= 1:
        raise DomainError("non-terminating unilateral series requires |z| < 1")
    _check_numeric_base(spec.q)
    return _numeric_sum_side(spec, ctx, forward=True)


def _eval_bilateral_numeric(spec: SeriesSpec):
    _scan_pole_set(spec)
    ctx = spec.ctx
    margin = ctx.mp.mpf("1e-5")
    lower = spec.lower_truncation()
    if spec.termination is None or lower is None:
        _check_numeric_base(spec.q)
    if spec.termination is None:
        if spec.z.abs() >= 1 - margin:
            raise DomainError(
                "bilateral series requires |z| < 1 with margin 1e-5")
    if lower is None:
        num_prod = ctx.one()
        den_prod = ctx.one()
        for a in spec.num_params:
            num_prod = num_prod * a
        for b in spec.den_params:
            den_prod = den_prod * b
        if num_prod.abs() == 0 or \
                den_prod.abs() / num_prod.abs() >= spec.z.abs() * (1 - margin):
            raise DomainError(
                "bilateral series requires |b_1...b_r / a_1...a_r| < |z| "
                "with margin 1e-5")
    up, terms_up = _numeric_sum_side(spec, ctx, forward=True,
                                     limit=spec.termination)
    down, terms_down = _numeric_sum_side(spec, ctx, forward=False,
                                         limit=lower)
    return up + down, terms_up + terms_down


def eval_unilateral(spec: SeriesSpec, with_stats: bool = False):
    """Evaluate a unilateral series; exact mode requires termination."""
    if spec.kind != "unilateral":
        raise ValueError("eval_unilateral expects a unilateral spec")
    if spec.mode == "exact":
        value, terms = _eval_unilateral_exact(spec)
    else:
        value, terms = _eval_unilateral_numeric(spec)
    return (value, terms) if with_stats else value


def eval_bilateral(spec: SeriesSpec, with_stats: bool = False):
    """Evaluate a bilateral series.

    Exact mode needs truncation on both sides (numerator q^-n and
    denominator q^(N+1)); numeric mode enforces the convergence annulus
    with a relative margin of 1e-5 on whichever sides do not truncate.
    """
    if spec.kind != "bilateral":
        raise ValueError("eval_bilateral expects a bilateral spec")
    if spec.mode == "exact":
        value, terms = _eval_bilateral_exact(spec)
    else:
        value, terms = _eval_bilateral_numeric(spec)
    return (value, terms) if with_stats else value


def bilateral_term(spec: SeriesSpec, k: int):
    """Single exact term of a bilateral series (diagnostic).

    Returns the term value; a term whose denominator Pochhammer blows up
    is exactly zero and is returned as such.
    """
    if spec.mode != "exact":
        raise ValueError("bilateral_term is an exact-backend diagnostic")
    f = Factored()
    for a in spec.num_params:
        f.mul_poch(a, k, 1)
    for b in spec.den_params:
        f.mul_poch(b, k, -1)
    zk = spec.z ** k
    f.mul_mono(zk.coeff, zk.exp)
    return f.value()


# --------------------------------------------------------------------------
# structural rewrites
# --------------------------------------------------------------------------

def reindex_bilateral(spec: SeriesSpec, shift: int):
    """Rewrite a bilateral sum over k >= -shift as prefactor * unilateral.

    Every parameter x moves to x * q**-shift; the denominator parameter
    equal to q**(shift+1) becomes the unilateral (q;q)_k factor.  The
    contract is eval_bilateral(spec) == prefactor * eval_unilateral(out).
    """
    if spec.kind != "bilateral":
        raise ValueError("reindex_bilateral expects a bilateral spec")
    if shift < 0:
        raise ValueError("shift must be non-negative")
    if spec.lower_truncation() != shift:
        raise DomainError(
            f"series is not truncated below at k = {-shift} "
            f"(no denominator parameter q^{shift + 1})")
    exact = spec.mode == "exact"
    if exact:
        marker = MonoParam(Fraction(1), shift + 1)
        pre = Factored()
        for a in spec.num_params:
            pre.mul_poch(a, -shift, 1)
        for b in spec.den_params:
            pre.mul_poch(b, -shift, -1)
        zs = spec.z ** (-shift)
        pre.mul_mono(zs.coeff, zs.exp)
        prefactor = pre.value()
        new_nums = tuple(a.q_shift(-shift) for a in spec.num_params)
        new_dens = []
        dropped = False
        for b in spec.den_params:
            if not dropped and b == marker:
                dropped = True
                continue
            new_dens.append(b.q_shift(-shift))
    else:
        ctx = spec.ctx
        prefactor = ctx.one()
        for a in spec.num_params:
            prefactor = prefactor * _poch_numeric(a, spec.q, -shift)
        for b in spec.den_params:
            prefactor = _safe_div(prefactor,
                                  _poch_numeric(b, spec.q, -shift),
                                  f"({b};q)_-shift")
        prefactor = prefactor * spec.z ** (-shift)
        qshift = spec.q ** (-shift)
        new_nums = tuple(a * qshift for a in spec.num_params)
        target = spec.q ** (shift + 1)
        tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
        new_dens = []
        dropped = False
        for b in spec.den_params:
            if not dropped and (b - target).abs() <= tol * target.abs():
                dropped = True
                continue
            new_dens.append(b * qshift)
    termination = None
    if spec.termination is not None:
        termination = spec.termination + shift
    out = SeriesSpec(kind="unilateral", q=spec.q, num_params=new_nums,
                     den_params=tuple(new_dens), z=spec.z,
                     termination=termination)
    return prefactor, out


def reverse_finite_sum(spec: SeriesSpec):
    """Reverse the order of a terminating unilateral sum.

    Returns (prefactor, reversed_spec) with
    eval(spec) == prefactor * eval(reversed_spec).  The reversed series
    is again terminating with the same length; its argument is
    q * prod(den params) / (prod(num params) * z).
    """
    if spec.kind != "unilateral":
        raise ValueError("reverse_finite_sum expects a unilateral spec")
    if spec.termination is None:
        raise DomainError("reverse_finite_sum requires a terminating spec")
    n = spec.termination
    exact = spec.mode == "exact"
    if exact:
        marker = MonoParam(Fraction(1), -n)
        pre = Factored()
        for a in spec.num_params:
            pre.mul_poch(a, n, 1)
        pre.mul_poch(Q, n, -1)
        for b in spec.den_params:
            pre.mul_poch(b, n, -1)
        zn = spec.z ** n
        pre.mul_mono(zn.coeff, zn.exp)
        prefactor = pre.value()
        qpow = MonoParam(Fraction(1), 1 - n)
        new_nums = [MonoParam(Fraction(1), -n)]
        new_nums += [qpow / b for b in spec.den_params]
        new_dens = []
        dropped = False
        new_z = MonoParam(Fraction(1), 1) / spec.z
        for b in spec.den_params:
            new_z = new_z * b
        for a in spec.num_params:
            new_z = new_z / a
            if not dropped and a == marker:
                dropped = True
                continue
            new_dens.append(qpow / a)
        if not dropped:
            raise DomainError("no numerator parameter equals q^-n exactly")
    else:
        ctx = spec.ctx
        one = ctx.one()
        prefactor = one
        for a in spec.num_params:
            prefactor = prefactor * _poch_numeric(a, spec.q, n)
        prefactor = _safe_div(prefactor, _poch_numeric(spec.q, spec.q, n),
                              "(q;q)_n")
        for b in spec.den_params:
            prefactor = _safe_div(prefactor, _poch_numeric(b, spec.q, n),
                                  f"({b};q)_n")
        prefactor = prefactor * spec.z ** n
        qpow = spec.q ** (1 - n)
        target = spec.q ** (-n)
        tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
        new_nums = [target]
        new_nums += [qpow / b for b in spec.den_params]
        new_dens = []
        dropped = False
        new_z = spec.q / spec.z
        for b in spec.den_params:
            new_z = new_z * b
        for a in spec.num_params:
            new_z = new_z / a
            if not dropped and (a - target).abs() <= tol * target.abs():
                dropped = True
                continue
            new_dens.append(qpow / a)
        if not dropped:
            raise DomainError("no numerator parameter matches q^-n")
    out = SeriesSpec(kind="unilateral", q=spec.q, num_params=tuple(new_nums),
                     den_params=tuple(new_dens), z=new_z, termination=n)
    return prefactor, out
