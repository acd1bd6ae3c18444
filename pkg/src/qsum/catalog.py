"""Catalog of classical q-series summation identities with verifiers.

Covered identities (CLI ids in parentheses):

* Bailey's two 5psi5 sums (``thm1.1``, ``thm1.2``): terminating
  bilateral sums with closed product right-hand sides, constrained by
  bcde = q^(n+1) resp. bcde = q^(n+3).
* Bailey's two 3psi3 sums (``thm1.3``, ``thm1.4``): their n -> oo
  limits, with infinite-product right-hand sides.
* Ramanujan's 1psi1 sum (``eq1.9``) and Bailey's very-well-poised 6psi6
  sum (``eq1.10``).
* Carlitz's terminating 5phi4 (``thm1.5``, constraint
  bcde = q^(1+m-2n), m = floor(n/2)), Jackson's terminating q-Dixon
  3phi2 (``thm1.6``) and Carlitz's 3phi2 with free argument z
  (``thm1.7``, whose right-hand side is a finite j-sum).
* Four specializations reachable from the terminating sums by parameter
  substitution (``eq2.1``, ``eq2.2`` from thm1.5; ``eq4.1`` from
  thm1.6; ``eq4.4`` from thm1.7).  These are hand-coded and must agree
  with the output of :func:`substitute`, which replays the substitution.

Verification compares a series evaluation of the left-hand side against
the closed form: exact equality in Q(q) for terminating identities,
tolerance comparison at high precision otherwise.
"""

from __future__ import annotations

import dataclasses
import enum
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from qsum.errors import (ConstraintUnsatisfiable, DomainError, MissingParam,
                         NonConvergence, PoleError, SubstitutionError,
                         SweepFailure)
from qsum.exact import QRatFun
from qsum.numeric import HighPrecComplex, PrecisionContext, hp_close, rel_diff
from qsum.series import (INFINITY, Factored, MonoParam, Q, SeriesSpec,
                         eval_bilateral, eval_unilateral, poch, sum_factored)

DEFAULT_TOLERANCE = "1e-40"


class IdentityId(enum.Enum):
    """Catalog keys; values are the CLI identifiers."""

    BAILEY_5PSI5_FIRST = "thm1.1"
    BAILEY_5PSI5_SECOND = "thm1.2"
    BAILEY_3PSI3_FIRST = "thm1.3"
    BAILEY_3PSI3_SECOND = "thm1.4"
    CARLITZ_5PHI4 = "thm1.5"
    JACKSON_3PHI2 = "thm1.6"
    CARLITZ_3PHI2 = "thm1.7"
    RAMANUJAN_1PSI1 = "eq1.9"
    BAILEY_6PSI6 = "eq1.10"
    CARLITZ_5PHI4_EVEN = "eq2.1"
    CARLITZ_5PHI4_ODD = "eq2.2"
    JACKSON_3PHI2_SHIFTED = "eq4.1"
    CARLITZ_3PHI2_SHIFTED = "eq4.4"

    @classmethod
    def from_text(cls, text: str) -> "IdentityId":
        text = text.strip().lower()
        for member in cls:
            if member.value == text or member.name.lower() == text:
                return member
        aliases = {
            "bailey-5psi5-a": cls.BAILEY_5PSI5_FIRST,
            "bailey-5psi5-b": cls.BAILEY_5PSI5_SECOND,
            "bailey-3psi3-a": cls.BAILEY_3PSI3_FIRST,
            "bailey-3psi3-b": cls.BAILEY_3PSI3_SECOND,
            "carlitz-5phi4": cls.CARLITZ_5PHI4,
            "jackson-3phi2": cls.JACKSON_3PHI2,
            "carlitz-3phi2": cls.CARLITZ_3PHI2,
            "ramanujan-1psi1": cls.RAMANUJAN_1PSI1,
            "bailey-6psi6": cls.BAILEY_6PSI6,
        }
        if text in aliases:
            return aliases[text]
        raise ValueError(f"unknown identity id {text!r}")


_SCALARS = ("a", "b", "c", "d", "e", "z")
_INTS = ("n", "m")


@dataclass(frozen=True)
class ParamSet:
    """Named parameters of one identity instance.

    Exact mode: scalar entries are MonoParams and ``q`` is None (the
    formal base).  Numeric mode: scalars are HighPrecComplex and ``q``
    holds the base value.
    """

    q: HighPrecComplex | None = None
    a: object = None
    b: object = None
    c: object = None
    d: object = None
    e: object = None
    z: object = None
    n: int | None = None
    m: int | None = None

    @property
    def mode(self) -> str:
        return "exact" if self.q is None else "numeric"

    @property
    def ctx(self) -> PrecisionContext | None:
        return None if self.q is None else self.q.ctx

    def replace(self, **kw) -> "ParamSet":
        return dataclasses.replace(self, **kw)

    def scalars(self):
        return {s: getattr(self, s) for s in _SCALARS
                if getattr(self, s) is not None}

    def to_dict(self) -> dict:
        out = {}
        for s in (*_SCALARS, *_INTS):
            v = getattr(self, s)
            if v is not None:
                out[s] = v if isinstance(v, int) else str(v)
        out["q"] = None if self.q is None else str(self.q)
        return out


def _qp(ps: ParamSet, e: int):
    """q**e as a parameter in ps's backend."""
    if ps.mode == "exact":
        return MonoParam(Fraction(1), e)
    return ps.q ** e


def _base(ps: ParamSet):
    return Q if ps.mode == "exact" else ps.q


def _require(ps: ParamSet, *names):
    missing = [x for x in names if getattr(ps, x) is None]
    if missing:
        raise MissingParam(f"missing parameter(s): {', '.join(missing)}")


def _params_close(x, y, ps: ParamSet) -> bool:
    if ps.mode == "exact":
        return x == y
    ctx = ps.ctx
    tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
    return (x - y).abs() <= tol * max(ctx.mp.mpf(1), y.abs())


# --------------------------------------------------------------------------
# right-hand-side assembly helper, backend polymorphic
# --------------------------------------------------------------------------

class _Closed:
    """Builds a product of Pochhammer symbols and monomials in either
    backend; collapses to a scalar at the end."""

    def __init__(self, ps: ParamSet):
        self.ps = ps
        self.exact = ps.mode == "exact"
        if self.exact:
            self.f = Factored()
        else:
            self.num = ps.ctx.one()
            self.den = ps.ctx.one()

    def poch(self, x, n, side=1):
        if self.exact:
            self.f.mul_poch(x, n, side)
        else:
            v = poch(x, self.ps.q, n)
            if side == 1:
                self.num = self.num * v
            else:
                self.den = self.den * v
        return self

    def pochs(self, xs, n, side=1):
        for x in xs:
            self.poch(x, n, side)
        return self

    def mono(self, coeff, qexp=0):
        if self.exact:
            self.f.mul_mono(coeff, qexp)
        else:
            ctx = self.ps.ctx
            self.num = self.num * ctx.from_fraction(Fraction(coeff)) \
                * self.ps.q ** qexp
        return self

    def times(self, scalar):
        """Multiply by a backend scalar (numeric only)."""
        self.num = self.num * scalar
        return self

    def value(self):
        if self.exact:
            return self.f.value()
        try:
            return self.num / self.den
        except ZeroDivisionError:
            raise PoleError("closed form denominator vanishes") from None


# --------------------------------------------------------------------------
# per-identity definitions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Entry:
    id: "IdentityId"
    kind: str                      # unilateral | bilateral
    scalar_free: tuple
    int_free: tuple
    numeric_only: bool
    resolve: object
    lhs: object
    rhs: object


def _resolve_product_constraint(ps, exp, over, target):
    """Fill `target` from prod(over + target) = q**exp, or validate it."""
    prod = None
    for name in over:
        v = getattr(ps, name)
        prod = v if prod is None else prod * v
    required = _qp(ps, exp) / prod
    given = getattr(ps, target)
    if given is None:
        return ps.replace(**{target: required})
    if not _params_close(given, required, ps):
        raise ConstraintUnsatisfiable(
            f"{target} = {given} violates the product constraint "
            f"(expected {required})")
    return ps


def _fill_m_half_n(ps):
    m = ps.n // 2
    if ps.m is not None and ps.m != m:
        raise ConstraintUnsatisfiable(
            f"m = {ps.m} but the identity requires m = floor(n/2) = {m}")
    return ps.replace(m=m)


# ---- Bailey's first 5psi5 (thm1.1) -----------------------------------------

def _resolve_5psi5_first(ps):
    _require(ps, "b", "c", "d", "n")
    return _resolve_product_constraint(ps, ps.n + 1, ("b", "c", "d"), "e")


def _lhs_5psi5_first(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    q1 = _qp(ps, 1)
    nums = (b, c, d, e, _qp(ps, -ps.n))
    dens = (q1 / b, q1 / c, q1 / d, q1 / e, _qp(ps, ps.n + 1))
    return SeriesSpec("bilateral", _base(ps), nums, dens, q1,
                      termination=ps.n)


def _rhs_5psi5_first(ps):
    b, c, d = ps.b, ps.c, ps.d
    q1 = _qp(ps, 1)
    return (_Closed(ps)
            .pochs((q1, q1 / (b * c), q1 / (b * d), q1 / (c * d)), ps.n)
            .pochs((q1 / b, q1 / c, q1 / d, q1 / (b * c * d)), ps.n, -1)
            .value())


# ---- Bailey's second 5psi5 (thm1.2) ------------------------------------------

def _resolve_5psi5_second(ps):
    _require(ps, "b", "c", "d", "n")
    return _resolve_product_constraint(ps, ps.n + 3, ("b", "c", "d"), "e")


def _lhs_5psi5_second(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    q2 = _qp(ps, 2)
    nums = (b, c, d, e, _qp(ps, -ps.n))
    dens = (q2 / b, q2 / c, q2 / d, q2 / e, _qp(ps, ps.n + 2))
    return SeriesSpec("bilateral", _base(ps), nums, dens, _qp(ps, 1),
                      termination=ps.n)


def _rhs_5psi5_second(ps):
    b, c, d = ps.b, ps.c, ps.d
    q2 = _qp(ps, 2)
    out = _Closed(ps)
    # leading (1 - q) factor
    if out.exact:
        out.f.mul_binomial(Fraction(1), 1, 1)
    else:
        out.times(ps.ctx.one() - ps.q)
    return (out
            .pochs((q2, q2 / (b * c), q2 / (b * d), q2 / (c * d)), ps.n)
            .pochs((q2 / b, q2 / c, q2 / d, q2 / (b * c * d)), ps.n, -1)
            .value())


# ---- Bailey's 3psi3 pair (thm1.3, thm1.4) -----------------------------------

def _resolve_3psi3(ps):
    _require(ps, "b", "c", "d")
    return ps


def _detect_bilateral_termination(ps, nums):
    """Declared termination for a bilateral spec whose parameters may
    include an exact power q^-n (present for the 1/d = q^m rows)."""
    best = None
    if ps.mode == "exact":
        for p in nums:
            if p.coeff == 1 and p.exp <= 0:
                n = -p.exp
                best = n if best is None else min(best, n)
        return best
    ctx = ps.ctx
    qabs = ps.q.abs()
    if qabs == 0 or qabs >= 1:
        return None
    tol = ctx.mp.mpf(10) ** (-(ctx.digits - 5))
    for p in nums:
        mag = p.abs()
        if mag == 0:
            continue
        j = int(ctx.mp.nint(ctx.mp.log(mag) / ctx.mp.log(qabs)))
        if j <= 0 and (p - ps.q ** j).abs() <= tol * mag:
            n = -j
            best = n if best is None else min(best, n)
    return best


def _lhs_3psi3(ps, shift):
    b, c, d = ps.b, ps.c, ps.d
    qs = _qp(ps, shift)
    nums = (b, c, d)
    dens = (qs / b, qs / c, qs / d)
    z = qs / (b * c * d)
    return SeriesSpec("bilateral", _base(ps), nums, dens, z,
                      termination=_detect_bilateral_termination(ps, nums))


def _rhs_3psi3_first(ps):
    b, c, d = ps.b, ps.c, ps.d
    q1 = _qp(ps, 1)
    return (_Closed(ps)
            .pochs((q1, q1 / (b * c), q1 / (b * d), q1 / (c * d)), INFINITY)
            .pochs((q1 / b, q1 / c, q1 / d, q1 / (b * c * d)), INFINITY, -1)
            .value())


def _rhs_3psi3_second(ps):
    b, c, d = ps.b, ps.c, ps.d
    q1, q2 = _qp(ps, 1), _qp(ps, 2)
    return (_Closed(ps)
            .pochs((q1, q2 / (b * c), q2 / (b * d), q2 / (c * d)), INFINITY)
            .pochs((q2 / b, q2 / c, q2 / d, q2 / (b * c * d)), INFINITY, -1)
            .value())


# ---- Ramanujan's 1psi1 (eq1.9) ------------------------------------------------

def _resolve_1psi1(ps):
    _require(ps, "a", "b", "z")
    return ps


def _lhs_1psi1(ps):
    return SeriesSpec("bilateral", _base(ps), (ps.a,), (ps.b,), ps.z,
                      termination=_detect_bilateral_termination(ps, (ps.a,)))


def _rhs_1psi1(ps):
    a, b, z = ps.a, ps.b, ps.z
    q1 = _qp(ps, 1)
    return (_Closed(ps)
            .pochs((q1, b / a, a * z, q1 / (a * z)), INFINITY)
            .pochs((b, q1 / a, z, b / (a * z)), INFINITY, -1)
            .value())


# ---- Bailey's 6psi6 (eq1.10) ---------------------------------------------------

def _resolve_6psi6(ps):
    _require(ps, "a", "b", "c", "d", "e")
    prod = ps.b * ps.c * ps.d * ps.e
    required = _qp(ps, 1) * ps.a * ps.a / prod
    if ps.z is None:
        return ps.replace(z=required)
    if not _params_close(ps.z, required, ps):
        raise ConstraintUnsatisfiable(
            f"z = {ps.z} but the very-well-poised argument is {required}")
    return ps


def _lhs_6psi6(ps):
    if ps.mode == "exact":
        raise DomainError("the very-well-poised sum needs sqrt(a); "
                          "it is verified on the numeric backend")
    a, b, c, d, e = ps.a, ps.b, ps.c, ps.d, ps.e
    q = ps.q
    sqa = a.sqrt()
    nums = (q * sqa, -(q * sqa), b, c, d, e)
    dens = (sqa, -sqa, a * q / b, a * q / c, a * q / d, a * q / e)
    return SeriesSpec("bilateral", q, nums, dens, ps.z,
                      termination=_detect_bilateral_termination(ps, nums))


def _rhs_6psi6(ps):
    if ps.mode == "exact":
        raise DomainError("the very-well-poised sum needs sqrt(a); "
                          "it is verified on the numeric backend")
    a, b, c, d, e = ps.a, ps.b, ps.c, ps.d, ps.e
    q1 = _qp(ps, 1)
    aq = a * q1
    return (_Closed(ps)
            .pochs((aq, aq / (b * c), aq / (b * d), aq / (b * e),
                    aq / (c * d), aq / (c * e), aq / (d * e),
                    q1, q1 / a), INFINITY)
            .pochs((aq / b, aq / c, aq / d, aq / e,
                    q1 / b, q1 / c, q1 / d, q1 / e, ps.z), INFINITY, -1)
            .value())


# ---- Carlitz's 5phi4 (thm1.5) ---------------------------------------------------

def _resolve_5phi4(ps):
    _require(ps, "b", "c", "d", "n")
    ps = _fill_m_half_n(ps)
    return _resolve_product_constraint(ps, 1 + ps.m - 2 * ps.n,
                                       ("b", "c", "d"), "e")


def _lhs_5phi4(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    qn = _qp(ps, 1 - ps.n)
    nums = (_qp(ps, -ps.n), b, c, d, e)
    dens = (qn / b, qn / c, qn / d, qn / e)
    return SeriesSpec("unilateral", _base(ps), nums, dens, _qp(ps, 1),
                      termination=ps.n)


def _rhs_5phi4(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    n, m = ps.n, ps.m
    qn = _qp(ps, 1 - n)
    out = _Closed(ps)
    out.mono(Fraction(1), m * (1 + m - n))
    de = d * e
    if out.exact:
        inv = (de ** m).inverse()
        out.mono(inv.coeff, inv.exp)
    else:
        out.times(ps.ctx.one() / de ** m)
    out.poch(_qp(ps, -n), 2 * m)
    out.pochs((qn / (b * c), qn / (b * d), qn / (b * e)), m)
    out.pochs((_qp(ps, 1), qn / b, qn / d, qn / e,
               _qp(ps, n - m) * c), m, -1)
    out.poch(_qp(ps, 2 * m - n), n - 2 * m)
    return out.value()


# ---- Jackson's q-Dixon 3phi2 (thm1.6) ---------------------------------------------

def _resolve_3phi2_dixon(ps):
    _require(ps, "a", "b", "m")
    return ps


def _lhs_3phi2_dixon(ps):
    a, b, m = ps.a, ps.b, ps.m
    qm = _qp(ps, 1 - 2 * m)
    nums = (_qp(ps, -2 * m), a, b)
    dens = (qm / a, qm / b)
    z = _qp(ps, 2 - m) / (a * b)
    return SeriesSpec("unilateral", _base(ps), nums, dens, z,
                      termination=2 * m)


def _rhs_3phi2_dixon(ps):
    a, b, m = ps.a, ps.b, ps.m
    q1 = _qp(ps, 1)
    ab = a * b
    return (_Closed(ps)
            .pochs((a, b), m).pochs((q1, ab), 2 * m)
            .pochs((q1, ab), m, -1).pochs((a, b), 2 * m, -1)
            .value())


# ---- Carlitz's 3phi2 with free argument (thm1.7) ------------------------------------

def _resolve_3phi2_carlitz(ps):
    _require(ps, "a", "b", "z", "n")
    return _fill_m_half_n(ps)


def _lhs_3phi2_carlitz(ps):
    a, b = ps.a, ps.b
    qn = _qp(ps, 1 - ps.n)
    nums = (_qp(ps, -ps.n), a, b)
    dens = (qn / a, qn / b)
    z = _qp(ps, ps.m + 1 - ps.n) * ps.z / (a * b)
    return SeriesSpec("unilateral", _base(ps), nums, dens, z,
                      termination=ps.n)


def _rhs_3phi2_carlitz(ps):
    """Finite j-sum over 2j <= n; not a pure Pochhammer product."""
    a, b, z, n, m = ps.a, ps.b, ps.z, ps.n, ps.m
    qn = _qp(ps, 1 - n)
    if ps.mode == "exact":
        terms = []
        for j in range(n // 2 + 1):
            f = Factored()
            zj = z ** j
            f.mul_mono(Fraction((-1) ** j) * zj.coeff,
                       -j * (j - 1) // 2 + m * j + zj.exp)
            f.mul_poch(_qp(ps, -n), 2 * j, 1)
            f.mul_poch(qn / (a * b), j, 1)
            f.mul_poch(z, m - j, 1)
            f.mul_poch(z.q_shift(j + m - n), n - m - j, 1)
            f.mul_poch(_qp(ps, 1), j, -1)
            f.mul_poch(qn / a, j, -1)
            f.mul_poch(qn / b, j, -1)
            terms.append(f)
        return sum_factored(terms)
    ctx = ps.ctx
    q = ps.q
    total = ctx.zero()
    for j in range(n // 2 + 1):
        t = ctx.from_fraction(Fraction((-1) ** j)) \
            * q ** (-j * (j - 1) // 2 + m * j) * z ** j
        t = t * poch(_qp(ps, -n), q, 2 * j)
        t = t * poch(qn / (a * b), q, j)
        t = t * poch(z, q, m - j)
        t = t * poch(z * q ** (j + m - n), q, n - m - j)
        den = poch(q, q, j) * poch(qn / a, q, j) * poch(qn / b, q, j)
        if den.abs() < ctx.pole_threshold():
            raise PoleError(f"terminating sum denominator vanishes at j={j}")
        total = total + t / den
    return total


# ---- substituted specializations (eq2.1, eq2.2, eq4.1, eq4.4) --------------------------

def _resolve_5phi4_even(ps):
    _require(ps, "b", "c", "d", "m")
    return _resolve_product_constraint(ps, ps.m + 1, ("b", "c", "d"), "e")


def _lhs_5phi4_even(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    m = ps.m
    qm = _qp(ps, 1 - m)
    shift = _qp(ps, -m)
    nums = (_qp(ps, -2 * m), b * shift, c * shift, d * shift, e * shift)
    dens = (qm / b, qm / c, qm / d, qm / e)
    return SeriesSpec("unilateral", _base(ps), nums, dens, _qp(ps, 1),
                      termination=2 * m)


def _rhs_5phi4_even(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    m = ps.m
    q1 = _qp(ps, 1)
    qm = _qp(ps, 1 - m)
    out = _Closed(ps)
    out.mono(Fraction(1), m * m + m)
    de = d * e
    if out.exact:
        inv = (de ** m).inverse()
        out.mono(inv.coeff, inv.exp)
    else:
        out.times(ps.ctx.one() / de ** m)
    out.poch(_qp(ps, -2 * m), 2 * m)
    out.pochs((q1 / (b * c), q1 / (b * d), q1 / (b * e)), m)
    out.pochs((q1, qm / b, qm / d, qm / e, c), m, -1)
    return out.value()


def _resolve_5phi4_odd(ps):
    _require(ps, "b", "c", "d", "m")
    return _resolve_product_constraint(ps, ps.m + 3, ("b", "c", "d"), "e")


def _lhs_5phi4_odd(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    m = ps.m
    qm = _qp(ps, 1 - m)
    shift = _qp(ps, -m - 1)
    nums = (_qp(ps, -2 * m - 1), b * shift, c * shift, d * shift, e * shift)
    dens = (qm / b, qm / c, qm / d, qm / e)
    return SeriesSpec("unilateral", _base(ps), nums, dens, _qp(ps, 1),
                      termination=2 * m + 1)


def _rhs_5phi4_odd(ps):
    b, c, d, e = ps.b, ps.c, ps.d, ps.e
    m = ps.m
    q1, q2 = _qp(ps, 1), _qp(ps, 2)
    qm = _qp(ps, 1 - m)
    out = _Closed(ps)
    # (q - 1) q^(m^2+2m-1) = -(1 - q) q^(m^2+2m-1)
    out.mono(Fraction(-1), m * m + 2 * m - 1)
    if out.exact:
        out.f.mul_binomial(Fraction(1), 1, 1)
    else:
        out.times(ps.ctx.one() - ps.q)
    de = d * e
    if out.exact:
        inv = (de ** m).inverse()
        out.mono(inv.coeff, inv.exp)
    else:
        out.times(ps.ctx.one() / de ** m)
    out.poch(_qp(ps, -2 * m - 1), 2 * m)
    out.pochs((q2 / (b * c), q2 / (b * d), q2 / (b * e)), m)
    out.pochs((q1, qm / b, qm / d, qm / e, c), m, -1)
    return out.value()


def _resolve_3phi2_shifted(ps):
    _require(ps, "b", "c", "m")
    return ps


def _lhs_3phi2_dixon_shifted(ps):
    b, c, m = ps.b, ps.c, ps.m
    qm = _qp(ps, 1 - m)
    shift = _qp(ps, -m)
    nums = (_qp(ps, -2 * m), b * shift, c * shift)
    dens = (qm / b, qm / c)
    z = _qp(ps, m + 2) / (b * c)
    return SeriesSpec("unilateral", _base(ps), nums, dens, z,
                      termination=2 * m)


def _rhs_3phi2_dixon_shifted(ps):
    b, c, m = ps.b, ps.c, ps.m
    q1 = _qp(ps, 1)
    bs = b * _qp(ps, -m)
    cs = c * _qp(ps, -m)
    bc2 = b * c * _qp(ps, -2 * m)
    return (_Closed(ps)
            .pochs((bs, cs), m).pochs((q1, bc2), 2 * m)
            .pochs((q1, bc2), m, -1).pochs((bs, cs), 2 * m, -1)
            .value())


def _lhs_3phi2_carlitz_shifted(ps):
    b, c, m = ps.b, ps.c, ps.m
    qm = _qp(ps, 1 - m)
    shift = _qp(ps, -m - 1)
    nums = (_qp(ps, -2 * m - 1), b * shift, c * shift)
    dens = (qm / b, qm / c)
    z = _qp(ps, m + 4) / (b * c)
    return SeriesSpec("unilateral", _base(ps), nums, dens, z,
                      termination=2 * m + 1)


def _rhs_3phi2_carlitz_shifted(ps):
    b, c, m = ps.b, ps.c, ps.m
    q2 = _qp(ps, 2)
    qm = _qp(ps, 1 - m)
    out = _Closed(ps)
    out.mono(Fraction((-1) ** m), m * (m + 5) // 2)
    out.poch(_qp(ps, -2 * m - 1), 2 * m)
    out.poch(q2 / (b * c), m)
    out.poch(q2, m - 1, -1)
    out.pochs((qm / b, qm / c), m, -1)
    return out.value()


# --------------------------------------------------------------------------
# the catalog table
# --------------------------------------------------------------------------

CATALOG = {
    IdentityId.BAILEY_5PSI5_FIRST: _Entry(
        IdentityId.BAILEY_5PSI5_FIRST, "bilateral", ("b", "c", "d"), ("n",),
        False, _resolve_5psi5_first, _lhs_5psi5_first, _rhs_5psi5_first),
    IdentityId.BAILEY_5PSI5_SECOND: _Entry(
        IdentityId.BAILEY_5PSI5_SECOND, "bilateral", ("b", "c", "d"), ("n",),
        False, _resolve_5psi5_second, _lhs_5psi5_second, _rhs_5psi5_second),
    IdentityId.BAILEY_3PSI3_FIRST: _Entry(
        IdentityId.BAILEY_3PSI3_FIRST, "bilateral", ("b", "c", "d"), (),
        True, _resolve_3psi3, lambda ps: _lhs_3psi3(ps, 1), _rhs_3psi3_first),
    IdentityId.BAILEY_3PSI3_SECOND: _Entry(
        IdentityId.BAILEY_3PSI3_SECOND, "bilateral", ("b", "c", "d"), (),
        True, _resolve_3psi3, lambda ps: _lhs_3psi3(ps, 2), _rhs_3psi3_second),
    IdentityId.RAMANUJAN_1PSI1: _Entry(
        IdentityId.RAMANUJAN_1PSI1, "bilateral", ("a", "b", "z"), (),
        True, _resolve_1psi1, _lhs_1psi1, _rhs_1psi1),
    IdentityId.BAILEY_6PSI6: _Entry(
        IdentityId.BAILEY_6PSI6, "bilateral", ("a", "b", "c", "d", "e"), (),
        True, _resolve_6psi6, _lhs_6psi6, _rhs_6psi6),
    IdentityId.CARLITZ_5PHI4: _Entry(
        IdentityId.CARLITZ_5PHI4, "unilateral", ("b", "c", "d"), ("n",),
        False, _resolve_5phi4, _lhs_5phi4, _rhs_5phi4),
    IdentityId.JACKSON_3PHI2: _Entry(
        IdentityId.JACKSON_3PHI2, "unilateral", ("a", "b"), ("m",),
        False, _resolve_3phi2_dixon, _lhs_3phi2_dixon, _rhs_3phi2_dixon),
    IdentityId.CARLITZ_3PHI2: _Entry(
        IdentityId.CARLITZ_3PHI2, "unilateral", ("a", "b", "z"), ("n",),
        False, _resolve_3phi2_carlitz, _lhs_3phi2_carlitz,
        _rhs_3phi2_carlitz),
    IdentityId.CARLITZ_5PHI4_EVEN: _Entry(
        IdentityId.CARLITZ_5PHI4_EVEN, "unilateral", ("b", "c", "d"), ("m",),
        False, _resolve_5phi4_even, _lhs_5phi4_even, _rhs_5phi4_even),
    IdentityId.CARLITZ_5PHI4_ODD: _Entry(
        IdentityId.CARLITZ_5PHI4_ODD, "unilateral", ("b", "c", "d"), ("m",),
        False, _resolve_5phi4_odd, _lhs_5phi4_odd, _rhs_5phi4_odd),
    IdentityId.JACKSON_3PHI2_SHIFTED: _Entry(
        IdentityId.JACKSON_3PHI2_SHIFTED, "unilateral", ("b", "c"), ("m",),
        False, _resolve_3phi2_shifted, _lhs_3phi2_dixon_shifted,
        _rhs_3phi2_dixon_shifted),
    IdentityId.CARLITZ_3PHI2_SHIFTED: _Entry(
        IdentityId.CARLITZ_3PHI2_SHIFTED, "unilateral", ("b", "c"), ("m",),
        False, _resolve_3phi2_shifted, _lhs_3phi2_carlitz_shifted,
        _rhs_3phi2_carlitz_shifted),
}


def resolve_params(identity: IdentityId, given: ParamSet) -> ParamSet:
    """Fill derived parameters (constraint products, m = floor(n/2))."""
    return CATALOG[identity].resolve(given)


def lhs_series(identity: IdentityId, params: ParamSet) -> SeriesSpec:
    """The series whose evaluation is the identity's left-hand side."""
    return CATALOG[identity].lhs(params)


def rhs_closed_form(identity: IdentityId, params: ParamSet):
    """The identity's closed form, evaluated in the active backend."""
    return CATALOG[identity].rhs(params)


# --------------------------------------------------------------------------
# instances and verification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityInstance:
    """A fully resolved identity: concrete series plus closed-form value."""

    id: object                     # IdentityId or a derived-identity label
    params: ParamSet
    lhs: SeriesSpec
    rhs_value: object

    def serialize(self) -> dict:
        rhs = self.rhs_value
        return {
            "id": self.id.value if isinstance(self.id, IdentityId)
                  else str(self.id),
            "params": self.params.to_dict(),
            "lhs": self.lhs.describe(),
            "rhs": rhs.to_text() if isinstance(rhs, QRatFun) else str(rhs),
        }


def instantiate(identity, params: ParamSet) -> IdentityInstance:
    """Resolve parameters and materialize LHS spec and RHS value.

    ``identity`` is an IdentityId or a DerivedIdentity from
    :func:`substitute`.
    """
    if isinstance(identity, DerivedIdentity):
        return identity.instantiate(params)
    ps = resolve_params(identity, params)
    return IdentityInstance(identity, ps, lhs_series(identity, ps),
                            rhs_closed_form(identity, ps))


@dataclass(frozen=True)
class VerificationReport:
    id: str
    mode: str
    params: dict
    lhs_value: object
    rhs_value: object
    status: str                    # equal | within_tolerance | mismatch | pole | domain
    diff: object = None            # achieved relative difference (numeric)
    detail: str | None = None
    terms_evaluated: int = 0
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return self.status in ("equal", "within_tolerance")

    def _value_text(self, v, full=False):
        if v is None:
            return None
        if isinstance(v, QRatFun):
            return v.to_text()
        return v.to_str() if isinstance(v, HighPrecComplex) else str(v)

    def to_json_dict(self) -> dict:
        """Stable field set; elapsed is normalized to null so identical
        runs are byte-identical."""
        return {
            "id": self.id,
            "mode": self.mode,
            "params": self.params,
            "lhs_value": self._value_text(self.lhs_value),
            "rhs_value": self._value_text(self.rhs_value),
            "status": self.status,
            "diff": None if self.diff is None else str(self.diff),
            "detail": self.detail,
            "terms_evaluated": self.terms_evaluated,
            "elapsed": None,
        }


def verify(identity: IdentityId, params: ParamSet, tol=None) -> VerificationReport:
    """Evaluate both sides and compare.

    Exact mode demands exact equality of normalized rational functions;
    numeric mode compares with hp_close at ``tol`` (default 1e-40).
    Poles and domain violations are reported in the status rather than
    raised.
    """
    t0 = time.perf_counter()
    mode = params.mode
    tol = tol if tol is not None else DEFAULT_TOLERANCE
    lhs_value = rhs_value = None
    diff = None
    terms = 0
    try:
        ps = resolve_params(identity, params)
        spec = lhs_series(identity, ps)
        if spec.kind == "bilateral":
            lhs_value, terms = eval_bilateral(spec, with_stats=True)
        else:
            lhs_value, terms = eval_unilateral(spec, with_stats=True)
        rhs_value = rhs_closed_form(identity, ps)
        if mode == "exact":
            status = "equal" if lhs_value == rhs_value else "mismatch"
            if status == "mismatch":
                d = lhs_value - rhs_value
                diff = d.to_text()
        else:
            diff = rel_diff(lhs_value, rhs_value)
            status = ("within_tolerance"
                      if hp_close(lhs_value, rhs_value, tol) else "mismatch")
        detail = None
        pset = ps
    except PoleError as exc:
        status, detail, pset = "pole", str(exc), params
    except (DomainError, NonConvergence) as exc:
        status, detail, pset = "domain", str(exc), params
    return VerificationReport(
        id=identity.value, mode=mode, params=pset.to_dict(),
        lhs_value=lhs_value, rhs_value=rhs_value, status=status, diff=diff,
        detail=detail, terms_evaluated=terms,
        elapsed=time.perf_counter() - t0)


# --------------------------------------------------------------------------
# parameter substitution engine
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolRule:
    """source scalar <- coeff * q**(exp_const + exp_m * m) * target[symbol]."""

    symbol: str | None
    coeff: Fraction = Fraction(1)
    exp_const: int = 0
    exp_m: int = 0


@dataclass(frozen=True)
class IndexRule:
    """source integer <- mult * m + const (in the target's m)."""

    mult: int = 1
    const: int = 0


class DerivedIdentity:
    """An identity obtained from a catalog entry by parameter substitution.

    Exposes the same builder surface as a catalog entry; instantiating it
    at concrete target parameters must coincide with the hand-coded
    specializations where those exist.
    """

    def __init__(self, source: IdentityId, rules: dict, name: str | None = None):
        self.source = source
        self.rules = dict(rules)
        self.name = name or f"{source.value}-substituted"
        src = CATALOG[source]
        for sym in (*src.scalar_free, *src.int_free):
            if sym not in self.rules:
                raise SubstitutionError(
                    f"substitution must map source symbol {sym!r}")
        for sym, rule in self.rules.items():
            if sym in _INTS and not isinstance(rule, IndexRule):
                raise SubstitutionError(f"{sym} needs an IndexRule")
            if sym in _SCALARS and not isinstance(rule, SymbolRule):
                raise SubstitutionError(f"{sym} needs a SymbolRule")

    def _mono_factor(self, rule: SymbolRule, ps: ParamSet):
        e = rule.exp_const + rule.exp_m * (ps.m or 0)
        if ps.mode == "exact":
            return MonoParam(rule.coeff, e)
        return ps.ctx.from_fraction(rule.coeff) * ps.q ** e

    def _map_params(self, target: ParamSet) -> ParamSet:
        values = {}
        for sym, rule in self.rules.items():
            if isinstance(rule, IndexRule):
                if target.m is None:
                    raise MissingParam("substitution requires target m")
                values[sym] = rule.mult * target.m + rule.const
            else:
                factor = self._mono_factor(rule, target)
                if rule.symbol is None:
                    values[sym] = factor
                else:
                    base = getattr(target, rule.symbol)
                    if base is None:
                        continue  # left for the source resolver to fill
                    values[sym] = base * factor
        return ParamSet(q=target.q, **values)

    def resolve(self, target: ParamSet) -> ParamSet:
        """Resolve in source coordinates and pull derived values back."""
        mapped = resolve_params(self.source, self._map_params(target))
        out = target
        for sym, rule in self.rules.items():
            if isinstance(rule, SymbolRule) and rule.symbol is not None \
                    and getattr(target, rule.symbol) is None:
                src_val = getattr(mapped, sym)
                if src_val is None:
                    raise SubstitutionError(
                        f"source resolver left {sym} undefined")
                factor = self._mono_factor(rule, target)
                out = out.replace(**{rule.symbol: src_val / factor})
        return out

    def _source_params(self, target: ParamSet) -> ParamSet:
        return resolve_params(self.source, self._map_params(self.resolve(target)))

    def lhs(self, target: ParamSet) -> SeriesSpec:
        return lhs_series(self.source, self._source_params(target))

    def rhs(self, target: ParamSet):
        return rhs_closed_form(self.source, self._source_params(target))

    def instantiate(self, target: ParamSet) -> IdentityInstance:
        resolved = self.resolve(target)
        src = self._source_params(target)
        return IdentityInstance(self.name, resolved,
                                lhs_series(self.source, src),
                                rhs_closed_form(self.source, src))


def substitute(source: IdentityId, rules: dict,
               name: str | None = None) -> DerivedIdentity:
    """Build the identity obtained by rewriting the source's parameters."""
    return DerivedIdentity(source, rules, name=name)


#: The substitutions that reproduce the hand-coded specializations.
DERIVATIONS = {
    IdentityId.CARLITZ_5PHI4_EVEN: (IdentityId.CARLITZ_5PHI4, {
        "n": IndexRule(2, 0),
        "b": SymbolRule("b", exp_m=-1),
        "c": SymbolRule("c", exp_m=-1),
        "d": SymbolRule("d", exp_m=-1),
        "e": SymbolRule("e", exp_m=-1),
    }),
    IdentityId.CARLITZ_5PHI4_ODD: (IdentityId.CARLITZ_5PHI4, {
        "n": IndexRule(2, 1),
        "b": SymbolRule("b", exp_m=-1, exp_const=-1),
        "c": SymbolRule("c", exp_m=-1, exp_const=-1),
        "d": SymbolRule("d", exp_m=-1, exp_const=-1),
        "e": SymbolRule("e", exp_m=-1, exp_const=-1),
    }),
    IdentityId.JACKSON_3PHI2_SHIFTED: (IdentityId.JACKSON_3PHI2, {
        "m": IndexRule(1, 0),
        "a": SymbolRule("b", exp_m=-1),
        "b": SymbolRule("c", exp_m=-1),
    }),
    IdentityId.CARLITZ_3PHI2_SHIFTED: (IdentityId.CARLITZ_3PHI2, {
        "n": IndexRule(2, 1),
        "z": SymbolRule(None, exp_const=2),
        "a": SymbolRule("b", exp_m=-1, exp_const=-1),
        "b": SymbolRule("c", exp_m=-1, exp_const=-1),
    }),
}


def derived_twin(identity: IdentityId) -> DerivedIdentity:
    """The substitution route to a hand-coded specialization."""
    source, rules = DERIVATIONS[identity]
    return substitute(source, rules, name=identity.value)


# --------------------------------------------------------------------------
# limiting cases and the point-sequence check
# --------------------------------------------------------------------------

_LIMIT_PAIRS = {
    IdentityId.BAILEY_5PSI5_FIRST: IdentityId.BAILEY_3PSI3_FIRST,
    IdentityId.BAILEY_5PSI5_SECOND: IdentityId.BAILEY_3PSI3_SECOND,
}


@dataclass(frozen=True)
class LimitRow:
    n: int
    finite_rhs: HighPrecComplex
    limit_rhs: HighPrecComplex
    diff: object


def limit_check(identity: IdentityId, params: ParamSet, n_grid) -> list:
    """Compare the truncation-parameter closed form against its limit.

    For each n in the grid the finite product right-hand side is
    evaluated (with the constrained parameter re-resolved) and compared
    to the infinite-product right-hand side of the limiting identity.
    """
    if identity not in _LIMIT_PAIRS:
        raise ValueError("limit_check applies to the two terminating "
                         "bilateral sums (thm1.1, thm1.2)")
    if params.mode != "numeric":
        raise DomainError("limit tables require the numeric backend")
    limit_id = _LIMIT_PAIRS[identity]
    limit_ps = resolve_params(limit_id, params.replace(e=None, n=None))
    limit_value = rhs_closed_form(limit_id, limit_ps)
    rows = []
    for n in n_grid:
        ps = resolve_params(identity, params.replace(e=None, n=int(n)))
        finite = rhs_closed_form(identity, ps)
        rows.append(LimitRow(int(n), finite, limit_value,
                             rel_diff(finite, limit_value)))
    return rows


@dataclass(frozen=True)
class PointSequenceRow:
    m: int
    lhs: HighPrecComplex | None
    rhs: HighPrecComplex | None
    diff: object
    radius_ok: bool
    status: str
    detail: str | None = None


def ismail_sequence_check(identity: IdentityId, b, c, m_range, q,
                          tol=None) -> list:
    """Verify a 3psi3 identity on the point sequence 1/d = q^m.

    At these points both sides are elementary (the series truncates).
    The sample sequence accumulates at 0 inside the analyticity disk
    |1/d| < |bc/q| (first sum) or |bc/q^2| (second), so agreement on all
    of it is the discrete core of the point-sequence proof.
    ``radius_ok`` flags rows lying inside that disk.
    """
    if identity not in (IdentityId.BAILEY_3PSI3_FIRST,
                        IdentityId.BAILEY_3PSI3_SECOND):
        raise ValueError("point-sequence check applies to thm1.3/thm1.4")
    if not isinstance(q, HighPrecComplex):
        raise DomainError("the point-sequence check is numeric")
    ctx = q.ctx
    tol = tol if tol is not None else DEFAULT_TOLERANCE
    second = identity is IdentityId.BAILEY_3PSI3_SECOND
    b = HighPrecComplex.coerce(b, ctx)
    c = HighPrecComplex.coerce(c, ctx)
    radius = (b * c / q ** (2 if second else 1)).abs()
    rows = []
    for m in m_range:
        m = int(m)
        radius_ok = bool((q ** m).abs() < radius)
        try:
            ps = resolve_params(identity,
                                ParamSet(q=q, b=b, c=c, d=q ** (-m)))
            spec = lhs_series(identity, ps)
            lhs = eval_bilateral(spec)
            rhs = rhs_closed_form(identity, ps)
            diff = rel_diff(lhs, rhs)
            status = ("within_tolerance" if hp_close(lhs, rhs, tol)
                      else "mismatch")
            rows.append(PointSequenceRow(m, lhs, rhs, diff, radius_ok,
                                         status))
        except PoleError as exc:
            rows.append(PointSequenceRow(m, None, None, None, radius_ok,
                                         "pole", str(exc)))
        except (DomainError, NonConvergence) as exc:
            rows.append(PointSequenceRow(m, None, None, None, radius_ok,
                                         "domain", str(exc)))
    return rows


# --------------------------------------------------------------------------
# randomized sweeps
# --------------------------------------------------------------------------

def _random_fraction(rng) -> Fraction:
    p = 0
    while p == 0:
        p = rng.randint(-10, 10)
    return Fraction(p, rng.randint(1, 10))


def _random_mono(rng) -> MonoParam:
    return MonoParam(_random_fraction(rng), rng.randint(0, 3))


def _exact_pole_adjacent(ps: ParamSet, entry) -> bool:
    """True when a parameter (or the b*c*d product) is a pure q power,
    which puts the instance on a codimension-one pole set."""
    for s in entry.scalar_free:
        v = getattr(ps, s)
        if v is not None and v.coeff == 1:
            return True
    if all(getattr(ps, s) is not None for s in ("b", "c", "d")):
        if (ps.b * ps.c * ps.d).coeff == 1:
            return True
    if ps.a is not None and ps.b is not None and entry.id in (
            IdentityId.JACKSON_3PHI2, IdentityId.CARLITZ_3PHI2):
        if (ps.a * ps.b).coeff == 1:
            return True
    if ps.b is not None and ps.c is not None and entry.id in (
            IdentityId.JACKSON_3PHI2_SHIFTED, IdentityId.CARLITZ_3PHI2_SHIFTED):
        if (ps.b * ps.c).coeff == 1:
            return True
    return False


def _numeric_pole_adjacent(ps: ParamSet, entry) -> bool:
    ctx = ps.ctx
    tol = ctx.mp.mpf("1e-8")
    values = [getattr(ps, s) for s in entry.scalar_free]
    if all(getattr(ps, s) is not None for s in ("b", "c", "d")):
        values.append(ps.b * ps.c * ps.d)
    for v in values:
        if v is None:
            continue
        for j in range(-8, 9):
            target = ps.q ** j
            if (v - target).abs() <= tol * target.abs():
                return True
    return False


def _random_numeric_params(rng, identity, entry, ctx, q):
    """Random parameters with margin >= 0.1 inside the convergence domain."""
    def rnum(lo=1, hi=60, den=10):
        return ctx.from_fraction(Fraction(rng.randint(lo, hi), den))

    if identity in (IdentityId.BAILEY_3PSI3_FIRST,
                    IdentityId.BAILEY_3PSI3_SECOND):
        s = 2 if identity is IdentityId.BAILEY_3PSI3_SECOND else 1
        while True:
            b, c, d = (rnum(11, 60) for _ in range(3))
            z = q ** s / (b * c * d)
            # annulus |q^(2s)/(bcd)| < |z| < 1; margin 0.1 on both sides
            if z.abs() < 0.9 and (q ** s).abs() ** 2 / (b * c * d).abs() \
                    < z.abs() * 0.9:
                return ParamSet(q=q, b=b, c=c, d=d)
    if identity is IdentityId.RAMANUJAN_1PSI1:
        while True:
            a = rnum(11, 80)
            b = rnum(1, 40, 100)
            z = rnum(20, 85, 100)
            if (b / a).abs() < z.abs() * 0.9 and z.abs() < 0.9:
                return ParamSet(q=q, a=a, b=b, z=z)
    if identity is IdentityId.BAILEY_6PSI6:
        while True:
            a = rnum(1, 9, 10)
            b, c, d, e = (rnum(11, 60) for _ in range(4))
            z = q * a * a / (b * c * d * e)
            # here the annulus lower bound equals |z|^2, so |z| < 0.9
            # leaves a 0.1 margin on both inequalities
            if 0 < z.abs() < 0.9:
                return ParamSet(q=q, a=a, b=b, c=c, d=d, e=e)
    raise ValueError(f"no numeric sampler for {identity}")


def _sweep_instance(identity, entry, seed, index, mode, q, fixed, tol):
    """One sweep instance with its own rng, so instances are independent
    and a parallel sweep stays deterministic."""
    rng = random.Random(f"{seed}:{index}")
    for _attempt in range(100):
        if mode == "exact":
            draw = {s: _random_mono(rng) for s in entry.scalar_free}
            for sym in entry.int_free:
                draw[sym] = rng.randint(0, 8)
            draw.update(fixed)
            ps = ParamSet(**draw)
            if _exact_pole_adjacent(ps, entry):
                continue
            try:
                resolved = resolve_params(identity, ps)
            except (ConstraintUnsatisfiable, MissingParam):
                continue
            if _exact_pole_adjacent(resolved, entry):
                continue
        else:
            ps = _random_numeric_params(rng, identity, entry, q.ctx, q)
            if fixed:
                ps = ps.replace(**fixed)
            if _numeric_pole_adjacent(ps, entry):
                continue
        report = verify(identity, ps, tol=tol)
        if report.status not in ("pole", "domain"):
            return report
    raise SweepFailure(
        f"could not sample non-degenerate parameters for {identity.value}")


def sweep_random(identity: IdentityId, count: int, seed: int,
                 mode: str = "exact", q: HighPrecComplex | None = None,
                 fixed: dict | None = None, tol=None,
                 raise_on_failure: bool = True, parallelism: int = 1) -> list:
    """Deterministic randomized verification sweep.

    Samples parameters away from the pole sets, retrying each instance up
    to 100 times on pole/constraint rejections.  Instances draw from
    independent per-index generators, so the output is reproducible for a
    given seed no matter how many workers evaluate them.  Returns the
    reports; if any fails and ``raise_on_failure`` is set, raises
    SweepFailure carrying the failing reports.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    entry = CATALOG[identity]
    if mode == "exact" and entry.numeric_only:
        raise DomainError(f"{identity.value} verifies on the numeric "
                          f"backend only")
    if mode == "numeric" and q is None:
        raise MissingParam("numeric sweeps need the base q")
    fixed = fixed or {}
    args = [(identity, entry, seed, i, mode, q, fixed, tol)
            for i in range(count)]
    if parallelism > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(lambda a: _sweep_instance(*a), args))
    else:
        reports = [_sweep_instance(*a) for a in args]
    failures = [r for r in reports if not r.passed]
    if failures and raise_on_failure:
        exc = SweepFailure(
            f"{len(failures)} of {len(reports)} instances failed "
            f"for {identity.value}", failures=failures)
        exc.reports = reports
        raise exc
    return reports


# --------------------------------------------------------------------------
# build-time validation of the 5phi4 constraint normalization
# --------------------------------------------------------------------------

def validate_carlitz_constraint(max_n: int = 6, per_n: int = 3,
                                seed: int = 20230831) -> bool:
    """Confirm the terminating 5phi4's constraint exponent 1 + m - 2n.

    Runs exact verifications for every n <= max_n before the resolver is
    trusted at larger sizes; also checks consistency with the even/odd
    specializations' exponents m+1 and m+3.
    """
    for n in range(max_n + 1):
        reports = sweep_random(IdentityId.CARLITZ_5PHI4, per_n, seed + n,
                               fixed={"n": n})
        if not all(r.status == "equal" for r in reports):  # pragma: no cover
            return False
    # exponent arithmetic of the two specializations
    for mult, const, expected in ((2, 0, lambda m: m + 1),
                                  (2, 1, lambda m: m + 3)):
        for m in range(6):
            n = mult * m + const
            shift = -m - const
            # bcde = q^(1+floor(n/2)-2n) pulled through x -> x q^shift
            lhs_exp = 1 + (n // 2) - 2 * n - 4 * shift
            if lhs_exp != expected(m):  # pragma: no cover
                return False
    return True
