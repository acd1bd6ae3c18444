"""High-precision backend: contexts, arithmetic guards, comparison."""

from fractions import Fraction as F

import pytest

from qsum.errors import PrecisionMismatch
from qsum.numeric import PrecisionContext, HighPrecComplex, hp_close, rel_diff


def test_context_invariants():
    ctx = PrecisionContext()
    assert ctx.digits == 60 and ctx.guard == 10
    with pytest.raises(ValueError):
        PrecisionContext(digits=14)
    with pytest.raises(ValueError):
        PrecisionContext(guard=4)


def test_arithmetic_examples():
    ctx = PrecisionContext()
    assert ctx.one() + ctx.zero() == ctx.one()
    i = ctx.complex(0, 1)
    assert (i * i).val == -1
    third = (ctx.one() / ctx.complex(3)).to_str()
    mantissa = third.split("e")[0].replace(".", "")
    assert len(mantissa) == 60 and set(mantissa) == {"3"}


def test_division_by_zero():
    ctx = PrecisionContext()
    with pytest.raises(ZeroDivisionError):
        ctx.one() / ctx.zero()
    # tiny-but-exact divisors are legitimate (mpf exponents are unbounded)
    big = ctx.one() / ctx.from_fraction(F(1, 10 ** 90))
    assert hp_close(big, ctx.from_fraction(F(10) ** 90), 1e-60)


def test_precision_mismatch():
    a = PrecisionContext(digits=60)
    b = PrecisionContext(digits=30)
    with pytest.raises(PrecisionMismatch):
        a.one() + b.one()
    # equal-spec contexts interoperate
    c = PrecisionContext(digits=60)
    assert (a.one() + c.one()).val == 2


def test_non_finite_rejected():
    ctx = PrecisionContext()
    with pytest.raises(ArithmeticError):
        HighPrecComplex(ctx.mp.inf, ctx)


def test_hp_close_examples():
    ctx = PrecisionContext()
    one = ctx.one()
    assert hp_close(one, one, 1e-40)
    assert not hp_close(one, one + ctx.from_fraction(F(1, 10 ** 30)), 1e-40)
    # absolute floor at max(1, .)
    assert hp_close(ctx.zero(), ctx.from_fraction(F(1, 10 ** 50)), 1e-40)
    with pytest.raises(ValueError):
        hp_close(one, one, 0)


def test_hp_close_symmetric_reflexive():
    ctx = PrecisionContext()
    x = ctx.from_str("0.123456789")
    y = ctx.from_str("0.123456789000000001")
    assert hp_close(x, x, 1e-40)
    assert hp_close(x, y, 1e-8) == hp_close(y, x, 1e-8)


def test_serialization_round_trip():
    ctx = PrecisionContext()
    cases = ["0.33333333333333331", "123.456e7", "-0.5+0.25*i", "1/7",
             "2", "-3/2-0.125*i"]
    bound = ctx.mp.mpf(10) ** (-(ctx.digits + ctx.guard - 1))
    for text in cases:
        x = ctx.from_str(text)
        y = ctx.from_str(x.to_str(full=True))
        assert rel_diff(x, y) <= bound


def test_serialization_format():
    ctx = PrecisionContext()
    s = ctx.from_fraction(F(1, 3)).to_str()
    assert s.startswith("3.33") and "e-1" in s
    w = ctx.from_str("1.5-2.25*i")
    assert w.to_str().endswith("*i") and "-" in w.to_str()


def test_pow_and_sqrt():
    ctx = PrecisionContext()
    x = ctx.from_fraction(F(2))
    assert hp_close(x ** -2, ctx.from_fraction(F(1, 4)), 1e-60)
    assert hp_close(x.sqrt() * x.sqrt(), x, 1e-60)
