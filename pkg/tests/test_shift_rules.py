"""The four Pochhammer shift rules, exact and against the numeric twin."""

import random
from fractions import Fraction as F

import pytest

from qsum.errors import PoleError
from qsum.exact import QPoly, QRatFun
from qsum.numeric import PrecisionContext, hp_close
from qsum.series import (MonoParam, Q, negate_index, ratio_shift, shift_base,
                         shift_split)

mp_ = MonoParam


def test_shift_split_examples():
    l, r = shift_split(mp_(F(7), 2), Q, 0, 0)
    assert l == r == QRatFun.one()
    l, r = shift_split(mp_(F(2), 1), Q, 1, 1)
    assert l == r == QRatFun(QPoly([1, -2, -2, 4]))
    l, r = shift_split(mp_(F(3), 2), Q, 2, -1)
    assert l == r


def test_negate_index_examples():
    for a in (mp_(F(2), 1), mp_(F(-3, 4), -2), mp_(F(5), 0)):
        for n in range(0, 6):
            l, r = negate_index(a, Q, n)
            assert l == r


def test_shift_base_examples():
    a = mp_(F(7, 3), 1)
    l, r = shift_base(a, Q, 0, 3)
    assert l == r == poch_val(a, 3)
    l, r = shift_base(mp_(F(2), 1), Q, 1, 2)
    assert l == r
    # (a q^-n;q)_k is finite here even though both closed-form sides carry
    # vanishing factors: direct substitution gives 0 = 0, not a pole
    l, r = shift_base(mp_(F(1), 1), Q, 1, 1)
    assert l == r == QRatFun.zero()


def poch_val(a, n):
    from qsum.series import poch
    return poch(a, Q, n)


def test_shift_base_pole():
    # a = q^-1, n = 1, k = 2 makes (q^(1-k)/a;q)_n = (1;q)_1 = 0 in the
    # denominator while the left side stays finite: the closed form is
    # indeterminate and must be reported as a pole
    with pytest.raises(PoleError):
        shift_base(mp_(F(1), -1), Q, 1, 2)


def test_ratio_shift_examples():
    a, b = mp_(F(2), 1), mp_(F(3), 1)
    l, r = ratio_shift(a, b, Q, 3, 0)
    assert l == r == poch_val(a, 3) / poch_val(b, 3)
    l, r = ratio_shift(a, b, Q, 3, 1)
    assert l == r
    l, r = ratio_shift(a, b, Q, 4, 4)
    assert l == r == QRatFun.one()


def _random_mono(rng):
    coeff = F(rng.randint(-10, 10) or 1, rng.randint(1, 10))
    return mp_(coeff, rng.randint(-5, 5))


def test_randomized_rules_exact():
    rng = random.Random(1105)
    done = 0
    while done < 250:
        a, b = _random_mono(rng), _random_mono(rng)
        n, k = rng.randint(-6, 6), rng.randint(-6, 6)
        try:
            pairs = [shift_split(a, Q, n, k),
                     shift_base(a, Q, n, k),
                     ratio_shift(a, b, Q, n, k)]
            if n >= 0:
                pairs.append(negate_index(a, Q, n))
        except PoleError:
            continue
        for lhs, rhs in pairs:
            assert lhs == rhs, (a, b, n, k)
        done += 1


def test_rules_numeric_backend():
    ctx = PrecisionContext()
    q = ctx.from_str("0.3+0.1i")
    a = ctx.from_fraction(F(5, 7))
    b = ctx.from_fraction(F(9, 4))
    tol = 1e-55
    for n in range(-3, 4):
        for k in range(-3, 4):
            try:
                for lhs, rhs in (shift_split(a, q, n, k),
                                 shift_base(a, q, n, k),
                                 ratio_shift(a, b, q, n, k)):
                    assert hp_close(lhs, rhs, tol)
                if n >= 0:
                    lhs, rhs = negate_index(a, q, n)
                    assert hp_close(lhs, rhs, tol)
            except PoleError:
                continue
