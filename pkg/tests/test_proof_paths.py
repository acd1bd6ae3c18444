"""Structural proof-path replays.

The bilateral sums are re-derived computationally: reindex the sum to
start at k = 0, evaluate the resulting terminating series, and compare
prefactor * value against the closed form.  Likewise the point-sequence
route: specialize 1/d = q^m, reindex, reverse the finite sum, and land
on the shifted terminating identities.
"""

import random
from fractions import Fraction as F

from qsum.catalog import (IdentityId, ParamSet, derived_twin, lhs_series,
                          resolve_params, rhs_closed_form)

from qsum.series import (MonoParam, Q, SeriesSpec, eval_bilateral,
                         eval_unilateral, reindex_bilateral,
                         reverse_finite_sum)

mp_ = MonoParam
I = IdentityId


def _frac(rng):
    while True:
        f = F(rng.randint(-9, 9) or 2, rng.randint(1, 9))
        if f != 1:
            return f


def _sample_psi5(rng, identity, n):
    while True:
        ps = ParamSet(b=mp_(_frac(rng), rng.randint(0, 2)),
                      c=mp_(_frac(rng), rng.randint(0, 2)),
                      d=mp_(_frac(rng), rng.randint(0, 2)), n=n)
        if (ps.b * ps.c * ps.d).coeff == 1:
            continue
        return resolve_params(identity, ps)


def test_reindex_chain_first_sum():
    rng = random.Random(31)
    for trial in range(10):
        n = rng.randint(0, 4)
        ps = _sample_psi5(rng, I.BAILEY_5PSI5_FIRST, n)
        spec = lhs_series(I.BAILEY_5PSI5_FIRST, ps)
        closed = rhs_closed_form(I.BAILEY_5PSI5_FIRST, ps)
        pre, uni = reindex_bilateral(spec, n)
        assert pre * eval_unilateral(uni) == closed
        assert eval_bilateral(spec) == closed


def test_reindex_chain_second_sum():
    rng = random.Random(32)
    for trial in range(10):
        n = rng.randint(0, 4)
        ps = _sample_psi5(rng, I.BAILEY_5PSI5_SECOND, n)
        spec = lhs_series(I.BAILEY_5PSI5_SECOND, ps)
        closed = rhs_closed_form(I.BAILEY_5PSI5_SECOND, ps)
        pre, uni = reindex_bilateral(spec, n + 1)
        assert pre * eval_unilateral(uni) == closed
        assert eval_bilateral(spec) == closed


def test_rewrites_preserve_values_up_to_n8():
    rng = random.Random(35)
    # reindexing the bilateral sums at the top of the supported range
    for identity, extra in ((I.BAILEY_5PSI5_FIRST, 0),
                            (I.BAILEY_5PSI5_SECOND, 1)):
        for n in (7, 8):
            ps = _sample_psi5(rng, identity, n)
            spec = lhs_series(identity, ps)
            pre, uni = reindex_bilateral(spec, n + extra)
            assert eval_bilateral(spec) == pre * eval_unilateral(uni)
    # reversing the terminating 3phi2 shapes at the same range
    for m in (7, 8):
        b, c = mp_(F(2)), mp_(F(3))
        qm = mp_(F(1), 1 - m)
        start = SeriesSpec(
            "unilateral", Q,
            (mp_(F(1), -2 * m), b.q_shift(-m), c.q_shift(-m)),
            (qm / b, qm / c),
            mp_(F(1), m + 1) / (b * c), termination=2 * m)
        pre, rev = reverse_finite_sum(start)
        assert eval_unilateral(start) == pre * eval_unilateral(rev)


def test_reindexed_series_is_the_even_specialization():
    """Reindexing the first bilateral sum lands exactly on the series of
    the even 5phi4 specialization with m = n and the same b..e."""
    rng = random.Random(33)
    for n in range(0, 4):
        ps = _sample_psi5(rng, I.BAILEY_5PSI5_FIRST, n)
        _, uni = reindex_bilateral(lhs_series(I.BAILEY_5PSI5_FIRST, ps), n)
        even_ps = resolve_params(
            I.CARLITZ_5PHI4_EVEN,
            ParamSet(b=ps.b, c=ps.c, d=ps.d, e=ps.e, m=n))
        even = lhs_series(I.CARLITZ_5PHI4_EVEN, even_ps)
        assert sorted(map(str, uni.num_params)) == \
            sorted(map(str, even.num_params))
        assert sorted(map(str, uni.den_params)) == \
            sorted(map(str, even.den_params))
        assert uni.z == even.z and uni.termination == even.termination


def test_reversal_shifts_argument_once():
    # reversing the even-shape terminating 3phi2 multiplies the argument
    # by q and fixes the parameter set
    for m in range(0, 7):
        b, c = mp_(F(2)), mp_(F(3))
        qm = mp_(F(1), 1 - m)
        start = SeriesSpec(
            "unilateral", Q,
            (mp_(F(1), -2 * m), b.q_shift(-m), c.q_shift(-m)),
            (qm / b, qm / c),
            mp_(F(1), m + 1) / (b * c), termination=2 * m)
        pre, rev = reverse_finite_sum(start)
        assert rev.z == start.z.q_shift(1)
        assert sorted(map(str, rev.num_params)) == \
            sorted(map(str, start.num_params))
        assert sorted(map(str, rev.den_params)) == \
            sorted(map(str, start.den_params))
        assert eval_unilateral(start) == pre * eval_unilateral(rev)


def test_reversal_shifts_argument_twice_odd_shape():
    for m in range(0, 7):
        b, c = mp_(F(2)), mp_(F(3))
        qm = mp_(F(1), 1 - m)
        start = SeriesSpec(
            "unilateral", Q,
            (mp_(F(1), -2 * m - 1), b.q_shift(-m - 1), c.q_shift(-m - 1)),
            (qm / b, qm / c),
            mp_(F(1), m + 2) / (b * c), termination=2 * m + 1)
        pre, rev = reverse_finite_sum(start)
        assert rev.z == start.z.q_shift(2)
        assert eval_unilateral(start) == pre * eval_unilateral(rev)


def test_point_sequence_pipeline_exact():
    """Full replay at 1/d = q^m in Q(q): bilateral -> reindex -> reverse
    -> shifted terminating closed form, all equalities exact."""
    b, c = mp_(F(2)), mp_(F(3))
    q1 = mp_(F(1), 1)
    for m in range(1, 7):
        d = mp_(F(1), -m)
        nums = (b, c, d)
        dens = (q1 / b, q1 / c, q1 / d)
        spec = SeriesSpec("bilateral", Q, nums, dens,
                          q1 / (b * c * d), termination=m)
        whole = eval_bilateral(spec)
        pre1, uni = reindex_bilateral(spec, m)
        assert whole == pre1 * eval_unilateral(uni)
        pre2, rev = reverse_finite_sum(uni)
        assert whole == pre1 * pre2 * eval_unilateral(rev)
        # the reversed series is the shifted Jackson specialization
        shifted_ps = resolve_params(I.JACKSON_3PHI2_SHIFTED,
                                    ParamSet(b=b, c=c, m=m))
        closed = rhs_closed_form(I.JACKSON_3PHI2_SHIFTED, shifted_ps)
        target = lhs_series(I.JACKSON_3PHI2_SHIFTED, shifted_ps)
        assert rev.z == target.z
        assert whole == pre1 * pre2 * closed


def test_point_sequence_pipeline_second_kind():
    b, c = mp_(F(2)), mp_(F(3))
    q2 = mp_(F(1), 2)
    for m in range(1, 7):
        d = mp_(F(1), -m)
        nums = (b, c, d)
        dens = (q2 / b, q2 / c, q2 / d)
        spec = SeriesSpec("bilateral", Q, nums, dens,
                          q2 / (b * c * d), termination=m)
        whole = eval_bilateral(spec)
        pre1, uni = reindex_bilateral(spec, m + 1)
        assert whole == pre1 * eval_unilateral(uni)
        pre2, rev = reverse_finite_sum(uni)
        assert whole == pre1 * pre2 * eval_unilateral(rev)
        shifted_ps = resolve_params(I.CARLITZ_3PHI2_SHIFTED,
                                    ParamSet(b=b, c=c, m=m))
        closed = rhs_closed_form(I.CARLITZ_3PHI2_SHIFTED, shifted_ps)
        assert rev.z == lhs_series(I.CARLITZ_3PHI2_SHIFTED, shifted_ps).z
        assert whole == pre1 * pre2 * closed


def test_substitution_round_trip_values():
    rng = random.Random(34)
    for identity in (I.CARLITZ_5PHI4_EVEN, I.CARLITZ_5PHI4_ODD):
        twin = derived_twin(identity)
        for m in range(0, 4):
            while True:
                ps = ParamSet(b=mp_(_frac(rng), rng.randint(0, 2)),
                              c=mp_(_frac(rng), rng.randint(0, 2)),
                              d=mp_(_frac(rng), rng.randint(0, 2)), m=m)
                if (ps.b * ps.c * ps.d).coeff != 1:
                    break
            hand = resolve_params(identity, ps)
            assert twin.resolve(ps).e == hand.e
            assert twin.rhs(ps) == rhs_closed_form(identity, hand)
            assert eval_unilateral(twin.lhs(ps)) == twin.rhs(ps)
