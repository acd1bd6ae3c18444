"""Acceptance suite.

One test per criterion, each printing a PASS line with its measured
runtime; every tolerance and budget is pinned here.  The exact criteria
use an independent windowed brute-force oracle built from plain
polynomial products (no recurrences, no factored reduction), compared by
cross-multiplication so the oracle never needs a gcd.
"""

import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction as F



from qsum.catalog import (IdentityId, ParamSet, derived_twin, instantiate,
                          ismail_sequence_check, lhs_series, limit_check,
                          resolve_params, rhs_closed_form, sweep_random,
                          validate_carlitz_constraint, verify)
from qsum.cli import main as cli_main
from qsum.errors import PoleError
from qsum.exact import QPoly
from qsum.numeric import PrecisionContext
from qsum.series import (MonoParam, Q, eval_bilateral, eval_unilateral,
                         negate_index, ratio_shift, reindex_bilateral,
                         reverse_finite_sum, shift_base, shift_split)

mp_ = MonoParam
I = IdentityId


def _announce(criterion, detail, t0, budget):
    elapsed = time.perf_counter() - t0
    print(f"ACCEPTANCE {criterion}: PASS ({detail}; "
          f"{elapsed:.1f}s < {budget}s)")
    assert elapsed < budget, f"criterion {criterion} exceeded {budget}s"


def _random_mono(rng, max_exp=3):
    while True:
        coeff = F(rng.randint(-10, 10) or 2, rng.randint(1, 10))
        if coeff != 1:
            return mp_(coeff, rng.randint(0, max_exp))


def _sample_bcd(rng, identity, n):
    while True:
        ps = ParamSet(b=_random_mono(rng), c=_random_mono(rng),
                      d=_random_mono(rng), n=n)
        if (ps.b * ps.c * ps.d).coeff == 1:
            continue
        return resolve_params(identity, ps)


# -- independent windowed brute-force oracle ---------------------------------

def _poch_poly(coeff, start_exp, count):
    out = QPoly.one()
    for t in range(count):
        out = out * QPoly.one_minus(coeff, start_exp + t)
    return out


def _window_oracle_confirms(spec, value, lo, hi):
    """Sum the bilateral terms k = lo..hi directly and compare by
    cross-multiplication: value.num * D == value.den * N."""
    D = QPoly.one()
    for y in spec.den_params:
        D = D * _poch_poly(y.coeff, y.exp, hi)
    low_part = QPoly.one()
    for x in spec.num_params:
        low_part = low_part * _poch_poly(x.coeff, x.exp + lo, -lo)
    high_part = QPoly.one()
    for y in spec.den_params:
        high_part = high_part * _poch_poly(y.coeff, y.exp, hi)
    D = D * low_part
    N = QPoly.zero()
    for k in range(lo, hi + 1):
        P = QPoly.one()
        if k >= 0:
            for x in spec.num_params:
                P = P * _poch_poly(x.coeff, x.exp, k)
            for y in spec.den_params:
                P = P * _poch_poly(y.coeff, y.exp + k, hi - k)
            P = P * low_part
        else:
            for y in spec.den_params:
                P = P * _poch_poly(y.coeff, y.exp + k, -k)
            for x in spec.num_params:
                P = P * _poch_poly(x.coeff, x.exp + lo, k - lo)
            P = P * high_part
        zk = spec.z ** k
        N = N + P.scaled(zk.coeff).shifted(zk.exp)
    return value.num * D == value.den * N


# -- criterion 1: the four Pochhammer shift rules ------------------------------

def test_criterion_1_shift_rule_suite():
    t0 = time.perf_counter()
    rng = random.Random(101)
    counts = {"split": 0, "negate": 0, "base": 0, "ratio": 0}
    while min(counts.values()) < 1000:
        coeff = F(rng.randint(-10, 10) or 1, rng.randint(1, 10))
        a = mp_(coeff, rng.randint(-5, 5))
        b = mp_(F(rng.randint(-10, 10) or 3, rng.randint(1, 10)),
                rng.randint(-5, 5))
        n, k = rng.randint(-6, 6), rng.randint(-6, 6)
        try:
            if counts["split"] < 1000:
                lhs, rhs = shift_split(a, Q, n, k)
                assert lhs == rhs
                counts["split"] += 1
            if counts["base"] < 1000:
                lhs, rhs = shift_base(a, Q, n, k)
                assert lhs == rhs
                counts["base"] += 1
            if counts["ratio"] < 1000:
                lhs, rhs = ratio_shift(a, b, Q, n, k)
                assert lhs == rhs
                counts["ratio"] += 1
            if counts["negate"] < 1000 and n >= 0:
                lhs, rhs = negate_index(a, Q, n)
                assert lhs == rhs
                counts["negate"] += 1
        except PoleError:
            continue
    _announce(1, "4 x 1000 randomized shift-rule instances exact", t0, 30)


# -- criteria 2/3: the two terminating bilateral sums ---------------------------

def _bilateral_criterion(identity, window_of, label, criterion):
    t0 = time.perf_counter()
    rng = random.Random(200 + criterion)
    checked = 0
    for n in range(0, 9):
        for _ in range(50):
            ps = _sample_bcd(rng, identity, n)
            report = verify(identity, ps)
            assert report.status == "equal", (n, report.detail)
            lo, hi = window_of(n)
            spec = lhs_series(identity, ps)
            assert _window_oracle_confirms(spec, report.lhs_value, lo, hi), \
                (n, ps.to_dict())
            checked += 1
    _announce(criterion, f"{label}: {checked} instances equal + "
                         f"window oracle", t0, 60)


def test_criterion_2_first_bilateral_sum():
    _bilateral_criterion(I.BAILEY_5PSI5_FIRST, lambda n: (-n, n),
                         "bcde=q^(n+1)", 2)


def test_criterion_3_second_bilateral_sum():
    _bilateral_criterion(I.BAILEY_5PSI5_SECOND, lambda n: (-n - 1, n),
                         "bcde=q^(n+3)", 3)


# -- criterion 4: the terminating 5phi4 -----------------------------------------

def test_criterion_4_terminating_5phi4():
    t0 = time.perf_counter()
    assert validate_carlitz_constraint(max_n=6, per_n=3)
    rng = random.Random(204)
    for n in range(0, 10):
        for _ in range(20):
            ps = _sample_bcd(rng, I.CARLITZ_5PHI4, n)
            report = verify(I.CARLITZ_5PHI4, ps)
            assert report.status == "equal", (n, report.detail)
    _announce(4, "10 x 20 instances over both parities of n "
                 "(constraint validated at build time)", t0, 60)


# -- criterion 5: the two terminating 3phi2 sums ---------------------------------

def test_criterion_5_terminating_3phi2():
    t0 = time.perf_counter()
    rng = random.Random(205)
    for m in range(0, 9):
        for _ in range(10):
            while True:
                ps = ParamSet(a=_random_mono(rng), b=_random_mono(rng), m=m)
                if (ps.a * ps.b).coeff != 1:
                    break
            report = verify(I.JACKSON_3PHI2, ps)
            assert report.status == "equal", (m, report.detail)
    for n in range(0, 9):
        for _ in range(10):
            while True:
                ps = ParamSet(a=_random_mono(rng), b=_random_mono(rng),
                              z=_random_mono(rng), n=n)
                if (ps.a * ps.b).coeff != 1:
                    break
            report = verify(I.CARLITZ_3PHI2, ps)
            assert report.status == "equal", (n, report.detail)
    _announce(5, "q-Dixon m<=8 and free-argument sum n<=8 exact "
                 "(j-sum right side)", t0, 60)


# -- criterion 6: reindexing proof path -------------------------------------------

def test_criterion_6_reindex_proof_path():
    t0 = time.perf_counter()
    rng = random.Random(206)
    for identity, extra in ((I.BAILEY_5PSI5_FIRST, 0),
                            (I.BAILEY_5PSI5_SECOND, 1)):
        for _ in range(10):
            n = rng.randint(0, 5)
            ps = _sample_bcd(rng, identity, n)
            spec = lhs_series(identity, ps)
            closed = rhs_closed_form(identity, ps)
            pre, uni = reindex_bilateral(spec, n + extra)
            assert pre * eval_unilateral(uni) == closed
    for identity in (I.CARLITZ_5PHI4_EVEN, I.CARLITZ_5PHI4_ODD):
        twin = derived_twin(identity)
        for m in range(0, 4):
            while True:
                ps = ParamSet(b=_random_mono(rng), c=_random_mono(rng),
                              d=_random_mono(rng), m=m)
                if (ps.b * ps.c * ps.d).coeff != 1:
                    break
            hand = instantiate(identity, ps).serialize()
            sub = twin.instantiate(ps).serialize()
            assert json.dumps(hand) == json.dumps(sub)
    _announce(6, "20 reindex replays exact; substituted even/odd "
                 "specializations byte-identical to hand-coded", t0, 60)


# -- criterion 7: limiting cases ----------------------------------------------------

def test_criterion_7_limiting_cases():
    t0 = time.perf_counter()
    ctx = PrecisionContext()
    f = ctx.from_fraction
    params = ParamSet(q=f(F(1, 2)), b=f(2), c=f(3), d=f(5))
    for identity in (I.BAILEY_5PSI5_FIRST, I.BAILEY_5PSI5_SECOND):
        rows = limit_check(identity, params, (5, 10, 20, 40))
        diffs = [r.diff for r in rows]
        assert all(diffs[i] > diffs[i + 1] for i in range(3)), diffs
        assert diffs[-1] < ctx.mp.mpf("1e-10"), diffs[-1]
    _announce(7, "n=40 within 1e-10 of the infinite product, diffs "
                 "strictly decreasing along 5,10,20,40", t0, 10)


# -- criterion 8: point-sequence agreement and sum reversal ---------------------------

def test_criterion_8_point_sequence():
    t0 = time.perf_counter()
    ctx = PrecisionContext(digits=60)
    q = ctx.from_fraction(F(1, 3))
    for identity in (I.BAILEY_3PSI3_FIRST, I.BAILEY_3PSI3_SECOND):
        rows = ismail_sequence_check(identity, 2, 3, range(1, 16), q,
                                     tol="1e-40")
        assert all(r.status == "within_tolerance" for r in rows), \
            [(r.m, r.status) for r in rows]
        assert all(r.radius_ok for r in rows)
    # exact replay of the finite-sum reversal, both shapes, m <= 6
    b, c = mp_(F(2)), mp_(F(3))
    for shift, exps in ((1, (1, 1)), (2, (2, 2))):
        q_s = mp_(F(1), shift)
        for m in range(1, 7):
            d = mp_(F(1), -m)
            spec_lhs = lhs_series(
                I.BAILEY_3PSI3_FIRST if shift == 1 else I.BAILEY_3PSI3_SECOND,
                ParamSet(b=b, c=c, d=d))
            whole = eval_bilateral(spec_lhs)
            pre1, uni = reindex_bilateral(spec_lhs, m + shift - 1)
            pre2, rev = reverse_finite_sum(uni)
            assert rev.z == uni.z.q_shift(shift)
            assert whole == pre1 * eval_unilateral(uni)
            assert whole == pre1 * pre2 * eval_unilateral(rev)
    _announce(8, "both sums agree at 1/d=q^m for m=1..15 to 1e-40 inside "
                 "the disk; reversal replays exact for m<=6", t0, 30)


# -- criterion 9: non-terminating sums ------------------------------------------------

def test_criterion_9_nonterminating():
    t0 = time.perf_counter()
    ctx = PrecisionContext(digits=60)
    q = ctx.from_fraction(F(2, 5))
    for identity in (I.RAMANUJAN_1PSI1, I.BAILEY_6PSI6):
        reports = sweep_random(identity, 10, seed=209, mode="numeric", q=q,
                               tol="1e-30")
        assert all(r.status == "within_tolerance" for r in reports)
        assert all(r.diff < ctx.mp.mpf("1e-30") for r in reports)
    _announce(9, "1psi1 and 6psi6: 10 random sets each within 1e-30 at "
                 "60 digits, margin 0.1", t0, 60)


# -- criterion 10: CLI contract --------------------------------------------------------

def _run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(argv)
    return code, buf.getvalue()


def test_criterion_10_cli_contract():
    t0 = time.perf_counter()
    code, _ = _run_cli(["selftest", "--cases", "40"])
    assert code == 0
    commands = [
        ["verify", "--id", "thm1.1", "--n", "2", "--b", "2*q", "--c", "3*q",
         "--d", "5*q", "--mode", "exact", "--output", "json"],
        ["sweep", "--id", "thm1.2", "--count", "4", "--seed", "17",
         "--output", "json"],
        ["limit", "--pair", "a", "--b", "2", "--c", "3", "--d", "5",
         "--q", "0.5", "--grid", "5,10", "--output", "json",
         "--tolerance", "1e-3"],
        ["ismail", "--id", "thm1.3", "--b", "2", "--c", "3", "--q", "1/3",
         "--m-max", "4", "--output", "json"],
        ["selftest", "--cases", "10", "--seed", "5", "--output", "json"],
    ]
    for argv in commands:
        code1, out1 = _run_cli(argv)
        code2, out2 = _run_cli(argv)
        assert code1 == code2 == 0, argv
        assert out1.encode() == out2.encode(), argv
    _announce(10, "selftest exit 0; per-command JSON byte-stable across "
                  "two runs", t0, 120)
