"""Parity checks between the compiled kernels and their pure-Python twins."""

import random

import pytest

from qsum import _zxpy

try:
    from qsum import _zxc
except ImportError:  # pragma: no cover - build without the extension
    _zxc = None

needs_ext = pytest.mark.skipif(_zxc is None, reason="compiled kernels not built")


def _random_poly(rng, max_len=12, big=False):
    lim = 10 ** 25 if big else 60
    coeffs = [rng.randint(-lim, lim) for _ in range(rng.randint(0, max_len))]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@needs_ext
def test_mul_parity():
    rng = random.Random(1)
    for _ in range(1500):
        a = _random_poly(rng, big=rng.random() < 0.3)
        b = _random_poly(rng, big=rng.random() < 0.3)
        assert _zxc.zx_mul(a, b) == _zxpy.zx_mul(a, b)


@needs_ext
def test_binmul_and_lincomb_parity():
    rng = random.Random(2)
    for _ in range(1500):
        a = _random_poly(rng, big=rng.random() < 0.3)
        b = _random_poly(rng)
        r, p, e = rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(0, 5)
        assert _zxc.zx_binmul(a, r, p, e) == _zxpy.zx_binmul(a, r, p, e)
        big_r = rng.randint(-10 ** 22, 10 ** 22)
        assert _zxc.zx_binmul(a, big_r, p, e) == _zxpy.zx_binmul(a, big_r, p, e)
        s, t, off = rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(0, 4)
        assert _zxc.zx_lincomb(a, b, s, t, off) == \
            _zxpy.zx_lincomb(a, b, s, t, off)


@needs_ext
def test_divexact_and_prem_parity():
    rng = random.Random(3)
    for _ in range(800):
        a = _random_poly(rng)
        b = _random_poly(rng)
        if not b:
            continue
        prod = _zxpy.zx_mul(a, b)
        if prod:
            assert _zxc.zx_divexact(prod, b) == a
        assert _zxc.zx_prem(a, b) == _zxpy.zx_prem(a, b)


@needs_ext
def test_int64_boundary():
    for v in (2 ** 62, 2 ** 63 - 1, 2 ** 63, -2 ** 63, -2 ** 63 - 1, -2 ** 62):
        a, b = [v, 3], [2, v]
        assert _zxc.zx_mul(a, b) == _zxpy.zx_mul(a, b)
        assert _zxc.zx_binmul(a, 7, -3, 2) == _zxpy.zx_binmul(a, 7, -3, 2)
        assert _zxc.zx_lincomb(a, b, 5, -6, 1) == _zxpy.zx_lincomb(a, b, 5, -6, 1)


def test_divexact_rejects_inexact():
    assert _zxpy.zx_divexact([1, 1], [1, 2]) is None
    assert _zxpy.zx_divexact([1, 0, 1], [1, 1]) is None
    if _zxc is not None:
        assert _zxc.zx_divexact([1, 1], [1, 2]) is None


def test_zero_cases():
    impls = [_zxpy] + ([_zxc] if _zxc is not None else [])
    for impl in impls:
        assert impl.zx_mul([], [1, 2]) == []
        assert impl.zx_binmul([], 3, 2, 1) == []
        assert impl.zx_binmul([1, 1], 1, 1, 0) == []
        assert impl.zx_lincomb([1], [1], 1, -1, 0) == []
        with pytest.raises(ZeroDivisionError):
            impl.zx_divexact([1], [])


def test_kernel_selector_env(monkeypatch):
    import importlib

    import qsum.kernels as kernels
    monkeypatch.setenv("QSUM_PURE_KERNELS", "1")
    mod = importlib.reload(kernels)
    assert mod.BACKEND == "python"
    monkeypatch.delenv("QSUM_PURE_KERNELS")
    mod = importlib.reload(kernels)
    assert mod.zx_mul([1, 1], [1, 1]) == [1, 2, 1]
