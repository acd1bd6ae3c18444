"""Kernel selection: compiled extension when present, pure Python otherwise.

Set ``QSUM_PURE_KERNELS=1`` to force the pure-Python implementation (used
by the benchmark and the kernel parity tests).
"""

import os

from qsum import _zxpy as pure

if os.environ.get("QSUM_PURE_KERNELS") == "1":
    _impl = pure
else:
    try:
        from qsum import _zxc as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND

zx_mul = _impl.zx_mul
zx_binmul = _impl.zx_binmul
zx_lincomb = _impl.zx_lincomb
zx_divexact = _impl.zx_divexact
zx_prem = _impl.zx_prem
