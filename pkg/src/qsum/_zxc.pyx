# cython: language_level=3, boundscheck=False
"""Compiled integer polynomial kernels.

Same contracts as :mod:`qsum._zxpy`.  Inputs whose coefficients fit in
int64 (with conservative overflow bounds checked up front) run on native
arrays; anything larger falls back to PyObject arithmetic, which still
skips interpreter dispatch overhead.
"""

from cpython cimport array

import array

BACKEND = "c"

cdef array.array _LL = array.array('q', [])

# products are kept below 2**62 so length-bounded accumulations cannot
# overflow a signed 64-bit intermediate
_PRODUCT_LIMIT = 1 << 62


cdef long long _maxabs(long long[::1] v):
    cdef long long m = 0, x
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        x = v[i]
        if x < 0:
            x = -x
            if x < 0:  # LLONG_MIN: unnegatable, force the bound check to fail
                return 0x7FFFFFFFFFFFFFFF
        if x > m:
            m = x
    return m


cdef list _emit(long long[::1] v):
    cdef Py_ssize_t top = v.shape[0]
    while top > 0 and v[top - 1] == 0:
        top -= 1
    cdef list out = [0] * top
    cdef Py_ssize_t i
    for i in range(top):
        out[i] = v[i]
    return out


def zx_mul(list a, list b):
    """Convolution product a*b."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return []
    if na < nb:
        a, b = b, a
        na, nb = nb, na
    cdef array.array aa = None, bb = None, rr = None
    cdef long long[::1] av, bv, rv
    cdef Py_ssize_t i, j
    cdef long long bj
    try:
        aa = array.array('q', a)
        bb = array.array('q', b)
    except OverflowError:
        aa = None
    if aa is not None:
        av = aa
        bv = bb
        if int(_maxabs(av)) * int(_maxabs(bv)) * nb < _PRODUCT_LIMIT:
            rr = array.clone(_LL, na + nb - 1, zero=True)
            rv = rr
            for j in range(nb):
                bj = bv[j]
                if bj:
                    for i in range(na):
                        rv[i + j] += av[i] * bj
            return _emit(rv)
    # object fallback
    cdef list res = [0] * (na + nb - 1)
    cdef object ai, obj
    for j in range(nb):
        obj = b[j]
        if obj:
            for i in range(na):
                ai = a[i]
                if ai:
                    res[i + j] = res[i + j] + ai * obj
    return res


def zx_binmul(list a, r, p, Py_ssize_t e):
    """a * (r - p*x**e) for e >= 0; the workhorse of Pochhammer expansion."""
    cdef Py_ssize_t na = len(a)
    if na == 0:
        return []
    if e == 0:
        s = r - p
        if s == 0:
            return []
        return [s * c for c in a]
    cdef array.array aa = None, out = None
    cdef long long[::1] av, rv
    cdef long long rr = 0, pp = 0
    cdef Py_ssize_t i
    cdef bint fast = True
    try:
        rr = r
        pp = p
        aa = array.array('q', a)
    except OverflowError:
        fast = False
    if fast:
        av = aa
        if int(_maxabs(av)) * (abs(int(rr)) + abs(int(pp))) < _PRODUCT_LIMIT:
            out = array.clone(_LL, na + e, zero=True)
            rv = out
            if rr:
                for i in range(na):
                    rv[i] = rr * av[i]
            if pp:
                for i in range(na):
                    rv[i + e] -= pp * av[i]
            return _emit(rv)
    cdef list res = [0] * (na + e)
    cdef object ai
    if r:
        for i in range(na):
            res[i] = r * a[i]
    if p:
        for i in range(na):
            ai = a[i]
            if ai:
                res[i + e] = res[i + e] - p * ai
    while res and not res[-1]:
        res.pop()
    return res


def zx_lincomb(list a, list b, s, t, Py_ssize_t off_b):
    """s*a + t*(b << off_b) with off_b >= 0."""
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t n = na if na > nb + off_b else nb + off_b
    if n == 0:
        return []
    cdef array.array aa = None, bb = None, out = None
    cdef long long[::1] av, bv, rv
    cdef long long ss = 0, tt = 0
    cdef Py_ssize_t i
    cdef bint fast = True
    try:
        ss = s
        tt = t
        aa = array.array('q', a)
        bb = array.array('q', b)
    except OverflowError:
        fast = False
    if fast:
        av = aa
        bv = bb
        if (int(_maxabs(av)) * abs(int(ss)) + int(_maxabs(bv)) * abs(int(tt))
                < _PRODUCT_LIMIT):
            out = array.clone(_LL, n, zero=True)
            rv = out
            if ss:
                for i in range(na):
                    rv[i] = ss * av[i]
            if tt:
                for i in range(nb):
                    rv[i + off_b] += tt * bv[i]
            return _emit(rv)
    cdef list res = [0] * n
    cdef object ai, bi
    if s:
        for i in range(na):
            ai = a[i]
            if ai:
                res[i] = s * ai
    if t:
        for i in range(nb):
            bi = b[i]
            if bi:
                res[i + off_b] = res[i + off_b] + t * bi
    while res and not res[-1]:
        res.pop()
    return res


def zx_divexact(list a, list b):
    """Quotient a // b when exact in Z[x], else None.

    Object arithmetic throughout: quotient coefficients routinely outgrow
    int64 even for small inputs, so a fast path buys little here.
    """
    cdef Py_ssize_t nb = len(b)
    if nb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) == 0:
        return []
    cdef Py_ssize_t da = len(a) - 1, db = nb - 1
    if da < db:
        return None
    lc = b[-1]
    cdef list rem = list(a)
    cdef list quo = [0] * (da - db + 1)
    cdef Py_ssize_t k, j
    cdef object c, t, bj
    for k in range(da - db, -1, -1):
        c = rem[k + db]
        if c:
            t, leftover = divmod(c, lc)
            if leftover:
                return None
            quo[k] = t
            for j in range(db + 1):
                bj = b[j]
                if bj:
                    rem[k + j] = rem[k + j] - t * bj
    for c in rem:
        if c:
            return None
    return quo


def zx_prem(list a, list b):
    """Pseudo-remainder of a by b: rem(lc(b)**(da-db+1) * a, b)."""
    cdef Py_ssize_t nb = len(b)
    if nb == 0:
        raise ZeroDivisionError("polynomial pseudo-remainder by zero")
    cdef Py_ssize_t da = len(a) - 1, db = nb - 1
    if da < db:
        return list(a)
    lc = b[-1]
    cdef list r = list(a)
    cdef list new
    cdef Py_ssize_t dr, off, j
    cdef long long e = da - db + 1
    cdef object s, bj
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        s = r[-1]
        new = [lc * c for c in r[:dr]]
        off = dr - db
        for j in range(db):
            bj = b[j]
            if bj:
                new[off + j] = new[off + j] - s * bj
        while new and not new[-1]:
            new.pop()
        r = new
        e -= 1
    if e > 0 and r:
        f = lc ** e
        r = [c * f for c in r]
    return r
