"""Integer polynomial kernels, pure-Python reference implementation.

These are the hot inner loops of the exact backend.  A polynomial is a
dense list of Python ints, lowest power first, last element nonzero;
the empty list is the zero polynomial.  The compiled twin in
``qsum._zxc`` implements exactly the same contracts and is preferred at
import time when available (see :mod:`qsum.kernels`).
"""

BACKEND = "python"


def zx_mul(a, b):
    """Convolution product a*b."""
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    res = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            for i, ai in enumerate(a):
                if ai:
                    res[i + j] += ai * bj
    return res


def zx_binmul(a, r, p, e):
    """a * (r - p*x**e) for e >= 0; the workhorse of Pochhammer expansion."""
    if not a:
        return []
    if e == 0:
        s = r - p
        if s == 0:
            return []
        return [s * c for c in a]
    n = len(a)
    res = [0] * (n + e)
    if r:
        for i, ai in enumerate(a):
            res[i] = r * ai
    if p:
        for i, ai in enumerate(a):
            if ai:
                res[i + e] -= p * ai
    while res and not res[-1]:
        res.pop()
    return res


def zx_lincomb(a, b, s, t, off_b):
    """s*a + t*(b << off_b) with off_b >= 0."""
    n = max(len(a), len(b) + off_b)
    res = [0] * n
    if s:
        for i, ai in enumerate(a):
            if ai:
                res[i] = s * ai
    if t:
        for i, bi in enumerate(b):
            if bi:
                res[i + off_b] += t * bi
    while res and not res[-1]:
        res.pop()
    return res


def zx_divexact(a, b):
    """Quotient a // b when the division is exact in Z[x], else None."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None
    lc = b[-1]
    rem = list(a)
    quo = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = rem[k + db]
        if c:
            t, leftover = divmod(c, lc)
            if leftover:
                return None
            quo[k] = t
            for j in range(db + 1):
                if b[j]:
                    rem[k + j] -= t * b[j]
    for c in rem:
        if c:
            return None
    return quo


def zx_prem(a, b):
    """Pseudo-remainder of a by b: rem(lc(b)**(da-db+1) * a, b).

    Requires b nonzero.  Returns a when deg a < deg b.
    """
    if not b:
        raise ZeroDivisionError("polynomial pseudo-remainder by zero")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    lc = b[-1]
    r = list(a)
    e = da - db + 1
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        s = r[-1]
        new = [lc * c for c in r[:dr]]
        off = dr - db
        for j in range(db):
            if b[j]:
                new[off + j] -= s * b[j]
        while new and not new[-1]:
            new.pop()
        r = new
        e -= 1
    if e > 0 and r:
        f = lc ** e
        r = [c * f for c in r]
    return r
