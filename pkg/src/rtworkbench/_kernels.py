"""Compiled bitset kernels.

Rows are packed little-endian: vertex ``j`` lives in word ``j >> 6``, bit ``j & 63``.
All searches walk vertices in increasing order so the first hit is the
lexicographically least witness.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def _ctz(x):
    # x must be nonzero
    return _popcount((x & (~x + _ONE)) - _ONE)


@njit(cache=True, inline="always")
def _above(k):
    """Mask of bit positions strictly greater than ``k`` (0 <= k < 64)."""
    if k >= 63:
        return _ZERO
    return ~((_ONE << np.uint64(k + 1)) - _ONE)


@njit(cache=True)
def first_k4(words):
    n, nw = words.shape
    common = np.zeros(nw, np.uint64)
    for a in range(n):
        ra = words[a]
        wa = a >> 6
        for wb in range(wa, nw):
            x = ra[wb]
            if wb == wa:
                x &= _above(a & 63)
            while x:
                b = wb * 64 + _ctz(x)
                x &= x - _ONE
                rb = words[b]
                sb = b >> 6
                # only words sb..last of the common neighborhood can be nonzero
                last = -1
                for w in range(sb, nw):
                    c = ra[w] & rb[w]
                    if w == sb:
                        c &= _above(b & 63)
                    common[w] = c
                    if c:
                        last = w
                for wc in range(sb, last + 1):
                    y = common[wc]
                    while y:
                        c = wc * 64 + _ctz(y)
                        y &= y - _ONE
                        rc = words[c]
                        sc = c >> 6
                        for w in range(sc, last + 1):
                            d = common[w] & rc[w]
                            if w == sc:
                                d &= _above(c & 63)
                            if d:
                                return np.array([a, b, c, w * 64 + _ctz(d)], np.int64)
    return np.full(4, -1, np.int64)


@njit(cache=True)
def first_triangle_in(words, side):
    n, nw = words.shape
    for a in range(n):
        wa = a >> 6
        if not (side[wa] >> np.uint64(a & 63)) & _ONE:
            continue
        ra = words[a]
        for wb in range(wa, nw):
            x = ra[wb] & side[wb]
            if wb == wa:
                x &= _above(a & 63)
            while x:
                b = wb * 64 + _ctz(x)
                x &= x - _ONE
                rb = words[b]
                sb = b >> 6
                for w in range(sb, nw):
                    c = ra[w] & rb[w] & side[w]
                    if w == sb:
                        c &= _above(b & 63)
                    if c:
                        return np.array([a, b, w * 64 + _ctz(c)], np.int64)
    return np.full(3, -1, np.int64)


@njit(cache=True)
def edge_codegrees(words, us, vs):
    out = np.empty(us.shape[0], np.int64)
    nw = words.shape[1]
    for i in range(us.shape[0]):
        ru = words[us[i]]
        rv = words[vs[i]]
        s = 0
        for w in range(nw):
            s += _popcount(ru[w] & rv[w])
        out[i] = s
    return out
