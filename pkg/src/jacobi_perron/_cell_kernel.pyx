# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled cell kernels.  Same contract as ``_cell_kernel_py``."""
from math import gcd

# r-triples below this bound use machine integers in the census step
cdef long long _SMALL = 1LL << 40


def measure_nd(r2, r1, r0, tn, td, triangle):
    if triangle:
        num = tn * (r2 * tn + r1 * td + r0 * (2 * td - tn))
        den = 2 * r0 * (r1 + r0) * (r2 * tn + (r1 + r0) * td) * ((r2 + r1) * tn + r0 * td)
    else:
        num = tn * (r2 * tn + (r1 + 2 * r0) * td)
        den = 2 * r0 * (r1 + r0) * (r2 * tn + r0 * td) * (r2 * tn + (r1 + r0) * td)
    return num, den


def weighted_sum(items, tn, td):
    cdef object sn = 0, sd = 1, n, d, g
    for key, cnt in items:
        r2, r1, r0, tri = key
        n, d = measure_nd(r2, r1, r0, tn, td, tri)
        n = n * cnt
        g = gcd(n, d)
        n = n // g
        d = d // g
        g = gcd(sd, d)
        sn = sn * (d // g) + n * (sd // g)
        sd = sd // g * d
        g = gcd(sn, sd)
        if g > 1:
            sn = sn // g
            sd = sd // g
    return sn, sd


cdef dict _next_small(dict level, int m):
    cdef dict out = {}
    cdef long long r2, r1, r0, nr
    cdef int a, b, lo
    cdef bint tri
    for key, cnt in level.items():
        r2 = key[0]
        r1 = key[1]
        r0 = key[2]
        tri = key[3]
        lo = 1 if tri else 0
        for b in range(1, m):
            for a in range(lo, b + 1):
                nr = b * r0 + a * r1 + r2
                k = (r1, r0, nr, a == b)
                out[k] = out.get(k, 0) + cnt
    return out


def next_level(dict level, int m):
    cdef object big = 0
    for key in level:
        if key[2] > big:
            big = key[2]
    if big * m * 3 < _SMALL:
        return _next_small(level, m)
    out = {}
    for (r2, r1, r0, tri), cnt in level.items():
        for b in range(1, m):
            for a in range(1 if tri else 0, b + 1):
                k = (r1, r0, b * r0 + a * r1 + r2, a == b)
                out[k] = out.get(k, 0) + cnt
    return out


def first_level(int m):
    cdef dict out = {}
    cdef int a, b
    for b in range(1, m):
        for a in range(0, b + 1):
            k = (0, 0, 1, a == b)
            out[k] = out.get(k, 0) + 1
    return out


def shoelace2(pts):
    cdef object sn = 0, sd = 1, n, d, g
    cdef Py_ssize_t i, k = len(pts)
    for i in range(k):
        x1, y1, w1 = pts[i]
        x2, y2, w2 = pts[(i + 1) % k]
        n = x1 * y2 - x2 * y1
        d = w1 * w2
        g = gcd(sd, d)
        sn = sn * (d // g) + n * (sd // g)
        sd = sd // g * d
    return sn, sd
