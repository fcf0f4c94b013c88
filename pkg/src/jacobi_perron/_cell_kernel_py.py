"""Pure-Python cell kernels; the reference the compiled module must match."""
from math import gcd


def measure_nd(r2, r1, r0, tn, td, triangle):
    """Numerator and denominator of the parameter-strip measure at t = tn/td.

    ``r2, r1, r0`` are r_{n-2}, r_{n-1}, r_n.  Not reduced.
    """
    if triangle:
        num = tn * (r2 * tn + r1 * td + r0 * (2 * td - tn))
        den = 2 * r0 * (r1 + r0) * (r2 * tn + (r1 + r0) * td) * ((r2 + r1) * tn + r0 * td)
    else:
        num = tn * (r2 * tn + (r1 + 2 * r0) * td)
        den = 2 * r0 * (r1 + r0) * (r2 * tn + r0 * td) * (r2 * tn + (r1 + r0) * td)
    return num, den


def weighted_sum(items, tn, td):
    """Sum of ``count * measure`` over ``((r2, r1, r0, triangle), count)`` items, reduced."""
    sn, sd = 0, 1
    for (r2, r1, r0, tri), cnt in items:
        n, d = measure_nd(r2, r1, r0, tn, td, tri)
        n *= cnt
        g = gcd(n, d)
        n //= g
        d //= g
        g = gcd(sd, d)
        sn = sn * (d // g) + n * (sd // g)
        sd = sd // g * d
        g = gcd(sn, sd)
        if g > 1:
            sn //= g
            sd //= g
    return sn, sd


def next_level(level, m):
    """One extension step of the r-triple census for digits with b < m."""
    out = {}
    for (r2, r1, r0, tri), cnt in level.items():
        for b in range(1, m):
            for a in range(1 if tri else 0, b + 1):
                key = (r1, r0, b * r0 + a * r1 + r2, a == b)
                out[key] = out.get(key, 0) + cnt
    return out


def first_level(m):
    out = {}
    for b in range(1, m):
        for a in range(0, b + 1):
            key = (0, 0, 1, a == b)
            out[key] = out.get(key, 0) + 1
    return out


def shoelace2(pts):
    """Twice the signed area of a polygon with homogeneous vertices ``(x, y, w)``.

    Returns an unreduced ``(num, den)`` pair.
    """
    sn, sd = 0, 1
    k = len(pts)
    for i in range(k):
        x1, y1, w1 = pts[i]
        x2, y2, w2 = pts[(i + 1) % k]
        n = x1 * y2 - x2 * y1
        d = w1 * w2
        g = gcd(sd, d)
        sn = sn * (d // g) + n * (sd // g)
        sd = sd // g * d
    return sn, sd
