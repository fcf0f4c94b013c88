"""Algebraic conjugates along continued-fraction and Jacobi-Perron expansions.

Dimension one: for the regular continued fraction of ``gamma`` with
convergents ``p_n / r_n`` the conjugate quotients

    gamma'_n = -(gamma' r_{n-1} - p_{n-1}) / (gamma' r_n - p_n)

satisfy ``gamma'_n + r_{n-1}/r_n -> 0``.

Dimension two: with conjugates ``alpha'_0``, ``beta'_0`` pushed through the
digit recurrences, the quantity

    beta'_n + (r_{n-2}/r_{n-1}) alpha'_n + r_{n-3}/r_{n-1}

is evaluated two ways.  The primary route writes it as ``N_u / D_e`` where
the numerator is an exact rational built from the convergents alone and the
denominator is linear in ``alpha'_0``, ``beta'_0``; no cancellation occurs.
When both conjugates come from one embedding the states themselves are
embedded as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .convergence import DeltaTrace, delta_trace, sign_analysis
from .exactnum import Embedding, Enclosure, FieldElement, embed
from .expansion import ExpansionTrace

__all__ = [
    "RationalInput",
    "NoValidN",
    "CFTrace",
    "ConjugateTrace",
    "Theorem3Report",
    "cf_trace",
    "jp_conjugate_trace",
    "theorem3_report",
    "choose_N",
    "hypothesis_sign",
    "embedding_pair",
]


class RationalInput(ValueError):
    pass


class NoValidN(ValueError):
    pass


def _mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


# ---------------------------------------------------------------------------
# dimension one


@dataclass
class CFTrace:
    gamma: FieldElement
    partial_quotients: list
    convergents: list  # (p_n, r_n)
    conjugate_track: list  # gamma'_n for n >= 1 (index 0 holds gamma')
    quantity: list  # gamma'_n + r_{n-1}/r_n, index 0 unused (None)
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c[2] for c in self.checks)


def cf_trace(gamma: FieldElement, gamma_conj: Embedding, n: int) -> CFTrace:
    """Regular continued fraction of ``gamma`` with its conjugate quotients up to index ``n``."""
    if gamma.is_rational:
        raise RationalInput("gamma must be irrational")
    if n < 1:
        raise ValueError("n must be at least 1")
    quotients = [gamma]
    pq = []
    x = gamma
    for _ in range(n + 2):
        a = x.floor()
        pq.append(a)
        x = (x - a).inverse()
        quotients.append(x)
    conv = []
    p1, p2, r1, r2 = 1, 0, 0, 1  # p_{-1}, p_{-2}, r_{-1}, r_{-2}
    for a in pq:
        p, r = a * p1 + p2, a * r1 + r2
        conv.append((p, r))
        p1, p2, r1, r2 = p, p1, r, r1
    e = gamma_conj
    bits = e.precision_bits + 32
    g = embed(gamma, e.with_precision(bits)).value
    track, qty = [g], [None]
    checks = []
    with mpmath.workprec(bits):
        for k in range(1, n + 1):
            pm, rm = conv[k - 1]
            pk, rk = conv[k]
            gk = -(g * rm - pm) / (g * rk - pk)
            track.append(gk)
            qty.append(gk + mpmath.mpf(rm) / rk)
            # the displayed formula is the conjugate of the next complete quotient
            direct = embed(quotients[k + 1], e.with_precision(bits)).value
            checks.append(("conjugate-quotient", k, abs(direct - gk) < mpmath.mpf(2) ** (-e.precision_bits + 8) * (1 + abs(gk))))
        for k in range(0, n + 1):
            pk, rk = conv[k]
            pm, rm = (conv[k - 1] if k else (1, 0))
            rec = (pk * quotients[k + 1] + pm) / (rk * quotients[k + 1] + rm)
            checks.append(("reconstruct", k, rec == gamma))
    return CFTrace(gamma, pq[: n + 1], conv[: n + 1], track, qty, checks)


# ---------------------------------------------------------------------------
# dimension two


def embedding_pair(field, kind: str, precision_bits: int = 128) -> tuple[Embedding, Embedding]:
    """Embeddings for (alpha'_0, beta'_0) named as on the command line.

    ``real2``: the second real root for both coordinates.  ``complex``: the
    root with positive imaginary part for both.  ``complex-conj``: its complex
    conjugate for both.  ``complex-swap``: the complex root for alpha and its
    conjugate for beta.
    """
    kinds = field.embedding_kinds()
    reals = [i for i, k in enumerate(kinds) if k == "real" and i != 0]
    cplx = [i for i, k in enumerate(kinds) if k == "complex"]
    if kind == "real2":
        if not reals:
            raise ValueError("the field has no second real embedding")
        i = j = reals[0]
    elif kind in ("complex", "complex-conj", "complex-swap"):
        if not cplx:
            raise ValueError("the field has no complex embedding")
        up, down = cplx[0], cplx[1]
        i, j = {"complex": (up, up), "complex-conj": (down, down), "complex-swap": (up, down)}[kind]
    else:
        raise ValueError(f"unknown embedding kind {kind!r}")
    return Embedding(field, i, precision_bits), Embedding(field, j, precision_bits)


@dataclass
class ConjugateTrace:
    embedding: Embedding
    embedding_beta: Embedding
    alpha0: Enclosure
    beta0: Enclosure
    alpha_prime: list  # embedded states for a shared embedding, else the projective iterate
    beta_prime: list
    quantity: list  # index n >= 3 through the exact-numerator route; None below
    quantity_direct: list  # same-embedding cross-check, else empty
    numerators: list  # exact N_u as Fractions (index n >= 3)
    checks: list = field(default_factory=list)

    @property
    def same_embedding(self) -> bool:
        return self.embedding.root_index == self.embedding_beta.root_index

    @property
    def ok(self) -> bool:
        return all(c[2] for c in self.checks)

    def magnitude(self, n: int) -> mpmath.mpf:
        return abs(self.quantity[n])


def _det_prime(t: ExpansionTrace, a, b, k: int, l: int):
    rk, pk, qk = t.col(k)
    rl, pl, ql = t.col(l)
    return (pk * ql - pl * qk) - a * (rk * ql - rl * qk) + b * (rk * pl - rl * pk)


def jp_conjugate_trace(trace: ExpansionTrace, e: Embedding, e_beta: Embedding | None = None) -> ConjugateTrace:
    """Conjugate sequences and the vanishing quantity along ``trace``.

    ``e`` supplies alpha'_0 and ``e_beta`` (default ``e``) supplies beta'_0.
    """
    a0, b0 = trace.initial.alpha, trace.initial.beta
    fld = a0.field
    if fld.degree == 1:
        raise RationalInput("rational input has no nontrivial embedding")
    e_beta = e if e_beta is None else e_beta
    for emb in (e, e_beta):
        if emb.field != fld:
            raise ValueError("embedding belongs to a different field")
        if emb.root_index == 0:
            raise ValueError("the identity embedding gives no conjugate")
    prec = e.precision_bits
    t = trace
    last = len(t.states) - 1
    # the projective route cancels about two bit-lengths of r; budget for it
    lossy = prec + 3 * t.rn(t.length - 1).bit_length() + 64
    al0 = embed(a0, e.with_precision(lossy))
    be0 = embed(b0, e_beta.with_precision(lossy))
    tol = mpmath.mpf(2) ** (-prec + 8)
    checks = []
    alpha_p: list = [None] * (last + 1)
    beta_p: list = [None] * (last + 1)
    qty: list = [None] * (last + 1)
    nums: list = [None] * (last + 1)
    direct: list = []
    with mpmath.workprec(lossy):
        A, B = al0.value, be0.value
        alpha_p[0], beta_p[0] = A, B
        for n in range(1, last + 1):
            x0 = _det_prime(t, A, B, n - 2, n - 1)
            x1 = -_det_prime(t, A, B, n - 3, n - 1)
            x2 = _det_prime(t, A, B, n - 3, n - 2)
            alpha_p[n], beta_p[n] = x1 / x0, x2 / x0
        for n in range(3, last + 1):
            r1, p1, q1 = t.col(n - 1)
            r2, p2, q2 = t.col(n - 2)
            r3, p3, q3 = t.col(n - 3)
            X = r1 * p2 - r2 * p1
            Y = r1 * q2 - r2 * q1
            Nu = r3 * (X * (Fraction(q1, r1) - Fraction(q3, r3)) - Y * (Fraction(p1, r1) - Fraction(p3, r3)))
            De = r1 * (X * (_mpf(Fraction(q1, r1)) - B) - Y * (_mpf(Fraction(p1, r1)) - A))
            nums[n] = Nu
            qty[n] = _mpf(Nu) / De
            proj = beta_p[n] + mpmath.mpf(r2) / r1 * alpha_p[n] + mpmath.mpf(r3) / r1
            checks.append(("routes-agree", n, abs(proj - qty[n]) < tol * (1 + abs(qty[n]))))
        if e.root_index == e_beta.root_index:
            ee = e.with_precision(prec + 64)
            direct = [None] * (last + 1)
            for n in range(0, last + 1):
                s = t.states[n]
                da, db = embed(s.alpha, ee).value, embed(s.beta, ee).value
                # the projective iterate must agree with the embedded state
                checks.append(("iterate-alpha", n, abs(da - alpha_p[n]) < tol * (1 + abs(da))))
                checks.append(("iterate-beta", n, abs(db - beta_p[n]) < tol * (1 + abs(db))))
                alpha_p[n], beta_p[n] = da, db
                if n >= 1:
                    d = t.digits[n - 1]
                    pa, pb = embed(t.states[n - 1].alpha, ee).value, embed(t.states[n - 1].beta, ee).value
                    checks.append(("residual-alpha", n, abs(pa - d.a - 1 / db) < tol * (1 + abs(pa))))
                    checks.append(("residual-beta", n, abs(pb - d.b - da / db) < tol * (1 + abs(pb))))
                if n >= 3:
                    r1, r2, r3 = t.rn(n - 1), t.rn(n - 2), t.rn(n - 3)
                    direct[n] = db + mpmath.mpf(r2) / r1 * da + mpmath.mpf(r3) / r1
                    checks.append(("direct-route", n, abs(direct[n] - qty[n]) < tol * (1 + abs(qty[n]))))
                    pin = embed(t.pi(n), ee).value
                    checks.append(("product-form", n, abs(pin / r1 - qty[n]) < tol * (1 + abs(qty[n]))))
    return ConjugateTrace(e, e_beta, al0, be0, alpha_p, beta_p, qty, direct, nums, checks)


# ---------------------------------------------------------------------------


def choose_N(d: DeltaTrace) -> int:
    """One past the last observed sign agreement of either error sequence (0 if none)."""
    last = -1
    for which in ("delta", "delta_prime"):
        sa = sign_analysis(d, which)
        if sa.agree_indices:
            last = max(last, sa.agree_indices[-1])
    return last + 1


def _real_sign(x: mpmath.mpf, rad) -> int:
    if x > rad:
        return 1
    if x < -rad:
        return -1
    return 0


_GAP_BITS = 512


def hypothesis_sign(delta_product_sign: int, alpha0: FieldElement, beta0: FieldElement, ap: Enclosure, bp: Enclosure) -> tuple[str, int]:
    """Case name and sign of the conjugate hypothesis product (0 when undecided)."""
    a_real = ap.imag_sign() is None
    b_real = bp.imag_sign() is None
    if a_real and b_real:
        case = "both-real"
    elif not a_real and not b_real:
        case = "both-imaginary"
    else:
        case = "mixed-real-imaginary"

    def gap(x0: FieldElement, enc: Enclosure) -> int:
        with mpmath.workprec(_GAP_BITS):
            v = x0.approx(_GAP_BITS)
            return _real_sign(v - enc.value.real, enc.radius + mpmath.mpf(2) ** (8 - _GAP_BITS))

    if case == "both-real":
        s = gap(alpha0, ap) * gap(beta0, bp)
    elif case == "both-imaginary":
        sa, sb = ap.imag_sign(), bp.imag_sign()
        s = 0 if sa is None or sb is None else sa * sb
    else:
        # the real part stands in for the imaginary conjugate
        s = gap(alpha0, ap) * gap(beta0, bp)
    return case, delta_product_sign * s


@dataclass
class Theorem3Report:
    case: str
    hypothesis_sign: int
    N: int
    satisfied: bool
    tail_max: mpmath.mpf
    alpha_root: int
    beta_root: int
    swap: dict | None = None
    tail_decreasing: bool | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "hypothesis_sign": self.hypothesis_sign,
            "N": self.N,
            "satisfied": self.satisfied,
            "tail_max": mpmath.nstr(self.tail_max, 10),
            "embedding": {"alpha_root": self.alpha_root, "beta_root": self.beta_root},
            "swap": self.swap,
            "tail_decreasing": self.tail_decreasing,
            "notes": list(self.notes),
        }


def tail_max(c: ConjugateTrace) -> mpmath.mpf:
    vals = [abs(q) for q in c.quantity if q is not None]
    if not vals:
        return mpmath.mpf(0)
    k = max(1, len(vals) // 4)
    return max(vals[-k:])


def theorem3_report(trace: ExpansionTrace, d: DeltaTrace | None, c: ConjugateTrace) -> Theorem3Report:
    """Evaluate the conjugate hypothesis at the observed N and suggest a sign-flipping swap."""
    if d is None:
        d = delta_trace(trace)
    N = choose_N(d)
    L = min(d.delta.first_zero(), d.delta_prime.first_zero())
    if N > L - 5:
        raise NoValidN(f"sign agreements persist to index {N - 1} of a {L}-step trace")
    dd = d.delta.sign(N) * d.delta_prime.sign(N)
    a0, b0 = trace.initial.alpha, trace.initial.beta
    case, s = hypothesis_sign(dd, a0, b0, c.alpha0, c.beta0)
    rep = Theorem3Report(case, s, N, s < 0, tail_max(c), c.embedding.root_index, c.embedding_beta.root_index)
    if s == 0:
        rep.notes.append("degenerate hypothesis sign; no verdict")
    else:
        rep.swap = _swap(trace, dd, c, s)
    if rep.satisfied:
        vals = [(n, abs(q)) for n, q in enumerate(c.quantity) if q is not None]
        ref = abs(c.quantity[N + 3]) if N + 3 < len(c.quantity) and c.quantity[N + 3] is not None else None
        if ref is not None:
            k = max(1, len(vals) // 4)
            rep.tail_decreasing = all(v < ref for n, v in vals[-k:] if n > N + 3)
    rep.notes.append("N is read off a finite prefix; the hypothesis is conditional on it")
    return rep


def _swap(trace: ExpansionTrace, dd: int, c: ConjugateTrace, s: int) -> dict | None:
    """Replace alpha'_0 by another conjugate that flips the hypothesis sign, if one exists."""
    fld = trace.initial.alpha.field
    a0, b0 = trace.initial.alpha, trace.initial.beta
    prec = c.embedding.precision_bits
    for i in range(1, fld.degree):
        if i == c.embedding.root_index:
            continue
        alt = embed(a0, Embedding(fld, i, prec))
        case, s2 = hypothesis_sign(dd, a0, b0, alt, c.beta0)
        if s2 == -s:
            return {"alpha_root": i, "beta_root": c.embedding_beta.root_index, "case": case, "hypothesis_sign": s2}
    return None
