"""q-integers, q-factorials, q-binomials, twisted monomials (T-c)(T-qc)...,
and the triangular change of basis between standard and twisted expansions.

The q-factorial is accumulated as a product of q-integers, never via the
quotient formula, so it is an exact zero at roots of unity.  The q-binomial
comes from expanding the product (1-T)(1-qT)...(1-q^(n-1)T), which stays
valid at roots of unity.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import FieldDescriptor, PAdicElement, PrecisionError, q_membership
from .series import DiskSeries


def q_integer(n: int, q: PAdicElement) -> PAdicElement:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("q-integer needs n >= 0")
    fd = q.fd
    acc = fd.zero()
    term = fd.one()
    for _ in range(n):
        acc = acc + term
        term = term * q
    return acc


def q_factorial(n: int, q: PAdicElement) -> PAdicElement:
    """[n]_q^! as the product [1]_q [2]_q ... [n]_q."""
    fd = q.fd
    acc = fd.one()
    for k in range(2, n + 1):
        acc = acc * q_integer(k, q)
    return acc


def q_factorials(n: int, q: PAdicElement) -> list[PAdicElement]:
    """[0]_q^! .. [n]_q^! in one pass."""
    fd = q.fd
    out = [fd.one()]
    acc = fd.one()
    for k in range(1, n + 1):
        if k >= 2:
            acc = acc * q_integer(k, q)
        out.append(acc)
    return out


def q_binomial(n: int, i: int, q: PAdicElement) -> PAdicElement:
    """Coefficient extraction from (1-T)(1-qT)...(1-q^(n-1)T)
    = sum_i (-1)^i binom(n,i)_q q^(i(i-1)/2) T^i."""
    if not 0 <= i <= n:
        raise ValueError(f"q-binomial index out of range: (n,i)=({n},{i})")
    fd = q.fd
    poly = [fd.one()]
    qk = fd.one()
    for _ in range(n):
        new = [fd.zero()] * (len(poly) + 1)
        for d, c in enumerate(poly):
            new[d] = new[d] + c
            new[d + 1] = new[d + 1] - c * qk
        poly = new
        qk = qk * q
    sign = fd.from_int(-1 if i % 2 else 1)
    qtw = q**(i * (i - 1) // 2)
    return poly[i] * sign * qtw.inverse() if False else poly[i] * sign / qtw


class QContext:
    """A fixed (q, center, truncation) triple plus the cached basis matrices."""

    __slots__ = ("q", "c", "M", "fd", "classification", "_btilde", "_qfact")

    def __init__(self, q: PAdicElement, c: PAdicElement, M: int):
        if q.fd != c.fd:
            raise ValueError("q and c live in different fields")
        self.q = q
        self.c = c
        self.M = M
        self.fd = q.fd
        self.classification = q_membership(q)
        self._btilde = None
        self._qfact = None

    @property
    def qm1c_log(self):
        """log_p |q - 1||c|, the twisted-expansion validity threshold."""
        return (self.q - self.fd.one()).lognorm() + self.c.lognorm()

    def q_factorials(self) -> list[PAdicElement]:
        if self._qfact is None:
            self._qfact = q_factorials(self.M, self.q)
        return self._qfact

    def btilde_rows(self) -> list[list[PAdicElement]]:
        """Row n holds the standard-basis coefficients of (T-c)_{q,n}.

        Lower triangular with unit diagonal; computed by multiplying out
        (T - q^k c) = (T - c) + (1 - q^k) c one factor at a time.
        """
        if self._btilde is not None:
            return self._btilde
        fd = self.fd
        rows = [[fd.one()]]
        qk = fd.one()
        row = [fd.one()]
        for n in range(1, self.M + 1):
            shift = (fd.one() - qk) * self.c        # (1 - q^(n-1)) c
            new = [fd.zero()] * (n + 1)
            for d, a in enumerate(row):
                new[d + 1] = new[d + 1] + a
                new[d] = new[d] + a * shift
            rows.append(new)
            row = new
            qk = qk * self.q
        self._btilde = rows
        return rows


class TwistedSeries:
    """Coefficients in the basis (T-c)_{q,n}, n <= M."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: QContext, coeffs: list[PAdicElement]):
        self.ctx = ctx
        self.coeffs = list(coeffs)

    def gauss_lognorm(self, rho_log: Fraction):
        """sup_n |a~_n| rho^n, valid as the Gauss norm when |q-1||c| < rho."""
        from .padic import NEG_INF
        best = NEG_INF
        for n, a in enumerate(self.coeffs):
            ln = a.lognorm()
            if ln == NEG_INF:
                continue
            cand = ln + n * rho_log
            if cand > best:
                best = cand
        return best

    def first_nonzero_index(self) -> int | None:
        for n, a in enumerate(self.coeffs):
            if not a.is_zero():
                return n
        return None

    def evaluate(self, x: PAdicElement) -> PAdicElement:
        """Direct evaluation sum a~_n (x-c)(x-qc)...(x-q^(n-1)c)."""
        ctx = self.ctx
        fd = ctx.fd
        acc = fd.zero()
        mono = fd.one()
        qk = fd.one()
        for n, a in enumerate(self.coeffs):
            if not a.is_zero():
                acc = acc + a * mono
            mono = mono * (x - qk * ctx.c)
            qk = qk * ctx.q
        return acc


def twisted_monomial(n: int, ctx: QContext) -> DiskSeries:
    """(T-c)_{q,n} expanded in powers of (T - c)."""
    if n > ctx.M:
        raise ValueError("twisted monomial order exceeds the context truncation")
    row = ctx.btilde_rows()[n]
    coeffs = list(row) + [ctx.fd.zero()] * (ctx.M - n)
    return DiskSeries(ctx.c, coeffs)


def to_twisted(f: DiskSeries, ctx: QContext) -> TwistedSeries:
    """Solve the unit lower-triangular system a = Btilde^T a~ by back-substitution."""
    a = list(f.truncate(ctx.M).coeffs)
    rows = ctx.btilde_rows()
    out = [ctx.fd.zero()] * (ctx.M + 1)
    for n in range(ctx.M, -1, -1):
        out[n] = a[n]
        if not out[n].is_zero():
            row = rows[n]
            for i in range(n):
                a[i] = a[i] - out[n] * row[i]
    return TwistedSeries(ctx, out)


def from_twisted(g: TwistedSeries) -> DiskSeries:
    ctx = g.ctx
    fd = ctx.fd
    rows = ctx.btilde_rows()
    out = [fd.zero()] * (ctx.M + 1)
    for n, an in enumerate(g.coeffs):
        if an.is_zero() and an.is_exact_zero():
            continue
        row = rows[n]
        for i, b in enumerate(row):
            if not b.is_exact_zero():
                out[i] = out[i] + an * b
    return DiskSeries(ctx.c, out)


def twisted_taylor_coeffs(f: DiskSeries, ctx: QContext) -> TwistedSeries:
    """a~_n = d_q^n(f)(c) / [n]_q^!, defined when q is not a root of unity."""
    if ctx.classification.label == "root_of_unity":
        raise PrecisionError("twisted Taylor coefficients undefined at a root of unity")
    facts = ctx.q_factorials()
    out = []
    g = f.truncate(ctx.M)
    for n in range(ctx.M + 1):
        out.append(g.evaluate(ctx.c) / facts[n])
        if n < ctx.M:
            g = g.d_q(ctx.q)
    return TwistedSeries(ctx, out)


class LeibnizReport:
    __slots__ = ("n", "min_difference_valuation")

    def __init__(self, n, v):
        self.n = n
        self.min_difference_valuation = v

    def __repr__(self):
        return f"LeibnizReport(n={self.n}, min_diff_val={self.min_difference_valuation})"


def q_leibniz_check(f: DiskSeries, g: DiskSeries, n: int, ctx: QContext) -> LeibnizReport:
    """Compare d_q^n(fg) against sum_i binom(n,i)_q d_q^(n-i)(f)(q^i T) d_q^i(g)(T)."""
    q = ctx.q
    fd = ctx.fd
    M = ctx.M
    f = f.truncate(M)
    g = g.truncate(M)
    lhs = f * g
    for _ in range(n):
        lhs = lhs.d_q(q)
    # iterated d_q tables
    df = [f]
    dg = [g]
    for _ in range(n):
        df.append(df[-1].d_q(q))
        dg.append(dg[-1].d_q(q))
    rhs = DiskSeries.zero(fd, f.center, M)
    for i in range(n + 1):
        b = q_binomial(n, i, q)
        shifted = df[n - i].sigma_q(q**i)
        rhs = rhs + (shifted * dg[i]) * b
    return LeibnizReport(n, lhs.min_diff_valuation(rhs))
