"""Truncated power series on a disk: sum a_k (T - c)^k for k <= M.

Carries the Gauss norms |f|_{(c,rho)} = sup |a_k| rho^k, the substitution
f(qT), the derivations, formal exp/log, and the windowed radius-of-convergence
estimator.  All norm and radius values are handled as log_p exponents
(Fraction, with -inf for zero).
"""

from __future__ import annotations

from fractions import Fraction

from .padic import FieldDescriptor, PAdicElement, PrecisionError, NEG_INF


class DiskSeries:
    __slots__ = ("fd", "center", "coeffs")

    def __init__(self, center: PAdicElement, coeffs: list[PAdicElement]):
        self.fd = center.fd
        self.center = center
        self.coeffs = list(coeffs)

    # --- constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, x: PAdicElement, center: PAdicElement | None = None, M: int = 0) -> "DiskSeries":
        c = center if center is not None else x.fd.zero()
        return cls(c, [x] + [x.fd.zero()] * M)

    @classmethod
    def zero(cls, fd: FieldDescriptor, center: PAdicElement | None = None, M: int = 0) -> "DiskSeries":
        c = center if center is not None else fd.zero()
        return cls(c, [fd.zero()] * (M + 1))

    @classmethod
    def variable(cls, fd: FieldDescriptor, center: PAdicElement | None = None, M: int = 1) -> "DiskSeries":
        """The coordinate T itself, expanded around the center: c + (T - c)."""
        c = center if center is not None else fd.zero()
        coeffs = [c, fd.one()] + [fd.zero()] * (M - 1)
        return cls(c, coeffs)

    @property
    def M(self) -> int:
        return len(self.coeffs) - 1

    def copy(self) -> "DiskSeries":
        return DiskSeries(self.center, list(self.coeffs))

    def truncate(self, M: int) -> "DiskSeries":
        if M >= self.M:
            out = self.coeffs + [self.fd.zero()] * (M - self.M)
        else:
            out = self.coeffs[: M + 1]
        return DiskSeries(self.center, out)

    def degree(self) -> int:
        """Index of the last coefficient that is not exactly zero."""
        for k in range(self.M, -1, -1):
            if not self.coeffs[k].is_exact_zero():
                return k
        return -1

    def _check(self, other: "DiskSeries"):
        if self.fd != other.fd or not (self.center - other.center).is_exact_zero() \
                and not (self.center - other.center).is_zero():
            raise ValueError("series have different centers")

    # --- ring operations ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PAdicElement):
            other = DiskSeries.constant(other, self.center, 0)
        self._check(other)
        n = max(self.M, other.M)
        a = self.truncate(n).coeffs
        b = other.truncate(n).coeffs
        return DiskSeries(self.center, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        if isinstance(other, PAdicElement):
            other = DiskSeries.constant(other, self.center, 0)
        return self + (-other)

    def __neg__(self):
        return DiskSeries(self.center, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, PAdicElement):
            return DiskSeries(self.center, [other * c for c in self.coeffs])
        self._check(other)
        M = max(self.M, other.M)
        zero = self.fd.zero()
        out = [zero] * (M + 1)
        for i, ai in enumerate(self.coeffs):
            if ai.is_exact_zero():
                continue
            jmax = M - i
            for j, bj in enumerate(other.coeffs[: jmax + 1]):
                if bj.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + ai * bj
        return DiskSeries(self.center, out)

    def __rmul__(self, other):
        if isinstance(other, PAdicElement):
            return self.__mul__(other)
        return NotImplemented

    def scalar_div(self, x: PAdicElement) -> "DiskSeries":
        xi = x.inverse()
        return DiskSeries(self.center, [c * xi for c in self.coeffs])

    def evaluate(self, x: PAdicElement) -> PAdicElement:
        dx = x - self.center
        acc = self.fd.zero()
        for c in reversed(self.coeffs):
            acc = acc * dx + c
        return acc

    def recenter(self, new_center: PAdicElement) -> "DiskSeries":
        """Exact polynomial shift to coefficients in (T - new_center)^k."""
        h = new_center - self.center        # T - c = (T - c') + h
        if h.is_zero():
            return DiskSeries(new_center, list(self.coeffs))
        out = [self.fd.zero()] * (self.M + 1)
        # Horner in (T - c'): process highest coefficient first
        for c in reversed(self.coeffs):
            carry = out[0] * h + c
            for k in range(self.M, 0, -1):
                out[k] = out[k - 1] + out[k] * h
            out[0] = carry
        return DiskSeries(new_center, out)

    # --- calculus -------------------------------------------------------------------

    def ddT(self) -> "DiskSeries":
        out = [self.coeffs[k] * k for k in range(1, self.M + 1)]
        out.append(self.fd.zero())
        return DiskSeries(self.center, out)

    def delta1(self) -> "DiskSeries":
        """T d/dT = (T - c) f' + c f'."""
        d = self.ddT()
        shifted = DiskSeries(self.center, [self.fd.zero()] + d.coeffs[:-1])
        return shifted + d * self.center

    def sigma_q(self, q: PAdicElement) -> "DiskSeries":
        """f(qT), exact on polynomials: (qT - c)^k = (q(T-c) + (q-1)c)^k."""
        fd = self.fd
        eta = (q - fd.one()) * self.center
        if eta.is_exact_zero():
            out = []
            qpow = fd.one()
            for ak in self.coeffs:
                out.append(ak * qpow)
                qpow = qpow * q
            return DiskSeries(self.center, out)
        out = [fd.zero()] * (self.M + 1)
        # expand sum_k a_k (q u + eta)^k with u = T - c, iteratively via binomials
        # (q u + eta)^k = sum_j C(k,j) q^j eta^(k-j) u^j
        for k, ak in enumerate(self.coeffs):
            if ak.is_exact_zero():
                continue
            term = ak
            # binomial row: start at j = k: q^k u^k, going down multiplies by eta
            binom = 1
            qj = q**k
            qinv = None
            etapow = fd.one()
            for j in range(k, -1, -1):
                coeff = term * qj * etapow * fd.from_int(binom)
                out[j] = out[j] + coeff
                if j > 0:
                    binom = binom * j // (k - j + 1)
                    if qinv is None:
                        qinv = q.inverse()
                    qj = qj * qinv
                    etapow = etapow * eta
        return DiskSeries(self.center, out)

    def divide_by_T_exact(self) -> "DiskSeries":
        """f / T when f(0) vanishes at precision; synthetic division by (T-c) + c."""
        fd = self.fd
        c = self.center
        if c.is_zero():
            v0 = self.coeffs[0]
            if not v0.is_zero():
                raise PrecisionError("series not divisible by T: nonzero constant term")
            return DiskSeries(c, self.coeffs[1:] + [fd.zero()])
        # write f = sum a_k u^k, u = T - c; f/T with T = u + c
        g = [fd.zero()] * (self.M + 1)
        cinv = c.inverse()
        # process from the constant term upward: a_0 = c g_0, a_k = g_{k-1} + c g_k
        g[0] = self.coeffs[0] * cinv
        for k in range(1, self.M + 1):
            g[k] = (self.coeffs[k] - g[k - 1]) * cinv
        # remainder is a_{M+1}-level tail: the top relation requires g[M] consistent;
        # for series divisible by T the dropped term g[M] * u^(M+1) is the truncation.
        return DiskSeries(c, g)

    def d_q(self, q: PAdicElement) -> "DiskSeries":
        """(f(qT) - f(T)) / ((q - 1) T); requires q != 1 at precision."""
        qm1 = q - self.fd.one()
        if qm1.is_zero():
            raise PrecisionError("d_q undefined at q = 1")
        num = self.sigma_q(q) - self
        return num.divide_by_T_exact().scalar_div(qm1)

    def D_q(self, q: PAdicElement) -> "DiskSeries":
        """sigma_q composed with d/dT."""
        return self.ddT().sigma_q(q)

    # --- norms and radii ----------------------------------------------------------------

    def gauss_lognorm(self, rho_log: Fraction) -> Fraction | float:
        """log_p sup_k |a_k| rho^k."""
        best = NEG_INF
        for k, a in enumerate(self.coeffs):
            ln = a.lognorm()
            if ln == NEG_INF:
                continue
            cand = ln + k * rho_log
            if cand > best:
                best = cand
        return best

    def min_coeff_valuation(self) -> Fraction | float:
        from .padic import POS_INF
        best = POS_INF
        for a in self.coeffs:
            v = a.min_valuation()
            if v < best:
                best = v
        return best

    def inverse(self) -> "DiskSeries":
        """Series reciprocal; the constant term must be a unit at precision."""
        fd = self.fd
        a0 = self.coeffs[0]
        if a0.is_zero():
            raise PrecisionError("series reciprocal needs an invertible constant term")
        inv0 = a0.inverse()
        out = [inv0] + [fd.zero()] * self.M
        for k in range(1, self.M + 1):
            acc = fd.zero()
            for j in range(1, k + 1):
                if not self.coeffs[j].is_exact_zero():
                    acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -inv0 * acc
        return DiskSeries(self.center, out)

    def min_diff_valuation(self, other: "DiskSeries") -> Fraction | float:
        return (self - other).min_coeff_valuation()

    def __repr__(self):
        return f"DiskSeries(center={self.center!r}, M={self.M})"


# --- radius estimation -----------------------------------------------------------------


class RadiusEstimate:
    """Windowed stand-in for liminf |a_n|^(-1/n); always a labeled estimate."""

    __slots__ = ("log_estimate", "window", "saturated", "inconclusive", "terms")

    def __init__(self, log_estimate, window, saturated, inconclusive, terms):
        self.log_estimate = log_estimate
        self.window = window
        self.saturated = saturated
        self.inconclusive = inconclusive
        self.terms = terms

    def __repr__(self):
        if self.inconclusive:
            return "RadiusEstimate(inconclusive)"
        if self.saturated:
            return "RadiusEstimate(saturated)"
        return f"RadiusEstimate(p^{self.log_estimate}, window={self.window})"


def estimate_radius(series: DiskSeries) -> RadiusEstimate:
    """Estimate the radius of convergence from coefficients in the window [M/2, M].

    Returns the minimum of |a_n|^(-1/n) over the window (zero coefficients
    skipped), together with the per-term exponents as a monotonicity
    diagnostic.  A window of all-zero coefficients from a series whose lower
    part is also zero is inconclusive; an all-zero window under a nonzero
    head means the recurrence terminated and the estimate saturates.
    """
    M = series.M
    lo = M // 2
    terms = []
    best = None
    for n in range(lo, M + 1):
        if n == 0:
            continue
        a = series.coeffs[n]
        if a.is_zero():
            continue
        t = Fraction(a.valuation(), n)       # log_p |a_n|^(-1/n)
        terms.append((n, t))
        if best is None or t < best:
            best = t
    if best is None:
        head_nonzero = any(not c.is_zero() for c in series.coeffs[:lo])
        if head_nonzero:
            return RadiusEstimate(None, (lo, M), True, False, [])
        return RadiusEstimate(None, (lo, M), False, True, [])
    return RadiusEstimate(best, (lo, M), False, False, terms)


def window_step_log(M: int, p: int) -> Fraction:
    """Resolution of the windowed estimator in log_p units: digit-sum sized
    residuals divided by the window start."""
    import math
    return Fraction(math.ceil(math.log(max(M, p), p)) + 1, max(M // 2, 1))


# --- formal exp and log -------------------------------------------------------------------


def exp_series(g: DiskSeries, M: int | None = None, certify: bool = True) -> DiskSeries:
    """Formal exp(g) truncated at M.

    If the constant term g(c) is nonzero, exp splits as exp(g(c)) * exp(g - g(c));
    the scalar factor converges only for |g(c)| < omega, which is enforced when
    certify is set.
    """
    fd = g.fd
    if M is None:
        M = g.M
    g = g.truncate(M)
    g0 = g.coeffs[0]
    scalar = fd.one()
    if not g0.is_zero():
        if certify and g0.lognorm() >= fd.omega_logp:
            raise PrecisionError("exp does not converge: |g(c)| >= omega")
        scalar = _scalar_exp(g0)
        g = g - DiskSeries.constant(g0, g.center, M)
    one = DiskSeries.constant(fd.one(), g.center, M)
    acc = one
    term = one
    for n in range(1, M + 1):
        term = (term * g).scalar_div(fd.from_int(n))
        acc = acc + term
    return acc * scalar


def log1p_series(g: DiskSeries, M: int | None = None) -> DiskSeries:
    """Formal log(1 + g) truncated at M; g must vanish at the center."""
    fd = g.fd
    if M is None:
        M = g.M
    g = g.truncate(M)
    if not g.coeffs[0].is_zero():
        raise PrecisionError("log1p needs a series vanishing at the center")
    acc = DiskSeries.zero(fd, g.center, M)
    term = DiskSeries.constant(fd.one(), g.center, M)
    for n in range(1, M + 1):
        term = term * g
        sign = fd.from_int(1 if n % 2 == 1 else -1)
        acc = acc + term * (sign / fd.from_int(n))
    return acc


def _scalar_exp(x: PAdicElement) -> PAdicElement:
    """exp of a scalar with |x| < omega, summed to precision exhaustion."""
    fd = x.fd
    margin = fd.omega_logp - x.lognorm()      # > 0
    # term n has lognorm <= n*log|x| + (n - s(n))/(p-1) <= -n*margin + O(log n)
    n_terms = int(fd.N / float(margin)) + fd.p + 4
    acc = fd.one()
    term = fd.one()
    for n in range(1, n_terms + 1):
        term = term * x / fd.from_int(n)
        acc = acc + term
    return acc


def scalar_log1p(x: PAdicElement, n_terms: int | None = None) -> PAdicElement:
    """log(1 + x) for |x| < 1, summed until the capped precision is exhausted."""
    fd = x.fd
    margin = -x.lognorm()
    if margin <= 0:
        raise PrecisionError("log(1+x) needs |x| < 1")
    if n_terms is None:
        import math
        n_terms = int(fd.N / float(margin)) + int(math.log(fd.N + 1, fd.p)) + 4
    acc = fd.zero()
    xp = fd.one()
    for n in range(1, n_terms + 1):
        xp = xp * x
        term = xp / fd.from_int(n)
        acc = acc + term if n % 2 == 1 else acc - term
    return acc
