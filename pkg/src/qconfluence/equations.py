"""Equation objects over an affinoid and their generic Taylor machinery.

A q-difference equation sigma_q(Y) = A(q,T) Y, a differential equation
delta_1(Y) = G1(T) Y with delta_1 = T d/dT, or a mixed pair of both.  From
the matrix we derive:

  * H_n with d_q^n(Y) = H_n Y, via H_{n+1} = d_q(H_n) + sigma_q(H_n) H_1;
  * the pole-free companions K_n = H_n T^n, which satisfy
      K_{n+1} = (sigma_q(K_n) - K_n)/(q-1) + q^(-n) sigma_q(K_n) (K_1 - [n]_q)
    and keep every step inside H_K(X) even when X has no hole at 0;
  * the differential analogues G_[n] ((d/dT)^n Y = G_[n] Y) and
    KG_n = G_[n] T^n with KG_{n+1} = delta_1(KG_n) + KG_n (G1 - n);
  * truncated Taylor solutions at rational base points, generic radii of
    convergence at generic points (c, rho), radius profiles, the rough lower
    bound for mixed pairs, and tensor / hom / dual constructions.

All radius outputs are windowed estimates and say so.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import PAdicElement, PrecisionError, NEG_INF, POS_INF, q_membership
from .affinoid import Affinoid, DomainError
from .series import DiskSeries, RadiusEstimate, estimate_radius
from .analytic import AnalyticFunction, invert_unit
from .qcalc import QContext, TwistedSeries, from_twisted, q_factorials, q_integer
from . import matrices as mx


class EquationError(ValueError):
    pass


def _as_matrix(X, A, M):
    out = []
    for row in A:
        out.append([f.truncate(M) if isinstance(f, AnalyticFunction)
                    else AnalyticFunction.constant(X, f, M) for f in row])
    return out


def _det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * _det(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


class QDifferenceEquation:
    """sigma_q(Y) = A Y on X; A invertible (certified by a dominant-term check
    on det A, failures abort)."""

    kind = "q_difference"

    def __init__(self, X: Affinoid, q: PAdicElement, A, M: int = 64, certify: bool = True):
        self.X = X
        self.q = q
        self.A = _as_matrix(X, A, M)
        self.n = len(self.A)
        self.M = M
        self._k_cache: list | None = None
        if certify:
            certify_invertible(self.A)

    @property
    def fd(self):
        return self.X.fd

    def k_coefficients(self, M: int | None = None):
        """K_0..K_M with K_n = H_n T^n; never leaves H_K(X)."""
        if M is None:
            M = self.M
        if self._k_cache is not None and len(self._k_cache) >= M + 1:
            return self._k_cache[: M + 1]
        fd = self.fd
        q = self.q
        qm1 = q - fd.one()
        if qm1.is_zero():
            raise EquationError("K-recurrence needs q != 1")
        one = AnalyticFunction.constant(self.X, fd.one(), self.M)
        ident = mx.mat_identity(self.n, one, AnalyticFunction.zero(self.X, self.M))
        K1 = mx.mat_scalar(mx.mat_sub(self.A, ident), qm1.inverse())
        out = [ident, K1]
        qinv_n = fd.one()
        qinv = q.inverse()
        for n in range(1, M):
            Kn = out[-1]
            qinv_n = qinv_n * qinv
            sig = mx.mat_map(Kn, lambda f: f.sigma_q(q))
            first = mx.mat_scalar(mx.mat_sub(sig, Kn), qm1.inverse())
            bracket = mx.mat_sub(K1, mx.mat_scalar(ident, q_integer(n, q)))
            second = mx.mat_scalar(mx.mat_mul(sig, bracket), qinv_n)
            out.append(mx.mat_add(first, second))
        self._k_cache = out
        return out

    def h_coefficients(self, M: int | None = None):
        """H_0..H_M directly; division by T uses a hole at 0 when X has one,
        else requires exact divisibility."""
        if M is None:
            M = self.M
        fd = self.fd
        q = self.q
        qm1 = q - fd.one()
        if qm1.is_zero():
            raise EquationError("H-recurrence needs q != 1")
        one = AnalyticFunction.constant(self.X, fd.one(), self.M)
        ident = mx.mat_identity(self.n, one, AnalyticFunction.zero(self.X, self.M))
        H1 = mx.mat_map(mx.mat_sub(self.A, ident),
                        lambda f: f.divide_by_T().scalar_div(qm1))
        out = [ident, H1]
        for _ in range(1, M):
            Hn = out[-1]
            sig = mx.mat_map(Hn, lambda f: f.sigma_q(q))
            out.append(mx.mat_add(mx.mat_map(Hn, lambda f: f.d_q(q)),
                                  mx.mat_mul(sig, H1)))
        return out

    def iterated_matrix(self, power: int):
        """A(q^power, T) by the cocycle A(q^(k+1),T) = A(q, q^k T) A(q^k, T)."""
        acc = self.A
        qk = self.q
        for _ in range(power - 1):
            shifted = mx.mat_map(self.A, lambda f: f.sigma_q(qk))
            acc = mx.mat_mul(shifted, acc)
            qk = qk * self.q
        return acc


class DifferentialEquation:
    """delta_1(Y) = G1 Y on X."""

    kind = "differential"

    def __init__(self, X: Affinoid, G1, M: int = 64):
        self.X = X
        self.G1 = _as_matrix(X, G1, M)
        self.n = len(self.G1)
        self.M = M
        self._kg_cache: list | None = None

    @property
    def fd(self):
        return self.X.fd

    def kg_coefficients(self, M: int | None = None):
        """KG_0..KG_M with KG_n = G_[n] T^n; pole-free."""
        if M is None:
            M = self.M
        if self._kg_cache is not None and len(self._kg_cache) >= M + 1:
            return self._kg_cache[: M + 1]
        fd = self.fd
        one = AnalyticFunction.constant(self.X, fd.one(), self.M)
        ident = mx.mat_identity(self.n, one, AnalyticFunction.zero(self.X, self.M))
        out = [ident, self.G1]
        for n in range(1, M):
            KGn = out[-1]
            bracket = mx.mat_sub(self.G1, mx.mat_scalar(ident, fd.from_int(n)))
            out.append(mx.mat_add(mx.mat_map(KGn, lambda f: f.delta1()),
                                  mx.mat_mul(KGn, bracket)))
        self._kg_cache = out
        return out

    def g_coefficients(self, M: int | None = None):
        """G_[0]..G_[M] directly (matrix of (d/dT)^n); needs G1/T representable."""
        if M is None:
            M = self.M
        fd = self.fd
        one = AnalyticFunction.constant(self.X, fd.one(), self.M)
        ident = mx.mat_identity(self.n, one, AnalyticFunction.zero(self.X, self.M))
        G1 = mx.mat_map(self.G1, lambda f: f.divide_by_T())
        out = [ident, G1]
        for _ in range(1, M):
            Gn = out[-1]
            out.append(mx.mat_add(mx.mat_map(Gn, lambda f: f.ddT()),
                                  mx.mat_mul(Gn, G1)))
        return out


class SigmaDeltaEquation:
    """The pair sigma_q(Y) = A Y, delta_1(Y) = G1 Y.  Compatibility between the
    two actions is not assumed; solution_check surfaces obstructions."""

    kind = "sigma_delta"

    def __init__(self, X: Affinoid, q: PAdicElement, A, G1, M: int = 64, certify: bool = True):
        self.X = X
        self.q = q
        self.A = _as_matrix(X, A, M)
        self.G1 = _as_matrix(X, G1, M)
        self.n = len(self.A)
        self.M = M
        if certify:
            certify_invertible(self.A)

    @property
    def fd(self):
        return self.X.fd

    def G_q(self):
        """Matrix of delta_q = sigma_q o delta_1: G(q,T) = G1(qT) A(q,T)."""
        shifted = mx.mat_map(self.G1, lambda f: f.sigma_q(self.q))
        return mx.mat_mul(shifted, self.A)

    def q_part(self) -> QDifferenceEquation:
        return QDifferenceEquation(self.X, self.q, self.A, self.M, certify=False)

    def diff_part(self) -> DifferentialEquation:
        return DifferentialEquation(self.X, self.G1, self.M)


def unit_equation(X: Affinoid, q: PAdicElement | None = None, M: int = 64, rank: int = 1):
    fd = X.fd
    one = AnalyticFunction.constant(X, fd.one(), M)
    zero = AnalyticFunction.zero(X, M)
    ident = mx.mat_identity(rank, one, zero)
    zmat = mx.mat_identity(rank, zero, zero)
    if q is None:
        return DifferentialEquation(X, zmat, M)
    return SigmaDeltaEquation(X, q, ident, zmat, M)


def certify_invertible(A) -> None:
    """Numeric certificate that det A is a unit of H_K(X): a dominant constant
    term at every Shilov point.  Sufficient, not necessary; failures abort."""
    d = _det(A)
    f0 = d.poly[0]
    if f0.is_zero():
        raise EquationError("matrix not invertible: det has no constant term at precision")
    rest = d - AnalyticFunction.constant(d.X, f0, d.M)
    if not rest.sup_lognorm() < f0.lognorm():
        raise EquationError("matrix invertibility not certified: no dominant term in det")


def matrix_inverse_analytic(A, M: int | None = None):
    """Entrywise-analytic inverse via adjugate over invert_unit(det)."""
    n = len(A)
    d = _det(A)
    dinv = invert_unit(d, M)
    if n == 1:
        return [[dinv]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(A) if k != j]
            cof = _det(minor)
            if (i + j) % 2 == 1:
                cof = -cof
            out[i][j] = cof * dinv
    return out


# --- Taylor solutions ------------------------------------------------------------------


class TaylorSolution:
    """Truncated fundamental solution at a rational base point, as a matrix of
    disk series in the twisted basis (q-difference) or standard basis."""

    __slots__ = ("equation", "base", "basis", "series", "twisted_coeffs", "qctx")

    def __init__(self, equation, base, basis, series, twisted_coeffs=None, qctx=None):
        self.equation = equation
        self.base = base
        self.basis = basis               # "twisted" | "standard" | "hybrid"
        self.series = series             # matrix of DiskSeries centered at base
        self.twisted_coeffs = twisted_coeffs
        self.qctx = qctx

    def evaluate(self, x: PAdicElement):
        if self.twisted_coeffs is not None:
            n = len(self.series)
            out = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    out[i][j] = TwistedSeries(
                        self.qctx, [C[i][j] for C in self.twisted_coeffs]).evaluate(x)
            return out
        return mx.mat_map(self.series, lambda s: s.evaluate(x))


def _eval_matrix_at(Ms, c: PAdicElement):
    return mx.mat_map(Ms, lambda f: f.evaluate(c))


def taylor_solution_at(E, c: PAdicElement, M: int | None = None) -> TaylorSolution:
    """Truncated generic Taylor solution Y(x, c) at a rational base point c in X."""
    fd = E.fd
    if M is None:
        M = E.M
    if not E.X.contains(c):
        raise DomainError("base point outside the affinoid")
    if E.kind == "q_difference":
        cls = q_membership(E.q)
        if cls.label == "root_of_unity":
            raise EquationError("radius and Taylor solution undefined at a root of unity q")
        facts = q_factorials(M, E.q)
        if c.is_zero():
            Hs = E.h_coefficients(M)
            Hc = [_eval_matrix_at(Hn, c) for Hn in Hs]
        else:
            Ks = E.k_coefficients(M)
            cinv = c.inverse()
            Hc = []
            cpow = fd.one()
            for n, Kn in enumerate(Ks):
                Hc.append(mx.mat_scalar(_eval_matrix_at(Kn, c), cpow))
                cpow = cpow * cinv
        twisted = [mx.mat_scalar(Hc[n], facts[n].inverse()) for n in range(M + 1)]
        ctx = QContext(E.q, c, M)
        n = E.n
        series = [[from_twisted(TwistedSeries(ctx, [Cm[i][j] for Cm in twisted]))
                   for j in range(n)] for i in range(n)]
        return TaylorSolution(E, c, "twisted", series, twisted, ctx)
    if E.kind == "differential":
        if c.is_zero():
            Gs = E.g_coefficients(M)
            Gc = [_eval_matrix_at(Gn, c) for Gn in Gs]
        else:
            KGs = E.kg_coefficients(M)
            cinv = c.inverse()
            Gc = []
            cpow = fd.one()
            for n, KGn in enumerate(KGs):
                Gc.append(mx.mat_scalar(_eval_matrix_at(KGn, c), cpow))
                cpow = cpow * cinv
        fact = fd.one()
        coeffs = []
        for n in range(M + 1):
            if n >= 2:
                fact = fact * fd.from_int(n)
            coeffs.append(mx.mat_scalar(Gc[n], fact.inverse()) if n >= 2 else Gc[n])
        nn = E.n
        series = [[DiskSeries(c, [Cm[i][j] for Cm in coeffs]) for j in range(nn)]
                  for i in range(nn)]
        return TaylorSolution(E, c, "standard", series)
    if E.kind == "sigma_delta":
        return _hybrid_taylor(E, c, M)
    raise EquationError(f"unknown equation kind {E.kind!r}")


def _hybrid_taylor(E: SigmaDeltaEquation, c: PAdicElement, M: int) -> TaylorSolution:
    """Y_c(T) = sum_n F_[n](c/q^n) (T-c)^n / (n! q^(n(n-1)/2)) where
    D_q^n(Y) = F_[n] Y and F_[n+1] = sigma_q(F_[n]) F_[1] + D_q(F_[n]) A."""
    fd = E.fd
    q = E.q
    F1 = mx.mat_map(E.G_q(), lambda f: f.divide_by_T().scalar_div(q))
    one = AnalyticFunction.constant(E.X, fd.one(), E.M)
    ident = mx.mat_identity(E.n, one, AnalyticFunction.zero(E.X, E.M))
    Fs = [ident, F1]
    for _ in range(1, M):
        Fn = Fs[-1]
        sig = mx.mat_map(Fn, lambda f: f.sigma_q(q))
        dq = mx.mat_map(Fn, lambda f: f.D_q(q))
        Fs.append(mx.mat_add(mx.mat_mul(sig, F1), mx.mat_mul(dq, E.A)))
    qinv = q.inverse()
    qshift = fd.one()
    fact = fd.one()
    qtw = fd.one()            # q^(n(n-1)/2)
    qn = fd.one()
    coeffs = []
    for n in range(M + 1):
        if n >= 1:
            qshift = qshift * qinv          # 1/q^n
            fact = fact * fd.from_int(n) if n >= 2 else fact
            qtw = qtw * qn                  # multiply by q^(n-1)
            qn = qn * q
        point = c * qshift
        if not E.X.contains(point):
            raise DomainError("hybrid Taylor base point c/q^n left the affinoid")
        Fc = _eval_matrix_at(Fs[n], point)
        denom = (fact * qtw).inverse()
        coeffs.append(mx.mat_scalar(Fc, denom))
    nn = E.n
    series = [[DiskSeries(c, [Cm[i][j] for Cm in coeffs]) for j in range(nn)]
              for i in range(nn)]
    return TaylorSolution(E, c, "hybrid", series)


# --- generic radius --------------------------------------------------------------------


class GenericRadius:
    """min(rho_{c,X}, windowed liminf estimate); always labeled an estimate."""

    __slots__ = ("log_estimate", "rho_cx_log", "solution_log", "saturated",
                 "window", "diagnostic")

    def __init__(self, log_estimate, rho_cx_log, solution_log, saturated, window, diagnostic):
        self.log_estimate = log_estimate
        self.rho_cx_log = rho_cx_log
        self.solution_log = solution_log
        self.saturated = saturated
        self.window = window
        self.diagnostic = diagnostic

    def __repr__(self):
        return f"GenericRadius(p^{self.log_estimate}, ESTIMATE)"


def generic_radius(E, c: PAdicElement, rho_log: Fraction, M: int | None = None) -> GenericRadius:
    """(c,rho)-generic radius of convergence estimate.

    For q-difference equations the terms are |H_n|_(c,rho) / |[n]_q^!|; for
    differential equations |G_[n]|_(c,rho) / |n!|.  H_n and G_[n] norms come
    from the pole-free companions via |T|_(c,rho) = max(|c|, rho).
    """
    fd = E.fd
    if M is None:
        M = E.M
    rho_log = Fraction(rho_log)
    X = E.X
    rho_cx = X.rho_generic_log(c, rho_log)
    t_abs = max(Fraction(rho_log), _flog(c.lognorm()))         # log|t_{c,rho}|
    if E.kind == "sigma_delta":
        Ek = E.diff_part()
    else:
        Ek = E
    if Ek.kind == "q_difference":
        cls = q_membership(Ek.q)
        if cls.label == "root_of_unity":
            raise EquationError("generic radius undefined at a root of unity q")
        mats = Ek.k_coefficients(M)
        facts = q_factorials(M, Ek.q)
        denom_logs = [f.lognorm() for f in facts]
        qm1_log = (Ek.q - fd.one()).lognorm()
    else:
        mats = Ek.kg_coefficients(M)
        fact = fd.one()
        denom_logs = [Fraction(0), Fraction(0)]
        for n in range(2, M + 1):
            fact = fact * fd.from_int(n)
            denom_logs.append(fact.lognorm())
        qm1_log = None
    lo = max(M // 2, 1)
    best = None
    terms = []
    for n in range(lo, M + 1):
        norm_log = _mat_gauss_lognorm(mats[n], c, rho_log)
        if norm_log == NEG_INF:
            continue
        # |H_n| = |K_n| max(|c|,rho)^(-n)
        t = Fraction(norm_log) - n * t_abs - denom_logs[n]
        terms.append((n, -Fraction(t, n)))
        cand = -Fraction(t, n)
        if best is None or cand < best:
            best = cand
    saturated = best is None
    solution_log = best
    if saturated:
        est = rho_cx
    else:
        est = min(rho_cx, best)
    diagnostic = {"terms": terms, "saturated": saturated}
    if qm1_log is not None and not saturated:
        if not qm1_log + t_abs < solution_log:
            raise EquationError(
                "radius undefined for this (q, c, rho): |q-1||t| >= solution radius")
    return GenericRadius(est, rho_cx, solution_log, saturated, (lo, M), diagnostic)


def _flog(x):
    return Fraction(x) if x != NEG_INF else Fraction(-10**9)


def _mat_gauss_lognorm(A, c, rho_log):
    best = NEG_INF
    for row in A:
        for f in row:
            v = f.gauss_lognorm(c, rho_log)
            if v > best:
                best = v
    return best


def radius_profile(E, c: PAdicElement, rho_grid_logs, M: int | None = None):
    """Sampled (log rho, log estimate) pairs; per-point failures inline."""
    out = []
    for r in rho_grid_logs:
        try:
            g = generic_radius(E, c, Fraction(r), M)
            out.append((Fraction(r), g.log_estimate, None))
        except (DomainError, EquationError, PrecisionError) as exc:
            out.append((Fraction(r), None, str(exc)))
    return out


def rough_lower_bound(E: SigmaDeltaEquation, c: PAdicElement, rho_log: Fraction) -> Fraction:
    """log_p of omega rho / max(|A|_(c,rho), |G(q,T)|_(c,rho) / max(1, |c|/rho)):
    a certified lower bound for the radius of a hybrid Taylor solution."""
    fd = E.fd
    rho_log = Fraction(rho_log)
    qm1c = (E.q - fd.one()).lognorm() + c.lognorm()
    if not (qm1c <= rho_log and rho_log <= E.X.rho_generic_log(c, rho_log)):
        raise DomainError("rough bound needs |q-1||c| <= rho <= rho_{c,X}")
    normA = _mat_gauss_lognorm(E.A, c, rho_log)
    Gq = E.G_q()
    normG = _mat_gauss_lognorm(Gq, c, rho_log)
    adj = max(Fraction(0), _flog(c.lognorm()) - rho_log)     # log max(1, |c|/rho)
    denom = max(_finite0(normA), _finite0(normG) - adj)
    return fd.omega_logp + rho_log - denom


def _finite0(x):
    return Fraction(x) if x != NEG_INF else Fraction(-10**9)


# --- tensor, hom, dual ------------------------------------------------------------------


def _same_setting(E1, E2):
    if E1.X is not E2.X and (E1.X.fd != E2.X.fd):
        raise EquationError("tensor/hom need equations on the same affinoid")
    if hasattr(E1, "q") and hasattr(E2, "q") and not (E1.q - E2.q).is_zero():
        raise EquationError("tensor/hom need the same q")


def tensor(E1, E2, M: int | None = None):
    _same_setting(E1, E2)
    if M is None:
        M = max(E1.M, E2.M)
    if E1.kind == "q_difference":
        return QDifferenceEquation(E1.X, E1.q, mx.kron(E1.A, E2.A), M, certify=False)
    if E1.kind == "differential":
        one = AnalyticFunction.constant(E1.X, E1.fd.one(), M)
        zero = AnalyticFunction.zero(E1.X, M)
        I1 = mx.mat_identity(E1.n, one, zero)
        I2 = mx.mat_identity(E2.n, one, zero)
        G = mx.mat_add(mx.kron(E1.G1, I2), mx.kron(I1, E2.G1))
        return DifferentialEquation(E1.X, G, M)
    A = mx.kron(E1.A, E2.A)
    one = AnalyticFunction.constant(E1.X, E1.fd.one(), M)
    zero = AnalyticFunction.zero(E1.X, M)
    I1 = mx.mat_identity(E1.n, one, zero)
    I2 = mx.mat_identity(E2.n, one, zero)
    G = mx.mat_add(mx.kron(E1.G1, I2), mx.kron(I1, E2.G1))
    return SigmaDeltaEquation(E1.X, E1.q, A, G, M, certify=False)


def _transpose(A):
    return [list(row) for row in zip(*A)]


def hom(E1, E2, M: int | None = None):
    """Hom(M, N) carried by matrices: solutions are Y_N C Y_M^(-1)."""
    _same_setting(E1, E2)
    if M is None:
        M = max(E1.M, E2.M)
    if E1.kind == "q_difference":
        A1inv = matrix_inverse_analytic(E1.A, M)
        return QDifferenceEquation(E1.X, E1.q, mx.kron(E2.A, _transpose(A1inv)),
                                   M, certify=False)
    if E1.kind == "differential":
        one = AnalyticFunction.constant(E1.X, E1.fd.one(), M)
        zero = AnalyticFunction.zero(E1.X, M)
        I1 = mx.mat_identity(E1.n, one, zero)
        I2 = mx.mat_identity(E2.n, one, zero)
        G = mx.mat_sub(mx.kron(E2.G1, I1), mx.kron(I2, _transpose(E1.G1)))
        return DifferentialEquation(E1.X, G, M)
    raise EquationError("hom implemented for q-difference and differential equations")


def dual(E, M: int | None = None):
    if M is None:
        M = E.M
    if E.kind == "q_difference":
        Ainv = matrix_inverse_analytic(E.A, M)
        return QDifferenceEquation(E.X, E.q, _transpose(Ainv), M, certify=False)
    if E.kind == "differential":
        return DifferentialEquation(E.X, mx.mat_neg(_transpose(E.G1)), M)
    raise EquationError("dual implemented for q-difference and differential equations")


# --- solution verification ----------------------------------------------------------------


class SolutionReport:
    __slots__ = ("passes", "sigma_valuation", "delta_valuation", "failed_laws", "threshold")

    def __init__(self, passes, sigma_valuation, delta_valuation, failed_laws, threshold):
        self.passes = passes
        self.sigma_valuation = sigma_valuation
        self.delta_valuation = delta_valuation
        self.failed_laws = failed_laws
        self.threshold = threshold

    def __repr__(self):
        status = "passes" if self.passes else f"FAILS({','.join(self.failed_laws)})"
        return (f"SolutionReport({status}, sigma_val={self.sigma_valuation}, "
                f"delta_val={self.delta_valuation})")


def solution_check(E, Y, base: PAdicElement, threshold=None) -> SolutionReport:
    """Verify sigma_q(Y) = A Y and/or delta_1(Y) = G1 Y for a matrix Y of disk
    series at the base point; reports the minimum valuation of each defect."""
    fd = E.fd
    if threshold is None:
        threshold = Fraction(fd.N - 12)
    Y00 = Y[0][0].coeffs[0]
    const = [[Y[i][j].coeffs[0] for j in range(len(Y))] for i in range(len(Y))]
    try:
        mx.scalar_mat_inverse(const)
    except PrecisionError:
        raise EquationError("solution matrix not invertible at the base point")
    M = Y[0][0].M
    sigma_val = None
    delta_val = None
    failed = []
    if E.kind in ("q_difference", "sigma_delta"):
        Aser = mx.mat_map(E.A, lambda f: f.as_series_at(base, M))
        lhs = mx.mat_map(Y, lambda s: s.sigma_q(E.q))
        rhs = mx.mat_mul(Aser, Y)
        sigma_val = mx.mat_min_diff_valuation(lhs, rhs)
        if not sigma_val >= threshold:
            failed.append("sigma")
    if E.kind in ("differential", "sigma_delta"):
        G1 = E.G1
        Gser = mx.mat_map(G1, lambda f: f.as_series_at(base, M))
        lhs = mx.mat_map(Y, lambda s: s.delta1())
        rhs = mx.mat_mul(Gser, Y)
        delta_val = mx.mat_min_diff_valuation(lhs, rhs)
        if not delta_val >= threshold:
            failed.append("delta")
    return SolutionReport(not failed, sigma_val, delta_val, failed, threshold)


def independent_solution_count(columns, fd) -> int:
    """Rank over K of a family of candidate solution columns (lists of
    DiskSeries), by valuation-pivoted elimination on stacked coefficients."""
    if not columns:
        return 0
    rows = []
    for col in columns:
        stacked = []
        for s in col:
            stacked.extend(s.coeffs)
        rows.append(stacked)
    rank = 0
    ncols = len(rows[0])
    used = [False] * len(rows)
    for j in range(ncols):
        piv, best = None, None
        for i, row in enumerate(rows):
            if used[i] or row[j].is_zero():
                continue
            ln = row[j].lognorm()
            if best is None or ln > best:
                best, piv = ln, i
        if piv is None:
            continue
        used[piv] = True
        rank += 1
        inv = rows[piv][j].inverse()
        for i, row in enumerate(rows):
            if i == piv or row[j].is_zero():
                continue
            f = row[j] * inv
            rows[i] = [a - f * b for a, b in zip(row, rows[piv])]
    return rank
