"""Deformation of a differential equation into a q-difference family sharing
one Taylor solution, confluence back to the differential limit, admissibility
gating, Frobenius pullback, and the roundtrip verifiers.

Key identities, all realized on pole-free companions (K_n = H_n T^n,
KG_n = G_[n] T^n), with the two-variable solution never materialized:

  deform:           A(q',T) = sum_n KG_n(T) (q'-1)^n / n!
  deform_between:   A(q',T) = sum_n K_n(T) prod_{k<n}(q' - q^k) / [n]_q^!
  confluence:       G(1,T)  = sum_{n>=1} K_n(T) P_n'(1) / [n]_q^!
                    with P_n(x) = prod_{k<n}(x - q^k), differentiated formally,
    or the iterated limit (A(q^(p^m),T) - Id)/(q^(p^m) - 1) with a
    valuation-growth diagnostic.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import PAdicElement, PrecisionError, NEG_INF, POS_INF, q_membership
from .affinoid import Affinoid, DomainError
from .series import DiskSeries, window_step_log
from .analytic import AnalyticFunction, invert_unit
from .qcalc import q_factorials
from .equations import (
    QDifferenceEquation, DifferentialEquation, SigmaDeltaEquation,
    EquationError, generic_radius, taylor_solution_at, certify_invertible,
)
from . import matrices as mx


class AdmissibilityError(EquationError):
    pass


class AdmissibilityReport:
    """R = min over Shilov points of the generic-radius estimates, checked
    against |q-1| s_X < r <= R <= r_X."""

    __slots__ = ("R_log", "s_X_log", "r_X_log", "r_log", "radius_ok",
                 "disk_ok", "admissible", "inconclusive", "per_point")

    def __init__(self, R_log, s_X_log, r_X_log, r_log, radius_ok, disk_ok,
                 admissible, inconclusive, per_point):
        self.R_log = R_log
        self.s_X_log = s_X_log
        self.r_X_log = r_X_log
        self.r_log = r_log
        self.radius_ok = radius_ok       # r <= R <= r_X
        self.disk_ok = disk_ok           # requested q-disk fits: |q-1| s_X < r
        self.admissible = admissible
        self.inconclusive = inconclusive
        self.per_point = per_point

    def __repr__(self):
        tag = "admissible" if self.admissible else (
            "inconclusive" if self.inconclusive else "not admissible")
        return f"AdmissibilityReport({tag}, R=p^{self.R_log}, r_X=p^{self.r_X_log})"


def _radius_scan(E, M=None):
    """Minimum generic-radius estimate over the Shilov boundary points."""
    per_point = []
    R = None
    inconclusive = False
    for c, rho in E.X.shilov_points():
        try:
            g = generic_radius(E, c, rho, M)
            per_point.append((rho, g.log_estimate))
            R = g.log_estimate if R is None else min(R, g.log_estimate)
        except (EquationError, DomainError, PrecisionError):
            per_point.append((rho, None))
            inconclusive = True
    return R, inconclusive, per_point


def check_admissible(E, r_log: Fraction, M: int | None = None) -> AdmissibilityReport:
    """Taylor admissibility with generic radius greater than p^r_log.

    R is the minimum of the generic-radius estimates at the Shilov boundary
    points of X.  An estimator failure marks the report inconclusive rather
    than passing silently.
    """
    X = E.X
    r_log = Fraction(r_log)
    R, inconclusive, per_point = _radius_scan(E, M)
    if R is None:
        radius_ok = False
        disk_ok = False
    else:
        radius_ok = r_log <= R <= X.r_X_log
        qm1 = _qm1_log(E)
        disk_ok = qm1 + X.s_X_log < r_log if qm1 is not None else True
    admissible = (not inconclusive) and radius_ok and disk_ok
    return AdmissibilityReport(R, X.s_X_log, X.r_X_log, r_log, radius_ok,
                               disk_ok, admissible, inconclusive, per_point)


def _qm1_log(E):
    if hasattr(E, "q"):
        return (E.q - E.fd.one()).lognorm()
    return None


def _gate_deform(E, q_prime: PAdicElement, override: bool):
    """deform refuses unless |q'-1| s_X < min(R, r_X); override marks the
    output uncertified instead of aborting."""
    X = E.X
    need = (q_prime - E.fd.one()).lognorm() + X.s_X_log
    R, inconclusive, per_point = _radius_scan(E)
    ok = (not inconclusive) and R is not None and need < min(R, X.r_X_log)
    report = AdmissibilityReport(R, X.s_X_log, X.r_X_log, need, ok, ok, ok,
                                 inconclusive, per_point)
    if not ok and not override:
        raise AdmissibilityError(
            f"deformation not admissible: |q'-1| s_X = p^{need} must stay below "
            f"min(R, r_X) = p^{None if R is None else min(R, X.r_X_log)}")
    return report, ok


class DeformedEquation(QDifferenceEquation):
    """A q-difference equation produced by deformation, carrying diagnostics."""

    def __init__(self, X, q, A, M, report, certified, assembly_tail_lognorm):
        super().__init__(X, q, A, M, certify=False)
        self.admissibility = report
        self.certified = certified
        self.assembly_tail_lognorm = assembly_tail_lognorm
        certify_invertible(self.A)


def deform(E: DifferentialEquation, q_prime: PAdicElement, M: int | None = None,
           override_admissibility: bool = False) -> DeformedEquation:
    """A(q',T) = sum_n G_[n](T) ((q'-1) T)^n / n!, assembled pole-free as
    sum KG_n (q'-1)^n / n!."""
    if E.kind == "sigma_delta":
        E = E.diff_part()
    if E.kind != "differential":
        raise EquationError("deform starts from a differential equation")
    fd = E.fd
    if M is None:
        M = E.M
    report, certified = _gate_deform(E, q_prime, override_admissibility)
    KGs = E.kg_coefficients(M)
    qm1 = q_prime - fd.one()
    acc = None
    fact = fd.one()
    qp = fd.one()
    last_norms = []
    for n, KG in enumerate(KGs):
        if n >= 1:
            qp = qp * qm1
            if n >= 2:
                fact = fact * fd.from_int(n)
        scal = qp * fact.inverse()
        term = mx.mat_scalar(KG, scal)
        acc = term if acc is None else mx.mat_add(acc, term)
        if n >= M - 2:
            last_norms.append(_mat_sup_lognorm(term))
    tail = max(last_norms) if last_norms else NEG_INF
    return DeformedEquation(E.X, q_prime, acc, M, report, certified, tail)


def deform_between(E: QDifferenceEquation, q_prime: PAdicElement, M: int | None = None,
                   override_admissibility: bool = False) -> DeformedEquation:
    """Move a q-difference equation to q' through the shared twisted solution:
    A(q',T) = sum_n K_n(T) prod_{k<n}(q' - q^k) / [n]_q^!.

    At q' = q every factor list contains q' - q = 0, so the sum collapses to
    A(q,T) exactly at truncation.
    """
    fd = E.fd
    if M is None:
        M = E.M
    if q_membership(E.q).label == "root_of_unity":
        raise EquationError("deform_between needs q not a root of unity")
    report, certified = _gate_deform(E, q_prime, override_admissibility)
    Ks = E.k_coefficients(M)
    facts = q_factorials(M, E.q)
    acc = None
    prod = fd.one()
    qk = fd.one()          # q^k
    for n, K in enumerate(Ks):
        if n >= 1:
            prod = prod * (q_prime - qk)
            qk = qk * E.q
        scal = prod * facts[n].inverse()
        term = mx.mat_scalar(K, scal)
        acc = term if acc is None else mx.mat_add(acc, term)
    tail = _mat_sup_lognorm(mx.mat_scalar(Ks[M], prod * facts[M].inverse()))
    return DeformedEquation(E.X, q_prime, acc, M, report, certified, tail)


def _mat_sup_lognorm(A):
    best = NEG_INF
    for row in A:
        for f in row:
            v = f.sup_lognorm()
            if v > best:
                best = v
    return best


# --- confluence ---------------------------------------------------------------------------


class ConfluenceResult(DifferentialEquation):
    def __init__(self, X, G1, M, mode, diagnostics):
        super().__init__(X, G1, M)
        self.mode = mode
        self.diagnostics = diagnostics


def confluence(E: QDifferenceEquation, M: int | None = None,
               mode: str = "derivative_of_family",
               override_admissibility: bool = False) -> ConfluenceResult:
    """The differential equation with the same generic Taylor solution."""
    fd = E.fd
    if M is None:
        M = E.M
    if q_membership(E.q).label == "root_of_unity":
        raise EquationError("confluence needs q not a root of unity")
    # 1 lies in every deformation disk; the binding gate is the equation's own q
    _gate_deform(E, E.q, override_admissibility)
    if mode == "derivative_of_family":
        return _confluence_derivative(E, M)
    if mode == "iterated_limit":
        return _confluence_iterated(E, M)
    raise EquationError(f"unknown confluence mode {mode!r}")


def _poly_in_qprime(fd, q, n):
    """Coefficients of P_n(x) = prod_{k=0..n-1} (x - q^k)."""
    coeffs = [fd.one()]
    qk = fd.one()
    for _ in range(n):
        new = [fd.zero()] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            new[d + 1] = new[d + 1] + c
            new[d] = new[d] - c * qk
        coeffs = new
        qk = qk * q
    return coeffs


def _confluence_derivative(E, M):
    """G(1,T) = sum_{n>=1} K_n(T) P_n'(1) / [n]_q^! with the deformation-family
    parameter kept as a formal polynomial variable and differentiated at 1."""
    fd = E.fd
    Ks = E.k_coefficients(M)
    facts = q_factorials(M, E.q)
    acc = None
    for n in range(1, M + 1):
        P = _poly_in_qprime(fd, E.q, n)
        dP1 = fd.zero()
        for d in range(1, len(P)):
            dP1 = dP1 + P[d] * fd.from_int(d)
        scal = dP1 * facts[n].inverse()
        term = mx.mat_scalar(Ks[n], scal)
        acc = term if acc is None else mx.mat_add(acc, term)
    return ConfluenceResult(E.X, acc, M, "derivative_of_family", {})


def _confluence_iterated(E, M, max_steps: int = 6):
    """Delta_m = (A(q^(p^m),T) - Id)/(q^(p^m)-1), with A(q^(p^m)) built by the
    doubling cocycle B_{m+1}(T) = prod_{j<p} B_m(q^(j p^m) T).  Reports the
    per-step valuation gaps v(Delta_{m+1} - Delta_m), which must increase."""
    fd = E.fd
    p = fd.p
    one = AnalyticFunction.constant(E.X, fd.one(), M)
    ident = mx.mat_identity(E.n, one, AnalyticFunction.zero(E.X, M))
    B = E.A
    qpow = E.q                     # q^(p^m)
    deltas = []
    for m in range(max_steps + 1):
        denom = (qpow - fd.one())
        delta = mx.mat_scalar(mx.mat_sub(B, ident), denom.inverse())
        deltas.append(delta)
        if m == max_steps:
            break
        # B <- product over j = p-1 .. 0 of B(q^(j p^m) T)
        shift = fd.one()
        factors = []
        for _ in range(p):
            factors.append(mx.mat_map(B, lambda f, s=shift: f.sigma_q(s))
                           if not (shift - fd.one()).is_zero() else B)
            shift = shift * qpow
        acc = factors[-1]
        for f in reversed(factors[:-1]):
            acc = mx.mat_mul(acc, f)
        B = acc
        qpow = qpow**p
    gaps = []
    for m in range(len(deltas) - 1):
        gaps.append(mx.mat_min_diff_valuation(deltas[m + 1], deltas[m]))
    increasing = all(gaps[i] < gaps[i + 1] for i in range(len(gaps) - 1))
    diagnostics = {"valuation_gaps": gaps, "strictly_increasing": increasing}
    if not increasing:
        diagnostics["warning"] = "iterated limit stalled before precision exhaustion"
    return ConfluenceResult(E.X, deltas[-1], M, "iterated_limit", diagnostics)


# --- roundtrip ------------------------------------------------------------------------------


class RoundtripReport:
    __slots__ = ("forward_valuation", "backward_valuation", "threshold", "passes")

    def __init__(self, forward_valuation, backward_valuation, threshold):
        self.forward_valuation = forward_valuation
        self.backward_valuation = backward_valuation
        self.threshold = threshold
        ok = forward_valuation >= threshold
        if backward_valuation is not None:
            ok = ok and backward_valuation >= threshold
        self.passes = ok

    def __repr__(self):
        return (f"RoundtripReport(conf(def)-id: {self.forward_valuation}, "
                f"def(conf)-id: {self.backward_valuation}, passes={self.passes})")


def roundtrip_check(E: DifferentialEquation, q: PAdicElement, M: int | None = None,
                    threshold=None) -> RoundtripReport:
    """confluence(deform(E, q)) must recover E; and deform(confluence(D), q)
    must recover D = deform(E, q)."""
    fd = E.fd
    if M is None:
        M = E.M
    if threshold is None:
        threshold = Fraction(fd.N - 12)
    D = deform(E, q, M)
    back = confluence(D, M)
    fwd = mx.mat_min_diff_valuation(back.G1, E.G1)
    D2 = deform(back, q, M)
    bwd = mx.mat_min_diff_valuation(D2.A, D.A)
    return RoundtripReport(fwd, bwd, threshold)


# --- Frobenius -------------------------------------------------------------------------------


class FrobeniusPullback:
    __slots__ = ("equation", "expected_radius_law_log", "source_radius_log")

    def __init__(self, equation, expected_radius_law_log, source_radius_log):
        self.equation = equation
        self.expected_radius_law_log = expected_radius_law_log
        self.source_radius_log = source_radius_log


def expected_pullback_radius_log(r_log: Fraction, p: int) -> Fraction:
    """log_p of r' = min(r^(1/p), r |p|^(-1))."""
    r_log = Fraction(r_log)
    return min(r_log / p, r_log + 1)


def frobenius_pullback(E, M: int | None = None, track_radius_at=None) -> FrobeniusPullback:
    """Scalar extension along T -> T^p with the declared coefficient Frobenius.

    q-difference part: A -> A^phi(q^p, T^p) with A(q^p,.) from the cocycle;
    differential part: G1 -> p G1^phi(T^p).  Optionally compares generic radii
    against r' = min(r^(1/p), r |p|^(-1)) at a given (c, rho).
    """
    fd = E.fd
    p = fd.p
    if M is None:
        M = E.M

    def pull(f):
        return f.frobenius_coefficients().substitute_T_power(p)

    if E.kind == "differential":
        G1p = mx.mat_scalar(mx.mat_map(E.G1, pull), fd.from_int(p))
        out = DifferentialEquation(E.X, G1p, M)
    elif E.kind == "q_difference":
        Ap = mx.mat_map(E.iterated_matrix(p), pull)
        out = QDifferenceEquation(E.X, E.q, Ap, M, certify=False)
    else:
        Ap = mx.mat_map(E.q_part().iterated_matrix(p), pull)
        G1p = mx.mat_scalar(mx.mat_map(E.G1, pull), fd.from_int(p))
        out = SigmaDeltaEquation(E.X, E.q, Ap, G1p, M, certify=False)

    expected = source = None
    if track_radius_at is not None:
        c, rho_log = track_radius_at
        source = generic_radius(E if E.kind != "sigma_delta" else E.diff_part(),
                                c, rho_log, M).log_estimate
        expected = expected_pullback_radius_log(source, p)
    return FrobeniusPullback(out, expected, source)


class FrobeniusStructureReport:
    __slots__ = ("min_difference_valuation", "passes", "threshold", "ring_certified")

    def __init__(self, v, threshold, ring_certified):
        self.min_difference_valuation = v
        self.threshold = threshold
        self.passes = v >= threshold
        self.ring_certified = ring_certified

    def __repr__(self):
        return (f"FrobeniusStructureReport(val={self.min_difference_valuation}, "
                f"passes={self.passes})")


def verify_frobenius_structure(E, H=None, h: int = 1, M: int | None = None,
                               threshold=None) -> FrobeniusStructureReport:
    """Check Y^(phi^h)(T^(p^h), 1) = H(T) Y(T, 1) at truncation, around base 1.

    With H omitted, the unique candidate H = Y^(phi^h)(T^(p^h),1) Y(T,1)^(-1)
    is derived and its membership in the function ring is diagnosed through
    the series' coefficient decay.
    """
    fd = E.fd
    p = fd.p
    if M is None:
        M = E.M
    if threshold is None:
        threshold = Fraction(fd.N - 12)
    base = fd.one()
    if not E.X.contains(base):
        raise DomainError("base point 1 outside the domain")
    Y = taylor_solution_at(E, base, M)
    Yser = Y.series
    # substitute T -> T^(p^h) around center 1: (1 + (T-1))^(p^h), composed
    ph = p**h
    comp_coeffs = _binomial_power_series(fd, ph, M)    # (T^(p^h) - 1) in powers of (T-1)
    sub = DiskSeries(base, comp_coeffs)
    Yphi = mx.mat_map(Yser, lambda s: _compose_series(s, sub))
    if H is None:
        Yinv = mx.series_mat_inverse(Yser, M)
        Hmat = mx.mat_mul(Yphi, Yinv)
        ring_certified = all(
            _ring_membership_diagnostic(e) for row in Hmat for e in row)
        lhs = Yphi
        rhs = mx.mat_mul(Hmat, Yser)
        v = mx.mat_min_diff_valuation(lhs, rhs)
        return FrobeniusStructureReport(v, threshold, ring_certified)
    Hser = H if isinstance(H[0][0], DiskSeries) else \
        mx.mat_map(H, lambda f: f.as_series_at(base, M))
    rhs = mx.mat_mul(Hser, Yser)
    v = mx.mat_min_diff_valuation(Yphi, rhs)
    return FrobeniusStructureReport(v, threshold, True)


def _binomial_power_series(fd, ph, M):
    """(1 + u)^(p^h) - 1 as a polynomial in u, truncated at M."""
    coeffs = [fd.zero()] * (M + 1)
    binom = 1
    for j in range(0, min(ph, M) + 1):
        if j >= 1:
            binom = binom * (ph - j + 1) // j
            coeffs[j] = fd.from_int(binom)
    return coeffs


def _compose_series(s: DiskSeries, g: DiskSeries) -> DiskSeries:
    """s(center + g(T)) where g vanishes at the center: plain Horner."""
    fd = s.fd
    M = max(s.M, g.M)
    acc = DiskSeries.constant(fd.zero(), g.center, M)
    for c in reversed(s.coeffs):
        acc = (acc * g).truncate(M) + DiskSeries.constant(c, g.center, M)
    return acc


def _ring_membership_diagnostic(s: DiskSeries) -> bool:
    """Coefficient-decay certificate that a series around 1 represents an
    analytic element on the closed unit disk region near its boundary: the
    terms |a_k| must not grow along the truncation window."""
    lead = max((c.lognorm() for c in s.coeffs[: s.M // 2 + 1]), default=NEG_INF)
    tail = max((c.lognorm() for c in s.coeffs[s.M // 2 + 1:]), default=NEG_INF)
    return tail <= max(lead, Fraction(0))


class TrivializationReport:
    __slots__ = ("min_difference_valuation", "passes", "threshold")

    def __init__(self, v, threshold):
        self.min_difference_valuation = v
        self.threshold = threshold
        self.passes = v >= threshold

    def __repr__(self):
        return f"TrivializationReport(val={self.min_difference_valuation}, passes={self.passes})"


def root_of_unity_trivialization_check(A_xi, xi: PAdicElement, H,
                                       threshold=None) -> TrivializationReport:
    """Verify sigma_xi(H) A(xi,T) H^(-1) = Id for a basis-change matrix H of
    disk series at 0; the change trivializes the sigma_xi action."""
    fd = xi.fd
    if threshold is None:
        threshold = Fraction(fd.N - 12)
    M = H[0][0].M
    Aser = mx.mat_map(A_xi, lambda f: f.as_series_at(fd.zero(), M)
                      if isinstance(f, AnalyticFunction) else f)
    Hsig = mx.mat_map(H, lambda s: s.sigma_q(xi))
    Hinv = mx.series_mat_inverse(H, M)
    prod = mx.mat_mul(mx.mat_mul(Hsig, Aser), Hinv)
    n = len(H)
    ident = mx.mat_identity(n, DiskSeries.constant(fd.one(), fd.zero(), M),
                            DiskSeries.constant(fd.zero(), fd.zero(), M))
    v = mx.mat_min_diff_valuation(prod, ident)
    return TrivializationReport(v, threshold)
