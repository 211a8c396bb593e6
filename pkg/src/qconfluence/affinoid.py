"""Affinoid domains: a closed disk minus finitely many open holes.

Radii are powers of p with exact rational exponents, so all geometric
comparisons are exact Fraction arithmetic on log_p scales.  Membership uses
the closed outer disk and open holes; a point on a hole boundary counts as
inside the domain.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import PAdicElement, FieldDescriptor, NEG_INF


class DomainError(ValueError):
    """A point or radius fell outside the domain of validity."""


class Affinoid:
    """D^+(c0, p^R0_log) minus the open disks D^-(c_i, p^Ri_log)."""

    __slots__ = ("fd", "c0", "R0_log", "holes")

    def __init__(self, c0: PAdicElement, R0_log: Fraction,
                 holes: list[tuple[PAdicElement, Fraction]] | None = None):
        self.fd = c0.fd
        self.c0 = c0
        self.R0_log = Fraction(R0_log)
        self.holes = [(c, Fraction(r)) for (c, r) in (holes or [])]
        for c, _ in self.holes:
            if c.fd != self.fd:
                raise DomainError("hole center lives in a different field")
            if (c - c0).lognorm() > self.R0_log:
                raise DomainError("hole center outside the outer disk")

    @classmethod
    def disk(cls, fd: FieldDescriptor, R0_log=Fraction(0)) -> "Affinoid":
        return cls(fd.zero(), R0_log)

    @classmethod
    def annulus(cls, fd: FieldDescriptor, inner_log: Fraction, outer_log=Fraction(0)) -> "Affinoid":
        return cls(fd.zero(), outer_log, [(fd.zero(), Fraction(inner_log))])

    @property
    def n_holes(self) -> int:
        return len(self.holes)

    def contains(self, c: PAdicElement) -> bool:
        if (c - self.c0).lognorm() > self.R0_log:
            return False
        for ci, ri in self.holes:
            if (c - ci).lognorm() < ri:
                return False
        return True

    def contains_generic(self, c: PAdicElement, rho_log: Fraction) -> bool:
        """Whether the generic point t_{c,rho} lies in X.

        |t - a| = max(rho, |c - a|) for every rational point a, which turns
        the membership conditions into exact exponent comparisons.
        """
        if max(rho_log, (c - self.c0).lognorm()) > self.R0_log:
            return False
        for ci, ri in self.holes:
            if max(rho_log, (c - ci).lognorm()) < ri:
                return False
        return True

    # --- radii -------------------------------------------------------------------

    def rho_c_log(self, c: PAdicElement) -> Fraction:
        """log_p of rho_{c,X} = min(R0, |c - c_1|, ..., |c - c_n|) for c in X."""
        if not self.contains(c):
            raise DomainError("rho_{c,X} needs c in X")
        best = self.R0_log
        for ci, _ in self.holes:
            d = (c - ci).lognorm()
            if d < best:
                best = d
        return best

    def rho_generic_log(self, c: PAdicElement, rho_log: Fraction) -> Fraction:
        """log_p of rho_{t,X} at the generic point t_{c,rho}."""
        if not self.contains_generic(c, rho_log):
            raise DomainError("generic point outside X")
        best = self.R0_log
        for ci, _ in self.holes:
            d = max(Fraction(rho_log), (c - ci).lognorm())
            if d < best:
                best = d
        return best

    @property
    def r_X_log(self) -> Fraction:
        """log_p of r_X = min of all radii."""
        best = self.R0_log
        for _, ri in self.holes:
            if ri < best:
                best = ri
        return best

    @property
    def s_X_log(self) -> Fraction:
        """log_p of s_X = max(|c0|, R0) = sup of |c| over X."""
        n = self.c0.lognorm()
        if n == NEG_INF:
            return self.R0_log
        return max(Fraction(n), self.R0_log)

    def shilov_points(self) -> list[tuple[PAdicElement, Fraction]]:
        """The n+1 generic points (c_i, R_i) carrying the sup norm."""
        return [(self.c0, self.R0_log)] + [(c, r) for c, r in self.holes]

    def __repr__(self):
        h = ", ".join(f"D^-({c!r}, p^{r})" for c, r in self.holes)
        base = f"D^+({self.c0!r}, p^{self.R0_log})"
        return base if not self.holes else f"{base} - [{h}]"


# --- q-invariance --------------------------------------------------------------------


def disk_q_invariant(c: PAdicElement, R_log: Fraction, q: PAdicElement) -> bool:
    """x -> qx maps D^-(c, R) onto itself iff |q - 1||c| < R and |q| = 1."""
    if q.lognorm() != 0:
        return False
    t = (q - q.fd.one()).lognorm() + c.lognorm()
    return t < R_log


class QInvarianceReport:
    __slots__ = ("status", "k0", "bound")

    def __init__(self, status: str, k0: int | None, bound: int):
        self.status = status      # "invariant" | "not_invariant" | "undecided"
        self.k0 = k0
        self.bound = bound

    def __repr__(self):
        if self.status == "invariant":
            return f"invariant(k0={self.k0})"
        return self.status


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


def affinoid_q_invariant(X: Affinoid, q: PAdicElement, power_bound: int = 512) -> QInvarianceReport:
    """Decide whether x -> qx maps X onto itself, and find the least k0 >= 1
    such that x -> q^k0 x fixes each hole globally.

    Requires |q| = 1.  The hole permutation is checked explicitly; per-hole
    exponents k_i come from a brute-force search of |q^k - 1||c_i| < R_i up
    to power_bound, and k0 is their least common multiple.
    """
    fd = X.fd
    if q.lognorm() != 0:
        raise DomainError("q-invariance requires |q| = 1")
    one = fd.one()
    if (q - one).lognorm() + X.c0.lognorm() >= X.R0_log:
        return QInvarianceReport("not_invariant", None, power_bound)
    # hole permutation: q * D^-(c_i, R_i) = D^-(q c_i, R_i) must be one of the holes
    for ci, ri in X.holes:
        img = q * ci
        hit = False
        for cj, rj in X.holes:
            if rj == ri and (img - cj).lognorm() < rj:
                hit = True
                break
        if not hit:
            return QInvarianceReport("not_invariant", None, power_bound)
    k0 = 1
    for ci, ri in X.holes:
        ci_log = ci.lognorm()
        qk = q
        found = None
        for k in range(1, power_bound + 1):
            if (qk - one).lognorm() + ci_log < ri:
                found = k
                break
            qk = qk * q
        if found is None:
            return QInvarianceReport("undecided", None, power_bound)
        k0 = _lcm(k0, found)
    return QInvarianceReport("invariant", k0, power_bound)
