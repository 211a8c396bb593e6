"""Analytic elements on an affinoid in truncated Mittag-Leffler form.

A function is a polynomial part sum a_k (T - c0)^k, k <= M, plus one
principal part sum b_{i,k} (T - c_i)^(-k), 1 <= k <= M, per hole.  Sums and
products close over this representation after re-expansion; every operation
that drops terms beyond the truncation order records a sup-norm bound for the
dropped mass, and norm queries report whether truncation could affect the
answer.

Gauss norms at a generic point (c, rho) use |T - a| = max(rho, |c - a|) and
the fact that the Mittag-Leffler decomposition is an isometric direct sum:
the seminorm of the function is the max of the seminorms of its parts.
"""

from __future__ import annotations

from fractions import Fraction

from .padic import FieldDescriptor, PAdicElement, PrecisionError, NEG_INF, POS_INF
from .affinoid import Affinoid, DomainError, disk_q_invariant
from .series import DiskSeries


class AnalyticFunction:
    __slots__ = ("X", "poly", "hole_parts", "tail_lognorm")

    def __init__(self, X: Affinoid, poly: list[PAdicElement],
                 hole_parts: list[list[PAdicElement]] | None = None,
                 tail_lognorm=NEG_INF):
        self.X = X
        self.poly = list(poly)
        if hole_parts is None:
            hole_parts = [[] for _ in X.holes]
        if len(hole_parts) != len(X.holes):
            raise DomainError("one principal part per hole required")
        self.hole_parts = [list(h) for h in hole_parts]
        self.tail_lognorm = tail_lognorm

    # --- constructors ------------------------------------------------------------

    @classmethod
    def constant(cls, X: Affinoid, x: PAdicElement, M: int = 0) -> "AnalyticFunction":
        return cls(X, [x] + [X.fd.zero()] * M)

    @classmethod
    def zero(cls, X: Affinoid, M: int = 0) -> "AnalyticFunction":
        return cls(X, [X.fd.zero()] * (M + 1))

    @classmethod
    def variable(cls, X: Affinoid, M: int = 1) -> "AnalyticFunction":
        fd = X.fd
        return cls(X, [X.c0, fd.one()] + [fd.zero()] * (M - 1))

    @classmethod
    def from_disk_series(cls, X: Affinoid, f: DiskSeries) -> "AnalyticFunction":
        if not (f.center - X.c0).is_zero():
            f = f.recenter(X.c0)
        return cls(X, f.coeffs)

    @classmethod
    def monomial_inverse_T(cls, X: Affinoid, k: int = 1, M: int | None = None) -> "AnalyticFunction":
        """T^(-k); the domain must have a hole centered at 0."""
        fd = X.fd
        idx = _hole_at_zero(X)
        if M is None:
            M = max(k, 1)
        poly = [fd.zero()] * (M + 1)
        holes = [[fd.zero()] * M for _ in X.holes]
        holes[idx][k - 1] = fd.one()
        return cls(X, poly, holes)

    @property
    def fd(self) -> FieldDescriptor:
        return self.X.fd

    @property
    def M(self) -> int:
        return len(self.poly) - 1

    def truncate(self, M: int) -> "AnalyticFunction":
        fd = self.fd
        tail = self.tail_lognorm
        poly = list(self.poly)
        holes = [list(h) for h in self.hole_parts]
        if M >= self.M:
            poly = poly + [fd.zero()] * (M - self.M)
        else:
            for k in range(M + 1, len(poly)):
                tail = max(tail, _term_sup(self.X, self.X.c0, k, poly[k]))
            poly = poly[: M + 1]
        for i, h in enumerate(holes):
            ci = self.X.holes[i][0]
            if len(h) > M:
                for k in range(M, len(h)):
                    tail = max(tail, _term_sup(self.X, ci, -(k + 1), h[k]))
                holes[i] = h[:M]
            else:
                holes[i] = h + [fd.zero()] * (M - len(h))
        return AnalyticFunction(self.X, poly, holes, tail)

    def is_polynomial(self) -> bool:
        return all(all(c.is_zero() for c in h) for h in self.hole_parts)

    def poly_series(self) -> DiskSeries:
        return DiskSeries(self.X.c0, self.poly)

    # --- ring operations --------------------------------------------------------------

    def _check(self, other: "AnalyticFunction"):
        if self.X is not other.X and (self.X.fd != other.X.fd
                                      or len(self.X.holes) != len(other.X.holes)):
            raise DomainError("functions live on different affinoids")

    def __add__(self, other):
        if isinstance(other, PAdicElement):
            other = AnalyticFunction.constant(self.X, other, self.M)
        self._check(other)
        fd = self.fd
        M = max(self.M, other.M)
        a, b = self.truncate(M), other.truncate(M)
        poly = [x + y for x, y in zip(a.poly, b.poly)]
        holes = [[x + y for x, y in zip(ha, hb)]
                 for ha, hb in zip(a.hole_parts, b.hole_parts)]
        return AnalyticFunction(self.X, poly, holes,
                                max(a.tail_lognorm, b.tail_lognorm))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return AnalyticFunction(self.X, [-c for c in self.poly],
                                [[-c for c in h] for h in self.hole_parts],
                                self.tail_lognorm)

    def __sub__(self, other):
        if isinstance(other, PAdicElement):
            other = AnalyticFunction.constant(self.X, other, self.M)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PAdicElement):
            sc = other.lognorm()
            tail = self.tail_lognorm + sc if self.tail_lognorm != NEG_INF else NEG_INF
            return AnalyticFunction(self.X, [other * c for c in self.poly],
                                    [[other * c for c in h] for h in self.hole_parts],
                                    tail)
        self._check(other)
        M = max(self.M, other.M)
        a, b = self.truncate(M), other.truncate(M)
        out = AnalyticFunction.zero(self.X, M).truncate(M)
        if a.tail_lognorm != NEG_INF or b.tail_lognorm != NEG_INF:
            out.tail_lognorm = max(a.tail_lognorm + _finite(b.sup_lognorm()),
                                   b.tail_lognorm + _finite(a.sup_lognorm()))
        out = out + _mul_poly_poly(self.X, a.poly, b.poly, M)
        for i in range(len(self.X.holes)):
            if _active(b.hole_parts[i]):
                out = out + _mul_poly_hole(self.X, a.poly, i, b.hole_parts[i], M)
            if _active(a.hole_parts[i]):
                out = out + _mul_poly_hole(self.X, b.poly, i, a.hole_parts[i], M)
        for i in range(len(self.X.holes)):
            if not _active(a.hole_parts[i]):
                continue
            for j in range(len(self.X.holes)):
                if not _active(b.hole_parts[j]):
                    continue
                if i == j:
                    out = out + _mul_hole_same(self.X, i, a.hole_parts[i], b.hole_parts[j], M)
                else:
                    out = out + _mul_hole_cross(self.X, i, a.hole_parts[i], j, b.hole_parts[j], M)
        return out

    def __rmul__(self, other):
        if isinstance(other, PAdicElement):
            return self.__mul__(other)
        return NotImplemented

    def scalar_div(self, x: PAdicElement) -> "AnalyticFunction":
        return self * x.inverse()

    # --- evaluation --------------------------------------------------------------------

    def evaluate(self, x: PAdicElement) -> PAdicElement:
        if not self.X.contains(x):
            raise DomainError("evaluation point outside the affinoid")
        acc = DiskSeries(self.X.c0, self.poly).evaluate(x)
        for (ci, _), part in zip(self.X.holes, self.hole_parts):
            if not _active(part):
                continue
            w = (x - ci).inverse()
            horner = self.fd.zero()
            for b in reversed(part):
                horner = horner * w + b
            acc = acc + horner * w
        return acc

    # --- norms -------------------------------------------------------------------------

    def gauss_lognorm(self, c: PAdicElement, rho_log: Fraction, with_flag: bool = False):
        """log_p of the seminorm at the generic point t_{c,rho}; optionally with
        a certification flag that truncation tails stay below the reported sup."""
        if not self.X.contains_generic(c, rho_log):
            raise DomainError("generic point outside the affinoid")
        best = NEG_INF
        if any(not co.is_zero() for co in self.poly):
            poly = DiskSeries(self.X.c0, self.poly)
            shifted = poly if (c - self.X.c0).is_zero() else poly.recenter(c)
            best = max(best, shifted.gauss_lognorm(rho_log))
        for (ci, _), part in zip(self.X.holes, self.hole_parts):
            if not part:
                continue
            m = max(Fraction(rho_log), (c - ci).lognorm())
            for k, b in enumerate(part, start=1):
                ln = b.lognorm()
                if ln == NEG_INF:
                    continue
                cand = ln - k * m
                if cand > best:
                    best = cand
        if with_flag:
            certified = self.tail_lognorm == NEG_INF or self.tail_lognorm < best
            return best, certified
        return best

    def sup_lognorm(self, with_flag: bool = False):
        """Shilov formula: max over the n+1 boundary generic points."""
        best = NEG_INF
        certified = True
        for c, r in self.X.shilov_points():
            v, flag = self.gauss_lognorm(c, r, with_flag=True)
            best = max(best, v)
            certified = certified and flag
        if with_flag:
            return best, certified
        return best

    def min_coeff_valuation(self):
        best = POS_INF
        for a in self.poly:
            v = a.min_valuation()
            if v < best:
                best = v
        for h in self.hole_parts:
            for a in h:
                v = a.min_valuation()
                if v < best:
                    best = v
        return best

    def min_diff_valuation(self, other: "AnalyticFunction"):
        return (self - other).min_coeff_valuation()

    # --- substitution and derivations ----------------------------------------------------

    def sigma_q(self, q: PAdicElement) -> "AnalyticFunction":
        """f(qT).  Requires the outer disk and every hole individually
        q-invariant so each principal part re-expands convergently."""
        X = self.X
        fd = self.fd
        if q.lognorm() != 0:
            raise DomainError("sigma_q needs |q| = 1")
        if not disk_q_invariant(X.c0, X.R0_log, q):
            raise DomainError("outer disk not q-invariant")
        out_poly = DiskSeries(X.c0, self.poly).sigma_q(q).coeffs
        out = AnalyticFunction(X, out_poly, None, self.tail_lognorm).truncate(self.M)
        qinv = q.inverse()
        for i, ((ci, ri), part) in enumerate(zip(X.holes, self.hole_parts)):
            if not _active(part):
                continue
            if not disk_q_invariant(ci, ri, q):
                raise DomainError(f"hole {i} not q-invariant under sigma_q")
            # (qT - ci)^(-k) = q^(-k) (T - ci/q)^(-k), then re-expand around ci
            eta = ci * (fd.one() - qinv)
            out = out + _reexpand_principal(X, i, part, eta, self.M, scale=qinv)
        return out

    def ddT(self) -> "AnalyticFunction":
        fd = self.fd
        X = self.X
        poly = DiskSeries(X.c0, self.poly).ddT().coeffs
        holes = []
        tail = self.tail_lognorm
        for i, part in enumerate(self.hole_parts):
            n = len(part)
            new = [fd.zero()] * n
            for k, b in enumerate(part, start=1):
                nb = b * fd.from_int(-k)
                if k + 1 <= n:
                    new[k] = new[k] + nb
                elif not nb.is_exact_zero():
                    tail = max(tail, _term_sup(X, X.holes[i][0], -(k + 1), nb))
            holes.append(new)
        return AnalyticFunction(X, poly, holes, tail)

    def delta1(self) -> "AnalyticFunction":
        return _mul_by_T(self.ddT())

    def divide_by_T(self) -> "AnalyticFunction":
        return _div_by_T(self)

    def d_q(self, q: PAdicElement) -> "AnalyticFunction":
        qm1 = q - self.fd.one()
        if qm1.is_zero():
            raise PrecisionError("d_q undefined at q = 1")
        return _div_by_T(self.sigma_q(q) - self).scalar_div(qm1)

    def D_q(self, q: PAdicElement) -> "AnalyticFunction":
        return self.ddT().sigma_q(q)

    def delta_q(self, q: PAdicElement) -> "AnalyticFunction":
        return self.delta1().sigma_q(q)

    def substitute_T_power(self, p: int) -> "AnalyticFunction":
        """f(T^p) for domains centered at 0 whose holes sit at 0."""
        X = self.X
        fd = self.fd
        if not X.c0.is_zero() or any(not c.is_zero() for c, _ in X.holes):
            raise DomainError("T -> T^p substitution needs a domain centered at 0")
        M = self.M
        poly = [fd.zero()] * (M + 1)
        tail = self.tail_lognorm
        for k, a in enumerate(self.poly):
            if a.is_exact_zero():
                continue
            if p * k <= M:
                poly[p * k] = poly[p * k] + a
            else:
                tail = max(tail, _term_sup(X, X.c0, p * k, a))
        holes = []
        for i, part in enumerate(self.hole_parts):
            new = [fd.zero()] * len(part)
            for k, b in enumerate(part, start=1):
                if b.is_exact_zero():
                    continue
                if p * k <= len(part):
                    new[p * k - 1] = new[p * k - 1] + b
                else:
                    tail = max(tail, _term_sup(X, X.holes[i][0], -p * k, b))
            holes.append(new)
        return AnalyticFunction(X, poly, holes, tail)

    def frobenius_coefficients(self) -> "AnalyticFunction":
        """The declared coefficient Frobenius (identity lift) applied entrywise."""
        return AnalyticFunction(self.X, [c.frobenius() for c in self.poly],
                                [[c.frobenius() for c in h] for h in self.hole_parts],
                                self.tail_lognorm)

    def as_series_at(self, c: PAdicElement, M: int | None = None) -> DiskSeries:
        """Expansion around a rational c in X; principal parts become geometric
        series on D^-(c, |c - c_i|)."""
        if M is None:
            M = self.M
        if not self.X.contains(c):
            raise DomainError("expansion point outside the affinoid")
        fd = self.fd
        out = DiskSeries(self.X.c0, self.poly).recenter(c).truncate(M)
        for (ci, _), part in zip(self.X.holes, self.hole_parts):
            if not _active(part):
                continue
            dinv = (c - ci).inverse()
            base = [dinv]
            cur = dinv
            for _ in range(M):
                cur = -(cur * dinv)
                base.append(cur)
            basis = DiskSeries(c, base)       # (T - ci)^(-1) around c
            power = basis
            for k, b in enumerate(part, start=1):
                if not b.is_exact_zero():
                    out = out + power * b
                if k < len(part):
                    power = (power * basis).truncate(M)
        return out

    def __repr__(self):
        nh = sum(1 for h in self.hole_parts if _active(h))
        return f"AnalyticFunction(M={self.M}, active_holes={nh})"


# --- helpers ----------------------------------------------------------------------------


def _active(part) -> bool:
    return any(not c.is_exact_zero() for c in part)


def _finite(x):
    return x if x != NEG_INF else Fraction(0)


def _hole_at_zero(X: Affinoid) -> int:
    for i, (c, _) in enumerate(X.holes):
        if c.is_zero():
            return i
    raise DomainError("domain has no hole centered at 0")


def _term_sup(X: Affinoid, center: PAdicElement, n: int, coef: PAdicElement):
    """Sup norm over X of coef * (T - center)^n, n of either sign."""
    ln = coef.lognorm()
    if ln == NEG_INF:
        return NEG_INF
    best = NEG_INF
    for c, r in X.shilov_points():
        m = max(Fraction(r), (c - center).lognorm())
        best = max(best, ln + n * m)
    return best


def _mul_poly_poly(X, a, b, M):
    full = DiskSeries(X.c0, a).truncate(2 * M) * DiskSeries(X.c0, b).truncate(2 * M)
    tail = NEG_INF
    for k in range(M + 1, 2 * M + 1):
        tail = max(tail, _term_sup(X, X.c0, k, full.coeffs[k]))
    return AnalyticFunction(X, full.coeffs[: M + 1], None, tail).truncate(M)


def _mul_poly_hole(X, poly, i, part, M):
    """(polynomial part) x (principal part at hole i)."""
    fd = X.fd
    ci, _ = X.holes[i]
    p_at_hole = DiskSeries(X.c0, poly).recenter(ci) if not (X.c0 - ci).is_zero() \
        else DiskSeries(ci, poly)
    pos = [fd.zero()] * (M + 1)
    out_hole = [fd.zero()] * M
    tail = NEG_INF
    for k, b in enumerate(part, start=1):
        if b.is_exact_zero():
            continue
        for j, pj in enumerate(p_at_hole.coeffs):
            if pj.is_exact_zero():
                continue
            coef = b * pj
            d = j - k
            if d >= 0:
                pos[d] = pos[d] + coef
            elif -d <= M:
                out_hole[-d - 1] = out_hole[-d - 1] + coef
            else:
                tail = max(tail, _term_sup(X, ci, d, coef))
    out_poly = DiskSeries(ci, pos).recenter(X.c0) if not (X.c0 - ci).is_zero() \
        else DiskSeries(X.c0, pos)
    holes = [[fd.zero()] * M for _ in X.holes]
    holes[i] = out_hole
    return AnalyticFunction(X, out_poly.coeffs, holes, tail)


def _mul_hole_same(X, i, ha, hb, M):
    fd = X.fd
    ci, _ = X.holes[i]
    out = [fd.zero()] * M
    tail = NEG_INF
    for k1, a in enumerate(ha, start=1):
        if a.is_exact_zero():
            continue
        for k2, b in enumerate(hb, start=1):
            if b.is_exact_zero():
                continue
            k = k1 + k2
            coef = a * b
            if k <= M:
                out[k - 1] = out[k - 1] + coef
            else:
                tail = max(tail, _term_sup(X, ci, -k, coef))
    holes = [[fd.zero()] * M for _ in X.holes]
    holes[i] = out
    return AnalyticFunction(X, [fd.zero()] * (M + 1), holes, tail)


def _mul_hole_cross(X, i, ha, j, hb, M):
    """Principal parts at distinct holes, split by partial fractions:
    1/((T-a)(T-b)) = [1/(T-a) - 1/(T-b)] / (b - a)."""
    fd = X.fd
    a_c, _ = X.holes[i]
    b_c, _ = X.holes[j]
    inv_ba = (b_c - a_c).inverse()
    memo: dict[tuple[int, int], tuple[dict, dict]] = {}

    def split(k1: int, k2: int):
        key = (k1, k2)
        if key in memo:
            return memo[key]
        if k1 == 1 and k2 == 1:
            res = ({1: -inv_ba}, {1: inv_ba})
        elif k1 > 1:
            pa, pb = split(k1 - 1, k2)
            ra: dict[int, PAdicElement] = {}
            rb: dict[int, PAdicElement] = {}
            for n, c in pa.items():        # times (T-a)^(-1): order bumps
                ra[n + 1] = ra.get(n + 1, fd.zero()) + c
            for n, c in pb.items():        # (T-a)^(-1)(T-b)^(-n): recurse
                xa, xb = split(1, n)
                _acc(ra, xa, c, fd)
                _acc(rb, xb, c, fd)
            res = (ra, rb)
        else:
            pa, pb = split(1, k2 - 1)
            ra, rb = {}, {}
            for n, c in pb.items():
                rb[n + 1] = rb.get(n + 1, fd.zero()) + c
            for n, c in pa.items():
                xa, xb = split(n, 1)
                _acc(ra, xa, c, fd)
                _acc(rb, xb, c, fd)
            res = (ra, rb)
        memo[key] = res
        return res

    out_a = [fd.zero()] * M
    out_b = [fd.zero()] * M
    tail = NEG_INF
    for k1, ca in enumerate(ha, start=1):
        if ca.is_exact_zero():
            continue
        for k2, cb in enumerate(hb, start=1):
            if cb.is_exact_zero():
                continue
            pa, pb = split(k1, k2)
            coef = ca * cb
            for n, c in pa.items():
                v = coef * c
                if n <= M:
                    out_a[n - 1] = out_a[n - 1] + v
                else:
                    tail = max(tail, _term_sup(X, a_c, -n, v))
            for n, c in pb.items():
                v = coef * c
                if n <= M:
                    out_b[n - 1] = out_b[n - 1] + v
                else:
                    tail = max(tail, _term_sup(X, b_c, -n, v))
    holes = [[fd.zero()] * M for _ in X.holes]
    holes[i] = out_a
    holes[j] = out_b
    return AnalyticFunction(X, [fd.zero()] * (M + 1), holes, tail)


def _acc(target: dict, src: dict, mult, fd):
    for m, d in src.items():
        target[m] = target.get(m, fd.zero()) + mult * d


def _reexpand_principal(X, i, part, eta, M, scale):
    """sum_k b_k scale^k ((T - ci) + eta)^(-k) with |eta| < R_i:
    (u + eta)^(-k) = sum_j C(-k, j) eta^j u^(-k-j)."""
    fd = X.fd
    ci = X.holes[i][0]
    out = [fd.zero()] * M
    tail = NEG_INF
    spow = fd.one()
    for k, b in enumerate(part, start=1):
        spow = spow * scale
        if b.is_exact_zero():
            continue
        coef = b * spow
        binom = 1           # C(-k, j) = (-1)^j C(k+j-1, j)
        etaj = fd.one()
        for jj in range(0, M - k + 1):
            term = coef * fd.from_int(binom) * etaj
            out[k + jj - 1] = out[k + jj - 1] + term
            binom = -binom * (k + jj) // (jj + 1)
            etaj = etaj * eta
        # the first dropped term dominates the geometric remainder
        drop = coef * fd.from_int(abs(binom)) * etaj
        if not drop.is_exact_zero() and not drop.is_zero():
            tail = max(tail, _term_sup(X, ci, -(M + 1), drop))
    holes = [[fd.zero()] * M for _ in X.holes]
    holes[i] = out
    return AnalyticFunction(X, [fd.zero()] * (M + 1), holes, tail)


def _mul_by_T(f: AnalyticFunction) -> AnalyticFunction:
    """T * f: T = (T - c) + c against each part; exact except the top poly term."""
    X = f.X
    fd = f.fd
    M = f.M
    poly = DiskSeries(X.c0, f.poly)
    shifted = DiskSeries(X.c0, [fd.zero()] + poly.coeffs[:-1])
    tail = f.tail_lognorm
    top = poly.coeffs[-1]
    if not top.is_exact_zero():
        tail = max(tail, _term_sup(X, X.c0, M + 1, top))
    out_poly = (shifted + poly * X.c0).coeffs
    holes = []
    for (ci, _), part in zip(X.holes, f.hole_parts):
        new = [fd.zero()] * len(part)
        for k, b in enumerate(part, start=1):
            if b.is_exact_zero():
                continue
            # T (T-ci)^(-k) = (T-ci)^(-(k-1)) + ci (T-ci)^(-k)
            new[k - 1] = new[k - 1] + b * ci
            if k == 1:
                out_poly[0] = out_poly[0] + b
            else:
                new[k - 2] = new[k - 2] + b
        holes.append(new)
    return AnalyticFunction(X, out_poly, holes, tail)


def _div_by_T(f: AnalyticFunction) -> AnalyticFunction:
    """f / T.  Uses the hole at 0 if present; otherwise the accumulated
    residue at 0, which equals f(0), must vanish at precision."""
    X = f.X
    fd = f.fd
    M = f.M
    try:
        zero_idx = _hole_at_zero(X)
    except DomainError:
        zero_idx = None
    tail = f.tail_lognorm
    out_poly = DiskSeries.zero(fd, X.c0, M)
    out_holes = [[fd.zero()] * M for _ in X.holes]
    t_inv = fd.zero()

    poly = DiskSeries(X.c0, f.poly)
    if any(not c.is_exact_zero() for c in f.poly):
        if X.c0.is_zero():
            p0 = poly.coeffs[0]
            out_poly = out_poly + DiskSeries(X.c0, poly.coeffs[1:] + [fd.zero()])
        else:
            p0 = poly.evaluate(fd.zero())
            rest = (poly - DiskSeries.constant(p0, X.c0, M)).divide_by_T_exact()
            out_poly = out_poly + rest
        t_inv = t_inv + p0

    for i, ((ci, _), part) in enumerate(zip(X.holes, f.hole_parts)):
        if not _active(part):
            continue
        if ci.is_zero():
            for k, b in enumerate(part, start=1):
                if b.is_exact_zero():
                    continue
                if k + 1 <= M:
                    out_holes[i][k] = out_holes[i][k] + b
                else:
                    tail = max(tail, _term_sup(X, ci, -(k + 1), b))
            continue
        ciinv = ci.inverse()
        # u_k := T^(-1)(T-ci)^(-k) = sum_{j=1..k} (-1)^(k-j) ci^(j-k-1) (T-ci)^(-j)
        #        + (-1)^k ci^(-k) T^(-1)
        for k, b in enumerate(part, start=1):
            if b.is_exact_zero():
                continue
            sign = fd.one()
            cpow = ciinv
            for jx in range(k, 0, -1):
                out_holes[i][jx - 1] = out_holes[i][jx - 1] + b * sign * cpow
                sign = -sign
                cpow = cpow * ciinv
            t_inv = t_inv + b * sign * (cpow * ci)

    if zero_idx is not None:
        out_holes[zero_idx][0] = out_holes[zero_idx][0] + t_inv
    elif not t_inv.is_zero():
        raise DomainError(
            "division by T leaves a pole at 0 and the domain has no hole there")

    return AnalyticFunction(X, out_poly.coeffs, out_holes, tail)


def invert_unit(f: AnalyticFunction, M: int | None = None) -> AnalyticFunction:
    """1/f for functions with a dominant constant term: f = f0 (1 + h) with
    sup|h| < 1 at every Shilov point, inverted by the Neumann series."""
    fd = f.fd
    if M is None:
        M = f.M
    f0 = f.poly[0]
    if f0.is_zero():
        raise PrecisionError("invert_unit: constant term is zero at precision")
    h = (f - AnalyticFunction.constant(f.X, f0, f.M)) * f0.inverse()
    hn = h.sup_lognorm()
    if not hn < 0:
        raise PrecisionError("invert_unit: no dominant constant term (sup|h| >= 1)")
    acc = AnalyticFunction.constant(f.X, fd.one(), M)
    term = AnalyticFunction.constant(f.X, fd.one(), M)
    n_terms = (int(fd.N / float(-hn)) + 2) if hn != NEG_INF else 1
    for _ in range(min(n_terms, 4 * M + 8)):
        term = term * (-h)
        if term.min_coeff_valuation() == POS_INF:
            break
        acc = acc + term
    return acc * f0.inverse()
