"""Capped-precision arithmetic in Q_p and in the cyclotomic tower K_s = Q_p(zeta_{p^(s+1)}).

Elements are stored as  pi^vw * u(pi)  where pi = zeta - 1 is the Eisenstein
uniformizer of K_s over Q_p, e = p^s(p-1) is the ramification index, vw is an
integer count of pi-powers (so the valuation vw/e is exact), and u is a
polynomial in pi of degree < e whose constant term is a p-unit, with
coefficients known modulo p^relN.

Normalizing by the uniformizer instead of by p makes multiplication lossless:
unit parts multiply to unit parts and no digits are discarded.  Subtractive
cancellation still surfaces as a genuine loss of relative digits.  Exact
integer and rational inputs are constructed with guard digits above the
declared precision so that long exact computations still certify the full
precision_N digits.
"""

from __future__ import annotations

from fractions import Fraction

NEG_INF = float("-inf")
POS_INF = float("inf")

MAX_EXTENSION_LEVEL = 2
DEFAULT_ROOT_BOUND_EXP = 8


class PrecisionError(ArithmeticError):
    """Raised when a result is indistinguishable from zero at working precision."""


class FieldError(ValueError):
    """Raised for unsupported field parameters."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_val(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of integer zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _cyclotomic_eisenstein(p: int, s: int) -> tuple[int, ...]:
    """Coefficients of Phi_{p^(s+1)}(1+X), monic of degree p^s(p-1), Eisenstein at p."""
    ps = p**s
    one_plus_x = [1, 1]
    step = [1]
    for _ in range(ps):
        step = _poly_mul(step, one_plus_x)
    acc = [1]
    total = [0] * (ps * (p - 1) + 1)
    for j in range(p):
        for k, c in enumerate(acc):
            total[k] += c
        if j < p - 1:
            acc = _poly_mul(acc, step)
    assert total[-1] == 1 and total[0] == p
    return tuple(total)


class FieldDescriptor:
    """Q_p (extension_level -1) or K_s = Q_p(zeta_{p^(s+1)}) at a fixed digit precision."""

    __slots__ = ("p", "s", "N", "e", "guard", "modulus", "_w_inv",
                 "_pow_cache", "_pi_cache", "root_bound_exp")

    def __init__(self, p: int, s: int, N: int, root_bound_exp: int = DEFAULT_ROOT_BOUND_EXP):
        if not _is_prime(p):
            raise FieldError(f"p = {p} is not prime")
        if N < 1:
            raise FieldError(f"precision N = {N} must be >= 1")
        if s < -1:
            raise FieldError(f"extension level s = {s} must be >= -1")
        if s > MAX_EXTENSION_LEVEL:
            raise FieldError(
                f"extension level s = {s} unsupported (cap is {MAX_EXTENSION_LEVEL})")
        self.p = p
        self.s = s
        self.N = N
        self.root_bound_exp = root_bound_exp
        if s == -1:
            self.e = 1
            self.modulus = (0, 1)
        else:
            self.e = p**s * (p - 1)
            self.modulus = _cyclotomic_eisenstein(p, s)
        self.guard = 2 * self.e + 8
        self._pow_cache = {}
        self._pi_cache = {}
        self._w_inv = None

    @property
    def cap(self) -> int:
        return self.N + self.guard

    def ppow(self, k: int) -> int:
        c = self._pow_cache.get(k)
        if c is None:
            c = self.p**k
            self._pow_cache[k] = c
        return c

    def w_inverse(self, relN: int):
        """Inverse of the unit w with pi^e = -p w; w = (E - X^e - p)/p shifted:
        w = 1 + (E_1/p) pi + ... + (E_{e-1}/p) pi^{e-1}."""
        if self._w_inv is None or self._w_inv[0] < relN:
            top = self.cap
            w = [1] + [self.modulus[i] // self.p for i in range(1, self.e)]
            self._w_inv = (top, _unit_inverse(self, w, top))
        _, inv = self._w_inv
        mod = self.ppow(relN)
        return [c % mod for c in inv]

    # --- canonical elements -------------------------------------------------------

    def zero(self) -> "PAdicElement":
        return PAdicElement(self, None, (0,) * self.e, 0)

    def one(self) -> "PAdicElement":
        return self.from_int(1)

    def _from_p_power_unit(self, v: int, u: int) -> "PAdicElement":
        """The element p^v u with u a p-unit integer: p^v = (-1)^v pi^(ev) w^(-v)."""
        cap = self.cap
        mod = self.ppow(cap)
        if self.e == 1:
            return PAdicElement(self, v, (u % mod,), cap)
        vec = [u % mod] + [0] * (self.e - 1)
        if v:
            if v > 0:
                corr = _unit_pow(self, self.w_inverse(cap), v, cap)
            else:
                w = [1] + [self.modulus[i] // self.p for i in range(1, self.e)]
                corr = _unit_pow(self, w, -v, cap)
            vec = _reduce_mod_modulus(self, _poly_mul(vec, corr), cap)
            if v % 2:
                vec = [(-c) % mod for c in vec]
            vec = [c % mod for c in vec]
        return PAdicElement(self, self.e * v, tuple(vec), cap)

    def from_int(self, n: int) -> "PAdicElement":
        if n == 0:
            return self.zero()
        v = _int_val(n, self.p)
        return self._from_p_power_unit(v, n // self.ppow(v))

    def from_fraction(self, x: Fraction | int) -> "PAdicElement":
        if isinstance(x, int):
            return self.from_int(x)
        num, den = x.numerator, x.denominator
        if num == 0:
            return self.zero()
        vn = _int_val(num, self.p)
        vd = _int_val(den, self.p)
        num //= self.ppow(vn)
        den //= self.ppow(vd)
        inv = pow(den, -1, self.ppow(self.cap))
        return self._from_p_power_unit(vn - vd, num * inv)

    def pi(self, m: int | None = None) -> "PAdicElement":
        """pi_m = zeta_{p^(m+1)} - 1 inside K_s; defaults to the top uniformizer pi_s."""
        if self.s == -1:
            raise FieldError("pi_m lives in an extension field, not Q_p")
        if m is None:
            m = self.s
        if not 0 <= m <= self.s:
            raise FieldError(f"pi_{m} is not an element of K_{self.s}")
        cached = self._pi_cache.get(m)
        if cached is not None:
            return cached
        top = PAdicElement(self, 1, (1,) + (0,) * (self.e - 1), self.cap)
        el = top
        if m < self.s:
            zeta = top + self.one()
            el = zeta**(self.p ** (self.s - m)) - self.one()
        self._pi_cache[m] = el
        return el

    def zeta(self, order_exp: int | None = None) -> "PAdicElement":
        """Primitive p^order_exp-th root of unity (defaults to p^(s+1))."""
        if order_exp is None:
            order_exp = self.s + 1
        return self.pi(order_exp - 1) + self.one()

    @property
    def omega_logp(self) -> Fraction:
        """log_p of omega = |p|^(1/(p-1)), the radius of convergence of exp."""
        return Fraction(-1, self.p - 1)

    def __repr__(self):
        base = "Q_%d" % self.p if self.s == -1 else \
            "Q_%d(zeta_%d)" % (self.p, self.p ** (self.s + 1))
        return f"FieldDescriptor({base}, N={self.N})"

    def __eq__(self, other):
        return (isinstance(other, FieldDescriptor)
                and (self.p, self.s, self.N) == (other.p, other.s, other.N))

    def __hash__(self):
        return hash((self.p, self.s, self.N))


def make_field(p: int, s: int, N: int) -> FieldDescriptor:
    return FieldDescriptor(p, s, N)


def _reduce_mod_modulus(fd: FieldDescriptor, vec, relN: int):
    """Reduce a polynomial in pi of degree >= e modulo the minimal polynomial."""
    e = fd.e
    mod = fd.modulus
    vec = list(vec)
    pmod = fd.ppow(relN + e)
    for d in range(len(vec) - 1, e - 1, -1):
        c = vec[d]
        if c:
            vec[d] = 0
            for i in range(e):
                vec[d - e + i] = (vec[d - e + i] - c * mod[i]) % pmod
    return vec[:e]


def _pi_valuation(fd: FieldDescriptor, vec, relN: int) -> int | None:
    """min_i (e v_p(c_i) + i) over nonzero coefficients; None if all vanish."""
    best = None
    mod = fd.ppow(relN)
    for i, c in enumerate(vec):
        c %= mod
        if c:
            t = fd.e * _int_val(c, fd.p) + i
            if best is None or t < best:
                best = t
                if t == i:
                    break
    return best


def _divide_vec_by_pi(fd: FieldDescriptor, vec, relN: int):
    """vec/pi for a vector of pi-valuation >= 1: multiply by -pi^(e-1) w^(-1)
    and divide by p.  Returns (vec', relN - 1)."""
    e = fd.e
    shifted = [0] * (e - 1) + list(vec)           # vec * X^(e-1)
    shifted = _reduce_mod_modulus(fd, shifted, relN)
    winv = fd.w_inverse(relN)
    prod = _reduce_mod_modulus(fd, _poly_mul(shifted, winv), relN)
    mod = fd.ppow(relN)
    out = []
    for c in prod:
        c = (-c) % mod
        out.append(c // fd.p)
    return out, relN - 1


def _normalized(fd: FieldDescriptor, vw: int, vec, relN: int) -> "PAdicElement":
    """Canonical form: strip the pi-valuation out of the vector into vw."""
    if relN <= 0:
        return PAdicElement(fd, vw + fd.e * max(relN, 0), (0,) * fd.e, 0)
    mod = fd.ppow(relN)
    vec = [c % mod for c in vec]
    t = _pi_valuation(fd, vec, relN)
    if t is None:
        return PAdicElement(fd, vw + fd.e * relN, (0,) * fd.e, 0)
    if t:
        k, r = divmod(t, fd.e)
        if k:
            q = fd.ppow(k)
            vec = [c // q for c in vec]
            relN -= k
            vw += fd.e * k
            if fd.e > 1 and relN > 0:
                # dividing out p^k means multiplying by ((-w)^(-1))^k in pi-units
                corr = _unit_pow(fd, fd.w_inverse(relN), k, relN)
                vec = _reduce_mod_modulus(fd, _poly_mul(vec, corr), relN)
                if k % 2:
                    m2 = fd.ppow(relN)
                    vec = [(-c) % m2 for c in vec]
        for _ in range(r):
            vec, relN = _divide_vec_by_pi(fd, vec, relN)
            vw += 1
        if relN <= 0:
            return PAdicElement(fd, vw + fd.e * max(relN, 0), (0,) * fd.e, 0)
        mod = fd.ppow(relN)
        vec = [c % mod for c in vec]
    if relN > fd.cap:
        mod = fd.ppow(fd.cap)
        vec = [c % mod for c in vec]
        relN = fd.cap
    return PAdicElement(fd, vw, tuple(vec), relN)


class PAdicElement:
    """pi^vw times a unit polynomial in pi known to relN digits.

    vw is None for the exact zero.  An all-zero vector with relN == 0 marks an
    element indistinguishable from zero modulo pi^vw.
    """

    __slots__ = ("fd", "vw", "vec", "relN")

    def __init__(self, fd, vw, vec, relN):
        self.fd = fd
        self.vw = vw
        self.vec = vec
        self.relN = relN

    # --- predicates ----------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.vw is None

    def is_zero(self) -> bool:
        """True for the exact zero and for zero-at-working-precision."""
        return self.relN == 0

    @property
    def abs_prec(self):
        """Known modulo p^abs_prec times the ring of integers (p-unit scale)."""
        if self.vw is None:
            return POS_INF
        return Fraction(self.vw, self.fd.e) + self.relN

    # --- valuation and norm ----------------------------------------------------

    def valuation(self, exact: bool = True) -> Fraction | float:
        """Exact v_p (v_p(p) = 1); +inf for the exact zero.  Zero-at-precision
        raises PrecisionError under exact=True, else returns the known bound."""
        if self.vw is None:
            return POS_INF
        if self.relN == 0:
            if exact:
                raise PrecisionError(
                    f"element is 0 mod pi^{self.vw}: valuation exhausted at precision")
            return Fraction(self.vw, self.fd.e)
        return Fraction(self.vw, self.fd.e)

    def min_valuation(self) -> Fraction | float:
        """Exact valuation if nonzero, else the certified lower bound."""
        if self.vw is None:
            return POS_INF
        return Fraction(self.vw, self.fd.e)

    def lognorm(self) -> Fraction | float:
        """log_p |x|; -inf when the element is zero at precision."""
        if self.relN == 0:
            return NEG_INF
        return -Fraction(self.vw, self.fd.e)

    # --- ring operations ----------------------------------------------------------

    def _check(self, other):
        if self.fd != other.fd:
            raise FieldError("elements live in different fields")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.fd.from_int(other)
        self._check(other)
        fd = self.fd
        e = fd.e
        if self.vw is None:
            return other
        if other.vw is None:
            return self
        a_abs = self.vw + e * self.relN       # absolute precision in 1/e units
        b_abs = other.vw + e * other.relN
        m = min(self.vw, other.vw)
        t_err = min(a_abs, b_abs) - m
        if t_err <= 0:
            return PAdicElement(fd, min(a_abs, b_abs), (0,) * e, 0)
        d1, d2 = self.vw - m, other.vw - m
        if d1 % e == 0 and d2 % e == 0:
            relN_raw = min(self.relN + d1 // e, other.relN + d2 // e)
        else:
            relN_raw = max((t_err - (e - 1)) // e, 1)
        va = _shift_vec(fd, self.vec, d1, relN_raw) if self.relN else [0] * e
        vb = _shift_vec(fd, other.vec, d2, relN_raw) if other.relN else [0] * e
        vec = [x + y for x, y in zip(va, vb)]
        out = _normalized(fd, m, vec, relN_raw)
        # never claim more than the certified absolute precision
        cap = min(a_abs, b_abs)
        if out.vw is not None and out.relN and out.vw + e * out.relN > cap:
            excess = out.vw + e * out.relN - cap
            newrel = out.relN - (excess + e - 1) // e
            if newrel <= 0:
                return PAdicElement(fd, cap, (0,) * e, 0)
            mod = fd.ppow(newrel)
            out = PAdicElement(fd, out.vw, tuple(c % mod for c in out.vec), newrel)
        elif out.vw is not None and out.relN == 0 and out.vw > cap:
            out = PAdicElement(fd, cap, (0,) * e, 0)
        return out

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.vw is None or self.relN == 0:
            return self
        mod = self.fd.ppow(self.relN)
        return PAdicElement(self.fd, self.vw, tuple((-c) % mod for c in self.vec), self.relN)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.fd.from_int(other)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return (self.__neg__()).__add__(self.fd.from_int(other))

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.fd.from_int(other)
        self._check(other)
        fd = self.fd
        if self.vw is None or other.vw is None:
            return fd.zero()
        if self.relN == 0 or other.relN == 0:
            return PAdicElement(fd, self.vw + other.vw, (0,) * fd.e, 0)
        relN = min(self.relN, other.relN)
        if fd.e == 1:
            vec = (self.vec[0] * other.vec[0]) % fd.ppow(relN)
            return PAdicElement(fd, self.vw + other.vw, (vec,), relN)
        raw = _poly_mul(list(self.vec), list(other.vec))
        vec = _reduce_mod_modulus(fd, raw, relN)
        # unit times unit stays a unit: no renormalization needed
        mod = fd.ppow(relN)
        return PAdicElement(fd, self.vw + other.vw, tuple(c % mod for c in vec), relN)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "PAdicElement":
        fd = self.fd
        if self.relN == 0:
            raise PrecisionError("cannot invert an element that is zero at precision")
        if fd.e == 1:
            inv = pow(self.vec[0], -1, fd.ppow(self.relN))
            return PAdicElement(fd, -self.vw, (inv,), self.relN)
        inv_vec = _unit_inverse(fd, list(self.vec), self.relN)
        return PAdicElement(fd, -self.vw, tuple(inv_vec), self.relN)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.fd.from_int(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse()**(-n)
        result = self.fd.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # --- comparisons --------------------------------------------------------------

    def equals(self, other) -> bool:
        """Agreement at working precision (the difference is zero at precision)."""
        if isinstance(other, int):
            other = self.fd.from_int(other)
        return (self - other).is_zero()

    def __repr__(self):
        if self.vw is None:
            return "0(exact)"
        if self.relN == 0:
            return f"O(pi^{self.vw})"
        if self.fd.e == 1:
            return f"p^{self.vw}*{self.vec[0]} (mod p^{self.relN})"
        return f"pi^{self.vw}*{list(self.vec)} (mod p^{self.relN})"

    def frobenius(self) -> "PAdicElement":
        """Coefficient Frobenius.  The residue field of K_s is F_p, so the
        identity is the declared lift of the p-power map; kept as a per-field hook."""
        return self


def _unit_pow(fd: FieldDescriptor, base, k: int, relN: int):
    """base(pi)^k modulo (E, p^relN) for k >= 0."""
    out = [1] + [0] * (fd.e - 1)
    b = list(base)
    while k:
        if k & 1:
            out = _reduce_mod_modulus(fd, _poly_mul(out, b), relN)
        b = _reduce_mod_modulus(fd, _poly_mul(b, b), relN)
        k >>= 1
    return out


def _shift_vec(fd: FieldDescriptor, vec, d: int, relN: int):
    """vec * pi^d reduced modulo the minimal polynomial, coefficients mod p^relN."""
    if d == 0:
        mod = fd.ppow(relN)
        return [c % mod for c in vec]
    e = fd.e
    k, r = divmod(d, e)
    mod = fd.ppow(relN)
    out = list(vec)
    if r:
        out = _reduce_mod_modulus(fd, [0] * r + out, relN)
    if k:
        # pi^(ek) = (-p w)^k
        w = [1] + [fd.modulus[i] // fd.p for i in range(1, e)]
        wk = [1] + [0] * (e - 1)
        base = w
        kk = k
        while kk:
            if kk & 1:
                wk = _reduce_mod_modulus(fd, _poly_mul(wk, base), relN)
            base = _reduce_mod_modulus(fd, _poly_mul(base, base), relN)
            kk >>= 1
        out = _reduce_mod_modulus(fd, _poly_mul(out, wk), relN)
        scale = fd.ppow(k) if k % 2 == 0 else -fd.ppow(k)
        out = [(c * scale) % mod for c in out]
    return [c % mod for c in out]


def _unit_inverse(fd: FieldDescriptor, vec, relN: int):
    """Inverse of a unit vector (unit constant term) mod (E, p^relN)."""
    p = fd.p
    e = fd.e
    c0 = vec[0] % p
    inv0 = pow(c0, -1, p)
    b = [inv0] + [0] * (e - 1)
    for i in range(1, e):                     # power-series inversion mod (p, X^e)
        acc = 0
        for j in range(1, i + 1):
            acc += vec[j] * b[i - j]
        b[i] = (-inv0 * acc) % p
    prec = 1
    while prec < relN:                        # Newton lifting doubles accuracy
        prec = min(2 * prec, relN)
        mod = fd.ppow(prec)
        vb = _reduce_mod_modulus(fd, _poly_mul(list(vec), b), prec)
        two_minus = [(-c) % mod for c in vb]
        two_minus[0] = (two_minus[0] + 2) % mod
        b = _reduce_mod_modulus(fd, _poly_mul(b, two_minus), prec)
        b = [c % mod for c in b]
    return b


# --- classification of q ------------------------------------------------------------


class QClassification:
    """Where q sits relative to the unit circle and the disk D^-(1,1)."""

    __slots__ = ("label", "norm_logp", "qm1_logp", "root_order")

    def __init__(self, label, norm_logp, qm1_logp, root_order):
        self.label = label
        self.norm_logp = norm_logp
        self.qm1_logp = qm1_logp
        self.root_order = root_order

    def __repr__(self):
        if self.label == "root_of_unity":
            return f"root_of_unity({self.root_order})"
        return self.label


def q_membership(q: PAdicElement, root_bound_exp: int | None = None) -> QClassification:
    """Classify q: unit norm, membership in D^-(1,1), p-power root of unity.

    Root detection tests q^(p^k) = 1 at working precision for p^k up to the
    configured bound; best-effort, and the bound is part of the answer."""
    fd = q.fd
    if root_bound_exp is None:
        root_bound_exp = fd.root_bound_exp
    norm_logp = q.lognorm()
    qm1 = q - fd.one()
    qm1_logp = qm1.lognorm()
    if norm_logp != 0:
        return QClassification("not_unit_norm", norm_logp, qm1_logp, None)
    if qm1.is_zero():
        return QClassification("root_of_unity", norm_logp, qm1_logp, 1)
    x = q
    for k in range(1, root_bound_exp + 1):
        x = x**fd.p
        if (x - fd.one()).is_zero():
            return QClassification("root_of_unity", norm_logp, qm1_logp, fd.p**k)
    if qm1_logp < 0:
        return QClassification("in_D(1,1)", norm_logp, qm1_logp, None)
    return QClassification("generic", norm_logp, qm1_logp, None)
