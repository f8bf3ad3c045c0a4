"""Capped-precision arithmetic: Z/p^N integers, truncated power series in
t = q - 1, certified exact division, and linear algebra over Z/p^N.

Every value carries its own precision metadata.  Binary operations take
the minimum of the operands' precisions; genuinely lossy operations
(division by p-powers, by t-powers, or by distinguished polynomials)
reduce the stated precision by the honest amount.  Division never
guesses: when a quotient is returned, the remainder has been checked to
vanish at the certified precision, and a nonzero remainder raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class DivisionCertificateError(Exception):
    """An allegedly exact division left a nonzero remainder."""


class PrecisionError(Exception):
    """Not enough certified digits to carry out the requested operation."""


def vp_int(x: int, p: int):
    """p-adic valuation of an integer; None for 0."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# PadicInt
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicInt:
    """Element of Z/p^N with N = prec absolute digits."""

    p: int
    prec: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p**self.prec)

    def _join(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        if other.p != self.p:
            raise ValueError("mixed primes")
        return other, min(self.prec, other.prec)

    def __add__(self, other):
        other, n = self._join(other)
        return PadicInt(self.p, n, self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, self.prec, -self.residue)

    def __sub__(self, other):
        other, n = self._join(other)
        return PadicInt(self.p, n, self.residue - other.residue)

    def __mul__(self, other):
        other, n = self._join(other)
        return PadicInt(self.p, n, self.residue * other.residue)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        return PadicInt(self.p, self.prec, pow(self.residue, k, self.p**self.prec))

    def __eq__(self, other):
        if isinstance(other, int):
            other = PadicInt(self.p, self.prec, other)
        n = min(self.prec, other.prec)
        return (self.residue - other.residue) % self.p**n == 0

    def __hash__(self):
        return hash((self.p, self.prec, self.residue))

    def vp(self):
        """Valuation, or None meaning >= prec."""
        if self.residue % self.p**self.prec == 0:
            return None
        return vp_int(self.residue, self.p)

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def unit_inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        return PadicInt(self.p, self.prec, pow(self.residue, -1, self.p**self.prec))

    def divide_p_pow(self, a: int) -> "PadicInt":
        if self.residue % self.p**min(a, self.prec) != 0:
            raise DivisionCertificateError(f"not divisible by p^{a}")
        if self.prec <= a:
            raise PrecisionError("no digits left after division")
        return PadicInt(self.p, self.prec - a, self.residue // self.p**a)

    def reduce_prec(self, n: int) -> "PadicInt":
        return PadicInt(self.p, min(self.prec, n), self.residue)

    def render(self) -> str:
        return str(self.residue)

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.prec})"


def teichmuller(p: int, e: int, prec: int) -> PadicInt:
    """The unique (p-1)-st root of unity congruent to e mod p.

    Computed by the contracting Frobenius iteration x -> x^p.
    """
    if e % p == 0:
        raise ValueError("no multiplicative lift of 0")
    mod = p**prec
    x = e % mod
    for _ in range(prec + 1):
        x = pow(x, p, mod)
    return PadicInt(p, prec, x)


def binomial_padic(p: int, prec: int, u, n: int) -> int:
    """C(u, n) mod p^prec for u an integer or PadicInt.

    For a PadicInt the residue lift must carry at least
    prec + v_p(n!) digits for the answer to be certified.
    """
    if n == 0:
        return 1 % p**prec
    if isinstance(u, PadicInt):
        need = prec + vp_factorial(p, n)
        if u.prec < need:
            raise PrecisionError(
                f"need exponent mod p^{need} to certify C(u,{n}) mod p^{prec}")
        r = u.residue
    else:
        r = u
    if r >= 0 and not isinstance(u, PadicInt) and r >= n:
        return math.comb(r, n) % p**prec
    ff = 1
    for i in range(n):
        ff *= r - i
    q, rem = divmod(ff, math.factorial(n))
    if rem:
        raise ArithmeticError("falling factorial not divisible by n!")
    return q % p**prec


def vp_factorial(p: int, n: int) -> int:
    v, q = 0, n
    while q:
        q //= p
        v += q
    return v


# ---------------------------------------------------------------------------
# TruncSeries: (Z/p^N)[[t]] / (t^M), with q = 1 + t
# ---------------------------------------------------------------------------


class TruncSeries:
    """Truncated power series in t = q - 1 with capped p-precision."""

    __slots__ = ("p", "N", "M", "c")

    def __init__(self, p: int, N: int, M: int, coeffs: Sequence[int]):
        if N < 1 or M < 1:
            raise ValueError("need N >= 1 and M >= 1")
        self.p = p
        self.N = N
        self.M = M
        mod = p**N
        cs = [x % mod for x in coeffs[:M]]
        cs.extend([0] * (M - len(cs)))
        self.c = cs

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(p, N, M):
        return TruncSeries(p, N, M, [])

    @staticmethod
    def const(p, N, M, value: int):
        return TruncSeries(p, N, M, [value])

    @staticmethod
    def one(p, N, M):
        return TruncSeries.const(p, N, M, 1)

    @staticmethod
    def t_power(p, N, M, k: int):
        return TruncSeries(p, N, M, [0] * k + [1])

    @staticmethod
    def q_power(p, N, M, k):
        """q^k = (1+t)^k for k an integer or PadicInt.

        For a p-adic exponent the binomials are generated by the
        iteration C(k, n+1) = C(k, n)(k - n)/(n + 1) carried out
        modularly, with the honest digit loss v_p(n!) checked against
        the precision of the exponent.
        """
        if isinstance(k, int) and k >= 0:
            cs = [math.comb(k, n) for n in range(min(M, k + 1))]
            return TruncSeries(p, N, M, cs)
        if isinstance(k, int):
            cs, c = [], 1
            for n in range(M):
                cs.append(c)
                c = c * (k - n) // (n + 1)
            return TruncSeries(p, N, M, cs)
        need = N + vp_factorial(p, max(M - 1, 1))
        if k.prec < need:
            raise PrecisionError(
                f"need exponent mod p^{need} to certify (1+t)^u to t^{M}")
        mod = p**k.prec
        cs, c, r = [1], 1 % mod, k.residue % mod
        for n in range(M - 1):
            c = c * ((r - n) % mod) % mod
            dv = n + 1
            v = vp_int(dv, p) or 0
            if v:
                if c % p**v:
                    raise ArithmeticError("binomial iteration lost exactness")
                c //= p**v
                dv //= p**v
            c = c * pow(dv, -1, mod) % mod
            cs.append(c)
        return TruncSeries(p, N, M, cs)

    @staticmethod
    def from_q_poly(p, N, M, qcoeffs: dict):
        """Sum of c * q^e over the (possibly huge or negative) exponents e."""
        out = TruncSeries.zero(p, N, M)
        for e, coef in qcoeffs.items():
            out = out + TruncSeries.q_power(p, N, M, e) * coef
        return out

    @staticmethod
    def q_analogue(p, N, M, n: int, base: int = 1):
        """[n]_{q^base} as a series."""
        mod = p**N
        cs = [0] * M
        for i in range(n):
            k = base * i
            for j in range(min(M, k + 1)):
                cs[j] = (cs[j] + math.comb(k, j)) % mod
        return TruncSeries(p, N, M, cs)

    @staticmethod
    def d_series(p, N, M, alpha: int):
        """[p]_{q^(p^alpha)}, the distinguished element."""
        return TruncSeries.q_analogue(p, N, M, p, p**alpha)

    # -- basic ring ops --------------------------------------------------------

    def _join(self, other):
        if isinstance(other, int):
            other = TruncSeries.const(self.p, self.N, self.M, other)
        if other.p != self.p:
            raise ValueError("mixed primes")
        return other, min(self.N, other.N), min(self.M, other.M)

    def __add__(self, other):
        other, N, M = self._join(other)
        mod = self.p**N
        return TruncSeries(self.p, N, M,
                           [(self.c[i] + other.c[i]) % mod for i in range(M)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.p, self.N, self.M, [-x for x in self.c])

    def __sub__(self, other):
        other, N, M = self._join(other)
        mod = self.p**N
        return TruncSeries(self.p, N, M,
                           [(self.c[i] - other.c[i]) % mod for i in range(M)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            mod = self.p**self.N
            return TruncSeries(self.p, self.N, self.M,
                               [(x * other) % mod for x in self.c])
        other, N, M = self._join(other)
        mod = self.p**N
        out = [0] * M
        for i, a in enumerate(self.c[:M]):
            if a == 0:
                continue
            for j in range(min(M - i, len(other.c))):
                b = other.c[j]
                if b:
                    out[i + j] = (out[i + j] + a * b) % mod
        return TruncSeries(self.p, N, M, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        out = TruncSeries.one(self.p, self.N, self.M)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        other, N, M = self._join(other)
        mod = self.p**N
        return all((self.c[i] - other.c[i]) % mod == 0 for i in range(M))

    def is_zero(self) -> bool:
        mod = self.p**self.N
        return all(x % mod == 0 for x in self.c)

    def coeff(self, n: int) -> PadicInt:
        if n >= self.M:
            raise PrecisionError("coefficient beyond t-precision")
        return PadicInt(self.p, self.N, self.c[n])

    def t_valuation(self):
        mod = self.p**self.N
        for i, x in enumerate(self.c):
            if x % mod:
                return i
        return None

    def reduce_prec(self, N=None, M=None) -> "TruncSeries":
        N = self.N if N is None else min(N, self.N)
        M = self.M if M is None else min(M, self.M)
        return TruncSeries(self.p, N, M, self.c[:M])

    def lift_prec_unsafe(self, N: int, M: int) -> "TruncSeries":
        """Reinterpret at higher stated precision (only for exact inputs)."""
        return TruncSeries(self.p, N, M, list(self.c) + [0] * (M - len(self.c)))

    # -- units, substitution, derivations --------------------------------------

    def is_unit(self) -> bool:
        return self.c[0] % self.p != 0

    def unit_inverse(self) -> "TruncSeries":
        if not self.is_unit():
            raise ZeroDivisionError("constant term not a unit")
        mod = self.p**self.N
        inv0 = pow(self.c[0], -1, mod)
        out = [inv0] + [0] * (self.M - 1)
        for n in range(1, self.M):
            s = 0
            for k in range(1, n + 1):
                if k < len(self.c) and self.c[k]:
                    s += self.c[k] * out[n - k]
            out[n] = (-inv0 * s) % mod
        return TruncSeries(self.p, self.N, self.M, out)

    def subst(self, image: "TruncSeries") -> "TruncSeries":
        """Composition f(q) -> f(image); image must be 1 mod t."""
        image, N, M = self._join(image)
        if image.c[0] % self.p**N != 1 % self.p**N:
            raise ValueError("substitution image must be congruent to 1 mod t")
        s = image - TruncSeries.one(self.p, N, M)
        out = TruncSeries.const(self.p, N, M, self.c[M - 1] if M <= len(self.c) else 0)
        for n in range(M - 2, -1, -1):
            out = out * s + self.c[n]
        return out

    def phi(self) -> "TruncSeries":
        """Frobenius lift q -> q^p."""
        return self.subst(TruncSeries.q_power(self.p, self.N, self.M, self.p))

    def phi_pow(self, n: int) -> "TruncSeries":
        return self.subst(TruncSeries.q_power(self.p, self.N, self.M, self.p**n)) if n else self

    def gamma0(self, alpha: int) -> "TruncSeries":
        """q -> q^(p^(alpha+1)+1)."""
        return self.subst(TruncSeries.q_power(self.p, self.N, self.M,
                                              self.p ** (alpha + 1) + 1))

    def gamma_u(self, u) -> "TruncSeries":
        """q -> q^u for a unit exponent (int or PadicInt)."""
        return self.subst(TruncSeries.q_power(self.p, self.N, self.M, u))

    def derivative_q(self) -> "TruncSeries":
        """d/dq = d/dt."""
        mod = self.p**self.N
        out = [(self.c[n] * n) % mod for n in range(1, self.M)] + [0]
        return TruncSeries(self.p, self.N, self.M - 1, out[: self.M - 1])

    # -- certified divisions -----------------------------------------------

    def divide_p_pow(self, a: int) -> "TruncSeries":
        mod = self.p**min(a, self.N)
        if any(x % mod for x in self.c):
            raise DivisionCertificateError(f"series not divisible by p^{a}")
        if self.N <= a:
            raise PrecisionError("no p-digits left after division")
        modN = self.p**self.N
        return TruncSeries(self.p, self.N - a, self.M,
                           [(x % modN) // self.p**a for x in self.c])

    def divide_t_pow(self, b: int) -> "TruncSeries":
        mod = self.p**self.N
        if any(x % mod for x in self.c[:b]):
            raise DivisionCertificateError(f"series not divisible by t^{b}")
        if self.M <= b:
            raise PrecisionError("no t-digits left after division")
        return TruncSeries(self.p, self.N, self.M - b, self.c[b:])

    def times_p_pow(self, a: int, cap: int) -> "TruncSeries":
        """Multiply by p^a; a value known mod p^r times p^a is known mod
        p^(r+a), so the stated precision rises (up to the working cap)."""
        return TruncSeries(self.p, min(self.N + a, cap), self.M,
                           [x * self.p**a for x in self.c])

    def divide_unit(self, u: "TruncSeries") -> "TruncSeries":
        return self * u.unit_inverse()

    def weierstrass_divmod(self, P: Sequence[int]):
        """Division with remainder by a distinguished polynomial.

        P is given by exact integer t-coefficients: monic of degree r with
        all non-leading coefficients divisible by p.  Returns
        (Q, R, r_prec): f = Q*P + R with deg_t R < r.

        Precision accounting: the iteration replaces t^r by -p*C, gaining
        a factor p while consuming r known t-digits, so the unknown tail
        of f contaminates the t-degree-j part of the quotient at level
        p^(ceil((M-j)/r) - 1).  The quotient is returned on the largest
        uniform box holding full p-precision, which costs (N+1)*r
        t-digits; the remainder coefficients are certified mod p^r_prec
        with r_prec = min(N, floor(M/r) - 1)-ish from the same count.
        """
        p = self.p
        r = len(P) - 1
        if P[r] != 1:
            raise ValueError("distinguished polynomial must be monic in t")
        if any(x % p for x in P[:r]):
            raise ValueError("lower coefficients must be divisible by p")
        if self.M <= r:
            raise PrecisionError("t-precision does not reach the divisor degree")
        C = [x // p for x in P[:r]]  # P = t^r + p*C
        mod = p**self.N
        g = list(self.c)
        Mg = self.M
        Q = [0] * (self.M - r)
        R = [0] * r
        cert = self.N
        k = 0
        while True:
            if all(x % mod == 0 for x in g):
                break
            if Mg < r:
                cert = min(cert, k)
                break
            low, high = g[:r], g[r:Mg]
            for i in range(r):
                R[i] = (R[i] + low[i]) % mod
            for i, x in enumerate(high):
                if i < len(Q):
                    Q[i] = (Q[i] + x) % mod
            if k >= self.N:
                break
            # g <- -p*C*D(g)
            nxt = [0] * (Mg - r)
            for i, ci in enumerate(C):
                if ci == 0:
                    continue
                for j, x in enumerate(high):
                    if i + j < len(nxt) and x:
                        nxt[i + j] = (nxt[i + j] - p * ci * x) % mod
            g = nxt
            Mg = Mg - r
            k += 1
        cert = min(cert, self.N)
        N_q = min(self.N, self.M // r - 1)
        if N_q < 1:
            raise PrecisionError("quotient would carry no certified digits")
        M_q = self.M - (N_q + 1) * r + 1
        Qs = TruncSeries(p, N_q, max(M_q, 1), Q[: max(M_q, 1)])
        return Qs, [x % p**max(cert, 1) for x in R], cert

    def weierstrass_divide_exact(self, P: Sequence[int]) -> "TruncSeries":
        """Certified exact division by a distinguished polynomial."""
        Q, R, cert = self.weierstrass_divmod(P)
        if cert < 1 or any(x % self.p**cert for x in R):
            raise DivisionCertificateError(
                "nonzero remainder in distinguished division")
        return Q

    def render(self) -> str:
        mod = self.p**self.N
        parts = [f"{x % mod}*t^{n}" for n, x in enumerate(self.c) if x % mod]
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.p}^{self.N}, t^{self.M})"

    def __repr__(self):
        return f"TruncSeries({self.render()})"


# -- distinguished polynomial data and composite division -------------------


def distinguished_poly_t(p: int, n: int, base_exp: int) -> list:
    """Exact integer t-coefficients of [n]_{q^base_exp}."""
    deg = base_exp * (n - 1)
    cs = [0] * (deg + 1)
    for i in range(n):
        k = base_exp * i
        for j in range(k + 1):
            cs[j] += math.comb(k, j)
    return cs


def d_poly_t(p: int, alpha: int) -> list:
    return distinguished_poly_t(p, p, p**alpha)


def divide_by_q_power_minus_one(f: TruncSeries, alpha: int) -> TruncSeries:
    """Certified division by q^(p^alpha) - 1 = (q-1) * prod [p]_{q^(p^(j-1))}.

    Mixes the t-adic loss (the q-1 factor) with the p-adic losses of the
    distinguished factors.
    """
    out = f.divide_t_pow(1)
    for j in range(1, alpha + 1):
        out = out.weierstrass_divide_exact(d_poly_t(f.p, j - 1))
    return out


def partial_arith(f: TruncSeries, alpha: int) -> TruncSeries:
    """The twisted derivation (gamma0(f) - f) / (q * (q^(p^alpha) - 1))."""
    num = f.gamma0(alpha) - f
    qinv = TruncSeries.q_power(f.p, f.N, f.M, 1).unit_inverse()
    return divide_by_q_power_minus_one(num * qinv, alpha)


# ---------------------------------------------------------------------------
# Linear algebra over Z/p^N
# ---------------------------------------------------------------------------


def _smith(A, track_right=False, right_mod=None):
    """Smith normal form over Z.  Returns (diag, V) with U*A*V diagonal.

    Only the right transform V is tracked (enough for kernels); V is
    reduced mod right_mod when given to keep entries small.
    """
    A = [row[:] for row in A]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)] if track_right else None

    def col_op(j, k, m):  # col_j += m * col_k
        for i in range(rows):
            A[i][j] += m * A[i][k]
        if track_right:
            for i in range(cols):
                V[i][j] += m * V[i][k]
                if right_mod:
                    V[i][j] %= right_mod

    def col_swap(j, k):
        for i in range(rows):
            A[i][j], A[i][k] = A[i][k], A[i][j]
        if track_right:
            for i in range(cols):
                V[i][j], V[i][k] = V[i][k], V[i][j]

    def row_op(i, k, m):
        for j in range(cols):
            A[i][j] += m * A[k][j]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]

    diag = []
    top = 0
    while top < min(rows, cols):
        # locate minimal nonzero entry in the remaining block
        piv = None
        for i in range(top, rows):
            for j in range(top, cols):
                x = A[i][j]
                if x and (piv is None or abs(x) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            if i0 != top:
                row_swap(top, i0)
            if j0 != top:
                col_swap(top, j0)
            dirty = False
            for i in range(top + 1, rows):
                m = A[i][top] // A[top][top]
                if m:
                    row_op(i, top, -m)
                if A[i][top]:
                    dirty = True
            for j in range(top + 1, cols):
                m = A[top][j] // A[top][top]
                if m:
                    col_op(j, top, -m)
                if A[top][j]:
                    dirty = True
            if not dirty:
                break
            piv = None
            for i in range(top, rows):
                for j in range(top, cols):
                    x = A[i][j]
                    if x and (piv is None or abs(x) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
        diag.append(abs(A[top][top]))
        top += 1
    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if a and b and b % a != 0:
                g = math.gcd(a, b)
                diag[i], diag[i + 1] = g, a * b // g
                changed = True
            elif a == 0 and b != 0:
                diag[i], diag[i + 1] = b, 0
                changed = True
    if track_right:
        # recompute the diagonal only; V columns beyond the rank are a
        # kernel basis exactly when no row ops mixed columns -- they don't.
        return diag, V, A
    return diag, None, A


def smith_invariants(A) -> list:
    diag, _, _ = _smith(A)
    return [d for d in diag if d != 0]


def coker_invariants_mod(A, p: int, N: int) -> list:
    """Invariant factors of Z^rows / (col-span(A) + p^N), each a p-power
    exponent; 0 exponents (trivial factors) are dropped."""
    rows = len(A)
    mod = p**N
    B = [list(row) + [mod if i == j else 0 for j in range(rows)]
         for i, row in enumerate(A)]
    inv = smith_invariants(B)
    out = []
    for s in inv:
        v = vp_int(s, p)
        if v is None or p**v != s:
            raise ArithmeticError("cokernel invariant is not a p-power")
        if v > 0:
            out.append(v)
    # rows not reached by any invariant are full Z/p^N summands
    out.extend([N] * (rows - len(inv)))
    return sorted(out)


def ker_basis_mod(A, p: int, N: int) -> list:
    """Generators (as columns) of {x : A x = 0 mod p^N}."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    mod = p**N
    B = [list(row) + [mod if i == j else 0 for j in range(rows)]
         for i, row in enumerate(A)]
    diag, V, _ = _smith(B, track_right=True, right_mod=None)
    rank = len([d for d in diag if d])
    gens = []
    total = cols + rows
    for j in range(rank, total):
        vec = [V[i][j] % mod for i in range(cols)]
        if any(vec):
            gens.append(vec)
    return gens


def hermite_col(A) -> list:
    """Column-style Hermite normal form basis of the column lattice.

    Returns an upper-triangular square matrix whose columns span the same
    lattice; requires the lattice to have full rank (our inputs always
    contain p^N * I).
    """
    rows = len(A)
    work = [row[:] for row in A]
    cols = len(work[0])
    c_start = 0
    for row in range(rows):
        # gcd-fold all columns with nonzero entry in this row into one
        j0 = None
        for j in range(c_start, cols):
            if work[row][j]:
                j0 = j
                break
        if j0 is None:
            raise ArithmeticError("column lattice not full rank")
        for j in range(j0 + 1, cols):
            while work[row][j]:
                a, b = work[row][j0], work[row][j]
                if abs(b) < abs(a) or a == 0:
                    for i in range(rows):
                        work[i][j0], work[i][j] = work[i][j], work[i][j0]
                    continue
                m = work[row][j] // work[row][j0]
                for i in range(rows):
                    work[i][j] -= m * work[i][j0]
        if work[row][j0] < 0:
            for i in range(rows):
                work[i][j0] = -work[i][j0]
        if j0 != c_start:
            for i in range(rows):
                work[i][c_start], work[i][j0] = work[i][j0], work[i][c_start]
        c_start += 1
    return [[work[i][j] for j in range(rows)] for i in range(rows)]


def subquotient_invariants(ker_gens, im_gens, ambient: int, p: int, N: int) -> list:
    """Invariants of (span(K)+p^N) / (span(B)+p^N) inside Z^ambient.

    K and B are lists of generator columns with span(B) contained in
    span(K) mod p^N.
    """
    mod = p**N
    K = [[g[i] for g in ker_gens] + [mod if i == j else 0 for j in range(ambient)]
         for i in range(ambient)]
    H = hermite_col(K)
    B = [[g[i] for g in im_gens] + [mod if i == j else 0 for j in range(ambient)]
         for i in range(ambient)]
    ncolsB = len(im_gens) + ambient
    # solve H * X = B column by column (H upper triangular, full rank)
    X = [[0] * ncolsB for _ in range(ambient)]
    for j in range(ncolsB):
        rhs = [B[i][j] for i in range(ambient)]
        for i in range(ambient - 1, -1, -1):
            s = rhs[i] - sum(H[i][k] * X[k][j] for k in range(i + 1, ambient))
            q, r = divmod(s, H[i][i])
            if r:
                raise ArithmeticError("image generators not inside the kernel lattice")
            X[i][j] = q
    inv = smith_invariants(X)
    out = []
    for s in inv:
        v = vp_int(s, p)
        if v is None:
            raise ArithmeticError("subquotient invariant is not a p-power")
        if v > 0:
            out.append(v)
    return sorted(out)


def howell_mod(A, p: int, N: int) -> list:
    """Howell normal form of the row span of A over Z/p^N.

    Canonical for a fixed row span: pivot entries are p-powers, entries
    below pivots vanish, entries above are reduced mod the pivot, and the
    form is span-closed (every leading-coefficient multiple of a row is a
    combination of later rows).
    """
    mod = p**N
    work = [[x % mod for x in row] for row in A]
    work = [row for row in work if any(row)]
    cols = len(A[0]) if A else 0

    def rowred(rows_in):
        rows_in = [r[:] for r in rows_in if any(x % mod for x in r)]
        out = []
        col = 0
        while rows_in and col < cols:
            best = None
            for idx, r in enumerate(rows_in):
                x = r[col] % mod
                if x:
                    v = vp_int(x, p)
                    if best is None or v < best[1]:
                        best = (idx, v)
            if best is None:
                col += 1
                continue
            idx, v = best
            row = rows_in.pop(idx)
            u = pow(row[col] // p**v, -1, mod)
            row = [(x * u) % mod for x in row]
            for r in rows_in:
                if r[col] % mod:
                    m = r[col] // p**v
                    for j in range(cols):
                        r[j] = (r[j] - m * row[j]) % mod
            out.append((col, v, row))
            rows_in = [r for r in rows_in if any(x % mod for x in r)]
            col += 1
        return out

    pivots = rowred(work)
    # span closure: add p^(N-v) * row for each pivot with v > 0
    extra = []
    for col, v, row in pivots:
        if v > 0:
            extra.append([(x * p ** (N - v)) % mod for x in row])
    if extra:
        all_rows = [row for _, _, row in pivots] + extra
        pivots = rowred(all_rows)
    # reduce entries above each pivot
    result = [row for _, _, row in pivots]
    info = [(col, v) for col, v, _ in pivots]
    for k in range(len(result) - 1, -1, -1):
        col, v = info[k]
        piv = p**v
        for i in range(k):
            x = result[i][col] % mod
            m = x // piv
            if m:
                for j in range(cols):
                    result[i][j] = (result[i][j] - m * result[k][j]) % mod
    return result


def solve_mod(A, b, p: int, N: int):
    """One solution x of A x = b over Z/p^N plus its certified precision.

    Returns (x, prec) where any two solutions agree mod p^prec, or None
    when the system is inconsistent at full precision.
    """
    mod = p**N
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[A[i][j] % mod for j in range(cols)] + [b[i] % mod] for i in range(rows)]
    piv_cols = []
    r = 0
    for _ in range(cols):
        best = None
        for i in range(r, rows):
            for j in range(cols):
                if j in piv_cols:
                    continue
                x = aug[i][j] % mod
                if x:
                    v = vp_int(x, p)
                    if best is None or v < best[2]:
                        best = (i, j, v)
        if best is None:
            break
        i0, j0, v = best
        aug[r], aug[i0] = aug[i0], aug[r]
        u = pow(aug[r][j0] // p**v, -1, mod)
        aug[r] = [(x * u) % mod for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][j0] % mod:
                if vp_int(aug[i][j0], p) < v:
                    continue  # cannot eliminate; handled as inconsistency later
                m = aug[i][j0] // p**v
                aug[i] = [(x - m * y) % mod for x, y in zip(aug[i], aug[r])]
        piv_cols.append(j0)
        r += 1
    x = [0] * cols
    prec = N
    for k in range(r - 1, -1, -1):
        j0 = piv_cols[k]
        v = vp_int(aug[k][j0], p)
        rhs = (aug[k][cols] - sum(aug[k][j] * x[j] for j in range(cols) if j != j0)) % mod
        if rhs % p**v:
            return None
        x[j0] = (rhs // p**v) % p ** (N - v)
        prec = min(prec, N - v)
    # rows without pivots must have zero rhs
    for i in range(r, rows):
        if aug[i][cols] % mod:
            return None
    return x, prec


def inv_mod(A, p: int, N: int) -> list:
    """Inverse of a unit matrix over Z/p^N (Gaussian, unit pivots)."""
    mod = p**N
    n = len(A)
    aug = [[A[i][j] % mod for j in range(n)] + [1 if i == j else 0 for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if aug[i][col] % p:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible over Z/p^N")
        aug[col], aug[piv] = aug[piv], aug[col]
        u = pow(aug[col][col], -1, mod)
        aug[col] = [(x * u) % mod for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                m = aug[i][col]
                aug[i] = [(x - m * y) % mod for x, y in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def mat_mul_mod(A, B, p: int, N: int) -> list:
    mod = p**N
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        for k in range(inner):
            a = Ai[k] % mod
            if a:
                Bk = B[k]
                row = out[i]
                for j in range(cols):
                    row[j] = (row[j] + a * Bk[j]) % mod
    return out


def mat_eq_mod(A, B, p: int, N: int) -> bool:
    mod = p**N
    return all((x - y) % mod == 0 for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def mat_identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# QuotientRing: (Z/p^N)[q] / (d^n) with d = [p]_{q^(p^alpha)}
# ---------------------------------------------------------------------------


def d_poly_q(p: int, alpha: int) -> list:
    """Exact integer q-coefficients of [p]_{q^(p^alpha)}."""
    deg = (p - 1) * p**alpha
    cs = [0] * (deg + 1)
    for i in range(p):
        cs[i * p**alpha] += 1
    return cs


def _poly_mul(a, b, mod):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = (out[i + j] + x * y) % mod
    return out


def _poly_mod(a, modulus, mod):
    a = [x % mod for x in a]
    dm = len(modulus) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * modulus[j]) % mod
    return a[:dm] + [0] * max(0, dm - len(a))


class QuotientRing:
    """A/d^n as a finite free Z/p^N-module with basis 1, q, ..., q^(deg-1)."""

    def __init__(self, p: int, N: int, alpha: int, n: int = 1):
        self.p = p
        self.N = N
        self.alpha = alpha
        self.n = n
        base = d_poly_q(p, alpha)
        modulus = [1]
        for _ in range(n):
            modulus = _poly_mul(modulus, base, p**N)
        # the product of monic polys is monic even after mod-reduction
        modulus[-1] = 1
        self.modulus = modulus
        self.deg = len(modulus) - 1

    def elem(self, coeffs, prec=None):
        return QuotElem(self, coeffs, self.N if prec is None else prec)

    def zero(self):
        return self.elem([0])

    def one(self):
        return self.elem([1])

    def const(self, c: int):
        return self.elem([c])

    def q_power(self, k: int):
        mod = self.p**self.N
        if k >= 0:
            out = [0] * (k + 1)
            out[k] = 1
            return self.elem(_poly_mod(out, self.modulus, mod))
        return self.q_power(1).unit_inverse() ** (-k)

    def from_q_poly(self, qcoeffs: dict):
        out = self.zero()
        for e, c in qcoeffs.items():
            out = out + self.q_power(e) * c
        return out

    def from_series(self, f: TruncSeries):
        """Reduce a t-series; the unknown tail costs p-precision."""
        if f.p != self.p:
            raise ValueError("mixed primes")
        mod = self.p ** min(self.N, f.N)
        # t = q - 1
        acc = [0] * self.deg
        tpow = [1]
        for c in f.c:
            if c:
                for i, x in enumerate(tpow):
                    if i < self.deg:
                        acc[i] = (acc[i] + c * x) % mod
            tpow = _poly_mod(_poly_mul(tpow, [-1, 1], mod), self.modulus, mod)
        vals = [vp_int(x, self.p) for x in tpow]
        vals = [v for v in vals if v is not None]
        tail_prec = min(vals) if vals else min(self.N, f.N)
        return QuotElem(self, acc, min(self.N, f.N, max(tail_prec, 0) if vals else f.N))

    def mult_matrix(self, x: "QuotElem") -> list:
        cols = []
        for i in range(self.deg):
            basis = self.q_power(i)
            cols.append((x * basis).coeffs)
        return [[cols[j][i] for j in range(self.deg)] for i in range(self.deg)]

    def endo_matrix(self, q_image_power: int) -> list:
        """Matrix of the ring endomorphism q -> q^k on the power basis."""
        cols = [self.q_power(q_image_power * i).coeffs for i in range(self.deg)]
        return [[cols[j][i] for j in range(self.deg)] for i in range(self.deg)]

    def partial_matrix(self) -> list:
        """Matrix of the twisted derivation sending q^i to [p i]_{q^(p^alpha)} q^(i-1)."""
        cols = []
        for i in range(self.deg):
            if i == 0:
                cols.append([0] * self.deg)
                continue
            img = self.zero()
            for j in range(self.p * i):
                img = img + self.q_power(j * self.p**self.alpha + i - 1)
            cols.append(img.coeffs)
        return [[cols[j][i] for j in range(self.deg)] for i in range(self.deg)]

    def __eq__(self, other):
        return (isinstance(other, QuotientRing)
                and (self.p, self.N, self.alpha, self.n) ==
                (other.p, other.N, other.alpha, other.n))


class QuotElem:
    __slots__ = ("ring", "coeffs", "prec")

    def __init__(self, ring: QuotientRing, coeffs, prec: int):
        self.ring = ring
        mod = ring.p ** ring.N
        cs = _poly_mod([x % mod for x in coeffs], ring.modulus, mod)
        cs = cs + [0] * (ring.deg - len(cs))
        self.coeffs = cs[: ring.deg]
        self.prec = min(prec, ring.N)

    def _join(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return other, min(self.prec, other.prec)

    def __add__(self, other):
        other, pr = self._join(other)
        return QuotElem(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)], pr)

    __radd__ = __add__

    def __neg__(self):
        return QuotElem(self.ring, [-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        other, pr = self._join(other)
        return QuotElem(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)], pr)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuotElem(self.ring, [a * other for a in self.coeffs], self.prec)
        other, pr = self._join(other)
        mod = self.ring.p ** self.ring.N
        return QuotElem(self.ring,
                        _poly_mod(_poly_mul(self.coeffs, other.coeffs, mod),
                                  self.ring.modulus, mod), pr)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        out, base = self.ring.one(), self
        out = QuotElem(self.ring, out.coeffs, self.prec)
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        pr = min(self.prec, other.prec)
        mod = self.ring.p**pr
        return all((a - b) % mod == 0 for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        mod = self.ring.p**self.prec
        return all(a % mod == 0 for a in self.coeffs)

    def is_unit(self) -> bool:
        """Units of the local ring: detectable from the mult matrix."""
        try:
            self.unit_inverse()
            return True
        except ZeroDivisionError:
            return False

    def unit_inverse(self) -> "QuotElem":
        M = self.ring.mult_matrix(self)
        inv = inv_mod(M, self.ring.p, self.ring.N)
        one = [1] + [0] * (self.ring.deg - 1)
        return QuotElem(self.ring, [sum(inv[i][j] * one[j] for j in range(self.ring.deg))
                                    for i in range(self.ring.deg)], self.prec)

    def divide_exact(self, other: "QuotElem") -> "QuotElem":
        """Certified division: solve other * y = self, lossy but honest."""
        M = self.ring.mult_matrix(other)
        sol = solve_mod(M, self.coeffs, self.ring.p, min(self.prec, other.prec))
        if sol is None:
            raise DivisionCertificateError("quotient-ring division has no solution")
        x, prec = sol
        return QuotElem(self.ring, x, prec)

    def divide_p_pow(self, a: int) -> "QuotElem":
        mod = self.ring.p ** min(a, self.prec)
        if any(x % mod for x in self.coeffs):
            raise DivisionCertificateError(f"not divisible by p^{a}")
        if self.prec <= a:
            raise PrecisionError("no digits left after division")
        modN = self.ring.p ** self.ring.N
        return QuotElem(self.ring, [(x % modN) // self.ring.p**a for x in self.coeffs],
                        self.prec - a)

    def times_p_pow(self, a: int) -> "QuotElem":
        return QuotElem(self.ring, [x * self.ring.p**a for x in self.coeffs],
                        min(self.prec + a, self.ring.N))

    def apply_matrix(self, M: list) -> "QuotElem":
        n = self.ring.deg
        return QuotElem(self.ring,
                        [sum(M[i][j] * self.coeffs[j] for j in range(n)) for i in range(n)],
                        self.prec)

    def render(self) -> str:
        mod = self.ring.p**self.prec
        parts = [f"{c % mod}*q^{i}" for i, c in enumerate(self.coeffs) if c % mod]
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.ring.p}^{self.prec})"

    def __repr__(self):
        return f"QuotElem({self.render()})"


# ---------------------------------------------------------------------------
# TPoly: polynomials in one chart coordinate T over TruncSeries
# ---------------------------------------------------------------------------


class TPoly:
    """Sum of T^j * (series in t), with a hard cap on the T-degree.

    Exceeding the cap is an error, not silent truncation: the twists in
    play only rescale T-degrees, so overflow indicates misuse.
    """

    __slots__ = ("p", "N", "M", "cap", "terms")

    def __init__(self, p, N, M, cap, terms=None):
        self.p, self.N, self.M, self.cap = p, N, M, cap
        clean = {}
        for j, s in (terms or {}).items():
            if j > cap:
                raise PrecisionError(f"T-degree {j} exceeds cap {cap}")
            if j < 0:
                raise ValueError("negative T-degree")
            if not s.is_zero():
                clean[j] = s
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(p, N, M, cap):
        return TPoly(p, N, M, cap)

    @staticmethod
    def scalar(p, N, M, cap, s: TruncSeries):
        return TPoly(p, N, M, cap, {0: s})

    @staticmethod
    def const(p, N, M, cap, c: int):
        return TPoly(p, N, M, cap, {0: TruncSeries.const(p, N, M, c)})

    @staticmethod
    def one(p, N, M, cap):
        return TPoly.const(p, N, M, cap, 1)

    @staticmethod
    def t_power(p, N, M, cap, j: int, s: TruncSeries = None):
        return TPoly(p, N, M, cap, {j: s if s is not None else TruncSeries.one(p, N, M)})

    def _coerce(self, other):
        if isinstance(other, int):
            return TPoly.const(self.p, self.N, self.M, self.cap, other)
        if isinstance(other, TruncSeries):
            return TPoly.scalar(self.p, self.N, self.M, self.cap, other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for j, s in other.terms.items():
            out[j] = out[j] + s if j in out else s
        return TPoly(self.p, self.N, self.M, self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return TPoly(self.p, self.N, self.M, self.cap,
                     {j: -s for j, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        if isinstance(other, int) or isinstance(other, TruncSeries):
            return TPoly(self.p, self.N, self.M, self.cap,
                         {j: s * other for j, s in self.terms.items()})
        out: dict = {}
        for j1, s1 in self.terms.items():
            for j2, s2 in other.terms.items():
                j = j1 + j2
                prod = s1 * s2
                out[j] = out[j] + prod if j in out else prod
        return TPoly(self.p, self.N, self.M, self.cap, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TPoly.one(self.p, self.N, self.M, self.cap)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        return (self - self._coerce(other)).is_zero()

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.terms.values())

    def map_terms(self, fn) -> "TPoly":
        """Apply (j, series) -> (j', series') to every term."""
        out: dict = {}
        for j, s in self.terms.items():
            j2, s2 = fn(j, s)
            out[j2] = out[j2] + s2 if j2 in out else s2
        return TPoly(self.p, self.N, self.M, self.cap, out)

    def divide_p_pow(self, a: int) -> "TPoly":
        return TPoly(self.p, max(self.N - a, 1), self.M, self.cap,
                     {j: s.divide_p_pow(a) for j, s in self.terms.items()})

    def times_p_pow(self, a: int, cap_prec: int) -> "TPoly":
        return TPoly(self.p, min(self.N + a, cap_prec), self.M, self.cap,
                     {j: s.times_p_pow(a, cap_prec) for j, s in self.terms.items()})

    def coeff(self, j: int) -> TruncSeries:
        return self.terms.get(j, TruncSeries.zero(self.p, self.N, self.M))

    def divide_unit_series(self, u: TruncSeries) -> "TPoly":
        inv = u.unit_inverse()
        return TPoly(self.p, self.N, self.M, self.cap,
                     {j: s * inv for j, s in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"T^{j}*({s.render()})" for j, s in sorted(self.terms.items()))

    def __repr__(self):
        return f"TPoly({self.render()})"
