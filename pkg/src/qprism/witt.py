"""Truncated Witt vectors: ghost transport, the ghost-to-coordinate
solver, delta-ring structure, and the explicit constructed elements.

Witt arithmetic is done through ghost coordinates

    w_n(x) = sum_{i<=n} p^i * x_i^(p^(n-i)),

inverted by certified division by p^n.  Series-backed bases carry a
guard of L-1 extra p-digits so that length-L answers come out certified
at the requested precision.  The exact bases (integer polynomial rings,
possibly with an eps generator) have no precision to lose and certify
identities on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactcore import BigPoly, RingPresentation, psi_q_power, psi_t_power, q_analogue
from .padic import (
    DivisionCertificateError,
    QuotientRing,
    TPoly,
    TruncSeries,
)


class GhostSolveError(Exception):
    """A ghost sequence failed the coordinate solve or the Dwork check."""


# ---------------------------------------------------------------------------
# base-ring adapters
# ---------------------------------------------------------------------------


class ExactPolyBase:
    """Z[q] (optionally with eps generators) via exactcore; p-torsion free."""

    def __init__(self, pres: RingPresentation):
        self.pres = pres
        self.p = pres.p
        self.has_phi = True

    def const(self, c):
        return self.pres.const(c)

    def phi(self, x: BigPoly):
        return x.frobenius()

    def divide_p_pow(self, x: BigPoly, a: int):
        return x.divide_coefficients(self.p**a)

    def times_p_pow(self, x: BigPoly, a: int):
        return x * self.p**a

    def is_zero(self, x) -> bool:
        return not x

    def congruent_mod_p_pow(self, x, a: int) -> bool:
        return x.coefficients_divisible_by(self.p**a)

    def reduce_target(self, x):
        return x


class SeriesBase:
    """W(k)[[q-1]] truncated at (p^N_work, t^M)."""

    def __init__(self, p: int, N_work: int, M: int, target_N: int = None):
        self.p, self.N, self.M = p, N_work, M
        self.target_N = target_N if target_N is not None else N_work
        self.has_phi = True

    def const(self, c):
        return TruncSeries.const(self.p, self.N, self.M, c)

    def phi(self, x: TruncSeries):
        return x.phi()

    def divide_p_pow(self, x, a):
        return x.divide_p_pow(a)

    def times_p_pow(self, x, a):
        return x.times_p_pow(a, self.N)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def congruent_mod_p_pow(self, x, a) -> bool:
        return x.reduce_prec(N=min(a, x.N)).is_zero()

    def reduce_target(self, x):
        return x.reduce_prec(N=self.target_N)


@dataclass(frozen=True)
class EpsPair:
    """f + eps*g in the rank-2 module over the scalar ring."""

    f: object
    g: object


class EpsSeriesBase(SeriesBase):
    """A + eps*A with eps^2 = q*(q^(p^alpha)-1)*eps over truncated series."""

    def __init__(self, p, N_work, M, alpha, target_N=None):
        super().__init__(p, N_work, M, target_N)
        self.alpha = alpha
        self.sq = (TruncSeries.q_power(p, N_work, M, p**alpha + 1)
                   - TruncSeries.q_power(p, N_work, M, 1))
        # phi(eps) = q^(p-1) * d * eps
        self.phi_unit = (TruncSeries.q_power(p, N_work, M, p - 1)
                         * TruncSeries.d_series(p, N_work, M, alpha))
        self._certify_frobenius()

    def _certify_frobenius(self):
        """phi(eps) - eps^p must vanish mod p: phi really lifts the
        p-power map (certified at construction)."""
        eps = EpsPair(TruncSeries.zero(self.p, self.N, self.M),
                      TruncSeries.one(self.p, self.N, self.M))
        diff = self.sub(self.phi(eps), self.pow(eps, self.p))
        if not self.congruent_mod_p_pow(diff, 1):
            raise ArithmeticError("frobenius lift fails the mod-p congruence")

    def const(self, c):
        return EpsPair(TruncSeries.const(self.p, self.N, self.M, c),
                       TruncSeries.zero(self.p, self.N, self.M))

    def pair(self, f, g):
        return EpsPair(f, g)

    def add(self, x, y):
        return EpsPair(x.f + y.f, x.g + y.g)

    def sub(self, x, y):
        return EpsPair(x.f - y.f, x.g - y.g)

    def mul(self, x, y):
        return EpsPair(x.f * y.f, x.f * y.g + x.g * y.f + self.sq * x.g * y.g)

    def pow(self, x, k):
        out = self.const(1)
        base = x
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return out

    def phi(self, x):
        return EpsPair(x.f.phi(), self.phi_unit * x.g.phi())

    def divide_p_pow(self, x, a):
        return EpsPair(x.f.divide_p_pow(a), x.g.divide_p_pow(a))

    def times_p_pow(self, x, a):
        return EpsPair(x.f.times_p_pow(a, self.N), x.g.times_p_pow(a, self.N))

    def is_zero(self, x):
        return x.f.is_zero() and x.g.is_zero()

    def congruent_mod_p_pow(self, x, a):
        return (x.f.reduce_prec(N=min(a, x.f.N)).is_zero()
                and x.g.reduce_prec(N=min(a, x.g.N)).is_zero())

    def reduce_target(self, x):
        return EpsPair(x.f.reduce_prec(N=self.target_N), x.g.reduce_prec(N=self.target_N))


class TEpsSeriesBase(EpsSeriesBase):
    """A<T> + eps*dT * A<T> with (eps dT)^2 = (q^(p^alpha)-1) * T * eps dT."""

    def __init__(self, p, N_work, M, alpha, tcap, target_N=None):
        SeriesBase.__init__(self, p, N_work, M, target_N)
        self.alpha = alpha
        self.tcap = tcap
        self.beta = (TruncSeries.q_power(p, N_work, M, p**alpha)
                     - TruncSeries.one(p, N_work, M))
        self.d = TruncSeries.d_series(p, N_work, M, alpha)
        eps = EpsPair(TPoly.zero(p, N_work, M, tcap),
                      TPoly.one(p, N_work, M, tcap))
        diff = self.sub(self.phi(eps), self.pow(eps, p))
        if not self.congruent_mod_p_pow(diff, 1):
            raise ArithmeticError("frobenius lift fails the mod-p congruence")

    def const(self, c):
        z = TPoly.zero(self.p, self.N, self.M, self.tcap)
        return EpsPair(TPoly.const(self.p, self.N, self.M, self.tcap, c), z)

    def mul(self, x, y):
        cross = x.g * y.g
        cross = cross.map_terms(lambda j, s: (j + 1, s * self.beta))
        return EpsPair(x.f * y.f, x.f * y.g + x.g * y.f + cross)

    def phi(self, x):
        fr = x.f.map_terms(lambda j, s: (j * self.p, s.phi()))
        gr = x.g.map_terms(lambda j, s: (j * self.p + self.p - 1, s.phi() * self.d))
        return EpsPair(fr, gr)

    def congruent_mod_p_pow(self, x, a):
        def ok(tp):
            return all(s.reduce_prec(N=min(a, s.N)).is_zero()
                       for s in tp.terms.values())
        return ok(x.f) and ok(x.g)

    def reduce_target(self, x):
        red = lambda tp: tp.map_terms(lambda j, s: (j, s.reduce_prec(N=self.target_N)))
        return EpsPair(red(x.f), red(x.g))


class QuotBase:
    """A/d^n; no Frobenius lift survives the quotient, so ghost solving
    certifies through division exactness alone."""

    def __init__(self, ring: QuotientRing):
        self.ring = ring
        self.p = ring.p
        self.has_phi = False

    def const(self, c):
        return self.ring.const(c)

    def divide_p_pow(self, x, a):
        return x.divide_p_pow(a)

    def times_p_pow(self, x, a):
        return x.times_p_pow(a)

    def is_zero(self, x):
        return x.is_zero()

    def reduce_target(self, x):
        return x


def _mul(base, x, y):
    return base.mul(x, y) if hasattr(base, "mul") else x * y


def _add(base, x, y):
    return base.add(x, y) if hasattr(base, "add") else x + y


def _sub(base, x, y):
    return base.sub(x, y) if hasattr(base, "sub") else x - y


def _pow(base, x, k):
    return base.pow(x, k) if hasattr(base, "pow") else x**k


# ---------------------------------------------------------------------------
# WittVector
# ---------------------------------------------------------------------------


class WittVector:
    __slots__ = ("base", "coords")

    def __init__(self, base, coords):
        self.base = base
        self.coords = tuple(coords)

    def __len__(self):
        return len(self.coords)

    def ghost(self) -> list:
        """w_n = sum_{i<=n} p^i x_i^(p^(n-i))."""
        base, p = self.base, self.base.p
        out = []
        for n in range(len(self.coords)):
            acc = base.const(0)
            for i in range(n + 1):
                term = _pow(base, self.coords[i], p ** (n - i))
                acc = _add(base, acc, base.times_p_pow(term, i))
            out.append(acc)
        return out

    def V(self) -> "WittVector":
        return WittVector(self.base, (self.base.const(0),) + self.coords[:-1])

    def __eq__(self, other):
        return all(self.base.is_zero(_sub(self.base, a, b))
                   for a, b in zip(self.coords, other.coords))

    def reduce_target(self) -> "WittVector":
        return WittVector(self.base, [self.base.reduce_target(x) for x in self.coords])

    def render(self) -> str:
        bits = []
        for x in self.coords:
            bits.append(x.render() if hasattr(x, "render") else repr(x))
        return "[" + ", ".join(bits) + "]"


def teich(base, x, L: int) -> WittVector:
    return WittVector(base, [x] + [base.const(0)] * (L - 1))


def witt_one(base, L: int) -> WittVector:
    return teich(base, base.const(1), L)


def dwork_check(base, ghosts, strict=False) -> bool:
    """phi(r_n) = r_(n+1) mod p^(n+1); with strict=True, exactly."""
    if not base.has_phi:
        return True
    for n in range(len(ghosts) - 1):
        diff = _sub(base, base.phi(ghosts[n]), ghosts[n + 1])
        if strict:
            if not base.is_zero(diff):
                return False
        elif not base.congruent_mod_p_pow(diff, n + 1):
            return False
    return True


def from_ghost(base, ghosts, check_dwork=True, strict_dwork=False) -> WittVector:
    """Solve ghost(x) = r by back-substitution with certified division.

    x_n = (r_n - sum_{i<n} p^i x_i^(p^(n-i))) / p^n; a division failure
    means the input is not a ghost sequence at the working precision.
    """
    if check_dwork and not dwork_check(base, ghosts, strict=strict_dwork):
        raise GhostSolveError("Dwork congruence failed")
    p = base.p
    coords = []
    for n, r in enumerate(ghosts):
        acc = r
        for i in range(n):
            term = _pow(base, coords[i], p ** (n - i))
            acc = _sub(base, acc, base.times_p_pow(term, i))
        try:
            coords.append(base.divide_p_pow(acc, n) if n else acc)
        except DivisionCertificateError as exc:
            raise GhostSolveError(f"coordinate {n}: {exc}") from exc
    return WittVector(base, coords)


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    ga, gb = a.ghost(), b.ghost()
    return from_ghost(a.base, [_add(a.base, x, y) for x, y in zip(ga, gb)],
                      check_dwork=False)

def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    ga, gb = a.ghost(), b.ghost()
    return from_ghost(a.base, [_mul(a.base, x, y) for x, y in zip(ga, gb)],
                      check_dwork=False)


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    ga, gb = a.ghost(), b.ghost()
    return from_ghost(a.base, [_sub(a.base, x, y) for x, y in zip(ga, gb)],
                      check_dwork=False)


def frobenius_witt(a: WittVector) -> WittVector:
    """F: drops the first ghost component; needs one spare length."""
    ghosts = a.ghost()
    return from_ghost(a.base, ghosts[1:], check_dwork=False)


def delta_witt(a: WittVector) -> WittVector:
    """delta with ghost components (w_(n+1) - w_n^p)/p."""
    base, p = a.base, a.base.p
    ghosts = a.ghost()
    out = []
    for n in range(len(ghosts) - 1):
        num = _sub(base, ghosts[n + 1], _pow(base, ghosts[n], p))
        out.append(base.divide_p_pow(num, 1))
    return from_ghost(base, out, check_dwork=False)


def lift_delta_map(base, images, check_dwork=False) -> WittVector:
    """The image of x under the unique delta-lift of a ring map into the
    Witt vectors of the target: its ghost components are f(phi^n(x)).

    ``images`` are the already-computed f(phi^n(x)) in the target base
    (the source's Frobenius is applied upstairs, where it exists).
    """
    return from_ghost(base, list(images), check_dwork=check_dwork)


# ---------------------------------------------------------------------------
# constructed elements
# ---------------------------------------------------------------------------


@dataclass
class Construction:
    """A constructed Witt element together with its certification trail."""

    name: str
    witt: WittVector
    ghosts: list
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _ghost_b(pres: RingPresentation, n: int) -> BigPoly:
    """1 + eps [p^n]_{q^(p^alpha)} sum_i q^(i p^(n+alpha) - 1) [i p^alpha]_{q^(p^(alpha+n+1))}."""
    p, alpha = pres.p, pres.alpha
    s = pres.zero()
    for i in range(1, p):
        s = s + pres.q_pow(i * p ** (n + alpha) - 1) * q_analogue(pres, i * p**alpha, p ** (alpha + n + 1))
    return pres.one() + pres.eps(0) * q_analogue(pres, p**n, p**alpha) * s


def _ghost_c(pres: RingPresentation, n: int) -> BigPoly:
    p, alpha = pres.p, pres.alpha
    return pres.eps(0) * pres.q_pow(p**n - 1) * q_analogue(pres, p**n, p**alpha)


def _series_of_poly(base, poly: BigPoly):
    """Transport a BigPoly with one optional eps into a series eps-pair."""
    p, N, M = base.p, base.N, base.M
    if isinstance(base, TEpsSeriesBase):
        fr = TPoly.zero(p, N, M, base.tcap)
        gr = TPoly.zero(p, N, M, base.tcap)
        for (qe, ee, te), cval in poly.terms.items():
            s = TruncSeries.q_power(p, N, M, qe) * cval
            tp = TPoly.t_power(p, N, M, base.tcap, te[0] if te else 0, s)
            if any(ee):
                gr = gr + tp
            else:
                fr = fr + tp
        return EpsPair(fr, gr)
    fr = TruncSeries.zero(p, N, M)
    gr = TruncSeries.zero(p, N, M)
    for (qe, ee, te), cval in poly.terms.items():
        s = TruncSeries.q_power(p, N, M, qe) * cval
        if any(ee):
            gr = gr + s
        else:
            fr = fr + s
    if isinstance(base, EpsSeriesBase):
        return EpsPair(fr, gr)
    if any(any(k[1]) for k in poly.terms):
        raise ValueError("eps term in a plain series base")
    return fr


def _eps_pres(p, alpha):
    return RingPresentation(p, alpha, m=0, has_eps0=True,
                            max_qdeg=1 << 30)


def construct_b(p: int, alpha: int, L: int, N: int = 8, M: int = 32,
                backend: str = "series") -> Construction:
    """b with gtilde(d) = ftilde(d) * b in W(A + eps A).

    Ghosts r_n are written down in closed form; the certification checks
    (i) phi(r_n) = r_(n+1) exactly, (ii) the ghost identity
    psi(phi^n(d)) = phi^n(d) * r_n against an independent evaluation of
    psi on the polynomial phi^n(d), and (iii) the coordinate-level
    multiply-back ftilde(d) * b = gtilde(d).
    """
    pres = _eps_pres(p, alpha)
    ghost_polys = [_ghost_b(pres, n) for n in range(L)]
    d_img = [q_analogue(pres, p, p ** (n + alpha)) for n in range(L)]  # phi^n(d)
    psi_d = []
    for n in range(L):
        acc = pres.zero()
        for e, cf in d_img[n].q_coefficients().items():
            acc = acc + psi_q_power(pres, e) * cf
        psi_d.append(acc)

    checks = {}
    checks["phi(r_n) = r_(n+1) exactly"] = all(
        ghost_polys[n].frobenius() == ghost_polys[n + 1] for n in range(L - 1))
    checks["ghost identity psi(phi^n(d)) = phi^n(d) * r_n"] = all(
        psi_d[n] == d_img[n] * ghost_polys[n] for n in range(L))
    b0 = _ghost_b(pres, 0)
    checks["b_0 closed form"] = ghost_polys[0] == b0

    if backend == "exact":
        base = ExactPolyBase(pres)
        ghosts = ghost_polys
    else:
        base = EpsSeriesBase(p, N + L - 1, M, alpha, target_N=N)
        ghosts = [_series_of_poly(base, g) for g in ghost_polys]
    bw = from_ghost(base, ghosts, check_dwork=True, strict_dwork=True)
    fd = from_ghost(base, [_series_of_poly(base, g) if backend != "exact" else g
                           for g in d_img], check_dwork=False)
    gd = from_ghost(base, [_series_of_poly(base, g) if backend != "exact" else g
                           for g in psi_d], check_dwork=False)
    checks["multiply-back ftilde(d) * b = gtilde(d)"] = witt_mul(fd, bw) == gd
    return Construction("b", bw, ghosts, checks)


def construct_c(p: int, alpha: int, L: int, N: int = 8, M: int = 32,
                backend: str = "series") -> Construction:
    """c with gtilde(q) - ftilde(q) = ftilde(d) * c."""
    pres = _eps_pres(p, alpha)
    ghost_polys = [_ghost_c(pres, n) for n in range(L)]
    q_img = [pres.q_pow(p**n) for n in range(L)]
    psi_q = [psi_q_power(pres, p**n) for n in range(L)]
    d_img = [q_analogue(pres, p, p ** (n + alpha)) for n in range(L)]

    checks = {}
    checks["phi(r_n) = r_(n+1) exactly"] = all(
        ghost_polys[n].frobenius() == ghost_polys[n + 1] for n in range(L - 1))
    checks["ghost identity psi(q^(p^n)) - q^(p^n) = phi^n(d) * r_n"] = all(
        psi_q[n] - q_img[n] == d_img[n] * ghost_polys[n] for n in range(L))
    checks["c_0 = eps"] = ghost_polys[0] == pres.eps(0)

    if backend == "exact":
        base = ExactPolyBase(pres)
        conv = lambda g: g
    else:
        base = EpsSeriesBase(p, N + L - 1, M, alpha, target_N=N)
        conv = lambda g: _series_of_poly(base, g)
    cw = from_ghost(base, [conv(g) for g in ghost_polys],
                    check_dwork=True, strict_dwork=True)
    fd = from_ghost(base, [conv(g) for g in d_img], check_dwork=False)
    diff = from_ghost(base, [conv(psi_q[n] - q_img[n]) for n in range(L)],
                      check_dwork=False)
    checks["multiply-back ftilde(d) * c = gtilde(q) - ftilde(q)"] = \
        witt_mul(fd, cw) == diff
    return Construction("c", cw, ghosts=[conv(g) for g in ghost_polys], checks=checks)


@dataclass
class NonexistenceWitness:
    level: int
    remainder_valuation: object
    detail: str


def construct_c_u(p: int, alpha: int, L: int, u, N: int = 8, M: int = 32):
    """c_u with gamma_u-tilde(q) - q-tilde = d-tilde * c_u, or a witness.

    For u = 1 + p^(alpha+1) v with integer v >= 0 the ghosts have the
    closed polynomial form q^(p^n) (q^(p^(n+alpha)) - 1) [v]_{q^(p^(n+alpha+1))}
    and everything is certified exactly in Z[q].  For a unit exponent u
    (int or PadicInt) not congruent to 1 mod p^(alpha+1), the divisibility
    of q^(u p^n) - q^(p^n) by [p]_{q^(p^(n+alpha))} already fails at n = 0
    and the failure is returned as a value.
    """
    mod = p ** (alpha + 1)
    u_int = u if isinstance(u, int) else None
    if u_int is not None and u_int % mod == 1 % mod and u_int >= 1:
        v = (u_int - 1) // mod
        pres = RingPresentation(p, alpha, m=0, has_eps0=True, max_qdeg=1 << 30)
        ghosts = []
        for n in range(L):
            g = (pres.q_pow(p**n)
                 * (pres.q_pow(p ** (n + alpha)) - pres.one())
                 * q_analogue(pres, v, p ** (n + alpha + 1)))
            ghosts.append(g)
        checks = {}
        checks["phi(r_n) = r_(n+1) exactly"] = all(
            ghosts[n].frobenius() == ghosts[n + 1] for n in range(L - 1))
        checks["ghost identity q^(u p^n) - q^(p^n) = phi^n(d) * r_n"] = all(
            pres.q_pow(u_int * p**n) - pres.q_pow(p**n)
            == q_analogue(pres, p, p ** (n + alpha)) * ghosts[n]
            for n in range(L))
        base = ExactPolyBase(pres)
        cw = from_ghost(base, ghosts, check_dwork=True, strict_dwork=True)
        checks["r_0 = q (q^(p^alpha) - 1)"] = (
            ghosts[0] == pres.q_pow(1) * pres.beta()) if v == 1 else True
        return Construction(f"c_u(u={u_int})", cw, ghosts, checks)

    # non-congruent unit: witness the divisibility failure at n = 0;
    # the witness needs room for one distinguished division regardless
    # of the configured truncation
    from .padic import PrecisionError, d_poly_t, vp_factorial
    deg = (p - 1) * p**alpha
    M_wit = 3 * deg + 6
    if not isinstance(u, int):
        N = min(N, u.prec - vp_factorial(p, M_wit - 1))
        if N < 2:
            raise PrecisionError("exponent carries too few digits for a witness")
    qu = TruncSeries.q_power(p, N, M_wit, u)
    num = qu - TruncSeries.q_power(p, N, M_wit, 1)
    _, R, cert = num.weierstrass_divmod(d_poly_t(p, alpha))
    rem = [x % p**cert for x in R]
    if all(x == 0 for x in rem):
        raise GhostSolveError("expected a divisibility failure but found none")
    from .padic import vp_int
    vals = [vp_int(x, p) for x in rem if x]
    return NonexistenceWitness(0, min(vals),
                               "q^u - q is not divisible by [p]_{q^(p^alpha)}")


def construct_c_psi(p: int, alpha: int, L: int, N: int = 8, M: int = 32,
                    backend: str = "series", tcap: int = None) -> Construction:
    """c_psi(T) with psi-tilde(T) - iota-tilde(T) = d-tilde * c_psi(T).

    Ghosts r_n = T^(p^n - 1) [p^n]_{q^(p^alpha)} * eps dT over the chart
    ring with one coordinate.
    """
    pres = RingPresentation(p, alpha, m=1, has_eps0=False,
                            max_qdeg=1 << 30, max_tdeg=1 << 30)
    ghost_polys = [
        pres.t_pow(0, p**n - 1) * q_analogue(pres, p**n, p**alpha) * pres.eps(0)
        for n in range(L)
    ]
    t_img = [pres.t_pow(0, p**n) for n in range(L)]
    psi_t = [psi_t_power(pres, 0, p**n) for n in range(L)]
    d_img = [q_analogue(pres, p, p ** (n + alpha)) for n in range(L)]

    checks = {}
    checks["phi(r_n) = r_(n+1) exactly"] = all(
        ghost_polys[n].frobenius() == ghost_polys[n + 1] for n in range(L - 1))
    checks["ghost identity psi(T^(p^n)) - T^(p^n) = phi^n(d) * r_n"] = all(
        psi_t[n] - t_img[n] == d_img[n] * ghost_polys[n] for n in range(L))
    checks["r_0 = eps dT"] = ghost_polys[0] == pres.eps(0)

    if backend == "exact":
        base = ExactPolyBase(pres)
        conv = lambda g: g
    else:
        cap = tcap if tcap is not None else 2 * p ** (L - 1) + 2
        base = TEpsSeriesBase(p, N + L - 1, M, alpha, cap, target_N=N)
        conv = lambda g: _series_of_poly(base, g)
    cw = from_ghost(base, [conv(g) for g in ghost_polys],
                    check_dwork=True, strict_dwork=True)
    fd = from_ghost(base, [conv(g) for g in d_img], check_dwork=False)
    diff = from_ghost(base, [conv(psi_t[n] - t_img[n]) for n in range(L)],
                      check_dwork=False)
    checks["multiply-back d-tilde * c_psi = psi-tilde(T) - iota-tilde(T)"] = \
        witt_mul(fd, cw) == diff
    return Construction("c_psi", cw, ghosts=[conv(g) for g in ghost_polys],
                        checks=checks)


def d_as_V1(p: int, alpha: int, L: int, N: int = 8) -> Construction:
    """The delta-lift of d into the Witt vectors of A/d has ghosts
    (0, p, p, ...) and coordinates V(1)."""
    pres = RingPresentation(p, alpha, m=0, has_eps0=True, max_qdeg=1 << 30)
    ring = QuotientRing(p, N + L - 1, alpha, 1)
    base = QuotBase(ring)
    imgs = []
    for n in range(L):
        poly = q_analogue(pres, p, p ** (n + alpha))  # phi^n(d) upstairs
        imgs.append(ring.from_q_poly(poly.q_coefficients()))
    checks = {}
    expected = [ring.const(0)] + [ring.const(p)] * (L - 1)
    checks["ghost sequence is (0, p, p, ...)"] = all(
        a == b for a, b in zip(imgs, expected))
    w = from_ghost(base, imgs, check_dwork=False)
    v1 = witt_one(base, L).V()
    checks["coordinates equal V(1)"] = w == v1
    return Construction("d = V(1)", w, imgs, checks)


def delta_power_membership(n: int, k: int, p: int, N: int = 8, M: int = 30,
                           cross_check_exact: bool = True) -> bool:
    """delta^k((q-1)^n) lies in ((q-1)^n).

    Computed in truncated series with certified divisions by p, and
    cross-checked in exact Z[q] (where the divisibility is literal).
    """
    if k == 0:
        return True
    f = TruncSeries.t_power(p, N + k, M, 1) ** n
    for _ in range(k):
        f = (f.phi() - f**p).divide_p_pow(1)
    try:
        f.divide_t_pow(n)
        series_ok = True
    except DivisionCertificateError:
        series_ok = False
    if not cross_check_exact:
        return series_ok
    pres = RingPresentation(p, 0, m=0, has_eps0=True, max_qdeg=1 << 30)
    g = (pres.q_pow(1) - pres.one()) ** n
    for _ in range(k):
        g = (g.frobenius() - g**p).divide_coefficients(p)
    from .exactcore import divides_exactly
    exact_ok = divides_exactly(g, (pres.q_pow(1) - pres.one()) ** n)
    return series_ok and exact_ok
