"""Exact integer arithmetic in q-deformed polynomial rings.

Polynomials live in Z[q, T_1..T_m] extended by generators eps_0 (the
arithmetic direction) and eps_1..eps_m (one per coordinate T_i), subject
to quadratic rewrite rules

    eps_0^2  -> q * (q^(p^alpha) - 1) * eps_0
    eps_i^2  -> (q^(p^alpha) - 1) * T_i * eps_i     (i >= 1)
    eps_i * eps_j -> 0                              (i != j)

Coefficients are arbitrary-precision integers and every identity check
is literal equality of fully reduced terms; nothing is truncated or
reduced mod p here.  The prime p and level alpha are concrete integers
fixed per presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

DEFAULT_MAX_QDEG = 4096


class ExponentOverflow(Exception):
    """A q- or T-exponent exceeded the presentation's configured bound."""


class NegativeQPower(Exception):
    """A negative q-exponent appeared in a presentation without q inverted."""


@dataclass(frozen=True)
class RingPresentation:
    """Roster of variables plus the eps rewrite rules, for fixed (p, alpha).

    ``has_eps0`` turns on the arithmetic generator eps_0; ``m`` is the
    number of geometric coordinates (each contributing T_i and eps_i).
    ``m == 0, has_eps0=True`` is the one-variable arithmetic ring;
    ``has_eps0=False, m >= 1`` is the purely geometric ring.
    """

    p: int
    alpha: int = 0
    m: int = 0
    has_eps0: bool = True
    q_invertible: bool = False
    max_qdeg: int = DEFAULT_MAX_QDEG
    max_tdeg: int = DEFAULT_MAX_QDEG

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if self.alpha < 0 or self.m < 0:
            raise ValueError("alpha and m must be nonnegative")
        if not self.has_eps0 and self.m == 0:
            raise ValueError("presentation needs at least one generator family")

    @property
    def n_eps(self) -> int:
        return (1 if self.has_eps0 else 0) + self.m

    def eps_label(self, idx: int) -> str:
        if self.has_eps0:
            return f"e{idx}"
        return f"e{idx + 1}"

    def t_index(self, idx: int) -> int:
        """Map an eps slot to its T slot, or -1 for the arithmetic eps_0."""
        if self.has_eps0:
            return idx - 1
        return idx

    def zero(self) -> "BigPoly":
        return BigPoly(self, {})

    def one(self) -> "BigPoly":
        return self.const(1)

    def const(self, c: int) -> "BigPoly":
        if c == 0:
            return BigPoly(self, {})
        return BigPoly(self, {self._key(0, (), ()): c})

    def q_pow(self, k: int) -> "BigPoly":
        return BigPoly(self, {self._key(k, (), ()): 1})

    def t_pow(self, i: int, k: int = 1) -> "BigPoly":
        te = [0] * self.m
        te[i] = k
        return BigPoly(self, {self._key(0, (), tuple(te)): 1})

    def eps(self, idx: int) -> "BigPoly":
        ee = [0] * self.n_eps
        ee[idx] = 1
        return BigPoly(self, {self._key(0, tuple(ee), ()): 1})

    def _key(self, qe, ee, te):
        ee = tuple(ee) if ee else (0,) * self.n_eps
        te = tuple(te) if te else (0,) * self.m
        return (qe, ee, te)

    def beta(self) -> "BigPoly":
        """q^(p^alpha) - 1, the square factor shared by all eps rules."""
        return self.q_pow(self.p**self.alpha) - self.one()

    def eps_square_factor(self, idx: int) -> "BigPoly":
        """F with eps_idx^2 -> F * eps_idx."""
        if self.has_eps0 and idx == 0:
            return self.q_pow(1) * self.beta()
        i = self.t_index(idx)
        return self.t_pow(i) * self.beta()

    def d_poly(self) -> "BigPoly":
        """[p]_{q^(p^alpha)}, the distinguished element."""
        return q_analogue(self, self.p, self.p**self.alpha)

    def frobenius_eps_unit(self, idx: int) -> "BigPoly":
        """u with phi(eps_idx) = u * eps_idx for the Frobenius lift phi."""
        if self.has_eps0 and idx == 0:
            return self.q_pow(self.p - 1) * self.d_poly()
        i = self.t_index(idx)
        return self.t_pow(i, self.p - 1) * self.d_poly()


class BigPoly:
    """Element of the presented ring, stored as reduced terms.

    Terms map (q-exponent, eps-exponents, T-exponents) to a nonzero int;
    after reduction every eps exponent is 0 or 1 and at most one eps is
    present per term.
    """

    __slots__ = ("pres", "terms")

    def __init__(self, pres: RingPresentation, terms: dict):
        self.pres = pres
        self.terms = terms

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _check_key(pres, qe, te):
        if qe < 0 and not pres.q_invertible:
            raise NegativeQPower(f"q^{qe} in a presentation without q inverted")
        if abs(qe) > pres.max_qdeg:
            raise ExponentOverflow(f"q-degree {qe} exceeds bound {pres.max_qdeg}")
        for t in te:
            if t > pres.max_tdeg:
                raise ExponentOverflow(f"T-degree {t} exceeds bound {pres.max_tdeg}")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BigPoly(self.pres, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return BigPoly(self.pres, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.pres.zero()
            return BigPoly(self.pres, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        pres = self.pres
        out: dict = {}
        pending = []
        for (q1, e1, t1), c1 in self.terms.items():
            for (q2, e2, t2), c2 in other.terms.items():
                qe = q1 + q2
                te = tuple(a + b for a, b in zip(t1, t2))
                ee = tuple(a + b for a, b in zip(e1, e2))
                pending.append((qe, ee, te, c1 * c2))
        while pending:
            qe, ee, te, c = pending.pop()
            live = [i for i, e in enumerate(ee) if e > 0]
            if len(live) > 1:
                continue  # eps_i * eps_j = 0
            if live and ee[live[0]] > 1:
                idx = live[0]
                fac = pres.eps_square_factor(idx)
                red = [0] * pres.n_eps
                red[idx] = ee[idx] - 1
                for (fq, fe, ft), fc in fac.terms.items():
                    pending.append(
                        (qe + fq, tuple(a + b for a, b in zip(red, fe)),
                         tuple(a + b for a, b in zip(te, ft)), c * fc)
                    )
                continue
            self._check_key(pres, qe, te)
            key = (qe, ee, te)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return BigPoly(pres, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = self.pres.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == self.pres.const(other).terms
        if not isinstance(other, BigPoly):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other):
        if isinstance(other, int):
            return self.pres.const(other)
        if isinstance(other, BigPoly):
            if other.pres is not self.pres and other.pres != self.pres:
                raise ValueError("mixed presentations")
            return other
        raise TypeError(f"cannot coerce {type(other)!r}")

    # -- endomorphisms -------------------------------------------------------

    def endomorphism(self, q_exp: int, t_images=None, eps_units=None) -> "BigPoly":
        """Apply q -> q^q_exp, T_i -> q^a * T_i^b, eps -> unit * eps.

        ``t_images`` maps T slot i to (a, b); slots absent stay fixed.
        ``eps_units`` maps eps slot to a BigPoly unit u (eps -> u*eps);
        slots absent stay fixed.
        """
        pres = self.pres
        t_images = t_images or {}
        eps_units = eps_units or {}
        out = pres.zero()
        for (qe, ee, te), c in self.terms.items():
            term = pres.q_pow(qe * q_exp) * c
            for i, t in enumerate(te):
                if t == 0:
                    continue
                a, b = t_images.get(i, (0, 1))
                term = term * pres.q_pow(a * t) * pres.t_pow(i, b * t)
            for idx, e in enumerate(ee):
                if e == 0:
                    continue
                term = term * pres.eps(idx)
                if idx in eps_units:
                    term = term * eps_units[idx]
            out = out + term
        return out

    def frobenius(self) -> "BigPoly":
        """The lift phi: q -> q^p, T_i -> T_i^p, eps -> unit * eps."""
        pres = self.pres
        units = {idx: pres.frobenius_eps_unit(idx) for idx in range(pres.n_eps)}
        t_images = {i: (0, pres.p) for i in range(pres.m)}
        return self.endomorphism(pres.p, t_images, units)

    def gamma0(self) -> "BigPoly":
        """q -> q^(p^(alpha+1)+1), fixing every T_i."""
        return self.endomorphism(self.pres.p ** (self.pres.alpha + 1) + 1)

    def gamma_t(self, i: int) -> "BigPoly":
        """T_i -> q^(p^(alpha+1)) * T_i, fixing q and the other T_j."""
        return self.endomorphism(1, {i: (self.pres.p ** (self.pres.alpha + 1), 1)})

    # -- coefficient queries -------------------------------------------------

    def coefficients_divisible_by(self, n: int) -> bool:
        return all(c % n == 0 for c in self.terms.values())

    def divide_coefficients(self, n: int) -> "BigPoly":
        if not self.coefficients_divisible_by(n):
            raise ValueError(f"coefficients not divisible by {n}")
        return BigPoly(self.pres, {k: c // n for k, c in self.terms.items()})

    def eval_q_one(self):
        """Specialize q -> 1 (only valid when no eps/T is present)."""
        total = 0
        for (qe, ee, te), c in self.terms.items():
            if any(ee) or any(te):
                raise ValueError("specialization requires a pure q-polynomial")
            total += c
        return total

    def q_coefficients(self) -> dict:
        """For pure q-polynomials, the map exponent -> coefficient."""
        out = {}
        for (qe, ee, te), c in self.terms.items():
            if any(ee) or any(te):
                raise ValueError("not a pure q-polynomial")
            out[qe] = c
        return out

    def eps_part(self, idx: int) -> "BigPoly":
        """Coefficient of eps_idx (terms with that eps stripped)."""
        pres = self.pres
        out = {}
        for (qe, ee, te), c in self.terms.items():
            if ee[idx] == 1:
                out[(qe, (0,) * pres.n_eps, te)] = c
        return BigPoly(pres, out)

    def eps_free_part(self) -> "BigPoly":
        out = {k: c for k, c in self.terms.items() if not any(k[1])}
        return BigPoly(self.pres, out)

    # -- canonical rendering ------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        pres = self.pres
        keys = sorted(self.terms, key=lambda k: (k[2], k[1], k[0]))
        parts = []
        for qe, ee, te in keys:
            c = self.terms[(qe, ee, te)]
            atoms = []
            if c != 1 or (qe == 0 and not any(ee) and not any(te)):
                atoms.append(str(c))
            if qe:
                atoms.append(f"q^{qe}" if qe != 1 else "q")
            for idx, e in enumerate(ee):
                if e:
                    atoms.append(pres.eps_label(idx))
            for i, t in enumerate(te):
                if t:
                    atoms.append(f"T{i + 1}^{t}" if t != 1 else f"T{i + 1}")
            parts.append("*".join(atoms))
        return " + ".join(parts)

    def __repr__(self):
        return f"BigPoly({self.render()})"


# -- q-analogues and identity checks ---------------------------------------


def q_analogue(pres: RingPresentation, n: int, base_exp: int = 1) -> BigPoly:
    """[n]_{q^base_exp} = 1 + q^b + ... + q^(b(n-1)), with [0] = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = pres.zero()
    for i in range(n):
        out = out + pres.q_pow(base_exp * i)
    return out


def psi_q_power(pres: RingPresentation, k: int) -> BigPoly:
    """psi(q^k) = q^k + eps_0 * [pk]_{q^(p^alpha)} * q^(k-1)."""
    if not pres.has_eps0:
        raise ValueError("presentation has no arithmetic eps")
    if k == 0:
        return pres.one()
    return pres.q_pow(k) + pres.eps(0) * q_analogue(pres, pres.p * k, pres.p**pres.alpha) * pres.q_pow(k - 1)


def psi_t_power(pres: RingPresentation, i: int, j: int) -> BigPoly:
    """psi(T_i^j) = T_i^j + eps_i * d * [j]_{q^(p^(alpha+1))} * T_i^(j-1)."""
    eps_idx = i + (1 if pres.has_eps0 else 0)
    if j == 0:
        return pres.one()
    lead = pres.t_pow(i, j)
    coeff = pres.d_poly() * q_analogue(pres, j, pres.p ** (pres.alpha + 1))
    return lead + pres.eps(eps_idx) * coeff * pres.t_pow(i, j - 1)


def psi_monomial(pres: RingPresentation, k: int, t_exps: Iterable[int] = ()) -> BigPoly:
    """psi of q^k * prod T_i^(a_i) via the closed forms of the factors."""
    out = psi_q_power(pres, k) if pres.has_eps0 else pres.q_pow(k)
    for i, a in enumerate(t_exps):
        out = out * psi_t_power(pres, i, a)
    return out


@dataclass
class CheckCase:
    case_id: str
    ok: bool
    witness: str = ""


@dataclass
class CheckReport:
    name: str
    cases: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def add(self, case_id: str, ok: bool, witness: str = ""):
        self.cases.append(CheckCase(case_id, ok, witness))


def verify_psi_hom(p: int, alpha: int, monomials: Iterable, m: int = 0) -> CheckReport:
    """Check psi(fg) = psi(f)psi(g) on all pairs, plus the q^k closed form.

    ``monomials`` is a list of (k, t_exps) pairs; plain ints mean pure q
    powers.  The closed form is anchored by comparing against iterated
    products of the generator images.
    """
    pres = RingPresentation(p, alpha, m=m, has_eps0=True)
    mono = []
    for entry in monomials:
        if isinstance(entry, int):
            mono.append((entry, (0,) * m))
        else:
            mono.append((entry[0], tuple(entry[1]) + (0,) * (m - len(entry[1]))))
    report = CheckReport(f"psi-hom p={p} alpha={alpha}")
    psi_q = psi_q_power(pres, 1)
    acc = pres.one()
    kmax = max((k for k, _ in mono), default=0)
    closed_by_power = {0: pres.one()}
    for k in range(1, kmax + 1):
        acc = acc * psi_q
        closed_by_power[k] = acc
        ok = acc == psi_q_power(pres, k)
        if not ok:
            report.add(f"closed-form k={k}", False, (acc - psi_q_power(pres, k)).render())
    report.add(f"closed-form k<= {kmax}", True, "psi(q)^k matches closed form")
    for a, (ka, ta) in enumerate(mono):
        for kb, tb in mono[a:]:
            f = psi_monomial(pres, ka, ta)
            g = psi_monomial(pres, kb, tb)
            prod_t = tuple(x + y for x, y in zip(ta, tb))
            fg = psi_monomial(pres, ka + kb, prod_t)
            ok = f * g == fg
            report.add(
                f"pair q^{ka}T^{ta} * q^{kb}T^{tb}", ok,
                "" if ok else (f * g - fg).render(),
            )
    return report


def verify_q_factorization(p: int, alpha: int, n: int, i: int) -> bool:
    """[i p^(n+alpha)]_{q^(p^(alpha+1))} =
    [p]_{q^(p^(alpha+n))} * [i p^alpha]_{q^(p^(alpha+n+1))} * [p^(n-1)]_{q^(p^(alpha+1))}.
    """
    if n < 1 or i < 0:
        raise ValueError("need n >= 1, i >= 0")
    pres = RingPresentation(p, alpha, m=0, has_eps0=True,
                            max_qdeg=max(DEFAULT_MAX_QDEG, 4 * i * p ** (n + 2 * alpha + 1) + 4))
    lhs = q_analogue(pres, i * p ** (n + alpha), p ** (alpha + 1))
    rhs = (
        q_analogue(pres, p, p ** (alpha + n))
        * q_analogue(pres, i * p**alpha, p ** (alpha + n + 1))
        * q_analogue(pres, p ** (n - 1), p ** (alpha + 1))
    )
    return lhs == rhs


def verify_gamma_relations(p: int, alpha: int, m: int) -> CheckReport:
    """gamma_0 gamma_i = gamma_i^(p^(alpha+1)+1) gamma_0 and gamma_i gamma_j
    = gamma_j gamma_i, checked on the generators q, T_1..T_m."""
    if m < 1:
        raise ValueError("need m >= 1")
    pres = RingPresentation(p, alpha, m=m, has_eps0=True)
    k = p ** (alpha + 1) + 1
    report = CheckReport(f"gamma-relations p={p} alpha={alpha} m={m}")

    def gamma_i_iter(x, i, times):
        for _ in range(times):
            x = x.gamma_t(i)
        return x

    gens = [("q", pres.q_pow(1))] + [(f"T{j + 1}", pres.t_pow(j)) for j in range(m)]
    for i in range(m):
        for label, g in gens:
            lhs = g.gamma_t(i).gamma0()
            rhs = gamma_i_iter(g.gamma0(), i, k)
            report.add(f"gamma0*gamma{i + 1} on {label}", lhs == rhs,
                       lhs.render() if lhs == rhs else f"{lhs.render()} != {rhs.render()}")
    for i in range(m):
        for j in range(i + 1, m):
            for label, g in gens:
                lhs = g.gamma_t(j).gamma_t(i)
                rhs = g.gamma_t(i).gamma_t(j)
                report.add(f"gamma{i + 1}*gamma{j + 1} on {label}", lhs == rhs)
    return report


def verify_phi_epsilon(p: int, alpha: int) -> CheckReport:
    """phi(eps) - eps^p has all coefficients divisible by p, so phi lifts
    the mod-p Frobenius; checked for the arithmetic and geometric rules."""
    report = CheckReport(f"phi-epsilon p={p} alpha={alpha}")

    pres = RingPresentation(p, alpha, m=0, has_eps0=True)
    diff = pres.eps(0).frobenius() - pres.eps(0) ** p
    report.add("arithmetic eps", diff.coefficients_divisible_by(p),
               "" if diff.coefficients_divisible_by(p) else diff.render())

    pres_g = RingPresentation(p, alpha, m=1, has_eps0=False)
    diff_g = pres_g.eps(0).frobenius() - pres_g.eps(0) ** p
    report.add("geometric eps", diff_g.coefficients_divisible_by(p),
               "" if diff_g.coefficients_divisible_by(p) else diff_g.render())
    return report


# -- exact univariate division (pure q-polynomials) -------------------------


def poly_divmod_monic(f: BigPoly, g: BigPoly):
    """Exact division of pure q-polynomials by a monic g, over Z.

    Returns (quotient, remainder) with deg remainder < deg g.
    """
    fc = f.q_coefficients()
    gc = g.q_coefficients()
    if not gc:
        raise ZeroDivisionError("division by zero polynomial")
    gdeg = max(gc)
    if gc[gdeg] != 1:
        raise ValueError("divisor must be monic")
    if min(gc) < 0 or (fc and min(fc) < 0):
        raise ValueError("negative exponents not supported here")
    rem = dict(fc)
    quo: dict = {}
    while rem:
        deg = max(rem)
        if deg < gdeg:
            break
        c = rem[deg]
        quo[deg - gdeg] = quo.get(deg - gdeg, 0) + c
        for e, gcoef in gc.items():
            k = deg - gdeg + e
            s = rem.get(k, 0) - c * gcoef
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    pres = f.pres
    mk = lambda d: BigPoly(pres, {pres._key(e, (), ()): c for e, c in d.items() if c})
    return mk(quo), mk(rem)


def divides_exactly(f: BigPoly, g: BigPoly) -> bool:
    """True when the monic pure q-polynomial g divides f over Z."""
    _, rem = poly_divmod_monic(f, g)
    return not rem


def verify_e_beta(p: int, alpha: int) -> bool:
    """d'(q) * q * (q^(p^alpha)-1) - p^(alpha+1) is divisible by d in Z[q]."""
    pres = RingPresentation(p, alpha, m=0, has_eps0=True)
    d = pres.d_poly()
    dprime = pres.zero()
    for e, c in d.q_coefficients().items():
        if e:
            dprime = dprime + pres.q_pow(e - 1) * (c * e)
    expr = dprime * pres.q_pow(1) * pres.beta() - pres.const(p ** (alpha + 1))
    return divides_exactly(expr, d)
