"""Iterated Ore extensions with confluent rewriting to a normal form.

Two conventions are supported and never mixed:

* relative: generators nabla_1..nabla_m over the chart ring, with the
  twist T_i -> q^p T_i and no arithmetic generator;
* absolute: generators partial, nabla_1..nabla_m, twists
  q -> q^(p^(alpha+1)+1) and T_i -> q^(p^(alpha+1)) T_i, and the mixed
  commutation law

      partial * nabla_i = s0^(-1) (1 + beta q D_i) nabla_i * partial
                          + (s0^(-1) D_i - s1) * nabla_i

  where D_i is the fixed finite correction operator in nabla_i.

Normal form: scalar coefficient on the left, then T-monomial, then the
nabla letters in ascending index, then partial rightmost.  Scalars can
live in the series ring A, in A/d^n, or in the residue field; the same
rewriting engine runs over each.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exactcore import BigPoly, RingPresentation, q_analogue
from .padic import (
    QuotientRing,
    TruncSeries,
    partial_arith,
)


# ---------------------------------------------------------------------------
# scalar contexts
# ---------------------------------------------------------------------------


class SeriesScalars:
    """Scalars in the truncated series ring A = (Z/p^N)[[t]]/(t^M)."""

    kind = "series"

    def __init__(self, p, N, M, alpha, convention="absolute"):
        self.p, self.N, self.M, self.alpha = p, N, M, alpha
        self.convention = convention
        self.tw = p ** (alpha + 1) if convention == "absolute" else p
        self.beta_alpha = alpha if convention == "absolute" else 0
        self.k = self.tw + 1
        self._gamma_img = TruncSeries.q_power(p, N, M, self.k)
        self.beta = (TruncSeries.q_power(p, N, M, p**self.beta_alpha)
                     - TruncSeries.one(p, N, M))
        self.q = TruncSeries.q_power(p, N, M, 1)
        self._scalar_cache = {}

    def zero(self):
        return TruncSeries.zero(self.p, self.N, self.M)

    def one(self):
        return TruncSeries.one(self.p, self.N, self.M)

    def const(self, c):
        return TruncSeries.const(self.p, self.N, self.M, c)

    def q_pow(self, k):
        return TruncSeries.q_power(self.p, self.N, self.M, k)

    def is_zero(self, s):
        return s.is_zero()

    def droppable(self, s):
        # only a full-precision zero may be discarded; a reduced-precision
        # zero still carries uncertainty that sums must inherit
        return s.is_zero() and s.N >= self.N and s.M >= self.M

    def gamma0(self, s):
        return s.subst(self._gamma_img)

    def partial(self, s):
        return partial_arith(s, self.beta_alpha)

    def nabla_factor(self, j: int):
        """nabla(T^j) / T^(j-1) = [jp]_{q^(p^alpha_eff)}."""
        key = ("nf", j)
        if key not in self._scalar_cache:
            self._scalar_cache[key] = TruncSeries.q_analogue(
                self.p, self.N, self.M, j * self.p, self.p**self.beta_alpha)
        return self._scalar_cache[key]

    def gamma_t_factor(self, j: int):
        return self.q_pow(j * self.tw)

    # -- mixed-law scalars ---------------------------------------------------

    def _k_series(self, base):
        return TruncSeries.q_analogue(self.p, self.N, self.M, self.k, base)

    def s0(self):
        if "s0" not in self._scalar_cache:
            ka = self._k_series(self.p**self.alpha)
            kb = self._k_series(self.p ** (self.alpha + 1))
            self._scalar_cache["s0"] = ka * kb.unit_inverse()
        return self._scalar_cache["s0"]

    def s0_inv(self):
        if "s0i" not in self._scalar_cache:
            self._scalar_cache["s0i"] = self.s0().unit_inverse()
        return self._scalar_cache["s0i"]

    def s1(self):
        """-partial(d)/d = -sum_i [i p^alpha]_{q^(p^(alpha+1))} q^(i p^alpha - 1)."""
        if "s1" not in self._scalar_cache:
            p, alpha = self.p, self.alpha
            acc = self.zero()
            qinv = self.q_pow(1).unit_inverse()
            for i in range(1, p):
                acc = acc + (TruncSeries.q_analogue(p, self.N, self.M,
                                                    i * p**alpha, p ** (alpha + 1))
                             * self.q_pow(i * p**alpha) * qinv)
            self._scalar_cache["s1"] = -acc
        return self._scalar_cache["s1"]

    def akj_table(self, kmax: int) -> dict:
        """a_{k,j} over A: a_{k+1,j} = a_{k,j}(1 + beta d [j]) + a_{k,j-1}."""
        p = self.p
        bd = self.q_pow(self.tw) - self.one()  # beta * d
        table = {(1, 1): self.one()}
        for k in range(1, kmax):
            for j in range(1, k + 2):
                prev = table.get((k, j), self.zero())
                prev_lower = table.get((k, j - 1), self.one() if j == 1 else self.zero())
                bracket = TruncSeries.q_analogue(p, self.N, self.M, j,
                                                 self.tw)
                table[(k + 1, j)] = prev * (self.one() + bd * bracket) + prev_lower
        return table

    def d_coeffs(self) -> dict:
        """Coefficients c_j of D = sum_j c_j T^(j-1) nabla^(j-1), j = 2..k."""
        if "dc" not in self._scalar_cache:
            k = self.k
            table = self.akj_table(k)
            kb_inv = self._k_series(self.p ** (self.alpha + 1)).unit_inverse()
            qinv = self.q_pow(1).unit_inverse()
            out = {}
            for j in range(2, k + 1):
                a_j = table[(k, j)]
                out[j] = (a_j * kb_inv * qinv
                          * self.q_pow(j * (j - 1) // 2 * self.tw)
                          * self.beta ** (j - 2))
            self._scalar_cache["dc"] = out
        return self._scalar_cache["dc"]


class QuotScalars:
    """Scalars in A/d^n; the twisted maps descend since they preserve (d)."""

    kind = "quot"

    def __init__(self, ring: QuotientRing, convention="absolute"):
        self.ring = ring
        self.p, self.alpha = ring.p, ring.alpha
        self.convention = convention
        self.tw = self.p ** (self.alpha + 1) if convention == "absolute" else self.p
        self.beta_alpha = self.alpha if convention == "absolute" else 0
        self.k = self.tw + 1
        self._gamma_mat = ring.endo_matrix(self.k)
        self._partial_mat = ring.partial_matrix()
        self.beta = ring.q_power(self.p**self.beta_alpha) - ring.one()
        self._cache = {}

    def zero(self):
        return self.ring.zero()

    def one(self):
        return self.ring.one()

    def const(self, c):
        return self.ring.const(c)

    def q_pow(self, k):
        return self.ring.q_power(k)

    def is_zero(self, s):
        return s.is_zero()

    def droppable(self, s):
        return s.is_zero() and s.prec >= self.ring.N

    def gamma0(self, s):
        return s.apply_matrix(self._gamma_mat)

    def partial(self, s):
        return s.apply_matrix(self._partial_mat)

    def _qan(self, n, base):
        out = self.ring.zero()
        for i in range(n):
            out = out + self.ring.q_power(base * i)
        return out

    def nabla_factor(self, j):
        return self._qan(j * self.p, self.p**self.beta_alpha)

    def gamma_t_factor(self, j):
        return self.ring.q_power(j * self.tw)

    def s0(self):
        if "s0" not in self._cache:
            self._cache["s0"] = (self._qan(self.k, self.p**self.alpha)
                                 * self._qan(self.k, self.p ** (self.alpha + 1)).unit_inverse())
        return self._cache["s0"]

    def s0_inv(self):
        if "s0i" not in self._cache:
            self._cache["s0i"] = self.s0().unit_inverse()
        return self._cache["s0i"]

    def s1(self):
        if "s1" not in self._cache:
            acc = self.zero()
            qinv = self.ring.q_power(1).unit_inverse()
            for i in range(1, self.p):
                acc = acc + (self._qan(i * self.p**self.alpha, self.p ** (self.alpha + 1))
                             * self.ring.q_power(i * self.p**self.alpha) * qinv)
            self._cache["s1"] = -acc
        return self._cache["s1"]

    def akj_table(self, kmax):
        bd = self.ring.q_power(self.tw) - self.one()
        table = {(1, 1): self.one()}
        for k in range(1, kmax):
            for j in range(1, k + 2):
                prev = table.get((k, j), self.zero())
                prev_lower = table.get((k, j - 1), self.one() if j == 1 else self.zero())
                table[(k + 1, j)] = prev * (self.one() + bd * self._qan(j, self.tw)) + prev_lower
        return table

    def d_coeffs(self):
        if "dc" not in self._cache:
            k = self.k
            table = self.akj_table(k)
            kb_inv = self._qan(k, self.p ** (self.alpha + 1)).unit_inverse()
            qinv = self.ring.q_power(1).unit_inverse()
            out = {}
            for j in range(2, k + 1):
                out[j] = (table[(k, j)] * kb_inv * qinv
                          * self.ring.q_power(j * (j - 1) // 2 * self.tw)
                          * self.beta ** (j - 2))
            self._cache["dc"] = out
        return self._cache["dc"]


class ResidueScalars:
    """Scalars in the residue field A/(p, d, q-1); all twists trivialize."""

    kind = "residue"

    def __init__(self, p, alpha, convention="absolute"):
        self.p, self.alpha = p, alpha
        self.convention = convention
        self.tw = p ** (alpha + 1) if convention == "absolute" else p
        self.k = self.tw + 1

    def zero(self):
        return 0

    def one(self):
        return 1

    def const(self, c):
        return c % self.p

    def q_pow(self, k):
        return 1

    def is_zero(self, s):
        return s % self.p == 0

    def droppable(self, s):
        return s % self.p == 0

    def gamma0(self, s):
        return s

    def partial(self, s):
        return 0

    def nabla_factor(self, j):
        return (j * self.p) % self.p

    def gamma_t_factor(self, j):
        return 1

    def s0(self):
        return pow(self.k % self.p, -1, self.p)

    def s0_inv(self):
        return self.k % self.p

    def s1(self):
        # -e mod (p, q-1): e = sum_{i=1}^{p-1} i p^alpha q^(i p^alpha - 1)
        e = (self.p**self.alpha * (self.p - 1) * self.p // 2) % self.p
        return (-e) % self.p

    def d_coeffs(self):
        c2 = (math.comb(self.k, 2) * pow(self.k % self.p, -1, self.p)) % self.p
        out = {2: c2}
        for j in range(3, self.k + 1):
            out[j] = 0
        return out


# ---------------------------------------------------------------------------
# the algebra and its elements
# ---------------------------------------------------------------------------


class OreAlgebra:
    """Iterated Ore extension over a scalar context.

    ``m`` is the number of nabla generators; ``with_partial`` turns on the
    arithmetic generator (absolute convention only).
    """

    def __init__(self, ctx, m: int, with_partial: bool = True, tcap: int = 64):
        if with_partial and ctx.convention != "absolute":
            raise ValueError("the arithmetic generator needs the absolute convention")
        self.ctx = ctx
        self.m = m
        self.with_partial = with_partial
        self.tcap = tcap
        self._rule_cache = {}
        self._past_cache = {}

    # -- element constructors ----------------------------------------------

    def zero(self):
        return OreElement(self, {})

    def one(self):
        return self.scalar(self.ctx.one())

    def scalar(self, s):
        z = (0,) * self.m
        return OreElement(self, {(z, z, 0): s})

    def const(self, c: int):
        return self.scalar(self.ctx.const(c))

    def T(self, i: int, j: int = 1):
        te = [0] * self.m
        te[i] = j
        z = (0,) * self.m
        return OreElement(self, {(tuple(te), z, 0): self.ctx.one()})

    def nabla(self, i: int, j: int = 1):
        ne = [0] * self.m
        ne[i] = j
        z = (0,) * self.m
        return OreElement(self, {(z, tuple(ne), 0): self.ctx.one()})

    def partial(self, j: int = 1):
        if not self.with_partial:
            raise ValueError("algebra has no arithmetic generator")
        z = (0,) * self.m
        return OreElement(self, {(z, z, j): self.ctx.one()})

    def monomial(self, texps, nexps, pexp, coeff=None):
        return OreElement(self, {(tuple(texps), tuple(nexps), pexp):
                                 coeff if coeff is not None else self.ctx.one()})

    # -- the partial past nabla rule -----------------------------------------

    def rule_partial_nabla(self, i: int) -> "OreElement":
        """Normal form of partial * nabla_i (precomputed per index)."""
        if i in self._rule_cache:
            return self._rule_cache[i]
        ctx = self.ctx
        s0i = ctx.s0_inv()
        s1 = ctx.s1()
        bq = ctx.beta * ctx.q_pow(1) if ctx.kind != "residue" else 0
        dcs = ctx.d_coeffs()
        terms = {}
        z = (0,) * self.m

        def put(te, ne, b, s):
            key = (tuple(te), tuple(ne), b)
            terms[key] = terms[key] + s if key in terms else s

        ne1 = [0] * self.m
        ne1[i] = 1
        put(z, ne1, 1, s0i)                       # s0^-1 nabla_i partial
        put(z, ne1, 0, (-s1) if ctx.kind != "residue" else (-s1) % ctx.p)
        for j, cj in dcs.items():
            if ctx.is_zero(cj):
                continue
            te = [0] * self.m
            te[i] = j - 1
            nej = [0] * self.m
            nej[i] = j
            put(te, nej, 1, s0i * bq * cj)        # s0^-1 beta q D nabla^j partial
            put(te, nej, 0, s0i * cj)             # s0^-1 D nabla^j
        out = OreElement(self, terms)
        self._rule_cache[i] = out
        return out

    def partial_past_nablas(self, nexps: tuple, order_rng=None) -> "OreElement":
        """Normal form of partial * nabla^nexps, memoized.

        ``order_rng`` randomizes which index is rewritten first; the
        normal form must not depend on it (confluence evidence).
        """
        if not any(nexps):
            return self.partial()
        if order_rng is None and nexps in self._past_cache:
            return self._past_cache[nexps]
        live = [i for i, e in enumerate(nexps) if e > 0]
        i = order_rng.choice(live) if order_rng is not None else live[0]
        rest = list(nexps)
        rest[i] -= 1
        rest = tuple(rest)
        out = self.zero()
        for (te, ne, b), s in self.rule_partial_nabla(i).terms.items():
            if b == 0:
                # pure nabla letters commute with the remaining nablas
                combined_ne = tuple(a + c for a, c in zip(ne, rest))
                out = out + OreElement(self, {(te, combined_ne, 0): s})
            else:
                # s T^te nabla^ne partial * nabla^rest: resolve the inner
                # partial first, then push the nabla letters through the
                # T-monomials of the tail with the proper twist rule
                tail = self.partial_past_nablas(rest, order_rng)
                piece = tail
                for idx in range(self.m):
                    for _ in range(ne[idx]):
                        piece = _nabla_times(self, idx, piece)
                piece = _tmono_times(self, te, piece)
                out = out + piece.scalar_mul(s)
        if order_rng is None:
            self._past_cache[nexps] = out
        return out


class OreElement:
    """Normal-form element: map (T-exps, nabla-exps, partial-exp) -> scalar."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: OreAlgebra, terms: dict):
        self.alg = alg
        ctx = alg.ctx
        clean = {}
        for key, s in terms.items():
            if any(t > alg.tcap for t in key[0]):
                raise OverflowError(f"T-degree beyond cap {alg.tcap}")
            if key[2] and not alg.with_partial:
                raise ValueError("algebra has no arithmetic generator")
            if not ctx.droppable(s):
                clean[key] = s
        self.terms = clean

    def __add__(self, other):
        out = dict(self.terms)
        for k, s in other.terms.items():
            out[k] = out[k] + s if k in out else s
        return OreElement(self.alg, out)

    def __neg__(self):
        return OreElement(self.alg, {k: -s for k, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scalar_mul(self, s):
        return OreElement(self.alg, {k: s * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return all(self.alg.ctx.is_zero(s) for s in self.terms.values())

    def __eq__(self, other):
        return (self - other).is_zero()

    # -- multiplication -------------------------------------------------------

    def __mul__(self, other, order_rng=None):
        return self.mul(other, order_rng)

    def mul(self, other: "OreElement", order_rng=None) -> "OreElement":
        alg = self.alg
        out = alg.zero()
        for (te, ne, b), s in self.terms.items():
            piece = other
            for _ in range(b):
                piece = _partial_times(alg, piece, order_rng)
            for i in range(alg.m):
                for _ in range(ne[i]):
                    piece = _nabla_times(alg, i, piece)
            piece = _tmono_times(alg, te, piece)
            out = out + piece.scalar_mul(s)
        return out

    def __pow__(self, n: int):
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    # -- the left-module action on the base ring ------------------------------

    def act(self, f: dict) -> dict:
        """Act on a base element {T-exps: scalar}; partial acts via the
        arithmetic derivation, nabla_i via the geometric one."""
        alg = self.alg
        out: dict = {}
        for (te, ne, b), s in self.terms.items():
            g = f
            for _ in range(b):
                g = base_partial(alg, g)
            for i in range(alg.m):
                for _ in range(ne[i]):
                    g = base_nabla(alg, i, g)
            for mono, c in g.items():
                key = tuple(x + y for x, y in zip(mono, te))
                val = s * c
                out[key] = out[key] + val if key in out else val
        return {k: v for k, v in out.items() if not alg.ctx.is_zero(v)}

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (te, ne, b) in sorted(self.terms):
            s = self.terms[(te, ne, b)]
            atoms = [f"({s.render()})" if hasattr(s, "render") else f"({s})"]
            for i, t in enumerate(te):
                if t:
                    atoms.append(f"T{i + 1}^{t}")
            for i, n in enumerate(ne):
                if n:
                    atoms.append(f"nabla{i + 1}^{n}")
            if b:
                atoms.append(f"partial^{b}")
            bits.append("*".join(atoms))
        return " + ".join(bits)

    def __repr__(self):
        return f"OreElement({self.render()})"


def _nabla_times(alg: OreAlgebra, i: int, x: OreElement) -> OreElement:
    """nabla_i * x for x in normal form."""
    ctx = alg.ctx
    out: dict = {}

    def put(key, s):
        out[key] = out[key] + s if key in out else s

    for (te, ne, b), s in x.terms.items():
        j = te[i]
        ne_up = list(ne)
        ne_up[i] += 1
        # nabla_i T_i^j = q^(j tw) T_i^j nabla_i + [jp] T_i^(j-1)
        put((te, tuple(ne_up), b), s * ctx.gamma_t_factor(j))
        if j > 0:
            te_dn = list(te)
            te_dn[i] -= 1
            put((tuple(te_dn), ne, b), s * ctx.nabla_factor(j))
    return OreElement(alg, out)


def _partial_times(alg: OreAlgebra, x: OreElement, order_rng=None) -> OreElement:
    """partial * x for x in normal form."""
    ctx = alg.ctx
    out = alg.zero()
    for (te, ne, b), s in x.terms.items():
        gs, ds = ctx.gamma0(s), ctx.partial(s)
        # partial commutes with T-monomials (gamma0 fixes T, partial(T) = 0)
        if any(ne):
            past = alg.partial_past_nablas(ne, order_rng)
            moved = OreElement(
                alg, {(tuple(a + c for a, c in zip(te, t2)), n2, b2 + b): gs * s2
                      for (t2, n2, b2), s2 in past.terms.items()})
            out = out + moved
        else:
            out = out + OreElement(alg, {(te, ne, b + 1): gs})
        if not ctx.is_zero(ds):
            out = out + OreElement(alg, {(te, ne, b): ds})
    return out


def _tmono_times(alg: OreAlgebra, te: tuple, x: OreElement) -> OreElement:
    if not any(te):
        return x
    return OreElement(alg, {(tuple(a + b for a, b in zip(te, t2)), n2, b2): s
                            for (t2, n2, b2), s in x.terms.items()})


# -- base-ring operators -----------------------------------------------------


def base_partial(alg: OreAlgebra, f: dict) -> dict:
    ctx = alg.ctx
    out = {}
    for mono, s in f.items():
        d = ctx.partial(s)
        if not ctx.droppable(d):
            out[mono] = out[mono] + d if mono in out else d
    return out


def base_nabla(alg: OreAlgebra, i: int, f: dict) -> dict:
    ctx = alg.ctx
    out = {}
    for mono, s in f.items():
        j = mono[i]
        if j == 0:
            continue
        dn = list(mono)
        dn[i] -= 1
        key = tuple(dn)
        val = s * ctx.nabla_factor(j)
        if not ctx.droppable(val):
            out[key] = out[key] + val if key in out else val
    return out


def base_mul_scalar(alg, f: dict, s) -> dict:
    return {k: v * s for k, v in f.items()}


def base_D_op(alg: OreAlgebra, i: int, f: dict) -> dict:
    """D_i = sum_j c_j T_i^(j-1) nabla_i^(j-1) as a base operator."""
    ctx = alg.ctx
    out: dict = {}
    for j, cj in ctx.d_coeffs().items():
        if ctx.is_zero(cj):
            continue
        g = f
        for _ in range(j - 1):
            g = base_nabla(alg, i, g)
        for mono, s in g.items():
            up = list(mono)
            up[i] += j - 1
            key = tuple(up)
            val = s * cj
            out[key] = out[key] + val if key in out else val
    return {k: v for k, v in out.items() if not ctx.droppable(v)}


def base_add(alg, f: dict, g: dict) -> dict:
    out = dict(f)
    for k, v in g.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not alg.ctx.droppable(v)}


def base_eq(alg, f: dict, g: dict) -> bool:
    diff = base_add(alg, f, {k: -v for k, v in g.items()})
    return all(alg.ctx.is_zero(v) for v in diff.values())


# ---------------------------------------------------------------------------
# verification entry points
# ---------------------------------------------------------------------------


@dataclass
class OreReport:
    name: str
    cases: list

    @property
    def ok(self):
        return all(ok for _, ok in self.cases)


def make_absolute_algebra(p, alpha, m=1, N=8, M=32, tcap=64) -> OreAlgebra:
    return OreAlgebra(SeriesScalars(p, N, M, alpha, "absolute"), m,
                      with_partial=True, tcap=tcap)


def make_relative_algebra(p, m=1, N=8, M=32, tcap=64) -> OreAlgebra:
    return OreAlgebra(SeriesScalars(p, N, M, 0, "relative"), m,
                      with_partial=False, tcap=tcap)


def verify_master_relation(p: int, alpha: int, bound: int = 6,
                           N: int = 8, M: int = 32) -> OreReport:
    """(1 + beta q D) nabla partial = s0 (partial - s0^(-1) D + s1) nabla
    as operators, evaluated two-sidedly on the monomials q^a T^b."""
    alg = make_absolute_algebra(p, alpha, m=1, N=N, M=M,
                                tcap=2 * bound + 4 * p ** (alpha + 1) + 8)
    ctx = alg.ctx
    s0, s1 = ctx.s0(), ctx.s1()
    bq = ctx.beta * ctx.q_pow(1)
    cases = []
    for a in range(bound + 1):
        for b in range(bound + 1):
            f = {(b,): ctx.q_pow(a)}
            lhs_inner = base_nabla(alg, 0, base_partial(alg, f))
            lhs = base_add(alg, lhs_inner,
                           base_mul_scalar(alg, base_D_op(alg, 0, lhs_inner), bq))
            nf = base_nabla(alg, 0, f)
            rhs = base_mul_scalar(alg, base_partial(alg, nf), s0)
            rhs = base_add(alg, rhs, {k: -v for k, v in base_D_op(alg, 0, nf).items()})
            rhs = base_add(alg, rhs, base_mul_scalar(alg, nf, s0 * s1))
            cases.append((f"q^{a} T^{b}", base_eq(alg, lhs, rhs)))
    # s1 = -partial(d)/d, read off from the action on T
    d = TruncSeries.d_series(p, N, M, alpha)
    cases.append(("s0*(partial(d) + s1*d) = 0",
                  (s0 * (ctx.partial(d) + s1 * d)).is_zero()))
    cases.append(("s0*(1 - s1*beta*q) = 1",
                  (s0 * (ctx.one() - s1 * bq) - ctx.one()).is_zero()))
    return OreReport(f"master-relation p={p} alpha={alpha}", cases)


def verify_double_complex_rows(p: int, alpha: int, bound: int = 4,
                               N: int = 8, M: int = 32) -> OreReport:
    """Square-commutation law behind the two-row double complex, m = 2:

        W_empty nabla_2 = (1 + beta q D_2) nabla_2 W_{1}

    (and the mirror with 1 <-> 2), where W_empty and W_{i} are the
    column maps on 0- and 1-forms, evaluated on monomials q^a T1^b T2^c.
    """
    alg = make_absolute_algebra(p, alpha, m=2, N=N, M=M,
                                tcap=2 * bound + 6 * p ** (alpha + 1) + 8)
    ctx = alg.ctx
    s0, s1 = ctx.s0(), ctx.s1()
    bq = ctx.beta * ctx.q_pow(1)

    def W1(f, j):  # s0 partial + s0 s1 - D_j
        out = base_mul_scalar(alg, base_partial(alg, f), s0)
        out = base_add(alg, out, base_mul_scalar(alg, f, s0 * s1))
        return base_add(alg, out, {k: -v for k, v in base_D_op(alg, j, f).items()})

    def W0(f):  # s0^2 partial + (s0 + s0^2) s1 - D_1 - D_2 - beta q D_1 D_2
        out = base_mul_scalar(alg, base_partial(alg, f), s0 * s0)
        out = base_add(alg, out, base_mul_scalar(alg, f, (s0 + s0 * s0) * s1))
        out = base_add(alg, out, {k: -v for k, v in base_D_op(alg, 0, f).items()})
        out = base_add(alg, out, {k: -v for k, v in base_D_op(alg, 1, f).items()})
        dd = base_D_op(alg, 0, base_D_op(alg, 1, f))
        return base_add(alg, out, base_mul_scalar(alg, dd, -bq))

    cases = []
    for a in range(bound + 1):
        for b in range(bound + 1):
            for c in range(bound + 1):
                f = {(b, c): ctx.q_pow(a)}
                for wedge, other in ((1, 0), (0, 1)):
                    lhs = W0(base_nabla(alg, wedge, f))
                    rhs = base_nabla(alg, wedge, W1(f, other))
                    rhs = base_add(alg, rhs,
                                   base_mul_scalar(alg,
                                                   base_D_op(alg, wedge,
                                                             base_nabla(alg, wedge, W1(f, other))),
                                                   bq))
                    cases.append((f"q^{a}T1^{b}T2^{c} wedge{wedge + 1}",
                                  base_eq(alg, lhs, rhs)))
    return OreReport(f"double-complex rows p={p} alpha={alpha}", cases)


def akj_exact(p: int, alpha: int, kmax: int) -> dict:
    """The a_{k,j} recursion over exact Z[q]."""
    pres = RingPresentation(p, alpha, m=0, has_eps0=True, max_qdeg=1 << 30)
    tw = p ** (alpha + 1)
    bd = pres.q_pow(tw) - pres.one()
    table = {(1, 1): pres.one()}
    for k in range(1, kmax):
        for j in range(1, k + 2):
            prev = table.get((k, j), pres.zero())
            prev_lower = table.get((k, j - 1), pres.one() if j == 1 else pres.zero())
            table[(k + 1, j)] = prev * (pres.one() + bd * q_analogue(pres, j, tw)) + prev_lower
    return table


def akj_operator_oracle(p: int, alpha: int, kmax: int, nmax: int = 8) -> bool:
    """Check the recursion against brute operator expansion over Z[q, T]:
    (Id + T beta nabla)^k T^n = T^n + sum_j a_{k,j} beta^j q^(j(j-1)tw/2)
    T^j nabla^j (T^n), evaluated exactly."""
    pres = RingPresentation(p, alpha, m=1, has_eps0=False,
                            max_qdeg=1 << 30, max_tdeg=1 << 30)
    tw = p ** (alpha + 1)
    beta = pres.q_pow(p**alpha) - pres.one()

    def nabla(f: BigPoly) -> BigPoly:
        out = pres.zero()
        for (qe, ee, te), c in f.terms.items():
            j = te[0]
            if j:
                out = out + (pres.q_pow(qe) * c * pres.t_pow(0, j - 1)
                             * q_analogue(pres, j * p, p**alpha))
        return out

    def step(f):
        return f + pres.t_pow(0) * beta * nabla(f)

    table = akj_exact(p, alpha, kmax)
    for k in range(1, kmax + 1):
        for n in range(1, nmax + 1):
            actual = pres.t_pow(0, n)
            for _ in range(k):
                actual = step(actual)
            expected = pres.t_pow(0, n)
            nabla_pow = pres.t_pow(0, n)
            for j in range(1, k + 1):
                nabla_pow = nabla(nabla_pow)
                a = table[(k, j)]
                # a_{k,j} lives in Z[q] with the plain-eps presentation
                a_here = pres.zero()
                for e, c in a.q_coefficients().items():
                    a_here = a_here + pres.q_pow(e) * c
                expected = expected + (a_here * beta**j
                                       * pres.q_pow(j * (j - 1) // 2 * tw)
                                       * pres.t_pow(0, j) * nabla_pow)
            if actual != expected:
                return False
    return True


def akj_mod_d_binomial(p: int, alpha: int) -> bool:
    """a_{k,j} = C(k,j) mod d for k = p^(alpha+1)+1 (exact remainders)."""
    from .exactcore import divides_exactly
    k = p ** (alpha + 1) + 1
    table = akj_exact(p, alpha, k)
    pres = RingPresentation(p, alpha, m=0, has_eps0=True, max_qdeg=1 << 30)
    d = pres.d_poly()
    for j in range(1, k + 1):
        diff = table[(k, j)] - pres.const(math.comb(k, j))
        if diff and not divides_exactly(diff, d):
            return False
    return True


def commutator_mod_residue(p: int, alpha: int) -> "OreElement":
    """partial*nabla - nabla*partial in the mod-(d, q-1) specialization."""
    alg = OreAlgebra(ResidueScalars(p, alpha), m=1, with_partial=True, tcap=16)
    return alg.partial() * alg.nabla(0) - alg.nabla(0) * alg.partial()


def specialize_mod_d_checks(p: int, alpha: int, N: int = 8, n: int = 1) -> OreReport:
    """The induced algebra over A/d^n: s0 and s1 take their specialized
    values and the rewrite rule matches the binomial form."""
    ring = QuotientRing(p, N, alpha, n)
    ctx = QuotScalars(ring)
    k = p ** (alpha + 1) + 1
    cases = []
    if n == 1:
        # s0 = 1/k and s1 = -e on the quotient
        kinv = ring.const(k).unit_inverse()
        cases.append(("s0 = 1/(p^(alpha+1)+1) mod d", ctx.s0() == kinv))
        d = d_prime_elem(ring)
        cases.append(("s1 = -d'(q) mod d", ctx.s1() == -d))
    alg = OreAlgebra(ctx, m=1, with_partial=True, tcap=32)
    # the rewrite rule is internally consistent: partial*(nabla*x) == (partial*nabla)*x
    x = alg.T(0) + alg.const(2)
    lhs = alg.partial().mul(alg.nabla(0).mul(x))
    rhs = (alg.partial() * alg.nabla(0)).mul(x)
    cases.append(("rule associativity spot check", lhs == rhs))
    return OreReport(f"specialize mod d^{n} p={p} alpha={alpha}", cases)


def d_prime_elem(ring: QuotientRing):
    """d'(q) in A/d^n."""
    from .padic import d_poly_q
    dq = d_poly_q(ring.p, ring.alpha)
    return ring.from_q_poly({e - 1: c * e for e, c in enumerate(dq) if e and c})
