"""Modules with q-connection / q-Higgs data and their cohomology.

Modules are finite free over A/d^n, carried as operator matrices.  The
arithmetic operator is gamma_0-semilinear over the base, so its
flattened Z/p^N-matrix is (D-blocks) * gamma_0 + partial; the geometric
operators are linear once the T-action is fixed (the bundled examples
use the fiber T = 0, where the correction operators D_i vanish).
Cohomology is computed by flattening everything to Z/p^N and reading
kernels and cokernels off integer lattice normal forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .padic import (
    QuotElem,
    QuotientRing,
    coker_invariants_mod,
    inv_mod,
    ker_basis_mod,
    mat_eq_mod,
    mat_identity,
    mat_mul_mod,
    subquotient_invariants,
    vp_factorial,
    vp_int,
)


# ---------------------------------------------------------------------------
# modules and flattening
# ---------------------------------------------------------------------------


@dataclass
class QConnModule:
    """Finite free A/d^n-module with operator matrices.

    ``D`` is the arithmetic operator (gamma_0-semilinear over the base),
    ``N_list`` the geometric ones, ``theta_list`` the T-actions (zero
    when omitted: the fiber at T = 0).  ``tag`` is one of "absolute",
    "relative", "mixed".
    """

    ring: QuotientRing
    rank: int
    D: list = None
    N_list: list = field(default_factory=list)
    theta_list: list = None
    tag: str = "absolute"
    # plain matrices instead of the gamma_0-semilinear structure action;
    # over A/d (n = 1) the two coincide since the base maps trivialize
    scalar_operators: bool = False

    @property
    def m(self) -> int:
        return len(self.N_list)

    def scalar_matrix(self, x: QuotElem) -> list:
        return [[x if i == j else self.ring.zero() for j in range(self.rank)]
                for i in range(self.rank)]

    # -- flattening ---------------------------------------------------------

    def _flat_of_blocks(self, B: list) -> list:
        """Matrix of QuotElem entries -> Z/p^N block matrix."""
        d = self.ring.deg
        r = self.rank
        out = [[0] * (r * d) for _ in range(r * d)]
        for i in range(r):
            for j in range(r):
                blk = self.ring.mult_matrix(B[i][j])
                for a in range(d):
                    for b in range(d):
                        out[i * d + a][j * d + b] = blk[a][b]
        return out

    def _kron_base(self, base_mat: list) -> list:
        d = self.ring.deg
        r = self.rank
        out = [[0] * (r * d) for _ in range(r * d)]
        for i in range(r):
            for a in range(d):
                for b in range(d):
                    out[i * d + a][i * d + b] = base_mat[a][b]
        return out

    def flat_partial(self) -> list:
        """The gamma_0-semilinear arithmetic operator, flattened."""
        if self.D is None:
            raise ValueError("module has no arithmetic operator")
        p, N = self.ring.p, self.ring.N
        Dm = self._flat_of_blocks(self.D)
        if self.scalar_operators:
            return Dm
        g0 = self._kron_base(self.ring.endo_matrix(p ** (self.ring.alpha + 1) + 1))
        der = self._kron_base(self.ring.partial_matrix())
        out = mat_mul_mod(Dm, g0, p, N)
        for i in range(len(out)):
            for j in range(len(out)):
                out[i][j] = (out[i][j] + der[i][j]) % p**N
        return out

    def flat_nabla(self, i: int) -> list:
        return self._flat_of_blocks(self.N_list[i])

    def flat_theta(self, i: int) -> list:
        if self.theta_list is None:
            n = self.rank * self.ring.deg
            return [[0] * n for _ in range(n)]
        return self._flat_of_blocks(self.theta_list[i])

    def flat_scalar(self, x: QuotElem) -> list:
        return self._kron_base(self.ring.mult_matrix(x))

    def flat_correction(self, i: int, d_coeffs: dict) -> list:
        """The finite correction operator on this module:
        sum_j c_j * Theta_i^(j-1) * Nabla_i^(j-1)."""
        p, N = self.ring.p, self.ring.N
        n = self.rank * self.ring.deg
        out = [[0] * n for _ in range(n)]
        Np = self.flat_nabla(i)
        Th = self.flat_theta(i)
        nab_pow = mat_identity(n)
        th_pow = mat_identity(n)
        for j in range(2, max(d_coeffs) + 1):
            nab_pow = mat_mul_mod(Np, nab_pow, p, N)
            th_pow = mat_mul_mod(Th, th_pow, p, N)
            cj = d_coeffs.get(j)
            if cj is None or cj.is_zero():
                continue
            term = mat_mul_mod(self.flat_scalar(cj),
                               mat_mul_mod(th_pow, nab_pow, p, N), p, N)
            for a in range(n):
                for b in range(n):
                    out[a][b] = (out[a][b] + term[a][b]) % p**N
        return out

    # -- invariant certification ---------------------------------------------

    def certify_leibniz(self, samples=None) -> bool:
        """operator(s * v) = gamma(s) op(v) + der(s) v at the flat level."""
        p, N = self.ring.p, self.ring.N
        samples = samples or [self.ring.q_power(1), self.ring.q_power(2) + 3]
        ok = True
        if self.D is not None:
            P = self.flat_partial()
            g0 = self.ring.endo_matrix(p ** (self.ring.alpha + 1) + 1)
            dm = self.ring.partial_matrix()
            for s in samples:
                S = self.flat_scalar(s)
                gS = self.flat_scalar(s.apply_matrix(g0))
                dS = self.flat_scalar(s.apply_matrix(dm))
                lhs = mat_mul_mod(P, S, p, N)
                rhs = mat_mul_mod(gS, P, p, N)
                for i in range(len(rhs)):
                    for j in range(len(rhs)):
                        rhs[i][j] = (rhs[i][j] + dS[i][j]) % p**N
                ok = ok and mat_eq_mod(lhs, rhs, p, N)
        for i in range(self.m):
            Ni = self.flat_nabla(i)
            for s in samples:
                S = self.flat_scalar(s)
                ok = ok and mat_eq_mod(mat_mul_mod(Ni, S, p, N),
                                       mat_mul_mod(S, Ni, p, N), p, N)
        return ok

    def certify_commuting_nablas(self) -> bool:
        p, N = self.ring.p, self.ring.N
        for i in range(self.m):
            for j in range(i + 1, self.m):
                A, B = self.flat_nabla(i), self.flat_nabla(j)
                if not mat_eq_mod(mat_mul_mod(A, B, p, N),
                                  mat_mul_mod(B, A, p, N), p, N):
                    return False
        return True

    def certify_master_relation(self, scalars) -> bool:
        """(1 + beta q D_i) Nabla_i Partial = s0 (Partial + s1) Nabla_i
        - D_i Nabla_i as flat matrices (mixed tag)."""
        p, N = self.ring.p, self.ring.N
        P = self.flat_partial()
        s0 = self.flat_scalar(scalars.s0())
        s0s1 = self.flat_scalar(scalars.s0() * scalars.s1())
        bq = self.flat_scalar(scalars.beta * self.ring.q_power(1))
        dcs = scalars.d_coeffs()
        for i in range(self.m):
            Ni = self.flat_nabla(i)
            Di = self.flat_correction(i, dcs)
            lhs = mat_mul_mod(Ni, P, p, N)
            lhs_corr = mat_mul_mod(bq, mat_mul_mod(Di, lhs, p, N), p, N)
            for a in range(len(lhs)):
                for b in range(len(lhs)):
                    lhs[a][b] = (lhs[a][b] + lhs_corr[a][b]) % p**N
            rhs = mat_mul_mod(s0, mat_mul_mod(P, Ni, p, N), p, N)
            rhs2 = mat_mul_mod(s0s1, Ni, p, N)
            rhs3 = mat_mul_mod(Di, Ni, p, N)
            for a in range(len(rhs)):
                for b in range(len(rhs)):
                    rhs[a][b] = (rhs[a][b] + rhs2[a][b] - rhs3[a][b]) % p**N
            if not mat_eq_mod(lhs, rhs, p, N):
                return False
        return True


# ---------------------------------------------------------------------------
# cohomology containers
# ---------------------------------------------------------------------------


def render_invariants(p: int, N: int, exps: list) -> str:
    """Elementary divisors as 'Z/p^e + ...'; p^N summands are free at
    this precision."""
    if not exps:
        return "0"
    parts = []
    free = sum(1 for e in exps if e >= N)
    for e in sorted(e for e in exps if e < N):
        parts.append(f"Z/{p}^{e}")
    if free:
        parts.append(f"(Z/{p}^{N})^{free} [free at precision]")
    return " + ".join(parts) if parts else "0"


@dataclass
class CohomologyReport:
    h: dict
    p: int
    N: int

    def order_exponent(self, i: int) -> int:
        return sum(self.h.get(i, []))

    def render(self) -> str:
        return "; ".join(f"H^{i} = {render_invariants(self.p, self.N, exps)}"
                         for i, exps in sorted(self.h.items()))


def fib_partial(mod: QConnModule) -> CohomologyReport:
    """Kernel and cokernel of the arithmetic operator on the flattening."""
    p, N = mod.ring.p, mod.ring.N
    P = mod.flat_partial()
    h0 = _span_invariants(ker_basis_mod(P, p, N), len(P), p, N)
    h1 = coker_invariants_mod(P, p, N)
    return CohomologyReport({0: h0, 1: h1}, p, N)


def _span_invariants(gens: list, ambient: int, p: int, N: int) -> list:
    if not gens:
        return []
    return subquotient_invariants(gens, [], ambient, p, N)


@dataclass
class CochainComplex:
    """Flat Z/p^N complex: diffs[i] maps degree i to i+1."""

    p: int
    N: int
    ranks: list
    diffs: list

    def d_squared_zero(self) -> bool:
        for i in range(len(self.diffs) - 1):
            prod = mat_mul_mod(self.diffs[i + 1], self.diffs[i], self.p, self.N)
            if any(x % self.p**self.N for row in prod for x in row):
                return False
        return True

    def cohomology(self, i: int) -> list:
        """Invariant factors of ker(d_i)/im(d_(i-1))."""
        n = self.ranks[i]
        if i < len(self.diffs):
            kgens = ker_basis_mod(self.diffs[i], self.p, self.N)
        else:
            kgens = [[1 if a == b else 0 for a in range(n)] for b in range(n)]
        bgens = []
        if i > 0:
            prev = self.diffs[i - 1]
            for j in range(self.ranks[i - 1]):
                col = [prev[a][j] for a in range(n)]
                if any(col):
                    bgens.append(col)
        return subquotient_invariants(kgens, bgens, n, self.p, self.N)


# ---------------------------------------------------------------------------
# Breuil-Kisin style twists
# ---------------------------------------------------------------------------


def twist_unit_scalar(p: int, alpha: int, k: int, prec: int) -> int:
    """((1+p^(alpha+1))^k - 1) / p^(alpha+1) mod p^prec, any integer k."""
    a1 = alpha + 1
    mod = p ** (prec + a1)
    x = pow(1 + p**a1, k, mod)
    num = (x - 1) % mod
    if num % p**a1:
        raise ArithmeticError("binomial numerator not divisible by p^(alpha+1)")
    return (num // p**a1) % p**prec


def d_prime_elem(ring: QuotientRing) -> QuotElem:
    from .padic import d_poly_q
    dq = d_poly_q(ring.p, ring.alpha)
    return ring.from_q_poly({e - 1: c * e for e, c in enumerate(dq) if e and c})


def bk_twist(k: int, p: int, alpha: int, n: int = 1, N: int = 8) -> QConnModule:
    """Rank-1 module with the arithmetic operator acting by
    e * ((1+p^(alpha+1))^k - 1) / p^(alpha+1)."""
    ring = QuotientRing(p, N, alpha, n)
    e = d_prime_elem(ring)
    scal = e * twist_unit_scalar(p, alpha, k, N)
    return QConnModule(ring, 1, D=[[scal]], N_list=[], tag="absolute")


@dataclass
class TwistH1Result:
    k: int
    computed_exponent: int
    predicted_exponent: object
    status: str  # "pass" | "expected-discrepancy"


def normalized_twist_h1(k: int, p: int, N: int = 8) -> TwistH1Result:
    """H^1 of the unit-group-normalized twist: cokernel of multiplication
    by ((1+p)^k - 1)/p on Z/p^N, against the multiplication-by-k oracle.

    At the boundary p = 2 the valuation of (1+p)^k - 1 genuinely jumps
    for every even k (v_2(3^k - 1) = v_2(k) + 2), so the computed order
    is exactly p times the predicted one; those cases report an expected
    discrepancy with the computed value asserted, never a bare failure.
    The smallest instance is k = 2: order 4 against the predicted 2.
    """
    c = twist_unit_scalar(p, 0, k, N)
    inv = coker_invariants_mod([[c]], p, N)
    got = sum(inv)
    want = vp_int(k, p) if k else None
    if k == 0:
        return TwistH1Result(k, got, f">= {N}", "pass" if got >= N else "fail")
    if got == want:
        return TwistH1Result(k, got, want, "pass")
    if p == 2 and k % 2 == 0 and got == want + 1:
        return TwistH1Result(k, got, want, "expected-discrepancy")
    return TwistH1Result(k, got, want, "fail")


def sen_twist_consistency(k: int, p: int, alpha: int, N: int = 8) -> bool:
    """1 + q (q^(p^alpha)-1) * twist-scalar = (1+p^(alpha+1))^k in A/d."""
    ring = QuotientRing(p, N, alpha, 1)
    e = d_prime_elem(ring)
    scal = e * twist_unit_scalar(p, alpha, k, N)
    beta_ht = ring.q_power(p**alpha + 1) - ring.q_power(1)
    lhs = ring.one() + beta_ht * scal
    mod = p**N
    rhs = ring.const(pow(1 + p ** (alpha + 1), k, mod))
    return lhs == rhs


# ---------------------------------------------------------------------------
# Koszul and double complexes
# ---------------------------------------------------------------------------


def qdr_complex(mod: QConnModule) -> CochainComplex:
    """The Koszul complex of the commuting geometric operators, with the
    sign (-1)^(u-1) on the wedge slot the u-th index is inserted into."""
    p, N = mod.ring.p, mod.ring.N
    n = mod.rank * mod.ring.deg
    m = mod.m
    flats = [mod.flat_nabla(i) for i in range(m)]
    subsets = _subsets(m)
    ranks = [len([S for S in subsets if len(S) == t]) * n for t in range(m + 1)]
    diffs = []
    for t in range(m):
        src = [S for S in subsets if len(S) == t]
        dst = [S for S in subsets if len(S) == t + 1]
        D = [[0] * (len(src) * n) for _ in range(len(dst) * n)]
        for si, S in enumerate(src):
            for i in range(m):
                if i in S:
                    continue
                T = tuple(sorted(S + (i,)))
                ti = dst.index(T)
                u = T.index(i) + 1
                sign = 1 if u % 2 == 1 else -1
                blk = flats[i]
                for a in range(n):
                    for b in range(n):
                        D[ti * n + a][si * n + b] = (sign * blk[a][b]) % p**N
        diffs.append(D)
    return CochainComplex(p, N, ranks, diffs)


def _subsets(m: int) -> list:
    out = [()]
    for i in range(m):
        out = out + [S + (i,) for S in out]
    return sorted(out, key=lambda S: (len(S), S))


def double_complex(mod: QConnModule, scalars) -> dict:
    """Two q-de Rham rows joined by the corrected column maps.

    Returns the square-commutativity verdicts, the total (fiber)
    complex, and the per-wedge column maps.  ``scalars`` supplies s0, s1
    and the correction coefficients over the module's base ring.
    """
    p, N = mod.ring.p, mod.ring.N
    n = mod.rank * mod.ring.deg
    m = mod.m
    row = qdr_complex(mod)
    P = mod.flat_partial()
    s0 = scalars.s0()
    s1 = scalars.s1()
    bq = scalars.beta * mod.ring.q_power(1)
    dcs = scalars.d_coeffs()
    corr = [mod.flat_correction(i, dcs) for i in range(m)]
    subsets = _subsets(m)

    def column_map(S: tuple) -> list:
        t = len(S)
        acc = mat_mul_mod(mod.flat_scalar(s0**t), P, p, N)
        shift = mod.flat_scalar(sum((s0**i for i in range(1, t + 1)),
                                    mod.ring.zero()) * s1)
        for a in range(n):
            for b in range(n):
                acc[a][b] = (acc[a][b] + shift[a][b]) % p**N
        # - sum_i (beta q)^(i-1) P^i_t(corrections over S)
        elem = _elementary_symmetric([corr[i] for i in S], p, N, n)
        bq_flat = mod.flat_scalar(bq)
        bq_pow = mat_identity(n)
        for i in range(1, t + 1):
            term = mat_mul_mod(bq_pow, elem[i], p, N)
            for a in range(n):
                for b in range(n):
                    acc[a][b] = (acc[a][b] - term[a][b]) % p**N
            bq_pow = mat_mul_mod(bq_pow, bq_flat, p, N)
        # invert prod (1 + beta q D_i)
        for i in S:
            one_plus = mat_mul_mod(bq_flat, corr[i], p, N)
            for a in range(n):
                one_plus[a][a] = (one_plus[a][a] + 1) % p**N
            acc = mat_mul_mod(inv_mod(one_plus, p, N), acc, p, N)
        return acc

    columns = {S: column_map(S) for S in subsets}

    # square commutativity: V_(S+i) o (sign nabla_i) = (sign nabla_i) o V_S
    squares_ok = True
    flats = [mod.flat_nabla(i) for i in range(m)]
    for S in subsets:
        for i in range(m):
            if i in S:
                continue
            T = tuple(sorted(S + (i,)))
            lhs = mat_mul_mod(columns[T], flats[i], p, N)
            rhs = mat_mul_mod(flats[i], columns[S], p, N)
            squares_ok = squares_ok and mat_eq_mod(lhs, rhs, p, N)

    # total fiber complex: C^j = Row^j (+) Row^(j-1),
    # d(x, y) = (d x, V(x) - d y)
    ranks = [row.ranks[0]] + [row.ranks[j] + row.ranks[j - 1]
                              for j in range(1, m + 1)] + [row.ranks[m]]
    diffs = []
    by_size = [[S for S in subsets if len(S) == t] for t in range(m + 1)]
    for j in range(m + 1):
        src_a = row.ranks[j]
        src_b = row.ranks[j - 1] if j >= 1 else 0
        dst_a = row.ranks[j + 1] if j < m else 0
        dst_b = row.ranks[j]
        D = [[0] * (src_a + src_b) for _ in range(dst_a + dst_b)]
        if j < m:
            for a in range(dst_a):
                for b in range(src_a):
                    D[a][b] = row.diffs[j][a][b]
        # V on the first block
        for si, S in enumerate(by_size[j]):
            V = columns[S]
            for a in range(n):
                for b in range(n):
                    D[dst_a + si * n + a][si * n + b] = V[a][b]
        # -d on the second block
        if j >= 1:
            for a in range(dst_b):
                for b in range(src_b):
                    D[dst_a + a][src_a + b] = (-row.diffs[j - 1][a][b]) % p**N
        diffs.append(D)
    total = CochainComplex(p, N, ranks, diffs)
    return {"squares_ok": squares_ok, "row": row, "total": total,
            "columns": columns}


def _elementary_symmetric(mats: list, p: int, N: int, n: int) -> dict:
    """P^i of commuting matrices, i = 0..len(mats)."""
    out = {0: mat_identity(n)}
    polys = [dict(out)]
    for M in mats:
        nxt = {}
        prev = polys[-1]
        for i, val in prev.items():
            nxt[i] = [row[:] for row in val] if i in nxt else [row[:] for row in val]
        for i, val in prev.items():
            term = mat_mul_mod(M, val, p, N)
            tgt = nxt.get(i + 1)
            if tgt is None:
                nxt[i + 1] = term
            else:
                for a in range(n):
                    for b in range(n):
                        tgt[a][b] = (tgt[a][b] + term[a][b]) % p**N
        polys.append(nxt)
    return polys[-1]


# ---------------------------------------------------------------------------
# nilpotence and random mixed modules
# ---------------------------------------------------------------------------


def nilpotence_check(mod: QConnModule, bound: int = 64) -> dict:
    """Reduce mod (p, d, q-1) and iterate each operator on each basis
    vector until zero or the bound."""
    p = mod.ring.p

    def reduce_matrix(B):
        return [[sum(x.coeffs) % p for x in row] for row in B]

    ops = {}
    if mod.D is not None:
        ops["partial"] = reduce_matrix(mod.D)
    for i in range(mod.m):
        ops[f"nabla{i + 1}"] = reduce_matrix(mod.N_list[i])
    out = {}
    for name, M in ops.items():
        r = len(M)
        indices = []
        for j in range(r):
            v = [1 if a == j else 0 for a in range(r)]
            steps = 0
            while any(v) and steps <= bound:
                v = [sum(M[a][b] * v[b] for b in range(r)) % p for a in range(r)]
                steps += 1
            indices.append(steps if steps <= bound else None)
        out[name] = indices
    out["certified"] = all(i is not None for idx in out.values()
                           if isinstance(idx, list) for i in idx)
    return out


def graded_mixed_module(p: int, alpha: int, N: int, shape: tuple,
                        rng) -> QConnModule:
    """A mixed module over A/d at T = 0: grid basis indexed by shape,
    arithmetic operator diag of the twist scalars of the total degree,
    geometric operators raising each grid index with random scalars.

    Satisfies the mixed commutation law by construction; a random change
    of basis then hides the grading.
    """
    ring = QuotientRing(p, N, alpha, 1)
    e = d_prime_elem(ring)
    import itertools
    basis = list(itertools.product(*[range(s) for s in shape]))
    r = len(basis)
    idx = {b: i for i, b in enumerate(basis)}
    D = [[ring.zero() for _ in range(r)] for _ in range(r)]
    for b, i in idx.items():
        D[i][i] = e * twist_unit_scalar(p, alpha, sum(b), N)
    N_list = []
    for axis in range(len(shape)):
        coeffs = [ring.const(rng.randrange(1, p ** min(N, 3)))
                  for _ in range(shape[axis])]
        Nm = [[ring.zero() for _ in range(r)] for _ in range(r)]
        for b, i in idx.items():
            if b[axis] + 1 < shape[axis]:
                up = list(b)
                up[axis] += 1
                Nm[idx[tuple(up)]][i] = coeffs[b[axis]]
        N_list.append(Nm)
    mod = QConnModule(ring, r, D=D, N_list=N_list, tag="mixed")
    return conjugate_module(mod, random_unit_matrix(ring, r, rng))


def random_unit_matrix(ring: QuotientRing, r: int, rng) -> list:
    """Product of elementary matrices: invertible over A/d."""
    M = [[ring.one() if i == j else ring.zero() for j in range(r)]
         for i in range(r)]
    for _ in range(2 * r):
        i, j = rng.randrange(r), rng.randrange(r)
        if i == j:
            continue
        c = ring.from_q_poly({rng.randrange(ring.deg): rng.randrange(ring.p**2)})
        for k in range(r):
            M[i][k] = M[i][k] + c * M[j][k]
    return M


def conjugate_module(mod: QConnModule, P: list) -> QConnModule:
    """Change of basis; over A/d the base maps are trivial so ordinary
    similarity preserves all the operator relations."""
    ring = mod.ring
    r = mod.rank
    Pm = [[ring.mult_matrix(P[i][j]) for j in range(r)] for i in range(r)]
    # invert P over the flattening, then read back block columns
    flatP = mod._flat_of_blocks(P)
    inv_flat = inv_mod(flatP, ring.p, ring.N)
    d = ring.deg

    def block_elem(F, i, j):
        # the (i,j) block applied to 1 in the power basis
        col = [F[i * d + a][j * d] for a in range(d)]
        return ring.elem(col)

    Pinv = [[block_elem(inv_flat, i, j) for j in range(r)] for i in range(r)]

    def conj(B):
        tmp = [[sum((B[i][k] * P[k][j] for k in range(r)), ring.zero())
                for j in range(r)] for i in range(r)]
        return [[sum((Pinv[i][k] * tmp[k][j] for k in range(r)), ring.zero())
                 for j in range(r)] for i in range(r)]

    return QConnModule(ring, r,
                       D=conj(mod.D) if mod.D is not None else None,
                       N_list=[conj(Nm) for Nm in mod.N_list],
                       theta_list=None, tag=mod.tag)


def tensor(a: QConnModule, b: QConnModule) -> QConnModule:
    """Kronecker module with the twisted sum operators."""
    if a.ring != b.ring or a.tag != b.tag:
        raise ValueError("tensor needs matching base and tag")
    ring = a.ring
    ra, rb = a.rank, b.rank
    r = ra * rb
    beta_ht = ring.q_power(ring.p**ring.alpha + 1) - ring.q_power(1)

    def kron(X, Y):
        out = [[ring.zero() for _ in range(r)] for _ in range(r)]
        for i1 in range(ra):
            for j1 in range(ra):
                for i2 in range(rb):
                    for j2 in range(rb):
                        out[i1 * rb + i2][j1 * rb + j2] = X[i1][j1] * Y[i2][j2]
        return out

    eyeA = a.scalar_matrix(ring.one())
    eyeB = b.scalar_matrix(ring.one())
    D = None
    if a.D is not None and b.D is not None:
        D = kron(a.D, eyeB)
        DB = kron(eyeA, b.D)
        DD = kron(a.D, b.D)
        for i in range(r):
            for j in range(r):
                D[i][j] = D[i][j] + DB[i][j] + beta_ht * DD[i][j]
    N_list = []
    for i in range(a.m):
        Na = kron(a.N_list[i], eyeB)
        Nb = kron(eyeA, b.N_list[i])
        for x in range(r):
            for y in range(r):
                Na[x][y] = Na[x][y] + Nb[x][y]
        N_list.append(Na)  # T = 0 fiber: the beta T_i cross term vanishes
    return QConnModule(ring, r, D=D, N_list=N_list, tag=a.tag)


# ---------------------------------------------------------------------------
# divided-power (Hodge-Tate) regular representation
# ---------------------------------------------------------------------------


class DividedPowerAlgebra:
    """Basis symbols a^[n] with a^[i] a^[j] = C(i+j, i) a^[i+j], several
    variables, truncated at total degree Dmax.  Truncation is flagged."""

    def __init__(self, ring: QuotientRing, nvars: int, dmax: int):
        self.ring = ring
        self.nvars = nvars
        self.dmax = dmax

    def zero(self):
        return DPElement(self, {})

    def unit(self):
        return DPElement(self, {(0,) * self.nvars: self.ring.one()})

    def basis(self, exps) -> "DPElement":
        return DPElement(self, {tuple(exps): self.ring.one()})


class DPElement:
    __slots__ = ("alg", "terms", "overflowed")

    def __init__(self, alg, terms, overflowed=False):
        self.alg = alg
        self.overflowed = overflowed
        clean = {}
        for k, v in terms.items():
            if sum(k) > alg.dmax:
                self.overflowed = True
                continue
            # a coefficient that vanishes only at reduced precision still
            # carries uncertainty and must stay, or sums forget the loss
            if v.is_zero() and v.prec >= alg.ring.N:
                continue
            clean[k] = v
        self.terms = clean

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return DPElement(self.alg, out, self.overflowed or other.overflowed)

    def __neg__(self):
        return DPElement(self.alg, {k: -v for k, v in self.terms.items()},
                         self.overflowed)

    def __sub__(self, other):
        return self + (-other)

    def scalar(self, s):
        return DPElement(self.alg, {k: v * s for k, v in self.terms.items()},
                         self.overflowed)

    def __mul__(self, other):
        out = {}
        overflow = self.overflowed or other.overflowed
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                if sum(k) > self.alg.dmax:
                    overflow = True
                    continue
                c = 1
                for x, y in zip(k1, k2):
                    c *= math.comb(x + y, x)
                v = v1 * v2 * c
                out[k] = out[k] + v if k in out else v
        return DPElement(self.alg, out, overflow)

    def __eq__(self, other):
        return all(v.is_zero() for v in (self - other).terms.values())

    def is_zero(self):
        return not self.terms


@dataclass
class RegularRepReport:
    checks: dict
    interior_degree: int

    @property
    def ok(self):
        return all(self.checks.values())


def divided_beta_powers(ring: QuotientRing, kind: str, jmax: int):
    """tau_j = beta^(j-1)/j! (kind='tau') or sigma_j = beta^j/(j+1)!
    (kind='sigma') in A/d, via certified quotient-ring division."""
    p, alpha = ring.p, ring.alpha
    beta_ht = ring.q_power(p**alpha + 1) - ring.q_power(1)
    beta_geom = ring.q_power(p**alpha) - ring.one()
    beta = beta_ht if kind == "tau" else beta_geom
    out = {1: ring.one() if kind == "tau" else None}
    if kind == "sigma":
        out = {0: ring.one()}
        for j in range(1, jmax + 1):
            out[j] = (out[j - 1] * beta).divide_exact(ring.const(j + 1))
    else:
        for j in range(2, jmax + 1):
            out[j] = (out[j - 1] * beta).divide_exact(ring.const(j))
    return out


def ht_regular_rep(dmax: int, p: int, alpha: int, N: int = 8,
                   variables: int = 1) -> RegularRepReport:
    """The divided-power regular representation on the Hodge-Tate locus.

    Certifies: the geometric operator matrix is upper triangular with
    unit diagonal (diagonal 1 in the one-variable case, diagonal
    u = 1 + e*a0 in the two-variable case); the arithmetic coefficient
    law beta*b_i = -c_i + (1+beta*e)^i f^(i)(beta) on interior basis
    vectors; and coassociativity of a -> a + b + e*a*b at interior
    degrees.
    """
    guard = vp_factorial(p, dmax + 1)
    ring = QuotientRing(p, N + guard, alpha, 1)
    e = d_prime_elem(ring)
    beta_ht = ring.q_power(p**alpha + 1) - ring.q_power(1)
    tau = divided_beta_powers(ring, "tau", dmax + 1)
    checks = {}

    # arithmetic operator columns from the group law:
    # partial(a^[n]) = sum_{j>=1} a^[n-j] (1+e a)^j tau_j
    alg = DividedPowerAlgebra(ring, 1, dmax)
    one_plus_ea = alg.unit() + alg.basis((1,)).scalar(e)
    Dcols = []
    pow_cache = {0: alg.unit()}
    for j in range(1, dmax + 1):
        pow_cache[j] = pow_cache[j - 1] * one_plus_ea
    for n in range(dmax + 1):
        col = alg.zero()
        for j in range(1, n + 1):
            col = col + (alg.basis((n - j,)) * pow_cache[j]).scalar(tau[j])
        Dcols.append(col)

    # b_i law: beta * b_i = -c_i + (1+beta e)^i * f^(i)(beta), f = a^[n]
    # (the arithmetic operator preserves the degree filtration, so no
    # truncation boundary is crossed here)
    one_plus_be = ring.one() + beta_ht * e
    interior = dmax
    law_ok = True
    for n in range(interior + 1):
        col = Dcols[n]
        for i in range(n + 1):
            b_i = col.terms.get((i,), ring.zero())
            fib = tau[n - i + 1] * (n - i + 1) if n >= i else ring.zero()
            rhs = one_plus_be**i * fib - (ring.one() if i == n else ring.zero())
            if not (beta_ht * b_i == rhs):
                law_ok = False
    checks[f"arithmetic coefficient law (degrees <= {interior})"] = law_ok

    # one-variable geometric matrix: entries sigma_(j-i) T^(j-i), diag 1
    sigma = divided_beta_powers(ring, "sigma", dmax + 1)
    checks["geometric diagonal = 1"] = sigma[0] == ring.one()
    checks["geometric entries certified"] = all(
        sigma[j].prec >= N for j in range(dmax))

    if variables == 2:
        # diagonal u = 1 + e a0: a unit of the truncated algebra
        alg2 = DividedPowerAlgebra(ring, 1, dmax)
        u = alg2.unit() + alg2.basis((1,)).scalar(e)
        inv = alg2.zero()
        acc = alg2.unit()
        fact = 1
        for kk in range(dmax + 1):
            if kk:
                acc = DPElement(alg2, {(kk,): ring.one()})
                fact = math.factorial(kk)
            term = acc.scalar(ring.const((-1) ** kk * fact) * e**kk)
            inv = inv + term
        checks["diagonal u unit (u * u^(-1) = 1 on truncation)"] = (u * inv) == alg2.unit()

    # coassociativity of a -> a + b + e ab at interior degrees: compare
    # the two bracketings of the three-fold law raised to the n-th
    # power (the divided powers differ from these by the same n!, which
    # the guard digits keep visible)
    co_ok = True
    nco = max(1, dmax // 4)
    big = DividedPowerAlgebra(ring, 3, dmax)
    for n in range(1, nco + 1):
        lhs = _triple_law(big, e, n, left_first=True)
        rhs = _triple_law(big, e, n, left_first=False)
        if not (lhs == rhs):
            co_ok = False
    checks[f"comultiplication coassociative (degrees <= {nco})"] = co_ok
    return RegularRepReport(checks, interior)


def _triple_law(big: DividedPowerAlgebra, e, n: int, left_first: bool):
    ring = big.ring
    x = big.basis((1, 0, 0))
    y = big.basis((0, 1, 0))
    z = big.basis((0, 0, 1))

    def law(a, b):
        return a + b + (a * b).scalar(e)

    w = law(law(x, y), z) if left_first else law(x, law(y, z))
    out = big.unit()
    for _ in range(n):
        out = out * w
    return out
