"""Overconvergent modular symbols: finite approximation modules for the
two-variable distribution space, the weight action of Sigma_0(p), the
specialization map, and the lifting iteration.

A distribution mu on O_F (x) Z_p is truncated to the square moment grid
m[i][j] = mu(z^i zbar^j), 0 <= i, j < M, with moment (i, j) meaningful mod
p^(M - max(i,j)). Moments are elements c0 + c1*g of the completion, stored
as a pair of int64 numpy arrays mod p^M, where g has minimal polynomial
g^2 = S*g + T.

The semigroup Sigma_0(p) (a a unit, c = 0 mod pi) acts on test functions by
gamma . f(z) = f((b + d z)/(a + c z)); on the moment grid this is
m -> A m conj(A)^T where A[i] holds the power series coefficients of
((b + d z)/(a + c z))^i. U_p contracts the filtration, which is what makes
the lifting iteration converge.
"""

from fractions import Fraction

import numpy as np

from .field import (
    QuadInt,
    cusp_infinity,
    cusp_zero,
    apply_moebius,
    mat_mul,
    mat_inv_unimodular,
    divides,
)
from . import msymb as ms

INF = 10**9


class DistContext:
    """Shared data for moment arithmetic at one (prime, M)."""

    def __init__(self, prime_data, M):
        if prime_data.kind == "split":
            raise NotImplementedError("split primes need the product model")
        self.pd = prime_data
        self.p = prime_data.p
        self.M = M
        self.mod = prime_data.p ** M
        self.d = prime_data.pi.d
        pi = prime_data.pi
        if prime_data.kind == "inert":
            # basis {1, w} with w the field generator
            from .field import _FIELD_TABLE
            _, S, T = _FIELD_TABLE[self.d][:3]
            self.S, self.T = S, T
            self.basis = "w"
        else:
            # basis {1, pi}: pi^2 = tr(pi) pi - N(pi)
            self.S, self.T = pi.trace(), -pi.norm()
            self.basis = "pi"
            # pi = pa + pb*w, so w = (pi - pa)/pb gives the change of basis
            self._pi_a, self._pi_b = pi.a, pi.b
            self._pi_b_inv = pow(pi.b % self.mod, -1, self.mod)

    def embed(self, x):
        """QuadInt -> pair (c0, c1) in the {1, g} basis mod p^M."""
        if self.basis == "w":
            return x.a % self.mod, x.b % self.mod
        c1 = x.b * self._pi_b_inv % self.mod
        c0 = (x.a - c1 * self._pi_a) % self.mod
        return c0, c1

    # pair arithmetic (numpy friendly: arguments may be arrays)

    def mul(self, x0, x1, y0, y1):
        a = (x0 * y0 + self.T * (x1 * y1 % self.mod)) % self.mod
        b = (x0 * y1 + x1 * y0 + self.S * (x1 * y1 % self.mod)) % self.mod
        return a, b

    def conj(self, x0, x1):
        return (x0 + self.S * x1) % self.mod, (-x1) % self.mod

    def inv(self, x0, x1):
        """Inverse of a unit pair (python ints)."""
        n = (x0 * x0 + self.S * x0 * x1 - self.T * x1 * x1) % self.mod
        ninv = pow(n, -1, self.mod)
        c0, c1 = self.conj(x0, x1)
        return c0 * ninv % self.mod, c1 * ninv % self.mod

    def val_pair(self, x0, x1):
        """p-adic valuation of the pair (min over coordinates), INF at 0."""
        x0, x1 = int(x0) % self.mod, int(x1) % self.mod
        if x0 == 0 and x1 == 0:
            return INF
        v = 0
        while x0 % self.p == 0 and x1 % self.p == 0:
            x0 //= self.p
            x1 //= self.p
            v += 1
        return v

    def to_padic(self, x0, x1, prec=None):
        from . import padic
        ctx = padic.completion(self.pd, self.M)
        e = ctx.elt(int(x0), int(x1))
        return e


class FiniteDistribution:
    """Truncated moment table of a distribution; see module docstring."""

    __slots__ = ("ctx", "m")

    def __init__(self, ctx, m=None):
        self.ctx = ctx
        if m is None:
            m = np.zeros((2, ctx.M, ctx.M), dtype=np.int64)
        self.m = m % ctx.mod

    def copy(self):
        return FiniteDistribution(self.ctx, self.m.copy())

    def moment(self, i, j):
        return int(self.m[0, i, j]), int(self.m[1, i, j])

    def add(self, other, sign=1):
        return FiniteDistribution(self.ctx, (self.m + sign * other.m) % self.ctx.mod)

    def scale_int(self, c):
        return FiniteDistribution(self.ctx, (self.m * (c % self.ctx.mod)) % self.ctx.mod)

    def filtration(self):
        """min over moments of v_p(m[i][j]) + max(i, j), capped at M: the
        zero distribution of the approximation module has filtration M."""
        ctx = self.ctx
        best = ctx.M
        for i in range(ctx.M):
            for j in range(ctx.M):
                v = ctx.val_pair(self.m[0, i, j], self.m[1, i, j])
                best = min(best, v + max(i, j))
        return best

    def reduce_filtration(self):
        """Truncate each moment to its honest precision p^(M - max(i,j))."""
        ctx = self.ctx
        out = self.m.copy()
        for i in range(ctx.M):
            for j in range(ctx.M):
                q = ctx.p ** (ctx.M - max(i, j))
                out[:, i, j] %= q
        return FiniteDistribution(ctx, out)

    def is_zero(self):
        return self.filtration() >= self.ctx.M


def _series_pow_matrix(ctx, a, b, c, d):
    """The M x M matrix A with ((b + dz)/(a + cz))^i = sum_n A[i,n] z^n,
    as a pair of int arrays. Entries are pairs; a must be a unit, c = 0 mod p
    is the caller's responsibility to have checked."""
    M, mod = ctx.M, ctx.mod
    ai0, ai1 = ctx.inv(*a)
    # inv[m] = a^{-1} (-c/a)^m
    t0, t1 = ctx.mul(-c[0] % mod, -c[1] % mod, ai0, ai1)
    inv0 = np.zeros(M, dtype=object)
    inv1 = np.zeros(M, dtype=object)
    inv0[0], inv1[0] = ai0, ai1
    for m in range(1, M):
        inv0[m], inv1[m] = ctx.mul(inv0[m - 1], inv1[m - 1], t0, t1)
    # f = (b + dz) * inv
    f0 = np.zeros(M, dtype=object)
    f1 = np.zeros(M, dtype=object)
    for n in range(M):
        x0, x1 = ctx.mul(b[0], b[1], inv0[n], inv1[n])
        if n:
            y0, y1 = ctx.mul(d[0], d[1], inv0[n - 1], inv1[n - 1])
            x0, x1 = (x0 + y0) % mod, (x1 + y1) % mod
        f0[n], f1[n] = x0, x1
    A0 = np.zeros((M, M), dtype=np.int64)
    A1 = np.zeros((M, M), dtype=np.int64)
    A0[0, 0] = 1
    row0 = np.zeros(M, dtype=object)
    row1 = np.zeros(M, dtype=object)
    row0[0] = 1
    for i in range(1, M):
        new0 = np.zeros(M, dtype=object)
        new1 = np.zeros(M, dtype=object)
        for n in range(M):
            if row0[n] == 0 and row1[n] == 0:
                continue
            for k in range(M - n):
                z0, z1 = ctx.mul(row0[n], row1[n], f0[k], f1[k])
                new0[n + k] = (new0[n + k] + z0) % mod
                new1[n + k] = (new1[n + k] + z1) % mod
        row0, row1 = new0, new1
        A0[i] = row0.astype(np.int64)
        A1[i] = row1.astype(np.int64)
    return A0, A1


def _check_sigma0(ctx, g):
    (a, b), (c, d) = g
    from .field import mat_det
    if not mat_det(g):
        raise ValueError("singular matrix")
    a0, a1 = ctx.embed(a)
    if (a0 % ctx.p, a1 % ctx.p) == (0, 0) or not divides(ctx.pd.pi, c):
        raise ValueError("matrix not in Sigma_0(p)")


def action_matrix(ctx, g):
    """The moment transform pair (A0, A1) for gamma in Sigma_0(p)."""
    _check_sigma0(ctx, g)
    (a, b), (c, d) = g
    return _series_pow_matrix(ctx, ctx.embed(a), ctx.embed(b), ctx.embed(c), ctx.embed(d))


def _mat_pair_mul(ctx, X0, X1, Y0, Y1):
    mod = ctx.mod
    X1Y1 = X1 @ Y1 % mod
    Z0 = (X0 @ Y0 + ctx.T * X1Y1) % mod
    Z1 = (X0 @ Y1 + X1 @ Y0 + ctx.S * X1Y1) % mod
    return Z0, Z1


def sigma0_act(ctx, g, mu):
    """mu | gamma: pull back test functions through the twisted action."""
    A0, A1 = action_matrix(ctx, g)
    B0 = (A0 + ctx.S * A1) % ctx.mod  # conjugate, transposed below
    B1 = (-A1) % ctx.mod
    Z0, Z1 = _mat_pair_mul(ctx, A0, A1, mu.m[0], mu.m[1])
    W0, W1 = _mat_pair_mul(ctx, Z0, Z1, B0.T % ctx.mod, B1.T % ctx.mod)
    out = np.stack([W0, W1])
    return FiniteDistribution(ctx, out)


class OverconvergentSymbol:
    """Distribution-valued symbol on the M-symbol generators."""

    def __init__(self, p1, ctx, level, values, eigen=None):
        self.p1 = p1
        self.ctx = ctx
        self.level = level
        self.values = list(values)
        self.eigen = eigen or {}

    def copy(self, values=None):
        return OverconvergentSymbol(
            self.p1, self.ctx, self.level,
            values if values is not None else [v.copy() for v in self.values],
            dict(self.eigen))

    def ev(self, r, s):
        """Psi{r -> s} as a FiniteDistribution (Gamma-invariance plus the
        Manin decomposition of the path)."""
        total = FiniteDistribution(self.ctx)
        for sign, idx, gamma in ms.manin_terms(self.p1, r, s):
            moved = sigma0_act(self.ctx, mat_inv_unimodular(gamma), self.values[idx])
            total = total.add(moved, sign)
        return total

    def filtration(self):
        return min(v.filtration() for v in self.values)

    def add(self, other, sign=1):
        return self.copy([a.add(b, sign) for a, b in zip(self.values, other.values)])


def specialize(psi):
    """Moments at (i, j) <= k, here the (0,0) table of the weight-2 case,
    as residues mod p^M."""
    return [v.moment(0, 0) for v in psi.values]


def specialize_matches(psi, phi):
    """Does specialize(psi) equal the classical symbol phi mod p^M?"""
    mod = psi.ctx.mod
    for (c0, c1), val in zip(specialize(psi), phi.values):
        if c1 % mod:
            return False
        if (c0 - val) % mod:
            return False
    return True


class UOperator:
    """The table-level U_p operator with its Manin data precomputed and the
    moment transforms batched for numpy."""

    def __init__(self, ctx, p1, level):
        self.ctx = ctx
        self.p1 = p1
        n_gen = len(p1)
        d = ctx.d
        reps = ms.hecke_reps(ctx.pd.pi, level, d)
        assert len(reps) == ctx.pd.norm, "U_p needs pi | level"
        dest, src, sgn = [], [], []
        A0s, A1s, B0s, B1s = [], [], [], []
        for i in range(n_gen):
            gi = p1.lift_matrix(i)
            r = apply_moebius(gi, cusp_zero(d))
            s = apply_moebius(gi, cusp_infinity(d))
            for delta in reps:
                dr = apply_moebius(delta, r)
                dsv = apply_moebius(delta, s)
                for sign, idx, gamma in ms.manin_terms(p1, dr, dsv):
                    g = mat_mul(mat_inv_unimodular(gamma), delta)
                    A0, A1 = action_matrix(ctx, g)
                    B0 = (A0 + ctx.S * A1).T % ctx.mod
                    B1 = (-A1).T % ctx.mod
                    dest.append(i)
                    src.append(idx)
                    sgn.append(sign)
                    A0s.append(A0)
                    A1s.append(A1)
                    B0s.append(B0)
                    B1s.append(B1)
        self.n_gen = n_gen
        self.dest = np.array(dest)
        self.src = np.array(src)
        self.sgn = np.array(sgn).reshape(-1, 1, 1)
        self.A0 = np.stack(A0s)
        self.A1 = np.stack(A1s)
        self.B0 = np.stack(B0s)
        self.B1 = np.stack(B1s)

    def apply(self, values):
        """values: ndarray (n_gen, 2, M, M) -> U_p applied, same shape."""
        ctx = self.ctx
        mod = ctx.mod
        M0 = values[self.src, 0]
        M1 = values[self.src, 1]
        X1Y1 = self.A1 @ M1 % mod
        Z0 = (self.A0 @ M0 + ctx.T * X1Y1) % mod
        Z1 = (self.A0 @ M1 + self.A1 @ M0 + ctx.S * X1Y1) % mod
        X1Y1 = Z1 @ self.B1 % mod
        W0 = (Z0 @ self.B0 + ctx.T * X1Y1) % mod
        W1 = (Z0 @ self.B1 + Z1 @ self.B0 + ctx.S * X1Y1) % mod
        W0 = (W0 * self.sgn) % mod
        W1 = (W1 * self.sgn) % mod
        out = np.zeros_like(values)
        np.add.at(out, (self.dest, 0), W0)
        np.add.at(out, (self.dest, 1), W1)
        return out % mod


def lift(phi, M, prime_data, max_iter=None, u_op=None):
    """The unique small-slope eigenlift of phi to an overconvergent symbol,
    computed by iterating U_p / lambda_p from the zero-filled seed.

    Returns (symbol, certificate); the certificate records the per-iteration
    filtration of the increments."""
    lam = phi.eigen.get("lambda_p")
    if lam is None:
        upi = ms.apply_hecke(phi, prime_data.pi)
        lam = ms._ratio(upi, phi)
    lam = Fraction(lam)
    ctx = DistContext(prime_data, M)
    p = ctx.p
    if lam.numerator % p == 0:
        raise ValueError("slope condition violated: lambda_p is not a unit")
    lam_inv = pow(int(lam.numerator) % ctx.mod, -1, ctx.mod) * int(lam.denominator) % ctx.mod
    if max_iter is None:
        max_iter = M + phi.k + 1
    if u_op is None:
        u_op = UOperator(ctx, phi.p1, phi.level)
    n_gen = len(phi.p1)
    values = np.zeros((n_gen, 2, ctx.M, ctx.M), dtype=np.int64)
    for i, v in enumerate(phi.values):
        assert v.denominator == 1
        values[i, 0, 0, 0] = int(v) % ctx.mod
    gains = []
    prev_fil = 0
    for it in range(max_iter):
        new = u_op.apply(values) * lam_inv % ctx.mod
        diff_fil = _table_filtration(ctx, (new - values) % ctx.mod)
        gains.append(diff_fil)
        values = new
        if diff_fil >= M:
            break
    sym_values = [FiniteDistribution(ctx, values[i]) for i in range(n_gen)]
    psi = OverconvergentSymbol(phi.p1, ctx, phi.level, sym_values,
                               dict(phi.eigen))
    cert = {
        "iterations": len(gains),
        "increment_filtrations": gains,
        "converged": gains[-1] >= M if gains else True,
        "lambda_p": str(lam),
        "M": M,
    }
    return psi, cert


def _table_filtration(ctx, values):
    best = ctx.M
    n = values.shape[0]
    for i in range(n):
        fd = FiniteDistribution(ctx, values[i])
        best = min(best, fd.filtration())
        if best == 0:
            break
    return best


def apply_hecke_oc(psi, pi):
    """psi | T_(pi) (or U) on an overconvergent symbol, via ev on the
    translated generator paths."""
    p1, d = psi.p1, psi.ctx.d
    reps = ms.hecke_reps(pi, psi.level, d)
    vals = []
    for i in range(len(p1)):
        g = p1.lift_matrix(i)
        r = apply_moebius(g, cusp_zero(d))
        s = apply_moebius(g, cusp_infinity(d))
        total = FiniteDistribution(psi.ctx)
        for delta in reps:
            moved = psi.ev(apply_moebius(delta, r), apply_moebius(delta, s))
            total = total.add(sigma0_act(psi.ctx, delta, moved))
        vals.append(total)
    return psi.copy(vals)


def save_lift(path, psi, cert):
    """Cache a lifted symbol to disk (values array plus certificate)."""
    import json
    values = np.stack([v.m for v in psi.values])
    np.savez_compressed(path, values=values,
                        cert=json.dumps(cert), eigen=json.dumps(
                            {k: str(v) for k, v in psi.eigen.items()}))


def load_lift(path, p1, ctx, level):
    import json
    data = np.load(path, allow_pickle=False)
    values = data["values"]
    cert = json.loads(str(data["cert"]))
    eigen = json.loads(str(data["eigen"]))
    vals = [FiniteDistribution(ctx, values[i]) for i in range(values.shape[0])]
    return OverconvergentSymbol(p1, ctx, level, vals, eigen), cert


def u_eigen_residual(psi, u_op, lam):
    """Filtration of Psi|U_p - lambda Psi (should reach the floor M)."""
    ctx = psi.ctx
    values = np.stack([v.m for v in psi.values])
    resid = (u_op.apply(values) - int(lam) * values) % ctx.mod
    return _table_filtration(ctx, resid)
