"""The p-adic L-function of a small-slope eigensymbol.

The distribution mu_p on the ray class group of conductor g*p^infty is glued
from blocks mu'_a = [Psi | [[1,b],[0,g]]] {0 - infty}, one for each unit
a mod g (b a lift of a, (g) the modulus). Integration against a locally
analytic test function runs over the unit residue discs of O_p: the
restriction of a block to the disc around j is again a block, with one
uniformizer absorbed into the lower-right matrix entry and one factor of
1/lambda_p from the U_p eigen-relation. On each disc the integrand
<z>^s * chi * (Teichmuller twist) is expanded as a convergent power series
in the disc coordinate and paired with the moments of the block.

The derivative in the p-direction inserts log_iw(z) into the integrand;
the exceptional factors Z_q(chi, r) = 1 - chi(q) N(q)^r / lambda_q are
provided separately for interpolation checks.
"""

from fractions import Fraction

from .field import (
    Cusp,
    QuadInt,
    ResidueRing,
    cusp_infinity,
    divides,
)
from . import padic
from . import ocsymb as oc


def _lambda_p(psi):
    lam = psi.eigen.get("lambda_p")
    if lam is None:
        raise ValueError("symbol carries no U_p eigenvalue")
    return Fraction(str(lam))


class RayDistribution:
    """mu_p at modulus (g): the blocks mu'_a plus the data needed to
    integrate locally analytic functions (the symbol itself and lambda_p)."""

    def __init__(self, psi, g_mod, blocks):
        self.psi = psi
        self.g_mod = g_mod
        self.blocks = blocks                 # canonical residue -> block
        self.ring = ResidueRing(g_mod)
        self.lam = _lambda_p(psi)
        self.pctx = padic.completion(psi.ctx.pd, psi.ctx.M)
        self._raw = {}
        self._discs = None

    def units(self):
        return self.ring.unit_elements()

    def raw_moments(self, B, G):
        """Column mu(z^i) of Psi{B/G - infty}, cached."""
        key = (B.a, B.b, G.a, G.b)
        if key not in self._raw:
            d = self.psi.ctx.d
            fd = self.psi.ev(Cusp(B, G), cusp_infinity(d))
            self._raw[key] = fd
        return self._raw[key]

    def unit_discs(self, lift_offset=0):
        """(a, B, G) for each pair (unit a mod g, unit disc j mod pi): the
        restriction of mu'_a to the disc j + pi O is
        lambda_p^{-1} * Psi{B/G - infty} paired against z -> h(B + G z),
        where B = a mod g, B = j mod pi and G = g pi."""
        if self._discs is not None and lift_offset == 0:
            return self._discs
        pd = self.psi.ctx.pd
        pi = pd.pi
        rpi = ResidueRing(pi)
        g = self.g_mod
        ginv = rpi.inverse(g)
        out = []
        for a in self.units():
            b = a + g * lift_offset
            for j in rpi.unit_elements():
                t = rpi.reduce((j - b) * ginv)
                out.append((a, b + g * t, g * pi))
        if lift_offset == 0:
            self._discs = out
        return out


def build_mu_p(psi, g_mod, lift_offset=0):
    """The ray distribution at modulus (g_mod), which must be coprime to p.

    lift_offset shifts every lift b of a by that multiple of g_mod; the
    result is independent of it (a property of the construction)."""
    ctx = psi.ctx
    pi = ctx.pd.pi
    if not g_mod or divides(pi, g_mod):
        raise ValueError("modulus must be nonzero and coprime to p")
    ring = ResidueRing(g_mod)
    d = ctx.d
    blocks = {}
    for a in ring.unit_elements():
        b = a + g_mod * lift_offset
        raw = psi.ev(Cusp(b, g_mod), cusp_infinity(d))
        delta = ((QuadInt(1, 0, d), b), (QuadInt(0, 0, d), g_mod))
        blocks[a] = oc.sigma0_act(ctx, delta, raw)
    return RayDistribution(psi, g_mod, blocks)


# ---------------------------------------------------------------------------
# series helpers (lists of PadicElements, truncated at length M)


def _ser_mul(F, G, M):
    pctx = F[0].ctx
    out = [pctx.zero() for _ in range(M)]
    for i, fi in enumerate(F):
        if fi.is_zero():
            continue
        for j, gj in enumerate(G):
            if i + j >= M:
                break
            out[i + j] = out[i + j] + fi * gj
    return out


def _ser_exp(P, M):
    """exp of a series with P[0] = 0 and positive-valuation coefficients."""
    pctx = P[0].ctx
    out = [pctx.one()] + [pctx.zero() for _ in range(M - 1)]
    for n in range(1, M):
        acc = pctx.zero()
        for k in range(1, n + 1):
            acc = acc + k * P[k] * out[n - k]
        out[n] = acc / n
    return out


def _log_series_on_disc(pctx, B, G, M):
    """log_iw(B + G z) as a z-series: log_iw(B) + log(1 + (G/B) z)."""
    Bp = pctx.embed(B)
    t = pctx.embed(G) / Bp
    out = [padic.log_iw(Bp)]
    tk = t
    for k in range(1, M):
        term = tk / k
        out.append(-term if k % 2 == 0 else term)
        tk = tk * t
    return out


def _integrand_series(pctx, B, G, s, r, insert_log, M):
    """Coefficients of <B + G z>^s * w_Tm(B + G z)^r [* log_iw(B + G z)]."""
    L = _log_series_on_disc(pctx, B, G, M)
    if not isinstance(s, padic.PadicElement):
        s = pctx.elt(int(s))
    head = padic.padic_exp(s * L[0])
    P = [pctx.zero()] + [s * c for c in L[1:]]
    F = [head * c for c in _ser_exp(P, M)]
    if r:
        # the Teichmuller character is constant on the disc
        F = [padic.teichmuller(pctx.embed(B)) ** r * c for c in F]
    if insert_log:
        F = _ser_mul(F, L, M)
    return F


def _chi_value(chi, x):
    if chi is None:
        return 1
    return chi(x)


def _pair(mu, B, G, F):
    """Sum_i F[i] * Psi{B/G - infty}(z^i), with honest per-moment precision."""
    pctx = mu.pctx
    fd = mu.raw_moments(B, G)
    M = mu.psi.ctx.M
    total = pctx.zero()
    for i in range(M):
        if F[i].is_zero():
            continue
        c0, c1 = fd.moment(i, 0)
        total = total + F[i] * pctx.elt(c0, c1, pctx.e * (M - i))
    return total


def _check_chi(mu, chi):
    if chi is None:
        return
    pi = mu.psi.ctx.pd.pi
    if not divides(chi.modulus, mu.g_mod * pi):
        raise ValueError("character modulus must divide g * p "
                         "(deeper p-power conductors are unimplemented)")


def Lp_value(mu, chi=None, s=0, r=0, terms=None):
    """L_p(f, chi * w_Tm^r, s) = integral of <z>^s chi(z) w_Tm(z)^r dmu_p.

    s may be an integer or an integral element of the completion; chi is a
    ray character of modulus dividing g * p (None means trivial); terms
    optionally truncates the disc expansions (for remainder diagnostics)."""
    _check_chi(mu, chi)
    pctx = mu.pctx
    M = mu.psi.ctx.M
    lam_inv = pctx.from_rational(1 / mu.lam)
    total = pctx.zero()
    for a, B, G in mu.unit_discs():
        cv = _chi_value(chi, B)
        if cv == 0:
            continue
        F = _integrand_series(pctx, B, G, s, r, False, M)
        if terms is not None:
            F = F[:terms] + [pctx.zero()] * (M - terms)
        total = total + cv * _pair(mu, B, G, F)
    return lam_inv * total


def Lp_derivative_at(mu, chi=None, r=0):
    """The derivative of s -> L_p(f, chi * w_Tm^r, s) in the p-direction at
    s = k/2 = 0, computed by inserting log_iw(z) into the integrand."""
    _check_chi(mu, chi)
    pctx = mu.pctx
    M = mu.psi.ctx.M
    lam_inv = pctx.from_rational(1 / mu.lam)
    total = pctx.zero()
    for a, B, G in mu.unit_discs():
        cv = _chi_value(chi, B)
        if cv == 0:
            continue
        F = _integrand_series(pctx, B, G, 0, r, True, M)
        total = total + cv * _pair(mu, B, G, F)
    return lam_inv * total


def Z_factor(chi, r, prime_data, lam, pctx):
    """Z_q(chi, r) = 1 - chi(q) N(q)^r / lambda_q; equals 1 when chi
    ramifies at q."""
    lam = Fraction(str(lam))
    if lam == 0:
        raise ValueError("Z-factor needs a nonzero Hecke eigenvalue")
    pi = prime_data.pi
    if chi is not None and divides(pi, chi.conductor):
        return pctx.one()
    if chi is not None and divides(pi, chi.modulus):
        raise ValueError("chi must be given on a modulus coprime to q "
                         "when its conductor is")
    cv = 1 if chi is None else chi(pi)
    return pctx.one() - pctx.from_rational(Fraction(cv * prime_data.norm ** r) / lam)


def restriction_consistency(mu, i_max=3):
    """Largest precision (capped at M) to which summing z^i over all the
    residue discs of O_p reproduces the global moments of the g = 1 block.

    This checks the U_p eigen-relation route used for unit restriction: the
    disc decomposition must recover mu(z^i) for polynomial test functions."""
    if not mu.g_mod.is_unit():
        raise ValueError("consistency check runs at modulus (1)")
    psi = mu.psi
    pctx = mu.pctx
    ctx = psi.ctx
    M = ctx.M
    pi = ctx.pd.pi
    d = ctx.d
    lam_inv = pctx.from_rational(1 / mu.lam)
    base = psi.ev(Cusp(QuadInt(0, 0, d), QuadInt(1, 0, d)), cusp_infinity(d))
    worst = pctx.cap
    for i in range(i_max):
        total = pctx.zero()
        for j in ResidueRing(pi).elements():
            # series of (j + pi z)^i in z
            Bp, Gp = pctx.embed(j), pctx.embed(pi)
            F = [pctx.one()] + [pctx.zero()] * (M - 1)
            for _ in range(i):
                F = _ser_mul(F, [Bp, Gp] + [pctx.zero()] * (M - 2), M)
            total = total + _pair(mu, j, pi, F)
        c0, c1 = base.moment(i, 0)
        diff = lam_inv * total - pctx.elt(c0, c1, pctx.e * (M - i))
        if not diff.is_zero():
            worst = min(worst, diff.val())
    return worst
