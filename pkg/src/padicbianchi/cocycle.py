"""Tree cocycles and the L-invariant.

A p-new eigensymbol phi spreads out to a family kappa indexed by the edges
of the tree: kappa{r-s}(e, P) = omega^|gamma| (phi|gamma^{-1}){r-s}(P) for
e = gamma e_*. Harmonicity of kappa characterizes p-newness. The lifted
symbol Psi spreads out the same way to a system of edge distributions that
glue to a distribution mu on P^1 of the completion, against which one can
integrate log kernels (double integrals with endpoints in the unramified
quadratic extension of the completion).

Evaluating the resulting cocycles oc (counting) and lc (log) on embedding
data (c, v) gives two numbers per datum whose ratio lc/oc is the
L-invariant; it is independent of the datum because both classes live in a
one-dimensional eigenspace.

Everything here is for weight (0, 0), where the polynomial coefficients
P_{c,v} are constants.
"""

from fractions import Fraction
from math import comb

from . import btree as bt
from . import lfun
from . import msymb as ms
from . import padic
from .field import (
    Cusp,
    QuadInt,
    ResidueRing,
    apply_moebius,
    cusp_infinity,
    cusp_zero,
    exact_div,
    gcd_quad,
    mat_mul,
    one,
)


class ConsistencyError(RuntimeError):
    """The two evaluation routes of a cocycle disagree."""


class SupportError(ValueError):
    """Test function not integrable on the requested ball."""


class NonVanishingError(RuntimeError):
    """No embedding datum with a nonzero counting evaluation was found."""

    def __init__(self, tried):
        super().__init__("oc vanished on every tried datum: %r" % (tried,))
        self.tried = tried


def mat_adj(g):
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


class TreeFamily:
    """The edge-indexed family kappa attached to a symbol (and optionally
    its overconvergent lift, needed for distributions and log kernels).

    Flipped edges are represented by the flip-0 representative times the
    Atkin-Lehner matrix of the level, which keeps representatives inside
    the group the family is equivariant under."""

    def __init__(self, phi, prime_data, psi=None, omega=None):
        self.phi = phi
        self.pd = prime_data
        self.psi = psi
        self.tree = bt.Tree(prime_data)
        self.level = phi.level
        self.W = ms.atkin_lehner_matrix(prime_data.pi, phi.level)
        if omega is None:
            om = phi.eigen.get("omega")
            omega = int(om) if om is not None else 1
        if omega not in (1, -1):
            raise ValueError("omega must be +-1")
        self.omega = omega
        self.pctx = padic.completion(psi.ctx.pd, psi.ctx.M) \
            if psi is not None else None
        self._ext2 = None
        self._dist_cache = {}

    @property
    def ext2(self):
        if self.pctx is None:
            return None
        if self._ext2 is None:
            self._ext2 = Ext2Context(self.pctx)
        return self._ext2

    def edge_rep(self, e):
        g = bt.Edge(self.tree, 0, e.a, e.u).rep_matrix()
        return g if e.flip == 0 else mat_mul(g, self.W)

    def ev(self, e, r, s, P=1):
        """kappa{r-s}(e, P) with P a constant (weight (0,0))."""
        adj = mat_adj(self.edge_rep(e))
        val = self.phi.ev(apply_moebius(adj, r), apply_moebius(adj, s))
        return P * self.omega ** e.parity() * val

    def ev_dist(self, e, r, s):
        """The distribution Psi{gamma^-1 r - gamma^-1 s} of the edge."""
        if self.psi is None:
            raise ValueError("family carries no overconvergent lift")
        key = (e.key(), r.key(), s.key())
        if key not in self._dist_cache:
            adj = mat_adj(self.edge_rep(e))
            self._dist_cache[key] = self.psi.ev(apply_moebius(adj, r),
                                                apply_moebius(adj, s))
        return self._dist_cache[key]


def induced_old_symbol(phi_m, pi, level, scaled=False):
    """The level pi*m symbol induced from phi_m of level m via a degeneracy
    section (identity, or t -> pi t when scaled). Such symbols are p-old
    and fail the harmonicity check."""
    d = phi_m.d
    p1 = ms.P1(level)
    z = QuadInt(0, 0, d)
    scal = ((pi, z), (z, one(d)))
    vals = []
    for i in range(len(p1)):
        g = p1.lift_matrix(i)
        r = apply_moebius(g, cusp_zero(d))
        s = apply_moebius(g, cusp_infinity(d))
        if scaled:
            r, s = apply_moebius(scal, r), apply_moebius(scal, s)
        vals.append(phi_m.ev(r, s))
    return ms.ModularSymbol(p1, vals, level, d)


def _sample_vertices(tree, count, seed):
    import random
    rng = random.Random(seed)
    out = []
    d = tree.d
    while len(out) < count:
        a = rng.randint(1, 3)
        num = QuadInt(rng.randint(0, 10), rng.randint(0, 10), d)
        v = tree.vertex(a, num, one(d))
        if v.key() not in [w.key() for w in out]:
            out.append(v)
    return out


def harmonicity_check(fam, vertices=None, paths=None, seed=5):
    """Sum of kappa over the edges into each sampled vertex, for each test
    path. Zero everywhere iff the symbol is p-new."""
    tree = fam.tree
    d = tree.d
    if vertices is None:
        vertices = [tree.standard_vertex()] + _sample_vertices(tree, 5, seed)
    if paths is None:
        paths = [
            (Cusp(QuadInt(2, 3, d), QuadInt(7, 0, d)), cusp_infinity(d)),
            (Cusp(QuadInt(1, 0, d), QuadInt(4, 5, d)),
             Cusp(QuadInt(0, 1, d), QuadInt(3, 0, d))),
        ]
    residuals = []
    worst = Fraction(0)
    for v in vertices:
        for r, s in paths:
            total = sum(fam.ev(e, r, s) for e in bt.neighbors_with_target(v))
            residuals.append({"vertex": repr(v), "value": total})
            worst = max(worst, abs(total))
    return {"residuals": residuals, "max_residual": worst,
            "harmonic": worst == 0}


# ---------------------------------------------------------------------------
# edge distributions


def ball_children(e):
    """The N(p) edges whose balls partition U(e)."""
    return [x for x in bt.neighbors_with_target(e.source())
            if x != e.reverse()]


def edge_distribution(fam, e, r, s, zeta):
    """Integral of the polynomial zeta = {(i, j): coeff} in (t, tbar) over
    the ball U(e) against mu{r-s}.

    Only flip-0 balls (bounded) support nonconstant polynomials; on an
    unbounded ball a nonconstant polynomial has a pole at infinity."""
    if fam.psi is None:
        raise ValueError("family carries no overconvergent lift")
    pctx = fam.pctx
    M = fam.psi.ctx.M
    if e.flip and any(k != (0, 0) for k, c in zeta.items() if c):
        raise SupportError("nonconstant polynomial on an unbounded ball")
    g = fam.edge_rep(e)
    (A, B), (C, D) = g
    if e.flip == 0:
        # t = (-B + A w)/D on U(e), w running over the integers
        b0 = pctx.embed(QuadInt(0, 0, fam.tree.d) - B) / pctx.embed(D)
        g0 = pctx.embed(A) / pctx.embed(D)
    else:
        b0 = g0 = None
    grid = {}
    for (i, j), c in zeta.items():
        if not c:
            continue
        if e.flip:
            grid[(0, 0)] = grid.get((0, 0), pctx.zero()) + c * pctx.one()
            continue
        for a_ in range(min(i, M - 1) + 1):
            for b_ in range(min(j, M - 1) + 1):
                coef = c * comb(i, a_) * comb(j, b_)
                val = (b0 ** (i - a_)) * (g0 ** a_) \
                    * (b0.conj() ** (j - b_)) * (g0.conj() ** b_)
                key = (a_, b_)
                grid[key] = grid.get(key, pctx.zero()) + coef * val
    fd = fam.ev_dist(e, r, s)
    total = pctx.zero()
    for (i, j), c in grid.items():
        if c.is_zero():
            continue
        c0, c1 = fd.moment(i, j)
        total = total + c * pctx.elt(c0, c1, pctx.e * (M - max(i, j)))
    return fam.omega ** e.parity() * total


def full_cover(fam):
    """Edges whose balls partition the whole projective line."""
    return bt.neighbors_with_target(fam.tree.standard_vertex())


def total_integral(fam, r, s, zeta):
    """Integral of a global polynomial over all of P^1; zero for any
    polynomial of bidegree within the weight (constants here)."""
    total = fam.pctx.zero()
    for e in full_cover(fam):
        total = total + edge_distribution(fam, e, r, s, zeta)
    return total


# ---------------------------------------------------------------------------
# the quadratic extension of the completion and the log kernel


class Ext2Context:
    """K(sqrt(u)) for a nonsquare unit u of the (already quadratic,
    unramified) completion K: the home of the double-integral endpoints."""

    def __init__(self, pctx):
        if pctx.e != 1:
            raise NotImplementedError("double integrals need an unramified "
                                      "completion")
        self.pctx = pctx
        self.q = pctx.q
        self.sigma = self._nonsquare()

    def _nonsquare(self):
        pctx = self.pctx
        half = (self.q - 1) // 2
        for a in range(pctx.p):
            for b in range(pctx.p):
                t = pctx.elt(a, b)
                if t.val() > 0:
                    continue
                if (t ** half + pctx.one()).val() >= 1:
                    return t
        raise RuntimeError("no nonsquare unit found")

    def elt(self, a, b=None):
        pctx = self.pctx
        if not isinstance(a, padic.PadicElement):
            a = pctx.elt(a)
        if b is None:
            b = pctx.zero()
        elif not isinstance(b, padic.PadicElement):
            b = pctx.elt(b)
        return Ext2(self, a, b)

    def zero(self):
        return self.elt(0, 0)

    def one(self):
        return self.elt(1, 0)

    def embed_qi(self, x):
        return self.elt(self.pctx.embed(x))


class Ext2:
    """a + b*sqrt(sigma) with a, b in the completion."""

    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx, a, b):
        self.ctx = ctx
        self.a = a
        self.b = b

    def __repr__(self):
        return "Ext2(%r, %r)" % (self.a, self.b)

    def __add__(self, other):
        other = self._co(other)
        return Ext2(self.ctx, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        other = self._co(other)
        return Ext2(self.ctx, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return Ext2(self.ctx, -self.a, -self.b)

    def _co(self, other):
        if isinstance(other, Ext2):
            return other
        return self.ctx.elt(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, padic.PadicElement)):
            return Ext2(self.ctx, self.a * other, self.b * other)
        return Ext2(self.ctx,
                    self.a * other.a + self.ctx.sigma * self.b * other.b,
                    self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conj2(self):
        return Ext2(self.ctx, self.a, -self.b)

    def inverse(self):
        n = self.a * self.a - self.ctx.sigma * self.b * self.b
        ni = n.inverse()
        return Ext2(self.ctx, self.a * ni, -(self.b * ni))

    def __truediv__(self, other):
        if isinstance(other, int):
            d = self.ctx.pctx.elt(other)
            return Ext2(self.ctx, self.a / d, self.b / d)
        return self * other.inverse()

    def __pow__(self, n):
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def val(self):
        if self.a.is_zero():
            return self.b.val()
        if self.b.is_zero():
            return self.a.val()
        return min(self.a.val(), self.b.val())


def _strip_p(x, v):
    pw = x.ctx.pctx.elt(x.ctx.pctx.p) ** v
    return Ext2(x.ctx, x.a / pw, x.b / pw)


def ext2_ratio(num, den):
    """num/den in the integral model; needs val(num) >= val(den)."""
    v = den.val()
    if v:
        num, den = _strip_p(num, v), _strip_p(den, v)
    return num * den.inverse()


def ext2_log(x):
    """Iwasawa logarithm on the quadratic extension: kill the Teichmuller
    part by raising to the residue-field order minus one, take the series,
    divide back."""
    ctx = x.ctx
    pctx = ctx.pctx
    v = x.val()
    if v:
        x = _strip_p(x, v)
    n = ctx.q ** 2 - 1
    y = (x ** n) - ctx.one()
    total = ctx.zero()
    term = ctx.one()
    for k in range(1, pctx.M + pctx.M // 2 + 3):
        term = term * y
        piece = term / k
        total = total + (piece if k % 2 else -piece)
    return total / n


def twisted_moebius_ext2(ctx, g, x):
    """The action (b + d x)/(a + c x) used on the tree side, with matrix
    entries over O_F and x in the quadratic extension."""
    (a, b), (c, d) = (ctx.embed_qi(g[0][0]), ctx.embed_qi(g[0][1])), \
                     (ctx.embed_qi(g[1][0]), ctx.embed_qi(g[1][1]))
    return ext2_ratio(b + d * x, a + c * x)


def double_integral(fam, x, y, r, s, P=1, max_depth=4):
    """Integral of log((t - x)/(t - y)) P against mu{r-s} over the whole
    projective line, both endpoints off the boundary."""
    if fam.ext2 is None:
        raise ValueError("family carries no overconvergent lift")
    total = fam.ext2.zero()
    for e in full_cover(fam):
        total = total + _edge_log_term(fam, e, x, y, r, s, max_depth)
    return P * total


def _edge_log_term(fam, e, x, y, r, s, depth):
    ctx = fam.ext2
    pctx = ctx.pctx
    M = fam.psi.ctx.M
    g = fam.edge_rep(e)
    (A, B), (C, D) = g
    Ae, Be = ctx.embed_qi(A), ctx.embed_qi(B)
    Ce, De = ctx.embed_qi(C), ctx.embed_qi(D)
    # t = (-B + A w)/(D - C w): (t - x)/(t - y) becomes a ratio of two
    # functions c + l w, analytic on the ball when val(l/c) >= 1
    c1, l1 = -Be - x * De, Ae + x * Ce
    c2, l2 = -Be - y * De, Ae + y * Ce
    ok = (not c1.is_zero() and not c2.is_zero()
          and l1.val() - c1.val() >= 1 and l2.val() - c2.val() >= 1)
    if not ok:
        if depth == 0:
            raise padic.PrecisionError("log kernel not analytic at maximal "
                                       "refinement depth")
        return sum((_edge_log_term(fam, ch, x, y, r, s, depth - 1)
                    for ch in ball_children(e)), ctx.zero())
    fd = fam.ev_dist(e, r, s)
    t1, t2 = ext2_ratio(l1, c1), ext2_ratio(l2, c2)
    total = ctx.zero()
    const = ext2_log(c1) - ext2_log(c2)
    c0m, c1m = fd.moment(0, 0)
    total = total + const * pctx.elt(c0m, c1m, pctx.e * M)
    p1, p2 = ctx.one(), ctx.one()
    for k in range(1, M):
        p1, p2 = p1 * t1, p2 * t2
        coef = (p1 - p2) / k
        if k % 2 == 0:
            coef = -coef
        c0m, c1m = fd.moment(k, 0)
        total = total + coef * pctx.elt(c0m, c1m, pctx.e * (M - k))
    return fam.omega ** e.parity() * total


# ---------------------------------------------------------------------------
# embedding data and cocycle evaluations


class EmbeddingDatum:
    """The pair (c, v) with c coprime to p and v a unit mod c, together
    with the derived quantities: the orders s' (of pi) and s (twice the
    order of pi^2) in (O/c)^x, the multiplicity beta, the coset
    J_v = v<pi> with minimal exponents j(a), and the cycle matrix
    gamma_{c,v} fixing the cusps v/c and infinity."""

    def __init__(self, prime_data, c, v, omega):
        d = prime_data.pi.d
        pi = prime_data.pi
        ring = ResidueRing(c)
        if not ring.is_unit(pi):
            raise ValueError("c must be coprime to p")
        if not gcd_quad(v, c).is_unit():
            raise ValueError("v must be a unit mod c")
        self.pd = prime_data
        self.c = c
        self.v = v
        self.omega = omega
        self.ring = ring
        self.s_prime = ring.mult_order(pi)
        self.s = 2 * ring.mult_order(ring.reduce(pi * pi))
        if self.s == self.s_prime:
            self.beta = 1
        elif self.s == 2 * self.s_prime:
            self.beta = 2 if omega == 1 else 0
        else:
            raise RuntimeError("inconsistent orders")
        J = {}
        cur = ring.reduce(v)
        for j in range(self.s_prime):
            if cur not in J:
                J[cur] = j
            cur = ring.reduce(cur * pi)
        self.J = J
        self.d = d

    def gamma(self):
        """Integral projective representative of the cycle matrix."""
        pi_s = self.pd.pi ** self.s
        u = exact_div((pi_s - one(self.d)) * self.v, self.c)
        z = QuadInt(0, 0, self.d)
        return ((one(self.d), u), (z, pi_s))

    def cusp(self):
        return Cusp(self.v, self.c)


def oc_tree_route(fam, datum, window=1):
    """Sum of kappa{v/c - infinity} over one period of the geodesic the
    cycle matrix translates along."""
    edges = bt.cusp_pair_path(fam.tree, datum.c, datum.v,
                              window, window + datum.s - 1)
    r, s_inf = datum.cusp(), cusp_infinity(datum.d)
    return sum(fam.ev(e, r, s_inf) for e in edges)


def oc_closed_route(fam, datum):
    """beta * sum over a in J_v of omega^{j(a)} phi{a/c - infinity}."""
    s_inf = cusp_infinity(datum.d)
    total = sum(fam.omega ** j * fam.phi.ev(Cusp(a, datum.c), s_inf)
                for a, j in datum.J.items())
    return datum.beta * total


def oc_eval(fam, datum):
    """The counting cocycle at the datum: both routes, compared exactly."""
    if datum.beta == 0:
        raise ValueError("beta = 0 datum")
    t = oc_tree_route(fam, datum)
    c = oc_closed_route(fam, datum)
    if t != c:
        raise ConsistencyError("oc route mismatch: tree %s vs closed %s"
                               % (t, c))
    if fam.pctx is not None:
        return fam.pctx.from_rational(Fraction(c))
    return c


def lc_eval(fam, datum, mu=None, kernel="log"):
    """The log cocycle at the datum, by the closed overconvergent form:
    beta * sum over a in J_v of omega^{j(a)} * (integral of log over the
    unit part of the block of mu at a).

    kernel="one" drops the log and must give zero (the integral of the
    constant over the cycle's fundamental domain vanishes)."""
    if datum.beta == 0:
        raise ValueError("beta = 0 datum")
    if fam.psi is None:
        raise ValueError("family carries no overconvergent lift")
    if mu is None:
        mu = lfun.build_mu_p(fam.psi, datum.c)
    pctx = mu.pctx
    M = mu.psi.ctx.M
    lam_inv = pctx.from_rational(1 / mu.lam)
    total = pctx.zero()
    for a, B, G in mu.unit_discs():
        j = datum.J.get(mu.ring.reduce(a))
        if j is None:
            continue
        F = lfun._integrand_series(pctx, B, G, 0, 0, kernel == "log", M)
        total = total + fam.omega ** j * lfun._pair(mu, B, G, F)
    return datum.beta * (lam_inv * total)


def lc_via_double_integral(fam, datum, tau, max_depth=4):
    """Cross-check route for lc: the double integral from tau to
    gamma_{c,v} tau along {v/c - infinity}; tau-independent."""
    g = datum.gamma()
    gtau = twisted_moebius_ext2(fam.ext2, g, tau)
    return double_integral(fam, gtau, tau, datum.cusp(),
                           cusp_infinity(datum.d), max_depth=max_depth)


def coboundary_eval(sym, datum):
    """b(gamma_{c,v}){v/c - infinity} for the coboundary of any symbol:
    exactly zero because the cycle matrix fixes both cusps."""
    g = datum.gamma()
    r, s_inf = datum.cusp(), cusp_infinity(datum.d)
    gr, gs = apply_moebius(g, r), apply_moebius(g, s_inf)
    return sym.ev(gr, gs) - sym.ev(r, s_inf)


def chi_weighted_oc(fam, chi):
    """Sum over units v mod c of chi(v) oc(c, v); equals s times the
    algebraic L-sum when chi(pi) = omega."""
    c = chi.modulus
    total = Fraction(0)
    for v in ResidueRing(c).unit_elements():
        datum = EmbeddingDatum(fam.pd, c, v, fam.omega)
        cv = chi(v)
        if cv:
            total += cv * oc_closed_route(fam, datum)
    return total


def chi_weighted_lc(fam, chi, mu=None):
    """Sum over units v mod c of chi(v) lc(c, v); equals s times the
    p-direction derivative of the p-adic L-function at chi."""
    c = chi.modulus
    if mu is None:
        mu = lfun.build_mu_p(fam.psi, c)
    total = None
    for v in ResidueRing(c).unit_elements():
        cv = chi(v)
        if not cv:
            continue
        datum = EmbeddingDatum(fam.pd, c, v, fam.omega)
        term = cv * lc_eval(fam, datum, mu=mu)
        total = term if total is None else total + term
    return total


# ---------------------------------------------------------------------------
# the L-invariant


class EvaluationCertificate:
    """Per-datum oc and lc values, their ratios, and the extracted
    L-invariant with its precision floor."""

    def __init__(self, entries, skipped, l_invariant, agreement, floor):
        self.entries = entries
        self.skipped = skipped
        self.l_invariant = l_invariant
        self.agreement = agreement
        self.precision_floor = floor

    def to_json(self):
        return {
            "entries": self.entries,
            "skipped": self.skipped,
            "l_invariant": self.l_invariant.to_json(),
            "pairwise_agreement": self.agreement,
            "precision_floor": self.precision_floor,
        }


def default_data(prime_data, omega):
    d = prime_data.pi.d
    return [
        (QuadInt(3, 0, d), QuadInt(1, 0, d)),
        (QuadInt(3, 0, d), QuadInt(2, 0, d)),
        (QuadInt(7, 0, d), QuadInt(1, 0, d)),
    ]


def l_invariant(fam, data=None):
    """Evaluate lc/oc on each embedding datum and certify agreement.

    data is a list of (c, v) pairs; beta = 0 and oc = 0 data are skipped
    with a note, and all-skipped raises NonVanishingError."""
    if fam.psi is None:
        raise ValueError("family carries no overconvergent lift")
    if data is None:
        data = default_data(fam.pd, fam.omega)
    pctx = fam.pctx
    entries = []
    skipped = []
    ratios = []
    mus = {}
    for c, v in data:
        datum = EmbeddingDatum(fam.pd, c, v, fam.omega)
        tag = {"c": repr(c), "v": repr(v), "s": datum.s, "beta": datum.beta}
        if datum.beta == 0:
            skipped.append(dict(tag, reason="beta = 0"))
            continue
        ocv = oc_closed_route(fam, datum)
        if oc_tree_route(fam, datum) != ocv:
            raise ConsistencyError("oc route mismatch at %r" % (tag,))
        if ocv == 0:
            skipped.append(dict(tag, reason="oc vanishes"))
            continue
        key = (c.a, c.b)
        if key not in mus:
            mus[key] = lfun.build_mu_p(fam.psi, c)
        lcv = lc_eval(fam, datum, mu=mus[key])
        ratio = lcv / pctx.from_rational(Fraction(ocv))
        ratios.append(ratio)
        entries.append(dict(tag, oc=str(ocv), lc=lcv.to_json(),
                            ratio=ratio.to_json()))
    if not ratios:
        raise NonVanishingError([e["c"] for e in skipped])
    agreement = min(r.prec for r in ratios)
    for i in range(len(ratios)):
        for j in range(i + 1, len(ratios)):
            diff = ratios[i] - ratios[j]
            if not diff.is_zero():
                agreement = min(agreement, diff.val())
    floor = min(r.prec for r in ratios)
    return EvaluationCertificate(entries, skipped, ratios[0], agreement,
                                 floor)
