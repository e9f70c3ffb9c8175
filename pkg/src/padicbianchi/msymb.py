"""Classical Bianchi modular symbols via M-symbols over P^1(O_F/n).

Weight (0,0) (i.e. classical weight 2) symbols are functions on P^1(O_F/n)
satisfying the 2-term, 3-term and unit relations of the field's tessellation;
the solution space is cut out exactly over Q.  Hecke operators, Atkin-Lehner,
degeneracy maps and the algebraic L-value sum all evaluate paths through the
Euclidean continued-fraction decomposition.

Relation tables are implemented for the fields with d in {1, 3}, where the
2-term/3-term/unit relations present the symbol space; the other Euclidean
fields raise until their tables are added.
"""

from fractions import Fraction

from . import field as fld
from .field import (QuadInt, Cusp, ResidueRing, one, omega, units,
                    gcd_quad, xgcd_quad, exact_div, divides, mat_mul,
                    mat_det, mat_inv_unimodular, identity_mat, apply_moebius,
                    cusp_zero, cusp_infinity, path_between, split_prime)


class LevelError(ValueError):
    pass


def _factor_level(n):
    """Prime factorization of the (squarefree) level; raises otherwise."""
    d = n.d
    nrm = abs(n.norm())
    rest = n
    out = []
    p = 2
    while p * p <= nrm or (nrm > 1 and p <= nrm):
        if nrm % p == 0:
            pd = split_prime(p, d)
            pis = [pd.pi, pd.pibar] if pd.kind == "split" else [pd.pi]
            for pi in pis:
                k = 0
                while divides(pi, rest):
                    rest = exact_div(rest, pi)
                    k += 1
                if k > 1:
                    raise LevelError("level %r is not squarefree" % n)
                if k == 1:
                    out.append((pi, pd))
            while nrm % p == 0:
                nrm //= p
        p += 1
    assert rest.is_unit(), "leftover factor in level"
    return out


class P1:
    """P^1(O_F/n) for squarefree n, via CRT over the prime factors."""

    def __init__(self, n):
        self.n = n
        self.d = n.d
        self.ring = ResidueRing(n)
        self.factors = _factor_level(n)
        self._rings = [ResidueRing(pi) for pi, _ in self.factors]
        # local representatives: (0,1) and (1, x)
        local = []
        for R in self._rings:
            pts = [(QuadInt(0, 0, self.d), one(self.d))]
            pts.extend((one(self.d), x) for x in R.elements())
            local.append(pts)
        # global representatives by CRT
        self.reps = []
        self.index = {}
        for combo in _product(local):
            c = self._crt([t[0] for t in combo])
            dd = self._crt([t[1] for t in combo])
            key = self._key(c, dd)
            if key not in self.index:
                self.index[key] = len(self.reps)
                self.reps.append((c, dd))

    def _crt(self, residues):
        n, d = self.n, self.d
        x = QuadInt(0, 0, d)
        for (pi, _), r in zip(self.factors, residues):
            m = exact_div(n, pi)
            g, u, _ = xgcd_quad(m, pi)
            # g is a unit; m*u*g^{-1} = 1 mod pi, 0 mod n/pi
            ui = _unit_inv(g)
            x = x + r * m * u * ui
        return self.ring.reduce(x)

    def _key(self, c, dd):
        parts = []
        for R in self._rings:
            cc, dl = R.reduce(c), R.reduce(dd)
            if R.is_unit(cc):
                parts.append((0, R.mul(dl, R.inverse(cc))))
            else:
                parts.append((1, QuadInt(0, 0, self.d)))  # the (0:1) point
        return tuple((t, z.a, z.b) for t, z in parts)

    def reduce(self, c, dd):
        return self.index[self._key(c, dd)]

    def reduce_row(self, row):
        return self.reduce(row[0], row[1])

    def __len__(self):
        return len(self.reps)

    def lift_matrix(self, i):
        """A fixed determinant-1 matrix over O_F with bottom row in class i."""
        c, dd = self.reps[i]
        # massage (c, d) into a coprime pair congruent to the class mod n
        g = gcd_quad(c, dd)
        if g and not g.is_unit():
            c = c + self.n  # adjusting c mod n keeps the class
            g = gcd_quad(c, dd)
        if not (c or dd):
            dd = one(self.d)
        tries = 0
        while True:
            g = gcd_quad(c, dd) if (c or dd) else QuadInt(0, 0, self.d)
            if g.is_unit():
                break
            c = c + self.n
            tries += 1
            if tries > 4:
                raise AssertionError("could not lift %r" % ((c, dd),))
        gg, u, v = xgcd_quad(c, dd)
        ui = _unit_inv(gg)
        # u*c + v*d = g; a*d - b*c = 1 with a = v/g, b = -u/g
        a, b = v * ui, (-u) * ui
        return ((a, b), (c, dd))


def _unit_inv(g):
    for v in units(g.d):
        if g * v == 1:
            return v
    raise ValueError("not a unit: %r" % g)


def _product(lists):
    if not lists:
        yield ()
        return
    for head in lists[0]:
        for tail in _product(lists[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# relation tables


def _relation_mats(d):
    """Right-action matrices presenting the M-symbol relations.

    Returns (S, list of order-3 rotations, list of unit twists).  The order-3
    elements rotate the triangular 2-cells of the field's tessellation; for
    d = 1 there are two triangle orbits (through the cusps 1 and i), for d = 3
    likewise (through 1 and w).
    """
    o = one(d)
    z = QuadInt(0, 0, d)
    w = omega(d)
    S = ((z, -o), (o, z))
    TS = ((o, -o), (o, z))          # rotation of (0, 1, oo), order 3 in PSL_2
    if d == 1:
        R_i = ((z, w), (w, o))       # rotation of (0, i, oo): 0->i->oo->0
        J = ((w, z), (z, -w))        # diag(i, -i), det 1
        return S, [TS, R_i], [J]
    if d == 3:
        wc = w.conj()                # = w^{-1} since N(w) = 1
        R_w = ((z, -w), (wc, o))     # rotation of (0, w, oo)
        J = ((w, z), (z, wc))        # diag(w, w^{-1}), det 1
        return S, [TS, R_w], [J]
    raise LevelError(
        "M-symbol relation table not available for d=%d (supported: 1, 3)" % d)


def build_symbol_space(n, k=0):
    """Exact basis of the weight-(k,k) M-symbol solution space at level n.

    Returns (p1, basis) where basis is a list of Fraction-vectors indexed by
    P^1(O/n).  Only k = 0 is implemented.
    """
    if k != 0:
        raise NotImplementedError("classical stage implemented for k = 0 only")
    d = n.d
    p1 = P1(n)
    S, rotations, unit_rels = _relation_mats(d)
    m = len(p1)
    rows = []

    def act_idx(i, g):
        c, dd = p1.reps[i]
        row = (c * g[0][0] + dd * g[1][0], c * g[0][1] + dd * g[1][1])
        return p1.reduce_row(row)

    seen = set()
    for i in range(m):
        j = act_idx(i, S)
        key = tuple(sorted((i, j)))
        if ("S",) + key not in seen:
            seen.add(("S",) + key)
            r = [0] * m
            r[i] += 1
            r[j] += 1
            rows.append(r)
        for t, rot in enumerate(rotations):
            j1, j2 = act_idx(i, rot), act_idx(i, mat_mul(rot, rot))
            key3 = (("T", t),) + tuple(sorted((i, j1, j2)))
            if key3 not in seen:
                seen.add(key3)
                r = [0] * m
                r[i] += 1
                r[j1] += 1
                r[j2] += 1
                rows.append(r)
        for J in unit_rels:
            j = act_idx(i, J)
            if j != i:
                key2 = tuple(sorted((i, j)))
                if ("J",) + key2 not in seen:
                    seen.add(("J",) + key2)
                    r = [0] * m
                    r[i] += 1
                    r[j] -= 1
                    rows.append(r)
    basis = _nullspace(rows, m)
    return p1, basis


def _nullspace(rows, m):
    """Rational nullspace of the sparse relation matrix (rows x m)."""
    from sympy import Matrix
    if not rows:
        return [ [Fraction(int(i == j)) for j in range(m)] for i in range(m) ]
    M = Matrix(rows)
    out = []
    for v in M.nullspace():
        denls = [x.q for x in v]
        from math import lcm
        L = lcm(*denls) if len(denls) > 1 else denls[0]
        vec = [Fraction(int(x * L)) for x in v]
        from math import gcd
        g = 0
        for x in vec:
            g = gcd(g, x.numerator)
        if g > 1:
            vec = [x / g for x in vec]
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# modular symbols


class ModularSymbol:
    """Weight-(0,0) modular symbol stored on M-symbol generators."""

    def __init__(self, p1, values, level, d, k=0, eigen=None):
        self.p1 = p1
        self.values = list(values)
        self.level = level
        self.d = d
        self.k = k
        self.eigen = eigen or {}     # annotations: {"lambda_(g)": ..., "omega": ...}

    def copy(self, values=None):
        return ModularSymbol(self.p1, values if values is not None
                             else list(self.values), self.level, self.d,
                             self.k, dict(self.eigen))

    def ev(self, r, s):
        """Value on the path {r -> s} (divisor (s) - (r))."""
        total = Fraction(0)
        for sign, g in path_between(r, s):
            idx = self.p1.reduce_row(g[1])
            total += sign * self.values[idx]
        return total

    def ev_gen(self, i):
        return self.values[i]

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def scale(self, c):
        return self.copy([v * c for v in self.values])

    def add(self, other, c=1):
        return self.copy([a + c * b for a, b in zip(self.values, other.values)])

    def normalize_integral(self, p):
        """Scale to integral values with content 1 (hence some p-unit value)."""
        from math import gcd, lcm
        L = 1
        for v in self.values:
            L = lcm(L, v.denominator)
        vals = [v * L for v in self.values]
        g = 0
        for v in vals:
            g = gcd(g, int(v))
        if g > 1:
            vals = [v / g for v in vals]
        assert any(int(v) % p for v in vals if v), "no p-unit value"
        return self.copy([Fraction(v) for v in vals])


def manin_terms(p1, r, s):
    """Decompose {r -> s}: list of (sign, gen_index, gamma) with each path
    piece {g 0 -> g oo} = gamma * {g_x 0 -> g_x oo}, gamma in Gamma_0(n)."""
    out = []
    for sign, g in path_between(r, s):
        idx = p1.reduce_row(g[1])
        gx = p1.lift_matrix(idx)
        gamma = mat_mul(g, mat_inv_unimodular(gx))
        out.append((sign, idx, gamma))
    return out


def hecke_reps(pi, level, d, n_pd=None):
    """Coset representatives for T_q (q = (pi) prime): [[1,a],[0,pi]] for a in
    O/q, plus [[pi,0],[0,1]] when q does not divide the level."""
    R = ResidueRing(pi)
    z = QuadInt(0, 0, d)
    reps = [((one(d), a), (z, pi)) for a in R.elements()]
    if not divides(pi, level):
        reps.append(((pi, z), (z, one(d))))
    return reps


def apply_hecke(phi, pi):
    """phi | T_(pi) (or U_(pi) when (pi) divides the level), weight (0,0)."""
    p1 = phi.p1
    reps = hecke_reps(pi, phi.level, phi.d)
    vals = []
    for i in range(len(p1)):
        g = p1.lift_matrix(i)
        r, s = apply_moebius(g, cusp_zero(phi.d)), apply_moebius(g, cusp_infinity(phi.d))
        total = Fraction(0)
        for delta in reps:
            total += phi.ev(apply_moebius(delta, r), apply_moebius(delta, s))
        vals.append(total)
    return phi.copy(vals)


def atkin_lehner_matrix(pi, level):
    """A matrix of determinant pi normalizing Gamma_0(level), pi || level."""
    d = pi.d
    m = exact_div(level, pi)
    if divides(pi, m):
        raise ValueError("pi^2 divides the level")
    g, u, v = xgcd_quad(pi, m)
    ui = _unit_inv(g)
    u, v = u * ui, v * ui            # u pi + v m = 1
    # W = [[pi*u, -v], [level, pi]]: det = pi^2 u + level v = pi(u pi + v m) = pi
    return ((pi * u, -v), (level, pi))


def apply_atkin_lehner(phi, pi):
    W = atkin_lehner_matrix(pi, phi.level)
    p1 = phi.p1
    vals = []
    for i in range(len(p1)):
        g = p1.lift_matrix(i)
        r = apply_moebius(g, cusp_zero(phi.d))
        s = apply_moebius(g, cusp_infinity(phi.d))
        vals.append(phi.ev(apply_moebius(W, r), apply_moebius(W, s)))
    return phi.copy(vals)


def degeneracy(phi, pi, direction, target_p1=None):
    """Trace to level m = level/pi.  direction 'source' or 'target' (the
    latter first applies alpha = [[0,-1],[pi,0]])."""
    d = phi.d
    m = exact_div(phi.level, pi)
    if target_p1 is None:
        target_p1 = P1(m) if not m.is_unit() else None
    z = QuadInt(0, 0, d)
    alpha = ((z, -one(d)), (pi, z))
    # coset reps of Gamma_0(m) / Gamma_0(level) from P^1(O/pi)
    sub = P1(pi)
    gammas = [sub.lift_matrix(i) for i in range(len(sub))]

    def traced(r, s):
        total = Fraction(0)
        for gam in gammas:
            mat = mat_mul(gam, alpha) if direction == "target" else gam
            total += phi.ev(apply_moebius(mat, r), apply_moebius(mat, s))
        return total

    if target_p1 is None:
        # level (1): the symbol space is trivial; report the traced values on
        # a couple of probe paths so vanishing is computed, not assumed
        probes = [(cusp_zero(d), cusp_infinity(d)),
                  (Cusp(one(d), QuadInt(2, 1, d)), cusp_infinity(d))]
        return [traced(r, s) for r, s in probes]
    vals = []
    for i in range(len(target_p1)):
        g = target_p1.lift_matrix(i)
        vals.append(traced(apply_moebius(g, cusp_zero(d)),
                           apply_moebius(g, cusp_infinity(d))))
    return ModularSymbol(target_p1, vals, m, d, phi.k)


# ---------------------------------------------------------------------------
# eigensymbols and L-values


def hecke_matrix_on(basis_syms, pi):
    """Matrix of T_(pi) on the span of the given symbols (exact)."""
    from sympy import Matrix, Rational
    cols = [s.values for s in basis_syms]
    B = Matrix([[Rational(v.numerator, v.denominator) for v in col]
                for col in cols]).T
    images = [apply_hecke(s, pi) for s in basis_syms]
    out = []
    for img in images:
        y = Matrix([Rational(v.numerator, v.denominator) for v in img.values])
        sol, params = B.gauss_jordan_solve(y)
        if params:
            sol = sol.subs({pp: 0 for pp in params})
        out.append([Fraction(int(x.p), int(x.q)) for x in sol])
    # rows of `out` are coordinates of images: matrix acts on coordinates
    dim = len(basis_syms)
    return [[out[j][i] for j in range(dim)] for i in range(dim)]


def find_new_eigensymbol(n, pd, k=0, helper_primes=None, p=None):
    """The p-new cuspidal Hecke eigensymbol at level n (pd = prime over p).

    Splits the M-symbol solution space under a few Hecke operators away from
    the level, discards Eisenstein lines (eigenvalue N(q)+1), and keeps the
    unique line whose U_p eigenvalue is a unit times N(p)^{k/2}.
    """
    d = n.d
    p1, basis = build_symbol_space(n, k)
    syms = [ModularSymbol(p1, vec, n, d, k) for vec in basis]
    if not syms:
        raise LevelError("symbol space at level %r is zero" % n)
    helper_primes = helper_primes or _small_coprime_primes(n, d, 3)
    lines = _split_lines(syms, helper_primes)
    new_line = None
    eis_line = None
    for line, lam_table in lines:
        eis = all(lam == q_norm + 1 for (q_norm, lam) in lam_table)
        if eis:
            eis_line = line
            continue
        if new_line is not None:
            raise LevelError("multiple cuspidal eigenlines; refine helpers")
        new_line = (line, lam_table)
    if new_line is None:
        raise LevelError("no cuspidal eigenline found at level %r" % n)
    phi, lam_table = new_line
    pp = pd.p if p is None else p
    phi = phi.normalize_integral(pp)
    # annotations
    upi = apply_hecke(phi, pd.pi)
    lam_p = _ratio(upi, phi)
    alw = apply_atkin_lehner(phi, pd.pi)
    al_eig = _ratio(alw, phi)
    phi.eigen = {
        "lambda_p": lam_p,
        "omega": -al_eig,
        "helpers": [(str(q), str(l)) for q, l in lam_table],
    }
    eis_sym = eis_line
    return phi, eis_sym


def _small_coprime_primes(n, d, count):
    out = []
    p = 2
    while len(out) < count:
        pd = split_prime(p, d)
        for pi in ([pd.pi, pd.pibar] if pd.kind == "split" else [pd.pi]):
            if not divides(pi, n) and len(out) < count:
                out.append((pi, pd.norm))
        p = _next_prime(p)
    return out


def _next_prime(p):
    from sympy import nextprime
    return int(nextprime(p))


def _split_lines(syms, helper_primes):
    """Common eigenlines of the helper Hecke operators on the span."""
    from sympy import Matrix, Rational, eye
    spaces = [syms]
    tables = [[]]
    for pi, q_norm in helper_primes:
        new_spaces, new_tables = [], []
        for space, table in zip(spaces, tables):
            if len(space) == 1:
                up = apply_hecke(space[0], pi)
                lam = _ratio(up, space[0])
                new_spaces.append(space)
                new_tables.append(table + [(q_norm, lam)])
                continue
            T = hecke_matrix_on(space, pi)
            M = Matrix([[Rational(x.numerator, x.denominator) for x in row]
                        for row in T])
            for lam, mult, vecs in M.eigenvects():
                if not lam.is_rational:
                    continue
                lamf = Fraction(int(lam.p), int(lam.q))
                for v in vecs:
                    comb = None
                    for coef, s in zip(list(v), space):
                        term = s.scale(Fraction(int(coef.p), int(coef.q)))
                        comb = term if comb is None else comb.add(term)
                    new_spaces.append([comb])
                    new_tables.append(table + [(q_norm, lamf)])
        spaces, tables = new_spaces, new_tables
    return list(zip([s[0] for s in spaces], tables))


def _ratio(num_sym, den_sym):
    for a, b in zip(num_sym.values, den_sym.values):
        if b:
            r = a / b
            break
    else:
        raise ValueError("zero symbol")
    assert all(a == r * b for a, b in zip(num_sym.values, den_sym.values)), \
        "not an eigensymbol"
    return r


def algebraic_L_sum(phi, chi):
    """Sum_a chi(a) phi{a/c -> oo}(1), the constant-stripped L-value of the
    weight-(0,0) integral formula (r = 0)."""
    d = phi.d
    c = chi.modulus
    if c.is_unit():
        return phi.ev(cusp_zero(d), cusp_infinity(d))
    total = Fraction(0)
    for a in chi.ring.unit_elements():
        total += chi(a) * phi.ev(Cusp(a, c), cusp_infinity(d))
    return total


def interpolation_constant_squared(chi, r, d):
    """Square of the chi-dependent part of the interpolation constant
    (Gauss-sum sign free): tau(chi^{-1})^2 * |c|^{2r}."""
    tau2 = chi.gauss_sum_squared()
    c_norm = abs(chi.conductor.norm())
    return Fraction(tau2) * Fraction(c_norm) ** r
