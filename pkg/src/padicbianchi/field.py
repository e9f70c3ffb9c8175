"""Exact arithmetic in the Euclidean imaginary quadratic fields of class number 1.

Supported fields are Q(sqrt(-d)) for d in {1, 2, 3, 7, 11}, presented on the
integral basis {1, w} where w = sqrt(-d) for d = 1, 2 and w = (1+sqrt(-d))/2
otherwise.  Everything here is exact integer/rational arithmetic: elements,
ideals (all principal), prime splitting, the Euclidean continued-fraction
decomposition of cusps, and quadratic ray-class characters.
"""

from fractions import Fraction
from math import isqrt

# d -> (|disc|, S, T, unit list as (a, b) pairs) where w^2 = S*w + T.
_FIELD_TABLE = {
    1: (4, 0, -1, [(1, 0), (-1, 0), (0, 1), (0, -1)]),
    2: (8, 0, -2, [(1, 0), (-1, 0)]),
    3: (3, 1, -1, [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]),
    7: (7, 1, -2, [(1, 0), (-1, 0)]),
    11: (11, 1, -3, [(1, 0), (-1, 0)]),
}

SUPPORTED_FIELDS = tuple(sorted(_FIELD_TABLE))


class UnsupportedFieldError(ValueError):
    pass


def field_params(d):
    if d not in _FIELD_TABLE:
        raise UnsupportedFieldError(
            "field Q(sqrt(-%s)) not supported; d must be one of %s"
            % (d, list(SUPPORTED_FIELDS)))
    return _FIELD_TABLE[d]


class QuadInt:
    """Element a + b*w of the ring of integers of Q(sqrt(-d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=1):
        self.a = int(a)
        self.b = int(b)
        self.d = d
        field_params(d)

    def _check(self, other):
        if not isinstance(other, QuadInt):
            other = QuadInt(other, 0, self.d)
        if other.d != self.d:
            raise ValueError("mixed fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return QuadInt(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        other = self._check(other)
        _, S, T, _ = _FIELD_TABLE[self.d]
        # (a1 + b1 w)(a2 + b2 w) with w^2 = S w + T
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return QuadInt(a1 * a2 + T * b1 * b2,
                       a1 * b2 + b1 * a2 + S * b1 * b2, self.d)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = QuadInt(1, 0, self.d)
        x = self
        n = int(n)
        if n < 0:
            raise ValueError("negative power of a QuadInt")
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            return self.a == other and self.b == 0
        return (isinstance(other, QuadInt) and self.a == other.a
                and self.b == other.b and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conj(self):
        _, S, _, _ = _FIELD_TABLE[self.d]
        return QuadInt(self.a + S * self.b, -self.b, self.d)

    def norm(self):
        _, S, T, _ = _FIELD_TABLE[self.d]
        return self.a * self.a + S * self.a * self.b - T * self.b * self.b

    def trace(self):
        _, S, _, _ = _FIELD_TABLE[self.d]
        return 2 * self.a + S * self.b

    def is_unit(self):
        return self.norm() == 1

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "%d*w" % self.b
        return "%d%+d*w" % (self.a, self.b)


def units(d):
    return [QuadInt(a, b, d) for a, b in field_params(d)[3]]


def one(d):
    return QuadInt(1, 0, d)


def omega(d):
    return QuadInt(0, 1, d)


def divmod_quad(x, y):
    """Euclidean division x = q*y + r with N(r) < N(y) (nearest rounding)."""
    if not y:
        raise ZeroDivisionError("QuadInt division by zero")
    n = y.norm()
    z = x * y.conj()  # exact quotient has coordinates z.a/n, z.b/n
    fa, fb = z.a // n, z.b // n
    # nearest rounding alone is not enough for d = 7, 11; scan the four
    # surrounding lattice points and keep the smallest remainder
    best = None
    for qa in (fa, fa + 1):
        for qb in (fb, fb + 1):
            q = QuadInt(qa, qb, x.d)
            r = x - q * y
            if best is None or r.norm() < best[1].norm():
                best = (q, r)
    q, r = best
    assert r.norm() < n
    return q, r


def gcd_quad(x, y):
    while y:
        x, y = y, divmod_quad(x, y)[1]
    return x


def xgcd_quad(x, y):
    """Return (g, u, v) with u*x + v*y = g = gcd(x, y)."""
    d = x.d
    r0, r1 = x, y
    s0, s1 = one(d), QuadInt(0, 0, d)
    t0, t1 = QuadInt(0, 0, d), one(d)
    while r1:
        q, r = divmod_quad(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def exact_div(x, y):
    q, r = divmod_quad(x, y)
    if r:
        raise ValueError("%r does not divide %r" % (y, x))
    return q


def divides(y, x):
    return not divmod_quad(x, y)[1]


class PrimeData:
    """Splitting data of a rational prime p in O_F."""

    __slots__ = ("p", "kind", "pi", "pibar", "e", "f", "norm")

    def __init__(self, p, kind, pi, pibar, e, f):
        self.p = p
        self.kind = kind          # "split" | "inert" | "ramified"
        self.pi = pi
        self.pibar = pibar
        self.e = e
        self.f = f
        self.norm = p ** f

    def __repr__(self):
        return "PrimeData(p=%d, %s, pi=%r, N=%d)" % (
            self.p, self.kind, self.pi, self.norm)


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def split_prime(p, d):
    """Factor the rational prime p in the ring of integers of Q(sqrt(-d))."""
    D, S, T, _ = field_params(d)
    if D % p == 0:
        # ramified: pi = sqrt(-d) up to a unit; p | D
        if d in (1, 2):
            pi = QuadInt(1, 1, d) if d == 1 else omega(d)
        else:
            pi = QuadInt(-1, 2, d)  # 2w - 1 = sqrt(-d)
        assert abs(pi.norm()) == p
        return PrimeData(p, "ramified", pi, pi.conj(), 2, 1)
    # x^2 - S x - T mod p: discriminant S^2 + 4T = -D (or -4d adjusted)
    disc = S * S + 4 * T
    if p == 2:
        has_root = any((r * r - S * r - T) % 2 == 0 for r in (0, 1))
    else:
        has_root = _legendre(disc, p) == 1
    if not has_root:
        return PrimeData(p, "inert", QuadInt(p, 0, d), QuadInt(p, 0, d), 1, 2)
    root = next(r for r in range(p) if (r * r - S * r - T) % p == 0)
    pi = gcd_quad(QuadInt(p, 0, d), QuadInt(-root, 1, d))
    assert pi.norm() == p
    return PrimeData(p, "split", pi, pi.conj(), 1, 1)


# ---------------------------------------------------------------------------
# cusps


class Cusp:
    """Point of P^1(F) as a coprime pair (num : den); den = 0 is infinity."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        if not num and not den:
            raise ValueError("(0:0) is not a cusp")
        g = gcd_quad(num, den)
        if g:
            num, den = exact_div(num, g), exact_div(den, g)
        self.num = num
        self.den = den

    @property
    def d(self):
        return self.num.d

    def is_infinity(self):
        return not self.den

    def key(self):
        # canonical form up to units: scale so den (or num) is normalized
        ref = self.den if self.den else self.num
        best = None
        for u in units(self.d):
            cand = ((self.num * u).a, (self.num * u).b,
                    (self.den * u).a, (self.den * u).b)
            if best is None or cand < best:
                best = cand
        return best

    def __eq__(self, other):
        return isinstance(other, Cusp) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_infinity():
            return "oo"
        return "(%r)/(%r)" % (self.num, self.den)


def cusp_infinity(d):
    return Cusp(one(d), QuadInt(0, 0, d))


def cusp_zero(d):
    return Cusp(QuadInt(0, 0, d), one(d))


def apply_moebius(mat, c):
    """Standard Moebius action (az+b)/(cz+d) of mat = [[a,b],[c,d]] on a cusp."""
    (a, b), (cc, dd) = mat
    return Cusp(a * c.num + b * c.den, cc * c.num + dd * c.den)


def mat_det(mat):
    (a, b), (c, d) = mat
    return a * d - b * c


def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_inv_unimodular(mat):
    (a, b), (c, d) = mat
    det = a * d - b * c
    if not det.is_unit():
        raise ValueError("matrix is not unimodular")
    ui = _unit_inverse(det)
    return ((d * ui, (-b) * ui), ((-c) * ui, a * ui))


def _unit_inverse(u):
    if not u.is_unit():
        raise ValueError("not a unit")
    for v in units(u.d):
        if u * v == 1:
            return v
    raise AssertionError("unit without inverse")


def identity_mat(d):
    return ((one(d), QuadInt(0, 0, d)), (QuadInt(0, 0, d), one(d)))


def cf_decompose(cusp):
    """Unimodular matrices g_i with sum {g_i 0 -> g_i oo} = {0 -> cusp}.

    Manin's trick via the Euclidean continued fraction of num/den.  For the
    cusp 0 the list is empty; for infinity it is [identity] (the base segment
    {0 -> oo} itself).
    """
    d = cusp.d
    if cusp.is_infinity():
        return [identity_mat(d)]
    if not cusp.num:
        return []
    # continued fraction of num/den by Euclidean division
    num, den = cusp.num, cusp.den
    quots = []
    while den:
        q, r = divmod_quad(num, den)
        quots.append(q)
        num, den = den, r
    # convergents p_k/q_k; p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1
    pm2, qm2 = QuadInt(0, 0, d), one(d)
    pm1, qm1 = one(d), QuadInt(0, 0, d)
    mats = [identity_mat(d)]  # the k = -1 segment {0 -> oo}
    for q in quots:
        pk = q * pm1 + pm2
        qk = q * qm1 + qm2
        g = ((pk, pm1), (qk, qm1))
        det = mat_det(g)
        ui = _unit_inverse(det)
        g = ((pk, pm1 * ui), (qk, qm1 * ui))  # scale 2nd column: det = 1
        mats.append(g)
        pm2, qm2 = pm1, qm1
        pm1, qm1 = pk, qk
    return mats


def path_between(r, s):
    """List of (sign, unimodular g) with sum sign*{g 0 -> g oo} = {r -> s}."""
    out = [(1, g) for g in cf_decompose(s)]
    out.extend((-1, g) for g in cf_decompose(r))
    return out


# ---------------------------------------------------------------------------
# residue rings and characters


def _hnf_2x2(v1, v2):
    """Lower-triangular HNF basis [(h00,0),(h10,h11)] of the lattice Z v1 + Z v2."""
    rows = [list(v1), list(v2)]
    # make second coordinate zero in one generator
    while rows[0][1] and rows[1][1]:
        if abs(rows[0][1]) < abs(rows[1][1]):
            rows.reverse()
        q = rows[0][1] // rows[1][1]
        rows[0] = [rows[0][k] - q * rows[1][k] for k in range(2)]
    if rows[0][1]:
        rows.reverse()
    # rows[0] = (g, 0); rows[1] = (h10, h11)
    h00 = abs(rows[0][0])
    h10, h11 = rows[1]
    if h11 < 0:
        h10, h11 = -h10, -h11
    h10 %= h00
    return h00, h10, h11


class ResidueRing:
    """The quotient O_F / (n) with canonical representatives."""

    def __init__(self, n):
        if not n:
            raise ValueError("modulus must be nonzero")
        self.n = n
        self.d = n.d
        nw = n * omega(n.d)
        self.h00, self.h10, self.h11 = _hnf_2x2((n.a, n.b), (nw.a, nw.b))
        self.size = self.h00 * self.h11
        assert self.size == abs(n.norm())

    def reduce(self, x):
        if isinstance(x, int):
            x = QuadInt(x, 0, self.d)
        b = x.b % self.h11
        k = (x.b - b) // self.h11
        a = (x.a - k * self.h10) % self.h00
        return QuadInt(a, b, self.d)

    def elements(self):
        for b in range(self.h11):
            for a in range(self.h00):
                yield QuadInt(a, b, self.d)

    def is_unit(self, x):
        return gcd_quad(x, self.n).is_unit()

    def unit_elements(self):
        return [x for x in self.elements() if self.is_unit(x)]

    def inverse(self, x):
        g, u, _ = xgcd_quad(x, self.n)
        if not g.is_unit():
            raise ValueError("%r is not invertible mod %r" % (x, self.n))
        return self.reduce(u * _unit_inverse(g))

    def mul(self, x, y):
        return self.reduce(x * y)

    def pow(self, x, k):
        if k < 0:
            return self.pow(self.inverse(x), -k)
        r = self.reduce(one(self.d))
        x = self.reduce(x)
        while k:
            if k & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            k >>= 1
        return r

    def mult_order(self, x):
        y = self.reduce(x)
        if not self.is_unit(y):
            raise ValueError("order of a non-unit")
        k, z = 1, y
        e = self.reduce(one(self.d))
        while z != e:
            z = self.mul(z, y)
            k += 1
        return k


class RayCharacter:
    """Quadratic character of (O_F/c)^x trivial on the global units."""

    def __init__(self, modulus, table, conductor):
        self.modulus = modulus
        self.ring = ResidueRing(modulus)
        self.table = table          # dict canonical residue -> +-1
        self.conductor = conductor

    def __call__(self, x):
        if isinstance(x, int):
            x = QuadInt(x, 0, self.modulus.d)
        r = self.ring.reduce(x)
        return self.table.get(r, 0)

    def is_trivial(self):
        return all(v == 1 for v in self.table.values())

    def value_on_prime(self, prime_data):
        """chi(p) := chi(pi) for unramified chi at p, else 0."""
        return self(prime_data.pi)

    def gauss_sum_squared(self):
        """tau(chi)^2 = chi(-1) N(cond); sign-free, normalization-robust."""
        if self.conductor.is_unit():
            return 1
        return self(QuadInt(-1, 0, self.modulus.d)) * abs(self.conductor.norm())

    def __repr__(self):
        return "RayCharacter(mod %r, cond %r)" % (self.modulus, self.conductor)


def _ideal_divisors(c):
    """All divisors of (c) up to units, as generators."""
    d = c.d
    divs = [one(d)]
    n = abs(c.norm())
    rest = c
    p = 2
    prime_powers = []
    while p * p <= n:
        if n % p == 0:
            pd = split_prime(p, d)
            for pi in ({pd.pi, pd.pibar} if pd.kind == "split" else {pd.pi}):
                k = 0
                while divides(pi, rest):
                    rest = exact_div(rest, pi)
                    k += 1
                if k:
                    prime_powers.append((pi, k))
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        pd = split_prime(n, d)
        for pi in ({pd.pi, pd.pibar} if pd.kind == "split" else {pd.pi}):
            k = 0
            while divides(pi, rest):
                rest = exact_div(rest, pi)
                k += 1
            if k:
                prime_powers.append((pi, k))
    assert rest.is_unit()
    for pi, k in prime_powers:
        divs = [g * pi ** j for g in divs for j in range(k + 1)]
    return divs


def _exact_conductor(modulus, table, ring):
    best = modulus
    for g in _ideal_divisors(modulus):
        if abs(g.norm()) >= abs(best.norm()):
            continue
        sub = ResidueRing(g)
        ok = True
        vals = {}
        for u, v in table.items():
            key = sub.reduce(u)
            if key in vals and vals[key] != v:
                ok = False
                break
            vals[key] = v
        if ok:
            best = g
    return best


def quadratic_ray_characters(c):
    """All characters of (O_F/c)^x of order <= 2 trivial on the unit group.

    Each returned character is annotated with its exact conductor.
    """
    ring = ResidueRing(c)
    us = ring.unit_elements()
    unit_imgs = [ring.reduce(u) for u in units(c.d)]
    # subgroup S generated by squares and global units; characters = homs of U/S
    gens = [ring.mul(u, u) for u in us] + unit_imgs
    S = {ring.reduce(one(c.d))}
    frontier = list(S)
    genset = set(gens)
    while frontier:
        x = frontier.pop()
        for g in genset:
            y = ring.mul(x, g)
            if y not in S:
                S.add(y)
                frontier.append(y)
    # coset decomposition of U by S
    cosets = []
    seen = set()
    for u in us:
        if u in seen:
            continue
        coset = {ring.mul(u, s) for s in S}
        seen |= coset
        cosets.append((u, coset))
    # U/S is elementary abelian 2-group; find a basis greedily
    basis = []
    span = {frozenset(cosets[0][1])} if cosets else set()
    coset_of = {}
    for rep, cs in cosets:
        for x in cs:
            coset_of[x] = rep
    id_rep = coset_of[ring.reduce(one(c.d))]
    span_reps = {id_rep}
    for rep, _ in cosets:
        if rep in span_reps:
            continue
        basis.append(rep)
        span_reps |= {coset_of[ring.mul(rep, x)] for x in list(span_reps)}
    chars = []
    for mask in range(1 << len(basis)):
        signs = {b: (-1 if (mask >> i) & 1 else 1) for i, b in enumerate(basis)}
        # extend multiplicatively over the whole unit group
        table = {}
        for u in us:
            # express coset_of[u] in the basis by brute-force search
            table[u] = _coset_sign(u, basis, signs, coset_of, ring, id_rep)
        cond = _exact_conductor(c, table, ring)
        chars.append(RayCharacter(c, table, cond))
    return chars


def _coset_sign(u, basis, signs, coset_of, ring, id_rep):
    # walk through subsets of the basis to find the expression of u's coset
    from itertools import combinations
    target = coset_of[u]
    if target == id_rep:
        return 1
    for r in range(1, len(basis) + 1):
        for combo in combinations(basis, r):
            prod = combo[0]
            for b in combo[1:]:
                prod = ring.mul(prod, b)
            if coset_of[prod] == target:
                s = 1
                for b in combo:
                    s *= signs[b]
                return s
    raise AssertionError("coset not spanned by basis")


def parse_quadint(text, d):
    """Parse 'a', 'b*w', or 'a+b*w' (also 'a-b*w', bare 'w'; 'i' for d=1)."""
    text = text.strip().replace(" ", "")
    if d == 1:
        text = text.replace("i", "w")
    if not text:
        raise ValueError("empty element")
    # normalize leading sign handling by splitting on +/- outside the first char
    a, b = 0, 0
    term = ""
    terms = []
    for i, ch in enumerate(text):
        if ch in "+-" and i > 0:
            terms.append(term)
            term = ch
        else:
            term += ch
    terms.append(term)
    for t in terms:
        if "w" in t:
            coeff = t.replace("*w", "").replace("w", "")
            if coeff in ("", "+"):
                b += 1
            elif coeff == "-":
                b -= 1
            else:
                b += int(coeff)
        else:
            a += int(t)
    return QuadInt(a, b, d)


def parse_cusp(text, d):
    """Parse a cusp 'num/den' with QuadInt parts, or 'oo'."""
    text = text.strip()
    if text in ("oo", "inf", "infinity"):
        return cusp_infinity(d)
    if "/" in text:
        nu, de = text.split("/", 1)
        return Cusp(parse_quadint(nu, d), parse_quadint(de, d))
    return Cusp(parse_quadint(text, d), one(d))
