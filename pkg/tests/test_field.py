"""Tests for exact arithmetic in class-number-1 imaginary quadratic fields."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from padicbianchi import field as fld
from padicbianchi.field import (
    QuadInt,
    Cusp,
    cusp_zero,
    cusp_infinity,
    split_prime,
    divmod_quad,
    gcd_quad,
    xgcd_quad,
    cf_decompose,
    path_between,
    apply_moebius,
    mat_det,
    quadratic_ray_characters,
    ResidueRing,
    parse_quadint,
)


def qi(a, b, d=1):
    return QuadInt(a, b, d)


small = st.integers(min_value=-30, max_value=30)
disc = st.sampled_from([1, 2, 3, 7, 11])


class TestQuadInt:
    @given(small, small, small, small, disc)
    def test_norm_multiplicative(self, a, b, c, e, d):
        x, y = qi(a, b, d), qi(c, e, d)
        assert (x * y).norm() == x.norm() * y.norm()

    @given(small, small, disc)
    def test_conj_norm_trace(self, a, b, d):
        x = qi(a, b, d)
        assert x * x.conj() == qi(x.norm(), 0, d)
        assert x + x.conj() == qi(x.trace(), 0, d)

    @given(small, small, small, small, disc)
    def test_division_with_remainder(self, a, b, c, e, d):
        x, y = qi(a, b, d), qi(c, e, d)
        if y.norm() == 0:
            return
        q, r = divmod_quad(x, y)
        assert q * y + r == x
        # norm-Euclidean: remainder strictly smaller
        assert r.norm() < y.norm()

    @given(small, small, small, small, disc)
    def test_xgcd(self, a, b, c, e, d):
        x, y = qi(a, b, d), qi(c, e, d)
        if x.norm() == 0 and y.norm() == 0:
            return
        g, u, v = xgcd_quad(x, y)
        assert u * x + v * y == g
        assert fld.divides(g, x) and fld.divides(g, y)

    def test_units(self):
        assert len(fld.units(1)) == 4
        assert len(fld.units(3)) == 6
        assert len(fld.units(2)) == 2

    def test_parse(self):
        assert parse_quadint("3+2i", 1) == qi(3, 2, 1)
        assert parse_quadint("-5", 1) == qi(-5, 0, 1)


class TestSplitPrime:
    def test_inert_11(self):
        pd = split_prime(11, 1)
        assert pd.kind == "inert"
        assert pd.norm == 121
        assert pd.pi == qi(11, 0, 1)

    def test_ramified_2(self):
        pd = split_prime(2, 1)
        assert pd.kind == "ramified"
        assert pd.pi.norm() == 2
        assert fld.divides(pd.pi * pd.pi, qi(2, 0, 1)) or fld.divides(
            qi(2, 0, 1), pd.pi * pd.pi
        )

    def test_split_5(self):
        pd = split_prime(5, 1)
        assert pd.kind == "split"
        assert pd.pi.norm() == 5
        assert pd.pi * pd.pibar == qi(5, 0, 1) or pd.pi * pd.pibar == qi(-5, 0, 1)

    def test_inert_d3(self):
        pd = split_prime(2, 3)
        assert pd.kind == "inert"
        assert pd.norm == 4


class TestCuspPaths:
    def test_decompose_endpoints(self):
        # cf_decompose(0) is empty, cf_decompose(oo) is the identity segment
        assert cf_decompose(cusp_zero(1)) == []
        mats = cf_decompose(cusp_infinity(1))
        assert len(mats) == 1

    @settings(max_examples=40, deadline=None)
    @given(small, small, small, small, disc)
    def test_telescoping(self, a, b, c, e, d):
        if d in (2, 7, 11):
            return
        if qi(a, b, d).norm() == 0 and qi(c, e, d).norm() == 0:
            return
        r = Cusp(qi(a, b, d), qi(c, e, d))
        mats = cf_decompose(r)
        for g in mats:
            assert mat_det(g) == fld.one(d)
        # the path segments {g0 -> goo} chain from 0 to r
        cur = cusp_zero(d)
        for g in mats:
            assert apply_moebius(g, cusp_zero(d)) == cur
            cur = apply_moebius(g, cusp_infinity(d))
        assert cur == r

    def test_path_between(self):
        r = Cusp(qi(2, 3, 1), qi(7, 1, 1))
        s = Cusp(qi(1, 0, 1), qi(4, 5, 1))
        segs = path_between(r, s)
        total = {}
        for sign, g in segs:
            a = apply_moebius(g, cusp_zero(1)).key()
            b = apply_moebius(g, cusp_infinity(1)).key()
            total[a] = total.get(a, 0) - sign
            total[b] = total.get(b, 0) + sign
        total = {k: v for k, v in total.items() if v}
        assert total == {s.key(): 1, r.key(): -1}


class TestResidueRing:
    def test_unit_count_11(self):
        R = ResidueRing(qi(11, 0, 1))
        assert len(list(R.elements())) == 121
        assert len(R.unit_elements()) == 120

    def test_inverse(self):
        R = ResidueRing(qi(4, 1, 1))
        for u in R.unit_elements():
            v = R.inverse(u)
            assert R.reduce(u * v) == R.reduce(qi(1, 0, 1))


class TestRayCharacters:
    def test_mod_3(self):
        chars = quadratic_ray_characters(qi(3, 0, 1))
        assert len(chars) == 2
        chi = next(c for c in chars if not c.is_trivial())
        assert chi(qi(11, 0, 1)) == 1
        assert chi(qi(1, 1, 1)) in (1, -1)
        # trivial on units
        assert chi(qi(0, 1, 1)) == 1

    def test_mod_4_plus_i(self):
        chars = quadratic_ray_characters(qi(4, 1, 1))
        chi = next(c for c in chars if not c.is_trivial())
        assert chi(qi(11, 0, 1)) == -1
        assert chi.gauss_sum_squared() == 17

    def test_mod_5_plus_4i(self):
        chars = quadratic_ray_characters(qi(5, 4, 1))
        chi = next(c for c in chars if not c.is_trivial())
        assert chi(qi(11, 0, 1)) == -1
        assert chi.gauss_sum_squared() == 41

    @pytest.mark.parametrize("m", [qi(3, 0, 1), qi(4, 1, 1), qi(11, 0, 1)])
    def test_multiplicative(self, m):
        chars = quadratic_ray_characters(m)
        R = ResidueRing(m)
        units = R.unit_elements()
        rng = random.Random(7)
        for chi in chars:
            for _ in range(20):
                x, y = rng.choice(units), rng.choice(units)
                assert chi(x * y) == chi(x) * chi(y)
