"""Tests for the classical side: Tate periods, rational symbols, lifting,
one-variable L-values, and the cyclotomic factorization."""

from fractions import Fraction

import pytest

from padicbianchi import basechange as bc
from padicbianchi import lfun
from padicbianchi.field import QuadInt


def qi(a, b=0):
    return QuadInt(a, b, 1)


@pytest.fixture(scope="module")
def rational_pair():
    return bc.find_rational_eigensymbols(11, 11)


@pytest.fixture(scope="module")
def rational_lifts(rational_pair):
    plus, minus = rational_pair
    psi_p, cert_p = bc.lift_rational(plus, 8, 11)
    psi_m, cert_m = bc.lift_rational(minus, 8, 11)
    return (psi_p, cert_p), (psi_m, cert_m)


@pytest.fixture(scope="module")
def mu_bianchi(ref_lift):
    psi, _ = ref_lift
    return lfun.build_mu_p(psi, qi(1))


class TestTatePeriod:
    def test_curve_invariants(self):
        inv = bc.curve_invariants(bc.CURVES["11a"])
        assert inv["c4"] == 496
        assert inv["disc"] == -(11 ** 5)
        assert inv["j"] == Fraction(496 ** 3, -(11 ** 5))

    def test_valuation_matches_discriminant(self):
        q, v = bc.tate_period(bc.CURVES["11a"], 11, 8)
        assert v == 5
        assert q % 11 ** 5 == 0 and (q // 11 ** 5) % 11 != 0

    def test_ramified_curve(self):
        q, v = bc.tate_period(bc.CURVES["14a"], 2, 6)
        assert v == 6

    def test_good_reduction_rejected(self):
        with pytest.raises(ValueError, match="good reduction"):
            bc.tate_period(bc.CURVES["11a"], 7, 8)

    def test_additive_reduction_rejected(self):
        # y^2 = x^3 + 1 has additive reduction at 2
        with pytest.raises(ValueError, match="additive"):
            bc.tate_period((0, 0, 0, 0, 1), 2, 6)

    def test_l_invariant_value(self):
        li = bc.classical_l_invariant(bc.CURVES["11a"], 11, 8)
        assert li.val() == 1
        assert li.c0 % 11 ** 8 == 91589443

    def test_l_invariant_ramified(self):
        li = bc.classical_l_invariant(bc.CURVES["14a"], 2, 6)
        assert li.val() == 3
        assert li.c0 % 2 ** li.prec == 8


class TestRationalSymbols:
    def test_space_dimension(self):
        _, basis = bc.build_rational_symbol_space(11)
        assert len(basis) == 3

    def test_p1_size(self):
        assert len(bc.RationalP1(11)) == 12

    def test_path_composition(self, rational_pair):
        plus, _ = rational_pair
        r, s, t = Fraction(0), Fraction(1, 3), Fraction(2, 7)
        assert plus.ev(r, s) + plus.ev(s, t) == plus.ev(r, t)

    def test_unimodular_path_determinants(self):
        for sign, g in bc._unimodular_path(Fraction(17, 43), Fraction(-5, 9)):
            assert g[0][0] * g[1][1] - g[0][1] * g[1][0] == 1

    def test_unit_ap(self, rational_pair):
        plus, minus = rational_pair
        assert plus.eigen["lambda_p"] == 1
        assert minus.eigen["lambda_p"] == 1

    def test_helper_eigenvalue(self, rational_pair):
        plus, _ = rational_pair
        img = bc.apply_hecke_rational(plus, 2)
        assert img.values == [-2 * v for v in plus.values]

    def test_parity(self, rational_pair):
        plus, minus = rational_pair
        assert bc.apply_parity_involution(plus).values == plus.values
        assert bc.apply_parity_involution(minus).values == \
            [-v for v in minus.values]

    def test_minus_not_zero(self, rational_pair):
        _, minus = rational_pair
        assert not minus.is_zero()


class TestRationalLift:
    def test_converged(self, rational_lifts):
        (_, cert_p), (_, cert_m) = rational_lifts
        assert cert_p["converged"] and cert_m["converged"]
        assert cert_p["iterations"] <= 9

    def test_filtration_gains(self, rational_lifts):
        (_, cert), _ = rational_lifts
        fils = cert["increment_filtrations"]
        assert all(b - a >= 1 for a, b in zip(fils, fils[1:]))

    def test_control_round_trip(self, rational_lifts, rational_pair):
        (psi_p, _), (psi_m, _) = rational_lifts
        plus, minus = rational_pair
        assert bc.specialize_rational(psi_p, plus)
        assert bc.specialize_rational(psi_m, minus)

    def test_ev_specializes(self, rational_lifts, rational_pair):
        (psi_p, _), _ = rational_lifts
        plus, _ = rational_pair
        got = psi_p.ev(Fraction(1, 3), None).moment(0)
        want = int(plus.ev(Fraction(1, 3), None))
        assert (got - want) % 11 ** 8 == 0


class TestRationalLp:
    def test_exceptional_zero(self, rational_lifts):
        (psi_p, _), _ = rational_lifts
        mu = bc.build_mu_rational(psi_p, 1)
        assert bc.Lp_rational(mu).is_zero()

    def test_derivative_value(self, rational_lifts):
        (psi_p, _), _ = rational_lifts
        mu = bc.build_mu_rational(psi_p, 1)
        d = bc.Lp_rational(mu, insert_log=True)
        assert d.val() == 1
        assert d.c0 % 11 ** 8 == 31179995

    def test_chi4_value_is_unit(self, rational_lifts):
        _, (psi_m, _) = rational_lifts
        mu = bc.build_mu_rational(psi_m, 4)
        val = bc.Lp_rational(mu, bc.chi_minus4(), 0)
        assert val.is_unit()
        assert val.c0 % 11 ** 8 == 4

    def test_modulus_coprime_to_p(self, rational_lifts):
        (psi_p, _), _ = rational_lifts
        with pytest.raises(ValueError):
            bc.build_mu_rational(psi_p, 11)

    def test_greenberg_stevens(self, rational_lifts):
        # L_p'(0) = L-invariant * algebraic L-value (here the unit 1/5
        # times the normalization, pinned by the frozen constants)
        (psi_p, _), _ = rational_lifts
        mu = bc.build_mu_rational(psi_p, 1)
        d = bc.Lp_rational(mu, insert_log=True)
        li = bc.classical_l_invariant(bc.CURVES["11a"], 11, 8)
        ratio = d / li
        assert ratio.is_unit()


class TestCyclotomicRestriction:
    def test_exceptional_zero(self, mu_bianchi):
        assert bc.cyclotomic_Lp(mu_bianchi, 0).is_zero()

    def test_derivative_is_twice_single_log(self, mu_bianchi):
        # log(z zbar) = log z + log zbar, and the two integrals agree
        # for an inert prime, so the cyclotomic derivative is exactly
        # twice the single-variable one
        d2 = bc.cyclotomic_Lp_derivative(mu_bianchi)
        d1 = lfun.Lp_derivative_at(mu_bianchi)
        assert (d2 - 2 * d1).is_zero()
        assert d2.c0 % 11 ** 8 == 124719980

    def test_value_at_sample_point(self, mu_bianchi):
        v = bc.cyclotomic_Lp(mu_bianchi, 1)
        assert not v.is_zero()


class TestFactorization:
    def test_report(self, mu_bianchi, rational_lifts):
        (psi_p, _), (psi_m, _) = rational_lifts
        rep = bc.factorization_check(mu_bianchi, psi_p, psi_m)
        assert rep["status"] == "ok"
        assert rep["exceptional_transfer"] == {
            "left_zero": True, "right_zero": True}
        assert rep["ratio_of_ratios_ok"]
        assert rep["unit_factor"] == 2
        cross = rep["cross_difference"]
        assert all(c == "0" for c in cross["coeffs"])

    def test_vanishing_point_inconclusive(self, mu_bianchi, rational_lifts):
        (psi_p, _), (psi_m, _) = rational_lifts
        rep = bc.factorization_check(mu_bianchi, psi_p, psi_m, points=(0, 1))
        assert rep["status"] == "inconclusive"


class TestRamifiedRun:
    def test_report_skips_with_cause(self):
        rep = bc.ramified_case_report(M=6)
        assert rep["p"] == 2 and rep["curve"] == "14a"
        assert rep["classical_l_invariant"]["valuation"] == 3
        assert rep["status"] == "skipped"
        assert rep["stage"] == "L-invariant (log kernel disc expansion)"
        assert "PrecisionError" in rep["cause"]
