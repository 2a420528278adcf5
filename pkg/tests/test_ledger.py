from fractions import Fraction

import pytest

from bcov33.gw_b_model import n1_invariants
from bcov33.ledger import (
    CHI_SMOOTH, KAPPA_ODP, ORDERS_KPOINT, ORDERS_ODP, ORDERS_ODP_ALT, PROVENANCE, PhiDivisor,
    SpecialPoint, assemble_phi, kappa_from_geometry, kpoint, odp_point, phi_order, target_phi,
    eta_norm_exponents, verify_bcov,
)

GOOD_HOLO = {"chi_O": 1, "chi_mL1": 0, "chi_mL2": 0, "chi_mL1mL2": 1, "chi_W0": 2}


@pytest.fixture(scope="module")
def gw_pair():
    return n1_invariants(12), n1_invariants(8)


def cheap(gw_pair, **extra):
    ov = {"chi_Y0": 192, "holo": GOOD_HOLO, "gw": gw_pair}
    ov.update(extra)
    return verify_bcov(overrides=ov)


class TestKappa:
    def test_examples(self):
        assert kappa_from_geometry(144, 192, [2, 1, 1]) == 4
        assert kappa_from_geometry(100, 100, []) == 0
        assert kappa_from_geometry(144, 192, []) == 8


class TestOrders:
    def test_odp(self):
        assert phi_order(SpecialPoint("ODP", Fraction(1, 6), (0, 0, -1, -1)), 144) == Fraction(7, 6)

    def test_odp_other_sign(self):
        assert phi_order(odp_point(ORDERS_ODP_ALT)) == Fraction(-5, 6)

    def test_kpoint(self):
        assert phi_order(SpecialPoint("Kpoint", Fraction(4), (2, 2, 4, 4)), 144) == -34

    def test_trivial(self):
        assert phi_order(SpecialPoint("MUM", Fraction(0), (0, 0, 0, 0))) == 0

    def test_validation(self):
        with pytest.raises(ValueError):
            SpecialPoint("cusp", Fraction(0), (0, 0, 0, 0))
        with pytest.raises(ValueError):
            SpecialPoint("ODP", Fraction(0), (0, 0))


class TestDivisor:
    def test_assembled(self):
        phi = assemble_phi(kpoint(Fraction(4)), odp_point())
        assert phi == PhiDivisor(Fraction(-68), Fraction(7, 3), Fraction(54))
        assert phi.degree() == 0

    def test_zero_inputs(self):
        zero = assemble_phi(SpecialPoint("Kpoint", Fraction(0), (0,) * 4), SpecialPoint("ODP", Fraction(0), (0,) * 4))
        assert zero == PhiDivisor(0, 0, 0)

    def test_target(self):
        t = target_phi()
        assert t.at_zero == -68 and t.at_root == Fraction(7, 3) and t.at_infinity == 54
        assert t.degree() == 0

    def test_coherence(self):
        assert 2 * phi_order(kpoint(Fraction(4))) == target_phi().at_zero
        assert 2 * phi_order(odp_point()) == target_phi().at_root

    def test_eta_norm_exponents(self):
        assert eta_norm_exponents() == {"eta0": 30, "eta1": 4, "eta2": 2}


class TestConstants:
    # change detection for the cited inputs
    def test_frozen(self):
        assert CHI_SMOOTH == 144
        assert KAPPA_ODP == Fraction(1, 6)
        assert ORDERS_KPOINT == (2, 2, 4, 4)
        assert ORDERS_ODP == (0, 0, -1, -1)
        assert ORDERS_ODP_ALT == (0, 0, 1, 1)

    def test_provenance_present(self):
        for key in ("chi_smooth", "chi_W1", "chi_W2", "kappa_odp", "orders_kpoint", "orders_odp", "orders_odp_alt"):
            assert PROVENANCE[key]


class TestVerify:
    def test_pass_with_cheap_inputs(self, gw_pair):
        rep = cheap(gw_pair)
        assert rep.passed, rep.first_failure
        js = rep.to_json()
        assert js["status"] == "PASS"
        assert js["values"]["kappa0"] == "4"
        assert js["values"]["kappa0_without_holo"] == "8"
        assert len(js["discrepancies"]) == 2
        assert len(js["assumptions"]) == 2

    def test_kpoint_order_perturbed(self, gw_pair):
        rep = cheap(gw_pair, orders_kpoint=(2, 2, 3, 4))
        assert not rep.passed
        assert rep.first_failure.name == "K-point order"
        assert rep.first_failure.actual == -33

    def test_chi_perturbed(self, gw_pair):
        rep = cheap(gw_pair, chi_Y0=190)
        assert rep.first_failure.name == "kappa_0"

    def test_odp_sign_perturbed(self, gw_pair):
        rep = cheap(gw_pair, orders_odp=ORDERS_ODP_ALT)
        assert rep.first_failure.name == "ODP order"

    def test_series_failure_reported(self, gw_pair):
        rep = cheap(gw_pair, series_checks={"pf_annihilation": False})
        assert rep.first_failure.name == "series: pf_annihilation"

    def test_holo_failure_reported(self, gw_pair):
        bad = dict(GOOD_HOLO, chi_W0=3, chi_mL1mL2=2)
        rep = cheap(gw_pair, holo=bad)
        # the wrong holomorphic value first shows up in kappa
        assert rep.first_failure.name == "kappa_0"
