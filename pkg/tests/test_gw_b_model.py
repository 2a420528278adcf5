from fractions import Fraction

from bcov33.gw_b_model import CHI_X33, f1a_in_z, n1_invariants, n1_zero
from bcov33.series_engine import LogSeries, PowerSeriesQ, mirror_map


def test_n1_zero():
    assert n1_zero() == Fraction(-9, 4)
    assert n1_zero(0) == 0
    assert n1_zero(7) < 0


def test_euler_characteristic_bookkeeping():
    assert Fraction(CHI_X33, 24) == -6


def test_f1a_shape():
    f = f1a_in_z(10)
    assert f.l_degree() == 1
    assert f.part(1) == PowerSeriesQ.constant(Fraction(-9, 4), 10)
    assert f.part(0)[0] == 0


def test_log_q_cancels():
    order = 10
    f = f1a_in_z(order)
    g = f + mirror_map(order).log_q.scale(Fraction(9, 4))
    assert g.is_pure()


def test_invariants():
    res = n1_invariants(12)
    assert res.n1_0 == Fraction(-9, 4)
    assert res.constant == 0
    assert set(res.n1) == set(range(1, 12))
    assert all(isinstance(v, Fraction) for v in res.n1.values())


def test_stability():
    a, b = n1_invariants(8), n1_invariants(12)
    for d in range(1, 7):
        assert a.n1[d] == b.n1[d]
    c = n1_invariants(16)
    for d in range(1, 11):
        assert b.n1[d] == c.n1[d]


def test_identity_mirror_returns_z_series():
    order = 9
    res = n1_invariants(order, identity_mirror=True)
    g = (f1a_in_z(order) + mirror_map(order).log_q.scale(Fraction(9, 4))).as_series()
    assert [res.n1[d] for d in range(1, order)] == g.coeffs[1:]


def test_degree_one_multiple_cover_check():
    # for a (3,3) complete intersection the degree-one genus-one Gromov-Witten
    # invariant is n_0(1)/12 with 1053 lines; reproduced here from the series alone
    # via the genus-zero count extracted from the Yukawa coupling in the Q-frame
    order = 6
    from bcov33.series_engine import holomorphic_parts, invert_mirror

    mm = mirror_map(order)
    i0 = holomorphic_parts(order, 1)[0]
    z = PowerSeriesQ.z(order)
    # K(z) = 9 / ((1 - 3^6 z) I0^2 (d log Q / d log z)^3)
    dlogq = 1 + mm.j_tilde.theta()
    kz = (1 - 729 * z).inverse() * (i0 * i0).inverse() * (dlogq * dlogq * dlogq).inverse() * 9
    kq = kz.compose(invert_mirror(mm.q_over_z))
    n0_1 = kq[1]  # 9 + n_0(1) Q + ...
    assert kq[0] == 9 and n0_1 == 1053
    assert n1_invariants(order).n1[1] == n0_1 / 12


def test_json():
    js = n1_invariants(6).to_json()
    assert js["N1_0"] == "-9/4" and js["order"] == 6 and js["constant"] == "0"
