import math
import random
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from mpmath import mp

from primon.errors import DomainError, QuadratureError, ResourceLimitError
from primon.numeric import Quadrature, log1m, precision
from primon.primes import sieve_first
from primon.specfun import (
    I_b,
    J_b_closed,
    _euler_gamma_cached,
    _zeta_cached,
    a_b_partial,
    bertrand_B,
    bertrand_result,
    c_b_constant,
    euler_gamma,
    exp_gamma,
    li_offset,
    li_offset_result,
    mertens_product,
    prime_sum_S,
    rh_error_integral,
    zeta_real,
)


def test_zeta_matches_mpmath(rel):
    for b in ("1.1", "1.5", 2, 3, "9.5", 10, 40):
        assert rel(zeta_real(b), mp.zeta(mp.mpf(b)), mp.mpf("1e-35"))
    assert abs(zeta_real(2) - mp.pi**2 / 6) < mp.mpf("1e-36")


def test_zeta_at_higher_precision():
    with precision(256):
        assert abs(zeta_real(3) - mp.zeta(3)) < mp.mpf("1e-70")


def test_zeta_domain():
    with pytest.raises(DomainError, match="pole"):
        zeta_real(1)
    with pytest.raises(DomainError):
        zeta_real("0.5")


def test_euler_gamma():
    assert abs(euler_gamma() - mp.euler) < mp.mpf("1e-36")
    assert abs(exp_gamma() - mp.mpf("1.7810724179901979852")) < mp.mpf("1e-18")
    with precision(300):
        assert abs(euler_gamma() - mp.euler) < mp.mpf("1e-85")


def test_li_offset_paths_agree(rel):
    assert li_offset(2) == 0
    for x in (3, 10, 1000, 10**6):
        quad = li_offset(x)
        assert rel(quad, li_offset(x, method="ei"))
        assert rel(quad, mp.li(x) - mp.li(2))
    assert abs(li_offset(10**6) - mp.mpf("78626.504")) < mp.mpf("0.001")


def test_li_reports_error_estimate():
    result = li_offset_result(1000)
    assert result.error <= mp.mpf("1e-20")


def test_quadrature_tolerance_is_enforced():
    strict = Quadrature(tolerance=1e-200, max_degree=2)
    with pytest.raises(QuadratureError) as info:
        li_offset(10**6, quadrature=strict)
    assert info.value.error > 1e-200


def test_unknown_method():
    with pytest.raises(DomainError):
        li_offset(10, method="simpson")


def test_bertrand_paths_agree(rel):
    for b in ("0.6", "0.75", "0.9"):
        for x in (10, 1000, 10**5):
            assert rel(bertrand_B(b, x), bertrand_B(b, x, method="ei"))
    assert bertrand_result("0.5", 100).value > 0


def test_bertrand_domain():
    with pytest.raises(DomainError):
        bertrand_B(1, 100)
    with pytest.raises(DomainError):
        bertrand_B("0.5", 1)


def test_I_b_paths_agree(rel):
    for b in ("0.6", "0.9"):
        for x in (10, 1000):
            assert rel(I_b(b, x), I_b(b, x, method="ei"), mp.mpf("1e-14"))
    with pytest.raises(DomainError):
        I_b("0.4", 100)


def test_rh_error_integral_matches_quadrature(rel):
    for b in ("0.6", "0.75", "0.5"):
        b_ = mp.mpf(b)
        direct = mp.quad(lambda t: mp.log(t) * t ** (-b_ - mp.mpf(1) / 2), [2, 100, 10**4])
        assert rel(rh_error_integral(b, 10**4), direct, mp.mpf("1e-20"))


def test_stieltjes_identity_over_random_draws(table, rel):
    rng = random.Random(11)
    for _ in range(120):
        b = mp.mpf(rng.randrange(5, 95)) / 100
        x = rng.randrange(2, 100_000)
        k = table.index_upto(x)
        lhs = prime_sum_S(b, x, table)
        rhs = k * mp.power(x, -b) + b * J_b_closed(b, x, table)
        assert rel(lhs, rhs)


def test_J_b_vanishes_at_two(table):
    assert J_b_closed("0.75", 2, table) == 0


def test_prime_sums_small_cases(small_table):
    harmonic = mp.mpf(1) / 2 + mp.mpf(1) / 3 + mp.mpf(1) / 5 + mp.mpf(1) / 7
    assert abs(prime_sum_S(1, 10, small_table) - harmonic) < mp.mpf("1e-35")
    assert prime_sum_S(1, 1, small_table) == 0
    expected = sum(mp.log(1 - mp.mpf(p) ** -2) for p in (2, 3, 5, 7))
    assert abs(a_b_partial(2, 10, small_table) - expected) < mp.mpf("1e-35")


def test_mertens_product_tracks_exp_gamma_log(table):
    x = 100_000
    ratio = mertens_product(x, table) / (exp_gamma() * mp.log(x))
    assert abs(ratio - 1) < mp.mpf("0.01")


def test_c_b_constant(table):
    estimate = c_b_constant("0.75", table)
    assert estimate.value < 0
    assert 0 < estimate.tail_radius < mp.mpf("0.01")
    assert estimate.primes_used == 10_000
    with pytest.raises(ResourceLimitError) as info:
        c_b_constant("0.75", table, radius="1e-30")
    assert info.value.best == estimate.tail_radius
    with pytest.raises(DomainError):
        c_b_constant("0.5", table)


def test_constants_from_many_threads(rel):
    _zeta_cached.cache_clear()
    _euler_gamma_cached.cache_clear()
    exponents = [2, 3, "1.5", 10] * 16
    with ThreadPoolExecutor(max_workers=16) as pool:
        zetas = list(pool.map(zeta_real, exponents))
        gammas = list(pool.map(lambda _: euler_gamma(), range(64)))
    assert mp.prec == 128
    for b, value in zip(exponents, zetas):
        assert rel(value, mp.zeta(mp.mpf(b)), mp.mpf("1e-35"))
    assert all(abs(g - mp.euler) < mp.mpf("1e-36") for g in gammas)


def test_log1m_for_tiny_arguments(rel):
    for u in (mp.mpf("1e-30"), mp.mpf(2) ** -200, mp.mpf(1) / 3):
        assert rel(log1m(u), mp.log1p(-u), mp.mpf("1e-36"))
    assert log1m(0) == 0
    assert mp.prec == 128


@pytest.mark.parametrize("b", ["1.1", 2, 9])
def test_euler_product_tends_to_one(table, b):
    # ζ(b) ∏_{p<=x} (1 − p^{−b}) = ∏_{p>x} (1 − p^{−b})^{−1}
    distances = [zeta_real(b) * mp.exp(a_b_partial(b, x, table)) - 1 for x in (10, 100, 1000)]
    assert all(d > 0 for d in distances)
    assert distances[0] > distances[1] > distances[2]
    if b != "1.1":
        assert distances[2] < mp.mpf("1e-3")


def test_halving_the_tolerance_stays_inside_the_error_estimate():
    coarse = bertrand_result("0.75", 10**4, Quadrature(tolerance=1e-16))
    fine = bertrand_result("0.75", 10**4, Quadrature(tolerance=5e-17))
    assert abs(coarse.value - fine.value) <= coarse.error


def test_bertrand_against_midpoint_rule():
    # midpoint rule in u = ln t: B_b(x) = ∫ e^{(1−b)u} / u du over [ln 2, ln x]
    b, x, panels = 0.75, 10**4, 10**6
    lo, hi = math.log(2), math.log(x)
    h = (hi - lo) / panels
    u = lo + h * (np.arange(panels) + 0.5)
    oracle = h * math.fsum(np.exp((1 - b) * u) / u)
    assert abs(float(bertrand_B("0.75", x)) - oracle) < 1e-8
    assert abs(float(bertrand_B("0.75", x, method="ei")) - oracle) < 1e-8


def test_I_b_increases_with_x():
    for b in ("0.6", "0.9"):
        values = [I_b(b, x, method="ei") for x in (10, 100, 1000, 10**4)]
        assert all(later > earlier for earlier, later in zip(values, values[1:]))


def test_mertens_product_at_29(small_table):
    # N_10 / φ(N_10)
    exact = mp.mpf(6_469_693_230) / 1_021_870_080
    assert abs(mertens_product(29, small_table) - exact) < mp.mpf("1e-30")
    assert abs(exact - mp.mpf("6.33123")) < mp.mpf("1e-5")


def test_c_b_radius_shrinks_with_a_doubled_table(small_table):
    doubled = sieve_first(2 * small_table.count)
    shorter = c_b_constant("0.75", small_table)
    longer = c_b_constant("0.75", doubled)
    assert longer.tail_radius < shorter.tail_radius
    assert abs(longer.value - shorter.value) < shorter.tail_radius
