import math

import numpy as np
import pytest
from scipy import integrate
from scipy import special as sc

from perisum import specfun as sf
from perisum.errors import DivergentIntegral, PoleAtOne


# ---------------------------------------------------------------------------
# upper incomplete gamma
# ---------------------------------------------------------------------------


def test_gamma_upper_exponential_identity():
    # Gamma(1, x) = e^-x
    assert sf.gamma_upper(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-13)


def test_gamma_upper_erfc_identity():
    # Gamma(1/2, x^2) = sqrt(pi) erfc(x)
    assert sf.gamma_upper(0.5, 1.0) == pytest.approx(
        math.sqrt(math.pi) * math.erfc(1.0), rel=1e-13)


def test_gamma_upper_negative_sigma_vs_quadrature():
    # oracle: adaptive quadrature of the defining integral on [1, 60]
    val, err = integrate.quad(lambda t: t ** (-1.5) * math.exp(-t), 1.0, 60.0,
                              epsabs=1e-14, epsrel=1e-13, limit=300)
    assert err < 1e-12
    assert sf.gamma_upper(-0.5, 1.0) == pytest.approx(val, rel=1e-10)


def test_gamma_upper_recurrence_randomized():
    # Gamma(sigma+1, x) = sigma Gamma(sigma, x) + x^sigma e^-x
    rng = np.random.default_rng(42)
    for _ in range(1000):
        sigma = rng.uniform(-3.0, 30.0)
        x = rng.uniform(1e-3, 50.0)
        lhs = sf.gamma_upper(sigma + 1.0, x)
        rhs = sigma * sf.gamma_upper(sigma, x) + x**sigma * math.exp(-x)
        assert abs(lhs - rhs) <= 1e-11 * abs(lhs)


def test_e1_equals_gamma_upper_at_zero():
    # two independent routes: scipy's E1 against the local Gamma(0, x)
    for x in np.geomspace(1e-3, 30.0, 40):
        assert abs(sf.exp_integral_e1(x) - sf.gamma_upper(0.0, x)) <= 1e-12


def test_gamma_upper_vec_matches_scalar():
    rng = np.random.default_rng(3)
    xs = rng.uniform(0.05, 30.0, size=64)
    for sigma in (2.5, 0.25, -0.5, -1.0, -2.0, 0.0, 14.0):
        vec = sf.gamma_upper_vec(sigma, xs)
        for x, v in zip(xs, vec):
            assert v == pytest.approx(sf.gamma_upper(sigma, float(x)),
                                      rel=1e-10, abs=1e-300)


def test_gamma_upper_domain_errors():
    with pytest.raises(DivergentIntegral):
        sf.gamma_upper(-1.0, 0.0)
    with pytest.raises(ValueError):
        sf.gamma_upper(1.0, -1.0)
    assert sf.gamma_upper(2.5, 0.0) == pytest.approx(math.gamma(2.5), rel=1e-14)


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


def test_hurwitz_reduces_to_riemann():
    assert sf.hurwitz_zeta(2.0, 1.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-14)


def test_hurwitz_half_argument():
    # sum over all integers of (n + 1/2)^-2 equals pi^2, so zeta(2; 1/2)
    # is pi^2/2; brute-force partial sum plus integral tail as the oracle
    n = np.arange(0, 10**6, dtype=float)
    partial = float(np.sum((n + 0.5) ** -2.0))
    tail = 1.0 / (10**6 - 0.5)  # integral of (t+1/2)^-2 from 10^6
    oracle = partial + tail
    val = sf.hurwitz_zeta(2.0, 0.5)
    assert val == pytest.approx(math.pi**2 / 2.0, rel=1e-13)
    assert val == pytest.approx(oracle, rel=1e-11)


def test_hurwitz_recurrence_randomized():
    # zeta(s; q) = q^-s + zeta(s; q+1)
    rng = np.random.default_rng(7)
    count = 0
    while count < 1000:
        s = rng.uniform(-2.0, 60.0)
        if abs(s - 1.0) < 1e-3:
            continue
        q = rng.uniform(1e-2, 2.0)
        lhs = sf.hurwitz_zeta(s, q)
        shifted = sf.hurwitz_zeta(s, q + 1.0)
        rhs = q ** (-s) + shifted
        # relative to the identity's own term scale; near zeros of zeta the
        # subtraction cancels below any fixed-precision result's resolution
        scale = max(abs(lhs), abs(shifted), q ** (-s))
        assert abs(lhs - rhs) <= 1e-11 * scale
        count += 1


def test_multiplication_identity_grid():
    # sum_{j=1..n} zeta(s; j/n) = n^s zeta(s)
    for n in (2, 3, 5, 8):
        for s in (0.5, 2.0, 3.7, 6.0):
            lhs = sum(sf.hurwitz_zeta(s, j / n) for j in range(1, n + 1))
            rhs = n**s * sf.riemann_zeta(s)
            assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_multiplication_identity_n7():
    lhs = sum(sf.hurwitz_zeta(3.5, j / 7.0) for j in range(1, 8))
    assert lhs == pytest.approx(7.0**3.5 * sf.riemann_zeta(3.5), rel=1e-12)


def test_hurwitz_pole():
    with pytest.raises(PoleAtOne):
        sf.hurwitz_zeta(1.0 + 1e-13, 0.5)
    with pytest.raises(ValueError):
        sf.hurwitz_zeta(2.0, -0.5)


# ---------------------------------------------------------------------------
# derivatives of the Hurwitz zeta
# ---------------------------------------------------------------------------


def _zeta_ds_tail_oracle(s, m=200000):
    """zeta'(s) by direct sum with an Euler-Maclaurin style tail built from
    a different decomposition than the library's (integral of log t * t^-s
    plus half-term and first derivative corrections)."""
    k = np.arange(1, m, dtype=float)
    partial = -float(np.sum(np.log(k) * k ** (-s)))
    # tail of -sum log(k) k^-s from m: -(integral + f(m)/2 - f'(m)/12)
    lm = math.log(m)
    integral = math.exp(-(s - 1.0) * lm) * (lm / (s - 1.0) + 1.0 / (s - 1.0) ** 2)
    f_m = lm * m ** (-s)
    fp_m = m ** (-s - 1.0) * (1.0 - s * lm)
    return partial - integral - 0.5 * f_m - fp_m / 12.0


def test_riemann_zeta_ds_against_series_oracle():
    val = sf.riemann_zeta_ds(2.0)
    assert val == pytest.approx(_zeta_ds_tail_oracle(2.0), rel=1e-10)


def test_hurwitz_ds_central_difference():
    for s, q in [(3.2, 0.3), (2.0, 1.0), (0.5, 0.7)]:
        h = 1e-5
        fd = (sf.hurwitz_zeta(s + h, q) - sf.hurwitz_zeta(s - h, q)) / (2 * h)
        assert sf.hurwitz_zeta_ds(s, q) == pytest.approx(fd, rel=1e-7)


def test_hurwitz_ds_smooth_at_half():
    val = sf.hurwitz_zeta_ds(2.0, 0.5)
    assert math.isfinite(val)
    near = sf.hurwitz_zeta_ds(2.0, 0.5 + 1e-6)
    assert val == pytest.approx(near, rel=1e-4)


def test_hurwitz_dq_identity():
    # d/dq zeta(s; q) = -s zeta(s+1; q)
    assert sf.hurwitz_zeta_dq(2.0, 0.5) == pytest.approx(
        -2.0 * sf.hurwitz_zeta(3.0, 0.5), rel=1e-14)
    assert sf.hurwitz_zeta_dq(1.5, 1.0) == pytest.approx(
        -1.5 * sf.riemann_zeta(2.5), rel=1e-14)


def test_hurwitz_dq_central_difference():
    s, q = 2.7, 0.31
    h = 1e-6
    fd = (sf.hurwitz_zeta(s, q + h) - sf.hurwitz_zeta(s, q - h)) / (2 * h)
    assert sf.hurwitz_zeta_dq(s, q) == pytest.approx(fd, rel=1e-8)


# ---------------------------------------------------------------------------
# routine functions and constants
# ---------------------------------------------------------------------------


def test_riemann_zeta_two():
    assert sf.riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-14)


def test_digamma_at_one():
    assert sf.digamma(1.0) == pytest.approx(-sf.euler_gamma(), rel=1e-14)


def test_trigamma_at_half():
    assert sf.trigamma(0.5) == pytest.approx(math.pi**2 / 2.0, rel=1e-13)


def test_erfc_symmetry():
    for x in np.linspace(-3.0, 3.0, 25):
        assert abs(sf.erfc(x) + sf.erfc(-x) - 2.0) <= 1e-14


def _gamma1_partial_sums(m_max):
    k = np.arange(1, m_max + 1, dtype=float)
    return np.cumsum(np.log(k) / k)


def _gamma1_richardson(base_m):
    """Oracle for the first generalized Euler constant: raw partial sums of
    the defining limit at geometric points, extrapolated against the error
    model (a log m + b)/m + (c log m + d)/m^2."""
    points = [base_m * 2**i for i in range(5)]
    sums = _gamma1_partial_sums(points[-1])
    rows, rhs = [], []
    for m in points:
        s_m = sums[m - 1] - 0.5 * math.log(m) ** 2
        lm = math.log(m)
        rows.append([1.0, lm / m, 1.0 / m, lm / m**2, 1.0 / m**2])
        rhs.append(s_m)
    coef = np.linalg.solve(np.array(rows), np.array(rhs))
    return float(coef[0])


def test_stieltjes_gamma1_two_extrapolations_agree():
    a = _gamma1_richardson(10**4)
    b = _gamma1_richardson(10**5)
    print(f"first generalized Euler constant: derived {sf.stieltjes_gamma1()!r},"
          f" extrapolations {a!r} / {b!r}")
    assert abs(a - b) <= 1e-10
    assert sf.stieltjes_gamma1() == pytest.approx(a, abs=1e-10)


def test_precision_policy_guard():
    with pytest.raises(ValueError):
        sf.PrecisionPolicy(target_rel_err=1e-2)
    with pytest.raises(ValueError):
        sf.PrecisionPolicy(target_rel_err=0.0)
    sf.PrecisionPolicy(target_rel_err=1e-4)  # accepted
