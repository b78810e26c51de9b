import math

import numpy as np
import pytest

from perisum import kernel as kn
from perisum import specfun as sf
from perisum.errors import (
    DimensionMismatch,
    LatticePoint,
    PlanMismatch,
    PolePoint,
    UnreachableTolerance,
)
from perisum.lattice import enumerate_shells, lattice_preset

Z1 = lattice_preset("Z1")
Z2 = lattice_preset("Z2")
Z3 = lattice_preset("Z3")
HEX = lattice_preset("hex")


def _riesz(lat, q, s, tol=1e-12, eta=1.0):
    plan = kn.plan_ewald(lat, kn.Riesz(s), tol, eta=eta)
    d = lat.dimension
    return kn.riesz_kernel(lat, np.atleast_1d(np.asarray(q, float)),
                           np.zeros(d), s, plan).value


# ---------------------------------------------------------------------------
# potentials and plans
# ---------------------------------------------------------------------------


def test_parse_potential():
    assert kn.parse_potential("riesz:2") == kn.Riesz(2.0)
    assert kn.parse_potential("logriesz:1.5") == kn.LogRiesz(1.5)
    assert kn.parse_potential("log") == kn.Log()
    assert kn.parse_potential("gaussian:3") == kn.Gaussian(3.0)
    for bad in ("riesz:-1", "riesz:0", "gaussian:-2", "nope", "log:2"):
        with pytest.raises(ValueError):
            kn.parse_potential(bad)


def test_plan_cutoffs_and_self_refinement():
    plan = kn.plan_ewald(Z1, kn.Riesz(2.0), 1e-12)
    assert 4.0 <= plan.r_cut <= 10.0
    assert plan.guaranteed_abs_err <= 1e-12
    # realized truncation error against a much tighter reference plan
    ref = kn.plan_ewald(Z1, kn.Riesz(2.0), 1e-15)
    q = np.array([0.37])
    v1 = kn.riesz_kernel(Z1, q, np.zeros(1), 2.0, plan).value
    v2 = kn.riesz_kernel(Z1, q, np.zeros(1), 2.0, ref).value
    assert abs(v1 - v2) < 1e-12


def test_plan_gaussian_has_empty_dual():
    plan = kn.plan_ewald(Z2, kn.Gaussian(2.0), 1e-12)
    assert plan.terms_dual == 0
    assert plan.k_cut == 0.0


def test_plan_realized_error_hex():
    pot = kn.Riesz(1.0)
    plan = kn.plan_ewald(HEX, pot, 1e-10)
    ref = kn.plan_ewald(HEX, pot, 1e-14)
    q = HEX.to_cartesian(np.array([0.23, 0.61]))
    v1 = kn.riesz_kernel(HEX, q, np.zeros(2), 1.0, plan).value
    v2 = kn.riesz_kernel(HEX, q, np.zeros(2), 1.0, ref).value
    assert abs(v1 - v2) < 1e-10


def test_plan_unreachable_tolerance():
    with pytest.raises(UnreachableTolerance):
        kn.plan_ewald(Z2, kn.Riesz(0.5), 1e-12, shell_budget=10)


def test_plan_mismatch_raised():
    plan = kn.plan_ewald(Z1, kn.Riesz(2.0), 1e-10)
    with pytest.raises(PlanMismatch):
        kn.riesz_kernel(Z1, np.array([0.5]), np.zeros(1), 3.0, plan)
    with pytest.raises(PlanMismatch):
        kn.log_kernel(Z1, np.array([0.5]), np.zeros(1), plan)


# ---------------------------------------------------------------------------
# Riesz kernel
# ---------------------------------------------------------------------------


def test_riesz_z1_half_closed_form():
    # zeta_Z(2; 1/2) - 2 sqrt(pi)/(Gamma(1) * 1) with zeta_Z(2; 1/2) = pi^2
    val = _riesz(Z1, 0.5, 2.0)
    assert val == pytest.approx(math.pi**2 - 2.0 * math.sqrt(math.pi), rel=1e-13)


def test_riesz_z1_half_brute_force_zeta_part():
    # brute-force the defining sum of zeta_Z(2; 1/2)
    n = np.arange(-10**6, 10**6 + 1, dtype=float)
    zeta_part = float(np.sum(np.abs(0.5 + n) ** -2.0))
    assert zeta_part == pytest.approx(math.pi**2, rel=1e-6)


def test_riesz_small_s_vanishes():
    s = 1e-6
    val = _riesz(Z1, 0.3, s)
    assert abs(val) < 1e-5
    assert abs(math.gamma(s / 2.0) * val) < 10.0  # Gamma(s/2) K_s stays bounded


def test_riesz_at_lattice_point_infinite():
    plan = kn.plan_ewald(Z1, kn.Riesz(2.0), 1e-10)
    kv = kn.riesz_kernel(Z1, np.array([1.0]), np.zeros(1), 2.0, plan)
    assert kv.value == math.inf


def test_riesz_symmetry_bitwise():
    plan = kn.plan_ewald(HEX, kn.Riesz(1.3), 1e-12)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = HEX.to_cartesian(rng.random(2))
        y = HEX.to_cartesian(rng.random(2))
        a = kn.riesz_kernel(HEX, x, y, 1.3, plan).value
        b = kn.riesz_kernel(HEX, y, x, 1.3, plan).value
        assert a == b


def test_riesz_periodicity():
    plan = kn.plan_ewald(Z2, kn.Riesz(0.8), 1e-12)
    rng = np.random.default_rng(6)
    for _ in range(100):
        x = rng.random(2)
        y = rng.random(2)
        k = rng.integers(-3, 4, size=2).astype(float)
        a = kn.riesz_kernel(Z2, x, y, 0.8, plan).value
        b = kn.riesz_kernel(Z2, x + k, y, 0.8, plan).value
        assert abs(a - b) <= 1e-11 * max(1.0, abs(a))


def test_riesz_eta_invariance():
    for d, lat in ((1, Z1), (2, Z2), (3, Z3)):
        rng = np.random.default_rng(d)
        for s in (0.5, 1.0, 2.5):
            q = lat.to_cartesian(rng.uniform(0.2, 0.8, d))
            vals = [_riesz(lat, q, s, tol=1e-12, eta=eta)
                    for eta in (0.5, 1.0, 2.0)]
            assert max(vals) - min(vals) <= 1e-10


def test_riesz_lower_semicontinuity_blowup():
    vals = [_riesz(Z2, np.array([t, 0.0]), 1.5) for t in (0.2, 0.1, 0.05, 0.01)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 1e2


def test_constant_shift_against_brute_force():
    # s > d: the continued kernel differs from the direct sum by the shift
    n = np.arange(-300000, 300001, dtype=float)
    for q in (0.29, 0.64):
        brute = float(np.sum(np.abs(q + n) ** -3.0))
        val = _riesz(Z1, q, 3.0, tol=1e-13)
        const = 2.0 * math.sqrt(math.pi) / (math.gamma(1.5) * (3.0 - 1.0))
        assert brute - val == pytest.approx(const, rel=1e-9)


# ---------------------------------------------------------------------------
# Epstein-Hurwitz zeta
# ---------------------------------------------------------------------------


def test_epstein_hurwitz_direct_sum_d1():
    n = np.arange(-10**5, 10**5 + 1, dtype=float)
    brute = float(np.sum(np.abs(0.5 + n) ** -3.0))
    val = kn.epstein_hurwitz_zeta(Z1, np.array([0.5]), 3.0)
    assert val == pytest.approx(brute, rel=1e-9)


def test_epstein_hurwitz_direct_sum_d2():
    # s = 4 on the square lattice converges too slowly for a deep brute
    # force; the box scan pins the continuation to ~1e-5 absolute
    i = np.arange(-1200, 1201, dtype=float)
    gx, gy = np.meshgrid(i, i, indexing="ij")
    q = np.array([0.5, 0.5])
    r2 = (q[0] + gx) ** 2 + (q[1] + gy) ** 2
    brute = float(np.sum(r2 ** -2.0))
    val = kn.epstein_hurwitz_zeta(Z2, q, 4.0)
    assert val == pytest.approx(brute, abs=5e-5)


def test_epstein_hurwitz_mean_zero():
    # integral of the continued zeta over the cell vanishes for 0 < s < d;
    # 64-point Gauss-Legendre after subtracting the edge singularities
    s = 0.5
    plan = kn.plan_ewald(Z1, kn.Riesz(s), 1e-13)
    nodes, weights = np.polynomial.legendre.leggauss(64)
    t = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    vals = np.array([
        kn.epstein_hurwitz_zeta(Z1, np.array([q]), s, plan=plan)
        - q ** (-s) - (1.0 - q) ** (-s)
        for q in t
    ])
    smooth = float(np.dot(w, vals))
    singular = 2.0 / (1.0 - s)  # integral of q^-s plus (1-q)^-s over (0,1)
    assert abs(smooth + singular) <= 1e-6


def test_epstein_hurwitz_poles_and_lattice_points():
    with pytest.raises(PolePoint):
        kn.epstein_hurwitz_zeta(Z1, np.array([0.5]), 1.0)
    with pytest.raises(LatticePoint):
        kn.epstein_hurwitz_zeta(Z1, np.array([2.0]), 3.0)


def test_epstein_zeta_z1_is_twice_riemann():
    for s in (2.0, 3.0, 0.5):
        assert kn.epstein_zeta(Z1, s) == pytest.approx(
            2.0 * sf.riemann_zeta(s), rel=1e-11)


# ---------------------------------------------------------------------------
# Coulomb form
# ---------------------------------------------------------------------------


def test_coulomb_matches_riesz_s1():
    plan = kn.plan_ewald(Z3, kn.Riesz(1.0), 1e-12)
    x = np.array([0.5, 0.5, 0.5])
    a = kn.coulomb_kernel(Z3, x, np.zeros(3), plan)
    b = kn.riesz_kernel(Z3, x, np.zeros(3), 1.0, plan)
    assert math.isfinite(a.value)
    assert a.value == pytest.approx(b.value, abs=1e-12)
    rng = np.random.default_rng(9)
    for _ in range(5):
        y = rng.random(3)
        a = kn.coulomb_kernel(Z3, y, np.zeros(3), plan).value
        b = kn.riesz_kernel(Z3, y, np.zeros(3), 1.0, plan).value
        assert a == pytest.approx(b, abs=1e-12)


def test_coulomb_lattice_point_and_symmetry():
    plan = kn.plan_ewald(Z3, kn.Riesz(1.0), 1e-12)
    assert kn.coulomb_kernel(Z3, np.ones(3), np.zeros(3), plan).value == math.inf
    x, y = np.array([0.2, 0.7, 0.4]), np.array([0.9, 0.1, 0.5])
    assert (kn.coulomb_kernel(Z3, x, y, plan).value
            == kn.coulomb_kernel(Z3, y, x, plan).value)


def test_coulomb_dimension_guard():
    plan = kn.plan_ewald(Z2, kn.Riesz(1.0), 1e-10)
    with pytest.raises(DimensionMismatch):
        kn.coulomb_kernel(Z2, np.array([0.5, 0.5]), np.zeros(2), plan)


# ---------------------------------------------------------------------------
# log-Riesz and logarithmic kernels
# ---------------------------------------------------------------------------


def test_logriesz_matches_s_derivative():
    s0, h = 1.3, 1e-5
    q = Z2.to_cartesian(np.array([0.27, 0.55]))
    plan = kn.plan_ewald(Z2, kn.LogRiesz(s0), 1e-12)
    lr = kn.logriesz_kernel(Z2, q, np.zeros(2), s0, plan).value
    cd = (_riesz(Z2, q, s0 + h, tol=1e-13)
          - _riesz(Z2, q, s0 - h, tol=1e-13)) / h
    assert lr == pytest.approx(cd, rel=1e-6)


def test_logriesz_symmetry_and_singularity():
    plan = kn.plan_ewald(Z1, kn.LogRiesz(2.0), 1e-12)
    a = kn.logriesz_kernel(Z1, np.array([0.3]), np.zeros(1), 2.0, plan).value
    b = kn.logriesz_kernel(Z1, np.zeros(1), np.array([0.3]), 2.0, plan).value
    assert a == b
    assert kn.logriesz_kernel(Z1, np.ones(1), np.zeros(1), 2.0, plan).value == math.inf


def test_logriesz_eta_invariance():
    q = Z1.to_cartesian(np.array([0.37]))
    vals = []
    for eta in (0.5, 1.0, 2.0):
        plan = kn.plan_ewald(Z1, kn.LogRiesz(1.7), 1e-12, eta=eta)
        vals.append(kn.logriesz_kernel(Z1, q, np.zeros(1), 1.7, plan).value)
    assert max(vals) - min(vals) <= 1e-9


def test_log_kernel_small_s_limit():
    # Gamma(s/2) K_s -> K_log as s -> 0
    rng = np.random.default_rng(11)
    plan = kn.plan_ewald(Z2, kn.Log(), 1e-12)
    s = 1e-5
    for _ in range(5):
        q = Z2.to_cartesian(rng.uniform(0.1, 0.9, 2))
        lv = kn.log_kernel(Z2, q, np.zeros(2), plan).value
        rv = math.gamma(s / 2.0) * _riesz(Z2, q, s, tol=1e-13)
        assert abs(lv - rv) < 1e-4


def test_log_kernel_translation_invariance():
    plan = kn.plan_ewald(Z2, kn.Log(), 1e-12)
    x = np.array([0.31, 0.72])
    v = np.array([2.0, -1.0])
    a = kn.log_kernel(Z2, x, np.zeros(2), plan).value
    b = kn.log_kernel(Z2, x + v, np.zeros(2), plan).value
    assert abs(a - b) <= 1e-11


def test_log_kernel_eta_invariance():
    q = Z2.to_cartesian(np.array([0.41, 0.13]))
    vals = []
    for eta in (0.5, 1.0, 2.0):
        plan = kn.plan_ewald(Z2, kn.Log(), 1e-12, eta=eta)
        vals.append(kn.log_kernel(Z2, q, np.zeros(2), plan).value)
    assert max(vals) - min(vals) <= 1e-10


# ---------------------------------------------------------------------------
# Gaussian kernel and the convergence-factor oracle
# ---------------------------------------------------------------------------


def test_gaussian_theta_identity():
    # direct sum at the origin equals the dual-side Poisson sum
    c = math.pi
    kv = kn.gaussian_kernel(Z1, np.zeros(1), np.zeros(1), c, r_cut=8.0)
    n = np.arange(-10, 11, dtype=float)
    direct = float(np.exp(-c * n * n).sum())
    dual = (math.pi / c) ** 0.5 * float(np.exp(-math.pi**2 * n * n / c).sum())
    assert direct == pytest.approx(dual, abs=1e-15)
    assert kv.value == pytest.approx(direct, abs=1e-13)  # c >= 1: no constant


def test_gaussian_large_c_single_term():
    kv = kn.gaussian_kernel(Z1, np.zeros(1), np.zeros(1), 500.0, r_cut=6.0)
    assert kv.value == pytest.approx(1.0, abs=1e-12)
    assert kv.value >= 1.0


def test_gaussian_small_c_constant_branch():
    # c < 1 subtracts (pi/c)^(d/2); the remainder matches the dual-side
    # Poisson sum without its zero mode
    c = 0.4
    q = np.array([0.3])
    kv = kn.gaussian_kernel(Z1, q, np.zeros(1), c, r_cut=12.0)
    w = np.arange(1, 12, dtype=float)
    dual = (math.pi / c) ** 0.5 * 2.0 * float(
        np.sum(np.cos(2 * math.pi * w * 0.3) * np.exp(-math.pi**2 * w * w / c)))
    assert kv.value == pytest.approx(dual, abs=1e-12)


def test_poisson_identity_random():
    rng = np.random.default_rng(13)
    for omega in (0.5, 1.0, 4.0):
        x = rng.random(1)
        r = math.sqrt(46.0 / omega) + 1.0
        n = enumerate_shells(Z1, "direct", r).vectors
        lhs = float(np.exp(-omega * (x[0] + n[:, 0]) ** 2).sum())
        k = math.sqrt(46.0 * omega) / math.pi + 1.0
        w = enumerate_shells(Z1, "dual", k).vectors
        rhs = (math.pi / omega) ** 0.5 * float(
            np.sum(np.cos(2 * math.pi * w[:, 0] * x[0])
                   * np.exp(-math.pi**2 * w[:, 0] ** 2 / omega)))
        assert abs(lhs - rhs) < 1e-12


def test_convergence_factor_monotone_approach():
    ref = _riesz(Z1, 0.3, 0.5, tol=1e-13)
    vals = kn.convergence_factor_oracle(Z1, np.array([0.3]), 0.5,
                                        [0.2, 0.1, 0.05])
    gaps = [abs(v - ref) for v in vals]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_convergence_factor_above_dimension():
    # s > d: the limit is the continued direct sum minus the shift constant
    q = np.array([0.3])
    target = (kn.epstein_hurwitz_zeta(Z1, q, 3.0)
              - 2.0 * math.sqrt(math.pi) / (math.gamma(1.5) * 2.0))
    vals = kn.convergence_factor_oracle(Z1, q, 3.0, [0.1, 0.05, 0.02])
    gaps = [abs(v - target) for v in vals]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] / abs(target) < 1e-3
    finite = kn.convergence_factor_oracle(Z1, q, 3.0, [1.0])
    assert math.isfinite(finite[0])


def test_min_image_difference_canonical():
    q = kn.min_image_difference(Z2, np.array([0.9, 0.2]), np.zeros(2))
    assert np.allclose(q, [0.1, -0.2], atol=1e-15)
    q2 = kn.min_image_difference(Z2, np.zeros(2), np.array([0.9, 0.2]))
    assert np.array_equal(q, q2)
