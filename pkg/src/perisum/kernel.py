"""Renormalized periodic pair kernels via Ewald-type split sums.

For a point difference q on a unit-covolume lattice, the periodic kernel is
assembled from a real-space sum over direct lattice vectors (incomplete-gamma
terms), a reciprocal-space sum over nonzero dual vectors (cosine terms), and
a splitting-parameter constant.  With splitting parameter eta the Riesz
kernel of exponent s reads

    K_s(q) = 1/Gamma(s/2) * sum_v Gamma(s/2, eta|q+v|^2) |q+v|^-s
           + pi^(d/2)/Gamma(s/2) * sum_{w != 0} cos(2 pi w.q)
                 (pi|w|)^(s-d) Gamma((d-s)/2, pi^2|w|^2 / eta)
           + 2 pi^(d/2) (eta^((s-d)/2) - 1) / (Gamma(s/2) (s-d)),

where the constant is continued through s = d by expm1.  eta = 1 recovers
the canonical split; the value is independent of eta, which the test suite
checks numerically.  The log-Riesz kernel is 2 d/ds of the Riesz kernel
(term-wise, with the sigma-derivative of the incomplete gamma taken by a
small central difference), the logarithmic kernel replaces the gamma terms
by E1 and Gamma(d/2, .), and the Gaussian kernel is an absolutely
convergent direct sum minus its lattice-average constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import specfun as sf
from .errors import (
    DimensionMismatch,
    LatticePoint,
    PlanMismatch,
    PolePoint,
    UnreachableTolerance,
)
from .lattice import Lattice, enumerate_shells, min_dual_norm

__all__ = [
    "Riesz",
    "LogRiesz",
    "Log",
    "Gaussian",
    "parse_potential",
    "potential_label",
    "EwaldPlan",
    "KernelValue",
    "plan_ewald",
    "evaluate_batch",
    "riesz_kernel",
    "coulomb_kernel",
    "logriesz_kernel",
    "log_kernel",
    "gaussian_kernel",
    "epstein_hurwitz_zeta",
    "epstein_zeta",
    "convergence_factor_oracle",
    "min_image_difference",
]

_SINGULAR_EPS = 1e-13  # |q + v| below this counts as a lattice point
_SIGMA_STEP = 1e-3     # step of the 4th-order d/dsigma Gamma(sigma, x) stencil


# ---------------------------------------------------------------------------
# potential families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Riesz:
    """Inverse-power potential |x|^-s, s > 0."""

    s: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("Riesz exponent s must be positive")


@dataclass(frozen=True)
class LogRiesz:
    """Potential |x|^-s log(|x|^-2), s > 0."""

    s: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("LogRiesz exponent s must be positive")


@dataclass(frozen=True)
class Log:
    """Potential log(|x|^-2)."""


@dataclass(frozen=True)
class Gaussian:
    """Potential exp(-c |x|^2), c > 0."""

    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("Gaussian width parameter c must be positive")


def parse_potential(text):
    """Parse 'riesz:S', 'logriesz:S', 'log' or 'gaussian:C'."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "riesz":
            return Riesz(float(arg))
        if name == "logriesz":
            return LogRiesz(float(arg))
        if name == "log":
            if arg:
                raise ValueError("log takes no parameter")
            return Log()
        if name == "gaussian":
            return Gaussian(float(arg))
    except ValueError as exc:
        raise ValueError(f"bad potential string {text!r}: {exc}") from None
    raise ValueError(f"unknown potential family {name!r}")


def potential_label(pot):
    if isinstance(pot, Riesz):
        return f"riesz:{pot.s:g}"
    if isinstance(pot, LogRiesz):
        return f"logriesz:{pot.s:g}"
    if isinstance(pot, Log):
        return "log"
    if isinstance(pot, Gaussian):
        return f"gaussian:{pot.c:g}"
    raise TypeError(f"not a potential: {pot!r}")


def _is_singular(pot):
    # Gaussian is the only family finite at lattice points
    return not isinstance(pot, Gaussian)


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EwaldPlan:
    """Truncation radii with certified tail bounds for one (lattice,
    potential, eta) combination.  Holds the enumerated shells so repeated
    evaluations share them."""

    lattice: Lattice
    potential: object
    eta: float
    r_cut: float
    k_cut: float
    tol: float
    direct_tail_bound: float
    dual_tail_bound: float
    direct_vectors: np.ndarray = field(repr=False, default=None)
    dual_vectors_half: np.ndarray = field(repr=False, default=None)
    dual_norms_half: np.ndarray = field(repr=False, default=None)

    @property
    def guaranteed_abs_err(self):
        return self.direct_tail_bound + self.dual_tail_bound

    @property
    def terms_direct(self):
        return int(self.direct_vectors.shape[0])

    @property
    def terms_dual(self):
        return 2 * int(self.dual_vectors_half.shape[0])

    def to_json_dict(self):
        return {
            "potential": potential_label(self.potential),
            "eta": self.eta,
            "r_cut": self.r_cut,
            "k_cut": self.k_cut,
            "tol": self.tol,
            "direct_tail_bound": self.direct_tail_bound,
            "dual_tail_bound": self.dual_tail_bound,
            "guaranteed_abs_err": self.guaranteed_abs_err,
            "terms_direct": self.terms_direct,
            "terms_dual": self.terms_dual,
        }


@dataclass(frozen=True)
class KernelValue:
    """One kernel evaluation: value (+inf at lattice points for singular
    potentials), the plan's certified truncation error, and term counts."""

    value: float
    abs_err_bound: float
    terms_direct: int
    terms_dual: int


def _sphere_area_coeff(d):
    # surface area of the unit sphere in R^d
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def _direct_envelope(pot, eta, d):
    """Magnitude of one real-space term as a function of distance."""
    if isinstance(pot, Riesz):
        s = pot.s

        def env(r):
            from scipy.special import gammaincc
            return float(gammaincc(s / 2.0, eta * r * r)) * r ** (-s)

        return env, eta
    if isinstance(pot, LogRiesz):
        s = pot.s

        def env(r):
            _, t2 = _riesz_direct_terms(np.array([r]), s, eta, d, want_ds=True)
            return abs(float(t2[0]))

        return env, eta
    if isinstance(pot, Log):
        def env(r):
            return float(sf.exp_integral_e1(eta * r * r))

        return env, eta
    if isinstance(pot, Gaussian):
        c = pot.c

        def env(r):
            return math.exp(-c * r * r)

        return env, c
    raise TypeError(f"not a potential: {pot!r}")


def _dual_envelope(pot, eta, d):
    """Magnitude of one reciprocal-space coefficient vs dual norm, or None
    when the potential needs no reciprocal correction (Gaussian)."""
    if isinstance(pot, Gaussian):
        return None, None
    rate = math.pi**2 / eta
    if isinstance(pot, Riesz):
        s = pot.s

        def env(k):
            a, _ = _riesz_dual_coeffs(np.array([k]), s, eta, d, want_ds=False)
            return abs(float(a[0]))

        return env, rate
    if isinstance(pot, LogRiesz):
        s = pot.s

        def env(k):
            _, a2 = _riesz_dual_coeffs(np.array([k]), s, eta, d, want_ds=True)
            return abs(float(a2[0]))

        return env, rate
    if isinstance(pot, Log):
        def env(k):
            return abs(float(_log_dual_coeffs(np.array([k]), eta, d)[0]))

        return env, rate
    raise TypeError(f"not a potential: {pot!r}")


def _tail_integral(env, radius, d, shift, span):
    """Upper estimate of the sum of env(|v| - shift) over shells beyond
    radius, using the co-volume-1 shell density sigma_d rho^(d-1) with a
    factor-2 safety margin for discreteness."""
    coeff = 2.0 * _sphere_area_coeff(d)

    def integrand(rho):
        return coeff * rho ** (d - 1) * env(max(rho - shift, 1e-9))

    val, _ = integrate.quad(integrand, radius, radius + span, limit=200)
    return val


def plan_ewald(lat, pot, tol, eta=1.0, shell_budget=500_000):
    """Choose truncation radii so each tail estimate is below tol/2.

    The recorded bounds are the integral estimates used for the decision;
    they can be recomputed from the plan's fields.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if eta <= 0:
        raise ValueError("eta must be positive")
    d = lat.dimension
    margin = lat.half_cell_diameter
    shortest = float(np.min(np.linalg.norm(lat.basis, axis=0)))

    env_dir, rate_dir = _direct_envelope(pot, eta, d)
    span_dir = 10.0 + 6.0 / math.sqrt(rate_dir)
    r_cut = max(shortest, margin + 1.0)
    r_max = 60.0 * max(1.0, 1.0 / math.sqrt(rate_dir))
    while True:
        direct_tail = _tail_integral(env_dir, r_cut, d, margin, span_dir)
        if direct_tail < tol / 2.0:
            break
        r_cut += 0.5
        if r_cut > r_max:
            raise UnreachableTolerance(
                f"direct cutoff exceeded budget at tol={tol}")

    env_dual, rate_dual = _dual_envelope(pot, eta, d)
    if env_dual is None:
        k_cut = 0.0
        dual_tail = 0.0
    else:
        w0 = min_dual_norm(lat)
        span_dual = 10.0 + 6.0 / math.sqrt(rate_dual)
        k_cut = w0
        k_max = 60.0 * max(1.0, 1.0 / math.sqrt(rate_dual))
        while True:
            dual_tail = _tail_integral(env_dual, k_cut, d, 0.0, span_dual)
            if dual_tail < tol / 2.0:
                break
            k_cut += 0.25
            if k_cut > k_max:
                raise UnreachableTolerance(
                    f"dual cutoff exceeded budget at tol={tol}")

    direct = enumerate_shells(lat, "direct", r_cut + margin, include_origin=True)
    if len(direct) > shell_budget:
        raise UnreachableTolerance("direct shell count exceeds budget")
    if k_cut > 0.0:
        dual = enumerate_shells(lat, "dual", k_cut, include_origin=False)
        wh, wn, _ = dual.half()
    else:
        wh = np.zeros((0, d))
        wn = np.zeros((0,))

    return EwaldPlan(
        lattice=lat,
        potential=pot,
        eta=float(eta),
        r_cut=float(r_cut),
        k_cut=float(k_cut),
        tol=float(tol),
        direct_tail_bound=float(direct_tail),
        dual_tail_bound=float(dual_tail),
        direct_vectors=direct.vectors,
        dual_vectors_half=wh,
        dual_norms_half=wn,
    )


# ---------------------------------------------------------------------------
# term formulas (vectorized over distances / dual norms)
# ---------------------------------------------------------------------------


def _riesz_direct_terms(r, s, eta, d, want_ds=False):
    """Per-vector real-space terms of the Riesz kernel at distances r,
    already divided by Gamma(s/2); optionally also 2 d/ds of each term."""
    from scipy.special import gammaincc

    x = eta * r * r
    reg = gammaincc(s / 2.0, x)
    rpow = r ** (-s)
    t = reg * rpow
    if not want_ds:
        return t, None
    gs = math.gamma(s / 2.0)
    psi = sf.digamma(s / 2.0)
    dsig = sf.gamma_upper_dsigma_vec(s / 2.0, x, _SIGMA_STEP)
    t2 = dsig * rpow / gs - 2.0 * np.log(r) * t - psi * t
    return t, t2


def _riesz_direct_radial(r, s, eta, d, want_ds=False):
    """g'(r)/r for the gradient: the direct term's radial derivative divided
    by r, so each gradient contribution is radial(r) * (q + v)."""
    from scipy.special import gammaincc

    x = eta * r * r
    gs = math.gamma(s / 2.0)
    reg = gammaincc(s / 2.0, x)
    expx = np.exp(-x)
    # g'(r) = -2 eta^(s/2) e^(-eta r^2) / (r Gamma(s/2)) - s reg r^(-s-1)
    term1 = -2.0 * eta ** (s / 2.0) * expx / (r * gs)
    gp = term1 - s * reg * r ** (-s - 1.0)
    radial = gp / r
    if not want_ds:
        return radial, None
    psi = sf.digamma(s / 2.0)
    G = sf.gamma_upper_vec(s / 2.0, x)
    dsig = sf.gamma_upper_dsigma_vec(s / 2.0, x, _SIGMA_STEP)
    lr = np.log(r)
    rpow1 = r ** (-s - 1.0)
    dterm1 = term1 * (0.5 * math.log(eta) - 0.5 * psi)
    dterm2 = (-G * rpow1 - 0.5 * s * dsig * rpow1 + s * G * lr * rpow1
              + 0.5 * s * G * rpow1 * psi) / gs
    radial2 = 2.0 * (dterm1 + dterm2) / r
    return radial, radial2


def _riesz_dual_coeffs(k, s, eta, d, want_ds=False):
    """Reciprocal-space coefficients multiplying cos(2 pi w.q) at dual norms
    k, and optionally 2 d/ds of each."""
    z = math.pi**2 * k * k / eta
    gs = math.gamma(s / 2.0)
    pk = math.pi * k
    power = pk ** (s - d)
    G = sf.gamma_upper_vec((d - s) / 2.0, z)
    pref = math.pi ** (d / 2.0) / gs
    a = pref * power * G
    if not want_ds:
        return a, None
    psi = sf.digamma(s / 2.0)
    dsig = sf.gamma_upper_dsigma_vec((d - s) / 2.0, z, _SIGMA_STEP)
    a2 = 2.0 * a * np.log(pk) - a * psi - pref * power * dsig
    return a, a2


def _log_direct_terms(r, eta, d):
    from scipy.special import exp1
    return exp1(eta * r * r)


def _log_direct_radial(r, eta, d):
    return -2.0 * np.exp(-eta * r * r) / (r * r)


def _log_dual_coeffs(k, eta, d):
    z = math.pi**2 * k * k / eta
    G = sf.gamma_upper_vec(d / 2.0, z)
    return G / (math.pi ** (d / 2.0) * k**d)


def _expm1_over(u, a):
    """phi(u) = expm1(u a)/u with its removable singularity at u = 0."""
    if abs(u * a) < 1e-8:
        return a * (1.0 + 0.5 * u * a + u * u * a * a / 6.0)
    return math.expm1(u * a) / u


def _expm1_over_du(u, a):
    """phi'(u) for the eta-constant's s-derivative."""
    if abs(u * a) < 1e-6:
        return a * a * (0.5 + u * a / 3.0 + u * u * a * a / 8.0)
    return (a * math.exp(u * a) * u - math.expm1(u * a)) / (u * u)


def _eta_constant(pot, eta, d):
    """Configuration-independent term produced by moving the split away from
    the canonical eta = 1 (and, for the Gaussian, the lattice-average
    subtraction)."""
    if isinstance(pot, Gaussian):
        # integral over [0, 1) of pi^(d/2) t^(-d/2) against the point mass
        # at c: active exactly when c < 1
        c = pot.c
        return -((math.pi / c) ** (d / 2.0)) if c < 1.0 else 0.0
    if isinstance(pot, Log):
        return -(2.0 / d) * math.pi ** (d / 2.0) * (eta ** (-d / 2.0) - 1.0)
    a = 0.5 * math.log(eta)
    if isinstance(pot, Riesz):
        s = pot.s
        u = s - d
        return 2.0 * math.pi ** (d / 2.0) * _expm1_over(u, a) / math.gamma(s / 2.0)
    if isinstance(pot, LogRiesz):
        s = pot.s
        u = s - d
        gs = math.gamma(s / 2.0)
        psi = sf.digamma(s / 2.0)
        return (4.0 * math.pi ** (d / 2.0) / gs
                * (_expm1_over_du(u, a) - 0.5 * _expm1_over(u, a) * psi))
    raise TypeError(f"not a potential: {pot!r}")


# ---------------------------------------------------------------------------
# batched evaluation
# ---------------------------------------------------------------------------


def min_image_difference(lat, x, y):
    """Minimum-image Cartesian representative of x - y, sign-canonicalized
    (first nonzero fractional coordinate made positive) so that swapping x
    and y reproduces the identical representative."""
    f = lat.to_fractional(np.asarray(x, float) - np.asarray(y, float))
    f = f - np.round(f)
    nz = np.nonzero(np.abs(f) > 0.0)[0]
    if nz.size and f[nz[0]] < 0.0:
        f = -f
    return lat.to_cartesian(f)


def evaluate_batch(lat, pot, plan, Q, want_grad=False):
    """Kernel values (and gradients) for a batch of Cartesian differences.

    Q has shape (n, d); rows should be min-imaged representatives.  Returns
    (values, grads, degenerate) where grads is None unless requested and
    degenerate marks rows lying on the lattice.  Values at degenerate rows
    are +inf for the singular potentials; gradients there are zero-filled.
    """
    if plan.potential != pot:
        raise PlanMismatch(
            f"plan built for {potential_label(plan.potential)}, "
            f"asked to evaluate {potential_label(pot)}")
    if plan.lattice is not lat and not np.array_equal(plan.lattice.basis, lat.basis):
        raise PlanMismatch("plan built for a different lattice")
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n, d = Q.shape
    if d != lat.dimension:
        raise DimensionMismatch("difference vectors have wrong dimension")
    eta = plan.eta

    V = plan.direct_vectors
    R = Q[:, None, :] + V[None, :, :]
    r = np.linalg.norm(R, axis=2)
    degenerate = r.min(axis=1) < _SINGULAR_EPS
    rsafe = np.where(r < _SINGULAR_EPS, 1.0, r)

    if isinstance(pot, Riesz):
        t, _ = _riesz_direct_terms(rsafe, pot.s, eta, d)
    elif isinstance(pot, LogRiesz):
        _, t = _riesz_direct_terms(rsafe, pot.s, eta, d, want_ds=True)
    elif isinstance(pot, Log):
        t = _log_direct_terms(rsafe, eta, d)
    elif isinstance(pot, Gaussian):
        t = np.exp(-pot.c * r * r)  # finite at r = 0, no masking needed
    else:
        raise TypeError(f"not a potential: {pot!r}")
    values = t.sum(axis=1)

    W = plan.dual_vectors_half
    a = None
    if W.shape[0]:
        kn = plan.dual_norms_half
        phase = 2.0 * math.pi * (Q @ W.T)
        cosp = np.cos(phase)
        if isinstance(pot, Riesz):
            a, _ = _riesz_dual_coeffs(kn, pot.s, eta, d)
        elif isinstance(pot, LogRiesz):
            _, a = _riesz_dual_coeffs(kn, pot.s, eta, d, want_ds=True)
        else:
            a = _log_dual_coeffs(kn, eta, d)
        values = values + 2.0 * (cosp @ a)
    values = values + _eta_constant(pot, eta, d)

    grads = None
    if want_grad:
        if isinstance(pot, Riesz):
            radial, _ = _riesz_direct_radial(rsafe, pot.s, eta, d)
        elif isinstance(pot, LogRiesz):
            _, radial = _riesz_direct_radial(rsafe, pot.s, eta, d, want_ds=True)
        elif isinstance(pot, Log):
            radial = _log_direct_radial(rsafe, eta, d)
        else:
            radial = -2.0 * pot.c * np.exp(-pot.c * r * r)
        grads = np.einsum("nv,nvd->nd", radial, R)
        if W.shape[0]:
            sinp = np.sin(phase)
            grads = grads - 4.0 * math.pi * ((sinp * a[None, :]) @ W)
        if degenerate.any():
            grads[degenerate] = 0.0

    if degenerate.any() and _is_singular(pot):
        values = values.copy()
        values[degenerate] = math.inf
    return values, grads, degenerate


def _scalar_kernel(lat, pot, plan, x, y):
    q = min_image_difference(lat, x, y)
    vals, _, _ = evaluate_batch(lat, pot, plan, q[None, :])
    return KernelValue(
        value=float(vals[0]),
        abs_err_bound=plan.guaranteed_abs_err,
        terms_direct=plan.terms_direct,
        terms_dual=plan.terms_dual,
    )


def riesz_kernel(lat, x, y, s, plan):
    """Periodic Riesz kernel K_s(x, y); +inf when x - y is a lattice point."""
    if not isinstance(plan.potential, Riesz) or plan.potential.s != s:
        raise PlanMismatch("plan potential does not match Riesz(s)")
    return _scalar_kernel(lat, Riesz(s), plan, x, y)


def logriesz_kernel(lat, x, y, s, plan):
    """Periodic log-Riesz kernel, the term-wise 2 d/ds of the Riesz kernel."""
    if not isinstance(plan.potential, LogRiesz) or plan.potential.s != s:
        raise PlanMismatch("plan potential does not match LogRiesz(s)")
    return _scalar_kernel(lat, LogRiesz(s), plan, x, y)


def log_kernel(lat, x, y, plan):
    """Periodic logarithmic kernel: E1 terms in real space, Gamma(d/2, .)
    terms in reciprocal space."""
    if not isinstance(plan.potential, Log):
        raise PlanMismatch("plan potential does not match Log")
    return _scalar_kernel(lat, Log(), plan, x, y)


def gaussian_kernel(lat, x, y, c, r_cut):
    """Periodic Gaussian kernel: direct sum over |v| <= r_cut (+ cell
    margin), minus (pi/c)^(d/2) when c < 1 (the lattice-average constant);
    no constant when c >= 1.  Always finite."""
    pot = Gaussian(c)
    d = lat.dimension
    margin = lat.half_cell_diameter
    shells = enumerate_shells(lat, "direct", r_cut + margin, include_origin=True)
    q = min_image_difference(lat, x, y)
    r2 = np.sum((q[None, :] + shells.vectors) ** 2, axis=1)
    total = float(np.exp(-c * r2).sum()) + _eta_constant(pot, 1.0, d)

    def env(u):
        return math.exp(-c * u * u)

    tail = _tail_integral(env, r_cut, d, margin, 10.0 + 6.0 / math.sqrt(c))
    return KernelValue(
        value=total,
        abs_err_bound=tail,
        terms_direct=len(shells),
        terms_dual=0,
    )


def coulomb_kernel(lat, x, y, plan):
    """Three-dimensional Coulomb kernel in its classical erfc/Gaussian Ewald
    form; agrees with the s = 1 Riesz kernel."""
    if lat.dimension != 3:
        raise DimensionMismatch("Coulomb kernel is specific to d = 3")
    if not isinstance(plan.potential, Riesz) or plan.potential.s != 1.0:
        raise PlanMismatch("Coulomb kernel expects a plan for Riesz(1)")
    q = min_image_difference(lat, x, y)
    R = q[None, :] + plan.direct_vectors
    r = np.linalg.norm(R, axis=1)
    if r.min() < _SINGULAR_EPS:
        return KernelValue(math.inf, plan.guaranteed_abs_err,
                           plan.terms_direct, plan.terms_dual)
    from scipy.special import erfc as verfc

    eta = plan.eta
    direct = float(np.sum(verfc(math.sqrt(eta) * r) / r))
    W = plan.dual_vectors_half
    kn = plan.dual_norms_half
    coeff = np.exp(-math.pi**2 * kn**2 / eta) / (math.pi * kn**2)
    dual = 2.0 * float(np.cos(2.0 * math.pi * (W @ q)) @ coeff)
    const = _eta_constant(Riesz(1.0), eta, 3)
    return KernelValue(direct + dual + const, plan.guaranteed_abs_err,
                       plan.terms_direct, plan.terms_dual)


# ---------------------------------------------------------------------------
# Epstein-Hurwitz zeta and the convergence-factor oracle
# ---------------------------------------------------------------------------


def _shift_constant(s, d):
    """2 pi^(d/2) / (Gamma(s/2) (d - s)): the offset between the Riesz
    kernel and the continued Epstein-Hurwitz zeta."""
    return 2.0 * math.pi ** (d / 2.0) / (math.gamma(s / 2.0) * (d - s))


def epstein_hurwitz_zeta(lat, q, s, tol=1e-12, eta=1.0, plan=None):
    """Analytic continuation of sum_v |q + v|^-s to all s in (0, inf)
    except the pole at s = d, for q not on the lattice."""
    d = lat.dimension
    if abs(s - d) < 1e-10:
        raise PolePoint("Epstein-Hurwitz zeta has its pole at s = d")
    q = np.asarray(q, dtype=float)
    qm = min_image_difference(lat, q, np.zeros(d))
    if np.linalg.norm(qm) < 1e-12:
        raise LatticePoint("q reduces into the lattice")
    if plan is None:
        plan = plan_ewald(lat, Riesz(s), tol, eta)
    vals, _, _ = evaluate_batch(lat, Riesz(s), plan, qm[None, :])
    return float(vals[0]) - _shift_constant(s, d)


def epstein_zeta(lat, s, tol=1e-12):
    """Epstein zeta of the lattice (sum over nonzero v of |v|^-s), continued
    to s != d; the origin term's finite part is removed by hand."""
    d = lat.dimension
    if abs(s - d) < 1e-10:
        raise PolePoint("Epstein zeta has its pole at s = d")
    plan = plan_ewald(lat, Riesz(s), tol, 1.0)
    shells = enumerate_shells(lat, "direct", plan.r_cut, include_origin=False)
    t, _ = _riesz_direct_terms(shells.norms, s, 1.0, d)
    direct = float(t.sum())
    a, _ = _riesz_dual_coeffs(plan.dual_norms_half, s, 1.0, d)
    dual = 2.0 * float(a.sum())
    return (direct + dual - 1.0 / math.gamma(s / 2.0 + 1.0)
            - _shift_constant(s, d))


def convergence_factor_oracle(lat, q, s, a_sequence):
    """Gaussian-convergence-factor renormalization of the Riesz lattice sum.

    For each a returns sum_v |q+v|^-s exp(-a^2 |q+v|^2) minus the
    renormalization integral
    (pi^(d/2)/Gamma(s/2)) int_0^1 t^(s/2-1) (t + a^2)^(-d/2) dt.
    As a decreases to 0 the values approach the Ewald kernel.
    """
    d = lat.dimension
    q = np.asarray(q, dtype=float)
    qm = min_image_difference(lat, q, np.zeros(d))
    if np.linalg.norm(qm) < 1e-12:
        raise LatticePoint("q reduces into the lattice")
    gs = math.gamma(s / 2.0)
    out = []
    for a in a_sequence:
        if not 0.0 < a <= 1.0:
            raise ValueError("convergence-factor parameters must be in (0, 1]")
        radius = 6.5 / a + lat.half_cell_diameter
        shells = enumerate_shells(lat, "direct", radius, include_origin=True)
        r = np.linalg.norm(qm[None, :] + shells.vectors, axis=1)
        lattice_sum = float(np.sum(r ** (-s) * np.exp(-((a * r) ** 2))))

        def integrand(u):
            # endpoint singularity t^(s/2-1) removed by t = u^(2/s)
            return (u ** (2.0 / s) + a * a) ** (-d / 2.0)

        integral, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-12, limit=200)
        integral *= (2.0 / s) * math.pi ** (d / 2.0) / gs
        out.append(lattice_sum - integral)
    return out
