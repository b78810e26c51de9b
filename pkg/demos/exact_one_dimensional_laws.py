"""The exact one-dimensional minimal-energy laws.

On the circle (the d = 1 unit-covolume lattice), equally spaced points
minimize every kernel in the library, and the minimal energies have closed
forms.  This script computes both sides: the Ewald machinery on the left,
the closed forms (Riemann zeta, digamma, generalized Euler constants) on
the right.

The s = 1 Riesz constant deserves attention: the closed-form branch used
here is the continuity limit of the s != 1 expression, which three
independent computations confirm (the erfc-form direct sum, the numerical
s -> 1 extrapolation, and the Ewald energy itself).

Run:  python3 demos/exact_one_dimensional_laws.py
"""

import math

import numpy as np

from perisum import energy as en
from perisum import kernel as kn
from perisum import validate as vd
from perisum.lattice import lattice_preset

z1 = lattice_preset("Z1")

print("=" * 76)
print("Riesz s-energy of N equally spaced points: Ewald vs closed form")
print("=" * 76)
print(f"{'N':>4} {'s':>5} {'Ewald energy':>22} {'closed form':>22} {'rel err':>10}")
for s in (0.5, 1.0, 2.0, 3.0):
    pot = kn.Riesz(s)
    plan = kn.plan_ewald(z1, pot, 1e-12)
    for n in (2, 5, 16):
        cfg = en.Configuration.equally_spaced(z1, n)
        e = en.total_energy(cfg, pot, plan).energy
        law = vd.riesz_1d_minimum(n, s)
        print(f"{n:>4} {s:>5.1f} {e:>22.12f} {law:>22.12f} "
              f"{abs(e - law) / abs(law):>10.1e}")

print()
print("The s = 1 constant, three ways (N = 2):")
h = 1e-4
limit = 0.5 * (vd.riesz_1d_minimum(2, 1 + h) + vd.riesz_1d_minimum(2, 1 - h))
plan1 = kn.plan_ewald(z1, kn.Riesz(1.0), 1e-13)
ewald = en.total_energy(en.Configuration.equally_spaced(z1, 2),
                        kn.Riesz(1.0), plan1).energy
# erfc-form direct sum at q = 1/2 (the nearest-image expansion of K_1)
n = np.arange(-8, 9, dtype=float)
r = np.abs(0.5 + n)
direct = float(np.sum(np.vectorize(math.erfc)(r) / r))
k = np.arange(1, 6, dtype=float)
from scipy.special import exp1
dual = 2.0 * float(np.sum(np.cos(math.pi * k) * exp1(math.pi**2 * k * k)))
print(f"  closed form 2N^2 log N + N(N-1)(gamma - 2 log 2) = "
      f"{vd.riesz_1d_minimum(2, 1.0):.12f}")
print(f"  s -> 1 limit of the s != 1 branch               = {limit:.12f}")
print(f"  Ewald energy                                    = {ewald:.12f}")
print(f"  erfc-form evaluation of 2 K_1(1/2)              = {2 * (direct + dual):.12f}")

print()
print("=" * 76)
print("Logarithmic energy: 2N(sqrt(pi)(N-1) - log N)")
print("=" * 76)
plan_log = kn.plan_ewald(z1, kn.Log(), 1e-12)
for n in (2, 6, 12, 24):
    cfg = en.Configuration.equally_spaced(z1, n)
    e = en.total_energy(cfg, kn.Log(), plan_log).energy
    law = vd.log_1d_minimum(n)
    print(f"N = {n:>3}:  {e:>20.12f}  vs  {law:>20.12f}  "
          f"(rel {abs(e - law) / abs(law):.1e})")

print()
print("=" * 76)
print("Log-Riesz energy, with the s = 1 triple-consistency check")
print("=" * 76)
for n, s in ((3, 2.0), (4, 0.5), (8, 2.0)):
    r = vd.check_logriesz_1d(n, s)
    print(f"N = {n}, s = {s}: rel err {r.rel_err:.1e}  "
          f"({'ok' if r.passed else 'DISAGREES'})")
r = vd.check_logriesz_1d(8, 1.0)
print(f"N = 8, s = 1: {r.note}")
