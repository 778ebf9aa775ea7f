"""Characteristic functions of the temperature and of the CAT index.

The temperature follows dT = alpha(s_t - T)dt + sigma_t dV with
V = B_{R_t} + mu1 R_t driven by a Gamma clock.  Its characteristic
function is an explicit phase factor times an integral of the V cumulant
exponent; the cumulated temperature (CAT) over T days admits two
evaluations: the exact kernel-exchange form and the day-product form that
treats daily increments as independent (an approximation whose error this
demo surfaces).
"""

import numpy as np

from tempderiv import (FourCoeffs, GammaTimeChange, ModelParams, SimConfig,
                       cat_cumulants, charfun_T, charfun_cat, empirical_charfun,
                       simulate_cat)

p = ModelParams(alpha=0.25, t0=-3.0,
                seasonal=FourCoeffs(8.0, 0.0008, -5.9, -12.9),
                vol=FourCoeffs(3.5, 0.0, 0.5, 1.0),
                timechange=GammaTimeChange(1.5, 1.0, 0.3))

print("Characteristic function of T_t at t = 30 days:")
for u in (0.05, 0.1, 0.2):
    print(f"  phi({u:4.2f}) = {charfun_T(u, 30.0, p):.6f}   |phi| = {abs(charfun_T(u, 30.0, p)):.6f}")

print("\nMonte Carlo cross-check of the CAT charfun (60 days, 50k paths):")
xi, _ = simulate_cat(p, SimConfig(step=1.0, n_paths=50_000, seed=7), 60)
for u in (0.001, 0.005):
    emp = empirical_charfun(xi, u)
    exact = charfun_cat(u, p, 0.0, 60, "exact_kernel")
    product = charfun_cat(u, p, 0.0, 60, "product")
    se = np.sqrt((1 - abs(emp) ** 2) / xi.size)
    print(f"  u={u:<6}: exact-kernel |err| = {abs(exact-emp):.2e} (3se = {3*se:.2e});"
          f" day-product deviation = {abs(product-exact):.3f}")
print("  -> the exact-kernel form matches simulation; the independence")
print("     treatment behind the product form is a visible approximation.")

mean, var = cat_cumulants(p, 0.0, 60)
print(f"\nCAT cumulants from the charfun: mean = {mean:.3f}, sd = {np.sqrt(var):.3f}")
print(f"Sample moments from simulation:  mean = {np.mean(xi):.3f}, sd = {np.std(xi):.3f}")
