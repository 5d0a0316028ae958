"""Making the eigenvalue large by concentrating the mass density.

With Gaussian densities exp(-n |x|^2) the map-independent quasidisk bound
grows like a power of n: concentrating the membrane's mass at a point
pushes the first nonzero eigenvalue up without bound.  The predicted
log-log slope for (q, alpha) = (4, 12) is exactly 0.2.

The density norms are computed on a radially graded quadrature (the
integrand concentrates near the origin) and are checked against the
closed-form domination (pi/(n s))^(1/s) - the quadrature value may never
exceed it.
"""

from neumann_bounds import IdentityMap, PerturbedPowerMap, build_disk_quadrature_graded
from neumann_bounds import bounds as bd

params = bd.ScenarioParams(p=1.5, q=4.0, alpha=12.0, K=1.05, eps=2.0)
s = params.lebesgue_exponent()
print(f"density-norm exponent s = {s}   predicted slope = {(params.q - 2) / (params.q * s)}\n")

quad = build_disk_quadrature_graded(16)
ns = [10, 100, 1000, 10000]

for cmap in (IdentityMap(), PerturbedPowerMap(0.5, 2)):
    reports = bd.gaussian_sweep(ns, params, cmap, quad)
    print(f"{cmap.name}:")
    print(f"  {'n':>6} {'log bound':>14} {'log ||rho||':>13} {'domination':>13} {'margin':>10}")
    for n, rep in zip(ns, reports):
        lg = rep.intermediates["log_rho_norm_s"]
        dom = rep.intermediates["log_rho_norm_dominated"]
        print(f"  {n:>6} {float(rep.bound_log):>14.4f} {lg:>13.6f} {dom:>13.6f} {dom - lg:>10.2e}")
    slope = bd.fit_loglog_slope(ns, reports)
    print(f"  fitted slope: {slope:.6f}\n")

print("the bounds themselves are astronomically small (the quasidisk constant")
print("dominates), but their growth with n is exactly the predicted power law.")
