"""The Lq route: trading the supremum for an integral norm.

Instead of the supremum of rho over the inverse Jacobian, this bound uses
its L^(q/(q-2)) norm together with the disk (p,q)-Poincare constant.  The
report carries two forms: the theorem-shaped composition through the
two-sided eigenvalue bracket, and the sharper direct form from the same
chain of inequalities; the sharper one is the default.

The sweep below shows how the bound moves with (p, q) for a fixed map and
density, including the excluded endpoint q -> 2p/(2-p) where the disk
constant blows up.
"""

import numpy as np

from neumann_bounds import ConstantDensity, PerturbedPowerMap, build_disk_quadrature
from neumann_bounds import bounds as bd
from neumann_bounds import fem_oracle as fo
from neumann_bounds.errors import ParameterError

quad = build_disk_quadrature(64, 64)
cmap = PerturbedPowerMap(0.5, 2)
rho = ConstantDensity(1.0)
mu = fo.mu_fem_richardson(cmap, rho, 5)
print(f"FEM reference for {cmap.name}, rho = 1: {mu:.6f}\n")

print(f"{'p':>5} {'q':>5} {'kappa':>7} {'B_qp':>8} {'K_q':>8} {'sharper':>10} {'theorem':>10}")
for p in (1.2, 1.5, 1.8):
    for q in (2.5, 3.0, 4.0, 5.0):
        if q >= 2 * p / (2 - p):
            continue
        rep = bd.mu_lower_kq(cmap, rho, p, q, quad)
        kappa = 1 / p - 1 / q
        print(
            f"{p:>5.2f} {q:>5.2f} {kappa:>7.4f} {rep.intermediates['b_qp']:>8.4f} "
            f"{rep.intermediates['k_q']:>8.4f} {rep.bound:>10.6f} "
            f"{np.exp(rep.intermediates['bound_log_theorem_form']):>10.6f}"
        )

print("\nall bounds stay below the FEM value; the constants are generous by design.")

print("\nthe range validation rejects the non-compact endpoint:")
try:
    bd.mu_lower_kq(cmap, rho, 1.5, 6.0, quad)
except ParameterError as exc:
    print(f"  p=1.5, q=6: {exc}")
