"""The Orlicz-space machinery underneath the exponential-class bounds.

Everything in the sharper half of the package runs on Luxemburg norms of
functions sampled on the disk quadrature: this script exercises the engine
directly.  Shown here:

* Luxemburg norms of constants against the closed form c / Yinv(1/area);
* the Lp correspondence for power-type Young functions;
* the factor-2 Holder inequality with a numerically conjugated function;
* the one-sided numeric convex conjugate against a known closed form;
* growth-condition probes (sub/supermultiplicativity constants).
"""

import numpy as np

from neumann_bounds import SampledFunction, build_disk_quadrature
from neumann_bounds import youngfn as yf
from neumann_bounds.orlicz import holder_pairing, luxemburg_norm, weighted_median

quad = build_disk_quadrature(64, 64)
ones = SampledFunction(np.ones(len(quad)), quad.weights, quad.measure_id)

print("luxemburg norms of the constant 1 on the disk:")
for young in (yf.LogLinear(), yf.LogPow(2.0), yf.ExpSquare()):
    norm = luxemburg_norm(ones, young)
    closed = 1.0 / young.inverse(1.0 / np.pi)
    print(f"  {young.name:<18} {norm:.10f}   closed form {closed:.10f}")

print("\nLp correspondence for Y(u) = u^p and the normalized u^p/p variant:")
rng = np.random.default_rng(42)
values = rng.lognormal(sigma=0.7, size=len(quad))
f = SampledFunction(values, quad.weights, quad.measure_id)
for p in (1.5, 2.0, 3.0):
    lp = float(np.sum(quad.weights * values**p)) ** (1 / p)
    plain = luxemburg_norm(f, yf.PowerP(p))
    norm = luxemburg_norm(f, yf.PowerP(p, normalized=True))
    print(
        f"  p={p:3.1f}: ||f||_p = {lp:.8f}   luxemburg = {plain:.8f}   "
        f"normalized * p^(1/p) = {norm * p ** (1 / p):.8f}"
    )

print("\nfactor-2 Holder inequality with the numeric conjugate of u log(u+e):")
g = SampledFunction(rng.lognormal(sigma=0.7, size=len(quad)), quad.weights, quad.measure_id)
lhs, rhs = holder_pairing(f, g, yf.LogLinear())
print(f"  integral |f g| = {lhs:.6f}  <=  2 ||f|| ||g||* = {rhs:.6f}")

print("\nnumeric conjugate vs the exact one for (1+u)log(1+u) - u:")
num = yf.NumericComplement(yf.LogLinearTilde())
for v in (0.5, 1.0, 2.0):
    print(f"  v={v:3.1f}: numeric {num.eval(v):.10f}   exact e^v-v-1 = {np.expm1(v) - v:.10f}")

print("\ngrowth-condition probes:")
print(f"  submultiplicativity sup for u log(u+e): {yf.probe_delta_prime(yf.LogLinear()):.6f} (registered bound 2)")
print(f"  supermultiplicativity constant for the conjugate-power composition:"
      f" {yf.probe_nabla_prime(yf.PsiAlpha(4.0)):.3f}")
print(f"  exp-type functions fail submultiplicativity: sup = {yf.probe_delta_prime(yf.ExpSquare()):.3e}")

print("\nweighted medians on the disk measure:")
print(f"  med(x)   = {weighted_median(SampledFunction(quad.nodes.real, quad.weights, quad.measure_id)):+.6f}")
print(f"  med(|z|) = {weighted_median(SampledFunction(np.abs(quad.nodes), quad.weights, quad.measure_id)):.6f}"
      f"   (continuum value 1/sqrt(2) = {1 / np.sqrt(2):.6f})")
