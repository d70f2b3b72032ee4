"""Kernels and the linearized eigenstructure.

The integral equation for the surface tangent angle is built around the
kernel K(theta, tau).  On deep water it has the closed form
(1/(6 pi)) log|sin((theta+tau)/2)/sin((theta-tau)/2)|; at finite depth the
sine series acquires tanh weights.  The linearized operator B acts
diagonally on sine modes, and its characteristic values 3k (deep) or
3k coth(2 pi k h/lambda) (finite depth) are the bifurcation points where
nontrivial wave branches are born.
"""

import numpy as np

import nekrasov as nk

print(__doc__)

print("=== closed form vs truncated series (deep water) ===")
theta, tau = np.pi / 2, np.pi / 4
closed = nk.kernel_deep_closed(theta, tau)
for n_modes in (10, 100, 1000, 10000):
    series = nk.kernel_series(theta, tau, nk.KernelSpec(n_modes=n_modes))
    print(f"  N = {n_modes:6d}: series = {series:.10f}   "
          f"|closed - series| = {abs(closed - series):.2e}")
print(f"  closed form        = {closed:.10f}")

print()
print("=== finite depth approaches deep water as h/lambda grows ===")
for depth in (0.05, 0.1, 0.5, 2.0, 10.0):
    spec = nk.KernelSpec(depth_ratio=depth, n_modes=4000)
    val = nk.kernel_series(theta, tau, spec)
    print(f"  h/lambda = {depth:5.2f}: K = {val:.10f}   "
          f"(deep limit {closed:.10f})")

print()
print("=== characteristic values (bifurcation points) ===")
print("  deep water:", ", ".join(f"{v:g}" for v in
                                 nk.characteristic_values(nk.DEEP, 6)))
for depth in (0.1, 0.5, 2.0):
    spec = nk.KernelSpec(depth_ratio=depth)
    vals = nk.characteristic_values(spec, 4)
    print(f"  h/lambda = {depth:4.1f}:", ", ".join(f"{v:.6f}" for v in vals))
print("  shallower water needs a larger mu before waves can bifurcate.")

print()
print("=== exact diagonal action of the linearized operator ===")
spec = nk.KernelSpec(depth_ratio=0.5)
for k in (1, 2, 3):
    coeffs = np.zeros(8)
    coeffs[k - 1] = 1.0
    out = nk.apply_linearized(coeffs, spec)
    print(f"  B[sin {k}t] = {out[k - 1]:.12f} sin {k}t   "
          f"(1/characteristic value = {1 / nk.characteristic_values(spec, k)[-1]:.12f})")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    th = np.linspace(0.02, np.pi - 0.02, 400)
    fig, ax = plt.subplots(figsize=(6, 4))
    for tau0 in (0.5, 1.5, 2.5):
        ax.plot(th, [nk.kernel_deep_closed(t, tau0) if abs(t - tau0) > 1e-6
                     else np.nan for t in th], label=f"tau = {tau0}")
    ax.set_xlabel("theta")
    ax.set_ylabel("K(theta, tau)")
    ax.set_title("Deep-water kernel sections (log singularity at theta = tau)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demo01_kernel.png", dpi=120)
    print()
    print("wrote demo01_kernel.png")
except ImportError:
    pass
