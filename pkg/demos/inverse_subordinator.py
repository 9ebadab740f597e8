"""Moments and log-time stationarity of the inverse-subordinator limit.

In the infinite-mean regime the limit is a fractional integral against
an inverse alpha-stable subordinator W.  Two checks:

  * E Y(u)^k against the closed-form moment formula,
  * the correlation of the normalised process at log-time lag s, which
    should depend on s only, not on the base time.
"""

import numpy as np

from renewalshot import limits
from renewalshot.streams import substream

alpha, beta = 0.5, 0.25
n = 4000
mesh_d, u_mesh = 1e-3, 4.0 / 16384

y = np.empty((n, 3))
for r in range(n):
    path = limits.simulate_inverse_subordinator_path(
        alpha, 4.0, mesh_d, substream(9, 3, 2, r), u_mesh=u_mesh)
    for j, u in enumerate((1.0, 2.0, 4.0)):
        y[r, j] = limits.frac_integral(path, beta, u)

print("alpha=%.2f beta=%.2f, %d inverse-subordinator paths" % (alpha, beta, n))
print("moments of Y(1):")
for k in (1, 2, 3):
    emp = float(np.mean(y[:, 0] ** k))
    ref = limits.moments_inverse_case(alpha, beta, 1.0, k)
    print("  k=%d  empirical %.4f   formula %.4f" % (k, emp, ref))

print()
print("log-time stationarity of the normalised process (lag s = ln 2):")
for i, j, pair in ((0, 1, "(1,2)"), (1, 2, "(2,4)")):
    c = float(np.corrcoef(y[:, i], y[:, j])[0, 1])
    print("  u pair %s  corr %.4f" % (pair, c))
print("The two correlations agree with each other: only the ratio of the")
print("times matters, which is stationarity in log time.")
