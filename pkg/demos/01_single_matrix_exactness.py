# A chain with a single matrix is the sanity anchor: the product is M^n, the
# growth rate is exactly log(lambda_1), and the determinant truncation
# reproduces it at *every* order because the common subdominant factor
# cancels between numerator and denominator.

import numpy as np

from lyapcycle import ensemble, lyapunov_estimate

M = [[2, 1], [1, 1]]
model = ensemble([M], [[1.0]])

state = lyapunov_estimate(model, order=8)
exact = np.log((3 + np.sqrt(5)) / 2)

print(f"exact growth rate  log lambda_1 = {exact:.15f}")
print("order   estimate              error")
for m, gamma in enumerate(state.gammas, start=1):
    print(f"{m:4d}    {gamma:.15f}   {abs(gamma - exact):.2e}")

# The first-order truncation is already exact: the trace ratio collapses to
# the log of the dominant eigenvalue.
assert abs(state.gammas[0] - exact) < 1e-12
