"""Divergence ladder on a random qubit pair: measured <= modified <= Petz.

    python3 demos/divergence_tour.py
"""

from qgenbound import measured_renyi, modified_sandwiched, petz_renyi, sandwiched_renyi
from qgenbound.linalg import random_density_matrix
from qgenbound.measured import tensor_power_trend

rho = random_density_matrix(2, seed=1)
sigma = random_density_matrix(2, seed=2)

print(" alpha   measured   modified   sandwich     petz")
for a in (0.3, 0.5, 0.7, 0.9, 1.5, 2.0):
    m = measured_renyi(rho, sigma, a).finite
    print(f"{a:6.2f} {m:10.6f} {modified_sandwiched(rho, sigma, a).finite:10.6f} "
          f"{sandwiched_renyi(rho, sigma, a).finite:10.6f} {petz_renyi(rho, sigma, a).finite:10.6f}")

print("\nper-copy measured value on tensor powers, alpha = 0.7:")
for n, v in tensor_power_trend(rho, sigma, 0.7, 3):
    print(f"  n={n}  {v:.6f}")
