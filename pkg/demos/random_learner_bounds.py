"""Every expectation bound and one tail radius on a seeded random qubit learner.

    python3 demos/random_learner_bounds.py
"""

from qgenbound import bounds
from qgenbound.framework import induce, random_instance
from qgenbound.tails import verify_coverage

inst = random_instance(5, n_hyp=3)
j = induce(inst)
for kind in ("l1", "lp", "kl", "renyi-mod", "renyi-petz", "caro-old", "iid"):
    rep = bounds.evaluate(kind, j, inst)
    print(f"{kind:11s} bound {rep.value:8.5f}  |gen| {rep.realized_abs_gen:8.5f}  sound={rep.sound}")

rep = verify_coverage(j, inst, "quantum-renyi", {"delta": 0.1}, draws=10_000, seed=0)
print(f"quantum-renyi radius {rep.epsilon:.4f}: coverage {rep.empirical_coverage:.4f} "
      f"(threshold {rep.threshold:.4f})")
