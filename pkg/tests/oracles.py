"""Hand-built instances with closed-form answers."""

import math

import numpy as np

from qgenbound.framework import LearningInstance, classical_instance

P0 = 0.3


def proj(k, d=2):
    m = np.zeros((d, d), dtype=complex)
    m[k, k] = 1.0
    return m


def memorizer_quantum():
    """Qubit learner that reads z from the training register and outputs w = z.

    Loss on hyp is the projector onto the other label, so the empirical loss
    is 0 and the true loss of w is P(z != w).
    """
    return LearningInstance(("0", "1"), [P0, 1 - P0], 1, "iid_local", (1, 2, 2),
                            {"0": proj(0), "1": proj(1)},
                            {"0": {"0": proj(0), "1": proj(1)}, "1": {"0": proj(0), "1": proj(1)}},
                            {}, {(w, z): proj(1 - int(z)) for w in "01" for z in "01"})


def memorizer_classical():
    return classical_instance(("0", "1"), [P0, 1 - P0], 1,
                              {"0": {"0": 1.0}, "1": {"1": 1.0}},
                              {(w, z): float(w != z) for w in "01" for z in "01"}, ("0", "1"))


def trivial_learner():
    """Data-independent learner on identical product states: every bound is 0."""
    rho = np.kron(np.diag([0.6, 0.4]), np.diag([0.2, 0.8])).astype(complex)
    loss = np.diag([0.3, -0.1, 0.5, 0.0]).astype(complex)
    return LearningInstance(("a", "b"), [0.5, 0.5], 1, "iid_local", (2, 2, 2),
                            {"a": rho, "b": rho}, {"a": {"w": np.eye(2)}, "b": {"w": np.eye(2)}},
                            {}, {("w", "a"): loss, ("w", "b"): loss})


MEMORIZER_GEN = 2 * P0 * (1 - P0)
MEMORIZER_MI = -(P0 * math.log(P0) + (1 - P0) * math.log(1 - P0))
