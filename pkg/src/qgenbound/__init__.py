"""Quantum Renyi divergences and information-theoretic generalization bounds
for learners trained on quantum data, evaluated by exact finite enumeration."""

from .bounds import (
    BoundReport,
    bound_caro_old,
    bound_iid_individual,
    bound_kl,
    bound_l1,
    bound_renyi,
    classical_bounds,
    classical_gamma_term,
    deviation_terms,
)
from .divergences import (
    ClassicalDist,
    DivergenceValue,
    classical_kl,
    classical_renyi,
    modified_sandwiched,
    petz_renyi,
    quantum_relative_entropy,
    reverse_sandwiched,
    sandwiched_renyi,
    smooth_max_divergence,
)
from .errors import ConfigurationError, DomainError, NumericalError, QgbError, RangeError
from .framework import (
    LearningInstance,
    classical_instance,
    expected_gen,
    expected_gen_old,
    gen_error,
    induce,
    sample_ws,
)
from .measured import OptimizerConfig, measured_renyi, tensor_power_trend
from .subgaussian import SubGaussianCert, check_quantum_hoeffding, quantum_mgf
from .tails import (
    TailReport,
    classical_tail_renyi,
    classical_tail_smooth_max,
    quantum_tail_renyi,
    quantum_tail_smooth_max,
    verify_coverage,
)

__version__ = "0.1.0"
