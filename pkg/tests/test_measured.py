import math
import warnings

import numpy as np
import pytest

from qgenbound import divergences as dv, linalg
from qgenbound.errors import ConfigurationError
from qgenbound.measured import (
    OptimizerConfig,
    classical_dual_variable,
    measured_renyi,
    tensor_power_trend,
    variational_lower_bound,
    variational_objective,
)


def _quiet(fn, *a, **k):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return fn(*a, **k)


@pytest.mark.parametrize("alpha", [0.4, 0.7, 1 + 1e-7, 2.0])
def test_commuting_states_give_classical_value(alpha):
    p, q = [0.6, 0.3, 0.1], [0.2, 0.5, 0.3]
    u = linalg.random_unitary(3, seed=9)
    r, s = u @ np.diag(p) @ u.conj().T, u @ np.diag(q) @ u.conj().T
    m = _quiet(measured_renyi, r, s, alpha).finite
    want = dv.classical_kl(p, q).finite if abs(alpha - 1) < 1e-6 else dv.classical_renyi(p, q, alpha).finite
    assert m == pytest.approx(want, abs=1e-6)


def test_pure_state_measured_against_mixed():
    m = _quiet(measured_renyi, np.full((2, 2), 0.5), np.diag([0.5, 0.5]), 2.0).finite
    assert m == pytest.approx(math.log(2.0), abs=1e-6)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("alpha", [0.3, 0.7, 2.0])
def test_measured_below_modified(seed, alpha):
    r, s = linalg.random_density_matrix(3, seed=seed), linalg.random_density_matrix(3, seed=seed + 50)
    m = _quiet(measured_renyi, r, s, alpha).finite
    assert m <= dv.modified_sandwiched(r, s, alpha).finite + 1e-6
    assert m >= -1e-12


def test_measured_deterministic_and_diagnostics():
    r, s = linalg.random_density_matrix(2, seed=1), linalg.random_density_matrix(2, seed=2)
    a = _quiet(measured_renyi, r, s, 0.7)
    b = _quiet(measured_renyi, r, s, 0.7)
    assert a.finite == b.finite
    assert "restarts" in a.diagnostics or a.diagnostics


def test_nelder_mead_agrees_with_bfgs():
    r, s = linalg.random_density_matrix(2, seed=5), linalg.random_density_matrix(2, seed=6)
    a = _quiet(measured_renyi, r, s, 1.5).finite
    b = _quiet(measured_renyi, r, s, 1.5, OptimizerConfig(method="nelder-mead")).finite
    assert a == pytest.approx(b, abs=1e-5)


def test_tensor_power_trend_nondecreasing():
    r, s = linalg.random_density_matrix(2, seed=11), linalg.random_density_matrix(2, seed=12)
    vals = [v for _, v in _quiet(tensor_power_trend, r, s, 0.7, 3)]
    assert all(b >= a - 1e-4 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= dv.sandwiched_renyi(r, s, 0.7).finite + 1e-6


def test_tensor_power_trend_cap():
    r = np.eye(2) / 2
    with pytest.raises(ConfigurationError):
        tensor_power_trend(r, r, 0.7, 4)


def test_variational_objective_at_dual_variable():
    p, q = np.array([0.7, 0.3]), np.array([0.4, 0.6])
    h = np.diag(classical_dual_variable(p, q))
    for a in (0.5, 2.0):
        v = variational_objective(np.diag(p), np.diag(q), a, h)
        assert v == pytest.approx(dv.classical_renyi(p, q, a).finite, abs=1e-12)


def test_variational_lower_bound_below_sandwiched():
    r, s = linalg.random_density_matrix(2, seed=21), linalg.random_density_matrix(2, seed=22)
    v, _ = _quiet(variational_lower_bound, r, s, 0.7)
    assert v <= dv.sandwiched_renyi(r, s, 0.7).finite + 1e-6
