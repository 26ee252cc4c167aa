import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qgenbound import divergences as dv, linalg
from qgenbound.errors import DomainError

from strategies import seeds, state_pairs

PLUS = np.full((2, 2), 0.5)
ALPHAS = (0.3, 0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 3.0)


def _diag_pair(p):
    return np.diag([p, 1 - p])


# --- classical oracles

def test_classical_renyi_spot_value():
    assert dv.classical_renyi([0.75, 0.25], [0.5, 0.5], 2.0).finite == pytest.approx(
        math.log(1.25), abs=1e-14)


def test_classical_kl_spot_value():
    want = 0.75 * math.log(1.5) + 0.25 * math.log(0.5)
    assert dv.classical_kl([0.75, 0.25], [0.5, 0.5]).finite == pytest.approx(want, abs=1e-14)


def test_classical_support_mismatch_is_infinite():
    assert dv.classical_kl([0.5, 0.5], [1.0, 0.0]).is_inf
    assert dv.classical_renyi([0.5, 0.5], [1.0, 0.0], 2.0).is_inf
    assert dv.classical_renyi([0.5, 0.5], [1.0, 0.0], 0.5).finite == pytest.approx(
        -2 * math.log(math.sqrt(0.5)), abs=1e-14)


def test_smooth_max_oracles():
    p, q = [0.5, 0.5], [0.25, 0.75]
    assert dv.smooth_max_divergence(p, q, 0.0).finite == pytest.approx(math.log(2.0))
    assert dv.smooth_max_divergence(p, q, 0.5).finite == pytest.approx(math.log(2 / 3))
    assert dv.smooth_max_divergence([0.5, 0.5], [1.0, 0.0], 0.0).is_inf
    assert dv.smooth_max_divergence([0.5, 0.5], [1.0, 0.0], 0.6).finite == pytest.approx(
        math.log(0.5))
    with pytest.raises(DomainError):
        dv.smooth_max_divergence(p, q, 1.0)


def test_order_validation():
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(DomainError):
            dv.petz_renyi(np.eye(2) / 2, np.eye(2) / 2, bad)
    with pytest.raises(DomainError):
        dv.reverse_sandwiched(np.eye(2) / 2, np.eye(2) / 2, 1.5)


# --- non-commuting closed forms: rho = |+><+|, sigma = diag(p, 1-p)

@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.5, 2.0])
def test_petz_plus_state_oracle(p, alpha):
    want = math.log((p ** (1 - alpha) + (1 - p) ** (1 - alpha)) / 2) / (alpha - 1)
    assert dv.petz_renyi(PLUS, _diag_pair(p), alpha).finite == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.5, 2.0])
def test_sandwiched_plus_state_oracle(p, alpha):
    t = (1 - alpha) / alpha
    want = alpha / (alpha - 1) * math.log((p ** t + (1 - p) ** t) / 2)
    assert dv.sandwiched_renyi(PLUS, _diag_pair(p), alpha).finite == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
def test_relative_entropy_plus_state_oracle(p):
    want = -(math.log(p) + math.log(1 - p)) / 2
    assert dv.quantum_relative_entropy(PLUS, _diag_pair(p)).finite == pytest.approx(want, abs=1e-10)


def test_pure_against_maximally_mixed_is_log_dim():
    for a in (0.3, 0.7, 2.0):
        assert dv.sandwiched_renyi(PLUS, np.eye(2) / 2, a).finite == pytest.approx(math.log(2))
        assert dv.petz_renyi(PLUS, np.eye(2) / 2, a).finite == pytest.approx(math.log(2))


def test_support_rules():
    rho, sigma = np.eye(2) / 2, np.diag([1.0, 0.0])
    assert dv.quantum_relative_entropy(rho, sigma).is_inf
    assert dv.petz_renyi(rho, sigma, 2.0).is_inf
    assert dv.sandwiched_renyi(rho, sigma, 1.5).is_inf
    assert dv.petz_renyi(rho, sigma, 0.5).finite == pytest.approx(math.log(2))
    orth = dv.petz_renyi(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), 0.5)
    assert orth.is_inf


def test_modified_branches():
    r, s = linalg.random_density_matrix(3, seed=1), linalg.random_density_matrix(3, seed=2)
    lo = dv.modified_sandwiched(r, s, 0.3)
    assert lo.diagnostics["branch"] == "reverse"
    assert lo.finite == pytest.approx(0.3 / 0.7 * dv.sandwiched_renyi(s, r, 0.7).finite, abs=1e-12)
    hi = dv.modified_sandwiched(r, s, 0.7)
    assert hi.finite == pytest.approx(dv.sandwiched_renyi(r, s, 0.7).finite, abs=1e-14)


def test_near_one_routes_to_relative_entropy():
    r, s = linalg.random_density_matrix(2, seed=3), linalg.random_density_matrix(2, seed=4)
    d = dv.quantum_relative_entropy(r, s).finite
    assert dv.petz_renyi(r, s, 1 + 1e-7).finite == pytest.approx(d, abs=1e-14)
    assert dv.quantum_divergence("sandwiched", r, s, 1 - 1e-7).finite == pytest.approx(d, abs=1e-14)
    with pytest.raises(DomainError):
        dv.petz_renyi(r, s, 1.0)


def test_divergence_value_json():
    v = dv.petz_renyi(np.eye(2) / 2, np.diag([1.0, 0.0]), 2.0)
    assert v.to_json()["value"] == "+inf"
    with pytest.raises(DomainError):
        v.finite


# --- properties

@given(state_pairs(), st.sampled_from(ALPHAS))
def test_sandwiched_below_petz(pair, a):
    r, s = pair
    assert dv.sandwiched_renyi(r, s, a).finite <= dv.petz_renyi(r, s, a).finite + 1e-9


@given(state_pairs())
def test_renyi_nondecreasing_in_order(pair):
    r, s = pair
    for f in (dv.petz_renyi, dv.sandwiched_renyi):
        vals = [f(r, s, a).finite for a in (0.5, 0.7, 0.9, 1.1, 1.5, 2.0)]
        assert all(x <= y + 1e-9 for x, y in zip(vals, vals[1:]))


@given(state_pairs(), st.sampled_from((0.3, 0.5, 0.7, 1.5, 2.0)))
def test_nonnegative_and_zero_on_equal(pair, a):
    r, s = pair
    for f in (dv.petz_renyi, dv.sandwiched_renyi, dv.modified_sandwiched):
        assert f(r, s, a).finite >= -1e-10
        assert abs(f(r, r, a).finite) <= 1e-9


@given(seeds, seeds, seeds, st.sampled_from((0.5, 0.8, 1.5, 2.0)))
def test_data_processing(s1, s2, s3, a):
    sp = linalg.HilbertSpace.single("a", 2)
    ch = linalg.random_cptp(sp, linalg.HilbertSpace.single("b", 2), 2, seed=s3)
    r, s = linalg.random_density_matrix(2, seed=s1), linalg.random_density_matrix(2, seed=s2)
    cr, cs = ch.apply_matrix(r), ch.apply_matrix(s)
    for f in (dv.sandwiched_renyi, dv.petz_renyi, dv.modified_sandwiched):
        assert f(cr, cs, a).finite <= f(r, s, a).finite + 1e-8


@given(state_pairs(st.just(2)), state_pairs(st.just(2)), st.sampled_from((0.3, 0.7, 2.0)))
def test_additivity(p1, p2, a):
    (r1, s1), (r2, s2) = p1, p2
    for f in (dv.petz_renyi, dv.sandwiched_renyi):
        lhs = f(np.kron(r1, r2), np.kron(s1, s2), a).finite
        assert lhs == pytest.approx(f(r1, s1, a).finite + f(r2, s2, a).finite, abs=1e-9)


@given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=4), seeds,
       st.sampled_from((0.3, 0.7, 1.5, 2.0)))
def test_commuting_reduction(weights, seed, a):
    p = np.array(weights) / sum(weights)
    q = np.random.default_rng(seed).dirichlet(np.ones(len(p)))
    u = linalg.random_unitary(len(p), seed=seed)
    r, s = u @ np.diag(p) @ u.conj().T, u @ np.diag(q) @ u.conj().T
    c = dv.classical_renyi(p, q, a).finite
    for f in (dv.petz_renyi, dv.sandwiched_renyi, dv.modified_sandwiched):
        assert f(r, s, a).finite == pytest.approx(c, abs=1e-10)
