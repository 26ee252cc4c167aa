import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgenbound import framework as fw
from qgenbound.errors import ConfigurationError, DomainError

from oracles import MEMORIZER_GEN, P0, memorizer_classical, memorizer_quantum, trivial_learner
from strategies import seeds


def test_memorizer_losses_and_gen():
    inst = memorizer_quantum()
    j = fw.induce(inst)
    assert set(j.pairs) == {("0", ("0",)), ("1", ("1",))}
    assert j.pairs[("0", ("0",))].weight == pytest.approx(P0)
    assert fw.empirical_loss(j, inst, "0", ("0",)) == pytest.approx(0.0, abs=1e-15)
    assert fw.true_loss_new(j, inst, "0") == pytest.approx(1 - P0, abs=1e-15)
    assert fw.true_loss_new(j, inst, "1") == pytest.approx(P0, abs=1e-15)
    assert fw.expected_gen(j, inst) == pytest.approx(MEMORIZER_GEN, abs=1e-14)
    assert j.dropped == [("1", ("0",)), ("0", ("1",))]


def test_quantum_and_classical_memorizer_agree():
    qi, ci = memorizer_quantum(), memorizer_classical()
    qj, cj = fw.induce(qi), fw.induce(ci)
    assert fw.expected_gen(qj, qi) == pytest.approx(fw.expected_gen(cj, ci), abs=1e-14)
    np.testing.assert_allclose(qj.joint_matrix(), cj.joint_matrix(), atol=1e-14)


def test_trivial_learner_has_zero_gen():
    inst = trivial_learner()
    j = fw.induce(inst)
    assert fw.expected_gen(j, inst) == pytest.approx(0.0, abs=1e-14)
    assert fw.expected_gen_old(j, inst) == pytest.approx(0.0, abs=1e-14)


def test_induced_joint_is_normalized_and_marginals_consistent():
    inst = fw.random_instance(3, n_hyp=3, n=2)
    j = fw.induce(inst)
    assert j.joint_matrix().sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(j.joint_matrix().sum(axis=1), j.marginal_w.probs, atol=1e-12)
    np.testing.assert_allclose(j.joint_matrix().sum(axis=0), j.prior_n, atol=1e-12)
    for rec in j.pairs.values():
        assert np.trace(rec.sigma).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(rec.sigma)[0] >= -1e-10


def test_iid_data_state_factor_order():
    inst = fw.random_instance(4, n=2, product_data=True)
    s = ("0", "1")
    rho = inst.data_state(s)
    te1 = fw.partial_trace_matrix(inst.data_states["0"], [2, 2], [0])
    te2 = fw.partial_trace_matrix(inst.data_states["1"], [2, 2], [0])
    got = fw.partial_trace_matrix(rho, [2, 2, 2, 2], [0, 1])
    np.testing.assert_allclose(got, np.kron(te1, te2), atol=1e-13)


def test_local_loss_average():
    inst = fw.random_instance(5, n=2)
    s = ("0", "1")
    l0, l1 = inst.local_loss("0", "0"), inst.local_loss("0", "1")
    got = inst.loss("0", s)
    # te1 te2 hyp1 hyp2 ordering: check expectation on a product state
    a, b, c, d = (np.diag([0.9, 0.1]), np.diag([0.3, 0.7]), np.diag([0.6, 0.4]), np.diag([0.2, 0.8]))
    state = np.kron(np.kron(a, b), np.kron(c, d))
    want = 0.5 * (np.trace(l0 @ np.kron(a, c)) + np.trace(l1 @ np.kron(b, d)))
    assert np.trace(got @ state).real == pytest.approx(want.real, abs=1e-13)


def test_validation_errors():
    good = memorizer_quantum()
    with pytest.raises(ConfigurationError):
        fw.LearningInstance(("0", "0"), [0.5, 0.5], 1, "iid_local", (1, 2, 2), {}, {}, {}, {})
    with pytest.raises(ConfigurationError):
        fw.LearningInstance(good.sample_space, good.prior, 1, "weird", good.dims, good.data_states,
                            good.povms, {}, good.losses)
    with pytest.raises(ConfigurationError):
        fw.LearningInstance(good.sample_space, good.prior, 1, "iid_local", good.dims,
                            good.data_states, good.povms, {}, {})
    with pytest.raises(DomainError):
        fw.LearningInstance(good.sample_space, good.prior, 1, "iid_local", good.dims,
                            {"0": np.eye(2), "1": np.eye(2) / 2}, good.povms, {}, good.losses)


def test_enumeration_cap():
    with pytest.raises(ConfigurationError):
        fw.random_classical_instance(0, n_hyp=2, n_z=2, n=12)


def test_sample_ws_deterministic_and_in_support():
    inst = fw.random_instance(6, n_hyp=3)
    j = fw.induce(inst)
    a, b = fw.sample_ws(j, 500, 9), fw.sample_ws(j, 500, 9)
    assert a == b
    assert all(k in j.pairs for k in a)


@settings(max_examples=15)
@given(seeds, st.integers(1, 2))
def test_classical_embedding_matches_scalar_gen(seed, n):
    inst = fw.random_classical_instance(seed, n_hyp=3, n=n)
    j = fw.induce(inst)
    loss = {k: float(m[0, 0].real) for k, m in inst.losses.items()}
    for (w, s) in j.pairs:
        assert abs(fw.gen_error(j, inst, w, s) - fw.classical_gen(inst.prior, loss, w, s)) < 1e-12


@settings(max_examples=15)
@given(seeds)
def test_expected_gen_is_weighted_pair_gen(seed):
    inst = fw.random_instance(seed, n_hyp=2)
    j = fw.induce(inst)
    total = sum(r.weight * fw.gen_error(j, inst, w, s) for (w, s), r in j.pairs.items())
    assert total == pytest.approx(fw.expected_gen(j, inst), abs=1e-12)
