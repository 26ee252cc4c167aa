import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgenbound import bounds, framework as fw
from qgenbound.divergences import classical_kl
from qgenbound.errors import ConfigurationError, DomainError
from qgenbound.subgaussian import SubGaussianCert

from oracles import MEMORIZER_GEN, MEMORIZER_MI, memorizer_classical, memorizer_quantum, trivial_learner
from strategies import seeds


def _induced(inst):
    return fw.induce(inst), inst


def test_memorizer_mutual_information_and_kl_bound():
    j, inst = _induced(memorizer_classical())
    assert bounds.mutual_information(j) == pytest.approx(MEMORIZER_MI, abs=1e-14)
    rep = bounds.bound_kl(j, inst)
    assert rep.value == pytest.approx(math.sqrt(2 * 0.25 * MEMORIZER_MI), abs=1e-12)
    assert rep.realized_abs_gen == pytest.approx(MEMORIZER_GEN)
    assert rep.sound and not rep.vacuous


def test_classical_memorizer_reference_values():
    j, inst = _induced(memorizer_classical())
    cb = bounds.classical_bounds(j, inst)
    want = math.sqrt(2 * 0.25 * MEMORIZER_MI)
    assert cb["xu_raginsky"] == pytest.approx(want, abs=1e-12)
    assert cb["bu"] == pytest.approx(want, abs=1e-12)
    assert cb["tau"] == 0.5


def test_trivial_learner_bounds_are_zero():
    j, inst = _induced(trivial_learner())
    for rep in (bounds.bound_kl(j, inst), bounds.bound_l1(j, inst),
                bounds.bound_renyi(j, inst, kind="modified"), bounds.bound_renyi(j, inst, kind="petz"),
                bounds.bound_caro_old(j, inst), bounds.bound_iid_individual(j, inst)):
        assert rep.value == pytest.approx(0.0, abs=1e-9), rep.bound_kind


def _per_hypothesis_kl_limit(j, inst, rep):
    """Quantum KL term plus ``E_W sqrt(2 tau^2 D(P_S|W || P^n))``."""
    q = bounds.quantum_term(j, inst, None, "kl", rep.details["mu"])
    c = sum(j.marginal_w.prob(w) * math.sqrt(2 * rep.details["tau"] ** 2 * max(
        float(classical_kl(j.posterior_vector(w), j.prior_n).value), 0.0))
        for w in j.support_w())
    return q + c


@pytest.mark.parametrize("seed", [12, 21, 30])
def test_renyi_limit_near_one(seed):
    inst = fw.random_instance(seed, n_hyp=3)
    j = fw.induce(inst)
    kl = bounds.bound_kl(j, inst)
    for g in ([1 - 1e-4], [1 + 1e-4]):
        rep = bounds.bound_renyi(j, inst, g, g, kind="modified")
        assert abs(rep.value - _per_hypothesis_kl_limit(j, inst, rep)) <= 5e-3
        # the per-hypothesis square roots sit below sqrt(I) by concavity
        assert rep.value <= kl.value + 5e-3


def test_renyi_limit_equals_kl_for_single_hypothesis():
    inst = fw.random_instance(19, n_hyp=1)
    j = fw.induce(inst)
    kl = bounds.bound_kl(j, inst).value
    for g in ([1 - 1e-4], [1 + 1e-4]):
        assert abs(bounds.bound_renyi(j, inst, g, g).value - kl) <= 5e-3


def test_grid_and_displays_reported():
    inst = fw.random_instance(13)
    j = fw.induce(inst)
    rep = bounds.bound_renyi(j, inst, [0.3, 0.6, 0.9, 1.5, 2.0], [0.3, 0.6, 0.9, 1.5, 2.0])
    assert set(rep.details["displays"]) == {"below_one", "above_one"}
    assert [a for a, _ in rep.grid] == [0.3, 0.6, 0.9, 1.5, 2.0]
    best = min(d["value"] for d in rep.details["displays"].values())
    assert rep.value == pytest.approx(best)
    assert rep.value <= min(v for _, v in rep.grid) + 1e-12


def test_grid_rejects_one_and_nonpositive():
    j, inst = _induced(fw.random_instance(14))
    with pytest.raises(DomainError):
        bounds.bound_renyi(j, inst, [1.0], [0.5])
    with pytest.raises(DomainError):
        bounds.bound_renyi(j, inst, [-0.5], [0.5])
    with pytest.raises(ConfigurationError):
        bounds.bound_renyi(j, inst, [0.5], [2.0])


def test_minimize_on_grid_refines_parabola():
    x, v, vals = bounds.minimize_on_grid(lambda t: (t - 0.37) ** 2, [0.1, 0.3, 0.5, 0.7])
    assert abs(x - 0.37) < 1e-3 and v < 1e-6
    assert len(vals) == 4


def test_user_certificate_is_used_and_audited():
    base = fw.random_instance(15)
    inst = fw.LearningInstance(base.sample_space, base.prior, base.n, base.mode, base.dims,
                               base.data_states, base.povms, base.channels, base.losses,
                               SubGaussianCert(1e-3, 1e-3))
    j = fw.induce(inst)
    with pytest.warns(RuntimeWarning):
        rep = bounds.bound_kl(j, inst)
    assert rep.details["mu"] == 1e-3


def test_explicit_constants_override_derived():
    j, inst = _induced(fw.random_instance(16))
    rep = bounds.bound_kl(j, inst, mu=0.0, tau=0.0)
    assert rep.value == 0.0


def test_report_serialization():
    j, inst = _induced(fw.random_instance(17))
    rep = bounds.bound_renyi(j, inst)
    d = rep.to_json()
    assert d["bound_kind"] == "renyi-mod" and d["sound"] is True
    rows = rep.csv_rows()
    assert len(rows) == len(rep.grid)


def test_evaluate_dispatch():
    j, inst = _induced(fw.random_classical_instance(2, n=2))
    for k in bounds.KINDS:
        rep = bounds.evaluate(k, j, inst)
        assert rep.sound, k
    with pytest.raises(ConfigurationError):
        bounds.evaluate("nope", j, inst)


def test_iid_requires_iid_local():
    inst = fw.LearningInstance(("0",), [1.0], 1, "general", (1, 1, 1), {"0": np.eye(1)},
                               {"0": {"w": np.eye(1)}}, {}, {("w", "0"): np.eye(1)})
    with pytest.raises(ConfigurationError):
        bounds.bound_iid_individual(fw.induce(inst), inst)


def test_classical_bounds_reject_quantum_instance():
    j, inst = _induced(fw.random_instance(18))
    with pytest.raises(ConfigurationError):
        bounds.classical_bounds(j, inst)


@settings(max_examples=12)
@given(seeds, st.integers(1, 3))
def test_soundness_random_qubit_learners(seed, n_hyp):
    inst = fw.random_instance(seed, n_hyp=n_hyp)
    j = fw.induce(inst)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        reps = [bounds.bound_l1(j, inst), bounds.bound_l1(j, inst, 2.0), bounds.bound_kl(j, inst),
                bounds.bound_renyi(j, inst, kind="modified"),
                bounds.bound_renyi(j, inst, kind="petz"), bounds.bound_caro_old(j, inst),
                bounds.bound_iid_individual(j, inst),
                bounds.bound_iid_individual(j, inst, kind="kl")]
    for rep in reps:
        assert rep.sound, (rep.bound_kind, rep.value, rep.realized_abs_gen)


@settings(max_examples=5)
@given(seeds)
def test_iid_bounds_sound_for_two_samples(seed):
    inst = fw.random_instance(seed, n=2)
    j = fw.induce(inst)
    for kind in ("modified", "kl"):
        assert bounds.bound_iid_individual(j, inst, kind=kind).sound


@settings(max_examples=10)
@given(seeds, st.integers(1, 3))
def test_classical_reductions_exact(seed, n):
    inst = fw.random_classical_instance(seed, n_hyp=3, n=n)
    j = fw.induce(inst)
    cb = bounds.classical_bounds(j, inst)
    t = cb["tau"]
    assert bounds.bound_kl(j, inst, mu=0.0, tau=t / math.sqrt(n)).value == pytest.approx(
        cb["xu_raginsky"], abs=1e-9)
    assert bounds.bound_iid_individual(j, inst, kind="kl", tau=t, mu=0.0).value == pytest.approx(
        cb["bu"], abs=1e-9)
    assert bounds.bound_iid_individual(j, inst, tau=t, mu=0.0).value == pytest.approx(
        cb["modak"], abs=1e-9)
    assert cb["bu"] <= cb["xu_raginsky"] * math.sqrt(n) + 1e-12
