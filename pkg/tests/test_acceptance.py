"""Acceptance criteria 1-11, each printing one PASS/FAIL line."""

import math
import time
import warnings

import numpy as np
import pytest

from qgenbound import bounds, divergences as dv, fig2, framework as fw, linalg, subgaussian, tails
from qgenbound.measured import measured_renyi, tensor_power_trend

ALPHAS = (0.3, 0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 3.0)


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return report


def _quiet():
    ctx = warnings.catch_warnings()
    ctx.__enter__()
    warnings.simplefilter("ignore", RuntimeWarning)
    return ctx


def _random_pairs(seed, count, dims=(2, 3, 4)):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        d = int(rng.choice(dims))
        out.append((linalg.random_density_matrix(d, seed=rng), linalg.random_density_matrix(d, seed=rng)))
    return out


def test_c01_divergence_ordering(verdict):
    t0 = time.perf_counter()
    worst_sp, worst_mm, worst_mp = -math.inf, -math.inf, -math.inf
    ctx = _quiet()
    try:
        for r, s in _random_pairs(101, 200):
            for a in ALPHAS:
                sw = dv.sandwiched_renyi(r, s, a).finite
                pz = dv.petz_renyi(r, s, a).finite
                mb = dv.modified_sandwiched(r, s, a).finite
                m = measured_renyi(r, s, a).finite
                worst_sp = max(worst_sp, sw - pz)
                worst_mm = max(worst_mm, m - mb)
                worst_mp = max(worst_mp, mb - pz)
    finally:
        ctx.__exit__(None, None, None)
    dt = time.perf_counter() - t0
    ok = worst_sp <= 1e-9 and worst_mm <= 1e-6 and worst_mp <= 1e-6 and dt < 60
    verdict(1, "divergence ordering", ok,
            f"max(sandwiched-petz)={worst_sp:.2e} max(measured-modified)={worst_mm:.2e} "
            f"max(modified-petz)={worst_mp:.2e} time={dt:.1f}s")


def test_c02_data_processing(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    worst = {"sandwiched": -math.inf, "petz": -math.inf, "modified": -math.inf}
    orders = {
        "sandwiched": [a for a in ALPHAS if a >= 0.5],
        "petz": [a for a in ALPHAS if a <= 2.0],
        "modified": list(ALPHAS),
    }
    fns = {"sandwiched": dv.sandwiched_renyi, "petz": dv.petz_renyi, "modified": dv.modified_sandwiched}
    for _ in range(50):
        din, dout = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        kc = -(-din // dout) + int(rng.integers(0, 2))
        ch = linalg.random_cptp(linalg.HilbertSpace.single("a", din),
                                linalg.HilbertSpace.single("b", dout), kc, seed=rng)
        for _ in range(20):
            r = linalg.random_density_matrix(din, seed=rng)
            s = linalg.random_density_matrix(din, seed=rng)
            cr, cs = ch.apply_matrix(r), ch.apply_matrix(s)
            for name, fn in fns.items():
                for a in orders[name]:
                    worst[name] = max(worst[name], fn(cr, cs, a).finite - fn(r, s, a).finite)
    dt = time.perf_counter() - t0
    ok = all(v <= 1e-8 for v in worst.values()) and dt < 60
    verdict(2, "data processing", ok,
            " ".join(f"{k}={v:.2e}" for k, v in worst.items()) + f" time={dt:.1f}s")


def test_c03_additivity(verdict):
    worst = 0.0
    pairs = _random_pairs(303, 200, dims=(2,))
    for (r1, s1), (r2, s2) in zip(pairs[::2], pairs[1::2]):
        for a in ALPHAS:
            for fn in (dv.petz_renyi, dv.sandwiched_renyi):
                lhs = fn(np.kron(r1, r2), np.kron(s1, s2), a).finite
                worst = max(worst, abs(lhs - fn(r1, s1, a).finite - fn(r2, s2, a).finite))
    verdict(3, "additivity", worst <= 1e-9, f"max deviation={worst:.2e} over 100 product pairs")


def test_c04_limits(verdict):
    worst_q, worst_c = 0.0, 0.0
    rng = np.random.default_rng(404)
    for r, s in _random_pairs(404, 50):
        d = dv.quantum_relative_entropy(r, s).finite
        for a in (1 - 1e-4, 1 + 1e-4):
            worst_q = max(worst_q, abs(dv.petz_renyi(r, s, a).finite - d),
                          abs(dv.sandwiched_renyi(r, s, a).finite - d))
        p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
        kl = dv.classical_kl(p, q).finite
        for a in (1 - 1e-4, 1 + 1e-4):
            worst_c = max(worst_c, abs(dv.classical_renyi(p, q, a).finite - kl))
    ok = worst_q <= 5e-3 and worst_c <= 5e-3
    verdict(4, "limits at one", ok, f"quantum max gap={worst_q:.2e} classical max gap={worst_c:.2e}")


def test_c05_quantum_hoeffding(verdict):
    rng = np.random.default_rng(505)
    grid = np.linspace(-10, 10, 101)
    worst = math.inf
    for _ in range(500):
        d = int(rng.integers(2, 5))
        l = linalg.random_hermitian(d, seed=rng)
        r = linalg.random_density_matrix(d, seed=rng)
        a, b = subgaussian.spectral_range(l)
        worst = min(worst, subgaussian.check_quantum_hoeffding(l, r, a, b, grid)[1])
    spot = subgaussian.quantum_mgf(np.diag([1.0, -1.0]), np.eye(2) / 2, 1.0)
    ok = worst >= -1e-9 and abs(spot - 0.433781) < 1e-6 and spot <= 0.5
    verdict(5, "quantum hoeffding", ok, f"worst slack={worst:.3e} spot LHS={spot:.6f}")


def test_c06_commuting_reductions(verdict):
    rng = np.random.default_rng(606)
    worst, worst_m = 0.0, 0.0
    ctx = _quiet()
    try:
        for _ in range(50):
            d = int(rng.integers(2, 5))
            p, q = rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(d))
            r, s = np.diag(p), np.diag(q)
            kl = dv.classical_kl(p, q).finite
            worst = max(worst, abs(dv.quantum_relative_entropy(r, s).finite - kl))
            for a in ALPHAS:
                c = dv.classical_renyi(p, q, a).finite
                vals = [dv.petz_renyi(r, s, a).finite, dv.sandwiched_renyi(r, s, a).finite,
                        dv.modified_sandwiched(r, s, a).finite]
                if a < 1:
                    vals.append(dv.reverse_sandwiched(r, s, a).finite)
                worst = max(worst, max(abs(v - c) for v in vals))
                worst_m = max(worst_m, abs(measured_renyi(r, s, a).finite - c))
    finally:
        ctx.__exit__(None, None, None)
    ok = worst <= 1e-10 and worst_m <= 1e-6
    verdict(6, "commuting reductions", ok, f"closed forms max gap={worst:.2e} measured max gap={worst_m:.2e}")


def test_c07_bound_soundness(verdict):
    t0 = time.perf_counter()
    failures, checked, vacuous = [], 0, 0
    ctx = _quiet()
    try:
        for seed in range(50):
            inst = fw.random_instance(7000 + seed, n_hyp=1 + seed % 3, n_z=2, dim=2, n=1)
            j = fw.induce(inst)
            gen = abs(fw.expected_gen(j, inst))
            gen_old = abs(fw.expected_gen_old(j, inst))
            for rep in (bounds.bound_l1(j, inst), bounds.bound_kl(j, inst),
                        bounds.bound_renyi(j, inst, kind="modified"),
                        bounds.bound_renyi(j, inst, kind="petz"), bounds.bound_caro_old(j, inst)):
                if rep.vacuous:
                    vacuous += 1
                    continue
                checked += 1
                target = gen_old if rep.bound_kind in ("l1", "caro-old") else gen
                if target > rep.value + 1e-9:
                    failures.append((seed, rep.bound_kind, target, rep.value))
    finally:
        ctx.__exit__(None, None, None)
    dt = time.perf_counter() - t0
    ok = not failures and dt < 180
    verdict(7, "bound soundness", ok,
            f"{checked} checks, {vacuous} vacuous, {len(failures)} failures, time={dt:.1f}s")


def test_c08_worked_example(verdict, tmp_path):
    t0 = time.perf_counter()
    cfg = fig2.Fig2Config()
    out_p = fig2.reproduce("p", tmp_path, cfg)
    out_a = fig2.reproduce("alpha", tmp_path, cfg)
    dt = time.perf_counter() - t0
    p_ok = all(b_mod <= b_petz + 1e-9 and b_mod <= b_kl + 1e-9
               for _, b_kl, b_mod, b_petz, _ in out_p["rows"])
    ps = [round(r[0], 10) for r in out_p["rows"]]
    alphas = [r[0] for r in out_a["rows"]]
    a_ok = all(b_mod <= b_petz + 1e-9 for _, _, b_mod, b_petz in out_a["rows"])
    files = [tmp_path / f for f in ("fig2a.csv", "fig2a.svg", "fig2b.csv", "fig2b.svg")]
    emitted = all(f.exists() and f.stat().st_size > 0 for f in files)
    ok = (p_ok and a_ok and emitted and dt < 120 and ps == [0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8]
          and min(alphas) >= 0.4 and max(alphas) < 1)
    verdict(8, "worked example", ok,
            f"p-sweep ordering={p_ok} alpha-sweep ordering={a_ok} files={emitted} time={dt:.1f}s")


def test_c09_tail_coverage(verdict):
    t0 = time.perf_counter()
    worst_margin, failures, runs = math.inf, [], 0
    for seed in range(20):
        qi = fw.random_instance(9000 + seed, n_hyp=2 + seed % 2)
        ci = fw.random_classical_instance(9000 + seed, n_hyp=3, n=2)
        qj, cj = fw.induce(qi), fw.induce(ci)
        for kind in tails.TAIL_KINDS:
            j, inst = (cj, ci) if kind.startswith("classical") else (qj, qi)
            for delta in (0.05, 0.1):
                rep = tails.verify_coverage(j, inst, kind, {"delta": delta}, 10_000, seed)
                runs += 1
                worst_margin = min(worst_margin, rep.empirical_coverage - rep.threshold)
                if not rep.passed:
                    failures.append((seed, kind, delta, rep.empirical_coverage))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 180
    verdict(9, "tail coverage", ok,
            f"{runs} runs, {len(failures)} failures, min(coverage-threshold)={worst_margin:.4f}, "
            f"time={dt:.1f}s")


def test_c10_classical_reduction(verdict):
    worst_b, worst_g = 0.0, 0.0
    for seed in range(20):
        n = 1 + seed % 3
        inst = fw.random_classical_instance(1000 + seed, n_hyp=2 + seed % 2, n=n)
        j = fw.induce(inst)
        loss = {k: float(m[0, 0].real) for k, m in inst.losses.items()}
        for (w, s) in j.pairs:
            worst_g = max(worst_g, abs(fw.gen_error(j, inst, w, s)
                                       - fw.classical_gen(inst.prior, loss, w, s)))
        cb = bounds.classical_bounds(j, inst)
        tau = cb["tau"]
        xr = bounds.bound_kl(j, inst, mu=0.0, tau=tau / math.sqrt(n)).value
        bu = bounds.bound_iid_individual(j, inst, kind="kl", mu=0.0, tau=tau).value
        modak = bounds.bound_iid_individual(j, inst, kind="modified", mu=0.0, tau=tau).value
        worst_b = max(worst_b, abs(xr - cb["xu_raginsky"]), abs(bu - cb["bu"]),
                      abs(modak - cb["modak"]))
    ok = worst_b <= 1e-9 and worst_g <= 1e-12
    verdict(10, "classical reduction", ok, f"bound max gap={worst_b:.2e} gen max gap={worst_g:.2e}")


def test_c11_tensor_power_trend(verdict):
    worst_mono, worst_cap = -math.inf, -math.inf
    ctx = _quiet()
    try:
        for r, s in _random_pairs(1111, 10, dims=(2,)):
            for a in (0.4, 0.7, 2.0):
                vals = [v for _, v in tensor_power_trend(r, s, a, 3)]
                cap = dv.modified_sandwiched(r, s, a).finite
                worst_mono = max(worst_mono, max(x - y for x, y in zip(vals, vals[1:])))
                worst_cap = max(worst_cap, max(v - cap for v in vals))
    finally:
        ctx.__exit__(None, None, None)
    ok = worst_mono <= 1e-4 and worst_cap <= 1e-6
    verdict(11, "tensor power trend", ok,
            f"max per-copy decrease={worst_mono:.2e} max excess over modified={worst_cap:.2e}")
