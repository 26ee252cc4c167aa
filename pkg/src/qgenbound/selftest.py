"""Fast built-in property checks, run by ``qgenbound selftest``.

Each check is a scaled-down version of a test-suite property; the summary
counts passes and failures.  Example instance files found in ``docs_dir``
are parsed and evaluated as well.
"""

from __future__ import annotations

import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import bounds, divergences as dv, framework, linalg, subgaussian, tails
from .jsonio import load_instance
from .measured import measured_renyi


def _pairs(seed, count, dims=(2, 3, 4)):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        d = int(rng.choice(dims))
        yield linalg.random_density_matrix(d, seed=rng), linalg.random_density_matrix(d, seed=rng)


def check_spot_values(seed):
    p, q = [0.75, 0.25], [0.5, 0.5]
    r, s = np.diag(p), np.diag(q)
    z = np.diag([1.0, -1.0])
    vals = [
        (dv.classical_renyi(p, q, 2.0).finite, 0.2231435513142097),
        (dv.classical_kl(p, q).finite, 0.75 * math.log(1.5) + 0.25 * math.log(0.5)),
        (dv.petz_renyi(r, s, 2.0).finite, 0.2231435513142097),
        (dv.smooth_max_divergence([0.5, 0.5], [0.25, 0.75], 0.0).finite, math.log(2.0)),
        (dv.smooth_max_divergence([0.5, 0.5], [0.25, 0.75], 0.5).finite, math.log(2.0 / 3.0)),
        (subgaussian.quantum_mgf(z, np.eye(2) / 2, 1.0), math.log(math.cosh(1.0))),
    ]
    return all(abs(a - b) < 1e-6 for a, b in vals)


def check_ordering(seed):
    ok = True
    for r, s in _pairs(seed, 6):
        for a in (0.3, 0.7, 1.5, 2.0):
            sw = dv.sandwiched_renyi(r, s, a).finite
            pz = dv.petz_renyi(r, s, a).finite
            mb = dv.modified_sandwiched(r, s, a).finite
            ok &= sw <= pz + 1e-9 and mb <= pz + 1e-6
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            m = measured_renyi(r, s, 0.7).finite
        ok &= m <= dv.modified_sandwiched(r, s, 0.7).finite + 1e-6
    return ok


def check_dpi(seed):
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(5):
        d = 2
        ch = linalg.random_cptp(linalg.HilbertSpace.single("a", d),
                                linalg.HilbertSpace.single("b", d), 2, seed=rng)
        r, s = linalg.random_density_matrix(d, seed=rng), linalg.random_density_matrix(d, seed=rng)
        cr, cs = ch.apply_matrix(r), ch.apply_matrix(s)
        for a in (0.5, 0.8, 1.5, 2.0):
            ok &= dv.sandwiched_renyi(cr, cs, a).finite <= dv.sandwiched_renyi(r, s, a).finite + 1e-8
            ok &= dv.petz_renyi(cr, cs, a).finite <= dv.petz_renyi(r, s, a).finite + 1e-8
    return ok


def check_additivity(seed):
    ok = True
    for (r1, s1), (r2, s2) in zip(_pairs(seed, 4, (2,)), _pairs(seed + 1, 4, (2,))):
        for a in (0.5, 2.0):
            lhs = dv.petz_renyi(np.kron(r1, r2), np.kron(s1, s2), a).finite
            ok &= abs(lhs - dv.petz_renyi(r1, s1, a).finite - dv.petz_renyi(r2, s2, a).finite) < 1e-9
    return ok


def check_hoeffding(seed):
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(20):
        d = int(rng.integers(2, 5))
        l = linalg.random_hermitian(d, seed=rng)
        r = linalg.random_density_matrix(d, seed=rng)
        a, b = subgaussian.spectral_range(l)
        ok &= subgaussian.check_quantum_hoeffding(l, r, a, b)[0]
    return ok


def check_soundness(seed):
    ok = True
    for k in range(5):
        inst = framework.random_instance(seed + k, n_hyp=2 + k % 2)
        j = framework.induce(inst)
        for rep in (bounds.bound_l1(j, inst), bounds.bound_kl(j, inst),
                    bounds.bound_renyi(j, inst, kind="modified"),
                    bounds.bound_renyi(j, inst, kind="petz"), bounds.bound_caro_old(j, inst)):
            ok &= rep.sound
    return ok


def check_classical_reduction(seed):
    inst = framework.random_classical_instance(seed, n=2)
    j = framework.induce(inst)
    loss = {k: float(m[0, 0].real) for k, m in inst.losses.items()}
    gen_ok = all(abs(framework.gen_error(j, inst, w, s) - framework.classical_gen(inst.prior, loss, w, s))
                 < 1e-12 for (w, s) in j.pairs)
    cb = bounds.classical_bounds(j, inst)
    kl = bounds.bound_kl(j, inst, mu=0.0, tau=cb["tau"] / math.sqrt(inst.n))
    return gen_ok and abs(kl.value - cb["xu_raginsky"]) < 1e-9


def check_fig2(seed):
    from .fig2 import Fig2Config, sweep_alpha, sweep_p

    cfg = Fig2Config(p_grid=(0.5, 0.8))
    rows = sweep_p(cfg)
    ok = all(r[2] <= r[3] + 1e-9 and r[2] <= r[1] + 1e-9 for r in rows)
    return ok and all(r[2] <= r[3] + 1e-9 for r in sweep_alpha(cfg))


def check_tail(seed):
    ok = True
    inst = framework.random_instance(seed, n=1)
    j = framework.induce(inst)
    for kind in ("quantum-renyi", "quantum-smooth-max"):
        ok &= tails.verify_coverage(j, inst, kind, {"delta": 0.1}, 2000, seed).passed
    cinst = framework.random_classical_instance(seed, n=2)
    cj = framework.induce(cinst)
    for kind in ("classical-renyi", "classical-smooth-max"):
        ok &= tails.verify_coverage(cj, cinst, kind, {"delta": 0.1}, 2000, seed).passed
    return ok


CHECKS = (
    ("spot values", check_spot_values),
    ("divergence ordering", check_ordering),
    ("data processing", check_dpi),
    ("additivity", check_additivity),
    ("quantum hoeffding", check_hoeffding),
    ("bound soundness", check_soundness),
    ("classical reduction", check_classical_reduction),
    ("worked example orderings", check_fig2),
    ("tail coverage", check_tail),
)


def default_docs_dir() -> Path | None:
    here = Path(__file__).resolve().parents[2] / "docs" / "examples"
    return here if here.is_dir() else None


def _doc_check(path: Path):
    def run(seed):
        inst = load_instance(str(path))
        j = framework.induce(inst)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            rep = bounds.bound_kl(j, inst)
        return math.isfinite(rep.value) and rep.sound
    return run


def run_selftest(seed: int = 42, docs_dir=None, stream=None) -> dict:
    stream = stream or sys.stderr
    checks = list(CHECKS)
    docs = Path(docs_dir) if docs_dir else default_docs_dir()
    if docs is not None:
        for p in sorted(docs.glob("*.json")):
            checks.append((f"example {p.name}", _doc_check(p)))
    results = []
    for name, fn in checks:
        try:
            ok = bool(fn(seed))
            err = None
        except Exception as e:  # a crashing check counts as a failure
            ok, err = False, f"{type(e).__name__}: {e}"
        results.append({"name": name, "passed": ok, "error": err})
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({err})" if err else ""), file=stream)
    passed = sum(r["passed"] for r in results)
    failed = len(results) - passed
    print(f"selftest: {passed} passed, {failed} failed", file=stream)
    return {"passed": passed, "failed": failed, "checks": results}
