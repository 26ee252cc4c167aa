"""Two-qubit worked example: bounds at p = 0.6, then both sweeps to ./fig2_out.

    python3 demos/worked_example.py
"""

from qgenbound.fig2 import Fig2Config, build_fig2_instance, renyi_reports, reproduce
from qgenbound.framework import expected_gen, induce

cfg = Fig2Config()
inst = build_fig2_instance(cfg, cfg.p_star)
j = induce(inst)

print("outcome probabilities p(w|z):")
for (w, s), rec in sorted(j.pairs.items()):
    print(f"  w={w} z={s[0]}  {rec.p_w_given_s:.4f}")
print(f"|expected gen| = {abs(expected_gen(j, inst)):.6f}")

for name, rep in renyi_reports(cfg, cfg.p_star).items():
    print(f"{name:11s} optimum {rep.value:.6f} at {rep.optimum[0]}")

for which in ("p", "alpha"):
    out = reproduce(which, "fig2_out", cfg)
    print("wrote", ", ".join(out["files"]))
