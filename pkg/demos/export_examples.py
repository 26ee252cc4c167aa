"""Write the example instance files under docs/examples.

    python3 demos/export_examples.py
"""

import json
from pathlib import Path

from qgenbound.fig2 import Fig2Config, build_fig2_instance
from qgenbound.framework import random_classical_instance, random_instance
from qgenbound.jsonio import instance_to_json

OUT = Path(__file__).resolve().parents[1] / "docs" / "examples"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    examples = {
        "worked_example_p060.json": build_fig2_instance(Fig2Config(), 0.6),
        "random_qubit_learner.json": random_instance(7, n_hyp=3),
        "random_qubit_learner_n2.json": random_instance(11, n=2),
        "classical_learner_n2.json": random_classical_instance(3, n=2),
    }
    for name, inst in examples.items():
        path = OUT / name
        path.write_text(json.dumps(instance_to_json(inst), indent=1) + "\n", encoding="utf-8")
        print("wrote", path)


if __name__ == "__main__":
    main()
