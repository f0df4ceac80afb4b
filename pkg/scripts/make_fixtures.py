"""Regenerate the JSON fixtures bundled with the package."""

from pathlib import Path

import numpy as np

from complementarity.io import dumps, ensemble_to_dict, state_to_dict, witness_to_dict
from complementarity.linalg import BipartiteState, maximally_entangled_state
from complementarity.measurements import WeightedEnsemble, mub_measurements, mum_family
from complementarity.witness import WitnessSpec, case_pairs

OUT = Path(__file__).resolve().parents[1] / "src" / "complementarity" / "fixtures"


def write(name: str, obj: dict):
    (OUT / name).write_text(dumps(obj), encoding="utf-8")
    print("wrote", OUT / name)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for d in (2, 3):
        write(f"cmub_d{d}.json", ensemble_to_dict(WeightedEnsemble.uniform(mub_measurements(d))))
    write("two_mub_d2.json", ensemble_to_dict(WeightedEnsemble.uniform(mub_measurements(2)[:2])))
    write("single_basis_d2.json", ensemble_to_dict(WeightedEnsemble.uniform(mub_measurements(2)[:1])))
    write("cmum_d3.json", ensemble_to_dict(WeightedEnsemble.uniform(mum_family(3, 0.6))))
    write("bell_state.json", state_to_dict(_bell()))
    write("plus_state.json", state_to_dict(np.full((2, 2), 0.5, dtype=complex)))
    for case in "abcd":
        pairs = case_pairs(case)
        write(f"witness_case_{case}.json",
              witness_to_dict(WitnessSpec(pairs, np.full(len(pairs), 1 / len(pairs)))))


def _bell():
    return BipartiteState(maximally_entangled_state(2), (2, 2))


if __name__ == "__main__":
    main()
