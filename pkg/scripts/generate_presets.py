"""Regenerate the scenario presets shipped inside the package.

Writes src/gptlab/presets/<name>.json for every named preset. The script is
the single source of truth for those files; run it from the repository root
after changing any strategy definition.
"""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from gptlab import serialize
from gptlab.linalg import KET_0, KET_1, phi_plus, phi_pr
from gptlab.presets import scenario_from_json, scenario_to_json
from gptlab.spaces import observable_kets
from gptlab.switch import LabAOp, LabMeasurement, SwitchScenario, wiring_from_function

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "gptlab" / "presets"


def meas(choice0: tuple[str, str], choice1: tuple[str, str]) -> LabMeasurement:
    """Two-setting measurement from (observable, outcome-order) pairs;
    order "+-" puts the +1 eigenket on outcome 0."""
    settings = []
    for name, order in (choice0, choice1):
        plus, minus = observable_kets(name)
        settings.append([plus, minus] if order == "+-" else [minus, plus])
    return LabMeasurement(kets=np.array(settings))


def computational_lab() -> LabAOp:
    basis = np.array([KET_0, KET_1])
    return LabAOp(measure=basis, prepare=basis)


def xbasis_lab() -> LabAOp:
    plus, minus = observable_kets("X")
    basis = np.array([plus, minus])
    return LabAOp(measure=basis, prepare=basis)


def build_presets() -> dict[str, SwitchScenario]:
    computational = np.array([KET_0, KET_1])
    xplus, xminus = observable_kets("X")

    quantum = SwitchScenario(
        label="quantum-II.B",
        control_basis=computational,
        shared=phi_plus(),
        target_init=KET_0,
        lab_a1=computational_lab(),
        lab_a2=computational_lab(),
        lab_c=meas(("X+Z", "+-"), ("X-Z", "-+")),
        lab_b=meas(("Z", "+-"), ("X", "+-")),
        post_process=None,
        local_spaces=("qubit", "qubit"),
    )

    hexsquare_a = SwitchScenario(
        label="hexsquare-V.A",
        control_basis=computational,
        shared=phi_pr(),
        target_init=KET_0,
        lab_a1=computational_lab(),
        lab_a2=computational_lab(),
        lab_c=meas(("X+Z", "+-"), ("X-Z", "-+")),
        lab_b=meas(("Z", "+-"), ("X", "+-")),
        post_process=None,
        local_spaces=("hex", "square"),
    )

    # future lab's outcome is overwritten by the first intermediate outcome
    # whenever x2 = 1
    relabel = wiring_from_function(
        lambda x1, x2, y, z, a1, a2, b, c_raw: a1 if x2 else c_raw)
    hexsquare_b = SwitchScenario(
        label="hexsquare-V.B",
        control_basis=computational,
        shared=phi_pr(),
        target_init=KET_0,
        lab_a1=computational_lab(),
        lab_a2=computational_lab(),
        lab_c=meas(("X-Z", "-+"), ("X-Z", "-+")),
        lab_b=meas(("Z", "+-"), ("X", "-+")),
        post_process=relabel,
        local_spaces=("hex", "square"),
    )

    hexsquare_c = SwitchScenario(
        label="hexsquare-V.C",
        control_basis=np.array([xplus, xminus]),
        shared=phi_pr(),
        target_init=xplus,
        lab_a1=xbasis_lab(),
        lab_a2=xbasis_lab(),
        lab_c=meas(("Y", "-+"), ("Y", "-+")),
        lab_b=meas(("X+Y", "+-"), ("X-Y", "-+")),
        post_process=None,
        local_spaces=("square", "hex"),
    )

    return {
        "quantum-II.B": quantum,
        "hexsquare-V.A": hexsquare_a,
        "hexsquare-V.B": hexsquare_b,
        "hexsquare-V.C": hexsquare_c,
    }


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, scn in build_presets().items():
        data = scenario_to_json(scn)
        scenario_from_json(data)  # round-trip sanity before writing
        path = OUT_DIR / f"{name}.json"
        path.write_text(serialize.dumps(data, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
