"""Scenario JSON I/O and the shipped named scenarios."""
from __future__ import annotations

import importlib.resources
import json

import numpy as np

from .errors import InputError
from .switch import PRESET_NAMES, LabAOp, LabMeasurement, SwitchScenario


def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _complex_from_json(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise InputError(f"expected [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _ket_to_json(k: np.ndarray) -> list:
    return [_complex_to_json(a) for a in np.asarray(k, dtype=complex).reshape(-1)]


def _ket_from_json(data) -> np.ndarray:
    return np.array([_complex_from_json(p) for p in data], dtype=complex)


def scenario_to_json(scn: SwitchScenario) -> dict:
    out = {
        "label": scn.label,
        "local_spaces": list(scn.local_spaces) if scn.local_spaces else None,
        "control_basis": [_ket_to_json(k) for k in scn.control_basis],
        "shared_state": [[_complex_to_json(v) for v in row] for row in scn.shared],
        "target_init": _ket_to_json(scn.target_init),
        "lab_a1": {"measure": [_ket_to_json(k) for k in scn.lab_a1.measure],
                   "prepare": [_ket_to_json(k) for k in scn.lab_a1.prepare]},
        "lab_a2": {"measure": [_ket_to_json(k) for k in scn.lab_a2.measure],
                   "prepare": [_ket_to_json(k) for k in scn.lab_a2.prepare]},
        "lab_c": {"settings": [[_ket_to_json(scn.lab_c.kets[s, o]) for o in (0, 1)]
                               for s in (0, 1)]},
        "lab_b": {"settings": [[_ket_to_json(scn.lab_b.kets[s, o]) for o in (0, 1)]
                               for s in (0, 1)]},
        "post_process": None,
    }
    if scn.post_process is not None:
        out["post_process"] = {
            "index_order": ",".join(("x1", "x2", "y", "z", "a1", "a2", "b", "c_raw")),
            "c_out": [int(v) for v in scn.post_process.reshape(-1)],
        }
    return out


def scenario_from_json(data: dict) -> SwitchScenario:
    try:
        lab_a = {}
        for key in ("lab_a1", "lab_a2"):
            lab_a[key] = LabAOp(
                measure=np.array([_ket_from_json(k) for k in data[key]["measure"]]),
                prepare=np.array([_ket_from_json(k) for k in data[key]["prepare"]]),
            )
        meas = {}
        for key in ("lab_c", "lab_b"):
            meas[key] = LabMeasurement(kets=np.array(
                [[_ket_from_json(k) for k in setting] for setting in data[key]["settings"]]))
        post = None
        if data.get("post_process") is not None:
            raw = data["post_process"]["c_out"]
            if len(raw) != 256:
                raise InputError(f"post_process table must have 256 entries, got {len(raw)}")
            post = np.array(raw, dtype=np.int64).reshape((2,) * 8)
        local = data.get("local_spaces")
        return SwitchScenario(
            label=str(data["label"]),
            control_basis=np.array([_ket_from_json(k) for k in data["control_basis"]]),
            shared=np.array([[_complex_from_json(v) for v in row]
                             for row in data["shared_state"]]),
            target_init=_ket_from_json(data["target_init"]),
            lab_a1=lab_a["lab_a1"],
            lab_a2=lab_a["lab_a2"],
            lab_c=meas["lab_c"],
            lab_b=meas["lab_b"],
            post_process=post,
            local_spaces=tuple(local) if local else None,
        )
    except KeyError as exc:
        raise InputError(f"scenario JSON is missing key {exc}") from None


def load_scenario(path: str) -> SwitchScenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read scenario file {path}: {exc}") from None
    return scenario_from_json(data)


def load_preset(name: str) -> SwitchScenario:
    if name not in PRESET_NAMES:
        raise InputError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    ref = importlib.resources.files("gptlab").joinpath("presets", f"{name}.json")
    data = json.loads(ref.read_text(encoding="utf-8"))
    return scenario_from_json(data)
