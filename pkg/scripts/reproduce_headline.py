"""Recompute every headline number and compare against its closed form.

Prints one line per check and exits 1 on any deviation beyond 1e-9.
"""
import sys

import numpy as np

from gptlab.drf import eval_inequality, mixture_dominance_check, optimize_strategy, standard_grid
from gptlab.gpt import find_superposition
from gptlab.linalg import SQRT2
from gptlab.polytope import enumerate_vertices, facets_from_effects, vertex_diff
from gptlab.presets import load_preset
from gptlab.spaces import (boxworld_space, hex_effect_operators, hex_space,
                           reference_vertices, square_effect_operators)
from gptlab.switch import switch_distribution

CHECKS = []


def check(name: str, value: float, expected: float, tol: float = 1e-9) -> None:
    ok = abs(value - expected) <= tol
    CHECKS.append(ok)
    status = "ok " if ok else "FAIL"
    print(f"{status} {name:46s} {value:.12f}  (expected {expected:.12f})")


def main() -> int:
    ops, labels = hex_effect_operators()
    hex_vs = enumerate_vertices(facets_from_effects(ops, labels))
    diff = vertex_diff(hex_vs.vertices, reference_vertices("hex"))
    check("hex vertex count", len(hex_vs.vertices), 14, 0)
    check("hex vertices missing from reference", len(diff["missing"]), 0, 0)

    ops, labels = square_effect_operators()
    square_vs = enumerate_vertices(facets_from_effects(ops, labels))
    check("cube vertex count", len(square_vs.vertices), 8, 0)

    hx = find_superposition(hex_space())
    check("hex witness f_r1 on s", hx.values["fr1_s"], 0.5, 1e-12)
    bw = find_superposition(boxworld_space())
    check("box-world witness e_s on r1", bw.values["es_r1"], 0.5, 1e-12)

    totals = {
        ("quantum-II.B", 1): 1.0 + (2.0 + SQRT2) / 4.0,
        ("hexsquare-V.A", 1): (14.0 + SQRT2) / 8.0,
        ("hexsquare-V.B", 2): (28.0 + SQRT2) / 16.0,
        ("hexsquare-V.C", 5): 2.0,
    }
    for (preset, iid), expected in totals.items():
        dist = switch_distribution(load_preset(preset))
        report = eval_inequality(dist, iid)
        check(f"{preset} inequality {iid} total", report.total, expected)

    fixed = load_preset("hexsquare-V.B")
    grid = standard_grid()
    result = optimize_strategy(2, grid, fixed)
    check("grid optimum, inequality 2", result.total_max, (28.0 + SQRT2) / 16.0)
    check("grid game-term maximum", result.game_term_max, (12.0 + SQRT2) / 16.0)
    dominated = mixture_dominance_check(2, grid, fixed, mixtures=1000, seed=0)
    check("1000 mixtures stay below grid optimum", float(dominated), 1.0, 0)

    failures = CHECKS.count(False)
    print(f"{len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
