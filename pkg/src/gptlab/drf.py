"""Causal-order inequalities: term evaluation, table lookups, grid optimization.

Five inequalities over the outcome tables of two intermediate labs, a past
lab B and a future lab C. Each carries the bound 7/4 under definite causal
order, relativistic causality and free choice; the algebraic maximum is 2.
Conditions fix some inputs, all remaining inputs are averaged uniformly.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .spaces import observable_kets
from .switch import (ConditionalDistribution, LabMeasurement, SwitchScenario,
                     _collapsed_matrices, _measurement_effects, switch_distribution,
                     table_from_effects)
from .tolerances import DEFAULT, Tolerances

BOUND = 7.0 / 4.0
ALGEBRAIC_BOUND = 2.0
# quantum-correlation maximum for inequalities 2-4, quoted for comparison only
REFERENCE_QUANTUM_OPTIMUM = 1.8274


@dataclass(frozen=True)
class Term:
    label: str
    coefficient: float
    condition: callable  # (x1, x2, y, z) -> bool
    event: callable      # (x1, x2, y, z, a1, a2, b, c) -> bool


def _cond(**fixed):
    def check(x1, x2, y, z):
        vals = {"x1": x1, "x2": x2, "y": y, "z": z}
        return all(vals[k] == v for k, v in fixed.items())
    return check


_T_B0_A2 = Term("p(b=0, a2=x1 | y=0)", 1.0, _cond(y=0),
                lambda x1, x2, y, z, a1, a2, b, c: b == 0 and a2 == x1)
_T_B1_A1 = Term("p(b=1, a1=x2 | y=0)", 1.0, _cond(y=0),
                lambda x1, x2, y, z, a1, a2, b, c: b == 1 and a1 == x2)
_T_GAME_YZ = Term("p(b xor c = yz | x1=0, x2=0)", 1.0, _cond(x1=0, x2=0),
                  lambda x1, x2, y, z, a1, a2, b, c: (b ^ c) == (y & z))
_T_GAME_X2Y = Term("p(b xor c = x2 y | x1=0)", 1.0, _cond(x1=0),
                   lambda x1, x2, y, z, a1, a2, b, c: (b ^ c) == (x2 & y))
_T3_B0_A2 = Term("p(b=0, a2=x1 | x2=0, y=0)", 1.0, _cond(x2=0, y=0),
                 lambda x1, x2, y, z, a1, a2, b, c: b == 0 and a2 == x1)
_T3_B1_A1 = Term("p(b=1, a1=x2 | x1=0, y=0)", 1.0, _cond(x1=0, y=0),
                 lambda x1, x2, y, z, a1, a2, b, c: b == 1 and a1 == x2)
_T4_EXTRA = Term("p(a2=1, c xor 1 = b = y | x1=0, x2=0)", 1.0, _cond(x1=0, x2=0),
                 lambda x1, x2, y, z, a1, a2, b, c:
                 a2 == 1 and (c ^ 1) == b and b == y)
_T5_A1 = Term("p(a1=0 | x1=1, x2=0)", 0.5, _cond(x1=1, x2=0),
              lambda x1, x2, y, z, a1, a2, b, c: a1 == 0)
_T5_A2 = Term("p(a2=0 | x1=0, x2=1)", 0.5, _cond(x1=0, x2=1),
              lambda x1, x2, y, z, a1, a2, b, c: a2 == 0)
_T5_BOTH = Term("p(a1=0, a2=0 | x1=1, x2=1)", -0.5, _cond(x1=1, x2=1),
                lambda x1, x2, y, z, a1, a2, b, c: a1 == 0 and a2 == 0)
_T5_GAME = Term("p((x2 a1 + (x2+1) c) xor b = x2 y | x1=x2)", 1.0,
                lambda x1, x2, y, z: x1 == x2,
                lambda x1, x2, y, z, a1, a2, b, c:
                ((a1 if x2 else c) ^ b) == (x2 & y))

INEQUALITIES: dict[int, tuple[Term, ...]] = {
    1: (_T_B0_A2, _T_B1_A1, _T_GAME_YZ),
    2: (_T_B0_A2, _T_B1_A1, _T_GAME_X2Y),
    3: (_T3_B0_A2, _T3_B1_A1, _T_GAME_X2Y),
    4: (_T3_B0_A2, _T3_B1_A1, _T_GAME_X2Y, _T4_EXTRA),
    5: (_T5_A1, _T5_A2, _T5_BOTH, _T5_GAME),
}

# index of the correlation-game term within each inequality
GAME_TERM_INDEX = {1: 2, 2: 2, 3: 2, 4: 2, 5: 3}


@dataclass(frozen=True)
class InequalityReport:
    inequality_id: int
    terms: tuple[dict, ...]  # {label, coefficient, probability, value}
    total: float
    bound: float
    algebraic_bound: float
    violated: bool

    def as_json(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "terms": [dict(t) for t in self.terms],
            "total": self.total,
            "bound": self.bound,
            "algebraic_bound": self.algebraic_bound,
            "violated": self.violated,
        }


def eval_term(dist: ConditionalDistribution, term: Term) -> float:
    """Probability of the term's event, inputs averaged uniformly over the
    tuples its condition admits."""
    inputs = [t for t in itertools.product((0, 1), repeat=4) if term.condition(*t)]
    if not inputs:
        raise InputError(f"term {term.label!r} admits no input tuples")
    total = 0.0
    for x1, x2, y, z in inputs:
        for a1, a2, b, c in itertools.product((0, 1), repeat=4):
            if term.event(x1, x2, y, z, a1, a2, b, c):
                total += dist.table[x1, x2, y, z, a1, a2, b, c]
    return total / len(inputs)


def eval_inequality(dist: ConditionalDistribution, inequality_id: int,
                    tol: Tolerances = DEFAULT) -> InequalityReport:
    try:
        terms = INEQUALITIES[inequality_id]
    except KeyError:
        raise InputError(f"inequality id must be 1..5, got {inequality_id!r}") from None
    detail = []
    total = 0.0
    for t in terms:
        prob = eval_term(dist, t)
        value = t.coefficient * prob
        total += value
        detail.append({"label": t.label, "coefficient": t.coefficient,
                       "probability": prob, "value": value})
    return InequalityReport(
        inequality_id=inequality_id,
        terms=tuple(detail),
        total=total,
        bound=BOUND,
        algebraic_bound=ALGEBRAIC_BOUND,
        violated=bool(total > BOUND + tol.prob),
    )


def chsh_score(table: np.ndarray, game) -> float:
    """Mean winning probability of b xor c = game(y, z) on a two-party table
    p[z, y, c, b], settings weighted uniformly."""
    table = np.asarray(table, dtype=float)
    if table.shape != (2, 2, 2, 2):
        raise InputError("expected a p[z, y, c, b] table of shape (2,2,2,2)")
    score = 0.0
    for z, y, c, b in itertools.product((0, 1), repeat=4):
        if (b ^ c) == int(game(y, z)):
            score += table[z, y, c, b]
    return score / 4.0


def product_game(y: int, z: int) -> int:
    return y & z


# ======================================================================
# Strategy grids
# ======================================================================


@dataclass(frozen=True)
class StrategyGrid:
    """Candidate projective measurements: one list for lab C (applied to both
    z settings) and one for lab B (applied at y=1; y=0 stays as wired)."""
    c_candidates: tuple[tuple[str, LabMeasurement], ...]
    b_candidates: tuple[tuple[str, LabMeasurement], ...]


def _ordered_measurements(families: list[str]) -> list[tuple[str, np.ndarray]]:
    out = []
    for fam in families:
        plus, minus = observable_kets(fam)
        out.append((f"{fam}:+-", np.array([plus, minus])))
        out.append((f"{fam}:-+", np.array([minus, plus])))
    return out


def standard_grid(c_families: list[str] | None = None,
                  b_families: list[str] | None = None,
                  b_y0: str = "Z:+-") -> StrategyGrid:
    """Grid over the extremal binary measurements of the hexagon-prism effects
    (lab C) and the cube effects (lab B). Both outcome orders of every family
    appear, since relabeling the outcomes changes the inequality values.
    Lab B's y=0 measurement is pinned (default: Z with outcome 0 on the +1 ket)."""
    c_families = c_families or ["X+Z", "X-Z", "X+Y", "X-Y", "Z"]
    b_families = b_families or ["X", "Y", "Z"]
    fam0, order0 = b_y0.split(":")
    plus0, minus0 = observable_kets(fam0)
    y0 = np.array([plus0, minus0] if order0 == "+-" else [minus0, plus0])

    c_list = [(lbl, LabMeasurement(kets=np.array([kets, kets])))
              for lbl, kets in _ordered_measurements(c_families)]
    b_list = [(lbl, LabMeasurement(kets=np.array([y0, kets])))
              for lbl, kets in _ordered_measurements(b_families)]
    return StrategyGrid(c_candidates=tuple(c_list), b_candidates=tuple(b_list))


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    inequality_id: int
    best_c: str
    best_b: str
    best_scenario: SwitchScenario
    report: InequalityReport
    game_term_max: float  # largest game-term probability anywhere on the grid
    total_max: float
    optima: tuple[dict, ...]  # every grid point within 1e-9 of the best total

    def as_json(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "best": {"lab_c": self.best_c, "lab_b": self.best_b},
            "game_term_max": self.game_term_max,
            "total_max": self.total_max,
            "optima": [dict(o) for o in self.optima],
            "report": self.report.as_json(),
        }


def optimize_strategy(inequality_id: int, grid: StrategyGrid,
                      fixed: SwitchScenario,
                      tol: Tolerances = DEFAULT) -> OptimizationResult:
    """Exhaustive sweep of the grid; ties broken by (C, B) candidate order.

    Returns the best total together with the game term and the full set of
    optima, since distinct measurement labelings can tie exactly.
    """
    if inequality_id not in INEQUALITIES:
        raise InputError(f"inequality id must be 1..5, got {inequality_id!r}")
    game_idx = GAME_TERM_INDEX[inequality_id]
    rows = []
    best = None
    for (cl, cm), (bl, bm) in itertools.product(grid.c_candidates, grid.b_candidates):
        scn = dataclasses.replace(fixed, lab_c=cm, lab_b=bm)
        report = eval_inequality(switch_distribution(scn, tol), inequality_id, tol)
        game = report.terms[game_idx]["probability"]
        rows.append({"lab_c": cl, "lab_b": bl, "total": report.total,
                     "game_term": game})
        if best is None or report.total > best[0] + 1e-12:
            best = (report.total, cl, bl, scn, report, game)
    if best is None:
        raise InputError("empty strategy grid")
    total_max, cl, bl, scn, report, _ = best
    game_term_max = max(r["game_term"] for r in rows)
    optima = tuple(r for r in rows if r["total"] >= total_max - 1e-9)
    return OptimizationResult(
        inequality_id=inequality_id, best_c=cl, best_b=bl, best_scenario=scn,
        report=report, game_term_max=game_term_max, total_max=total_max,
        optima=optima,
    )


def mixture_dominance_check(inequality_id: int, grid: StrategyGrid,
                            fixed: SwitchScenario, mixtures: int = 200,
                            seed: int = 0, tol: Tolerances = DEFAULT) -> bool:
    """Sample convex mixtures of the grid measurements and confirm none beats
    the extremal-grid maximum beyond 1e-9."""
    result = optimize_strategy(inequality_id, grid, fixed, tol)
    collapsed = _collapsed_matrices(fixed)
    eff_c_pool = np.array([_measurement_effects(m) for _, m in grid.c_candidates])
    eff_b_pool = np.array([_measurement_effects(m) for _, m in grid.b_candidates])
    rng = np.random.default_rng(seed)
    for _ in range(mixtures):
        wc = rng.dirichlet(np.ones(len(eff_c_pool)))
        wb = rng.dirichlet(np.ones(len(eff_b_pool)))
        eff_c = np.tensordot(wc, eff_c_pool, axes=1)
        eff_b = np.tensordot(wb, eff_b_pool, axes=1)
        dist = table_from_effects(fixed, eff_c, eff_b, tol, collapsed=collapsed)
        total = eval_inequality(dist, inequality_id, tol).total
        if total > result.total_max + 1e-9:
            return False
    return True
