"""Two-branch coherent-order correlations.

A control qubit (factor C) decides the order in which two intermediate labs
act on a target qubit (factor T); lab B measures the other half of a shared
bipartite operator on C (x) B. Outcome tables are produced for all inputs
(x1, x2) to the intermediate labs, y to lab B and z to lab C.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvariantError
from .linalg import projector, require_hermitian
from .serialize import csv_text
from .tolerances import DEFAULT, Tolerances

AXES = ("x1", "x2", "y", "z", "a1", "a2", "b", "c")

PRESET_NAMES = ("quantum-II.B", "hexsquare-V.A", "hexsquare-V.B", "hexsquare-V.C")


def _require_kets(arr, n: int, what: str, orthonormal: bool,
                  tol: Tolerances) -> np.ndarray:
    arr = np.asarray(arr, dtype=complex)
    if arr.shape != (n, 2):
        raise InputError(f"{what} must be {n} two-component kets, got shape {arr.shape}")
    for i, k in enumerate(arr):
        if abs(np.linalg.norm(k) - 1.0) > tol.norm:
            raise InputError(f"{what}[{i}] is not normalized")
    if orthonormal and n == 2 and abs(np.vdot(arr[0], arr[1])) > tol.norm:
        raise InputError(f"{what} kets are not orthogonal")
    return arr


@dataclass(frozen=True, eq=False)
class LabAOp:
    """An intermediate lab: measures the incoming target in an orthonormal ket
    basis (outcome a) and prepares a fresh ket chosen by its input x."""
    measure: np.ndarray  # (2, 2): rows are the outcome kets
    prepare: np.ndarray  # (2, 2): rows are the preparations

    def __post_init__(self):
        object.__setattr__(self, "measure",
                           _require_kets(self.measure, 2, "measure", True, DEFAULT))
        object.__setattr__(self, "prepare",
                           _require_kets(self.prepare, 2, "prepare", False, DEFAULT))


@dataclass(frozen=True, eq=False)
class LabMeasurement:
    """A two-setting, two-outcome projective measurement given by kets."""
    kets: np.ndarray  # (setting, outcome, amplitude)

    def __post_init__(self):
        arr = np.asarray(self.kets, dtype=complex)
        if arr.shape != (2, 2, 2):
            raise InputError(f"measurement kets must have shape (2,2,2), got {arr.shape}")
        for s in range(2):
            _require_kets(arr[s], 2, f"setting {s}", True, DEFAULT)
        object.__setattr__(self, "kets", arr)

    def effect(self, setting: int, outcome: int) -> np.ndarray:
        return projector(self.kets[setting, outcome])


@dataclass(frozen=True, eq=False)
class SwitchScenario:
    label: str
    control_basis: np.ndarray      # (2, 2): order-branch kets on C
    shared: np.ndarray             # (4, 4) Hermitian, unit trace, on C (x) B
    target_init: np.ndarray        # (2,) ket fed to whichever lab acts first
    lab_a1: LabAOp
    lab_a2: LabAOp
    lab_c: LabMeasurement          # setting z, outcome c
    lab_b: LabMeasurement          # setting y, outcome b
    post_process: np.ndarray | None = None  # c = table[x1,x2,y,z,a1,a2,b,c_raw]
    local_spaces: tuple[str, str] | None = None  # space labels for (C, B) factors

    def __post_init__(self):
        object.__setattr__(self, "control_basis",
                           _require_kets(self.control_basis, 2, "control_basis", True, DEFAULT))
        shared = require_hermitian(self.shared, DEFAULT, "shared state")
        if shared.shape != (4, 4):
            raise InputError("shared state must be 4x4")
        if abs(np.trace(shared).real - 1.0) > DEFAULT.norm:
            raise InputError("shared state must have unit trace")
        object.__setattr__(self, "shared", shared)
        t = np.asarray(self.target_init, dtype=complex).reshape(-1)
        if t.shape != (2,) or abs(np.linalg.norm(t) - 1.0) > DEFAULT.norm:
            raise InputError("target_init must be a normalized 2-component ket")
        object.__setattr__(self, "target_init", t)
        if self.post_process is not None:
            pp = np.asarray(self.post_process, dtype=np.int64)
            if pp.shape != (2,) * 8 or not np.isin(pp, (0, 1)).all():
                raise InputError("post_process must be a (2,)*8 table of 0/1")
            object.__setattr__(self, "post_process", pp)


@dataclass(frozen=True, eq=False)
class ConditionalDistribution:
    """p(a1, a2, b, c | x1, x2, y, z) as a (2,)*8 table indexed by AXES order."""
    table: np.ndarray
    clamped: int = 0  # entries in [-tol, 0) snapped to zero


def wiring_from_function(fn) -> np.ndarray:
    """Tabulate c = fn(x1, x2, y, z, a1, a2, b, c_raw) over all 256 tuples."""
    out = np.zeros((2,) * 8, dtype=np.int64)
    for idx in itertools.product((0, 1), repeat=8):
        v = int(fn(*idx))
        if v not in (0, 1):
            raise InputError(f"wiring returned {v!r}, expected 0 or 1")
        out[idx] = v
    return out


# ======================================================================
# Engine
# ======================================================================


def _branch_ops(scn: SwitchScenario, x1: int, x2: int, a1: int, a2: int):
    """Target-factor operators for the two orderings.

    First-lab-A1 branch: |p2_x2> <m2_a2|p1_x1> <m1_a1|; the other branch swaps
    the roles of the two intermediate labs.
    """
    m1, p1 = scn.lab_a1.measure, scn.lab_a1.prepare
    m2, p2 = scn.lab_a2.measure, scn.lab_a2.prepare
    t0 = np.outer(p2[x2], m1[a1].conj()) * np.vdot(m2[a2], p1[x1])
    t1 = np.outer(p1[x1], m2[a2].conj()) * np.vdot(m1[a1], p2[x2])
    return t0, t1


def _order_operator(scn: SwitchScenario, x1: int, x2: int, a1: int, a2: int) -> np.ndarray:
    t0, t1 = _branch_ops(scn, x1, x2, a1, a2)
    pi0 = projector(scn.control_basis[0])
    pi1 = projector(scn.control_basis[1])
    eye_b = np.eye(2, dtype=complex)
    return np.kron(pi0, np.kron(eye_b, t0)) + np.kron(pi1, np.kron(eye_b, t1))


def build_K(scn: SwitchScenario, a1: int, a2: int, b: int, c: int,
            x1: int, x2: int, y: int, z: int) -> np.ndarray:
    """Kernel mapping C (x) B (x) T into T for one outcome/input tuple;
    the probability is Tr[K rho K^dagger] with rho = shared (x) target."""
    w = _order_operator(scn, x1, x2, a1, a2)
    bra = np.kron(scn.lab_c.kets[z, c].conj(),
                  scn.lab_b.kets[y, b].conj()).reshape(1, 4)
    return np.kron(bra, np.eye(2, dtype=complex)) @ w


def _collapsed_matrices(scn: SwitchScenario) -> np.ndarray:
    """For each (x1, x2, a1, a2): the C (x) B operator left after the target
    factor of W rho W^dagger is traced out."""
    rho = np.kron(scn.shared, projector(scn.target_init))
    out = np.empty((2, 2, 2, 2, 4, 4), dtype=complex)
    for x1, x2, a1, a2 in itertools.product((0, 1), repeat=4):
        w = _order_operator(scn, x1, x2, a1, a2)
        m = (w @ rho @ w.conj().T).reshape(2, 2, 2, 2, 2, 2)
        out[x1, x2, a1, a2] = np.einsum("abtcdt->abcd", m).reshape(4, 4)
    return out


def _measurement_effects(meas: LabMeasurement) -> np.ndarray:
    out = np.empty((2, 2, 2, 2), dtype=complex)
    for s, o in itertools.product((0, 1), repeat=2):
        out[s, o] = meas.effect(s, o)
    return out


def _assemble(n_mats: np.ndarray, eff_c: np.ndarray, eff_b: np.ndarray) -> np.ndarray:
    # Tr[(E (x) F) N] with N's 4x4 indices split into C and B factor pairs:
    # kron(E, F)[(i,j),(k,l)] = E[i,k] F[j,l], traced against N[(k,l),(i,j)].
    nr = n_mats.reshape((2,) * 8)
    table = np.einsum("zcik,ybjl,mnopklij->mnyzopbc", eff_c, eff_b, nr)
    return np.ascontiguousarray(table.real)


def _raw_table(scn: SwitchScenario) -> np.ndarray:
    return _assemble(_collapsed_matrices(scn),
                     _measurement_effects(scn.lab_c),
                     _measurement_effects(scn.lab_b))


def _check_effect_family(eff: np.ndarray, what: str, tol: Tolerances) -> np.ndarray:
    eff = np.asarray(eff, dtype=complex)
    if eff.shape != (2, 2, 2, 2):
        raise InputError(f"{what} must have shape (setting, outcome, 2, 2)")
    for s in (0, 1):
        for o in (0, 1):
            require_hermitian(eff[s, o], tol, f"{what}[{s},{o}]")
        if np.abs(eff[s, 0] + eff[s, 1] - np.eye(2)).max() > tol.norm:
            raise InputError(f"{what} setting {s} does not sum to the identity")
    return eff


def table_from_effects(scn: SwitchScenario, eff_c: np.ndarray, eff_b: np.ndarray,
                       tol: Tolerances = DEFAULT,
                       collapsed: np.ndarray | None = None) -> ConditionalDistribution:
    """Like switch_distribution, but with explicit (possibly non-projective)
    binary effect pairs for labs C and B. `collapsed` lets callers reuse
    _collapsed_matrices output when sweeping many effect choices."""
    eff_c = _check_effect_family(eff_c, "lab C effects", tol)
    eff_b = _check_effect_family(eff_b, "lab B effects", tol)
    if collapsed is None:
        collapsed = _collapsed_matrices(scn)
    table = _assemble(collapsed, eff_c, eff_b)
    if scn.post_process is not None:
        table = _apply_wiring(table, scn.post_process)
    table, clamped = _clamp_and_check(table, tol)
    _check_no_signalling(table, tol)
    return ConditionalDistribution(table=table, clamped=clamped)


def _apply_wiring(table: np.ndarray, wiring: np.ndarray) -> np.ndarray:
    out = np.zeros_like(table)
    for idx in itertools.product((0, 1), repeat=8):
        c_out = wiring[idx]
        out[idx[:7] + (c_out,)] += table[idx]
    return out


def _clamp_and_check(table: np.ndarray, tol: Tolerances) -> tuple[np.ndarray, int]:
    worst = table.min()
    if worst < -tol.prob:
        raise InvariantError(f"probability {float(worst):.6g} is negative beyond {tol.prob:g}; "
                             "the scenario leaves the declared theory")
    mask = table < 0.0
    clamped = int(mask.sum())
    table = np.where(mask, 0.0, table)
    sums = table.sum(axis=(4, 5, 6, 7))
    dev = np.abs(sums - 1.0).max()
    if dev > tol.prob:
        raise InvariantError(f"per-setting outcome sums deviate from 1 by {dev:g}")
    return table, clamped


def _check_no_signalling(table: np.ndarray, tol: Tolerances) -> None:
    # lab-B marginal must not depend on (x1, x2, z)
    marg_b = table.sum(axis=(4, 5, 7))  # [x1, x2, y, z, b]
    dev = (marg_b.max(axis=(0, 1, 3)) - marg_b.min(axis=(0, 1, 3)))  # [y, b]
    if dev.max() > tol.prob:
        y, b = np.unravel_index(int(dev.argmax()), dev.shape)
        raise InvariantError(
            f"signalling to lab B: p(b={b}|y={y}) varies with (x1,x2,z) by {dev.max():g}")
    # everyone-else marginal must not depend on y
    marg_ac = table.sum(axis=6)  # [x1, x2, y, z, a1, a2, c]
    dev2 = np.abs(marg_ac[:, :, 0] - marg_ac[:, :, 1])
    if dev2.max() > tol.prob:
        flat = np.unravel_index(int(dev2.argmax()), dev2.shape)
        x1, x2, z, a1, a2, c = flat
        raise InvariantError(
            f"signalling from lab B: p(a1={a1},a2={a2},c={c}|x1={x1},x2={x2},z={z}) "
            f"varies with y by {dev2.max():g}")


def switch_distribution(scn: SwitchScenario, tol: Tolerances = DEFAULT) -> ConditionalDistribution:
    """Full outcome table for the scenario, wiring applied, invariants enforced."""
    table = _raw_table(scn)
    if scn.post_process is not None:
        table = _apply_wiring(table, scn.post_process)
    table, clamped = _clamp_and_check(table, tol)
    _check_no_signalling(table, tol)
    return ConditionalDistribution(table=table, clamped=clamped)


def distribution_csv(dist: ConditionalDistribution) -> str:
    rows = []
    for idx in itertools.product((0, 1), repeat=8):
        rows.append(list(idx) + [float(dist.table[idx])])
    return csv_text(list(AXES) + ["p"], rows)


# ======================================================================
# Reductions and two-party tables
# ======================================================================


def identity_reduction_check(scn: SwitchScenario, tol: Tolerances = DEFAULT) -> bool:
    """At x1 = x2 = 0 the intermediate labs should act as the identity channel:
    both outcomes are forced and lab C / lab B measure the shared state directly.

    Preconditions: both labs' x=0 preparation matches target_init up to phase
    and the target is measured deterministically. Output wirings are ignored;
    the comparison concerns the raw lab outcomes.
    """
    t = scn.target_init
    det_outcomes = []
    for lab, name in ((scn.lab_a1, "lab_a1"), (scn.lab_a2, "lab_a2")):
        if abs(abs(np.vdot(lab.prepare[0], t)) - 1.0) > tol.norm:
            raise InputError(f"{name} preparation at x=0 does not match target_init")
        overlaps = np.abs(lab.measure @ t.conj())
        a_star = int(np.argmax(overlaps))
        if abs(overlaps[a_star] - 1.0) > tol.norm:
            raise InputError(f"{name} does not measure target_init deterministically")
        det_outcomes.append(a_star)
    a1_star, a2_star = det_outcomes

    raw = _raw_table(scn)
    for y, z, a1, a2, b, c in itertools.product((0, 1), repeat=6):
        want = 0.0
        if (a1, a2) == (a1_star, a2_star):
            eff = np.kron(scn.lab_c.effect(z, c), scn.lab_b.effect(y, b))
            want = float(np.trace(eff @ scn.shared).real)
        if abs(raw[0, 0, y, z, a1, a2, b, c] - want) > tol.prob:
            return False
    return True


def bell_distribution(shared: np.ndarray, meas_c: LabMeasurement,
                      meas_b: LabMeasurement, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Two-party table p[z, y, c, b] = Tr[(E_c|z (x) F_b|y) shared]."""
    shared = require_hermitian(shared, tol, "shared state")
    if shared.shape != (4, 4):
        raise InputError("shared state must be 4x4")
    table = np.empty((2, 2, 2, 2), dtype=float)
    for z, y, c, b in itertools.product((0, 1), repeat=4):
        eff = np.kron(meas_c.effect(z, c), meas_b.effect(y, b))
        table[z, y, c, b] = float(np.trace(eff @ shared).real)
    worst = table.min()
    if worst < -tol.prob:
        raise InvariantError(f"probability {float(worst):.6g} is negative beyond {tol.prob:g}")
    table = np.where(table < 0.0, 0.0, table)
    sums = table.sum(axis=(2, 3))
    if np.abs(sums - 1.0).max() > tol.prob:
        raise InvariantError("two-party table does not normalize per setting")
    if (np.abs(table.sum(axis=3)[:, 0] - table.sum(axis=3)[:, 1]).max() > tol.prob
            or np.abs(table.sum(axis=2)[0] - table.sum(axis=2)[1]).max() > tol.prob):
        raise InvariantError("two-party table signals between the parties")
    return table


def bell_matrix(table: np.ndarray) -> np.ndarray:
    """Reshape p[z, y, c, b] to the printed layout: rows (z, c), columns (y, b)."""
    return table.transpose(0, 2, 1, 3).reshape(4, 4)
