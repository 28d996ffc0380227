"""Built-in example spaces: classical bit, gbit, gbit pairs, deterministic-wiring
box-world fixture, the cube and tilted-hexagon qubit-like spaces, and restricted
qubit projector sets."""
from __future__ import annotations

import dataclasses
import itertools

import numpy as np

from .errors import InputError
from .gpt import GptSpace, min_tensor, operator_to_gpt
from .linalg import R_HEX, SQRT2, bloch_to_operator, pauli, projector
from .polytope import enumerate_vertices, facets_from_effects
from .tolerances import DEFAULT, Tolerances

# Binary observables usable as measurement labels throughout the package.
# "A+B" means (sigma_A + sigma_B)/sqrt2; all have eigenvalues +-1.
OBSERVABLES: dict[str, np.ndarray] = {
    "X": pauli("X"),
    "Y": pauli("Y"),
    "Z": pauli("Z"),
    "X+Z": (pauli("X") + pauli("Z")) / SQRT2,
    "X-Z": (pauli("X") - pauli("Z")) / SQRT2,
    "X+Y": (pauli("X") + pauli("Y")) / SQRT2,
    "X-Y": (pauli("X") - pauli("Y")) / SQRT2,
}


def observable_kets(name: str) -> tuple[np.ndarray, np.ndarray]:
    """Eigenkets (plus, minus) of a named observable, with the phase fixed so
    the first nonvanishing amplitude is real positive."""
    try:
        op = OBSERVABLES[name]
    except KeyError:
        raise InputError(f"unknown observable {name!r}") from None
    vals, vecs = np.linalg.eigh(op)

    def fix(v: np.ndarray) -> np.ndarray:
        idx = np.flatnonzero(np.abs(v) > 1e-12)[0]
        return v * np.exp(-1j * np.angle(v[idx]))

    plus = fix(vecs[:, int(np.argmax(vals))])
    minus = fix(vecs[:, int(np.argmin(vals))])
    return plus, minus


# ======================================================================
# Table-valued theories
# ======================================================================


def classical_bit_space() -> GptSpace:
    states = np.array([[1.0, 0.0], [0.0, 1.0]])
    effects = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    return GptSpace("classical", 2, states, effects, np.array([1.0, 1.0]))


def gbit_space() -> GptSpace:
    """Single system with two binary inputs; vectors list
    (p(0|0), p(1|0), p(0|1), p(1|1))."""
    states = np.array([
        [1, 0, 1, 0],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 0, 1],
    ], dtype=float)
    effects = np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [0, 0, 0, 0],
        [1, 1, 0, 0],
    ], dtype=float)
    return GptSpace("gbit", 4, states, effects, np.array([1.0, 1.0, 0.0, 0.0]))


def glt_space(tol: Tolerances = DEFAULT) -> GptSpace:
    g = gbit_space()
    return dataclasses.replace(min_tensor(g, g, tol), label="glt")


# Bipartite no-signalling tables, rows (x, a) and columns (y, b), flattened
# row-major so the dot product is the elementwise multiply-sum.
_PR_TABLES = 0.5 * np.array([
    [[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]],  # a+b = xy
    [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]],  # a+b = xy+1
    [[1, 0, 0, 1], [0, 1, 1, 0], [1, 0, 1, 0], [0, 1, 0, 1]],  # a+b = (x+1)y
    [[0, 1, 1, 0], [1, 0, 0, 1], [0, 1, 0, 1], [1, 0, 1, 0]],  # a+b = (x+1)y+1
], dtype=float)

_BW_EFFECTS = np.array([
    [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
], dtype=float)


def boxworld_space() -> GptSpace:
    """Four extremal no-signalling boxes and four deterministic-wiring effects.

    The unit is the first two effects' sum; it evaluates to 1 on every
    no-signalling table. Complements of the remaining effects differ from
    listed effects as raw tables but act identically on all four states.
    """
    states = _PR_TABLES.reshape(4, 16)
    unit = (_BW_EFFECTS[0] + _BW_EFFECTS[1]).reshape(16)
    effects = np.vstack([
        _BW_EFFECTS.reshape(4, 16),
        np.zeros((1, 16)),
        unit[None, :],
    ])
    return GptSpace("boxworld-III", 16, states, effects, unit)


# ======================================================================
# Qubit-embedded spaces (4-dim Hermitian embedding)
# ======================================================================

_SQUARE_FAMILIES = ["X", "Y", "Z"]
_HEX_FAMILIES = ["X+Z", "X-Z", "X+Y", "X-Y", "Z"]


def _projector_effects(families: list[str]) -> tuple[list[np.ndarray], list[str]]:
    ops, labels = [], []
    for name in families:
        plus, minus = observable_kets(name)
        ops.append(projector(plus))
        labels.append(f"({name})+")
        ops.append(projector(minus))
        labels.append(f"({name})-")
    return ops, labels


def square_effect_operators() -> tuple[list[np.ndarray], list[str]]:
    return _projector_effects(_SQUARE_FAMILIES)


def hex_effect_operators() -> tuple[list[np.ndarray], list[str]]:
    return _projector_effects(_HEX_FAMILIES)


def _space_from_projectors(label: str, ops: list[np.ndarray],
                           tol: Tolerances) -> GptSpace:
    ineqs = facets_from_effects(ops, tol=tol)
    vertices = enumerate_vertices(ineqs, tol).vertices
    states = np.array([operator_to_gpt(bloch_to_operator(v), tol) for v in vertices])
    unit = operator_to_gpt(pauli("I"), tol)
    effect_vecs = [operator_to_gpt(e, tol) for e in ops]
    effect_vecs.append(unit)
    effect_vecs.append(np.zeros(4))
    return GptSpace(label, 4, states, np.array(effect_vecs), unit)


def square_space(tol: Tolerances = DEFAULT) -> GptSpace:
    """State space cut out by the X/Y/Z projector effects: the +-1 cube."""
    return _space_from_projectors("square", square_effect_operators()[0], tol)


def hex_space(tol: Tolerances = DEFAULT) -> GptSpace:
    """State space cut out by the X+-Z, X+-Y and Z projector effects: a prism
    over a tilted hexagon, with 14 extremal states."""
    return _space_from_projectors("hex", hex_effect_operators()[0], tol)


def qubit_space(families: tuple[str, ...] = ("X", "Y", "Z", "X+Z", "X-Z", "X+Y", "X-Y"),
                tol: Tolerances = DEFAULT) -> GptSpace:
    """Qubit fragment restricted to the projectors of the named observables."""
    ops, _ = _projector_effects(list(families))
    states = np.array([operator_to_gpt(e, tol) for e in ops])
    unit = operator_to_gpt(pauli("I"), tol)
    effects = np.vstack([states, unit[None, :], np.zeros((1, 4))])
    return GptSpace("qubit", 4, states, effects, unit)


def reference_vertices(label: str) -> np.ndarray | None:
    """Expected extremal Bloch vectors for the named space, or None when no
    closed-form list is built in. Used to diff enumeration output."""
    if label == "hex":
        rows = [(s * SQRT2, 0.0, 0.0) for s in (1, -1)]
        rows += [(0.0, s * SQRT2, float(t)) for s in (1, -1) for t in (1, -1)]
        rows += [(s * R_HEX, float(u), float(t))
                 for s in (1, -1) for u in (1, -1) for t in (1, -1)]
        return np.array(rows, dtype=float)
    if label == "square":
        return np.array(list(itertools.product((1.0, -1.0), repeat=3)))
    return None


SPACE_BUILDERS = {
    "classical": classical_bit_space,
    "gbit": gbit_space,
    "glt": glt_space,
    "boxworld-III": boxworld_space,
    "square": square_space,
    "hex": hex_space,
    "qubit": qubit_space,
}


def space(label: str) -> GptSpace:
    try:
        return SPACE_BUILDERS[label]()
    except KeyError:
        known = ", ".join(sorted(SPACE_BUILDERS))
        raise InputError(f"unknown space {label!r}; known: {known}") from None
