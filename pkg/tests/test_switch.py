import dataclasses
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptlab.errors import InputError, InvariantError
from gptlab.linalg import (KET_0, KET_1, KET_MINUS, KET_PLUS, SQRT2, phi_minus,
                           phi_plus, phi_pr, projector)
from gptlab.presets import load_preset, scenario_from_json, scenario_to_json
from gptlab.switch import (AXES, LabAOp, LabMeasurement, PRESET_NAMES,
                           SwitchScenario, bell_distribution, bell_matrix, build_K,
                           distribution_csv, identity_reduction_check,
                           switch_distribution, table_from_effects,
                           wiring_from_function)

COMP = np.array([KET_0, KET_1])
XBASIS = np.array([KET_PLUS, KET_MINUS])

EPS_P = (2.0 + SQRT2) / 8.0
EPS_M = (2.0 - SQRT2) / 8.0
# rows (z, c), columns (y, b)
BELL_REFERENCE = np.array([
    [EPS_P, EPS_M, 0.5, 0.0],
    [EPS_M, EPS_P, 0.0, 0.5],
    [EPS_P, EPS_M, 0.0, 0.5],
    [EPS_M, EPS_P, 0.5, 0.0],
])


def comp_lab() -> LabAOp:
    return LabAOp(measure=COMP, prepare=COMP)


def comp_meas() -> LabMeasurement:
    return LabMeasurement(np.array([COMP, XBASIS]))


def plain_scenario(shared, label="test") -> SwitchScenario:
    return SwitchScenario(label=label, control_basis=COMP, shared=shared,
                          target_init=KET_0, lab_a1=comp_lab(), lab_a2=comp_lab(),
                          lab_c=comp_meas(), lab_b=comp_meas())


# ----------------------------------------------------------------------
# construction and validation


def test_lab_measure_kets_must_be_orthonormal():
    with pytest.raises(InputError):
        LabAOp(measure=np.array([KET_0, KET_PLUS]), prepare=COMP)


def test_lab_prepare_kets_need_not_be_orthogonal():
    LabAOp(measure=COMP, prepare=np.array([KET_0, KET_PLUS]))


def test_measurement_shape_checked():
    with pytest.raises(InputError):
        LabMeasurement(np.array([COMP]))


def test_scenario_rejects_traceless_shared():
    with pytest.raises(InputError):
        plain_scenario(np.eye(4, dtype=complex))


def test_scenario_rejects_small_shared():
    with pytest.raises(InputError):
        plain_scenario(np.eye(2, dtype=complex) / 2.0)


def test_scenario_rejects_unnormalized_target():
    with pytest.raises(InputError):
        SwitchScenario(label="bad", control_basis=COMP, shared=phi_plus(),
                       target_init=np.array([1.0, 1.0]), lab_a1=comp_lab(),
                       lab_a2=comp_lab(), lab_c=comp_meas(), lab_b=comp_meas())


def test_scenario_rejects_bad_wiring_table():
    with pytest.raises(InputError):
        SwitchScenario(label="bad", control_basis=COMP, shared=phi_plus(),
                       target_init=KET_0, lab_a1=comp_lab(), lab_a2=comp_lab(),
                       lab_c=comp_meas(), lab_b=comp_meas(),
                       post_process=np.zeros((2,) * 7, dtype=np.int64))


def test_wiring_from_function_rejects_non_binary():
    with pytest.raises(InputError):
        wiring_from_function(lambda *idx: 2)


def test_wiring_from_function_tabulates():
    w = wiring_from_function(lambda x1, x2, y, z, a1, a2, b, c_raw: a1 if x2 else c_raw)
    assert w.shape == (2,) * 8
    assert w[0, 0, 0, 0, 1, 0, 0, 1] == 1  # x2=0 passes c_raw through
    assert w[0, 1, 0, 0, 1, 0, 0, 0] == 1  # x2=1 substitutes a1


# ----------------------------------------------------------------------
# engine cross-check: assembled table vs explicit kernels


def test_table_matches_kernel_route():
    scn = load_preset("quantum-II.B")
    rho = np.kron(scn.shared, projector(scn.target_init))
    dist = switch_distribution(scn)
    for idx in itertools.product((0, 1), repeat=8):
        x1, x2, y, z, a1, a2, b, c = idx
        k = build_K(scn, a1, a2, b, c, x1, x2, y, z)
        p = float(np.trace(k @ rho @ k.conj().T).real)
        assert dist.table[idx] == pytest.approx(p, abs=1e-12)


def test_table_from_effects_matches_projective_route():
    scn = load_preset("quantum-II.B")
    eff_c = np.array([[scn.lab_c.effect(z, c) for c in (0, 1)] for z in (0, 1)])
    eff_b = np.array([[scn.lab_b.effect(y, b) for b in (0, 1)] for y in (0, 1)])
    d1 = switch_distribution(scn)
    d2 = table_from_effects(scn, eff_c, eff_b)
    assert np.allclose(d1.table, d2.table, atol=1e-12)


def test_table_from_effects_validates_completeness():
    scn = load_preset("quantum-II.B")
    eff = np.array([[np.eye(2) / 2, np.eye(2) / 2]] * 2)
    bad = eff.copy()
    bad[0, 1] = np.eye(2)
    with pytest.raises(InputError):
        table_from_effects(scn, bad, eff)


# ----------------------------------------------------------------------
# physical sanity on a definite-order configuration


def test_definite_order_branch_zero():
    shared = np.kron(projector(KET_0), np.eye(2, dtype=complex) / 2.0)
    dist = switch_distribution(plain_scenario(shared))
    t = dist.table
    for x1, x2 in itertools.product((0, 1), repeat=2):
        block = t[x1, x2]  # [y, z, a1, a2, b, c]
        # first lab sees the fresh target |0>, second lab sees |x1>
        assert block.sum(axis=(0, 1, 3, 4, 5))[0] == pytest.approx(4.0, abs=1e-9)
        a2_marg = block.sum(axis=(0, 1, 2, 4, 5))
        assert a2_marg[x1] == pytest.approx(4.0, abs=1e-9)


def test_definite_order_branch_one():
    shared = np.kron(projector(KET_1), np.eye(2, dtype=complex) / 2.0)
    dist = switch_distribution(plain_scenario(shared))
    t = dist.table
    for x1, x2 in itertools.product((0, 1), repeat=2):
        block = t[x1, x2]
        # roles swap: the second lab acts first
        a2_marg = block.sum(axis=(0, 1, 2, 4, 5))
        assert a2_marg[0] == pytest.approx(4.0, abs=1e-9)
        a1_marg = block.sum(axis=(0, 1, 3, 4, 5))
        assert a1_marg[x2] == pytest.approx(4.0, abs=1e-9)


def test_swapping_labs_and_control_relabels_the_table():
    scn = load_preset("quantum-II.B")
    swapped = dataclasses.replace(scn, lab_a1=scn.lab_a2, lab_a2=scn.lab_a1,
                                  control_basis=scn.control_basis[::-1])
    a = switch_distribution(scn).table
    b = switch_distribution(swapped).table
    assert np.allclose(b.transpose(1, 0, 2, 3, 5, 4, 6, 7), a, atol=1e-12)


# ----------------------------------------------------------------------
# invariant enforcement


def test_unphysical_effects_on_pr_operator_are_caught():
    scn = plain_scenario(phi_pr())
    xmeas = LabMeasurement(np.array([XBASIS, XBASIS]))
    scn = dataclasses.replace(scn, lab_c=xmeas, lab_b=xmeas)
    with pytest.raises(InvariantError, match="leaves the declared theory"):
        switch_distribution(scn)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_random_quantum_scenarios_are_no_signalling(seed):
    rng = np.random.default_rng(seed)

    def basis():
        q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        return q.T.copy()

    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    shared = m @ m.conj().T
    shared /= np.trace(shared).real

    scn = SwitchScenario(
        label="random", control_basis=basis(), shared=shared,
        target_init=basis()[0], lab_a1=LabAOp(measure=basis(), prepare=basis()),
        lab_a2=LabAOp(measure=basis(), prepare=basis()),
        lab_c=LabMeasurement(np.array([basis(), basis()])),
        lab_b=LabMeasurement(np.array([basis(), basis()])))
    dist = switch_distribution(scn)
    assert dist.table.min() >= 0.0
    assert np.allclose(dist.table.sum(axis=(4, 5, 6, 7)), 1.0, atol=1e-9)


# ----------------------------------------------------------------------
# reductions and two-party tables


def test_identity_reduction_on_presets():
    assert identity_reduction_check(load_preset("hexsquare-V.A"))
    assert identity_reduction_check(load_preset("hexsquare-V.C"))
    assert identity_reduction_check(load_preset("quantum-II.B"))


def test_identity_reduction_precondition():
    scn = load_preset("hexsquare-V.A")
    flipped = dataclasses.replace(scn, target_init=scn.lab_a1.prepare[1])
    with pytest.raises(InputError):
        identity_reduction_check(flipped)


def test_bell_table_from_pr_operator():
    scn = load_preset("hexsquare-V.A")
    table = bell_distribution(phi_pr(), scn.lab_c, scn.lab_b)
    assert np.allclose(bell_matrix(table), BELL_REFERENCE, atol=1e-12)


def test_switch_marginal_reproduces_bell_table():
    scn = load_preset("hexsquare-V.A")
    dist = switch_distribution(scn)
    marg = dist.table[0, 0].sum(axis=(2, 3))      # [y, z, b, c]
    table = marg.transpose(1, 0, 3, 2)            # [z, y, c, b]
    assert np.allclose(bell_matrix(table), BELL_REFERENCE, atol=1e-9)


def test_pr_table_is_affine_in_the_shared_operator():
    scn = load_preset("hexsquare-V.A")
    t_pr = bell_distribution(phi_pr(), scn.lab_c, scn.lab_b)
    t_p = bell_distribution(phi_plus(), scn.lab_c, scn.lab_b)
    t_m = bell_distribution(phi_minus(), scn.lab_c, scn.lab_b)
    combo = 0.5 * (1.0 + SQRT2) * t_p + 0.5 * (1.0 - SQRT2) * t_m
    assert np.allclose(t_pr, combo, atol=1e-9)


def test_bell_distribution_rejects_unphysical_pairing():
    xmeas = LabMeasurement(np.array([XBASIS, XBASIS]))
    with pytest.raises(InvariantError):
        bell_distribution(phi_pr(), xmeas, xmeas)


def test_effective_readout_of_wired_preset():
    # with x2 = 1 the wiring substitutes a1 for c, so (a1, b) is distributed
    # as a direct two-party measurement of the shared operator
    scn = load_preset("hexsquare-V.B")
    dist = switch_distribution(scn)
    for x1, y, z in itertools.product((0, 1), repeat=3):
        marg = dist.table[x1, 1, y, z].sum(axis=(1, 3))  # [a1, b]
        for a1, b in itertools.product((0, 1), repeat=2):
            eff = np.kron(projector(scn.control_basis[a1]), scn.lab_b.effect(y, b))
            want = float(np.trace(eff @ scn.shared).real)
            assert marg[a1, b] == pytest.approx(want, abs=1e-9)


# ----------------------------------------------------------------------
# serialization


def test_distribution_csv_layout():
    dist = switch_distribution(load_preset("quantum-II.B"))
    text = distribution_csv(dist)
    lines = text.strip().split("\n")
    assert lines[0] == "x1,x2,y,z,a1,a2,b,c,p"
    assert len(lines) == 257
    total = sum(float(line.split(",")[-1]) for line in lines[1:])
    assert total == pytest.approx(16.0, abs=1e-9)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_preset_round_trips_through_json(name):
    scn = load_preset(name)
    back = scenario_from_json(scenario_to_json(scn))
    assert back.label == scn.label
    assert np.allclose(back.shared, scn.shared)
    assert np.allclose(back.lab_b.kets, scn.lab_b.kets)
    if scn.post_process is None:
        assert back.post_process is None
    else:
        assert (back.post_process == scn.post_process).all()
    assert back.local_spaces == scn.local_spaces
    assert np.allclose(switch_distribution(back).table,
                       switch_distribution(scn).table, atol=1e-12)


def test_unknown_preset_name():
    with pytest.raises(InputError):
        load_preset("quantum-nope")
