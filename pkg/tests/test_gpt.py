import numpy as np
import pytest
from scipy.spatial import ConvexHull

from gptlab.errors import InputError, InvariantError
from gptlab.gpt import (GptSpace, SuperpositionWitness, find_superposition,
                        hull_distance, in_hull, is_extremal, max_membership,
                        min_tensor, operator_to_gpt, product_superposition_witness,
                        space_from_json, space_to_json, validate_witness)
from gptlab.linalg import SQRT2, phi_plus, phi_pr
from gptlab.spaces import (boxworld_space, classical_bit_space, gbit_space, glt_space,
                           hex_space, space, square_space, _PR_TABLES)

ONE_MINUS_INV_SQRT2 = 1.0 - 1.0 / SQRT2


# ----------------------------------------------------------------------
# hull membership against an independent convex-hull oracle


@pytest.mark.parametrize("seed", range(5))
def test_extremality_matches_qhull(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(12, 3))
    hull_idx = set(ConvexHull(pts).vertices)
    for i in range(len(pts)):
        others = np.delete(pts, i, axis=0)
        assert is_extremal(pts[i], others) == (i in hull_idx)


@pytest.mark.parametrize("seed", range(3))
def test_in_hull_for_interior_mixtures(seed):
    rng = np.random.default_rng(seed + 100)
    pts = rng.normal(size=(10, 4))
    w = rng.dirichlet(np.ones(10))
    assert in_hull(w @ pts, pts)
    far = pts[0] + 10.0 * np.ones(4)
    assert not in_hull(far, pts)
    assert hull_distance(far, pts) > 1.0


def test_hull_distance_empty_set():
    assert hull_distance(np.array([0.0, 0.0]), np.zeros((0, 2))) == float("inf")
    assert not in_hull(np.array([0.0, 0.0]), np.zeros((0, 2)))


def test_duplicate_point_is_not_extremal():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert not is_extremal(pts[1], np.vstack([pts, pts[1:2]]))


# ----------------------------------------------------------------------
# space plumbing


def test_space_json_round_trip():
    hx = hex_space()
    back = space_from_json(space_to_json(hx))
    assert back.label == hx.label
    assert np.allclose(back.states, hx.states)
    assert np.allclose(back.effects, hx.effects)
    assert np.allclose(back.unit, hx.unit)


def test_space_rejects_bad_shapes():
    with pytest.raises(InputError):
        GptSpace("bad", 2, np.ones((2, 3)), np.ones((1, 2)), np.ones(2))


def test_action_matrix_shape():
    g = gbit_space().action_matrix()
    assert g.shape == (6, 4)
    assert np.allclose(g.max(), 1.0)


# ----------------------------------------------------------------------
# tensor products


def test_min_tensor_of_classical_bits_is_two_bit_system():
    c = classical_bit_space()
    prod = min_tensor(c, c)
    assert prod.states.shape == (4, 4)
    # states are exactly the four deterministic pairs
    want = {tuple(np.kron(c.states[i], c.states[j])) for i in range(2) for j in range(2)}
    got = {tuple(s) for s in prod.states}
    assert got == want
    assert np.allclose(prod.unit, np.kron(c.unit, c.unit))


def test_glt_has_sixteen_product_states():
    glt = glt_space()
    assert glt.label == "glt"
    assert glt.states.shape[0] == 16


def test_pr_box_outside_minimal_composite():
    glt = glt_space()
    pr = _PR_TABLES[0].reshape(16)
    assert not in_hull(pr, glt.states)
    assert hull_distance(pr, glt.states) > 0.01


def test_pr_box_inside_maximal_composite():
    g = gbit_space()
    pr = _PR_TABLES[0].reshape(16)
    assert max_membership(pr, g, g)
    assert not max_membership(2.0 * pr, g, g)


def test_phi_pr_membership_split():
    hx, sq = hex_space(), square_space()
    vec = operator_to_gpt(phi_pr())
    assert max_membership(vec, hx, sq)
    assert not in_hull(vec, min_tensor(hx, sq).states)
    # an ordinary entangled quantum state also fits the composite
    assert max_membership(operator_to_gpt(phi_plus()), hx, sq)


# ----------------------------------------------------------------------
# superposition witnesses


@pytest.mark.parametrize("label", ["classical", "gbit", "glt"])
def test_spaces_without_superposition(label):
    assert find_superposition(space(label)) is None
    assert find_superposition(space(label), require_basis=True) is None


def test_hex_witness():
    hx = hex_space()
    w = find_superposition(hx)
    assert (w.s, w.r1, w.r2) == (0, 1, 2)
    assert (w.e_s, w.f_r1, w.f_r2) == (7, 9, 8)
    assert w.values["es_s"] == pytest.approx(1.0, abs=1e-12)
    assert w.values["es_r1"] == pytest.approx(ONE_MINUS_INV_SQRT2, abs=1e-12)
    assert w.values["es_r2"] == pytest.approx(ONE_MINUS_INV_SQRT2, abs=1e-12)
    assert w.values["fr1_s"] == pytest.approx(0.5, abs=1e-12)
    assert w.values["fr2_s"] == pytest.approx(0.5, abs=1e-12)
    validate_witness(hx, w)


def test_hex_witness_with_basis_requirement():
    hx = hex_space()
    w = find_superposition(hx, require_basis=True)
    assert w is not None
    g = hx.action_matrix()
    summed = g[w.f_r1] + g[w.f_r2]
    assert np.allclose(summed, 1.0, atol=1e-9)


def test_boxworld_witness():
    bw = boxworld_space()
    w = find_superposition(bw)
    assert (w.s, w.r1, w.r2) == (0, 2, 3)
    assert (w.e_s, w.f_r1, w.f_r2) == (0, 2, 3)
    for key, v in w.values.items():
        assert v == pytest.approx(1.0 if key in ("es_s", "fr1_r1", "fr2_r2") else 0.5,
                                  abs=1e-12)
    validate_witness(bw, w)


def test_validate_witness_rejects_tampering():
    hx = hex_space()
    w = find_superposition(hx)
    bad = SuperpositionWitness(space_label=w.space_label, s=w.s, r1=w.r1, r2=w.r1,
                               e_s=w.e_s, f_r1=w.f_r1, f_r2=w.f_r2, values=w.values)
    with pytest.raises(InvariantError):
        validate_witness(hx, bad)
    unit_idx = hx.effects.shape[0] - 2
    bad2 = SuperpositionWitness(space_label=w.space_label, s=w.s, r1=w.r1, r2=w.r2,
                                e_s=unit_idx, f_r1=w.f_r1, f_r2=w.f_r2, values=w.values)
    with pytest.raises(InvariantError):
        validate_witness(hx, bad2)


def test_product_witness_lifts_hex_into_composite():
    hx, sq = hex_space(), square_space()
    w = find_superposition(hx)
    pw = product_superposition_witness(hx, sq, w, anchor_state=7, anchor_effect=4)
    prod = min_tensor(hx, sq)
    validate_witness(prod, pw)
    assert np.allclose(prod.states[pw.s], np.kron(hx.states[w.s], sq.states[7]))
    assert np.allclose(prod.effects[pw.e_s], np.kron(hx.effects[w.e_s], sq.effects[4]))
    for key, v in pw.values.items():
        assert v == pytest.approx(w.values[key], abs=1e-12)


def test_product_witness_rejects_loose_anchor():
    hx, sq = hex_space(), square_space()
    w = find_superposition(hx)
    # effect 5 is the opposite projector of the anchor state's supporting family
    with pytest.raises(InputError):
        product_superposition_witness(hx, sq, w, anchor_state=7, anchor_effect=5)
