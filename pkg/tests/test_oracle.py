import math

import pytest
from hypothesis import given, strategies as st

from chronospin.oracle import (JointDistribution, qm_conditional, qm_correlation,
                               qm_single_spin, qm_singlet_joint)
from chronospin.stats import PAIR_CELLS

from oracles import qm_joint


def test_single_spin():
    p_up, p_down = qm_single_spin()
    assert (p_up, p_down) == (0.5, 0.5)
    assert p_up + p_down == 1.0
    assert p_up - p_down == 0.0


def test_joint_at_zero():
    j = qm_singlet_joint(0.0)
    assert j.probabilities == {"up_up": 0.0, "up_down": 0.5, "down_up": 0.5, "down_down": 0.0}


def test_joint_at_pi():
    j = qm_singlet_joint(math.pi)
    assert j["up_up"] == pytest.approx(0.5) and j["down_down"] == pytest.approx(0.5)
    assert j["up_down"] == pytest.approx(0.0, abs=1e-16)


def test_joint_at_quarter_turn():
    j = qm_singlet_joint(math.pi / 2)
    for cell in PAIR_CELLS:
        assert j[cell] == pytest.approx(0.25, abs=1e-15)


@given(st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_joint_matches_matrix_oracle(phi):
    got = qm_singlet_joint(phi)
    want = qm_joint(phi)
    for cell in PAIR_CELLS:
        assert got[cell] == pytest.approx(want[cell], abs=1e-12)


@given(st.floats(min_value=0, max_value=2 * math.pi))
def test_joint_sums_to_one_and_reflection_symmetric(phi):
    j = qm_singlet_joint(phi)
    assert abs(sum(j.as_tuple()) - 1) <= 1e-12
    mirrored = qm_singlet_joint(2 * math.pi - phi)
    for cell in PAIR_CELLS:
        assert j[cell] == pytest.approx(mirrored[cell], abs=1e-12)


@pytest.mark.parametrize("phi, e", [(0.0, -1.0), (math.pi / 2, 0.0), (math.pi, 1.0)])
def test_correlation_values(phi, e):
    assert qm_correlation(phi) == pytest.approx(e, abs=1e-15)


@given(st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_correlation_is_signed_sum_and_minus_cos(phi):
    want = qm_joint(phi)
    signed = want["up_up"] + want["down_down"] - want["up_down"] - want["down_up"]
    assert qm_correlation(phi) == pytest.approx(signed, abs=1e-12)
    assert qm_correlation(phi) == pytest.approx(-math.cos(phi), abs=1e-12)


def test_conditional_is_cos_squared():
    assert qm_conditional(math.pi / 3) == pytest.approx(math.cos(math.pi / 6) ** 2)
    assert qm_conditional(math.pi / 3) == pytest.approx(0.75)


def test_joint_distribution_validates():
    with pytest.raises(ValueError):
        JointDistribution({"up_up": 1.0, "up_down": 0.5, "down_up": 0.0, "down_down": 0.0}, 0.0)
