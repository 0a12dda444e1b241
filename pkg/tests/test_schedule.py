"""Schedule semantics: operator ordering, canonicalization, evaluation."""

import numpy as np
import pytest

from hamrc import (
    Drift,
    InvalidTerm,
    LocalLayer,
    PauliString,
    Schedule,
    TooLarge,
    build_expansion,
    canonicalize,
    dense_of_expansion,
    dense_of_pauli,
    distance,
    evaluate_schedule,
    expm_hermitian,
    unitarity_defect,
)

HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def test_layer_validates_factors():
    with pytest.raises(InvalidTerm):
        LocalLayer({0: np.eye(3)})
    with pytest.raises(InvalidTerm):
        LocalLayer({0: np.array([[1.0, 0.0], [0.0, 2.0]])})


def test_instruction_list_is_operator_ordered(sample_drift):
    # [U, drift(t), U^dag] must evaluate to exp(-i t U H U^dag)
    layer = LocalLayer({0: HAD, 1: HAD})
    sched = Schedule(
        2, (layer, Drift(0.3), layer.dagger())
    )
    got = evaluate_schedule(sched, sample_drift)
    h = dense_of_expansion(sample_drift)
    u = layer.dense(2)
    want = expm_hermitian(u @ h @ u.conj().T, 0.3)
    assert distance(want, got, phase_align=False) < 1e-12


def test_last_instruction_acts_first_on_states(sample_drift):
    x0 = LocalLayer({0: dense_of_pauli(PauliString("X"))})
    z0 = LocalLayer({0: dense_of_pauli(PauliString("Z"))})
    sched = Schedule(2, (x0, z0))  # X after Z in time
    got = evaluate_schedule(sched, sample_drift)
    want = np.kron(
        dense_of_pauli(PauliString("X")) @ dense_of_pauli(PauliString("Z")),
        np.eye(2),
    )
    assert np.allclose(got, want)


def test_phase_multiplies_evaluation(sample_drift):
    sched = Schedule(2, (Drift(0.2),), phase=0.9)
    bare = Schedule(2, (Drift(0.2),))
    got = evaluate_schedule(sched, sample_drift)
    want = np.exp(1j * 0.9) * evaluate_schedule(bare, sample_drift)
    assert np.allclose(got, want)


def test_canonicalize_merges_and_preserves_value(sample_drift):
    layer = LocalLayer({0: HAD})
    raw = Schedule(
        2,
        (
            Drift(0.1),
            Drift(0.2),
            layer,
            layer,  # HAD twice = identity, cancels out
            Drift(0.0),
            Drift(0.3),
            LocalLayer({}),
        ),
        phase=0.4,
    )
    canon = canonicalize(raw)
    # drifts fuse across the cancelled layer pair and the zero drift
    assert canon.instructions == (Drift(0.1 + 0.2 + 0.3),)
    assert canon.phase == 0.4
    a = evaluate_schedule(raw, sample_drift)
    b = evaluate_schedule(canon, sample_drift)
    assert distance(a, b, phase_align=False) < 1e-12


def test_canonicalize_keeps_metadata(sample_drift):
    raw = Schedule(2, (Drift(0.1), Drift(0.1)), raw_drift_periods=2,
                   predicted_error=0.5)
    canon = canonicalize(raw)
    assert canon.raw_drift_periods == 2
    assert canon.predicted_error == 0.5
    assert canon.drift_count() == 1
    assert abs(canon.total_drift_time() - 0.2) < 1e-15


def test_evaluation_respects_dense_cap():
    big = build_expansion(11, [("XX" + "I" * 9, 1.0)])
    sched = Schedule(11, (Drift(0.1),))
    with pytest.raises(TooLarge):
        evaluate_schedule(sched, big)
    # raising the cap explicitly allows it
    w = evaluate_schedule(sched, big, dense_cap=11)
    assert unitarity_defect(w) < 1e-10


def test_drift_duration_must_be_nonnegative():
    with pytest.raises(InvalidTerm):
        Drift(-0.1)


def test_schedule_equality_ignores_plan_metadata():
    a = Schedule(2, (Drift(0.1),), raw_drift_periods=5)
    b = Schedule(2, (Drift(0.1),), raw_drift_periods=9, predicted_error=1.0)
    assert a == b
    assert a != Schedule(2, (Drift(0.1),), phase=0.2)
