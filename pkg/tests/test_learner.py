"""
Tests for losses, model updates and the NOLANA learner.
"""

import itertools
import math
from types import SimpleNamespace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.enums.learner_enums import EtaSchedule, LossKind, StageOneMap
from src.exceptions import InvalidArgumentError
from src.learners.checkpoint import load_checkpoint, save_checkpoint
from src.learners.losses import decision, loss_and_grad
from src.learners.model import (
    OnlineModel,
    alignment_objective,
    realign_model,
    sgd_step,
)
from src.learners.nogd_learner import nogd_learner
from src.learners.nolana_learner import nolana_learner, process_point
from src.numerics.kernels import KernelConfig
from src.oana.landmarks import init_landmarks, maybe_update_landmarks


# ===================================================================
# Losses
# ===================================================================


def test_loss_examples():
    assert loss_and_grad(LossKind.HINGE, 1.0, 2.0) == (0.0, 0.0)
    assert loss_and_grad(LossKind.SQUARED, 1.0, 3.0) == (4.0, 4.0)
    assert loss_and_grad(LossKind.HINGE, -1.0, 0.0) == (1.0, 1.0)
    # kink
    assert loss_and_grad(LossKind.HINGE, 1.0, 1.0) == (0.0, 0.0)


@pytest.mark.parametrize("loss", [LossKind.LOGISTIC, LossKind.SQUARED, LossKind.HINGE])
def test_loss_gradient_matches_finite_differences(loss, rng):
    h = 1e-6
    for _ in range(20):
        y = float(rng.choice([-1.0, 1.0]))
        score = float(rng.uniform(-3, 3))
        if loss is LossKind.HINGE and abs(1 - y * score) < 1e-3:
            continue
        _, grad = loss_and_grad(loss, y, score)
        plus, _ = loss_and_grad(loss, y, score + h)
        minus, _ = loss_and_grad(loss, y, score - h)
        assert abs(grad - (plus - minus) / (2 * h)) <= 1e-5


def test_classification_loss_rejects_raw_labels():
    with pytest.raises(InvalidArgumentError):
        loss_and_grad(LossKind.HINGE, 0.0, 1.0)


def test_decision_sends_ties_to_positive():
    assert decision(0.0) == 1.0
    assert decision(-1e-300) == -1.0


# ===================================================================
# Model updates
# ===================================================================


def test_sgd_step_zero_rate_is_a_no_op(rng):
    model = OnlineModel(w=rng.normal(size=4), eta=0.0, lam=0.3)
    assert np.array_equal(sgd_step(model, rng.normal(size=4), 1.0).w, model.w)


def test_sgd_step_squared_hand_arithmetic():
    model = OnlineModel.zeros(3, eta=0.25, loss=LossKind.SQUARED)
    stepped = sgd_step(model, np.array([1.0, 0.0, 0.0]), 1.0)
    assert_allclose(stepped.w, [0.5, 0.0, 0.0])


def test_sgd_step_descends_smooth_losses(rng):
    for loss in (LossKind.LOGISTIC, LossKind.SQUARED):
        for _ in range(50):
            model = OnlineModel(w=rng.normal(size=5), eta=1e-3, loss=loss)
            phi = rng.normal(size=5)
            y = float(rng.choice([-1.0, 1.0]))
            before, _ = loss_and_grad(loss, y, float(model.w @ phi))
            after, _ = loss_and_grad(loss, y, float(sgd_step(model, phi, y).w @ phi))
            assert after <= before + 1e-12


def test_inverse_sqrt_schedule():
    model = OnlineModel.zeros(2, eta=0.4, eta_schedule=EtaSchedule.INV_SQRT)
    for _ in range(4):
        model = model.tick()
    assert model.learning_rate == pytest.approx(0.2)


def test_model_rejects_negative_hyperparameters():
    with pytest.raises(InvalidArgumentError):
        OnlineModel.zeros(2, eta=-0.1)


def test_model_rejects_zero_ridge_parameter():
    with pytest.raises(InvalidArgumentError):
        OnlineModel.zeros(2, eta=0.1, theta=0.0)


# ===================================================================
# Realignment
# ===================================================================


def _moved_state(rng, m=20, d=3, r=16):
    cfg = KernelConfig(gamma=0.5)
    state = init_landmarks(rng.normal(size=(m, d)) * 1.5, m, r, 0.0, cfg)
    old_map = state.nystrom_map()
    maybe_update_landmarks(rng.normal(size=d), state)
    return state, old_map, state.nystrom_map()


def test_realign_of_zero_model_is_zero(rng):
    state, old_map, new_map = _moved_state(rng)
    model = OnlineModel.zeros(state.r, eta=0.1, theta=0.7)
    assert np.array_equal(realign_model(model, old_map, new_map, state.landmarks).w, np.zeros(state.r))


def test_realign_without_change_is_identity(rng):
    cfg = KernelConfig(gamma=0.5)
    state = init_landmarks(rng.normal(size=(6, 2)) * 2.0, 6, 6, math.inf, cfg)
    the_map = state.nystrom_map()
    model = OnlineModel(w=rng.normal(size=6), eta=0.1, theta=1e-12)
    realigned = realign_model(model, the_map, the_map, state.landmarks)
    assert_allclose(realigned.w, model.w, atol=1e-6)


def test_realign_minimizes_alignment_objective(rng):
    state, old_map, new_map = _moved_state(rng)
    model = OnlineModel(w=rng.normal(size=state.r), eta=0.1, theta=1e-3)
    realigned = realign_model(model, old_map, new_map, state.landmarks)
    at_new = alignment_objective(realigned.w, model, old_map, new_map, state.landmarks)
    at_old = alignment_objective(model.w, model, old_map, new_map, state.landmarks)
    assert at_new <= at_old + 1e-12
    assert realigned.w.shape == (state.r,)


# ===================================================================
# NOLANA
# ===================================================================


def test_first_point_with_zero_model(rng, kernel):
    warmup = rng.normal(size=(5, 2))
    state = init_landmarks(warmup, 5, 4, 0.0, kernel)
    model = OnlineModel.zeros(4, eta=0.1)
    for y in (-1.0, 1.0):
        prediction, loss_value, _, _ = process_point(state, model, warmup[0], y)
        assert prediction == 0.0
        assert loss_value == 1.0


def _k(a, b, gamma):
    return math.exp(-gamma * sum((p - q) ** 2 for p, q in zip(a, b)))


@pytest.mark.parametrize("stage_one_map", [StageOneMap.PRE, StageOneMap.POST])
def test_three_point_hand_trace(stage_one_map):
    gamma, eta, theta = 0.5, 0.1, 1e-3
    points = [(0.0, 0.0), (1.0, 0.0), (0.0, 2.0)]
    labels = [1.0, -0.5, 2.0]
    learner = nolana_learner(
        np.array([points[0]]),
        m=1,
        r=1,
        epsilon=0.0,
        kernel=KernelConfig(gamma=gamma),
        eta=eta,
        theta=theta,
        loss=LossKind.SQUARED,
        stage_one_map=stage_one_map,
    )

    # with one landmark E = [[1]], so phi(x) = k(x, u)
    u, n, w = points[0], 1, 0.0
    for x, y in zip(points, labels):
        phi_old = _k(x, u, gamma)
        prediction = w * phi_old
        new_u = tuple((n * a + b) / (n + 1) for a, b in zip(u, x))
        phi_fit = phi_old if stage_one_map is StageOneMap.PRE else _k(x, new_u, gamma)
        w = w + eta * 2.0 * (y - w * phi_fit) * phi_fit
        # realignment: targets w * k(u_new, u_old), design k(u_new, u_new) = 1
        w = w * _k(new_u, u, gamma) / (1.0 + theta)
        u, n = new_u, n + 1

        result = learner.process(np.array(x), y)
        assert result.updated
        assert abs(result.prediction - prediction) <= 1e-12
        assert_allclose(learner.state.landmarks[0], u, atol=1e-12)
        assert abs(learner.model.w[0] - w) <= 1e-12
    assert learner.state.counts.tolist() == [4]


def test_default_stage_one_fits_under_the_old_map(rng, kernel):
    warmup = rng.normal(size=(6, 2))
    x, y = rng.normal(size=2), 1.0
    model = OnlineModel.zeros(5, eta=0.3, loss=LossKind.SQUARED)
    state = init_landmarks(warmup, 6, 5, 0.0, kernel)
    old_map = state.nystrom_map()

    _, _, outcome, stepped = process_point(state, model, x, y, realign=False)
    assert outcome.updated
    assert_allclose(stepped.w, sgd_step(model, old_map(x), y).w, atol=1e-15)


def test_infinite_gate_matches_nogd_bit_for_bit(blobs):
    X, y = blobs.arrays()
    kernel = KernelConfig(gamma=0.5)
    nolana = nolana_learner(X[:20], m=20, r=16, epsilon=math.inf, kernel=kernel, eta=0.2)
    nogd = nogd_learner(X[:20], m=20, r=16, kernel=kernel, eta=0.2)
    for x, label in zip(X, y):
        a = nolana.process(x, label)
        b = nogd.process(x, label)
        assert a.prediction == b.prediction and a.loss == b.loss
    assert np.array_equal(nolana.model.w, nogd.model.w)
    assert nolana.stats.updates == nogd.stats.updates == 0


def test_zero_gate_updates_on_every_step(blobs):
    X, y = blobs.arrays()
    learner = nolana_learner(X[:10], m=10, r=8, epsilon=0.0, kernel=KernelConfig(gamma=0.5), eta=0.2)
    budget = learner.budget_report().total
    for x, label in zip(X[:100], y[:100]):
        learner.process(x, label)
    assert learner.stats.updates == 100
    assert learner.state.counts.sum() == 10 + 100
    assert learner.budget_report().total == budget
    assert learner.model.w.shape == (8,)


def test_stage_one_post_map_and_no_realign_run(blobs):
    X, y = blobs.arrays()
    learner = nolana_learner(
        X[:10],
        m=10,
        r=8,
        epsilon=0.5,
        kernel=KernelConfig(gamma=0.5),
        eta=0.2,
        stage_one_steps=3,
        stage_one_map=StageOneMap.POST,
        realign=False,
    )
    for x, label in zip(X[:200], y[:200]):
        learner.process(x, label)
    assert np.all(np.isfinite(learner.model.w))
    assert learner.stats.steps == 200


def test_checkpoint_resume_continues_identically(blobs, tmp_path):
    X, y = blobs.arrays()
    kernel = KernelConfig(gamma=0.5)
    reference = nolana_learner(X[:15], m=15, r=12, epsilon=0.3, kernel=kernel, eta=0.2)
    for x, label in zip(X[:150], y[:150]):
        reference.process(x, label)
    path = tmp_path / "nolana.json"
    save_checkpoint(path, reference, 150, {"note": "mid-stream"})

    restored, steps, metrics = load_checkpoint(path)
    assert steps == 150 and metrics == {"note": "mid-stream"}
    assert restored.stats.updates == reference.stats.updates
    for x, label in zip(X[150:], y[150:]):
        assert restored.process(x, label).prediction == reference.process(x, label).prediction
    assert np.array_equal(restored.model.w, reference.model.w)


def test_refresh_time_counts_only_the_eigen_refresh(blobs, monkeypatch):
    X, y = blobs.arrays()
    # every clock read advances one second, so each refresh spans exactly 1.0
    ticks = itertools.count()
    monkeypatch.setattr(
        "src.oana.landmarks.time", SimpleNamespace(perf_counter=lambda: float(next(ticks)))
    )
    learner = nolana_learner(
        X[:10], m=10, r=8, epsilon=0.5, kernel=KernelConfig(gamma=0.5), eta=0.2, timing=True
    )
    for x, label in zip(X[:80], y[:80]):
        learner.process(x, label)
    assert learner.stats.updates > 0
    assert learner.stats.refresh_seconds == float(learner.stats.updates)
