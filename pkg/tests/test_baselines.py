"""
Tests for the PA, NOGD and FOGD baselines and the budget accountant.
"""

import math

import numpy as np
import pytest

from evaluator.budget import BudgetAudit, BudgetReport, parity_gap
from evaluator.metrics import MetricsLog
from src.data_io.synthetic import blobs_stream
from src.enums.learner_enums import LossKind, Task
from src.exceptions import BudgetViolationError, InvalidArgumentError
from src.learners.fogd_learner import FourierFeatures, fogd_learner, parity_dimension, rff_map
from src.learners.nogd_learner import nogd_learner
from src.learners.nolana_learner import nolana_learner
from src.learners.pa_learner import PALearner, PAModel, pa_loss, pa_step
from src.numerics.kernels import KernelConfig, gaussian_kernel


# ===================================================================
# Random Fourier features
# ===================================================================


def test_parity_dimension():
    assert parity_dimension(100, 80, 256) == 131
    assert parity_dimension(20, 16, 12) == 46
    with pytest.raises(InvalidArgumentError):
        parity_dimension(0, 0, 5)


def test_rff_map_is_deterministic_and_bounded(rng, kernel):
    first = FourierFeatures.draw(3, 64, kernel, seed=5)
    second = FourierFeatures.draw(3, 64, kernel, seed=5)
    for x in rng.normal(size=(20, 3)):
        z = rff_map(x, first)
        assert np.array_equal(z, rff_map(x, second))
        assert np.all(np.abs(z) <= first.scale)
        assert z @ z <= 2.0 + 1e-12


def test_rff_map_approximates_kernel(rng, kernel):
    features = FourierFeatures.draw(3, 5000, kernel, seed=0)
    gaps = []
    for _ in range(200):
        x, y = rng.normal(size=3), rng.normal(size=3)
        gaps.append(abs(rff_map(x, features) @ rff_map(y, features) - gaussian_kernel(x, y, kernel)))
    assert np.mean(gaps) <= 0.05


def test_rff_map_rejects_dimension_mismatch(kernel):
    features = FourierFeatures.draw(3, 8, kernel, seed=0)
    with pytest.raises(InvalidArgumentError):
        rff_map(np.zeros(4), features)


def test_fogd_separates_two_blobs():
    stream = blobs_stream(5000, [[-2.0, -2.0], [2.0, 2.0]], cluster_std=0.5, seed=1)
    learner = fogd_learner(d=2, m=20, r=16, kernel=KernelConfig(gamma=0.5), seed=0, eta=0.5)
    log = MetricsLog(Task.CLASSIFICATION)
    for sample in stream:
        result = learner.process(sample.features, sample.label)
        log.record(result.prediction, sample.label, result.loss, result.updated)
    assert learner.features.D == 180
    assert log.final_metric >= 0.95


def test_fogd_same_seed_same_predictions(blobs):
    X, y = blobs.arrays()
    runs = []
    for _ in range(2):
        learner = fogd_learner(d=2, m=10, r=8, kernel=KernelConfig(gamma=0.5), seed=4, eta=0.3)
        runs.append([learner.process(x, label).prediction for x, label in zip(X, y)])
    assert runs[0] == runs[1]


# ===================================================================
# Passive-Aggressive
# ===================================================================


def test_pa_leaves_satisfied_margin_alone():
    model = PAModel(w=np.array([2.0, 0.0]))
    prediction, stepped = pa_step(model, np.array([1.0, 0.0]), 1.0)
    assert prediction == 2.0
    assert stepped is model


def test_pa_hand_arithmetic():
    prediction, stepped = pa_step(PAModel(w=np.zeros(3)), np.array([1.0, 0.0, 0.0]), 1.0)
    assert prediction == 0.0
    assert stepped.w.tolist() == [1.0, 0.0, 0.0]


def test_pa_fits_the_current_example(rng):
    model = PAModel(w=np.zeros(6))
    for _ in range(100):
        x = rng.normal(size=6)
        y = float(rng.choice([-1.0, 1.0]))
        _, model = pa_step(model, x, y)
        assert pa_loss(model, y, float(model.w @ x)) <= 1e-9


def test_pa_aggressiveness_caps_the_step():
    _, stepped = pa_step(PAModel(w=np.zeros(2), aggressiveness=0.1), np.array([1.0, 0.0]), 1.0)
    assert stepped.w.tolist() == [0.1, 0.0]


def test_pa_regression_is_epsilon_insensitive():
    model = PAModel(w=np.zeros(2), task=Task.REGRESSION, eps_insensitive=0.5)
    x = np.array([1.0, 1.0])
    _, stepped = pa_step(model, x, 3.0)
    assert abs(3.0 - stepped.w @ x) == pytest.approx(0.5)
    assert pa_step(stepped, x, 3.0)[1] is stepped


def test_pa_skips_zero_samples():
    learner = PALearner(PAModel(w=np.zeros(2)), LossKind.HINGE)
    result = learner.process(np.zeros(2), 1.0)
    assert result.loss == 1.0
    assert learner.stats.skipped == 1
    assert learner.model.w.tolist() == [0.0, 0.0]


# ===================================================================
# NOGD and budget accounting
# ===================================================================


def test_nogd_never_moves_landmarks(blobs):
    X, y = blobs.arrays()
    learner = nogd_learner(X[:10], m=10, r=8, kernel=KernelConfig(gamma=0.5), eta=0.2)
    landmarks = learner.state.landmarks.copy()
    for x, label in zip(X, y):
        assert not learner.process(x, label).updated
    assert learner.stats.updates == 0
    assert np.array_equal(learner.state.landmarks, landmarks)


def test_budget_parity_at_usps_scale(rng):
    d, m, r = 256, 100, 80
    warmup = rng.uniform(-1, 1, size=(m, d))
    kernel = KernelConfig(gamma=0.01)
    nolana = nolana_learner(warmup, m=m, r=r, epsilon=1.0, kernel=kernel, eta=0.1).budget_report()
    nogd = nogd_learner(warmup, m=m, r=r, kernel=kernel, eta=0.1).budget_report()
    fogd = fogd_learner(d=d, m=m, r=r, kernel=kernel, seed=0, eta=0.1).budget_report()

    assert nolana.budget == nogd.budget == m * d + m * r + r + m == 33780
    assert nolana.total == nogd.total
    assert fogd.budget == 131 * d + 131 == 33667
    assert parity_gap(nolana, fogd) < 0.05


def test_pa_budget_is_its_weights():
    learner = PALearner(PAModel(w=np.zeros(7)), LossKind.HINGE)
    report = learner.budget_report()
    assert report.total == 7
    assert report.budget == 0
    assert math.isinf(learner.model.aggressiveness)


def test_budget_audit_holds_while_landmarks_move(blobs):
    X, y = blobs.arrays()
    learner = nolana_learner(X[:10], m=10, r=8, epsilon=0.0, kernel=KernelConfig(gamma=0.5), eta=0.2)
    audit = BudgetAudit(learner.budget_report())
    for step, (x, label) in enumerate(zip(X, y), start=1):
        learner.process(x, label)
        audit.check(learner.budget_report(), step)
    assert learner.stats.updates > 0
    assert audit.checks == len(X)


def test_budget_audit_rejects_a_grown_component():
    audit = BudgetAudit(BudgetReport(method="nogd", components={"landmarks": 20, "weights": 4}))
    audit.check(BudgetReport(method="nogd", components={"landmarks": 20, "weights": 4}), 1)
    with pytest.raises(BudgetViolationError, match="step 2"):
        audit.check(BudgetReport(method="nogd", components={"landmarks": 22, "weights": 4}), 2)
