import numpy as np
import pytest

from spikewing.errors import ContractViolation
from spikewing.training.losses import (huber, loss_controller,
                                       loss_controller_grad, loss_estimator,
                                       loss_estimator_grad, pearson)
from spikewing.training.trainer import TrainConfig


def cfg(**kw):
    base = dict(window_len=20, stride=20, burn_in=5, epochs=1, batch_size=1,
                seed=0)
    base.update(kw)
    return TrainConfig(**base)


class TestHuber:
    def test_quadratic_branch(self):
        assert huber(0.5, 1.0) == pytest.approx(0.125)

    def test_linear_branch(self):
        assert huber(2.0, 1.0) == pytest.approx(1.5)

    def test_branch_boundary_continuous(self):
        assert huber(1.0, 1.0) == pytest.approx(0.5)
        assert huber(-1.0, 1.0) == pytest.approx(0.5)
        eps = 1e-9
        assert huber(1.0 + eps, 1.0) == pytest.approx(0.5, abs=1e-8)

    def test_rejects_bad_delta(self):
        with pytest.raises(ContractViolation):
            huber(1.0, 0.0)


class TestPearson:
    def test_self_correlation(self, rng):
        x = rng.normal(size=(30, 2, 3))
        assert pearson(x, x) == pytest.approx(1.0)

    def test_anti_correlation(self, rng):
        x = rng.normal(size=(30, 2, 3))
        assert pearson(-x, x) == pytest.approx(-1.0)

    def test_affine_invariance(self, rng):
        x = rng.normal(size=(30, 1, 2))
        assert pearson(2.5 * x + 3.0, x) == pytest.approx(1.0)

    def test_zero_variance_contributes_zero(self, rng):
        x = rng.normal(size=(30, 1, 2))
        y = x.copy()
        y[:, 0, 1] = 4.2  # constant channel
        assert pearson(x, y) == pytest.approx(0.5)


class TestLossEstimator:
    def test_perfect(self, rng):
        x = rng.normal(size=(20, 2, 3))
        assert loss_estimator(x, x, cfg()) == 0.0

    def test_burn_in_exclusion(self, rng):
        target = rng.normal(size=(20, 2, 3))
        pred = target.copy()
        pred[:5] += rng.normal(size=(5, 2, 3))  # error only inside burn-in
        assert loss_estimator(pred, target, cfg()) == 0.0

    def test_constant_error_field(self):
        target = np.zeros((20, 2, 3))
        pred = np.full((20, 2, 3), 0.5)
        assert loss_estimator(pred, target, cfg()) == pytest.approx(0.125)

    def test_too_short_rejected(self, rng):
        x = rng.normal(size=(4, 1, 1))
        with pytest.raises(ContractViolation):
            loss_estimator(x, x, cfg())


class TestLossController:
    def test_perfect(self, rng):
        x = rng.normal(size=(20, 2, 3))
        assert loss_controller(x, x, cfg()) == pytest.approx(0.0)

    def test_offset_preserves_correlation(self, rng):
        target = rng.normal(size=(20, 2, 1))
        pred = target + 0.5
        assert loss_controller(pred, target, cfg()) == pytest.approx(0.125)

    def test_against_naive_reference(self, rng):
        """Two-pass reference: explicit per-channel loops."""
        c = cfg()
        pred = rng.normal(size=(40, 3, 2))
        target = rng.normal(size=(40, 3, 2))
        got = loss_controller(pred, target, c)
        hub = 0.0
        for t in range(40):
            for b in range(3):
                for o in range(2):
                    e = pred[t, b, o] - target[t, b, o]
                    hub += 0.5 * e * e if abs(e) <= 1.0 else abs(e) - 0.5
        hub /= 40 * 3 * 2
        rhos = []
        for b in range(3):
            for o in range(2):
                rhos.append(np.corrcoef(pred[:, b, o], target[:, b, o])[0, 1])
        expect = hub + c.corr_weight * (1.0 - np.mean(rhos))
        assert got == pytest.approx(expect, rel=1e-10)


class TestLossGradients:
    def test_estimator_grad_zero_in_burn_in(self, rng):
        c = cfg()
        pred = rng.normal(size=(20, 2, 3))
        target = rng.normal(size=(20, 2, 3))
        _, g = loss_estimator_grad(pred, target, c)
        assert np.all(g[:5] == 0.0)

    @pytest.mark.parametrize("grad_fn,loss_fn", [
        (loss_estimator_grad, loss_estimator),
        (loss_controller_grad, loss_controller),
    ])
    def test_grad_matches_fd(self, rng, grad_fn, loss_fn):
        c = cfg()
        pred = rng.normal(size=(12, 2, 2))
        target = rng.normal(size=(12, 2, 2))
        _, g = grad_fn(pred, target, c)
        h = 1e-7
        for idx in [(6, 0, 0), (11, 1, 1), (2, 0, 1), (8, 1, 0)]:
            p = pred.copy()
            p[idx] += h
            up = loss_fn(p, target, c)
            p[idx] -= 2 * h
            dn = loss_fn(p, target, c)
            assert g[idx] == pytest.approx((up - dn) / (2 * h), rel=1e-5,
                                           abs=1e-10)
