import numpy as np

from spikewing.training.bptt import init_spiking_net
from spikewing.training.dataset import ScaledDataset
from spikewing.training.trainer import TrainConfig, to_runtime_subnet, train


def sine_task(rng, n_windows=12, t_len=200):
    """Imitate a phase-shifted sine from its quadrature components."""
    t = np.arange(t_len) * 0.01
    xs, ys = [], []
    for _ in range(n_windows):
        phase = rng.uniform(0, 2 * np.pi)
        freq = rng.uniform(0.5, 1.5)
        arg = 2 * np.pi * freq * t + phase
        xs.append(np.stack([np.sin(arg), np.cos(arg)], axis=1))
        ys.append((0.8 * np.sin(arg + 0.4))[:, None])
    return ScaledDataset(x=np.stack(xs), y=np.stack(ys),
                         c_x=np.ones(2), c_y=np.ones(1))


def test_quiescent_net_constant_zero_target_zero_loss():
    """A silent network imitating zero has zero loss from the start."""
    net = init_spiking_net([("recurrent", 1)], 1, 1, seed=0, theta_init=5.0)
    x = np.zeros((4, 50, 1))
    y = np.zeros((4, 50, 1))
    ds = ScaledDataset(x=x, y=y, c_x=np.ones(1), c_y=np.ones(1))
    cfg = TrainConfig(window_len=50, stride=50, burn_in=5, epochs=1,
                      batch_size=2, seed=0)
    res = train(net, ds, cfg, role="estimator")
    assert res.history[0]["train_loss"] == 0.0


def test_sine_imitation_converges(rng):
    ds = sine_task(rng)
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=30,
                      batch_size=4, seed=0, learning_rate=3e-3)
    net = init_spiking_net([("recurrent", 10)], 2, 1, seed=0)
    res = train(net, ds, cfg, role="controller")
    assert not res.diverged
    first = res.history[0]["train_loss"]
    last = res.history[-1]["train_loss"]
    assert last < 0.1 * first


def test_same_seed_identical_histories(rng):
    ds = sine_task(rng, n_windows=6)
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=5,
                      batch_size=4, seed=3)
    runs = []
    for _ in range(2):
        net = init_spiking_net([("recurrent", 8)], 2, 1, seed=1)
        res = train(net, ds, cfg, role="controller")
        runs.append([h["train_loss"] for h in res.history])
    assert runs[0] == runs[1]


def test_validation_losses_reported(rng):
    ds = sine_task(rng, n_windows=6)
    val = sine_task(rng, n_windows=2)
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=2,
                      batch_size=4, seed=0)
    net = init_spiking_net([("recurrent", 8)], 2, 1, seed=1)
    res = train(net, ds, cfg, role="controller", val_dataset=val)
    for row in res.history:
        assert np.isfinite(row["val_loss"])
        assert -1.0 <= row["rho"] <= 1.0


def test_training_log_csv(rng, tmp_path):
    ds = sine_task(rng, n_windows=4)
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=2,
                      batch_size=4, seed=0)
    net = init_spiking_net([("recurrent", 6)], 2, 1, seed=1)
    path = tmp_path / "log.csv"
    train(net, ds, cfg, role="controller", log_path=path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "epoch,train_loss,val_loss,rho"
    assert len(lines) == 3


def test_leaks_stay_clamped(rng):
    ds = sine_task(rng, n_windows=6)
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=5,
                      batch_size=4, seed=0, learning_rate=0.05)
    net = init_spiking_net([("recurrent", 8)], 2, 1, seed=1)
    train(net, ds, cfg, role="controller")
    for l in net.layers:
        assert np.all(l.alpha > 0.0) and np.all(l.alpha < 1.0)
        assert np.all(l.beta > 0.0) and np.all(l.beta < 1.0)


def test_runtime_conversion_rejects_nothing_valid(rng):
    net = init_spiking_net([("feedforward", 4), ("recurrent", 5)], 3, 2,
                           seed=0)
    sub = to_runtime_subnet(net, np.ones(3), np.ones(2))
    assert sub.d_in == 3 and sub.d_out == 2


def test_divergence_keeps_last_finite_params(rng):
    """A non-finite loss aborts the run and restores the snapshot."""
    ds = sine_task(rng, n_windows=4)
    ds.y[2, 50, 0] = np.nan  # poisoned target makes the loss non-finite
    cfg = TrainConfig(window_len=200, stride=200, burn_in=20, epochs=3,
                      batch_size=4, seed=0)
    net = init_spiking_net([("recurrent", 6)], 2, 1, seed=1)
    before = {k: v.copy() for k, v in net.params().items()}
    res = train(net, ds, cfg, role="controller")
    assert res.diverged
    for key, val in net.params().items():
        assert np.array_equal(val, before[key])
