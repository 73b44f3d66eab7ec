import json
import math

import numpy as np
import pytest

from lcodec.channel import AwgnChannel
from lcodec.neural import (
    Adam,
    DimensionError,
    ModelFormatError,
    StackedGruNet,
    VanillaNet,
    build_net,
    encode_inputs,
    load_model,
    loss_discounted_ce,
    save_model,
)
from lcodec.training import TrainConfig, TrainingError, train, training_batch


def small_nets():
    return [
        VanillaNet(7, 4, hidden=9, n_layers=3, rng=0),
        StackedGruNet(7, 4, hidden=6, levels=2, steps=3, rng=0),
    ]


def sample_inputs(rng, batch, n=7, k=4):
    a = np.abs(rng.normal(1.0, 0.7, (batch, n)))
    s = rng.integers(0, 2, (batch, n - k))
    return a, s


def test_encode_inputs():
    x = encode_inputs([0.5, 2.0, 1.0], [0, 1])
    assert x.tolist() == [0.5, 2.0, 1.0, 1.0, -1.0]


@pytest.mark.parametrize("net", small_nets(), ids=["vanilla", "gru"])
def test_zero_weights_give_zero_output(net):
    net.zero_()
    rng = np.random.default_rng(0)
    outs = net.forward(*sample_inputs(rng, 5))
    assert len(outs) == (1 if net.arch == "vanilla" else 3)
    for o in outs:
        assert not o.any()


@pytest.mark.parametrize("net", small_nets(), ids=["vanilla", "gru"])
def test_output_range_and_determinism(net):
    rng = np.random.default_rng(1)
    a, s = sample_inputs(rng, 50)
    a *= 50.0
    first = net.forward(a, s)
    again = net.forward(a, s)
    for o1, o2 in zip(first, again):
        assert np.array_equal(o1, o2)
        assert np.all(np.abs(o1) <= 1.0)
    # batched and single-example evaluation agree
    np.testing.assert_allclose(net.estimate(a[3], s[3]), first[-1][3], rtol=0, atol=1e-14)


def test_dimension_mismatch(hamming, bch15_7):
    net = VanillaNet(7, 4, n_layers=2, rng=0)
    with pytest.raises(DimensionError):
        net.forward(np.ones(7), np.zeros(4))
    net.check_code(hamming)
    with pytest.raises(DimensionError):
        net.check_code(bch15_7)


def test_default_widths():
    assert VanillaNet(15, 7).hidden == 90
    assert StackedGruNet(15, 7).hidden == 75
    assert VanillaNet(64, 45, hidden_mult=6).hidden == 384
    with pytest.raises(ValueError):
        build_net("lstm", 7, 4)


def test_loss_examples():
    loss, _ = loss_discounted_ce([np.array([0.0]), np.array([0.8])], np.array([1.0]), 0.5)
    assert loss == pytest.approx(0.5 * math.log(2) + math.log(1 / 0.9), abs=1e-12)
    assert loss == pytest.approx(0.451934106, abs=1e-9)

    zhat = np.array([0.3, -0.6, 0.9])
    target = np.array([1.0, -1.0, -1.0])
    p = (1 - zhat) / 2
    q = (1 - target) / 2
    plain = float(np.mean(-q * np.log(p) - (1 - q) * np.log(1 - p)))
    for gamma in (0.1, 1.0):
        assert loss_discounted_ce([zhat], target, gamma)[0] == pytest.approx(plain, abs=1e-12)


def test_loss_perfect_prediction_hits_clip_floor():
    target = np.array([1.0, -1.0, 1.0])
    loss, douts = loss_discounted_ce([target, target], target, 0.5)
    assert 0 <= loss < 1e-11
    for d in douts:
        assert not d.any()


def test_loss_rejects_bad_arguments():
    with pytest.raises(ValueError):
        loss_discounted_ce([], np.ones(3))
    with pytest.raises(ValueError):
        loss_discounted_ce([np.zeros(3)], np.ones(3), gamma=0.0)


def total_loss(net, x, target, gamma=0.5):
    outs, _ = net.forward_cached(x)
    return loss_discounted_ce(outs, target, gamma)[0]


@pytest.mark.parametrize("net", small_nets(), ids=["vanilla", "gru"])
def test_gradients_match_finite_differences(net):
    rng = np.random.default_rng(2)
    for p in net.params.values():  # nonzero biases exercise every path
        p += rng.normal(0, 0.1, p.shape)
    a, s = sample_inputs(rng, 4)
    x = encode_inputs(a, s)
    target = np.where(rng.random((4, 7)) < 0.3, -1.0, 1.0)
    outs, cache = net.forward_cached(x)
    _, douts = loss_discounted_ce(outs, target, 0.5)
    grads = net.backward(cache, douts)
    assert set(grads) == set(net.params)
    h = 1e-5
    for name, p in net.params.items():
        num = np.empty_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = total_loss(net, x, target)
            p[idx] = old - h
            down = total_loss(net, x, target)
            p[idx] = old
            num[idx] = (up - down) / (2 * h)
        err = np.linalg.norm(grads[name] - num) / max(np.linalg.norm(num), np.linalg.norm(grads[name]), 1e-12)
        assert err < 1e-4, f"{name}: relative error {err:.2e}"


@pytest.mark.parametrize("net", small_nets(), ids=["vanilla", "gru"])
def test_gradient_linearity(net):
    rng = np.random.default_rng(3)
    x = encode_inputs(*sample_inputs(rng, 6))
    target = np.where(rng.random((6, 7)) < 0.2, -1.0, 1.0)
    outs, cache = net.forward_cached(x)
    _, douts = loss_discounted_ce(outs, target)
    g1 = net.backward(cache, douts)
    g2 = net.backward(cache, [2.0 * d for d in douts])
    for name in g1:
        assert np.array_equal(2.0 * g1[name], g2[name])


def test_adam_first_step_and_zero_gradient():
    params = {"w": np.array([0.5, -1.0, 2.0]), "b": np.zeros(2)}
    grads = {"w": np.array([0.3, -4.0, 1e-3]), "b": np.zeros(2)}
    opt = Adam(lr=1e-2)
    opt.step(params, grads)
    np.testing.assert_allclose(params["w"], [0.5 - 1e-2, -1.0 + 1e-2, 2.0 - 1e-2], rtol=0, atol=1e-7)
    for _ in range(50):
        opt.step(params, {"w": np.zeros(3), "b": np.zeros(2)})
    assert not params["b"].any()
    with pytest.raises(ValueError):
        opt.step(params, {"w": np.zeros(2), "b": np.zeros(2)})


def test_training_is_deterministic(hamming):
    cfg = TrainConfig(batch_count=100, batch_size=16, seed=4)
    net1, l1 = train(hamming, None, "vanilla", cfg, n_layers=3)
    net2, l2 = train(hamming, None, "vanilla", cfg, n_layers=3)
    assert np.array_equal(l1, l2)
    for name in net1.params:
        assert np.array_equal(net1.params[name], net2.params[name])


def test_training_batches_contain_only_noise(hamming):
    rng = np.random.default_rng(0)
    a, s, z_sign = training_batch(hamming, AwgnChannel(1e-9), rng, 32)
    assert np.all(z_sign == 1) and not s.any()
    np.testing.assert_allclose(a, 1.0, atol=1e-6)


def test_noiseless_training_loss_decreases(hamming):
    cfg = TrainConfig(batch_count=10, batch_size=32, seed=0)
    _, losses = train(hamming, AwgnChannel(1e-9), "vanilla", cfg, n_layers=3)
    assert np.all(np.diff(losses) < 0)
    _, losses = train(hamming, AwgnChannel(1e-9), "gru", cfg, levels=2, steps=3)
    assert np.all(np.diff(losses) < 0)


def test_training_divergence_reported(hamming):
    net = VanillaNet(7, 4, n_layers=2, rng=0)
    net.params["W0"][0, 0] = np.nan
    with pytest.raises(TrainingError, match="batch 0"):
        train(hamming, None, net, TrainConfig(batch_count=3, batch_size=4))


def test_bch15_7_training_reduces_loss(trained_bch15_7):
    _, losses = trained_bch15_7
    assert losses[-1000:].mean() < losses[:1000].mean()


@pytest.mark.parametrize("net", small_nets(), ids=["vanilla", "gru"])
def test_save_load_round_trip(net):
    rng = np.random.default_rng(5)
    a, s = sample_inputs(rng, 20)
    text = save_model(net, {"ebn0_db": 4.0})
    doc = json.loads(text)
    assert doc["format_version"] == 1 and doc["arch"] == net.arch
    loaded, meta = load_model(text, expect_n=7, expect_k=4)
    assert meta == {"ebn0_db": 4.0}
    for o1, o2 in zip(net.forward(a, s), loaded.forward(a, s)):
        np.testing.assert_allclose(o1, o2, rtol=0, atol=1e-12)


def test_load_errors():
    text = save_model(VanillaNet(7, 4, n_layers=2, rng=0))
    with pytest.raises(ModelFormatError):
        load_model(text[: len(text) // 2])
    with pytest.raises(DimensionError):
        load_model(text, expect_n=15, expect_k=7)
    doc = json.loads(text)
    doc["format_version"] = 99
    with pytest.raises(ModelFormatError):
        load_model(json.dumps(doc))
    doc = json.loads(text)
    doc["arch"] = "lstm"
    with pytest.raises(ModelFormatError):
        load_model(json.dumps(doc))
