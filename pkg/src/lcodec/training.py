"""Training of noise estimators on simulated multiplicative noise.

The all-ones bipolar word is the only transmitted word during training,
so a channel output is the noise itself. The batch generator below has no
access to messages or encoders.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import automorphism as aut
from .channel import AwgnChannel, BisoChannel, hard_decision
from .codes import LinearCode, syndrome
from .neural import Adam, build_net, encode_inputs, loss_discounted_ce

log = logging.getLogger(__name__)


class TrainingError(RuntimeError):
    pass


@dataclass
class TrainConfig:
    ebn0_db: float = 4.0
    batch_size: int = 128
    batch_count: int = 10_000
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    gamma: float = 0.5
    seed: int = 0
    permute: bool = False
    log_every: int = 0

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")
        if self.batch_size < 1 or self.batch_count < 1:
            raise ValueError("batch size and count must be positive")


def training_batch(code: LinearCode, channel: BisoChannel, rng: np.random.Generator, size: int,
                   permute: bool = False):
    """One batch of ``(reliabilities, syndromes, noise signs)``."""
    z = channel.sample_noise(rng, (size, code.n))
    if permute:
        k, l = aut.best_permutation_batch(code, channel.adjusted_reliability(z))
        z = np.take_along_axis(z, aut.permutation_indices(code.n, k, l), axis=-1)
    z_sign, z_bin = hard_decision(z)
    return np.abs(z), syndrome(code, z_bin), z_sign


def train(code: LinearCode, channel: BisoChannel | None, arch, cfg: TrainConfig, **hyper):
    """Fit a network to predict noise signs; returns ``(net, losses)``.

    ``arch`` is an architecture name ("vanilla" or "gru") or a network
    instance to continue training. ``channel`` defaults to AWGN at
    ``cfg.ebn0_db`` for the code's rate.
    """
    if channel is None:
        channel = AwgnChannel.from_ebn0(cfg.ebn0_db, code.rate)
    rng = np.random.default_rng(cfg.seed)
    if isinstance(arch, str):
        net = build_net(arch, code.n, code.k, rng=rng, **hyper)
    else:
        net = arch
        net.check_code(code)
    if cfg.permute and code.bch is None:
        raise ValueError("permuted training needs a BCH code")
    opt = Adam(cfg.lr, cfg.beta1, cfg.beta2, cfg.eps)
    data_rng = np.random.default_rng([cfg.seed, 1])
    losses = np.empty(cfg.batch_count)
    for b in range(cfg.batch_count):
        a, s, target = training_batch(code, channel, data_rng, cfg.batch_size, cfg.permute)
        outs, cache = net.forward_cached(encode_inputs(a, s))
        loss, douts = loss_discounted_ce(outs, target, cfg.gamma)
        if not np.isfinite(loss):
            raise TrainingError(f"loss became non-finite at batch {b}")
        grads = net.backward(cache, douts)
        opt.step(net.params, grads)
        losses[b] = loss
        if cfg.log_every and (b + 1) % cfg.log_every == 0:
            log.info("batch %d loss %.5f", b + 1, losses[b + 1 - cfg.log_every: b + 1].mean())
    return net, losses
