"""
Training a neural noise estimator
=================================

The network only ever sees noise: the all-ones word is transmitted, so
the channel output is the noise itself. Once trained, it decodes any
codeword because the pipeline is blind to which one was sent.
"""

# %%
import numpy as np

from lcodec.channel import AwgnChannel, bipolar
from lcodec.codes import BchParams, bch_construct, encode
from lcodec.decoder import IdentityEstimator, MapOracle, decode
from lcodec.training import TrainConfig, train

code = bch_construct(BchParams(4, 2))
cfg = TrainConfig(ebn0_db=4.0, batch_count=3000, seed=1)  # 2e4 batches bring BER down to about 5e-3
net, losses = train(code, None, "vanilla", cfg)
print(f"{net.num_params()} parameters; loss {losses[:200].mean():.4f} -> {losses[-200:].mean():.4f}")

# %%
# Evaluate on random codewords at the training SNR.
ch = AwgnChannel.from_ebn0(4.0, code.rate)
rng = np.random.default_rng(3)
x = bipolar(encode(code, rng.integers(0, 2, (20_000, code.k))))
y = x * ch.sample_noise(rng, x.shape)
for name, F in [("hard decision", IdentityEstimator(code)), ("neural", net), ("MAP", MapOracle(code, ch))]:
    print(f"{name:>13}: BER {np.mean(decode(code, F, y).x_hat_hard != x):.4f}")
