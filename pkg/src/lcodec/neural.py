"""Noise-estimating networks written directly in numpy.

Both networks map reliabilities ``a`` (length N) and a syndrome ``s``
(length N-K) to per-bit noise-sign estimates in (-1, 1). The input vector
is ``concat(a, bipolar(s))``. Forward passes return a list of outputs, one
per recurrent step (a single element for the feed-forward net), plus a
cache consumed by ``backward``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .channel import bipolar

FORMAT_VERSION = 1
CLIP = 1e-12


class ModelFormatError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def encode_inputs(a, s) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    s = np.asarray(s)
    return np.concatenate([a, bipolar(s)], axis=-1)


class _Net:
    arch = ""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.params: dict[str, np.ndarray] = {}

    @property
    def in_dim(self) -> int:
        return 2 * self.n - self.k

    def param_names(self) -> list[str]:
        return list(self.params)

    def num_params(self) -> int:
        return sum(p.size for p in self.params.values())

    def _check(self, x):
        if x.shape[-1] != self.in_dim:
            raise DimensionError(f"{self.arch} net expects input width {self.in_dim}, got {x.shape[-1]}")

    def check_code(self, code):
        if (code.n, code.k) != (self.n, self.k):
            raise DimensionError(f"model built for ({self.n},{self.k}) but code is ({code.n},{code.k})")

    def forward(self, a, s):
        outs, _ = self.forward_cached(encode_inputs(a, s))
        return outs

    def estimate(self, a, s) -> np.ndarray:
        """Noise-sign estimate from the last output."""
        return self.forward(a, s)[-1]

    def zero_(self):
        for p in self.params.values():
            p[...] = 0.0
        return self

    def hyper(self) -> dict:
        raise NotImplementedError


class VanillaNet(_Net):
    """Fully connected stack where every layer also sees the raw input.

    ``n_layers - 1`` ReLU layers of width ``hidden`` and a tanh output layer
    of width N. Layers after the first take ``concat(prev, x)``.
    """

    arch = "vanilla"

    def __init__(self, n: int, k: int, hidden: int | None = None, n_layers: int = 11,
                 hidden_mult: float = 6.0, rng=None):
        super().__init__(n, k)
        if n_layers < 1:
            raise ValueError("need at least one layer")
        self.hidden = int(hidden if hidden is not None else round(hidden_mult * n))
        self.n_layers = n_layers
        rng = np.random.default_rng(rng)
        d0 = self.in_dim
        for j in range(n_layers):
            fan_in = d0 if j == 0 else self.hidden + d0
            fan_out = n if j == n_layers - 1 else self.hidden
            if j == n_layers - 1:
                std = math.sqrt(1.0 / fan_in)
            else:
                std = math.sqrt(2.0 / fan_in)
            self.params[f"W{j}"] = rng.normal(0.0, std, size=(fan_in, fan_out))
            self.params[f"b{j}"] = np.zeros(fan_out)

    def hyper(self):
        return {"hidden": self.hidden, "n_layers": self.n_layers}

    def forward_cached(self, x):
        self._check(x)
        inputs, acts = [], []
        h = None
        for j in range(self.n_layers):
            inp = x if j == 0 else np.concatenate([h, x], axis=-1)
            pre = inp @ self.params[f"W{j}"] + self.params[f"b{j}"]
            h = np.tanh(pre) if j == self.n_layers - 1 else np.maximum(pre, 0.0)
            inputs.append(inp)
            acts.append(h)
        return [h], (inputs, acts)

    def backward(self, cache, douts) -> dict[str, np.ndarray]:
        inputs, acts = cache
        grads = {}
        d = douts[-1]
        for j in range(self.n_layers - 1, -1, -1):
            h = acts[j]
            if j == self.n_layers - 1:
                dpre = d * (1.0 - h * h)
            else:
                dpre = d * (h > 0)
            inp = inputs[j].reshape(-1, inputs[j].shape[-1])
            dpre2 = dpre.reshape(-1, dpre.shape[-1])
            grads[f"W{j}"] = inp.T @ dpre2
            grads[f"b{j}"] = dpre2.sum(axis=0)
            if j > 0:
                d = (dpre @ self.params[f"W{j}"].T)[..., : self.hidden]
        return {name: grads[name] for name in self.params}


_GATES = ("z", "r", "c")


class StackedGruNet(_Net):
    """Stacked GRU levels unrolled for ``steps`` steps on a constant input.

    Each step emits ``tanh(h_top @ Wo + bo)``. Cell update per level::

        z = sig(x Wz + h Uz + bz)
        r = sig(x Wr + h Ur + br)
        c = tanh(x Wc + (r*h) Uc + bc)
        h' = (1 - z) * h + z * c
    """

    arch = "gru"

    def __init__(self, n: int, k: int, hidden: int | None = None, levels: int = 4, steps: int = 5,
                 hidden_mult: float = 5.0, rng=None):
        super().__init__(n, k)
        self.hidden = int(hidden if hidden is not None else round(hidden_mult * n))
        self.levels = levels
        self.steps = steps
        rng = np.random.default_rng(rng)
        H = self.hidden
        for j in range(levels):
            d_in = self.in_dim if j == 0 else H
            for g in _GATES:
                self.params[f"W{g}{j}"] = rng.normal(0.0, math.sqrt(1.0 / d_in), size=(d_in, H))
                self.params[f"U{g}{j}"] = rng.normal(0.0, math.sqrt(1.0 / H), size=(H, H))
                self.params[f"b{g}{j}"] = np.zeros(H)
        self.params["Wo"] = rng.normal(0.0, math.sqrt(1.0 / H), size=(H, n))
        self.params["bo"] = np.zeros(n)

    def hyper(self):
        return {"hidden": self.hidden, "levels": self.levels, "steps": self.steps}

    def forward_cached(self, x):
        self._check(x)
        P = self.params
        batch = x.shape[:-1]
        h = [np.zeros(batch + (self.hidden,)) for _ in range(self.levels)]
        outs, cache = [], []
        for _ in range(self.steps):
            step = []
            inp = x
            for j in range(self.levels):
                hp = h[j]
                z = _sigmoid(inp @ P[f"Wz{j}"] + hp @ P[f"Uz{j}"] + P[f"bz{j}"])
                r = _sigmoid(inp @ P[f"Wr{j}"] + hp @ P[f"Ur{j}"] + P[f"br{j}"])
                c = np.tanh(inp @ P[f"Wc{j}"] + (r * hp) @ P[f"Uc{j}"] + P[f"bc{j}"])
                hn = (1.0 - z) * hp + z * c
                step.append((inp, hp, z, r, c))
                h[j] = hn
                inp = hn
            out = np.tanh(inp @ P["Wo"] + P["bo"])
            cache.append((step, inp, out))
            outs.append(out)
        return outs, cache

    def backward(self, cache, douts) -> dict[str, np.ndarray]:
        P = self.params
        grads = {name: np.zeros_like(p) for name, p in P.items()}

        def acc(name, a, b):
            grads[name] += a.reshape(-1, a.shape[-1]).T @ b.reshape(-1, b.shape[-1])

        dh_next = [0.0] * self.levels
        for t in range(self.steps - 1, -1, -1):
            step, h_top, out = cache[t]
            dpre = douts[t] * (1.0 - out * out)
            acc("Wo", h_top, dpre)
            grads["bo"] += dpre.reshape(-1, self.n).sum(axis=0)
            dx = dpre @ P["Wo"].T
            for j in range(self.levels - 1, -1, -1):
                inp, hp, z, r, c = step[j]
                dh = dx + dh_next[j]
                dc_pre = dh * z * (1.0 - c * c)
                dz_pre = dh * (c - hp) * z * (1.0 - z)
                dh_prev = dh * (1.0 - z)
                drh = dc_pre @ P[f"Uc{j}"].T
                dr_pre = drh * hp * r * (1.0 - r)
                dh_prev = dh_prev + drh * r + dz_pre @ P[f"Uz{j}"].T + dr_pre @ P[f"Ur{j}"].T
                for g, dg in (("z", dz_pre), ("r", dr_pre), ("c", dc_pre)):
                    acc(f"W{g}{j}", inp, dg)
                    grads[f"b{g}{j}"] += dg.reshape(-1, self.hidden).sum(axis=0)
                acc(f"Uz{j}", hp, dz_pre)
                acc(f"Ur{j}", hp, dr_pre)
                acc(f"Uc{j}", r * hp, dc_pre)
                dh_next[j] = dh_prev
                if j > 0:
                    dx = dz_pre @ P[f"Wz{j}"].T + dr_pre @ P[f"Wr{j}"].T + dc_pre @ P[f"Wc{j}"].T
        return grads


ARCHS = {"vanilla": VanillaNet, "gru": StackedGruNet}


def build_net(arch: str, n: int, k: int, rng=None, **hyper) -> _Net:
    try:
        cls = ARCHS[arch]
    except KeyError:
        raise ValueError(f"unknown architecture {arch!r}") from None
    return cls(n, k, rng=rng, **hyper)


# --------------------------------------------------------------------------
# Loss


def loss_discounted_ce(outputs, z_sign, gamma: float = 0.5):
    """Discounted cross-entropy between noise signs and network outputs.

    Step ``t`` of ``T`` is weighted by ``gamma**(T-t)``. Targets are
    ``(1 - z_sign)/2`` and predictions ``clip((1 - zhat)/2, 1e-12, 1-1e-12)``.
    The per-example loss is summed over steps, averaged over bits, and the
    result averaged over any leading batch dimensions.

    Returns:
        ``(loss, douts)`` with ``douts[t]`` the gradient w.r.t. ``outputs[t]``.
    """
    if not outputs:
        raise ValueError("no outputs")
    if not 0 < gamma <= 1:
        raise ValueError(f"discount must lie in (0, 1], got {gamma}")
    q = (1.0 - np.asarray(z_sign, dtype=np.float64)) / 2.0
    n = q.shape[-1]
    n_examples = q.size // n
    T = len(outputs)
    total = 0.0
    douts = []
    for t, zhat in enumerate(outputs, start=1):
        w = gamma ** (T - t)
        raw = (1.0 - zhat) / 2.0
        p = np.clip(raw, CLIP, 1.0 - CLIP)
        ce = -(q * np.log(p) + (1.0 - q) * np.log1p(-p))
        total += w * ce.sum()
        dp = (-q / p + (1.0 - q) / (1.0 - p)) * ((raw > CLIP) & (raw < 1.0 - CLIP))
        douts.append(w * dp * (-0.5) / (n * n_examples))
    return total / (n * n_examples), douts


# --------------------------------------------------------------------------
# Optimiser


class Adam:
    """Bias-corrected Adam over a dict of arrays, updated in insertion order."""

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}

    def step(self, params: dict, grads: dict):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1.0 - b1**self.t
        c2 = 1.0 - b2**self.t
        for name, p in params.items():
            g = grads[name]
            if g.shape != p.shape:
                raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape} for {name}")
            m = self.m.setdefault(name, np.zeros_like(p))
            v = self.v.setdefault(name, np.zeros_like(p))
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def adam_step(params, grads, state: Adam) -> Adam:
    state.step(params, grads)
    return state


# --------------------------------------------------------------------------
# Serialisation


def save_model(net: _Net, meta: dict | None = None) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "arch": net.arch,
        "n": net.n,
        "k": net.k,
        "hyper": net.hyper(),
        "meta": meta or {},
        "params": {
            name: {"shape": list(p.shape), "data": p.ravel().tolist()} for name, p in net.params.items()
        },
    }
    return json.dumps(doc, indent=1)


def load_model(text: str, expect_n: int | None = None, expect_k: int | None = None):
    """Parse a model document; returns ``(net, meta)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {doc.get('format_version') if isinstance(doc, dict) else None!r}")
    try:
        arch, n, k, hyper, params = doc["arch"], doc["n"], doc["k"], doc["hyper"], doc["params"]
    except KeyError as exc:
        raise ModelFormatError(f"missing field {exc}") from None
    if arch not in ARCHS:
        raise ModelFormatError(f"unknown architecture {arch!r}")
    if (expect_n is not None and n != expect_n) or (expect_k is not None and k != expect_k):
        raise DimensionError(f"model built for ({n},{k}) but decoder needs ({expect_n},{expect_k})")
    net = ARCHS[arch](n, k, **hyper)
    if set(params) != set(net.params):
        raise ModelFormatError("parameter names do not match the architecture")
    for name, p in net.params.items():
        entry = params[name]
        data = np.asarray(entry["data"], dtype=np.float64)
        if list(p.shape) != list(entry["shape"]) or data.size != p.size:
            raise ModelFormatError(f"parameter {name} has the wrong shape")
        p[...] = data.reshape(p.shape)
    return net, doc.get("meta", {})
