"""Adam optimizer over named parameter arrays."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ValidationError


@dataclass
class AdamState:
    """First/second moment estimates plus the shared step counter."""

    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0

    @classmethod
    def for_params(cls, params) -> "AdamState":
        state = cls()
        for name, arr in params.named_arrays():
            state.m[name] = np.zeros_like(arr)
            state.v[name] = np.zeros_like(arr)
        return state


def adam_step(params, grads: dict, state: AdamState, learning_rate: float,
              beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    """One in-place Adam update; returns the mutated state."""
    state.t += 1
    t = state.t
    for name, arr in params.named_arrays():
        g = grads.get(name)
        if g is None:
            raise ValidationError(f"missing gradient for {name}")
        if g.shape != arr.shape:
            raise ValidationError(f"gradient shape mismatch for {name}")
        m = state.m[name]
        v = state.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1 ** t)
        v_hat = v / (1.0 - beta2 ** t)
        arr -= learning_rate * m_hat / (np.sqrt(v_hat) + eps)
    return state
