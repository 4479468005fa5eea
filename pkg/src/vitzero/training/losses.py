"""The training loss and its gradients.

Per sample: squared value error plus policy cross-entropy,
l = (c_win - v)^2 - pi . log p, with p clamped at 1e-7 before the log;
a batch loss is the mean over its samples.
"""

from __future__ import annotations

import numpy as np
import torch

P_CLAMP = 1e-7


class NonFiniteLossError(ArithmeticError):
    """Loss or gradients stopped being finite."""


def loss_terms(value: torch.Tensor, c_win: torch.Tensor, policy: torch.Tensor,
               pi: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """(total, value_mse, policy_ce), each a scalar tensor (batch means)."""
    mse = ((c_win - value) ** 2).mean()
    ce = -(pi * torch.log(policy.clamp_min(P_CLAMP))).sum(dim=1).mean()
    total = mse + ce
    if not torch.isfinite(total):
        raise NonFiniteLossError(f"loss diverged: mse={float(mse)} ce={float(ce)}")
    return total, mse, ce


def loss(v, c_win, p, pi) -> float:
    """Scalar convenience wrapper over numpy/python inputs. Batched
    inputs average over the leading dimension."""
    v_t = torch.atleast_1d(torch.as_tensor(v, dtype=torch.float64))
    c_t = torch.atleast_1d(torch.as_tensor(c_win, dtype=torch.float64))
    p_t = torch.atleast_2d(torch.as_tensor(np.asarray(p), dtype=torch.float64))
    pi_t = torch.atleast_2d(torch.as_tensor(np.asarray(pi), dtype=torch.float64))
    total, _, _ = loss_terms(v_t, c_t, p_t, pi_t)
    return float(total)


def batch_loss(model, planes: torch.Tensor, pi: torch.Tensor, c_win: torch.Tensor,
               game_id) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    value, policy = model(planes, game_id)
    return loss_terms(value, c_win, policy, pi)


def compute_gradients(model, planes: torch.Tensor, pi: torch.Tensor,
                      c_win: torch.Tensor, game_id) -> tuple[float, dict[str, torch.Tensor]]:
    """Analytic gradients of the batch loss for every learnable array
    (static buffers such as the game tokens have none)."""
    model.zero_grad(set_to_none=True)
    total, _, _ = batch_loss(model, planes, pi, c_win, game_id)
    total.backward()
    grads = {}
    for name, p in model.named_parameters():
        g = p.grad
        grads[name] = torch.zeros_like(p) if g is None else g.detach().clone()
        if not torch.isfinite(grads[name]).all():
            raise NonFiniteLossError(f"non-finite gradient in {name}")
    model.zero_grad(set_to_none=True)
    return float(total.detach()), grads
