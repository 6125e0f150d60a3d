"""Compact proximal-policy-optimization learner with an image-input policy.

Fixed defaults throughout (the values commonly published for pixel-input
PPO): Adam 2.5e-4, discount 0.99, advantage smoothing 0.95, clip 0.2, four
epochs over 256-sized minibatches per 2048-step rollout, entropy bonus 0.01.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn
from torch.distributions import Categorical

LEARNING_RATE = 2.5e-4
GAMMA = 0.99
GAE_LAMBDA = 0.95
CLIP_RANGE = 0.2
ROLLOUT_STEPS = 2048
MINIBATCH = 256
EPOCHS = 4
VALUE_COEF = 0.5
ENTROPY_COEF = 0.01
MAX_GRAD_NORM = 0.5


def _layer_init(layer, std=np.sqrt(2), bias=0.0):
    nn.init.orthogonal_(layer.weight, std)
    nn.init.constant_(layer.bias, bias)
    return layer


class CnnPolicy(nn.Module):
    """Convolutional torso with policy and value heads for 84x84 images."""

    def __init__(self, n_actions: int):
        super().__init__()
        self.torso = nn.Sequential(
            _layer_init(nn.Conv2d(1, 32, 8, stride=4)),
            nn.ReLU(),
            _layer_init(nn.Conv2d(32, 64, 4, stride=2)),
            nn.ReLU(),
            _layer_init(nn.Conv2d(64, 64, 3, stride=1)),
            nn.ReLU(),
            nn.Flatten(),
            _layer_init(nn.Linear(64 * 7 * 7, 512)),
            nn.ReLU(),
        )
        self.policy_head = _layer_init(nn.Linear(512, n_actions), std=0.01)
        self.value_head = _layer_init(nn.Linear(512, 1), std=1.0)

    def forward(self, obs: torch.Tensor):
        hidden = self.torso(obs)
        return self.policy_head(hidden), self.value_head(hidden).squeeze(-1)


def _to_tensor(obs: np.ndarray) -> torch.Tensor:
    return torch.as_tensor(obs, dtype=torch.float32).unsqueeze(0).unsqueeze(0) / 255.0


def train_ppo(env, total_steps: int, seed: int = 0, progress=None) -> None:
    """Run the learner for ``total_steps`` environment steps.

    The environment itself retains the best gathering command log found, so
    this function has no return value of its own.
    """
    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)
    model = CnnPolicy(n_actions=8)
    optimizer = torch.optim.Adam(model.parameters(), lr=LEARNING_RATE, eps=1e-5)

    obs = env.reset()
    steps_done = 0
    while steps_done < total_steps:
        horizon = min(ROLLOUT_STEPS, total_steps - steps_done)
        obs_buf = np.zeros((horizon, 1, 84, 84), dtype=np.float32)
        act_buf = np.zeros(horizon, dtype=np.int64)
        logp_buf = np.zeros(horizon, dtype=np.float32)
        rew_buf = np.zeros(horizon, dtype=np.float32)
        done_buf = np.zeros(horizon, dtype=np.float32)
        val_buf = np.zeros(horizon + 1, dtype=np.float32)

        with torch.no_grad():
            for t in range(horizon):
                tensor = _to_tensor(obs)
                logits, value = model(tensor)
                dist = Categorical(logits=logits)
                action = int(dist.sample().item())
                obs_buf[t, 0] = tensor.numpy()[0, 0]
                act_buf[t] = action
                logp_buf[t] = float(dist.log_prob(torch.tensor(action)).item())
                val_buf[t] = float(value.item())
                obs, reward, done, _ = env.step(action)
                rew_buf[t] = reward
                done_buf[t] = float(done)
                if done:
                    obs = env.reset()
            val_buf[horizon] = float(model(_to_tensor(obs))[1].item())

        advantages = np.zeros(horizon, dtype=np.float32)
        last_gae = 0.0
        for t in reversed(range(horizon)):
            nonterminal = 1.0 - done_buf[t]
            delta = rew_buf[t] + GAMMA * val_buf[t + 1] * nonterminal - val_buf[t]
            last_gae = delta + GAMMA * GAE_LAMBDA * nonterminal * last_gae
            advantages[t] = last_gae
        returns = advantages + val_buf[:horizon]

        obs_t = torch.as_tensor(obs_buf)
        act_t = torch.as_tensor(act_buf)
        logp_t = torch.as_tensor(logp_buf)
        adv_t = torch.as_tensor(advantages)
        ret_t = torch.as_tensor(returns)

        indices = np.arange(horizon)
        for _ in range(EPOCHS):
            rng.shuffle(indices)
            for start in range(0, horizon, MINIBATCH):
                batch = torch.as_tensor(indices[start:start + MINIBATCH])
                logits, values = model(obs_t[batch])
                dist = Categorical(logits=logits)
                logp = dist.log_prob(act_t[batch])
                ratio = torch.exp(logp - logp_t[batch])
                adv = adv_t[batch]
                adv = (adv - adv.mean()) / (adv.std() + 1e-8)
                surrogate = torch.min(
                    ratio * adv,
                    torch.clamp(ratio, 1 - CLIP_RANGE, 1 + CLIP_RANGE) * adv,
                )
                policy_loss = -surrogate.mean()
                value_loss = ((values - ret_t[batch]) ** 2).mean()
                entropy = dist.entropy().mean()
                loss = policy_loss + VALUE_COEF * value_loss - ENTROPY_COEF * entropy
                optimizer.zero_grad()
                loss.backward()
                nn.utils.clip_grad_norm_(model.parameters(), MAX_GRAD_NORM)
                optimizer.step()

        steps_done += horizon
        if progress is not None:
            progress(steps_done, env)
