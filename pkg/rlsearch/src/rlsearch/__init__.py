"""Reinforcement-learning search for short gathering command sequences.

Interoperates with the tiltgather CLI through its instance and sequence
file formats; the environment implements its own tilt simulation.
"""

from rlsearch.config import RLEnvConfig, load_config
from rlsearch.env import GatherEnv
from rlsearch.reward import RewardState, reward_step

__all__ = ["GatherEnv", "RLEnvConfig", "RewardState", "load_config", "reward_step"]
