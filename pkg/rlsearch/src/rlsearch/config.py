"""Environment configuration, mirrored one-to-one by the JSON config file."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

# Motion limits and frame skipping per maze class; used when a config names
# a preset instead of spelling the numbers out.
PRESETS = {
    "corridor": {"motion_limit": 500, "frame_skip": 4},
    "capillary": {"motion_limit": 800, "frame_skip": 4},
    "brain": {"motion_limit": 3500, "frame_skip": 16},
}


@dataclass
class RLEnvConfig:
    instance_path: str
    motion_limit: int = 500
    frame_skip: int = 4
    gather_radius: int = 10
    seed: int = 0
    total_steps: int = 100_000
    out_path: str = "best.seq"

    def __post_init__(self):
        if self.motion_limit <= 0:
            raise ValueError("motion limit must be positive")
        if self.frame_skip < 1:
            raise ValueError("frame skip must be at least 1")
        if self.gather_radius < 0:
            raise ValueError("gather radius must be non-negative")


def load_config(path: str) -> RLEnvConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    preset = doc.pop("preset", None)
    if preset:
        if preset not in PRESETS:
            raise ValueError(f"unknown preset {preset!r}")
        for key, value in PRESETS[preset].items():
            doc.setdefault(key, value)
    return RLEnvConfig(
        instance_path=doc["instance"],
        motion_limit=int(doc.get("motion_limit", 500)),
        frame_skip=int(doc.get("frame_skip", 4)),
        gather_radius=int(doc.get("gather_radius", 10)),
        seed=int(doc.get("seed", 0)),
        total_steps=int(doc.get("total_steps", 100_000)),
        out_path=doc.get("out", "best.seq"),
    )
