"""Synthetic test scenarios with exact ground-truth masks.

Three scenarios, all pure functions of their parameters and seed:

* ``static`` - a constant background, no foreground.
* ``bimodal_flicker`` - every background pixel alternates each frame between
  two fixed colors (random per-pixel phase), the classic failure case for
  unimodal per-pixel averages.
* ``moving_box`` - a uniform box of a distinct color translating at constant
  velocity over a static or flickering background; box pixels are the
  foreground truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from octabg.octree import Color

SCENARIOS = ("static", "bimodal_flicker", "moving_box")


@dataclass(frozen=True)
class BoxSpec:
    """A size x size square starting at ``start`` (x, y), moving by ``velocity`` per frame."""

    size: int
    color: Color
    start: tuple[int, int]
    velocity: tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class SyntheticParams:
    width: int
    height: int
    frame_count: int
    background_colors: tuple[Color, ...]
    box: BoxSpec | None = None
    seed: int = 0


def generate_synthetic(scenario: str, params: SyntheticParams
                       ) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Returns (frames, truth masks), deterministic for a given seed."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}, expected one of {SCENARIOS}")
    if params.width <= 0 or params.height <= 0 or params.frame_count <= 0:
        raise ValueError("width, height and frame_count must be positive")
    n_colors = len(params.background_colors)
    if scenario == "static" and n_colors != 1:
        raise ValueError("static scenario takes exactly one background color")
    if scenario == "bimodal_flicker" and n_colors != 2:
        raise ValueError("bimodal_flicker takes exactly two background colors")
    if scenario == "moving_box":
        if n_colors not in (1, 2):
            raise ValueError("moving_box takes one or two background colors")
        if params.box is None:
            raise ValueError("moving_box requires a box")
    elif params.box is not None:
        raise ValueError(f"{scenario} scenario does not take a box")

    h, w = params.height, params.width
    palette = np.array(params.background_colors, dtype=np.uint8)
    if n_colors == 2:
        rng = np.random.default_rng(params.seed)
        phase = rng.integers(0, 2, size=(h, w))

    box = params.box
    if box is not None:
        _check_box_path(box, w, h, params.frame_count)

    frames: list[np.ndarray] = []
    masks: list[np.ndarray] = []
    for t in range(params.frame_count):
        if n_colors == 1:
            frame = np.broadcast_to(palette[0], (h, w, 3)).copy()
        else:
            frame = palette[(phase + t) % 2]
        mask = np.zeros((h, w), dtype=bool)
        if box is not None:
            x = box.start[0] + t * box.velocity[0]
            y = box.start[1] + t * box.velocity[1]
            frame[y:y + box.size, x:x + box.size] = box.color
            mask[y:y + box.size, x:x + box.size] = True
        frames.append(np.ascontiguousarray(frame))
        masks.append(mask)
    return frames, masks


def _check_box_path(box: BoxSpec, width: int, height: int, frame_count: int) -> None:
    if box.size <= 0:
        raise ValueError("box size must be positive")
    for t in (0, frame_count - 1):  # linear motion: extremes are the endpoints
        x = box.start[0] + t * box.velocity[0]
        y = box.start[1] + t * box.velocity[1]
        if x < 0 or y < 0 or x + box.size > width or y + box.size > height:
            raise ValueError(
                f"box leaves the {width}x{height} frame at frame {t} "
                f"(position {x},{y}, size {box.size})"
            )
