"""Per-pixel foreground classification.

The octree detector labels a pixel foreground when its quantized color path
is absent from its region's merged tree.  Two classic baselines are included
for comparison: frame-on-frame differencing and a running per-pixel mean.
Masks are boolean arrays, True = foreground.
"""

from __future__ import annotations

import numpy as np

from octabg.model import BackgroundModel, region_bounds
from octabg.octree import pack_codes


def _check_pair(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape[:2] != b.shape[:2]:
        raise ValueError(f"{what}: dimensions {a.shape[:2]} vs {b.shape[:2]} do not match")


def detect_octree(model: BackgroundModel, frame: np.ndarray) -> np.ndarray:
    """Mask of pixels whose quantized color is missing from their region's tree.

    Read-only over the model; the result depends only on the top
    ``config.levels`` bits of each channel.
    """
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3 or frame.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 3) uint8 frame, got {frame.dtype} {frame.shape}")
    if frame.shape[:2] != (model.frame_height, model.frame_width):
        raise ValueError(
            f"frame is {frame.shape[1]}x{frame.shape[0]}, model expects "
            f"{model.frame_width}x{model.frame_height}"
        )
    cfg = model.config
    codes = pack_codes(frame, cfg.levels)
    rows = region_bounds(model.frame_height, cfg.grid_rows)
    cols = region_bounds(model.frame_width, cfg.grid_cols)
    foreground = np.zeros(codes.shape, dtype=bool)
    for r in range(cfg.grid_rows):
        for c in range(cfg.grid_cols):
            block = codes[rows[r]:rows[r + 1], cols[c]:cols[c + 1]]
            if block.size == 0:
                continue
            leaves = model.trees[r][c].leaf_codes()
            if leaves:
                background = np.isin(block, np.asarray(leaves, dtype=codes.dtype))
            else:
                # empty region tree: nothing is background
                background = np.zeros(block.shape, dtype=bool)
            foreground[rows[r]:rows[r + 1], cols[c]:cols[c + 1]] = ~background
    return foreground


def detect_frame_diff(previous: np.ndarray, current: np.ndarray,
                      diff_threshold: int = 30) -> np.ndarray:
    """Foreground where any channel changed by strictly more than the threshold."""
    previous = np.asarray(previous)
    current = np.asarray(current)
    _check_pair(previous, current, "frame difference")
    delta = np.abs(current.astype(np.int16) - previous.astype(np.int16)).max(axis=2)
    return delta > diff_threshold


def detect_running_average(frames_seen: int, average: np.ndarray, current: np.ndarray,
                           diff_threshold: int = 30) -> tuple[np.ndarray, np.ndarray]:
    """One step of the running-mean baseline.

    ``average`` is the float per-pixel mean of the ``frames_seen`` frames
    already consumed (seed it with the first frame and frames_seen=1).
    Returns the mask for ``current`` plus the average updated to include it.
    A pixel is foreground when some channel deviates from the mean by
    strictly more than the threshold; with a bimodal background both modes
    end up far from the converged mean and are flagged forever.
    """
    average = np.asarray(average, dtype=np.float64)
    current = np.asarray(current)
    _check_pair(average, current, "running average")
    delta = np.abs(current.astype(np.float64) - average).max(axis=2)
    mask = delta > diff_threshold
    updated = average + (current - average) / (frames_seen + 1)
    return mask, updated
