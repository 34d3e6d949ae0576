"""Frequency-merged octree background models over a grid of frame regions.

Training builds one octree per frame group and region, then merges each
region's trees level by level: a child slot survives when the fraction of
input trees containing that path meets the threshold.  The merged trees hold
the region's most frequent quantized colors and are immutable afterwards.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from octabg.errors import FormatError
from octabg.octree import Octree, _Node, decode_tree, pack_codes


@dataclass(frozen=True)
class ModelConfig:
    """Training parameters.

    levels and the 100-frame training window are the method's standard
    settings; threshold, grid and group size are tuning choices.
    """

    levels: int = 4
    threshold: float = 0.5
    grid_rows: int = 1
    grid_cols: int = 1
    group_size: int = 1
    training_frames: int = 100

    def __post_init__(self):
        if not 1 <= self.levels <= 8:
            raise ValueError(f"levels must be in 1..8, got {self.levels}")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")
        if self.grid_rows < 1 or self.grid_cols < 1:
            raise ValueError("grid dimensions must be >= 1")
        if self.group_size < 1:
            raise ValueError("group_size must be >= 1")
        if self.training_frames < self.group_size:
            raise ValueError("training_frames must be >= group_size")


@dataclass
class BackgroundModel:
    """One merged octree per grid region, plus the configuration that built it."""

    config: ModelConfig
    frame_width: int
    frame_height: int
    trees: list[list[Octree]] = field(repr=False)

    def tree_at(self, row: int, col: int) -> Octree:
        return self.trees[row][col]


def region_of(x: int, y: int, width: int, height: int,
              grid_rows: int, grid_cols: int) -> tuple[int, int]:
    """Grid cell owning pixel (x, y); total over 0 <= x < width, 0 <= y < height."""
    row = min(grid_rows - 1, y * grid_rows // height)
    col = min(grid_cols - 1, x * grid_cols // width)
    return row, col


def region_bounds(extent: int, parts: int) -> list[int]:
    """Slice boundaries b[0..parts] such that part p covers [b[p], b[p+1]).

    Agrees with :func:`region_of`: pixel coordinate v lies in part
    ``v * parts // extent``.
    """
    return [(p * extent + parts - 1) // parts for p in range(parts + 1)]


def _check_frames(frames: list[np.ndarray]) -> tuple[int, int]:
    if not frames:
        raise ValueError("no frames given")
    first = frames[0]
    if first.ndim != 3 or first.shape[2] != 3 or first.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 3) uint8 frames, got {first.dtype} {first.shape}")
    for i, frame in enumerate(frames):
        if frame.shape != first.shape or frame.dtype != np.uint8:
            raise ValueError(
                f"frame {i} shape {frame.shape} does not match first frame {first.shape}"
            )
    h, w = first.shape[:2]
    return h, w


def build_frame_tree(frames, region: tuple[int, int], config: ModelConfig) -> Octree:
    """Tree holding every quantized color seen in ``region`` across one frame group."""
    frames = [np.asarray(f) for f in frames]
    if len(frames) != config.group_size:
        raise ValueError(f"expected a group of {config.group_size} frames, got {len(frames)}")
    h, w = _check_frames(frames)
    row, col = region
    if not (0 <= row < config.grid_rows and 0 <= col < config.grid_cols):
        raise ValueError(f"region {region} outside {config.grid_rows}x{config.grid_cols} grid")
    rows = region_bounds(h, config.grid_rows)
    cols = region_bounds(w, config.grid_cols)
    tree = Octree(config.levels)
    for frame in frames:
        block = frame[rows[row]:rows[row + 1], cols[col]:cols[col + 1]]
        for code in np.unique(pack_codes(block, config.levels)).tolist():
            tree.store_code(code)
    return tree


def merge_trees(trees, threshold: float, levels: int) -> Octree:
    """Merge trees keeping the paths frequent enough across the inputs.

    A child slot at any node survives iff the number of input trees
    containing that path, divided by the *total* number of input trees
    (empty trees count against the frequency), is >= threshold; the rule is
    applied level by level, descending only into retained children.  A
    retained branch can still die out at a deeper level, in which case it
    holds no full-depth leaves and no colors.
    """
    trees = list(trees)
    if not trees:
        raise ValueError("no trees to merge")
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    for tree in trees:
        if tree.depth != levels:
            raise ValueError(f"tree depth {tree.depth} does not match levels {levels}")
    total = len(trees)
    roots = [t.root for t in trees if t.root is not None]
    merged = Octree(levels)
    if roots:
        root = _merge_nodes(roots, total, threshold, levels)
        if any(child is not None for child in root.children):
            merged.root = root
    return merged


def _merge_nodes(nodes: list[_Node], total: int, threshold: float, remaining: int) -> _Node:
    # nodes holds only the inputs that still contain the current path; the
    # denominator stays the total tree count.
    result = _Node()
    if remaining == 0:
        return result
    for k in range(8):
        present = []
        for node in nodes:
            child = node.children[k]
            if child is not None:
                present.append(child)
        if present and len(present) / total >= threshold:
            result.children[k] = _merge_nodes(present, total, threshold, remaining - 1)
    return result


def build_background_model(frames, config: ModelConfig) -> BackgroundModel:
    """Train a model from the first ``config.training_frames`` frames.

    Frames are split into consecutive groups of ``group_size`` (a trailing
    partial group is discarded); each group contributes one tree per region,
    and each region's trees are merged with ``config.threshold``.
    """
    frames = [np.asarray(f) for f in frames]
    h, w = _check_frames(frames)
    usable = frames[:config.training_frames]
    n_groups = len(usable) // config.group_size
    if n_groups == 0:
        raise ValueError(
            f"need at least {config.group_size} frames for one group, got {len(usable)}"
        )
    region_trees: list[list[list[Octree]]] = [
        [[] for _ in range(config.grid_cols)] for _ in range(config.grid_rows)
    ]
    for g in range(n_groups):
        group = usable[g * config.group_size:(g + 1) * config.group_size]
        for r in range(config.grid_rows):
            for c in range(config.grid_cols):
                region_trees[r][c].append(build_frame_tree(group, (r, c), config))
    trees = [
        [merge_trees(region_trees[r][c], config.threshold, config.levels)
         for c in range(config.grid_cols)]
        for r in range(config.grid_rows)
    ]
    return BackgroundModel(config=config, frame_width=w, frame_height=h, trees=trees)


# Model file: magic, version, levels, grid, frame size, threshold as a
# fixed-point fraction (x10000), then row-major region records of one
# presence byte (0 = empty tree) plus the preorder tree serialization.
_MAGIC = b"OBGM"
_VERSION = 1
_HEADER = struct.Struct("<4sBBHHIIH")


def write_model(model: BackgroundModel) -> bytes:
    cfg = model.config
    out = bytearray()
    out += _HEADER.pack(
        _MAGIC, _VERSION, cfg.levels, cfg.grid_rows, cfg.grid_cols,
        model.frame_width, model.frame_height, round(cfg.threshold * 10000),
    )
    for row in model.trees:
        for tree in row:
            if tree.is_empty:
                out.append(0)
            else:
                out.append(1)
                out += tree.to_bytes()
    return bytes(out)


def read_model(data: bytes) -> BackgroundModel:
    if len(data) < _HEADER.size:
        raise FormatError("truncated model header", len(data))
    magic, version, levels, rows, cols, width, height, thr_fp = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {_MAGIC!r}", 0)
    if version != _VERSION:
        raise FormatError(f"unsupported model version {version}", 4)
    config = ModelConfig(
        levels=levels, threshold=thr_fp / 10000.0, grid_rows=rows, grid_cols=cols,
        group_size=1, training_frames=1,  # training-only fields are not persisted
    )
    pos = _HEADER.size
    trees: list[list[Octree]] = []
    for _ in range(rows):
        tree_row = []
        for _ in range(cols):
            if pos >= len(data):
                raise FormatError("truncated region record", pos)
            flag = data[pos]
            pos += 1
            if flag == 0:
                tree_row.append(Octree(levels))
            elif flag == 1:
                tree, pos = decode_tree(data, pos, levels)
                tree_row.append(tree)
            else:
                raise FormatError(f"bad region presence flag {flag}", pos - 1)
        trees.append(tree_row)
    if pos != len(data):
        raise FormatError("trailing data after model", pos)
    return BackgroundModel(config=config, frame_width=width, frame_height=height, trees=trees)


def save_model(path, model: BackgroundModel) -> None:
    with open(path, "wb") as f:
        f.write(write_model(model))


def load_model(path) -> BackgroundModel:
    with open(path, "rb") as f:
        return read_model(f.read())
