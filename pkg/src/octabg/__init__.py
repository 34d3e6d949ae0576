"""Background modeling from a video's most frequent colors.

The model quantizes colors into fixed-depth octrees (one per grid region),
merges per-frame trees by path frequency, and labels a pixel foreground when
its quantized color path is absent from its region's merged tree.  Includes
frame-differencing and running-average baselines, an F0 evaluation harness,
PPM/PGM frame I/O and a synthetic scenario generator.
"""

from octabg.errors import FormatError
from octabg.octree import (
    Color,
    Octree,
    child_index,
    code_to_color,
    pack_code,
    pack_codes,
    quantize_color,
)
from octabg.model import (
    BackgroundModel,
    ModelConfig,
    build_background_model,
    build_frame_tree,
    load_model,
    merge_trees,
    read_model,
    region_bounds,
    region_of,
    save_model,
    write_model,
)
from octabg.detect import detect_frame_diff, detect_octree, detect_running_average
from octabg.evaluation import EvalStats, accumulate, emit_report, f0_score
from octabg.frame_io import (
    FrameSequence,
    load_frame,
    load_mask,
    read_mask_pgm,
    read_ppm,
    save_frame,
    save_mask,
    write_frame_sequence,
    write_mask_pgm,
    write_mask_sequence,
    write_ppm,
)
from octabg.synth import SCENARIOS, BoxSpec, SyntheticParams, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "BackgroundModel",
    "BoxSpec",
    "Color",
    "EvalStats",
    "FormatError",
    "FrameSequence",
    "ModelConfig",
    "Octree",
    "SCENARIOS",
    "SyntheticParams",
    "accumulate",
    "build_background_model",
    "build_frame_tree",
    "child_index",
    "code_to_color",
    "detect_frame_diff",
    "detect_octree",
    "detect_running_average",
    "emit_report",
    "f0_score",
    "generate_synthetic",
    "load_frame",
    "load_mask",
    "load_model",
    "merge_trees",
    "pack_code",
    "pack_codes",
    "quantize_color",
    "read_mask_pgm",
    "read_model",
    "read_ppm",
    "region_bounds",
    "region_of",
    "save_frame",
    "save_mask",
    "save_model",
    "write_frame_sequence",
    "write_mask_pgm",
    "write_mask_sequence",
    "write_model",
    "write_ppm",
]
