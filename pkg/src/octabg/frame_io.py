"""Binary PPM/PGM codecs and directory-backed frame sequences.

Frames travel as P6 PPM (maxval 255) and masks as P5 PGM restricted to the
values 0 (background) and 255 (foreground).  A frame sequence is a directory
of zero-padded ``.ppm`` files whose lexicographic name order is the frame
order; no container formats are handled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from octabg.errors import FormatError

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _next_token(data: bytes, pos: int) -> tuple[bytes, int, int]:
    """Next header token after whitespace/comments; returns (token, start, end)."""
    n = len(data)
    while pos < n:
        ch = data[pos]
        if ch == 0x23:  # '#' comment runs to end of line
            eol = data.find(b"\n", pos)
            if eol < 0:
                raise FormatError("unterminated comment in header", pos)
            pos = eol + 1
        elif ch in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise FormatError("unexpected end of header", pos)
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != 0x23:
        pos += 1
    return data[start:pos], start, pos


def _read_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    """Parse a netpbm header; returns (width, height, payload offset)."""
    token, start, pos = _next_token(data, 0)
    if token != magic:
        raise FormatError(f"bad magic {token!r}, expected {magic!r}", start)
    dims = []
    for name in ("width", "height"):
        token, start, pos = _next_token(data, pos)
        if not token.isdigit():
            raise FormatError(f"malformed {name} {token!r}", start)
        value = int(token)
        if value <= 0:
            raise FormatError(f"{name} must be positive, got {value}", start)
        dims.append(value)
    token, start, pos = _next_token(data, pos)
    if not token.isdigit():
        raise FormatError(f"malformed maxval {token!r}", start)
    if int(token) != 255:
        raise FormatError(f"unsupported maxval {int(token)}", start)
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError("missing whitespace before pixel data", pos)
    return dims[0], dims[1], pos + 1


def _read_payload(data: bytes, payload: int, expected: int) -> bytes:
    body = data[payload:payload + expected]
    if len(body) < expected:
        raise FormatError(
            f"truncated pixel data: need {expected} bytes, have {len(body)}", payload
        )
    if len(data) > payload + expected:
        raise FormatError("trailing data after pixel payload", payload + expected)
    return body


def read_ppm(data: bytes) -> np.ndarray:
    """Decode a binary P6 PPM into an (h, w, 3) uint8 array."""
    width, height, payload = _read_header(data, b"P6")
    body = _read_payload(data, payload, width * height * 3)
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(frame: np.ndarray) -> bytes:
    frame = np.asarray(frame)
    if frame.ndim != 3 or frame.shape[2] != 3 or frame.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 3) uint8 frame, got {frame.dtype} {frame.shape}")
    h, w = frame.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + frame.tobytes()


def read_mask_pgm(data: bytes) -> np.ndarray:
    """Decode a binary P5 PGM of 0/255 values into an (h, w) bool mask."""
    width, height, payload = _read_header(data, b"P5")
    body = _read_payload(data, payload, width * height)
    values = np.frombuffer(body, dtype=np.uint8)
    bad = (values != 0) & (values != 255)
    if bad.any():
        first = int(np.argmax(bad))
        raise FormatError(f"non-binary mask value {values[first]}", payload + first)
    return (values == 255).reshape(height, width)


def write_mask_pgm(mask: np.ndarray) -> bytes:
    mask = np.asarray(mask)
    if mask.ndim != 2 or mask.dtype != bool:
        raise ValueError(f"expected (h, w) bool mask, got {mask.dtype} {mask.shape}")
    h, w = mask.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.where(mask, 255, 0).astype(np.uint8).tobytes()


def load_frame(path) -> np.ndarray:
    return read_ppm(Path(path).read_bytes())


def save_frame(path, frame: np.ndarray) -> None:
    Path(path).write_bytes(write_ppm(frame))


def load_mask(path) -> np.ndarray:
    return read_mask_pgm(Path(path).read_bytes())


def save_mask(path, mask: np.ndarray) -> None:
    Path(path).write_bytes(write_mask_pgm(mask))


@dataclass
class FrameSequence:
    """An ordered directory of same-sized PPM frames."""

    directory: Path
    names: list[str]
    width: int
    height: int

    @classmethod
    def scan(cls, directory) -> "FrameSequence":
        directory = Path(directory)
        names = sorted(p.name for p in directory.glob("*.ppm"))
        if not names:
            raise ValueError(f"no .ppm frames in {directory}")
        first = load_frame(directory / names[0])
        return cls(directory=directory, names=names,
                   width=first.shape[1], height=first.shape[0])

    def __len__(self) -> int:
        return len(self.names)

    def path(self, index: int) -> Path:
        return self.directory / self.names[index]

    def items(self) -> Iterator[tuple[str, np.ndarray]]:
        """Yield (file name, frame), checking each frame against the sequence size."""
        for name in self.names:
            frame = load_frame(self.directory / name)
            if frame.shape[:2] != (self.height, self.width):
                raise ValueError(
                    f"frame {name} is {frame.shape[1]}x{frame.shape[0]}, "
                    f"sequence is {self.width}x{self.height}"
                )
            yield name, frame

    def frames(self) -> Iterator[np.ndarray]:
        for _, frame in self.items():
            yield frame

    def load_all(self) -> list[np.ndarray]:
        return list(self.frames())


def write_frame_sequence(directory, frames, start: int = 1) -> FrameSequence:
    """Write frames as ``frame_000001.ppm`` ... and return the scanned sequence."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames, start=start):
        save_frame(directory / f"frame_{i:06d}.ppm", frame)
    return FrameSequence.scan(directory)


def write_mask_sequence(directory, masks, names) -> list[str]:
    """Write masks as PGMs named after the given frame basenames."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for mask, name in zip(masks, names):
        out = Path(name).stem + ".pgm"
        save_mask(directory / out, mask)
        written.append(out)
    return written
