"""Fixed-depth presence octrees over 8-bit RGB colors.

A tree of depth L (1..8) consumes the L most significant bits of each
channel, one bit plane per level.  The child slot selected at bit plane
``i`` is ``(r_i << 2) | (g_i << 1) | b_i``, so every color maps to a unique
root-to-leaf path, and two colors share a leaf exactly when their top L
bits agree in all three channels.  Nodes carry no payload: the set of
stored quantized colors *is* the tree structure, and every operation is
plain integer/bitwise work.
"""

from __future__ import annotations

import numpy as np

from octabg.errors import FormatError

Color = tuple[int, int, int]


def _spread_table(offset: int) -> np.ndarray:
    """Lookup table spreading the 8 bits of a channel to every third bit."""
    table = np.zeros(256, dtype=np.uint32)
    for value in range(256):
        spread = 0
        for i in range(8):
            spread |= ((value >> i) & 1) << (3 * i + offset)
        table[value] = spread
    return table


# One table per channel; OR-ing the three gives the full-depth path code.
_SPREAD_R = _spread_table(2)
_SPREAD_G = _spread_table(1)
_SPREAD_B = _spread_table(0)


def _check_levels(levels: int) -> None:
    if not 1 <= levels <= 8:
        raise ValueError(f"levels must be in 1..8, got {levels}")


def _check_color(color: Color) -> None:
    r, g, b = color
    if not (0 <= r <= 255 and 0 <= g <= 255 and 0 <= b <= 255):
        raise ValueError(f"color channels must be in 0..255, got {color}")


def child_index(color: Color, bit_position: int) -> int:
    """Child slot (0..7) selected by one bit plane of a color; 7 is the MSB plane."""
    r, g, b = color
    return (
        (((r >> bit_position) & 1) << 2)
        | (((g >> bit_position) & 1) << 1)
        | ((b >> bit_position) & 1)
    )


def quantize_color(color: Color, levels: int) -> Color:
    """Keep the ``levels`` most significant bits of each channel, zero the rest.

    Idempotent; the per-channel error is below ``2 ** (8 - levels)``.
    """
    _check_levels(levels)
    mask = (0xFF << (8 - levels)) & 0xFF
    r, g, b = color
    return (r & mask, g & mask, b & mask)


def pack_code(color: Color, levels: int) -> int:
    """A color's root-to-leaf path as an integer of ``levels`` octal digits.

    Digit k (counting from the most significant digit) is the child slot
    taken at level k, i.e. ``child_index(color, 7 - k)``.
    """
    _check_levels(levels)
    _check_color(color)
    r, g, b = color
    code = int(_SPREAD_R[r] | _SPREAD_G[g] | _SPREAD_B[b])
    return code >> (3 * (8 - levels))


def pack_codes(pixels: np.ndarray, levels: int) -> np.ndarray:
    """Vectorized :func:`pack_code` over an ``(..., 3)`` uint8 array."""
    _check_levels(levels)
    pixels = np.asarray(pixels)
    if pixels.shape[-1] != 3 or pixels.dtype != np.uint8:
        raise ValueError(f"expected (..., 3) uint8 pixels, got {pixels.dtype} {pixels.shape}")
    codes = _SPREAD_R[pixels[..., 0]] | _SPREAD_G[pixels[..., 1]] | _SPREAD_B[pixels[..., 2]]
    return codes >> np.uint32(3 * (8 - levels))


def code_to_color(code: int, levels: int) -> Color:
    """Zero-filled representative color of a path code (inverse of pack_code)."""
    _check_levels(levels)
    r = g = b = 0
    for k in range(levels):
        digit = (code >> (3 * (levels - 1 - k))) & 7
        bit = 7 - k
        r |= ((digit >> 2) & 1) << bit
        g |= ((digit >> 1) & 1) << bit
        b |= (digit & 1) << bit
    return (r, g, b)


class _Node:
    __slots__ = ("children",)

    def __init__(self):
        self.children: list[_Node | None] = [None] * 8


class Octree:
    """Presence tree over quantized colors, with leaves at a fixed depth.

    ``depth`` counts levels below the root.  Storing never rebalances or
    allocates more than one node per missing path step, and membership of a
    color depends only on its top ``depth`` bits per channel.
    """

    __slots__ = ("depth", "root")

    def __init__(self, depth: int):
        _check_levels(depth)
        self.depth = depth
        self.root: _Node | None = None

    @property
    def is_empty(self) -> bool:
        return self.root is None

    @property
    def node_count(self) -> int:
        if self.root is None:
            return 0
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(ch for ch in node.children if ch is not None)
        return count

    def store(self, color: Color) -> None:
        """Insert a color's path, creating nodes as needed.  Idempotent."""
        _check_color(color)
        if self.root is None:
            self.root = _Node()
        node = self.root
        for bit in range(7, 7 - self.depth, -1):
            index = child_index(color, bit)
            child = node.children[index]
            if child is None:
                child = _Node()
                node.children[index] = child
            node = child

    def store_code(self, code: int) -> None:
        """Insert a path given as a packed code (fast path for bulk loads)."""
        if self.root is None:
            self.root = _Node()
        node = self.root
        for shift in range(3 * (self.depth - 1), -1, -3):
            index = (code >> shift) & 7
            child = node.children[index]
            if child is None:
                child = _Node()
                node.children[index] = child
            node = child

    def contains(self, color: Color) -> bool:
        """True iff the full-depth path of ``color`` exists.  Empty tree: False."""
        _check_color(color)
        node = self.root
        if node is None:
            return False
        for bit in range(7, 7 - self.depth, -1):
            node = node.children[child_index(color, bit)]
            if node is None:
                return False
        return True

    def contains_code(self, code: int) -> bool:
        node = self.root
        if node is None:
            return False
        for shift in range(3 * (self.depth - 1), -1, -3):
            node = node.children[(code >> shift) & 7]
            if node is None:
                return False
        return True

    def prune(self, new_depth: int) -> "Octree":
        """Copy of the tree truncated to ``new_depth`` levels below the root.

        Nodes at the new bottom level become leaves; membership of the result
        is membership of the original restricted to ``new_depth``-bit prefixes.
        """
        if not 1 <= new_depth <= self.depth:
            raise ValueError(f"new_depth must be in 1..{self.depth}, got {new_depth}")
        pruned = Octree(new_depth)
        if self.root is not None:
            pruned.root = _copy_truncated(self.root, new_depth)
        return pruned

    def leaf_codes(self) -> list[int]:
        """Packed codes of all leaves at the full depth, ascending."""
        codes: list[int] = []
        if self.root is not None:
            _collect_codes(self.root, 0, self.depth, codes)
        return codes

    def leaf_colors(self) -> set[Color]:
        """Zero-filled representative colors of all full-depth leaves."""
        return {code_to_color(code, self.depth) for code in self.leaf_codes()}

    def to_bytes(self) -> bytes:
        """Preorder serialization: one child-bitmask byte per node.

        Bit k (LSB = child 0) is set iff child k is present; present children
        follow in ascending k order.  An empty tree serializes to zero bytes.
        """
        if self.root is None:
            return b""
        out = bytearray()
        _encode_node(self.root, out)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes, depth: int) -> "Octree":
        """Parse a :meth:`to_bytes` serialization, validating depth and length."""
        if not data:
            return cls(depth)
        tree, pos = decode_tree(data, 0, depth)
        if pos != len(data):
            raise FormatError("trailing data after octree", pos)
        return tree

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Octree):
            return NotImplemented
        return self.depth == other.depth and self.to_bytes() == other.to_bytes()

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"<Octree depth={self.depth} nodes={self.node_count}>"


def decode_tree(data: bytes, pos: int, depth: int) -> tuple[Octree, int]:
    """Decode one non-empty tree starting at ``pos``; returns (tree, next pos)."""
    _check_levels(depth)
    tree = Octree(depth)
    tree.root, pos = _decode_node(data, pos, 0, depth)
    return tree, pos


def _encode_node(node: _Node, out: bytearray) -> None:
    mask = 0
    for k in range(8):
        if node.children[k] is not None:
            mask |= 1 << k
    out.append(mask)
    for k in range(8):
        child = node.children[k]
        if child is not None:
            _encode_node(child, out)


def _decode_node(data: bytes, pos: int, level: int, depth: int) -> tuple[_Node, int]:
    if pos >= len(data):
        raise FormatError("truncated octree data", pos)
    mask = data[pos]
    pos += 1
    if level == depth and mask != 0:
        raise FormatError(f"octree node below leaf depth {depth}", pos - 1)
    node = _Node()
    for k in range(8):
        if mask & (1 << k):
            node.children[k], pos = _decode_node(data, pos, level + 1, depth)
    return node, pos


def _copy_truncated(node: _Node, remaining: int) -> _Node:
    clone = _Node()
    if remaining > 0:
        for k, child in enumerate(node.children):
            if child is not None:
                clone.children[k] = _copy_truncated(child, remaining - 1)
    return clone


def _collect_codes(node: _Node, code: int, remaining: int, out: list[int]) -> None:
    if remaining == 0:
        out.append(code)
        return
    for k in range(8):
        child = node.children[k]
        if child is not None:
            _collect_codes(child, (code << 3) | k, remaining - 1, out)
