"""Column-major (bitsliced) bit-matrix layout.

A SlicedBlock stores an M x W bit matrix as M machine words: word i holds
bit position i of W parallel lanes, lane j living in bit j (LSB-first) of
every word. A RowBlock is the conventional row-major counterpart: one
M-bit integer per lane, bit i of a row = bit position i.

Register rotation is implemented by moving the block's origin index, not
by shifting bits, so a rotation costs no word-level logic at all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

LANE_WIDTHS = (32, 64)


class RaggedRowsError(ValueError):
    """Rows of unequal length were passed where a rectangle is required."""


@dataclass(frozen=True)
class RowBlock:
    """Row-major bit matrix: rows[j] is lane j's M-bit value, LSB-first."""

    rows: tuple[int, ...]
    length: int  # M, bits per row

    def __post_init__(self):
        for r in self.rows:
            if r < 0 or r >> self.length:
                raise RaggedRowsError(
                    f"row value {r:#x} does not fit in {self.length} bits"
                )

    @classmethod
    def from_bit_lists(cls, rows: list[list[int]]) -> "RowBlock":
        if not rows:
            raise RaggedRowsError("empty row block")
        m = len(rows[0])
        if any(len(r) != m for r in rows):
            raise RaggedRowsError("rows have unequal lengths")
        packed = tuple(sum(b << i for i, b in enumerate(r)) for r in rows)
        return cls(packed, m)

    @property
    def width(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class SlicedBlock:
    """Column-major bit matrix: register(i) holds bit i of all W lanes."""

    width: int  # W, lane count
    words: tuple[int, ...]
    _origin: int = field(default=0)

    def __post_init__(self):
        if self.width not in LANE_WIDTHS:
            raise ValueError(f"lane width must be one of {LANE_WIDTHS}")

    @property
    def depth(self) -> int:
        """M, the number of bit positions."""
        return len(self.words)

    @property
    def lane_mask(self) -> int:
        return (1 << self.width) - 1

    def register(self, i: int) -> int:
        if not 0 <= i < self.depth:
            raise IndexError(f"register {i} out of range [0, {self.depth})")
        return self.words[(self._origin + i) % self.depth]

    def registers(self) -> tuple[int, ...]:
        """All registers in logical order (materialises the origin)."""
        o = self._origin
        if o == 0:
            return self.words
        return self.words[o:] + self.words[:o]

    @classmethod
    def zero(cls, width: int, depth: int) -> "SlicedBlock":
        return cls(width, (0,) * depth)

    def dump(self) -> str:
        """Debug dump: one register per line as zero-padded hex."""
        digits = self.width // 4
        return "\n".join(
            f"reg[{i:3d}] = {self.register(i):0{digits}x}" for i in range(self.depth)
        )


def transpose_to_sliced(rows: RowBlock, width: int | None = None) -> SlicedBlock:
    """Convert a row-major block to the sliced layout.

    register(i) bit j == rows[j] bit i. The W == M power-of-two case takes
    a swap-based fast path; everything else runs the plain double loop.
    """
    w = width if width is not None else rows.width
    if w not in LANE_WIDTHS:
        raise ValueError(f"lane width must be one of {LANE_WIDTHS}")
    if rows.width > w:
        raise ValueError(f"{rows.width} rows do not fit in {w} lanes")
    m = rows.length
    if w == m and rows.width == m:
        return SlicedBlock(w, tuple(_square_transpose(rows.rows, m)))
    return SlicedBlock(w, tuple(_transpose_naive(rows.rows, m)))


def transpose_to_rows(slab: SlicedBlock, nrows: int | None = None) -> RowBlock:
    """Convert sliced layout back to rows: exact inverse of transpose_to_sliced."""
    w = slab.width if nrows is None else nrows
    regs = slab.registers()
    m = len(regs)
    if w == m and slab.width == m:
        return RowBlock(tuple(_square_transpose(regs, m)), m)
    return RowBlock(tuple(_transpose_naive(regs, w)), m)


def extract_lane(slab: SlicedBlock, j: int) -> int:
    """Lane j as an M-bit integer: bit i == bit j of register i."""
    if not 0 <= j < slab.width:
        raise IndexError(f"lane {j} out of range [0, {slab.width})")
    v = 0
    for i, word in enumerate(slab.registers()):
        v |= ((word >> j) & 1) << i
    return v


def rotate_registers(
    slab: SlicedBlock, direction: str, count: int, fill: str = "zero"
) -> SlicedBlock:
    """Re-reference registers so every lane sees a bit shift.

    direction "down" moves register contents toward index 0 (per-lane
    right shift of the LSB-first lane value); "up" is the opposite.
    fill "zero" clears vacated registers, "cyclic" wraps them around.
    Only origin bookkeeping and (for zero fill) register clears happen:
    no word is shifted or masked.
    """
    m = slab.depth
    if count < 0 or count > m:
        raise ValueError(f"rotation count {count} out of range [0, {m}]")
    if direction not in ("down", "up"):
        raise ValueError(f"unknown direction {direction!r}")
    if fill not in ("zero", "cyclic"):
        raise ValueError(f"unknown fill {fill!r}")
    if count == 0 or (fill == "cyclic" and count == m):
        return slab
    if fill == "cyclic":
        delta = count if direction == "down" else m - count
        return SlicedBlock(slab.width, slab.words, (slab._origin + delta) % m)
    # zero fill: shift the origin, then clear the vacated slots
    words = list(slab.words)
    if direction == "down":
        origin = (slab._origin + count) % m
        for i in range(m - count, m):  # logical top positions
            words[(origin + i) % m] = 0
    else:
        origin = (slab._origin - count) % m
        for i in range(count):  # logical bottom positions
            words[(origin + i) % m] = 0
    return SlicedBlock(slab.width, tuple(words), origin)


def _transpose_naive(values, out_count: int):
    """Reference double-loop bit transpose; also the test oracle."""
    out = [0] * out_count
    for j, v in enumerate(values):
        i = 0
        while v:
            if v & 1:
                out[i] |= 1 << j
            v >>= 1
            i += 1
    return out


def _square_transpose(values, size: int):
    """Swap-based transpose of a size x size bit matrix (size = 2**p).

    Half-block swap form of the classic word transpose, oriented for the
    LSB-first lane convention (bit j of word i = matrix element (i, j)).
    """
    w = list(values)
    j = size >> 1
    mask = (1 << j) - 1
    while j:
        for k in range(0, size, 2 * j):
            for i in range(k, k + j):
                t = ((w[i] >> j) ^ w[i + j]) & mask
                w[i] ^= t << j
                w[i + j] ^= t
        j >>= 1
        mask ^= mask << j
    return w
