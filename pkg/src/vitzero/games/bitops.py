"""Bitboard geometry helpers.

Boards are packed row-major into Python ints (bit r*W + c). Directional
shifts mask out wrap-around at the left/right edges; everything above
the top row or below the bottom row simply falls off the int (after
masking with `full`). One Geometry instance is cached per board size.
"""

from __future__ import annotations

from functools import lru_cache


class Geometry:
    def __init__(self, h: int, w: int):
        self.h = h
        self.w = w
        self.n = h * w
        self.full = (1 << self.n) - 1
        first_col = 0
        for r in range(h):
            first_col |= 1 << (r * w)
        self.not_first_col = self.full & ~first_col
        self.not_last_col = self.full & ~(first_col << (w - 1))
        self.col_masks = [first_col << c for c in range(w)]
        # (name, shift function) for the eight compass directions
        self.shifts = {
            "e": self._shift_e,
            "w": self._shift_w,
            "s": self._shift_s,
            "n": self._shift_n,
            "se": self._shift_se,
            "sw": self._shift_sw,
            "ne": self._shift_ne,
            "nw": self._shift_nw,
        }
        # one orientation per line axis, for window/run scans
        self.line_dirs = ("e", "s", "se", "sw")

    # -- directional shifts -------------------------------------------------

    def _shift_e(self, b: int) -> int:
        return (b & self.not_last_col) << 1

    def _shift_w(self, b: int) -> int:
        return (b & self.not_first_col) >> 1

    def _shift_s(self, b: int) -> int:
        return (b << self.w) & self.full

    def _shift_n(self, b: int) -> int:
        return b >> self.w

    def _shift_se(self, b: int) -> int:
        return ((b & self.not_last_col) << (self.w + 1)) & self.full

    def _shift_sw(self, b: int) -> int:
        return ((b & self.not_first_col) << (self.w - 1)) & self.full

    def _shift_ne(self, b: int) -> int:
        return (b & self.not_last_col) >> (self.w - 1)

    def _shift_nw(self, b: int) -> int:
        return (b & self.not_first_col) >> (self.w + 1)

    # -- line scans ----------------------------------------------------------

    def has_window(self, bits: int, k: int) -> bool:
        """True if `bits` contains k in a row in any of the 4 line axes."""
        for d in self.line_dirs:
            sh = self.shifts[d]
            x = bits
            for _ in range(k - 1):
                x &= sh(x)
                if not x:
                    break
            if x:
                return True
        return False

    def window_counts(self, bits: int, kmax: int) -> list[list[int]]:
        """Per direction, the number of j-cell windows fully covered by
        `bits`, for j = 1..kmax. Index as result[dir][j-1]."""
        counts = []
        for d in self.line_dirs:
            sh = self.shifts[d]
            per_dir = []
            x = bits
            per_dir.append(x.bit_count())
            for _ in range(kmax - 1):
                x &= sh(x)
                per_dir.append(x.bit_count())
            counts.append(per_dir)
        return counts

    def maximal_run_counts(self, bits: int, kmax: int) -> list[int]:
        """Number of maximal straight runs of each exact length 2..kmax,
        summed over the 4 line axes. Returns [r2, r3, ..., r_kmax].

        Uses the window identity r_k = w_k - 2*w_{k+1} + w_{k+2}, where
        w_j counts j-windows (a maximal run of length m contains
        m-k+1 windows of length k).
        """
        w = self.window_counts(bits, kmax + 2)
        runs = []
        for k in range(2, kmax + 1):
            total = 0
            for per_dir in w:
                total += per_dir[k - 1] - 2 * per_dir[k] + per_dir[k + 1]
            runs.append(total)
        return runs

    # -- othello machinery ----------------------------------------------------

    def othello_moves(self, own: int, opp: int) -> int:
        """Bitboard of cells where placing a disc flips at least one."""
        empty = self.full & ~(own | opp)
        moves = 0
        for sh in self.shifts.values():
            t = sh(own) & opp
            while True:
                nt = t | (sh(t) & opp)
                if nt == t:
                    break
                t = nt
            moves |= sh(t) & empty
        return moves

    def othello_flips(self, move_bit: int, own: int, opp: int) -> int:
        """All opponent discs bracketed by `move_bit` and an own disc."""
        flipped = 0
        for sh in self.shifts.values():
            x = sh(move_bit)
            run = 0
            while x & opp:
                run |= x
                x = sh(x)
            if x & own:
                flipped |= run
        return flipped


@lru_cache(maxsize=None)
def geometry(h: int, w: int) -> Geometry:
    return Geometry(h, w)
