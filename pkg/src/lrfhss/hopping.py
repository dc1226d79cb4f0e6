"""FCC-region channel grids and deterministic hopping sequences.

The 3,125 physical 488 Hz subcarriers of one operating channel are grouped
into 52 grids of 60 slots with an interleaved layout (stride 52), which
puts consecutive slots of a grid 52 * 488 = 25,376 Hz apart; the five
leftover subcarriers stay unassigned.  A hopping sequence lives entirely
inside one grid and is produced by a public 64-bit mixing function, so any
implementation of the same recipe generates identical sequences.

Capacity analytics never consume these sequences: hopping enters the
interference model only through the subcarrier count.  The module exists to
make the channelization and sequence structure concrete and checkable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parameters import Channelization

_MASK = (1 << 64) - 1

# hop-index spreading increment and the two avalanche multipliers; the mix
# is two rounds of (xor-shift-33, multiply by an odd constant) plus a final
# xor-shift-33, applied to device_id||seed xored with the spread hop index
HOP_STRIDE = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xFF51AFD7ED558CCD
MIX_MULT_2 = 0xC4CEB9FE1A85EC53
RETRY_SALT = 0xD6E8FEB86659FD93


def mix_bits(value: int) -> int:
    """Two-round xor-shift/multiply avalanche of a 64-bit value."""
    z = value & _MASK
    z = ((z ^ (z >> 33)) * MIX_MULT_1) & _MASK
    z = ((z ^ (z >> 33)) * MIX_MULT_2) & _MASK
    return z ^ (z >> 33)


def hop_hash(device_id: int, seed: int, hop_index: int) -> int:
    """64-bit hash driving hop selection; device_id occupies the top word."""
    state = ((device_id & 0xFFFFFFFF) << 32) | (seed & 0xFFFFFFFF)
    return mix_bits(state ^ ((hop_index * HOP_STRIDE) & _MASK))


@dataclass(frozen=True)
class GridPlan:
    """Assignment of physical subcarrier indices to (grid, slot) pairs."""

    channels: Channelization

    def obw_index(self, grid: int, slot: int) -> int:
        ch = self.channels
        if not (0 <= grid < ch.grid_count):
            raise ValueError(f"grid {grid} outside [0, {ch.grid_count})")
        if not (0 <= slot < ch.grid_size):
            raise ValueError(f"slot {slot} outside [0, {ch.grid_size})")
        return grid + ch.grid_count * slot

    def center_frequency_hz(self, grid: int, slot: int) -> float:
        """Offset of the subcarrier center from the OCW base edge."""
        return (self.obw_index(grid, slot) + 0.5) * self.channels.obw_width_hz

    def grid_frequencies_hz(self, grid: int) -> list[float]:
        return [self.center_frequency_hz(grid, s)
                for s in range(self.channels.grid_size)]

    def assigned_obw_indices(self) -> set[int]:
        ch = self.channels
        return {self.obw_index(g, s)
                for g in range(ch.grid_count) for s in range(ch.grid_size)}

    def unassigned_obw_indices(self) -> set[int]:
        return set(range(self.channels.physical_obw_count)) - self.assigned_obw_indices()


def build_grid_plan(channels: Channelization) -> GridPlan:
    """Interleaved grid layout; rejects inconsistent channelizations.

    A blocked layout (consecutive subcarriers in one grid) would space the
    slots only one subcarrier width apart; the interleave is what produces
    the required ~25.4 kHz intra-grid separation.
    """
    if channels.grid_count * channels.grid_size > channels.physical_obw_count:
        raise ValueError("grid layout exceeds the physical OBW count")
    return GridPlan(channels)


@dataclass(frozen=True)
class HopSequence:
    device_id: int
    seed: int
    grid_index: int
    hops: tuple  # slot indices within the grid

    def obw_indices(self, plan: GridPlan) -> list[int]:
        return [plan.obw_index(self.grid_index, s) for s in self.hops]

    def center_frequencies_hz(self, plan: GridPlan) -> list[float]:
        return [plan.center_frequency_hz(self.grid_index, s) for s in self.hops]


def generate_sequence(device_id: int, seed: int, grid_index: int, length: int,
                      channels: Channelization | None = None) -> HopSequence:
    """Deterministic hopping sequence of ``length`` slots within one grid.

    Consecutive hops always land on distinct slots: a raw repeat is
    re-mixed once with a salt and mapped over the other grid_size - 1
    slots, which both guarantees distinctness and preserves uniform
    marginals.
    """
    ch = channels if channels is not None else Channelization()
    if not (0 <= grid_index < ch.grid_count):
        raise ValueError(f"grid_index {grid_index} outside [0, {ch.grid_count})")
    if length < 1:
        raise ValueError("length must be >= 1")
    n_slots = ch.grid_size
    hops = []
    prev = -1
    for i in range(length):
        raw = hop_hash(device_id, seed, i)
        slot = raw % n_slots
        if slot == prev:
            remixed = mix_bits(raw ^ RETRY_SALT)
            slot = (prev + 1 + remixed % (n_slots - 1)) % n_slots
        hops.append(slot)
        prev = slot
    return HopSequence(device_id=device_id, seed=seed, grid_index=grid_index,
                       hops=tuple(hops))


def collision_check(seq_a: HopSequence, seq_b: HopSequence) -> list[tuple[int, int]]:
    """Aligned hop positions where both sequences occupy the same slot.

    Sequences on different grids never share a subcarrier, so the result is
    empty by construction.
    """
    if seq_a.grid_index != seq_b.grid_index:
        return []
    return [
        (i, a)
        for i, (a, b) in enumerate(zip(seq_a.hops, seq_b.hops))
        if a == b
    ]
