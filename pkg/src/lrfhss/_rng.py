"""Counter-based per-trial random streams.

Each Monte Carlo trial draws from its own stream, derived solely from
(seed, trial_index), so trials are reproducible and independent of the
execution schedule.  The stream is a splitmix64 walk: draw i of a trial
outputs mix64(base + i * GOLDEN).

This module is the pure-Python reference; the numba kernel implements the
same algorithms bit for bit (same constants, same draw order), which the
test suite verifies by exact comparison.
"""

from __future__ import annotations

import math

_MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB
_U53 = 2.0 ** -53

# Poisson sampling switches from inversion to transformed rejection here
POISSON_PTRS_CUTOVER = 10.0


def mix64(z: int) -> int:
    """splitmix64 finalizer: xor-shift / multiply avalanche on 64 bits."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_2) & _MASK
    return z ^ (z >> 31)


def stream_base(seed: int, trial_index: int) -> int:
    """Starting counter of the (seed, trial_index) stream."""
    return mix64((seed + GOLDEN * (trial_index + 1)) & _MASK)


class TrialStream:
    """Deterministic draw sequence for one trial."""

    __slots__ = ("state",)

    def __init__(self, seed: int, trial_index: int):
        self.state = stream_base(seed, trial_index)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK
        return mix64(self.state)

    def uniform(self) -> float:
        """Uniform draw in [0, 1)."""
        return (self.next_u64() >> 11) * _U53

    def uniform_open(self) -> float:
        """Uniform draw in the open interval (0, 1)."""
        m = self.next_u64() >> 11
        if m == 0:
            m = 1
        return m * _U53

    def exponential(self) -> float:
        """Unit-mean exponential draw, strictly positive."""
        m = self.next_u64() >> 11
        if m == 0:
            m = 1
        return -math.log1p(-m * _U53)

    def poisson(self, lam: float) -> int:
        if lam < 0:
            raise ValueError("Poisson mean must be non-negative")
        if lam == 0.0:
            return 0
        if lam < POISSON_PTRS_CUTOVER:
            return self._poisson_inversion(lam)
        return self._poisson_ptrs(lam)

    def _poisson_inversion(self, lam: float) -> int:
        # multiplication form of inversion; fine below the PTRS cutover
        limit = math.exp(-lam)
        k = 0
        prod = self.uniform()
        while prod > limit:
            k += 1
            prod *= self.uniform()
        return k

    def _poisson_ptrs(self, lam: float) -> int:
        # Hormann's PTRS transformed-rejection sampler
        log_lam = math.log(lam)
        b = 0.931 + 2.53 * math.sqrt(lam)
        a = -0.059 + 0.02483 * b
        inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
        v_r = 0.9277 - 3.6224 / (b - 2.0)
        while True:
            u = self.uniform() - 0.5
            v = self.uniform()
            u_s = 0.5 - abs(u)
            if u_s == 0.0:
                continue
            k = math.floor((2.0 * a / u_s + b) * u + lam + 0.43)
            if u_s >= 0.07 and v <= v_r:
                return int(k)
            if k < 0 or (u_s < 0.013 and v > u_s):
                continue
            lhs = math.log(v) + math.log(inv_alpha) - math.log(a / (u_s * u_s) + b)
            rhs = k * log_lam - lam - math.lgamma(k + 1.0)
            if lhs <= rhs:
                return int(k)
