"""Counter-based uniform streams for reproducible parallel simulation.

Every uniform is a pure function of (master_seed, trajectory_index,
draw_counter), so results are bit-identical however trajectories are
partitioned across workers.  The mixing is a double splitmix64 finalizer on
a Weyl-spread counter word; the scalar and vectorized paths share the exact
same arithmetic (mod 2^64).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

_INV_2_53 = 2.0 ** -53


def _mix_int(z: int) -> int:
    z &= _MASK
    z ^= z >> 30
    z = (z * _M1) & _MASK
    z ^= z >> 27
    z = (z * _M2) & _MASK
    return z ^ (z >> 31)


def seed_key(master_seed: int) -> int:
    """Fold an arbitrary integer seed into the 64-bit stream key."""
    return _mix_int(((master_seed & _MASK) + _PHI) * _PHI)


def uniform_at(key: int, traj: int, counter: int) -> float:
    """The counter-th uniform of trajectory traj, in [0, 1)."""
    z = ((traj << 32) | counter) & _MASK
    h = _mix_int(_mix_int((z * _PHI + key) & _MASK))
    return (h >> 11) * _INV_2_53


def _mix_vec(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniform_array(key: int, traj: np.ndarray, counter: int) -> np.ndarray:
    """Vectorized uniform_at over an int64 array of trajectory indices."""
    z = (traj.astype(np.uint64) << np.uint64(32)) | np.uint64(counter)
    h = _mix_vec(_mix_vec(z * np.uint64(_PHI) + np.uint64(key)))
    return (h >> np.uint64(11)).astype(np.float64) * _INV_2_53


class CounterStream:
    """Scalar stream view: .random() walks one trajectory's counter."""

    def __init__(self, master_seed: int, traj_index: int = 0):
        self.key = seed_key(master_seed)
        self.traj = traj_index
        self.counter = 0

    def random(self) -> float:
        u = uniform_at(self.key, self.traj, self.counter)
        self.counter += 1
        return u
