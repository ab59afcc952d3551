"""Runtime knobs for the scalar kernel.

Precision is read from CYCLEKIT_PRECISION_BITS on each query so scripts can
adjust it without re-importing; the probe seed feeds the deterministic
randomized nonzero certification.
"""

from __future__ import annotations

import os

DEFAULT_PRECISION_BITS = 64

_probe_seed = 0


def precision_bits() -> int:
    raw = os.environ.get("CYCLEKIT_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError:
        return DEFAULT_PRECISION_BITS
    return max(8, bits)


def precision_ladder() -> tuple[int, int, int]:
    # zero testing escalates through these before giving up
    base = precision_bits()
    return (base, base * 2, base * 4)


def probe_seed() -> int:
    return _probe_seed


def set_probe_seed(seed: int) -> None:
    global _probe_seed
    _probe_seed = int(seed)
