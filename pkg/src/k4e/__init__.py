"""Maximum group divisible (K4-e)-packings with any minimum leave.

The package builds, verifies and searches for packings of the complete
multipartite graph K_{n(g)} by copies of K4-e, covering every admissible
minimum leave. ``construct_mgdp`` is the main entry point.
"""

from __future__ import annotations

from .errors import K4eError, KnownException, Unsupported
from .model import (
    Block,
    Design,
    HolePattern,
    LeaveClass,
    admissible_leaves,
    classify_leave,
    max_blocks,
    min_leave_size,
)
from .verify import Report, ViolationKind, verify_exact, verify_family, verify_mgdp, verify_packing

__version__ = "0.1.0"


def construct_mgdp(g: int, n: int, leave: LeaveClass):
    """Build a verified MGDP of type g^n with the given leave (see :mod:`k4e.planner`)."""
    from .planner import construct_mgdp as _construct

    return _construct(g, n, leave)


__all__ = [
    "Block",
    "Design",
    "HolePattern",
    "K4eError",
    "KnownException",
    "LeaveClass",
    "Report",
    "Unsupported",
    "ViolationKind",
    "admissible_leaves",
    "classify_leave",
    "construct_mgdp",
    "max_blocks",
    "min_leave_size",
    "verify_exact",
    "verify_family",
    "verify_mgdp",
    "verify_packing",
]
