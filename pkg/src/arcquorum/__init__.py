"""Arc-partitioned (circular) quorum systems and quorum-consensus replication."""

from .quorums import (
    AlphaFamily,
    BetaFamily,
    CircularStructure,
    MajorityFamily,
    QuorumFamily,
    build_structure,
    diamond,
    generalized_grid,
    grid,
    is_read_quorum,
    is_write_quorum,
    majority,
    make_comparison_family,
    minimal_read_quorums,
    minimal_write_quorums,
    rowa,
)

__all__ = [
    "AlphaFamily",
    "BetaFamily",
    "CircularStructure",
    "MajorityFamily",
    "QuorumFamily",
    "build_structure",
    "diamond",
    "generalized_grid",
    "grid",
    "is_read_quorum",
    "is_write_quorum",
    "majority",
    "make_comparison_family",
    "minimal_read_quorums",
    "minimal_write_quorums",
    "rowa",
]

__version__ = "0.1.0"
