"""Circular quorum systems: arc-partitioned structures and quorum families.

A circular structure is n nodes (ids 1..n) split into k ordered arcs. Two
read-dominant families are built on it:

* the alpha family: a write quorum is t complete "writing" arcs plus one
  representative from every other arc; a read quorum is one node from each
  of any (k-t+1) arcs, or (optionally) any complete arc.
* the beta family: a write quorum is t complete arcs, nothing more; a read
  quorum is one node from each of any (k-t+1) arcs.

A weighted-majority family is included for comparison. Classic systems
(read-one-write-all, grid, diamond, generalized grid) are alpha instances,
exposed through constructors.

Enumerators return minimal quorums (no quorum contains another); the
membership predicates use "contains a quorum" semantics and are monotone
under set inclusion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    ArcSizeOutOfRange,
    EmptyArcList,
    InvalidParams,
    TooLargeToEnumerate,
)

NodeSet = frozenset[int]

# Guard for the exponential enumerators (minimal write quorum counts grow
# as the product of arc sizes).
ENUMERATION_LIMIT = 24


@dataclass(frozen=True)
class CircularStructure:
    """n nodes partitioned into k ordered arcs of the given sizes.

    Arcs own contiguous id blocks in declaration order: arc 1 covers
    1..n_1, arc 2 the next n_2 ids, and so on.
    """

    arc_sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.arc_sizes) == 0:
            raise EmptyArcList("structure needs at least one arc")
        n = sum(self.arc_sizes)
        k = len(self.arc_sizes)
        for size in self.arc_sizes:
            if not (1 <= size <= n - k + 1):
                raise ArcSizeOutOfRange(
                    f"arc size {size} outside 1..{n - k + 1} for n={n}, k={k}"
                )

    @property
    def n(self) -> int:
        return sum(self.arc_sizes)

    @property
    def k(self) -> int:
        return len(self.arc_sizes)

    def arc(self, i: int) -> NodeSet:
        """Nodes of arc i (1-based)."""
        if not (1 <= i <= self.k):
            raise InvalidParams(f"arc index {i} outside 1..{self.k}")
        start = 1 + sum(self.arc_sizes[: i - 1])
        return frozenset(range(start, start + self.arc_sizes[i - 1]))

    def arcs(self) -> list[NodeSet]:
        return [self.arc(i) for i in range(1, self.k + 1)]

    def arc_of(self, node: int) -> int:
        if not (1 <= node <= self.n):
            raise InvalidParams(f"node {node} outside 1..{self.n}")
        upper = 0
        for i, size in enumerate(self.arc_sizes, start=1):
            upper += size
            if node <= upper:
                return i
        raise AssertionError("unreachable")


def build_structure(arc_sizes: list[int] | tuple[int, ...]) -> CircularStructure:
    """Validate arc sizes and build the structure (arcs assigned in sequence)."""
    return CircularStructure(tuple(arc_sizes))


@dataclass(frozen=True)
class AlphaFamily:
    """Alpha family: write = t full arcs + one node from each other arc.

    With ``full_arc_reads`` (the plain alpha of the definitions) a complete
    arc is also a read quorum; without it only cross-arc reads count, which
    is the generalized-grid read rule.
    """

    structure: CircularStructure
    t: int
    full_arc_reads: bool = True

    def __post_init__(self):
        if not (1 <= self.t <= self.structure.k):
            raise InvalidParams(
                f"alpha needs 1 <= t <= k, got t={self.t}, k={self.structure.k}"
            )

    @property
    def n(self) -> int:
        return self.structure.n

    def name(self) -> str:
        sizes = "x".join(str(s) for s in self.structure.arc_sizes)
        flag = "" if self.full_arc_reads else ",noarc"
        return f"alpha[{sizes},t={self.t}{flag}]"


@dataclass(frozen=True)
class BetaFamily:
    """Beta family: write = t full arcs; read = one node from k-t+1 arcs."""

    structure: CircularStructure
    t: int

    def __post_init__(self):
        k = self.structure.k
        lo = (k + 1 + 1) // 2  # ceil((k+1)/2)
        if not (lo <= self.t <= k):
            raise InvalidParams(
                f"beta needs ceil((k+1)/2) <= t <= k, got t={self.t}, k={k}"
            )

    @property
    def n(self) -> int:
        return self.structure.n

    def name(self) -> str:
        sizes = "x".join(str(s) for s in self.structure.arc_sizes)
        return f"beta[{sizes},t={self.t}]"


@dataclass(frozen=True)
class MajorityFamily:
    """Weighted voting with unit weights: any v_r nodes read, any v_w write."""

    n: int
    v_r: int
    v_w: int

    def __post_init__(self):
        if self.n < 1 or not (1 <= self.v_r <= self.n) or not (1 <= self.v_w <= self.n):
            raise InvalidParams("majority quorum sizes must lie in 1..n")
        if self.v_r + self.v_w <= self.n or 2 * self.v_w <= self.n:
            raise InvalidParams(
                f"majority needs v_r+v_w > n and 2*v_w > n, got "
                f"n={self.n}, v_r={self.v_r}, v_w={self.v_w}"
            )

    def name(self) -> str:
        return f"majority[n={self.n},vr={self.v_r},vw={self.v_w}]"


QuorumFamily = AlphaFamily | BetaFamily | MajorityFamily


def family_size(family: QuorumFamily) -> int:
    return family.n


def _check_enumerable(family: QuorumFamily):
    if family.n > ENUMERATION_LIMIT:
        raise TooLargeToEnumerate(
            f"n={family.n} exceeds enumeration limit {ENUMERATION_LIMIT}"
        )


def _prune_non_minimal(candidates: set[NodeSet]) -> set[NodeSet]:
    """Drop every set that strictly contains another candidate."""
    by_size = sorted(candidates, key=len)
    kept: list[NodeSet] = []
    result: set[NodeSet] = set()
    for s in by_size:
        if any(m < s for m in kept):
            continue
        kept.append(s)
        result.add(s)
    return result


def _cross_arc_sets(arcs: list[NodeSet], count: int):
    """One node from each arc of every count-subset of arcs."""
    for chosen in itertools.combinations(range(len(arcs)), count):
        for combo in itertools.product(*[sorted(arcs[i]) for i in chosen]):
            yield frozenset(combo)


def minimal_read_quorums(family: QuorumFamily) -> set[NodeSet]:
    """All minimal read quorums of the family (n <= 24 guard)."""
    _check_enumerable(family)
    if isinstance(family, MajorityFamily):
        return {
            frozenset(c)
            for c in itertools.combinations(range(1, family.n + 1), family.v_r)
        }
    arcs = family.structure.arcs()
    need = family.structure.k - family.t + 1
    candidates = set(_cross_arc_sets(arcs, need))
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        candidates |= set(arcs)
    return _prune_non_minimal(candidates)


def minimal_write_quorums(family: QuorumFamily) -> set[NodeSet]:
    """All minimal write quorums of the family (n <= 24 guard)."""
    _check_enumerable(family)
    if isinstance(family, MajorityFamily):
        return {
            frozenset(c)
            for c in itertools.combinations(range(1, family.n + 1), family.v_w)
        }
    arcs = family.structure.arcs()
    k = family.structure.k
    candidates: set[NodeSet] = set()
    for writing in itertools.combinations(range(k), family.t):
        base = frozenset().union(*[arcs[i] for i in writing])
        rest = [i for i in range(k) if i not in writing]
        if isinstance(family, BetaFamily):
            candidates.add(base)
            continue
        for combo in itertools.product(*[sorted(arcs[i]) for i in rest]):
            candidates.add(base | frozenset(combo))
    return _prune_non_minimal(candidates)


def is_read_quorum(family: QuorumFamily, s: NodeSet) -> bool:
    """True iff s contains a read quorum. Computed from arc occupancy counts."""
    s = frozenset(s)
    if isinstance(family, MajorityFamily):
        return len(s) >= family.v_r
    arcs = family.structure.arcs()
    touched = sum(1 for a in arcs if a & s)
    if touched >= family.structure.k - family.t + 1:
        return True
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        return any(a <= s for a in arcs)
    return False


def is_write_quorum(family: QuorumFamily, s: NodeSet) -> bool:
    """True iff s contains a write quorum. Computed from arc occupancy counts."""
    s = frozenset(s)
    if isinstance(family, MajorityFamily):
        return len(s) >= family.v_w
    arcs = family.structure.arcs()
    full = sum(1 for a in arcs if a <= s)
    if full < family.t:
        return False
    if isinstance(family, BetaFamily):
        return True
    return all(a & s for a in arcs)


def rowa(n: int) -> AlphaFamily:
    """Read-one-write-all: n singleton arcs, t = n."""
    return AlphaFamily(build_structure([1] * n), t=n)


def grid(rows: int, cols: int) -> AlphaFamily:
    """Grid of rows x cols; columns become arcs, reads take one node per column."""
    return AlphaFamily(build_structure([rows] * cols), t=1, full_arc_reads=False)


def diamond(row_sizes: list[int] | tuple[int, ...]) -> AlphaFamily:
    """Diamond rows become arcs; reads are a full row or one node per row."""
    return AlphaFamily(build_structure(row_sizes), t=1, full_arc_reads=True)


def generalized_grid(plane_count: int, plane_size: int, t: int) -> AlphaFamily:
    """Write-hyper-planes become arcs; reads avoid the complete-arc rule."""
    return AlphaFamily(
        build_structure([plane_size] * plane_count), t=t, full_arc_reads=False
    )


def majority(n: int, v_r: int, v_w: int) -> MajorityFamily:
    return MajorityFamily(n, v_r, v_w)


def make_comparison_family(kind: str, **params) -> QuorumFamily:
    """Build a named comparison family (rowa, grid, diamond, ...)."""
    makers = {
        "rowa": rowa,
        "grid": grid,
        "diamond": diamond,
        "generalized_grid": generalized_grid,
        "majority": majority,
    }
    if kind not in makers:
        raise InvalidParams(f"unknown comparison family kind: {kind!r}")
    try:
        return makers[kind](**params)
    except TypeError as exc:
        raise InvalidParams(f"bad parameters for {kind}: {exc}") from exc


# --- deterministic quorum selection for the replication protocol ------------
#
# Coordinators need a concrete quorum given the currently working sites.
# These are constructive (no enumeration) and deterministic: smallest arc
# indices and smallest node ids win.


def choose_read_quorum(family: QuorumFamily, working: NodeSet) -> NodeSet | None:
    """A read quorum whose members are all in `working`, or None."""
    working = frozenset(working)
    if isinstance(family, MajorityFamily):
        if len(working) < family.v_r:
            return None
        return frozenset(sorted(working)[: family.v_r])
    arcs = family.structure.arcs()
    need = family.structure.k - family.t + 1
    touched = [(i, a & working) for i, a in enumerate(arcs) if a & working]
    if len(touched) >= need:
        return frozenset(min(live) for _, live in touched[:need])
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        for a in arcs:
            if a <= working:
                return a
    return None


def choose_write_quorum(family: QuorumFamily, working: NodeSet) -> NodeSet | None:
    """A write quorum containing some working read quorum, or None.

    The quorum itself may include failed sites (the protocol detects and
    skips them); what must be working is an embedded read quorum.
    """
    working = frozenset(working)
    if isinstance(family, MajorityFamily):
        if family.v_r > family.v_w or len(working) < family.v_r:
            return None
        live = sorted(working)[: family.v_r]
        chosen = set(live)
        for node in range(1, family.n + 1):
            if len(chosen) == family.v_w:
                break
            chosen.add(node)
        return frozenset(chosen)
    arcs = family.structure.arcs()
    k = family.structure.k
    need = k - family.t + 1
    touched = [i for i, a in enumerate(arcs) if a & working]
    if isinstance(family, BetaFamily):
        if len(touched) < need:
            return None
        writing = list(touched[: family.t])
        for i in range(k):
            if len(writing) == family.t:
                break
            if i not in writing:
                writing.append(i)
        return frozenset().union(*[arcs[i] for i in writing])
    # alpha: embed a cross-arc read quorum if possible, else a full arc
    if len(touched) >= need:
        read_arcs = touched[:need]
        reps = {i: min(arcs[i] & working) for i in read_arcs}
        writing = set(i for i in range(k) if i not in read_arcs)
        writing.add(read_arcs[0])  # t-1 outside arcs + one read arc
        quorum = set().union(*[arcs[i] for i in writing])
        for i in read_arcs:
            if i not in writing:
                quorum.add(reps[i])
        return frozenset(quorum)
    if family.full_arc_reads:
        full = [i for i, a in enumerate(arcs) if a <= working]
        if full:
            writing = [full[0]]
            for i in range(k):
                if len(writing) == family.t:
                    break
                if i != full[0]:
                    writing.append(i)
            quorum = set().union(*[arcs[i] for i in writing])
            for i in range(k):
                if i not in writing:
                    a = arcs[i]
                    live = a & working
                    quorum.add(min(live) if live else min(a))
            return frozenset(quorum)
    return None
