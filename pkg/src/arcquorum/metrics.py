"""Closed-form quorum metrics: sizes, fault tolerance, capacity, availability.

Every closed form here has an exhaustive counterpart (`exact_read_capacity`,
`brute_force_availability`) used by the test suite to validate it. All
availability math runs in double precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import TooLargeToEnumerate
from .quorums import (
    AlphaFamily,
    BetaFamily,
    MajorityFamily,
    QuorumFamily,
    minimal_read_quorums,
)


def read_quorum_sizes(family: QuorumFamily) -> set[int]:
    """The set of minimal read quorum sizes."""
    if isinstance(family, MajorityFamily):
        return {family.v_r}
    k = family.structure.k
    sizes = {k - family.t + 1}
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        sizes |= set(family.structure.arc_sizes)
    return sizes


def write_quorum_sizes(family: QuorumFamily) -> tuple[int, int]:
    """(min, max) write quorum size over all choices of writing arcs."""
    if isinstance(family, MajorityFamily):
        return family.v_w, family.v_w
    sizes = sorted(family.structure.arc_sizes)
    t = family.t
    smallest = sum(sizes[:t])
    largest = sum(sizes[-t:])
    if isinstance(family, BetaFamily):
        return smallest, largest
    extra = family.structure.k - t  # one representative per non-writing arc
    return smallest + extra, largest + extra


def fault_tolerance(family: QuorumFamily) -> int:
    """Total nodes minus the smallest read quorum size."""
    return family.n - min(read_quorum_sizes(family))


def _disjoint_cross_reads(family: AlphaFamily | BetaFamily) -> int:
    """The grouping recursion: sort arcs descending, take consecutive
    (k-t+1)-arc groups, each contributing its smallest arc size."""
    need = family.structure.k - family.t + 1
    sizes = sorted(family.structure.arc_sizes, reverse=True)
    total = 0
    for start in range(0, len(sizes) - need + 1, need):
        total += sizes[start + need - 1]
    return total


def read_capacity(family: QuorumFamily) -> int:
    """Maximum number of pairwise-disjoint read quorums (closed form)."""
    if isinstance(family, MajorityFamily):
        return family.n // family.v_r
    disjoint = _disjoint_cross_reads(family)
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        return max(family.structure.k, disjoint)
    return disjoint


def exact_read_capacity(family: QuorumFamily) -> int:
    """Oracle for read_capacity: exact max set packing over the minimal
    read quorums. Exponential; guarded at n <= 16."""
    if family.n > 16:
        raise TooLargeToEnumerate(f"n={family.n} exceeds oracle limit 16")
    quorums = sorted(minimal_read_quorums(family), key=sorted)
    masks = []
    for q in quorums:
        m = 0
        for node in q:
            m |= 1 << node
        masks.append(m)
    masks.sort(key=lambda m: m.bit_count())
    best = 0

    def search(i: int, used: int, count: int):
        nonlocal best
        if count + (len(masks) - i) <= best:
            return
        if i == len(masks):
            best = max(best, count)
            return
        remaining_free = sum(1 for m in masks[i:] if not m & used)
        if count + remaining_free <= best:
            best = max(best, count)
            return
        for j in range(i, len(masks)):
            if not masks[j] & used:
                search(j + 1, used | masks[j], count + 1)
        best = max(best, count)

    search(0, 0, 0)
    return best


def _binomial_tail(n: int, lo: int, p: float) -> float:
    """P(X >= lo) for X ~ Binomial(n, p)."""
    return sum(
        math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(lo, n + 1)
    )


def _occupied_tail(arc_sizes, need: int, p: float, exclude_full: bool) -> float:
    """P(at least `need` arcs have a live node), by dynamic programming
    over arcs on the count of live arcs.

    With exclude_full, arcs must be partially live (some node up, some
    down) and the remaining arcs fully down, which is the complete-arc-
    excluded term of the alpha availability split.
    """
    counts = [1.0] + [0.0] * len(arc_sizes)
    for size in arc_sizes:
        down = (1 - p) ** size
        if exclude_full:
            live = 1.0 - down - p**size
        else:
            live = 1.0 - down
        nxt = [0.0] * (len(counts))
        for c, w in enumerate(counts):
            if w == 0.0:
                continue
            nxt[c] += w * down
            nxt[c + 1] += w * live
        counts = nxt
    return sum(counts[need:])


def _occupied_tail_subset_sum(arc_sizes, need: int, p: float, exclude_full: bool) -> float:
    """Same quantity as _occupied_tail via the explicit subset sum; kept
    for cross-validation on small k."""
    k = len(arc_sizes)
    total = 0.0
    for m in range(len(arc_sizes) + 1):
        if m < need:
            continue
        for live_arcs in itertools.combinations(range(k), m):
            term = 1.0
            for i, size in enumerate(arc_sizes):
                down = (1 - p) ** size
                if i in live_arcs:
                    term *= (1.0 - down - p**size) if exclude_full else (1.0 - down)
                else:
                    term *= down
            total += term
    return total


def read_availability(family: QuorumFamily, p: float) -> float:
    """P(at least one fully operational read quorum exists)."""
    _check_probability(p)
    if isinstance(family, MajorityFamily):
        return _binomial_tail(family.n, family.v_r, p)
    sizes = family.structure.arc_sizes
    need = family.structure.k - family.t + 1
    if isinstance(family, AlphaFamily) and family.full_arc_reads:
        p_full_arc = 1.0 - math.prod(1 - p**s for s in sizes)
        p_partial = _occupied_tail(sizes, need, p, exclude_full=True)
        return p_full_arc + p_partial
    return _occupied_tail(sizes, need, p, exclude_full=False)


def structural_write_availability(family: QuorumFamily, p: float) -> float:
    """P(some write quorum is fully operational)."""
    _check_probability(p)
    if isinstance(family, MajorityFamily):
        return _binomial_tail(family.n, family.v_w, p)
    sizes = family.structure.arc_sizes
    t = family.t
    if isinstance(family, BetaFamily):
        # at least t arcs fully up
        counts = [1.0] + [0.0] * len(sizes)
        for size in sizes:
            full = p**size
            nxt = [0.0] * len(counts)
            for c, w in enumerate(counts):
                if w == 0.0:
                    continue
                nxt[c] += w * (1 - full)
                nxt[c + 1] += w * full
            counts = nxt
        return sum(counts[t:])
    # alpha: at least t arcs fully up AND every arc has a live node
    counts = [1.0] + [0.0] * len(sizes)
    for size in sizes:
        full = p**size
        partial = 1.0 - full - (1 - p) ** size
        nxt = [0.0] * len(counts)
        for c, w in enumerate(counts):
            if w == 0.0:
                continue
            nxt[c] += w * partial
            nxt[c + 1] += w * full
        counts = nxt
    return sum(counts[t:])


def protocol_write_availability(family: QuorumFamily, p: float) -> float:
    """P(an update can complete): the commit/restart path finishes an update
    whenever a working read quorum exists, so this equals read availability."""
    return read_availability(family, p)


def _check_probability(p: float):
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"probability {p} outside [0, 1]")


def brute_force_availability(predicate, n: int, p: float) -> float:
    """Ground-truth availability: sum over all 2^n up/down assignments of
    the assignment weight times predicate(live set). Guarded at n <= 20."""
    _check_probability(p)
    if n > 20:
        raise TooLargeToEnumerate(f"n={n} exceeds brute-force limit 20")
    total = 0.0
    for bits in range(1 << n):
        live = frozenset(i + 1 for i in range(n) if bits >> i & 1)
        if predicate(live):
            total += p ** len(live) * (1 - p) ** (n - len(live))
    return total


def _subset_popcounts(family: QuorumFamily, quorum_kind: str) -> np.ndarray:
    """For j = 0..n, how many j-node subsets satisfy the quorum predicate.

    Vectorized over all 2^n subsets; availability then reduces to a
    polynomial in p per popcount bucket.
    """
    n = family.n
    if n > 20:
        raise TooLargeToEnumerate(f"n={n} exceeds brute-force limit 20")
    bits = np.arange(1 << n, dtype=np.int64)
    popcount = np.zeros(1 << n, dtype=np.int16)
    for i in range(n):
        popcount += (bits >> i & 1).astype(np.int16)
    if isinstance(family, MajorityFamily):
        need = family.v_r if quorum_kind == "read" else family.v_w
        ok = popcount >= need
    else:
        arcs = family.structure.arcs()
        masks = []
        for a in arcs:
            m = 0
            for node in a:
                m |= 1 << (node - 1)
            masks.append(m)
        inter = np.zeros(1 << n, dtype=np.int16)
        full = np.zeros(1 << n, dtype=np.int16)
        touched_all = np.ones(1 << n, dtype=bool)
        any_full_arc = np.zeros(1 << n, dtype=bool)
        for m in masks:
            hit = (bits & m) != 0
            isfull = (bits & m) == m
            inter += hit.astype(np.int16)
            full += isfull.astype(np.int16)
            touched_all &= hit
            any_full_arc |= isfull
        need = family.structure.k - family.t + 1
        if quorum_kind == "read":
            ok = inter >= need
            if isinstance(family, AlphaFamily) and family.full_arc_reads:
                ok |= any_full_arc
        else:
            ok = full >= family.t
            if isinstance(family, AlphaFamily):
                ok &= touched_all
    counts = np.zeros(n + 1, dtype=np.float64)
    np.add.at(counts, popcount[ok], 1.0)
    return counts


class AvailabilityOracle:
    """Brute-force availability evaluator, amortized over a p grid.

    The 2^n predicate sweep runs once; each p evaluation is then O(n).
    """

    def __init__(self, family: QuorumFamily, quorum_kind: str):
        self.n = family.n
        self.counts = _subset_popcounts(family, quorum_kind)

    def __call__(self, p: float) -> float:
        _check_probability(p)
        js = np.arange(self.n + 1)
        weights = np.power(p, js) * np.power(1 - p, self.n - js)
        return float(np.dot(self.counts, weights))


@dataclass(frozen=True)
class MetricsReport:
    family_name: str
    read_quorum_sizes: set[int]
    min_write_quorum: int
    max_write_quorum: int
    fault_tolerance: int
    read_capacity: int
    read_availability: dict[float, float]
    structural_write_availability: dict[float, float]
    protocol_write_availability: dict[float, float]


def metrics_report(family: QuorumFamily, p_values) -> MetricsReport:
    """All §-level metrics for one family across a list of probabilities."""
    wmin, wmax = write_quorum_sizes(family)
    return MetricsReport(
        family_name=family.name(),
        read_quorum_sizes=read_quorum_sizes(family),
        min_write_quorum=wmin,
        max_write_quorum=wmax,
        fault_tolerance=fault_tolerance(family),
        read_capacity=read_capacity(family),
        read_availability={p: read_availability(family, p) for p in p_values},
        structural_write_availability={
            p: structural_write_availability(family, p) for p in p_values
        },
        protocol_write_availability={
            p: protocol_write_availability(family, p) for p in p_values
        },
    )
