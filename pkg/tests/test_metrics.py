import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcquorum.errors import TooLargeToEnumerate
from arcquorum.metrics import (
    AvailabilityOracle,
    brute_force_availability,
    exact_read_capacity,
    fault_tolerance,
    metrics_report,
    protocol_write_availability,
    read_availability,
    read_capacity,
    read_quorum_sizes,
    structural_write_availability,
    write_quorum_sizes,
    _occupied_tail,
    _occupied_tail_subset_sum,
)
from arcquorum.quorums import (
    AlphaFamily,
    BetaFamily,
    MajorityFamily,
    build_structure,
    is_read_quorum,
    is_write_quorum,
    majority,
    rowa,
)

ALPHA_8X2_T7 = AlphaFamily(build_structure([2] * 8), t=7)
BETA_16X1_T15 = BetaFamily(build_structure([1] * 16), t=15)

P_GRID = [round(0.05 * i, 2) for i in range(1, 20)]


def random_small_family(rng):
    sizes = [rng.randint(1, 4) for _ in range(rng.randint(1, 5))]
    while sum(sizes) > 16:
        sizes.pop()
    structure = build_structure(sizes)
    k = structure.k
    kind = rng.choice(["alpha", "alpha_noarc", "beta", "majority"])
    if kind == "beta":
        return BetaFamily(structure, rng.randint((k + 2) // 2, k))
    if kind == "majority":
        n = structure.n
        v_w = rng.randint(n // 2 + 1, n)
        v_r = rng.randint(max(1, n - v_w + 1), n)
        return MajorityFamily(n, v_r, v_w)
    return AlphaFamily(structure, rng.randint(1, k), kind == "alpha")


class TestSizes:
    def test_alpha_8x2_read_sizes(self):
        assert read_quorum_sizes(ALPHA_8X2_T7) == {2}

    def test_beta_read_sizes(self):
        assert read_quorum_sizes(BETA_16X1_T15) == {2}

    def test_rowa_read_sizes(self):
        assert read_quorum_sizes(rowa(7)) == {1}

    def test_alpha_mixed_arc_read_sizes(self):
        fam = AlphaFamily(build_structure([1, 2, 3]), t=2)
        assert read_quorum_sizes(fam) == {2, 1, 3}

    def test_alpha_8x2_write_sizes(self):
        assert write_quorum_sizes(ALPHA_8X2_T7) == (15, 15)

    def test_beta_write_sizes(self):
        assert write_quorum_sizes(BETA_16X1_T15) == (15, 15)

    def test_alpha_unequal_write_sizes(self):
        fam = AlphaFamily(build_structure([1, 2, 3]), t=1)
        assert write_quorum_sizes(fam) == (3, 5)

    def test_write_size_min_matches_enumeration(self):
        # The max of the size formula ranges over all writing-arc choices,
        # some of which minimality pruning removes; only the min is
        # guaranteed to survive into the minimal family.
        from arcquorum.quorums import minimal_write_quorums

        for fam in (
            AlphaFamily(build_structure([1, 2, 3]), t=2),
            AlphaFamily(build_structure([2, 2, 1]), t=1),
            BetaFamily(build_structure([1, 2, 2]), t=2),
            ALPHA_8X2_T7,
        ):
            sizes = {len(w) for w in minimal_write_quorums(fam)}
            lo, hi = write_quorum_sizes(fam)
            assert min(sizes) == lo
            assert max(sizes) <= hi


class TestFaultTolerance:
    def test_alpha_8x2(self):
        assert fault_tolerance(ALPHA_8X2_T7) == 14

    def test_rowa(self):
        for n in (1, 4, 8):
            assert fault_tolerance(rowa(n)) == n - 1

    def test_majority(self):
        assert fault_tolerance(majority(16, 2, 15)) == 14


class TestReadCapacity:
    def test_alpha_8x2(self):
        assert read_capacity(ALPHA_8X2_T7) == 8

    def test_beta_16x1(self):
        assert read_capacity(BETA_16X1_T15) == 8

    def test_alpha_singleton_groups(self):
        fam = AlphaFamily(build_structure([3, 2, 1]), t=3)
        assert read_capacity(fam) == 6

    def test_exact_matches_spec_examples(self):
        assert exact_read_capacity(ALPHA_8X2_T7) == 8
        assert exact_read_capacity(rowa(4)) == 4
        assert exact_read_capacity(AlphaFamily(build_structure([2, 2]), t=1)) == 2

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_closed_form_matches_exact_search(self, n):
        def compositions(total):
            if total == 0:
                yield []
                return
            for first in range(1, total + 1):
                for rest in compositions(total - first):
                    yield [first] + rest

        for sizes in compositions(n):
            structure = build_structure(sizes)
            k = structure.k
            for t in range(1, k + 1):
                for flag in (True, False):
                    fam = AlphaFamily(structure, t, flag)
                    assert read_capacity(fam) == exact_read_capacity(fam), fam
            for t in range((k + 2) // 2, k + 1):
                fam = BetaFamily(structure, t)
                assert read_capacity(fam) == exact_read_capacity(fam), fam

    def test_majority_capacity(self):
        assert read_capacity(majority(16, 2, 15)) == 8
        assert exact_read_capacity(majority(16, 2, 15)) == 8

    def test_oracle_guard(self):
        with pytest.raises(TooLargeToEnumerate):
            exact_read_capacity(rowa(17))


class TestReadAvailability:
    def test_alpha_2x2_value(self):
        fam = AlphaFamily(build_structure([2, 2]), t=1)
        got = read_availability(fam, 0.9)
        assert got == pytest.approx(0.9963, abs=1e-10)

    def test_boundaries(self):
        for fam in (ALPHA_8X2_T7, BETA_16X1_T15, majority(16, 2, 15), rowa(3)):
            assert read_availability(fam, 1.0) == pytest.approx(1.0, abs=1e-12)
            assert read_availability(fam, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_beta_closed_form(self):
        for p in (0.3, 0.7, 0.9):
            expected = 1 - (1 - p) ** 16 - 16 * p * (1 - p) ** 15
            assert read_availability(BETA_16X1_T15, p) == pytest.approx(
                expected, abs=1e-12
            )

    def test_beta_equals_majority_pointwise(self):
        maj = majority(16, 2, 15)
        for p in P_GRID:
            assert abs(
                read_availability(BETA_16X1_T15, p) - read_availability(maj, p)
            ) <= 1e-12


class TestWriteAvailability:
    def test_rowa(self):
        assert structural_write_availability(rowa(4), 0.9) == pytest.approx(
            0.9**4, abs=1e-12
        )

    def test_beta_16x1(self):
        for p in (0.5, 0.9):
            expected = p**16 + 16 * p**15 * (1 - p)
            assert structural_write_availability(BETA_16X1_T15, p) == pytest.approx(
                expected, abs=1e-12
            )

    def test_alpha_2x2(self):
        fam = AlphaFamily(build_structure([2, 2]), t=1)
        p = 0.9
        expected = 2 * (0.81 * 0.99) - 0.81**2
        assert structural_write_availability(fam, p) == pytest.approx(
            expected, abs=1e-12
        )

    def test_protocol_write_availability_is_read_availability(self):
        for p in (0.0, 0.35, 0.9):
            assert protocol_write_availability(ALPHA_8X2_T7, p) == read_availability(
                ALPHA_8X2_T7, p
            )


class TestBruteForce:
    def test_always_true(self):
        assert brute_force_availability(lambda s: True, 3, 0.4) == pytest.approx(1.0)

    def test_alpha_2x2_read(self):
        fam = AlphaFamily(build_structure([2, 2]), t=1)
        got = brute_force_availability(lambda s: is_read_quorum(fam, s), 4, 0.9)
        assert got == pytest.approx(0.9963, abs=1e-12)

    def test_rowa2_write(self):
        fam = rowa(2)
        got = brute_force_availability(lambda s: is_write_quorum(fam, s), 2, 0.5)
        assert got == pytest.approx(0.25, abs=1e-12)

    def test_guard(self):
        with pytest.raises(TooLargeToEnumerate):
            brute_force_availability(lambda s: True, 21, 0.5)

    def test_vectorized_oracle_matches_scalar(self):
        fam = AlphaFamily(build_structure([2, 3, 1]), t=2)
        oracle_r = AvailabilityOracle(fam, "read")
        oracle_w = AvailabilityOracle(fam, "write")
        for p in (0.2, 0.55, 0.9):
            assert oracle_r(p) == pytest.approx(
                brute_force_availability(lambda s: is_read_quorum(fam, s), fam.n, p),
                abs=1e-12,
            )
            assert oracle_w(p) == pytest.approx(
                brute_force_availability(lambda s: is_write_quorum(fam, s), fam.n, p),
                abs=1e-12,
            )


class TestOracleAgreement:
    """Closed forms against the exhaustive oracle, and shape properties."""

    def test_section7_families(self):
        families = [
            ALPHA_8X2_T7,
            BETA_16X1_T15,
            AlphaFamily(build_structure([4] * 4), t=3, full_arc_reads=False),
            AlphaFamily(build_structure([2] * 8), t=1, full_arc_reads=False),
            AlphaFamily(build_structure([2] * 8), t=1, full_arc_reads=True),
            majority(16, 2, 15),
        ]
        for fam in families:
            oracle_r = AvailabilityOracle(fam, "read")
            oracle_w = AvailabilityOracle(fam, "write")
            for p in P_GRID:
                assert abs(read_availability(fam, p) - oracle_r(p)) <= 1e-9
                assert abs(structural_write_availability(fam, p) - oracle_w(p)) <= 1e-9

    def test_randomized_configs(self):
        rng = random.Random(20260810)
        for _ in range(40):
            fam = random_small_family(rng)
            oracle_r = AvailabilityOracle(fam, "read")
            oracle_w = AvailabilityOracle(fam, "write")
            for p in (0.05, 0.35, 0.65, 0.95):
                assert abs(read_availability(fam, p) - oracle_r(p)) <= 1e-9, fam
                assert abs(structural_write_availability(fam, p) - oracle_w(p)) <= 1e-9, fam

    def test_monotone_in_p(self):
        rng = random.Random(7)
        for _ in range(10):
            fam = random_small_family(rng)
            read_vals = [read_availability(fam, p) for p in P_GRID]
            write_vals = [structural_write_availability(fam, p) for p in P_GRID]
            assert all(a <= b + 1e-12 for a, b in zip(read_vals, read_vals[1:]))
            assert all(a <= b + 1e-12 for a, b in zip(write_vals, write_vals[1:]))

    def test_read_at_least_write(self):
        rng = random.Random(99)
        for _ in range(15):
            fam = random_small_family(rng)
            if isinstance(fam, MajorityFamily) and fam.v_r > fam.v_w:
                continue  # read quorums larger than write quorums
            for p in (0.1, 0.5, 0.9):
                assert read_availability(fam, p) >= structural_write_availability(
                    fam, p
                ) - 1e-12

    def test_subset_sum_form_matches_dp(self):
        for sizes in ([2, 2], [1, 3, 2], [2] * 6):
            for need in range(1, len(sizes) + 1):
                for p in (0.3, 0.8):
                    for flag in (True, False):
                        assert _occupied_tail(
                            tuple(sizes), need, p, flag
                        ) == pytest.approx(
                            _occupied_tail_subset_sum(tuple(sizes), need, p, flag),
                            abs=1e-12,
                        )


class TestReport:
    def test_report_fields(self):
        rep = metrics_report(ALPHA_8X2_T7, [0.9])
        assert rep.fault_tolerance == 14
        assert rep.read_capacity == 8
        assert rep.min_write_quorum == 15
        assert rep.read_quorum_sizes == {2}
        assert rep.protocol_write_availability[0.9] == rep.read_availability[0.9]
        assert rep.fault_tolerance == ALPHA_8X2_T7.n - min(rep.read_quorum_sizes)
        assert 0 <= rep.read_capacity <= ALPHA_8X2_T7.n
