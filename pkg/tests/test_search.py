"""Configuration searches and trace tables: randomized witnesses,
exhaustive certificates cross-checked against an unpruned brute force
built on the plane module, normal-basis configurations, and per-degree
trace tables checked against the published existence sets.
"""

import json
import math
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dplab.gf import extension_of, from_int, make_field, one, zero
from dplab.plane import (
    ClosedPointConfig,
    frobenius_orbit,
    is_general_position,
    proj_point,
)
from dplab.reference_data import POSSIBLE_TRACES, excluded_prime_powers
from dplab.search import (
    canonical_partition,
    closed_point_count,
    config_to_dict,
    estimate_configurations,
    find_config,
    normal_basis_config,
    prime_powers_up_to,
    prove_nonexistence,
    result_to_dict,
    row_to_dict,
    trace_table,
)

F2 = make_field(2, 1)
F3 = make_field(3, 1)
F4 = make_field(2, 2)
F5 = make_field(5, 1)
F8 = make_field(2, 3)
F9 = make_field(3, 2)
F16 = make_field(2, 4)

SMALL_SPECS = {2: F2, 3: F3, 4: F4, 5: F5, 7: make_field(7, 1), 8: F8,
               9: F9, 11: make_field(11, 1), 13: make_field(13, 1), 16: F16}


# -- unpruned brute-force oracle ---------------------------------------------


def closed_points_of_degree(base, d):
    """Every degree-d closed point exactly once, via the plane module.

    Walks the normalized coordinate triples of P^2(F_{q^d}) and keeps a
    point exactly when it is the canonical representative of its own
    Frobenius orbit, so each closed point appears once.
    """
    ext = extension_of(base, d)

    def triples():
        for y in range(ext.q):
            for z in range(ext.q):
                yield (one(ext), from_int(ext, y), from_int(ext, z))
        for z in range(ext.q):
            yield (zero(ext), one(ext), from_int(ext, z))
        yield (zero(ext), zero(ext), one(ext))

    for coords in triples():
        P = proj_point(*coords)
        cp = frobenius_orbit(P, base)
        if cp.degree == d and cp.rep == P:
            yield cp


class LazyList:
    """Replayable view over a generator, extended on demand."""

    def __init__(self, gen):
        self._gen = gen
        self._items = []
        self._done = False

    def __getitem__(self, idx):
        while not self._done and len(self._items) <= idx:
            try:
                self._items.append(next(self._gen))
            except StopIteration:
                self._done = True
        return self._items[idx]

    def take_all(self):
        idx = 0
        while True:
            try:
                self[idx]
            except IndexError:
                break
            idx += 1
        return list(self._items)


def naive_exists(base, partition):
    """Unpruned existence check: no frame pinning, no incremental
    rejection; every complete candidate goes through the plane module's
    general-position predicate.  Short-circuits on the first witness.
    """
    groups = sorted(Counter(partition).items())
    pools = {}

    def pool(d):
        if d not in pools:
            pools[d] = LazyList(closed_points_of_degree(base, d))
        return pools[d]

    def rec(gi, acc):
        if gi == len(groups):
            return is_general_position(
                ClosedPointConfig(base=base, points=tuple(acc)))
        d, m = groups[gi]
        if m == 1:
            idx = 0
            while True:
                try:
                    cp = pool(d)[idx]
                except IndexError:
                    return False
                idx += 1
                if rec(gi + 1, acc + [cp]):
                    return True
        for combo in combinations(pool(d).take_all(), m):
            if rec(gi + 1, acc + list(combo)):
                return True
        return False

    return rec(0, [])


def all_partitions_up_to(total):
    """Ascending partitions of every n <= total."""
    out = []

    def rec(remaining, minimum, prefix):
        if prefix:
            out.append(tuple(prefix))
        for d in range(minimum, remaining + 1):
            rec(remaining - d, d, prefix + [d])

    rec(total, 1, [])
    return sorted(set(out), key=lambda p: (sum(p), p))


def test_pruned_search_agrees_with_unpruned_brute_force():
    for spec in (F2, F3, F4):
        for part in all_partitions_up_to(6):
            pruned = prove_nonexistence(spec, part)
            assert pruned.status in ("found", "not_found"), (spec.q, part)
            naive = naive_exists(spec, part)
            assert pruned.found == naive, (spec.q, part)
            if pruned.found:
                assert pruned.config.partition == canonical_partition(part)
                assert is_general_position(pruned.config)


# -- counting oracles --------------------------------------------------------


def test_closed_point_count_matches_enumeration():
    for q, d in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2)]:
        stream = closed_points_of_degree(SMALL_SPECS[q], d)
        assert closed_point_count(q, d) == sum(1 for _ in stream)


def test_closed_point_counts_sum_to_plane_points():
    # grouping P^2(F_{q^d}) by the degree of the closed point below it
    for q in (2, 3, 4, 5, 7, 9):
        for d in range(1, 9):
            total = sum(e * closed_point_count(q, e)
                        for e in range(1, d + 1) if d % e == 0)
            assert total == q ** (2 * d) + q ** d + 1


def test_estimate_configurations_values():
    assert estimate_configurations(F2, [1, 1, 1, 1, 1]) == 3
    assert estimate_configurations(F2, [1, 4]) == 63
    assert estimate_configurations(F4, [1, 1, 1, 1, 1, 2]) == 17 * 126
    assert estimate_configurations(F9, [1] * 7) == math.comb(87, 3)
    assert estimate_configurations(SMALL_SPECS[7], [1] * 8) == math.comb(53, 4)


def test_canonical_partition_validation():
    assert canonical_partition([2, 1, 1]) == (1, 1, 2)
    assert canonical_partition((8,)) == (8,)
    with pytest.raises(ValueError):
        canonical_partition([])
    with pytest.raises(ValueError):
        canonical_partition([0, 1])
    with pytest.raises(ValueError):
        canonical_partition([3, 3, 3])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 8), min_size=1, max_size=8))
def test_canonical_partition_sorts_and_bounds(entries):
    if sum(entries) > 8:
        with pytest.raises(ValueError):
            canonical_partition(entries)
        return
    part = canonical_partition(entries)
    assert list(part) == sorted(entries)
    assert canonical_partition(part) == part


def test_prime_powers_up_to():
    assert prime_powers_up_to(16) == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


# -- randomized search -------------------------------------------------------


def test_find_config_seven_rational_points_over_f9():
    result = find_config(F9, [1] * 7)
    assert result.found
    assert result.config.partition == (1,) * 7
    assert is_general_position(result.config)


def test_find_config_mixed_orbits_over_f2():
    result = find_config(F2, [2, 2, 3])
    assert result.found
    assert result.config.partition == (2, 2, 3)
    assert is_general_position(result.config)


def test_find_config_eight_points_over_f16():
    result = find_config(F16, [1] * 8)
    assert result.found
    assert result.config.partition == (1,) * 8
    assert is_general_position(result.config)


def test_find_config_is_deterministic_per_seed():
    first = find_config(F9, [1, 1, 1, 1, 2], seed=7)
    second = find_config(F9, [1, 1, 1, 1, 2], seed=7)
    assert first.found and second.found
    assert config_to_dict(first.config) == config_to_dict(second.config)
    assert first.stats.seed == 7


def test_find_config_generic_route_beyond_table_bound():
    # F_9^7 exceeds the dense-table bound, so sampling falls back to
    # field elements rather than integer codes
    result = find_config(F9, [7])
    assert result.found
    assert result.config.partition == (7,)
    assert result.config.points[0].degree == 7


def test_find_config_inconclusive_after_budget():
    result = find_config(F2, [1] * 5, budget=20)
    assert result.status == "inconclusive"
    assert result.config is None
    assert "20 randomized trials" in result.reason
    assert result.stats.examined == 20


# -- exhaustive search -------------------------------------------------------


def test_prove_nonexistence_six_rational_points_over_f5():
    result = prove_nonexistence(F5, [1] * 6)
    assert result.status == "not_found"
    cert = result.certificate
    assert cert["q"] == 5
    assert cert["partition"] == [1] * 6
    assert cert["pinned_rational_points"] == 4
    assert cert["pools"] == {"1": 27}
    assert cert["nodes"] > 0
    assert cert["description"].startswith("exhausted all configurations")


def test_prove_nonexistence_seven_rational_points_over_f8():
    result = prove_nonexistence(F8, [1] * 7)
    assert result.status == "not_found"
    assert result.certificate["pools"] == {"1": 69}


def test_prove_nonexistence_five_points_and_quadratic_orbit_over_f4():
    result = prove_nonexistence(F4, [1, 1, 1, 1, 1, 2])
    assert result.status == "not_found"
    assert result.certificate["pools"] == {"1": 17, "2": 126}


def test_prove_nonexistence_finds_witness_when_one_exists():
    result = prove_nonexistence(F9, [1] * 7)
    assert result.found
    assert is_general_position(result.config)


def test_six_rational_points_exist_exactly_off_the_excluded_set():
    for q in (2, 3, 4, 5, 7, 8, 9):
        result = prove_nonexistence(SMALL_SPECS[q], [1] * 6)
        expected = q not in excluded_prime_powers(3, 7)
        assert result.found == expected, q


def test_prove_nonexistence_inconclusive_on_table_bound():
    result = prove_nonexistence(F9, [7])
    assert result.status == "inconclusive"
    assert "dense-table bound" in result.reason


def test_prove_nonexistence_inconclusive_on_test_budget():
    result = prove_nonexistence(F9, [1] * 7, elementary_budget=100)
    assert result.status == "inconclusive"
    assert "budget 100 exhausted" in result.reason


def test_search_results_serialize_to_json():
    found = find_config(F9, [1] * 7)
    not_found = prove_nonexistence(F5, [1] * 6)
    for result in (found, not_found):
        payload = json.loads(json.dumps(result_to_dict(result)))
        assert payload["status"] == result.status
        assert payload["q"] == result.q
        assert payload["stats"]["examined"] == result.stats.examined


# -- normal-basis configurations ---------------------------------------------


def test_normal_basis_configs_through_q16():
    for q, spec in SMALL_SPECS.items():
        for d in (6, 7, 8):
            config = normal_basis_config(spec, d)
            assert config.partition == (d,)
            assert config.points[0].degree == d
            assert is_general_position(config), (q, d)


def test_normal_basis_config_rejects_other_degrees():
    with pytest.raises(ValueError):
        normal_basis_config(F2, 5)


# -- trace tables ------------------------------------------------------------


def expected_status(degree, q, trace):
    return "absent" if q in excluded_prime_powers(degree, trace) else "exists"


def test_cubic_trace_table_is_exact_through_q16():
    for q, spec in SMALL_SPECS.items():
        rows = trace_table(3, spec)
        assert [r.trace for r in rows] == sorted(POSSIBLE_TRACES[3])
        for row in rows:
            assert row.status == expected_status(3, q, row.trace), (q, row)


def test_quartic_trace_table_at_small_q():
    for q in (2, 3, 4):
        rows = trace_table(4, SMALL_SPECS[q])
        assert [r.trace for r in rows] == sorted(POSSIBLE_TRACES[4])
        for row in rows:
            assert row.status == expected_status(4, q, row.trace), (q, row)


def test_degree2_trace_table_at_q2():
    rows = {r.trace: r for r in trace_table(2, F2)}
    for a in (4, 5, 6, 8, -2, -3, -4, -6):
        assert rows[a].status == "absent", a
    for a in (-1, 0, 1, 2, 3):
        assert rows[a].status == "exists", a
    # the reflected cells wrap their partner's evidence
    assert rows[-2].witness["kind"] == "twist"
    assert rows[-2].witness["partner_trace"] == 4
    # a twist with a negative point count certifies absence directly
    assert rows[6].witness["method"] == "twist positivity"
    # a = 4 needs the exhaustive certificate instead
    assert rows[4].witness["kind"] == "certificate"
    assert rows[4].witness["nodes"] > 0


def test_degree1_trace_table_at_q2_uses_explicit_surfaces():
    rows = {r.trace: r for r in trace_table(1, F2)}
    for a in sorted(POSSIBLE_TRACES[1]):
        assert rows[a].status == expected_status(1, 2, a), a
    for a, count in ((4, 13), (3, 11)):
        assert rows[a].witness["kind"] == "surface"
        assert rows[a].witness["count"] == count == 1 + a * 2 + 4


def test_degree1_trace_table_at_q17():
    rows = {r.trace: r for r in trace_table(1, make_field(17, 1))}
    assert rows[9].status == "absent"
    assert rows[9].witness["kind"] == "citation"
    assert rows[7].status == "exists"
    assert rows[7].witness["kind"] == "blowup"


def test_twist_reflection_is_a_status_involution():
    for degree in (1, 2):
        for spec in (F2, F3):
            rows = {r.trace: r for r in trace_table(degree, spec)}
            for a, row in rows.items():
                partner = rows.get(2 - a)
                if partner is not None:
                    assert row.status == partner.status, (degree, spec.q, a)


def test_trace_table_rejects_unknown_degree():
    with pytest.raises(ValueError):
        trace_table(5, F2)


def test_trace_table_rows_serialize_to_json():
    rows = trace_table(3, F2)
    payload = json.loads(json.dumps([row_to_dict(r) for r in rows]))
    assert {entry["status"] for entry in payload} <= {"exists", "absent",
                                                      "unknown"}
    by_trace = {entry["trace"]: entry for entry in payload}
    assert by_trace[7]["status"] == "absent"
    assert by_trace[7]["witness"]["kind"] == "certificate"
