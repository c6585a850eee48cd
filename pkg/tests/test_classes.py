"""Tests for conjugacy classes and the cyclic-class table.

The heavy fixtures (class decompositions of both Weyl groups) are
computed once per module; everything downstream reuses them. Oracles:
sympy for characteristic polynomials and Smith normal forms, brute-force
graph isomorphism for circulant canonicalization, and the frozen
published table for the end-to-end column values.
"""

import math
import random
import re
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import mobius, totient
from sympy.matrices.normalforms import smith_normal_form

from dplab import reference_data
from dplab.classes import (
    _canonical_connections,
    _smith,
    class_assignment,
    class_index,
    conjugacy_classes,
    eigen_signature,
    format_eigen_signature,
    format_h1,
    format_orbit_types,
    h1,
    line_orbits,
    match_e7_class,
    orbit_types,
    sato_tate,
    table_e6,
)
from dplab.lattice import compose_perms


@pytest.fixture(scope="module")
def classes6(w6):
    return conjugacy_classes(w6)


@pytest.fixture(scope="module")
def classes7(w7):
    return conjugacy_classes(w7)


@pytest.fixture(scope="module")
def full_table(w6, w7):
    return table_e6(w6, w7)


# ---------------------------------------------------------------------------
# Class decomposition skeletons


def test_e6_class_skeleton(w6, classes6):
    assert len(classes6) == 25
    assert sum(rec.size for rec in classes6) == w6.order == 51840
    assert classes6[0].rep_index == 0
    assert classes6[0].size == 1
    assert classes6[0].order == 1
    assert classes6[0].trace == 7
    assert sorted(rec.order for rec in classes6) == sorted(
        row.order for row in reference_data.CUBIC_TABLE)
    assert sorted(rec.measure_inverse for rec in classes6) == sorted(
        row.measure_inverse for row in reference_data.CUBIC_TABLE)


def test_e7_class_skeleton(w7, classes7):
    assert len(classes7) == 60
    assert sum(rec.size for rec in classes7) == w7.order == 2903040
    assert classes7[0].size == 1 and classes7[0].trace == 8
    # -1 on the root lattice (and +1 on the canonical class) is central:
    # a singleton class of order 2 with trace -6.
    assert any(rec.size == 1 and rec.order == 2 and rec.trace == -6
               for rec in classes7)
    assert max(rec.order for rec in classes7) == 30


def test_class_sizes_divide_group_order(classes6, classes7):
    for rec in classes6:
        assert 51840 % rec.size == 0
    for rec in classes7:
        assert 2903040 % rec.size == 0


def test_assignment_consistent_with_records(w6, classes6):
    assign = class_assignment(w6)
    counts = np.bincount(assign, minlength=len(classes6))
    for c, rec in enumerate(classes6):
        assert assign[rec.rep_index] == c
        assert counts[c] == rec.size


def _random_conjugate(W, x, g):
    ginv = np.argsort(W.perms[g]).astype(W.perms.dtype)
    conj = compose_perms(W.perms[g], compose_perms(W.perms[x], ginv))
    return W.lookup(conj)


def test_conjugation_preserves_class_e6(w6, classes6):
    assign = class_assignment(w6)
    rng = random.Random(11)
    for _ in range(200):
        x = rng.randrange(w6.order)
        g = rng.randrange(w6.order)
        assert assign[_random_conjugate(w6, x, g)] == assign[x]


def test_conjugation_preserves_class_e7(w7, classes7):
    assign = class_assignment(w7)
    rng = random.Random(13)
    for _ in range(40):
        x = rng.randrange(w7.order)
        g = rng.randrange(w7.order)
        assert assign[_random_conjugate(w7, x, g)] == assign[x]


# ---------------------------------------------------------------------------
# Characteristic polynomials and eigenvalue signatures


def test_char_poly_matches_sympy(classes6, classes7):
    x = sympy.Symbol("x")
    for rec in list(classes6) + list(classes7):
        mat = sympy.Matrix(rec.representative().matrix)
        coeffs = mat.charpoly(x).all_coeffs()
        assert tuple(int(c) for c in reversed(coeffs)) == rec.char_poly


def test_eigen_signature_published_rows(full_table):
    by_number = {rec.number: rec for rec in full_table}
    assert by_number[25].eigen_sig == ((1, 7),)
    assert by_number[3].eigen_sig == ((1, 1), (3, 6))
    assert by_number[7].eigen_sig == ((1, 2), (2, 1), (8, 4))
    assert by_number[25].trace == 7
    assert by_number[3].trace == -2


def test_eigen_signature_of_elements(w6, classes6):
    for rec in classes6:
        sig, trace = eigen_signature(rec.group.element(rec.rep_index))
        assert trace == rec.trace
        assert sum(b for _, b in sig) == 7
        assert all(b % int(totient(n)) == 0 for n, b in sig)
        assert trace == sum(
            (b // int(totient(n))) * int(mobius(n)) for n, b in sig)
        assert math.lcm(*(n for n, _ in sig)) == rec.order


def test_eigen_signature_e7_consistency(classes7):
    for rec in classes7:
        sig, trace = eigen_signature(rec.representative())
        assert trace == rec.trace
        assert sum(b for _, b in sig) == 8
        assert math.lcm(*(n for n, _ in sig)) == rec.order


# ---------------------------------------------------------------------------
# Smith normal form and H^1


def _sympy_snf_diag(rows, k):
    mat = sympy.Matrix(rows)
    snf = smith_normal_form(mat)
    return [abs(int(snf[i, i])) for i in range(k)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=12, max_size=12))
def test_smith_matches_sympy(values):
    rows = [values[0:4], values[4:8], values[8:12]]
    diag, v = _smith(rows)
    assert diag == _sympy_snf_diag(rows, 3)
    for a, b in zip(diag, diag[1:]):
        if b != 0:
            assert a != 0 and b % a == 0
    assert abs(sympy.Matrix(v).det()) == 1
    prod = sympy.Matrix(rows) * sympy.Matrix(v)
    for j, d in enumerate(diag):
        if d == 0:
            assert all(prod[i, j] == 0 for i in range(3))


def test_smith_edge_cases():
    assert _smith([[0, 0], [0, 0]])[0] == [0, 0]
    assert _smith([[1, 0], [0, 1]])[0] == [1, 1]
    assert _smith([[2, 4], [4, 8]])[0] == [2, 0]
    assert _smith([[6]])[0] == [6]


def test_smith_matches_sympy_on_norm_matrices(classes6):
    # The matrices actually fed to _smith by h1: norm and augmented maps.
    for rec in classes6:
        mat = rec.representative().matrix
        dim = len(mat)
        ident = [[int(i == j) for j in range(dim)] for i in range(dim)]
        delta = [[mat[i][j] - ident[i][j] for j in range(dim)]
                 for i in range(dim)]
        diag, _ = _smith(delta)
        assert diag == _sympy_snf_diag(delta, dim)


def test_h1_published_rows(full_table):
    by_number = {rec.number: rec for rec in full_table}
    assert by_number[25].h1 == ()
    assert by_number[3].h1 == (3, 3)
    assert by_number[9].h1 == (2, 2)
    assert by_number[7].h1 == ()     # corrected value
    assert by_number[10].h1 == ()    # corrected value


def test_h1_is_a_perfect_square_everywhere(classes6, classes7):
    sizes6 = set()
    for rec in classes6:
        size = math.prod(h1(rec.representative()))
        assert math.isqrt(size) ** 2 == size
        sizes6.add(size)
    assert sizes6 == {1, 4, 9}
    sizes7 = {}
    for rec in classes7:
        size = math.prod(h1(rec.representative()))
        assert math.isqrt(size) ** 2 == size
        sizes7[size] = sizes7.get(size, 0) + 1
    assert sizes7 == {1: 44, 4: 10, 9: 2, 16: 3, 64: 1}


# ---------------------------------------------------------------------------
# Line orbits, circulant types, and the index


def test_line_orbits_partition(classes6):
    for rec in classes6:
        orbits = line_orbits(rec)
        flat = sorted(i for orb in orbits for i in orb)
        assert flat == list(range(27))
        for orb in orbits:
            assert rec.order % len(orb) == 0


def test_orbit_types_published_column(full_table):
    for rec in full_table:
        row = reference_data.CUBIC_TABLE[rec.number - 1]
        got = tuple((t.n, t.connections, t.multiplicity)
                    for t in rec.orbit_types)
        assert got == row.orbit_types


def test_fixed_lines_match_singleton_orbit_types(full_table):
    for rec in full_table:
        singles = sum(t.multiplicity for t in rec.orbit_types if t.n == 1)
        assert singles == rec.fixed_lines
        if singles:
            assert rec.index >= 1


def test_index_published_column(full_table):
    for rec in full_table:
        row = reference_data.CUBIC_TABLE[rec.number - 1]
        assert rec.index == row.index
    assert {rec.index for rec in full_table} == {0, 1, 3, 5, 6}
    by_number = {rec.number: rec for rec in full_table}
    assert by_number[12].index == 5    # corrected value
    assert by_number[14].index == 5    # corrected value
    assert by_number[25].index == 6
    assert by_number[1].index == 0


_SUPERSCRIPTS = "⁰¹²³⁴⁵⁶⁷⁸⁹"


def _parse_multiset(text):
    parts = []
    for chunk in text.split(","):
        base = "".join(ch for ch in chunk if ch not in _SUPERSCRIPTS)
        sup = "".join(str(_SUPERSCRIPTS.index(ch)) for ch in chunk
                      if ch in _SUPERSCRIPTS)
        parts.extend([int(base)] * int(sup or "1"))
    return parts


def test_blow_down_column_consistent_with_trace(full_table):
    # A row of index 6 blows down to the plane: the trace is 1 plus the
    # number of degree-1 parts of the contracted point configuration.
    for rec in full_table:
        row = reference_data.CUBIC_TABLE[rec.number - 1]
        if rec.index != 6:
            continue
        if rec.number == 25:
            assert row.blow_down == "1⁶"
        parts = _parse_multiset(row.blow_down) if row.blow_down else []
        assert sum(parts) == 6
        assert rec.trace == 1 + parts.count(1)


# ---------------------------------------------------------------------------
# Circulant canonicalization against brute-force graph isomorphism


def _circulant_adjacency(n, connections):
    conn = set(connections)
    return [[a != b and min((a - b) % n, (b - a) % n) in conn
             for b in range(n)] for a in range(n)]


def _isomorphic(adj1, adj2):
    n = len(adj1)
    deg1 = [sum(row) for row in adj1]
    deg2 = [sum(row) for row in adj2]
    if sorted(deg1) != sorted(deg2):
        return False
    used = [False] * n
    image = []

    def place(i):
        if i == n:
            return True
        for cand in range(n):
            if used[cand] or deg2[cand] != deg1[i]:
                continue
            if all(adj1[i][j] == adj2[cand][image[j]] for j in range(i)):
                used[cand] = True
                image.append(cand)
                if place(i + 1):
                    return True
                used[cand] = False
                image.pop()
        return False

    return place(0)


def _spectrum(adj):
    eigs = np.linalg.eigvalsh(np.array(adj, dtype=float))
    return tuple(np.round(eigs, 6))


@pytest.mark.parametrize("n", range(1, 13))
def test_circulant_canonicalization_matches_isomorphism(n):
    half = n // 2
    subsets = [frozenset(c) for k in range(half + 1)
               for c in combinations(range(1, half + 1), k)]
    by_canonical = {}
    for conn in subsets:
        canonical = _canonical_connections(n, conn)
        by_canonical.setdefault(canonical, []).append(conn)
        # Equivalent connection sets really are isomorphic graphs.
        assert _isomorphic(_circulant_adjacency(n, conn),
                           _circulant_adjacency(n, canonical))
    # Distinct canonical forms really are non-isomorphic graphs.
    reps = sorted(by_canonical)
    for a, b in combinations(reps, 2):
        adj_a = _circulant_adjacency(n, a)
        adj_b = _circulant_adjacency(n, b)
        if _spectrum(adj_a) != _spectrum(adj_b):
            continue
        assert not _isomorphic(adj_a, adj_b)


def test_canonical_connections_published_example():
    # The three length-9 orbit subgraphs of row 4 share one canonical
    # connection set even though the raw cycles differ.
    assert _canonical_connections(9, {2, 3}) == (1, 3)
    assert _canonical_connections(9, {3, 4}) == (1, 3)
    assert _canonical_connections(9, {1, 3}) == (1, 3)


# ---------------------------------------------------------------------------
# Matching into the larger group


def test_e7_match_published_column(full_table):
    labels = [rec.e7_match.label for rec in full_table]
    assert labels == [22, 24, 20, 23, 21, 33, 32, 26, 29, 27, 25, 58, 42,
                      53, 59, 56, 55, 54, 52, 51, 50, 49, 48, 47, 46]


def test_e7_match_ambiguity_pattern(full_table):
    ambiguous = {rec.number for rec in full_table
                 if rec.e7_match.candidates == 2}
    assert ambiguous == {5, 9, 11, 15, 17, 21}
    assert all(rec.e7_match.candidates in (1, 2) for rec in full_table)
    assert all(rec.e7_match.fixed_lines >= 1 for rec in full_table)


def test_e7_match_target_polynomials(full_table, classes7):
    # The matched class is unique among fixed-line classes with the
    # extended characteristic polynomial, and has the same order.
    seen = set()
    for rec in full_table:
        target = rec.e7_match.char_poly
        hits = [c for c in classes7
                if c.char_poly == target and c.fixed_lines > 0]
        assert len(hits) == 1
        assert hits[0].order == rec.order
        seen.add(target)
    assert len(seen) == 25


def test_match_requires_larger_group(w6, classes6, w7):
    record = conjugacy_classes(w6)[0]
    match = match_e7_class(record, w7)
    assert match.label == 46
    assert match.candidates == 1


# ---------------------------------------------------------------------------
# The full published table and the trace distributions


def test_table_matches_reference_on_all_columns(full_table):
    assert [rec.number for rec in full_table] == list(range(1, 26))
    for rec in full_table:
        row = reference_data.CUBIC_TABLE[rec.number - 1]
        assert rec.label == row.frame
        assert rec.index == row.index
        assert rec.order == row.order
        assert rec.measure_inverse == row.measure_inverse
        assert rec.eigen_sig == row.eigenvalues
        assert rec.trace == row.trace
        assert rec.h1 == row.h1
        assert rec.e7_match.label == row.blow_up
    assert len({rec.label for rec in full_table}) == 25


def test_table_without_matching(w6):
    table = table_e6(w6)
    assert len(table) == 25
    assert all(rec.e7_match is None for rec in table)
    assert [rec.number for rec in table] == list(range(1, 26))


def test_sato_tate_cubic(classes6):
    tau = sato_tate(classes6)
    assert tau == reference_data.TAU_3
    assert sum(tau.values()) == 1
    assert set(tau) == reference_data.POSSIBLE_TRACES[3]


def test_sato_tate_degree_two(classes7):
    tau = sato_tate(classes7)
    assert tau == reference_data.TAU_2
    assert sum(tau.values()) == 1
    assert set(tau) == reference_data.POSSIBLE_TRACES[2]


# ---------------------------------------------------------------------------
# Display formatting


def test_display_formats_match_published_notation(full_table):
    by_number = {rec.number: rec for rec in full_table}
    assert format_eigen_signature(by_number[1].eigen_sig) == "1,3²,12⁴"
    assert format_eigen_signature(by_number[7].eigen_sig) == "1²,2,8⁴"
    assert format_eigen_signature(by_number[25].eigen_sig) == "1⁷"
    assert format_orbit_types(by_number[16].orbit_types) == "1²,5³,5₁²"
    assert format_orbit_types(by_number[5].orbit_types) == \
        "3₁,6_{1,3}³,6_{2,3}"
    assert format_orbit_types(by_number[25].orbit_types) == "1²⁷"
    assert format_h1(by_number[3].h1) == "3²"
    assert format_h1(by_number[9].h1) == "2²"
    assert format_h1(by_number[25].h1) == "0"
    assert format_orbit_types(by_number[5].orbit_types, ascii_style=True) \
        == "3_{1},6_{1,3}^3,6_{2,3}"


def _split_outside_braces(text):
    items, cur, depth = [], "", 0
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    items.append(cur)
    return items


def test_ascii_style_is_parseable(full_table):
    # ASCII renderings follow n[_{conns}][^mult], one item per type.
    pattern = re.compile(r"^\d+(_\{\d+(,\d+)*\})?(\^\d+)?$")
    for rec in full_table:
        text = format_orbit_types(rec.orbit_types, ascii_style=True)
        items = _split_outside_braces(text)
        assert len(items) == len(rec.orbit_types)
        for item in items:
            assert pattern.match(item), item
