"""Conjugacy classes of the line-permutation Weyl groups and the full
cyclic classification table for cubic surfaces.

Classes are found by bucketing all group elements on a conjugation
invariant (fixed-point counts of all permutation powers, i.e. the cycle
type on lines, together with the characteristic polynomial on the
Picard lattice) and then refining each bucket into true classes by
closing seeds under conjugation by the simple reflections. Every
per-class invariant of the classification table is then recomputed from
a class representative:

- eigenvalue signature and trace, by factoring the characteristic
  polynomial into cyclotomic polynomials;
- H^1 of the cyclic group generated by the element acting on the
  lattice, via an integer Smith normal form;
- the index, as the maximum weight of a set of element-orbits of lines
  that is independent in the meet graph;
- the orbit types, as canonical circulant graphs induced on the line
  orbits (connection sets reduced by unit multipliers);
- the matched class in the rank-7 group, by multiplying the
  characteristic polynomial by (x - 1) and keeping the unique candidate
  class that fixes a line.

Row labels and the blow-down column are not recomputable and come from
the embedded reference table, keyed on (order, reciprocal measure,
eigenvalue signature).
"""

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import Poly, Symbol, cyclotomic_poly, totient

from . import reference_data
from .lattice import WeylElement, WeylGroup, reflection

# Largest element order in either group (realized in the rank-7 group);
# also bounds every cycle length on lines and every eigenvalue order.
MAX_ELEMENT_ORDER = 30


@dataclass(frozen=True)
class CirculantType:
    """``multiplicity`` line orbits of length n inducing the circulant
    graph with the given canonical connection set."""

    n: int
    connections: tuple[int, ...]
    multiplicity: int


@dataclass(frozen=True)
class E7Match:
    """Matched blow-up class: its characteristic polynomial, how many
    lines it fixes, how many classes shared the polynomial before the
    fixed-line filter, and the published class number."""

    char_poly: tuple[int, ...]
    fixed_lines: int
    candidates: int
    label: int


@dataclass(frozen=True)
class ClassRecord:
    """One conjugacy class; analysis fields are filled by table_e6."""

    group: WeylGroup = field(repr=False)
    rep_index: int
    size: int
    order: int
    char_poly: tuple[int, ...]
    label: str | None = None
    number: int | None = None
    index: int | None = None
    eigen_sig: tuple[tuple[int, int], ...] | None = None
    h1: tuple[int, ...] | None = None
    orbit_types: tuple[CirculantType, ...] | None = None
    e7_match: E7Match | None = None

    @property
    def measure_inverse(self) -> int:
        return self.group.order // self.size

    @property
    def trace(self) -> int:
        return -self.char_poly[-2]

    @property
    def fixed_lines(self) -> int:
        perm = self.group.perms[self.rep_index]
        return int((perm == np.arange(len(perm), dtype=perm.dtype)).sum())

    def representative(self) -> WeylElement:
        return self.group.element(self.rep_index)


_CLASS_CACHE: dict[WeylGroup, tuple[tuple[ClassRecord, ...], np.ndarray]] = {}


def conjugacy_classes(W: WeylGroup) -> tuple[ClassRecord, ...]:
    """All conjugacy classes of W, ordered by least member index."""
    cached = _CLASS_CACHE.get(W)
    if cached is not None:
        return cached[0]
    n_elems, n_lines = W.perms.shape
    fixed = _fixed_point_counts(W.perms)
    orders = _element_orders(fixed, n_lines)
    char_polys = _char_polys(W)
    assign = _refine_buckets(W, fixed, char_polys)
    n_classes = int(assign.max()) + 1
    sizes = np.bincount(assign, minlength=n_classes)
    reps = np.full(n_classes, n_elems, dtype=np.int64)
    np.minimum.at(reps, assign, np.arange(n_elems, dtype=np.int64))
    assert sizes.sum() == n_elems
    by_rep = np.argsort(reps)
    relabel = np.empty(n_classes, dtype=np.int32)
    relabel[by_rep] = np.arange(n_classes, dtype=np.int32)
    assign = relabel[assign]
    records = []
    for c in by_rep:
        rep = int(reps[c])
        size = int(sizes[c])
        assert n_elems % size == 0
        records.append(ClassRecord(
            group=W, rep_index=rep, size=size, order=int(orders[rep]),
            char_poly=tuple(int(x) for x in char_polys[rep])))
    result = tuple(records)
    _CLASS_CACHE[W] = (result, assign)
    return result


def class_assignment(W: WeylGroup) -> np.ndarray:
    """Class id of every group element, indexing into conjugacy_classes(W)."""
    conjugacy_classes(W)
    return _CLASS_CACHE[W][1]


def _fixed_point_counts(perms: np.ndarray) -> np.ndarray:
    """fixed[i, k-1] = number of fixed points of the k-th power."""
    n_elems, n = perms.shape
    ident = np.arange(n, dtype=perms.dtype)
    out = np.empty((n_elems, MAX_ELEMENT_ORDER), dtype=np.uint8)
    step = 1 << 17
    for lo in range(0, n_elems, step):
        p = perms[lo:lo + step]
        cur = p.copy()
        out[lo:lo + step, 0] = (cur == ident).sum(axis=1)
        for k in range(1, MAX_ELEMENT_ORDER):
            cur = np.take_along_axis(p, cur, axis=1)
            out[lo:lo + step, k] = (cur == ident).sum(axis=1)
    return out


def _element_orders(fixed: np.ndarray, n_lines: int) -> np.ndarray:
    full = fixed == n_lines
    if not full.any(axis=1).all():
        raise AssertionError("an element order exceeds the supported bound")
    return 1 + np.argmax(full, axis=1)


def _char_polys(W: WeylGroup) -> np.ndarray:
    """Characteristic polynomials of all elements (coefficients low to
    high), via the exact integer Faddeev-LeVerrier recurrence."""
    lines = np.array(W.lines, dtype=np.int64)
    binv = np.array(W.basis_inverse, dtype=np.int64)
    dim = W.lattice.dim
    n_elems = len(W.perms)
    out = np.empty((n_elems, dim + 1), dtype=np.int64)
    step = 1 << 15
    span = W.span_positions
    for lo in range(0, n_elems, step):
        img = lines[W.perms[lo:lo + step][:, span]]
        mats = img.transpose(0, 2, 1) @ binv
        out[lo:lo + step] = _fl_char_polys(mats)
    return out


def _fl_char_polys(mats: np.ndarray) -> np.ndarray:
    m, d, _ = mats.shape
    coeffs = np.empty((m, d + 1), dtype=np.int64)
    coeffs[:, d] = 1
    eye = np.eye(d, dtype=np.int64)
    acc = mats.copy()
    for k in range(1, d + 1):
        tr = np.trace(acc, axis1=1, axis2=2)
        if (tr % k).any():
            raise AssertionError("inexact division in the trace recurrence")
        c = -(tr // k)
        coeffs[:, d - k] = c
        if k < d:
            acc = mats @ (acc + c[:, None, None] * eye)
    return coeffs


def _simple_reflection_perms(W: WeylGroup) -> list[np.ndarray]:
    """Line permutations of the simple reflections (they generate W)."""
    L = W.lattice
    simple = []
    for i in range(1, L.r):
        v = [0] * (L.r + 1)
        v[i], v[i + 1] = 1, -1
        simple.append(tuple(v))
    v = [0] * (L.r + 1)
    v[0], v[1], v[2], v[3] = 1, -1, -1, -1
    simple.append(tuple(v))
    return [np.array(reflection(L, v).line_perm, dtype=np.uint8)
            for v in simple]


def _refine_buckets(W: WeylGroup, fixed: np.ndarray,
                    char_polys: np.ndarray) -> np.ndarray:
    """Class id per element: invariant buckets split by conjugation
    closure (conjugating by the simple reflections, which are
    involutions, so g x g is the conjugate)."""
    n_elems = len(fixed)
    cp16 = char_polys.astype(np.int16)
    if (cp16 != char_polys).any():
        raise AssertionError("characteristic coefficients exceed int16")
    blob = np.ascontiguousarray(np.concatenate(
        [fixed, cp16.view(np.uint8).reshape(n_elems, -1)], axis=1))
    keys = blob.view(np.dtype((np.void, blob.shape[1]))).ravel()
    sort_idx = np.argsort(keys, kind="stable")
    sorted_keys = keys[sort_idx]
    starts = np.flatnonzero(np.r_[True, sorted_keys[1:] != sorted_keys[:-1]])
    ends = np.r_[starts[1:], n_elems]
    gens = _simple_reflection_perms(W)
    assign = np.full(n_elems, -1, dtype=np.int32)
    next_id = 0
    for s, e in zip(starts, ends):
        bucket = np.sort(sort_idx[s:e])
        while True:
            unassigned = bucket[assign[bucket] < 0]
            if not unassigned.size:
                break
            seed = int(unassigned[0])
            assign[seed] = next_id
            frontier = np.array([seed], dtype=np.int64)
            while frontier.size:
                rows = W.perms[frontier]
                grown = []
                for g in gens:
                    conj = g[rows[:, g]]
                    candidates = np.unique(W.lookup_many(conj))
                    fresh = candidates[assign[candidates] < 0]
                    if fresh.size:
                        assign[fresh] = next_id
                        grown.append(fresh)
                frontier = (np.concatenate(grown) if grown
                            else np.empty(0, dtype=np.int64))
            next_id += 1
    return assign


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def _char_poly_matrix(matrix) -> tuple[int, ...]:
    """Characteristic polynomial of one integer matrix, exactly."""
    base = [list(map(int, row)) for row in matrix]
    d = len(base)
    acc = [row[:] for row in base]
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    for k in range(1, d + 1):
        tr = sum(acc[i][i] for i in range(d))
        if tr % k:
            raise AssertionError("inexact division in the trace recurrence")
        c = -(tr // k)
        coeffs[d - k] = c
        if k < d:
            for i in range(d):
                acc[i][i] += c
            acc = _mat_mul(base, acc)
    return tuple(coeffs)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)


def _poly_divmod_exact(a, b):
    """Quotient and remainder of integer polynomials, b monic."""
    assert b[-1] == 1
    rem = list(a)
    dq = len(a) - len(b)
    if dq < 0:
        return (0,), tuple(a)
    quot = [0] * (dq + 1)
    for i in range(dq, -1, -1):
        c = rem[i + len(b) - 1]
        quot[i] = c
        if c:
            for j, bj in enumerate(b):
                rem[i + j] -= c * bj
    rem = rem[:len(b) - 1] or [0]
    while len(rem) > 1 and rem[-1] == 0:
        rem.pop()
    return tuple(quot), tuple(rem)


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    x = Symbol("x")
    coeffs = Poly(cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _signature_from_char_poly(cp) -> tuple[tuple[int, int], ...]:
    """Multiset {n^b}: b eigenvalues are primitive n-th roots of unity."""
    degree = len(cp) - 1
    rem = tuple(cp)
    sig = []
    for n in range(1, MAX_ELEMENT_ORDER + 1):
        if totient(n) > degree:
            continue
        phi = _cyclotomic(n)
        count = 0
        while len(rem) >= len(phi):
            quot, r = _poly_divmod_exact(rem, phi)
            if any(r):
                break
            rem = quot
            count += 1
        if count:
            sig.append((n, count * (len(phi) - 1)))
    if rem != (1,):
        raise ValueError(
            "characteristic polynomial has a non-cyclotomic factor")
    return tuple(sig)


def _char_poly_from_signature(sig) -> tuple[int, ...]:
    cp = (1,)
    for n, b in sig:
        phi = _cyclotomic(n)
        mult, extra = divmod(b, len(phi) - 1)
        if extra:
            raise ValueError("eigenvalue count is not a multiple of phi(n)")
        for _ in range(mult):
            cp = _poly_mul(cp, phi)
    return cp


def eigen_signature(w: WeylElement):
    """Eigenvalue signature {n^b} and trace of a finite-order element."""
    cp = _char_poly_matrix(w.matrix)
    return _signature_from_char_poly(cp), -cp[-2]


def _smith(matrix):
    """Smith normal form over the integers.

    Returns (diag, V): diag is the nonnegative diagonal with each entry
    dividing the next, and V is the unimodular column-operation matrix
    with U A V diagonal for some unimodular U.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None
                                or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        A[t], A[bi] = A[bi], A[t]
        if bj != t:
            for row in A:
                row[t], row[bj] = row[bj], row[t]
            for row in V:
                row[t], row[bj] = row[bj], row[t]
        pivot = A[t][t]
        cleared = True
        for i in range(m):
            if i != t and A[i][t]:
                q = A[i][t] // pivot
                A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    cleared = False
        for j in range(n):
            if j != t and A[t][j]:
                q = A[t][j] // pivot
                for row in A:
                    row[j] -= q * row[t]
                for row in V:
                    row[j] -= q * row[t]
                if A[t][j]:
                    cleared = False
        if not cleared:
            continue
        offender = None
        for i in range(t + 1, m):
            if any(A[i][j] % pivot for j in range(t + 1, n)):
                offender = i
                break
        if offender is not None:
            A[t] = [a + b for a, b in zip(A[t], A[offender])]
            continue
        if pivot < 0:
            for row in A:
                row[t] = -row[t]
            for row in V:
                row[t] = -row[t]
        t += 1
    return [A[i][i] for i in range(min(m, n))], V


def _exact_inverse(matrix):
    """Inverse of a unimodular integer matrix, as integers."""
    n = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(n)]
           + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if aug[i][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[col])]
    inv = [[x for x in row[n:]] for row in aug]
    assert all(x.denominator == 1 for row in inv for x in row)
    return [[int(x) for x in row] for row in inv]


def h1(w: WeylElement) -> tuple[int, ...]:
    """Nontrivial elementary divisors of H^1(<w>, lattice): the kernel
    of the norm N = I + M + ... + M^(m-1) modulo the image of M - I."""
    M = [list(map(int, row)) for row in w.matrix]
    d = len(M)
    ident = [[int(i == j) for j in range(d)] for i in range(d)]
    power, order = M, 1
    while power != ident:
        power = _mat_mul(power, M)
        order += 1
        if order > MAX_ELEMENT_ORDER:
            raise ValueError("element does not have small finite order")
    norm = [[0] * d for _ in range(d)]
    power = ident
    for _ in range(order):
        norm = [[a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(norm, power)]
        power = _mat_mul(power, M)
    diag, V = _smith(norm)
    kernel_cols = [j for j, dv in enumerate(diag) if dv == 0]
    if not kernel_cols:
        return ()
    # Columns of M - I lie in ker N; express them in the kernel basis
    # (columns of V at the zero diagonal entries) by applying V^{-1}.
    vinv = _exact_inverse(V)
    m_minus_i = [[M[i][j] - ident[i][j] for j in range(d)] for i in range(d)]
    coords = _mat_mul(vinv, m_minus_i)
    for i in range(d):
        if i not in kernel_cols and any(coords[i]):
            raise AssertionError("image of M - I leaves the norm kernel")
    relations = [coords[i] for i in kernel_cols]
    diag2, _ = _smith(relations)
    assert all(diag2), "H^1 of a finite group on a lattice is finite"
    return tuple(dv for dv in diag2 if dv > 1)


def line_orbits(record: ClassRecord) -> tuple[tuple[int, ...], ...]:
    """Orbits of the representative on lines, each listed in consecutive
    powers of the element starting from its least member."""
    perm = record.group.perms[record.rep_index]
    seen = [False] * len(perm)
    orbits = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        cycle = [i]
        seen[i] = True
        j = int(perm[i])
        while j != i:
            cycle.append(j)
            seen[j] = True
            j = int(perm[j])
        orbits.append(tuple(cycle))
    return tuple(orbits)


def _canonical_connections(n: int, connections) -> tuple[int, ...]:
    """Least connection set over unit multipliers of Z/n (folded into
    the range 1..n//2)."""
    if not connections:
        return ()
    best = None
    for u in range(1, n + 1):
        if math.gcd(u, n) != 1:
            continue
        folded = tuple(sorted({min(u * s % n, n - u * s % n)
                               for s in connections}))
        if best is None or folded < best:
            best = folded
    return best


def _circulant_degree(n: int, connections) -> int:
    return 2 * len(connections) - (1 if n % 2 == 0
                                   and n // 2 in connections else 0)


def orbit_types(record: ClassRecord, graph=None) -> tuple[CirculantType, ...]:
    """Induced meet subgraph of each line orbit as a canonical
    circulant, with multiplicities, sorted by (n, degree, connections)."""
    adj = record.group.adjacency if graph is None else np.asarray(graph)
    counter: dict[tuple[int, tuple[int, ...]], int] = {}
    for cycle in line_orbits(record):
        n = len(cycle)
        folded = frozenset(
            min(k, n - k) for k in range(1, n) if adj[cycle[0], cycle[k]])
        for a in range(n):
            for b in range(a + 1, n):
                gap = b - a
                if bool(adj[cycle[a], cycle[b]]) != (min(gap, n - gap)
                                                     in folded):
                    raise ValueError("orbit subgraph is not circulant")
        key = (n, _canonical_connections(n, folded))
        counter[key] = counter.get(key, 0) + 1
    types = [CirculantType(n, conn, mult)
             for (n, conn), mult in counter.items()]
    types.sort(key=lambda t: (t.n, _circulant_degree(t.n, t.connections),
                              t.connections))
    return tuple(types)


def class_index(record: ClassRecord, graph=None) -> int:
    """Maximum size of an invariant set of pairwise skew lines: the best
    total weight of orbits forming an independent set in the meet
    graph (edge-free orbits only, no edges between chosen orbits)."""
    adj = record.group.adjacency if graph is None else np.asarray(graph)
    usable = [o for o in line_orbits(record)
              if not adj[np.ix_(o, o)].any()]
    usable.sort(key=len, reverse=True)
    k = len(usable)
    weights = [len(o) for o in usable]
    conflict = [[bool(adj[np.ix_(usable[i], usable[j])].any())
                 for j in range(k)] for i in range(k)]
    suffix = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]
    best = 0

    def grow(i: int, current: int, allowed) -> None:
        nonlocal best
        if current > best:
            best = current
        if i == k or current + suffix[i] <= best:
            return
        if allowed[i]:
            grow(i + 1, current + weights[i],
                 [allowed[j] and not conflict[i][j] for j in range(k)])
        grow(i + 1, current, allowed)

    grow(0, 0, [True] * k)
    return best


@lru_cache(maxsize=1)
def _e7_labels() -> dict[tuple[int, ...], int]:
    """Published blow-up class numbers keyed by the characteristic
    polynomial (x - 1) * charpoly of the matched cubic class."""
    table: dict[tuple[int, ...], int] = {}
    for row in reference_data.CUBIC_TABLE:
        cp6 = _char_poly_from_signature(row.eigenvalues)
        key = _poly_mul(cp6, (-1, 1))
        if key in table:
            raise AssertionError("blow-up characteristic polynomials clash")
        table[key] = row.blow_up
    return table


def match_e7_class(record: ClassRecord, w7: WeylGroup) -> E7Match:
    """Class of the rank-7 group obtained by blowing up a fixed rational
    point: characteristic polynomial (x - 1) * charpoly, and among the
    classes realizing it, the unique one fixing a line."""
    classes7 = conjugacy_classes(w7)
    target = _poly_mul(record.char_poly, (-1, 1))
    candidates = [c for c in classes7 if c.char_poly == target]
    if not candidates:
        raise LookupError("no class has the blown-up characteristic "
                          "polynomial")
    with_line = [c for c in candidates if c.fixed_lines > 0]
    if len(with_line) != 1:
        raise LookupError(f"{len(with_line)} candidate classes fix a line; "
                          "expected exactly one")
    label = _e7_labels().get(target)
    if label is None:
        raise LookupError("matched class is missing from the reference data")
    return E7Match(char_poly=target, fixed_lines=with_line[0].fixed_lines,
                   candidates=len(candidates), label=label)


def table_e6(w6: WeylGroup, w7: WeylGroup | None = None
             ) -> tuple[ClassRecord, ...]:
    """The 25 fully analyzed classes in published row order. With w7,
    each row also carries its matched blow-up class."""
    records = conjugacy_classes(w6)
    by_key = {}
    for row in reference_data.CUBIC_TABLE:
        key = (row.order, row.measure_inverse, row.eigenvalues)
        if key in by_key:
            raise LookupError("reference label key collision")
        by_key[key] = row
    out = []
    for rec in records:
        sig = _signature_from_char_poly(rec.char_poly)
        assert _char_poly_from_signature(sig) == rec.char_poly
        assert math.lcm(*(n for n, _ in sig)) == rec.order
        ref = by_key.get((rec.order, rec.measure_inverse, sig))
        if ref is None:
            raise LookupError("computed class matches no reference row")
        match = match_e7_class(rec, w7) if w7 is not None else None
        out.append(replace(
            rec, eigen_sig=sig, h1=h1(rec.representative()),
            index=class_index(rec), orbit_types=orbit_types(rec),
            label=ref.frame, number=ref.number, e7_match=match))
    out.sort(key=lambda r: r.number)
    if [r.number for r in out] != list(range(1, 26)):
        raise LookupError("reference rows were not matched bijectively")
    return tuple(out)


def sato_tate(records) -> dict[int, Fraction]:
    """Exact mass of each trace value under the uniform measure."""
    total = sum(r.size for r in records)
    out: dict[int, Fraction] = {}
    for r in records:
        out[r.trace] = out.get(r.trace, Fraction(0)) + Fraction(r.size, total)
    return dict(sorted(out.items()))


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴"
                             "⁵⁶⁷⁸⁹")
_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄"
                           "₅₆₇₈₉")


def _sup(k: int) -> str:
    return str(k).translate(_SUPERSCRIPT)


def format_eigen_signature(sig) -> str:
    return ",".join(str(n) + (_sup(b) if b > 1 else "") for n, b in sig)


def format_h1(divisors) -> str:
    if not divisors:
        return "0"
    parts = []
    ds = list(divisors)
    for d in sorted(set(ds)):
        mult = ds.count(d)
        parts.append(str(d) + (_sup(mult) if mult > 1 else ""))
    return ",".join(parts)


def format_circulant(ct: CirculantType, ascii_style: bool = False) -> str:
    if ascii_style:
        core = str(ct.n)
        if ct.connections:
            core += "_{" + ",".join(map(str, ct.connections)) + "}"
        if ct.multiplicity > 1:
            core += f"^{ct.multiplicity}"
        return core
    core = str(ct.n)
    if len(ct.connections) == 1 and ct.connections[0] < 10:
        core += str(ct.connections[0]).translate(_SUBSCRIPT)
    elif ct.connections:
        core += "_{" + ",".join(map(str, ct.connections)) + "}"
    if ct.multiplicity > 1:
        core += _sup(ct.multiplicity)
    return core


def format_orbit_types(types, ascii_style: bool = False) -> str:
    return ",".join(format_circulant(t, ascii_style) for t in types)
