"""The Picard lattice Z^{1,r} of a blown-up plane and its Weyl group.

The lattice carries the diagonal form diag(1, -1, ..., -1) and the
canonical class K = (-3, 1, ..., 1). Lines are classes v with
v.v = v.K = -1 (27 for r = 6, 56 for r = 7); roots have v.v = -2,
v.K = 0 (72 resp. 126). Both are found by bounded integer enumeration.

The Weyl group W(E_r) is generated by the root reflections
s_v(x) = x + (x.v) v and realized concretely as permutations of the
line classes, stored as one uint8 row per element (about 160 MB for
W(E7)'s 2,903,040 elements). Elements are discovered by breadth-first
closure over the fixed generator list (all root reflections, in the
deterministic root order); within a BFS level, new elements are ordered
by their packed key, the images of 8 spanning lines whose classes form
a unimodular basis, so the element order is reproducible. The packed
key is also what makes deduplication cheap: it determines the element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

LatticeVector = tuple[int, ...]


@dataclass(frozen=True)
class PicardLattice:
    """Z^{1,r} with the hyperbolic diagonal form, r = 6 or 7."""

    r: int

    def __post_init__(self):
        if self.r not in (6, 7):
            raise ValueError("supported ranks are r = 6 and r = 7")

    @property
    def dim(self) -> int:
        return self.r + 1


def pairing(u: LatticeVector, v: LatticeVector) -> int:
    """Intersection pairing for diag(1, -1, ..., -1)."""
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


def canonical_class(L: PicardLattice) -> LatticeVector:
    return (-3,) + (1,) * L.r


def _bounded_solutions(r: int, self_pairing: int, k_pairing: int):
    """All v in Z^{1,r} with v.v = self_pairing and v.K = k_pairing.

    v = (a, b_1..b_r) must satisfy a^2 - sum(b^2) = self_pairing and
    -3a - sum(b) = k_pairing; Cauchy-Schwarz bounds the coordinates, so
    a depth-first scan with partial-sum pruning is exhaustive.
    """
    out = []
    for a in range(-3, 4):
        sum_b = -k_pairing - 3 * a
        sum_b2 = a * a - self_pairing
        if sum_b2 < 0 or sum_b2 < sum_b * sum_b / r:
            continue

        def rec(i, s, t, prefix):
            # s, t: remaining sum and sum of squares for slots i..r-1
            slots = r - i
            if slots == 0:
                if s == 0 and t == 0:
                    out.append((a,) + tuple(prefix))
                return
            if t < 0 or s * s > t * slots or t > 9 * slots:
                return
            if (t - s) % 2:
                return  # b^2 = b mod 2 coordinate-wise
            for b in range(-3, 4):
                rec(i + 1, s - b, t - b * b, prefix + [b])

        rec(0, sum_b, sum_b2, [])
    return sorted(out)


@lru_cache(maxsize=None)
def line_classes(L: PicardLattice) -> tuple[LatticeVector, ...]:
    """All classes of lines, lexicographically sorted."""
    return tuple(_bounded_solutions(L.r, -1, -1))


@lru_cache(maxsize=None)
def roots(L: PicardLattice) -> tuple[LatticeVector, ...]:
    """All roots, lexicographically sorted."""
    return tuple(_bounded_solutions(L.r, -2, 0))


@dataclass(frozen=True)
class WeylElement:
    """Orthogonal transformation given by its matrix (acting on column
    vectors) and the induced permutation of line classes."""

    matrix: tuple[tuple[int, ...], ...]
    line_perm: tuple[int, ...]


def apply_matrix(matrix, v: LatticeVector) -> LatticeVector:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in matrix)


def _reflection_matrix(L: PicardLattice, v: LatticeVector):
    dim = L.dim
    rows = []
    for i in range(dim):
        row = []
        for j in range(dim):
            e_j_dot_v = v[0] if j == 0 else -v[j]
            row.append((1 if i == j else 0) + e_j_dot_v * v[i])
        rows.append(tuple(row))
    return tuple(rows)


def reflection(L: PicardLattice, v: LatticeVector) -> WeylElement:
    """The root reflection s_v(x) = x + (x.v) v as a WeylElement."""
    if pairing(v, v) != -2 or pairing(v, canonical_class(L)) != 0:
        raise ValueError("reflections are only defined for roots")
    matrix = _reflection_matrix(L, v)
    lines = line_classes(L)
    index = {w: i for i, w in enumerate(lines)}
    perm = tuple(index[apply_matrix(matrix, w)] for w in lines)
    return WeylElement(matrix, perm)


def meet_graph(L: PicardLattice) -> np.ndarray:
    """Line adjacency: distinct lines with pairing >= 1 meet."""
    lines = np.array(line_classes(L), dtype=np.int64)
    G = np.diag([1] + [-1] * L.r)
    P = lines @ G @ lines.T
    adj = P >= 1
    np.fill_diagonal(adj, False)
    return adj


def _spanning_lines(L: PicardLattice) -> list[LatticeVector]:
    """r+1 line classes forming a unimodular basis of the lattice."""
    e = [tuple(1 if j == i else 0 for j in range(L.dim))
         for i in range(L.dim)]
    extra = tuple([1, -1, -1] + [0] * (L.r - 2))
    return e[1:] + [extra]


@dataclass(eq=False)
class WeylGroup:
    """W(E_r) as permutations of line classes.

    perms[i] is the line permutation of element i; keys[i] packs the
    images of the spanning lines and determines the element. Elements
    appear in BFS discovery order (levels; key order within a level),
    with the identity first.
    """

    lattice: PicardLattice
    lines: tuple[LatticeVector, ...]
    root_list: tuple[LatticeVector, ...]
    generators: tuple[WeylElement, ...]
    adjacency: np.ndarray
    perms: np.ndarray
    keys: np.ndarray
    span_positions: np.ndarray
    basis_inverse: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.perms)

    def element(self, i: int) -> WeylElement:
        """Reconstruct matrix and permutation of element i."""
        perm = self.perms[i]
        img_cols = [self.lines[perm[pos]] for pos in self.span_positions]
        dim = self.lattice.dim
        # matrix = (images as columns) @ B^{-1}
        matrix = tuple(
            tuple(sum(img_cols[k][a] * self.basis_inverse[k][b]
                      for k in range(dim)) for b in range(dim))
            for a in range(dim))
        return WeylElement(matrix, tuple(int(x) for x in perm))

    def lookup(self, perm_row) -> int:
        """Row index of a permutation given as an array, via its key."""
        key = _pack(np.asarray(perm_row, dtype=np.uint8)[None, :],
                    self.span_positions)[0]
        sorted_keys = self._sorted_keys
        pos = np.searchsorted(sorted_keys, key)
        if pos == len(sorted_keys) or sorted_keys[pos] != key:
            raise KeyError("permutation is not a group element")
        return int(self._sorted_rows[pos])

    def lookup_many(self, perm_rows: np.ndarray) -> np.ndarray:
        """Row indices for a batch of permutations (one per row)."""
        keys = _pack(np.asarray(perm_rows, dtype=np.uint8),
                     self.span_positions)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if (self._sorted_keys[pos] != keys).any():
            raise KeyError("some permutation is not a group element")
        return self._sorted_rows[pos]

    def __post_init__(self):
        order = np.argsort(self.keys)
        self._sorted_keys = self.keys[order]
        self._sorted_rows = order


def _pack(perm_rows: np.ndarray, span_positions: np.ndarray) -> np.ndarray:
    """uint64 key from the images of the spanning lines (6 bits each)."""
    images = perm_rows[..., span_positions].astype(np.uint64)
    key = np.zeros(images.shape[:-1], dtype=np.uint64)
    for k in range(images.shape[-1]):
        key |= images[..., k] << np.uint64(6 * k)
    return key


def generate_weyl(L: PicardLattice, chunk_rows: int = 8192) -> WeylGroup:
    """Generate W(E_r) by breadth-first closure of the root reflections.

    Children are formed as (reflection o element); deduplication uses
    the packed spanning-line keys, so each BFS level costs one pass of
    vectorized gathers over generator x frontier.
    """
    lines = line_classes(L)
    rts = roots(L)
    gens = [reflection(L, v) for v in rts]
    n_lines = len(lines)
    gen_perms = np.array([g.line_perm for g in gens], dtype=np.uint8)

    line_index = {v: i for i, v in enumerate(lines)}
    span = _spanning_lines(L)
    span_positions = np.array([line_index[v] for v in span], dtype=np.int64)
    basis = sympy.Matrix([[v[a] for v in span] for a in range(L.dim)])
    basis_inverse_cols = basis.inv()  # unimodular, stays integral
    basis_inverse = tuple(
        tuple(int(basis_inverse_cols[k, b]) for b in range(L.dim))
        for k in range(L.dim))

    identity = np.arange(n_lines, dtype=np.uint8)[None, :]
    all_perm_blocks = [identity]
    all_keys_blocks = [_pack(identity, span_positions)]
    known = all_keys_blocks[0].copy()
    frontier = identity

    while len(frontier):
        fresh_keys_parts = []
        fresh_perm_parts = []
        for start in range(0, len(frontier), chunk_rows):
            chunk = frontier[start:start + chunk_rows]
            # keys of all children (gen o chunk) without materializing
            # full permutation rows: only the spanning images are needed
            span_imgs = gen_perms[:, chunk[:, span_positions]]
            keys = _pack_images(span_imgs)
            flat_keys = keys.reshape(-1)
            uniq, first = np.unique(flat_keys, return_index=True)
            pos = np.searchsorted(known, uniq)
            pos_clip = np.minimum(pos, len(known) - 1)
            is_new = known[pos_clip] != uniq
            if not is_new.any():
                continue
            new_first = first[is_new]
            g_idx, c_idx = np.unravel_index(new_first, keys.shape)
            rows = gen_perms[g_idx[:, None],
                             chunk[c_idx]]  # (fresh, n_lines)
            fresh_keys_parts.append(uniq[is_new])
            fresh_perm_parts.append(rows.astype(np.uint8))
        if not fresh_keys_parts:
            break
        cat_keys = np.concatenate(fresh_keys_parts)
        cat_rows = np.vstack(fresh_perm_parts)
        uniq, first = np.unique(cat_keys, return_index=True)
        frontier = cat_rows[first]
        all_perm_blocks.append(frontier)
        all_keys_blocks.append(uniq)
        known = np.sort(np.concatenate([known, uniq]))

    perms = np.vstack(all_perm_blocks)
    keys = np.concatenate(all_keys_blocks)
    return WeylGroup(
        lattice=L,
        lines=lines,
        root_list=rts,
        generators=tuple(gens),
        adjacency=meet_graph(L),
        perms=perms,
        keys=keys,
        span_positions=span_positions,
        basis_inverse=basis_inverse,
    )


def _pack_images(span_imgs: np.ndarray) -> np.ndarray:
    imgs = span_imgs.astype(np.uint64)
    key = np.zeros(imgs.shape[:-1], dtype=np.uint64)
    for k in range(imgs.shape[-1]):
        key |= imgs[..., k] << np.uint64(6 * k)
    return key


def compose_perms(p2: np.ndarray, p1: np.ndarray) -> np.ndarray:
    """Permutation of (element 2 o element 1): apply p1 first."""
    return p2[p1]
