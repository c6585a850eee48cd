"""Dense arithmetic tables for small finite fields.

Elements are represented by their integer codes (the same encoding as
:func:`dplab.gf.to_int`), so table-based and scalar arithmetic
interoperate directly. All binary operations become numpy gathers,
which is what makes exhaustive point counting and configuration search
affordable: an addition or multiplication of a whole vector of field
elements is a single fancy-indexing operation.

Tables are built once per field from a discrete-logarithm walk (for the
multiplicative structure) and digitwise arithmetic on codes (for the
additive structure), then cached for the lifetime of the process.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf import (
    FieldElement,
    FieldSpec,
    _primitive_element,
    embed,
    from_int,
    lift,
    one,
    to_int,
)

# Largest field a dense q-by-q table is built for. The quadratic tables
# for q = 4096 occupy 64 MB; anything larger should use the coefficient
# arithmetic from dplab.gf instead.
TABLE_BOUND = 4096


@dataclass(eq=False)
class SmallField:
    """Lookup tables for one finite field, indexed by element codes.

    ``add`` and ``mul`` are (q, q) tables; ``neg``, ``inv``, ``frob``
    and ``abs_trace`` are (q,) tables. ``inv[0]`` is a 0 sentinel and
    must never be consumed. ``chi`` is the quadratic character (0 at 0,
    +1 at nonzero squares, -1 at nonsquares) and is None in
    characteristic 2, where every element is a square.
    """

    spec: FieldSpec
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    frob: np.ndarray
    chi: np.ndarray | None
    abs_trace: np.ndarray

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def p(self) -> int:
        return self.spec.p

    def code(self, x: FieldElement) -> int:
        if x.spec != self.spec:
            raise ValueError("element belongs to a different field")
        return to_int(x)

    def element(self, code: int) -> FieldElement:
        return from_int(self.spec, int(code))

    def scalar(self, k: int) -> int:
        """Code of the image of the integer k in this field."""
        return to_int(lift(self.spec, k))

    def powers(self, codes: np.ndarray, max_exp: int) -> np.ndarray:
        """pow[i, e] = codes[i]**e for e = 0..max_exp."""
        codes = np.asarray(codes)
        out = np.empty((len(codes), max_exp + 1), dtype=self.mul.dtype)
        out[:, 0] = self.scalar(1)
        for e in range(1, max_exp + 1):
            out[:, e] = self.mul[out[:, e - 1], codes]
        return out


def _digit_tables(q: int, p: int, n: int):
    codes = np.arange(q, dtype=np.int64)
    digits = np.empty((q, n), dtype=np.int64)
    rem = codes.copy()
    for i in range(n):
        digits[:, i] = rem % p
        rem //= p
    weights = p ** np.arange(n, dtype=np.int64)
    summed = (digits[:, None, :] + digits[None, :, :]) % p
    add = (summed * weights).sum(axis=2).astype(np.uint16)
    neg = (((-digits) % p) @ weights).astype(np.uint16)
    return add, neg


@lru_cache(maxsize=None)
def small_field(spec: FieldSpec) -> SmallField:
    """The cached arithmetic tables for spec (q <= TABLE_BOUND)."""
    q, p, n = spec.q, spec.p, spec.n
    if q > TABLE_BOUND:
        raise ValueError(
            f"q = {q} exceeds the dense-table bound {TABLE_BOUND}")
    add, neg = _digit_tables(q, p, n)

    g = _primitive_element(spec)
    log = np.full(q, -1, dtype=np.int64)
    exp = np.empty(q - 1, dtype=np.int64)
    x = one(spec)
    for k in range(q - 1):
        c = to_int(x)
        exp[k] = c
        log[c] = k
        x = x * g
    if x != one(spec) or (log[1:] < 0).any():
        raise AssertionError("discrete-logarithm walk did not close")

    mul = np.zeros((q, q), dtype=np.uint16)
    mul[1:, 1:] = exp[(log[1:, None] + log[None, 1:]) % (q - 1)]
    inv = np.zeros(q, dtype=np.uint16)
    inv[1:] = exp[(-log[1:]) % (q - 1)]
    frob = np.zeros(q, dtype=np.uint16)
    frob[1:] = exp[(log[1:] * p) % (q - 1)]
    chi = None
    if p != 2:
        chi = np.zeros(q, dtype=np.int8)
        chi[1:] = np.where(log[1:] % 2 == 0, 1, -1)

    trace = np.arange(q, dtype=np.uint16)
    cur = np.arange(q, dtype=np.uint16)
    for _ in range(n - 1):
        cur = frob[cur]
        trace = add[trace, cur]
    if (trace >= p).any():
        raise AssertionError("absolute trace left the prime subfield")

    return SmallField(spec=spec, add=add, mul=mul, neg=neg, inv=inv,
                      frob=frob, chi=chi, abs_trace=trace)


@lru_cache(maxsize=None)
def embedding_codes(source: FieldSpec, target: FieldSpec) -> np.ndarray:
    """codes[c] = code in target of the embedding of source code c."""
    out = np.empty(source.q, dtype=np.uint16)
    for c in range(source.q):
        out[c] = to_int(embed(from_int(source, c), target))
    return out
