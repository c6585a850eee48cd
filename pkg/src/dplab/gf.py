"""Finite fields F_{p^n} as explicit coefficient arithmetic.

Elements are coefficient vectors over F_p modulo a canonical monic
irreducible polynomial (the least one in the integer encoding
sum(c_i * p^i)), so every field has exactly one deterministic
construction.  On top of the scalar arithmetic the module provides
Frobenius powers x -> x^q, extension towers F_{q^d} with computed
embeddings and their inverses, deterministic root finding, and normal
bases of F_{q^d} over F_q.

Two size limits apply.  Operations that enumerate all field elements
(``elements``, root scans, and everything built on them) respect the
configurable bound ``size_bound()`` (env ``DPLAB_SIZE_BOUND``, default
2^20).  Extension towers are constructed without enumeration and are
only capped by a hard bound of 2^48, so e.g. normal bases of
F_{(2^4)^8} = F_{2^32} work with the default settings.
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_SIZE_BOUND = 2**20
CONSTRUCTION_BOUND = 2**48


def size_bound() -> int:
    """Configurable bound on field sizes that may be enumerated."""
    return int(os.environ.get("DPLAB_SIZE_BOUND", DEFAULT_SIZE_BOUND))


# ----------------------------------------------------------------------
# dense polynomial arithmetic over F_p (coefficient lists, ascending
# degree, normalized to have no trailing zeros)


def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _padd(f, g, p):
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return _ptrim(out)


def _pscale(f, a, p):
    return _ptrim([(a * c) % p for c in f])


def _pmul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _ptrim(out)


def _pdivmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv_lead = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = (f[-1] * inv_lead) % p
        d = len(f) - len(g)
        if c:
            q[d] = c
            for i, b in enumerate(g):
                f[d + i] = (f[d + i] - c * b) % p
        f.pop()
        _ptrim(f)
        if len(f) < len(g):
            break
    return _ptrim(q), _ptrim(f)


def _pgcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _pdivmod(f, g, p)[1]
    if f:
        f = _pscale(f, pow(f[-1], -1, p), p)  # monic
    return f


def _ppowmod(f, e, m, p):
    """f^e mod m over F_p."""
    result = [1]
    f = _pdivmod(f, m, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, f, p), m, p)[1]
        f = _pdivmod(_pmul(f, f, p), m, p)[1]
        e >>= 1
    return result


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _prime_factors(m: int) -> list[int]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def _is_irreducible(f, p) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    # x^(p^n) == x mod f
    h = x
    for _ in range(n):
        h = _ppowmod(h, p, f, p)
    if _padd(h, _pscale(x, p - 1, p), p):
        return False
    # gcd(x^(p^(n/r)) - x, f) == 1 for each prime r | n
    for r in _prime_factors(n):
        h = x
        for _ in range(n // r):
            h = _ppowmod(h, p, f, p)
        if len(_pgcd(_padd(h, _pscale(x, p - 1, p), p), f, p)) > 1:
            return False
    return True


def _irreducible_by_trial_division(f, p) -> bool:
    """Naive oracle: divide by every monic polynomial of degree <= n/2."""
    n = len(f) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for k in range(p**d):
            g = [(k // p**i) % p for i in range(d)] + [1]
            if not _pdivmod(f, g, p)[1]:
                return False
    return True


def _least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n over F_p, least in integer encoding."""
    if n == 1:
        return (0, 1)
    for k in range(p**n):
        if k % p == 0:
            continue  # constant term 0: divisible by x
        f = [(k // p**i) % p for i in range(n)] + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("irreducible polynomial exists for every degree")


# ----------------------------------------------------------------------
# field specs and elements


@dataclass(frozen=True, slots=True)
class FieldSpec:
    """A finite field F_{p^n}, determined by its canonical modulus."""

    p: int
    n: int
    modulus: tuple[int, ...]  # length n+1, ascending degree, monic

    @property
    def q(self) -> int:
        return self.p**self.n

    def __str__(self):
        return f"F_{self.p}^{self.n}" if self.n > 1 else f"F_{self.p}"


@dataclass(frozen=True, slots=True)
class FieldElement:
    """Element of a FieldSpec: coefficient tuple of length n over F_p."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def _check(self, other):
        if self.spec != other.spec:
            raise ValueError("elements live in different fields")

    def __add__(self, other):
        self._check(other)
        p = self.spec.p
        return FieldElement(
            self.spec,
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        self._check(other)
        p = self.spec.p
        return FieldElement(
            self.spec,
            tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __mul__(self, other):
        self._check(other)
        ctx = _ctx(self.spec)
        return FieldElement(self.spec, ctx.mul(self.coeffs, other.coeffs))

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        ctx = _ctx(self.spec)
        return FieldElement(self.spec, ctx.inv(self.coeffs))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = one(self.spec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)


class _Ctx:
    """Per-field multiplication context (reduction rows for x^(n+k))."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        p, n = spec.p, spec.n
        mod = list(spec.modulus)
        # row k = coefficients of x^(n+k) mod modulus, k = 0..n-2
        rows = []
        cur = _pdivmod([0] * n + [1], mod, p)[1]
        for _ in range(max(0, n - 1)):
            row = cur + [0] * (n - len(cur))
            rows.append(row)
            cur = _pdivmod([0] + cur, mod, p)[1]
        self.rows = rows
        self.p, self.n = p, n

    def mul(self, a, b):
        p, n = self.p, self.n
        if n == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = [c % p for c in prod[:n]]
        for k in range(n - 1):
            c = prod[n + k] % p
            if c:
                row = self.rows[k]
                for i in range(n):
                    out[i] = (out[i] + c * row[i]) % p
        return tuple(out)

    def inv(self, a):
        # extended Euclid on (a, modulus) over F_p
        p = self.p
        f, g = list(self.spec.modulus), _ptrim(list(a))
        s0, s1 = [], [1]
        while g:
            q, r = _pdivmod(f, g, p)
            f, g = g, r
            s0, s1 = s1, _padd(s0, _pscale(_pmul(q, s1, p), p - 1, p), p)
        # f is now gcd (a constant, since the modulus is irreducible)
        c = pow(f[0], -1, p)
        out = _pscale(s0, c, p)
        return tuple(out + [0] * (self.spec.n - len(out)))


_ctx_cache: dict[FieldSpec, _Ctx] = {}
_ctx_lock = threading.Lock()


def _ctx(spec: FieldSpec) -> _Ctx:
    ctx = _ctx_cache.get(spec)
    if ctx is None:
        with _ctx_lock:
            ctx = _ctx_cache.get(spec)
            if ctx is None:
                ctx = _Ctx(spec)
                _ctx_cache[spec] = ctx
    return ctx


@lru_cache(maxsize=None)
def make_field(p: int, n: int) -> FieldSpec:
    """The field F_{p^n} with its canonical (least) modulus.

    >>> make_field(3, 2).modulus   # x^2 + 1
    (1, 0, 1)
    >>> make_field(2, 3).modulus   # x^3 + x + 1
    (1, 1, 0, 1)
    """
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1:
        raise ValueError("n must be positive")
    if p**n > size_bound():
        raise ValueError(f"field size {p}^{n} exceeds the size bound")
    return FieldSpec(p, n, _least_irreducible(p, n))


@lru_cache(maxsize=None)
def extension_of(base: FieldSpec, d: int) -> FieldSpec:
    """F_{q^d} as the canonical field of degree base.n * d over F_p.

    Built without element enumeration; capped by the hard construction
    bound rather than the enumeration bound.
    """
    if d < 1:
        raise ValueError("extension degree must be positive")
    if d == 1:
        return base
    p, m = base.p, base.n * d
    if p**m > CONSTRUCTION_BOUND:
        raise ValueError(f"field size {p}^{m} exceeds the construction bound")
    return FieldSpec(p, m, _least_irreducible(p, m))


def zero(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, (0,) * spec.n)


def one(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, (1,) + (0,) * (spec.n - 1))


def gen(spec: FieldSpec) -> FieldElement:
    """The class of x, an F_p-algebra generator of the field."""
    if spec.n == 1:
        return one(spec)
    return FieldElement(spec, (0, 1) + (0,) * (spec.n - 2))


def from_int(spec: FieldSpec, k: int) -> FieldElement:
    """Element with index k in enumeration order (base-p digits of k)."""
    p = spec.p
    if not 0 <= k < spec.q:
        raise ValueError("index out of range")
    return FieldElement(spec, tuple((k // p**i) % p for i in range(spec.n)))

def to_int(x: FieldElement) -> int:
    """Inverse of from_int: the enumeration index of x."""
    p = x.spec.p
    return sum(c * p**i for i, c in enumerate(x.coeffs))


def lift(spec: FieldSpec, k: int) -> FieldElement:
    """Image of the integer k under the ring map Z -> F_q."""
    return from_int(spec, k % spec.p)


def elements(spec: FieldSpec):
    """All field elements in enumeration order (bound-checked)."""
    if spec.q > size_bound():
        raise ValueError(f"enumerating {spec} exceeds the size bound")
    for k in range(spec.q):
        yield from_int(spec, k)


# ----------------------------------------------------------------------
# Frobenius and embeddings (cached F_p-linear maps, built once per pair
# of fields under a lock)

_frob_cache: dict[tuple[FieldSpec, FieldSpec], list[tuple[int, ...]]] = {}
_embed_cache: dict[tuple[FieldSpec, FieldSpec], dict] = {}
_linmap_lock = threading.RLock()


def _pow_q(x: FieldElement, q: int) -> FieldElement:
    result = one(x.spec)
    base = x
    e = q
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def _apply_matrix(cols: list[tuple[int, ...]], coeffs, spec: FieldSpec):
    p, n = spec.p, spec.n
    out = [0] * n
    for i, c in enumerate(coeffs):
        if c:
            col = cols[i]
            for j in range(n):
                out[j] = (out[j] + c * col[j]) % p
    return FieldElement(spec, tuple(out))


def frobenius(x: FieldElement, base: FieldSpec) -> FieldElement:
    """x^q for q = |base|, via a cached F_p-linear matrix.

    x must live in an extension tower over base (same p, base.n | n).
    """
    spec = x.spec
    if spec.p != base.p or spec.n % base.n != 0:
        raise ValueError(f"{spec} is not an extension of {base}")
    key = (spec, base)
    cols = _frob_cache.get(key)
    if cols is None:
        with _linmap_lock:
            cols = _frob_cache.get(key)
            if cols is None:
                q = base.q
                t = _pow_q(gen(spec), q)
                # column i = coordinates of (x^i)^q = t^i
                cols, cur = [], one(spec)
                for _ in range(spec.n):
                    cols.append(cur.coeffs)
                    cur = cur * t
                _frob_cache[key] = cols
    return _apply_matrix(cols, x.coeffs, spec)


# -- generic polynomial arithmetic with FieldElement coefficients
# (ascending degree, trailing zeros trimmed); used for root finding


def fpoly_trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def fpoly_add(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = out[i] + c
    return fpoly_trim(out)


def fpoly_mul(f, g):
    if not f or not g:
        return []
    spec = f[0].spec
    out = [zero(spec) for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = out[i + j] + a * b
    return fpoly_trim(out)


def fpoly_divmod(f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    spec = g[-1].spec
    quot = [zero(spec) for _ in range(max(0, len(f) - len(g) + 1))]
    inv_lead = g[-1].inverse()
    while len(f) >= len(g):
        c = f[-1] * inv_lead
        d = len(f) - len(g)
        if c:
            quot[d] = c
            for i, b in enumerate(g):
                f[d + i] = f[d + i] - c * b
        f.pop()
        fpoly_trim(f)
    return fpoly_trim(quot), f


def fpoly_gcd(f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, fpoly_divmod(f, g)[1]
    if f:
        inv = f[-1].inverse()
        f = [c * inv for c in f]
    return f


def fpoly_powmod(f, e, m):
    spec = m[-1].spec
    result = [one(spec)]
    f = fpoly_divmod(f, m)[1]
    while e:
        if e & 1:
            result = fpoly_divmod(fpoly_mul(result, f), m)[1]
        f = fpoly_divmod(fpoly_mul(f, f), m)[1]
        e >>= 1
    return result


def fpoly_eval(f, x: FieldElement) -> FieldElement:
    acc = zero(x.spec)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_roots(f: list[FieldElement], spec: FieldSpec) -> list[FieldElement]:
    """All roots in spec of a squarefree polynomial, deterministically.

    Works by equal-degree splitting with split elements drawn from a
    fixed-seed random stream; the returned roots are sorted by
    enumeration index, so the result is reproducible regardless of
    which elements happened to split. (Scanning split elements in
    enumeration order instead can be quadratically bad: in
    characteristic 2 the splitting condition is linear in the split
    element, and its kernel may contain every low-index element.) The
    input is first reduced to its part that splits into distinct
    linear factors over spec.
    """
    f = fpoly_trim(list(f))
    if len(f) <= 1:
        return []
    inv = f[-1].inverse()
    f = [c * inv for c in f]
    Q = spec.q
    # keep only the part splitting over spec: gcd(f, x^Q - x)
    xq = fpoly_powmod([zero(spec), one(spec)], Q, f)
    minus_x = [zero(spec), -one(spec)]
    lin = fpoly_gcd(f, fpoly_add(xq, minus_x))
    roots: list[FieldElement] = []
    stack = [lin]
    rng = random.Random(0)
    scan = 0
    while stack:
        g = stack.pop()
        if len(g) <= 1:
            continue
        if len(g) == 2:
            roots.append(-g[0] * g[1].inverse())
            continue
        split = None
        while split is None:
            scan += 1
            if scan > 4096:
                raise AssertionError("equal-degree splitting must terminate")
            c = from_int(spec, rng.randrange(1, Q))
            if spec.p == 2:
                # gcd with the trace polynomial of c*x: splits the roots r
                # by the value of the absolute trace of c*r
                t = fpoly_divmod([zero(spec), c], g)[1]
                acc = t
                for _ in range(spec.n - 1):
                    t = fpoly_divmod(fpoly_mul(t, t), g)[1]
                    acc = fpoly_add(acc, t)
                h = fpoly_gcd(acc, g)
            else:
                # gcd with (x+c)^((Q-1)/2) - 1: splits the roots r by the
                # quadratic character of r + c
                t = fpoly_powmod([c, one(spec)], (Q - 1) // 2, g)
                h = fpoly_gcd(fpoly_add(t, [-one(spec)]), g)
            if 0 < len(h) - 1 < len(g) - 1:
                split = h
        stack.append(split)
        stack.append(fpoly_divmod(g, split)[0])
    return sorted(roots, key=to_int)


def _embedding(source: FieldSpec, target: FieldSpec) -> dict:
    """Cached embedding data source -> target (canonical root choice)."""
    key = (source, target)
    data = _embed_cache.get(key)
    if data is not None:
        return data
    if source.p != target.p or target.n % source.n != 0:
        raise ValueError(f"{target} is not an extension of {source}")
    with _linmap_lock:
        data = _embed_cache.get(key)
        if data is not None:
            return data
        # canonical root of the source modulus in the target
        f = [lift(target, c) for c in source.modulus]
        roots = poly_roots(f, target)
        if len(roots) != source.n:
            raise AssertionError("modulus must split in the extension")
        rho = roots[0]  # least root: the canonical embedding
        cols, cur = [], one(target)
        for _ in range(source.n):
            cols.append(cur.coeffs)
            cur = cur * rho
        data = {"cols": cols}
        _embed_cache[key] = data
    return data


def embed(x: FieldElement, target: FieldSpec) -> FieldElement:
    """Canonical embedding of x into an extension field."""
    if x.spec == target:
        return x
    data = _embedding(x.spec, target)
    return _apply_matrix(data["cols"], x.coeffs, target)


def project(x: FieldElement, source: FieldSpec) -> FieldElement:
    """Inverse of embed on its image; errors if x is not in the subfield."""
    if x.spec == source:
        return x
    data = _embedding(source, x.spec)
    cols = data["cols"]
    p, big_n = x.spec.p, x.spec.n
    # solve cols * c = x.coeffs over F_p
    rows = [[cols[j][i] for j in range(source.n)] + [x.coeffs[i]]
            for i in range(big_n)]
    sol = _modp_solve(rows, source.n, p)
    if sol is None:
        raise ValueError("element does not lie in the subfield")
    return FieldElement(source, tuple(sol))


def _modp_solve(aug, ncols, p):
    """Solve an augmented system (rows of length ncols+1) over F_p.

    Returns one solution or None. The systems fed here have a unique
    solution when consistent (full column rank).
    """
    rows = [list(r) for r in aug]
    m = len(rows)
    piv_of_col = [-1] * ncols
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, m):
        if rows[i][ncols] % p:
            return None
    sol = [0] * ncols
    for c in range(ncols):
        if piv_of_col[c] >= 0:
            sol[c] = rows[piv_of_col[c]][ncols]
    return sol


def _modp_rank(rows, p) -> int:
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(m):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p
                           for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ----------------------------------------------------------------------
# normal bases


@dataclass(frozen=True)
class NormalBasis:
    """alpha with conjugates alpha^(q^i), i < d, a basis of F_{q^d}/F_q."""

    base: FieldSpec
    degree: int
    generator: FieldElement

    @property
    def field(self) -> FieldSpec:
        return self.generator.spec


_fqcoords_cache: dict[tuple[FieldSpec, FieldSpec], dict] = {}


def _fq_coords(big: FieldSpec, base: FieldSpec):
    """Map elements of big to their coordinate vector over base.

    Uses the F_q-basis 1, w, ..., w^(d-1) of big (w = gen(big); its
    minimal polynomial over F_q has full degree d since w generates big
    over F_p already). Returns a function big-element -> list of d
    base-elements.
    """
    key = (big, base)
    data = _fqcoords_cache.get(key)
    if data is None:
        with _linmap_lock:
            data = _fqcoords_cache.get(key)
            if data is None:
                p, n, nd = base.p, base.n, big.n
                d = nd // n
                eps = [embed(from_int(base, p**i), big) for i in range(n)]
                w_pows, cur = [], one(big)
                for _ in range(d):
                    w_pows.append(cur)
                    cur = cur * gen(big)
                cols = []
                for j in range(d):
                    for i in range(n):
                        cols.append((eps[i] * w_pows[j]).coeffs)
                # invert the nd x nd change of basis once
                aug = [[cols[j][i] for j in range(nd)] +
                       [1 if k == i else 0 for k in range(nd)]
                       for i in range(nd)]
                inv_rows = _modp_gauss_inverse(aug, nd, p)
                data = {"inv": inv_rows, "d": d, "n": n}
                _fqcoords_cache[key] = data

    inv_rows, d, n = data["inv"], data["d"], data["n"]
    p = base.p

    def coords(xi: FieldElement) -> list[FieldElement]:
        vec = xi.coeffs
        flat = [sum(row[i] * vec[i] for i in range(len(vec))) % p
                for row in inv_rows]
        return [FieldElement(base, tuple(flat[j * n:(j + 1) * n]))
                for j in range(d)]

    return coords


def _modp_gauss_inverse(aug, n, p):
    rows = [list(r) for r in aug]
    for c in range(n):
        piv = next(i for i in range(c, n) if rows[i][c] % p)
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = pow(rows[c][c], -1, p)
        rows[c] = [(v * inv) % p for v in rows[c]]
        for i in range(n):
            if i != c and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[c])]
    return [r[n:] for r in rows]


def _field_det_nonzero(mat) -> bool:
    """Whether a square matrix of field elements has nonzero determinant.

    Division-free: rows are cross-multiplied, which scales the
    determinant by nonzero factors only.
    """
    m = [list(r) for r in mat]
    k = len(m)
    for c in range(k):
        piv = next((i for i in range(c, k) if m[i][c]), None)
        if piv is None:
            return False
        m[c], m[piv] = m[piv], m[c]
        for i in range(c + 1, k):
            if m[i][c]:
                a, b = m[c][c], m[i][c]
                m[i] = [a * y - b * x for x, y in zip(m[c], m[i])]
    return True


def _field_rank(mat) -> int:
    """Rank of a matrix of field elements (division-free elimination)."""
    m = [list(r) for r in mat]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, nrows):
            if m[i][c]:
                a, b = m[rank][c], m[i][c]
                m[i] = [a * y - b * x for x, y in zip(m[rank], m[i])]
        rank += 1
    return rank


def find_normal_basis(base: FieldSpec, d: int) -> NormalBasis:
    """First element of F_{q^d} (in enumeration order) normal over base.

    Normality of alpha is decided by the d x d determinant of the
    conjugate coordinates over F_q being nonzero. Normal elements are
    dense, so the scan stops long before any enumeration bound matters.
    """
    big = extension_of(base, d)
    if d == 1:
        return NormalBasis(base, 1, one(big))
    coords = _fq_coords(big, base)
    for k in range(big.q):
        alpha = from_int(big, k)
        if not alpha:
            continue
        conj = [alpha]
        for _ in range(d - 1):
            conj.append(frobenius(conj[-1], base))
        rows = [coords(c) for c in conj]
        if _field_det_nonzero(rows):
            return NormalBasis(base, d, alpha)
    raise AssertionError("normal bases exist for every extension")


# ----------------------------------------------------------------------
# small scalar utilities


def is_square(x: FieldElement) -> bool:
    """Whether x is a square (odd characteristic; 0 counts as square)."""
    if x.spec.p == 2:
        return True  # squaring is a bijection in characteristic 2
    if not x:
        return True
    return x ** ((x.spec.q - 1) // 2) == one(x.spec)


def absolute_trace(x: FieldElement) -> int:
    """Trace down to the prime field, returned as an integer in [0, p)."""
    spec = x.spec
    prime = FieldSpec(spec.p, 1, (0, 1))
    acc, cur = zero(spec), x
    for _ in range(spec.n):
        acc = acc + cur
        cur = frobenius(cur, prime)
    return acc.coeffs[0]


def _primitive_element(spec: FieldSpec) -> FieldElement:
    """Least generator of the multiplicative group (enumeration order)."""
    q = spec.q
    facs = _prime_factors(q - 1)
    for k in range(1, q):
        g = from_int(spec, k)
        if all(g ** ((q - 1) // r) != one(spec) for r in facs):
            return g
    raise AssertionError("the multiplicative group is cyclic")


# ----------------------------------------------------------------------
# serialization: fields as "p^n", elements as "p^n:c0,c1,...,c{n-1}"


def spec_to_str(spec: FieldSpec) -> str:
    return f"{spec.p}^{spec.n}"


def spec_from_str(s: str) -> FieldSpec:
    s = s.strip()
    if "^" in s:
        ps, ns = s.split("^", 1)
        return make_field(int(ps), int(ns))
    q = int(s)
    # factor the prime power
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            m = q
            while m % p == 0:
                m //= p
                n += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return make_field(p, n)
    raise ValueError(f"{q} is not a prime power")


def element_to_str(x: FieldElement) -> str:
    return f"{spec_to_str(x.spec)}:" + ",".join(str(c) for c in x.coeffs)


def element_from_str(s: str, spec: FieldSpec | None = None) -> FieldElement:
    """Parse "p^n:c0,c1,..." or a bare integer (image of Z -> F_q)."""
    s = s.strip()
    if ":" not in s:
        if spec is None:
            raise ValueError("a field is required to read a bare integer")
        return lift(spec, int(s))
    head, tail = s.split(":", 1)
    parsed = spec_from_str(head)
    if spec is not None and parsed != spec:
        raise ValueError(f"element is over {parsed}, expected {spec}")
    coeffs = [int(c) for c in tail.split(",")] if tail else []
    if len(coeffs) != parsed.n:
        raise ValueError(f"expected {parsed.n} coefficients")
    if any(not 0 <= c < parsed.p for c in coeffs):
        raise ValueError("coefficients must lie in [0, p)")
    return FieldElement(parsed, tuple(coeffs))
