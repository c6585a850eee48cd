"""Closed points of the projective plane and general-position tests.

Points are stored with normalized coordinates (first nonzero coordinate
equal to 1), so normalized tuples are canonical and Frobenius acts
coordinate-wise. A closed point of degree d over F_q is a Frobenius
orbit of length d; its representative is compressed into the minimal
field F_{q^d} and canonicalized to the least orbit member.

A configuration of closed points of total degree <= 8 is in general
position when, among all the orbit points taken together, no 3 are
collinear, no 6 lie on a conic, and (for total degree exactly 8) no
cubic passes through all 8 with a singularity at one of them. The three
predicates are determinant and rank tests on the monomial matrices

    conic row   (x^2, y^2, z^2, xy, xz, yz)
    cubic rows  (x^3, y^3, z^3, x^2 y, x^2 z, x y^2, y^2 z, x z^2,
                 y z^2, xyz)

together with the three partial-derivative rows of the cubic at the
distinguished point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .gf import (
    FieldElement,
    FieldSpec,
    _field_det_nonzero,
    _field_rank,
    elements,
    embed,
    extension_of,
    frobenius,
    lift,
    make_field,
    one,
    project,
    size_bound,
    to_int,
    zero,
)


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^2 with normalized homogeneous coordinates."""

    coords: tuple[FieldElement, FieldElement, FieldElement]

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec


def proj_point(x: FieldElement, y: FieldElement, z: FieldElement) -> ProjPoint:
    """Build a point, scaling so the first nonzero coordinate is 1."""
    if x.spec != y.spec or y.spec != z.spec:
        raise ValueError("coordinates live in different fields")
    lead = x if x else (y if y else z)
    if not lead:
        raise ValueError("(0 : 0 : 0) is not a projective point")
    inv = lead.inverse()
    return ProjPoint((x * inv, y * inv, z * inv))


def lift_point(P: ProjPoint, target: FieldSpec) -> ProjPoint:
    """The same point with coordinates embedded into an extension."""
    if P.spec == target:
        return P
    return ProjPoint(tuple(embed(c, target) for c in P.coords))


def point_key(P: ProjPoint) -> tuple[int, int, int]:
    """Deterministic sort key (enumeration indices of the coordinates)."""
    return tuple(to_int(c) for c in P.coords)


def _common_spec(specs) -> FieldSpec:
    ps = {s.p for s in specs}
    if len(ps) != 1:
        raise ValueError("points live over different characteristics")
    n = 1
    for s in specs:
        n = n * s.n // math.gcd(n, s.n)
    p = ps.pop()
    return extension_of(make_field(p, 1), n)


def _lift_all(points):
    spec = _common_spec([P.spec for P in points])
    return [lift_point(P, spec) for P in points], spec


@dataclass(frozen=True)
class ClosedPoint:
    """Frobenius orbit of a point, over the minimal field F_{q^d}."""

    rep: ProjPoint
    degree: int
    orbit: tuple[ProjPoint, ...]


def frobenius_orbit(P: ProjPoint, base: FieldSpec) -> ClosedPoint:
    """The closed point of P over base, compressed to its minimal field.

    Normalized coordinates are fixed by Frob^d exactly when the point
    is, so the representative's coordinates always descend to F_{q^d}.
    The representative is the least orbit member (coordinate
    enumeration indices), making closed points value-comparable.
    """
    spec = P.spec
    if spec.p != base.p or spec.n % base.n != 0:
        raise ValueError(f"{spec} is not an extension of {base}")
    orbit = [P]
    cur = ProjPoint(tuple(frobenius(c, base) for c in P.coords))
    while cur != P:
        orbit.append(cur)
        cur = ProjPoint(tuple(frobenius(c, base) for c in cur.coords))
    d = len(orbit)
    small = extension_of(base, d)
    orbit = [ProjPoint(tuple(project(c, small) for c in Q.coords))
             for Q in orbit]
    start = min(range(d), key=lambda i: point_key(orbit[i]))
    orbit = tuple(orbit[start:] + orbit[:start])
    return ClosedPoint(orbit[0], d, orbit)


@dataclass(frozen=True)
class ClosedPointConfig:
    """Disjoint closed points over a common base, total degree <= 8."""

    base: FieldSpec
    points: tuple[ClosedPoint, ...]
    partition: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        degrees = tuple(cp.degree for cp in self.points)
        if sum(degrees) > 8:
            raise ValueError("total degree exceeds 8")
        expanded = expand_config(self.base, self.points)
        if len({point_key(P) for P in expanded}) != len(expanded):
            raise ValueError("closed points overlap")
        object.__setattr__(self, "partition", tuple(sorted(degrees)))


def expand_config(base: FieldSpec, closed_points) -> list[ProjPoint]:
    """All orbit points, embedded into the compositum F_{q^lcm}."""
    L = 1
    for cp in closed_points:
        L = L * cp.degree // math.gcd(L, cp.degree)
    big = extension_of(base, L)
    out = []
    for cp in closed_points:
        for P in cp.orbit:
            out.append(lift_point(P, big))
    return out


# ----------------------------------------------------------------------
# incidence predicates


def _distinct_or_raise(points):
    if len({point_key(P) for P in points}) != len(points):
        raise ValueError("points are not distinct")


def collinear(P1: ProjPoint, P2: ProjPoint, P3: ProjPoint) -> bool:
    """Whether three distinct points lie on a common line."""
    pts, _ = _lift_all([P1, P2, P3])
    _distinct_or_raise(pts)
    return not _field_det_nonzero([list(P.coords) for P in pts])


def _conic_row(P: ProjPoint):
    x, y, z = P.coords
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def on_common_conic(*points: ProjPoint) -> bool:
    """Whether six distinct points lie on a common conic."""
    if len(points) != 6:
        raise ValueError("the conic test takes exactly six points")
    pts, _ = _lift_all(points)
    _distinct_or_raise(pts)
    return not _field_det_nonzero([_conic_row(P) for P in pts])


def _cubic_row(P: ProjPoint):
    x, y, z = P.coords
    return [x**3, y**3, z**3, x * x * y, x * x * z, x * y * y,
            y * y * z, x * z * z, y * z * z, x * y * z]


def _cubic_derivative_rows(P: ProjPoint):
    x, y, z = P.coords
    spec = x.spec
    two, three = lift(spec, 2), lift(spec, 3)
    o = zero(spec)
    return [
        [three * x * x, o, o, two * x * y, two * x * z, y * y, o,
         z * z, o, y * z],
        [o, three * y * y, o, x * x, o, two * x * y, two * y * z, o,
         z * z, x * z],
        [o, o, three * z * z, o, x * x, o, y * y, two * x * z,
         two * y * z, x * y],
    ]


def singular_cubic_through(points, i: int) -> bool:
    """Whether a cubic passes through all 8 points, singular at the i-th.

    i is 1-based. True exactly when the 11 x 10 matrix of incidence and
    derivative conditions has rank < 10, i.e. a nonzero cubic satisfies
    all conditions.
    """
    if len(points) != 8:
        raise ValueError("the singular-cubic test takes exactly eight points")
    if not 1 <= i <= 8:
        raise ValueError("i must be between 1 and 8")
    pts, _ = _lift_all(list(points))
    _distinct_or_raise(pts)
    rows = [_cubic_row(P) for P in pts]
    rows.extend(_cubic_derivative_rows(pts[i - 1]))
    return _field_rank(rows) < 10


def is_general_position(config: ClosedPointConfig) -> bool:
    """General position for the full set of orbit points."""
    pts = expand_config(config.base, config.points)
    m = len(pts)
    for triple in combinations(pts, 3):
        if collinear(*triple):
            return False
    if m >= 6:
        for six in combinations(pts, 6):
            if on_common_conic(*six):
                return False
    if m == 8:
        for i in range(1, 9):
            if singular_cubic_through(pts, i):
                return False
    return True


# ----------------------------------------------------------------------
# reference conic and plane enumeration


def conic_points(base: FieldSpec, e: int) -> list[ProjPoint]:
    """The q^e + 1 points of the conic xz = y^2 over F_{q^e}.

    Parametrized as [1 : t : t^2] plus the point at infinity [0:0:1].
    """
    K = extension_of(base, e)
    if K.q > size_bound():
        raise ValueError(f"enumerating {K} exceeds the size bound")
    unit = one(K)
    out = [ProjPoint((unit, t, t * t)) for t in elements(K)]
    out.append(ProjPoint((zero(K), zero(K), unit)))
    return out


def plane_points(spec: FieldSpec) -> list[ProjPoint]:
    """All q^2 + q + 1 points of P^2(F_q), in a deterministic order."""
    if spec.q > size_bound():
        raise ValueError(f"enumerating {spec} exceeds the size bound")
    o, unit = zero(spec), one(spec)
    els = list(elements(spec))
    pts = []
    for y in els:
        for z in els:
            pts.append(ProjPoint((unit, y, z)))
    for z in els:
        pts.append(ProjPoint((o, unit, z)))
    pts.append(ProjPoint((o, o, unit)))
    return pts
