"""Cech cochain complexes on a nerve (or simplicial cochains on a complex).

A cochain stores values only on canonical increasing tuples; evaluation
on arbitrary orderings applies the alternating sign on demand.  The
carrier can be a Nerve (Cech cochains, tuples of cover indices) or a
SimplicialComplex (simplicial cochains, tuples of vertices): the
coboundary is the same alternating face sum in both cases, which is the
single sign convention the whole library is built on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import abelian
from .abelian import (
    CIRCLE,
    QQ,
    CircleElement,
    CircleGroup,
    FgAbelianGroup,
    GroupElement,
    RationalGroup,
)
from .errors import DegreeMismatch, GroupMismatch, NoProduct, NotACocycle


def _perm_sign_and_sort(indices):
    """(canonical tuple, sign) for an index tuple; sign 0 on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    # insertion sort, counting swaps; tuples here are short
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return tuple(idx), sign


def _zero_of(group):
    return group.zero()


class Cochain:
    """A degree-p assignment of coefficient values to carrier p-simplices.

    Missing simplices are zero.  Values must live in the coefficient
    group: GroupElement, CircleElement or Fraction according to it.
    """

    __slots__ = ("carrier", "degree", "group", "values")

    def __init__(self, carrier, degree, group, values=None):
        self.carrier = carrier
        self.degree = int(degree)
        self.group = group
        vals = {}
        if values:
            simps = set(carrier.simplices_of_dim(self.degree))
            for s, v in values.items():
                s = tuple(s)
                if s not in simps:
                    raise DegreeMismatch(
                        f"{s} is not a degree-{self.degree} simplex of the carrier"
                    )
                v = self._coerce(v)
                if not abelian.is_zero_value(group, v):
                    vals[s] = v
        self.values = vals

    def _coerce(self, v):
        g = self.group
        if isinstance(g, FgAbelianGroup):
            if isinstance(v, GroupElement):
                if v.group != g:
                    raise GroupMismatch("value in a different group")
                return v
            return GroupElement(g, tuple(v))
        if isinstance(g, CircleGroup):
            if isinstance(v, CircleElement):
                return v
            return CircleElement(Fraction(v))
        if isinstance(g, RationalGroup):
            return Fraction(v)
        raise GroupMismatch(f"unsupported coefficient group {g!r}")

    def value(self, indices):
        """Alternating-extension value on an arbitrary index tuple."""
        canon, sign = _perm_sign_and_sort(indices)
        if sign == 0:
            return _zero_of(self.group)
        v = self.values.get(canon)
        if v is None:
            return _zero_of(self.group)
        return v if sign == 1 else -v

    def is_zero(self):
        return not self.values

    def _same_shape(self, other):
        if (
            self.carrier is not other.carrier
            and getattr(self.carrier, "simplices", None) != getattr(other.carrier, "simplices", None)
        ):
            raise GroupMismatch("cochains on different carriers")
        if self.degree != other.degree or self.group != other.group:
            raise DegreeMismatch("cochains of different shape")

    def __add__(self, other):
        self._same_shape(other)
        out = dict(self.values)
        for s, v in other.values.items():
            w = out.get(s)
            out[s] = v if w is None else w + v
        return Cochain(self.carrier, self.degree, self.group, out)

    def __sub__(self, other):
        self._same_shape(other)
        return self + (-other)

    def __neg__(self):
        return Cochain(
            self.carrier, self.degree, self.group, {s: -v for s, v in self.values.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.group == other.group
            and self.values == other.values
        )

    def __repr__(self):
        return f"Cochain(degree={self.degree}, group={self.group}, support={len(self.values)})"

    def items(self):
        return sorted(self.values.items())


def zero_cochain(carrier, degree, group):
    return Cochain(carrier, degree, group)


def coboundary(x):
    """(delta x)(i_0..i_{p+1}) = sum_j (-1)^j x(i_0..îj..i_{p+1})."""
    out = {}
    for s in x.carrier.simplices_of_dim(x.degree + 1):
        acc = _zero_of(x.group)
        for j in range(len(s)):
            face = s[:j] + s[j + 1 :]
            v = x.values.get(face)
            if v is not None:
                acc = acc + v if j % 2 == 0 else acc - v
        out[s] = acc
    return Cochain(x.carrier, x.degree + 1, x.group, out)


def _fg_vectors(x, simps):
    """Per coefficient factor, the integer coordinate vector of x."""
    moduli = x.group.moduli
    vecs = [[0] * len(simps) for _ in moduli]
    for i, s in enumerate(simps):
        v = x.values.get(s)
        if v is not None:
            for j, c in enumerate(v.coords):
                vecs[j][i] = c
    return vecs


def _delta_matrix(carrier, p):
    """Coboundary matrix from degree p to p+1 (rows = (p+1)-simplices)."""
    return carrier.coboundary_matrix(p)


def is_coboundary(x):
    """A witness y with delta y = x, or None.

    The decision is exact: componentwise modular solves for fg
    coefficients, denominator-clearing for circle coefficients.  The
    witness is the canonical representative of the underlying linear
    solve.  Raises NotACocycle when delta x != 0.
    """
    if not coboundary(x).is_zero():
        raise NotACocycle("input cochain is not a cocycle")
    p = x.degree
    if p == 0:
        # only the zero 0-cochain is a coboundary
        return zero_cochain(x.carrier, 0, x.group) if x.is_zero() else None
    rows = x.carrier.simplices_of_dim(p)
    cols = x.carrier.simplices_of_dim(p - 1)
    delta = _delta_matrix(x.carrier, p - 1)
    if isinstance(x.group, FgAbelianGroup):
        vecs = _fg_vectors(x, rows)
        per_factor = []
        for m, vec in zip(x.group.moduli, vecs):
            sol = abelian.solve_linear(delta, vec, m, ncols=len(cols))
            if sol is None:
                return None
            per_factor.append(sol)
        values = {}
        for i, s in enumerate(cols):
            values[s] = GroupElement(x.group, tuple(f[i] for f in per_factor))
        return Cochain(x.carrier, p - 1, x.group, values)
    if isinstance(x.group, CircleGroup):
        sol = _circle_solve(delta, [x.value(s).value for s in rows], len(cols))
        if sol is None:
            return None
        return Cochain(
            x.carrier, p - 1, x.group, {s: CircleElement(sol[i]) for i, s in enumerate(cols)}
        )
    if isinstance(x.group, RationalGroup):
        sol = abelian.solve_rational(delta, [x.value(s) for s in rows], ncols=len(cols))
        if sol is None:
            return None
        return Cochain(x.carrier, p - 1, x.group, dict(zip(cols, sol)))
    raise GroupMismatch("unsupported coefficient group")


def _circle_solve(mat, b, ncols):
    """Solve mat @ y = b mod 1 for rational y, or None.

    With U mat V = S, a solution exists iff (U b) is integral on the
    zero rows of S; the canonical witness takes vanishing free
    coordinates and pivot coordinates (U b)_i / S_ii, reduced mod 1.
    """
    m = len(mat)
    if m == 0:
        return [Fraction(0)] * ncols
    u, s, v, _, _ = abelian.snf_full(mat)
    t = [sum(Fraction(u[i][k]) * b[k] for k in range(m)) for i in range(m)]
    rank = 0
    while rank < min(m, ncols) and s[rank][rank] != 0:
        rank += 1
    for i in range(rank, m):
        if t[i].denominator != 1:
            return None
    w = [Fraction(0)] * ncols
    for i in range(rank):
        w[i] = t[i] / s[i][i]
    return [
        sum(Fraction(v[i][k]) * w[k] for k in range(ncols)) % 1 for i in range(ncols)
    ]


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

@dataclass
class CohomologyClasses:
    """H^p of a carrier with fg coefficients, with coordinates and
    representative cocycles."""

    carrier: object
    degree: int
    coefficients: FgAbelianGroup
    data: abelian.CohomologyData

    @property
    def group(self):
        return self.data.group

    def class_coords(self, x):
        if x.degree != self.degree or x.group != self.coefficients:
            raise DegreeMismatch("cochain does not match this cohomology")
        if not coboundary(x).is_zero():
            raise NotACocycle("class of a non-cocycle requested")
        simps = self.carrier.simplices_of_dim(self.degree)
        return self.data.class_coords(_fg_vectors(x, simps))

    def class_element(self, x):
        return GroupElement(self.group, self.class_coords(x))

    def generators(self):
        simps = self.carrier.simplices_of_dim(self.degree)
        moduli = self.coefficients.moduli
        out = []
        for per_factor in self.data.generator_vectors():
            values = {}
            for i, s in enumerate(simps):
                coords = tuple(vec[i] for vec in per_factor)
                values[s] = GroupElement(self.coefficients, coords)
            out.append(Cochain(self.carrier, self.degree, self.coefficients, values))
        return out


def cohomology_classes(carrier, coefficients, p):
    """Cohomology of the carrier cochain complex at degree p, with
    class coordinates in the invariant-factor presentation."""
    if p < 0:
        raise DegreeMismatch("negative degree")
    dim = len(carrier.simplices_of_dim(p))
    ncols_prev = len(carrier.simplices_of_dim(p - 1)) if p > 0 else 0
    d_prev = _delta_matrix(carrier, p - 1) if p > 0 else [[] for _ in range(dim)]
    if p == 0:
        d_prev = [[] for _ in range(dim)]
    d_next = _delta_matrix(carrier, p)
    data = abelian.cohomology_with_coords(d_prev, d_next, coefficients, dim)
    return CohomologyClasses(carrier, p, coefficients, data)


def cech_cohomology(nerve, coefficients, p):
    """H^p of the nerve with constant fg coefficients."""
    return cohomology_classes(nerve, coefficients, p).group


def simplicial_cohomology(complex_, coefficients, p):
    """H^p of a simplicial complex with constant fg coefficients."""
    return cohomology_classes(complex_, coefficients, p).group


# ---------------------------------------------------------------------------
# cup product
# ---------------------------------------------------------------------------

def _cup_target(ga, gb):
    """Resolve the declared bilinear product of two coefficient groups."""
    def is_cyclic(g):
        return isinstance(g, FgAbelianGroup) and g.rank == 1

    if is_cyclic(ga) and is_cyclic(gb):
        ma, mb = ga.moduli[0], gb.moduli[0]
        if ma == mb:
            target = ga
        elif ma == 0:
            target = gb
        elif mb == 0:
            target = ga
        else:
            raise NoProduct(f"no declared product for {ga} x {gb}")
        m = target.moduli[0]

        def mul(a, b, m=m, target=target):
            return GroupElement(target, (a.coords[0] * b.coords[0],))

        return target, mul
    if is_cyclic(ga) and ga.moduli[0] == 0 and isinstance(gb, CircleGroup):
        return CIRCLE, lambda a, b: CircleElement(a.coords[0] * b.value)
    if isinstance(ga, CircleGroup) and is_cyclic(gb) and gb.moduli[0] == 0:
        return CIRCLE, lambda a, b: CircleElement(a.value * b.coords[0])
    if isinstance(ga, RationalGroup) and isinstance(gb, RationalGroup):
        return QQ, lambda a, b: a * b
    if is_cyclic(ga) and ga.moduli[0] == 0 and isinstance(gb, RationalGroup):
        return QQ, lambda a, b: a.coords[0] * b
    if isinstance(ga, RationalGroup) and is_cyclic(gb) and gb.moduli[0] == 0:
        return QQ, lambda a, b: a * b.coords[0]
    raise NoProduct(f"no declared product for {ga} x {gb}")


def cup(a, b):
    """Alexander-Whitney cup product.

    (a cup b)(i_0..i_{p+q}) = a(i_0..i_p) * b(i_p..i_{p+q}); satisfies
    the Leibniz rule delta(a cup b) = delta a cup b + (-1)^p a cup
    delta b.
    """
    if a.carrier is not b.carrier and getattr(a.carrier, "simplices", None) != getattr(
        b.carrier, "simplices", None
    ):
        raise GroupMismatch("cup of cochains on different carriers")
    target, mul = _cup_target(a.group, b.group)
    p, q = a.degree, b.degree
    out = {}
    for s in a.carrier.simplices_of_dim(p + q):
        front = s[: p + 1]
        back = s[p:]
        va = a.values.get(front)
        if va is None:
            continue
        vb = b.values.get(back)
        if vb is None:
            continue
        out[s] = mul(va, vb)
    return Cochain(a.carrier, p + q, target, out)


# ---------------------------------------------------------------------------
# cover goodness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GoodnessReport:
    """Result of an acyclicity check of all nerve intersections.

    ``failures`` lists (nerve simplex, degree, reduced cohomology) for
    every non-acyclic intersection up to the checked degree.
    """

    max_degree: int
    failures: tuple

    @property
    def ok(self):
        return not self.failures


def verify_good_cover(cover, nerve_, max_degree=None):
    """Check every non-empty intersection is acyclic over Z.

    ``max_degree`` defaults to dim(base) + 1, enough for every zigzag
    this library performs.  Failure is a value, not an error.
    """
    if max_degree is None:
        max_degree = cover.base.dim + 1
    failures = []
    for s in sorted(nerve_.simplices):
        w = nerve_.intersection_of[s]
        comps = w.connected_component_count()
        if comps != 1:
            failures.append((s, 0, FgAbelianGroup((0,) * (comps - 1))))
        for q in range(1, max_degree + 1):
            dim = len(w.simplices_of_dim(q))
            d_prev = w.coboundary_matrix(q - 1)
            d_next = w.coboundary_matrix(q)
            h = abelian.cohomology_of(d_prev, d_next, FgAbelianGroup((0,)), dim=dim)
            if not h.is_trivial():
                failures.append((s, q, h))
    return GoodnessReport(max_degree, tuple(failures))
