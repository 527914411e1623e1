"""Exact arithmetic for finitely generated abelian groups.

Groups are kept in invariant-factor form (nonzero moduli in a
divisibility chain, free factors last).  The circle group is the
rational circle Q/Z, so every vanishing test is an exact equality
test.  All the linear algebra runs over arbitrary-precision integers
through the Smith-normal-form kernel in cechlift.kernels; the pivot
rule there is deterministic, which makes every solution representative
produced here reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import GroupMismatch, NotAComplex

#: When True, every Smith decomposition is re-checked (U@M@V == S and
#: |det U| = |det V| = 1).  Switched on by the CLI's --verify full.
VERIFY_SNF = False


# ---------------------------------------------------------------------------
# integer matrices (lists of lists)
# ---------------------------------------------------------------------------

def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for row in a:
        out.append([sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)])
    return out


def mat_vec(a, x):
    return [sum(row[k] * x[k] for k in range(len(x))) for row in a]


def transpose(a, ncols=None):
    rows = len(a)
    if ncols is None:
        ncols = len(a[0]) if rows else 0
    return [[a[i][j] for i in range(rows)] for j in range(ncols)]


def det_int(m):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def snf_full(mat):
    """(U, S, V, Uinv, Vinv) with U@mat@V = S, optionally re-verified."""
    u, s, v, uinv, vinv = kernels.snf_with_transforms(mat)
    if VERIFY_SNF:
        if mat and mat_mul(mat_mul(u, mat), v) != s:
            raise AssertionError("SNF product check failed")
        if abs(det_int(u)) != 1 or abs(det_int(v)) != 1:
            raise AssertionError("SNF transform not unimodular")
    return u, s, v, uinv, vinv


def smith_normal_form(mat):
    """Smith normal form of an integer matrix.

    Returns (U, S, V) with U @ mat @ V = S, S diagonal non-negative with
    S[0][0] | S[1][1] | ..., and U, V unimodular.
    """
    u, s, v, _, _ = snf_full(mat)
    return u, s, v


def _diag_rank(s):
    r = 0
    while r < len(s) and r < (len(s[r]) if s else 0) and s[r][r] != 0:
        r += 1
    return r


def solve_integer(mat, b, ncols=None):
    """A particular integer solution x of mat @ x = b, or None.

    Deterministic representative: free coordinates of the diagonalized
    system are set to zero and the solution is mapped back through V.
    """
    m = len(mat)
    n = ncols if ncols is not None else (len(mat[0]) if m else 0)
    if m == 0:
        return [0] * n
    u, s, v, _, _ = snf_full(mat)
    t = mat_vec(u, b)
    r = _diag_rank(s)
    y = [0] * n
    for j in range(r):
        q, rem = divmod(t[j], s[j][j])
        if rem:
            return None
        y[j] = q
    for j in range(r, m):
        if t[j] != 0:
            return None
    return mat_vec(v, y)


def solve_rational(mat, b, ncols=None):
    """A particular rational solution of mat @ x = b, or None."""
    m = len(mat)
    n = ncols if ncols is not None else (len(mat[0]) if m else 0)
    if m == 0:
        return [Fraction(0)] * n
    u, s, v, _, _ = snf_full(mat)
    t = [sum(Fraction(u[i][k]) * b[k] for k in range(m)) for i in range(m)]
    r = _diag_rank(s)
    y = [Fraction(0)] * n
    for j in range(r):
        y[j] = t[j] / s[j][j]
    for j in range(r, m):
        if t[j] != 0:
            return None
    return [sum(Fraction(v[i][k]) * y[k] for k in range(n)) for i in range(n)]


def solve_linear(mat, b, moduli, ncols=None):
    """Solve mat @ x = b componentwise mod the target moduli, or None.

    ``moduli`` is an int applied to every row or a per-row list; modulus
    0 means equality over the integers.  Infeasible systems return
    None.  The representative is the canonical one obtained by Smith
    back-substitution with vanishing free coordinates.
    """
    m = len(mat)
    n = ncols if ncols is not None else (len(mat[0]) if m else 0)
    if isinstance(moduli, int):
        moduli = [moduli] * m
    if len(moduli) != m or len(b) != m:
        raise ValueError("dimension mismatch in solve_linear")
    aug = [row[:] for row in mat]
    for i, md in enumerate(moduli):
        if md:
            for r in range(m):
                aug[r].append(md if r == i else 0)
    sol = solve_integer(aug, b, ncols=n + sum(1 for md in moduli if md))
    if sol is None:
        return None
    return sol[:n]


def kernel_basis(mat, ncols=None):
    """Columns generating the integer kernel lattice of mat."""
    m = len(mat)
    n = ncols if ncols is not None else (len(mat[0]) if m else 0)
    if m == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    _, s, v, _, _ = snf_full(mat)
    r = _diag_rank(s)
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def column_space_basis(cols, length):
    """Independent columns spanning the lattice generated by ``cols``.

    ``cols`` is a list of integer vectors of the given length.
    """
    if not cols:
        return []
    mat = [[col[i] for col in cols] for i in range(length)]
    _, s, _, uinv, _ = snf_full(mat)
    r = _diag_rank(s)
    return [[uinv[i][j] * s[j][j] for i in range(length)] for j in range(r)]


def lattice_contains(basis_cols, vec, length):
    """Whether vec lies in the lattice generated by basis_cols."""
    if not basis_cols:
        return all(x == 0 for x in vec)
    mat = [[col[i] for col in basis_cols] for i in range(length)]
    return solve_integer(mat, vec, ncols=len(basis_cols)) is not None


def lattices_equal(gens_a, gens_b, length):
    return all(lattice_contains(gens_a, g, length) for g in gens_b) and all(
        lattice_contains(gens_b, g, length) for g in gens_a
    )


# ---------------------------------------------------------------------------
# groups and elements
# ---------------------------------------------------------------------------

def _is_invariant_chain(moduli):
    seen_free = False
    prev = None
    for m in moduli:
        if m < 0 or m == 1:
            return False
        if m == 0:
            seen_free = True
            continue
        if seen_free:
            return False
        if prev is not None and m % prev != 0:
            return False
        prev = m
    return True


class FgAbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    ``moduli`` lists the cyclic factors: m > 0 stands for Z/m, 0 for a
    free Z factor.  Nonzero moduli come first and divide in turn, so the
    representation is unique and equality of groups is equality of
    moduli.
    """

    __slots__ = ("moduli",)

    def __init__(self, moduli):
        moduli = tuple(int(m) for m in moduli)
        if not _is_invariant_chain(moduli):
            raise ValueError(f"moduli {moduli} are not in invariant-factor form")
        self.moduli = moduli

    @property
    def rank(self):
        return len(self.moduli)

    def is_trivial(self):
        return not self.moduli

    def is_finite(self):
        return all(m > 0 for m in self.moduli)

    def order(self):
        if not self.is_finite():
            return None
        n = 1
        for m in self.moduli:
            n *= m
        return n

    def zero(self):
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords):
        return GroupElement(self, tuple(coords))

    def elements(self):
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for coords in itertools.product(*(range(m) for m in self.moduli)):
            yield GroupElement(self, coords)

    def __eq__(self, other):
        return isinstance(other, FgAbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(("fg", self.moduli))

    def __repr__(self):
        return f"FgAbelianGroup({list(self.moduli)})"

    def __str__(self):
        if not self.moduli:
            return "0"
        parts = [f"Z/{m}" if m else "Z" for m in self.moduli]
        return " + ".join(parts)


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ValueError("coordinate length does not match group rank")
        reduced = tuple(
            c % m if m else int(c) for c, m in zip(self.coords, self.group.moduli)
        )
        object.__setattr__(self, "coords", reduced)

    def _check(self, other):
        if self.group != other.group:
            raise GroupMismatch("elements of different groups")

    def __add__(self, other):
        self._check(other)
        return GroupElement(
            self.group, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        self._check(other)
        return GroupElement(
            self.group, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, k):
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coords)


class CircleGroup:
    """The additive rational circle Q/Z (exact representatives in [0,1))."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def zero(self):
        return CircleElement(Fraction(0))

    def element(self, value):
        return CircleElement(Fraction(value))

    def __eq__(self, other):
        return isinstance(other, CircleGroup)

    def __hash__(self):
        return hash("circle")

    def __repr__(self):
        return "CircleGroup()"

    def __str__(self):
        return "Q/Z"


CIRCLE = CircleGroup()


@dataclass(frozen=True)
class CircleElement:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __add__(self, other):
        return CircleElement(self.value + other.value)

    def __sub__(self, other):
        return CircleElement(self.value - other.value)

    def __neg__(self):
        return CircleElement(-self.value)

    def __mul__(self, k):
        return CircleElement(k * self.value)

    __rmul__ = __mul__

    def is_zero(self):
        return self.value == 0


class RationalGroup:
    """Q as coefficients; elements are plain Fractions.

    Used for the discretized differential forms (global rational
    cochains), where cup products and pairings need a genuine ring.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def zero(self):
        return Fraction(0)

    def element(self, value):
        return Fraction(value)

    def __eq__(self, other):
        return isinstance(other, RationalGroup)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalGroup()"

    def __str__(self):
        return "Q"


QQ = RationalGroup()

INTEGERS = FgAbelianGroup((0,))


def is_zero_value(group, value):
    if isinstance(group, RationalGroup):
        return value == 0
    return value.is_zero()


# ---------------------------------------------------------------------------
# presentations and canonical forms
# ---------------------------------------------------------------------------

@dataclass
class Presentation:
    """Z^n modulo the lattice spanned by relation columns, canonicalized.

    ``group`` is the invariant-factor quotient; ``coords_of`` maps an
    integer vector to its coordinates there; ``generators`` lifts each
    canonical generator back to Z^n.
    """

    group: FgAbelianGroup
    _umatrix: list
    _kept: list
    _uinv: list

    def coords_of(self, vec):
        full = mat_vec(self._umatrix, vec)
        out = []
        for pos, m in zip(self._kept, self.group.moduli):
            out.append(full[pos] % m if m else full[pos])
        return tuple(out)

    def element_of(self, vec):
        return GroupElement(self.group, self.coords_of(vec))

    @property
    def generators(self):
        n = len(self._umatrix)
        return [[self._uinv[i][pos] for i in range(n)] for pos in self._kept]


def presentation_from_relations(n, relation_cols):
    """Present Z^n / <relation columns> in invariant-factor form."""
    if relation_cols:
        rel = [[col[i] for col in relation_cols] for i in range(n)]
        u, s, _, uinv, _ = snf_full(rel)
        r = _diag_rank(s)
        diag = [s[i][i] for i in range(r)] + [0] * (n - r)
    else:
        u = identity_matrix(n)
        uinv = identity_matrix(n)
        diag = [0] * n
    kept = [i for i, d in enumerate(diag) if d != 1]
    moduli = tuple(diag[i] for i in kept)
    return Presentation(FgAbelianGroup(moduli), u, kept, uinv)


def canonical_group(raw_moduli):
    """Canonicalize a list of cyclic orders into invariant-factor form.

    Returns (group, convert) where convert maps raw coordinate tuples to
    canonical ones.
    """
    n = len(raw_moduli)
    rel = [[raw_moduli[j] if i == j else 0 for i in range(n)] for j in range(n)]
    pres = presentation_from_relations(n, rel)
    return pres.group, pres.coords_of


# ---------------------------------------------------------------------------
# homomorphisms and exact sequences
# ---------------------------------------------------------------------------

def _relation_lattice(moduli):
    """Generators of the relation lattice {m_k e_k : m_k > 0} in Z^rank."""
    gens = []
    for k, m in enumerate(moduli):
        if m:
            gens.append([m if i == k else 0 for i in range(len(moduli))])
    return gens


def _in_relation_lattice(moduli, vec):
    for x, m in zip(vec, moduli):
        if m == 0:
            if x != 0:
                return False
        elif x % m != 0:
            return False
    return True


@dataclass(frozen=True)
class Homomorphism:
    """A homomorphism between fg abelian groups, as an integer matrix.

    ``matrix`` has codomain.rank rows and domain.rank columns and must
    annihilate the order of every domain generator.
    """

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: tuple

    def __post_init__(self):
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.codomain.rank:
            raise ValueError("matrix row count does not match codomain rank")
        for row in mat:
            if len(row) != self.domain.rank:
                raise ValueError("matrix column count does not match domain rank")
        for k, m in enumerate(self.domain.moduli):
            if m:
                col = [m * row[k] for row in mat]
                if not _in_relation_lattice(self.codomain.moduli, col):
                    raise ValueError(
                        f"matrix does not respect the order of generator {k}"
                    )

    def apply(self, el):
        if el.group != self.domain:
            raise GroupMismatch("element not in the domain")
        coords = mat_vec(list(map(list, self.matrix)), list(el.coords))
        return GroupElement(self.codomain, tuple(coords))

    def kernel_lattice(self):
        """Generators of {x in Z^dom : M x in relation lattice of codomain}."""
        rows = [list(r) for r in self.matrix]
        extra = _relation_lattice(self.codomain.moduli)
        ncols = self.domain.rank + len(extra)
        aug = [
            rows[i] + [g[i] for g in extra] for i in range(self.codomain.rank)
        ]
        basis = kernel_basis(aug, ncols=ncols)
        gens = [col[: self.domain.rank] for col in basis]
        gens.extend(_relation_lattice(self.domain.moduli))
        return gens

    def is_injective(self):
        return all(
            _in_relation_lattice(self.domain.moduli, g) for g in self.kernel_lattice()
        )

    def is_surjective(self):
        n = self.codomain.rank
        gens = [
            [row[k] for row in self.matrix] for k in range(self.domain.rank)
        ] + _relation_lattice(self.codomain.moduli)
        return lattices_equal(gens, [[1 if i == j else 0 for i in range(n)] for j in range(n)], n)


@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> A -> B -> C -> 0 with exactness verified on construction."""

    A: FgAbelianGroup
    B: FgAbelianGroup
    C: FgAbelianGroup
    inject: Homomorphism
    project: Homomorphism

    def __post_init__(self):
        if self.inject.domain != self.A or self.inject.codomain != self.B:
            raise ValueError("inject must map A to B")
        if self.project.domain != self.B or self.project.codomain != self.C:
            raise ValueError("project must map B to C")
        comp = mat_mul(list(map(list, self.project.matrix)), list(map(list, self.inject.matrix)))
        for col in transpose(comp, ncols=self.A.rank):
            if not _in_relation_lattice(self.C.moduli, col):
                raise ValueError("project o inject is nonzero")
        if not self.inject.is_injective():
            raise ValueError("inject is not injective")
        if not self.project.is_surjective():
            raise ValueError("project is not surjective")
        # image(inject) = kernel(project), compared as lattices in Z^B.
        im = [
            [row[k] for row in self.inject.matrix] for k in range(self.A.rank)
        ] + _relation_lattice(self.B.moduli)
        ker = self.project.kernel_lattice()
        if not lattices_equal(im, ker, self.B.rank):
            raise ValueError("image of inject differs from kernel of project")

    def section(self, el):
        """Canonical set-section of project: the minimal B-representative."""
        if el.group != self.C:
            raise GroupMismatch("element not in C")
        x = solve_linear(
            [list(r) for r in self.project.matrix],
            list(el.coords),
            list(self.C.moduli),
            ncols=self.B.rank,
        )
        if x is None:
            raise ValueError("section failed; project is not surjective")
        return GroupElement(self.B, tuple(x))

    def kernel_part(self, el):
        """The unique A-element mapping to el under inject."""
        if el.group != self.B:
            raise GroupMismatch("element not in B")
        x = solve_linear(
            [list(r) for r in self.inject.matrix],
            list(el.coords),
            list(self.B.moduli),
            ncols=self.A.rank,
        )
        if x is None:
            raise ValueError("element is not in the image of inject")
        return GroupElement(self.A, tuple(x))


# ---------------------------------------------------------------------------
# cohomology of a two-step complex of G-modules
# ---------------------------------------------------------------------------

@dataclass
class CyclicFactorCohomology:
    """ker/im data for one cyclic coefficient factor Z/m (m=0 is Z)."""

    modulus: int
    dim: int
    zbasis: list          # independent columns spanning the cocycle lattice
    presentation: Presentation

    def coords_of(self, vec):
        """Quotient coordinates of an integer cocycle vector."""
        if not self.zbasis:
            return ()
        mat = [[col[i] for col in self.zbasis] for i in range(self.dim)]
        t = solve_integer(mat, vec, ncols=len(self.zbasis))
        if t is None:
            raise ValueError("vector is not a cocycle for this coefficient factor")
        return self.presentation.coords_of(t)

    def generator_vectors(self):
        """One cocycle vector per invariant factor of the quotient."""
        out = []
        for gen in self.presentation.generators:
            vec = [0] * self.dim
            for j, col in enumerate(self.zbasis):
                for i in range(self.dim):
                    vec[i] += gen[j] * col[i]
            out.append(vec)
        return out


def cyclic_cohomology(d_prev, d_next, modulus, dim):
    """Cohomology at the middle of Z^a -> Z^dim -> Z^k over Z/modulus."""
    # cocycle lattice
    if modulus == 0:
        zgens = kernel_basis(d_next, ncols=dim)
    else:
        k = len(d_next)
        aug = [d_next[i][:] + [modulus if j == i else 0 for j in range(k)] for i in range(k)]
        basis = kernel_basis(aug, ncols=dim + k)
        zgens = [col[:dim] for col in basis]
        zgens.extend([[modulus if i == j else 0 for i in range(dim)] for j in range(dim)])
    zbasis = column_space_basis(zgens, dim)
    # coboundary lattice, expressed in the cocycle basis
    bgens = [[row[j] for row in d_prev] for j in range(len(d_prev[0]) if d_prev else 0)]
    if modulus:
        bgens.extend([[modulus if i == j else 0 for i in range(dim)] for j in range(dim)])
    if zbasis:
        zmat = [[col[i] for col in zbasis] for i in range(dim)]
        rel = []
        for g in bgens:
            t = solve_integer(zmat, g, ncols=len(zbasis))
            if t is None:
                raise NotAComplex("coboundaries do not lie inside cocycles")
            rel.append(t)
    else:
        rel = []
    pres = presentation_from_relations(len(zbasis), rel)
    return CyclicFactorCohomology(modulus, dim, zbasis, pres)


def _check_complex(d_prev, d_next, moduli):
    comp = mat_mul(d_next, d_prev) if d_prev and d_next else []
    for row in comp:
        for x in row:
            for m in moduli:
                if m == 0:
                    if x != 0:
                        raise NotAComplex("d_next o d_prev is nonzero over Z")
                elif x % m != 0:
                    raise NotAComplex(f"d_next o d_prev is nonzero mod {m}")


@dataclass
class CohomologyData:
    """Cohomology group of a two-step complex with coordinate access."""

    group: FgAbelianGroup
    coefficients: FgAbelianGroup
    factors: list
    _combine: Presentation

    def class_coords(self, vectors):
        """Coordinates of a cocycle given per-coefficient-factor vectors."""
        concat = []
        for fac, vec in zip(self.factors, vectors):
            concat.extend(fac.coords_of(vec))
        return self._combine.coords_of(concat)

    def generator_vectors(self):
        """Per canonical generator, per-factor integer cocycle vectors."""
        blocks = []
        offset = 0
        for fac in self.factors:
            gens = fac.generator_vectors()
            blocks.append((offset, gens, fac.dim))
            offset += len(gens)
        out = []
        for gen in self._combine.generators:
            per_factor = []
            for (off, gens, dim), fac in zip(blocks, self.factors):
                vec = [0] * dim
                for j, g in enumerate(gens):
                    w = gen[off + j]
                    if w:
                        for i in range(dim):
                            vec[i] += w * g[i]
                per_factor.append(vec)
            out.append(per_factor)
        return out


def cohomology_with_coords(d_prev, d_next, coefficients, dim):
    """ker(d_next)/im(d_prev) over an fg coefficient group, with coords.

    ``dim`` is the rank of the middle term (the matrices may be empty).
    Raises NotAComplex when the composite differential is nonzero.
    """
    if not isinstance(coefficients, FgAbelianGroup):
        raise ValueError("constant coefficients must be an FgAbelianGroup")
    if coefficients.moduli:
        _check_complex(d_prev, d_next, coefficients.moduli)
    factors = [
        cyclic_cohomology(d_prev, d_next, m, dim) for m in coefficients.moduli
    ]
    raw = []
    for fac in factors:
        raw.extend(fac.presentation.group.moduli)
    rel = [[raw[j] if i == j else 0 for i in range(len(raw))] for j in range(len(raw))]
    combine = presentation_from_relations(len(raw), rel)
    return CohomologyData(combine.group, coefficients, factors, combine)


def cohomology_of(d_prev, d_next, coefficients, dim=None):
    """The cohomology group ker(d_next)/im(d_prev) with G coefficients.

    Matrices act componentwise on G-valued vectors; the result is in
    invariant-factor form.
    """
    if dim is None:
        dim = len(d_next[0]) if d_next else (len(d_prev) if d_prev else 0)
    return cohomology_with_coords(d_prev, d_next, coefficients, dim).group
