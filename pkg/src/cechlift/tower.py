"""Finite groups, central extensions, lifting obstructions, Bocksteins.

This module makes the obstruction theory executable: a bundle is a
transition cocycle on a nerve, a central extension is a normalized
factor set, and the failure of the transitions to lift through the
extension is the degree-2 kernel-valued cocycle built from the
canonical section.  Higher obstructions of an extension tower are
produced by connecting operators of the derived quotient sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import abelian
from .abelian import FgAbelianGroup, GroupElement, Homomorphism, ShortExactSequence
from .cochains import (
    Cochain,
    coboundary,
    cohomology_classes,
    is_coboundary,
    zero_cochain,
)
from .errors import (
    GroupMismatch,
    NotAbelian,
    NotACocycle,
    NotACocycle2,
    NotNormalized,
)


class FiniteGroup:
    """A finite group as a multiplication table on indices 0..order-1.

    Associativity, identity and inverses are verified exhaustively at
    construction; fixtures here are small enough that the cubic check
    is immediate.
    """

    __slots__ = ("order", "table", "identity", "inverse")

    def __init__(self, table, identity=None):
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        for row in table:
            if len(row) != n or any(x < 0 or x >= n for x in row):
                raise ValueError("malformed multiplication table")
        if identity is None:
            identity = next(
                (e for e in range(n) if all(table[e][b] == b == table[b][e] for b in range(n))),
                None,
            )
            if identity is None:
                raise ValueError("table has no identity")
        e = int(identity)
        if any(table[e][b] != b or table[b][e] != b for b in range(n)):
            raise ValueError("claimed identity is not an identity")
        inverse = [None] * n
        for a in range(n):
            for b in range(n):
                if table[a][b] == e and table[b][a] == e:
                    inverse[a] = b
                    break
            if inverse[a] is None:
                raise ValueError(f"element {a} has no inverse")
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                for c in range(n):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise ValueError(f"associativity fails at {(a, b, c)}")
        self.order = n
        self.table = table
        self.identity = e
        self.inverse = tuple(inverse)

    @classmethod
    def cyclic(cls, m):
        return cls(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)), 0)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse[a]

    def is_abelian(self):
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a)
        )

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.table == other.table
            and self.identity == other.identity
        )

    def __hash__(self):
        return hash((self.table, self.identity))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def abelian_invariants(group):
    """Invariant factors of an abelian FiniteGroup, with coordinates.

    Presents the group on all of its elements modulo the Cayley-table
    relations e_a + e_b - e_{ab}; returns (FgAbelianGroup, coords) where
    coords maps an element index to its canonical coordinates.
    """
    if not group.is_abelian():
        raise NotAbelian("group is not commutative")
    n = group.order
    rels = []
    for a in range(n):
        for b in range(a, n):
            vec = [0] * n
            vec[a] += 1
            vec[b] += 1
            vec[group.mul(a, b)] -= 1
            if any(vec):
                rels.append(vec)
    pres = abelian.presentation_from_relations(n, rels)

    def coords(idx):
        vec = [0] * n
        vec[idx] = 1
        return pres.coords_of(vec)

    return pres.group, coords


# ---------------------------------------------------------------------------
# central extensions via factor sets
# ---------------------------------------------------------------------------

class CentralExtension:
    """1 -> kernel -> total -> base -> 1 encoded by a normalized factor set.

    The total group lives on pairs (a, h) with multiplication
    (a, h)(b, k) = (ab, h + k + f(a, b)); the canonical section is
    s(a) = (a, 0), which realizes the local-sections hypothesis with an
    exactly computable kernel part.
    """

    __slots__ = ("base", "kernel", "factor_set", "total", "_kernel_elements", "_kernel_index")

    def __init__(self, base, kernel, factor_set):
        if not isinstance(base, FiniteGroup):
            raise GroupMismatch("base must be a FiniteGroup")
        if not isinstance(kernel, FgAbelianGroup) or not kernel.is_finite():
            raise GroupMismatch("kernel must be a finite FgAbelianGroup")
        n = base.order
        fs = []
        for a in range(n):
            row = []
            for b in range(n):
                v = factor_set[a][b]
                if not isinstance(v, GroupElement):
                    v = GroupElement(kernel, tuple(v))
                elif v.group != kernel:
                    raise GroupMismatch("factor set value outside the kernel")
                row.append(v)
            fs.append(tuple(row))
        fs = tuple(fs)
        e = base.identity
        for a in range(n):
            if not fs[e][a].is_zero() or not fs[a][e].is_zero():
                raise NotNormalized(f"factor set nonzero on identity at {a}")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    lhs = fs[a][b] + fs[base.mul(a, b)][c]
                    rhs = fs[b][c] + fs[a][base.mul(b, c)]
                    if lhs != rhs:
                        raise NotACocycle2((a, b, c))
        self.base = base
        self.kernel = kernel
        self.factor_set = fs
        self._kernel_elements = tuple(kernel.elements())
        self._kernel_index = {el.coords: i for i, el in enumerate(self._kernel_elements)}
        self.total = self._build_total()

    def _build_total(self):
        n = self.base.order
        k = len(self._kernel_elements)
        size = n * k

        def idx(a, h):
            return a * k + self._kernel_index[h.coords]

        table = [[0] * size for _ in range(size)]
        for a in range(n):
            for hi, h in enumerate(self._kernel_elements):
                for b in range(n):
                    for ki, kk in enumerate(self._kernel_elements):
                        table[a * k + hi][b * k + ki] = idx(
                            self.base.mul(a, b), h + kk + self.factor_set[a][b]
                        )
        return FiniteGroup(table, identity=idx(self.base.identity, self.kernel.zero()))

    @property
    def kernel_size(self):
        return len(self._kernel_elements)

    def section(self, a):
        """The canonical section s(a) = (a, 0)."""
        return a * self.kernel_size + 0

    def project(self, t):
        return t // self.kernel_size

    def embed(self, h):
        """The kernel element h as a central element of the total group."""
        if h.group != self.kernel:
            raise GroupMismatch("element outside the kernel")
        return self.base.identity * self.kernel_size + self._kernel_index[h.coords]

    def kernel_part(self, t):
        """The kernel element of a total element lying over the identity."""
        if self.project(t) != self.base.identity:
            raise GroupMismatch("element does not lie over the identity")
        return self._kernel_elements[t % self.kernel_size]

    def with_kernel_offset(self, a, h):
        """The total element s(a) * embed(h) = (a, h)."""
        return a * self.kernel_size + self._kernel_index[h.coords]


def build_extension(base, kernel, factor_set):
    """Validated central extension; errors NotNormalized / NotACocycle2."""
    return CentralExtension(base, kernel, factor_set)


def split_extension(base, kernel):
    """The direct product: zero factor set."""
    zero = kernel.zero()
    n = base.order
    return CentralExtension(base, kernel, tuple(tuple(zero for _ in range(n)) for _ in range(n)))


# ---------------------------------------------------------------------------
# transition cocycles
# ---------------------------------------------------------------------------

class TransitionCocycle:
    """Bundle transition data on a nerve: one group element per edge.

    Values are stored on canonical edges (i < j); g_ii = e and
    g_ji = g_ij^{-1} are implied.  The nonabelian cocycle law
    g_ij g_jk = g_ik is verified on every nerve 2-simplex.
    """

    __slots__ = ("nerve", "group", "g")

    def __init__(self, nerve_, group, g):
        self.nerve = nerve_
        self.group = group
        vals = {}
        edges = set(nerve_.simplices_of_dim(1))
        for (i, j), v in g.items():
            if (i, j) not in edges:
                raise GroupMismatch(f"({i},{j}) is not a nerve edge")
            v = int(v)
            if v < 0 or v >= group.order:
                raise GroupMismatch(f"invalid group element {v}")
            if v != group.identity:
                vals[(i, j)] = v
        self.g = vals
        for (i, j, k) in nerve_.simplices_of_dim(2):
            if group.mul(self.value(i, j), self.value(j, k)) != self.value(i, k):
                raise NotACocycle(f"transition cocycle law fails on {(i, j, k)}")

    def value(self, i, j):
        if i == j:
            return self.group.identity
        if i < j:
            return self.g.get((i, j), self.group.identity)
        return self.group.inv(self.g.get((j, i), self.group.identity))

    def items(self):
        return sorted(self.g.items())

    def __repr__(self):
        return f"TransitionCocycle(group_order={self.group.order}, support={len(self.g)})"


# ---------------------------------------------------------------------------
# the lifting obstruction
# ---------------------------------------------------------------------------

def _lift_value(g, ext, twist, i, j):
    """The chosen lift of g_ij in the total group.

    For canonical pairs the lift is s(g_ij) * embed(twist(g_ij)); the
    opposite orientation uses the exact inverse, so lifts are fixed per
    unordered pair.
    """
    if i < j:
        a = g.value(i, j)
        h = twist(a) if twist else None
        return ext.with_kernel_offset(a, h) if h is not None else ext.section(a)
    t = _lift_value(g, ext, twist, j, i)
    return ext.total.inv(t)


def giraud_obstruction(g, ext, section_twist=None):
    """The degree-2 kernel-valued cocycle c_ijk = ker(g~_ki g~_ij g~_jk).

    ``section_twist`` optionally replaces the canonical section by
    s'(a) = (a, twist(a)) with twist(e) = 0, which is how the
    choice-independence property is exercised.  The result is verified
    to be a cocycle.
    """
    if g.group != ext.base:
        raise GroupMismatch("transition group differs from the extension base")
    if section_twist is not None and not section_twist(ext.base.identity).is_zero():
        raise NotNormalized("section twist must vanish on the identity")
    total = ext.total
    values = {}
    for (i, j, k) in g.nerve.simplices_of_dim(2):
        t = total.mul(
            total.mul(_lift_value(g, ext, section_twist, k, i), _lift_value(g, ext, section_twist, i, j)),
            _lift_value(g, ext, section_twist, j, k),
        )
        values[(i, j, k)] = ext.kernel_part(t)
    c = Cochain(g.nerve, 2, ext.kernel, values)
    if not coboundary(c).is_zero():
        raise NotACocycle("obstruction cochain failed the cocycle law")
    return c


@dataclass
class Obstruction:
    """A nonzero lifting obstruction: the cocycle and its class."""

    cocycle: Cochain
    cohomology: FgAbelianGroup
    coords: tuple

    def is_zero(self):
        return all(c == 0 for c in self.coords)


def obstruction_class(c, nerve_=None):
    """Class coordinates of a kernel-valued 2-cocycle, as an Obstruction."""
    carrier = nerve_ if nerve_ is not None else c.carrier
    classes = cohomology_classes(carrier, c.group, c.degree)
    return Obstruction(c, classes.group, classes.class_coords(c))


def lift_transitions(g, ext, section_twist=None, witness_shift=None):
    """Lift the transitions through the extension, or report the class.

    When the Giraud cocycle is a coboundary with witness y, the lift is
    g'_ij = s(g_ij) * embed(-y_ij), re-validated against the nonabelian
    cocycle law; it projects back to g exactly.  Otherwise the nonzero
    obstruction class is returned.

    ``witness_shift`` adds a kernel-valued 1-cocycle to the chosen
    witness, selecting a different valid trivialization (used by the
    witness-independence tests).
    """
    c = giraud_obstruction(g, ext, section_twist)
    y = is_coboundary(c)
    if y is None:
        return obstruction_class(c)
    if witness_shift is not None:
        if not coboundary(witness_shift).is_zero():
            raise NotACocycle("witness shift must be a cocycle")
        y = y + witness_shift
    lifted = {}
    for (i, j) in g.nerve.simplices_of_dim(1):
        a = g.value(i, j)
        corr = -y.value((i, j))
        if section_twist is not None:
            corr = corr + section_twist(a)
        lifted[(i, j)] = ext.with_kernel_offset(a, corr)
    out = TransitionCocycle(g.nerve, ext.total, lifted)
    for (i, j) in g.nerve.simplices_of_dim(1):
        if ext.project(out.value(i, j)) != g.value(i, j):
            raise NotACocycle("lift does not project to the input transitions")
    return out


# ---------------------------------------------------------------------------
# Bockstein / connecting operator
# ---------------------------------------------------------------------------

def bockstein(c, ses):
    """Connecting operator of 0 -> A -> B -> C -> 0 on a C-valued cocycle.

    Lifts c valuewise through the canonical set-section of the
    projection, takes the coboundary (which lands in the kernel), and
    expresses it in A.  The result is a verified cocycle one degree up;
    its class does not depend on the choice of lifts.
    """
    if c.group != ses.C:
        raise GroupMismatch("cocycle coefficients differ from the quotient C")
    if not coboundary(c).is_zero():
        raise NotACocycle("bockstein input is not a cocycle")
    lifted = Cochain(
        c.carrier,
        c.degree,
        ses.B,
        {s: ses.section(v) for s, v in c.values.items()},
    )
    delta = coboundary(lifted)
    values = {s: ses.kernel_part(v) for s, v in delta.values.items()}
    out = Cochain(c.carrier, c.degree + 1, ses.A, values)
    if not coboundary(out).is_zero():
        raise NotACocycle("bockstein output failed the cocycle law")
    return out


# ---------------------------------------------------------------------------
# extension towers
# ---------------------------------------------------------------------------

class ExtensionTower:
    """A chain of central extensions, each based on the previous total.

    Level i extends L_{i-1} by the kernel H_i.  For consecutive levels
    the derived quotient K_{i+1} = ker(L_{i+1} -> L_{i-1}) must be
    commutative; that is what makes it fit the short exact sequence
    0 -> H_{i+1} -> K_{i+1} -> H_i -> 0 driving the higher connecting
    operators.
    """

    def __init__(self, extensions):
        extensions = tuple(extensions)
        if not extensions:
            raise ValueError("a tower needs at least one extension")
        for k in range(1, len(extensions)):
            if extensions[k].base != extensions[k - 1].total:
                raise GroupMismatch(f"extension {k} is not based on the previous total")
        self.extensions = extensions
        # build and validate every derived quotient sequence eagerly
        self._derived = [
            self._derived_sequence(i) for i in range(1, len(extensions))
        ]

    def __len__(self):
        return len(self.extensions)

    def derived_sequence(self, level):
        """The sequence 0 -> H_{level+1} -> K_{level+1} -> H_level -> 0."""
        return self._derived[level - 1]

    def _derived_sequence(self, i):
        lower = self.extensions[i - 1]   # extends L_{i-1} by H_i
        upper = self.extensions[i]       # extends L_i by H_{i+1}
        total = upper.total
        members = [
            t
            for t in range(total.order)
            if lower.project(upper.project(t)) == lower.base.identity
        ]
        index_of = {t: p for p, t in enumerate(members)}
        n = len(members)
        sub_table = []
        for a in members:
            row = []
            for b in members:
                ab = total.mul(a, b)
                if ab not in index_of:
                    raise NotAbelian("derived quotient is not closed")
                row.append(index_of[ab])
            sub_table.append(row)
        ksub = FiniteGroup(sub_table)
        if not ksub.is_abelian():
            raise NotAbelian(f"derived quotient at level {i} is not commutative")
        kgroup, coords_of = abelian_invariants(ksub)

        # inject: H_{i+1} -> K via the kernel embedding of the upper extension
        inj_cols = []
        for gidx in range(upper.kernel.rank):
            gen = GroupElement(
                upper.kernel,
                tuple(1 if t == gidx else 0 for t in range(upper.kernel.rank)),
            )
            member = upper.embed(gen)
            inj_cols.append(list(coords_of(index_of[member])))
        inject = Homomorphism(
            upper.kernel,
            kgroup,
            tuple(
                tuple(inj_cols[j][r] for j in range(upper.kernel.rank))
                for r in range(kgroup.rank)
            ),
        )

        # project: K -> H_i by projecting to L_i and reading the kernel part
        proj_cols = []
        pres_gens = _group_generator_members(ksub, kgroup, coords_of)
        for member_idx in pres_gens:
            t = members[member_idx]
            h = lower.kernel_part(upper.project(t))
            proj_cols.append(list(h.coords))
        project = Homomorphism(
            kgroup,
            lower.kernel,
            tuple(
                tuple(proj_cols[j][r] for j in range(kgroup.rank))
                for r in range(lower.kernel.rank)
            ),
        )
        return ShortExactSequence(upper.kernel, kgroup, lower.kernel, inject, project)


def _group_generator_members(group, fg, coords_of):
    """For each canonical generator of fg, an element index realizing it."""
    out = []
    want = [
        tuple(1 if t == j else 0 for t in range(fg.rank)) for j in range(fg.rank)
    ]
    lookup = {}
    for idx in range(group.order):
        lookup.setdefault(coords_of(idx), idx)
    for w in want:
        if w not in lookup:
            raise NotAbelian("generator of the derived quotient not realized")
        out.append(lookup[w])
    return out


# ---------------------------------------------------------------------------
# the full obstruction sequence
# ---------------------------------------------------------------------------

@dataclass
class ObstructionEntry:
    level: int
    degree: int
    coefficients: FgAbelianGroup
    cocycle: Cochain
    cohomology: FgAbelianGroup
    coords: tuple

    def is_zero(self):
        return all(c == 0 for c in self.coords)


@dataclass
class ObstructionSequence:
    """The recorded classes of a tower run.

    ``status`` is ("lifted", n) when every level lifted, or
    ("blocked", b) for the first level whose class is nonzero; after a
    block the remaining entries are the connecting-operator images
    through the derived quotient sequences.
    """

    entries: list
    status: tuple

    @property
    def lifted_to(self):
        return self.status[1] if self.status[0] == "lifted" else None

    @property
    def blocked_at(self):
        return self.status[1] if self.status[0] == "blocked" else None


def tower_obstructions(g, tower, witness_shifts=None):
    """Run the lifting pipeline of a tower on a transition cocycle.

    At each level the degree-2 obstruction of the current transitions
    is computed against the level's extension.  A vanishing class
    records the zero tower class one degree up (the zero representative
    is chosen, which is what makes the next level exact) and the
    transitions are replaced by the lift.  A nonzero class blocks the
    tower; every later class is the connecting-operator image of the
    previous one through the derived quotient sequence.

    ``witness_shifts`` optionally maps a level to a kernel-valued
    1-cocycle added to that level's coboundary witness.
    """
    if g.group != tower.extensions[0].base:
        raise GroupMismatch("transitions do not start at the base of the tower")
    witness_shifts = witness_shifts or {}
    nerve_ = g.nerve
    entries = []
    current = g
    blocked = None
    n = len(tower)
    for level in range(1, n + 1):
        ext = tower.extensions[level - 1]
        c = giraud_obstruction(current, ext)
        classes = cohomology_classes(nerve_, ext.kernel, 2)
        coords = classes.class_coords(c)
        if any(coords):
            entries.append(
                ObstructionEntry(level, 2, ext.kernel, c, classes.group, coords)
            )
            blocked = level
            break
        shift = witness_shifts.get(level)
        lifted = lift_transitions(current, ext, witness_shift=shift)
        if isinstance(lifted, Obstruction):
            raise NotACocycle("class vanished but the lift failed")
        zero_classes = cohomology_classes(nerve_, ext.kernel, level + 1)
        entries.append(
            ObstructionEntry(
                level,
                level + 1,
                ext.kernel,
                zero_cochain(nerve_, level + 1, ext.kernel),
                zero_classes.group,
                (0,) * zero_classes.group.rank,
            )
        )
        current = lifted
    if blocked is None:
        return ObstructionSequence(entries, ("lifted", n))
    c = entries[-1].cocycle
    for level in range(blocked + 1, n + 1):
        ses = tower.derived_sequence(level - 1)
        c = bockstein(c, ses)
        classes = cohomology_classes(nerve_, ses.A, c.degree)
        entries.append(
            ObstructionEntry(
                level, c.degree, ses.A, c, classes.group, classes.class_coords(c)
            )
        )
    return ObstructionSequence(entries, ("blocked", blocked))
