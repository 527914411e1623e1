"""Smith normal form, modular solving, group arithmetic, exact sequences."""

import itertools
import random

import pytest

from cechlift import abelian
from cechlift.abelian import (
    FgAbelianGroup,
    Homomorphism,
    ShortExactSequence,
    smith_normal_form,
    solve_linear,
)
from cechlift.errors import NotAComplex

from conftest import oracle_invariant_factors, oracle_determinantal_divisors


def diag_of(s):
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


class TestSmithNormalForm:
    def test_frozen_example(self):
        u, s, v = smith_normal_form([[2, 4], [6, 8]])
        assert diag_of(s) == [2, 4]
        assert abelian.mat_mul(abelian.mat_mul(u, [[2, 4], [6, 8]]), v) == s

    def test_zero_matrix(self):
        _, s, _ = smith_normal_form([[0, 0], [0, 0]])
        assert diag_of(s) == [0, 0]

    def test_identity(self):
        _, s, _ = smith_normal_form([[1, 0], [0, 1]])
        assert diag_of(s) == [1, 1]

    def test_random_properties(self):
        rng = random.Random(20250810)
        for _ in range(300):
            m = rng.randint(1, 5)
            n = rng.randint(1, 5)
            mat = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            u, s, v = smith_normal_form(mat)
            assert abelian.mat_mul(abelian.mat_mul(u, mat), v) == s
            assert abs(abelian.det_int(u)) == 1
            assert abs(abelian.det_int(v)) == 1
            diag = diag_of(s)
            for i, d in enumerate(diag):
                assert d >= 0
                if i and diag[i - 1]:
                    assert d % diag[i - 1] == 0
                if i and diag[i - 1] == 0:
                    assert d == 0

    def test_against_independent_reduction(self):
        rng = random.Random(11)
        for _ in range(120):
            m = rng.randint(1, 4)
            n = rng.randint(1, 4)
            mat = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
            _, s, _ = smith_normal_form(mat)
            lib = [d for d in diag_of(s) if d]
            assert lib == [d for d in oracle_invariant_factors(mat) if d]

    def test_against_determinantal_divisors(self):
        rng = random.Random(5)
        for _ in range(40):
            m = rng.randint(1, 3)
            n = rng.randint(1, 3)
            mat = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
            _, s, _ = smith_normal_form(mat)
            lib = [d for d in diag_of(s) if d]
            assert lib == oracle_determinantal_divisors(mat)


class TestSolveLinear:
    def test_frozen_examples(self):
        assert solve_linear([[2]], [1], 4) is None
        assert solve_linear([[2]], [2], 4) == [1]
        assert solve_linear([[1, 1]], [5], 0) == [5, 0]

    def test_solutions_and_infeasibility_vs_exhaustive(self):
        rng = random.Random(77)
        for _ in range(150):
            rows = rng.randint(1, 3)
            cols = rng.randint(1, 3)
            mod = rng.randint(2, 6)
            mat = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
            b = [rng.randint(-5, 5) for _ in range(rows)]
            x = solve_linear(mat, b, mod)
            feasible = any(
                all(
                    sum(mat[i][j] * cand[j] for j in range(cols)) % mod == b[i] % mod
                    for i in range(rows)
                )
                for cand in itertools.product(range(mod), repeat=cols)
            )
            if x is None:
                assert not feasible
            else:
                assert feasible
                for i in range(rows):
                    assert sum(mat[i][j] * x[j] for j in range(cols)) % mod == b[i] % mod

    def test_mixed_moduli_rows(self):
        # first row over Z, second mod 3
        x = solve_linear([[1, 0], [0, 2]], [4, 1], [0, 3])
        assert x is not None
        assert x[0] == 4 and (2 * x[1]) % 3 == 1

    def test_exact_row_infeasible(self):
        assert solve_linear([[2]], [1], 0) is None


class TestGroups:
    def test_invariant_factor_validation(self):
        with pytest.raises(ValueError):
            FgAbelianGroup((3, 2))
        with pytest.raises(ValueError):
            FgAbelianGroup((1,))
        with pytest.raises(ValueError):
            FgAbelianGroup((0, 2))
        assert FgAbelianGroup((2, 4, 0)).rank == 3

    def test_canonical_group(self):
        group, convert = abelian.canonical_group([4, 2])
        assert group.moduli == (2, 4)
        group2, _ = abelian.canonical_group([2, 3])
        assert group2.moduli == (6,)
        group3, _ = abelian.canonical_group([1, 1])
        assert group3.moduli == ()

    def test_element_arithmetic(self):
        g = FgAbelianGroup((2, 4))
        a = g.element((1, 3))
        b = g.element((1, 2))
        assert (a + b).coords == (0, 1)
        assert (-a).coords == (1, 1)
        assert (3 * a).coords == (1, 1)

    def test_circle_elements(self):
        from fractions import Fraction

        c = abelian.CircleElement(Fraction(5, 3))
        assert c.value == Fraction(2, 3)
        assert (c + c).value == Fraction(1, 3)
        assert (-c).value == Fraction(1, 3)

    def test_order_and_enumeration(self):
        g = FgAbelianGroup((2, 4))
        assert g.order() == 8
        assert len(list(g.elements())) == 8
        assert FgAbelianGroup((2, 0)).order() is None


class TestHomomorphisms:
    def test_order_respect(self):
        z2 = FgAbelianGroup((2,))
        z4 = FgAbelianGroup((4,))
        Homomorphism(z2, z4, ((2,),))  # 1 -> 2 is fine
        with pytest.raises(ValueError):
            Homomorphism(z2, z4, ((1,),))  # 2*1 != 0 mod 4

    def test_short_exact_sequence_accepts_z2_z4_z2(self):
        z2 = FgAbelianGroup((2,))
        z4 = FgAbelianGroup((4,))
        ses = ShortExactSequence(
            z2, z4, z2, Homomorphism(z2, z4, ((2,),)), Homomorphism(z4, z2, ((1,),))
        )
        # canonical section of the projection is the minimal representative
        assert ses.section(z2.element((1,))).coords == (1,)
        assert ses.kernel_part(z4.element((2,))).coords == (1,)

    def test_short_exact_sequence_rejects_inexact(self):
        z2 = FgAbelianGroup((2,))
        z4 = FgAbelianGroup((4,))
        with pytest.raises(ValueError):
            # inject = 0 map is not injective
            ShortExactSequence(
                z2, z4, z2, Homomorphism(z2, z4, ((0,),)), Homomorphism(z4, z2, ((1,),))
            )
        z2z2 = FgAbelianGroup((2, 2))
        with pytest.raises(ValueError):
            # split inclusion+projection of the same factor: im != ker
            ShortExactSequence(
                z2,
                z2z2,
                z2,
                Homomorphism(z2, z2z2, ((1,), (0,))),
                Homomorphism(z2z2, z2, ((1, 0),)),
            )

    def test_split_sequence_accepted(self):
        z2 = FgAbelianGroup((2,))
        z2z2 = FgAbelianGroup((2, 2))
        ShortExactSequence(
            z2,
            z2z2,
            z2,
            Homomorphism(z2, z2z2, ((1,), (0,))),
            Homomorphism(z2z2, z2, ((0, 1),)),
        )

    def test_free_sequence(self):
        z = FgAbelianGroup((0,))
        ShortExactSequence(
            z, z, FgAbelianGroup((2,)), Homomorphism(z, z, ((2,),)),
            Homomorphism(z, FgAbelianGroup((2,)), ((1,),)),
        )


class TestCohomologyOf:
    def test_circle_complex(self, hexagon):
        z = FgAbelianGroup((0,))
        d0 = hexagon.coboundary_matrix(0)
        d1 = hexagon.coboundary_matrix(1)
        h1 = abelian.cohomology_of(d0, d1, z, dim=len(hexagon.simplices_of_dim(1)))
        assert h1.moduli == (0,)

    def test_boundary_delta3(self, bd3):
        z = FgAbelianGroup((0,))
        h1 = abelian.cohomology_of(
            bd3.coboundary_matrix(0), bd3.coboundary_matrix(1), z,
            dim=len(bd3.simplices_of_dim(1)),
        )
        assert h1.is_trivial()
        h2 = abelian.cohomology_of(
            bd3.coboundary_matrix(1), bd3.coboundary_matrix(2), z,
            dim=len(bd3.simplices_of_dim(2)),
        )
        assert h2.moduli == (0,)

    def test_rp2_mod2(self, rp2):
        z2 = FgAbelianGroup((2,))
        for p in (1, 2):
            h = abelian.cohomology_of(
                rp2.coboundary_matrix(p - 1), rp2.coboundary_matrix(p), z2,
                dim=len(rp2.simplices_of_dim(p)),
            )
            assert h.moduli == (2,)

    def test_not_a_complex(self):
        with pytest.raises(NotAComplex):
            abelian.cohomology_of([[1], [0]], [[1, 1]], FgAbelianGroup((0,)), dim=2)

    def test_random_complexes_match_oracle(self):
        from conftest import oracle_cohomology_group_Z, oracle_cohomology_order_mod
        from conftest import random_complex

        rng = random.Random(2718)
        z = FgAbelianGroup((0,))
        for _ in range(40):
            k = random_complex(rng, max_vertices=6, max_cells=5, max_dim=3)
            for p in range(0, k.dim + 1):
                dim = len(k.simplices_of_dim(p))
                d_prev = (
                    k.coboundary_matrix(p - 1) if p else [[] for _ in range(dim)]
                )
                d_next = k.coboundary_matrix(p)
                lib = abelian.cohomology_of(d_prev, d_next, z, dim=dim)
                assert lib == oracle_cohomology_group_Z(d_prev, d_next, dim)
                for m in (2, 3):
                    libm = abelian.cohomology_of(
                        d_prev, d_next, FgAbelianGroup((m,)), dim=dim
                    )
                    assert libm.order() == oracle_cohomology_order_mod(
                        d_prev, d_next, m, dim
                    )

    def test_unimodular_invariance(self, rp2):
        rng = random.Random(9)
        z = FgAbelianGroup((0,))
        d_prev = rp2.coboundary_matrix(0)
        d_next = rp2.coboundary_matrix(1)
        n = len(rp2.simplices_of_dim(1))
        base = abelian.cohomology_of(d_prev, d_next, z, dim=n)
        for _ in range(10):
            # random unimodular change of basis of the middle chain group
            p = abelian.identity_matrix(n)
            pinv = abelian.identity_matrix(n)
            for _ in range(15):
                i, j = rng.sample(range(n), 2)
                k = rng.randint(-2, 2)
                for r in range(n):
                    p[i][r] += k * p[j][r]
                for r in range(n):
                    pinv[r][j] -= k * pinv[r][i]
            dp = abelian.mat_mul(p, d_prev)
            dn = abelian.mat_mul(d_next, pinv)
            assert abelian.cohomology_of(dp, dn, z, dim=n) == base
