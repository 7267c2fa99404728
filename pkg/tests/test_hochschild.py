"""Bar-complex (co)homology, the form pairing, and the cup product."""

import numpy as np
import pytest

from derinv import GF
from derinv.errors import (
    DerinvError,
    DimensionMismatch,
    SizeCapExceeded,
)
from derinv.hochschild import (
    Cochain,
    boundary_matrix,
    coboundary,
    coboundary_matrix,
    cup,
    cup_power,
    hh_cohomology,
    hh_homology,
    multiplication_cochain,
    pairing,
    pairing_gram,
    resolve_size_cap,
    unit_cochain,
    DEFAULT_SIZE_CAP,
    SIZE_CAP_ENV,
)
from derinv.kulshammer import quotient_mod_ka
from derinv.linalg import Mat

import oracles


def rand_codes(rng, field, shape):
    if field.e == 1:
        return rng.integers(0, field.p, size=shape).astype(np.int8)
    return rng.integers(0, field.q, size=shape).astype(np.int8)


def rand_cochain(rng, algebra, arity):
    mat = rand_codes(rng, algebra.field, (algebra.dim, algebra.dim**arity))
    return Cochain(algebra, arity, Mat(algebra.field, mat))


def rand_cocycle(rng, basis):
    """Random linear combination of the representative (co)cycles."""
    f = basis.algebra.field
    coeffs = rand_codes(rng, f, basis.dim)
    return f.matmul(coeffs.reshape(1, -1), basis.reps.data).reshape(-1)


class TestDifferentials:
    @pytest.mark.parametrize(
        "fixture,m",
        [
            ("dual2", 1),
            ("dual2", 2),
            ("dual2", 3),
            ("trunc3_3", 1),
            ("trunc3_3", 2),
            ("dual4", 1),
            ("dual4", 2),
            ("s3_2", 1),
        ],
    )
    def test_boundary_matches_direct_evaluation(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        assert np.array_equal(
            boundary_matrix(a, m).data, oracles.oracle_boundary_matrix(a, m)
        )

    @pytest.mark.parametrize(
        "fixture,m",
        [
            ("dual2", 0),
            ("dual2", 1),
            ("dual2", 2),
            ("trunc3_3", 0),
            ("trunc3_3", 1),
            ("trunc3_3", 2),
            ("dual4", 0),
            ("dual4", 1),
            ("s3_2", 1),
        ],
    )
    def test_coboundary_matches_direct_evaluation(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        rng = np.random.default_rng(101 + m)
        delta = coboundary_matrix(a, m)
        for _ in range(3):
            f = rand_cochain(rng, a, m)
            via_matrix = delta.mul_vec(f.flat()).reshape(a.dim, -1)
            direct = oracles.oracle_coboundary_matrix(a, f.matrix.data, m)
            assert np.array_equal(via_matrix, direct)

    @pytest.mark.parametrize(
        "fixture,m",
        [
            ("dual2", 1),
            ("dual2", 2),
            ("dual2", 3),
            ("trunc3_3", 1),
            ("trunc3_3", 2),
            ("trunc4_3", 1),
            ("klein", 1),
            ("dual4", 1),
            ("dual4", 2),
            ("s3_2", 1),
        ],
    )
    def test_boundary_squares_to_zero(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        f = a.field
        prod = f.matmul(boundary_matrix(a, m).data, boundary_matrix(a, m + 1).data)
        assert not prod.any()

    @pytest.mark.parametrize(
        "fixture,m",
        [
            ("dual2", 0),
            ("dual2", 1),
            ("dual2", 2),
            ("trunc3_3", 0),
            ("trunc3_3", 1),
            ("trunc4_3", 0),
            ("trunc4_3", 1),
            ("klein", 0),
            ("dual4", 0),
            ("dual4", 1),
            ("s3_2", 0),
        ],
    )
    def test_coboundary_squares_to_zero(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        f = a.field
        prod = f.matmul(coboundary_matrix(a, m + 1).data, coboundary_matrix(a, m).data)
        assert not prod.any()

    def test_multiplication_is_a_cocycle(self, s3_2, trunc3_3):
        assert multiplication_cochain(s3_2).is_cocycle()
        assert multiplication_cochain(trunc3_3).is_cocycle()

    def test_unit_is_a_cocycle(self, s3_2):
        assert unit_cochain(s3_2).is_cocycle()

    def test_boundary_rejects_degree_zero(self, dual2):
        with pytest.raises(ValueError):
            boundary_matrix(dual2, 0)

    def test_size_cap_blocks_assembly(self, c8):
        with pytest.raises(SizeCapExceeded) as exc:
            boundary_matrix(c8, 4, size_cap=1000)
        assert exc.value.entries == 8**4 * 8**5
        assert exc.value.cap == 1000
        with pytest.raises(SizeCapExceeded):
            coboundary_matrix(c8, 4, size_cap=1000)

    def test_size_cap_env_override(self, c8, monkeypatch):
        monkeypatch.setenv(SIZE_CAP_ENV, "999")
        assert resolve_size_cap() == 999
        with pytest.raises(SizeCapExceeded):
            boundary_matrix(c8, 5)
        monkeypatch.delenv(SIZE_CAP_ENV)
        assert resolve_size_cap() == DEFAULT_SIZE_CAP
        assert resolve_size_cap(123) == 123


class TestCochain:
    def test_apply_reads_matrix_columns(self, trunc3_3):
        a = trunc3_3
        rng = np.random.default_rng(7)
        f = rand_cochain(rng, a, 2)
        for i in range(a.dim):
            for j in range(a.dim):
                col = f.apply(a.basis_vector(i), a.basis_vector(j))
                assert np.array_equal(col, f.matrix.data[:, i * a.dim + j])

    def test_apply_is_multilinear(self, dual4):
        a = dual4
        f = a.field
        rng = np.random.default_rng(8)
        g = rand_cochain(rng, a, 2)
        x, y, z = (rand_codes(rng, f, a.dim) for _ in range(3))
        c = int(rand_codes(rng, f, ()))
        lhs = g.apply(f.vadd(x, f.vscale(c, y)), z)
        rhs = f.vadd(g.apply(x, z), f.vscale(c, g.apply(y, z)))
        assert np.array_equal(lhs, rhs)

    def test_flat_roundtrip(self, klein):
        rng = np.random.default_rng(9)
        f = rand_cochain(rng, klein, 2)
        again = Cochain.from_flat(klein, 2, f.flat())
        assert again == f

    def test_arity_mismatch_rejected(self, dual2):
        rng = np.random.default_rng(10)
        f = rand_cochain(rng, dual2, 1)
        g = rand_cochain(rng, dual2, 2)
        with pytest.raises(DimensionMismatch):
            f + g
        with pytest.raises(DimensionMismatch):
            f.apply()

    def test_coboundary_of_coboundary_vanishes(self, trunc4_3):
        rng = np.random.default_rng(11)
        f = rand_cochain(rng, trunc4_3, 1)
        assert not coboundary(coboundary(f)).matrix.data.any()
        assert coboundary(f).is_cocycle()


class TestHomologyBases:
    @pytest.mark.parametrize(
        "fixture", ["dual2", "trunc4_2", "trunc3_3", "klein", "s3_2", "m2k", "dual4"]
    )
    def test_degree_zero_cohomology_is_center(self, request, fixture):
        a = request.getfixturevalue(fixture)
        coh = hh_cohomology(a, 0)
        assert coh.cycles == a.center()
        assert coh.dim == a.center().dim
        assert np.array_equal(coh.reps.data, a.center().basis.data)

    @pytest.mark.parametrize(
        "fixture", ["dual2", "trunc4_2", "trunc3_3", "klein", "s3_2", "m2k", "dual4"]
    )
    def test_degree_zero_homology_matches_quotient(self, request, fixture):
        a = request.getfixturevalue(fixture)
        hom = hh_homology(a, 0)
        assert hom.boundaries == a.commutator_space()
        q = quotient_mod_ka(a)
        assert np.array_equal(hom.reps.data, q.reps.data)
        assert hom.dim == q.dim

    def test_dual_numbers_dims_match_periodic_resolution(self, dual2):
        expected = oracles.periodic_hh_dims_dual_numbers(dual2.field)
        for m in range(5):
            assert hh_cohomology(dual2, m).dim == expected(m)
            assert hh_homology(dual2, m).dim == expected(m)

    @pytest.mark.parametrize(
        "fixture,dims",
        [
            # char p divides the truncation order: constant dimension
            ("trunc4_2", [4, 4, 4]),
            ("c4", [4, 4, 4]),
            ("trunc3_3", [3, 3, 3]),
            ("c8", [8, 8, 8]),
            # char p does not divide it: drops to N - 1 in higher degrees
            ("trunc4_3", [4, 3, 3]),
            # one nilpotent block and one separable block
            ("s3_2", [3, 2, 2]),
            # separable: nothing above degree 0
            ("m2k", [1, 0, 0]),
            ("klein", [4, 8]),
            ("uv", [4, 8]),
            ("dual4", [2, 2, 2]),
            ("c9_3", [9, 9]),
        ],
    )
    def test_frozen_dimension_tables(self, request, fixture, dims):
        a = request.getfixturevalue(fixture)
        for m, want in enumerate(dims):
            assert hh_cohomology(a, m).dim == want, f"HH^{m}"
            assert hh_homology(a, m).dim == want, f"HH_{m}"

    def test_degree_one_cocycles_are_derivations(self, s3_2):
        a = s3_2
        f = a.field
        rng = np.random.default_rng(12)
        for fc in hh_cohomology(a, 1).cochains():
            for _ in range(4):
                x, y = rand_codes(rng, f, a.dim), rand_codes(rng, f, a.dim)
                lhs = fc.apply(a.multiply(x, y))
                rhs = f.vadd(a.multiply(x, fc.apply(y)), a.multiply(fc.apply(x), y))
                assert np.array_equal(lhs, rhs)

    def test_inner_derivations_are_trivial_classes(self, s3_2):
        a = s3_2
        rng = np.random.default_rng(13)
        coh = hh_cohomology(a, 1)
        for _ in range(4):
            x = rand_codes(rng, a.field, a.dim)
            inner = coboundary(Cochain(a, 0, Mat(a.field, x.reshape(-1, 1))))
            assert inner.is_cocycle()
            assert not coh.class_coords(inner.flat()).any()

    def test_class_coords_roundtrip(self, trunc4_3):
        a = trunc4_3
        f = a.field
        rng = np.random.default_rng(14)
        coh = hh_cohomology(a, 1)
        for _ in range(5):
            coeffs = rand_codes(rng, f, coh.dim)
            vec = f.matmul(coeffs.reshape(1, -1), coh.reps.data).reshape(-1)
            # shifting by a coboundary must not change the class
            shift = coboundary(rand_cochain(rng, a, 0)).flat()
            assert np.array_equal(coh.class_coords(f.vadd(vec, shift)), coeffs)

    def test_class_coords_rejects_non_cocycle(self, dual2):
        coh = hh_cohomology(dual2, 1)
        # x -> 1 on both basis vectors is not a derivation of k[x]/(x^2)
        bad = np.array([1, 0, 1, 0], dtype=np.int8)
        delta = coboundary_matrix(dual2, 1)
        assert delta.mul_vec(bad).any()
        with pytest.raises(DerinvError):
            coh.class_coords(bad)

    def test_chain_classes_do_not_lift_to_cochains(self, dual2):
        hom = hh_homology(dual2, 1)
        with pytest.raises(DerinvError):
            hom.cochain(0)

    def test_dimensions_invariant_under_basis_change(self, c4):
        from derinv.algebras import change_basis

        f = c4.field
        rng = np.random.default_rng(15)
        while True:
            g = Mat(f, rand_codes(rng, f, (c4.dim, c4.dim)))
            if g.rank() == c4.dim:
                break
        b = change_basis(c4, g)
        for m in range(3):
            assert hh_cohomology(b, m).dim == hh_cohomology(c4, m).dim
            assert hh_homology(b, m).dim == hh_homology(c4, m).dim


class TestPairing:
    FIXTURES = ["dual2", "trunc4_2", "trunc3_3", "trunc4_3", "klein", "s3_2", "dual4", "c4"]

    @pytest.mark.parametrize("fixture", FIXTURES)
    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_gram_is_square_and_invertible(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        g = pairing_gram(a, m)
        assert g.rows == g.cols == hh_cohomology(a, m).dim
        if g.rows:
            assert g.rank() == g.rows

    def test_separable_algebra_has_empty_gram_above_zero(self, m2k):
        g = pairing_gram(m2k, 1)
        assert g.rows == g.cols == 0

    @pytest.mark.parametrize("fixture", ["dual2", "trunc3_3", "klein", "s3_2", "dual4"])
    def test_degree_zero_gram_matches_quotient_pairing(self, request, fixture):
        a = request.getfixturevalue(fixture)
        q = quotient_mod_ka(a)
        assert np.array_equal(pairing_gram(a, 0).data, q.induced_gram.data)

    def test_pairing_formula(self, trunc3_3):
        a = trunc3_3
        f = a.field
        form = a.require_form()
        rng = np.random.default_rng(16)
        fc = rand_cochain(rng, a, 2)
        for _ in range(5):
            x, y, z = (rand_codes(rng, f, a.dim) for _ in range(3))
            chain = f.vmul(
                f.vmul(x[:, None, None], y[None, :, None]), z[None, None, :]
            ).reshape(-1)
            assert pairing(fc, chain) == form.pair(x, fc.apply(y, z))

    @pytest.mark.parametrize("fixture,m", [("trunc3_3", 1), ("dual4", 1), ("s3_2", 1)])
    def test_pairing_descends_to_classes(self, request, fixture, m):
        a = request.getfixturevalue(fixture)
        f = a.field
        rng = np.random.default_rng(17)
        coh = hh_cohomology(a, m)
        hom = hh_homology(a, m)
        fc = Cochain.from_flat(a, m, rand_cocycle(rng, coh))
        cyc = rand_cocycle(rng, hom)
        base = pairing(fc, cyc)
        # shift the chain by a boundary
        w = rand_codes(rng, f, a.dim ** (m + 2))
        shifted = f.vadd(cyc, boundary_matrix(a, m + 1).mul_vec(w))
        assert pairing(fc, shifted) == base
        # shift the cochain by a coboundary
        g = rand_cochain(rng, a, m - 1)
        fc2 = fc + coboundary(g)
        assert pairing(fc2, cyc) == base

    def test_pairing_is_bilinear(self, trunc3_3):
        a = trunc3_3
        f = a.field
        rng = np.random.default_rng(18)
        fc, gc = rand_cochain(rng, a, 1), rand_cochain(rng, a, 1)
        x = rand_codes(rng, f, a.dim**2)
        y = rand_codes(rng, f, a.dim**2)
        c = 2
        assert pairing(fc + gc.scale(c), x) == f.add(
            pairing(fc, x), f.mul(c, pairing(gc, x))
        )
        assert pairing(fc, f.vadd(x, f.vscale(c, y))) == f.add(
            pairing(fc, x), f.mul(c, pairing(fc, y))
        )

    def test_pairing_rejects_wrong_degree(self, dual2):
        rng = np.random.default_rng(19)
        fc = rand_cochain(rng, dual2, 1)
        with pytest.raises(DimensionMismatch):
            pairing(fc, np.zeros(2, dtype=np.int8))


class TestCup:
    def test_cup_is_pointwise_product(self, dual4):
        a = dual4
        f = a.field
        rng = np.random.default_rng(20)
        fc, gc = rand_cochain(rng, a, 1), rand_cochain(rng, a, 2)
        h = cup(fc, gc)
        assert h.arity == 3
        for _ in range(5):
            x, y, z = (rand_codes(rng, f, a.dim) for _ in range(3))
            want = a.multiply(fc.apply(x), gc.apply(y, z))
            assert np.array_equal(h.apply(x, y, z), want)

    def test_cup_associative_exactly(self, trunc3_3):
        a = trunc3_3
        rng = np.random.default_rng(21)
        fc, gc, hc = (rand_cochain(rng, a, 1) for _ in range(3))
        assert cup(cup(fc, gc), hc) == cup(fc, cup(gc, hc))

    def test_unit_cochain_is_identity(self, trunc3_3):
        a = trunc3_3
        rng = np.random.default_rng(22)
        fc = rand_cochain(rng, a, 2)
        one = unit_cochain(a)
        assert cup(one, fc) == fc
        assert cup(fc, one) == fc

    def test_degree_zero_cup_is_algebra_product(self, s3_2):
        a = s3_2
        rng = np.random.default_rng(23)
        x, y = rand_codes(rng, a.field, a.dim), rand_codes(rng, a.field, a.dim)
        zx = Cochain(a, 0, Mat(a.field, x.reshape(-1, 1)))
        zy = Cochain(a, 0, Mat(a.field, y.reshape(-1, 1)))
        assert np.array_equal(cup(zx, zy).flat(), a.multiply(x, y))

    @pytest.mark.parametrize("fixture,m,n", [("dual2", 1, 1), ("trunc3_3", 1, 1), ("trunc3_3", 1, 2), ("trunc4_3", 2, 1)])
    def test_cup_coboundary_leibniz(self, request, fixture, m, n):
        # d(f cup g) = df cup g + (-1)^m f cup dg ties the sign conventions
        # of the coboundary and the cup product together
        a = request.getfixturevalue(fixture)
        f = a.field
        rng = np.random.default_rng(24)
        fc, gc = rand_cochain(rng, a, m), rand_cochain(rng, a, n)
        lhs = coboundary(cup(fc, gc))
        sign = 1 if m % 2 == 0 else f.neg(1)
        rhs = cup(coboundary(fc), gc) + cup(fc, coboundary(gc)).scale(sign)
        assert lhs == rhs

    @pytest.mark.parametrize("fixture", ["trunc3_3", "trunc4_3", "dual2", "klein"])
    def test_cup_graded_commutative_on_classes(self, request, fixture):
        a = request.getfixturevalue(fixture)
        f = a.field
        rng = np.random.default_rng(25)
        coh1 = hh_cohomology(a, 1)
        coh2 = hh_cohomology(a, 2)
        for _ in range(3):
            fc = Cochain.from_flat(a, 1, rand_cocycle(rng, coh1))
            gc = Cochain.from_flat(a, 1, rand_cocycle(rng, coh1))
            fg = coh2.class_coords(cup(fc, gc).flat())
            gf = coh2.class_coords(cup(gc, fc).flat())
            # degree 1 times degree 1: [f cup g] = -[g cup f]
            assert np.array_equal(fg, f.vneg(gf))

    def test_center_classes_commute_with_everything(self, trunc3_3):
        a = trunc3_3
        rng = np.random.default_rng(26)
        z = hh_cohomology(a, 0).cochain(0)
        coh1 = hh_cohomology(a, 1)
        fc = Cochain.from_flat(a, 1, rand_cocycle(rng, coh1))
        left = coh1.class_coords(cup(z, fc).flat())
        right = coh1.class_coords(cup(fc, z).flat())
        assert np.array_equal(left, right)

    def test_cup_power(self, trunc3_3):
        a = trunc3_3
        rng = np.random.default_rng(27)
        fc = rand_cochain(rng, a, 1)
        assert cup_power(fc, 1) == fc
        assert cup_power(fc, 3) == cup(cup(fc, fc), fc)
        with pytest.raises(ValueError):
            cup_power(fc, 0)

    def test_cup_respects_size_cap(self, c8):
        rng = np.random.default_rng(28)
        fc = rand_cochain(rng, c8, 2)
        with pytest.raises(SizeCapExceeded):
            cup(fc, fc, size_cap=100)

    def test_cup_rejects_mixed_algebras(self, dual2, klein):
        rng = np.random.default_rng(29)
        fc = rand_cochain(rng, dual2, 1)
        gc = rand_cochain(rng, klein, 1)
        with pytest.raises(DimensionMismatch):
            cup(fc, gc)

    def test_cocycles_are_closed_under_cup(self, trunc4_3):
        a = trunc4_3
        rng = np.random.default_rng(30)
        coh1 = hh_cohomology(a, 1)
        fc = Cochain.from_flat(a, 1, rand_cocycle(rng, coh1))
        gc = Cochain.from_flat(a, 1, rand_cocycle(rng, coh1))
        assert cup(fc, gc).is_cocycle()
