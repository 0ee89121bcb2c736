import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lagdiff.collocation import FAMILY_TAGS, build_nodeset, scaled_coeffs
from lagdiff.difmat import (
    BreakdownReport,
    DiffMatrix,
    RangeLimitError,
    classic_coefficients,
    classic_construction,
    differentiation_matrix,
    first_order,
    first_order_diagonal,
    higher_order,
    interpolate,
    max_safe_degree,
    negative_sum_diagonal,
    reciprocal_sum_diagonal,
    scaled_operators,
    second_order,
    weight_identity_residual,
)
from oracle.reference import oracle_difmat, rel_error

E = math.exp(0.5)
AUG2_D1 = [[-1.5, E], [-1 / E, 0.5]]
AUG2_D2 = [[1.25, -E], [1 / E, -0.75]]
AUG2_D3 = [[-7 / 8, 0.75 * E], [-0.75 / E, 5 / 8]]


def aug2():
    return build_nodeset("augmented-gauss", 2)


class TestFirstOrder:
    def test_hand_case(self):
        np.testing.assert_allclose(first_order(aug2()).entries, AUG2_D1, rtol=1e-15)

    def test_origin_diagonal(self):
        assert first_order_diagonal(build_nodeset("augmented-gauss", 6))[0] == -5.5

    def test_standard_diagonal(self):
        d = first_order_diagonal(build_nodeset("standard-gauss", 2))
        assert d[0] == pytest.approx(-1 / (2 * (2 - math.sqrt(2))), rel=1e-15)
        assert d[0] == pytest.approx(-0.8535533906, rel=1e-10)

    def test_misaligned_coeffs(self):
        ns = build_nodeset("augmented-gauss", 4)
        with pytest.raises(ValueError):
            first_order(ns, scaled_coeffs(build_nodeset("augmented-gauss", 3)))

    def test_array_protocol(self):
        d = first_order(aug2())
        assert np.asarray(d).shape == d.shape == (2, 2)

    @pytest.mark.parametrize("family", FAMILY_TAGS)
    @pytest.mark.parametrize("npts", [4, 64, 300, 1001])
    def test_against_oracle(self, family, npts, nodeset):
        d = first_order(nodeset(family, npts)).entries
        err = rel_error(d, oracle_difmat(family, npts, 1))
        off = ~np.eye(npts, dtype=bool)
        assert np.all(np.isfinite(d))
        assert np.max(err[off]) <= 1e-11
        ref_diag = np.diag(oracle_difmat(family, npts, 1).hi)
        # gauss-radau interior diagonals vanish, so compare in absolute terms there
        diag_err = np.abs(np.diag(d) - ref_diag) / np.maximum(np.abs(ref_diag), 1.0)
        assert np.max(diag_err) <= 1e-13


class TestSecondOrder:
    def test_hand_case(self):
        np.testing.assert_allclose(second_order(aug2()).entries, AUG2_D2, rtol=1e-15)

    def test_b_constant(self):
        # augmented alpha=0 diagonal at x_k: 1/12 - (2(2n+1)x + 4)/(12 x^2)
        ns = build_nodeset("augmented-gauss", 5)
        d2 = second_order(ns).entries
        x, n = ns.nodes[1:], 4
        np.testing.assert_allclose(np.diag(d2)[1:], 1 / 12 - (2 * (2 * n + 1) * x + 4) / (12 * x * x), rtol=1e-14)

    def test_rejects_wrong_d1(self):
        ns = build_nodeset("augmented-gauss", 4)
        with pytest.raises(ValueError):
            second_order(ns, d1=second_order(ns))

    @pytest.mark.parametrize("family", FAMILY_TAGS)
    def test_offdiag_against_oracle(self, family, nodeset):
        npts = 300
        d = second_order(nodeset(family, npts)).entries
        err = rel_error(d, oracle_difmat(family, npts, 2))
        off = ~np.eye(npts, dtype=bool)
        assert np.max(err[off]) <= 1e-10

    @pytest.mark.parametrize("family", FAMILY_TAGS)
    def test_diag_against_oracle(self, family, nodeset):
        npts = 200
        d = second_order(nodeset(family, npts)).entries
        ref = np.diag(oracle_difmat(family, npts, 2).hi)
        assert np.max(np.abs(np.diag(d) - ref) / np.maximum(np.abs(ref), 1.0)) <= 1e-12


class TestHigherOrder:
    def test_third_order_hand_case(self):
        np.testing.assert_allclose(differentiation_matrix(aug2(), 3).entries, AUG2_D3, rtol=1e-14)

    def test_identity_base(self):
        # raising the identity by one order gives the first-order off-diagonals
        ns = build_nodeset("augmented-gauss", 7)
        d1 = higher_order(DiffMatrix(0, np.eye(7), ns))
        ref = first_order(ns).entries
        off = ~np.eye(7, dtype=bool)
        np.testing.assert_allclose(d1.entries[off], ref[off], rtol=1e-14)

    @pytest.mark.parametrize("npts", [10, 80, 200])
    def test_recursion_matches_direct_second_order(self, npts, nodeset):
        ns = nodeset("augmented-gauss", npts)
        d1 = first_order(ns)
        via = higher_order(d1).entries
        direct = second_order(ns, d1=d1).entries
        off = ~np.eye(npts, dtype=bool)
        np.testing.assert_allclose(via[off], direct[off], rtol=1e-12)

    def test_range_limit(self, nodeset):
        ns = nodeset("augmented-gauss", 500)
        with pytest.raises(RangeLimitError) as info:
            differentiation_matrix(ns, 3)
        assert info.value.max_safe_n == max_safe_degree(0.0)

    def test_order_zero_rejected(self):
        with pytest.raises(ValueError):
            differentiation_matrix(aug2(), 0)

    @pytest.mark.parametrize("order", [3, 4])
    def test_polynomial_exactness_small(self, order):
        ns = build_nodeset("augmented-gauss", 6)
        x = ns.nodes
        d = differentiation_matrix(ns, order).entries
        # weighted polynomial e^{-x/2}(1 + x): nth derivative e^{-x/2}(-1/2)^n (1 + x - 2n)
        f = np.exp(-x / 2) * (1 + x)
        ref = np.exp(-x / 2) * (-0.5) ** order * (1 + x - 2 * order)
        np.testing.assert_allclose(d @ f, ref, rtol=1e-9, atol=1e-12)


class TestDiagonalVariants:
    def test_negative_sum_hand_case(self):
        d = first_order(aug2())
        np.testing.assert_allclose(negative_sum_diagonal(d), [-1.5, 0.5], rtol=1e-15)

    def test_negative_sum_row_zero_finite(self, nodeset):
        ns = nodeset("augmented-gauss", 1001)
        d = first_order(ns).entries
        x = ns.nodes
        val = -0.5 - np.sum(np.exp(-x[1:] / 2) * d[0, 1:])
        assert math.isfinite(val)

    def test_negative_sum_range_error(self, nodeset):
        with pytest.raises(RangeLimitError):
            negative_sum_diagonal(first_order(nodeset("augmented-gauss", 500)))

    def test_max_safe_degree(self):
        n = max_safe_degree(0.0)
        assert 300 < n < 400
        # the rigorous bound on the largest root stays inside the exp range
        assert build_nodeset("augmented-gauss", n + 1).nodes[-1] / 2 < math.log(np.finfo(float).max)

    def test_negative_sum_worse_than_direct(self, nodeset):
        npts = 100
        ns = nodeset("augmented-gauss", npts)
        ref = np.diag(oracle_difmat("augmented-gauss", npts, 1).hi)
        direct = np.max(np.abs(first_order_diagonal(ns) - ref) / np.abs(ref))
        neg = np.max(np.abs(negative_sum_diagonal(first_order(ns)) - ref) / np.abs(ref))
        assert neg >= 10 * direct

    def test_reciprocal_sum_matches_small(self):
        ns = build_nodeset("augmented-gauss", 12)
        np.testing.assert_allclose(reciprocal_sum_diagonal(ns), first_order_diagonal(ns), rtol=1e-13)


class TestClassic:
    def test_small_case_agrees(self):
        for weights in ("product", "derivative"):
            res = classic_construction(aug2(), weights)
            assert isinstance(res, DiffMatrix)
            np.testing.assert_allclose(res.entries, AUG2_D1, rtol=1e-14)

    def test_unknown_weights(self):
        with pytest.raises(ValueError):
            classic_coefficients(aug2(), "magic")

    @staticmethod
    def _first_breakdown(weights, lo, hi):
        for npts in range(lo, hi + 1):
            res = classic_construction(build_nodeset("augmented-gauss", npts), weights)
            if isinstance(res, BreakdownReport):
                return npts, res
        return None, None

    def test_product_breaks_in_range(self):
        assert isinstance(classic_construction(build_nodeset("augmented-gauss", 99), "product"), DiffMatrix)
        npts, report = self._first_breakdown("product", 100, 160)
        assert npts is not None
        assert report.weights == "product"
        assert set(report.to_dict()) == {"npts", "weights", "intermediate", "index", "value"}

    def test_derivative_breaks_in_range(self):
        assert isinstance(classic_construction(build_nodeset("augmented-gauss", 359), "derivative"), DiffMatrix)
        npts, _ = self._first_breakdown("derivative", 360, 400)
        assert npts is not None


class TestIdentities:
    @pytest.mark.parametrize("family", FAMILY_TAGS)
    @pytest.mark.parametrize("npts", [10, 100, 500, 1000])
    def test_weight_row_identity(self, family, npts, nodeset):
        res = weight_identity_residual(first_order(nodeset(family, npts)))
        assert np.max(res) <= 1e-12 * npts

    @pytest.mark.parametrize("npts", [10, 100])
    def test_weight_row_identity_second_order(self, npts, nodeset):
        res = weight_identity_residual(second_order(nodeset("augmented-gauss", npts)))
        assert np.max(res) <= 1e-11 * npts

    def test_monomials_small(self):
        ns = build_nodeset("augmented-gauss", 5)
        x = ns.nodes
        d = first_order(ns).entries
        for m in range(5):
            f = np.exp(-x / 2) * x**m
            fp = np.exp(-x / 2) * (m * x ** max(m - 1, 0) - x**m / 2)
            np.testing.assert_allclose(d @ f, fp, rtol=1e-10, atol=1e-14)

    @pytest.mark.parametrize("family", FAMILY_TAGS)
    @pytest.mark.parametrize("npts", [20, 100, 500])
    def test_monomials_conditioning_relative(self, family, npts, nodeset):
        # error relative to sum_j |D_kj f_j|, the rounding floor of any method fed binary64 samples
        ns = nodeset(family, npts)
        x = ns.nodes
        d = first_order(ns).entries
        for m in range(9):
            f = np.exp(-x / 2) * x**m
            fp = np.exp(-x / 2) * (m * x ** max(m - 1, 0) - x**m / 2)
            scale = np.abs(d) @ np.abs(f)
            ok = scale > 1e-300
            assert np.max(np.abs(d @ f - fp)[ok] / scale[ok]) <= 1e-13


class TestInterpolate:
    def test_reproduces_nodes(self):
        ns = build_nodeset("augmented-gauss", 15)
        f = np.exp(-ns.nodes / 2) * np.cos(ns.nodes)
        np.testing.assert_array_equal(interpolate(ns, f, ns.nodes), f)

    @given(st.floats(0.01, 20.0))
    def test_weighted_polynomial_exact(self, x):
        ns = build_nodeset("augmented-gauss", 8)
        p = lambda t: 1 - 2 * t + 0.3 * t**3  # noqa: E731
        f = np.exp(-ns.nodes / 2) * p(ns.nodes)
        assert interpolate(ns, f, x)[0] == pytest.approx(math.exp(-x / 2) * p(x), rel=1e-9, abs=1e-13)


class TestScaledOperators:
    def test_scaling(self):
        ns = build_nodeset("augmented-gauss", 20)
        ops = scaled_operators(ns, orders=(1, 2), beta=3.0)
        np.testing.assert_array_equal(ops.nodes, ns.nodes / 3.0)
        np.testing.assert_allclose(ops.matrices[1], 3.0 * first_order(ns).entries, rtol=1e-15)
        np.testing.assert_allclose(ops.matrices[2], 9.0 * second_order(ns).entries, rtol=1e-15)

    def test_only_requested_orders(self):
        ops = scaled_operators(build_nodeset("augmented-gauss", 6), orders=(2,), beta=2.0)
        assert set(ops.matrices) == {2}

    def test_bad_beta(self):
        with pytest.raises(ValueError):
            scaled_operators(aug2(), beta=0.0)
