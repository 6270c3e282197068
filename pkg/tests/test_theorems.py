import math

import numpy as np
import pytest

from nullgeo.classify import AlphaLimit, BlockBehavior
from nullgeo.core import ShapeOperatorSet
from nullgeo.sampling import random_splitting_tensor
from nullgeo.theorems import (
    InconsistentInput,
    MinimalityVerdict,
    NoDirection,
    NotConstant,
    NotIntegrable,
    SplittingFamily,
    alpha_norm,
    alpha_operator_norm,
    cylinder_split,
    find_special_nullity_direction,
    florit_bound,
    integrable_conullity_classify,
    mean_curvature_norm,
    minimality_certificate,
    nu_n,
    principal_angles,
    radon_hurwitz,
    scalar_curvature,
    sphere_rigidity_threshold,
    theorem1_applicable,
    theorem1_pipeline,
    theorem2_applicable,
)

WORKED_FAMILY = SplittingFamily(
    basis=(
        np.array([[1.0, 0.0], [0.0, -1.0]]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        np.array([[1.0, 1.0], [-1.0, 1.0]]),
    ),
    q=2,
)


def radon_hurwitz_oracle(m):
    e = 0
    while m % 2 == 0:
        m //= 2
        e += 1
    if e < 4:
        return (1, 2, 4, 8)[e]
    return radon_hurwitz_oracle(2 ** (e - 4)) + 8


class TestIntegerPredicates:
    @pytest.mark.parametrize("m,want", [(1, 1), (8, 8), (16, 9)])
    def test_radon_hurwitz_values(self, m, want):
        assert radon_hurwitz(m) == want

    def test_radon_hurwitz_table(self):
        got = tuple(radon_hurwitz(m) for m in range(1, 17))
        assert got == (1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9)

    def test_radon_hurwitz_matches_oracle(self):
        for m in range(1, 257):
            assert radon_hurwitz(m) == radon_hurwitz_oracle(m)

    def test_sphere_rigidity(self):
        assert sphere_rigidity_threshold(1, 1)
        assert sphere_rigidity_threshold(8, 8)
        assert not sphere_rigidity_threshold(7, 8)
        assert sphere_rigidity_threshold(9, 16)

    @pytest.mark.parametrize("n,want", [(2, 0), (9, 1), (17, 1)])
    def test_nu_n(self, n, want):
        assert nu_n(n) == want

    def test_theorem1_threshold(self):
        assert theorem1_applicable(3, 2)
        assert not theorem1_applicable(2, 2)
        assert theorem1_applicable(6, 3)

    def test_florit_bound(self):
        assert florit_bound(14, 2) == 10
        assert florit_bound(3, 2) == 0

    @pytest.mark.parametrize("n,p,want", [(5, 1, True), (4, 1, False), (14, 2, True)])
    def test_theorem2_values(self, n, p, want):
        assert theorem2_applicable(n, p) is want

    def test_theorem2_chain_at_equality(self):
        for p in range(1, 21):
            n = 2 * p * p + 3 * p
            assert theorem2_applicable(n, p)
            assert theorem1_applicable(florit_bound(n, p), 2 * p)
            # one dimension lower the threshold fails
            assert not theorem2_applicable(n - 1, p)


class TestKernelSearch:
    def test_single_skew_member(self):
        K = np.array([[0.0, 2.0], [-2.0, 0.0]])
        fam = SplittingFamily(basis=(K,), q=2)
        d = find_special_nullity_direction(fam)
        assert d is not None
        np.testing.assert_allclose(np.abs(d.coeffs), [1.0], atol=1e-12)
        assert d.lam == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(d.coeffs[0] * K + d.skew_part, 0.0, atol=1e-12)

    def test_worked_family(self):
        d = find_special_nullity_direction(WORKED_FAMILY)
        assert d is not None
        np.testing.assert_allclose(np.abs(d.coeffs), [0.0, 0.0, 1.0], atol=1e-10)
        assert d.lam == pytest.approx(-1.0, abs=1e-10)
        np.testing.assert_allclose(
            d.skew_part, -np.array([[0.0, 1.0], [-1.0, 0.0]]), atol=1e-10
        )

    def test_independent_family_has_no_direction(self):
        fam = SplittingFamily(
            basis=(
                np.array([[1.0, 0.0], [0.0, -1.0]]),
                np.array([[0.0, 1.0], [1.0, 0.0]]),
            ),
            q=2,
        )
        assert find_special_nullity_direction(fam) is None

    def test_decomposition_residual_and_sign(self, rng):
        for _ in range(100):
            q = int(rng.integers(2, 5))
            nu0 = q * (q + 1) // 2
            fam = SplittingFamily(
                basis=tuple(random_splitting_tensor(rng, q) for _ in range(nu0)), q=q
            )
            d = find_special_nullity_direction(fam)
            assert d is not None
            assert d.lam <= 0.0
            assert abs(np.linalg.norm(d.coeffs) - 1.0) <= 1e-12
            C = fam.evaluate(d.coeffs)
            resid = np.abs(C + d.skew_part + d.lam * np.eye(q)).max()
            assert resid <= 1e-10


class TestTheorem1Pipeline:
    def test_worked_family_decays(self):
        A0 = ShapeOperatorSet((np.array([[1.0, 0.0], [0.0, -1.0]]),))
        # lambda = -1 sits exactly at -sqrt(-c): flagged but still evaluated
        with pytest.warns(UserWarning, match="boundary case"):
            rep = theorem1_pipeline(WORKED_FAMILY, A0, -1.0)
        assert rep.global_alpha_limit is AlphaLimit.ZERO
        t, total, _ = rep.samples[-1]
        assert total <= 1e-6

    def test_zero_family_flat(self):
        fam = SplittingFamily(basis=(np.zeros((2, 2)),), q=2)
        A0 = ShapeOperatorSet((np.diag([1.0, 2.0]),))
        rep = theorem1_pipeline(fam, A0, 0.0)
        assert all(
            b.behavior is BlockBehavior.PARALLEL_CONSTANT for b in rep.per_block
        )

    def test_full_rank_family_raises(self):
        fam = SplittingFamily(
            basis=(
                np.array([[1.0, 0.0], [0.0, -1.0]]),
                np.array([[0.0, 1.0], [1.0, 0.0]]),
            ),
            q=2,
        )
        A0 = ShapeOperatorSet((np.zeros((2, 2)),))
        with pytest.raises(NoDirection):
            theorem1_pipeline(fam, A0, -1.0)


class TestCurvatureBookkeeping:
    def test_totally_geodesic_scalar(self):
        A = ShapeOperatorSet((np.zeros((3, 3)),))
        for c in (-1.0, 0.0, 1.0):
            assert scalar_curvature(A, 3, c) == c

    def test_hyperbolic_cylinder_matches_gauss_oracle(self):
        for k, n, rho in [(1, 2, 1.0), (1, 3, 0.5), (2, 4, 2.0)]:
            lam_s = math.sqrt(1 + rho * rho) / rho
            lam_h = rho / math.sqrt(1 + rho * rho)
            lam = np.array([lam_s] * k + [lam_h] * (n - k))
            A = ShapeOperatorSet((np.diag(lam),))
            s = scalar_curvature(A, n, -1.0)
            pair_sum = sum(
                -1.0 + lam[i] * lam[j] for i in range(n) for j in range(i + 1, n)
            )
            oracle = 2.0 * pair_sum / (n * (n - 1))
            assert s == pytest.approx(oracle, abs=1e-12)

    def test_alpha_vs_mean_curvature_inequality(self, rng):
        # s <= -1 at c = -1 is algebraically the same as the norm inequality
        for _ in range(100):
            n = int(rng.integers(2, 6))
            p = int(rng.integers(1, 4))
            ops = []
            for _ in range(p):
                m = rng.uniform(-1, 1, size=(n, n))
                ops.append(0.5 * (m + m.T))
            A = ShapeOperatorSet(tuple(ops))
            s = scalar_curvature(A, n, -1.0)
            lhs = alpha_norm(A) ** 2
            rhs = (n * mean_curvature_norm(A, n)) ** 2
            assert (s <= -1.0) == (lhs >= rhs)

    def test_minimality_certificate(self):
        n = 2
        decayed = [
            ShapeOperatorSet((np.array([[1.0, 0.2], [0.2, -1.0]]),)),
            ShapeOperatorSet((1e-8 * np.array([[1.0, 0.2], [0.2, -1.0]]),)),
        ]
        assert minimality_certificate(decayed, n) is MinimalityVerdict.MINIMAL

        steady = ShapeOperatorSet((np.diag([0.6, 0.0]),))
        assert (
            minimality_certificate([steady, steady], n)
            is MinimalityVerdict.INCONCLUSIVE
        )

        drifting = [
            ShapeOperatorSet((np.diag([0.6, 0.0]),)),
            ShapeOperatorSet((np.diag([0.4, 0.0]),)),
        ]
        with pytest.raises(InconsistentInput):
            minimality_certificate(drifting, n)

    def test_alpha_operator_norm(self):
        A = ShapeOperatorSet((np.diag([3.0, 1.0]), np.diag([0.0, 4.0])))
        # sum A^2 = diag(9, 17)
        assert alpha_operator_norm(A) == pytest.approx(math.sqrt(17.0), abs=1e-12)


class TestCylinderSplit:
    def test_round_cylinder(self):
        from nullgeo.catalog import circle_line_samples

        samples, leaf_ids = circle_line_samples()
        split = cylinder_split(samples, k=1, leaf_ids=leaf_ids)
        angle = principal_angles(split.V, np.array([[0.0], [0.0], [1.0]])).max()
        assert angle <= 1e-8
        assert split.residual <= 1e-10
        # base points stay on the circle
        for bp in split.base_points:
            assert np.linalg.norm(bp) == pytest.approx(1.0, abs=1e-12)

    def test_plane_degenerates_to_single_base_point(self):
        from nullgeo.catalog import plane_samples

        samples, leaf_ids = plane_samples()
        split = cylinder_split(samples, k=2, leaf_ids=leaf_ids)
        assert split.residual == 0.0
        base = np.array(split.base_points)
        assert np.abs(base - base[0]).max() == 0.0

    def test_cone_is_not_constant(self):
        from nullgeo.catalog import cone_samples

        samples, leaf_ids = cone_samples()
        with pytest.raises(NotConstant):
            cylinder_split(samples, k=1, leaf_ids=leaf_ids)

    def test_leaf_inference(self):
        from nullgeo.catalog import circle_line_samples

        samples, _ = circle_line_samples(n_leaf=4, n_axis=3)
        split = cylinder_split(samples, k=1)
        assert split.residual <= 1e-10


class TestIntegrableConullity:
    def test_sphere_totally_geodesic(self):
        fam = SplittingFamily(basis=(np.diag([0.2, -0.1]),), q=2)
        v = integrable_conullity_classify(1.0, fam)
        assert v.kind == "MustBeTotallyGeodesic"
        assert v.check_passed

    def test_flat_cylinder_requires_zero_family(self):
        fam0 = SplittingFamily(basis=(np.zeros((2, 2)),), q=2)
        v = integrable_conullity_classify(0.0, fam0)
        assert v.kind == "MustBeCylinder" and v.check_passed

        fam1 = SplittingFamily(basis=(np.diag([0.5, 0.0]),), q=2)
        v = integrable_conullity_classify(0.0, fam1)
        assert v.kind == "MustBeCylinder" and not v.check_passed

    def test_hyperbolic_leaf_bound(self):
        good = SplittingFamily(basis=(np.diag([0.5, -0.3]),), q=2)
        v = integrable_conullity_classify(-1.0, good)
        assert v.kind == "LeafBound" and v.check_passed

        bad = SplittingFamily(basis=(np.diag([1.5, 0.0]),), q=2)
        v = integrable_conullity_classify(-1.0, bad)
        assert v.kind == "LeafBound" and not v.check_passed
        assert v.offending == (0,)

    def test_asymmetric_family_rejected(self):
        fam = SplittingFamily(basis=(np.array([[0.0, 1.0], [0.0, 0.0]]),), q=2)
        with pytest.raises(NotIntegrable):
            integrable_conullity_classify(0.0, fam)
