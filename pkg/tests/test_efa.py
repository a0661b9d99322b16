import numpy as np
import pytest

from centrafactor.efa import (
    FactorModel,
    ModelNotFoundError,
    communalities,
    dominant_factor_map,
    fit_factor_model,
    fit_from_eigen,
    initial_loadings,
    retained_factor_count_by_variance,
    varimax,
    varimax_criterion,
)
from centrafactor.linalg import correlation_matrix, jacobi_eigen
from oracles import (
    TOY_EIGENVECTOR_ROWS,
    grid_varimax_best,
    toy_eigenstructure,
)

# Final rotated loadings quoted for the same example network as the
# eigenstructure fixture, rows in (deg, evc, bwc, clc) order.
TOY_FINAL_LOADINGS = np.array(
    [
        [0.7300, 0.6790],
        [0.3430, 0.9390],
        [0.9470, 0.3190],
        [0.7570, 0.6390],
    ]
)


def random_correlation(rng, n_rows=200):
    data = rng.normal(size=(n_rows, 4))
    data[:, 1] += 0.8 * data[:, 0]
    data[:, 3] += 0.5 * data[:, 2]
    return correlation_matrix(data)


class TestRetention:
    def test_toy_eigenvalues_retain_two(self):
        eig = toy_eigenstructure()
        assert retained_factor_count_by_variance(eig.eigenvalues) == 2
        cumulative = (eig.eigenvalues[0] + eig.eigenvalues[1]) / 4.0
        assert abs(cumulative - 0.99335) <= 1e-9

    def test_rank_one_needs_one(self):
        assert retained_factor_count_by_variance((4.0, 0.0, 0.0, 0.0)) == 1

    def test_identity_needs_all(self):
        assert retained_factor_count_by_variance((1.0, 1.0, 1.0, 1.0)) == 4

    def test_threshold_is_parameter(self):
        assert retained_factor_count_by_variance((3.0, 0.6, 0.4, 0.0), 0.75) == 1
        assert retained_factor_count_by_variance((3.0, 0.6, 0.4, 0.0), 0.90) == 2


class TestInitialLoadings:
    def test_scaling_matches_hand_computation(self):
        loadings = initial_loadings(toy_eigenstructure(), 2)
        assert abs(loadings[0, 0] - 0.5256 * np.sqrt(3.5950)) <= 1e-12
        assert np.allclose(loadings[0], [0.9966, -0.0253], atol=1e-4)

    def test_identity_correlation_single_factor(self):
        loadings = initial_loadings(jacobi_eigen(np.eye(4)), 1)
        assert np.allclose(loadings[:, 0], [1.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_full_rank_recovers_unit_communalities(self):
        rng = np.random.default_rng(0)
        corr = random_correlation(rng)
        loadings = initial_loadings(jacobi_eigen(corr), 4)
        assert np.max(np.abs(communalities(loadings) - 1.0)) <= 1e-9

    def test_tiny_negative_eigenvalue_clamps(self):
        eig = jacobi_eigen(np.eye(2))
        object.__setattr__(eig, "eigenvalues", (2.0 - 1e-10, -1e-10))
        loadings = initial_loadings(eig, 2)
        assert loadings[0, 1] == 0.0

    def test_out_of_range_m_rejected(self):
        with pytest.raises(ValueError):
            initial_loadings(toy_eigenstructure(), 5)


class TestCommunalities:
    def test_raw_toy_eigenvector_rows(self):
        scores = communalities(TOY_EIGENVECTOR_ROWS)
        assert np.allclose(scores, [0.2779, 0.7585, 0.6841, 0.2794], atol=1e-4)

    def test_single_unit_row(self):
        assert communalities(np.array([[1.0, 0.0]]))[0] == 1.0

    def test_toy_final_deg_row(self):
        assert abs(communalities(TOY_FINAL_LOADINGS)[0] - 0.9940) <= 1e-4

    def test_retained_sum_matches_eigenvalue_sum(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            eig = jacobi_eigen(random_correlation(rng))
            for m in (1, 2, 3):
                total = communalities(initial_loadings(eig, m)).sum()
                assert abs(total - sum(eig.eigenvalues[:m])) <= 1e-9


class TestVarimax:
    def test_simple_structure_is_fixed_point(self):
        loadings = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        result = varimax(loadings)
        assert np.array_equal(result.loadings, loadings)
        assert np.array_equal(result.rotation, np.eye(2))

    def test_single_factor_returned_unchanged(self):
        loadings = np.array([[0.9], [-0.4], [0.2], [0.6]])
        result = varimax(loadings)
        assert np.array_equal(result.loadings, loadings)
        assert result.rotation.shape == (1, 1)

    @pytest.mark.parametrize("kaiser", [False, True])
    @pytest.mark.parametrize("m", [2, 3])
    def test_rotation_invariants(self, m, kaiser):
        rng = np.random.default_rng(10 * m + kaiser)
        for _ in range(50):
            loadings = rng.normal(size=(4, m))
            result = varimax(loadings, kaiser_normalize=kaiser)
            before = communalities(loadings)
            after = communalities(result.loadings)
            assert np.max(np.abs(after - before)) <= 1e-12
            r = result.rotation
            assert np.max(np.abs(r.T @ r - np.eye(m))) <= 1e-12
            assert np.max(np.abs(loadings @ r - result.loadings)) <= 1e-10
            # monotone in the criterion the mode optimizes: raw loadings,
            # or row-normalized loadings under kaiser normalization
            if kaiser:
                scale = np.sqrt(before)[:, None]
                gained = varimax_criterion(result.loadings / scale)
                started = varimax_criterion(loadings / scale)
            else:
                gained = varimax_criterion(result.loadings)
                started = varimax_criterion(loadings)
            assert gained >= started - 1e-12

    def test_matches_grid_search_on_two_factors(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            loadings = rng.normal(size=(4, 2))
            achieved = varimax_criterion(varimax(loadings).loadings)
            assert abs(achieved - grid_varimax_best(loadings)) <= 1e-6

    def test_columns_sorted_and_sign_canonical(self):
        rng = np.random.default_rng(3)
        result = varimax(rng.normal(size=(4, 3)))
        sums = np.sum(result.loadings**2, axis=0)
        assert list(sums) == sorted(sums, reverse=True)
        for j in range(3):
            lead = int(np.argmax(np.abs(result.loadings[:, j])))
            assert result.loadings[lead, j] > 0

    def test_sweep_budget_exhaustion_warns_not_raises(self):
        rng = np.random.default_rng(4)
        result = varimax(rng.normal(size=(4, 3)), tol=0.0, max_sweeps=2)
        assert result.warnings


class TestDominantFactorMap:
    def test_toy_final_loadings_partition(self):
        mapping = dominant_factor_map(TOY_FINAL_LOADINGS)
        assert mapping == {"deg": [1], "evc": [2], "bwc": [1], "clc": [1]}

    def test_exact_tie_maps_to_both(self):
        mapping = dominant_factor_map(np.array([[0.5, 0.5]]), names=("only",))
        assert mapping == {"only": [1, 2]}

    def test_clear_winner(self):
        mapping = dominant_factor_map(np.array([[0.9, 0.1]]), names=("only",))
        assert mapping == {"only": [1]}

    def test_uses_absolute_loading(self):
        mapping = dominant_factor_map(np.array([[0.3, -0.8]]), names=("only",))
        assert mapping == {"only": [2]}

    def test_invariant_under_signed_column_permutation(self):
        rng = np.random.default_rng(5)
        loadings = rng.normal(size=(4, 3))
        base = dominant_factor_map(loadings)
        for _ in range(20):
            perm = rng.permutation(3)
            signs = rng.choice([-1.0, 1.0], size=3)
            shuffled = loadings[:, perm] * signs
            mapping = dominant_factor_map(shuffled)
            back = {j + 1: int(perm[j]) + 1 for j in range(3)}
            for metric in base:
                assert sorted(back[f] for f in mapping[metric]) == base[metric]


class TestFit:
    def test_toy_eigenstructure_accepts_two_factors(self):
        model = fit_from_eigen(toy_eigenstructure())
        assert model.m == 2
        assert model.variance_retention_m == 2
        assert model.min_communality() >= 0.98
        assert np.allclose(
            model.communalities, [0.9938, 0.9994, 0.9978, 0.9822], atol=2e-3
        )

    def test_all_ones_correlation_is_rank_one(self):
        model = fit_factor_model(np.ones((4, 4)))
        assert model.m == 1
        assert np.allclose(model.communalities, 1.0, atol=1e-9)

    def test_identity_correlation_has_no_model(self):
        with pytest.raises(ModelNotFoundError) as exc_info:
            fit_factor_model(np.eye(4))
        assert len(exc_info.value.communalities) == 4
        assert min(exc_info.value.communalities) < 0.98

    def test_factor_model_round_trips_through_dict(self):
        model = fit_from_eigen(toy_eigenstructure())
        assert FactorModel.from_dict(model.to_dict()) == model

    def test_communality_acceptance_is_rotation_free(self):
        # rotation redistributes loadings without moving any communality,
        # so both kaiser modes must select the same factor count
        rng = np.random.default_rng(6)
        for _ in range(10):
            latent = rng.normal(size=(200, 2))
            mix = rng.normal(size=(2, 4))
            data = latent @ mix + 1e-3 * rng.normal(size=(200, 4))
            corr = correlation_matrix(data)
            plain = fit_factor_model(corr)
            normalized = fit_factor_model(corr, kaiser_normalize=True)
            assert plain.m == normalized.m
            assert np.allclose(plain.communalities, normalized.communalities, atol=1e-9)
