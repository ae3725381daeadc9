"""Tests for the stats package."""

import math

import numpy as np
import pytest
from scipy import stats as sps

from wagerbench.stats import (
    DistKind,
    EffectKind,
    StatsError,
    anova_from_summary,
    bonferroni_adjust,
    bonferroni_threshold,
    chi_square_independence,
    cohens_d_avgvar,
    cramers_v,
    describe,
    dist_cdf,
    dist_sf,
    format_p,
    interpret_effect,
    kruskal_wallis,
    mann_whitney_u,
    one_way_anova,
    pearson,
    point_biserial,
    rank_with_ties,
    spearman,
    spearman_no_ties,
)


@pytest.fixture
def rng():
    """Seeded generator shared by the randomized checks."""
    return np.random.default_rng(20240611)


class TestRanks:
    def test_distinct_values(self):
        assert rank_with_ties([10, 20, 30]) == [1, 2, 3]

    def test_ties_share_mean_rank(self):
        assert rank_with_ties([10, 20, 20, 30]) == [1, 2.5, 2.5, 4]

    def test_all_equal(self):
        assert rank_with_ties([7, 7, 7]) == [2, 2, 2]

    def test_rank_sum_identity(self, rng):
        values = rng.integers(0, 5, size=40).tolist()
        n = len(values)
        assert sum(rank_with_ties(values)) == n * (n + 1) / 2

    def test_empty_rejected(self):
        with pytest.raises(StatsError):
            rank_with_ties([])


class TestMannWhitney:
    def test_complete_separation(self):
        result = mann_whitney_u([1, 2, 3], [4, 5, 6])
        assert result.statistic == 0
        assert result.effect_size == 1.0
        assert result.effect_kind == EffectKind.RANK_BISERIAL

    def test_identical_samples_split_ties(self):
        result = mann_whitney_u([1, 2], [1, 2])
        assert result.statistic == 2.0
        assert result.effect_size == 0.0

    def test_large_samples_fully_separated(self):
        result = mann_whitney_u(list(range(1, 151)), list(range(151, 301)))
        assert result.statistic == 0
        assert result.effect_size == 1.0
        assert result.p_value < 2.2e-16

    def test_u_of_1113_gives_r_0_901(self):
        b = [2 * j for j in range(150)]
        a = [15] * 63 + [13] * 87
        result = mann_whitney_u(a, b)
        assert result.statistic == pytest.approx(1113.0)
        assert result.effect_size == pytest.approx(0.901, abs=0.001)

    def test_u1_plus_u2(self, rng):
        for _ in range(200):
            a = rng.integers(0, 6, size=rng.integers(1, 9)).tolist()
            b = rng.integers(0, 6, size=rng.integers(1, 9)).tolist()
            u1 = mann_whitney_u(a, b).statistic
            u2 = mann_whitney_u(b, a).statistic
            assert u1 + u2 == len(a) * len(b)

    def test_abs_r_is_one_only_when_separated(self, rng):
        for _ in range(200):
            a = rng.integers(0, 10, size=4).tolist()
            b = rng.integers(0, 10, size=5).tolist()
            r = mann_whitney_u(a, b).effect_size
            separated = max(a) < min(b) or min(a) > max(b)
            assert (abs(r) == 1.0) == separated

    def test_exact_matches_scipy(self, rng):
        for _ in range(50):
            n1, n2 = rng.integers(2, 9, size=2)
            pool = rng.permutation(n1 + n2).tolist()
            a, b = pool[:n1], pool[n1:]
            ours = mann_whitney_u(a, b)
            ref = sps.mannwhitneyu(a, b, alternative="two-sided", method="exact")
            assert "exact distribution" in ours.method_notes
            assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)

    def test_asymptotic_matches_scipy_with_ties(self, rng):
        a = rng.integers(0, 20, size=60).tolist()
        b = rng.integers(5, 25, size=45).tolist()
        ours = mann_whitney_u(a, b)
        ref = sps.mannwhitneyu(
            a, b, alternative="two-sided", method="asymptotic", use_continuity=True
        )
        assert ours.statistic == pytest.approx(ref.statistic)
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-10)
        assert "tie-corrected variance" in ours.method_notes

    def test_approximation_close_to_exact_for_small_samples(self, rng):
        # agreement within 0.02 holds once both samples have at least five values
        for _ in range(1000):
            n1, n2 = rng.integers(5, 9, size=2)
            pool = rng.permutation(n1 + n2).tolist()
            a, b = pool[:n1], pool[n1:]
            exact = mann_whitney_u(a, b, method="exact").p_value
            approx = mann_whitney_u(a, b, method="asymptotic").p_value
            assert abs(exact - approx) <= 0.02

    def test_exact_with_ties_rejected(self):
        with pytest.raises(StatsError):
            mann_whitney_u([1, 1, 2], [2, 3], method="exact")

    def test_empty_sample(self):
        with pytest.raises(StatsError):
            mann_whitney_u([], [1, 2])


class TestKruskalWallis:
    def test_separated_groups(self):
        result = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert result.statistic == pytest.approx(7.2, abs=1e-9)
        assert result.df == (2,)

    def test_two_groups(self):
        assert kruskal_wallis([[1, 2], [3, 4]]).statistic == pytest.approx(2.4, abs=1e-9)

    def test_identical_values(self):
        result = kruskal_wallis([[5, 5], [5, 5, 5], [5]])
        assert result.statistic == 0.0
        assert result.p_value == 1.0

    def test_matches_scipy(self, rng):
        groups = [rng.integers(0, 30, size=n).tolist() for n in (20, 35, 28)]
        ours = kruskal_wallis(groups)
        ref = sps.kruskal(*groups)
        assert ours.statistic == pytest.approx(ref.statistic, rel=1e-10)
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-10)

    def test_invariant_under_monotone_transform(self, rng):
        groups = [rng.normal(size=15).tolist() for _ in range(3)]
        transformed = [[math.exp(x) * 3 + 1 for x in g] for g in groups]
        assert kruskal_wallis(groups).statistic == pytest.approx(
            kruskal_wallis(transformed).statistic, abs=1e-12
        )

    def test_needs_two_groups(self):
        with pytest.raises(StatsError):
            kruskal_wallis([[1, 2, 3]])


class TestAnova:
    def test_equal_means(self):
        assert one_way_anova([[1, 2, 3], [2, 1, 3]]).statistic == 0.0

    def test_matches_scipy(self, rng):
        groups = [rng.normal(loc, 1.0, size=25).tolist() for loc in (0.0, 0.3, 0.8)]
        ours = one_way_anova(groups)
        ref = sps.f_oneway(*groups)
        assert ours.statistic == pytest.approx(ref.statistic, rel=1e-10)
        assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-10)

    def test_two_groups_equal_pooled_t_squared(self, rng):
        for _ in range(20):
            a = rng.normal(size=12).tolist()
            b = rng.normal(0.5, 1.0, size=9).tolist()
            t = sps.ttest_ind(a, b, equal_var=True).statistic
            assert one_way_anova([a, b]).statistic == pytest.approx(t ** 2, rel=1e-10)

    def test_risk_table_from_summary(self):
        result = anova_from_summary(
            [17.53, 40.23, 63.36], [14.45, 9.63, 5.94], [166, 1175, 5609]
        )
        assert result.statistic == pytest.approx(8175.6, rel=0.005)
        assert result.df == (2, 6947)
        assert result.p_value < 1e-16

    def test_summary_matches_raw(self, rng):
        groups = [rng.normal(loc, 2.0, size=30) for loc in (1.0, 2.0)]
        raw = one_way_anova([g.tolist() for g in groups])
        summary = anova_from_summary(
            [g.mean() for g in groups], [g.std(ddof=1) for g in groups], [30, 30]
        )
        assert summary.statistic == pytest.approx(raw.statistic, rel=1e-9)

    @pytest.mark.parametrize("groups", [
        [[1, 1, 1], [2, 2, 2]],
        [[0.1] * 3, [0.3] * 3, [0.7] * 3],
        [[1e6 + 0.1] * 4, [1e6 + 0.2] * 4],
    ])
    def test_zero_within_variance(self, groups):
        result = one_way_anova(groups)
        assert result.p_value == 0.0
        assert math.isinf(result.statistic)
        assert result.method_notes

    def test_identical_constant_groups(self):
        result = one_way_anova([[0.1] * 3, [0.1] * 3, [0.1] * 3])
        assert result.statistic == 0.0
        assert result.p_value == 1.0
        assert result.effect_size == 0.0
        assert result.method_notes == ("no variance in any group",)

    def test_summary_with_vanishing_sds(self):
        result = anova_from_summary([0.1, 0.3, 0.7], [1e-18, 1e-18, 1e-18], [3, 3, 3])
        assert math.isinf(result.statistic)
        assert result.p_value == 0.0
        assert result.method_notes

    def test_small_real_spread_is_not_rounding(self):
        result = one_way_anova([[0.1, 0.1 + 1e-6, 0.1 - 1e-6], [0.3, 0.3 + 1e-6, 0.3 - 1e-6]])
        assert math.isfinite(result.statistic)
        assert result.method_notes == ()
        assert result.p_value < 1e-10

    def test_summary_needs_two_per_group(self):
        with pytest.raises(StatsError):
            anova_from_summary([1.0, 2.0], [1.0, 1.0], [1, 5])


class TestCohensD:
    @pytest.mark.parametrize(
        "first, second, expected",
        [
            ((17.53, 14.45), (40.23, 9.63), 1.849),
            ((17.53, 14.45), (63.36, 5.94), 4.149),
            ((40.23, 9.63), (63.36, 5.94), 2.891),
        ],
    )
    def test_risk_table_values(self, first, second, expected):
        assert cohens_d_avgvar(*first, *second) == pytest.approx(expected, abs=0.005)

    def test_equal_means(self):
        assert cohens_d_avgvar(3.0, 1.0, 3.0, 2.0) == 0.0

    def test_both_sds_zero(self):
        with pytest.raises(StatsError):
            cohens_d_avgvar(1.0, 0.0, 2.0, 0.0)


class TestCorrelations:
    def test_point_biserial_by_hand(self):
        result = point_biserial([1, 2, 3, 4], [0, 0, 1, 1])
        assert result.effect_size == pytest.approx(0.894427191, abs=1e-9)

    def test_point_biserial_antisymmetric(self, rng):
        values = rng.normal(size=30).tolist()
        flags = [int(x) for x in rng.integers(0, 2, size=30)]
        flags[0], flags[1] = 0, 1
        flipped = [1 - f for f in flags]
        assert point_biserial(values, flipped).effect_size == pytest.approx(
            -point_biserial(values, flags).effect_size, abs=1e-12
        )

    def test_point_biserial_equals_pearson(self, rng):
        for _ in range(50):
            values = rng.normal(size=25).tolist()
            flags = [0] * 12 + [1] * 13
            assert abs(
                point_biserial(values, flags).effect_size - pearson(values, flags).effect_size
            ) < 1e-12

    def test_point_biserial_constant_values(self):
        with pytest.raises(StatsError):
            point_biserial([3, 3, 3, 3], [0, 1, 0, 1])

    def test_point_biserial_single_class(self):
        with pytest.raises(StatsError):
            point_biserial([1, 2, 3], [1, 1, 1])

    def test_pearson_matches_scipy(self, rng):
        x = rng.normal(size=40)
        y = 0.3 * x + rng.normal(size=40)
        ours = pearson(x.tolist(), y.tolist())
        ref = sps.pearsonr(x, y)
        assert ours.statistic == pytest.approx(ref[0], abs=1e-12)
        assert ours.p_value == pytest.approx(ref[1], abs=1e-10)

    def test_spearman_examples(self):
        assert spearman([1, 2, 3, 4], [2, 4, 6, 8]).effect_size == pytest.approx(1.0)
        assert spearman([1, 2, 3, 4], [8, 6, 4, 2]).effect_size == pytest.approx(-1.0)
        assert spearman([1, 2, 3], [3, 1, 2]).effect_size == pytest.approx(-0.5)
        assert spearman_no_ties([1, 2, 3], [3, 1, 2]) == pytest.approx(-0.5)

    def test_spearman_is_pearson_on_ranks(self, rng):
        for _ in range(50):
            x = rng.integers(0, 6, size=20).tolist()
            y = rng.integers(0, 6, size=20).tolist()
            if len(set(x)) < 2 or len(set(y)) < 2:
                continue
            expected = pearson(rank_with_ties(x), rank_with_ties(y)).effect_size
            assert abs(spearman(x, y).effect_size - expected) < 1e-12

    def test_spearman_matches_scipy(self, rng):
        x = rng.integers(0, 10, size=50)
        y = x + rng.integers(0, 5, size=50)
        ours = spearman(x.tolist(), y.tolist())
        ref = sps.spearmanr(x, y)
        assert ours.effect_size == pytest.approx(ref[0], abs=1e-12)
        assert ours.p_value == pytest.approx(ref[1], abs=1e-10)

    def test_spearman_constant_input(self):
        with pytest.raises(StatsError):
            spearman([1, 1, 1], [1, 2, 3])


class TestChiSquare:
    def test_independent_table(self):
        result = chi_square_independence([[10, 10], [10, 10]])
        assert result.statistic == 0.0
        assert result.effect_size == 0.0

    def test_perfect_association(self):
        result = chi_square_independence([[20, 0], [0, 20]])
        assert result.statistic == pytest.approx(40.0)
        assert result.effect_size == pytest.approx(1.0)

    def test_cramers_v_from_chi_square_summary(self):
        assert cramers_v(3205.43, 6950, 5, 4) == pytest.approx(0.392, abs=0.001)

    def test_zero_row_dropped(self):
        result = chi_square_independence([[5, 7, 3], [0, 0, 0], [8, 2, 6]])
        assert result.df == (2,)
        assert any("row" in note for note in result.method_notes)

    def test_matches_scipy(self):
        table = [[30, 12, 5, 3], [8, 40, 10, 2], [4, 9, 33, 20]]
        ours = chi_square_independence(table)
        chi2, p, dof, _ = sps.chi2_contingency(table, correction=False)
        assert ours.statistic == pytest.approx(chi2, rel=1e-12)
        assert ours.p_value == pytest.approx(p, abs=1e-12)
        assert ours.df == (dof,)

    def test_degenerate_table(self):
        with pytest.raises(StatsError):
            chi_square_independence([[5, 0], [7, 0]])


class TestDistributions:
    def test_symmetry_points(self):
        assert dist_cdf(DistKind.NORMAL, 0.0) == 0.5
        assert dist_cdf(DistKind.STUDENT_T, 0.0, 10) == 0.5

    def test_chi_square_critical_value(self):
        assert dist_cdf(DistKind.CHI_SQUARE, 3.841, 1) == pytest.approx(0.950, abs=1e-3)

    def test_normal_grid(self):
        grid = np.linspace(-8, 8, 1000)
        ours = [dist_cdf(DistKind.NORMAL, x) for x in grid]
        assert np.max(np.abs(np.array(ours) - sps.norm.cdf(grid))) <= 1e-10

    @pytest.mark.parametrize("df", [1, 2, 5, 12, 50])
    def test_chi_square_grid(self, df):
        grid = np.linspace(0.01, 120, 1000)
        ours = np.array([dist_cdf(DistKind.CHI_SQUARE, x, df) for x in grid])
        assert np.max(np.abs(ours - sps.chi2.cdf(grid, df))) <= 1e-8
        assert np.all(np.diff(ours) >= -1e-12)

    @pytest.mark.parametrize("df", [1, 3, 10, 30, 148])
    def test_student_t_grid(self, df):
        grid = np.linspace(-20, 20, 1000)
        ours = np.array([dist_cdf(DistKind.STUDENT_T, x, df) for x in grid])
        assert np.max(np.abs(ours - sps.t.cdf(grid, df))) <= 1e-8
        assert np.all(np.diff(ours) >= -1e-12)

    @pytest.mark.parametrize("df1, df2", [(1, 1), (2, 10), (3, 30), (2, 6947)])
    def test_f_grid(self, df1, df2):
        grid = np.linspace(0.001, 25, 1000)
        ours = np.array([dist_cdf(DistKind.F, x, df1, df2) for x in grid])
        assert np.max(np.abs(ours - sps.f.cdf(grid, df1, df2))) <= 1e-8
        assert np.all(np.diff(ours) >= -1e-12)

    def test_survival_keeps_tiny_tails(self):
        assert dist_sf(DistKind.CHI_SQUARE, 200.0, 2) == pytest.approx(
            sps.chi2.sf(200.0, 2), rel=1e-8
        )
        assert dist_sf(DistKind.NORMAL, 10.0) == pytest.approx(sps.norm.sf(10.0), rel=1e-10)

    def test_invalid_df(self):
        with pytest.raises(StatsError):
            dist_cdf(DistKind.CHI_SQUARE, 1.0, 0)
        with pytest.raises(StatsError):
            dist_cdf(DistKind.F, 1.0, 2)


class TestBonferroniAndFormatting:
    def test_threshold(self):
        assert bonferroni_threshold(0.05, 3) == pytest.approx(0.0167, abs=1e-4)

    def test_adjust(self):
        assert bonferroni_adjust(0.4, 3) == 1.0
        assert bonferroni_adjust(0.01, 1) == 0.01
        assert bonferroni_adjust(0.01, 3) == pytest.approx(0.03)

    def test_p_floor(self):
        assert format_p(1e-40) == "p < 2.2e-16"
        assert format_p(0.0123) == "p = 0.0123"
        assert format_p(None) == "n/a"

    def test_effect_labels(self):
        assert interpret_effect(EffectKind.COHENS_D, 1.849) == "very large"
        assert interpret_effect(EffectKind.COHENS_D, 0.1) == "negligible"
        assert interpret_effect(EffectKind.RANK_BISERIAL, -0.369) == "medium"
        assert interpret_effect(EffectKind.CRAMERS_V, 0.392, k=3) == "large"
        assert interpret_effect(EffectKind.SPEARMAN_RHO, None) == "undefined"


class TestDescribe:
    def test_summary(self):
        summary = describe([1, 2, 3, 4])
        assert summary.n == 4
        assert summary.mean == 2.5
        assert summary.median == 2.5
        assert summary.sd == pytest.approx(1.2909944, abs=1e-6)

    def test_single_value_has_no_sd(self):
        assert describe([5]).sd is None

    def test_empty(self):
        assert describe([]).n == 0
