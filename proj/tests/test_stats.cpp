#include <cmath>

#include <gtest/gtest.h>

#include "gazeform/random.hpp"
#include "gazeform/stats.hpp"

using namespace gazeform;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

}  // namespace

// Reference values from scipy.special.betainc and scipy.stats.t.sf.
TEST(IncompleteBeta, MatchesReferenceValues) {
    EXPECT_NEAR(regularized_incomplete_beta(2.5, 3.5, 0.3), 0.29675298929566646, 1e-12);
    EXPECT_NEAR(regularized_incomplete_beta(0.5, 0.5, 0.9), 0.7951672353008665, 1e-12);
    EXPECT_NEAR(regularized_incomplete_beta(10, 20, 0.4), 0.7853183897628262, 1e-12);
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(3, 4, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(regularized_incomplete_beta(3, 4, 1.0), 1.0);
}

TEST(IncompleteBeta, SymmetryRelation) {
    for (double x : {0.05, 0.3, 0.5, 0.77, 0.99}) {
        EXPECT_NEAR(regularized_incomplete_beta(2.0, 7.5, x), 1.0 - regularized_incomplete_beta(7.5, 2.0, 1.0 - x),
                    1e-13);
    }
}

TEST(StudentT, TwoTailedReferenceValues) {
    EXPECT_NEAR(student_t_two_tailed(2.0, 10), 0.07338803477074039, 1e-12);
    EXPECT_NEAR(student_t_two_tailed(3.083, 148), 0.0024450866113643337, 1e-12);
    EXPECT_NEAR(student_t_two_tailed(0.5, 3.7), 0.645335633319932, 1e-12);
    EXPECT_NEAR(student_t_two_tailed(10, 2), 0.009852457023325692, 1e-12);
    EXPECT_NEAR(student_t_two_tailed(1, 1), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(student_t_two_tailed(0.0, 5), 1.0);
    EXPECT_DOUBLE_EQ(student_t_two_tailed(-2.0, 10), student_t_two_tailed(2.0, 10));
}

TEST(Pearson, ReferenceValue) {
    const auto res = pearson(vec({1.2, 2.3, 2.9, 4.1, 5.6, 6.0}), vec({2.0, 2.9, 3.1, 5.2, 5.0, 7.7}));
    EXPECT_NEAR(res.r, 0.9255486764724223, 1e-12);
    EXPECT_NEAR(res.p_two_tailed, 0.008108157535175985, 1e-12);
    EXPECT_EQ(res.n, 6u);
}

TEST(Pearson, PerfectLinesGivePlusMinusOne) {
    const auto x = vec({1, 2, 3, 4, 5});
    EXPECT_NEAR(pearson(x, (2.0 * x.array() + 1.0).matrix()).r, 1.0, 1e-15);
    EXPECT_NEAR(pearson(x, (-3.0 * x.array() + 7.0).matrix()).r, -1.0, 1e-15);
    EXPECT_DOUBLE_EQ(pearson(x, (2.0 * x.array()).matrix()).p_two_tailed, 0.0);
}

TEST(Pearson, InvariantUnderPositiveAffineMapsAndSymmetric) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(3, 40);
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x(i) = rng.normal();
            y(i) = 0.4 * x(i) + rng.normal();
        }
        const double r = pearson(x, y).r;
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        EXPECT_NEAR(pearson(y, x).r, r, 1e-12);
        const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-5.0, 5.0);
        EXPECT_NEAR(pearson((a * x.array() + b).matrix(), y).r, r, 1e-10);
        EXPECT_NEAR(pearson((-a * x.array() + b).matrix(), y).r, -r, 1e-10);
    }
}

TEST(Pearson, DegenerateInputs) {
    EXPECT_THROW(pearson(vec({1, 2}), vec({3, 4})), DegenerateError);
    EXPECT_THROW(pearson(vec({1, 1, 1}), vec({3, 4, 5})), DegenerateError);
    EXPECT_THROW(pearson(vec({1, 2, 3}), vec({3, 4})), InputError);
}

TEST(TwoSampleT, WelchAndPooledReferenceValues) {
    const auto a = vec({3.1, 4.5, 2.2, 5.0});
    const auto b = vec({1.0, 2.5, 1.9});
    const auto welch = two_sample_t(a, b, TTestVariant::welch);
    EXPECT_NEAR(welch.t_stat, 2.4494897427831783, 1e-12);
    EXPECT_NEAR(welch.df, 4.856502242152467, 1e-12);
    EXPECT_NEAR(welch.p_two_tailed, 0.059435897783807624, 1e-12);
    const auto pooled = two_sample_t(a, b, TTestVariant::pooled);
    EXPECT_NEAR(pooled.t_stat, 2.255944528193394, 1e-12);
    EXPECT_DOUBLE_EQ(pooled.df, 5.0);
    EXPECT_NEAR(pooled.p_two_tailed, 0.07372542966709288, 1e-12);
}

// Means 10 and 5, both sample variances 2: t = 5 / sqrt(2/2 + 2/2), df = 2.
TEST(TwoSampleT, HandOracle) {
    const auto res = two_sample_t(vec({9, 11}), vec({4, 6}));
    EXPECT_NEAR(res.t_stat, 5.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(res.df, 2.0, 1e-12);
    EXPECT_NEAR(res.p_two_tailed, 0.0715233, 1e-6);
    EXPECT_DOUBLE_EQ(res.mean_high, 10.0);
    EXPECT_DOUBLE_EQ(res.mean_low, 5.0);
}

TEST(TwoSampleT, IdenticalGroupsGiveZero) {
    const auto a = vec({1, 4, 2, 8});
    const auto res = two_sample_t(a, a);
    EXPECT_DOUBLE_EQ(res.t_stat, 0.0);
    EXPECT_DOUBLE_EQ(res.p_two_tailed, 1.0);
}

TEST(TwoSampleT, ZeroVarianceConvention) {
    const auto hi = two_sample_t(vec({2, 2}), vec({1, 1}));
    EXPECT_EQ(hi.t_stat, HUGE_VAL);
    EXPECT_DOUBLE_EQ(hi.p_two_tailed, 0.0);
    const auto same = two_sample_t(vec({1, 1}), vec({1, 1}));
    EXPECT_DOUBLE_EQ(same.t_stat, 0.0);
    EXPECT_DOUBLE_EQ(same.p_two_tailed, 1.0);
}

TEST(TwoSampleT, TooSmallGroupsAreDegenerate) {
    EXPECT_THROW(two_sample_t(vec({1}), vec({1, 2, 3})), DegenerateError);
}

TEST(MedianSplit, SplitsAtTheMedianRating) {
    // Median rating 3; images rated above go to the high group.
    const auto res = median_split_ttest(vec({1, 2, 3, 4, 5, 5}), vec({1, 2, 2, 9, 11, 10}));
    EXPECT_EQ(res.n_high, 3u);
    EXPECT_EQ(res.n_low, 3u);
    EXPECT_DOUBLE_EQ(res.mean_high, 10.0);
    EXPECT_GT(res.t_stat, 0.0);
}

TEST(MedianSplit, EmptyGroupIsDegenerate) {
    EXPECT_THROW(median_split_ttest(vec({3, 3, 3, 3}), vec({1, 2, 3, 4})), DegenerateError);
}

TEST(Median, OddEvenAndEmpty) {
    EXPECT_DOUBLE_EQ(median(vec({3, 1, 2})), 2.0);
    EXPECT_DOUBLE_EQ(median(vec({4, 1, 3, 2})), 2.5);
    EXPECT_THROW(median(Eigen::VectorXd()), DegenerateError);
}
