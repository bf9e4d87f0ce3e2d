#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "gazeform/error.hpp"
#include "gazeform/plackett_luce.hpp"
#include "gazeform/random.hpp"

using namespace gazeform;

namespace {

RankingBallot ballot(std::vector<std::string> order, std::string expert = "e") {
    return {std::move(expert), "S1", std::move(order)};
}

WorthVector worths(std::map<std::string, double> w) { return {"S1", std::move(w), false}; }

Eigen::MatrixXi random_orders(Rng& rng, int ballots, int m) {
    Eigen::MatrixXi orders(ballots, m);
    for (int b = 0; b < ballots; ++b) {
        std::vector<int> perm(static_cast<std::size_t>(m));
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = m - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.uniform_int(0, i))]);
        for (int i = 0; i < m; ++i) orders(b, i) = perm[static_cast<std::size_t>(i)];
    }
    return orders;
}

}  // namespace

TEST(IndexBallots, SortsCandidatesAndRejectsMixedSets) {
    const std::vector<RankingBallot> bs = {ballot({"B", "A", "C"}), ballot({"C", "B", "A"})};
    const auto data = index_ballots(bs);
    EXPECT_EQ(data.candidates, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(data.orders.row(0), (Eigen::RowVector3i(1, 0, 2)));
    EXPECT_THROW(index_ballots({}), InputError);
    const std::vector<RankingBallot> mixed = {ballot({"A", "B"}), ballot({"A", "C"})};
    EXPECT_THROW(index_ballots(mixed), InputError);
    std::vector<RankingBallot> two_problems = {ballot({"A", "B"}), ballot({"A", "B"})};
    two_problems[1].problem_id = "S2";
    EXPECT_THROW(index_ballots(two_problems), InputError);
}

TEST(LogLikelihood, HandValuesAtEqualWorths) {
    Eigen::MatrixXi abc(1, 3);
    abc << 0, 1, 2;
    EXPECT_NEAR(log_likelihood(Eigen::Vector3d::Zero(), abc), std::log(1.0 / 3.0) + std::log(0.5), 1e-15);
    Eigen::MatrixXi ab(1, 2);
    ab << 0, 1;
    EXPECT_NEAR(log_likelihood(Eigen::Vector2d::Zero(), ab), std::log(0.5), 1e-15);
    const auto g = grad_log_likelihood(Eigen::Vector2d::Zero(), ab);
    EXPECT_NEAR(g(0), 0.5, 1e-15);
    EXPECT_NEAR(g(1), -0.5, 1e-15);
}

TEST(LogLikelihood, WorthOverloadIsScaleInvariant) {
    const std::vector<RankingBallot> bs = {ballot({"A", "B", "C"}), ballot({"C", "A", "B"})};
    const double a = log_likelihood(worths({{"A", 0.5}, {"B", 0.3}, {"C", 0.2}}), bs);
    const double b = log_likelihood(worths({{"A", 5.0}, {"B", 3.0}, {"C", 2.0}}), bs);
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_NEAR(a, std::log(0.5) + std::log(0.3 / 0.5) + std::log(0.2) + std::log(0.5 / 0.8), 1e-12);
}

TEST(Gradient, MatchesCentralDifferences) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = rng.uniform_int(2, 6);
        const auto orders = random_orders(rng, rng.uniform_int(1, 20), m);
        Eigen::VectorXd theta(m);
        for (int i = 0; i < m; ++i) theta(i) = rng.normal(0.0, 1.5);
        const Eigen::VectorXd g = grad_log_likelihood(theta, orders);
        EXPECT_NEAR(g.sum(), 0.0, 1e-10);
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd up = theta, down = theta;
            up(i) += 1e-5;
            down(i) -= 1e-5;
            const double fd = (log_likelihood(up, orders) - log_likelihood(down, orders)) / 2e-5;
            EXPECT_LE(std::abs(fd - g(i)), 1e-6 * std::max(1.0, std::abs(g(i))));
        }
    }
}

TEST(Gradient, LikelihoodIsShiftInvariant) {
    Rng rng(37);
    const auto orders = random_orders(rng, 8, 4);
    const Eigen::Vector4d theta(0.3, -1.0, 2.0, 0.1);
    EXPECT_NEAR(log_likelihood(theta, orders), log_likelihood((theta.array() + 3.7).matrix(), orders), 1e-10);
}

TEST(FitWorth, TwoItemClosedForm) {
    for (int k : {1, 2, 3}) {
        std::vector<RankingBallot> bs;
        for (int i = 0; i < 4; ++i) bs.push_back(i < k ? ballot({"A", "B"}) : ballot({"B", "A"}));
        FitConfig cfg;
        cfg.ridge = 0.0;
        const auto fit = fit_worth(bs, cfg);
        EXPECT_TRUE(fit.converged);
        EXPECT_NEAR(fit.worths.worths.at("A"), k / 4.0, 1e-3) << k;
    }
}

// Grid search over w_A for 3 of 5 first places agrees with the fit.
TEST(FitWorth, AgreesWithGridSearch) {
    std::vector<RankingBallot> bs;
    for (int i = 0; i < 5; ++i) bs.push_back(i < 3 ? ballot({"A", "B"}) : ballot({"B", "A"}));
    double best = 0.0, best_ll = -HUGE_VAL;
    for (int i = 1; i < 10000; ++i) {
        const double w = i / 10000.0;
        const double ll = log_likelihood(worths({{"A", w}, {"B", 1.0 - w}}), bs);
        if (ll > best_ll) {
            best_ll = ll;
            best = w;
        }
    }
    FitConfig cfg;
    cfg.ridge = 0.0;
    EXPECT_NEAR(fit_worth(bs, cfg).worths.worths.at("A"), best, 2e-4);
}

TEST(FitWorth, SymmetricBallotsGiveEqualWorths) {
    const std::vector<RankingBallot> bs = {ballot({"A", "B", "C"}), ballot({"B", "C", "A"}), ballot({"C", "A", "B"})};
    const auto fit = fit_worth(bs);
    for (const auto& [id, w] : fit.worths.worths) EXPECT_NEAR(w, 1.0 / 3.0, 1e-8) << id;
    EXPECT_TRUE(fit.worths.normalized);
}

TEST(FitWorth, RecoversSampledWorths) {
    const auto truth = worths({{"A", 0.4}, {"B", 0.3}, {"C", 0.2}, {"D", 0.1}});
    const auto ballots = sample_ballots(truth, 2000, 42);
    const auto fit = fit_worth(ballots);
    EXPECT_TRUE(fit.converged);
    for (const auto& [id, w] : truth.worths) EXPECT_NEAR(fit.worths.worths.at(id), w, 0.02) << id;
    EXPECT_GE(fit.log_likelihood, fit.initial_log_likelihood);
}

TEST(FitWorth, UnanimityConcentratesWorth) {
    std::vector<RankingBallot> bs(50, ballot({"RD", "RC", "RA", "RB"}));
    const auto fit = fit_worth(bs);
    EXPECT_TRUE(fit.converged);
    EXPECT_GT(fit.worths.worths.at("RD"), 0.9);
    double total = 0.0;
    for (const auto& [id, w] : fit.worths.worths) {
        EXPECT_GT(w, 0.0);
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_GT(fit.worths.worths.at("RC"), fit.worths.worths.at("RA"));
    EXPECT_GT(fit.worths.worths.at("RA"), fit.worths.worths.at("RB"));
}

TEST(FitWorth, IterationCapReportsNonConvergence) {
    const auto bs = sample_ballots(worths({{"A", 0.7}, {"B", 0.2}, {"C", 0.1}}), 50, 1);
    FitConfig cfg;
    cfg.max_iters = 1;
    const auto fit = fit_worth(bs, cfg);
    EXPECT_FALSE(fit.converged);
    EXPECT_EQ(fit.iterations, 1);
}

TEST(SampleBallots, DeterministicAndValid) {
    const auto w = worths({{"A", 0.5}, {"B", 0.25}, {"C", 0.25}});
    const auto a = sample_ballots(w, 100, 9);
    EXPECT_EQ(a, sample_ballots(w, 100, 9));
    EXPECT_NE(a, sample_ballots(w, 100, 10));
    for (const auto& b : a) EXPECT_NO_THROW(check_permutation(b.order, {"A", "B", "C"}));
}

TEST(SampleBallots, FirstPlaceFrequencyMatchesWorth) {
    const auto bs = sample_ballots(worths({{"A", 0.5}, {"B", 0.3}, {"C", 0.2}}), 10000, 3);
    const double first_a =
        static_cast<double>(std::count_if(bs.begin(), bs.end(), [](const auto& b) { return b.order[0] == "A"; })) /
        10000.0;
    EXPECT_NEAR(first_a, 0.5, 0.02);
}

TEST(RankFrequency, ColumnsAndRowsSumToBallotCount) {
    const auto bs = sample_ballots(worths({{"A", 0.4}, {"B", 0.3}, {"C", 0.2}, {"D", 0.1}}), 77, 5);
    const auto rf = rank_frequency(bs);
    EXPECT_EQ(rf.candidates, (std::vector<std::string>{"A", "B", "C", "D"}));
    EXPECT_TRUE((rf.counts.colwise().sum().array() == 77).all());
    EXPECT_TRUE((rf.counts.rowwise().sum().array() == 77).all());
}
