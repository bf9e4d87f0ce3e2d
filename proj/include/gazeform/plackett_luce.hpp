#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gazeform/model.hpp"

namespace gazeform {

// Ballots over one candidate set, as candidate indices. Row b of `orders`
// lists ballot b best first; `candidates` is sorted.
struct RankingData {
    std::string problem_id;
    std::vector<std::string> candidates;
    Eigen::MatrixXi orders;
};

// Throws InputError when the ballots are empty, span several problems, or do
// not share one candidate set.
RankingData index_ballots(std::span<const RankingBallot> ballots);

// Plackett-Luce log-likelihood in log-worth coordinates theta = log w:
//   sum_b sum_i [ theta_{s_b(i)} - log sum_{j >= i} exp(theta_{s_b(j)}) ].
template <typename Derived>
typename Derived::Scalar log_likelihood(const Eigen::MatrixBase<Derived>& theta, const Eigen::MatrixXi& orders) {
    using Scalar = typename Derived::Scalar;
    using std::exp;
    using std::log;
    using std::max;
    Scalar total(0);
    const auto m = orders.cols();
    for (Eigen::Index b = 0; b < orders.rows(); ++b) {
        // Running log-sum-exp over the suffix, built from the back.
        Scalar lse = theta(orders(b, m - 1));
        for (Eigen::Index i = m - 2; i >= 0; --i) {
            const Scalar t = theta(orders(b, i));
            const Scalar hi = max(lse, t);
            lse = hi + log(exp(lse - hi) + exp(t - hi));
            total += t - lse;
        }
    }
    return total;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> grad_log_likelihood(
    const Eigen::MatrixBase<Derived>& theta, const Eigen::MatrixXi& orders) {
    using Scalar = typename Derived::Scalar;
    using std::exp;
    using std::log;
    using std::max;
    const auto m = orders.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grad = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(theta.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> suffix_lse(m);
    for (Eigen::Index b = 0; b < orders.rows(); ++b) {
        suffix_lse(m - 1) = theta(orders(b, m - 1));
        for (Eigen::Index i = m - 2; i >= 0; --i) {
            const Scalar t = theta(orders(b, i));
            const Scalar hi = max(suffix_lse(i + 1), t);
            suffix_lse(i) = hi + log(exp(suffix_lse(i + 1) - hi) + exp(t - hi));
        }
        // The last stage (one item left) contributes nothing.
        for (Eigen::Index i = 0; i + 1 < m; ++i) {
            grad(orders(b, i)) += Scalar(1);
            for (Eigen::Index j = i; j < m; ++j) {
                const auto k = orders(b, j);
                grad(k) -= exp(theta(k) - suffix_lse(i));
            }
        }
    }
    return grad;
}

// Log-likelihood of the ballots under positive worths (any scale).
double log_likelihood(const WorthVector& worths, std::span<const RankingBallot> ballots);

struct FitConfig {
    int max_iters = 10000;
    double step = 0.1;       // initial step; adapted by backtracking
    double grad_tol = 1e-8;  // infinity norm of the penalized gradient
    double ridge = 1e-3;     // Gaussian prior weight on centered log-worths
    std::optional<std::uint64_t> seed;  // unused by the deterministic solver; recorded in reports
};

struct FitResult {
    WorthVector worths;  // normalized, sums to 1
    Eigen::VectorXd theta;  // centered log-worths, same order as worths
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    double log_likelihood = 0.0;
    double initial_log_likelihood = 0.0;
};

// Maximum-likelihood worths by gradient ascent on centered log-worths with an
// Armijo backtracking line search, starting from uniform worths.
FitResult fit_worth(std::span<const RankingBallot> ballots, const FitConfig& config = {});

// Sequential Plackett-Luce sampling without replacement, deterministic per seed.
std::vector<RankingBallot> sample_ballots(const WorthVector& worths, int n, std::uint64_t seed);

struct RankFrequency {
    std::vector<std::string> candidates;
    Eigen::MatrixXi counts;  // candidate x rank (rank 1 first)
};

RankFrequency rank_frequency(std::span<const RankingBallot> ballots);

}  // namespace gazeform
