#include "gazeform/plackett_luce.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gazeform/error.hpp"

namespace gazeform {

namespace {

double penalized(const Eigen::VectorXd& theta, const Eigen::MatrixXi& orders, double ridge) {
    const Eigen::VectorXd centered = theta.array() - theta.mean();
    return log_likelihood(theta, orders) - 0.5 * ridge * centered.squaredNorm();
}

Eigen::VectorXd penalized_grad(const Eigen::VectorXd& theta, const Eigen::MatrixXi& orders, double ridge) {
    const Eigen::VectorXd centered = theta.array() - theta.mean();
    return grad_log_likelihood(theta, orders) - ridge * centered;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& theta) {
    const Eigen::VectorXd e = (theta.array() - theta.maxCoeff()).exp();
    return e / e.sum();
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

RankingData index_ballots(std::span<const RankingBallot> ballots) {
    if (ballots.empty()) throw InputError("no ballots");
    RankingData data;
    data.problem_id = ballots.front().problem_id;
    const std::set<std::string> candidates(ballots.front().order.begin(), ballots.front().order.end());
    data.candidates.assign(candidates.begin(), candidates.end());
    const auto m = static_cast<Eigen::Index>(data.candidates.size());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < data.candidates.size(); ++i) index[data.candidates[i]] = static_cast<int>(i);

    data.orders.resize(static_cast<Eigen::Index>(ballots.size()), m);
    for (std::size_t b = 0; b < ballots.size(); ++b) {
        if (ballots[b].problem_id != data.problem_id) {
            throw InputError("ballots mix problems '" + data.problem_id + "' and '" + ballots[b].problem_id + "'");
        }
        check_permutation(ballots[b].order, candidates);
        for (Eigen::Index i = 0; i < m; ++i) {
            data.orders(static_cast<Eigen::Index>(b), i) = index.at(ballots[b].order[static_cast<std::size_t>(i)]);
        }
    }
    return data;
}

double log_likelihood(const WorthVector& worths, std::span<const RankingBallot> ballots) {
    const auto data = index_ballots(ballots);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(data.candidates.size()));
    for (std::size_t i = 0; i < data.candidates.size(); ++i) {
        auto it = worths.worths.find(data.candidates[i]);
        if (it == worths.worths.end()) throw InputError("no worth for candidate '" + data.candidates[i] + "'");
        if (!(it->second > 0.0)) throw InputError("worth of '" + data.candidates[i] + "' must be positive");
        theta(static_cast<Eigen::Index>(i)) = std::log(it->second);
    }
    return log_likelihood(theta, data.orders);
}

FitResult fit_worth(std::span<const RankingBallot> ballots, const FitConfig& config) {
    if (config.max_iters <= 0 || !(config.step > 0.0) || !(config.grad_tol > 0.0) || config.ridge < 0.0) {
        throw InputError("invalid fit configuration");
    }
    const auto data = index_ballots(ballots);
    const auto m = static_cast<Eigen::Index>(data.candidates.size());
    if (m < 2) throw InputError("fit needs at least two candidates");

    constexpr double kArmijo = 1e-4;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    double objective = penalized(theta, data.orders, config.ridge);
    double step = config.step;

    FitResult res;
    res.initial_log_likelihood = log_likelihood(theta, data.orders);
    Eigen::VectorXd grad = penalized_grad(theta, data.orders, config.ridge);
    int it = 0;
    for (; it < config.max_iters; ++it) {
        res.grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (res.grad_norm < config.grad_tol) {
            res.converged = true;
            break;
        }
        const double slope = grad.squaredNorm();
        // Objective changes below this are rounding noise; there the slope at
        // the trial point decides instead of the function values.
        const double noise = 1e-12 * (1.0 + std::fabs(objective));
        double t = step;
        Eigen::VectorXd candidate;
        Eigen::VectorXd cand_grad;
        double cand_obj = 0.0;
        bool accepted = false;
        while (t > 1e-300) {
            candidate = theta + t * grad;
            candidate.array() -= candidate.mean();
            cand_obj = penalized(candidate, data.orders, config.ridge);
            if (cand_obj >= objective + kArmijo * t * slope) {
                accepted = true;
                break;
            }
            if (cand_obj >= objective - noise) {
                cand_grad = penalized_grad(candidate, data.orders, config.ridge);
                if (cand_grad.dot(grad) >= -(1.0 - 2.0 * kArmijo) * slope) {
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no ascent direction left at machine precision
        if (cand_grad.size() == 0) cand_grad = penalized_grad(candidate, data.orders, config.ridge);
        // Spectral trial step from the last displacement and gradient change.
        const Eigen::VectorXd s_k = candidate - theta;
        const Eigen::VectorXd y_k = cand_grad - grad;
        const double sy = -s_k.dot(y_k);
        step = sy > 0.0 ? std::clamp(s_k.squaredNorm() / sy, 1e-10, 1e10) : 2.0 * t;
        theta = std::move(candidate);
        objective = cand_obj;
        grad = std::move(cand_grad);
    }
    res.iterations = it;
    res.grad_norm = grad.lpNorm<Eigen::Infinity>();
    res.converged = res.grad_norm < config.grad_tol;
    res.theta = theta;
    res.log_likelihood = log_likelihood(theta, data.orders);

    const Eigen::VectorXd w = softmax(theta);
    res.worths.problem_id = data.problem_id;
    res.worths.normalized = true;
    for (Eigen::Index i = 0; i < m; ++i) res.worths.worths[data.candidates[static_cast<std::size_t>(i)]] = w(i);
    return res;
}

std::vector<RankingBallot> sample_ballots(const WorthVector& worths, int n, std::uint64_t seed) {
    if (n < 1) throw InputError("sample count must be at least 1");
    if (worths.worths.size() < 2) throw InputError("sampling needs at least two candidates");
    std::vector<std::string> names;
    std::vector<double> w;
    for (const auto& [name, value] : worths.worths) {
        if (!(value > 0.0)) throw InputError("worth of '" + name + "' must be positive");
        names.push_back(name);
        w.push_back(value);
    }
    std::mt19937_64 rng(seed);
    std::vector<RankingBallot> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
        RankingBallot ballot;
        ballot.expert_id = "s" + std::to_string(b + 1);
        ballot.problem_id = worths.problem_id;
        std::vector<std::size_t> remaining(names.size());
        for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
        while (!remaining.empty()) {
            double total = 0.0;
            for (auto i : remaining) total += w[i];
            const double u = unit_uniform(rng) * total;
            double acc = 0.0;
            std::size_t pick = remaining.size() - 1;
            for (std::size_t j = 0; j < remaining.size(); ++j) {
                acc += w[remaining[j]];
                if (u < acc) {
                    pick = j;
                    break;
                }
            }
            ballot.order.push_back(names[remaining[pick]]);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        out.push_back(std::move(ballot));
    }
    return out;
}

RankFrequency rank_frequency(std::span<const RankingBallot> ballots) {
    const auto data = index_ballots(ballots);
    RankFrequency rf;
    rf.candidates = data.candidates;
    const auto m = static_cast<Eigen::Index>(data.candidates.size());
    rf.counts = Eigen::MatrixXi::Zero(m, m);
    for (Eigen::Index b = 0; b < data.orders.rows(); ++b) {
        for (Eigen::Index r = 0; r < m; ++r) rf.counts(data.orders(b, r), r) += 1;
    }
    return rf;
}

}  // namespace gazeform
