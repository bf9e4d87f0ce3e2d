#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "gazeform/error.hpp"

namespace gazeform {

// I_x(a, b) by Lentz's continued fraction; absolute accuracy ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed p-value of Student's t with (possibly fractional) df degrees of freedom.
double student_t_two_tailed(double t, double df);

struct CorrelationResult {
    double r = 0.0;
    std::size_t n = 0;
    double t_stat = 0.0;
    double p_two_tailed = 1.0;
};

enum class TTestVariant { welch, pooled };

struct TTestResult {
    double mean_high = 0.0;
    double mean_low = 0.0;
    double t_stat = 0.0;
    double df = 0.0;
    double p_two_tailed = 1.0;
    std::size_t n_high = 0;
    std::size_t n_low = 0;
};

template <typename DerivedX, typename DerivedY>
CorrelationResult pearson(const Eigen::MatrixBase<DerivedX>& xs, const Eigen::MatrixBase<DerivedY>& ys) {
    using Scalar = typename DerivedX::Scalar;
    const auto n = xs.size();
    if (n != ys.size()) throw InputError("pearson: series differ in length");
    if (n < 3) throw DegenerateError("pearson: need at least 3 pairs");
    const auto dx = (xs.array() - xs.mean()).matrix().eval();
    const auto dy = (ys.array() - ys.mean()).matrix().eval();
    const Scalar sxx = dx.squaredNorm();
    const Scalar syy = dy.squaredNorm();
    if (sxx == Scalar(0) || syy == Scalar(0)) throw DegenerateError("pearson: constant series");
    CorrelationResult res;
    res.n = static_cast<std::size_t>(n);
    res.r = std::clamp(static_cast<double>(dx.dot(dy) / std::sqrt(sxx * syy)), -1.0, 1.0);
    const double df = static_cast<double>(n - 2);
    const double denom = 1.0 - res.r * res.r;
    if (denom <= 0.0) {
        res.t_stat = std::copysign(HUGE_VAL, res.r);
        res.p_two_tailed = 0.0;
    } else {
        res.t_stat = res.r * std::sqrt(df / denom);
        res.p_two_tailed = student_t_two_tailed(res.t_stat, df);
    }
    return res;
}

// Two-sample t on groups `high` and `low` (each of size >= 2).
// When both groups have zero variance the statistic is +-inf (p = 0) for
// different means and 0 (p = 1) for equal means.
TTestResult two_sample_t(const Eigen::Ref<const Eigen::VectorXd>& high,
                         const Eigen::Ref<const Eigen::VectorXd>& low,
                         TTestVariant variant = TTestVariant::welch);

// Splits images at the median of their average rating (high = above the median,
// low = at or below) and compares average dwell between the two groups.
TTestResult median_split_ttest(const Eigen::Ref<const Eigen::VectorXd>& avg_rating,
                               const Eigen::Ref<const Eigen::VectorXd>& avg_dwell,
                               TTestVariant variant = TTestVariant::welch);

template <typename Derived>
typename Derived::Scalar median(const Eigen::DenseBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = values.reshaped();
    if (v.size() == 0) throw DegenerateError("median of empty set");
    std::sort(v.data(), v.data() + v.size());
    const auto m = v.size() / 2;
    return v.size() % 2 ? v(m) : (v(m - 1) + v(m)) / Scalar(2);
}

}  // namespace gazeform
