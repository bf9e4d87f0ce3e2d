#include "gazeform/stats.hpp"

#include <limits>
#include <vector>

namespace gazeform {

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double sample_variance(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("incomplete beta: parameters must be positive");
    if (std::isnan(x) || x < 0.0 || x > 1.0) throw InputError("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (!(df > 0.0)) throw DegenerateError("t distribution needs positive degrees of freedom");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

TTestResult two_sample_t(const Eigen::Ref<const Eigen::VectorXd>& high,
                         const Eigen::Ref<const Eigen::VectorXd>& low, TTestVariant variant) {
    if (high.size() < 2 || low.size() < 2) throw DegenerateError("t-test: each group needs at least 2 values");
    TTestResult res;
    res.n_high = static_cast<std::size_t>(high.size());
    res.n_low = static_cast<std::size_t>(low.size());
    res.mean_high = high.mean();
    res.mean_low = low.mean();
    const double nh = static_cast<double>(high.size());
    const double nl = static_cast<double>(low.size());
    const double vh = sample_variance(high);
    const double vl = sample_variance(low);
    double se2 = 0.0;
    if (variant == TTestVariant::welch) {
        se2 = vh / nh + vl / nl;
        const double num = se2 * se2;
        const double den = (vh / nh) * (vh / nh) / (nh - 1.0) + (vl / nl) * (vl / nl) / (nl - 1.0);
        res.df = den > 0.0 ? num / den : nh + nl - 2.0;
    } else {
        res.df = nh + nl - 2.0;
        const double pooled = ((nh - 1.0) * vh + (nl - 1.0) * vl) / res.df;
        se2 = pooled * (1.0 / nh + 1.0 / nl);
    }
    const double diff = res.mean_high - res.mean_low;
    if (se2 == 0.0) {
        res.t_stat = diff == 0.0 ? 0.0 : std::copysign(HUGE_VAL, diff);
        res.p_two_tailed = diff == 0.0 ? 1.0 : 0.0;
        return res;
    }
    res.t_stat = diff / std::sqrt(se2);
    res.p_two_tailed = student_t_two_tailed(res.t_stat, res.df);
    return res;
}

TTestResult median_split_ttest(const Eigen::Ref<const Eigen::VectorXd>& avg_rating,
                               const Eigen::Ref<const Eigen::VectorXd>& avg_dwell, TTestVariant variant) {
    if (avg_rating.size() != avg_dwell.size()) throw InputError("median split: series differ in length");
    if (avg_rating.size() == 0) throw DegenerateError("median split: no images");
    const double m = median(avg_rating);
    std::vector<double> high;
    std::vector<double> low;
    for (Eigen::Index i = 0; i < avg_rating.size(); ++i) {
        (avg_rating(i) > m ? high : low).push_back(avg_dwell(i));
    }
    if (high.size() < 2 || low.size() < 2) {
        throw DegenerateError("median split: degenerate split (" + std::to_string(high.size()) + " above, " +
                              std::to_string(low.size()) + " at or below the median)");
    }
    return two_sample_t(Eigen::Map<const Eigen::VectorXd>(high.data(), static_cast<Eigen::Index>(high.size())),
                        Eigen::Map<const Eigen::VectorXd>(low.data(), static_cast<Eigen::Index>(low.size())),
                        variant);
}

}  // namespace gazeform
