#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gazeform/model.hpp"
#include "gazeform/session_io.hpp"

namespace gazeform {

// Area of the radar polygon spanned by k equally spaced axes:
//   1/2 * sin(2 pi / k) * sum_i r_i * r_{i+1}  (indices cyclic).
template <typename Derived>
typename Derived::Scalar adjacent_product_sum(const Eigen::MatrixBase<Derived>& radii) {
    using Scalar = typename Derived::Scalar;
    const auto k = radii.size();
    Scalar sum(0);
    for (Eigen::Index i = 0; i < k; ++i) sum += radii(i) * radii((i + 1) % k);
    return sum;
}

template <typename Derived>
typename Derived::Scalar polygon_area(const Eigen::MatrixBase<Derived>& radii) {
    using Scalar = typename Derived::Scalar;
    const auto k = radii.size();
    if (k < 3) return Scalar(0);
    return Scalar(0.5) * Scalar(std::sin(2.0 * std::numbers::pi / static_cast<double>(k))) *
           adjacent_product_sum(radii);
}

inline double polygon_area(const LikertProfile& profile) { return polygon_area(profile.means); }

struct EffectivenessResult {
    std::string rendering_id;
    double area = 0.0;
    double max_area = 0.0;
    double effectiveness = 0.0;  // percent
};

// Area relative to the all-5 polygon, as a percentage.
EffectivenessResult effectiveness(const LikertProfile& profile);

// Column means of an experts x criteria matrix of Likert ratings.
LikertProfile mean_profile(const std::string& rendering_id,
                           const Eigen::Matrix<double, Eigen::Dynamic, kCriteriaCount>& ratings);

// One profile per rendering (ordered by rendering id) from raw Likert rows.
std::vector<LikertProfile> profiles_from_rows(const std::vector<LikertRow>& rows);

// Static radar chart with rings at 1..5 and the profile polygon.
std::string spider_svg(const LikertProfile& profile, const EffectivenessResult& result);

}  // namespace gazeform
