#include "gazeform/effectiveness.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "gazeform/error.hpp"

namespace gazeform {

EffectivenessResult effectiveness(const LikertProfile& profile) {
    check_profile(profile);
    EffectivenessResult res;
    res.rendering_id = profile.rendering_id;
    res.area = polygon_area(profile.means);
    res.max_area = polygon_area(CriterionVector::Constant(5.0));
    // The sine factor cancels; the ratio of adjacent-product sums keeps exact
    // anchors (all 1s is exactly 4%).
    res.effectiveness = 100.0 * adjacent_product_sum(profile.means) /
                        adjacent_product_sum(CriterionVector::Constant(5.0));
    return res;
}

LikertProfile mean_profile(const std::string& rendering_id,
                           const Eigen::Matrix<double, Eigen::Dynamic, kCriteriaCount>& ratings) {
    if (ratings.rows() == 0) throw InputError("profile of '" + rendering_id + "' has no ratings");
    if ((ratings.array() < 1.0).any() || (ratings.array() > 5.0).any()) {
        throw InputError("profile of '" + rendering_id + "' has a rating outside 1..5");
    }
    LikertProfile p;
    p.rendering_id = rendering_id;
    p.means = ratings.colwise().mean().transpose();
    return p;
}

std::vector<LikertProfile> profiles_from_rows(const std::vector<LikertRow>& rows) {
    std::map<std::string, std::vector<const LikertRow*>> by_rendering;
    for (const auto& r : rows) by_rendering[r.rendering_id].push_back(&r);
    std::vector<LikertProfile> out;
    for (const auto& [id, rs] : by_rendering) {
        Eigen::Matrix<double, Eigen::Dynamic, kCriteriaCount> m(static_cast<Eigen::Index>(rs.size()), kCriteriaCount);
        for (std::size_t e = 0; e < rs.size(); ++e) {
            for (std::size_t c = 0; c < kCriteriaCount; ++c) {
                m(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(c)) = rs[e]->ratings[c];
            }
        }
        out.push_back(mean_profile(id, m));
    }
    return out;
}

std::string spider_svg(const LikertProfile& profile, const EffectivenessResult& result) {
    constexpr double kSize = 480.0;
    constexpr double kCentre = kSize / 2.0;
    constexpr double kRadius = 160.0;
    const auto k = static_cast<double>(kCriteriaCount);
    auto point = [&](std::size_t i, double value) {
        const double angle = -std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * static_cast<double>(i) / k;
        const double r = kRadius * value / 5.0;
        return std::pair{kCentre + r * std::cos(angle), kCentre + r * std::sin(angle)};
    };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
       << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int ring = 1; ring <= 5; ++ring) {
        os << "<polygon fill=\"none\" stroke=\"#cccccc\" points=\"";
        for (std::size_t i = 0; i < kCriteriaCount; ++i) {
            auto [x, y] = point(i, ring);
            os << (i ? " " : "") << fmt(x) << ',' << fmt(y);
        }
        os << "\"/>\n";
    }
    for (std::size_t i = 0; i < kCriteriaCount; ++i) {
        auto [x, y] = point(i, 5.0);
        auto [lx, ly] = point(i, 5.6);
        os << "<line x1=\"" << fmt(kCentre) << "\" y1=\"" << fmt(kCentre) << "\" x2=\"" << fmt(x) << "\" y2=\""
           << fmt(y) << "\" stroke=\"#999999\"/>\n";
        os << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
           << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << kCriteria[i] << "</text>\n";
    }
    os << "<polygon fill=\"#3b6ea8\" fill-opacity=\"0.35\" stroke=\"#3b6ea8\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < kCriteriaCount; ++i) {
        auto [x, y] = point(i, profile.means(static_cast<Eigen::Index>(i)));
        os << (i ? " " : "") << fmt(x) << ',' << fmt(y);
    }
    os << "\"/>\n";
    os << "<text x=\"" << fmt(kCentre) << "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\">"
       << profile.rendering_id << " (" << fmt(result.effectiveness) << "%)</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace gazeform
