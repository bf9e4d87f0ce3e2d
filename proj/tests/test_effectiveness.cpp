#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gazeform/effectiveness.hpp"
#include "gazeform/error.hpp"
#include "gazeform/random.hpp"

using namespace gazeform;

namespace {

LikertProfile profile(CriterionVector means) { return {"R", means}; }

// Shoelace formula over the polygon's Cartesian vertices.
double shoelace(const CriterionVector& r) {
    const int k = static_cast<int>(r.size());
    double twice = 0.0;
    for (int i = 0; i < k; ++i) {
        const double a0 = 2.0 * std::numbers::pi * i / k;
        const double a1 = 2.0 * std::numbers::pi * ((i + 1) % k) / k;
        const int j = (i + 1) % k;
        twice += r(i) * std::cos(a0) * r(j) * std::sin(a1) - r(j) * std::cos(a1) * r(i) * std::sin(a0);
    }
    return 0.5 * twice;
}

CriterionVector random_profile(Rng& rng) {
    CriterionVector v;
    for (auto& x : v) x = rng.uniform(1.0, 5.0);
    return v;
}

}  // namespace

TEST(Effectiveness, Anchors) {
    EXPECT_DOUBLE_EQ(effectiveness(profile(CriterionVector::Constant(5.0))).effectiveness, 100.0);
    EXPECT_DOUBLE_EQ(effectiveness(profile(CriterionVector::Constant(1.0))).effectiveness, 4.0);
    CriterionVector alt;
    alt << 5, 1, 5, 1, 5, 1, 5, 1;
    EXPECT_DOUBLE_EQ(effectiveness(profile(alt)).effectiveness, 20.0);
}

TEST(Effectiveness, MatchesShoelaceOracleAndStaysInBounds) {
    Rng rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = profile(random_profile(rng));
        const auto res = effectiveness(p);
        EXPECT_NEAR(res.area, shoelace(p.means), 1e-9);
        EXPECT_NEAR(res.max_area, shoelace(CriterionVector::Constant(5.0)), 1e-9);
        EXPECT_GE(res.effectiveness, 4.0 - 1e-12);
        EXPECT_LE(res.effectiveness, 100.0 + 1e-12);
    }
}

TEST(Effectiveness, RotationAndReflectionInvariantButNotPermutationInvariant) {
    Rng rng(43);
    const auto p = random_profile(rng);
    const double base = effectiveness(profile(p)).effectiveness;
    for (int s = 1; s < 8; ++s) {
        CriterionVector rot;
        for (int i = 0; i < 8; ++i) rot((i + s) % 8) = p(i);
        EXPECT_NEAR(effectiveness(profile(rot)).effectiveness, base, 1e-9);
    }
    EXPECT_NEAR(effectiveness(profile(p.reverse())).effectiveness, base, 1e-9);

    CriterionVector a, b;
    a << 5, 5, 1, 1, 5, 5, 1, 1;
    b << 5, 1, 5, 1, 5, 1, 5, 1;
    EXPECT_NE(effectiveness(profile(a)).effectiveness, effectiveness(profile(b)).effectiveness);
}

TEST(Effectiveness, MonotoneInEachCriterion) {
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = random_profile(rng);
        const double before = effectiveness(profile(p)).effectiveness;
        const int i = rng.uniform_int(0, 7);
        p(i) = rng.uniform(p(i), 5.0);
        EXPECT_GE(effectiveness(profile(p)).effectiveness, before - 1e-12);
    }
}

TEST(Effectiveness, RejectsOffScaleProfiles) {
    EXPECT_THROW(effectiveness(profile(CriterionVector::Constant(0.0))), InputError);
}

TEST(PolygonArea, FewerThanThreeAxesIsZero) {
    EXPECT_DOUBLE_EQ(polygon_area(Eigen::Vector2d(3, 4)), 0.0);
    EXPECT_NEAR(polygon_area(Eigen::Vector4d(1, 1, 1, 1)), 2.0, 1e-15);
}

TEST(MeanProfile, ColumnMeans) {
    Eigen::Matrix<double, Eigen::Dynamic, kCriteriaCount> r(2, kCriteriaCount);
    r.row(0).setConstant(2.0);
    r.row(1).setConstant(4.0);
    r(1, 3) = 5.0;
    const auto p = mean_profile("R1", r);
    EXPECT_EQ(p.rendering_id, "R1");
    EXPECT_DOUBLE_EQ(p.means(0), 3.0);
    EXPECT_DOUBLE_EQ(p.means(3), 3.5);
}

TEST(ProfilesFromRows, GroupsByRendering) {
    const std::vector<LikertRow> rows = {{"e1", "R2", {1, 1, 1, 1, 1, 1, 1, 1}},
                                         {"e1", "R1", {5, 5, 5, 5, 5, 5, 5, 5}},
                                         {"e2", "R2", {3, 3, 3, 3, 3, 3, 3, 3}}};
    const auto ps = profiles_from_rows(rows);
    ASSERT_EQ(ps.size(), 2u);
    EXPECT_EQ(ps[0].rendering_id, "R1");
    EXPECT_EQ(ps[1].means, CriterionVector::Constant(2.0));
}

TEST(SpiderSvg, WellFormedAndLabelled) {
    const auto p = profile(CriterionVector::Constant(3.0));
    const auto svg = spider_svg(p, effectiveness(p));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("<polygon"), std::string::npos);
    for (auto c : kCriteria) EXPECT_NE(svg.find(std::string(c)), std::string::npos) << c;
    EXPECT_EQ(svg, spider_svg(p, effectiveness(p)));
}
