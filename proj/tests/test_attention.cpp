#include <cmath>

#include <gtest/gtest.h>

#include "gazeform/attention.hpp"
#include "gazeform/error.hpp"
#include "gazeform/random.hpp"

using namespace gazeform;

namespace {

GazeEvent ev(std::string image, double t0, double t1) { return {"P1", std::move(image), t0, t1, 0.5, 0.5}; }

StimulusGrid abc() { return build_grid(1, 3, 120.0, {"a", "b", "c"}); }

ParticipantDwell viewer(std::string id, std::vector<std::string> images) {
    ParticipantDwell p{std::move(id), {}};
    for (auto& img : images) p.dwell.push_back({std::move(img), 1.0, 1, 0.0});
    return p;
}

}  // namespace

TEST(AggregateDwell, MergesCloseEpisodesAndDropsGlances) {
    const auto s = validate_session({ev("a", 0.0, 1.0), ev("a", 1.05, 2.0), ev("b", 2.0, 2.1), ev("a", 5.0, 6.0)},
                                    abc());
    const auto dwell = aggregate_dwell(s);
    ASSERT_EQ(dwell.size(), 1u);
    EXPECT_EQ(dwell[0].image_id, "a");
    EXPECT_NEAR(dwell[0].total_dwell, 2.95, 1e-12);
    EXPECT_EQ(dwell[0].episode_count, 2);
    EXPECT_DOUBLE_EQ(dwell[0].first_visit, 0.0);
}

TEST(AggregateDwell, GapAtToleranceSplitsEpisodes) {
    const auto s = validate_session({ev("a", 0.0, 1.0), ev("a", 1.1, 2.0)}, abc());
    EXPECT_EQ(aggregate_dwell(s, {0.1, 0.0})[0].episode_count, 2);
    EXPECT_EQ(aggregate_dwell(s, {0.2, 0.0})[0].episode_count, 1);
}

TEST(AggregateDwell, InterleavedImageBreaksTheEpisode) {
    const auto s = validate_session({ev("a", 0.0, 1.0), ev("b", 1.0, 1.05), ev("a", 1.05, 2.0)}, abc());
    const auto dwell = aggregate_dwell(s, {0.1, 0.0});
    ASSERT_EQ(dwell.size(), 2u);
    EXPECT_EQ(dwell[0].episode_count, 2);
}

// With glances kept, total dwell equals the summed event durations.
TEST(AggregateDwell, TotalDwellConservedWithoutGlanceFilter) {
    Rng rng(11);
    const auto grid = abc();
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<GazeEvent> events;
        double t = 0.0, sum = 0.0;
        const int n = rng.uniform_int(0, 40);
        for (int i = 0; i < n; ++i) {
            t += rng.uniform(0.0, 0.3);
            const double d = rng.uniform(0.01, 1.0);
            events.push_back(ev(grid.image_ids()[static_cast<std::size_t>(rng.uniform_int(0, 2))], t, t + d));
            sum += d;
            t += d;
        }
        double total = 0.0;
        for (const auto& r : aggregate_dwell(validate_session(events, grid), {0.15, 0.0})) {
            EXPECT_GT(r.total_dwell, 0.0);
            total += r.total_dwell;
        }
        EXPECT_NEAR(total, sum, 1e-9);
    }
}

TEST(Commonality, IdenticalAndDisjointViewers) {
    const auto res = viewing_commonality({viewer("p1", {"a", "b"}), viewer("p2", {"a", "b"}), viewer("p3", {"c"})},
                                         abc());
    EXPECT_DOUBLE_EQ(res.cosine(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(res.cosine(0, 2), 0.0);
    EXPECT_EQ(res.common_counts(0, 1), 2);
    EXPECT_DOUBLE_EQ(res.median_cosine, 0.0);
    EXPECT_NEAR(res.mean_cosine, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(res.mean_common, 2.0 / 3.0, 1e-15);
}

TEST(Commonality, PartialOverlapCosine) {
    const auto res = viewing_commonality({viewer("p1", {"a", "b"}), viewer("p2", {"b", "c"})}, abc());
    EXPECT_DOUBLE_EQ(res.cosine(0, 1), 0.5);
}

TEST(Commonality, EmptyViewersExcludedAndTooFewIsDegenerate) {
    const auto res = viewing_commonality({viewer("p1", {"a"}), viewer("p2", {}), viewer("p3", {"a"})}, abc());
    EXPECT_EQ(res.excluded, std::vector<std::string>{"p2"});
    EXPECT_EQ(res.participant_ids.size(), 2u);
    EXPECT_THROW(viewing_commonality({viewer("p1", {"a"}), viewer("p2", {})}, abc()), DegenerateError);
}

TEST(Commonality, MatrixPropertiesOnRandomViewers) {
    Rng rng(5);
    const auto grid = build_grid(3, 4, 120.0, {"0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"});
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<ParticipantDwell> viewers;
        for (int p = 0; p < 6; ++p) {
            std::vector<std::string> seen;
            for (const auto& id : grid.image_ids()) {
                if (rng.uniform() < 0.4) seen.push_back(id);
            }
            if (seen.empty()) seen.push_back("0");
            viewers.push_back(viewer("p" + std::to_string(p), seen));
        }
        const auto res = viewing_commonality(viewers, grid);
        EXPECT_TRUE(res.cosine.isApprox(res.cosine.transpose()));
        EXPECT_TRUE((res.cosine.diagonal().array() == 1.0).all());
        EXPECT_TRUE((res.cosine.array() >= 0.0).all() && (res.cosine.array() <= 1.0 + 1e-15).all());
        EXPECT_EQ(res.common_counts, res.common_counts.transpose());
    }
}

TEST(Disagreement, WorkedExample) {
    const auto scores = disagreement_scores({{"img", {1, 5}}}, 30);
    ASSERT_EQ(scores.size(), 1u);
    EXPECT_DOUBLE_EQ(scores[0].sigma, 2.0);
    EXPECT_NEAR(scores[0].score, 2.0 / 2.0 * 2.0 / 30.0, 1e-15);
    EXPECT_NEAR(scores[0].score, 0.0667, 5e-5);
}

TEST(Disagreement, UnanimousIsZeroAndFullCohortOfExtremesIsOne) {
    EXPECT_DOUBLE_EQ(disagreement_scores({{"x", {3, 3, 3}}}, 10)[0].score, 0.0);
    EXPECT_DOUBLE_EQ(disagreement_scores({{"x", {1, 5, 1, 5}}}, 4)[0].score, 1.0);
}

TEST(Disagreement, BoundedInUnitInterval) {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int cohort = rng.uniform_int(1, 30);
        std::vector<int> rs(static_cast<std::size_t>(rng.uniform_int(1, cohort)));
        for (auto& r : rs) r = rng.uniform_int(1, 5);
        const double d = disagreement_scores({{"x", rs}}, cohort)[0].score;
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
    }
}

TEST(Disagreement, ErrorsAndSummary) {
    EXPECT_THROW(disagreement_scores({{"x", {1, 2, 3}}}, 2), InputError);
    EXPECT_THROW(disagreement_scores({{"x", {1}}}, 0), InputError);
    EXPECT_TRUE(disagreement_scores({{"x", {}}}, 3).empty());
    const auto scores = disagreement_scores({{"x", {1, 5}}, {"y", {3}}}, 4);
    const auto s = summarize(scores);
    EXPECT_NEAR(s.mean, 0.25, 1e-15);
    EXPECT_NEAR(s.weighted_mean, 0.5 * 2.0 / 3.0, 1e-15);
}

TEST(TimeSplit, WorkedExampleAndOverflow) {
    const auto t = session_time_split({{"a", 300.0, 3, 0.0}, {"b", 140.0, 1, 5.0}}, 521.0);
    EXPECT_DOUBLE_EQ(t.fixation_time, 440.0);
    EXPECT_DOUBLE_EQ(t.browse_time, 81.0);
    EXPECT_THROW(session_time_split({{"a", 700.0, 1, 0.0}}, 600.0), InputError);
}

TEST(Heatmap, MassEqualsSummedWeights) {
    Rng rng(9);
    std::vector<GazePoint> pts;
    double total = 0.0;
    for (int i = 0; i < 40; ++i) {
        pts.push_back({rng.uniform(), rng.uniform(), rng.uniform(0.1, 2.0)});
        total += pts.back().weight;
    }
    const auto grid = image_heatmap(pts, {64, 48, 0.05});
    EXPECT_EQ(grid.rows(), 48);
    EXPECT_EQ(grid.cols(), 64);
    EXPECT_NEAR(grid.sum(), total, 1e-9);
    EXPECT_TRUE((grid.array() >= 0.0).all());
}

TEST(Heatmap, SinglePointPeaksAtItsCellAndIsSymmetric) {
    const GazePoint p{0.5, 0.5, 3.0};
    const auto grid = image_heatmap(std::span(&p, 1), {33, 33, 0.03});
    Eigen::Index r = 0, c = 0;
    grid.maxCoeff(&r, &c);
    EXPECT_EQ(r, 16);
    EXPECT_EQ(c, 16);
    EXPECT_TRUE(grid.isApprox(grid.transpose(), 1e-12));
    EXPECT_TRUE(grid.isApprox(grid.colwise().reverse(), 1e-12));
}

TEST(Heatmap, RejectsBadOptionsAndPoints) {
    const GazePoint bad{1.2, 0.5, 1.0};
    EXPECT_THROW(image_heatmap(std::span(&bad, 1)), InputError);
    EXPECT_THROW(image_heatmap({}, {0, 10, 0.1}), InputError);
    EXPECT_THROW(image_heatmap({}, {10, 10, 0.0}), InputError);
    EXPECT_DOUBLE_EQ(image_heatmap({}, {4, 4, 0.1}).sum(), 0.0);
}

TEST(Emotion, WholeWordCaseInsensitiveCounts) {
    const EmotionLexicon lex = {{"calm", {"calm", "still water"}}, {"joy", {"happy"}}};
    const auto res = emotion_keyword_distribution(
        {{"p1", "Calm, so CALM. Happy!"}, {"p2", "Still water runs; uncalm happyish"}, {"p1", "still"}}, lex);
    ASSERT_EQ(res.phrase_ids, (std::vector<std::string>{"p1", "p2"}));
    ASSERT_EQ(res.emotions, (std::vector<std::string>{"calm", "joy"}));
    EXPECT_EQ(res.counts(0, 0), 2);
    EXPECT_EQ(res.counts(0, 1), 1);
    EXPECT_EQ(res.counts(1, 0), 1);
    EXPECT_EQ(res.counts(1, 1), 0);
    EXPECT_THROW(emotion_keyword_distribution({}, {}), InputError);
}

TEST(Emotion, DefaultLexiconCoversCoreEmotions) {
    const auto lex = default_emotion_lexicon();
    for (const char* e : {"joy", "sadness", "fear", "calm"}) EXPECT_TRUE(lex.contains(e)) << e;
}

TEST(Tokenize, SplitsOnPunctuationAndLowercases) {
    EXPECT_EQ(tokenize_words("Don't STOP-now!"), (std::vector<std::string>{"don't", "stop", "now"}));
    EXPECT_TRUE(tokenize_words("  ,.; ").empty());
}
