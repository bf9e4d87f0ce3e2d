#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "gazeform/error.hpp"
#include "gazeform/session_io.hpp"
#include "generators.hpp"

using namespace gazeform;
using gazeform::testing::malformed_fixtures;
using gazeform::testing::parse_any;

TEST(FormatDetection, UsesCompoundExtensions) {
    EXPECT_EQ(detect_format("a/b/log.jsonl"), FileFormat::gaze_jsonl);
    EXPECT_EQ(detect_format("x.ratings.csv"), FileFormat::ratings_csv);
    EXPECT_EQ(detect_format("x.ballots.csv"), FileFormat::ballots_csv);
    EXPECT_EQ(detect_format("x.likert.csv"), FileFormat::likert_csv);
    EXPECT_FALSE(detect_format("plain.csv").has_value());
    EXPECT_FALSE(detect_format("notes.txt").has_value());
}

TEST(FormatDetection, OverrideWinsAndAmbiguityIsAnError) {
    EXPECT_EQ(resolve_file("plain.csv", FileFormat::likert_csv).format, FileFormat::likert_csv);
    EXPECT_THROW(resolve_file("plain.csv", std::nullopt), InputError);
    EXPECT_EQ(parse_format("ballots-csv"), FileFormat::ballots_csv);
    EXPECT_FALSE(parse_format("xml").has_value());
    for (auto f : {FileFormat::gaze_jsonl, FileFormat::ratings_csv, FileFormat::ballots_csv, FileFormat::likert_csv}) {
        EXPECT_EQ(parse_format(to_string(f)), f);
    }
}

TEST(GazeLog, OneLineOneEventAndEmptyFile) {
    const auto events =
        parse_gaze_log(R"({"session_id":"P1","image_id":"a","t_start":0.5,"t_end":1.25,"u":0.25,"v":0.75})");
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].image_id, "a");
    EXPECT_DOUBLE_EQ(events[0].duration(), 0.75);
    EXPECT_TRUE(parse_gaze_log("").empty());
}

TEST(GazeLog, OffImageSamplesAreDropped) {
    const auto events = parse_gaze_log(
        R"({"session_id":"P1","image_id":null,"t_start":0.0,"t_end":1.0,"u":0.5,"v":0.5})"
        "\n"
        R"({"session_id":"P1","image_id":"","t_start":1.0,"t_end":2.0,"u":0.5,"v":0.5})"
        "\r\n"
        R"({"session_id":"P1","image_id":"b","t_start":2.0,"t_end":3.0,"u":0.5,"v":0.5})"
        "\n");
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].image_id, "b");
}

TEST(GazeLog, OutOfRangeNamesLineOne) {
    try {
        parse_gaze_log(R"({"session_id":"P1","image_id":"a","t_start":0,"t_end":1,"u":1.5,"v":0.5})");
        FAIL() << "expected a range error";
    } catch (const InputError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
}

TEST(Ratings, FeaturesAndRanges) {
    const std::string header = "participant_id,image_id,rating,liked_features,thought\n";
    const auto recs = parse_ratings(header + "P1,a,5,colour;shape,\"lovely, calm\"\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].rating, 5);
    EXPECT_EQ(recs[0].liked_features, (std::set<Feature>{Feature::colour, Feature::shape}));
    EXPECT_EQ(recs[0].thought, "lovely, calm");
    EXPECT_THROW(parse_ratings(header + "P1,a,6,,\n"), InputError);
    EXPECT_THROW(parse_ratings(header + "P1,a,5,smell,\n"), InputError);
}

TEST(Ratings, AcceptsCrlfAndByteOrderMark) {
    const auto recs = parse_ratings("\xEF\xBB\xBFparticipant_id,image_id,rating,liked_features,thought\r\nP1,a,3,,\r\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].rating, 3);
    EXPECT_FALSE(recs[0].thought.has_value());
}

TEST(Ballots, OrderIsBestFirst) {
    const auto b = parse_ballots("expert_id,problem_id,rank1,rank2,rank3,rank4\ne1,S1,RD,RC,RA,RB\n");
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].order, (std::vector<std::string>{"RD", "RC", "RA", "RB"}));
    EXPECT_THROW(parse_ballots("expert_id,problem_id,rank1,rank2,rank3,rank4\ne1,S1,RD,RD,RA,RB\n"), InputError);
}

TEST(Ballots, FiftyRowsFiftyBallots) {
    std::string text = "expert_id,problem_id,rank1,rank2,rank3,rank4\n";
    for (int i = 1; i <= 50; ++i) text += "e" + std::to_string(i) + ",S1,RA,RB,RC,RD\n";
    EXPECT_EQ(parse_ballots(text).size(), 50u);
}

TEST(Likert, EightCriteriaInFixedOrder) {
    std::vector<LikertRow> rows = {{"e1", "R1", {5, 4, 3, 2, 1, 2, 3, 4}}};
    const auto text = write_likert(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "expert_id,rendering_id,adherence_to_brief,novelty,visual_appeal,emotional_resonance,"
              "clarity_of_purpose,distinctiveness_of_silhouette,implied_materiality,proportional_balance");
    EXPECT_EQ(parse_likert(text), rows);
}

TEST(Malformed, EveryFixtureIsRejectedWithItsLineNumber) {
    for (const auto& fx : malformed_fixtures()) {
        SCOPED_TRACE(fx.name);
        try {
            parse_any(fx.format, fx.text);
            ADD_FAILURE() << "accepted malformed input";
        } catch (const InputError& e) {
            ASSERT_TRUE(e.line().has_value()) << e.what();
            EXPECT_EQ(*e.line(), fx.line) << e.what();
        }
    }
}

TEST(RoundTrip, WriteThenParseIsAFixpointOnRandomFiles) {
    Rng rng(2024);
    for (int i = 0; i < 25; ++i) {
        const auto gaze = gazeform::testing::random_gaze(rng);
        EXPECT_EQ(parse_gaze_log(write_gaze_log(gaze)), gaze);
        const auto ratings = gazeform::testing::random_ratings(rng);
        EXPECT_EQ(parse_ratings(write_ratings(ratings)), ratings);
        const auto ballots = gazeform::testing::random_ballots(rng);
        EXPECT_EQ(parse_ballots(write_ballots(ballots)), ballots);
        const auto likert = gazeform::testing::random_likert(rng);
        EXPECT_EQ(parse_likert(write_likert(likert)), likert);
    }
}

TEST(Report, CanonicalAndDeterministic) {
    EXPECT_EQ(write_report(Report::object()), "{}\n");
    Report r{{"b", 1}, {"a", {{"z", 2.5}, {"y", "text"}}}};
    EXPECT_EQ(write_report(r), write_report(r));
    EXPECT_LT(write_report(r).find("\"a\""), write_report(r).find("\"b\""));
}

TEST(Report, NonFiniteValuesSurviveARoundTrip) {
    Report r{{"t", std::nan("")}, {"up", HUGE_VAL}, {"down", -HUGE_VAL}, {"ok", 1.5}};
    const auto text = write_report(r);
    EXPECT_NE(text.find("\"reason\": \"nan\""), std::string::npos);
    EXPECT_NE(text.find("\"reason\": \"-inf\""), std::string::npos);
    const auto back = read_report(text);
    EXPECT_TRUE(std::isnan(back["t"].get<double>()));
    EXPECT_EQ(back["up"].get<double>(), HUGE_VAL);
    EXPECT_EQ(back["down"].get<double>(), -HUGE_VAL);
    EXPECT_EQ(back["ok"].get<double>(), 1.5);
}

TEST(SideTables, GridLengthsAndGroupsRoundTrip) {
    const auto grid = build_grid(2, 3, 100.0, {"a", "b", "c", "d", "e", "f"});
    EXPECT_EQ(parse_grid_spec(write_grid_spec(grid)), grid);
    EXPECT_THROW(parse_grid_spec(R"({"rows":1,"cols":1,"image_ids":["a"],"extra":1})"), InputError);

    const std::map<std::string, double> lengths = {{"P1", 600.0}, {"P2", 521.25}};
    EXPECT_EQ(parse_session_lengths(write_session_lengths(lengths)), lengths);
    try {
        parse_session_lengths("session_id,length_s\nP1,600\nP2,-3\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.line(), 3u);
    }

    const std::map<std::string, std::string> groups = {{"P1", "phrase1"}, {"P2", "phrase 2"}};
    EXPECT_EQ(parse_groups(write_groups(groups)), groups);
}

TEST(Files, MissingFileIsAnInputError) {
    EXPECT_THROW(read_file("/nonexistent/definitely/missing.jsonl"), InputError);
    const auto path = (std::filesystem::temp_directory_path() / "gazeform_io_test.txt").string();
    write_file(path, "bytes\n");
    EXPECT_EQ(read_file(path), "bytes\n");
    std::filesystem::remove(path);
}
