#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "gazeform/session_io.hpp"

namespace fs = std::filesystem;
using gazeform::cli::ExitCode;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome gazeform_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gazeform");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = gazeform::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("gazeform_cli_" + name);
    fs::remove_all(p);
    return p.string();
}

std::string file(const std::string& d, const std::string& name) { return (fs::path(d) / name).string(); }

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(gazeform_cli({"--help"}).code, ExitCode::kSuccess);
    EXPECT_EQ(gazeform_cli({}).code, ExitCode::kInputError);
    EXPECT_EQ(gazeform_cli({"frobnicate"}).code, ExitCode::kInputError);
    EXPECT_EQ(gazeform_cli({"worthiness", "--ballots", "x.ballots.csv"}).code, ExitCode::kInputError);
    EXPECT_EQ(gazeform_cli({"worthiness", "--ballots", "x.ballots.csv", "--out", "o.json", "--bogus"}).code,
              ExitCode::kInputError);
}

TEST(Cli, AnalyzeFreeViewing) {
    const auto d = dir("free");
    ASSERT_EQ(gazeform_cli({"synth", "--kind", "free", "--out", d, "--seed", "4"}).code, ExitCode::kSuccess);
    const auto out = file(d, "report");
    const auto r = gazeform_cli({"analyze", "--gaze", file(d, "gaze.jsonl"), "--ratings", file(d, "ratings.ratings.csv"),
                                 "--grid", file(d, "grid.json"), "--session-lengths", file(d, "session_lengths.csv"),
                                 "--out", out, "--heatmap-top", "2", "--resolution", "32"});
    ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
    const auto report = gazeform::read_report(gazeform::read_file(file(out, "report.json")));
    EXPECT_GT(report["correlation"]["r"].get<double>(), 0.0);
    std::size_t heatmaps = 0;
    for (const auto& e : fs::directory_iterator(out)) heatmaps += e.path().extension() == ".csv";
    EXPECT_EQ(heatmaps, 2u);
}

TEST(Cli, AnalyzeEmptyGazeIsDegenerate) {
    const auto d = dir("empty");
    ASSERT_EQ(gazeform_cli({"synth", "--kind", "free", "--out", d}).code, ExitCode::kSuccess);
    gazeform::write_file(file(d, "gaze.jsonl"), "");
    const auto r = gazeform_cli({"analyze", "--gaze", file(d, "gaze.jsonl"), "--ratings", file(d, "ratings.ratings.csv"),
                                 "--grid", file(d, "grid.json"), "--out", file(d, "out")});
    EXPECT_EQ(r.code, ExitCode::kDegenerate) << r.err;
}

TEST(Cli, MissingAndMalformedInputsAreInputErrors) {
    const auto d = dir("bad");
    fs::create_directories(d);
    EXPECT_EQ(gazeform_cli({"worthiness", "--ballots", file(d, "none.ballots.csv"), "--out", file(d, "w.json")}).code,
              ExitCode::kInputError);
    gazeform::write_file(file(d, "b.ballots.csv"), "expert_id,problem_id,rank1,rank2\ne1,S1,A,A\n");
    const auto r = gazeform_cli({"worthiness", "--ballots", file(d, "b.ballots.csv"), "--out", file(d, "w.json")});
    EXPECT_EQ(r.code, ExitCode::kInputError);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    EXPECT_EQ(gazeform_cli({"effectiveness", "--likert", file(d, "b.ballots.csv"), "--out", d}).code,
              ExitCode::kInputError);
}

TEST(Cli, WorthinessAndEffectiveness) {
    const auto d = dir("experts");
    ASSERT_EQ(gazeform_cli({"synth", "--kind", "ballots", "--out", d}).code, ExitCode::kSuccess);
    ASSERT_EQ(gazeform_cli({"synth", "--kind", "likert", "--out", d}).code, ExitCode::kSuccess);
    auto r = gazeform_cli({"worthiness", "--ballots", file(d, "experts.ballots.csv"), "--out", file(d, "w.json")});
    ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(file(d, "w.json")));
    r = gazeform_cli({"worthiness", "--ballots", file(d, "experts.ballots.csv"), "--out", file(d, "w2.json"),
                      "--max-iters", "1"});
    EXPECT_EQ(r.code, ExitCode::kDegenerate);
    EXPECT_TRUE(fs::exists(file(d, "w2.json")));
    r = gazeform_cli({"effectiveness", "--likert", file(d, "experts.likert.csv"), "--out", file(d, "eff")});
    ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(file(file(d, "eff"), "effectiveness.json")));
    EXPECT_TRUE(fs::exists(file(file(d, "eff"), "spider_S1R1.svg")));
}

TEST(Cli, PipelineFeedbackAndFailureExitCodes) {
    const auto d = dir("pipe");
    ASSERT_EQ(gazeform_cli({"synth", "--kind", "pipeline", "--out", d, "--images", "2"}).code, ExitCode::kSuccess);
    const auto runs = file(d, "runs");
    auto r = gazeform_cli({"pipeline", "--inputs", d, "--config", file(d, "mock.conf"), "--out", runs});
    ASSERT_EQ(r.code, ExitCode::kSuccess) << r.err;
    EXPECT_TRUE(fs::exists(file(runs, "memory.jsonl")));

    const auto run_dir = file(runs, "fixture");
    EXPECT_EQ(gazeform_cli({"feedback", "--run-dir", run_dir, "--select", "rendering_1", "--comment", "bolder"}).code,
              ExitCode::kSuccess);
    EXPECT_EQ(gazeform_cli({"feedback", "--run-dir", run_dir, "--select", "rendering_99"}).code,
              ExitCode::kInputError);

    gazeform::write_file(file(d, "fail.conf"), gazeform::read_file(file(d, "mock.conf")) +
                                                    "agent.rendering-generator.fail = true\n");
    r = gazeform_cli({"pipeline", "--inputs", d, "--config", file(d, "fail.conf"), "--out", runs});
    EXPECT_EQ(r.code, ExitCode::kStageFailure);
    EXPECT_TRUE(fs::exists(file(run_dir, "sketch_1.png")));
    EXPECT_FALSE(fs::exists(file(run_dir, "rendering_1.png")));

    gazeform::write_file(file(d, "unbound.conf"), "run_id = unbound\n");
    EXPECT_EQ(gazeform_cli({"pipeline", "--inputs", d, "--config", file(d, "unbound.conf"), "--out", runs}).code,
              ExitCode::kInputError);
}
