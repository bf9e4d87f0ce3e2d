#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gazeform/attention.hpp"
#include "gazeform/effectiveness.hpp"
#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"
#include "gazeform/plackett_luce.hpp"
#include "gazeform/session_io.hpp"
#include "gazeform/stats.hpp"
#include "gazeform/synth.hpp"

namespace gazeform::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Image and rendering ids become file names; keep them portable.
std::string safe_name(const std::string& id) {
    std::string out = id;
    for (auto& c : out) {
        const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        if (!ok) c = '_';
    }
    return out;
}

void make_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

// A file given for a fixed role may not carry another format's extension.
std::string read_role(const std::string& path, FileFormat role) {
    if (auto detected = detect_format(path); detected && *detected != role) {
        throw InputError(path + " looks like " + std::string(to_string(*detected)) + ", expected " +
                         std::string(to_string(role)));
    }
    return read_file(path);
}

Report matrix_json(const Eigen::MatrixXd& m) {
    Report rows = Report::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Report row = Report::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Report matrix_json(const Eigen::MatrixXi& m) {
    Report rows = Report::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Report row = Report::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

EmotionLexicon read_lexicon(const std::string& path) {
    Report j;
    try {
        j = Report::parse(read_file(path));
        EmotionLexicon lex;
        for (const auto& [emotion, words] : j.items()) {
            for (const auto& w : words) lex[emotion].insert(w.get<std::string>());
        }
        if (lex.empty()) throw InputError("lexicon " + path + " is empty");
        return lex;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("lexicon " + path + " must map emotions to keyword lists: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string gaze;
    std::string ratings;
    std::string grid;
    std::string out_dir;
    std::string session_lengths;
    std::string groups;
    std::string lexicon;
    int heatmap_top = 10;
    int cohort = 0;
    DwellOptions dwell;
    HeatmapOptions heatmap;
    std::string ttest = "welch";
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
    const auto grid = parse_grid_spec(read_file(a.grid));
    const auto events = parse_gaze_log(read_role(a.gaze, FileFormat::gaze_jsonl));
    const auto ratings = parse_ratings(read_role(a.ratings, FileFormat::ratings_csv));
    if (events.empty()) throw DegenerateError("gaze log has no on-image samples");
    for (const auto& r : ratings) {
        if (!grid.contains(r.image_id)) throw InputError("rating refers to unknown image '" + r.image_id + "'");
    }
    const auto variant = a.ttest == "pooled" ? TTestVariant::pooled : TTestVariant::welch;

    const auto sessions = split_sessions(events, grid);
    std::vector<ParticipantDwell> dwell;
    for (const auto& s : sessions) dwell.push_back({s.session_id, aggregate_dwell(s, a.dwell)});

    Report rep;
    rep["parameters"] = {{"gap_tolerance", a.dwell.gap_tolerance}, {"min_fixation", a.dwell.min_fixation},
                         {"bandwidth", a.heatmap.bandwidth}, {"resolution", a.heatmap.width},
                         {"ttest", a.ttest}, {"heatmap_top", a.heatmap_top}};

    const auto avg = image_averages(grid, events, ratings, a.dwell);
    const auto corr = pearson(avg.rating, avg.dwell);
    rep["correlation"] = {{"r", corr.r}, {"n", corr.n}, {"t", corr.t_stat}, {"p", corr.p_two_tailed}};
    const auto tt = median_split_ttest(avg.rating, avg.dwell, variant);
    rep["ttest"] = {{"variant", a.ttest}, {"mean_high", tt.mean_high}, {"mean_low", tt.mean_low},
                    {"n_high", tt.n_high},  {"n_low", tt.n_low},         {"t", tt.t_stat},
                    {"df", tt.df},          {"p", tt.p_two_tailed}};

    const auto cm = viewing_commonality(dwell, grid);
    rep["commonality"] = {{"participants", cm.participant_ids},
                          {"cosine", matrix_json(cm.cosine)},
                          {"common_counts", matrix_json(cm.common_counts)},
                          {"excluded", cm.excluded},
                          {"median_cosine", cm.median_cosine},
                          {"mean_cosine", cm.mean_cosine},
                          {"mean_common", cm.mean_common}};

    std::map<std::string, std::vector<int>> by_image;
    std::set<std::string> raters;
    for (const auto& r : ratings) {
        by_image[r.image_id].push_back(r.rating);
        raters.insert(r.participant_id);
    }
    const int cohort = a.cohort > 0 ? a.cohort : static_cast<int>(raters.size());
    const auto scores = disagreement_scores(by_image, cohort);
    const auto summary = summarize(scores);
    Report per_image = Report::object();
    for (const auto& s : scores) per_image[s.image_id] = {{"sigma", s.sigma}, {"n", s.n}, {"score", s.score}};
    rep["disagreement"] = {{"cohort", cohort}, {"images", per_image}, {"mean", summary.mean},
                           {"weighted_mean", summary.weighted_mean}};

    std::map<std::string, double> lengths;
    if (!a.session_lengths.empty()) {
        lengths = parse_session_lengths(read_file(a.session_lengths));
    } else {
        for (const auto& e : events) lengths[e.session_id] = std::max(lengths[e.session_id], e.t_end);
    }
    Report splits = Report::object();
    double fix_sum = 0.0;
    double browse_sum = 0.0;
    for (const auto& p : dwell) {
        auto it = lengths.find(p.participant_id);
        if (it == lengths.end()) throw InputError("no session length for '" + p.participant_id + "'");
        const auto ts = session_time_split(p.dwell, it->second);
        splits[p.participant_id] = {{"fixation_time", ts.fixation_time}, {"browse_time", ts.browse_time},
                                    {"length", it->second}};
        fix_sum += ts.fixation_time;
        browse_sum += ts.browse_time;
    }
    const auto n_sessions = static_cast<double>(dwell.size());
    rep["time_split"] = {{"sessions", splits},
                         {"mean_fixation_time", fix_sum / n_sessions},
                         {"mean_browse_time", browse_sum / n_sessions}};

    if (!a.groups.empty()) {
        const auto groups = parse_groups(read_file(a.groups));
        const auto lexicon = a.lexicon.empty() ? default_emotion_lexicon() : read_lexicon(a.lexicon);
        std::vector<std::pair<std::string, std::string>> thoughts;
        for (const auto& r : ratings) {
            auto g = groups.find(r.participant_id);
            if (g != groups.end() && r.thought) thoughts.emplace_back(g->second, *r.thought);
        }
        const auto ec = emotion_keyword_distribution(thoughts, lexicon);
        rep["emotions"] = {{"phrases", ec.phrase_ids}, {"emotions", ec.emotions}, {"counts", matrix_json(ec.counts)}};
    }

    make_dir(a.out_dir);
    std::map<std::string, double> total_dwell;
    for (const auto& p : dwell) {
        for (const auto& d : p.dwell) total_dwell[d.image_id] += d.total_dwell;
    }
    std::vector<std::pair<std::string, double>> ranked(total_dwell.begin(), total_dwell.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    if (static_cast<int>(ranked.size()) > a.heatmap_top) ranked.resize(static_cast<std::size_t>(a.heatmap_top));
    Report heatmaps = Report::array();
    for (const auto& [id, total] : ranked) {
        std::vector<GazePoint> points;
        for (const auto& e : events) {
            if (e.image_id == id) points.push_back({e.u, e.v, e.duration()});
        }
        const auto grid_map = image_heatmap(points, a.heatmap);
        const auto base = "heatmap_" + safe_name(id);
        write_file(in_dir(a.out_dir, base + ".csv"), grid_to_csv(grid_map));
        write_file(in_dir(a.out_dir, base + ".pgm"), to_pgm(grid_map));
        heatmaps.push_back({{"image_id", id}, {"total_dwell", total}, {"mass", grid_map.sum()},
                            {"csv", base + ".csv"}, {"pgm", base + ".pgm"}});
    }
    rep["heatmaps"] = heatmaps;
    write_file(in_dir(a.out_dir, "report.json"), write_report(rep));

    out << "sessions: " << sessions.size() << ", images analysed: " << corr.n << '\n'
        << "pearson r = " << num(corr.r) << " (t = " << num(corr.t_stat) << ", p = " << sci(corr.p_two_tailed) << ")\n"
        << a.ttest << " t = " << num(tt.t_stat) << " (df = " << num(tt.df, 2) << ", p = " << sci(tt.p_two_tailed)
        << ")\n"
        << "commonality: median cosine " << num(cm.median_cosine) << ", mean common images "
        << num(cm.mean_common, 2) << '\n'
        << "disagreement: mean " << num(summary.mean) << ", weighted " << num(summary.weighted_mean) << '\n'
        << "report: " << in_dir(a.out_dir, "report.json") << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------------------
// worthiness
// ---------------------------------------------------------------------------

int worthiness(const std::string& path, const std::string& out_path, const FitConfig& config, std::ostream& out) {
    const auto ballots = parse_ballots(read_role(path, FileFormat::ballots_csv));
    if (ballots.empty()) throw InputError(path + " has no ballots");
    std::map<std::string, std::vector<RankingBallot>> by_problem;
    for (const auto& b : ballots) by_problem[b.problem_id].push_back(b);

    Report rep;
    rep["config"] = {{"max_iters", config.max_iters}, {"step", config.step}, {"grad_tol", config.grad_tol},
                     {"ridge", config.ridge}};
    if (config.seed) rep["config"]["seed"] = *config.seed;
    rep["problems"] = Report::object();
    bool all_converged = true;
    for (const auto& [problem, group] : by_problem) {
        const auto fit = fit_worth(group, config);
        const auto rf = rank_frequency(group);
        all_converged = all_converged && fit.converged;
        rep["problems"][problem] = {{"ballots", group.size()},
                                    {"worths", fit.worths.worths},
                                    {"converged", fit.converged},
                                    {"iterations", fit.iterations},
                                    {"grad_norm", fit.grad_norm},
                                    {"log_likelihood", fit.log_likelihood},
                                    {"initial_log_likelihood", fit.initial_log_likelihood},
                                    {"rank_frequency", {{"candidates", rf.candidates}, {"counts", matrix_json(rf.counts)}}}};
        std::vector<std::pair<std::string, double>> ordered(fit.worths.worths.begin(), fit.worths.worths.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
        out << problem << (fit.converged ? "" : " (NOT CONVERGED)") << ':';
        for (const auto& [c, w] : ordered) out << ' ' << c << '=' << num(w);
        out << '\n';
    }
    if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) make_dir(parent.string());
    write_file(out_path, write_report(rep));
    if (!all_converged) throw DegenerateError("fit did not converge within max_iters; worths written and flagged");
    return kSuccess;
}

// ---------------------------------------------------------------------------
// effectiveness
// ---------------------------------------------------------------------------

int effectiveness_cmd(const std::string& path, const std::string& out_dir, std::ostream& out) {
    const auto rows = parse_likert(read_role(path, FileFormat::likert_csv));
    if (rows.empty()) throw InputError(path + " has no ratings");
    make_dir(out_dir);
    Report rep;
    rep["criteria"] = Report::array();
    for (auto c : kCriteria) rep["criteria"].push_back(std::string(c));
    rep["renderings"] = Report::object();
    std::map<std::string, int> experts;
    for (const auto& r : rows) ++experts[r.rendering_id];
    for (const auto& profile : profiles_from_rows(rows)) {
        const auto res = effectiveness(profile);
        const auto svg = "spider_" + safe_name(profile.rendering_id) + ".svg";
        write_file(in_dir(out_dir, svg), spider_svg(profile, res));
        std::vector<double> means(profile.means.data(), profile.means.data() + profile.means.size());
        rep["renderings"][profile.rendering_id] = {{"means", means},
                                                   {"area", res.area},
                                                   {"max_area", res.max_area},
                                                   {"effectiveness", res.effectiveness},
                                                   {"experts", experts[profile.rendering_id]},
                                                   {"chart", svg}};
        out << profile.rendering_id << ": " << num(res.effectiveness, 2) << "%\n";
    }
    write_file(in_dir(out_dir, "effectiveness.json"), write_report(rep));
    return kSuccess;
}

// ---------------------------------------------------------------------------
// pipeline and feedback
// ---------------------------------------------------------------------------

int pipeline_cmd(const std::string& inputs_dir, const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir, std::string memory_path, std::ostream& out) {
    auto config = config_path.empty() ? default_pipeline_config() : parse_pipeline_config(read_file(config_path));
    apply_env_overrides(config);
    const auto inputs = load_pipeline_inputs(inputs_dir);
    const auto run = run_pipeline(inputs, config, seed);
    make_dir(out_dir);
    const auto dir = write_run_directory(run, out_dir);

    for (const auto& e : run.stage_log) {
        out << e.stage << ": " << to_string(e.status);
        if (!e.message.empty()) out << " (" << e.message << ')';
        out << '\n';
    }
    out << "run directory: " << dir << '\n';
    if (run.selection) {
        if (memory_path.empty()) memory_path = in_dir(out_dir, "memory.jsonl");
        MemoryStore memory(memory_path);
        record_feedback(run, *run.selection, memory, utc_timestamp());
        out << "selection " << run.selection->rendering_id << " recorded in " << memory_path << '\n';
    }
    return run.complete() ? kSuccess : kStageFailure;
}

int feedback_cmd(const std::string& run_dir, const std::string& selection, const std::string& comment,
                 std::string memory_path, std::ostream& out) {
    const auto record = read_report(read_file(in_dir(run_dir, "run.json")));
    if (memory_path.empty()) {
        memory_path = (fs::path(run_dir).lexically_normal().parent_path() / "memory.jsonl").string();
    }
    MemoryStore memory(memory_path);
    record_feedback(record, Selection{selection, comment}, memory, utc_timestamp());
    out << "recorded " << selection << " for run " << record.at("run_id").get<std::string>() << " (" << memory.size()
        << " entries in " << memory_path << ")\n";
    return kSuccess;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string kind;
    std::string out_dir;
    std::uint64_t seed = 1;
    double coupling = FreeViewingConfig{}.coupling;
    int experts = 16;
    int images = 4;
};

void write_viewing(const SynthDataset& data, const std::string& dir) {
    write_file(in_dir(dir, "grid.json"), write_grid_spec(data.grid));
    write_file(in_dir(dir, "gaze.jsonl"), write_gaze_log(data.events));
    write_file(in_dir(dir, "ratings.ratings.csv"), write_ratings(data.ratings));
    write_file(in_dir(dir, "session_lengths.csv"), write_session_lengths(data.session_lengths));
    if (!data.groups.empty()) write_file(in_dir(dir, "groups.csv"), write_groups(data.groups));
}

int synth_cmd(const SynthArgs& a, std::ostream& out) {
    make_dir(a.out_dir);
    if (a.kind == "free") {
        FreeViewingConfig c;
        c.coupling = a.coupling;
        c.seed = a.seed;
        write_viewing(synth_free_viewing(c), a.out_dir);
    } else if (a.kind == "primed") {
        PrimedViewingConfig c;
        c.seed = a.seed;
        write_viewing(synth_primed_viewing(c), a.out_dir);
    } else if (a.kind == "ballots") {
        // Four problems, four candidates each, with a clear favourite in each.
        const std::map<std::string, std::map<std::string, double>> worths = {
            {"S1", {{"S1R1", 0.55}, {"S1R2", 0.2}, {"S1R3", 0.15}, {"S1R4", 0.1}}},
            {"S2", {{"S2R1", 0.1}, {"S2R2", 0.6}, {"S2R3", 0.2}, {"S2R4", 0.1}}},
            {"S3", {{"S3R1", 0.25}, {"S3R2", 0.25}, {"S3R3", 0.4}, {"S3R4", 0.1}}},
            {"S4", {{"S4R1", 0.3}, {"S4R2", 0.1}, {"S4R3", 0.1}, {"S4R4", 0.5}}},
        };
        write_file(in_dir(a.out_dir, "experts.ballots.csv"), write_ballots(synth_ballots(worths, a.experts, a.seed)));
    } else if (a.kind == "likert") {
        std::vector<std::string> renderings;
        for (int s = 1; s <= 4; ++s) {
            for (int r = 1; r <= 4; ++r) renderings.push_back("S" + std::to_string(s) + "R" + std::to_string(r));
        }
        write_file(in_dir(a.out_dir, "experts.likert.csv"), write_likert(synth_likert(renderings, a.experts, a.seed)));
    } else if (a.kind == "pipeline") {
        write_pipeline_fixture(synth_pipeline_fixture(a.images, a.seed), a.out_dir);
        std::string conf = "# all stand-in agents, no network\nrun_id = fixture\n";
        for (const auto& [name, b] : default_pipeline_config().bindings) {
            conf += "agent." + name + " = " + std::string(to_string(b.kind)) + "\n";
        }
        write_file(in_dir(a.out_dir, "mock.conf"), conf);
    } else {
        throw InputError("unknown synth kind '" + a.kind + "'");
    }
    out << "wrote " << a.kind << " dataset to " << a.out_dir << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaze analytics, expert worthiness and effectiveness scoring, and the design pipeline", "gazeform"};
    app.require_subcommand(1, 1);

    AnalyzeArgs an;
    auto* analyze_cmd = app.add_subcommand("analyze", "Correlation, t-test, commonality, disagreement, time split, heatmaps");
    analyze_cmd->add_option("--gaze", an.gaze, "Gaze log (.jsonl)")->required();
    analyze_cmd->add_option("--ratings", an.ratings, "Ratings (.ratings.csv)")->required();
    analyze_cmd->add_option("--grid", an.grid, "Stimulus grid spec (JSON)")->required();
    analyze_cmd->add_option("--out", an.out_dir, "Output directory")->required();
    analyze_cmd->add_option("--session-lengths", an.session_lengths, "CSV session_id,length_s (default: last t_end)");
    analyze_cmd->add_option("--groups", an.groups, "CSV participant_id,group for the emotion distribution");
    analyze_cmd->add_option("--lexicon", an.lexicon, "Emotion lexicon JSON {emotion: [keywords]}");
    analyze_cmd->add_option("--heatmap-top", an.heatmap_top, "Heatmaps for the N most-viewed images")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--cohort", an.cohort, "Cohort size T for disagreement (default: distinct raters)")
        ->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--gap-tolerance", an.dwell.gap_tolerance, "Episode merge gap, seconds")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--min-fixation", an.dwell.min_fixation, "Shortest counted episode, seconds")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    analyze_cmd->add_option("--bandwidth", an.heatmap.bandwidth, "Heatmap sigma as a fraction of the diagonal")
        ->capture_default_str()->check(CLI::PositiveNumber);
    int resolution = HeatmapOptions{}.width;
    analyze_cmd->add_option("--resolution", resolution, "Heatmap width and height in cells")
        ->capture_default_str()->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--ttest", an.ttest, "welch or pooled")
        ->capture_default_str()->check(CLI::IsMember({"welch", "pooled"}));

    std::string ballots_path;
    std::string worth_out;
    FitConfig fit;
    std::uint64_t fit_seed = 0;
    auto* worth_cmd = app.add_subcommand("worthiness", "Plackett-Luce worths from expert ballots");
    worth_cmd->add_option("--ballots", ballots_path, "Ballots (.ballots.csv)")->required();
    worth_cmd->add_option("--out", worth_out, "Report path (JSON)")->required();
    worth_cmd->add_option("--max-iters", fit.max_iters)->capture_default_str()->check(CLI::PositiveNumber);
    worth_cmd->add_option("--step", fit.step, "Initial step size")->capture_default_str()->check(CLI::PositiveNumber);
    worth_cmd->add_option("--grad-tol", fit.grad_tol)->capture_default_str()->check(CLI::PositiveNumber);
    worth_cmd->add_option("--ridge", fit.ridge, "Prior weight on centred log-worths")
        ->capture_default_str()->check(CLI::NonNegativeNumber);
    auto* seed_opt = worth_cmd->add_option("--seed", fit_seed, "Recorded in the report");

    std::string likert_path;
    std::string eff_out;
    auto* eff_cmd = app.add_subcommand("effectiveness", "Spider-polygon effectiveness from Likert ratings");
    eff_cmd->add_option("--likert", likert_path, "Likert ratings (.likert.csv)")->required();
    eff_cmd->add_option("--out", eff_out, "Output directory")->required();

    std::string inputs_dir;
    std::string config_path;
    std::string run_out;
    std::string memory_path;
    std::uint64_t run_seed = 0;
    auto* pipe_cmd = app.add_subcommand("pipeline", "Run the staged design pipeline");
    pipe_cmd->add_option("--inputs", inputs_dir, "Directory with problem.txt, images/*.png, gaze.jsonl")->required();
    pipe_cmd->add_option("--config", config_path, "Agent configuration (key = value)");
    pipe_cmd->add_option("--seed", run_seed)->capture_default_str();
    pipe_cmd->add_option("--out", run_out, "Parent directory of the run directory")->required();
    pipe_cmd->add_option("--memory", memory_path, "Feedback memory (default: <out>/memory.jsonl)");

    std::string run_dir;
    std::string selection;
    std::string comment;
    std::string fb_memory;
    auto* fb_cmd = app.add_subcommand("feedback", "Record the designer's choice of rendering");
    fb_cmd->add_option("--run-dir", run_dir, "Run directory holding run.json")->required();
    fb_cmd->add_option("--select", selection, "Rendering id")->required();
    fb_cmd->add_option("--comment", comment);
    fb_cmd->add_option("--memory", fb_memory, "Feedback memory (default: next to the run directory)");

    SynthArgs sy;
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic dataset");
    synth->add_option("--kind", sy.kind, "free, primed, ballots, likert or pipeline")
        ->required()->check(CLI::IsMember({"free", "primed", "ballots", "likert", "pipeline"}));
    synth->add_option("--out", sy.out_dir, "Output directory")->required();
    synth->add_option("--seed", sy.seed)->capture_default_str();
    synth->add_option("--coupling", sy.coupling, "Dwell seconds per rating point (free)")->capture_default_str();
    synth->add_option("--experts", sy.experts, "Experts (ballots, likert)")->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--images", sy.images, "Source images (pipeline)")->capture_default_str()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        if (analyze_cmd->parsed()) {
            an.heatmap.width = an.heatmap.height = resolution;
            return analyze(an, out);
        }
        if (worth_cmd->parsed()) {
            if (seed_opt->count() > 0) fit.seed = fit_seed;
            return worthiness(ballots_path, worth_out, fit, out);
        }
        if (eff_cmd->parsed()) return effectiveness_cmd(likert_path, eff_out, out);
        if (pipe_cmd->parsed()) return pipeline_cmd(inputs_dir, config_path, run_seed, run_out, memory_path, out);
        if (fb_cmd->parsed()) return feedback_cmd(run_dir, selection, comment, fb_memory, out);
        if (synth->parsed()) return synth_cmd(sy, out);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const DegenerateError& e) {
        err << "degenerate: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}

}  // namespace gazeform::cli
