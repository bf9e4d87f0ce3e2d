#include "gazeform/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "gazeform/attention.hpp"
#include "gazeform/error.hpp"
#include "gazeform/plackett_luce.hpp"
#include "gazeform/random.hpp"

namespace gazeform {

namespace {

std::string image_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "img%03d", i);
    return buf;
}

StimulusGrid numbered_grid(int rows, int cols) {
    std::vector<std::string> ids;
    for (int i = 0; i < rows * cols; ++i) ids.push_back(image_name(i));
    return build_grid(rows, cols, 120.0, std::move(ids));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

int likert(double x) { return std::clamp(static_cast<int>(std::lround(x)), 1, 5); }

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Appends one viewing of `image` lasting `dwell` seconds, split into 1-3
// episodes separated by 50 ms (below the default merge tolerance).
double emit_view(std::vector<GazeEvent>& events, const std::string& session, const std::string& image,
                 double dwell, double t, double hu, double hv, Rng& rng) {
    const int parts = rng.uniform_int(1, 3);
    for (int p = 0; p < parts; ++p) {
        const double len = dwell / parts;
        events.push_back({session, image, t, t + len, clamp01(hu + rng.normal(0.0, 0.05)),
                          clamp01(hv + rng.normal(0.0, 0.05))});
        t += len;
        if (p + 1 < parts) t += 0.05;
    }
    return t;
}

void finish_session(SynthDataset& data, const std::string& session, double t, double nominal) {
    data.session_lengths[session] = std::max(nominal, std::ceil(t + 1.0));
}

}  // namespace

SynthDataset synth_free_viewing(const FreeViewingConfig& config) {
    Rng rng(config.seed);
    SynthDataset data;
    data.grid = numbered_grid(config.rows, config.cols);
    const int n_images = static_cast<int>(data.grid.size());
    std::vector<double> appeal(static_cast<std::size_t>(n_images));
    std::vector<std::pair<double, double>> hotspot(static_cast<std::size_t>(n_images));
    for (int i = 0; i < n_images; ++i) {
        appeal[static_cast<std::size_t>(i)] = rng.normal(0.0, 1.0);
        hotspot[static_cast<std::size_t>(i)] = {rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)};
    }
    for (int s = 0; s < config.sessions; ++s) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "P%02d", s + 1);
        const std::string session = buf;
        std::vector<int> order(static_cast<std::size_t>(n_images));
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        const int views = std::min(n_images, rng.uniform_int(config.views_min, config.views_max));
        double t = rng.uniform(1.0, 3.0);
        for (int k = 0; k < views; ++k) {
            const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
            const int rating = likert(3.0 + appeal[i] + rng.normal(0.0, 0.8));
            const double dwell =
                std::max(0.3, config.base + config.coupling * rating + rng.normal(0.0, config.noise_sd));
            const auto& id = data.grid.image_ids()[i];
            t = emit_view(data.events, session, id, dwell, t, hotspot[i].first, hotspot[i].second, rng);
            t += rng.uniform(0.5, 2.5);
            data.ratings.push_back({session, id, rating, {}, std::nullopt});
        }
        finish_session(data, session, t, config.session_length);
    }
    return data;
}

SynthDataset synth_primed_viewing(const PrimedViewingConfig& config) {
    static const std::vector<std::string> kEmotion = {"joy", "love", "calm", "beauty", "anger", "fear"};
    static const std::vector<std::string> kTemplates = {"this brings up %s", "a strong sense of %s",
                                                        "pure %s in the shapes", "%s everywhere I look"};
    Rng rng(config.seed);
    SynthDataset data;
    data.grid = numbered_grid(config.rows, config.cols);
    const int n_images = static_cast<int>(data.grid.size());
    if (config.groups * config.targets_per_group > n_images) throw InputError("target subsets exceed the grid");
    const auto lexicon = default_emotion_lexicon();

    std::vector<int> pool(static_cast<std::size_t>(n_images));
    std::iota(pool.begin(), pool.end(), 0);
    shuffle(pool, rng);

    for (int g = 0; g < config.groups; ++g) {
        const std::string phrase = "phrase" + std::to_string(g + 1);
        const auto& words = lexicon.at(kEmotion[static_cast<std::size_t>(g) % kEmotion.size()]);
        const std::vector<std::string> keywords(words.begin(), words.end());
        std::vector<int> targets(pool.begin() + g * config.targets_per_group,
                                 pool.begin() + (g + 1) * config.targets_per_group);
        std::vector<bool> is_target(static_cast<std::size_t>(n_images), false);
        for (int i : targets) is_target[static_cast<std::size_t>(i)] = true;
        std::vector<int> others;
        for (int i = 0; i < n_images; ++i) {
            if (!is_target[static_cast<std::size_t>(i)]) others.push_back(i);
        }
        for (int s = 0; s < config.sessions_per_group; ++s) {
            const std::string session = "G" + std::to_string(g + 1) + "P" + std::to_string(s + 1);
            data.groups[session] = phrase;
            std::vector<int> viewed;
            for (int i : targets) {
                if (rng.uniform() < config.target_view_prob) viewed.push_back(i);
            }
            shuffle(others, rng);
            for (int k = 0; k < config.off_target_views; ++k) viewed.push_back(others[static_cast<std::size_t>(k)]);
            shuffle(viewed, rng);
            double t = rng.uniform(1.0, 3.0);
            for (int i : viewed) {
                const bool target = is_target[static_cast<std::size_t>(i)];
                const int rating = target ? likert(4.4 + rng.normal(0.0, 0.4)) : rng.uniform_int(1, 5);
                const double dwell = target ? std::max(0.5, 6.0 + rng.normal(0.0, 1.5)) : rng.uniform(0.4, 2.0);
                const auto& id = data.grid.image_ids()[static_cast<std::size_t>(i)];
                t = emit_view(data.events, session, id, dwell, t, rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng);
                t += rng.uniform(0.5, 2.5);
                std::optional<std::string> thought;
                if (target) {
                    char text[96];
                    const auto& tmpl = kTemplates[static_cast<std::size_t>(rng.uniform_int(0, 3))];
                    const auto& word = keywords[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(keywords.size()) - 1))];
                    std::snprintf(text, sizeof text, tmpl.c_str(), word.c_str());
                    thought = text;
                }
                data.ratings.push_back({session, id, rating, {}, thought});
            }
            finish_session(data, session, t, config.session_length);
        }
    }
    return data;
}

ImageAverages image_averages(const StimulusGrid& grid, const std::vector<GazeEvent>& events,
                             const std::vector<RatingRecord>& ratings, const DwellOptions& options) {
    std::map<std::string, std::pair<double, int>> dwell;
    for (const auto& session : split_sessions(events, grid)) {
        for (const auto& d : aggregate_dwell(session, options)) {
            if (d.total_dwell <= 0.0) continue;
            auto& acc = dwell[d.image_id];
            acc.first += d.total_dwell;
            acc.second += 1;
        }
    }
    std::map<std::string, std::pair<double, int>> rating;
    for (const auto& r : ratings) {
        auto& acc = rating[r.image_id];
        acc.first += r.rating;
        acc.second += 1;
    }
    ImageAverages out;
    std::vector<double> rs, ds;
    for (const auto& id : grid.image_ids()) {
        auto d = dwell.find(id);
        auto r = rating.find(id);
        if (d == dwell.end() || r == rating.end()) continue;
        out.image_ids.push_back(id);
        rs.push_back(r->second.first / r->second.second);
        ds.push_back(d->second.first / d->second.second);
    }
    out.rating = Eigen::Map<Eigen::VectorXd>(rs.data(), static_cast<Eigen::Index>(rs.size()));
    out.dwell = Eigen::Map<Eigen::VectorXd>(ds.data(), static_cast<Eigen::Index>(ds.size()));
    return out;
}

ImageAverages image_averages(const SynthDataset& data) {
    return image_averages(data.grid, data.events, data.ratings);
}

std::vector<RankingBallot> synth_ballots(const std::map<std::string, std::map<std::string, double>>& worths,
                                         int experts, std::uint64_t seed) {
    std::vector<RankingBallot> out;
    std::uint64_t offset = 0;
    for (const auto& [problem, w] : worths) {
        WorthVector wv{problem, w, false};
        auto ballots = sample_ballots(wv, experts, seed + offset++);
        for (std::size_t i = 0; i < ballots.size(); ++i) ballots[i].expert_id = "e" + std::to_string(i + 1);
        out.insert(out.end(), ballots.begin(), ballots.end());
    }
    return out;
}

std::vector<LikertRow> synth_likert(const std::vector<std::string>& renderings, int experts, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LikertRow> rows;
    for (const auto& rendering : renderings) {
        const double quality = rng.uniform(2.0, 4.5);
        for (int e = 0; e < experts; ++e) {
            LikertRow row;
            row.expert_id = "e" + std::to_string(e + 1);
            row.rendering_id = rendering;
            for (auto& v : row.ratings) v = likert(quality + rng.normal(0.0, 0.7));
            rows.push_back(row);
        }
    }
    return rows;
}

PipelineFixture synth_pipeline_fixture(int images, std::uint64_t seed) {
    if (images < 1) throw InputError("fixture needs at least one image");
    Rng rng(seed);
    PipelineFixture fx;
    fx.problem_statement = "Design a portable music player that fuses retro 1970s warmth with a futuristic silhouette.";
    constexpr int kSize = 160;
    const std::string session = "designer";
    double t = 1.0;
    for (int i = 0; i < images; ++i) {
        const std::string id = image_name(i);
        Image img(kSize, kSize, 3);
        const std::array<int, 3> bg0 = {rng.uniform_int(20, 120), rng.uniform_int(20, 120), rng.uniform_int(20, 120)};
        const std::array<int, 3> bg1 = {rng.uniform_int(120, 235), rng.uniform_int(120, 235), rng.uniform_int(120, 235)};
        for (int y = 0; y < kSize; ++y) {
            for (int x = 0; x < kSize; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const double f = static_cast<double>(y) / (kSize - 1);
                    img.at(x, y, c) = static_cast<std::uint8_t>(std::lround(bg0[static_cast<std::size_t>(c)] * (1 - f) +
                                                                          bg1[static_cast<std::size_t>(c)] * f));
                }
            }
        }
        // A few flat-coloured discs and bars; gaze concentrates on the discs.
        std::vector<std::pair<double, double>> hotspots;
        const int shapes = rng.uniform_int(2, 3);
        for (int s = 0; s < shapes; ++s) {
            const std::array<int, 3> col = {rng.uniform_int(0, 255), rng.uniform_int(0, 255), rng.uniform_int(0, 255)};
            const double cx = rng.uniform(0.2, 0.8) * kSize;
            const double cy = rng.uniform(0.2, 0.8) * kSize;
            const double radius = rng.uniform(0.08, 0.16) * kSize;
            const bool disc = s < 2;
            for (int y = 0; y < kSize; ++y) {
                for (int x = 0; x < kSize; ++x) {
                    const double dx = x + 0.5 - cx;
                    const double dy = y + 0.5 - cy;
                    const bool inside = disc ? dx * dx + dy * dy <= radius * radius
                                             : std::fabs(dx) <= 2.0 * radius && std::fabs(dy) <= 0.4 * radius;
                    if (!inside) continue;
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(col[static_cast<std::size_t>(c)]);
                }
            }
            if (disc) hotspots.emplace_back(cx / kSize, cy / kSize);
        }
        fx.images.emplace(id, std::move(img));
        const int fixations = 30 - 4 * std::min(i, 5);
        for (int f = 0; f < fixations; ++f) {
            const auto& [hu, hv] = hotspots[static_cast<std::size_t>(f) % hotspots.size()];
            const double len = rng.uniform(0.25, 0.6);
            fx.events.push_back({session, id, t, t + len, clamp01(hu + rng.normal(0.0, 0.02)),
                                 clamp01(hv + rng.normal(0.0, 0.02))});
            t += len + rng.uniform(0.15, 0.6);
        }
        t += 2.0;
    }
    return fx;
}

void write_pipeline_fixture(const PipelineFixture& fixture, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "images");
    write_file((fs::path(dir) / "problem.txt").string(), fixture.problem_statement + "\n");
    for (const auto& [id, img] : fixture.images) write_png(img, (fs::path(dir) / "images" / (id + ".png")).string());
    write_file((fs::path(dir) / "gaze.jsonl").string(), write_gaze_log(fixture.events));
}

}  // namespace gazeform
