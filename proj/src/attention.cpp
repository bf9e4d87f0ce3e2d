#include "gazeform/attention.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gazeform/error.hpp"
#include "gazeform/stats.hpp"

namespace gazeform {

std::vector<DwellRecord> aggregate_dwell(const Session& session, const DwellOptions& options) {
    struct Episode {
        std::string image_id;
        double start = 0.0;
        double end = 0.0;
        double dwell = 0.0;
    };
    std::map<std::string, DwellRecord> records;
    auto close = [&](const Episode& ep) {
        if (ep.dwell < options.min_fixation) return;
        auto [it, inserted] = records.try_emplace(ep.image_id, DwellRecord{ep.image_id, 0.0, 0, ep.start});
        it->second.total_dwell += ep.dwell;
        it->second.episode_count += 1;
        it->second.first_visit = std::min(it->second.first_visit, ep.start);
    };

    std::optional<Episode> current;
    for (const auto& e : session.events) {
        if (current && current->image_id == e.image_id && e.t_start - current->end < options.gap_tolerance) {
            current->dwell += e.duration();
            current->end = std::max(current->end, e.t_end);
            continue;
        }
        if (current) close(*current);
        current = Episode{e.image_id, e.t_start, e.t_end, e.duration()};
    }
    if (current) close(*current);

    std::vector<DwellRecord> out;
    out.reserve(records.size());
    for (auto& [id, rec] : records) out.push_back(std::move(rec));
    return out;
}

CommonalityMatrix viewing_commonality(const std::vector<ParticipantDwell>& sessions, const StimulusGrid& grid) {
    CommonalityMatrix res;
    std::vector<std::vector<std::size_t>> viewed;
    for (const auto& s : sessions) {
        std::vector<std::size_t> idx;
        for (const auto& d : s.dwell) {
            if (d.total_dwell > 0.0) idx.push_back(grid.index_of(d.image_id));
        }
        if (idx.empty()) {
            res.excluded.push_back(s.participant_id);
            continue;
        }
        res.participant_ids.push_back(s.participant_id);
        viewed.push_back(std::move(idx));
    }
    const auto m = static_cast<Eigen::Index>(res.participant_ids.size());
    if (m < 2) throw DegenerateError("commonality needs at least two sessions that viewed something");

    Eigen::MatrixXd views = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(grid.size()));
    for (Eigen::Index p = 0; p < m; ++p) {
        for (auto i : viewed[static_cast<std::size_t>(p)]) views(p, static_cast<Eigen::Index>(i)) = 1.0;
    }
    const Eigen::MatrixXd gram = views * views.transpose();

    res.cosine = Eigen::MatrixXd::Identity(m, m);
    res.common_counts = Eigen::MatrixXi::Zero(m, m);
    std::vector<double> pair_cos;
    double common_sum = 0.0;
    for (Eigen::Index a = 0; a < m; ++a) {
        res.common_counts(a, a) = static_cast<int>(std::lround(gram(a, a)));
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const long common = std::lround(gram(a, b));
            const double cos = static_cast<double>(common) / std::sqrt(gram(a, a) * gram(b, b));
            res.cosine(a, b) = res.cosine(b, a) = cos;
            res.common_counts(a, b) = res.common_counts(b, a) = static_cast<int>(common);
            pair_cos.push_back(cos);
            common_sum += static_cast<double>(common);
        }
    }
    const auto pairs = Eigen::Map<const Eigen::VectorXd>(pair_cos.data(), static_cast<Eigen::Index>(pair_cos.size()));
    res.median_cosine = median(pairs);
    res.mean_cosine = pairs.mean();
    res.mean_common = common_sum / static_cast<double>(pair_cos.size());
    return res;
}

std::vector<DisagreementScore> disagreement_scores(const std::map<std::string, std::vector<int>>& ratings,
                                                   int cohort_size) {
    if (cohort_size <= 0) throw InputError("cohort size T must be positive");
    std::vector<DisagreementScore> out;
    for (const auto& [image, rs] : ratings) {
        if (rs.empty()) continue;
        if (static_cast<int>(rs.size()) > cohort_size) {
            throw InputError("image '" + image + "' has more raters than the cohort size");
        }
        const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXi>(rs.data(), static_cast<Eigen::Index>(rs.size()))
                                      .cast<double>();
        DisagreementScore d;
        d.image_id = image;
        d.n = static_cast<int>(rs.size());
        d.cohort = cohort_size;
        d.sigma = std::sqrt((r.array() - r.mean()).square().mean());
        d.score = d.sigma / 2.0 * (static_cast<double>(d.n) / cohort_size);
        out.push_back(d);
    }
    return out;
}

DisagreementSummary summarize(const std::vector<DisagreementScore>& scores) {
    DisagreementSummary s;
    if (scores.empty()) return s;
    double sum = 0.0;
    double weighted = 0.0;
    double weights = 0.0;
    for (const auto& d : scores) {
        sum += d.score;
        weighted += d.score * d.n;
        weights += d.n;
    }
    s.mean = sum / static_cast<double>(scores.size());
    s.weighted_mean = weighted / weights;
    return s;
}

TimeSplit session_time_split(const std::vector<DwellRecord>& dwell, double session_length) {
    TimeSplit t;
    for (const auto& d : dwell) t.fixation_time += d.total_dwell;
    t.browse_time = session_length - t.fixation_time;
    if (t.browse_time < 0.0) {
        throw InputError("dwell (" + std::to_string(t.fixation_time) + " s) exceeds session length (" +
                         std::to_string(session_length) + " s)");
    }
    return t;
}

Eigen::MatrixXd image_heatmap(std::span<const GazePoint> points, const HeatmapOptions& options) {
    if (options.width <= 0 || options.height <= 0) throw InputError("heatmap resolution must be positive");
    if (!(options.bandwidth > 0.0)) throw InputError("heatmap bandwidth must be positive");
    const int w = options.width;
    const int h = options.height;
    const double sigma = options.bandwidth * std::hypot(w, h);
    Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(h, w);

    auto kernel = [sigma](int cells, double centre) {
        Eigen::VectorXd k(cells);
        for (int i = 0; i < cells; ++i) {
            const double d = (i + 0.5) - centre;
            k(i) = std::exp(-d * d / (2.0 * sigma * sigma));
        }
        const double total = k.sum();
        if (total > 0.0) return Eigen::VectorXd(k / total);
        k.setZero();
        k(std::clamp(static_cast<int>(centre), 0, cells - 1)) = 1.0;
        return k;
    };

    for (const auto& p : points) {
        if (!(p.u >= 0.0 && p.u <= 1.0 && p.v >= 0.0 && p.v <= 1.0)) throw InputError("gaze point outside [0,1]^2");
        const Eigen::VectorXd kx = kernel(w, p.u * w);
        const Eigen::VectorXd ky = kernel(h, p.v * h);
        grid.noalias() += p.weight * ky * kx.transpose();
    }
    return grid;
}

std::string grid_to_csv(const Eigen::MatrixXd& grid) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.cols(); ++c) os << (c ? "," : "") << grid(r, c);
        os << '\n';
    }
    return os.str();
}

EmotionLexicon default_emotion_lexicon() {
    return {
        {"anger", {"rage", "angry", "fury", "furious", "boiling", "hate", "hostile"}},
        {"beauty", {"beauty", "beautiful", "elegant", "graceful", "lovely"}},
        {"calm", {"calm", "serene", "peaceful", "quiet", "tranquil", "still"}},
        {"desire", {"desire", "longing", "want", "crave", "yearning"}},
        {"fear", {"fear", "afraid", "scary", "dread", "horrible", "terrifying", "dark"}},
        {"joy", {"joy", "happy", "delight", "cheerful", "bright", "playful", "fun"}},
        {"love", {"love", "warm", "tender", "affection", "cozy"}},
        {"sadness", {"sad", "lonely", "grief", "sorrow", "melancholy", "gloomy", "empty"}},
    };
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char ch : text) {
        if (std::isalnum(ch) || ch == '\'' || ch >= 0x80) {
            cur.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

EmotionCounts emotion_keyword_distribution(const std::vector<std::pair<std::string, std::string>>& thoughts,
                                           const EmotionLexicon& lexicon) {
    if (lexicon.empty()) throw InputError("emotion lexicon is empty");
    EmotionCounts res;
    std::vector<std::vector<std::vector<std::string>>> patterns;
    for (const auto& [emotion, words] : lexicon) {
        res.emotions.push_back(emotion);
        auto& pats = patterns.emplace_back();
        for (const auto& w : words) {
            auto toks = tokenize_words(w);
            if (!toks.empty()) pats.push_back(std::move(toks));
        }
    }
    std::map<std::string, Eigen::Index> row_of;
    for (const auto& [phrase, text] : thoughts) row_of.emplace(phrase, 0);
    for (auto& [phrase, row] : row_of) {
        row = static_cast<Eigen::Index>(res.phrase_ids.size());
        res.phrase_ids.push_back(phrase);
    }
    res.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(res.phrase_ids.size()),
                                       static_cast<Eigen::Index>(res.emotions.size()));
    for (const auto& [phrase, text] : thoughts) {
        const auto tokens = tokenize_words(text);
        const Eigen::Index row = row_of.at(phrase);
        for (std::size_t e = 0; e < patterns.size(); ++e) {
            int count = 0;
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                for (const auto& pat : patterns[e]) {
                    if (i + pat.size() <= tokens.size() &&
                        std::equal(pat.begin(), pat.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                        ++count;
                        break;
                    }
                }
            }
            res.counts(row, static_cast<Eigen::Index>(e)) += count;
        }
    }
    return res;
}

}  // namespace gazeform
