#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gazeform/model.hpp"

namespace gazeform {

struct DwellOptions {
    // Episodes on the same image closer than this merge into one.
    double gap_tolerance = 0.1;
    // Merged episodes shorter than this are glances and do not count.
    double min_fixation = 0.2;
};

// Per-image dwell for one validated session, ordered by image id.
std::vector<DwellRecord> aggregate_dwell(const Session& session, const DwellOptions& options = {});

struct ParticipantDwell {
    std::string participant_id;
    std::vector<DwellRecord> dwell;
};

struct CommonalityMatrix {
    std::vector<std::string> participant_ids;
    Eigen::MatrixXd cosine;
    Eigen::MatrixXi common_counts;
    // Participants that viewed nothing; they are left out of the matrices.
    std::vector<std::string> excluded;
    double median_cosine = 0.0;  // over distinct pairs
    double mean_cosine = 0.0;
    double mean_common = 0.0;
};

// Binary viewing vectors over the grid (viewed iff total_dwell > 0) and their
// pairwise cosine similarity and common-image counts.
CommonalityMatrix viewing_commonality(const std::vector<ParticipantDwell>& sessions,
                                      const StimulusGrid& grid);

struct DisagreementScore {
    std::string image_id;
    double sigma = 0.0;  // population standard deviation of the ratings
    int n = 0;
    int cohort = 0;
    double score = 0.0;
};

// D = sigma / 2 * n / T for every image with at least one rating.
std::vector<DisagreementScore> disagreement_scores(const std::map<std::string, std::vector<int>>& ratings,
                                                   int cohort_size);

struct DisagreementSummary {
    double mean = 0.0;           // unweighted over images
    double weighted_mean = 0.0;  // weighted by viewer count n
};

DisagreementSummary summarize(const std::vector<DisagreementScore>& scores);

struct TimeSplit {
    double fixation_time = 0.0;
    double browse_time = 0.0;
};

TimeSplit session_time_split(const std::vector<DwellRecord>& dwell, double session_length);

struct GazePoint {
    double u = 0.0;
    double v = 0.0;
    double weight = 0.0;  // episode duration, seconds
};

struct HeatmapOptions {
    int width = 256;
    int height = 256;
    double bandwidth = 0.02;  // Gaussian sigma as a fraction of the grid diagonal
};

// Duration-weighted Gaussian density; rows index v, columns index u. Each kernel
// is renormalized inside the grid so the total equals the summed weights.
Eigen::MatrixXd image_heatmap(std::span<const GazePoint> points, const HeatmapOptions& options = {});

std::string grid_to_csv(const Eigen::MatrixXd& grid);

using EmotionLexicon = std::map<std::string, std::set<std::string>>;

EmotionLexicon default_emotion_lexicon();

struct EmotionCounts {
    std::vector<std::string> phrase_ids;
    std::vector<std::string> emotions;
    Eigen::MatrixXi counts;  // phrase x emotion
};

// Case-insensitive whole-word matching, one count per occurrence and emotion.
// Keywords may span several words.
EmotionCounts emotion_keyword_distribution(const std::vector<std::pair<std::string, std::string>>& thoughts,
                                           const EmotionLexicon& lexicon);

std::vector<std::string> tokenize_words(std::string_view text);

}  // namespace gazeform
