#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gazeform/image.hpp"

namespace gazeform {

// Cylindrical stimulus layout. Cells are row-major from the top-left.
class StimulusGrid {
public:
    struct Cell {
        int row = 0;
        int col = 0;
        friend bool operator==(const Cell&, const Cell&) = default;
    };

    StimulusGrid() = default;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double arc_degrees() const { return arc_degrees_; }
    const std::vector<std::string>& image_ids() const { return image_ids_; }
    std::size_t size() const { return image_ids_.size(); }

    bool contains(const std::string& image_id) const { return index_.contains(image_id); }
    // Throws InputError for unknown ids.
    std::size_t index_of(const std::string& image_id) const;

    Cell cell(std::size_t index) const;
    std::size_t index(Cell cell) const;
    // Horizontal angle of a cell centre, degrees, zero at the middle of the arc.
    double azimuth(std::size_t index) const;

    friend bool operator==(const StimulusGrid& a, const StimulusGrid& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.arc_degrees_ == b.arc_degrees_ &&
               a.image_ids_ == b.image_ids_;
    }

    friend StimulusGrid build_grid(int rows, int cols, double arc_degrees,
                                   std::vector<std::string> image_ids);

private:
    int rows_ = 0;
    int cols_ = 0;
    double arc_degrees_ = 120.0;
    std::vector<std::string> image_ids_;
    std::map<std::string, std::size_t> index_;
};

StimulusGrid build_grid(int rows, int cols, double arc_degrees, std::vector<std::string> image_ids);

struct GazeEvent {
    std::string session_id;
    std::string image_id;
    double t_start = 0.0;  // seconds since session start
    double t_end = 0.0;
    double u = 0.0;  // normalized image coordinates
    double v = 0.0;

    double duration() const { return t_end - t_start; }
    friend bool operator==(const GazeEvent&, const GazeEvent&) = default;
};

// Throws InputError when t_end <= t_start or (u, v) leaves the unit square.
void check_event(const GazeEvent& e);

// One participant's events, sorted by start time, every image on the grid,
// no overlapping intervals on the same image.
struct Session {
    std::string session_id;
    std::vector<GazeEvent> events;

    friend bool operator==(const Session&, const Session&) = default;
};

Session validate_session(std::vector<GazeEvent> events, const StimulusGrid& grid);

// Splits a mixed log by session id (sessions ordered by id) and validates each.
std::vector<Session> split_sessions(const std::vector<GazeEvent>& events, const StimulusGrid& grid);

struct DwellRecord {
    std::string image_id;
    double total_dwell = 0.0;
    int episode_count = 0;
    double first_visit = 0.0;

    friend bool operator==(const DwellRecord&, const DwellRecord&) = default;
};

enum class Feature { colour, shape, size, orientation, texture };

std::string_view to_string(Feature f);
std::optional<Feature> parse_feature(std::string_view token);

struct RatingRecord {
    std::string participant_id;
    std::string image_id;
    int rating = 3;  // Likert 1..5
    std::set<Feature> liked_features;
    std::optional<std::string> thought;

    friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

struct RankingBallot {
    std::string expert_id;
    std::string problem_id;
    std::vector<std::string> order;  // best first

    friend bool operator==(const RankingBallot&, const RankingBallot&) = default;
};

// Throws InputError if the order repeats or omits a candidate.
void check_permutation(const std::vector<std::string>& order,
                       const std::set<std::string>& candidates);

struct WorthVector {
    std::string problem_id;
    std::map<std::string, double> worths;
    bool normalized = false;
};

inline constexpr std::size_t kCriteriaCount = 8;

inline constexpr std::array<std::string_view, kCriteriaCount> kCriteria = {
    "adherence_to_brief",      "novelty",
    "visual_appeal",           "emotional_resonance",
    "clarity_of_purpose",      "distinctiveness_of_silhouette",
    "implied_materiality",     "proportional_balance",
};

using CriterionVector = Eigen::Matrix<double, kCriteriaCount, 1>;

struct LikertProfile {
    std::string rendering_id;
    CriterionVector means = CriterionVector::Constant(1.0);
};

// Throws InputError unless every mean lies in [1, 5].
void check_profile(const LikertProfile& p);

struct PaletteEntry {
    std::string hex;  // #RRGGBB
    std::string name;
    friend bool operator==(const PaletteEntry&, const PaletteEntry&) = default;
};

struct FeatureMaps {
    Image roi_collage;
    Image edge_collage;
    std::vector<PaletteEntry> palette;
    // Keys are exactly "shape", "texture_style" and "colour".
    std::map<std::string, std::string> descriptors;
};

inline constexpr std::array<std::string_view, 3> kDescriptorKeys = {"colour", "shape",
                                                                   "texture_style"};

bool is_hex_colour(std::string_view s);
void check_feature_maps(const FeatureMaps& maps);

}  // namespace gazeform
