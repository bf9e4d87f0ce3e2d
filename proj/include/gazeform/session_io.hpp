#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gazeform/model.hpp"

namespace gazeform {

enum class FileFormat { gaze_jsonl, ratings_csv, ballots_csv, likert_csv };

std::string_view to_string(FileFormat f);
std::optional<FileFormat> parse_format(std::string_view name);
// Uses compound extensions only (.jsonl, .ratings.csv, .ballots.csv, .likert.csv);
// a bare .csv is ambiguous and yields nullopt.
std::optional<FileFormat> detect_format(std::string_view path);

struct SessionFile {
    std::string path;
    FileFormat format;
};

// Resolves the format of `path`: explicit override first, then the extension.
SessionFile resolve_file(std::string path, std::optional<FileFormat> override_format);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

// Line-delimited JSON objects with keys session_id, image_id, t_start, t_end, u, v.
// A record whose image_id is null or "" is an off-image sample and is dropped.
std::vector<GazeEvent> parse_gaze_log(std::string_view bytes);
std::string write_gaze_log(const std::vector<GazeEvent>& events);

// Header participant_id,image_id,rating,liked_features,thought; features are ';'-joined.
std::vector<RatingRecord> parse_ratings(std::string_view bytes);
std::string write_ratings(const std::vector<RatingRecord>& records);

// Header expert_id,problem_id,rank1,...,rankK with rank1 the best candidate.
std::vector<RankingBallot> parse_ballots(std::string_view bytes);
std::string write_ballots(const std::vector<RankingBallot>& ballots);

struct LikertRow {
    std::string expert_id;
    std::string rendering_id;
    std::array<int, kCriteriaCount> ratings{};

    friend bool operator==(const LikertRow&, const LikertRow&) = default;
};

// Header expert_id,rendering_id followed by the eight criterion columns in fixed order.
std::vector<LikertRow> parse_likert(std::string_view bytes);
std::string write_likert(const std::vector<LikertRow>& rows);

// Header session_id,length_s; lengths in seconds, positive.
std::map<std::string, double> parse_session_lengths(std::string_view bytes);
std::string write_session_lengths(const std::map<std::string, double>& lengths);

// Header participant_id,group; assigns each participant a stimulus phrase group.
std::map<std::string, std::string> parse_groups(std::string_view bytes);
std::string write_groups(const std::map<std::string, std::string>& groups);

// JSON object {"rows", "cols", "arc_degrees" (optional, 120), "image_ids" (row-major)}.
StimulusGrid parse_grid_spec(std::string_view bytes);
std::string write_grid_spec(const StimulusGrid& grid);

using Report = nlohmann::json;

// Canonical serialization: sorted keys, two-space indent, trailing newline.
// Non-finite numbers become {"reason": "nan"|"inf"|"-inf", "value": null}.
std::string write_report(const Report& report);
// Inverse of write_report, restoring non-finite numbers.
Report read_report(std::string_view bytes);

}  // namespace gazeform
