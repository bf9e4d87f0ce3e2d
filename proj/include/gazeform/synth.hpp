#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gazeform/attention.hpp"
#include "gazeform/image.hpp"
#include "gazeform/model.hpp"
#include "gazeform/session_io.hpp"

namespace gazeform {

// Synthetic datasets standing in for the unpublished study data.

struct SynthDataset {
    StimulusGrid grid;
    std::vector<GazeEvent> events;
    std::vector<RatingRecord> ratings;
    std::map<std::string, double> session_lengths;
    std::map<std::string, std::string> groups;  // participant -> stimulus phrase group
};

// Free exploration: every participant views a random subset; per-image appeal
// drives ratings and dwell = base + coupling * rating + noise.
struct FreeViewingConfig {
    int rows = 6;
    int cols = 25;
    int sessions = 30;
    int views_min = 30;
    int views_max = 60;
    double coupling = 1.0;  // seconds of dwell per rating point
    double base = 3.0;
    double noise_sd = 2.0;
    double session_length = 600.0;
    std::uint64_t seed = 1;
};

SynthDataset synth_free_viewing(const FreeViewingConfig& config);

// Stimulus-driven viewing: participants in the same group mostly view that
// group's target subset.
struct PrimedViewingConfig {
    int rows = 6;
    int cols = 25;
    int groups = 6;
    int sessions_per_group = 5;
    int targets_per_group = 20;
    double target_view_prob = 0.8;
    int off_target_views = 5;
    double session_length = 600.0;
    std::uint64_t seed = 1;
};

SynthDataset synth_primed_viewing(const PrimedViewingConfig& config);

// Per-image averages of rating and dwell over the images that were both rated
// and viewed, in grid order.
struct ImageAverages {
    std::vector<std::string> image_ids;
    Eigen::VectorXd rating;
    Eigen::VectorXd dwell;
};

ImageAverages image_averages(const SynthDataset& data);
ImageAverages image_averages(const StimulusGrid& grid, const std::vector<GazeEvent>& events,
                             const std::vector<RatingRecord>& ratings, const DwellOptions& options = {});

// Expert ballots for several problems sampled from fixed worths.
std::vector<RankingBallot> synth_ballots(const std::map<std::string, std::map<std::string, double>>& worths,
                                         int experts, std::uint64_t seed);

std::vector<LikertRow> synth_likert(const std::vector<std::string>& renderings, int experts, std::uint64_t seed);

// Pipeline input directory content: procedural source images and gaze focused
// on a few hotspots per image.
struct PipelineFixture {
    std::string problem_statement;
    std::map<std::string, Image> images;
    std::vector<GazeEvent> events;
};

PipelineFixture synth_pipeline_fixture(int images, std::uint64_t seed);
void write_pipeline_fixture(const PipelineFixture& fixture, const std::string& dir);

}  // namespace gazeform
