#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gazeform/features.hpp"
#include "gazeform/image.hpp"
#include "gazeform/model.hpp"
#include "gazeform/session_io.hpp"

namespace gazeform {

inline constexpr std::array<std::string_view, 9> kAgentNames = {
    "roi-extraction",         "shape-extraction",  "colour-extraction",
    "shape-descriptor",       "style-texture-descriptor", "colour-descriptor",
    "sketch-generator",       "rendering-generator", "feedback"};

// Pseudo-stage between generation and feedback where the designer is shown
// the outputs. It has no agent and does not appear in the stage log.
inline constexpr std::string_view kPresentStage = "present";

bool is_agent_name(std::string_view name);

enum class AgentKind { builtin, mock, external };

std::string_view to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view text);  // throws InputError

struct AgentBinding {
    std::string agent;
    AgentKind kind = AgentKind::mock;
    std::string endpoint;  // external agents only
    bool inject_failure = false;
};

struct PipelineConfig {
    std::string run_id = "run";
    std::map<std::string, AgentBinding> bindings;
    double timeout_s = 30.0;
    int variants = 2;
    int palette_k = 5;
    EdgeOptions edges;
    // Designer choice used by a builtin feedback agent.
    std::string selection;
    std::string comment;
};

// Extraction agents builtin, everything else mock.
PipelineConfig default_pipeline_config();

// Parses the `key = value` format (one pair per line, `#` starts a comment).
// Keys:
//   run_id, timeout_s, variants, palette_k, edge_low, edge_high,
//   selection, comment,
//   agent.<name> = builtin | mock | external
//   agent.<name>.endpoint = http://host:port/path
//   agent.<name>.fail = true | false
// Unknown keys and kinds an agent cannot take are rejected with the line number.
PipelineConfig parse_pipeline_config(std::string_view text);

// GAZEFORM_TIMEOUT_S and GAZEFORM_ENDPOINT_<AGENT> (agent name upper-cased,
// dashes as underscores) override the file. `lookup` defaults to getenv.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
void apply_env_overrides(PipelineConfig& config, const EnvLookup& lookup = {});

struct PipelinePlan {
    // Stages grouped by dependency level; stages in one level may run together.
    std::vector<std::vector<std::string>> levels;
    std::map<std::string, std::vector<std::string>> depends_on;

    friend bool operator==(const PipelinePlan&, const PipelinePlan&) = default;
};

// Throws InputError naming the first unbound agent.
PipelinePlan plan(const std::string& problem_statement, const std::map<std::string, AgentBinding>& bindings);

// ---------------------------------------------------------------------------
// Agents
// ---------------------------------------------------------------------------

struct AgentRequest {
    std::string agent;
    std::map<std::string, std::string> text;
    std::map<std::string, Image> images;
    std::uint64_t seed = 0;
};

struct AgentResponse {
    std::string status = "ok";
    std::string text;
    std::optional<Image> image;
};

class AgentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Agent {
public:
    virtual ~Agent() = default;
    // Throws AgentError on failure.
    virtual AgentResponse call(const AgentRequest& request) = 0;
};

// Deterministic stand-ins for the descriptor, generator and feedback agents.
std::unique_ptr<Agent> make_mock_agent(const std::string& name);

// JSON over HTTP POST:
//   request  {"agent", "seed", "text": {...}, "images": {name: base64 PNG}}
//   response {"status": "ok" | ..., "text": "...", "image": base64 PNG}
std::unique_ptr<Agent> make_external_agent(const std::string& name, const std::string& endpoint, double timeout_s);

std::string encode_agent_request(const AgentRequest& request);
AgentRequest decode_agent_request(std::string_view body);
std::string encode_agent_response(const AgentResponse& response);
AgentResponse decode_agent_response(std::string_view body);

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);  // throws InputError

// Measurable features a descriptor is built from.
struct DescriptorInput {
    std::string kind;  // "shape", "texture_style" or "colour"
    double edge_density = 0.0;  // fraction of edge pixels in the edge collage
    std::vector<std::string> palette_names;
    int roi_count = 0;
};

std::string mock_descriptor(const DescriptorInput& input, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct PipelineInputs {
    std::string problem_statement;
    std::map<std::string, Image> images;
    std::map<std::string, Eigen::MatrixXd> heat;  // per image, ROI grid resolution
};

// Reads problem.txt, images/*.png and gaze.jsonl from a directory.
PipelineInputs load_pipeline_inputs(const std::string& dir);
PipelineInputs pipeline_inputs(std::string problem_statement, std::map<std::string, Image> images,
                               std::span<const GazeEvent> events);

enum class StageStatus { ok, failed, skipped };
std::string_view to_string(StageStatus status);

struct StageLogEntry {
    std::string stage;
    StageStatus status = StageStatus::skipped;
    // Logical clock: a stage starts no earlier than every dependency ends.
    int start_tick = 0;
    int end_tick = 0;
    int attempts = 0;
    std::string message;
    double wall_seconds = 0.0;  // kept out of the run record
};

struct NamedImage {
    std::string id;
    std::string stage;
    Image image;
};

struct Selection {
    std::string rendering_id;
    std::string comment;
};

struct PipelineRun {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string problem_statement;
    PipelinePlan plan;
    std::vector<StageLogEntry> stage_log;
    std::vector<Roi> rois;
    FeatureMaps features;
    std::vector<double> palette_weights;
    std::vector<NamedImage> sketches;
    std::vector<NamedImage> renderings;
    std::vector<std::string> presented;
    std::optional<Selection> selection;

    bool complete() const;
    const StageLogEntry* log_entry(std::string_view stage) const;
};

// Agent factory hook, mainly for tests; the default builds mock/external agents.
using AgentFactory = std::function<std::unique_ptr<Agent>(const AgentBinding&, const PipelineConfig&)>;

// Executes the plan level by level. A failing stage is logged and every stage
// downstream of it is skipped; the partial run is returned.
PipelineRun run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config, std::uint64_t seed,
                         const AgentFactory& factory = {});

Report run_record(const PipelineRun& run);

// Writes run.json and the image and palette artifacts into <out_dir>/<run_id>/
// and returns that directory.
std::string write_run_directory(const PipelineRun& run, const std::string& out_dir);

// ---------------------------------------------------------------------------
// Feedback memory
// ---------------------------------------------------------------------------

struct MemoryEntry {
    std::string run_id;
    std::string rendering_id;
    std::string comment;
    std::string timestamp;

    friend bool operator==(const MemoryEntry&, const MemoryEntry&) = default;
};

// Append-only selection log, optionally mirrored to a JSONL file.
class MemoryStore {
public:
    MemoryStore() = default;
    explicit MemoryStore(std::string path);  // loads existing entries

    static MemoryStore replay(std::string_view jsonl);

    void append(const MemoryEntry& entry);
    const std::vector<MemoryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    // Latest selection per run.
    std::map<std::string, MemoryEntry> latest() const;
    std::string serialize() const;

    friend bool operator==(const MemoryStore& a, const MemoryStore& b) { return a.entries_ == b.entries_; }

private:
    std::string path_;
    std::vector<MemoryEntry> entries_;
};

// Validates the selection against the run's renderings, then appends.
void record_feedback(const PipelineRun& run, const Selection& selection, MemoryStore& memory,
                     const std::string& timestamp);
// Same check against a run record read back from run.json.
void record_feedback(const Report& record, const Selection& selection, MemoryStore& memory,
                     const std::string& timestamp);

std::string utc_timestamp();

}  // namespace gazeform
