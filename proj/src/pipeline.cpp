#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>

#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"

namespace gazeform {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t stage_seed(std::uint64_t seed, std::string_view stage) {
    std::uint64_t h = seed;
    for (unsigned char c : stage) h = splitmix64(h ^ c);
    return h;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

std::string descriptor_key(std::string_view stage) {
    if (stage == "shape-descriptor") return "shape";
    if (stage == "colour-descriptor") return "colour";
    return "texture_style";
}

// What one stage hands back; merged into the run after its level finishes.
struct StageOutput {
    std::vector<Roi> rois;
    std::vector<Image> crops;
    std::optional<Image> roi_collage;
    std::optional<Image> edge_collage;
    double edge_density = 0.0;
    std::optional<Palette> palette;
    std::optional<std::string> descriptor;
    std::vector<NamedImage> images;
    std::optional<Selection> selection;
    std::string message;
};

struct StageResult {
    StageOutput output;
    bool ok = false;
    int attempts = 0;
    std::string error;
    double wall_seconds = 0.0;
};

// Artifacts shared with later stages; read-only while a level runs.
struct Workspace {
    std::vector<Image> crops;
    double edge_density = 0.0;
    Palette palette;
};

class Orchestrator {
public:
    Orchestrator(const PipelineInputs& inputs, const PipelineConfig& config, std::uint64_t seed,
                 const AgentFactory& factory)
        : inputs_(inputs), config_(config), seed_(seed), factory_(factory) {}

    PipelineRun run() {
        run_.run_id = config_.run_id;
        run_.seed = seed_;
        run_.problem_statement = inputs_.problem_statement;
        run_.plan = plan(inputs_.problem_statement, config_.bindings);

        std::map<std::string, StageStatus> status;
        std::map<std::string, StageLogEntry> log;
        for (std::size_t level = 0; level < run_.plan.levels.size(); ++level) {
            const auto& stages = run_.plan.levels[level];
            std::vector<std::string> runnable;
            for (const auto& stage : stages) {
                const auto& deps = run_.plan.depends_on.at(stage);
                const bool ready = std::all_of(deps.begin(), deps.end(),
                                               [&](const std::string& d) { return status[d] == StageStatus::ok; });
                status[stage] = ready ? StageStatus::ok : StageStatus::skipped;
                if (ready) runnable.push_back(stage);
                if (!ready && stage != kPresentStage) {
                    StageLogEntry e;
                    e.stage = stage;
                    e.status = StageStatus::skipped;
                    e.start_tick = e.end_tick = -1;
                    e.message = "upstream stage did not complete";
                    log[stage] = e;
                }
            }

            std::vector<StageResult> results(runnable.size());
            if (runnable.size() == 1) {
                results[0] = execute(runnable[0]);
            } else {
                std::vector<std::future<StageResult>> pending;
                for (const auto& stage : runnable) {
                    pending.push_back(std::async(std::launch::async, [this, stage] { return execute(stage); }));
                }
                for (std::size_t i = 0; i < pending.size(); ++i) results[i] = pending[i].get();
            }

            // Merge in plan order so the record does not depend on completion order.
            for (std::size_t i = 0; i < runnable.size(); ++i) {
                const auto& stage = runnable[i];
                auto& r = results[i];
                status[stage] = r.ok ? StageStatus::ok : StageStatus::failed;
                std::string message = r.ok ? r.output.message : r.error;
                if (r.ok) merge(stage, std::move(r.output));
                if (stage == kPresentStage) continue;
                StageLogEntry e;
                e.stage = stage;
                e.status = status[stage];
                e.start_tick = static_cast<int>(level);
                e.end_tick = static_cast<int>(level) + 1;
                e.attempts = r.attempts;
                e.message = std::move(message);
                e.wall_seconds = r.wall_seconds;
                log[stage] = e;
            }
        }
        for (auto name : kAgentNames) run_.stage_log.push_back(log.at(std::string(name)));
        return std::move(run_);
    }

private:
    StageResult execute(const std::string& stage) {
        StageResult result;
        const auto started = std::chrono::steady_clock::now();
        if (stage == kPresentStage) {
            result.ok = true;
            return result;
        }
        const auto& binding = config_.bindings.at(stage);
        const int max_attempts = binding.kind == AgentKind::external ? 2 : 1;
        while (result.attempts < max_attempts && !result.ok) {
            ++result.attempts;
            try {
                if (binding.inject_failure) throw AgentError("injected failure");
                result.output = binding.kind == AgentKind::builtin ? builtin(stage) : delegate(stage, binding);
                result.ok = true;
            } catch (const std::exception& e) {
                result.error = e.what();
            }
        }
        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return result;
    }

    StageOutput builtin(const std::string& stage) {
        StageOutput out;
        if (stage == "roi-extraction") {
            for (const auto& [id, image] : inputs_.images) {
                Eigen::MatrixXd heat = Eigen::MatrixXd::Zero(kRoiGridRows, kRoiGridCols);
                if (auto it = inputs_.heat.find(id); it != inputs_.heat.end()) heat = it->second;
                auto found = detect_rois(heat, default_roi_threshold(heat), id, image.width, image.height);
                out.rois.insert(out.rois.end(), found.begin(), found.end());
            }
            if (out.rois.empty()) throw AgentError("no region exceeded the dwell threshold");
            std::stable_sort(out.rois.begin(), out.rois.end(),
                             [](const Roi& a, const Roi& b) { return a.dwell > b.dwell; });
            for (const auto& roi : out.rois) out.crops.push_back(crop(inputs_.images.at(roi.image_id), roi.rect));
            out.roi_collage = compose_collage(out.crops);
            out.message = std::to_string(out.rois.size()) + " regions of interest";
        } else if (stage == "shape-extraction") {
            std::vector<Image> edges;
            std::size_t set = 0;
            std::size_t total = 0;
            for (const auto& c : work_.crops) {
                edges.push_back(extract_edges(c, config_.edges));
                const auto& px = edges.back().pixels;
                set += static_cast<std::size_t>(std::count(px.begin(), px.end(), std::uint8_t{255}));
                total += px.size();
            }
            out.edge_density = static_cast<double>(set) / static_cast<double>(total);
            // Rescaling blurs the crops; snap the collage back to a binary map.
            out.edge_collage = compose_collage(edges);
            for (auto& v : out.edge_collage->pixels) v = v >= 128 ? 255 : 0;
            out.message = "edge density " + fixed6(out.edge_density);
        } else if (stage == "colour-extraction") {
            out.palette = extract_palette(work_.crops, config_.palette_k);
            out.message = std::to_string(out.palette->swatches.size()) + " swatches";
            if (out.palette->note) out.message += "; " + *out.palette->note;
        } else if (stage == "feedback") {
            if (config_.selection.empty()) {
                out.message = "awaiting designer selection";
            } else {
                out.selection = Selection{config_.selection, config_.comment};
                check_selection(*out.selection);
                out.message = "designer selected " + config_.selection;
            }
        } else {
            throw AgentError("stage '" + stage + "' has no builtin implementation");
        }
        return out;
    }

    StageOutput delegate(const std::string& stage, const AgentBinding& binding) {
        auto agent = factory_ ? factory_(binding, config_)
                     : binding.kind == AgentKind::external
                         ? make_external_agent(stage, binding.endpoint, config_.timeout_s)
                         : make_mock_agent(stage);
        AgentRequest req;
        req.agent = stage;
        req.seed = stage_seed(seed_, stage);
        req.text["problem_statement"] = inputs_.problem_statement;
        StageOutput out;

        if (stage.ends_with("-descriptor")) {
            req.text["edge_density"] = fixed6(work_.edge_density);
            req.text["palette_names"] = join(palette_names());
            req.text["palette_hex"] = join(palette_hexes());
            req.text["roi_count"] = std::to_string(run_.rois.size());
            req.images["roi_collage"] = run_.features.roi_collage;
            req.images["edge_collage"] = run_.features.edge_collage;
            auto res = agent->call(req);
            if (res.text.empty()) throw AgentError(stage + " returned no text");
            out.descriptor = res.text;
            out.message = std::to_string(res.text.size()) + " characters";
        } else if (stage.ends_with("-generator")) {
            const bool sketch = stage == "sketch-generator";
            for (const auto& [key, text] : run_.features.descriptors) req.text["descriptor_" + key] = text;
            req.text["palette_hex"] = join(palette_hexes());
            req.images["edge_collage"] = run_.features.edge_collage;
            if (!sketch) req.images["roi_collage"] = run_.features.roi_collage;
            for (int v = 1; v <= config_.variants; ++v) {
                req.text["variant"] = std::to_string(v);
                req.seed = splitmix64(stage_seed(seed_, stage) + static_cast<std::uint64_t>(v));
                auto res = agent->call(req);
                if (!res.image || res.image->empty()) throw AgentError(stage + " returned no image");
                out.images.push_back({(sketch ? "sketch_" : "rendering_") + std::to_string(v), stage, *res.image});
            }
            out.message = std::to_string(out.images.size()) + " images";
        } else if (stage == "feedback") {
            req.text["renderings"] = join(run_.presented);
            auto res = agent->call(req);
            const auto nl = res.text.find('\n');
            Selection sel{res.text.substr(0, nl), nl == std::string::npos ? std::string() : res.text.substr(nl + 1)};
            check_selection(sel);
            out.message = "selected " + sel.rendering_id;
            out.selection = std::move(sel);
        } else {
            throw AgentError("stage '" + stage + "' cannot be delegated");
        }
        return out;
    }

    void check_selection(const Selection& sel) const {
        if (std::find(run_.presented.begin(), run_.presented.end(), sel.rendering_id) == run_.presented.end()) {
            throw AgentError("unknown rendering '" + sel.rendering_id + "'");
        }
    }

    std::vector<std::string> palette_names() const {
        std::vector<std::string> out;
        for (const auto& p : run_.features.palette) out.push_back(p.name);
        return out;
    }

    std::vector<std::string> palette_hexes() const {
        std::vector<std::string> out;
        for (const auto& p : run_.features.palette) out.push_back(p.hex);
        return out;
    }

    void merge(const std::string& stage, StageOutput&& out) {
        if (stage == "roi-extraction") {
            run_.rois = std::move(out.rois);
            work_.crops = std::move(out.crops);
            run_.features.roi_collage = std::move(*out.roi_collage);
        } else if (stage == "shape-extraction") {
            run_.features.edge_collage = std::move(*out.edge_collage);
            work_.edge_density = out.edge_density;
        } else if (stage == "colour-extraction") {
            work_.palette = std::move(*out.palette);
            for (std::size_t i = 0; i < work_.palette.swatches.size(); ++i) {
                run_.features.palette.push_back({work_.palette.swatches[i].hex, work_.palette.names[i]});
                run_.palette_weights.push_back(work_.palette.swatches[i].weight);
            }
        } else if (stage.ends_with("-descriptor")) {
            run_.features.descriptors[descriptor_key(stage)] = std::move(*out.descriptor);
        } else if (stage == "sketch-generator") {
            run_.sketches = std::move(out.images);
        } else if (stage == "rendering-generator") {
            run_.renderings = std::move(out.images);
        } else if (stage == kPresentStage) {
            for (const auto& r : run_.renderings) run_.presented.push_back(r.id);
        } else if (stage == "feedback") {
            run_.selection = std::move(out.selection);
        }
    }

    const PipelineInputs& inputs_;
    const PipelineConfig& config_;
    std::uint64_t seed_;
    const AgentFactory& factory_;
    PipelineRun run_;
    Workspace work_;
};

Report rect_json(const PixelRect& r) {
    return Report{{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

}  // namespace

std::string_view to_string(StageStatus status) {
    switch (status) {
        case StageStatus::ok: return "ok";
        case StageStatus::failed: return "failed";
        case StageStatus::skipped: return "skipped";
    }
    return "";
}

bool PipelineRun::complete() const {
    return std::all_of(stage_log.begin(), stage_log.end(), [](const auto& e) { return e.status == StageStatus::ok; });
}

const StageLogEntry* PipelineRun::log_entry(std::string_view stage) const {
    auto it = std::find_if(stage_log.begin(), stage_log.end(), [&](const auto& e) { return e.stage == stage; });
    return it == stage_log.end() ? nullptr : &*it;
}

PipelineInputs pipeline_inputs(std::string problem_statement, std::map<std::string, Image> images,
                               std::span<const GazeEvent> events) {
    PipelineInputs in;
    in.problem_statement = std::move(problem_statement);
    in.images = std::move(images);
    std::map<std::string, std::vector<GazeEvent>> by_image;
    for (const auto& e : events) {
        if (!in.images.contains(e.image_id)) throw InputError("gaze refers to unknown image '" + e.image_id + "'");
        by_image[e.image_id].push_back(e);
    }
    for (const auto& [id, evs] : by_image) in.heat[id] = roi_heat_grid(evs);
    return in;
}

PipelineInputs load_pipeline_inputs(const std::string& dir) {
    const fs::path root(dir);
    std::string problem = read_file((root / "problem.txt").string());
    while (!problem.empty() && std::isspace(static_cast<unsigned char>(problem.back()))) problem.pop_back();

    std::map<std::string, Image> images;
    const fs::path image_dir = root / "images";
    if (!fs::is_directory(image_dir)) throw InputError("missing directory " + image_dir.string());
    for (const auto& entry : fs::directory_iterator(image_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            images.emplace(entry.path().stem().string(), to_rgb(read_png(entry.path().string())));
        }
    }
    if (images.empty()) throw InputError("no PNG images in " + image_dir.string());
    const auto events = parse_gaze_log(read_file((root / "gaze.jsonl").string()));
    return pipeline_inputs(std::move(problem), std::move(images), events);
}

PipelineRun run_pipeline(const PipelineInputs& inputs, const PipelineConfig& config, std::uint64_t seed,
                         const AgentFactory& factory) {
    return Orchestrator(inputs, config, seed, factory).run();
}

Report run_record(const PipelineRun& run) {
    Report r;
    r["run_id"] = run.run_id;
    r["seed"] = run.seed;
    r["problem_statement"] = run.problem_statement;
    r["status"] = run.complete() ? "complete" : "partial";
    r["plan"] = Report{{"levels", run.plan.levels}};

    r["stage_log"] = Report::array();
    for (const auto& e : run.stage_log) {
        Report j{{"stage", e.stage}, {"status", std::string(to_string(e.status))}, {"attempts", e.attempts},
                 {"message", e.message}};
        if (e.status == StageStatus::skipped) {
            j["start_tick"] = nullptr;
            j["end_tick"] = nullptr;
            j["duration_ticks"] = nullptr;
        } else {
            j["start_tick"] = e.start_tick;
            j["end_tick"] = e.end_tick;
            j["duration_ticks"] = e.end_tick - e.start_tick;
        }
        r["stage_log"].push_back(j);
    }

    r["rois"] = Report::array();
    for (const auto& roi : run.rois) {
        Report cells = Report::array();
        for (const auto& c : roi.cells) cells.push_back({c.row, c.col});
        r["rois"].push_back({{"image_id", roi.image_id}, {"rect", rect_json(roi.rect)}, {"dwell", roi.dwell},
                             {"cells", cells}});
    }

    r["palette"] = Report::array();
    for (std::size_t i = 0; i < run.features.palette.size(); ++i) {
        r["palette"].push_back({{"hex", run.features.palette[i].hex},
                                {"name", run.features.palette[i].name},
                                {"weight", run.palette_weights[i]}});
    }
    r["descriptors"] = run.features.descriptors;

    Report artifacts = Report::array();
    auto add = [&](const std::string& id, const std::string& file, const std::string& stage) {
        artifacts.push_back({{"id", id}, {"file", file}, {"stage", stage}});
    };
    if (!run.features.roi_collage.empty()) add("roi_collage", "roi_collage.png", "roi-extraction");
    if (!run.features.edge_collage.empty()) add("edge_collage", "edge_collage.png", "shape-extraction");
    if (!run.features.palette.empty()) {
        add("palette_image", "palette.png", "colour-extraction");
        add("palette_table", "palette.csv", "colour-extraction");
    }
    for (const auto& [key, text] : run.features.descriptors) {
        const std::string stage = key == "shape" ? "shape-descriptor"
                                  : key == "colour" ? "colour-descriptor"
                                                    : "style-texture-descriptor";
        add("descriptor_" + key, "run.json", stage);
    }
    Report sketches = Report::array();
    for (const auto& s : run.sketches) {
        add(s.id, s.id + ".png", s.stage);
        sketches.push_back(s.id);
    }
    Report renderings = Report::array();
    for (const auto& s : run.renderings) {
        add(s.id, s.id + ".png", s.stage);
        renderings.push_back(s.id);
    }
    r["artifacts"] = artifacts;
    r["sketches"] = sketches;
    r["renderings"] = renderings;
    r["presented"] = run.presented;
    r["selection"] = run.selection ? Report{{"rendering_id", run.selection->rendering_id},
                                            {"comment", run.selection->comment}}
                                   : Report(nullptr);
    return r;
}

std::string write_run_directory(const PipelineRun& run, const std::string& out_dir) {
    const fs::path dir = fs::path(out_dir) / run.run_id;
    // A rerun with the same id replaces the previous artifacts wholesale.
    std::error_code ec;
    fs::remove_all(dir, ec);
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());

    if (!run.features.roi_collage.empty()) write_png(run.features.roi_collage, (dir / "roi_collage.png").string());
    if (!run.features.edge_collage.empty()) write_png(run.features.edge_collage, (dir / "edge_collage.png").string());
    if (!run.features.palette.empty()) {
        Palette p;
        for (std::size_t i = 0; i < run.features.palette.size(); ++i) {
            p.swatches.push_back({run.features.palette[i].hex, run.palette_weights[i]});
            p.names.push_back(run.features.palette[i].name);
        }
        write_png(palette_image(p), (dir / "palette.png").string());
        write_file((dir / "palette.csv").string(), palette_csv(p));
    }
    for (const auto& s : run.sketches) write_png(s.image, (dir / (s.id + ".png")).string());
    for (const auto& s : run.renderings) write_png(s.image, (dir / (s.id + ".png")).string());
    write_file((dir / "run.json").string(), write_report(run_record(run)));
    return dir.string();
}

}  // namespace gazeform
