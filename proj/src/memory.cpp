#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>

#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"

namespace gazeform {

namespace {

nlohmann::json to_json(const MemoryEntry& e) {
    return {{"run_id", e.run_id}, {"rendering_id", e.rendering_id}, {"comment", e.comment}, {"timestamp", e.timestamp}};
}

MemoryEntry from_json_line(std::string_view line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
        throw InputError("memory entry is not valid JSON", line_no);
    }
    static const std::set<std::string> kKeys = {"comment", "rendering_id", "run_id", "timestamp"};
    if (!j.is_object() || j.size() != kKeys.size()) throw InputError("memory entry needs exactly 4 fields", line_no);
    MemoryEntry e;
    for (const auto& key : kKeys) {
        if (!j.contains(key) || !j.at(key).is_string()) throw InputError("memory field '" + key + "' must be a string", line_no);
    }
    e.run_id = j.at("run_id").get<std::string>();
    e.rendering_id = j.at("rendering_id").get<std::string>();
    e.comment = j.at("comment").get<std::string>();
    e.timestamp = j.at("timestamp").get<std::string>();
    if (e.run_id.empty() || e.rendering_id.empty()) throw InputError("memory entry has an empty id", line_no);
    return e;
}

}  // namespace

MemoryStore::MemoryStore(std::string path) : path_(std::move(path)) {
    if (std::filesystem::exists(path_)) entries_ = replay(read_file(path_)).entries_;
}

MemoryStore MemoryStore::replay(std::string_view jsonl) {
    MemoryStore store;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        auto nl = jsonl.find('\n', pos);
        if (nl == std::string_view::npos) nl = jsonl.size();
        const auto line = jsonl.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        store.entries_.push_back(from_json_line(line, line_no));
    }
    return store;
}

void MemoryStore::append(const MemoryEntry& entry) {
    if (entry.run_id.empty() || entry.rendering_id.empty()) throw InputError("memory entry has an empty id");
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw InputError("cannot open " + path_ + " for appending");
        out << to_json(entry).dump() << '\n';
        if (!out) throw InputError("cannot write " + path_);
    }
    entries_.push_back(entry);
}

std::map<std::string, MemoryEntry> MemoryStore::latest() const {
    std::map<std::string, MemoryEntry> out;
    for (const auto& e : entries_) out.insert_or_assign(e.run_id, e);
    return out;
}

std::string MemoryStore::serialize() const {
    std::string out;
    for (const auto& e : entries_) out += to_json(e).dump() + '\n';
    return out;
}

void record_feedback(const PipelineRun& run, const Selection& selection, MemoryStore& memory,
                     const std::string& timestamp) {
    const bool known = std::any_of(run.renderings.begin(), run.renderings.end(),
                                   [&](const NamedImage& r) { return r.id == selection.rendering_id; });
    if (!known) throw InputError("run '" + run.run_id + "' has no rendering '" + selection.rendering_id + "'");
    memory.append({run.run_id, selection.rendering_id, selection.comment, timestamp});
}

void record_feedback(const Report& record, const Selection& selection, MemoryStore& memory,
                     const std::string& timestamp) {
    if (!record.is_object() || !record.contains("run_id") || !record.contains("renderings")) {
        throw InputError("not a run record");
    }
    const auto run_id = record.at("run_id").get<std::string>();
    bool known = false;
    for (const auto& id : record.at("renderings")) known = known || id.get<std::string>() == selection.rendering_id;
    if (!known) throw InputError("run '" + run_id + "' has no rendering '" + selection.rendering_id + "'");
    memory.append({run_id, selection.rendering_id, selection.comment, timestamp});
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace gazeform
