#include "gazeform/session_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include "csv.hpp"
#include "gazeform/error.hpp"

namespace gazeform {

namespace {

using nlohmann::json;

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

void expect_header(const csv::Record& rec, const std::vector<std::string>& expected) {
    if (rec.fields != expected) {
        std::string want;
        for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
        throw InputError("expected header '" + want + "'", rec.line);
    }
}

void expect_width(const csv::Record& rec, std::size_t width) {
    if (rec.fields.size() != width) {
        throw InputError("expected " + std::to_string(width) + " fields, got " +
                             std::to_string(rec.fields.size()),
                         rec.line);
    }
}

void require_id(const std::string& value, const char* what, std::size_t line) {
    if (value.empty()) throw InputError(std::string("empty ") + what, line);
}

double number_field(const json& obj, const char* key, std::size_t line) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw InputError(std::string("non-numeric ") + key, line);
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InputError(std::string("non-finite ") + key, line);
    return d;
}

json encode_nonfinite(const json& j) {
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (std::isnan(d)) return json{{"reason", "nan"}, {"value", nullptr}};
        if (std::isinf(d)) return json{{"reason", d > 0 ? "inf" : "-inf"}, {"value", nullptr}};
        return j;
    }
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = encode_nonfinite(it.value());
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j) out.push_back(encode_nonfinite(e));
        return out;
    }
    return j;
}

json decode_nonfinite(const json& j) {
    if (j.is_object()) {
        if (j.size() == 2 && j.contains("reason") && j.contains("value") && j["value"].is_null() &&
            j["reason"].is_string()) {
            const auto r = j["reason"].get<std::string>();
            if (r == "nan") return std::nan("");
            if (r == "inf") return HUGE_VAL;
            if (r == "-inf") return -HUGE_VAL;
        }
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = decode_nonfinite(it.value());
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& e : j) out.push_back(decode_nonfinite(e));
        return out;
    }
    return j;
}

const std::vector<std::string> kRatingsHeader = {"participant_id", "image_id", "rating",
                                                 "liked_features", "thought"};

std::vector<std::string> likert_header() {
    std::vector<std::string> h = {"expert_id", "rendering_id"};
    for (auto c : kCriteria) h.emplace_back(c);
    return h;
}

}  // namespace

std::string_view to_string(FileFormat f) {
    switch (f) {
        case FileFormat::gaze_jsonl: return "gaze-jsonl";
        case FileFormat::ratings_csv: return "ratings-csv";
        case FileFormat::ballots_csv: return "ballots-csv";
        case FileFormat::likert_csv: return "likert-csv";
    }
    return "";
}

std::optional<FileFormat> parse_format(std::string_view name) {
    for (auto f : {FileFormat::gaze_jsonl, FileFormat::ratings_csv, FileFormat::ballots_csv,
                   FileFormat::likert_csv}) {
        if (name == to_string(f)) return f;
    }
    return std::nullopt;
}

std::optional<FileFormat> detect_format(std::string_view path) {
    if (ends_with(path, ".jsonl")) return FileFormat::gaze_jsonl;
    if (ends_with(path, ".ratings.csv")) return FileFormat::ratings_csv;
    if (ends_with(path, ".ballots.csv")) return FileFormat::ballots_csv;
    if (ends_with(path, ".likert.csv")) return FileFormat::likert_csv;
    return std::nullopt;
}

SessionFile resolve_file(std::string path, std::optional<FileFormat> override_format) {
    if (override_format) return {std::move(path), *override_format};
    auto detected = detect_format(path);
    if (!detected) throw InputError("cannot infer format of '" + path + "'; pass --format");
    return {std::move(path), *detected};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<GazeEvent> parse_gaze_log(std::string_view bytes) {
    static const std::set<std::string> kKeys = {"image_id", "session_id", "t_end", "t_start", "u", "v"};
    std::vector<GazeEvent> events;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < bytes.size()) {
        auto end = bytes.find('\n', start);
        if (end == std::string_view::npos) end = bytes.size();
        std::string_view line = bytes.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error&) {
            throw InputError("malformed record", line_no);
        }
        if (!obj.is_object()) throw InputError("record is not an object", line_no);
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!kKeys.contains(it.key())) throw InputError("unknown field '" + it.key() + "'", line_no);
        }
        for (const auto& k : kKeys) {
            if (!obj.contains(k)) throw InputError("missing field '" + k + "'", line_no);
        }
        if (!obj["session_id"].is_string() || obj["session_id"].get<std::string>().empty()) {
            throw InputError("session_id must be a non-empty string", line_no);
        }
        const auto& image = obj["image_id"];
        if (!image.is_null() && !image.is_string()) throw InputError("image_id must be a string", line_no);
        GazeEvent e;
        e.session_id = obj["session_id"].get<std::string>();
        e.t_start = number_field(obj, "t_start", line_no);
        e.t_end = number_field(obj, "t_end", line_no);
        e.u = number_field(obj, "u", line_no);
        e.v = number_field(obj, "v", line_no);
        if (image.is_null() || image.get<std::string>().empty()) continue;  // off-image sample
        e.image_id = image.get<std::string>();
        try {
            check_event(e);
        } catch (const InputError& err) {
            throw InputError(err.what(), line_no);
        }
        events.push_back(std::move(e));
    }
    return events;
}

std::string write_gaze_log(const std::vector<GazeEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        json obj = {{"session_id", e.session_id}, {"image_id", e.image_id}, {"t_start", e.t_start},
                    {"t_end", e.t_end},           {"u", e.u},               {"v", e.v}};
        out += obj.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<RatingRecord> parse_ratings(std::string_view bytes) {
    const auto records = csv::read(bytes);
    std::vector<RatingRecord> out;
    if (records.empty()) return out;
    expect_header(records.front(), kRatingsHeader);
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        expect_width(rec, kRatingsHeader.size());
        RatingRecord r;
        r.participant_id = rec.fields[0];
        r.image_id = rec.fields[1];
        require_id(r.participant_id, "participant_id", rec.line);
        require_id(r.image_id, "image_id", rec.line);
        const auto rating = parse_int(rec.fields[2]);
        if (!rating) throw InputError("rating is not an integer", rec.line);
        if (*rating < 1 || *rating > 5) throw InputError("rating outside 1..5", rec.line);
        r.rating = *rating;
        if (!rec.fields[3].empty()) {
            for (auto token : split(rec.fields[3], ';')) {
                const auto f = parse_feature(token);
                if (!f) throw InputError("unknown feature '" + std::string(token) + "'", rec.line);
                r.liked_features.insert(*f);
            }
        }
        if (!rec.fields[4].empty()) r.thought = rec.fields[4];
        out.push_back(std::move(r));
    }
    return out;
}

std::string write_ratings(const std::vector<RatingRecord>& records) {
    std::string out = csv::join(kRatingsHeader) + "\n";
    for (const auto& r : records) {
        std::string features;
        for (auto f : r.liked_features) {
            if (!features.empty()) features.push_back(';');
            features += to_string(f);
        }
        out += csv::join({r.participant_id, r.image_id, std::to_string(r.rating), features,
                          r.thought.value_or("")});
        out.push_back('\n');
    }
    return out;
}

std::vector<RankingBallot> parse_ballots(std::string_view bytes) {
    const auto records = csv::read(bytes);
    std::vector<RankingBallot> out;
    if (records.empty()) return out;
    const auto& header = records.front();
    const std::size_t width = header.fields.size();
    if (width < 4) throw InputError("ballot header needs at least two rank columns", header.line);
    std::vector<std::string> expected = {"expert_id", "problem_id"};
    for (std::size_t k = 1; k + 2 <= width; ++k) expected.push_back("rank" + std::to_string(k));
    expect_header(header, expected);

    std::map<std::string, std::set<std::string>> candidates;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        expect_width(rec, width);
        RankingBallot b;
        b.expert_id = rec.fields[0];
        b.problem_id = rec.fields[1];
        require_id(b.expert_id, "expert_id", rec.line);
        require_id(b.problem_id, "problem_id", rec.line);
        b.order.assign(rec.fields.begin() + 2, rec.fields.end());
        std::set<std::string> own;
        for (const auto& c : b.order) {
            if (c.empty()) throw InputError("missing candidate (empty rank)", rec.line);
            if (!own.insert(c).second) throw InputError("candidate '" + c + "' ranked twice", rec.line);
        }
        auto [it, inserted] = candidates.try_emplace(b.problem_id, own);
        if (!inserted) {
            try {
                check_permutation(b.order, it->second);
            } catch (const InputError& err) {
                throw InputError(err.what(), rec.line);
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::string write_ballots(const std::vector<RankingBallot>& ballots) {
    std::size_t k = ballots.empty() ? 4 : ballots.front().order.size();
    std::vector<std::string> header = {"expert_id", "problem_id"};
    for (std::size_t r = 1; r <= k; ++r) header.push_back("rank" + std::to_string(r));
    std::string out = csv::join(header) + "\n";
    for (const auto& b : ballots) {
        std::vector<std::string> row = {b.expert_id, b.problem_id};
        row.insert(row.end(), b.order.begin(), b.order.end());
        out += csv::join(row) + "\n";
    }
    return out;
}

std::vector<LikertRow> parse_likert(std::string_view bytes) {
    const auto records = csv::read(bytes);
    std::vector<LikertRow> out;
    if (records.empty()) return out;
    const auto header = likert_header();
    expect_header(records.front(), header);
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        expect_width(rec, header.size());
        LikertRow row;
        row.expert_id = rec.fields[0];
        row.rendering_id = rec.fields[1];
        require_id(row.expert_id, "expert_id", rec.line);
        require_id(row.rendering_id, "rendering_id", rec.line);
        for (std::size_t c = 0; c < kCriteriaCount; ++c) {
            const auto v = parse_int(rec.fields[2 + c]);
            if (!v) throw InputError("rating is not an integer", rec.line);
            if (*v < 1 || *v > 5) throw InputError("rating outside 1..5", rec.line);
            row.ratings[c] = *v;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::string write_likert(const std::vector<LikertRow>& rows) {
    std::string out = csv::join(likert_header()) + "\n";
    for (const auto& r : rows) {
        std::vector<std::string> fields = {r.expert_id, r.rendering_id};
        for (int v : r.ratings) fields.push_back(std::to_string(v));
        out += csv::join(fields) + "\n";
    }
    return out;
}

std::string write_report(const Report& report) {
    return encode_nonfinite(report).dump(2) + "\n";
}

Report read_report(std::string_view bytes) {
    try {
        return decode_nonfinite(json::parse(bytes));
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
}

std::map<std::string, double> parse_session_lengths(std::string_view bytes) {
    const auto records = csv::read(bytes);
    std::map<std::string, double> out;
    if (records.empty()) return out;
    expect_header(records.front(), {"session_id", "length_s"});
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        expect_width(rec, 2);
        require_id(rec.fields[0], "session_id", rec.line);
        double v = 0.0;
        const auto& f = rec.fields[1];
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc{} || p != f.data() + f.size() || !std::isfinite(v) || v <= 0.0) {
            throw InputError("length_s must be a positive number", rec.line);
        }
        if (!out.emplace(rec.fields[0], v).second) throw InputError("duplicate session '" + rec.fields[0] + "'", rec.line);
    }
    return out;
}

std::string write_session_lengths(const std::map<std::string, double>& lengths) {
    std::string out = "session_id,length_s\n";
    for (const auto& [id, len] : lengths) out += csv::join({id, json(len).dump()}) + "\n";
    return out;
}

std::map<std::string, std::string> parse_groups(std::string_view bytes) {
    const auto records = csv::read(bytes);
    std::map<std::string, std::string> out;
    if (records.empty()) return out;
    expect_header(records.front(), {"participant_id", "group"});
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        expect_width(rec, 2);
        require_id(rec.fields[0], "participant_id", rec.line);
        require_id(rec.fields[1], "group", rec.line);
        if (!out.emplace(rec.fields[0], rec.fields[1]).second) {
            throw InputError("duplicate participant '" + rec.fields[0] + "'", rec.line);
        }
    }
    return out;
}

std::string write_groups(const std::map<std::string, std::string>& groups) {
    std::string out = "participant_id,group\n";
    for (const auto& [id, g] : groups) out += csv::join({id, g}) + "\n";
    return out;
}

StimulusGrid parse_grid_spec(std::string_view bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("grid spec is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw InputError("grid spec must be an object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() != "rows" && it.key() != "cols" && it.key() != "arc_degrees" && it.key() != "image_ids") {
                throw InputError("unknown grid spec key '" + it.key() + "'");
            }
        }
        return build_grid(j.at("rows").get<int>(), j.at("cols").get<int>(), j.value("arc_degrees", 120.0),
                          j.at("image_ids").get<std::vector<std::string>>());
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed grid spec: ") + e.what());
    }
}

std::string write_grid_spec(const StimulusGrid& grid) {
    json j{{"rows", grid.rows()}, {"cols", grid.cols()}, {"arc_degrees", grid.arc_degrees()},
           {"image_ids", grid.image_ids()}};
    return j.dump(2) + "\n";
}

}  // namespace gazeform
