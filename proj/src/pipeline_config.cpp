#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"

namespace gazeform {

namespace {

bool is_extraction(std::string_view name) {
    return name == "roi-extraction" || name == "shape-extraction" || name == "colour-extraction";
}

bool kind_allowed(std::string_view agent, AgentKind kind) {
    if (is_extraction(agent)) return kind == AgentKind::builtin;
    if (agent == "feedback") return true;
    return kind != AgentKind::builtin;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view value, std::size_t line) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw InputError("expected a number, got '" + std::string(value) + "'", line);
    return out;
}

int parse_int(std::string_view value, std::size_t line) {
    int out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw InputError("expected an integer, got '" + std::string(value) + "'", line);
    return out;
}

bool parse_bool(std::string_view value, std::size_t line) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw InputError("expected true or false, got '" + std::string(value) + "'", line);
}

void check_config(const PipelineConfig& c) {
    if (c.run_id.empty() || c.run_id.find_first_of("/\\") != std::string::npos || c.run_id == "." ||
        c.run_id == "..") {
        throw InputError("run_id must be a plain directory name");
    }
    if (!(c.timeout_s > 0.0)) throw InputError("timeout_s must be positive");
    if (c.variants < 1) throw InputError("variants must be at least 1");
    if (c.palette_k < 1) throw InputError("palette_k must be at least 1");
    if (!(c.edges.low >= 0.0) || !(c.edges.high >= c.edges.low)) {
        throw InputError("edge thresholds need 0 <= edge_low <= edge_high");
    }
}

}  // namespace

bool is_agent_name(std::string_view name) {
    return std::find(kAgentNames.begin(), kAgentNames.end(), name) != kAgentNames.end();
}

std::string_view to_string(AgentKind kind) {
    switch (kind) {
        case AgentKind::builtin: return "builtin";
        case AgentKind::mock: return "mock";
        case AgentKind::external: return "external";
    }
    return "";
}

AgentKind parse_agent_kind(std::string_view text) {
    if (text == "builtin") return AgentKind::builtin;
    if (text == "mock") return AgentKind::mock;
    if (text == "external") return AgentKind::external;
    throw InputError("unknown agent kind '" + std::string(text) + "'");
}

PipelineConfig default_pipeline_config() {
    PipelineConfig c;
    for (auto name : kAgentNames) {
        AgentBinding b;
        b.agent = std::string(name);
        b.kind = is_extraction(name) ? AgentKind::builtin : AgentKind::mock;
        c.bindings.emplace(b.agent, b);
    }
    return c;
}

PipelineConfig parse_pipeline_config(std::string_view text) {
    PipelineConfig c;
    std::map<std::string, std::size_t> kind_lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (key == "run_id") {
            c.run_id = std::string(value);
        } else if (key == "timeout_s") {
            c.timeout_s = parse_double(value, line_no);
        } else if (key == "variants") {
            c.variants = parse_int(value, line_no);
        } else if (key == "palette_k") {
            c.palette_k = parse_int(value, line_no);
        } else if (key == "edge_low") {
            c.edges.low = parse_double(value, line_no);
        } else if (key == "edge_high") {
            c.edges.high = parse_double(value, line_no);
        } else if (key == "selection") {
            c.selection = std::string(value);
        } else if (key == "comment") {
            c.comment = std::string(value);
        } else if (key.starts_with("agent.")) {
            std::string rest = key.substr(6);
            std::string field;
            if (const auto dot = rest.find('.'); dot != std::string::npos) {
                field = rest.substr(dot + 1);
                rest = rest.substr(0, dot);
            }
            if (!is_agent_name(rest)) throw InputError("unknown agent '" + rest + "'", line_no);
            auto& b = c.bindings[rest];
            b.agent = rest;
            if (field.empty()) {
                try {
                    b.kind = parse_agent_kind(value);
                } catch (const InputError& e) {
                    throw InputError(e.what(), line_no);
                }
                if (!kind_allowed(rest, b.kind)) {
                    throw InputError("agent '" + rest + "' cannot be " + std::string(value), line_no);
                }
                kind_lines[rest] = line_no;
            } else if (field == "endpoint") {
                b.endpoint = std::string(value);
            } else if (field == "fail") {
                b.inject_failure = parse_bool(value, line_no);
            } else {
                throw InputError("unknown agent setting '" + field + "'", line_no);
            }
        } else {
            throw InputError("unknown key '" + key + "'", line_no);
        }
    }
    // A setting line without a kind line leaves the binding incomplete.
    for (auto it = c.bindings.begin(); it != c.bindings.end();) {
        if (!kind_lines.contains(it->first)) {
            it = c.bindings.erase(it);
        } else {
            ++it;
        }
    }
    check_config(c);
    return c;
}

void apply_env_overrides(PipelineConfig& config, const EnvLookup& lookup) {
    const EnvLookup get = lookup ? lookup : [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
    if (auto t = get("GAZEFORM_TIMEOUT_S")) {
        try {
            config.timeout_s = parse_double(trim(*t), 0);
        } catch (const InputError&) {
            throw InputError("GAZEFORM_TIMEOUT_S is not a number");
        }
        if (!(config.timeout_s > 0.0)) throw InputError("GAZEFORM_TIMEOUT_S must be positive");
    }
    for (auto& [name, binding] : config.bindings) {
        std::string var = "GAZEFORM_ENDPOINT_";
        for (char ch : name) var += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (auto e = get(var)) binding.endpoint = *e;
    }
}

PipelinePlan plan(const std::string& problem_statement, const std::map<std::string, AgentBinding>& bindings) {
    if (problem_statement.empty()) throw InputError("problem statement is empty");
    for (auto name : kAgentNames) {
        auto it = bindings.find(std::string(name));
        if (it == bindings.end()) throw InputError("agent '" + std::string(name) + "' is not bound");
        if (!kind_allowed(name, it->second.kind)) {
            throw InputError("agent '" + std::string(name) + "' cannot be " + std::string(to_string(it->second.kind)));
        }
        if (it->second.kind == AgentKind::external && it->second.endpoint.empty()) {
            throw InputError("external agent '" + std::string(name) + "' has no endpoint");
        }
    }
    PipelinePlan p;
    p.levels = {
        {"roi-extraction"},
        {"shape-extraction", "colour-extraction"},
        {"shape-descriptor", "style-texture-descriptor", "colour-descriptor"},
        {"sketch-generator", "rendering-generator"},
        {std::string(kPresentStage)},
        {"feedback"},
    };
    p.depends_on[p.levels.front().front()] = {};
    for (std::size_t l = 1; l < p.levels.size(); ++l) {
        for (const auto& stage : p.levels[l]) p.depends_on[stage] = p.levels[l - 1];
    }
    return p;
}

}  // namespace gazeform
