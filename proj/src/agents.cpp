#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gazeform/error.hpp"
#include "gazeform/pipeline.hpp"
#include "gazeform/random.hpp"

namespace gazeform {

namespace {

constexpr std::string_view kBase64Alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto comma = s.find(',', pos);
        if (comma == std::string_view::npos) comma = s.size();
        if (comma > pos) out.emplace_back(s.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

std::string text_field(const AgentRequest& req, const std::string& key) {
    auto it = req.text.find(key);
    return it == req.text.end() ? std::string() : it->second;
}

double number_field(const AgentRequest& req, const std::string& key) {
    const auto s = text_field(req, key);
    if (s.empty()) return 0.0;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw AgentError("field '" + key + "' is not a number");
    }
}

std::string_view pick(Rng& rng, std::span<const std::string_view> options) {
    return options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
}

// ---------------------------------------------------------------------------
// Procedural drawing for the mock generators
// ---------------------------------------------------------------------------

constexpr int kCanvas = 256;

void stamp(Image& img, double x, double y, int radius, Rgb colour) {
    const int cx = static_cast<int>(std::lround(x));
    const int cy = static_cast<int>(std::lround(y));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int px = cx + dx;
            const int py = cy + dy;
            if (px < 0 || py < 0 || px >= img.width || py >= img.height || dx * dx + dy * dy > radius * radius) continue;
            img.at(px, py, 0) = colour.r;
            img.at(px, py, 1) = colour.g;
            img.at(px, py, 2) = colour.b;
        }
    }
}

void stroke_ellipse(Image& img, double cx, double cy, double rx, double ry, double tilt, int radius, Rgb colour) {
    const int steps = static_cast<int>(4.0 * (rx + ry)) + 8;
    for (int i = 0; i < steps; ++i) {
        const double a = 2.0 * std::numbers::pi * i / steps;
        const double ex = rx * std::cos(a);
        const double ey = ry * std::sin(a);
        stamp(img, cx + ex * std::cos(tilt) - ey * std::sin(tilt), cy + ex * std::sin(tilt) + ey * std::cos(tilt),
              radius, colour);
    }
}

void fill_ellipse(Image& img, double cx, double cy, double rx, double ry, Rgb colour) {
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double nx = (x + 0.5 - cx) / rx;
            const double ny = (y + 0.5 - cy) / ry;
            if (nx * nx + ny * ny > 1.0) continue;
            img.at(x, y, 0) = colour.r;
            img.at(x, y, 1) = colour.g;
            img.at(x, y, 2) = colour.b;
        }
    }
}

// Darkens the canvas wherever the (resized) edge map is set.
void overlay_edges(Image& img, const Image& edges, std::uint8_t ink) {
    if (edges.empty()) return;
    const double scale = std::min(static_cast<double>(img.width) / edges.width,
                                  static_cast<double>(img.height) / edges.height);
    const int w = std::max(1, static_cast<int>(edges.width * scale));
    const int h = std::max(1, static_cast<int>(edges.height * scale));
    const Image fitted = resize(edges, w, h);
    const int ox = (img.width - w) / 2;
    const int oy = (img.height - h) / 2;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (fitted.at(x, y, 0) < 128) continue;
            for (int c = 0; c < img.channels; ++c) img.at(ox + x, oy + y, c) = std::min(img.at(ox + x, oy + y, c), ink);
        }
    }
}

Image mock_sketch(const AgentRequest& req) {
    Rng rng(req.seed);
    Image img(kCanvas, kCanvas, 3, 255);
    if (auto it = req.images.find("edge_collage"); it != req.images.end()) overlay_edges(img, it->second, 190);
    const int strokes = rng.uniform_int(3, 6);
    for (int s = 0; s < strokes; ++s) {
        const double cx = rng.uniform(64.0, 192.0);
        const double cy = rng.uniform(64.0, 192.0);
        stroke_ellipse(img, cx, cy, rng.uniform(20.0, 90.0), rng.uniform(10.0, 60.0), rng.uniform(0.0, std::numbers::pi),
                       1, Rgb{30, 30, 30});
    }
    return img;
}

Image mock_rendering(const AgentRequest& req) {
    Rng rng(req.seed);
    std::vector<Rgb> colours;
    for (const auto& hex : split_list(text_field(req, "palette_hex"))) colours.push_back(parse_hex(hex));
    if (colours.empty()) colours = {Rgb{128, 128, 128}};
    const Rgb top = colours.front();
    const Rgb bottom = colours.size() > 1 ? colours[1] : colours.front();
    Image img(kCanvas, kCanvas, 3);
    for (int y = 0; y < kCanvas; ++y) {
        const double t = static_cast<double>(y) / (kCanvas - 1);
        const std::array<std::uint8_t, 3> row = {
            static_cast<std::uint8_t>(std::lround(top.r + t * (bottom.r - top.r))),
            static_cast<std::uint8_t>(std::lround(top.g + t * (bottom.g - top.g))),
            static_cast<std::uint8_t>(std::lround(top.b + t * (bottom.b - top.b)))};
        for (int x = 0; x < kCanvas; ++x) {
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[static_cast<std::size_t>(c)];
        }
    }
    const int blobs = rng.uniform_int(2, 5);
    for (int b = 0; b < blobs; ++b) {
        const Rgb colour = colours[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(colours.size()) - 1))];
        fill_ellipse(img, rng.uniform(48.0, 208.0), rng.uniform(48.0, 208.0), rng.uniform(16.0, 70.0),
                     rng.uniform(16.0, 70.0), colour);
    }
    if (auto it = req.images.find("edge_collage"); it != req.images.end()) overlay_edges(img, it->second, 40);
    return img;
}

class MockAgent final : public Agent {
public:
    explicit MockAgent(std::string name) : name_(std::move(name)) {}

    AgentResponse call(const AgentRequest& req) override {
        AgentResponse res;
        if (name_ == "shape-descriptor" || name_ == "style-texture-descriptor" || name_ == "colour-descriptor") {
            DescriptorInput in;
            in.kind = name_ == "shape-descriptor" ? "shape" : name_ == "colour-descriptor" ? "colour" : "texture_style";
            in.edge_density = number_field(req, "edge_density");
            in.palette_names = split_list(text_field(req, "palette_names"));
            in.roi_count = static_cast<int>(number_field(req, "roi_count"));
            res.text = mock_descriptor(in, req.seed);
        } else if (name_ == "sketch-generator") {
            res.image = mock_sketch(req);
        } else if (name_ == "rendering-generator") {
            res.image = mock_rendering(req);
        } else if (name_ == "feedback") {
            const auto options = split_list(text_field(req, "renderings"));
            if (options.empty()) throw AgentError("no renderings to choose from");
            Rng rng(req.seed);
            const auto& choice = options[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
            res.text = choice + "\nautomatic selection among " + std::to_string(options.size()) + " renderings";
        } else {
            throw AgentError("no mock for agent '" + name_ + "'");
        }
        return res;
    }

private:
    std::string name_;
};

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        for (int s = 18; s >= 0; s -= 6) out += kBase64Alphabet[(v >> s) & 63];
    }
    if (const auto rest = bytes.size() - i; rest > 0) {
        std::uint32_t v = bytes[i] << 16;
        if (rest == 2) v |= bytes[i + 1] << 8;
        out += kBase64Alphabet[(v >> 18) & 63];
        out += kBase64Alphabet[(v >> 12) & 63];
        out += rest == 2 ? kBase64Alphabet[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0) throw InputError("base64 length is not a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        std::uint32_t v = 0;
        int pad = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            const char c = text[i + j];
            v <<= 6;
            if (c == '=') {
                if (i + 4 != text.size() || j < 2) throw InputError("misplaced base64 padding");
                ++pad;
                continue;
            }
            if (pad) throw InputError("misplaced base64 padding");
            const auto k = kBase64Alphabet.find(c);
            if (k == std::string_view::npos) throw InputError("invalid base64 character");
            v |= static_cast<std::uint32_t>(k);
        }
        out.push_back(static_cast<std::uint8_t>(v >> 16));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>(v >> 8));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

std::string encode_agent_request(const AgentRequest& request) {
    nlohmann::json j;
    j["agent"] = request.agent;
    j["seed"] = request.seed;
    j["text"] = request.text;
    j["images"] = nlohmann::json::object();
    for (const auto& [name, img] : request.images) j["images"][name] = base64_encode(encode_png(img));
    return j.dump();
}

AgentRequest decode_agent_request(std::string_view body) {
    try {
        const auto j = nlohmann::json::parse(body);
        AgentRequest req;
        req.agent = j.at("agent").get<std::string>();
        req.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("text")) req.text = j.at("text").get<std::map<std::string, std::string>>();
        if (j.contains("images")) {
            for (const auto& [name, b64] : j.at("images").items()) {
                const auto bytes = base64_decode(b64.get<std::string>());
                req.images.emplace(name, decode_png(bytes));
            }
        }
        return req;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed agent request: ") + e.what());
    }
}

std::string encode_agent_response(const AgentResponse& response) {
    nlohmann::json j;
    j["status"] = response.status;
    j["text"] = response.text;
    if (response.image) j["image"] = base64_encode(encode_png(*response.image));
    return j.dump();
}

AgentResponse decode_agent_response(std::string_view body) {
    try {
        const auto j = nlohmann::json::parse(body);
        AgentResponse res;
        res.status = j.at("status").get<std::string>();
        res.text = j.value("text", std::string());
        if (j.contains("image") && !j.at("image").is_null()) {
            res.image = decode_png(base64_decode(j.at("image").get<std::string>()));
        }
        return res;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed agent response: ") + e.what());
    }
}

std::unique_ptr<Agent> make_mock_agent(const std::string& name) {
    if (!is_agent_name(name)) throw InputError("unknown agent '" + name + "'");
    return std::make_unique<MockAgent>(name);
}

std::string mock_descriptor(const DescriptorInput& input, std::uint64_t seed) {
    Rng rng(seed ^ fnv1a(input.kind));
    const bool no_edges = !(input.edge_density > 0.0);
    const std::string density = input.edge_density < 0.05 ? "sparse" : input.edge_density < 0.15 ? "moderate" : "dense";
    const std::string regions =
        std::to_string(input.roi_count) + (input.roi_count == 1 ? " attended region" : " attended regions");
    std::ostringstream os;

    if (input.kind == "shape") {
        if (no_edges) {
            os << "no dominant contours detected across " << regions << "; forms read as soft, unbroken masses.";
        } else {
            static constexpr std::array<std::string_view, 4> kMotifs = {"flowing curves", "crisp angular breaks",
                                                                        "layered silhouettes", "tapering lines"};
            os << "Shape language: " << density << " contour network (edge density "
               << fixed(input.edge_density, 3) << ") across " << regions << ", favouring " << pick(rng, kMotifs)
               << '.';
        }
    } else if (input.kind == "texture_style") {
        static constexpr std::array<std::string_view, 4> kFinishes = {"matte", "satin", "brushed", "glossy"};
        if (no_edges) {
            os << "no dominant contours detected; surfaces read as smooth and untextured, suggesting a "
               << pick(rng, kFinishes) << " finish";
        } else {
            os << "Texture and style: " << density << " surface articulation with a " << pick(rng, kFinishes)
               << " finish";
        }
        if (!input.palette_names.empty()) os << ", carried in " << input.palette_names.front();
        os << '.';
    } else if (input.kind == "colour") {
        if (input.palette_names.empty()) {
            os << "No dominant colours detected.";
        } else {
            static constexpr std::array<std::string_view, 4> kMoods = {"calm", "warm", "vivid", "restrained"};
            os << "Colour story: " << join(input.palette_names, ", ") << ", led by " << input.palette_names.front()
               << " for a " << pick(rng, kMoods) << " mood.";
        }
    } else {
        throw InputError("unknown descriptor kind '" + input.kind + "'");
    }
    return os.str();
}

}  // namespace gazeform
