#include "gazeform/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <tuple>

#include "gazeform/error.hpp"

namespace gazeform {

StimulusGrid build_grid(int rows, int cols, double arc_degrees, std::vector<std::string> image_ids) {
    if (rows <= 0 || cols <= 0) throw InputError("grid dimensions must be positive");
    if (!(arc_degrees > 0.0 && arc_degrees <= 360.0)) throw InputError("arc_degrees must lie in (0, 360]");
    const auto expected = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (image_ids.size() != expected) {
        throw InputError("grid expects " + std::to_string(expected) + " image ids, got " +
                         std::to_string(image_ids.size()));
    }
    StimulusGrid g;
    g.rows_ = rows;
    g.cols_ = cols;
    g.arc_degrees_ = arc_degrees;
    for (std::size_t i = 0; i < image_ids.size(); ++i) {
        if (!g.index_.emplace(image_ids[i], i).second) {
            throw InputError("duplicate image id '" + image_ids[i] + "'");
        }
    }
    g.image_ids_ = std::move(image_ids);
    return g;
}

std::size_t StimulusGrid::index_of(const std::string& image_id) const {
    auto it = index_.find(image_id);
    if (it == index_.end()) throw InputError("unknown image id '" + image_id + "'");
    return it->second;
}

StimulusGrid::Cell StimulusGrid::cell(std::size_t index) const {
    return {static_cast<int>(index / cols_), static_cast<int>(index % cols_)};
}

std::size_t StimulusGrid::index(Cell c) const {
    return static_cast<std::size_t>(c.row) * cols_ + static_cast<std::size_t>(c.col);
}

double StimulusGrid::azimuth(std::size_t index) const {
    const double c = cell(index).col;
    return -arc_degrees_ / 2.0 + arc_degrees_ * (c + 0.5) / cols_;
}

void check_event(const GazeEvent& e) {
    if (!std::isfinite(e.t_start) || !std::isfinite(e.t_end)) throw InputError("non-finite timestamp");
    if (!(e.t_end > e.t_start)) {
        throw InputError("event on '" + e.image_id + "' has non-positive duration");
    }
    if (!(e.u >= 0.0 && e.u <= 1.0 && e.v >= 0.0 && e.v <= 1.0)) {
        throw InputError("gaze point outside [0,1]^2 on '" + e.image_id + "'");
    }
}

Session validate_session(std::vector<GazeEvent> events, const StimulusGrid& grid) {
    Session s;
    if (events.empty()) return s;
    s.session_id = events.front().session_id;
    for (const auto& e : events) {
        if (e.session_id != s.session_id) {
            throw InputError("session mixes ids '" + s.session_id + "' and '" + e.session_id + "'");
        }
        check_event(e);
        if (!grid.contains(e.image_id)) throw InputError("unknown image id '" + e.image_id + "'");
    }
    std::stable_sort(events.begin(), events.end(), [](const GazeEvent& a, const GazeEvent& b) {
        return std::tie(a.t_start, a.t_end, a.image_id) < std::tie(b.t_start, b.t_end, b.image_id);
    });
    std::map<std::string, double> last_end;
    for (const auto& e : events) {
        auto [it, inserted] = last_end.try_emplace(e.image_id, e.t_end);
        if (!inserted) {
            if (e.t_start < it->second) {
                throw InputError("overlapping events on '" + e.image_id + "' at t=" +
                                 std::to_string(e.t_start));
            }
            it->second = e.t_end;
        }
    }
    s.events = std::move(events);
    return s;
}

std::vector<Session> split_sessions(const std::vector<GazeEvent>& events, const StimulusGrid& grid) {
    std::map<std::string, std::vector<GazeEvent>> by_id;
    for (const auto& e : events) by_id[e.session_id].push_back(e);
    std::vector<Session> out;
    out.reserve(by_id.size());
    for (auto& [id, evs] : by_id) out.push_back(validate_session(std::move(evs), grid));
    return out;
}

std::string_view to_string(Feature f) {
    switch (f) {
        case Feature::colour: return "colour";
        case Feature::shape: return "shape";
        case Feature::size: return "size";
        case Feature::orientation: return "orientation";
        case Feature::texture: return "texture";
    }
    return "";
}

std::optional<Feature> parse_feature(std::string_view token) {
    for (auto f : {Feature::colour, Feature::shape, Feature::size, Feature::orientation,
                   Feature::texture}) {
        if (token == to_string(f)) return f;
    }
    return std::nullopt;
}

void check_permutation(const std::vector<std::string>& order, const std::set<std::string>& candidates) {
    std::set<std::string> seen;
    for (const auto& c : order) {
        if (c.empty()) throw InputError("missing candidate (empty rank)");
        if (!seen.insert(c).second) throw InputError("candidate '" + c + "' ranked twice");
        if (!candidates.contains(c)) throw InputError("unexpected candidate '" + c + "'");
    }
    for (const auto& c : candidates) {
        if (!seen.contains(c)) throw InputError("missing candidate '" + c + "'");
    }
}

void check_profile(const LikertProfile& p) {
    for (Eigen::Index i = 0; i < p.means.size(); ++i) {
        const double m = p.means(i);
        if (!(m >= 1.0 && m <= 5.0)) {
            throw InputError("profile '" + p.rendering_id + "' criterion " +
                             std::string(kCriteria[static_cast<std::size_t>(i)]) + " outside [1,5]");
        }
    }
}

bool is_hex_colour(std::string_view s) {
    if (s.size() != 7 || s[0] != '#') return false;
    return std::all_of(s.begin() + 1, s.end(), [](unsigned char ch) {
        return std::isdigit(ch) || (ch >= 'A' && ch <= 'F') || (ch >= 'a' && ch <= 'f');
    });
}

void check_feature_maps(const FeatureMaps& maps) {
    for (const auto& e : maps.palette) {
        if (!is_hex_colour(e.hex)) throw InputError("malformed palette colour '" + e.hex + "'");
    }
    if (maps.descriptors.size() != kDescriptorKeys.size()) throw InputError("descriptor keys are fixed");
    for (auto key : kDescriptorKeys) {
        if (!maps.descriptors.contains(std::string(key))) {
            throw InputError("missing descriptor '" + std::string(key) + "'");
        }
    }
}

}  // namespace gazeform
