#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "gazeform/error.hpp"
#include "gazeform/features.hpp"

namespace gazeform {

Rgb parse_hex(std::string_view hex) {
    if (!is_hex_colour(hex)) throw InputError("malformed hex colour '" + std::string(hex) + "'");
    auto nibble = [](char ch) -> int {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        return ch - 'A' + 10;
    };
    auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])); };
    return {byte(1), byte(3), byte(5)};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
    return buf;
}

Eigen::Vector3d to_lab(Rgb c) {
    auto linear = [](std::uint8_t v) {
        const double s = v / 255.0;
        return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
    };
    const Eigen::Vector3d rgb(linear(c.r), linear(c.g), linear(c.b));
    Eigen::Matrix3d m;
    m << 0.4124564, 0.3575761, 0.1804375,
         0.2126729, 0.7151522, 0.0721750,
         0.0193339, 0.1191920, 0.9503041;
    const Eigen::Vector3d white(0.95047, 1.00000, 1.08883);
    const Eigen::Vector3d xyz = (m * rgb).cwiseQuotient(white);
    auto f = [](double t) {
        constexpr double kDelta = 6.0 / 29.0;
        return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3 * kDelta * kDelta) + 4.0 / 29.0;
    };
    const double fx = f(xyz.x()), fy = f(xyz.y()), fz = f(xyz.z());
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<std::string> name_colours(std::span<const std::string> hexes, const std::vector<NamedColour>& table) {
    if (table.empty()) throw InputError("colour name table is empty");
    std::vector<std::pair<std::string_view, Eigen::Vector3d>> labs;
    labs.reserve(table.size());
    for (const auto& e : table) labs.emplace_back(e.name, to_lab(parse_hex(e.hex)));

    std::vector<std::string> names;
    names.reserve(hexes.size());
    for (const auto& hex : hexes) {
        const Eigen::Vector3d lab = to_lab(parse_hex(hex));
        const std::pair<std::string_view, Eigen::Vector3d>* best = nullptr;
        double best_d = HUGE_VAL;
        for (const auto& entry : labs) {
            const double d = (entry.second - lab).squaredNorm();
            if (d < best_d || (d == best_d && entry.first < best->first)) {
                best_d = d;
                best = &entry;
            }
        }
        names.emplace_back(best->first);
    }
    return names;
}

namespace {

struct ColourCount {
    std::array<int, 3> rgb;
    long count;
};

struct Box {
    std::vector<ColourCount> colours;
    long population = 0;

    int range(int ch) const {
        int lo = 255, hi = 0;
        for (const auto& c : colours) {
            lo = std::min(lo, c.rgb[ch]);
            hi = std::max(hi, c.rgb[ch]);
        }
        return hi - lo;
    }
    int widest() const {
        int best = 0;
        for (int ch = 1; ch < 3; ++ch) {
            if (range(ch) > range(best)) best = ch;
        }
        return best;
    }
};

// Splits at the boundary between distinct channel values closest to half the
// population, so a colour never ends up in both halves.
std::pair<Box, Box> split(const Box& box) {
    const int ch = box.widest();
    std::array<long, 256> hist{};
    for (const auto& c : box.colours) hist[static_cast<std::size_t>(c.rgb[ch])] += c.count;
    int lo = 255, hi = 0;
    for (const auto& c : box.colours) {
        lo = std::min(lo, c.rgb[ch]);
        hi = std::max(hi, c.rgb[ch]);
    }
    const double half = box.population / 2.0;
    long cum = 0;
    int cut = lo;
    double best = HUGE_VAL;
    for (int v = lo; v < hi; ++v) {
        cum += hist[static_cast<std::size_t>(v)];
        if (hist[static_cast<std::size_t>(v)] == 0) continue;
        const double d = std::fabs(static_cast<double>(cum) - half);
        if (d < best) {
            best = d;
            cut = v;
        }
    }
    Box a, b;
    for (const auto& c : box.colours) {
        Box& dst = c.rgb[ch] <= cut ? a : b;
        dst.colours.push_back(c);
        dst.population += c.count;
    }
    return {std::move(a), std::move(b)};
}

Palette median_cut(const std::map<std::array<int, 3>, long>& histogram, int k) {
    if (k < 1) throw InputError("palette size k must be at least 1");
    if (histogram.empty()) throw InputError("palette of an empty image");
    std::vector<Box> boxes(1);
    for (const auto& [rgb, n] : histogram) {
        boxes[0].colours.push_back({rgb, n});
        boxes[0].population += n;
    }
    const long total = boxes[0].population;
    while (static_cast<int>(boxes.size()) < k) {
        int pick = -1;
        int pick_range = 0;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            const int r = boxes[i].range(boxes[i].widest());
            if (r == 0) continue;
            if (pick < 0 || r > pick_range ||
                (r == pick_range && boxes[i].population > boxes[static_cast<std::size_t>(pick)].population)) {
                pick = static_cast<int>(i);
                pick_range = r;
            }
        }
        if (pick < 0) break;
        auto [a, b] = split(boxes[static_cast<std::size_t>(pick)]);
        boxes[static_cast<std::size_t>(pick)] = std::move(a);
        boxes.push_back(std::move(b));
    }

    Palette p;
    for (const auto& box : boxes) {
        std::array<double, 3> sum{};
        for (const auto& c : box.colours) {
            for (int ch = 0; ch < 3; ++ch) sum[static_cast<std::size_t>(ch)] += static_cast<double>(c.rgb[ch]) * c.count;
        }
        auto mean = [&](int ch) {
            return static_cast<std::uint8_t>(std::lround(sum[static_cast<std::size_t>(ch)] / box.population));
        };
        p.swatches.push_back({to_hex({mean(0), mean(1), mean(2)}),
                              static_cast<double>(box.population) / static_cast<double>(total)});
    }
    std::sort(p.swatches.begin(), p.swatches.end(), [](const Swatch& a, const Swatch& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.hex < b.hex;
    });
    if (static_cast<int>(histogram.size()) < k) {
        p.note = "image has only " + std::to_string(histogram.size()) + " distinct colours; returned " +
                 std::to_string(p.swatches.size()) + " swatches";
    }
    std::vector<std::string> hexes;
    for (const auto& s : p.swatches) hexes.push_back(s.hex);
    p.names = name_colours(hexes);
    return p;
}

void accumulate(const Image& img, std::map<std::array<int, 3>, long>& hist) {
    const Image rgb = to_rgb(img);
    for (std::size_t i = 0; i + 2 < rgb.pixels.size(); i += 3) {
        hist[{rgb.pixels[i], rgb.pixels[i + 1], rgb.pixels[i + 2]}] += 1;
    }
}

}  // namespace

Palette extract_palette(const Image& image, int k) {
    std::map<std::array<int, 3>, long> hist;
    accumulate(image, hist);
    return median_cut(hist, k);
}

Palette extract_palette(std::span<const Image> tiles, int k) {
    std::map<std::array<int, 3>, long> hist;
    for (const auto& t : tiles) accumulate(t, hist);
    return median_cut(hist, k);
}

Image palette_image(const Palette& palette, int cell) {
    Image img(cell * static_cast<int>(std::max<std::size_t>(palette.swatches.size(), 1)), cell, 3, 0);
    for (std::size_t i = 0; i < palette.swatches.size(); ++i) {
        const Rgb c = parse_hex(palette.swatches[i].hex);
        for (int y = 0; y < cell; ++y) {
            for (int x = 0; x < cell; ++x) {
                const int px = static_cast<int>(i) * cell + x;
                img.at(px, y, 0) = c.r;
                img.at(px, y, 1) = c.g;
                img.at(px, y, 2) = c.b;
            }
        }
    }
    return img;
}

std::string palette_csv(const Palette& palette) {
    std::ostringstream os;
    os << "hex,name,weight\n";
    os.precision(17);
    for (std::size_t i = 0; i < palette.swatches.size(); ++i) {
        os << palette.swatches[i].hex << ',' << (i < palette.names.size() ? palette.names[i] : "") << ','
           << palette.swatches[i].weight << '\n';
    }
    return os.str();
}

}  // namespace gazeform
