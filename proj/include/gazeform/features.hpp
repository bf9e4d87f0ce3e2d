#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gazeform/image.hpp"
#include "gazeform/model.hpp"

namespace gazeform {

// ---------------------------------------------------------------------------
// Regions of interest
// ---------------------------------------------------------------------------

inline constexpr int kRoiGridRows = 10;
inline constexpr int kRoiGridCols = 10;

struct RoiCell {
    std::string image_id;
    int row = 0;
    int col = 0;
    double dwell = 0.0;
    PixelRect rect;

    friend bool operator==(const RoiCell&, const RoiCell&) = default;
};

// A 4-connected group of hot cells; rect is the bounding box of its cells.
struct Roi {
    std::string image_id;
    std::vector<RoiCell> cells;  // row-major order
    PixelRect rect;
    double dwell = 0.0;

    friend bool operator==(const Roi&, const Roi&) = default;
};

struct RoiThreshold {
    enum class Kind { seconds, fraction_of_total };
    Kind kind = Kind::seconds;
    double value = 0.25;

    // Absolute threshold in seconds for a grid with the given total dwell.
    double resolve(double total_dwell) const;
};

// max(0.25 s, 5% of the grid's total dwell).
double default_roi_threshold(const Eigen::MatrixXd& heat);

// Accumulates gaze dwell into a rows x cols grid over the image (cell of (u, v)).
Eigen::MatrixXd roi_heat_grid(std::span<const GazeEvent> events, int rows = kRoiGridRows,
                              int cols = kRoiGridCols);

// Pixel rectangle of grid cell (row, col) on an image of the given size.
PixelRect cell_rect(int row, int col, int rows, int cols, int image_width, int image_height);

// Cells with dwell strictly above `threshold_seconds`, merged into 4-connected
// groups. ROIs are ordered by descending dwell, then by their first cell.
std::vector<Roi> detect_rois(const Eigen::MatrixXd& heat, double threshold_seconds,
                             const std::string& image_id, int image_width, int image_height);

// ---------------------------------------------------------------------------
// Collage
// ---------------------------------------------------------------------------

// Scales every crop to the first crop's height and packs them row-major,
// breaking rows at the width of a square with the same total area.
Image compose_collage(std::span<const Image> crops);

// ---------------------------------------------------------------------------
// Edges
// ---------------------------------------------------------------------------

struct EdgeOptions {
    // Thresholds on the Sobel magnitude of intensity in [0, 1]; a full-contrast
    // step edge has magnitude 4.
    double low = 0.1;
    double high = 0.3;
};

// Edge extraction backend. The built-in one is Sobel + non-maximum
// suppression + hysteresis; other detectors plug in behind the same call.
class EdgeBackend {
public:
    virtual ~EdgeBackend() = default;
    virtual Image detect(const Image& image, const EdgeOptions& options) const = 0;
};

class SobelEdgeBackend final : public EdgeBackend {
public:
    Image detect(const Image& image, const EdgeOptions& options) const override;
};

// Binary (0/255) single-channel edge map.
Image extract_edges(const Image& image, const EdgeOptions& options = {});

// Sobel gradients of the luma image with replicated borders, scaled so that
// intensity spans [0, 1].
struct Gradient {
    Eigen::ArrayXXd gx;
    Eigen::ArrayXXd gy;
    Eigen::ArrayXXd magnitude() const { return (gx.square() + gy.square()).sqrt(); }
};
Gradient sobel(const Image& image);

// ---------------------------------------------------------------------------
// Colour
// ---------------------------------------------------------------------------

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
    friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

Rgb parse_hex(std::string_view hex);  // throws InputError
std::string to_hex(Rgb c);

// CIELAB (D65) coordinates of an sRGB colour.
Eigen::Vector3d to_lab(Rgb c);

struct NamedColour {
    std::string_view name;
    std::string_view hex;
};

const std::vector<NamedColour>& web_colour_table();

// Nearest table entry in CIELAB; ties go to the lexicographically smaller name.
std::vector<std::string> name_colours(std::span<const std::string> hexes,
                                      const std::vector<NamedColour>& table = web_colour_table());

struct Swatch {
    std::string hex;
    double weight = 0.0;
    friend bool operator==(const Swatch&, const Swatch&) = default;
};

struct Palette {
    std::vector<Swatch> swatches;  // descending weight
    std::vector<std::string> names;
    std::optional<std::string> note;
};

// Median-cut quantization into at most k boxes. When the pixels hold fewer
// than k distinct colours the palette is shorter and `note` says so.
Palette extract_palette(const Image& image, int k);
Palette extract_palette(std::span<const Image> tiles, int k);

// Horizontal strip of swatches, each `cell` pixels square.
Image palette_image(const Palette& palette, int cell = 64);
std::string palette_csv(const Palette& palette);

}  // namespace gazeform
