#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

#include "gazeform/error.hpp"
#include "gazeform/features.hpp"

namespace gazeform {

double RoiThreshold::resolve(double total_dwell) const {
    const double t = kind == Kind::seconds ? value : value * total_dwell;
    if (!(t > 0.0)) throw InputError("ROI threshold must be positive");
    return t;
}

double default_roi_threshold(const Eigen::MatrixXd& heat) {
    return std::max(0.25, 0.05 * heat.sum());
}

Eigen::MatrixXd roi_heat_grid(std::span<const GazeEvent> events, int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw InputError("ROI grid dimensions must be positive");
    Eigen::MatrixXd heat = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& e : events) {
        const int r = std::min(static_cast<int>(e.v * rows), rows - 1);
        const int c = std::min(static_cast<int>(e.u * cols), cols - 1);
        heat(r, c) += e.duration();
    }
    return heat;
}

PixelRect cell_rect(int row, int col, int rows, int cols, int image_width, int image_height) {
    const int x0 = static_cast<int>(static_cast<long>(col) * image_width / cols);
    const int x1 = static_cast<int>(static_cast<long>(col + 1) * image_width / cols);
    const int y0 = static_cast<int>(static_cast<long>(row) * image_height / rows);
    const int y1 = static_cast<int>(static_cast<long>(row + 1) * image_height / rows);
    return {x0, y0, x1 - x0, y1 - y0};
}

std::vector<Roi> detect_rois(const Eigen::MatrixXd& heat, double threshold_seconds, const std::string& image_id,
                             int image_width, int image_height) {
    if (!(threshold_seconds > 0.0)) throw InputError("ROI threshold must be positive");
    const int rows = static_cast<int>(heat.rows());
    const int cols = static_cast<int>(heat.cols());
    if ((heat.array() < 0.0).any()) throw InputError("heat grid has negative dwell");
    if (image_width < cols || image_height < rows) throw InputError("image smaller than the ROI grid");

    Eigen::MatrixXi label = Eigen::MatrixXi::Constant(rows, cols, -1);
    std::vector<Roi> rois;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (label(r, c) >= 0 || !(heat(r, c) > threshold_seconds)) continue;
            const int id = static_cast<int>(rois.size());
            Roi roi;
            roi.image_id = image_id;
            std::deque<std::pair<int, int>> queue{{r, c}};
            label(r, c) = id;
            while (!queue.empty()) {
                auto [cr, cc] = queue.front();
                queue.pop_front();
                roi.cells.push_back({image_id, cr, cc, heat(cr, cc),
                                     cell_rect(cr, cc, rows, cols, image_width, image_height)});
                constexpr std::array<std::pair<int, int>, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
                for (auto [dr, dc] : kSteps) {
                    const int nr = cr + dr;
                    const int nc = cc + dc;
                    if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
                    if (label(nr, nc) >= 0 || !(heat(nr, nc) > threshold_seconds)) continue;
                    label(nr, nc) = id;
                    queue.emplace_back(nr, nc);
                }
            }
            std::sort(roi.cells.begin(), roi.cells.end(),
                      [](const RoiCell& a, const RoiCell& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
            int x0 = image_width, y0 = image_height, x1 = 0, y1 = 0;
            for (const auto& cell : roi.cells) {
                roi.dwell += cell.dwell;
                x0 = std::min(x0, cell.rect.x);
                y0 = std::min(y0, cell.rect.y);
                x1 = std::max(x1, cell.rect.x + cell.rect.width);
                y1 = std::max(y1, cell.rect.y + cell.rect.height);
            }
            roi.rect = {x0, y0, x1 - x0, y1 - y0};
            rois.push_back(std::move(roi));
        }
    }
    std::stable_sort(rois.begin(), rois.end(), [](const Roi& a, const Roi& b) { return a.dwell > b.dwell; });
    return rois;
}

Image compose_collage(std::span<const Image> crops) {
    if (crops.empty()) throw InputError("collage needs at least one crop");
    const int row_height = crops.front().height;
    const int channels = std::any_of(crops.begin(), crops.end(), [](const Image& i) { return i.channels == 3; }) ? 3 : 1;

    std::vector<Image> scaled;
    scaled.reserve(crops.size());
    double area = 0.0;
    for (const auto& crop : crops) {
        if (crop.empty()) throw InputError("collage crop is empty");
        const int w = std::max(1, static_cast<int>(std::lround(static_cast<double>(crop.width) * row_height / crop.height)));
        Image s = resize(crop, w, row_height);
        if (channels == 3) s = to_rgb(s);
        area += static_cast<double>(w) * row_height;
        scaled.push_back(std::move(s));
    }
    const double target_width = std::sqrt(area);

    // Row breaks: start a new row when the next crop would overflow a non-empty row.
    std::vector<std::vector<std::size_t>> rows(1);
    std::vector<int> row_widths(1, 0);
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const int w = scaled[i].width;
        if (!rows.back().empty() && row_widths.back() + w > target_width + 1e-9) {
            rows.emplace_back();
            row_widths.push_back(0);
        }
        rows.back().push_back(i);
        row_widths.back() += w;
    }
    const int canvas_w = *std::max_element(row_widths.begin(), row_widths.end());
    Image canvas(canvas_w, row_height * static_cast<int>(rows.size()), channels);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        int x = 0;
        for (auto i : rows[r]) {
            const Image& s = scaled[i];
            for (int y = 0; y < s.height; ++y) {
                const int cy = static_cast<int>(r) * row_height + y;
                std::copy_n(&s.pixels[static_cast<std::size_t>(y) * s.width * channels],
                            static_cast<std::size_t>(s.width) * channels,
                            &canvas.pixels[(static_cast<std::size_t>(cy) * canvas_w + x) * channels]);
            }
            x += s.width;
        }
    }
    return canvas;
}

}  // namespace gazeform
