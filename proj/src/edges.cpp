#include <cmath>
#include <deque>

#include "gazeform/error.hpp"
#include "gazeform/features.hpp"

namespace gazeform {

namespace {

using IntArray = Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Luma units per unit intensity.
constexpr double kScale = 255000.0;

struct IntGradient {
    IntArray gx;
    IntArray gy;
};

IntGradient sobel_int(const Image& image) {
    const IntArray y = luma(image);
    const auto h = y.rows();
    const auto w = y.cols();
    IntGradient g{IntArray::Zero(h, w), IntArray::Zero(h, w)};
    auto at = [&](Eigen::Index r, Eigen::Index c) {
        return y(std::clamp<Eigen::Index>(r, 0, h - 1), std::clamp<Eigen::Index>(c, 0, w - 1));
    };
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            g.gx(r, c) = (at(r - 1, c + 1) + 2 * at(r, c + 1) + at(r + 1, c + 1)) -
                         (at(r - 1, c - 1) + 2 * at(r, c - 1) + at(r + 1, c - 1));
            g.gy(r, c) = (at(r + 1, c - 1) + 2 * at(r + 1, c) + at(r + 1, c + 1)) -
                         (at(r - 1, c - 1) + 2 * at(r - 1, c) + at(r - 1, c + 1));
        }
    }
    return g;
}

}  // namespace

Gradient sobel(const Image& image) {
    const auto g = sobel_int(image);
    return {g.gx.cast<double>() / kScale, g.gy.cast<double>() / kScale};
}

Image SobelEdgeBackend::detect(const Image& image, const EdgeOptions& options) const {
    if (options.low < 0.0 || options.high < 0.0) throw InputError("edge thresholds must be non-negative");
    if (options.low > options.high) throw InputError("edge low threshold exceeds high threshold");
    if (image.empty()) throw InputError("edge extraction on empty image");

    const auto g = sobel_int(image);
    const auto h = g.gx.rows();
    const auto w = g.gx.cols();
    const IntArray mag2 = g.gx.square() + g.gy.square();
    auto mag2_at = [&](Eigen::Index r, Eigen::Index c) -> std::int64_t {
        if (r < 0 || c < 0 || r >= h || c >= w) return 0;
        return mag2(r, c);
    };

    // Non-maximum suppression along the gradient direction, quantized to 4 bins.
    // A pixel survives if it beats the backward neighbour and ties-or-beats the
    // forward one, so plateaus thin to a single pixel.
    constexpr double kTan22 = 0.41421356237309503;
    constexpr double kTan67 = 2.4142135623730949;
    Eigen::ArrayXXd thin = Eigen::ArrayXXd::Zero(h, w);
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            const std::int64_t m = mag2(r, c);
            if (m == 0) continue;
            const double ax = std::fabs(static_cast<double>(g.gx(r, c)));
            const double ay = std::fabs(static_cast<double>(g.gy(r, c)));
            int dr = 0, dc = 0;
            if (ay <= ax * kTan22) {
                dc = 1;
            } else if (ay >= ax * kTan67) {
                dr = 1;
            } else if ((g.gx(r, c) > 0) == (g.gy(r, c) > 0)) {
                dr = 1;
                dc = 1;
            } else {
                dr = 1;
                dc = -1;
            }
            if (m > mag2_at(r - dr, c - dc) && m >= mag2_at(r + dr, c + dc)) {
                thin(r, c) = std::sqrt(static_cast<double>(m)) / kScale;
            }
        }
    }

    Image out(static_cast<int>(w), static_cast<int>(h), 1, 0);
    std::deque<std::pair<Eigen::Index, Eigen::Index>> queue;
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < w; ++c) {
            if (thin(r, c) > 0.0 && thin(r, c) >= options.high) {
                out.at(static_cast<int>(c), static_cast<int>(r)) = 255;
                queue.emplace_back(r, c);
            }
        }
    }
    while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const auto nr = r + dr;
                const auto nc = c + dc;
                if (nr < 0 || nc < 0 || nr >= h || nc >= w) continue;
                auto& px = out.at(static_cast<int>(nc), static_cast<int>(nr));
                if (px == 0 && thin(nr, nc) > 0.0 && thin(nr, nc) >= options.low) {
                    px = 255;
                    queue.emplace_back(nr, nc);
                }
            }
        }
    }
    return out;
}

Image extract_edges(const Image& image, const EdgeOptions& options) {
    return SobelEdgeBackend{}.detect(image, options);
}

}  // namespace gazeform
