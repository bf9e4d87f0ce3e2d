#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gazeform {

// Interleaved 8-bit raster, row-major, 1 (gray) or 3 (RGB) channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, fill) {}

    bool empty() const { return width == 0 || height == 0; }

    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

struct PixelRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

Image to_rgb(const Image& img);
Image crop(const Image& img, const PixelRect& rect);
// Bilinear resample to the given size.
Image resize(const Image& img, int width, int height);

// Integer luma 299R + 587G + 114B (range 0..255000); exact under channel offsets.
Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> luma(const Image& img);

Image read_png(const std::string& path);
void write_png(const Image& img, const std::string& path);
std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);

// Portable graymap (ASCII P2) with maxval 255; values are scaled so the maximum maps to 255.
std::string to_pgm(const Eigen::MatrixXd& grid);
std::string to_pgm(const Image& gray);

}  // namespace gazeform
