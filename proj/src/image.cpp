#include "gazeform/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <png.h>

#include "gazeform/error.hpp"

namespace gazeform {

Image to_rgb(const Image& img) {
    if (img.channels == 3) return img;
    Image out(img.width, img.height, 3);
    for (std::size_t i = 0; i < static_cast<std::size_t>(img.width) * img.height; ++i) {
        const auto g = img.pixels[i * img.channels];
        out.pixels[3 * i] = out.pixels[3 * i + 1] = out.pixels[3 * i + 2] = g;
    }
    return out;
}

Image crop(const Image& img, const PixelRect& r) {
    if (r.x < 0 || r.y < 0 || r.width <= 0 || r.height <= 0 || r.x + r.width > img.width ||
        r.y + r.height > img.height) {
        throw InputError("crop rectangle outside image");
    }
    Image out(r.width, r.height, img.channels);
    const std::size_t row_bytes = static_cast<std::size_t>(r.width) * img.channels;
    for (int y = 0; y < r.height; ++y) {
        const auto* src = &img.pixels[(static_cast<std::size_t>(r.y + y) * img.width + r.x) * img.channels];
        std::copy(src, src + row_bytes, &out.pixels[static_cast<std::size_t>(y) * row_bytes]);
    }
    return out;
}

Image resize(const Image& img, int width, int height) {
    if (width <= 0 || height <= 0) throw InputError("resize to empty image");
    if (width == img.width && height == img.height) return img;
    Image out(width, height, img.channels);
    const double sx = static_cast<double>(img.width) / width;
    const double sy = static_cast<double>(img.height) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(x0, y0, c) * (1 - wx) + img.at(x1, y0, c) * wx;
                const double bottom = img.at(x0, y1, c) * (1 - wx) + img.at(x1, y1, c) * wx;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(top * (1 - wy) + bottom * wy));
            }
        }
    }
    return out;
}

Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> luma(const Image& img) {
    Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> y(img.height, img.width);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            if (img.channels >= 3) {
                y(r, c) = 299 * img.at(c, r, 0) + 587 * img.at(c, r, 1) + 114 * img.at(c, r, 2);
            } else {
                y(r, c) = 1000 * static_cast<std::int64_t>(img.at(c, r, 0));
            }
        }
    }
    return y;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
    if (img.empty() || (img.channels != 1 && img.channels != 3)) throw InputError("cannot encode image");
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width);
    pi.height = static_cast<png_uint_32>(img.height);
    pi.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&pi, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png sizing failed: ") + pi.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&pi, out.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode failed: ") + pi.message);
    }
    out.resize(size);
    return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&pi, bytes.data(), bytes.size())) {
        throw InputError(std::string("not a PNG: ") + pi.message);
    }
    const bool colour = (pi.format & PNG_FORMAT_FLAG_COLOR) != 0;
    pi.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    Image img(static_cast<int>(pi.width), static_cast<int>(pi.height), colour ? 3 : 1);
    if (!png_image_finish_read(&pi, nullptr, img.pixels.data(), 0, nullptr)) {
        png_image_free(&pi);
        throw InputError(std::string("PNG decode failed: ") + pi.message);
    }
    return img;
}

Image read_png(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

void write_png(const Image& img, const std::string& path) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::string to_pgm(const Eigen::MatrixXd& grid) {
    std::ostringstream os;
    os << "P2\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
    const double peak = grid.size() > 0 ? grid.maxCoeff() : 0.0;
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
        for (Eigen::Index c = 0; c < grid.cols(); ++c) {
            const long v = peak > 0.0 ? std::lround(std::max(0.0, grid(r, c)) / peak * 255.0) : 0;
            os << (c ? " " : "") << v;
        }
        os << '\n';
    }
    return os.str();
}

std::string to_pgm(const Image& gray) {
    std::ostringstream os;
    os << "P2\n" << gray.width << ' ' << gray.height << "\n255\n";
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) os << (x ? " " : "") << static_cast<int>(gray.at(x, y, 0));
        os << '\n';
    }
    return os.str();
}

}  // namespace gazeform
