#include "jigsaw/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace jigsaw {

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
    if (w < 0 || h < 0) throw std::invalid_argument("negative image size");
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
        rgb[i] = fill[0];
        rgb[i + 1] = fill[1];
        rgb[i + 2] = fill[2];
    }
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& file, const char* mode) {
    FilePtr f(std::fopen(file.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open " + file.string());
    return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp message) {
    auto* text = static_cast<std::string*>(png_get_error_ptr(png));
    *text = message;
    png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

} // namespace

Image read_png(const std::filesystem::path& file) {
    auto f = open_file(file, "rb");
    std::array<unsigned char, 8> sig{};
    if (std::fread(sig.data(), 1, sig.size(), f.get()) != sig.size() || png_sig_cmp(sig.data(), 0, sig.size()))
        throw std::runtime_error(file.string() + " is not a PNG file");

    std::string error;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
    if (!png) throw std::runtime_error("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    Image image;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("cannot decode " + file.string() + ": " + error);
    }
    png_init_io(png, f.get());
    png_set_sig_bytes(png, static_cast<int>(sig.size()));
    png_read_info(png, info);

    const auto color = png_get_color_type(png, info);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
        png_set_gray_to_rgb(png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    image.width = static_cast<int>(png_get_image_width(png, info));
    image.height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(image.width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported PNG layout in " + file.string());
    }
    image.rgb.resize(static_cast<std::size_t>(image.width) * image.height * 3);
    rows.resize(image.height);
    for (int y = 0; y < image.height; ++y) rows[y] = image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

void write_png(const std::filesystem::path& file, const Image& image) {
    if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("cannot write an empty image");
    auto f = open_file(file, "wb");
    std::string error;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, png_warn);
    if (!png) throw std::runtime_error("libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows(image.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("cannot encode " + file.string() + ": " + error);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        rows[y] = const_cast<png_bytep>(image.rgb.data() + static_cast<std::size_t>(y) * image.width * 3);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image rotate(const Image& image, Rotation r) {
    const bool swap = quarter_turns(r) % 2 == 1;
    Image out(swap ? image.height : image.width, swap ? image.width : image.height);
    const int w = image.width, h = image.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int nx = x, ny = y;
            switch (r) {
                case Rotation::R0: break;
                case Rotation::R90: nx = h - 1 - y; ny = x; break;
                case Rotation::R180: nx = w - 1 - x; ny = h - 1 - y; break;
                case Rotation::R270: nx = y; ny = w - 1 - x; break;
            }
            out.set(nx, ny, image.at(x, y));
        }
    }
    return out;
}

Image crop(const Image& image, int x, int y, int width, int height) {
    if (x < 0 || y < 0 || width < 0 || height < 0 || x + width > image.width || y + height > image.height)
        throw std::invalid_argument("crop rectangle outside the image");
    Image out(width, height);
    for (int row = 0; row < height; ++row) {
        const auto* src = image.rgb.data() + (static_cast<std::size_t>(y + row) * image.width + x) * 3;
        std::copy(src, src + static_cast<std::size_t>(width) * 3, out.rgb.data() + static_cast<std::size_t>(row) * width * 3);
    }
    return out;
}

void blit(Image& dst, const Image& src, int x, int y) {
    for (int row = 0; row < src.height; ++row) {
        const int ty = y + row;
        if (ty < 0 || ty >= dst.height) continue;
        for (int col = 0; col < src.width; ++col) {
            const int tx = x + col;
            if (tx >= 0 && tx < dst.width) dst.set(tx, ty, src.at(col, row));
        }
    }
}

Image downscale_to_budget(const Image& image, std::size_t max_pixels) {
    const auto pixels = static_cast<std::size_t>(image.width) * image.height;
    if (max_pixels == 0 || pixels <= max_pixels) return image;
    const double scale = std::sqrt(static_cast<double>(max_pixels) / static_cast<double>(pixels));
    const int w = std::max(1, static_cast<int>(std::floor(image.width * scale)));
    const int h = std::max(1, static_cast<int>(std::floor(image.height * scale)));
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        const int sy = std::min(image.height - 1, static_cast<int>(static_cast<long long>(y) * image.height / h));
        for (int x = 0; x < w; ++x) {
            const int sx = std::min(image.width - 1, static_cast<int>(static_cast<long long>(x) * image.width / w));
            out.set(x, y, image.at(sx, sy));
        }
    }
    return out;
}

std::array<double, 3> srgb_to_lab(Rgb c) {
    auto linear = [](std::uint8_t v) {
        const double s = v / 255.0;
        return s <= 0.04045 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
    };
    const double r = linear(c[0]), g = linear(c[1]), b = linear(c[2]);
    const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
    const double y = (0.2126729 * r + 0.7151522 * g + 0.0721750 * b) / 1.00000;
    const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;
    auto f = [](double t) {
        constexpr double delta = 6.0 / 29.0;
        return t > delta * delta * delta ? std::cbrt(t) : t / (3 * delta * delta) + 4.0 / 29.0;
    };
    const double fx = f(x), fy = f(y), fz = f(z);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> normalized_lab(Rgb c) {
    const auto lab = srgb_to_lab(c);
    auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return {clamp01(lab[0] / 100.0), clamp01((lab[1] + 128.0) / 255.0), clamp01((lab[2] + 128.0) / 255.0)};
}

Piece piece_from_tile(PieceId id, const Image& tile) {
    if (tile.width != tile.height) throw DimensionError("tile " + std::to_string(id) + " is not square");
    std::vector<double> lab;
    lab.reserve(static_cast<std::size_t>(tile.width) * tile.height * 3);
    for (int y = 0; y < tile.height; ++y)
        for (int x = 0; x < tile.width; ++x) {
            const auto v = normalized_lab(tile.at(x, y));
            lab.insert(lab.end(), v.begin(), v.end());
        }
    return Piece(id, tile.width, std::move(lab));
}

std::vector<Piece> pieces_from_tiles(const std::vector<Image>& tiles) {
    std::vector<Piece> out;
    out.reserve(tiles.size());
    for (std::size_t i = 0; i < tiles.size(); ++i) out.push_back(piece_from_tile(static_cast<PieceId>(i), tiles[i]));
    return out;
}

} // namespace jigsaw
