#pragma once

#include "jigsaw/tile_model.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace jigsaw {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit interleaved RGB raster, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h, Rgb fill = {0, 0, 0});

    Rgb at(int x, int y) const {
        const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
        rgb[i] = c[0];
        rgb[i + 1] = c[1];
        rgb[i + 2] = c[2];
    }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Reads 8/16-bit gray, gray+alpha, RGB or RGBA PNGs; alpha is dropped.
/// Throws std::runtime_error on unreadable or malformed files.
Image read_png(const std::filesystem::path& file);
void write_png(const std::filesystem::path& file, const Image& image);

/// Turns the pixels clockwise by `r`.
Image rotate(const Image& image, Rotation r);
Image crop(const Image& image, int x, int y, int width, int height);
/// Copies `src` into `dst` with its top-left corner at (x, y), clipped.
void blit(Image& dst, const Image& src, int x, int y);
/// Nearest-neighbour downscale so width*height <= max_pixels; no-op if it fits.
Image downscale_to_budget(const Image& image, std::size_t max_pixels);

/// sRGB (D65) to CIE L*a*b*.
std::array<double, 3> srgb_to_lab(Rgb c);
/// L*/100 and (a* + 128)/255, (b* + 128)/255, clamped to [0, 1].
std::array<double, 3> normalized_lab(Rgb c);
/// Square tile to solver piece. Throws DimensionError for non-square tiles.
Piece piece_from_tile(PieceId id, const Image& tile);
std::vector<Piece> pieces_from_tiles(const std::vector<Image>& tiles);

} // namespace jigsaw
