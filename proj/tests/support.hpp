#pragma once

#include "jigsaw/image.hpp"
#include "jigsaw/random.hpp"
#include "jigsaw/tile_model.hpp"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace jigsaw::test {

inline std::vector<Piece> random_pieces(std::size_t n, int k, Rng& rng) {
    std::vector<Piece> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> lab(static_cast<std::size_t>(k) * k * 3);
        for (auto& v : lab) v = rng.uniform();
        out.emplace_back(static_cast<PieceId>(i), k, std::move(lab));
    }
    return out;
}

inline Piece constant_piece(PieceId id, int k, double l, double a, double b) {
    std::vector<double> lab;
    for (int i = 0; i < k * k; ++i) lab.insert(lab.end(), {l, a, b});
    return Piece(id, k, std::move(lab));
}

// Smooth two-axis colour ramp, so neighbouring tiles match far better than
// anything else.
inline Image gradient_image(int width, int height) {
    Image img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.set(x, y,
                    {static_cast<std::uint8_t>(255 * x / std::max(1, width - 1)),
                     static_cast<std::uint8_t>(255 * y / std::max(1, height - 1)),
                     static_cast<std::uint8_t>(64 + 128 * (x + y) / std::max(1, width + height - 2))});
    return img;
}

inline Image noise_image(int width, int height, std::uint64_t seed) {
    Rng rng(seed);
    Image img(width, height);
    for (auto& v : img.rgb) v = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

// Row-major rectangle of unrotated pieces.
inline Placement grid_placement(int rows, int cols) {
    Placement p;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) p.poses.push_back({{r, c}, Rotation::R0});
    return p;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("jigsaw_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(JIGSAW_FIXTURE_DIR) / name;
}

inline double relative_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

} // namespace jigsaw::test
