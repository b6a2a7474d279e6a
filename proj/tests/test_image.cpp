#include "support.hpp"

#include "jigsaw/image.hpp"
#include "jigsaw/render.hpp"

#include <doctest.h>

#include <fstream>

using namespace jigsaw;

TEST_SUITE("image") {

TEST_CASE("png round trip") {
    const auto dir = test::scratch_dir("png");
    const auto img = test::noise_image(13, 7, 1);
    write_png(dir / "x.png", img);
    CHECK(read_png(dir / "x.png") == img);
    CHECK_THROWS_AS(read_png(dir / "missing.png"), std::runtime_error);
    std::ofstream(dir / "junk.png") << "not a png";
    CHECK_THROWS_AS(read_png(dir / "junk.png"), std::runtime_error);
}

TEST_CASE("rotation turns clockwise and composes") {
    Image img(3, 2);
    img.set(0, 0, {1, 0, 0});
    img.set(2, 1, {2, 0, 0});
    const auto r = rotate(img, Rotation::R90);
    CHECK(r.width == 2);
    CHECK(r.height == 3);
    // Top-left goes to top-right under a clockwise quarter turn.
    CHECK(r.at(1, 0) == Rgb{1, 0, 0});
    CHECK(r.at(0, 2) == Rgb{2, 0, 0});
    const auto noise = test::noise_image(5, 4, 2);
    CHECK(rotate(rotate(noise, Rotation::R90), Rotation::R270) == noise);
    CHECK(rotate(rotate(noise, Rotation::R180), Rotation::R180) == noise);
}

TEST_CASE("crop and blit") {
    const auto img = test::noise_image(10, 10, 3);
    const auto part = crop(img, 2, 3, 4, 5);
    CHECK(part.at(0, 0) == img.at(2, 3));
    CHECK(part.at(3, 4) == img.at(5, 7));
    Image canvas(6, 6, {9, 9, 9});
    blit(canvas, part, 4, 4);
    CHECK(canvas.at(4, 4) == part.at(0, 0));
    CHECK(canvas.at(3, 3) == Rgb{9, 9, 9});
    CHECK_THROWS_AS(crop(img, 8, 8, 4, 4), std::invalid_argument);
}

TEST_CASE("downscaling respects the pixel budget") {
    const auto img = test::noise_image(100, 60, 4);
    CHECK(downscale_to_budget(img, 10000) == img);
    const auto small = downscale_to_budget(img, 1500);
    CHECK(static_cast<std::size_t>(small.width) * small.height <= 1500);
    CHECK(small.width > 0);
    CHECK(small.at(0, 0) == img.at(0, 0));
}

TEST_CASE("lab conversion matches reference values") {
    // Standard D65 references for sRGB white, black and primaries.
    const auto white = srgb_to_lab({255, 255, 255});
    CHECK(white[0] == doctest::Approx(100.0).epsilon(1e-3));
    CHECK(std::abs(white[1]) < 0.01);
    CHECK(std::abs(white[2]) < 0.01);
    const auto black = srgb_to_lab({0, 0, 0});
    CHECK(black[0] == doctest::Approx(0.0));
    const auto red = srgb_to_lab({255, 0, 0});
    CHECK(red[0] == doctest::Approx(53.24).epsilon(1e-3));
    CHECK(red[1] == doctest::Approx(80.09).epsilon(1e-3));
    CHECK(red[2] == doctest::Approx(67.20).epsilon(1e-3));
    const auto blue = srgb_to_lab({0, 0, 255});
    CHECK(blue[0] == doctest::Approx(32.30).epsilon(1e-3));
    CHECK(blue[1] == doctest::Approx(79.19).epsilon(1e-3));
    CHECK(blue[2] == doctest::Approx(-107.86).epsilon(1e-3));
}

TEST_CASE("normalized lab stays in the unit cube") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Rgb c{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                    static_cast<std::uint8_t>(rng.below(256))};
        for (double v : normalized_lab(c)) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    const auto grey = normalized_lab({119, 119, 119});
    CHECK(grey[1] == doctest::Approx(128.0 / 255).epsilon(1e-3));
}

TEST_CASE("tiles become pieces") {
    const auto tile = test::noise_image(4, 4, 6);
    const auto p = piece_from_tile(3, tile);
    CHECK(p.id == 3);
    CHECK(p.size == 4);
    const auto lab = normalized_lab(tile.at(2, 1));
    CHECK(p.at(1, 2, 0) == lab[0]);
    CHECK_THROWS_AS(piece_from_tile(0, test::noise_image(4, 3, 7)), DimensionError);
}

TEST_CASE("render paints poses over a background") {
    std::vector<Image> tiles{Image(2, 2, {10, 0, 0}), Image(2, 2, {0, 20, 0}), Image(2, 2, {0, 0, 30})};
    tiles[1].set(1, 0, {1, 1, 1});
    Placement p;
    p.poses = {{{0, 0}, Rotation::R0}, {{0, 1}, Rotation::R90}, {{1, 1}, Rotation::R0}};
    const auto out = render(p, tiles, {255, 0, 255});
    CHECK(out.width == 4);
    CHECK(out.height == 4);
    CHECK(out.at(0, 3) == Rgb{255, 0, 255});
    CHECK(out.at(0, 0) == Rgb{10, 0, 0});
    // The marked top-right pixel of tile 1 moves to its bottom-right corner.
    CHECK(out.at(3, 1) == Rgb{1, 1, 1});
    CHECK(out.at(3, 3) == Rgb{0, 0, 30});
    tiles.pop_back();
    CHECK_THROWS_AS(render(p, tiles), std::invalid_argument);
}

}
