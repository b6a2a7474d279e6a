#include "oracles.hpp"
#include "support.hpp"

#include "jigsaw/compatibility.hpp"
#include "jigsaw/shredder.hpp"

#include <doctest.h>

#include <set>

using namespace jigsaw;

TEST_SUITE("compatibility") {

TEST_CASE("identical constant pieces do not differ") {
    const auto a = test::constant_piece(0, 4, 0.3, 0.5, 0.7);
    const auto b = test::constant_piece(1, 4, 0.3, 0.5, 0.7);
    for (auto ea : kEdgeLabels)
        for (auto eb : kEdgeLabels) CHECK(dissimilarity(a, ea, b, eb) == 0.0);
}

TEST_CASE("hand-computed seam value") {
    // Right column of A is black; left column of B carries (3, 4, 12)/20 in
    // its top pixel only. Root of the summed squares: 13/20.
    std::vector<double> zeros(12, 0.0);
    std::vector<double> bpix(12, 0.0);
    bpix[0] = 3.0 / 20;
    bpix[1] = 4.0 / 20;
    bpix[2] = 12.0 / 20;
    const Piece a(0, 2, zeros);
    const Piece b(1, 2, bpix);
    CHECK(dissimilarity(a, EdgeLabel::B, b, EdgeLabel::D) == doctest::Approx(0.65).epsilon(1e-12));
    // The top-right pixel of B does not touch A's right edge.
    CHECK(dissimilarity(a, EdgeLabel::B, b, EdgeLabel::B) == 0.0);
}

TEST_CASE("matches the physically rotated seam formula") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pieces = test::random_pieces(2, 2 + static_cast<int>(rng.below(7)), rng);
        for (auto ea : kEdgeLabels)
            for (auto eb : kEdgeLabels) {
                const double got = dissimilarity(pieces[0], ea, pieces[1], eb);
                CHECK(test::relative_error(got, test::seam_dissimilarity(pieces[0], ea, pieces[1], eb)) < 1e-12);
                CHECK(got == dissimilarity(pieces[1], eb, pieces[0], ea));
            }
    }
}

TEST_CASE("turning both pieces leaves the value unchanged") {
    Rng rng(5);
    const auto pieces = test::random_pieces(2, 5, rng);
    for (int t = 1; t < 4; ++t) {
        const auto r = rotation_from_turns(t);
        const Piece a(0, 5, test::turned(pieces[0], t));
        const Piece b(1, 5, test::turned(pieces[1], t));
        for (auto ea : kEdgeLabels)
            for (auto eb : kEdgeLabels) {
                // After turning, the edge that used to be `ea` now carries label ea + t.
                const auto ra = static_cast<EdgeLabel>((static_cast<int>(ea) + quarter_turns(r)) % 4);
                const auto rb = static_cast<EdgeLabel>((static_cast<int>(eb) + quarter_turns(r)) % 4);
                CHECK(test::relative_error(dissimilarity(a, ra, b, rb),
                                           dissimilarity(pieces[0], ea, pieces[1], eb)) < 1e-12);
            }
    }
}

TEST_CASE("dissimilarity preconditions") {
    Rng rng(9);
    const auto small = test::random_pieces(2, 3, rng);
    const auto big = test::random_pieces(1, 4, rng);
    CHECK_THROWS_AS(dissimilarity(small[0], EdgeLabel::A, big[0], EdgeLabel::A), DimensionError);
    CHECK_THROWS_AS(dissimilarity(small[0], EdgeLabel::A, small[0], EdgeLabel::B), std::invalid_argument);
}

TEST_CASE("two pieces give sixteen values and the penalty doubles their mean") {
    Rng rng(11);
    const auto pieces = test::random_pieces(2, 6, rng);
    const auto table = CompatibilityTable::build(pieces);
    double sum = 0.0;
    std::set<double> distinct;
    for (auto ea : kEdgeLabels)
        for (auto eb : kEdgeLabels) {
            const double v = table.lookup({0, ea}, {1, eb});
            CHECK(v == table.lookup({1, eb}, {0, ea}));
            sum += v;
            distinct.insert(v);
        }
    CHECK(distinct.size() == 16);
    CHECK(table.none_penalty() == doctest::Approx(2.0 * sum / 16).epsilon(1e-12));
}

TEST_CASE("table agrees with the brute-force oracle on small instances") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pieces = test::random_pieces(6, 5, rng);
        const auto table = CompatibilityTable::build(pieces);
        const auto d = test::seam_table(pieces);
        for (std::uint32_t x = 0; x < 24; ++x)
            for (std::uint32_t y = 0; y < 24; ++y)
                if (x / 4 != y / 4) CHECK(test::relative_error(table.distance(x, y), d[x][y]) < 1e-9);

        std::set<std::pair<std::uint32_t, std::uint32_t>> got;
        for (const auto& r : table.best_buddy_pairs()) got.insert({r.first.index(), r.second.index()});
        CHECK(got == test::mutual_argmin(d));
        for (const auto& [x, y] : got) {
            CHECK(table.most_compatible(x) == y);
            CHECK(table.most_compatible(y) == x);
        }
    }
}

TEST_CASE("ties resolve toward the smallest edge") {
    // Three identical constant pieces: every cross-piece value is zero.
    std::vector<Piece> pieces;
    for (PieceId i = 0; i < 3; ++i) pieces.push_back(test::constant_piece(i, 3, 0.5, 0.5, 0.5));
    const auto table = CompatibilityTable::build(pieces);
    CHECK(table.most_compatible(EdgeRef{0, EdgeLabel::C}) == EdgeRef{1, EdgeLabel::A});
    CHECK(table.most_compatible(EdgeRef{1, EdgeLabel::B}) == EdgeRef{0, EdgeLabel::A});
    CHECK(table.most_compatible(EdgeRef{2, EdgeLabel::D}) == EdgeRef{0, EdgeLabel::A});
    CHECK(best_buddies(table, {0, EdgeLabel::A}, {1, EdgeLabel::A}));
    CHECK_FALSE(best_buddies(table, {0, EdgeLabel::B}, {1, EdgeLabel::A}));
}

TEST_CASE("a one-way preference is not a best-buddy pair") {
    // Piece 1 is black, piece 2 nearly black, piece 0 mid grey: 0's best
    // match is 2 (darker than 0 but closest), yet 2 prefers 1.
    std::vector<Piece> pieces{test::constant_piece(0, 3, 0.3, 0.5, 0.5), test::constant_piece(1, 3, 0.0, 0.5, 0.5),
                              test::constant_piece(2, 3, 0.05, 0.5, 0.5)};
    const auto table = CompatibilityTable::build(pieces);
    const EdgeRef e0{0, EdgeLabel::A};
    REQUIRE(table.most_compatible(e0).piece == 2);
    REQUIRE(table.most_compatible(table.most_compatible(e0)).piece == 1);
    CHECK_FALSE(best_buddies(table, e0, table.most_compatible(e0)));
    const auto oracle = test::mutual_argmin(test::seam_table(pieces));
    CHECK_FALSE(oracle.contains({e0.index(), table.most_compatible(e0).index()}));
    CHECK_THROWS_AS(best_buddies(table, {1, EdgeLabel::A}, {1, EdgeLabel::B}), std::invalid_argument);
}

TEST_CASE("gradient tiles prefer their true neighbours") {
    const auto bundle = shred(test::gradient_image(48, 40), 8, 2, "ramp");
    const auto pieces = pieces_from_tiles(bundle.tiles);
    const auto table = CompatibilityTable::build(pieces);
    for (const auto& source : ground_truth_relations(bundle.manifest))
        for (const auto& r : source.relations) {
            CHECK(table.most_compatible(r.first) == r.second);
            CHECK(table.most_compatible(r.second) == r.first);
        }
}

TEST_CASE("on-demand mode returns identical values") {
    Rng rng(31);
    const auto pieces = test::random_pieces(12, 4, rng);
    TableOptions full;
    full.force_mode = TableMode::Materialized;
    TableOptions lazy;
    lazy.force_mode = TableMode::OnDemand;
    lazy.memo_slots = 64;
    lazy.threads = 4;
    const auto a = CompatibilityTable::build(pieces, full);
    const auto b = CompatibilityTable::build(pieces, lazy);
    REQUIRE(a.mode() == TableMode::Materialized);
    REQUIRE(b.mode() == TableMode::OnDemand);
    CHECK(a.none_penalty() == b.none_penalty());
    for (std::uint32_t x = 0; x < 48; ++x) {
        CHECK(a.most_compatible(x) == b.most_compatible(x));
        for (std::uint32_t y = 0; y < 48; ++y)
            if (x / 4 != y / 4) CHECK(a.distance(x, y) == b.distance(x, y));
    }
}

TEST_CASE("mode selection honours the threshold and the byte budget") {
    Rng rng(37);
    const auto pieces = test::random_pieces(10, 3, rng);
    TableOptions opts;
    opts.materialize_threshold = 5;
    CHECK(CompatibilityTable::build(pieces, opts).mode() == TableMode::OnDemand);
    opts.max_table_bytes = 1u << 20;
    CHECK(CompatibilityTable::build(pieces, opts).mode() == TableMode::Materialized);
    opts.max_table_bytes = 100;
    CHECK(CompatibilityTable::build(pieces, opts).mode() == TableMode::OnDemand);
}

TEST_CASE("multi-threaded build matches single-threaded") {
    Rng rng(41);
    const auto pieces = test::random_pieces(15, 4, rng);
    TableOptions one, many;
    many.threads = 8;
    const auto a = CompatibilityTable::build(pieces, one);
    const auto b = CompatibilityTable::build(pieces, many);
    CHECK(a.none_penalty() == b.none_penalty());
    for (std::uint32_t x = 0; x < 60; ++x)
        for (std::uint32_t y = 0; y < 60; ++y)
            if (x / 4 != y / 4) CHECK(a.distance(x, y) == b.distance(x, y));
}

TEST_CASE("cache file round trip") {
    Rng rng(43);
    const auto pieces = test::random_pieces(8, 4, rng);
    const auto dir = test::scratch_dir("table_cache");
    const auto table = CompatibilityTable::build(pieces);
    table.save(dir / "table.bin");
    const auto loaded = CompatibilityTable::load(dir / "table.bin", pieces);
    CHECK(loaded.content_hash() == table.content_hash());
    CHECK(loaded.none_penalty() == table.none_penalty());
    for (std::uint32_t x = 0; x < 32; ++x)
        for (std::uint32_t y = 0; y < 32; ++y)
            if (x / 4 != y / 4) CHECK(loaded.distance(x, y) == table.distance(x, y));

    auto other = test::random_pieces(8, 4, rng);
    CHECK_THROWS_AS(CompatibilityTable::load(dir / "table.bin", other), std::runtime_error);
    CHECK_THROWS_AS(CompatibilityTable::load(dir / "missing.bin", pieces), std::runtime_error);
}

TEST_CASE("build preconditions") {
    Rng rng(47);
    const auto one = test::random_pieces(1, 3, rng);
    CHECK_THROWS_AS(CompatibilityTable::build(one), std::invalid_argument);
    std::vector<Piece> mixed = test::random_pieces(2, 3, rng);
    auto four = test::random_pieces(1, 4, rng);
    four[0].id = 2;
    mixed.push_back(four[0]);
    CHECK_THROWS_AS(CompatibilityTable::build(mixed), DimensionError);
    const auto table = CompatibilityTable::build(test::random_pieces(2, 3, rng));
    CHECK_THROWS_AS(table.lookup({0, EdgeLabel::A}, {0, EdgeLabel::B}), std::invalid_argument);
    CHECK_THROWS_AS(table.lookup({0, EdgeLabel::A}, {5, EdgeLabel::B}), std::invalid_argument);
}

}
