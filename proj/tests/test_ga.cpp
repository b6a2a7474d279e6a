#include "oracles.hpp"
#include "support.hpp"

#include "jigsaw/evaluation.hpp"
#include "jigsaw/ga.hpp"
#include "jigsaw/shredder.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace jigsaw;

namespace {

Chromosome random_parent(std::size_t n, Rng& rng) { return random_chromosome(n, rng); }

} // namespace

TEST_SUITE("ga") {

TEST_CASE("fitness of a perfect two-piece seam is six penalties") {
    // B's left column copies A's right column; everything else is random.
    Rng rng(71);
    auto pieces = test::random_pieces(2, 4, rng);
    for (int r = 0; r < 4; ++r)
        for (int ch = 0; ch < 3; ++ch) pieces[1].lab[(r * 4 + 0) * 3 + ch] = pieces[0].lab[(r * 4 + 3) * 3 + ch];
    const auto table = CompatibilityTable::build(pieces);
    Placement p;
    p.poses = {{{0, 0}, Rotation::R0}, {{0, 1}, Rotation::R0}};
    const auto c = chromosome_from_placement(p);
    REQUIRE(table.none_penalty() > 0.0);
    CHECK(fitness(c, table) == doctest::Approx(6.0 * table.none_penalty()).epsilon(1e-12));
}

TEST_CASE("fitness sums both sides of every seam") {
    Rng rng(73);
    const auto pieces = test::random_pieces(6, 3, rng);
    const auto table = CompatibilityTable::build(pieces);
    const auto c = chromosome_from_placement(test::grid_placement(2, 3));
    double expected = 0.0;
    for (PieceId i = 0; i < 6; ++i)
        for (auto e : kEdgeLabels) {
            const auto nb = c.neighbor({i, e});
            expected += nb ? table.lookup({i, e}, *nb) : table.none_penalty();
        }
    CHECK(fitness(c, table) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(fitness(Chromosome(5), table), std::invalid_argument);
}

TEST_CASE("children of random parents are valid") {
    Rng rng(79);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = 2 + rng.below(40);
        const int k = 2 + static_cast<int>(rng.below(4));
        const auto pieces = test::random_pieces(n, k, rng);
        const auto table = CompatibilityTable::build(pieces);
        const auto a = random_parent(n, rng);
        const auto b = random_parent(n, rng);
        CrossoverTrace trace;
        const auto child = crossover(a, b, table, rng, 0.001, &trace);
        REQUIRE(validate(child));
        CHECK(trace.common + trace.best_buddy + trace.most_compatible + trace.random + trace.fallback == n - 1);
    }
}

TEST_CASE("identical parents reproduce themselves without mutation") {
    Rng rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 2 + rng.below(40);
        const auto pieces = test::random_pieces(n, 3, rng);
        const auto table = CompatibilityTable::build(pieces);
        const auto parent = random_parent(n, rng);
        CrossoverTrace trace;
        CHECK(crossover(parent, parent, table, rng, 0.0, &trace) == parent);
        CHECK(trace.common == n - 1);
    }
}

TEST_CASE("certain mutation drops every shared relation") {
    Rng rng(89);
    const auto pieces = test::random_pieces(20, 3, rng);
    const auto table = CompatibilityTable::build(pieces);
    const auto parent = random_parent(20, rng);
    CrossoverTrace trace;
    const auto child = crossover(parent, parent, table, rng, 1.0, &trace);
    CHECK(trace.common == 0);
    CHECK(trace.best_buddy == 0);
    CHECK(validate(child));
}

TEST_CASE("best-buddy relations survive crossover") {
    // With a smooth gradient every true seam is a best-buddy pair; a parent
    // holding the ground truth passes it on even when the other parent is random.
    const auto bundle = shred(test::gradient_image(40, 40), 8, 4, "ramp");
    const auto pieces = pieces_from_tiles(bundle.tiles);
    const auto table = CompatibilityTable::build(pieces);
    const auto truth = chromosome_from_placement(ground_truth_placement(bundle.manifest));
    Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        const auto child = crossover(truth, random_parent(pieces.size(), rng), table, rng, 0.0);
        CHECK(child == truth);
    }
}

TEST_CASE("roulette weights equal fitness give uniform draws") {
    const std::vector<double> f(4, 7.0);
    Rng rng(101);
    std::vector<int> hits(4, 0);
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) ++hits[roulette_index(f, rng)];
    for (int h : hits) CHECK(std::abs(h - draws / 4) < 3 * std::sqrt(draws * 0.25 * 0.75));
}

TEST_CASE("roulette frequencies follow the minimization transform") {
    const std::vector<double> f{10.0, 4.0, 7.0, 1.0, 10.0};
    const double worst = 10.0;
    const double eps = 1e-6 * worst + 1e-12;
    std::vector<double> w;
    double total = 0.0;
    for (double v : f) total += w.emplace_back(worst - v + eps);

    Rng rng(103);
    const int draws = 100000;
    std::vector<int> hits(f.size(), 0);
    for (int i = 0; i < draws; ++i) ++hits[roulette_index(f, rng)];
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double p = w[i] / total;
        const double sigma = std::sqrt(draws * p * (1 - p));
        // Near-empty bins are Poisson, so the normal band gets a small count floor.
        CHECK(std::abs(hits[i] - draws * p) <= std::max(3 * sigma, 5.0));
    }
    CHECK(hits[0] + hits[4] <= 5);
    CHECK_THROWS_AS(roulette_index(std::span<const double>{}, rng), std::invalid_argument);
}

TEST_CASE("roulette over two individuals") {
    const std::vector<double> f{0.0, 1000.0};
    Rng rng(107);
    int first = 0;
    for (int i = 0; i < 10000; ++i) first += roulette_index(f, rng) == 0;
    CHECK(first >= 9999);

    Population pop;
    CHECK_THROWS_AS(roulette_select(pop, rng), std::invalid_argument);
    pop.individuals.resize(2, Chromosome(2));
    CHECK_THROWS_AS(roulette_select(pop, rng), std::invalid_argument);
}

TEST_CASE("two pieces settle on their cheapest seam") {
    Rng rng(109);
    const auto pieces = test::random_pieces(2, 5, rng);
    const auto table = CompatibilityTable::build(pieces);
    double best = std::numeric_limits<double>::infinity();
    for (auto ea : kEdgeLabels)
        for (auto eb : kEdgeLabels) best = std::min(best, table.lookup({0, ea}, {1, eb}));
    GAConfig cfg;
    cfg.population_size = 50;
    cfg.generations = 5;
    cfg.rng_seed = 1;
    const auto result = evolve(table, cfg);
    const auto rels = result.best.relations();
    REQUIRE(rels.size() == 1);
    CHECK(table.lookup(rels[0].first, rels[0].second) == best);
}

TEST_CASE("evolution keeps the elite and reports every generation") {
    Rng rng(113);
    const auto pieces = test::random_pieces(30, 4, rng);
    GAConfig cfg;
    cfg.population_size = 40;
    cfg.generations = 15;
    cfg.rng_seed = 5;
    std::vector<double> trace;
    std::vector<std::size_t> gens;
    const auto result = evolve(pieces, cfg, [&](const GenerationReport& r) {
        trace.push_back(r.best_fitness);
        gens.push_back(r.generation);
        CHECK(validate(r.best));
        CHECK(chromosome_from_placement(r.placement) == r.best);
    });
    REQUIRE(trace.size() == 15);
    for (std::size_t i = 0; i < gens.size(); ++i) CHECK(gens[i] == i + 1);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
    CHECK(result.fitness == trace.back());
    CHECK(validate(result.best));
}

TEST_CASE("thread count does not change the result") {
    Rng rng(127);
    const auto pieces = test::random_pieces(40, 4, rng);
    GAConfig cfg;
    cfg.population_size = 30;
    cfg.generations = 6;
    cfg.rng_seed = 9;
    const auto serial = evolve(pieces, cfg);
    cfg.threads = 8;
    const auto parallel = evolve(pieces, cfg);
    CHECK(serial.best == parallel.best);
    CHECK(serial.fitness == parallel.fitness);
    cfg.threads = 1;
    cfg.rng_seed = 10;
    CHECK_FALSE(evolve(pieces, cfg).best == serial.best);
}

TEST_CASE("configuration checks") {
    GAConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.elite_count = cfg.population_size;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.population_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.shared_relation_skip_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}

TEST_SUITE("ga_fixture") {

TEST_CASE("108-piece photo is solved perfectly in most seeded runs") {
    const auto bundle = shred(read_png(test::fixture("motorcycle_108.png")), 28, 11, "motorcycle");
    REQUIRE(bundle.tiles.size() == 108);
    const auto table = CompatibilityTable::build(pieces_from_tiles(bundle.tiles));
    int perfect = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GAConfig cfg;
        cfg.rng_seed = seed;
        const auto result = evolve(table, cfg);
        const auto m = score(result.best, bundle.manifest);
        MESSAGE("seed " << seed << ": " << format_percent(m.neighbor_accuracy));
        perfect += m.perfect;
    }
    CHECK(perfect >= 8);
}

}
