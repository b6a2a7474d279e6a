#pragma once

#include "jigsaw/compatibility.hpp"
#include "jigsaw/random.hpp"
#include "jigsaw/tile_model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace jigsaw {

struct GAConfig {
    std::size_t population_size = 300;
    std::size_t generations = 100;
    std::size_t elite_count = 4;
    /// Chance of skipping each shared or best-buddy relation during crossover.
    double shared_relation_skip_prob = 0.001;
    std::uint64_t rng_seed = 0;
    std::size_t table_mode_threshold = 6000;
    std::optional<std::size_t> max_table_bytes;
    unsigned threads = 1;

    /// Throws std::invalid_argument on an empty population, elite_count not
    /// below population_size, or a probability outside [0, 1].
    void validate() const;
};

/// Sum over all 4n chromosome entries of the dissimilarity to the recorded
/// neighbour, with boundary entries charged the table's none penalty. Each
/// adjacency is therefore counted once from each side. Lower is better.
double fitness(const Chromosome& chromosome, const CompatibilityTable& table);

/// Per-phase acceptance counts of one crossover, for diagnostics.
struct CrossoverTrace {
    std::size_t common = 0;
    std::size_t best_buddy = 0;
    std::size_t most_compatible = 0;
    std::size_t random = 0;
    std::size_t fallback = 0;
};

/// Child built from n-1 accepted assignments drawn, in order, from relations
/// shared by both parents, best-buddy relations found in either parent,
/// most-compatible partners of every edge, and finally random edge pairs.
/// Candidates of the first two phases are each dropped with probability
/// `skip_prob`. The result always passes validate().
Chromosome crossover(const Chromosome& parent_a, const Chromosome& parent_b, const CompatibilityTable& table,
                     Rng& rng, double skip_prob, CrossoverTrace* trace = nullptr);

/// A chromosome assembled from random edge pairs only.
Chromosome random_chromosome(std::size_t piece_count, Rng& rng);

struct Population {
    std::vector<Chromosome> individuals;
    std::size_t generation = 0;

    /// Index of the minimal-fitness individual (lowest index on ties).
    /// Requires cached fitness on every individual.
    std::size_t best() const;
};

/// Roulette wheel over the minimization transform
///   weight_i = worst - f_i + eps,  eps = 1e-6 * worst + 1e-12.
/// Throws std::invalid_argument on an empty span.
std::size_t roulette_index(std::span<const double> fitness, Rng& rng);

/// Throws std::invalid_argument on an empty population or missing fitness.
const Chromosome& roulette_select(const Population& population, Rng& rng);

struct GenerationReport {
    std::size_t generation;
    double best_fitness;
    const Chromosome& best;
    const Placement& placement;
};

using GenerationHook = std::function<void(const GenerationReport&)>;

struct EvolutionResult {
    Chromosome best;
    Placement placement;
    double fitness = 0.0;
};

/// Random initial population followed by `generations` breeding rounds.
/// Each round keeps the elite unchanged and breeds the rest from roulette
/// selected parents. `hook` runs after every round. Offspring draw from
/// their own seeded streams, so the result does not depend on thread count.
EvolutionResult evolve(const CompatibilityTable& table, const GAConfig& config, const GenerationHook& hook = {});

/// Builds the table from `pieces` (mode chosen per config) and evolves.
EvolutionResult evolve(std::span<const Piece> pieces, const GAConfig& config, const GenerationHook& hook = {});

} // namespace jigsaw
