#include "jigsaw/ga.hpp"

#include "jigsaw/assembly.hpp"
#include "jigsaw/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace jigsaw {

void GAConfig::validate() const {
    if (population_size == 0) throw std::invalid_argument("population size must be positive");
    if (elite_count >= population_size) throw std::invalid_argument("elite count must be below population size");
    if (!(shared_relation_skip_prob >= 0.0 && shared_relation_skip_prob <= 1.0))
        throw std::invalid_argument("skip probability must lie in [0, 1]");
}

double fitness(const Chromosome& chromosome, const CompatibilityTable& table) {
    if (chromosome.piece_count() != table.piece_count())
        throw std::invalid_argument("chromosome and table cover different piece counts");
    const auto links = chromosome.links();
    const double none = table.none_penalty();
    double total = 0.0;
    for (std::uint32_t e = 0; e < links.size(); ++e) {
        const auto other = links[e];
        total += other < 0 ? none : table.distance(e, static_cast<std::uint32_t>(other));
    }
    return total;
}

namespace {

// Consecutive phase-4 rejections tolerated before a join that cannot fail is
// forced instead.
std::size_t random_phase_patience(std::size_t n) { return std::max<std::size_t>(256, 8 * n); }

void random_phase(AssemblyState& state, Rng& rng, std::size_t& accepted, std::size_t& forced) {
    std::size_t misses = 0;
    const auto patience = random_phase_patience(state.piece_count());
    while (!state.complete()) {
        if (misses >= patience) {
            state.try_assign(state.guaranteed_join());
            ++forced;
            misses = 0;
            continue;
        }
        const auto free = state.free_edges();
        const auto x = EdgeRef::from_index(free[rng.below(free.size())]);
        const auto y = EdgeRef::from_index(free[rng.below(free.size())]);
        if (x.piece == y.piece || state.try_assign({x, y}) != AssignOutcome::Accepted) {
            ++misses;
            continue;
        }
        ++accepted;
        misses = 0;
    }
}

// Tries each candidate in a shuffled order, stopping once the assembly completes.
std::size_t assign_all(AssemblyState& state, std::vector<RelativeRelation>& candidates, Rng& rng,
                       double skip_prob) {
    rng.shuffle(std::span(candidates));
    std::size_t accepted = 0;
    for (const auto& rel : candidates) {
        if (state.complete()) break;
        if (rng.bernoulli(skip_prob)) continue;
        if (state.try_assign(rel) == AssignOutcome::Accepted) ++accepted;
    }
    return accepted;
}

} // namespace

Chromosome crossover(const Chromosome& parent_a, const Chromosome& parent_b, const CompatibilityTable& table,
                     Rng& rng, double skip_prob, CrossoverTrace* trace) {
    const auto n = table.piece_count();
    if (parent_a.piece_count() != n || parent_b.piece_count() != n)
        throw std::invalid_argument("parents and table cover different piece counts");

    CrossoverTrace local;
    auto& t = trace ? *trace : local;
    t = {};
    AssemblyState state(n);
    const auto edges = static_cast<std::uint32_t>(4 * n);

    std::vector<RelativeRelation> candidates;
    for (std::uint32_t e = 0; e < edges; ++e) {
        const auto other = parent_a.link(e);
        if (other > static_cast<std::int32_t>(e) && parent_b.link(e) == other)
            candidates.push_back({EdgeRef::from_index(e), EdgeRef::from_index(static_cast<std::uint32_t>(other))});
    }
    t.common = assign_all(state, candidates, rng, skip_prob);

    if (!state.complete()) {
        candidates.clear();
        for (std::uint32_t e = 0; e < edges; ++e) {
            const auto la = parent_a.link(e);
            const auto lb = parent_b.link(e);
            if (la > static_cast<std::int32_t>(e) && table.is_best_buddy(e, static_cast<std::uint32_t>(la)))
                candidates.push_back({EdgeRef::from_index(e), EdgeRef::from_index(static_cast<std::uint32_t>(la))});
            if (lb > static_cast<std::int32_t>(e) && lb != la && table.is_best_buddy(e, static_cast<std::uint32_t>(lb)))
                candidates.push_back({EdgeRef::from_index(e), EdgeRef::from_index(static_cast<std::uint32_t>(lb))});
        }
        t.best_buddy = assign_all(state, candidates, rng, skip_prob);
    }

    if (!state.complete()) {
        std::vector<std::uint32_t> order(edges);
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(std::span(order));
        for (const auto e : order) {
            if (state.complete()) break;
            const RelativeRelation rel{EdgeRef::from_index(e), EdgeRef::from_index(table.most_compatible(e))};
            if (state.try_assign(rel) == AssignOutcome::Accepted) ++t.most_compatible;
        }
    }

    random_phase(state, rng, t.random, t.fallback);
    return state.finalize().first;
}

Chromosome random_chromosome(std::size_t piece_count, Rng& rng) {
    AssemblyState state(piece_count);
    std::size_t accepted = 0, forced = 0;
    random_phase(state, rng, accepted, forced);
    return state.finalize().first;
}

std::size_t Population::best() const {
    if (individuals.empty()) throw std::invalid_argument("empty population");
    std::size_t best = 0;
    for (std::size_t i = 0; i < individuals.size(); ++i) {
        if (!individuals[i].cached_fitness()) throw std::invalid_argument("population has unevaluated individuals");
        if (*individuals[i].cached_fitness() < *individuals[best].cached_fitness()) best = i;
    }
    return best;
}

namespace {

std::vector<double> roulette_wheel(std::span<const double> fitness) {
    if (fitness.empty()) throw std::invalid_argument("roulette selection over an empty population");
    const double worst = *std::max_element(fitness.begin(), fitness.end());
    const double eps = 1e-6 * worst + 1e-12;
    std::vector<double> cumulative(fitness.size());
    double running = 0.0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        running += worst - fitness[i] + eps;
        cumulative[i] = running;
    }
    return cumulative;
}

std::size_t spin(std::span<const double> cumulative, Rng& rng) {
    const double target = rng.uniform() * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> fitness_values(const Population& population) {
    std::vector<double> out;
    out.reserve(population.individuals.size());
    for (const auto& c : population.individuals) {
        if (!c.cached_fitness()) throw std::invalid_argument("population has unevaluated individuals");
        out.push_back(*c.cached_fitness());
    }
    return out;
}

} // namespace

std::size_t roulette_index(std::span<const double> fitness, Rng& rng) {
    const auto wheel = roulette_wheel(fitness);
    return spin(wheel, rng);
}

const Chromosome& roulette_select(const Population& population, Rng& rng) {
    const auto values = fitness_values(population);
    return population.individuals[roulette_index(values, rng)];
}

EvolutionResult evolve(const CompatibilityTable& table, const GAConfig& config, const GenerationHook& hook) {
    config.validate();
    const auto n = table.piece_count();
    const auto size = config.population_size;

    Population population;
    population.individuals.resize(size);
    parallel_for(size, config.threads, [&](std::size_t i) {
        auto rng = Rng::stream(config.rng_seed, 0, i);
        auto c = random_chromosome(n, rng);
        c.set_cached_fitness(fitness(c, table));
        population.individuals[i] = std::move(c);
    });

    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        const auto values = fitness_values(population);
        std::vector<std::size_t> ranked(size);
        std::iota(ranked.begin(), ranked.end(), std::size_t{0});
        std::stable_sort(ranked.begin(), ranked.end(), [&](auto l, auto r) { return values[l] < values[r]; });
        const auto wheel = roulette_wheel(values);

        std::vector<Chromosome> next(size);
        for (std::size_t i = 0; i < config.elite_count; ++i) next[i] = population.individuals[ranked[i]];
        parallel_for(size - config.elite_count, config.threads, [&](std::size_t k) {
            const auto i = config.elite_count + k;
            auto rng = Rng::stream(config.rng_seed, gen, i);
            const auto& a = population.individuals[spin(wheel, rng)];
            const auto& b = population.individuals[spin(wheel, rng)];
            auto child = crossover(a, b, table, rng, config.shared_relation_skip_prob);
            child.set_cached_fitness(fitness(child, table));
            next[i] = std::move(child);
        });
        population.individuals = std::move(next);
        population.generation = gen;

        if (hook) {
            const auto& best = population.individuals[population.best()];
            const auto placement = realize_placement(best);
            hook(GenerationReport{gen, *best.cached_fitness(), best, placement});
        }
    }

    const auto& best = population.individuals[population.best()];
    return {best, realize_placement(best), *best.cached_fitness()};
}

EvolutionResult evolve(std::span<const Piece> pieces, const GAConfig& config, const GenerationHook& hook) {
    config.validate();
    CompatibilityTable::Options options;
    options.materialize_threshold = config.table_mode_threshold;
    options.max_table_bytes = config.max_table_bytes;
    options.threads = config.threads;
    const auto table = CompatibilityTable::build(pieces, options);
    return evolve(table, config, hook);
}

} // namespace jigsaw
