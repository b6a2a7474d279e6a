#include "cli.hpp"

#include "jigsaw/compatibility.hpp"
#include "jigsaw/documents.hpp"
#include "jigsaw/evaluation.hpp"
#include "jigsaw/ga.hpp"
#include "jigsaw/image.hpp"
#include "jigsaw/render.hpp"
#include "jigsaw/shredder.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace jigsaw::cli {

namespace fs = std::filesystem;

namespace {

struct ShredArgs {
    std::string input;
    std::string out;
    std::string id;
    int tile_size = 28;
    std::uint64_t seed = 0;
};

struct MixArgs {
    std::vector<std::string> bundles;
    std::string out;
    std::uint64_t seed = 0;
};

struct SolveArgs {
    std::string bundle;
    std::string out;
    std::string run_record;
    std::string snapshot_dir;
    std::string table_cache;
    GAConfig config;
    std::size_t render_every = 0;
    std::size_t max_snapshot_pixels = 4'000'000;
    std::size_t max_table_bytes = 0;
    bool quiet = false;
};

struct EvaluateArgs {
    std::string solution;
    std::string bundle;
    std::string manifest;
    std::string out;
};

struct RenderArgs {
    std::string solution;
    std::string bundle;
    std::string out;
    std::vector<int> background{0, 0, 0};
    std::size_t max_pixels = 0;
};

Rgb to_rgb(const std::vector<int>& v) {
    return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
}

int cmd_shred(const ShredArgs& a, std::ostream& out) {
    const auto image = read_png(a.input);
    const auto id = a.id.empty() ? fs::path(a.input).stem().string() : a.id;
    const auto bundle = shred(image, a.tile_size, a.seed, id);
    save_bundle(a.out, bundle);
    const auto& s = bundle.manifest.sources.front();
    out << bundle.tiles.size() << " tiles (" << s.rows << " x " << s.cols << ") written to " << a.out << '\n';
    return 0;
}

int cmd_mix(const MixArgs& a, std::ostream& out) {
    std::vector<TileBundle> bundles;
    for (const auto& dir : a.bundles) bundles.push_back(load_bundle(dir));
    const auto mixed = mix(bundles, a.seed);
    save_bundle(a.out, mixed);
    out << mixed.tiles.size() << " tiles from " << mixed.manifest.sources.size() << " sources written to " << a.out
        << '\n';
    return 0;
}

CompatibilityTable load_or_build_table(const SolveArgs& a, const std::vector<Piece>& pieces, std::ostream& err) {
    TableOptions options;
    options.materialize_threshold = a.config.table_mode_threshold;
    options.max_table_bytes = a.config.max_table_bytes;
    options.threads = a.config.threads;
    if (a.table_cache.empty()) return CompatibilityTable::build(pieces, options);

    fs::create_directories(a.table_cache);
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.jgct", static_cast<unsigned long long>(pieces_hash(pieces)));
    const auto file = fs::path(a.table_cache) / name;
    if (fs::exists(file)) {
        try {
            return CompatibilityTable::load(file, pieces, options);
        } catch (const std::runtime_error& e) {
            err << "ignoring table cache: " << e.what() << '\n';
        }
    }
    auto table = CompatibilityTable::build(pieces, options);
    table.save(file);
    return table;
}

int cmd_solve(SolveArgs a, std::ostream& out, std::ostream& err) {
    const auto bundle = load_bundle(a.bundle);
    const auto pieces = pieces_from_tiles(bundle.tiles);
    if (a.max_table_bytes > 0) a.config.max_table_bytes = a.max_table_bytes;
    a.config.validate();

    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    Json log = Json::array();
    if (!a.snapshot_dir.empty()) fs::create_directories(a.snapshot_dir);

    Solution solution;
    solution.seed = a.config.rng_seed;
    solution.generations = a.config.generations;
    if (pieces.size() == 1) {
        solution.chromosome = Chromosome(1);
        solution.placement.poses.assign(1, Pose{});
    } else {
        const auto table = load_or_build_table(a, pieces, err);
        auto hook = [&](const GenerationReport& r) {
            const double t = elapsed();
            log.push_back({{"generation", r.generation}, {"best_fitness", r.best_fitness}, {"elapsed_seconds", t}});
            if (!a.quiet) {
                char line[128];
                std::snprintf(line, sizeof line, "generation %zu  best %.6f  %.2fs\n", r.generation, r.best_fitness, t);
                err << line;
            }
            if (a.render_every > 0 && !a.snapshot_dir.empty() && r.generation % a.render_every == 0) {
                char name[40];
                std::snprintf(name, sizeof name, "generation_%04zu.png", r.generation);
                write_png(fs::path(a.snapshot_dir) / name,
                          downscale_to_budget(render(r.placement, bundle.tiles), a.max_snapshot_pixels));
            }
        };
        auto result = evolve(table, a.config, hook);
        solution.chromosome = std::move(result.best);
        solution.placement = result.placement;
        solution.fitness = result.fitness;
    }
    write_json(a.out, solution_to_json(solution));

    const auto metrics = score(solution.chromosome, bundle.manifest);
    if (!a.run_record.empty()) {
        const auto& c = a.config;
        Json record = {{"format", "jigsaw-run"},
                       {"tool_version", kToolVersion},
                       {"seed", c.rng_seed},
                       {"config",
                        {{"population_size", c.population_size},
                         {"generations", c.generations},
                         {"elite_count", c.elite_count},
                         {"shared_relation_skip_prob", c.shared_relation_skip_prob},
                         {"threads", c.threads},
                         {"table_mode_threshold", c.table_mode_threshold},
                         {"bundle", a.bundle}}},
                       {"log", std::move(log)},
                       {"solution", a.out},
                       {"final_metrics", metrics_to_json(metrics)},
                       {"elapsed_seconds", elapsed()}};
        write_json(a.run_record, record);
    }
    out << "solved " << pieces.size() << " pieces, fitness " << solution.fitness << ", neighbor accuracy "
        << format_percent(metrics.neighbor_accuracy) << '\n';
    return 0;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const auto solution = solution_from_json(read_json(a.solution));
    Manifest manifest;
    if (!a.manifest.empty()) {
        manifest = manifest_from_json(read_json(a.manifest));
    } else {
        manifest = manifest_from_json(read_json(fs::path(a.bundle) / "manifest.json"));
    }
    manifest.validate();
    const auto metrics = score(solution.chromosome, manifest);
    if (!a.out.empty()) write_json(a.out, metrics_to_json(metrics));

    out << format_percent(metrics.neighbor_accuracy) << " perfect=" << (metrics.perfect ? "true" : "false") << '\n';
    if (metrics.per_source.size() > 1) {
        for (const auto& s : metrics.per_source) {
            char line[256];
            std::snprintf(line, sizeof line, "  %-24s %10s  %zu/%zu  perfect=%s\n", s.image_id.c_str(),
                          format_percent(s.neighbor_accuracy).c_str(), s.matched, s.total,
                          s.perfect ? "true" : "false");
            out << line;
        }
    }
    return 0;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
    const auto solution = solution_from_json(read_json(a.solution));
    const auto bundle = load_bundle(a.bundle);
    if (bundle.tiles.size() != solution.placement.size())
        throw std::invalid_argument("solution and bundle cover different piece counts");
    const auto image = downscale_to_budget(render(solution.placement, bundle.tiles, to_rgb(a.background)), a.max_pixels);
    write_png(a.out, image);
    out << image.width << " x " << image.height << " image written to " << a.out << '\n';
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jigsaw puzzle toolchain: shred images, solve with a genetic algorithm, score and render"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    ShredArgs shred_args;
    auto* shred_cmd = app.add_subcommand("shred", "Cut an image into shuffled, randomly rotated tiles");
    shred_cmd->add_option("--input", shred_args.input, "Source PNG")->required()->check(CLI::ExistingFile);
    shred_cmd->add_option("--out", shred_args.out, "Output bundle directory")->required();
    shred_cmd->add_option("--tile-size", shred_args.tile_size, "Tile side in pixels")->check(CLI::Range(2, 1 << 16));
    shred_cmd->add_option("--seed", shred_args.seed, "Shuffle/rotation seed")->envname("JIGSAW_GA_SEED");
    shred_cmd->add_option("--id", shred_args.id, "Source image id (default: file stem)");

    MixArgs mix_args;
    auto* mix_cmd = app.add_subcommand("mix", "Combine bundles into one mixed-bag bundle");
    mix_cmd->add_option("--bundle", mix_args.bundles, "Input bundle directory (repeatable)")
        ->required()
        ->check(CLI::ExistingDirectory);
    mix_cmd->add_option("--out", mix_args.out, "Output bundle directory")->required();
    mix_cmd->add_option("--seed", mix_args.seed, "Shuffle seed")->envname("JIGSAW_GA_SEED");

    SolveArgs solve_args;
    auto& cfg = solve_args.config;
    auto* solve_cmd = app.add_subcommand("solve", "Reassemble a bundle with the genetic algorithm");
    solve_cmd->add_option("--bundle", solve_args.bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
    solve_cmd->add_option("--out", solve_args.out, "Solution document")->required();
    solve_cmd->add_option("--run-record", solve_args.run_record, "Run record document");
    solve_cmd->add_option("--pop", cfg.population_size, "Population size")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--gens", cfg.generations, "Generations");
    solve_cmd->add_option("--elite", cfg.elite_count, "Elite individuals copied each generation");
    solve_cmd->add_option("--mutation", cfg.shared_relation_skip_prob, "Probability of skipping a shared relation")
        ->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--seed", cfg.rng_seed, "Solver seed")->envname("JIGSAW_GA_SEED");
    solve_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    solve_cmd->add_option("--render-every", solve_args.render_every, "Snapshot the best placement every N generations");
    solve_cmd->add_option("--snapshot-dir", solve_args.snapshot_dir, "Snapshot directory (default: <out>.snapshots)");
    solve_cmd->add_option("--max-snapshot-pixels", solve_args.max_snapshot_pixels, "Downscale snapshots above this");
    solve_cmd->add_option("--table-threshold", cfg.table_mode_threshold, "Piece count above which the table is lazy");
    solve_cmd->add_option("--max-table-bytes", solve_args.max_table_bytes,
                          "Materialize the table only if it fits in this many bytes");
    solve_cmd->add_option("--table-cache", solve_args.table_cache, "Directory for cached compatibility tables");
    solve_cmd->add_flag("--quiet", solve_args.quiet, "No per-generation log on stderr");

    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a solution against the bundle's ground truth");
    eval_cmd->add_option("--solution", eval_args.solution, "Solution document")->required()->check(CLI::ExistingFile);
    auto* eval_bundle = eval_cmd->add_option("--bundle", eval_args.bundle, "Bundle directory")->check(CLI::ExistingDirectory);
    auto* eval_manifest =
        eval_cmd->add_option("--manifest", eval_args.manifest, "Manifest document")->check(CLI::ExistingFile);
    eval_bundle->excludes(eval_manifest);
    eval_cmd->add_option("--out", eval_args.out, "Metrics document");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "Paint a solution into one image");
    render_cmd->add_option("--solution", render_args.solution, "Solution document")->required()->check(CLI::ExistingFile);
    render_cmd->add_option("--bundle", render_args.bundle, "Bundle directory")->required()->check(CLI::ExistingDirectory);
    render_cmd->add_option("--out", render_args.out, "Output PNG")->required();
    render_cmd->add_option("--background", render_args.background, "Background colour R G B")
        ->expected(3)
        ->check(CLI::Range(0, 255));
    render_cmd->add_option("--max-pixels", render_args.max_pixels, "Downscale above this pixel count (0 = never)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (eval_cmd->parsed() && eval_args.bundle.empty() && eval_args.manifest.empty())
            throw CLI::RequiredError("--bundle or --manifest");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (shred_cmd->parsed()) return cmd_shred(shred_args, out);
        if (mix_cmd->parsed()) return cmd_mix(mix_args, out);
        if (solve_cmd->parsed()) {
            if (solve_args.render_every > 0 && solve_args.snapshot_dir.empty())
                solve_args.snapshot_dir = solve_args.out + ".snapshots";
            return cmd_solve(solve_args, out, err);
        }
        if (eval_cmd->parsed()) return cmd_evaluate(eval_args, out);
        if (render_cmd->parsed()) return cmd_render(render_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace jigsaw::cli
