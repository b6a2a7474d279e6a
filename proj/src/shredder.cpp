#include "jigsaw/shredder.hpp"

#include "jigsaw/documents.hpp"
#include "jigsaw/random.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace jigsaw {

namespace {

struct SourceKey {
    std::string image_id;
    int row;
    int col;

    friend bool operator==(const SourceKey&, const SourceKey&) = default;
    template <typename H>
    friend H AbslHashValue(H h, const SourceKey& k) {
        return H::combine(std::move(h), k.image_id, k.row, k.col);
    }
};

absl::flat_hash_map<SourceKey, PieceId> index_by_source(const Manifest& m) {
    absl::flat_hash_map<SourceKey, PieceId> out;
    out.reserve(m.tiles.size());
    for (PieceId i = 0; i < m.tiles.size(); ++i) {
        const auto& t = m.tiles[i];
        if (!out.emplace(SourceKey{t.source_image_id, t.source_row, t.source_col}, i).second)
            throw std::invalid_argument("duplicate source position for tile " + t.tile_file);
    }
    return out;
}

} // namespace

std::string tile_file_name(std::size_t piece) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "tile_%06zu.png", piece + 1);
    return buf;
}

void Manifest::validate() const {
    if (tile_size < 2) throw std::invalid_argument("manifest tile size must be at least 2");
    absl::flat_hash_map<std::string, const SourceRecord*> by_id;
    std::size_t expected = 0;
    for (const auto& s : sources) {
        if (s.rows <= 0 || s.cols <= 0) throw std::invalid_argument("source " + s.image_id + " has an empty grid");
        if (!by_id.emplace(s.image_id, &s).second) throw std::invalid_argument("duplicate source id " + s.image_id);
        expected += static_cast<std::size_t>(s.rows) * s.cols;
    }
    if (expected != tiles.size()) throw std::invalid_argument("tile count does not match the source grids");
    for (const auto& t : tiles) {
        const auto it = by_id.find(t.source_image_id);
        if (it == by_id.end()) throw std::invalid_argument("tile " + t.tile_file + " names an unknown source");
        if (t.source_row < 0 || t.source_row >= it->second->rows || t.source_col < 0 ||
            t.source_col >= it->second->cols)
            throw std::invalid_argument("tile " + t.tile_file + " lies outside its source grid");
    }
    index_by_source(*this);
}

TileBundle shred(const Image& image, int tile_size, std::uint64_t seed, const std::string& image_id) {
    if (tile_size < 2) throw std::invalid_argument("tile size must be at least 2");
    if (image.width < tile_size || image.height < tile_size)
        throw std::invalid_argument("image is smaller than a single tile");

    const int rows = image.height / tile_size;
    const int cols = image.width / tile_size;
    const auto count = static_cast<std::size_t>(rows) * cols;

    Rng rng(seed);
    std::vector<Rotation> rotation(count);
    for (auto& r : rotation) r = rotation_from_turns(static_cast<int>(rng.below(4)));
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span(order));

    TileBundle bundle;
    auto& m = bundle.manifest;
    m.tile_size = tile_size;
    m.seed = seed;
    m.sources.push_back({image_id, rows, cols, image.width, image.height});
    bundle.tiles.reserve(count);
    m.tiles.reserve(count);
    for (std::size_t piece = 0; piece < count; ++piece) {
        const auto cell = order[piece];
        const int r = static_cast<int>(cell / cols), c = static_cast<int>(cell % cols);
        bundle.tiles.push_back(rotate(crop(image, c * tile_size, r * tile_size, tile_size, tile_size), rotation[cell]));
        m.tiles.push_back({tile_file_name(piece), image_id, r, c, rotation[cell]});
    }
    return bundle;
}

TileBundle mix(const std::vector<TileBundle>& bundles, std::uint64_t seed) {
    if (bundles.empty()) throw std::invalid_argument("nothing to mix");
    TileBundle out;
    out.manifest.tile_size = bundles.front().manifest.tile_size;
    out.manifest.seed = seed;
    std::vector<std::pair<const TileBundle*, std::size_t>> pool;
    for (const auto& b : bundles) {
        if (b.manifest.tile_size != out.manifest.tile_size)
            throw std::invalid_argument("cannot mix bundles with different tile sizes");
        out.manifest.sources.insert(out.manifest.sources.end(), b.manifest.sources.begin(), b.manifest.sources.end());
        for (std::size_t i = 0; i < b.tiles.size(); ++i) pool.emplace_back(&b, i);
    }
    Rng rng(seed);
    rng.shuffle(std::span(pool));
    for (std::size_t piece = 0; piece < pool.size(); ++piece) {
        const auto& [bundle, i] = pool[piece];
        auto record = bundle->manifest.tiles[i];
        record.tile_file = tile_file_name(piece);
        out.manifest.tiles.push_back(std::move(record));
        out.tiles.push_back(bundle->tiles[i]);
    }
    out.manifest.validate();
    return out;
}

std::vector<SourceRelations> ground_truth_relations(const Manifest& manifest) {
    const auto index = index_by_source(manifest);
    std::vector<SourceRelations> out;
    for (const auto& s : manifest.sources) {
        SourceRelations rels{s.image_id, {}};
        auto facing = [&](PieceId p, Direction d) {
            // The tile is stored turned by applied_rotation; turning it back
            // restores the source orientation.
            const auto restore = Rotation::R0 - manifest.tiles[p].applied_rotation;
            return EdgeRef{p, edge_facing(d, restore)};
        };
        for (int r = 0; r < s.rows; ++r) {
            for (int c = 0; c < s.cols; ++c) {
                const auto here = index.at({s.image_id, r, c});
                if (c + 1 < s.cols)
                    rels.relations.push_back(
                        {facing(here, Direction::Right), facing(index.at({s.image_id, r, c + 1}), Direction::Left)});
                if (r + 1 < s.rows)
                    rels.relations.push_back(
                        {facing(here, Direction::Down), facing(index.at({s.image_id, r + 1, c}), Direction::Up)});
            }
        }
        out.push_back(std::move(rels));
    }
    return out;
}

Placement ground_truth_placement(const Manifest& manifest) {
    absl::flat_hash_map<std::string, int> offset;
    int col = 0;
    for (const auto& s : manifest.sources) {
        offset[s.image_id] = col;
        col += s.cols;
    }
    Placement p;
    p.poses.reserve(manifest.tiles.size());
    for (const auto& t : manifest.tiles)
        p.poses.push_back({{t.source_row, offset.at(t.source_image_id) + t.source_col}, Rotation::R0 - t.applied_rotation});
    return p;
}

void save_bundle(const std::filesystem::path& dir, const TileBundle& bundle) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < bundle.tiles.size(); ++i) write_png(dir / bundle.manifest.tiles[i].tile_file, bundle.tiles[i]);
    write_json(dir / "manifest.json", manifest_to_json(bundle.manifest));
}

TileBundle load_bundle(const std::filesystem::path& dir) {
    TileBundle bundle;
    try {
        bundle.manifest = manifest_from_json(read_json(dir / "manifest.json"));
        bundle.manifest.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("invalid manifest in " + dir.string() + ": " + e.what());
    }
    bundle.tiles.reserve(bundle.manifest.tiles.size());
    for (const auto& t : bundle.manifest.tiles) {
        auto tile = read_png(dir / t.tile_file);
        if (tile.width != bundle.manifest.tile_size || tile.height != bundle.manifest.tile_size)
            throw std::runtime_error("tile " + t.tile_file + " does not match the manifest tile size");
        bundle.tiles.push_back(std::move(tile));
    }
    return bundle;
}

} // namespace jigsaw
