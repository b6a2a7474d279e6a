#pragma once

// Puzzle instance generation: cutting images into square tiles with unknown
// order and orientation, combining instances into mixed bags, and the ground
// truth needed to score solutions.

#include "jigsaw/image.hpp"
#include "jigsaw/tile_model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jigsaw {

struct TileRecord {
    std::string tile_file;
    std::string source_image_id;
    int source_row = 0;
    int source_col = 0;
    /// Clockwise turn applied to the stored pixels relative to the source.
    Rotation applied_rotation = Rotation::R0;
};

struct SourceRecord {
    std::string image_id;
    int rows = 0;
    int cols = 0;
    /// Input size before cropping to a whole number of tiles.
    int original_width = 0;
    int original_height = 0;
};

/// Ground truth of a tile bundle. Tile order is the presentation order, so
/// tiles[i] describes piece i.
struct Manifest {
    int tile_size = 0;
    std::vector<TileRecord> tiles;
    std::vector<SourceRecord> sources;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument on duplicate source positions, unknown
    /// sources, out-of-grid positions or a tile count that does not match
    /// the source grids.
    void validate() const;
};

struct TileBundle {
    Manifest manifest;
    /// Stored (already rotated) tile pixels, by piece id.
    std::vector<Image> tiles;
};

/// Cuts `image` into K x K tiles after cropping to a multiple of K from the
/// top-left, turns every tile by an independent uniform rotation and shuffles
/// the order. Throws std::invalid_argument when K < 2 or the image is smaller
/// than one tile.
TileBundle shred(const Image& image, int tile_size, std::uint64_t seed, const std::string& image_id = "image");

/// Concatenates bundles and reshuffles. Source ids must be unique across
/// bundles. Throws std::invalid_argument on mismatched tile sizes.
TileBundle mix(const std::vector<TileBundle>& bundles, std::uint64_t seed);

struct SourceRelations {
    std::string image_id;
    std::vector<RelativeRelation> relations;
};

/// Every adjacency of each source image expressed in the stored edge labels,
/// one list per source in manifest order.
std::vector<SourceRelations> ground_truth_relations(const Manifest& manifest);

/// Placement that undoes every applied rotation. Sources are laid left to
/// right, top-aligned, in manifest order.
Placement ground_truth_placement(const Manifest& manifest);

std::string tile_file_name(std::size_t piece);

/// Directory layout: tile_000001.png ... plus manifest.json.
void save_bundle(const std::filesystem::path& dir, const TileBundle& bundle);
/// Throws std::runtime_error on missing files or an invalid manifest.
TileBundle load_bundle(const std::filesystem::path& dir);

} // namespace jigsaw
