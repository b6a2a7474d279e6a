#pragma once

// JSON documents exchanged between the pipeline stages. Integers are written
// in decimal and rotations in clockwise degrees.

#include "jigsaw/evaluation.hpp"
#include "jigsaw/shredder.hpp"
#include "jigsaw/tile_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jigsaw {

using Json = nlohmann::ordered_json;

/// Throws std::runtime_error when the file is missing or not JSON.
Json read_json(const std::filesystem::path& file);
/// Two-space indentation plus a trailing newline.
void write_json(const std::filesystem::path& file, const Json& doc);

Json manifest_to_json(const Manifest& manifest);
/// Throws std::invalid_argument on missing or mistyped fields.
Manifest manifest_from_json(const Json& doc);

/// Solver output: per-piece pose and the full relation matrix.
struct Solution {
    Chromosome chromosome;
    Placement placement;
    double fitness = 0.0;
    std::uint64_t seed = 0;
    std::size_t generations = 0;
};

Json solution_to_json(const Solution& solution);
/// Throws std::invalid_argument on malformed documents or when the relation
/// matrix fails chromosome validation.
Solution solution_from_json(const Json& doc);

/// Accuracies are rounded to four decimals; exact counts are kept alongside.
Json metrics_to_json(const Metrics& metrics);

} // namespace jigsaw
