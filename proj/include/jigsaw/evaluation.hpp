#pragma once

#include "jigsaw/shredder.hpp"
#include "jigsaw/tile_model.hpp"

#include <string>
#include <vector>

namespace jigsaw {

struct SourceScore {
    std::string image_id;
    std::size_t matched = 0;
    std::size_t total = 0;
    double neighbor_accuracy = 1.0;
    bool perfect = true;
};

/// Neighbour-comparison scores. Accuracy is matched / total over the ground
/// truth adjacencies, so spurious seams between sources cost nothing.
struct Metrics {
    double neighbor_accuracy = 1.0;
    std::size_t matched = 0;
    std::size_t total = 0;
    bool perfect = true;
    std::vector<SourceScore> per_source;
    int bounding_rows = 0;
    int bounding_cols = 0;
    std::size_t explicit_relation_count = 0;
};

/// A ground-truth relation counts as reproduced iff the chromosome records
/// exactly that edge pair. Throws std::invalid_argument when the chromosome
/// and manifest cover different tile counts.
Metrics score(const Chromosome& chromosome, const Manifest& manifest);

/// "94.8800%" style, four decimals.
std::string format_percent(double fraction);

} // namespace jigsaw
