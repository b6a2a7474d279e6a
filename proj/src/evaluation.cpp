#include "jigsaw/evaluation.hpp"

#include <cstdio>
#include <stdexcept>

namespace jigsaw {

Metrics score(const Chromosome& chromosome, const Manifest& manifest) {
    if (chromosome.piece_count() != manifest.tiles.size())
        throw std::invalid_argument("solution covers " + std::to_string(chromosome.piece_count()) +
                                    " pieces but the manifest lists " + std::to_string(manifest.tiles.size()));
    Metrics m;
    for (const auto& source : ground_truth_relations(manifest)) {
        SourceScore s{source.image_id, 0, source.relations.size(), 1.0, true};
        for (const auto& rel : source.relations)
            if (chromosome.neighbor(rel.first) == rel.second) ++s.matched;
        if (s.total > 0) s.neighbor_accuracy = static_cast<double>(s.matched) / static_cast<double>(s.total);
        s.perfect = s.matched == s.total;
        m.matched += s.matched;
        m.total += s.total;
        m.perfect = m.perfect && s.perfect;
        m.per_source.push_back(std::move(s));
    }
    if (m.total > 0) m.neighbor_accuracy = static_cast<double>(m.matched) / static_cast<double>(m.total);
    m.explicit_relation_count = chromosome.relation_count();
    try {
        const auto bounds = realize_placement(chromosome).bounds();
        m.bounding_rows = bounds.rows();
        m.bounding_cols = bounds.cols();
    } catch (const std::invalid_argument&) {
        // Unrealizable input: accuracy is still well defined, the box is not.
    }
    return m;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f%%", 100.0 * fraction);
    return buf;
}

} // namespace jigsaw
