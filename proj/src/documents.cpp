#include "jigsaw/documents.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace jigsaw {

namespace {

double round4(double v) { return std::round(v * 1e4) / 1e4; }

template <typename T>
T field(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
    }
}

} // namespace

Json read_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(file.string() + " is not valid JSON: " + e.what());
    }
}

void write_json(const std::filesystem::path& file, const Json& doc) {
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + file.string());
}

Json manifest_to_json(const Manifest& m) {
    Json sources = Json::array();
    for (const auto& s : m.sources)
        sources.push_back({{"image_id", s.image_id},
                           {"rows", s.rows},
                           {"cols", s.cols},
                           {"original_width", s.original_width},
                           {"original_height", s.original_height}});
    Json tiles = Json::array();
    for (const auto& t : m.tiles)
        tiles.push_back({{"tile_file", t.tile_file},
                         {"source_image_id", t.source_image_id},
                         {"source_row", t.source_row},
                         {"source_col", t.source_col},
                         {"applied_rotation", degrees(t.applied_rotation)}});
    return {{"format", "jigsaw-manifest"},
            {"version", 1},
            {"K", m.tile_size},
            {"seed", m.seed},
            {"sources", std::move(sources)},
            {"tiles", std::move(tiles)}};
}

Manifest manifest_from_json(const Json& doc) {
    Manifest m;
    m.tile_size = field<int>(doc, "K");
    m.seed = field<std::uint64_t>(doc, "seed");
    for (const auto& s : field<Json>(doc, "sources"))
        m.sources.push_back({field<std::string>(s, "image_id"), field<int>(s, "rows"), field<int>(s, "cols"),
                             field<int>(s, "original_width"), field<int>(s, "original_height")});
    for (const auto& t : field<Json>(doc, "tiles"))
        m.tiles.push_back({field<std::string>(t, "tile_file"), field<std::string>(t, "source_image_id"),
                           field<int>(t, "source_row"), field<int>(t, "source_col"),
                           rotation_from_degrees(field<int>(t, "applied_rotation"))});
    return m;
}

Json solution_to_json(const Solution& s) {
    const auto n = s.chromosome.piece_count();
    Json pieces = Json::array();
    Json relations = Json::array();
    for (PieceId i = 0; i < n; ++i) {
        const auto& pose = s.placement.poses.at(i);
        pieces.push_back({{"id", i}, {"row", pose.cell.row}, {"col", pose.cell.col}, {"rotation", degrees(pose.rotation)}});
        Json row = Json::array();
        for (auto label : kEdgeLabels) {
            const auto nb = s.chromosome.neighbor({i, label});
            row.push_back(nb ? Json(to_string(*nb)) : Json(nullptr));
        }
        relations.push_back(std::move(row));
    }
    const auto box = s.placement.bounds();
    return {{"format", "jigsaw-solution"},
            {"version", 1},
            {"piece_count", n},
            {"fitness", s.fitness},
            {"seed", s.seed},
            {"generations", s.generations},
            {"bounding_box", {{"rows", box.rows()}, {"cols", box.cols()}}},
            {"pieces", std::move(pieces)},
            {"relations", std::move(relations)}};
}

Solution solution_from_json(const Json& doc) {
    Solution s;
    const auto n = field<std::size_t>(doc, "piece_count");
    s.fitness = field<double>(doc, "fitness");
    s.seed = field<std::uint64_t>(doc, "seed");
    s.generations = field<std::size_t>(doc, "generations");

    const auto pieces = field<Json>(doc, "pieces");
    const auto relations = field<Json>(doc, "relations");
    if (pieces.size() != n || relations.size() != n)
        throw std::invalid_argument("solution piece list does not match piece_count");
    s.placement.poses.resize(n);
    for (const auto& p : pieces) {
        const auto id = field<std::size_t>(p, "id");
        if (id >= n) throw std::invalid_argument("solution piece id out of range");
        s.placement.poses[id] = {{field<int>(p, "row"), field<int>(p, "col")},
                                 rotation_from_degrees(field<int>(p, "rotation"))};
    }
    s.chromosome = Chromosome(n);
    for (PieceId i = 0; i < n; ++i) {
        const auto& row = relations[i];
        if (!row.is_array() || row.size() != 4) throw std::invalid_argument("relation rows must have four entries");
        for (auto label : kEdgeLabels) {
            const auto& entry = row[static_cast<std::size_t>(label)];
            if (entry.is_null()) continue;
            if (!entry.is_string()) throw std::invalid_argument("relation entries must be strings or null");
            const auto other = parse_edge_ref(entry.get<std::string>());
            if (other.piece >= n) throw std::invalid_argument("relation names a piece out of range");
            s.chromosome.connect({i, label}, other);
        }
    }
    // connect() mirrors every entry, so a one-sided matrix shows up as a
    // null cell that ended up filled.
    for (PieceId i = 0; i < n; ++i)
        for (auto label : kEdgeLabels)
            if (relations[i][static_cast<std::size_t>(label)].is_null() && s.chromosome.neighbor({i, label}))
                throw std::invalid_argument("relation matrix is not symmetric at " + to_string(EdgeRef{i, label}));
    if (const auto report = validate(s.chromosome); !report)
        throw std::invalid_argument("solution relations are invalid: " + report.reason);
    if (chromosome_from_placement(s.placement) != s.chromosome)
        throw std::invalid_argument("solution poses disagree with its relations");
    return s;
}

Json metrics_to_json(const Metrics& m) {
    Json per_source = Json::array();
    for (const auto& s : m.per_source)
        per_source.push_back({{"image_id", s.image_id},
                              {"neighbor_accuracy", round4(s.neighbor_accuracy)},
                              {"matched", s.matched},
                              {"total", s.total},
                              {"perfect", s.perfect}});
    return {{"format", "jigsaw-metrics"},
            {"version", 1},
            {"neighbor_accuracy", round4(m.neighbor_accuracy)},
            {"neighbor_accuracy_percent", format_percent(m.neighbor_accuracy)},
            {"matched", m.matched},
            {"total", m.total},
            {"perfect", m.perfect},
            {"per_source", std::move(per_source)},
            {"solution_bounding_box", {{"rows", m.bounding_rows}, {"cols", m.bounding_cols}}},
            {"explicit_relation_count", m.explicit_relation_count}};
}

} // namespace jigsaw
