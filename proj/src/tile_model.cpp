#include "jigsaw/tile_model.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <limits>

namespace jigsaw {

Rotation rotation_from_degrees(int deg) {
    switch (deg) {
        case 0: return Rotation::R0;
        case 90: return Rotation::R90;
        case 180: return Rotation::R180;
        case 270: return Rotation::R270;
        default: throw std::invalid_argument("rotation must be 0, 90, 180 or 270, got " + std::to_string(deg));
    }
}

char to_char(EdgeLabel e) { return static_cast<char>('a' + static_cast<int>(e)); }

EdgeLabel edge_label_from_char(char c) {
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower < 'a' || lower > 'd') throw std::invalid_argument(std::string("bad edge label '") + c + "'");
    return static_cast<EdgeLabel>(lower - 'a');
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::Up: return "up";
        case Direction::Right: return "right";
        case Direction::Down: return "down";
        case Direction::Left: return "left";
    }
    return "?";
}

std::string to_string(EdgeRef e) { return std::to_string(e.piece) + '.' + to_char(e.edge); }

EdgeRef parse_edge_ref(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 2 != text.size())
        throw std::invalid_argument("malformed edge reference '" + text + "'");
    PieceId piece = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + dot, piece);
    if (ec != std::errc{} || ptr != text.data() + dot)
        throw std::invalid_argument("malformed edge reference '" + text + "'");
    return {piece, edge_label_from_char(text[dot + 1])};
}

Placement::Bounds Placement::bounds() const {
    if (poses.empty()) return {};
    Bounds b{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
             std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
    for (const auto& p : poses) {
        b.min_row = std::min(b.min_row, p.cell.row);
        b.min_col = std::min(b.min_col, p.cell.col);
        b.max_row = std::max(b.max_row, p.cell.row);
        b.max_col = std::max(b.max_col, p.cell.col);
    }
    return b;
}

Placement Placement::normalized() const {
    const auto b = bounds();
    Placement out = *this;
    for (auto& p : out.poses) p.cell = {p.cell.row - b.min_row, p.cell.col - b.min_col};
    return out;
}

Chromosome::Chromosome(std::size_t piece_count) : links_(piece_count * 4, -1) {}

void Chromosome::connect(EdgeRef x, EdgeRef y) {
    if (x.piece == y.piece) throw std::invalid_argument("cannot relate two edges of piece " + std::to_string(x.piece));
    links_.at(x.index()) = static_cast<std::int32_t>(y.index());
    links_.at(y.index()) = static_cast<std::int32_t>(x.index());
    fitness_.reset();
}

std::vector<RelativeRelation> Chromosome::relations() const {
    std::vector<RelativeRelation> out;
    for (std::uint32_t i = 0; i < links_.size(); ++i) {
        if (links_[i] > static_cast<std::int32_t>(i))
            out.push_back({EdgeRef::from_index(i), EdgeRef::from_index(static_cast<std::uint32_t>(links_[i]))});
    }
    return out;
}

std::size_t Chromosome::relation_count() const {
    return static_cast<std::size_t>(std::count_if(links_.begin(), links_.end(), [](auto v) { return v >= 0; })) / 2;
}

namespace {

using CellMap = absl::flat_hash_map<Cell, PieceId>;

CellMap occupancy(const Placement& placement) {
    CellMap grid;
    grid.reserve(placement.size());
    for (PieceId i = 0; i < placement.size(); ++i) {
        if (!grid.emplace(placement.poses[i].cell, i).second)
            throw std::invalid_argument("placement overlaps at piece " + std::to_string(i));
    }
    return grid;
}

bool connected(const Placement& placement, const CellMap& grid) {
    if (placement.size() <= 1) return true;
    std::vector<char> seen(placement.size(), 0);
    std::deque<PieceId> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const auto p = queue.front();
        queue.pop_front();
        for (auto d : kDirections) {
            const auto it = grid.find(step(placement.poses[p].cell, d));
            if (it == grid.end() || seen[it->second]) continue;
            seen[it->second] = 1;
            ++reached;
            queue.push_back(it->second);
        }
    }
    return reached == placement.size();
}

} // namespace

Chromosome chromosome_from_placement(const Placement& placement) {
    const auto grid = occupancy(placement);
    if (!connected(placement, grid)) throw std::invalid_argument("placement is not 4-connected");

    Chromosome out(placement.size());
    for (PieceId i = 0; i < placement.size(); ++i) {
        const auto& pose = placement.poses[i];
        for (auto dir : {Direction::Right, Direction::Down}) {
            const auto it = grid.find(step(pose.cell, dir));
            if (it == grid.end()) continue;
            const auto& other = placement.poses[it->second];
            out.connect({i, edge_facing(dir, pose.rotation)},
                        {it->second, edge_facing(opposite(dir), other.rotation)});
        }
    }
    return out;
}

Placement realize_placement(const Chromosome& chromosome) {
    const auto n = static_cast<PieceId>(chromosome.piece_count());
    Placement placement;
    placement.poses.resize(n);
    if (n == 0) return placement;

    std::vector<char> placed(n, 0);
    CellMap grid;
    grid.reserve(n);
    placed[0] = 1;
    grid.emplace(Cell{}, 0);
    std::deque<PieceId> queue{0};
    std::size_t count = 1;
    while (!queue.empty()) {
        const auto i = queue.front();
        queue.pop_front();
        const auto pose = placement.poses[i];
        for (auto label : kEdgeLabels) {
            const auto nb = chromosome.neighbor({i, label});
            if (!nb) continue;
            if (nb->piece == i) throw std::invalid_argument("piece " + std::to_string(i) + " is related to itself");
            const auto back = chromosome.neighbor(*nb);
            if (!back || *back != EdgeRef{i, label})
                throw std::invalid_argument("asymmetric relation at " + to_string(EdgeRef{i, label}));
            const auto dir = edge_direction(label, pose.rotation);
            const Pose want{step(pose.cell, dir), rotation_for(nb->edge, opposite(dir))};
            if (placed[nb->piece]) {
                if (placement.poses[nb->piece] != want)
                    throw std::invalid_argument("contradictory relations around piece " + std::to_string(nb->piece));
                continue;
            }
            if (!grid.emplace(want.cell, nb->piece).second)
                throw std::invalid_argument("relations force an overlap at piece " + std::to_string(nb->piece));
            placement.poses[nb->piece] = want;
            placed[nb->piece] = 1;
            ++count;
            queue.push_back(nb->piece);
        }
    }
    if (count != n) throw std::invalid_argument("relations do not connect all pieces");
    return placement.normalized();
}

ValidationReport validate(const Chromosome& chromosome) {
    const auto links = chromosome.links();
    const auto edges = static_cast<std::int64_t>(links.size());
    for (std::int64_t i = 0; i < edges; ++i) {
        const auto v = links[i];
        if (v < -1 || v >= edges) return {false, "edge index out of range"};
        if (v < 0) continue;
        if (v / 4 == i / 4) return {false, "self-adjacency on piece " + std::to_string(i / 4)};
        if (links[v] != i) return {false, "asymmetric entry at edge " + std::to_string(i)};
    }
    Placement placement;
    try {
        placement = realize_placement(chromosome);
    } catch (const std::invalid_argument& e) {
        return {false, e.what()};
    }
    if (chromosome_from_placement(placement) != chromosome)
        return {false, "placement creates adjacencies missing from the chromosome"};
    return {};
}

Piece::Piece(PieceId id_, int size_, std::vector<double> lab_) : id(id_), size(size_), lab(std::move(lab_)) {
    if (size < 2) throw std::invalid_argument("tile size must be at least 2");
    if (lab.size() != static_cast<std::size_t>(size) * size * 3)
        throw DimensionError("piece " + std::to_string(id) + " pixel buffer is not K*K*3");
    for (double v : lab)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("piece channel value outside [0,1]");
}

} // namespace jigsaw
