#pragma once

// Core domain types shared by the solver: pieces, edge references, relative
// relations, chromosomes and grid placements.
//
// Conventions used throughout:
//   * Edge labels run clockwise over the stored pixels: a=top, b=right,
//     c=bottom, d=left.
//   * A rotation turns the stored pixels clockwise by a multiple of 90 deg.
//   * Grid rows grow downward, columns grow rightward.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jigsaw {

using PieceId = std::uint32_t;

/// Raised when two pieces (or a piece and a table) disagree on tile size.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class EdgeLabel : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };
enum class Direction : std::uint8_t { Up = 0, Right = 1, Down = 2, Left = 3 };
enum class Rotation : std::uint8_t { R0 = 0, R90 = 1, R180 = 2, R270 = 3 };

inline constexpr EdgeLabel kEdgeLabels[] = {EdgeLabel::A, EdgeLabel::B, EdgeLabel::C, EdgeLabel::D};
inline constexpr Direction kDirections[] = {Direction::Up, Direction::Right, Direction::Down,
                                            Direction::Left};
inline constexpr Rotation kRotations[] = {Rotation::R0, Rotation::R90, Rotation::R180,
                                          Rotation::R270};

constexpr int quarter_turns(Rotation r) { return static_cast<int>(r); }
constexpr int degrees(Rotation r) { return 90 * quarter_turns(r); }
constexpr Rotation rotation_from_turns(int turns) {
    return static_cast<Rotation>(((turns % 4) + 4) % 4);
}
constexpr Rotation operator+(Rotation lhs, Rotation rhs) {
    return rotation_from_turns(quarter_turns(lhs) + quarter_turns(rhs));
}
constexpr Rotation operator-(Rotation lhs, Rotation rhs) {
    return rotation_from_turns(quarter_turns(lhs) - quarter_turns(rhs));
}

/// Throws std::invalid_argument unless `deg` is one of 0, 90, 180, 270.
Rotation rotation_from_degrees(int deg);

char to_char(EdgeLabel e);
/// Accepts 'a'..'d' (case-insensitive).
EdgeLabel edge_label_from_char(char c);
const char* to_string(Direction d);

constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}
constexpr Direction rotate_cw(Direction d, Rotation r) {
    return static_cast<Direction>((static_cast<int>(d) + quarter_turns(r)) % 4);
}

/// Compass direction that `edge` faces once the stored pixels are turned
/// clockwise by `rotation`.
constexpr Direction edge_direction(EdgeLabel edge, Rotation rotation) {
    return static_cast<Direction>((static_cast<int>(edge) + quarter_turns(rotation)) % 4);
}

/// Inverse of edge_direction: the label that ends up facing `dir`.
constexpr EdgeLabel edge_facing(Direction dir, Rotation rotation) {
    return static_cast<EdgeLabel>(((static_cast<int>(dir) - quarter_turns(rotation)) % 4 + 4) % 4);
}

/// The rotation that makes `edge` face `dir`.
constexpr Rotation rotation_for(EdgeLabel edge, Direction dir) {
    return rotation_from_turns(static_cast<int>(dir) - static_cast<int>(edge));
}

struct Cell {
    int row = 0;
    int col = 0;

    friend constexpr bool operator==(const Cell&, const Cell&) = default;
    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;

    template <typename H>
    friend H AbslHashValue(H h, const Cell& c) {
        return H::combine(std::move(h), c.row, c.col);
    }
};

constexpr Cell step(Cell c, Direction d) {
    switch (d) {
        case Direction::Up: return {c.row - 1, c.col};
        case Direction::Right: return {c.row, c.col + 1};
        case Direction::Down: return {c.row + 1, c.col};
        case Direction::Left: return {c.row, c.col - 1};
    }
    return c;
}

/// Rotates an offset clockwise about the origin (row axis points down).
constexpr Cell rotate_offset(Cell offset, Rotation r) {
    Cell v = offset;
    for (int i = 0; i < quarter_turns(r); ++i) v = {v.col, -v.row};
    return v;
}

struct EdgeRef {
    PieceId piece = 0;
    EdgeLabel edge = EdgeLabel::A;

    /// Dense index piece*4 + label, used by every flat per-edge table.
    constexpr std::uint32_t index() const { return piece * 4u + static_cast<std::uint32_t>(edge); }
    static constexpr EdgeRef from_index(std::uint32_t idx) {
        return {idx / 4u, static_cast<EdgeLabel>(idx % 4u)};
    }

    friend constexpr bool operator==(const EdgeRef&, const EdgeRef&) = default;
    friend constexpr auto operator<=>(const EdgeRef& l, const EdgeRef& r) {
        return l.index() <=> r.index();
    }
};

/// Formats as "<piece>.<label>", e.g. "4.b".
std::string to_string(EdgeRef e);
/// Parses the to_string format; throws std::invalid_argument on malformed text.
EdgeRef parse_edge_ref(const std::string& text);

/// Unordered statement that two edges of distinct pieces abut.
struct RelativeRelation {
    EdgeRef first;
    EdgeRef second;

    /// Ordered so that first < second; equal relations normalize identically.
    RelativeRelation normalized() const {
        return first < second ? *this : RelativeRelation{second, first};
    }
    bool well_formed() const { return first.piece != second.piece; }

    friend bool operator==(const RelativeRelation& l, const RelativeRelation& r) {
        return (l.first == r.first && l.second == r.second) ||
               (l.first == r.second && l.second == r.first);
    }
};

struct Pose {
    Cell cell;
    Rotation rotation = Rotation::R0;

    friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

/// Pose of every piece, indexed by piece id.
struct Placement {
    std::vector<Pose> poses;

    std::size_t size() const { return poses.size(); }

    struct Bounds {
        int min_row = 0, min_col = 0, max_row = -1, max_col = -1;
        int rows() const { return max_row - min_row + 1; }
        int cols() const { return max_col - min_col + 1; }
    };
    Bounds bounds() const;
    /// Translated so the bounding box starts at (0, 0).
    Placement normalized() const;
};

/// Flat n x 4 relation matrix. Entry (i, j) is the edge abutting edge j of
/// piece i, or empty when that edge sits on the boundary.
class Chromosome {
public:
    Chromosome() = default;
    explicit Chromosome(std::size_t piece_count);

    std::size_t piece_count() const { return links_.size() / 4; }

    std::optional<EdgeRef> neighbor(EdgeRef e) const {
        const auto v = links_.at(e.index());
        if (v < 0) return std::nullopt;
        return EdgeRef::from_index(static_cast<std::uint32_t>(v));
    }
    /// -1 for none, otherwise the partner's dense edge index.
    std::int32_t link(std::uint32_t edge_index) const { return links_[edge_index]; }
    std::span<const std::int32_t> links() const { return links_; }

    /// Records both directions of the relation.
    void connect(EdgeRef x, EdgeRef y);

    /// Every recorded relation once, normalized, in increasing first-edge order.
    std::vector<RelativeRelation> relations() const;
    std::size_t relation_count() const;

    std::optional<double> cached_fitness() const { return fitness_; }
    void set_cached_fitness(double f) { fitness_ = f; }

    /// Equality of relation sets; cached fitness is ignored.
    friend bool operator==(const Chromosome& l, const Chromosome& r) { return l.links_ == r.links_; }

private:
    std::vector<std::int32_t> links_;
    std::optional<double> fitness_;
};

/// Builds the chromosome recording every adjacency of an overlap-free,
/// 4-connected placement. Throws std::invalid_argument otherwise.
Chromosome chromosome_from_placement(const Placement& placement);

/// Recovers the (normalized) placement realizing a chromosome, anchored with
/// piece 0 unrotated. Throws std::invalid_argument when the relations are
/// contradictory, overlapping or disconnected.
Placement realize_placement(const Chromosome& chromosome);

struct ValidationReport {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Checks symmetry, self-adjacency, connectivity, realizability and that the
/// realized placement records every adjacency it creates.
ValidationReport validate(const Chromosome& chromosome);

/// A K x K tile in normalized L*a*b*. Channels are interleaved per pixel,
/// row-major.
struct Piece {
    PieceId id = 0;
    int size = 0;
    std::vector<double> lab;

    Piece() = default;
    /// Throws std::invalid_argument on K < 2, wrong buffer size, or channel
    /// values outside [0, 1].
    Piece(PieceId id, int size, std::vector<double> lab);

    double at(int row, int col, int ch) const {
        return lab[(static_cast<std::size_t>(row) * size + col) * 3 + ch];
    }
};

} // namespace jigsaw
