#pragma once

#include "jigsaw/tile_model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace jigsaw {

/// Root-sum-of-squares colour difference across the K pixel pairs that meet
/// when `edge_a` of `a` touches `edge_b` of `b`. The strip of the first edge
/// is read clockwise and the second counterclockwise, so (b, d) on unrotated
/// pieces compares A's last column with B's first column row by row.
/// Throws DimensionError on mismatched tile sizes and std::invalid_argument
/// when both arguments are the same piece.
double dissimilarity(const Piece& a, EdgeLabel edge_a, const Piece& b, EdgeLabel edge_b);

enum class TableMode : std::uint8_t { Materialized = 0, OnDemand = 1 };

struct TableOptions {
    /// Pieces above this count switch to on-demand mode.
    std::size_t materialize_threshold = 6000;
    /// When set, overrides the threshold: materialize iff the value matrix fits.
    std::optional<std::size_t> max_table_bytes;
    std::optional<TableMode> force_mode;
    unsigned threads = 1;
    /// Slot count of the on-demand memo cache.
    std::size_t memo_slots = std::size_t{1} << 20;
};

/// Pairwise edge dissimilarities for a piece set plus the derived statistics
/// the solver needs: the "none" edge penalty, the most compatible partner of
/// every edge and the best-buddy pairs.
///
/// Small instances keep all (4n)^2 values in memory. Large ones compute values
/// on demand behind a bounded memo cache; both modes return bitwise-equal
/// values. The table is immutable once built and safe to share across threads.
class CompatibilityTable {
public:
    using Mode = TableMode;
    using Options = TableOptions;

    /// Throws std::invalid_argument for fewer than two pieces, DimensionError
    /// for mixed tile sizes.
    static CompatibilityTable build(std::span<const Piece> pieces, const Options& options = {});
    static CompatibilityTable build(std::span<const Piece> pieces, const Options& options, Mode mode);

    CompatibilityTable(CompatibilityTable&&) noexcept;
    CompatibilityTable& operator=(CompatibilityTable&&) noexcept;
    ~CompatibilityTable();

    std::size_t piece_count() const { return n_; }
    int tile_size() const { return k_; }
    Mode mode() const { return mode_; }

    /// Throws std::invalid_argument for edges of the same piece or out of range.
    double lookup(EdgeRef x, EdgeRef y) const;
    /// Unchecked variant over dense edge indices of distinct pieces.
    double distance(std::uint32_t x, std::uint32_t y) const;

    double mean_dissimilarity() const { return mean_; }
    double none_penalty() const { return 2.0 * mean_; }

    EdgeRef most_compatible(EdgeRef e) const { return EdgeRef::from_index(most_compatible_.at(e.index())); }
    std::uint32_t most_compatible(std::uint32_t edge_index) const { return most_compatible_[edge_index]; }

    /// Mutual most-compatible test over dense indices (no validation).
    bool is_best_buddy(std::uint32_t x, std::uint32_t y) const {
        return most_compatible_[x] == y && most_compatible_[y] == x;
    }
    /// All best-buddy pairs, normalized, sorted by first edge.
    std::vector<RelativeRelation> best_buddy_pairs() const;

    /// pieces_hash of the pieces the table was built from.
    std::uint64_t content_hash() const { return hash_; }

    /// Binary cache: header then row-major float64 values (none in on-demand mode).
    void save(const std::filesystem::path& file) const;
    /// Throws std::runtime_error when the file is unreadable or was written for
    /// different pieces.
    static CompatibilityTable load(const std::filesystem::path& file, std::span<const Piece> pieces,
                                   const Options& options = {});

private:
    struct Memo;

    CompatibilityTable() = default;
    void prepare(std::span<const Piece> pieces, const Options& options);
    void fill_values();
    void derive_statistics();
    double compute(std::uint32_t x, std::uint32_t y) const;

    std::size_t n_ = 0;
    int k_ = 0;
    Mode mode_ = Mode::Materialized;
    unsigned threads_ = 1;
    std::uint64_t hash_ = 0;
    // Clockwise and counterclockwise boundary strips, K*3 values per edge.
    std::vector<double> cw_;
    std::vector<double> ccw_;
    std::vector<double> values_;
    std::vector<std::uint32_t> most_compatible_;
    double mean_ = 0.0;
    std::unique_ptr<Memo> memo_;
};

/// FNV-1a over tile size, piece count and all pixel values; the key of the
/// table cache. Same preconditions as CompatibilityTable::build.
std::uint64_t pieces_hash(std::span<const Piece> pieces);

/// Query form of the best-buddy relation; throws std::invalid_argument for
/// two edges of the same piece.
bool best_buddies(const CompatibilityTable& table, EdgeRef x, EdgeRef y);

} // namespace jigsaw
