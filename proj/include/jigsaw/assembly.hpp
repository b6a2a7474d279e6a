#pragma once

// Relative-relation assignment engine used by the crossover. Pieces start
// detached; each accepted relation either founds a two-piece group, attaches
// a detached piece to a group, or merges two groups as rigid bodies. Any
// assignment that would overlap pieces is rejected without side effects.

#include "jigsaw/tile_model.hpp"

#include <absl/container/flat_hash_map.h>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace jigsaw {

/// A rigid sub-assembly on an unbounded integer grid.
struct PieceGroup {
    std::vector<PieceId> members;
    absl::flat_hash_map<PieceId, Pose> pose;
    absl::flat_hash_map<Cell, PieceId> grid;
    /// Explicitly assigned relations, in acceptance order.
    std::vector<RelativeRelation> relations;

    static PieceGroup singleton(PieceId piece, Pose at = {});

    std::size_t size() const { return members.size(); }
    bool contains(PieceId p) const { return pose.contains(p); }

    /// Grid/pose agreement, 4-connectivity and every recorded relation
    /// satisfied by the poses. Linear in the group size.
    bool consistent() const;
};

enum class AssignOutcome : std::uint8_t {
    Accepted,
    RejectedEdgeTaken,
    RejectedSameGroup,
    RejectedCollision,
};

const char* to_string(AssignOutcome outcome);

enum class MergeResult : std::uint8_t { Merged, Collision };

/// Moves `small` rigidly (rotation then translation) so the two related edges
/// face each other and inserts its pieces into `big`. On Collision `big` is
/// left untouched. Throws std::invalid_argument unless `rel` has one edge in
/// each group.
MergeResult merge_groups(PieceGroup& big, const PieceGroup& small, const RelativeRelation& rel);

class AssemblyState {
public:
    static constexpr std::int32_t kDetached = -1;

    explicit AssemblyState(std::size_t piece_count);

    /// Throws std::invalid_argument for a relation between edges of one piece
    /// or naming a piece out of range.
    AssignOutcome try_assign(const RelativeRelation& rel);

    std::size_t piece_count() const { return group_of_.size(); }
    std::size_t accepted_count() const { return accepted_; }
    bool complete() const { return accepted_ + 1 >= piece_count(); }
    std::size_t group_count() const { return live_groups_; }

    /// An edge is assigned once it faces another piece, explicitly or not.
    bool is_assigned(EdgeRef e) const { return assigned_.at(e.index()) != 0; }
    /// Dense indices of the edges still free, in no particular order.
    std::span<const std::uint32_t> free_edges() const { return free_edges_; }

    std::optional<std::size_t> group_of(PieceId p) const;
    const PieceGroup& group(std::size_t handle) const { return groups_.at(handle); }
    std::vector<std::size_t> group_handles() const;

    /// A relation that is guaranteed to be accepted while the state is
    /// incomplete: the smallest group (or a detached piece) hung above the top
    /// row of another group. Throws std::logic_error when complete.
    RelativeRelation guaranteed_join() const;

    /// Re-checks every group and the edge bookkeeping from scratch.
    bool consistent() const;

    /// The single remaining group as a normalized placement plus the
    /// chromosome of all its adjacencies, explicit and implicit. Throws
    /// std::logic_error before n-1 relations have been accepted.
    std::pair<Chromosome, Placement> finalize() const;

private:
    void mark_assigned(std::uint32_t edge);
    void seal_neighbors(const PieceGroup& g, PieceId p);
    std::size_t allocate_group(PieceGroup&& g);
    void release_group(std::size_t handle);

    std::vector<PieceGroup> groups_;
    std::vector<char> live_;
    std::vector<std::size_t> spare_handles_;
    std::size_t live_groups_ = 0;
    std::vector<std::int32_t> group_of_;
    std::vector<char> assigned_;
    std::vector<std::uint32_t> free_edges_;
    std::vector<std::uint32_t> free_slot_;
    std::size_t accepted_ = 0;
};

} // namespace jigsaw
