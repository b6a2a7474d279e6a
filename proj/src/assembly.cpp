#include "jigsaw/assembly.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace jigsaw {

namespace {

bool relation_satisfied(const PieceGroup& g, const RelativeRelation& rel) {
    const auto a = g.pose.find(rel.first.piece);
    const auto b = g.pose.find(rel.second.piece);
    if (a == g.pose.end() || b == g.pose.end()) return false;
    const auto dir = edge_direction(rel.first.edge, a->second.rotation);
    return step(a->second.cell, dir) == b->second.cell &&
           edge_direction(rel.second.edge, b->second.rotation) == opposite(dir);
}

} // namespace

PieceGroup PieceGroup::singleton(PieceId piece, Pose at) {
    PieceGroup g;
    g.members.push_back(piece);
    g.pose.emplace(piece, at);
    g.grid.emplace(at.cell, piece);
    return g;
}

bool PieceGroup::consistent() const {
    if (pose.size() != members.size() || grid.size() != members.size()) return false;
    for (auto p : members) {
        const auto it = pose.find(p);
        if (it == pose.end()) return false;
        const auto cell = grid.find(it->second.cell);
        if (cell == grid.end() || cell->second != p) return false;
    }
    if (!members.empty()) {
        absl::flat_hash_map<PieceId, char> seen;
        std::deque<PieceId> queue{members.front()};
        seen.emplace(members.front(), 1);
        while (!queue.empty()) {
            const auto p = queue.front();
            queue.pop_front();
            for (auto d : kDirections) {
                const auto it = grid.find(step(pose.at(p).cell, d));
                if (it != grid.end() && seen.emplace(it->second, 1).second) queue.push_back(it->second);
            }
        }
        if (seen.size() != members.size()) return false;
    }
    return std::all_of(relations.begin(), relations.end(),
                       [this](const RelativeRelation& r) { return relation_satisfied(*this, r); });
}

const char* to_string(AssignOutcome outcome) {
    switch (outcome) {
        case AssignOutcome::Accepted: return "accepted";
        case AssignOutcome::RejectedEdgeTaken: return "rejected: edge taken";
        case AssignOutcome::RejectedSameGroup: return "rejected: same group";
        case AssignOutcome::RejectedCollision: return "rejected: collision";
    }
    return "?";
}

MergeResult merge_groups(PieceGroup& big, const PieceGroup& small, const RelativeRelation& rel) {
    EdgeRef big_edge = rel.first;
    EdgeRef small_edge = rel.second;
    if (!big.contains(big_edge.piece)) std::swap(big_edge, small_edge);
    if (!big.contains(big_edge.piece) || !small.contains(small_edge.piece) || small.contains(big_edge.piece) ||
        big.contains(small_edge.piece))
        throw std::invalid_argument("merge relation must span the two groups");

    const Pose anchor = big.pose.at(big_edge.piece);
    const Direction dir = edge_direction(big_edge.edge, anchor.rotation);
    const Cell target = step(anchor.cell, dir);
    const Pose joined = small.pose.at(small_edge.piece);
    const Rotation delta = rotation_for(small_edge.edge, opposite(dir)) - joined.rotation;

    auto moved = [&](const Pose& p) {
        const Cell offset = rotate_offset({p.cell.row - joined.cell.row, p.cell.col - joined.cell.col}, delta);
        return Pose{{target.row + offset.row, target.col + offset.col}, p.rotation + delta};
    };

    // Test every destination before touching `big`.
    for (const auto q : small.members)
        if (big.grid.contains(moved(small.pose.at(q)).cell)) return MergeResult::Collision;

    big.members.reserve(big.members.size() + small.members.size());
    for (const auto q : small.members) {
        const Pose p = moved(small.pose.at(q));
        big.members.push_back(q);
        big.pose.emplace(q, p);
        big.grid.emplace(p.cell, q);
    }
    big.relations.insert(big.relations.end(), small.relations.begin(), small.relations.end());
    big.relations.push_back(rel);
    return MergeResult::Merged;
}

AssemblyState::AssemblyState(std::size_t piece_count)
    : group_of_(piece_count, kDetached), assigned_(piece_count * 4, 0), free_edges_(piece_count * 4),
      free_slot_(piece_count * 4) {
    for (std::uint32_t e = 0; e < free_edges_.size(); ++e) {
        free_edges_[e] = e;
        free_slot_[e] = e;
    }
}

std::optional<std::size_t> AssemblyState::group_of(PieceId p) const {
    const auto g = group_of_.at(p);
    if (g == kDetached) return std::nullopt;
    return static_cast<std::size_t>(g);
}

std::vector<std::size_t> AssemblyState::group_handles() const {
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < groups_.size(); ++h)
        if (live_[h]) out.push_back(h);
    return out;
}

void AssemblyState::mark_assigned(std::uint32_t edge) {
    if (assigned_[edge]) return;
    assigned_[edge] = 1;
    const auto slot = free_slot_[edge];
    const auto last = free_edges_.back();
    free_edges_[slot] = last;
    free_slot_[last] = slot;
    free_edges_.pop_back();
}

void AssemblyState::seal_neighbors(const PieceGroup& g, PieceId p) {
    const Pose pose = g.pose.at(p);
    for (auto d : kDirections) {
        const auto it = g.grid.find(step(pose.cell, d));
        if (it == g.grid.end()) continue;
        mark_assigned(EdgeRef{p, edge_facing(d, pose.rotation)}.index());
        mark_assigned(EdgeRef{it->second, edge_facing(opposite(d), g.pose.at(it->second).rotation)}.index());
    }
}

std::size_t AssemblyState::allocate_group(PieceGroup&& g) {
    ++live_groups_;
    if (!spare_handles_.empty()) {
        const auto h = spare_handles_.back();
        spare_handles_.pop_back();
        groups_[h] = std::move(g);
        live_[h] = 1;
        return h;
    }
    groups_.push_back(std::move(g));
    live_.push_back(1);
    return groups_.size() - 1;
}

void AssemblyState::release_group(std::size_t handle) {
    groups_[handle] = PieceGroup{};
    live_[handle] = 0;
    spare_handles_.push_back(handle);
    --live_groups_;
}

AssignOutcome AssemblyState::try_assign(const RelativeRelation& rel) {
    const auto n = piece_count();
    if (rel.first.piece >= n || rel.second.piece >= n) throw std::invalid_argument("relation names a piece out of range");
    if (!rel.well_formed()) throw std::invalid_argument("relation between edges of the same piece");

    if (assigned_[rel.first.index()] || assigned_[rel.second.index()]) return AssignOutcome::RejectedEdgeTaken;

    const auto ga = group_of_[rel.first.piece];
    const auto gb = group_of_[rel.second.piece];

    if (ga == kDetached && gb == kDetached) {
        auto g = PieceGroup::singleton(rel.first.piece);
        const auto dir = edge_direction(rel.first.edge, Rotation::R0);
        const Pose second{step(Cell{}, dir), rotation_for(rel.second.edge, opposite(dir))};
        g.members.push_back(rel.second.piece);
        g.pose.emplace(rel.second.piece, second);
        g.grid.emplace(second.cell, rel.second.piece);
        g.relations.push_back(rel);
        const auto h = static_cast<std::int32_t>(allocate_group(std::move(g)));
        group_of_[rel.first.piece] = h;
        group_of_[rel.second.piece] = h;
        seal_neighbors(groups_[h], rel.first.piece);
        ++accepted_;
        return AssignOutcome::Accepted;
    }

    if (ga == kDetached || gb == kDetached) {
        const EdgeRef anchor = ga == kDetached ? rel.second : rel.first;
        const EdgeRef loose = ga == kDetached ? rel.first : rel.second;
        const auto h = group_of_[anchor.piece];
        auto& g = groups_[h];
        const Pose at = g.pose.at(anchor.piece);
        const auto dir = edge_direction(anchor.edge, at.rotation);
        const Pose placed{step(at.cell, dir), rotation_for(loose.edge, opposite(dir))};
        if (g.grid.contains(placed.cell)) return AssignOutcome::RejectedCollision;
        g.members.push_back(loose.piece);
        g.pose.emplace(loose.piece, placed);
        g.grid.emplace(placed.cell, loose.piece);
        g.relations.push_back(rel);
        group_of_[loose.piece] = h;
        seal_neighbors(g, loose.piece);
        ++accepted_;
        return AssignOutcome::Accepted;
    }

    if (ga == gb) return AssignOutcome::RejectedSameGroup;

    // Smaller group moves; on a size tie the group holding rel.first stays.
    const bool first_is_big = groups_[ga].size() >= groups_[gb].size();
    const auto big = first_is_big ? ga : gb;
    const auto small = first_is_big ? gb : ga;
    if (merge_groups(groups_[big], groups_[small], rel) == MergeResult::Collision)
        return AssignOutcome::RejectedCollision;

    const auto moved = std::move(groups_[small].members);
    for (const auto q : moved) group_of_[q] = big;
    for (const auto q : moved) seal_neighbors(groups_[big], q);
    release_group(static_cast<std::size_t>(small));
    ++accepted_;
    return AssignOutcome::Accepted;
}

RelativeRelation AssemblyState::guaranteed_join() const {
    if (complete()) throw std::logic_error("assembly is already complete");

    // Candidate parts: every live group plus detached pieces (as size 1).
    std::optional<std::size_t> largest, smallest;
    for (std::size_t h = 0; h < groups_.size(); ++h) {
        if (!live_[h]) continue;
        if (!largest || groups_[h].size() > groups_[*largest].size()) largest = h;
        if (!smallest || groups_[h].size() < groups_[*smallest].size()) smallest = h;
    }
    std::optional<PieceId> detached;
    for (PieceId p = 0; p < group_of_.size(); ++p) {
        if (group_of_[p] == kDetached) {
            detached = p;
            break;
        }
    }

    if (!largest) {
        // Only detached pieces: join the first two side by side.
        PieceId other = *detached + 1;
        while (group_of_[other] != kDetached) ++other;
        return {{*detached, EdgeLabel::B}, {other, EdgeLabel::D}};
    }

    const auto& big = groups_[*largest];
    PieceId top = big.members.front();
    for (auto p : big.members) {
        const auto c = big.pose.at(p).cell;
        const auto best = big.pose.at(top).cell;
        if (c.row < best.row || (c.row == best.row && c.col < best.col)) top = p;
    }
    const EdgeRef upward{top, edge_facing(Direction::Up, big.pose.at(top).rotation)};

    if (detached) return {upward, {*detached, EdgeLabel::C}};

    // Two or more groups: the smallest other than `largest` hangs above it.
    std::optional<std::size_t> hang;
    for (std::size_t h = 0; h < groups_.size(); ++h) {
        if (!live_[h] || h == *largest) continue;
        if (!hang || groups_[h].size() < groups_[*hang].size()) hang = h;
    }
    const auto& small = groups_[*hang];
    PieceId bottom = small.members.front();
    for (auto p : small.members) {
        const auto c = small.pose.at(p).cell;
        const auto best = small.pose.at(bottom).cell;
        if (c.row > best.row || (c.row == best.row && c.col < best.col)) bottom = p;
    }
    // The big group's edge goes first so a size tie keeps it in place.
    return {upward, {bottom, edge_facing(Direction::Down, small.pose.at(bottom).rotation)}};
}

bool AssemblyState::consistent() const {
    std::vector<char> expect(assigned_.size(), 0);
    std::size_t live = 0;
    std::size_t explicit_relations = 0;
    for (std::size_t h = 0; h < groups_.size(); ++h) {
        if (!live_[h]) continue;
        ++live;
        const auto& g = groups_[h];
        if (!g.consistent()) return false;
        explicit_relations += g.relations.size();
        for (auto p : g.members) {
            if (group_of_[p] != static_cast<std::int32_t>(h)) return false;
            const auto pose = g.pose.at(p);
            for (auto d : kDirections)
                if (g.grid.contains(step(pose.cell, d))) expect[EdgeRef{p, edge_facing(d, pose.rotation)}.index()] = 1;
        }
    }
    if (live != live_groups_ || explicit_relations != accepted_ || expect != assigned_) return false;
    for (PieceId p = 0; p < group_of_.size(); ++p) {
        if (group_of_[p] == kDetached) continue;
        const auto h = static_cast<std::size_t>(group_of_[p]);
        if (h >= groups_.size() || !live_[h] || !groups_[h].contains(p)) return false;
    }
    const auto free_count = static_cast<std::size_t>(std::count(assigned_.begin(), assigned_.end(), 0));
    if (free_count != free_edges_.size()) return false;
    return std::all_of(free_edges_.begin(), free_edges_.end(), [this](auto e) { return assigned_[e] == 0; });
}

std::pair<Chromosome, Placement> AssemblyState::finalize() const {
    const auto n = piece_count();
    Placement placement;
    placement.poses.resize(n);
    if (n == 1) return {Chromosome(1), placement};
    if (!complete() || live_groups_ != 1) throw std::logic_error("finalize called before assembly completed");

    const auto handles = group_handles();
    const auto& g = groups_[handles.front()];
    for (auto p : g.members) placement.poses[p] = g.pose.at(p);
    placement = placement.normalized();
    return {chromosome_from_placement(placement), placement};
}

} // namespace jigsaw
