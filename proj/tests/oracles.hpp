#pragma once

// Brute-force reference implementations used to cross-check the library.
// They share no code with the solver beyond the domain types.

#include "jigsaw/compatibility.hpp"
#include "jigsaw/tile_model.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace jigsaw::test {

// Pixels of `p` physically turned clockwise `turns` times, K*K*3 row-major.
inline std::vector<double> turned(const Piece& p, int turns) {
    const int k = p.size;
    std::vector<double> cur = p.lab;
    for (int t = 0; t < turns; ++t) {
        std::vector<double> next(cur.size());
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                for (int ch = 0; ch < 3; ++ch)
                    next[(static_cast<std::size_t>(r) * k + c) * 3 + ch] =
                        cur[(static_cast<std::size_t>(k - 1 - c) * k + r) * 3 + ch];
        cur = std::move(next);
    }
    return cur;
}

// The left/right seam formula applied after turning A so `ea` faces right
// and B so `eb` faces left.
inline double seam_dissimilarity(const Piece& a, EdgeLabel ea, const Piece& b, EdgeLabel eb) {
    const int k = a.size;
    const auto left = turned(a, quarter_turns(rotation_for(ea, Direction::Right)));
    const auto right = turned(b, quarter_turns(rotation_for(eb, Direction::Left)));
    double sum = 0.0;
    for (int row = 0; row < k; ++row)
        for (int ch = 0; ch < 3; ++ch) {
            const double d = left[(static_cast<std::size_t>(row) * k + (k - 1)) * 3 + ch] -
                             right[(static_cast<std::size_t>(row) * k) * 3 + ch];
            sum += d * d;
        }
    return std::sqrt(sum);
}

// Dense table of seam_dissimilarity over all edge indices; same-piece entries
// are infinite.
inline std::vector<std::vector<double>> seam_table(std::span<const Piece> pieces) {
    const auto edges = pieces.size() * 4;
    std::vector<std::vector<double>> d(edges, std::vector<double>(edges, std::numeric_limits<double>::infinity()));
    for (std::size_t x = 0; x < edges; ++x)
        for (std::size_t y = 0; y < edges; ++y)
            if (x / 4 != y / 4)
                d[x][y] = seam_dissimilarity(pieces[x / 4], static_cast<EdgeLabel>(x % 4), pieces[y / 4],
                                             static_cast<EdgeLabel>(y % 4));
    return d;
}

// Mutual argmin pairs; ties go to the lowest edge index.
inline std::set<std::pair<std::uint32_t, std::uint32_t>> mutual_argmin(
    const std::vector<std::vector<double>>& d) {
    const auto edges = d.size();
    std::vector<std::size_t> best(edges);
    for (std::size_t x = 0; x < edges; ++x) {
        std::size_t arg = edges;
        for (std::size_t y = 0; y < edges; ++y)
            if (x / 4 != y / 4 && (arg == edges || d[x][y] < d[x][arg])) arg = y;
        best[x] = arg;
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t x = 0; x < edges; ++x)
        if (best[best[x]] == x && x < best[x])
            out.insert({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(best[x])});
    return out;
}

} // namespace jigsaw::test
