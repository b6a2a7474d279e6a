#include "jigsaw/compatibility.hpp"

#include "jigsaw/parallel.hpp"
#include "jigsaw/random.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace jigsaw {

namespace {

constexpr std::array<char, 4> kMagic{'J', 'G', 'C', 'T'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr std::uint8_t kFloat64 = 8;

// Pixel (row, col) of the k-th position walking edge `e` clockwise.
std::pair<int, int> clockwise_pixel(EdgeLabel e, int k, int size) {
    switch (e) {
        case EdgeLabel::A: return {0, k};
        case EdgeLabel::B: return {k, size - 1};
        case EdgeLabel::C: return {size - 1, size - 1 - k};
        case EdgeLabel::D: return {size - 1 - k, 0};
    }
    return {0, 0};
}

void append_strips(const Piece& p, EdgeLabel e, std::vector<double>& cw, std::vector<double>& ccw) {
    const int size = p.size;
    for (int k = 0; k < size; ++k) {
        const auto [r, c] = clockwise_pixel(e, k, size);
        for (int ch = 0; ch < 3; ++ch) cw.push_back(p.at(r, c, ch));
    }
    for (int k = size - 1; k >= 0; --k) {
        const auto [r, c] = clockwise_pixel(e, k, size);
        for (int ch = 0; ch < 3; ++ch) ccw.push_back(p.at(r, c, ch));
    }
}

double strip_distance(const double* clockwise, const double* counterclockwise, std::size_t len) {
    double sum = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        const double diff = clockwise[i] - counterclockwise[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

void check_pieces(std::span<const Piece> pieces) {
    if (pieces.size() < 2) throw std::invalid_argument("compatibility table needs at least two pieces");
    const int size = pieces.front().size;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].size != size) throw DimensionError("pieces have mixed tile sizes");
        if (pieces[i].id != i) throw std::invalid_argument("piece ids must match their position");
    }
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated compatibility cache");
    return v;
}

} // namespace

double dissimilarity(const Piece& a, EdgeLabel edge_a, const Piece& b, EdgeLabel edge_b) {
    if (a.size != b.size) throw DimensionError("dissimilarity between pieces of different tile sizes");
    if (a.id == b.id) throw std::invalid_argument("dissimilarity of a piece with itself");
    // Same canonical order as the table so both routes agree bit for bit.
    const EdgeRef ra{a.id, edge_a}, rb{b.id, edge_b};
    const bool a_first = ra < rb;
    std::vector<double> cw, ccw, unused;
    append_strips(a_first ? a : b, a_first ? edge_a : edge_b, cw, unused);
    append_strips(a_first ? b : a, a_first ? edge_b : edge_a, unused, ccw);
    return strip_distance(cw.data(), ccw.data(), cw.size());
}

struct CompatibilityTable::Memo {
    struct Slot {
        std::uint64_t key = 0;
        double value = 0.0;
    };
    explicit Memo(std::size_t slots) : slots(std::max<std::size_t>(slots, 1)) {}

    std::vector<Slot> slots;
    std::array<std::mutex, 64> locks;
};

CompatibilityTable::CompatibilityTable(CompatibilityTable&&) noexcept = default;
CompatibilityTable& CompatibilityTable::operator=(CompatibilityTable&&) noexcept = default;
CompatibilityTable::~CompatibilityTable() = default;

void CompatibilityTable::prepare(std::span<const Piece> pieces, const Options& options) {
    check_pieces(pieces);
    n_ = pieces.size();
    k_ = pieces.front().size;
    threads_ = std::max(1u, options.threads);

    const std::size_t strip = static_cast<std::size_t>(k_) * 3;
    cw_.reserve(n_ * 4 * strip);
    ccw_.reserve(n_ * 4 * strip);
    hash_ = pieces_hash(pieces);
    for (const auto& p : pieces)
        for (auto e : kEdgeLabels) append_strips(p, e, cw_, ccw_);
}

double CompatibilityTable::compute(std::uint32_t x, std::uint32_t y) const {
    if (x > y) std::swap(x, y);
    const std::size_t strip = static_cast<std::size_t>(k_) * 3;
    return strip_distance(cw_.data() + x * strip, ccw_.data() + y * strip, strip);
}

double CompatibilityTable::distance(std::uint32_t x, std::uint32_t y) const {
    if (mode_ == Mode::Materialized) return values_[static_cast<std::size_t>(x) * (4 * n_) + y];

    if (x > y) std::swap(x, y);
    const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32 | y) + 1;
    auto& memo = *memo_;
    const std::size_t slot = static_cast<std::size_t>(splitmix64(key) % memo.slots.size());
    {
        std::lock_guard lock(memo.locks[slot % memo.locks.size()]);
        if (memo.slots[slot].key == key) return memo.slots[slot].value;
    }
    const double v = compute(x, y);
    std::lock_guard lock(memo.locks[slot % memo.locks.size()]);
    memo.slots[slot] = {key, v};
    return v;
}

double CompatibilityTable::lookup(EdgeRef x, EdgeRef y) const {
    if (x.piece >= n_ || y.piece >= n_) throw std::invalid_argument("edge reference out of range");
    if (x.piece == y.piece) throw std::invalid_argument("lookup between edges of the same piece");
    return distance(x.index(), y.index());
}

void CompatibilityTable::fill_values() {
    const std::size_t edges = 4 * n_;
    values_.assign(edges * edges, 0.0);
    parallel_for(edges, threads_, [&](std::size_t x) {
        for (std::size_t y = x + 1; y < edges; ++y) {
            if (x / 4 == y / 4) continue;
            const double v = compute(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
            values_[x * edges + y] = v;
            values_[y * edges + x] = v;
        }
    });
}

void CompatibilityTable::derive_statistics() {
    const std::size_t edges = 4 * n_;
    most_compatible_.assign(edges, 0);
    std::vector<double> row_sums(edges, 0.0);
    parallel_for(edges, threads_, [&](std::size_t x) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t arg = 0;
        double sum = 0.0;
        for (std::size_t y = 0; y < edges; ++y) {
            if (x / 4 == y / 4) continue;
            const double v = mode_ == Mode::Materialized
                                 ? values_[x * edges + y]
                                 : compute(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
            // Strict comparison in increasing index order breaks ties toward
            // the smallest (piece, label).
            if (v < best) {
                best = v;
                arg = static_cast<std::uint32_t>(y);
            }
            if (y > x) sum += v;
        }
        most_compatible_[x] = arg;
        row_sums[x] = sum;
    });
    double total = 0.0;
    for (double s : row_sums) total += s;
    const double pairs = 16.0 * static_cast<double>(n_) * static_cast<double>(n_ - 1) / 2.0;
    mean_ = total / pairs;
}

CompatibilityTable CompatibilityTable::build(std::span<const Piece> pieces, const Options& options) {
    check_pieces(pieces);
    Mode mode;
    const double bytes = 16.0 * static_cast<double>(pieces.size()) * static_cast<double>(pieces.size()) * sizeof(double);
    if (options.force_mode) {
        mode = *options.force_mode;
    } else if (options.max_table_bytes) {
        mode = bytes <= static_cast<double>(*options.max_table_bytes) ? Mode::Materialized : Mode::OnDemand;
    } else {
        mode = pieces.size() <= options.materialize_threshold ? Mode::Materialized : Mode::OnDemand;
    }
    return build(pieces, options, mode);
}

CompatibilityTable CompatibilityTable::build(std::span<const Piece> pieces, const Options& options, Mode mode) {
    CompatibilityTable table;
    table.prepare(pieces, options);
    table.mode_ = mode;
    if (mode == Mode::Materialized) {
        table.fill_values();
    } else {
        table.memo_ = std::make_unique<Memo>(options.memo_slots);
    }
    table.derive_statistics();
    return table;
}

std::vector<RelativeRelation> CompatibilityTable::best_buddy_pairs() const {
    std::vector<RelativeRelation> out;
    for (std::uint32_t x = 0; x < most_compatible_.size(); ++x) {
        const auto y = most_compatible_[x];
        if (x < y && most_compatible_[y] == x) out.push_back({EdgeRef::from_index(x), EdgeRef::from_index(y)});
    }
    return out;
}

void CompatibilityTable::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write compatibility cache " + file.string());
    out.write(kMagic.data(), kMagic.size());
    write_pod(out, kCacheVersion);
    write_pod(out, static_cast<std::uint64_t>(n_));
    write_pod(out, static_cast<std::uint32_t>(k_));
    write_pod(out, static_cast<std::uint8_t>(mode_));
    write_pod(out, kFloat64);
    write_pod(out, hash_);
    if (mode_ == Mode::Materialized)
        out.write(reinterpret_cast<const char*>(values_.data()),
                  static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed writing compatibility cache " + file.string());
}

CompatibilityTable CompatibilityTable::load(const std::filesystem::path& file, std::span<const Piece> pieces,
                                            const Options& options) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read compatibility cache " + file.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("not a compatibility cache: " + file.string());
    if (read_pod<std::uint32_t>(in) != kCacheVersion) throw std::runtime_error("unsupported cache version");
    const auto n = read_pod<std::uint64_t>(in);
    const auto k = read_pod<std::uint32_t>(in);
    const auto mode = read_pod<std::uint8_t>(in);
    const auto value_type = read_pod<std::uint8_t>(in);
    const auto hash = read_pod<std::uint64_t>(in);

    CompatibilityTable table;
    table.prepare(pieces, options);
    if (n != table.n_ || k != static_cast<std::uint32_t>(table.k_) || hash != table.hash_)
        throw std::runtime_error("compatibility cache was built for different pieces");
    if (mode > 1 || value_type != kFloat64) throw std::runtime_error("corrupt compatibility cache header");
    table.mode_ = static_cast<Mode>(mode);
    if (table.mode_ == Mode::Materialized) {
        table.values_.resize(16 * table.n_ * table.n_);
        in.read(reinterpret_cast<char*>(table.values_.data()),
                static_cast<std::streamsize>(table.values_.size() * sizeof(double)));
        if (!in) throw std::runtime_error("truncated compatibility cache");
    } else {
        table.memo_ = std::make_unique<Memo>(options.memo_slots);
    }
    table.derive_statistics();
    return table;
}

std::uint64_t pieces_hash(std::span<const Piece> pieces) {
    check_pieces(pieces);
    const int k = pieces.front().size;
    const std::uint64_t n = pieces.size();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, &k, sizeof(k));
    h = fnv1a(h, &n, sizeof(n));
    for (const auto& p : pieces) h = fnv1a(h, p.lab.data(), p.lab.size() * sizeof(double));
    return h;
}

bool best_buddies(const CompatibilityTable& table, EdgeRef x, EdgeRef y) {
    if (x.piece == y.piece) throw std::invalid_argument("best-buddy query on edges of the same piece");
    if (x.piece >= table.piece_count() || y.piece >= table.piece_count())
        throw std::invalid_argument("edge reference out of range");
    return table.is_best_buddy(x.index(), y.index());
}

} // namespace jigsaw
