#pragma once

#include <uniqcube/rational.hpp>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniqcube {

using Mask = std::uint32_t;

/// Hard cap on the cube dimension. Mutable so callers can lower it;
/// raising it past 24 is rejected by check_dimension.
inline int& dimension_cap() {
    static int cap = 24;
    return cap;
}

inline void check_dimension(int k) {
    if (k < 1 || k > dimension_cap() || k > 24)
        throw std::out_of_range("dimension k out of range [1, cap]");
}

inline Mask all_ones_mask(int k) { return (Mask{1} << k) - 1; }

// A point of {-1,+1}^k. Bit i of `bits` is set exactly when coordinate i+1
// equals +1, so popcount(bits) is the number of +1 coordinates.
struct Vertex {
    Mask bits = 0;
    int k = 0;

    Vertex() = default;
    Vertex(Mask bits_, int k_) : bits(bits_), k(k_) {
        check_dimension(k_);
        if ((bits_ & ~all_ones_mask(k_)) != 0)
            throw std::invalid_argument("Vertex: bits exceed dimension");
    }

    /// Number of +1 coordinates.
    int level() const { return std::popcount(bits); }

    /// Coordinate i (0-based), returned as -1 or +1.
    int coordinate(int i) const {
        if (i < 0 || i >= k) throw std::out_of_range("Vertex::coordinate");
        return (bits >> i) & 1 ? +1 : -1;
    }

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
        if (auto c = a.k <=> b.k; c != 0) return c;
        return a.bits <=> b.bits;
    }
};

/// Text form over {+,-}, coordinate 1 leftmost: "-++" is (-1,+1,+1).
inline std::string to_string(const Vertex& v) {
    std::string s(static_cast<std::size_t>(v.k), '-');
    for (int i = 0; i < v.k; ++i)
        if ((v.bits >> i) & 1) s[static_cast<std::size_t>(i)] = '+';
    return s;
}

inline Vertex parse_vertex(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("parse_vertex: empty string");
    Mask bits = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+') bits |= Mask{1} << i;
        else if (s[i] != '-') throw std::invalid_argument("parse_vertex: expected '+' or '-'");
    }
    return Vertex(bits, static_cast<int>(s.size()));
}

inline int hamming(const Vertex& a, const Vertex& b) {
    if (a.k != b.k) throw std::invalid_argument("hamming: dimension mismatch");
    return std::popcount(a.bits ^ b.bits);
}

/// All 2^k vertices, ascending by bits.
inline std::vector<Vertex> enumerate_vertices(int k) {
    check_dimension(k);
    std::vector<Vertex> out;
    out.reserve(std::size_t{1} << k);
    for (Mask m = 0; m <= all_ones_mask(k); ++m) out.emplace_back(m, k);
    return out;
}

// Levels are Hamming distances from a base vertex (default: all -1, for
// which the level of x is its number of +1 coordinates).
struct LevelSpec {
    int k = 0;
    std::set<int> levels;
    Vertex base;

    LevelSpec(int k_, std::set<int> levels_)
        : LevelSpec(k_, std::move(levels_), Vertex(0, k_)) {}

    LevelSpec(int k_, std::set<int> levels_, Vertex base_)
        : k(k_), levels(std::move(levels_)), base(base_) {
        check_dimension(k);
        if (levels.empty()) throw std::invalid_argument("LevelSpec: empty level set");
        for (int d : levels)
            if (d < 0 || d > k) throw std::invalid_argument("LevelSpec: level out of [0, k]");
        if (base.k != k) throw std::invalid_argument("LevelSpec: base dimension mismatch");
    }
};

/// { y : hamming(base, y) in levels }, ascending by bits.
inline std::vector<Vertex> level_set(const LevelSpec& spec) {
    std::vector<Vertex> out;
    for (Mask m = 0; m <= all_ones_mask(spec.k); ++m)
        if (spec.levels.count(std::popcount(m ^ spec.base.bits)))
            out.emplace_back(m, spec.k);
    return out;
}

inline std::vector<Vertex> level_set(int k, const std::set<int>& levels) {
    return level_set(LevelSpec(k, levels));
}

// Subcube of codimension q: coordinates in fixed_mask are pinned, the pinned
// value is +1 exactly on sign_mask. Free coordinates range over {-1,+1}.
struct Subcube {
    Mask fixed_mask = 0;
    Mask sign_mask = 0;
    int k = 0;

    Subcube() = default;
    Subcube(Mask fixed, Mask sign, int k_) : fixed_mask(fixed), sign_mask(sign), k(k_) {
        check_dimension(k_);
        if ((fixed & ~all_ones_mask(k_)) != 0)
            throw std::invalid_argument("Subcube: fixed_mask exceeds dimension");
        if ((sign & ~fixed) != 0)
            throw std::invalid_argument("Subcube: sign_mask not contained in fixed_mask");
    }

    /// Number of fixed coordinates.
    int q() const { return std::popcount(fixed_mask); }

    friend bool operator==(const Subcube&, const Subcube&) = default;
    friend std::strong_ordering operator<=>(const Subcube& a, const Subcube& b) {
        if (auto c = a.k <=> b.k; c != 0) return c;
        if (auto c = a.fixed_mask <=> b.fixed_mask; c != 0) return c;
        return a.sign_mask <=> b.sign_mask;
    }
};

/// Number of fixed coordinates pinned to +1.
inline int subcube_class(const Subcube& s) { return std::popcount(s.sign_mask); }

inline bool subcube_contains(const Subcube& s, const Vertex& v) {
    if (s.k != v.k) throw std::invalid_argument("subcube_contains: dimension mismatch");
    return (v.bits & s.fixed_mask) == s.sign_mask;
}

/// Text form over {+,-,*}, coordinate 1 leftmost; '*' marks a free coordinate.
inline std::string to_string(const Subcube& s) {
    std::string out(static_cast<std::size_t>(s.k), '*');
    for (int i = 0; i < s.k; ++i)
        if ((s.fixed_mask >> i) & 1)
            out[static_cast<std::size_t>(i)] = ((s.sign_mask >> i) & 1) ? '+' : '-';
    return out;
}

inline Subcube parse_subcube(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("parse_subcube: empty string");
    Mask fixed = 0, sign = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        switch (s[i]) {
            case '+': fixed |= Mask{1} << i; sign |= Mask{1} << i; break;
            case '-': fixed |= Mask{1} << i; break;
            case '*': break;
            default: throw std::invalid_argument("parse_subcube: expected '+', '-' or '*'");
        }
    }
    return Subcube(fixed, sign, static_cast<int>(s.size()));
}

/// All codimension-q subcubes, ordered by fixed_mask ascending then
/// sign_mask ascending.
inline std::vector<Subcube> enumerate_subcubes(int k, int q) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("enumerate_subcubes: q out of [0, k]");
    std::vector<Subcube> out;
    const Mask top = all_ones_mask(k);
    Mask fixed = q == 0 ? 0 : all_ones_mask(q);
    for (;;) {
        // submasks of `fixed` in ascending numeric order
        int pos[24];
        int t = 0;
        for (int i = 0; i < k; ++i)
            if ((fixed >> i) & 1) pos[t++] = i;
        for (Mask u = 0; u < (Mask{1} << t); ++u) {
            Mask sign = 0;
            for (int j = 0; j < t; ++j)
                if ((u >> j) & 1) sign |= Mask{1} << pos[j];
            out.emplace_back(fixed, sign, k);
        }
        if (q == 0) break;
        // Gosper's hack: next mask with the same popcount
        Mask c = fixed & -fixed;
        Mask r = fixed + c;
        Mask next = (((r ^ fixed) >> 2) / c) | r;
        if (next > top) break;
        fixed = next;
    }
    return out;
}

/// Vertices contained in a subcube, ascending by bits.
inline std::vector<Vertex> subcube_vertices(const Subcube& s) {
    std::vector<Vertex> out;
    Mask free_mask = all_ones_mask(s.k) & ~s.fixed_mask;
    // iterate submasks of free_mask ascending
    int pos[24];
    int t = 0;
    for (int i = 0; i < s.k; ++i)
        if ((free_mask >> i) & 1) pos[t++] = i;
    for (Mask u = 0; u < (Mask{1} << t); ++u) {
        Mask bits = s.sign_mask;
        for (int j = 0; j < t; ++j)
            if ((u >> j) & 1) bits |= Mask{1} << pos[j];
        out.emplace_back(bits, s.k);
    }
    return out;
}

/// |W_j ∩ S| for any codimension-q subcube S of class i: C(k-q, j-i).
/// A class-i subcube has i coordinates pinned at +1, so a member at level j
/// needs j-i of the k-q free coordinates set to +1.
inline Integer level_subcube_count(int k, int q, int i, int j) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("level_subcube_count: q out of [0, k]");
    if (i < 0 || i > q) throw std::invalid_argument("level_subcube_count: class out of [0, q]");
    if (j < 0 || j > k) throw std::invalid_argument("level_subcube_count: level out of [0, k]");
    return binomial(k - q, j - i);
}

// Signed permutation of the cube: first flip the coordinates in `flips`,
// then send coordinate i to perm[i]. These 2^k k! maps are exactly the
// isometries of the Hamming cube fixing no extra structure.
struct SignedPermutation {
    std::vector<int> perm;
    Mask flips = 0;

    Mask apply_bits(Mask bits) const {
        Mask x = bits ^ flips;
        Mask y = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            if ((x >> i) & 1) y |= Mask{1} << perm[i];
        return y;
    }

    Vertex apply(const Vertex& v) const {
        if (static_cast<int>(perm.size()) != v.k)
            throw std::invalid_argument("SignedPermutation: dimension mismatch");
        return Vertex(apply_bits(v.bits), v.k);
    }
};

inline SignedPermutation identity_permutation(int k) {
    SignedPermutation g;
    g.perm.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) g.perm[static_cast<std::size_t>(i)] = i;
    g.flips = 0;
    return g;
}

namespace detail {

/// Canonical representative of a sorted mask set under signed permutations:
/// the lexicographically least image (compared as sorted sequences).
/// Returns the canonical masks; if out_transform is nonnull, stores a map
/// achieving it.
inline std::vector<Mask> canonical_masks(const std::vector<Mask>& sorted_masks, int k,
                                         SignedPermutation* out_transform = nullptr) {
    if (out_transform) *out_transform = identity_permutation(k);
    if (sorted_masks.empty()) return {};
    std::vector<Mask> best = sorted_masks;
    bool have_best = false;
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<Mask> image(sorted_masks.size());
    do {
        for (Mask flips = 0; flips <= all_ones_mask(k); ++flips) {
            for (std::size_t t = 0; t < sorted_masks.size(); ++t) {
                Mask x = sorted_masks[t] ^ flips;
                Mask y = 0;
                for (int i = 0; i < k; ++i)
                    if ((x >> i) & 1) y |= Mask{1} << perm[static_cast<std::size_t>(i)];
                image[t] = y;
            }
            std::sort(image.begin(), image.end());
            if (!have_best || image < best) {
                best = image;
                have_best = true;
                if (out_transform) {
                    out_transform->perm = perm;
                    out_transform->flips = flips;
                }
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace detail

struct CanonicalSet {
    std::vector<Vertex> vertices;
    SignedPermutation transform;
};

/// Canonical form of a vertex set under coordinate permutations and sign
/// flips. Idempotent; the transform maps the input onto the canonical set.
inline CanonicalSet canonical_form(const std::vector<Vertex>& points) {
    CanonicalSet out;
    if (points.empty()) {
        out.transform = identity_permutation(1);
        return out;
    }
    int k = points.front().k;
    std::vector<Mask> masks;
    masks.reserve(points.size());
    for (const Vertex& v : points) {
        if (v.k != k) throw std::invalid_argument("canonical_form: mixed dimensions");
        masks.push_back(v.bits);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::vector<Mask> canon = detail::canonical_masks(masks, k, &out.transform);
    out.vertices.reserve(canon.size());
    for (Mask m : canon) out.vertices.emplace_back(m, k);
    return out;
}

}  // namespace uniqcube
