#pragma once

#include <uniqcube/hypercube.hpp>
#include <uniqcube/matrix.hpp>
#include <uniqcube/rational.hpp>

#include <bit>
#include <map>
#include <stdexcept>
#include <vector>

namespace uniqcube {

// Walsh character indexed by a coordinate subset L: w_L(x) = prod_{i in L} x_i.
// The empty set gives the constant function 1.
struct WalshIndex {
    Mask mask = 0;
    int k = 0;

    WalshIndex() = default;
    WalshIndex(Mask mask_, int k_) : mask(mask_), k(k_) {
        check_dimension(k_);
        if ((mask_ & ~all_ones_mask(k_)) != 0)
            throw std::invalid_argument("WalshIndex: mask exceeds dimension");
    }

    int degree() const { return std::popcount(mask); }

    friend bool operator==(const WalshIndex&, const WalshIndex&) = default;
};

/// w_L(x) in {-1,+1}. A coordinate contributes -1 exactly when it lies in L
/// and the vertex has -1 there.
inline int walsh_eval(const WalshIndex& idx, const Vertex& x) {
    if (idx.k != x.k) throw std::invalid_argument("walsh_eval: dimension mismatch");
    return std::popcount(idx.mask & ~x.bits) % 2 == 0 ? +1 : -1;
}

/// Basis of the degree-<=q span, ordered by (degree, mask ascending).
inline std::vector<WalshIndex> basis(int k, int q) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("basis: q out of [0, k]");
    std::vector<WalshIndex> out;
    out.emplace_back(0, k);
    for (int d = 1; d <= q; ++d) {
        Mask mask = all_ones_mask(d);
        const Mask top = all_ones_mask(k);
        for (;;) {
            out.emplace_back(mask, k);
            Mask c = mask & -mask;
            Mask r = mask + c;
            Mask next = (((r ^ mask) >> 2) / c) | r;
            if (next > top) break;
            mask = next;
        }
    }
    return out;
}

/// dim B^k_q = sum_{d<=q} C(k, d).
inline std::size_t walsh_dimension(int k, int q) {
    Integer s = 0;
    for (int d = 0; d <= q; ++d) s += binomial(k, d);
    return s.convert_to<std::size_t>();
}

// Element of B^k_q as a sparse rational coefficient vector over Walsh
// characters of degree at most q.
struct CoeffVector {
    int k = 0;
    int q = 0;
    std::map<Mask, Rational> coeffs;

    CoeffVector() = default;
    CoeffVector(int k_, int q_) : k(k_), q(q_) {
        check_dimension(k_);
        if (q_ < 0 || q_ > k_) throw std::invalid_argument("CoeffVector: q out of [0, k]");
    }

    void set(Mask mask, Rational value) {
        if ((mask & ~all_ones_mask(k)) != 0)
            throw std::invalid_argument("CoeffVector: mask exceeds dimension");
        if (std::popcount(mask) > q)
            throw std::invalid_argument("CoeffVector: degree exceeds q");
        if (value == 0) coeffs.erase(mask);
        else coeffs[mask] = std::move(value);
    }

    Rational get(Mask mask) const {
        auto it = coeffs.find(mask);
        return it == coeffs.end() ? Rational(0) : it->second;
    }

    bool is_zero() const { return coeffs.empty(); }

    /// Adds s * g; degrees must already fit (max of the two q values kept).
    void add_scaled(const CoeffVector& g, const Rational& s) {
        if (g.k != k) throw std::invalid_argument("CoeffVector: dimension mismatch");
        if (g.q > q) q = g.q;
        if (s == 0) return;
        for (const auto& [mask, c] : g.coeffs) {
            Rational v = get(mask) + s * c;
            if (v == 0) coeffs.erase(mask);
            else coeffs[mask] = std::move(v);
        }
    }
};

/// Pointwise value of f at x, exactly.
inline Rational eval_function(const CoeffVector& f, const Vertex& x) {
    if (f.k != x.k) throw std::invalid_argument("eval_function: dimension mismatch");
    Rational s = 0;
    for (const auto& [mask, c] : f.coeffs) {
        if (std::popcount(mask & ~x.bits) % 2 == 0) s += c;
        else s -= c;
    }
    return s;
}

/// |U| x dim matrix of basis values on U, rows in the order of U, columns in
/// basis order. A function vanishes on U exactly when its coefficient vector
/// lies in the kernel.
inline Mat restriction_matrix(int k, int q, const std::vector<Vertex>& points) {
    if (points.empty()) throw std::invalid_argument("restriction_matrix: empty point list");
    std::vector<WalshIndex> b = basis(k, q);
    Mat m(points.size(), b.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].k != k) throw std::invalid_argument("restriction_matrix: dimension mismatch");
        for (std::size_t j = 0; j < b.size(); ++j)
            m(i, j) = walsh_eval(b[j], points[i]);
    }
    return m;
}

/// Indicator of a codimension-q subcube expanded in the Walsh basis:
/// 1_S = 2^-q prod_{i fixed} (1 + s_i x_i), so the coefficient of w_L for
/// L inside the fixed set is (-1)^{|L ∩ minus|} / 2^q, where minus is the
/// set of coordinates pinned at -1.
inline CoeffVector subcube_indicator(const Subcube& s) {
    CoeffVector f(s.k, s.q());
    const Mask fixed = s.fixed_mask;
    const Mask minus = fixed & ~s.sign_mask;
    Rational scale = Rational(1) / Rational(Integer(1) << s.q());
    Mask sub = 0;
    for (;;) {
        Rational c = std::popcount(sub & minus) % 2 == 0 ? scale : -scale;
        f.coeffs[sub] = std::move(c);
        if (sub == fixed) break;
        sub = (sub - fixed) & fixed;  // next submask of fixed, ascending
    }
    return f;
}

// Class sums of a weighting of codimension-q subcubes: entry i adds up the
// weights of all subcubes with exactly i coordinates pinned at +1.
struct TVector {
    int k = 0;
    int q = 0;
    std::vector<Rational> t;  // size q + 1
};

inline TVector t_vector(const std::map<Subcube, Rational>& weights) {
    if (weights.empty()) throw std::invalid_argument("t_vector: empty weighting");
    const Subcube& first = weights.begin()->first;
    TVector out{first.k, first.q(), std::vector<Rational>(static_cast<std::size_t>(first.q()) + 1)};
    for (const auto& [s, w] : weights) {
        if (s.k != out.k || s.q() != out.q)
            throw std::invalid_argument("t_vector: mixed dimensions");
        out.t[static_cast<std::size_t>(subcube_class(s))] += w;
    }
    return out;
}

/// Row of level sums: entry i is |W_j ∩ S| = C(k-q, j-i) for any class-i
/// subcube S, so sum_{x in W_j} f(x) = row · T for class-uniform weightings.
inline std::vector<Integer> level_sum_row(int k, int q, int j) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("level_sum_row: q out of [0, k]");
    if (j < 0 || j > k) throw std::invalid_argument("level_sum_row: level out of [0, k]");
    std::vector<Integer> row(static_cast<std::size_t>(q) + 1);
    for (int i = 0; i <= q; ++i) row[static_cast<std::size_t>(i)] = binomial(k - q, j - i);
    return row;
}

}  // namespace uniqcube
