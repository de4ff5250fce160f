#pragma once

#include <uniqcube/hypercube.hpp>
#include <uniqcube/matrix.hpp>
#include <uniqcube/rational.hpp>
#include <uniqcube/simplex.hpp>
#include <uniqcube/walsh.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace uniqcube {

enum class Space { Linear, Cone };

// U is a set of uniqueness when the only admissible function vanishing on
// all of U is the zero function. A NotUnique verdict always carries a
// counterexample witness; a Unique verdict never does.
struct UniquenessVerdict {
    bool unique = false;
    std::optional<CoeffVector> witness;
};

struct Problem {
    int k = 0;
    int q = 0;
    std::vector<Vertex> points;
    Space space = Space::Cone;
};

namespace detail {

inline void check_problem(int k, int q, const std::vector<Vertex>& points) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("uniqueness: q out of [0, k]");
    for (const Vertex& v : points)
        if (v.k != k) throw std::invalid_argument("uniqueness: point dimension mismatch");
}

inline std::vector<Vertex> sorted_unique(std::vector<Vertex> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

/// Exact revalidation of a cone counterexample: nonnegative everywhere,
/// zero on U, not identically zero.
inline void check_cone_witness(const CoeffVector& f, int k, const std::vector<Vertex>& points) {
    bool positive_somewhere = false;
    for (const Vertex& x : enumerate_vertices(k)) {
        Rational v = eval_function(f, x);
        if (v < 0) throw std::logic_error("cone witness: negative value");
        if (v > 0) positive_somewhere = true;
    }
    if (!positive_somewhere) throw std::logic_error("cone witness: identically zero");
    for (const Vertex& u : points)
        if (eval_function(f, u) != 0) throw std::logic_error("cone witness: nonzero on U");
}

}  // namespace detail

/// Uniqueness for the full linear span: U separates B^k_q exactly when the
/// restriction matrix has full column rank. Otherwise any kernel element is
/// a nonzero function vanishing on U.
inline UniquenessVerdict is_unique_linear(int k, int q, const std::vector<Vertex>& points) {
    detail::check_problem(k, q, points);
    std::vector<Vertex> u = detail::sorted_unique(points);
    if (u.empty()) {
        CoeffVector one(k, q);
        one.set(0, 1);
        return {false, std::move(one)};
    }
    Mat m = restriction_matrix(k, q, u);
    if (rank(m) == m.cols()) return {true, std::nullopt};
    std::vector<std::vector<Rational>> kernel = kernel_basis(m);
    std::vector<WalshIndex> b = basis(k, q);
    CoeffVector f(k, q);
    for (std::size_t j = 0; j < b.size(); ++j)
        if (kernel.front()[j] != 0) f.set(b[j].mask, kernel.front()[j]);
    for (const Vertex& x : u)
        if (eval_function(f, x) != 0) throw std::logic_error("linear witness: nonzero on U");
    return {false, std::move(f)};
}

/// Uniqueness for the nonnegative cone. Decided by exact feasibility of
///   f(x) >= 0 for all x,  f(u) = 0 for u in U,  coefficient of w_empty = 1;
/// a nonzero nonnegative function vanishing on U exists exactly when some
/// nonnegative function with positive mean does (scale by 1 / mean).
inline UniquenessVerdict is_unique_cone(int k, int q, const std::vector<Vertex>& points) {
    detail::check_problem(k, q, points);
    std::vector<Vertex> u = detail::sorted_unique(points);
    std::vector<WalshIndex> b = basis(k, q);
    const std::size_t dim = b.size();

    LPProblem lp(dim);
    {
        std::vector<Rational> row(dim);
        row[0] = 1;  // basis is degree-sorted, so index 0 is w_empty
        lp.add_eq(std::move(row), 1);
    }
    for (const Vertex& v : u) {
        std::vector<Rational> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = walsh_eval(b[j], v);
        lp.add_eq(std::move(row), 0);
    }
    for (const Vertex& x : enumerate_vertices(k)) {
        std::vector<Rational> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = walsh_eval(b[j], x);
        lp.add_ge(std::move(row), 0);
    }

    LPResult r = lp_feasible(lp);
    if (!r.feasible) return {true, std::nullopt};
    CoeffVector f(k, q);
    for (std::size_t j = 0; j < dim; ++j)
        if (r.witness[j] != 0) f.set(b[j].mask, r.witness[j]);
    detail::check_cone_witness(f, k, u);
    return {false, std::move(f)};
}

inline UniquenessVerdict decide_uniqueness(const Problem& p) {
    return p.space == Space::Linear ? is_unique_linear(p.k, p.q, p.points)
                                    : is_unique_cone(p.k, p.q, p.points);
}

/// True when U is cone-unique but no proper subset is. Any witness for a
/// subset must still vanish on that subset, so dropping points one at a time
/// is a complete minimality check.
inline bool is_minimal_cone(int k, int q, const std::vector<Vertex>& points) {
    std::vector<Vertex> u = detail::sorted_unique(points);
    if (!is_unique_cone(k, q, u).unique) return false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<Vertex> sub;
        sub.reserve(u.size() - 1);
        for (std::size_t j = 0; j < u.size(); ++j)
            if (j != i) sub.push_back(u[j]);
        if (is_unique_cone(k, q, sub).unique) return false;
    }
    return true;
}

/// The maximum likelihood estimate for the degree-q model exists and is
/// unique exactly when the sample support is a cone set of uniqueness.
inline bool mle_exists(int k, int q, const std::vector<Vertex>& sample) {
    if (sample.empty()) throw std::invalid_argument("mle_exists: empty sample");
    return is_unique_cone(k, q, detail::sorted_unique(sample)).unique;
}

}  // namespace uniqcube
