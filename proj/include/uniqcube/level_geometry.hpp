#pragma once

#include <uniqcube/hypercube.hpp>
#include <uniqcube/parallel.hpp>
#include <uniqcube/rational.hpp>
#include <uniqcube/simplex.hpp>
#include <uniqcube/uniqueness.hpp>
#include <uniqcube/walsh.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uniqcube {

// ---------------------------------------------------------------------------
// Uniqueness of unions of levels
// ---------------------------------------------------------------------------

/// Closed-form answer for q = 2: the union of levels W_D is a cone set of
/// uniqueness exactly when D contains two levels i, j with 2 <= |i-j| <= k-1.
inline bool characterize_level_set(int k, const std::set<int>& D) {
    check_dimension(k);
    if (k < 2) throw std::invalid_argument("characterize_level_set: k < 2");
    for (int d : D)
        if (d < 0 || d > k) throw std::invalid_argument("characterize_level_set: level out of [0, k]");
    for (int i : D)
        for (int j : D) {
            int gap = j - i;
            if (gap >= 2 && gap <= k - 1) return true;
        }
    return false;
}

/// Class sums T of a counterexample for W_D, or nullopt when none exists.
/// Every f in B^k_q has well defined class sums T with
/// sum_{x in W_j} f = level_sum_row(k,q,j) . T, and conversely any T with all
/// level sums nonnegative lifts to a nonnegative f constant on levels. So
/// W_D fails to be a cone uniqueness set exactly when
///   row_j . T = 0 (j in D),  row_j . T >= 0 (all j),  sum T = 1
/// is feasible.
inline std::optional<std::vector<Rational>> solve_level_t_system(int k, int q,
                                                                 const std::set<int>& D) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("solve_level_t_system: q out of [0, k]");
    for (int d : D)
        if (d < 0 || d > k) throw std::invalid_argument("solve_level_t_system: level out of [0, k]");
    const std::size_t n = static_cast<std::size_t>(q) + 1;
    LPProblem lp(n);
    {
        std::vector<Rational> ones(n, Rational(1));
        lp.add_eq(std::move(ones), 1);
    }
    for (int j = 0; j <= k; ++j) {
        std::vector<Integer> row = level_sum_row(k, q, j);
        std::vector<Rational> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = Rational(row[i]);
        if (D.count(j)) lp.add_eq(std::move(r), 0);
        else lp.add_ge(std::move(r), 0);
    }
    LPResult res = lp_feasible(lp);
    if (!res.feasible) return std::nullopt;
    return res.witness;
}

/// Lift class sums to a function: weight every class-i subcube by
/// T_i / |class i|. The result is constant on levels with value
/// (row_j . T) / |W_j| on W_j.
inline CoeffVector lift_t_vector(int k, int q, const std::vector<Rational>& t) {
    if (t.size() != static_cast<std::size_t>(q) + 1)
        throw std::invalid_argument("lift_t_vector: wrong length");
    std::vector<Rational> weight(t.size());
    for (int i = 0; i <= q; ++i) {
        Integer class_size = binomial(k, q) * binomial(q, i);
        weight[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] / Rational(class_size);
    }
    CoeffVector f(k, q);
    for (const Subcube& s : enumerate_subcubes(k, q))
        f.add_scaled(subcube_indicator(s), weight[static_cast<std::size_t>(subcube_class(s))]);
    return f;
}

/// Cone uniqueness of W_D decided in the (q+1)-dimensional class-sum space,
/// with the counterexample lifted back to B^k_q and revalidated pointwise.
inline UniquenessVerdict level_cone_unique(int k, int q, const std::set<int>& D) {
    std::optional<std::vector<Rational>> t = solve_level_t_system(k, q, D);
    if (!t) return {true, std::nullopt};
    CoeffVector f = lift_t_vector(k, q, *t);
    std::vector<Vertex> w = D.empty() ? std::vector<Vertex>{} : level_set(k, D);
    detail::check_cone_witness(f, k, w);
    return {false, std::move(f)};
}

// ---------------------------------------------------------------------------
// The planar curve attached to q = 2
// ---------------------------------------------------------------------------

struct PolygonPoint {
    int j = 0;
    Rational x, y;
};

/// Normalized first two coordinates of (C(k-2,j), C(k-2,j-1), C(k-2,j-2)).
/// The level-sum functional of level j is positively proportional to
/// T_0 x_j + T_1 y_j + T_2 (1 - x_j - y_j). Pure binomial geometry, so the
/// dimension cap for cube enumeration does not apply here.
inline std::vector<PolygonPoint> polygon_points(int k) {
    if (k < 2) throw std::invalid_argument("polygon_points: k < 2");
    std::vector<PolygonPoint> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        Integer a = binomial(k - 2, j);
        Integer b = binomial(k - 2, j - 1);
        Integer c = binomial(k - 2, j - 2);
        Rational s = Rational(a + b + c);
        out.push_back({j, Rational(a) / s, Rational(b) / s});
    }
    return out;
}

/// Value of the level-j functional at class sums t = (T_0, T_1, T_2),
/// normalized by the total weight of the level row. Zero exactly when the
/// level sum of the lifted function is zero.
inline Rational psi_value(int k, int j, const std::vector<Rational>& t) {
    if (t.size() != 3) throw std::invalid_argument("psi_value: expected three class sums");
    std::vector<PolygonPoint> p = polygon_points(k);
    if (j < 0 || j > k) throw std::invalid_argument("psi_value: level out of [0, k]");
    const PolygonPoint& q = p[static_cast<std::size_t>(j)];
    return q.x * t[0] + q.y * t[1] + (Rational(1) - q.x - q.y) * t[2];
}

namespace detail {

inline Rational cross(const PolygonPoint& o, const PolygonPoint& a, const PolygonPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Strict convex hull (collinear points are not hull vertices), counter-
/// clockwise, starting from the lexicographically least point.
inline std::vector<PolygonPoint> convex_hull(std::vector<PolygonPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const PolygonPoint& a, const PolygonPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<PolygonPoint> h(2 * n);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (m >= 2 && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
        h[m++] = pts[i];
    }
    std::size_t lower = m + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (m >= lower && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
        h[m++] = pts[i];
    }
    h.resize(m - 1);
    return h;
}

}  // namespace detail

// Shared report for the level-set suites: batch per-D verdicts on one side,
// polygon structure booleans on the other. Each producer fills its half.
struct LevelVerdictReport {
    int k = 0;
    int q = 2;
    // batch agreement over level unions; masks have bit j set for level j
    long long total_sets = 0;
    long long unique_count = 0;
    std::vector<char> unique_by_mask;
    std::vector<Mask> disagreements;
    // polygon structure
    bool y_symmetric = false;       // y_j = y_{k-j}
    bool slopes_increase = false;   // slope of P_j is j/(k-j-1), strictly increasing
    bool unimodal = false;          // x strictly falls to 0; y strictly rises then falls
    bool convex_position = false;   // P_0..P_k are exactly the hull, in order
    bool polygon_ok() const { return y_symmetric && slopes_increase && unimodal && convex_position; }
    bool agreement_ok() const { return disagreements.empty(); }
};

inline LevelVerdictReport verify_polygon_properties(int k) {
    if (k < 3) throw std::invalid_argument("verify_polygon_properties: k < 3");
    std::vector<PolygonPoint> p = polygon_points(k);
    LevelVerdictReport rep;
    rep.k = k;

    rep.y_symmetric = true;
    for (int j = 0; j <= k; ++j)
        if (p[static_cast<std::size_t>(j)].y != p[static_cast<std::size_t>(k - j)].y)
            rep.y_symmetric = false;

    // Slopes of the rays to P_1 .. P_{k-2}; P_0 lies on the x axis and
    // P_{k-1}, P_k on the y axis.
    rep.slopes_increase = p[0].y == 0 && p[static_cast<std::size_t>(k) - 1].x == 0 &&
                          p[static_cast<std::size_t>(k)].x == 0;
    Rational prev_slope = 0;
    for (int j = 1; j <= k - 2; ++j) {
        const PolygonPoint& q = p[static_cast<std::size_t>(j)];
        if (q.x <= 0) { rep.slopes_increase = false; break; }
        Rational slope = q.y / q.x;
        if (slope != Rational(j) / Rational(k - j - 1)) rep.slopes_increase = false;
        if (j > 1 && slope <= prev_slope) rep.slopes_increase = false;
        prev_slope = slope;
    }

    // x decreases strictly while positive, then stays zero. y increases
    // strictly up to the middle and decreases strictly after it; for odd k
    // the two middle values tie.
    rep.unimodal = true;
    for (int j = 0; j < k; ++j) {
        const Rational& a = p[static_cast<std::size_t>(j)].x;
        const Rational& b = p[static_cast<std::size_t>(j) + 1].x;
        if (a > 0 ? !(b < a) : b != 0) rep.unimodal = false;
    }
    int mid = k / 2;
    for (int j = 0; j < k; ++j) {
        const Rational& a = p[static_cast<std::size_t>(j)].y;
        const Rational& b = p[static_cast<std::size_t>(j) + 1].y;
        if (j + 1 <= mid ? !(a < b) : (j >= k - mid ? !(a > b) : a != b))
            rep.unimodal = false;
    }

    // Convex position: the k+1 points must be pairwise distinct and their
    // strict hull must visit them in exactly the order P_0, ..., P_k.
    std::vector<PolygonPoint> hull = detail::convex_hull(p);
    rep.convex_position = hull.size() == p.size();
    if (rep.convex_position) {
        std::size_t start = 0;
        while (start < hull.size() && hull[start].j != 0) ++start;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            if (hull[(start + i) % hull.size()].j != static_cast<int>(i))
                rep.convex_position = false;
        }
    }
    return rep;
}

enum class SegmentIntersection { None, Proper, Improper };

/// Exact intersection test for closed segments a and b. Proper means a
/// single interior crossing; touching at an endpoint or overlapping
/// collinearly is Improper. Degenerate segments are rejected.
inline SegmentIntersection segment_intersection(const PolygonPoint& a1, const PolygonPoint& a2,
                                                const PolygonPoint& b1, const PolygonPoint& b2) {
    if ((a1.x == a2.x && a1.y == a2.y) || (b1.x == b2.x && b1.y == b2.y))
        throw std::invalid_argument("segment_intersection: degenerate segment");
    auto sgn = [](const Rational& v) { return v < 0 ? -1 : v > 0 ? 1 : 0; };
    int o1 = sgn(detail::cross(a1, a2, b1));
    int o2 = sgn(detail::cross(a1, a2, b2));
    int o3 = sgn(detail::cross(b1, b2, a1));
    int o4 = sgn(detail::cross(b1, b2, a2));
    if (o1 * o2 < 0 && o3 * o4 < 0) return SegmentIntersection::Proper;
    auto on_segment = [](const PolygonPoint& p, const PolygonPoint& u, const PolygonPoint& v) {
        return std::min(u.x, v.x) <= p.x && p.x <= std::max(u.x, v.x) &&
               std::min(u.y, v.y) <= p.y && p.y <= std::max(u.y, v.y);
    };
    if (o1 == 0 && on_segment(b1, a1, a2)) return SegmentIntersection::Improper;
    if (o2 == 0 && on_segment(b2, a1, a2)) return SegmentIntersection::Improper;
    if (o3 == 0 && on_segment(a1, b1, b2)) return SegmentIntersection::Improper;
    if (o4 == 0 && on_segment(a2, b1, b2)) return SegmentIntersection::Improper;
    return SegmentIntersection::None;
}

inline bool segments_intersect(const PolygonPoint& a1, const PolygonPoint& a2,
                               const PolygonPoint& b1, const PolygonPoint& b2) {
    return segment_intersection(a1, a2, b1, b2) != SegmentIntersection::None;
}

// ---------------------------------------------------------------------------
// Named constructions
// ---------------------------------------------------------------------------

/// Levels of the named construction. "blofeld" takes the floor(q/2)+1 lowest
/// and highest levels; the others ignore q.
inline std::set<int> construction_levels(int k, int q, std::string_view name) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("construction_levels: q out of [0, k]");
    if (name == "full") {
        std::set<int> all;
        for (int j = 0; j <= k; ++j) all.insert(j);
        return all;
    }
    if (name == "antipodal") return {0, k};
    if (name == "alternating") {
        std::set<int> evens;
        for (int j = 0; j <= k; j += 2) evens.insert(j);
        return evens;
    }
    if (name == "w1k") return {1, k};
    if (name == "w1k1") {
        if (k < 2) throw std::invalid_argument("construction_levels: w1k1 needs k >= 2");
        return {1, k - 1};
    }
    if (name == "blofeld") {
        std::set<int> levels;
        for (int j = 0; j <= q / 2; ++j) {
            levels.insert(j);
            levels.insert(k - j);
        }
        return levels;
    }
    throw std::invalid_argument("construction_levels: unknown name \"" + std::string(name) + "\"");
}

inline std::vector<Vertex> known_construction(int k, int q, std::string_view name) {
    return level_set(k, construction_levels(k, q, name));
}

// ---------------------------------------------------------------------------
// Batch agreement check over all level unions
// ---------------------------------------------------------------------------

/// Runs the closed-form q = 2 characterization against the class-sum LP for
/// every D inside {0..k} (the empty union included); with_full_lp
/// additionally runs the full cone LP on W_D. Any disagreement is recorded.
inline LevelVerdictReport level_theorem_check(int k, bool with_full_lp, int threads) {
    check_dimension(k);
    const std::size_t count = std::size_t{1} << (k + 1);
    LevelVerdictReport rep;
    rep.k = k;
    rep.total_sets = static_cast<long long>(count);
    rep.unique_by_mask.assign(count, 0);
    std::vector<char> agree(count, 1);
    detail::parallel_for(count, threads, [&](std::size_t idx) {
        Mask dmask = static_cast<Mask>(idx);
        std::set<int> D;
        for (int j = 0; j <= k; ++j)
            if ((dmask >> j) & 1) D.insert(j);
        bool pred = characterize_level_set(k, D);
        UniquenessVerdict level = level_cone_unique(k, 2, D);
        bool match = pred == level.unique;
        if (match && with_full_lp) {
            std::vector<Vertex> w = D.empty() ? std::vector<Vertex>{} : level_set(k, D);
            UniquenessVerdict full = is_unique_cone(k, 2, w);
            match = full.unique == pred;
        }
        rep.unique_by_mask[idx] = pred;
        agree[idx] = match;
    });
    for (std::size_t m = 0; m < count; ++m) {
        if (rep.unique_by_mask[m]) ++rep.unique_count;
        if (!agree[m]) rep.disagreements.push_back(static_cast<Mask>(m));
    }
    return rep;
}

}  // namespace uniqcube
