#pragma once

#include <uniqcube/hypercube.hpp>
#include <uniqcube/level_geometry.hpp>
#include <uniqcube/parallel.hpp>
#include <uniqcube/rational.hpp>
#include <uniqcube/uniqueness.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uniqcube {

struct SearchBudget {
    int max_k_u = 4;                 // largest k the subset scan will attempt
    int max_k_g = 6;                 // largest k the transversal search will attempt
    long long max_candidates = -1;   // cap on uniqueness-tested candidates, -1 unlimited
    long long max_nodes = 20'000'000;  // branch-and-bound node cap, -1 unlimited
    int threads = 0;                 // 0 = UNIQCUBE_THREADS or hardware
};

enum class Method { Exhaustive, Formula, Bound, Unknown };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Exhaustive: return "exhaustive";
        case Method::Formula: return "formula";
        case Method::Bound: return "bound";
        default: return "unknown";
    }
}

// Result of an extremal quantity computation. When the search finishes,
// value is exact and the certificate achieves it; when a budget stops it,
// method is Unknown, value is -1 and [lower, upper] brackets the truth.
struct ExtremalResult {
    int k = 0;
    int q = 0;
    char quantity = 'u';
    Method method = Method::Unknown;
    long long value = -1;
    std::vector<Vertex> certificate;
    long long lower = 0;
    long long upper = -1;
};

struct BoundSummary {
    int k = 0;
    int q = 0;
    long long lower = 0;
    long long upper = 0;
    std::vector<std::string> sources;
};

/// Smallest r with C(r-1, floor(k/2)-1) >= k, the closed form quoted for
/// g(k, 2). For k in {2, 3} the inner index is 0, the binomial is constantly
/// 1 and no r works: Undefined (nullopt). Small-k brute force is the
/// authority where the two disagree (see g_exact).
inline std::optional<long long> kleitman_spencer_g2(int k) {
    if (k < 2) throw std::invalid_argument("kleitman_spencer_g2: k < 2");
    const long long m = k / 2 - 1;
    if (m <= 0) return std::nullopt;
    for (long long r = 1;; ++r) {
        if (binomial(r - 1, m) >= k) return r;
    }
}

namespace detail {

/// Point set of a subcube as a bitmap over the 2^k vertices. Only valid for
/// k <= 6, which covers every search budget this module accepts.
inline std::uint64_t subcube_bitmap(const Subcube& s) {
    std::uint64_t out = 0;
    for (const Vertex& v : subcube_vertices(s)) out |= std::uint64_t{1} << v.bits;
    return out;
}

struct TransversalSearch {
    int k = 0;
    std::vector<std::uint64_t> cubes;
    long long best = 0;
    std::uint64_t best_set = 0;
    long long nodes = 0;
    long long max_nodes = -1;
    bool exceeded = false;

    // Greedy cover: repeatedly take the vertex meeting the most uncovered
    // subcubes (smallest index on ties). Always succeeds, giving the
    // initial upper bound.
    std::uint64_t greedy() const {
        std::uint64_t chosen = 0;
        std::vector<std::uint64_t> uncovered = cubes;
        while (!uncovered.empty()) {
            int best_v = 0;
            std::size_t best_hits = 0;
            for (int v = 0; v < (1 << k); ++v) {
                std::uint64_t bit = std::uint64_t{1} << v;
                std::size_t hits = 0;
                for (std::uint64_t c : uncovered)
                    if (c & bit) ++hits;
                if (hits > best_hits) {
                    best_hits = hits;
                    best_v = v;
                }
            }
            chosen |= std::uint64_t{1} << best_v;
            std::erase_if(uncovered, [&](std::uint64_t c) { return (c & chosen) != 0; });
        }
        return chosen;
    }

    /// Count of pairwise point-disjoint uncovered subcubes: each needs its
    /// own new vertex, so chosen + count is a valid lower bound.
    long long disjoint_bound(const std::vector<std::uint64_t>& uncovered) const {
        std::uint64_t taken = 0;
        long long count = 0;
        for (std::uint64_t c : uncovered) {
            if (c & taken) continue;
            taken |= c;
            ++count;
        }
        return count;
    }

    void run(std::uint64_t chosen, long long count, const std::vector<std::uint64_t>& uncovered) {
        if (exceeded) return;
        if (max_nodes >= 0 && ++nodes > max_nodes) {
            exceeded = true;
            return;
        }
        if (uncovered.empty()) {
            if (count < best) {
                best = count;
                best_set = chosen;
            }
            return;
        }
        if (count + disjoint_bound(uncovered) >= best) return;
        std::uint64_t branch_cube = uncovered.front();
        for (int v = 0; v < (1 << k); ++v) {
            if (!((branch_cube >> v) & 1)) continue;
            std::uint64_t next = chosen | (std::uint64_t{1} << v);
            std::vector<std::uint64_t> rest;
            rest.reserve(uncovered.size());
            for (std::uint64_t c : uncovered)
                if (!(c & next)) rest.push_back(c);
            run(next, count + 1, rest);
        }
    }
};

inline std::vector<Vertex> bitmap_vertices(std::uint64_t set, int k) {
    std::vector<Vertex> out;
    for (int v = 0; v < (1 << k); ++v)
        if ((set >> v) & 1) out.emplace_back(static_cast<Mask>(v), k);
    return out;
}

/// Smallest known uniqueness construction for (k, q), as (size, name).
inline std::pair<long long, std::string> construction_upper(int k, int q) {
    if (q == 0) return {1, "single point"};
    if (q == 1) return {2, "antipodal construction"};
    if (q == k) return {1LL << k, "full cube"};
    if (q == k - 1) return {1LL << (k - 1), "alternating construction"};
    if (q == 2) return {k + 1, "w1k construction"};
    if (q == 3) return {2LL * k, "w1k1 construction"};
    Integer size = 0;
    for (int i = 0; i <= q / 2; ++i) size += binomial(k, i);
    return {(2 * size).convert_to<long long>(), "blofeld construction"};
}

}  // namespace detail

/// Minimum transversal of the codimension-q subcubes: branch and bound over
/// the first uncovered subcube, with vertex 0 forced into the cover (the
/// signed-permutation group is vertex-transitive, so some minimum cover
/// contains it). Certificate re-verified against every subcube.
inline ExtremalResult g_exact(int k, int q, const SearchBudget& budget = {}) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("g_exact: q out of [0, k]");
    ExtremalResult res;
    res.k = k;
    res.q = q;
    res.quantity = 'g';
    if (k > budget.max_k_g || k > 6) {
        res.method = Method::Unknown;
        res.lower = q >= 2 ? 1 : 0;
        res.upper = 1LL << k;
        return res;
    }
    if (q == 0) {
        // one subcube, the cube itself
        res.method = Method::Exhaustive;
        res.value = res.lower = res.upper = 1;
        res.certificate = {Vertex(0, k)};
        return res;
    }

    detail::TransversalSearch search;
    search.k = k;
    search.max_nodes = budget.max_nodes;
    for (const Subcube& s : enumerate_subcubes(k, q))
        search.cubes.push_back(detail::subcube_bitmap(s));

    std::uint64_t greedy_set = search.greedy();
    search.best = std::popcount(greedy_set);
    search.best_set = greedy_set;

    std::uint64_t root = 1;  // vertex 0
    std::vector<std::uint64_t> uncovered;
    for (std::uint64_t c : search.cubes)
        if (!(c & root)) uncovered.push_back(c);
    search.run(root, 1, uncovered);

    if (search.exceeded) {
        res.method = Method::Unknown;
        res.lower = 1;
        res.upper = search.best;
        return res;
    }
    for (std::uint64_t c : search.cubes)
        if (!(c & search.best_set)) throw std::logic_error("g_exact: certificate misses a subcube");
    res.method = Method::Exhaustive;
    res.value = res.lower = res.upper = search.best;
    res.certificate = detail::bitmap_vertices(search.best_set, k);
    return res;
}

/// Minimum cone uniqueness set size by ascending-size subset scan. Only
/// canonical representatives under the signed-permutation group reach the
/// LP (every orbit has one whose sorted masks start at vertex 0, so the scan
/// ranges over subsets containing vertex 0). A candidate that misses some
/// codimension-q subcube entirely is skipped: the subcube indicator is a
/// cone witness against it.
inline ExtremalResult u_exact(int k, int q, const SearchBudget& budget = {}) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("u_exact: q out of [0, k]");
    ExtremalResult res;
    res.k = k;
    res.q = q;
    res.quantity = 'u';
    std::pair<long long, std::string> upper = detail::construction_upper(k, q);
    if (k > budget.max_k_u || k > 6) {
        res.method = Method::Unknown;
        res.lower = q >= 1 ? 2 : 1;
        res.upper = upper.first;
        return res;
    }

    std::vector<std::uint64_t> cube_maps;
    for (const Subcube& s : enumerate_subcubes(k, q))
        cube_maps.push_back(detail::subcube_bitmap(s));

    const int n = 1 << k;
    long long tested = 0;
    for (int size = 1; size <= n; ++size) {
        // subsets of {0, ..., 2^k - 1} of this size containing vertex 0,
        // in ascending lexicographic order of their sorted mask lists
        std::vector<int> pick(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
        std::vector<std::vector<Mask>> candidates;
        bool out_of_budget = false;
        for (;;) {
            std::vector<Mask> masks(pick.begin(), pick.end());
            std::vector<Mask> canon = detail::canonical_masks(masks, k);
            if (canon == masks) {
                std::uint64_t pts = 0;
                for (Mask m : masks) pts |= std::uint64_t{1} << m;
                bool transversal = true;
                for (std::uint64_t c : cube_maps)
                    if (!(c & pts)) { transversal = false; break; }
                if (transversal) {
                    candidates.push_back(std::move(masks));
                    if (budget.max_candidates >= 0 &&
                        tested + static_cast<long long>(candidates.size()) > budget.max_candidates) {
                        out_of_budget = true;
                        break;
                    }
                }
            }
            // next combination with pick[0] pinned at vertex 0
            int i = size - 1;
            while (i >= 1 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 1) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
        if (out_of_budget) {
            res.method = Method::Unknown;
            res.lower = size;  // all smaller sizes were exhausted
            res.upper = upper.first;
            return res;
        }
        tested += static_cast<long long>(candidates.size());

        std::vector<char> hit(candidates.size(), 0);
        detail::parallel_for(candidates.size(), budget.threads, [&](std::size_t i) {
            std::vector<Vertex> points;
            points.reserve(candidates[i].size());
            for (Mask m : candidates[i]) points.emplace_back(m, k);
            hit[i] = is_unique_cone(k, q, points).unique;
        });
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (!hit[i]) continue;
            res.method = Method::Exhaustive;
            res.value = res.lower = res.upper = size;
            for (Mask m : candidates[i]) res.certificate.emplace_back(m, k);
            if (!is_unique_cone(k, q, res.certificate).unique)
                throw std::logic_error("u_exact: certificate fails revalidation");
            return res;
        }
    }
    throw std::logic_error("u_exact: the full cube is always a uniqueness set");
}

struct GrahamChain {
    long long value = 0;
    Method method = Method::Unknown;
    bool available = false;
};

/// Lower bound chain g(k,q) >= 2 g(k-1,q-1) >= ... >= 2^{q-2} g(k-q+2, 2),
/// with the base case taken from the closed form when it is defined, else
/// from brute force when the budget allows.
inline GrahamChain graham_lower_chain(int k, int q, const SearchBudget& budget = {}) {
    if (q < 2 || q > k) throw std::invalid_argument("graham_lower_chain: need 2 <= q <= k");
    const int base = k - q + 2;
    const long long factor = 1LL << (q - 2);
    GrahamChain out;
    if (std::optional<long long> ks = kleitman_spencer_g2(base)) {
        out.value = factor * *ks;
        out.method = Method::Formula;
        out.available = true;
        return out;
    }
    if (base <= budget.max_k_g) {
        ExtremalResult g = g_exact(base, 2, budget);
        if (g.method == Method::Exhaustive) {
            out.value = factor * g.value;
            out.method = Method::Exhaustive;
            out.available = true;
            return out;
        }
    }
    return out;
}

/// Bracket for u(k, q): exact closed forms at q in {0, 1, k-1, k}, otherwise
/// transversal-based lower bounds against construction-based upper bounds.
inline BoundSummary bound_summary(int k, int q, const SearchBudget& budget = {}) {
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("bound_summary: q out of [0, k]");
    BoundSummary out;
    out.k = k;
    out.q = q;
    std::pair<long long, std::string> upper = detail::construction_upper(k, q);
    if (q == 0 || q == 1 || q == k || q == k - 1) {
        out.lower = out.upper = upper.first;
        out.sources = {"exact value via " + upper.second};
        return out;
    }
    out.upper = upper.first;
    out.sources.push_back("upper: " + upper.second);
    out.lower = 2;
    std::string lower_source = "lower: two points never suffice beyond q = 1";
    GrahamChain chain = graham_lower_chain(k, q, budget);
    if (chain.available && chain.value > out.lower) {
        out.lower = chain.value;
        lower_source = std::string("lower: transversal chain (") + method_name(chain.method) + " base)";
    }
    if (k <= budget.max_k_g) {
        ExtremalResult g = g_exact(k, q, budget);
        if (g.method == Method::Exhaustive && g.value > out.lower) {
            out.lower = g.value;
            lower_source = "lower: exact transversal number";
        }
    }
    out.sources.push_back(lower_source);
    if (out.lower > out.upper) throw std::logic_error("bound_summary: crossed bounds");
    return out;
}

/// Is u(k, 2) = k + 1? Answered only when the exhaustive search finishes.
inline std::optional<bool> conjecture_check(int k, const SearchBudget& budget = {}) {
    ExtremalResult u = u_exact(k, 2, budget);
    if (u.method != Method::Exhaustive) return std::nullopt;
    return u.value == k + 1;
}

}  // namespace uniqcube
