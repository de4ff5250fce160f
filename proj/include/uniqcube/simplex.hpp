#pragma once

#include <uniqcube/matrix.hpp>
#include <uniqcube/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace uniqcube {

/// Feasibility problem over free rational variables x in R^n:
///   eq_rows   x  =  eq_rhs   (componentwise)
///   ge_rows   x  >= ge_rhs
struct LPProblem {
    std::size_t n = 0;
    std::vector<std::vector<Rational>> eq_rows;
    std::vector<Rational> eq_rhs;
    std::vector<std::vector<Rational>> ge_rows;
    std::vector<Rational> ge_rhs;

    explicit LPProblem(std::size_t vars) : n(vars) {
        if (vars == 0) throw std::invalid_argument("LPProblem: zero variables");
    }

    void add_eq(std::vector<Rational> row, Rational rhs) {
        if (row.size() != n) throw std::invalid_argument("LPProblem: row width mismatch");
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(std::move(rhs));
    }

    void add_ge(std::vector<Rational> row, Rational rhs) {
        if (row.size() != n) throw std::invalid_argument("LPProblem: row width mismatch");
        ge_rows.push_back(std::move(row));
        ge_rhs.push_back(std::move(rhs));
    }
};

struct LPResult {
    bool feasible = false;
    std::vector<Rational> witness;  // one entry per variable when feasible
    long long pivots = 0;
};

namespace detail {

// Phase-1 simplex tableau in standard form: nonneg variables, Ax = b with
// b >= 0, minimize the sum of the artificial variables. Bland's rule on both
// the entering and the leaving choice, so the iteration terminates.
struct Phase1 {
    std::size_t nvars = 0;                    // structural + surplus + artificial
    std::vector<std::vector<Rational>> a;     // m rows, nvars columns
    std::vector<Rational> b;                  // m, all >= 0
    std::vector<std::size_t> basis;           // m, variable index basic in each row
    std::vector<bool> artificial;             // nvars
    long long pivots = 0;

    void pivot(std::size_t pr, std::size_t pc) {
        Rational d = a[pr][pc];
        for (Rational& v : a[pr]) v /= d;
        b[pr] /= d;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == pr || a[i][pc] == 0) continue;
            Rational f = a[i][pc];
            for (std::size_t j = 0; j < nvars; ++j) a[i][j] -= f * a[pr][j];
            a[i][pc] = 0;
            b[i] -= f * b[pr];
        }
        basis[pr] = pc;
        ++pivots;
    }

    /// Runs phase 1 to optimality; returns the optimal sum of artificials.
    Rational solve() {
        std::size_t m = a.size();
        std::vector<Rational> reduced(nvars);
        Rational objective = 0;
        auto recompute = [&] {
            for (std::size_t j = 0; j < nvars; ++j) reduced[j] = artificial[j] ? Rational(1) : Rational(0);
            objective = 0;
            for (std::size_t i = 0; i < m; ++i) {
                if (!artificial[basis[i]]) continue;
                for (std::size_t j = 0; j < nvars; ++j) reduced[j] -= a[i][j];
                objective += b[i];
            }
        };
        recompute();
        for (;;) {
            // entering: smallest non-artificial index with negative reduced
            // cost (artificials never re-enter; a zero-cost solution avoiding
            // them exists whenever any zero-cost solution exists)
            std::size_t enter = nvars;
            for (std::size_t j = 0; j < nvars; ++j) {
                if (!artificial[j] && reduced[j] < 0) { enter = j; break; }
            }
            if (enter == nvars) return objective;
            std::size_t leave = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (a[i][enter] <= 0) continue;
                Rational ratio = b[i] / a[i][enter];
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m)
                throw std::logic_error("phase 1 unbounded; objective is bounded below by zero");
            pivot(leave, enter);
            recompute();
        }
    }

    Rational value_of(std::size_t var) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (basis[i] == var) return b[i];
        return 0;
    }
};

}  // namespace detail

/// Exact feasibility via equality presolve plus phase-1 simplex.
/// Feasible results carry a witness revalidated against every input
/// constraint before returning; Infeasible means the phase-1 optimum (or the
/// equality system itself) certifies emptiness.
inline LPResult lp_feasible(const LPProblem& p) {
    const std::size_t n = p.n;

    // Presolve: RREF the equality system, solving pivot variables in terms
    // of free ones. x = x0 + N z with z the free coordinates.
    Mat e(p.eq_rows.size(), n + 1);
    for (std::size_t i = 0; i < p.eq_rows.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) e(i, j) = p.eq_rows[i][j];
        e(i, n) = p.eq_rhs[i];
    }
    std::vector<std::size_t> pivots = detail::rref(e);
    if (!pivots.empty() && pivots.back() == n) return {};  // 0 = nonzero row
    std::vector<std::size_t> row_of(n, static_cast<std::size_t>(-1));
    std::vector<bool> is_pivot(n, false);
    for (std::size_t t = 0; t < pivots.size(); ++t) {
        is_pivot[pivots[t]] = true;
        row_of[pivots[t]] = t;
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    const std::size_t m = free_cols.size();

    std::vector<Rational> x0(n);
    for (std::size_t c : pivots) x0[c] = e(row_of[c], n);

    auto reconstruct = [&](const std::vector<Rational>& z) {
        std::vector<Rational> x = x0;
        for (std::size_t f = 0; f < m; ++f) {
            if (z[f] == 0) continue;
            x[free_cols[f]] += z[f];
            for (std::size_t c : pivots) x[c] -= e(row_of[c], free_cols[f]) * z[f];
        }
        return x;
    };

    auto validate = [&](const std::vector<Rational>& x) {
        for (std::size_t i = 0; i < p.eq_rows.size(); ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < n; ++j) s += p.eq_rows[i][j] * x[j];
            if (s != p.eq_rhs[i]) throw std::logic_error("lp_feasible: witness violates equality");
        }
        for (std::size_t i = 0; i < p.ge_rows.size(); ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < n; ++j) s += p.ge_rows[i][j] * x[j];
            if (s < p.ge_rhs[i]) throw std::logic_error("lp_feasible: witness violates inequality");
        }
    };

    // Substitute into the inequalities: g x >= h becomes g' z >= h'.
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < p.ge_rows.size(); ++i) {
        const std::vector<Rational>& g = p.ge_rows[i];
        std::vector<Rational> row(m);
        Rational h = p.ge_rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (g[j] == 0) continue;
            if (is_pivot[j]) {
                h -= g[j] * e(row_of[j], n);
                for (std::size_t f = 0; f < m; ++f) row[f] -= g[j] * e(row_of[j], free_cols[f]);
            } else {
                for (std::size_t f = 0; f < m; ++f)
                    if (free_cols[f] == j) { row[f] += g[j]; break; }
            }
        }
        bool zero = true;
        for (const Rational& v : row)
            if (v != 0) { zero = false; break; }
        if (zero) {
            if (h > 0) return {};  // constant row 0 >= h fails
            continue;
        }
        rows.push_back(std::move(row));
        rhs.push_back(std::move(h));
    }

    if (rows.empty()) {
        std::vector<Rational> x = reconstruct(std::vector<Rational>(m));
        validate(x);
        return {true, std::move(x), 0};
    }

    // Phase 1 over z split into nonnegative parts, z = zp - zn.
    // Row layout: g' zp - g' zn - s = h when h > 0 (artificial basic),
    // otherwise the negated row with the surplus basic.
    const std::size_t R = rows.size();
    std::size_t nart = 0;
    for (const Rational& h : rhs)
        if (h > 0) ++nart;
    detail::Phase1 t;
    t.nvars = 2 * m + R + nart;
    t.artificial.assign(t.nvars, false);
    for (std::size_t j = 2 * m + R; j < t.nvars; ++j) t.artificial[j] = true;
    t.a.assign(R, std::vector<Rational>(t.nvars));
    t.b.assign(R, Rational(0));
    t.basis.assign(R, 0);
    std::size_t next_art = 2 * m + R;
    for (std::size_t i = 0; i < R; ++i) {
        bool flip = !(rhs[i] > 0);
        Rational sgn = flip ? -1 : 1;
        for (std::size_t f = 0; f < m; ++f) {
            t.a[i][2 * f] = sgn * rows[i][f];
            t.a[i][2 * f + 1] = -sgn * rows[i][f];
        }
        t.a[i][2 * m + i] = flip ? 1 : -1;  // surplus for g' z >= h
        t.b[i] = sgn * rhs[i];
        if (flip) {
            t.basis[i] = 2 * m + i;
        } else {
            t.a[i][next_art] = 1;
            t.basis[i] = next_art++;
        }
    }

    Rational opt = t.solve();
    if (opt != 0) return {.feasible = false, .witness = {}, .pivots = t.pivots};

    std::vector<Rational> z(m);
    for (std::size_t f = 0; f < m; ++f) z[f] = t.value_of(2 * f) - t.value_of(2 * f + 1);
    std::vector<Rational> x = reconstruct(z);
    validate(x);
    return {true, std::move(x), t.pivots};
}

}  // namespace uniqcube
