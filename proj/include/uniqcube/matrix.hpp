#pragma once

#include <uniqcube/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace uniqcube {

/// Dense rational matrix, row major.
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Mat from_rows(const std::vector<std::vector<Rational>>& rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.front().size();
        Mat m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("Mat: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> a_;
};

namespace detail {

/// In-place reduced row echelon form. Returns the pivot columns in order;
/// after the call, row r has a unit pivot in pivot_cols[r] and zeros in every
/// other pivot column.
inline std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Rational inv = m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) /= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    return pivot_cols;
}

}  // namespace detail

/// Exact rank by fraction-free (Bareiss) elimination. Rows are first scaled
/// to integers, so all intermediate divisions are exact.
inline std::size_t rank(const Mat& m) {
    std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        Integer scale = 1;
        for (std::size_t j = 0; j < cols; ++j) {
            const Integer& den = boost::multiprecision::denominator(m(i, j));
            scale = boost::multiprecision::lcm(scale, den);
        }
        for (std::size_t j = 0; j < cols; ++j) {
            Rational v = m(i, j) * scale;
            a[i][j] = boost::multiprecision::numerator(v);
        }
    }
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        if (p != r) std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

/// Basis of the right null space { v : m v = 0 }. Empty when the matrix has
/// full column rank. One basis vector per free column, with a 1 in the free
/// position.
inline std::vector<std::vector<Rational>> kernel_basis(const Mat& m) {
    Mat r = m;
    std::vector<std::size_t> pivots = detail::rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols());
        v[f] = 1;
        for (std::size_t t = 0; t < pivots.size(); ++t) v[pivots[t]] = -r(t, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace uniqcube
