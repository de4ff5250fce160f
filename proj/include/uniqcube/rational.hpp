#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace uniqcube {

// All verdict-producing computation in this library runs on exact rationals.
// Floating point is confined to the Ising fitting/sampling paths.
using Integer  = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C(n, r) with the convention C(n, r) = 0 for r < 0 or r > n.
inline Integer binomial(long long n, long long r) {
    if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    Integer acc = 1;
    for (long long i = 1; i <= r; ++i) {
        acc *= n - r + i;
        acc /= i;  // exact: product of i consecutive integers is divisible by i!
    }
    return acc;
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace uniqcube
