#pragma once

#include <uniqcube/extremal.hpp>
#include <uniqcube/ising.hpp>
#include <uniqcube/level_geometry.hpp>
#include <uniqcube/rational.hpp>
#include <uniqcube/walsh.hpp>

#include <json.hpp>

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace uniqcube {

// Interchange formats. Rationals always travel as numerator/denominator
// strings so nothing is rounded; doubles are printed with max_digits10 so a
// round trip is exact.

namespace detail {

inline std::vector<int> mask_indices(Mask m) {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (m & (Mask{1} << i)) out.push_back(i + 1);  // 1-based coordinates
    return out;
}

inline Mask indices_mask(const std::vector<int>& idx, int k) {
    Mask m = 0;
    for (int i : idx) {
        if (i < 1 || i > k) throw std::invalid_argument("coordinate index out of range");
        m |= Mask{1} << (i - 1);
    }
    return m;
}

inline std::string double_repr(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

inline nlohmann::json to_json(const CoeffVector& f) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& [mask, val] : f.coeffs) {
        coeffs.push_back({{"L", detail::mask_indices(mask)},
                          {"num", numerator(val).str()},
                          {"den", denominator(val).str()}});
    }
    return {{"k", f.k}, {"q", f.q}, {"coeffs", coeffs}};
}

inline CoeffVector coeff_vector_from_json(const nlohmann::json& j) {
    CoeffVector f(j.at("k").get<int>(), j.at("q").get<int>());
    for (const auto& c : j.at("coeffs")) {
        Mask m = detail::indices_mask(c.at("L").get<std::vector<int>>(), f.k);
        Rational num(Integer(c.at("num").get<std::string>()));
        Rational den(Integer(c.at("den").get<std::string>()));
        if (den == 0) throw std::invalid_argument("zero denominator");
        f.set(m, num / den);
    }
    return f;
}

inline nlohmann::json to_json(const UniquenessVerdict& v) {
    nlohmann::json j = {{"unique", v.unique}};
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

/// One vertex per line: `<vertex-string> <count>`.
inline void write_sample(std::ostream& os, const Sample& s) {
    for (const auto& [bits, c] : s.counts)
        os << to_string(Vertex(bits, s.k)) << ' ' << c << '\n';
}

inline Sample read_sample(std::istream& is) {
    Sample s;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;  // blank line
        long long c = 0;
        if (!(ls >> c) || c < 0) throw std::invalid_argument("bad sample line: " + line);
        Vertex v = parse_vertex(word);
        if (s.counts.empty()) s.k = v.k;
        else if (v.k != s.k) throw std::invalid_argument("mixed dimensions in sample");
        if (c > 0) s.add(v.bits, c);
    }
    if (s.n == 0) throw std::invalid_argument("empty sample");
    return s;
}

/// Exact polygon table: `j,x_num,x_den,y_num,y_den`.
inline void write_polygon_csv(std::ostream& os, const std::vector<PolygonPoint>& pts) {
    os << "j,x_num,x_den,y_num,y_den\n";
    for (const PolygonPoint& p : pts)
        os << p.j << ',' << numerator(p.x).str() << ',' << denominator(p.x).str() << ','
           << numerator(p.y).str() << ',' << denominator(p.y).str() << '\n';
}

inline nlohmann::json polygon_to_json(const std::vector<PolygonPoint>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PolygonPoint& p : pts) {
        arr.push_back({{"j", p.j},
                       {"x_num", numerator(p.x).str()},
                       {"x_den", denominator(p.x).str()},
                       {"y_num", numerator(p.y).str()},
                       {"y_den", denominator(p.y).str()},
                       {"x", to_double(p.x)},
                       {"y", to_double(p.y)}});
    }
    return arr;
}

/// `k,q,quantity,value,method,certificate`; the certificate field is a
/// space-separated list of vertex strings (empty when none is known).
inline void write_extremal_csv(std::ostream& os, const std::vector<ExtremalResult>& rows) {
    os << "k,q,quantity,value,method,certificate\n";
    for (const ExtremalResult& r : rows) {
        os << r.k << ',' << r.q << ',' << r.quantity << ',' << r.value << ','
           << method_name(r.method) << ',';
        for (std::size_t i = 0; i < r.certificate.size(); ++i) {
            if (i) os << ' ';
            os << to_string(r.certificate[i]);
        }
        os << '\n';
    }
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& pts) {
    os << "n,estimate,ci_low,ci_high\n";
    for (const CurvePoint& p : pts)
        os << p.n << ',' << detail::double_repr(p.estimate) << ','
           << detail::double_repr(p.estimate - p.half_width) << ','
           << detail::double_repr(p.estimate + p.half_width) << '\n';
}

inline nlohmann::json to_json(const IsingParams& p) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [ij, v] : p.theta_pair)
        pairs.push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"value", v}});
    return {{"k", p.k}, {"theta0", p.theta0}, {"theta", p.theta}, {"theta_pair", pairs}};
}

inline IsingParams ising_params_from_json(const nlohmann::json& j) {
    IsingParams p(j.at("k").get<int>());
    if (j.contains("theta0")) p.theta0 = j.at("theta0").get<double>();
    if (j.contains("theta")) {
        auto t = j.at("theta").get<std::vector<double>>();
        if (static_cast<int>(t.size()) != p.k)
            throw std::invalid_argument("theta length must equal k");
        p.theta = std::move(t);
    }
    if (j.contains("theta_pair")) {
        for (const auto& e : j.at("theta_pair")) {
            int i = e.at("i").get<int>() - 1, jj = e.at("j").get<int>() - 1;
            if (i < 0 || jj <= i || jj >= p.k)
                throw std::invalid_argument("theta_pair needs 1 <= i < j <= k");
            p.theta_pair[{i, jj}] = e.at("value").get<double>();
        }
    }
    return p;
}

}  // namespace uniqcube
