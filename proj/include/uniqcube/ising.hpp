#pragma once

#include <uniqcube/hypercube.hpp>
#include <uniqcube/parallel.hpp>
#include <uniqcube/uniqueness.hpp>
#include <uniqcube/walsh.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace uniqcube {

// Boltzmann density on X: mu(x) proportional to exp(H(x)) with
// H(x) = theta0 + sum_i theta_i x_i + sum_{i<j} theta_ij x_i x_j.
// Fitting works in floating point; every existence verdict is delegated to
// the exact uniqueness module.
struct IsingParams {
    int k = 0;
    double theta0 = 0.0;
    std::vector<double> theta;                       // k linear terms
    std::map<std::pair<int, int>, double> theta_pair;  // keys i < j, 0-based

    explicit IsingParams(int k_) : k(k_), theta(static_cast<std::size_t>(k_), 0.0) {
        check_dimension(k_);
    }

    double pair(int i, int j) const {
        auto it = theta_pair.find({i, j});
        return it == theta_pair.end() ? 0.0 : it->second;
    }

    double energy(const Vertex& x) const {
        double h = theta0;
        for (int i = 0; i < k; ++i)
            h += theta[static_cast<std::size_t>(i)] * x.coordinate(i);
        for (const auto& [ij, v] : theta_pair)
            h += v * x.coordinate(ij.first) * x.coordinate(ij.second);
        return h;
    }
};

/// Homogeneous special case: every field B, every coupling beta, complete
/// graph.
struct HomogeneousParams {
    double B = 0.0;
    double beta = 0.0;

    IsingParams expand(int k) const {
        IsingParams p(k);
        for (int i = 0; i < k; ++i) p.theta[static_cast<std::size_t>(i)] = B;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (beta != 0.0) p.theta_pair[{i, j}] = beta;
        return p;
    }
};

struct Sample {
    int k = 0;
    std::map<Mask, long long> counts;
    long long n = 0;

    std::vector<Vertex> support() const {
        std::vector<Vertex> out;
        out.reserve(counts.size());
        for (const auto& [bits, c] : counts)
            if (c > 0) out.emplace_back(bits, k);
        return out;
    }

    void add(Mask bits, long long c) {
        counts[bits] += c;
        n += c;
    }
};

enum class FitStatus { Fitted, NonExistent, Budget };

struct FitResult {
    FitStatus status = FitStatus::Budget;
    std::optional<IsingParams> params;
    std::optional<CoeffVector> witness;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool diverged = false;  // ungated mode pushed the norm past the detector
};

/// log Z = log sum_x exp(H(x)), streamed with a running maximum so no
/// intermediate exp overflows.
inline double log_partition(const IsingParams& p) {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (Mask bits = 0; bits <= all_ones_mask(p.k); ++bits) {
        double h = p.energy(Vertex(bits, p.k));
        if (h <= m) {
            s += std::exp(h - m);
        } else {
            s = s * std::exp(m - h) + 1.0;
            m = h;
        }
    }
    return m + std::log(s);
}

inline double probability(const IsingParams& p, const Vertex& x) {
    if (x.k != p.k) throw std::invalid_argument("probability: dimension mismatch");
    return std::exp(p.energy(x) - log_partition(p));
}

namespace detail {

inline std::vector<double> state_probabilities(const IsingParams& p) {
    double logz = log_partition(p);
    std::vector<double> out(std::size_t{1} << p.k);
    for (Mask bits = 0; bits <= all_ones_mask(p.k); ++bits)
        out[bits] = std::exp(p.energy(Vertex(bits, p.k)) - logz);
    return out;
}

inline double walsh_sign(Mask l, Mask bits) {
    return std::popcount(l & ~bits) % 2 == 0 ? 1.0 : -1.0;
}

/// E[w_L] for one mask against a precomputed probability table.
inline double moment_of(const std::vector<double>& probs, Mask l) {
    double s = 0.0;
    for (Mask bits = 0; bits < probs.size(); ++bits)
        s += walsh_sign(l, bits) * probs[bits];
    return s;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Replicate seed stream: fold n and the replicate index into the user seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t rep) {
    return mix64(mix64(mix64(seed) ^ n) ^ rep);
}

/// Uniform double in [0, 1) built from the top 53 bits of the generator
/// output; fully determined by the mt19937_64 sequence, so byte-identical
/// across platforms.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// E_p[w_L] for every |L| <= 2, by exact enumeration of the 2^k states.
inline std::map<Mask, double> moments(const IsingParams& p) {
    std::vector<double> probs = detail::state_probabilities(p);
    std::map<Mask, double> out;
    for (const WalshIndex& l : basis(p.k, std::min(2, p.k)))
        out[l.mask] = detail::moment_of(probs, l.mask);
    return out;
}

/// n iid draws by inverse transform over the cumulative state table.
inline Sample sample_from(const IsingParams& p, long long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_from: n < 1");
    std::vector<double> probs = detail::state_probabilities(p);
    std::vector<double> cum(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cum[i] = acc;
    }
    cum.back() = 1.0;
    Sample s;
    s.k = p.k;
    std::mt19937_64 gen(seed);
    for (long long t = 0; t < n; ++t) {
        double u = detail::uniform01(gen);
        auto idx = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) -
                                            cum.begin());
        if (idx >= probs.size()) idx = probs.size() - 1;
        s.add(static_cast<Mask>(idx), 1);
    }
    return s;
}

inline std::map<Mask, double> empirical_moments(const Sample& s) {
    if (s.n <= 0) throw std::invalid_argument("empirical_moments: empty sample");
    std::map<Mask, double> out;
    for (const WalshIndex& l : basis(s.k, std::min(2, s.k))) {
        double acc = 0.0;
        for (const auto& [bits, c] : s.counts)
            acc += detail::walsh_sign(l.mask, bits) * static_cast<double>(c);
        out[l.mask] = acc / static_cast<double>(s.n);
    }
    return out;
}

struct FitOptions {
    bool existence_gate = true;
    double divergence_threshold = 50.0;  // sup-norm that marks non-attainment
};

namespace detail {

// Flattened optimization view: the degree 1 and 2 masks in basis order.
struct MomentSystem {
    int k;
    std::vector<Mask> masks;

    explicit MomentSystem(int k_) : k(k_) {
        for (const WalshIndex& l : basis(k_, std::min(2, k_)))
            if (l.mask != 0) masks.push_back(l.mask);
    }

    IsingParams to_params(const std::vector<double>& v) const {
        IsingParams p(k);
        for (std::size_t t = 0; t < masks.size(); ++t) {
            Mask m = masks[t];
            if (std::popcount(m) == 1) {
                p.theta[static_cast<std::size_t>(std::countr_zero(m))] = v[t];
            } else if (v[t] != 0.0) {
                int i = std::countr_zero(m);
                int j = 31 - std::countl_zero(m);
                p.theta_pair[{i, j}] = v[t];
            }
        }
        return p;
    }
};

/// In-place Cholesky solve of (A + 0) d = g for SPD A. Returns false when a
/// pivot collapses or the pivot spread exceeds the conditioning cutoff.
inline bool cholesky_solve(std::vector<std::vector<double>> a, std::vector<double> g,
                           std::vector<double>& out) {
    const std::size_t n = g.size();
    double min_piv = std::numeric_limits<double>::infinity(), max_piv = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double d = a[c][c];
        for (std::size_t t = 0; t < c; ++t) d -= a[c][t] * a[c][t];
        if (!(d > 0.0)) return false;
        d = std::sqrt(d);
        min_piv = std::min(min_piv, d);
        max_piv = std::max(max_piv, d);
        a[c][c] = d;
        for (std::size_t r = c + 1; r < n; ++r) {
            double v = a[r][c];
            for (std::size_t t = 0; t < c; ++t) v -= a[r][t] * a[c][t];
            a[r][c] = v / d;
        }
    }
    if (max_piv / min_piv > 1e6) return false;  // squared pivots ~ condition 1e12
    for (std::size_t r = 0; r < n; ++r) {
        double v = g[r];
        for (std::size_t t = 0; t < r; ++t) v -= a[r][t] * g[t];
        g[r] = v / a[r][r];
    }
    out.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double v = g[r];
        for (std::size_t t = r + 1; t < n; ++t) v -= a[t][r] * out[t];
        out[r] = v / a[r][r];
    }
    return true;
}

}  // namespace detail

/// Moment-matching MLE for the degree-2 family. The existence gate runs the
/// exact cone test on the support first; the optimizer then climbs the
/// concave average log-likelihood  theta . m_emp - log Z(theta)  by damped
/// Newton (gradient fallback when the covariance is ill conditioned), with
/// an expanding/halving line search.
inline FitResult fit_mle(const Sample& s, double tol = 1e-10, int max_iter = 500,
                         const FitOptions& opts = {}) {
    if (s.n <= 0 || s.counts.empty()) throw std::invalid_argument("fit_mle: empty sample");
    if (!(tol > 0.0)) throw std::invalid_argument("fit_mle: tol must be positive");
    FitResult res;
    if (opts.existence_gate) {
        UniquenessVerdict v = is_unique_cone(s.k, std::min(2, s.k), s.support());
        if (!v.unique) {
            res.status = FitStatus::NonExistent;
            res.witness = std::move(v.witness);
            return res;
        }
    }

    detail::MomentSystem sys(s.k);
    const std::size_t d = sys.masks.size();
    std::map<Mask, double> emp_map = empirical_moments(s);
    std::vector<double> emp(d);
    for (std::size_t t = 0; t < d; ++t) emp[t] = emp_map[sys.masks[t]];

    std::vector<double> theta(d, 0.0);
    auto loglik = [&](const std::vector<double>& v) {
        double s0 = 0.0;
        for (std::size_t t = 0; t < d; ++t) s0 += v[t] * emp[t];
        return s0 - log_partition(sys.to_params(v));
    };

    double current = loglik(theta);
    std::vector<double> prev_dir;  // last direction that strictly improved
    auto inf_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        std::vector<double> probs = detail::state_probabilities(sys.to_params(theta));
        std::vector<double> mom(d);
        for (std::size_t t = 0; t < d; ++t) mom[t] = detail::moment_of(probs, sys.masks[t]);
        std::vector<double> grad(d);
        double sup = 0.0, norm = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            grad[t] = emp[t] - mom[t];
            sup = std::max(sup, std::abs(grad[t]));
            norm = std::max(norm, std::abs(theta[t]));
        }
        res.residual = sup;
        if (!opts.existence_gate && norm > opts.divergence_threshold) {
            res.status = FitStatus::Budget;
            res.diverged = true;
            break;
        }
        if (sup <= tol) {
            // Matched moments plus a collapsed state probability is the
            // boundary signature: the supremum sits at infinity and the
            // numerical iterate merely ran out of double precision. The
            // diagnostic mode then pushes along the last certified ascent
            // direction until the norm detector above trips; an attained
            // maximum keeps every state probability bounded away from zero
            // and exits here as fitted.
            bool boundary = false;
            if (!opts.existence_gate) {
                double pmin = probs[0];
                for (double p0 : probs) pmin = std::min(pmin, p0);
                boundary = pmin < 1e-12;
            }
            if (!boundary) {
                res.status = FitStatus::Fitted;
                break;
            }
            if (prev_dir.empty() || inf_norm(prev_dir) == 0.0) {
                res.status = FitStatus::Budget;
                break;
            }
            double jump = (2.0 * opts.divergence_threshold + 1.0 + inf_norm(theta)) /
                          inf_norm(prev_dir);
            for (std::size_t t = 0; t < d; ++t) theta[t] += jump * prev_dir[t];
            current = loglik(theta);
            continue;
        }

        // covariance: Cov(w_L, w_M) = E[w_{L xor M}] - E[w_L] E[w_M]
        std::vector<std::vector<double>> cov(d, std::vector<double>(d));
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = a; b < d; ++b) {
                double e = detail::moment_of(probs, sys.masks[a] ^ sys.masks[b]);
                cov[a][b] = cov[b][a] = e - mom[a] * mom[b];
            }
        std::vector<double> dir;
        bool riding_prev = false;
        if (!detail::cholesky_solve(cov, grad, dir)) {
            // Near non-attainment the covariance degenerates while the true
            // ascent direction stays the previous Newton direction; the
            // diagnostic mode keeps walking it, the gated fit stays cautious.
            if (!opts.existence_gate && !prev_dir.empty()) {
                dir = prev_dir;
                riding_prev = true;
            } else {
                dir = grad;
            }
        }
        if (!riding_prev) {
            double along = 0.0;
            for (std::size_t t = 0; t < d; ++t) along += dir[t] * grad[t];
            if (!(along > 0.0)) dir = grad;
        }

        auto at_step = [&](double step) {
            std::vector<double> v = theta;
            for (std::size_t t = 0; t < d; ++t) v[t] += step * dir[t];
            return v;
        };
        double step = 1.0;
        std::vector<double> next = at_step(step);
        double next_val = loglik(next);
        if (next_val > current) {
            // expand while it keeps strictly improving
            for (int e = 0; e < 60; ++e) {
                std::vector<double> wide = at_step(step * 2.0);
                double wide_val = loglik(wide);
                if (!(wide_val > next_val)) break;
                step *= 2.0;
                next = std::move(wide);
                next_val = wide_val;
            }
        } else {
            int h = 0;
            for (; h < 50; ++h) {
                step *= 0.5;
                next = at_step(step);
                next_val = loglik(next);
                if (next_val > current) break;
            }
            if (h == 50) {
                // No strictly improving step at any scale: the likelihood
                // differences have flattened below double rounding. Near an
                // attained maximum the full step still contracts the moment
                // residual, which stays measurable much longer, so accept on
                // that metric before giving up.
                std::vector<double> cand = at_step(1.0);
                std::vector<double> cand_probs =
                    detail::state_probabilities(sys.to_params(cand));
                double cand_sup = 0.0;
                for (std::size_t t = 0; t < d; ++t)
                    cand_sup = std::max(
                        cand_sup, std::abs(emp[t] - detail::moment_of(cand_probs, sys.masks[t])));
                if (cand_sup < sup) {
                    theta = std::move(cand);
                    current = loglik(theta);
                    continue;
                }
                // At a non-attained supremum the exact maximizer sits at
                // infinity, so the diagnostic mode pushes along the last
                // certified ascent direction far enough to trip the norm
                // detector.
                if (opts.existence_gate || prev_dir.empty() || inf_norm(prev_dir) == 0.0) {
                    res.status = FitStatus::Budget;
                    break;
                }
                double jump = (2.0 * opts.divergence_threshold + 1.0 + inf_norm(theta)) /
                              inf_norm(prev_dir);
                next = theta;
                for (std::size_t t = 0; t < d; ++t) next[t] += jump * prev_dir[t];
                next_val = loglik(next);
            }
        }
        if (next_val > current) prev_dir = dir;
        theta = std::move(next);
        current = next_val;
    }

    IsingParams fitted = sys.to_params(theta);
    fitted.theta0 = -log_partition(fitted);  // normalizes: probabilities are exp(H)
    res.params = std::move(fitted);
    return res;
}

struct HomogeneousFit {
    FitStatus status = FitStatus::Budget;
    HomogeneousParams params;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool diverged = false;
};

/// Two-parameter restricted fit: match E[sum x_i] and E[sum_{i<j} x_i x_j].
/// No existence gate is known for the restricted family, so divergence is
/// detected instead of pre-checked.
inline HomogeneousFit fit_homogeneous(const Sample& s, double tol = 1e-10, int max_iter = 500,
                                      double divergence_threshold = 50.0) {
    if (s.n <= 0 || s.counts.empty()) throw std::invalid_argument("fit_homogeneous: empty sample");
    const int k = s.k;
    std::map<Mask, double> emp_map = empirical_moments(s);
    double emp_f = 0.0, emp_c = 0.0;
    for (const auto& [m, v] : emp_map) {
        if (std::popcount(m) == 1) emp_f += v;
        else if (std::popcount(m) == 2) emp_c += v;
    }

    HomogeneousFit res;
    double B = 0.0, beta = 0.0;
    auto stats = [&](double b0, double b1, double& f, double& c,
                     double& vff, double& vfc, double& vcc, double& ll) {
        HomogeneousParams hp{b0, b1};
        IsingParams p = hp.expand(k);
        std::vector<double> probs = detail::state_probabilities(p);
        f = c = vff = vfc = vcc = 0.0;
        double ef2 = 0.0, efc = 0.0, ec2 = 0.0;
        for (Mask bits = 0; bits < probs.size(); ++bits) {
            int ones = std::popcount(bits);
            double sf = 2.0 * ones - k;  // sum of coordinates
            double sc = (sf * sf - k) / 2.0;  // sum over pairs
            f += sf * probs[bits];
            c += sc * probs[bits];
            ef2 += sf * sf * probs[bits];
            efc += sf * sc * probs[bits];
            ec2 += sc * sc * probs[bits];
        }
        vff = ef2 - f * f;
        vfc = efc - f * c;
        vcc = ec2 - c * c;
        ll = b0 * emp_f + b1 * emp_c - log_partition(p);
    };

    double f, c, vff, vfc, vcc, current;
    stats(B, beta, f, c, vff, vfc, vcc, current);
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        double gf = emp_f - f, gc = emp_c - c;
        res.residual = std::max(std::abs(gf), std::abs(gc));
        if (res.residual <= tol) {
            res.status = FitStatus::Fitted;
            break;
        }
        if (std::max(std::abs(B), std::abs(beta)) > divergence_threshold) {
            res.status = FitStatus::Budget;
            res.diverged = true;
            break;
        }
        double det = vff * vcc - vfc * vfc;
        double db, dbeta;
        if (std::abs(det) > 1e-12 * std::max(1.0, vff * vcc)) {
            db = (vcc * gf - vfc * gc) / det;
            dbeta = (-vfc * gf + vff * gc) / det;
        } else {
            db = gf;
            dbeta = gc;
        }
        if (db * gf + dbeta * gc <= 0.0) {
            db = gf;
            dbeta = gc;
        }
        double step = 1.0;
        double nf, nc, nvff, nvfc, nvcc, next_val;
        stats(B + db, beta + dbeta, nf, nc, nvff, nvfc, nvcc, next_val);
        if (next_val > current) {
            for (int e = 0; e < 60; ++e) {
                double wf, wc, wvff, wvfc, wvcc, wide_val;
                stats(B + 2.0 * step * db, beta + 2.0 * step * dbeta, wf, wc, wvff, wvfc, wvcc,
                      wide_val);
                if (!(wide_val > next_val)) break;
                step *= 2.0;
                nf = wf; nc = wc; nvff = wvff; nvfc = wvfc; nvcc = wvcc;
                next_val = wide_val;
            }
        } else {
            int h = 0;
            for (; h < 50; ++h) {
                step *= 0.5;
                stats(B + step * db, beta + step * dbeta, nf, nc, nvff, nvfc, nvcc, next_val);
                if (next_val > current) break;
            }
            if (h == 50) {
                // likelihood flat to rounding; accept the full step if the
                // moment residual still contracts (see fit_mle)
                stats(B + db, beta + dbeta, nf, nc, nvff, nvfc, nvcc, next_val);
                double cand_res = std::max(std::abs(emp_f - nf), std::abs(emp_c - nc));
                if (cand_res < res.residual) {
                    B += db;
                    beta += dbeta;
                    f = nf; c = nc; vff = nvff; vfc = nvfc; vcc = nvcc;
                    current = next_val;
                    continue;
                }
                res.status = FitStatus::Budget;
                break;
            }
        }
        B += step * db;
        beta += step * dbeta;
        f = nf; c = nc; vff = nvff; vfc = nvfc; vcc = nvcc;
        current = next_val;
    }
    res.params = {B, beta};
    return res;
}

struct CurvePoint {
    long long n = 0;
    double estimate = 0.0;
    double half_width = 0.0;
};

/// Monte Carlo estimate of P(the support of an n-sample is cone-unique),
/// one point per n, 95% normal-approximation binomial half-widths.
/// Replicates use seeds derived from (seed, n, replicate index) and run in
/// parallel; the reduction is a plain count, so worker order is irrelevant.
inline std::vector<CurvePoint> prob_uniqueness_curve(int k, int q, const IsingParams& p,
                                                     const std::vector<long long>& n_values,
                                                     int reps, std::uint64_t seed,
                                                     int threads = 0) {
    if (p.k != k) throw std::invalid_argument("prob_uniqueness_curve: dimension mismatch");
    if (reps < 100) throw std::invalid_argument("prob_uniqueness_curve: need reps >= 100");
    check_dimension(k);
    if (q < 0 || q > k) throw std::invalid_argument("prob_uniqueness_curve: q out of [0, k]");

    // verdict cache keyed by support bitmap (k <= 6 always holds in practice
    // for the curve; fall back to no caching above that)
    std::map<std::uint64_t, bool> cache;
    std::mutex cache_mutex;
    const bool cacheable = k <= 6;

    std::vector<CurvePoint> out;
    for (long long n : n_values) {
        std::vector<char> unique_flags(static_cast<std::size_t>(reps), 0);
        detail::parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t rep) {
            Sample s = sample_from(p, n, detail::derive_seed(seed, static_cast<std::uint64_t>(n),
                                                             rep));
            std::uint64_t key = 0;
            if (cacheable) {
                for (const auto& [bits, c] : s.counts)
                    if (c > 0) key |= std::uint64_t{1} << bits;
                std::lock_guard<std::mutex> lock(cache_mutex);
                auto it = cache.find(key);
                if (it != cache.end()) {
                    unique_flags[rep] = it->second;
                    return;
                }
            }
            bool unique = is_unique_cone(k, q, s.support()).unique;
            unique_flags[rep] = unique;
            if (cacheable) {
                std::lock_guard<std::mutex> lock(cache_mutex);
                cache[key] = unique;
            }
        });
        long long hits = 0;
        for (char f : unique_flags) hits += f;
        double est = static_cast<double>(hits) / static_cast<double>(reps);
        double hw = 1.959963984540054 * std::sqrt(est * (1.0 - est) / static_cast<double>(reps));
        out.push_back({n, est, hw});
    }
    return out;
}

}  // namespace uniqcube
