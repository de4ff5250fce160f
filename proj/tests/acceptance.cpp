// Acceptance suite: one line per criterion, PASS or FAIL, with wall times.
// Exit status is the number of failed criteria.

#include <uniqcube/uniqcube.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace uniqcube;

namespace {

// pinned tolerances and budgets
constexpr double kResidualTol = 1e-10;     // moment residual at a reported fit
constexpr double kParamZeroTol = 1e-8;     // fitted parameters on the uniform sample
constexpr double kGradStep = 1e-4;         // central difference step
constexpr double kGradTol = 1e-6;          // gradient agreement
constexpr double kProbSumTol = 1e-12;      // state probabilities sum to one
constexpr double kDivergenceNorm = 50.0;   // ungated ascent must exceed this sup norm

int failures = 0;

double secs(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int id, bool pass, const std::string& text, double elapsed,
            const std::vector<std::string>& notes = {}) {
    if (!pass) ++failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << text << " (" << elapsed
         << "s)";
    std::cout << line.str() << "\n";
    for (const std::string& n : notes) std::cout << "  note: " << n << "\n";
    std::cout.flush();
}

std::string cli_path() {
    if (const char* env = std::getenv("UNIQCUBE_CLI"); env && *env) return env;
    return UNIQCUBE_CLI_PATH;
}

std::optional<std::string> run_cli(const std::string& args) {
    std::string cmd = "\"" + cli_path() + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return std::nullopt;
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    if (pclose(pipe) != 0) return std::nullopt;
    return out;
}

IsingParams random_params(int k, std::mt19937_64& gen, double scale) {
    IsingParams p(k);
    auto draw = [&] { return scale * (2.0 * detail::uniform01(gen) - 1.0); };
    p.theta0 = draw();
    for (int i = 0; i < k; ++i) p.theta[static_cast<std::size_t>(i)] = draw();
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) p.theta_pair[{i, j}] = draw();
    return p;
}

bool cone_witness_ok(const CoeffVector& f, int k, const std::vector<Vertex>& u) {
    bool positive = false;
    for (const Vertex& x : enumerate_vertices(k)) {
        Rational v = eval_function(f, x);
        if (v < 0) return false;
        if (v > 0) positive = true;
    }
    if (!positive) return false;
    for (const Vertex& p : u)
        if (eval_function(f, p) != 0) return false;
    return true;
}

// 1. The closed-form characterization, the class-sum system and the full
//    cone feasibility test agree on every union of levels, k = 3..6.
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    long long total = 0;
    bool ok = true;
    std::ostringstream detail_note;
    for (int k = 3; k <= 6; ++k) {
        LevelVerdictReport rep = level_theorem_check(k, true, 1);
        total += rep.total_sets;
        if (!rep.agreement_ok()) ok = false;
        detail_note << "k=" << k << ": " << rep.unique_count << "/" << rep.total_sets
                    << " unique  ";
    }
    double e = secs(t0);
    bool pass = ok && total == 240 && e < 60.0;
    report(1, pass, "three decision routes agree on all 240 level unions, k = 3..6, single thread",
           e, {detail_note.str()});
}

// 2. Full-degree uniqueness needs the whole cube; the alternating level set
//    is minimal one degree down; the antipodal pair works at degree 1.
void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int k = 3; k <= 5; ++k) {
        Mask full = static_cast<Mask>((1u << (k + 1)) - 1);
        for (Mask dmask = 0; dmask < (Mask{1} << (k + 1)); ++dmask) {
            std::set<int> D;
            for (int j = 0; j <= k; ++j)
                if ((dmask >> j) & 1) D.insert(j);
            std::vector<Vertex> w = D.empty() ? std::vector<Vertex>{} : level_set(k, D);
            bool unique = is_unique_cone(k, k, w).unique;
            if (unique != (dmask == full)) ok = false;
        }
        // proper subsets of the cube, not unions of levels: drop one point
        std::vector<Vertex> all = enumerate_vertices(k);
        for (std::size_t drop : {std::size_t{0}, all.size() / 2, all.size() - 1}) {
            std::vector<Vertex> sub;
            for (std::size_t i = 0; i < all.size(); ++i)
                if (i != drop) sub.push_back(all[i]);
            if (is_unique_cone(k, k, sub).unique) ok = false;
        }
        if (!is_minimal_cone(k, k - 1, known_construction(k, k - 1, "alternating"))) ok = false;
        if (!is_unique_cone(k, 1, known_construction(k, 1, "antipodal")).unique) ok = false;
    }
    double e = secs(t0);
    report(2, ok && e < 30.0,
           "only the full cube pins the full-degree cone (k = 3..5); alternating levels are "
           "minimal at degree k-1; the antipodal pair suffices at degree 1",
           e);
}

// 3. Levels {1, k} are a minimal degree-2 uniqueness set and levels
//    {1, k-1} a degree-3 one, k = 4..6.
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int k = 4; k <= 6; ++k) {
        if (!is_minimal_cone(k, 2, known_construction(k, 2, "w1k"))) ok = false;
        if (!is_unique_cone(k, 3, known_construction(k, 3, "w1k1")).unique) ok = false;
    }
    double e = secs(t0);
    report(3, ok && e < 30.0,
           "levels {1,k} minimal for degree 2 and levels {1,k-1} unique for degree 3, k = 4..6",
           e);
}

// 4. The banded construction is cone-unique for every 3 <= q <= k <= 6. Its
//    linear-space rank is recorded; rank deficits are documentation, not
//    failures.
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> notes;
    std::ostringstream ranks;
    for (int k = 3; k <= 6; ++k) {
        for (int q = 3; q <= k; ++q) {
            std::vector<Vertex> pts = known_construction(k, q, "blofeld");
            if (!is_unique_cone(k, q, pts).unique) ok = false;
            std::size_t r = rank(restriction_matrix(k, q, pts));
            ranks << "(k=" << k << ",q=" << q << ") " << r << "/" << walsh_dimension(k, q) << "  ";
        }
    }
    notes.push_back("linear-space ranks (points may span less than the space): " + ranks.str());
    std::ostringstream low;
    for (int k = 4; k <= 6; ++k) {
        std::size_t pts = known_construction(k, 2, "blofeld").size();
        low << "k=" << k << ": " << pts << " points < dim " << walsh_dimension(k, 2) << "  ";
    }
    notes.push_back("expected shortfall at q = 2, k >= 4; the banded set is too small to span "
                    "the degree-2 space there: " + low.str());
    double e = secs(t0);
    report(4, ok && e < 60.0, "banded level construction is cone-unique for all 3 <= q <= k <= 6",
           e, notes);
}

// 5. The normalized binomial polygon has its four structural properties for
//    every k in 3..50, plus pinned spot values at k = 4.
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int k = 3; k <= 50; ++k) {
        LevelVerdictReport rep = verify_polygon_properties(k);
        if (!rep.polygon_ok()) ok = false;
    }
    std::vector<PolygonPoint> p = polygon_points(4);
    if (!(p[1].x == Rational(2) / 3 && p[1].y == Rational(1) / 3)) ok = false;
    if (!(p[2].x == Rational(1) / 4 && p[2].y == Rational(1) / 2)) ok = false;
    double e = secs(t0);
    report(5, ok && e < 10.0,
           "polygon symmetry, slope law, unimodality and convex position hold exactly, k = 3..50",
           e);
}

// 6. Exact extremal values at small k: minimum uniqueness set sizes,
//    minimum transversals, and the inequalities tying them together.
void criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    SearchBudget b;
    b.threads = 8;
    bool ok = true;
    std::vector<std::string> notes;

    auto expect_u = [&](int k, int q, long long want) {
        ExtremalResult r = u_exact(k, q, b);
        if (r.method != Method::Exhaustive || r.value != want ||
            !is_unique_cone(k, q, r.certificate).unique) {
            ok = false;
            notes.push_back("u(" + std::to_string(k) + "," + std::to_string(q) +
                            ") expected " + std::to_string(want));
        }
        return r;
    };
    auto expect_g = [&](int k, int q, long long want) {
        ExtremalResult r = g_exact(k, q, b);
        bool covers = true;
        for (const Subcube& s : enumerate_subcubes(k, q)) {
            bool hit = false;
            for (const Vertex& v : r.certificate)
                if (subcube_contains(s, v)) { hit = true; break; }
            if (!hit) { covers = false; break; }
        }
        if (r.method != Method::Exhaustive || r.value != want || !covers) {
            ok = false;
            notes.push_back("g(" + std::to_string(k) + "," + std::to_string(q) +
                            ") expected " + std::to_string(want));
        }
        return r;
    };

    expect_u(3, 2, 4);
    expect_u(4, 2, 5);
    for (int k = 2; k <= 4; ++k) expect_u(k, 1, 2);
    for (int k = 2; k <= 4; ++k) expect_u(k, k, 1LL << k);
    for (int k = 2; k <= 4; ++k) expect_u(k, k - 1, 1LL << (k - 1));
    expect_g(3, 2, 4);
    expect_g(3, 1, 2);
    expect_g(2, 1, 2);
    expect_g(2, 2, 4);
    expect_g(4, 2, 5);
    expect_g(5, 2, 6);
    expect_g(6, 2, 6);
    expect_g(4, 3, 8);
    expect_g(5, 3, 10);

    auto c3 = conjecture_check(3, b);
    auto c4 = conjecture_check(4, b);
    if (!(c3 && *c3 && c4 && *c4)) {
        ok = false;
        notes.push_back("minimum size k + 1 not confirmed at k = 3, 4");
    }

    // g <= u wherever both are exact
    struct P { int k, q; };
    for (P p : {P{2, 2}, P{3, 1}, P{3, 2}, P{4, 2}, P{4, 3}}) {
        if (g_exact(p.k, p.q, b).value > u_exact(p.k, p.q, b).value) {
            ok = false;
            notes.push_back("transversal exceeded uniqueness minimum at k=" +
                            std::to_string(p.k) + ", q=" + std::to_string(p.q));
        }
    }
    // doubling recursion on the computed diagonal pairs
    struct R { int k, q; };
    for (R r : {R{3, 2}, R{4, 2}, R{4, 3}, R{5, 3}}) {
        if (g_exact(r.k, r.q, b).value < 2 * g_exact(r.k - 1, r.q - 1, b).value) {
            ok = false;
            notes.push_back("doubling recursion failed at k=" + std::to_string(r.k) + ", q=" +
                            std::to_string(r.q));
        }
    }
    double e = secs(t0);
    report(6, ok && e < 600.0,
           "exact small-k extremal table (u and g), size conjecture at k = 3, 4, g <= u, and the "
           "doubling recursion, 8 workers",
           e, notes);
}

// 7. Asymptotic growth statements are out of reach of exact computation; the
//    substitute is the closed form for the degree-2 transversal number
//    against brute force where the form is defined (k = 4 and 6).
void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    SearchBudget b;
    b.threads = 8;
    std::optional<long long> f4 = kleitman_spencer_g2(4);
    std::optional<long long> f6 = kleitman_spencer_g2(6);
    long long g4 = g_exact(4, 2, b).value;
    long long g6 = g_exact(6, 2, b).value;
    bool agree4 = f4 && *f4 == g4;
    bool agree6 = f6 && *f6 == g6;
    double e = secs(t0);
    std::vector<std::string> notes;
    notes.push_back("k=4: closed form " + std::to_string(f4 ? *f4 : -1) + ", exhaustive " +
                    std::to_string(g4) + (agree4 ? " (agree)" : " (disagree)"));
    notes.push_back("k=6: closed form " + std::to_string(f6 ? *f6 : -1) + ", exhaustive " +
                    std::to_string(g6) + (agree6 ? " (agree)" : " (disagree)"));
    if (!agree6) {
        notes.push_back("the k=6 exhaustive value is independently confirmed: a 5-point "
                        "transversal would need 6 pairwise 2-independent sign columns on 5 "
                        "rows, and at most 4 exist");
        notes.push_back("the closed form as quoted understates the transversal number at k=6; "
                        "the library reports this discrepancy wherever the two are compared, "
                        "and brute force is the authority at small k");
    }
    report(7, agree4 && agree6,
           "closed form for the degree-2 transversal number matches brute force at k = 4 and 6",
           e, notes);
}

// 8. Fitting: exact zero fit on the uniform sample, refusal with a verified
//    witness on a boundary support (with diagnostic divergence when ungated),
//    and moment/gradient agreement.
void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> notes;

    {
        Sample s;
        s.k = 3;
        for (const Vertex& v : enumerate_vertices(3)) s.add(v.bits, 1);
        FitResult r = fit_mle(s, kResidualTol);
        double norm = 0.0;
        if (r.params) {
            for (double t : r.params->theta) norm = std::max(norm, std::abs(t));
            for (const auto& [ij, v] : r.params->theta_pair) norm = std::max(norm, std::abs(v));
        }
        if (r.status != FitStatus::Fitted || r.residual > kResidualTol || norm > kParamZeroTol) {
            ok = false;
            notes.push_back("uniform sample did not fit to the zero parameters");
        }
    }
    {
        Sample s;
        s.k = 4;
        for (const Vertex& v : level_set(4, {0, 1})) s.add(v.bits, 1);
        FitResult gated = fit_mle(s, kResidualTol);
        if (gated.status != FitStatus::NonExistent || !gated.witness ||
            !cone_witness_ok(*gated.witness, 4, s.support())) {
            ok = false;
            notes.push_back("boundary support was not refused with a valid witness");
        }
        FitOptions opts;
        opts.existence_gate = false;
        opts.divergence_threshold = kDivergenceNorm;
        FitResult loose = fit_mle(s, kResidualTol, 500, opts);
        double norm = 0.0;
        if (loose.params) {
            for (double t : loose.params->theta) norm = std::max(norm, std::abs(t));
            for (const auto& [ij, v] : loose.params->theta_pair)
                norm = std::max(norm, std::abs(v));
        }
        if (!loose.diverged || norm <= kDivergenceNorm) {
            ok = false;
            notes.push_back("ungated ascent failed to push past the divergence norm");
        } else {
            std::ostringstream n;
            n.setf(std::ios::fixed);
            n.precision(1);
            n << "ungated ascent on the boundary support reached sup norm " << norm << " in "
              << loose.iterations << " iterations";
            notes.push_back(n.str());
        }
    }
    {
        std::mt19937_64 gen(2024);
        int draws = 0;
        for (int k = 2; k <= 5 && ok; ++k)
            for (int t = 0; t < 5 && ok; ++t) {
                IsingParams p = random_params(k, gen, 1.0);
                ++draws;
                std::map<Mask, double> m = moments(p);
                for (int i = 0; i < k && ok; ++i) {
                    IsingParams up = p, dn = p;
                    up.theta[static_cast<std::size_t>(i)] += kGradStep;
                    dn.theta[static_cast<std::size_t>(i)] -= kGradStep;
                    double fd = (log_partition(up) - log_partition(dn)) / (2.0 * kGradStep);
                    if (std::abs(fd - m[Mask{1} << i]) > kGradTol) ok = false;
                }
                for (int i = 0; i < k && ok; ++i)
                    for (int j = i + 1; j < k && ok; ++j) {
                        IsingParams up = p, dn = p;
                        up.theta_pair[{i, j}] += kGradStep;
                        dn.theta_pair[{i, j}] -= kGradStep;
                        double fd = (log_partition(up) - log_partition(dn)) / (2.0 * kGradStep);
                        Mask mask = (Mask{1} << i) | (Mask{1} << j);
                        if (std::abs(fd - m[mask]) > kGradTol) ok = false;
                    }
            }
        if (draws < 20) ok = false;
        if (!ok) notes.push_back("moment/gradient agreement failed");
    }
    double e = secs(t0);
    report(8, ok && e < 60.0,
           "zero fit on the uniform sample, witness-backed refusal plus diagnostic divergence on "
           "a boundary support, and moments = gradient of log Z on 20 random draws",
           e, notes);
}

// 9. Probabilities are normalized and seeded command line runs are
//    byte-identical.
void criterion9() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::string> notes;
    std::mt19937_64 gen(9001);
    for (int k = 1; k <= 8 && ok; ++k)
        for (int t = 0; t < 5; ++t) {
            IsingParams p = random_params(k, gen, 1.5);
            double total = 0.0;
            for (Mask m = 0; m < (Mask{1} << k); ++m) total += probability(p, Vertex(m, k));
            if (std::abs(total - 1.0) > kProbSumTol) {
                ok = false;
                notes.push_back("state probabilities failed to sum to one at k=" +
                                std::to_string(k));
                break;
            }
        }
    auto sim1 = run_cli("ising simulate -k 3 --n 1000 --seed 7");
    auto sim2 = run_cli("ising simulate -k 3 --n 1000 --seed 7");
    if (!sim1 || !sim2 || sim1->empty() || *sim1 != *sim2) {
        ok = false;
        notes.push_back("seeded simulate runs were not byte-identical");
    }
    auto cur1 = run_cli("ising curve -k 3 -q 2 --n 4,8 --reps 100 --seed 5 --threads 2");
    auto cur2 = run_cli("ising curve -k 3 -q 2 --n 4,8 --reps 100 --seed 5 --threads 2");
    if (!cur1 || !cur2 || cur1->empty() || *cur1 != *cur2) {
        ok = false;
        notes.push_back("seeded curve runs were not byte-identical");
    }
    double e = secs(t0);
    report(9, ok && e < 60.0,
           "probabilities sum to one within 1e-12 and seeded simulate/curve runs are "
           "byte-identical",
           e, notes);
}

// 10. The estimated probability that a uniform sample's support pins the
//     degree-2 cone rises with the sample size.
void criterion10() {
    auto t0 = std::chrono::steady_clock::now();
    IsingParams p(3);
    std::vector<long long> ns = {4, 8, 16, 32, 64};
    auto curve = prob_uniqueness_curve(3, 2, p, ns, 1000, 2024, 0);
    bool ok = curve.size() == ns.size();
    std::ostringstream vals;
    vals.setf(std::ios::fixed);
    vals.precision(3);
    for (std::size_t i = 0; ok && i < curve.size(); ++i) {
        vals << "n=" << curve[i].n << ": " << curve[i].estimate << "+-" << curve[i].half_width
             << "  ";
        if (i > 0) {
            // nondecreasing up to overlapping 95% intervals
            double prev_low = curve[i - 1].estimate - curve[i - 1].half_width;
            double cur_high = curve[i].estimate + curve[i].half_width;
            if (cur_high < prev_low) ok = false;
        }
    }
    double e = secs(t0);
    report(10, ok && e < 120.0,
           "uniqueness probability rises with sample size (k = 3, degree 2, 1000 reps each)", e,
           {vals.str()});
}

}  // namespace

int main() {
    std::cout << "acceptance suite (library + " << cli_path() << ")\n";
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criterion(s) failed")
              << "\n";
    return failures;
}
