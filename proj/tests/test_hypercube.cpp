#include <uniqcube/hypercube.hpp>
#include <uniqcube/rational.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace uniqcube;

TEST_CASE("vertex text round trip and encoding") {
    Vertex v = parse_vertex("+--");
    CHECK(v.k == 3);
    CHECK(v.bits == 0b001u);  // coordinate 1 is leftmost and maps to bit 0
    CHECK(v.coordinate(0) == 1);
    CHECK(v.coordinate(1) == -1);
    CHECK(v.coordinate(2) == -1);
    CHECK(to_string(v) == "+--");
    CHECK(v.level() == 1);
    for (int k = 1; k <= 6; ++k)
        for (const Vertex& x : enumerate_vertices(k)) CHECK(parse_vertex(to_string(x)) == x);
    CHECK_THROWS_AS(parse_vertex(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_vertex("+0-"), std::invalid_argument);
}

TEST_CASE("vertex enumeration is the full cube") {
    for (int k = 1; k <= 8; ++k) {
        auto xs = enumerate_vertices(k);
        REQUIRE(xs.size() == (std::size_t{1} << k));
        std::set<Mask> seen;
        for (const Vertex& x : xs) {
            CHECK(x.k == k);
            seen.insert(x.bits);
        }
        CHECK(seen.size() == xs.size());
    }
}

TEST_CASE("level sets partition the cube with binomial sizes") {
    for (int k = 1; k <= 8; ++k) {
        std::size_t total = 0;
        for (int j = 0; j <= k; ++j) {
            auto w = level_set(k, {j});
            // independent size oracle: count vertices at Hamming distance j
            // from the all-minus base by popcount
            std::size_t count = 0;
            for (Mask b = 0; b < (Mask{1} << k); ++b)
                if (std::popcount(b) == j) ++count;
            CHECK(w.size() == count);
            CHECK(Integer(w.size()) == binomial(k, j));
            for (const Vertex& x : w) CHECK(x.level() == j);
            total += w.size();
        }
        CHECK(total == (std::size_t{1} << k));
    }
}

TEST_CASE("level sets respect a custom base point") {
    Vertex base = parse_vertex("+-+-");
    LevelSpec spec(4, {0, 2}, base);
    auto w = level_set(spec);
    for (const Vertex& x : w) {
        int d = hamming(x, base);
        CHECK((d == 0 || d == 2));
    }
    CHECK(w.size() == 1 + 6);
}

TEST_CASE("subcube enumeration covers every choice of fixed pattern") {
    for (int k = 1; k <= 6; ++k)
        for (int q = 0; q <= k; ++q) {
            auto subs = enumerate_subcubes(k, q);
            CHECK(Integer(subs.size()) == binomial(k, q) * Integer(1 << q));
            std::set<Subcube> seen(subs.begin(), subs.end());
            CHECK(seen.size() == subs.size());
            for (const Subcube& s : subs) {
                CHECK(s.q() == q);
                CHECK(subcube_vertices(s).size() == (std::size_t{1} << (k - q)));
            }
        }
}

TEST_CASE("subcube membership agrees with its vertex expansion") {
    for (int k = 1; k <= 4; ++k)
        for (int q = 0; q <= k; ++q)
            for (const Subcube& s : enumerate_subcubes(k, q)) {
                std::set<Vertex> inside;
                for (const Vertex& v : subcube_vertices(s)) inside.insert(v);
                for (const Vertex& x : enumerate_vertices(k))
                    CHECK(subcube_contains(s, x) == (inside.count(x) > 0));
            }
}

TEST_CASE("subcube text round trip") {
    Subcube s = parse_subcube("+*-*");
    CHECK(s.k == 4);
    CHECK(s.q() == 2);
    CHECK(to_string(s) == "+*-*");
    auto verts = subcube_vertices(s);
    REQUIRE(verts.size() == 4);
    for (const Vertex& v : verts) {
        CHECK(v.coordinate(0) == 1);
        CHECK(v.coordinate(2) == -1);
    }
}

TEST_CASE("class of a subcube counts positive fixed coordinates") {
    Subcube s = parse_subcube("+*-+*");
    CHECK(subcube_class(s) == 2);
}

TEST_CASE("level and class determine the intersection count") {
    // |W_j meet S| = C(k-q, j-i) for S of class i: brute-forced oracle
    for (int k = 1; k <= 6; ++k)
        for (int q = 0; q <= k; ++q)
            for (const Subcube& s : enumerate_subcubes(k, q)) {
                int i = subcube_class(s);
                for (int j = 0; j <= k; ++j) {
                    long long brute = 0;
                    for (const Vertex& v : subcube_vertices(s))
                        if (v.level() == j) ++brute;
                    CHECK(Integer(brute) == level_subcube_count(k, q, i, j));
                }
            }
    // pinned: k=5, q=2, class 1, level 3
    CHECK(level_subcube_count(5, 2, 1, 3) == 3);
}

TEST_CASE("signed permutations act as cube automorphisms") {
    std::mt19937_64 gen(7);
    for (int k = 1; k <= 6; ++k) {
        std::vector<int> perm(k);
        for (int i = 0; i < k; ++i) perm[i] = i;
        for (int trial = 0; trial < 20; ++trial) {
            std::shuffle(perm.begin(), perm.end(), gen);
            SignedPermutation g{perm, static_cast<Mask>(gen() & all_ones_mask(k))};
            std::set<Mask> image;
            for (const Vertex& x : enumerate_vertices(k)) image.insert(g.apply(x).bits);
            CHECK(image.size() == (std::size_t{1} << k));  // bijective
            // distances are preserved
            auto xs = enumerate_vertices(k);
            for (int t = 0; t < 10; ++t) {
                const Vertex& a = xs[gen() % xs.size()];
                const Vertex& b = xs[gen() % xs.size()];
                CHECK(hamming(a, b) == hamming(g.apply(a), g.apply(b)));
            }
        }
    }
}

TEST_CASE("canonical form is constant on orbits") {
    // exhaustive at k=3: the canonical form of a random image equals the
    // canonical form of the original, for every subset of the cube
    std::mt19937_64 gen(11);
    int k = 3;
    auto xs = enumerate_vertices(k);
    std::vector<int> perm = {0, 1, 2};
    for (Mask sub = 1; sub < (1u << 8); ++sub) {
        std::vector<Vertex> pts;
        for (int b = 0; b < 8; ++b)
            if (sub & (1u << b)) pts.push_back(xs[b]);
        CanonicalSet c = canonical_form(pts);
        std::shuffle(perm.begin(), perm.end(), gen);
        SignedPermutation g{perm, static_cast<Mask>(gen() & 7u)};
        std::vector<Vertex> moved;
        for (const Vertex& p : pts) moved.push_back(g.apply(p));
        CanonicalSet c2 = canonical_form(moved);
        CHECK(c.vertices == c2.vertices);
    }
}

TEST_CASE("canonical form is idempotent and reproducible via its transform") {
    std::mt19937_64 gen(13);
    for (int k = 2; k <= 5; ++k) {
        auto xs = enumerate_vertices(k);
        for (int trial = 0; trial < 30; ++trial) {
            std::set<Vertex> pick;
            std::size_t m = 1 + gen() % std::min<std::size_t>(6, xs.size());
            while (pick.size() < m) pick.insert(xs[gen() % xs.size()]);
            std::vector<Vertex> pts(pick.begin(), pick.end());
            CanonicalSet c = canonical_form(pts);
            CanonicalSet cc = canonical_form(c.vertices);
            CHECK(c.vertices == cc.vertices);
            // the reported transform maps the input onto the canonical set
            std::set<Vertex> image;
            for (const Vertex& p : pts) image.insert(c.transform.apply(p));
            std::set<Vertex> canon(c.vertices.begin(), c.vertices.end());
            CHECK(image == canon);
        }
    }
}

TEST_CASE("dimension guard") {
    CHECK_THROWS_AS(check_dimension(0), std::out_of_range);
    CHECK_THROWS_AS(check_dimension(25), std::out_of_range);
    CHECK_THROWS_AS(enumerate_vertices(0), std::out_of_range);
    int& cap = dimension_cap();
    int old = cap;
    cap = 4;
    CHECK_THROWS_AS(check_dimension(5), std::out_of_range);
    cap = old;
    check_dimension(5);
}
