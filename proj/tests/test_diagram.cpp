#include "knotlab/diagram.hpp"
#include "knotlab/knot_record.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace knotlab;

namespace {

std::vector<KnotRecord> small_table() {
    std::vector<KnotRecord> out;
    for (const char* f : {"knots_3_8.csv", "knots_9.csv"})
        for (auto& r : ingest_table(std::string(KNOTLAB_DATA_DIR) + "/" + f)) out.push_back(r);
    return out;
}

bool is_alt_prime(const KnotRecord& r) {
    return r.alternating.value_or(false) && !r.composite.value_or(false) && !r.pd.empty();
}

// Deletion-contraction, loops ignored, 0 when disconnected.
long long dc_trees(int n, std::vector<std::pair<int, int>> edges) {
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : edges)
        if (a != b) e.push_back({a, b});
    if (n == 1) return 1;
    if (e.empty()) return 0;
    auto [u, v] = e.back();
    e.pop_back();
    long long del = dc_trees(n, e);
    // contract v into u, then rename the last vertex to v
    auto f = [&](int x) {
        if (x == v) x = u;
        if (x == n - 1 && v != n - 1) x = v;
        return x;
    };
    std::vector<std::pair<int, int>> c;
    for (auto [a, b] : e) c.push_back({f(a), f(b)});
    return del + dc_trees(n - 1, c);
}

PlanarMultigraph graph(int n, std::vector<std::pair<int, int>> edges) {
    PlanarMultigraph g;
    g.vertices = n;
    g.edges = std::move(edges);
    return g;
}

}  // namespace

TEST(SpanningTrees, Examples) {
    EXPECT_EQ(spanning_tree_count(graph(3, {{0, 1}, {1, 2}, {2, 0}})), 3);
    EXPECT_EQ(spanning_tree_count(graph(1, {})), 1);
    EXPECT_EQ(spanning_tree_count(graph(2, {{0, 1}, {0, 1}, {1, 1}})), 2);
    try {
        spanning_tree_count(graph(3, {{0, 1}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Disconnected);
    }
}

TEST(SpanningTrees, ThetaGraphs) {
    for (int a = 1; a <= 50; ++a) {
        std::vector<std::pair<int, int>> e{{0, 1}, {1, 2}};
        for (int i = 0; i < a; ++i) e.push_back({0, 2});
        auto g = graph(3, e);
        EXPECT_EQ(spanning_tree_count(g), 1 + 2 * a) << a;
        auto m = theta_multiplicities(g);
        ASSERT_TRUE(m.has_value());
        EXPECT_EQ(*m, (std::array<int, 3>{1, 1, a}));
    }
}

TEST(SpanningTrees, DeletionContraction) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        int n = 2 + trial % 5;
        std::vector<std::pair<int, int>> e;
        for (int v = 1; v < n; ++v) e.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
        int extra = std::uniform_int_distribution<int>(0, 5)(rng);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int i = 0; i < extra; ++i) e.push_back({pick(rng), pick(rng)});
        std::shuffle(e.begin(), e.end(), rng);
        EXPECT_EQ(spanning_tree_count(graph(n, e)), dc_trees(n, e)) << trial;
    }
}

TEST(SpanningTrees, LargeCountsAreExact) {
    // K_n has n^{n-2} spanning trees; n = 20 exceeds 64 bits
    const int n = 20;
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    BigInt expect = 1;
    for (int i = 0; i < n - 2; ++i) expect *= n;
    EXPECT_EQ(spanning_tree_count(graph(n, e)), expect);
}

TEST(BlackGraph, Trefoil) {
    auto d = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]");
    auto g = black_graph(d);
    EXPECT_EQ(g.vertices + g.faces, 5);
    EXPECT_EQ(spanning_tree_count(g), 3);
    EXPECT_EQ(g.crossing_count(), 3);
}

TEST(BlackGraph, FigureEightGauss) {
    auto d = parse_diagram("1 -2 3 -4 2 -1 4 -3");
    EXPECT_EQ(d.crossings(), 4);
    EXPECT_TRUE(d.alternating());
    auto g = black_graph(d);
    EXPECT_EQ(g.vertices + g.faces, 6);
    EXPECT_EQ(spanning_tree_count(g), 5);
}

TEST(BlackGraph, TableInvariants) {
    int n = 0;
    for (const auto& r : small_table()) {
        if (!is_alt_prime(r)) continue;
        auto d = parse_pd(r.pd);
        ASSERT_TRUE(d.alternating()) << r.name;
        EXPECT_EQ(d.crossings(), r.crossings) << r.name;
        auto fs = trace_faces(d);
        auto g0 = colour_graph(d, fs, 0), g1 = colour_graph(d, fs, 1);
        EXPECT_EQ(g0.vertices + g1.vertices, r.crossings + 2) << r.name;
        // planar duals have equal tree counts
        EXPECT_EQ(spanning_tree_count(g0), spanning_tree_count(g1)) << r.name;
        auto g = black_graph(d);
        EXPECT_EQ(g.vertices + g.faces, r.crossings + 2) << r.name;
        EXPECT_EQ(spanning_tree_count(g), determinant(*r.alexander)) << r.name;
        ++n;
    }
    EXPECT_GT(n, 60);
}

TEST(BlackGraph, TwistKnotsAreTheta) {
    int n = 0;
    for (const auto& r : small_table()) {
        if (!is_alt_prime(r) || !r.twist.value_or(false) || r.crossings < 6) continue;
        auto g = black_graph(parse_pd(r.pd));
        auto m = theta_multiplicities(g);
        ASSERT_TRUE(m.has_value()) << r.name;
        EXPECT_EQ(*m, (std::array<int, 3>{1, 1, r.crossings - 2})) << r.name;
        ++n;
    }
    EXPECT_GE(n, 3);
}

TEST(BlackGraph, Errors) {
    auto rows = small_table();
    auto it = std::find_if(rows.begin(), rows.end(), [](const KnotRecord& r) { return r.name == "8_19"; });
    ASSERT_NE(it, rows.end());
    try {
        black_graph(parse_pd(it->pd));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotAlternating);
    }
    for (const char* bad : {"PD[X[1,4,2,5],X[3,6,4,1]]", "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,9]]"}) {
        try {
            black_graph(parse_pd(bad));
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::NonRealizableCode) << bad;
        }
    }
}

TEST(Gauss, TrefoilFromCode) {
    auto d = parse_gauss("GC[-1,3,-2,1,-3,2]");
    EXPECT_EQ(pd_str(d), "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]");
    EXPECT_EQ(pd_str(parse_gauss("{-1,3,-2,1,-3,2}")), pd_str(d));
    EXPECT_EQ(pd_str(parse_diagram("-1 3 -2 1 -3 2")), pd_str(d));
    try {
        parse_gauss("-1 3 -2 1 -3 2; +,-,+");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonRealizableCode);
    }
    try {
        parse_gauss("-1 3 -2 1 -3");
        FAIL();
    } catch (const Error& e) {
        EXPECT_TRUE(e.code() == Errc::NonRealizableCode || e.code() == Errc::ParseError);
    }
}

TEST(Gauss, RoundTripThroughPd) {
    auto d = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]");
    EXPECT_EQ(parse_pd(pd_str(d)).pd, d.pd);
    EXPECT_EQ(parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").pd, d.pd);
}

TEST(Crowell, Examples) {
    auto v = crowell_inequality_check(11, 6, CrowellClass::Other);
    EXPECT_TRUE(v.crowell_bound);
    EXPECT_TRUE(v.holds);
    EXPECT_FALSE(v.det_exceeds_2c);
    v = crowell_inequality_check(13, 7, CrowellClass::Other);
    EXPECT_TRUE(v.crowell_bound);
    EXPECT_FALSE(v.det_exceeds_2c);
    v = crowell_inequality_check(7, 7, CrowellClass::Torus2);
    EXPECT_FALSE(v.crowell_bound);
    EXPECT_FALSE(v.asserted);
    EXPECT_TRUE(v.holds);
    EXPECT_TRUE(v.listed_exception);
    EXPECT_TRUE(v.corollary_holds);
}

TEST(Crowell, CorpusScan) {
    std::set<std::string> over_2c_exceptions;
    for (const auto& r : small_table()) {
        if (!is_alt_prime(r)) continue;
        const long long det = r.det_value();
        const int c = r.crossings;
        const bool torus2 = r.is_torus() && std::min(*r.torus_p, *r.torus_q) == 2;
        const bool twist = r.twist.value_or(false);
        if (!torus2 && !twist) EXPECT_GE(det, 3 * c - 8) << r.name;
        if (det <= 2 * c) over_2c_exceptions.insert(r.name);
        auto cls = torus2 ? CrowellClass::Torus2 : twist ? CrowellClass::Twist : CrowellClass::Other;
        auto v = crowell_inequality_check(det, c, cls);
        EXPECT_TRUE(v.holds) << r.name;
        EXPECT_TRUE(v.corollary_holds) << r.name;
    }
    for (const auto& name : over_2c_exceptions) {
        if (name == "6_2" || name == "7_3") continue;
        auto rows = small_table();
        auto it = std::find_if(rows.begin(), rows.end(), [&](const KnotRecord& r) { return r.name == name; });
        const bool torus2 = it->is_torus() && std::min(*it->torus_p, *it->torus_q) == 2;
        EXPECT_TRUE(torus2 || it->twist.value_or(false)) << name;
    }
    EXPECT_TRUE(over_2c_exceptions.count("6_2"));
    EXPECT_TRUE(over_2c_exceptions.count("7_3"));
}
