#include "knotlab/apoly.hpp"
#include "knotlab/knot_record.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

using namespace knotlab;

namespace {

using cd = std::complex<double>;

BivPoly tri(std::vector<std::array<long long, 3>> t) { return BivPoly::from_triples(t); }

cd eval(const BivPoly& f, cd M, cd L) {
    cd s = 0;
    for (const auto& [k, c] : f.terms()) s += c.convert_to<double>() * std::pow(M, (double)k.first) * std::pow(L, (double)k.second);
    return s;
}

double scale(const BivPoly& f, cd M, cd L) {
    double s = 0;
    for (const auto& [k, c] : f.terms())
        s += std::abs(c.convert_to<double>()) * std::abs(std::pow(M, (double)k.first) * std::pow(L, (double)k.second));
    return s;
}

// Numeric oracle: M^p L^q - omega divides f iff f vanishes along the curve M = c s^q, L = d s^-p.
bool vanishes_on_binomial(const BivPoly& f, long long p, long long q, long long n, long long k) {
    long long x0 = 1, x1 = 0, r0 = p, r1 = q, y0 = 0, y1 = 1;
    while (r1 != 0) {
        long long t = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - t * x1);
        std::tie(y0, y1) = std::make_pair(y1, y0 - t * y1);
    }
    // x0 p + y0 q = r0 = +-1
    double ang = 2 * std::numbers::pi * k / n * r0;
    cd c = std::polar(1.0, ang * x0), d = std::polar(1.0, ang * y0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.8, 1.2), a(0, 2 * std::numbers::pi);
    for (int i = 0; i < 5; ++i) {
        cd s = std::polar(u(rng), a(rng));
        cd M = c * std::pow(s, (double)q), L = d * std::pow(s, (double)-p);
        if (std::abs(eval(f, M, L)) > 1e-9 * std::max(1.0, scale(f, M, L))) return false;
    }
    return true;
}

std::vector<Lattice> brute_hull(std::vector<Lattice> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cr = [](Lattice o, Lattice a, Lattice b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<Lattice> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cr(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cr(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

std::set<Lattice> as_set(const std::vector<Lattice>& v) { return {v.begin(), v.end()}; }

BivPoly random_poly(std::mt19937_64& rng, int terms, int range) {
    std::uniform_int_distribution<int> e(-range, range), c(-5, 5);
    BivPoly f;
    while ((int)f.terms().size() < terms) {
        int cc = c(rng);
        if (cc != 0) f.add_term(e(rng), e(rng), cc);
    }
    return f;
}

// Terms of f on the face maximizing <normal, .>, with L -> 1 (M -> 1 if the face is vertical).
LaurentPoly face(const BivPoly& f, Lattice normal, bool vertical) {
    long long best = LLONG_MIN;
    for (const auto& [k, c] : f.terms()) best = std::max(best, normal.first * k.first + normal.second * k.second);
    LaurentPoly out;
    for (const auto& [k, c] : f.terms())
        if (normal.first * k.first + normal.second * k.second == best)
            out = out + LaurentPoly::monomial(c, (int)(vertical ? k.second : k.first));
    return out;
}

}  // namespace

TEST(BivPoly, JsonRoundTrip) {
    auto f = tri({{0, 0, 1}, {6, 1, 1}});
    EXPECT_EQ(BivPoly::parse_json(f.to_json()), f);
    EXPECT_EQ(BivPoly::parse_json("[[6,1,1],[0,0,1]]"), f);
    try {
        BivPoly::parse_json("[[1,2]]");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaError);
    }
}

TEST(NewtonPolygon, TrefoilSegment) {
    auto poly = newton_polygon(tri({{0, 0, 1}, {6, 1, 1}}));
    EXPECT_TRUE(poly.is_segment());
    auto s = boundary_slopes_from_sides(poly);
    ASSERT_FALSE(s.empty());
    for (const auto& x : s) EXPECT_EQ(x, Slope(6, 1));
}

TEST(NewtonPolygon, FigureEight) {
    auto f = BivPoly::parse_json(read_file(std::string(KNOTLAB_DATA_DIR) + "/apoly/4_1.json"));
    auto slopes = boundary_slopes_from_sides(newton_polygon(f));
    std::set<Slope> got(slopes.begin(), slopes.end());
    EXPECT_EQ(got, (std::set<Slope>{Slope(4, 1), Slope(-4, 1)}));
    for (const auto& r : side_reports(f)) EXPECT_TRUE(r.cyclotomic) << r.edge.str();
}

TEST(NewtonPolygon, PointAndHorizontal) {
    EXPECT_TRUE(newton_polygon(tri({{2, 3, 5}})).is_point());
    auto s = boundary_slopes_from_sides(newton_polygon(tri({{0, 0, 1}, {3, 0, 1}})));
    ASSERT_FALSE(s.empty());
    EXPECT_TRUE(s.front().is_infinite());
}

TEST(NewtonPolygon, MinkowskiMatchesBruteForce) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> nterms(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_poly(rng, nterms(rng), 4);
        auto g = random_poly(rng, nterms(rng), 4);
        auto pf = newton_polygon(f), pg = newton_polygon(g);
        std::vector<Lattice> sums;
        for (auto a : pf.vertices)
            for (auto b : pg.vertices) sums.emplace_back(a.first + b.first, a.second + b.second);
        auto m = minkowski_sum(pf, pg);
        EXPECT_EQ(as_set(m.vertices), as_set(brute_hull(sums))) << trial;
        // Newton polygon of a product is the Minkowski sum
        EXPECT_EQ(as_set(newton_polygon(f * g).vertices), as_set(m.vertices)) << trial;
    }
}

TEST(NewtonPolygon, HullMatchesBruteForce) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto f = random_poly(rng, 1 + trial % 12, 5);
        std::vector<Lattice> pts;
        for (const auto& [k, c] : f.terms()) pts.push_back(k);
        EXPECT_EQ(as_set(newton_polygon(f).vertices), as_set(brute_hull(pts)));
    }
}

TEST(BinomialIrreducibility, Gcd) {
    for (long long p = -12; p <= 12; ++p)
        for (long long q = -12; q <= 12; ++q) {
            if (p == 0 && q == 0) continue;
            EXPECT_EQ(binomial_irreducibility(p, q), std::gcd(p, q) == 1) << p << "," << q;
        }
}

TEST(DividesBinomial, TrefoilFactor) {
    auto f = tri({{0, 0, 1}, {6, 1, 1}});
    EXPECT_TRUE(divides_binomial(f, 6, 1, RootOfUnity(2, 1)));
    EXPECT_FALSE(divides_binomial(f, 6, 1, RootOfUnity(1, 0)));
    EXPECT_EQ(RootOfUnity(2, 1).str(), "-1");
    try {
        divides_binomial(f, 6, 2, RootOfUnity(2, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotCoprime);
    }
}

TEST(DividesBinomial, ConstructAndPerturb) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> pq(-7, 7), ord(1, 8), ex(-3, 3), cf(-4, 4);
    int cases = 0;
    while (cases < 200) {
        long long p = pq(rng), q = pq(rng);
        if (std::gcd(p, q) != 1) continue;
        long long n = ord(rng);
        // Phi_n(M^p L^q) vanishes at every primitive n-th root omega
        BivPoly phi;
        const auto& cyc = cyclotomic((int)n);
        for (int e = 0; e <= cyc.high(); ++e)
            if (cyc.coeff(e) != 0) phi.add_term(e * p, e * q, cyc.coeff(e));
        BivPoly g = random_poly(rng, 1 + cases % 4, 3);
        BivPoly a = phi * g;
        long long k = 1;
        while (std::gcd(k, n) != 1) ++k;
        RootOfUnity w(n, k);
        ASSERT_TRUE(vanishes_on_binomial(a, p, q, n, k));
        EXPECT_TRUE(divides_binomial(a, p, q, w)) << p << " " << q << " " << n;

        BivPoly pert = a;
        int c = cf(rng);
        pert.add_term(ex(rng), ex(rng), c == 0 ? 1 : c);
        EXPECT_EQ(divides_binomial(pert, p, q, w), vanishes_on_binomial(pert, p, q, n, k)) << p << " " << q << " " << n;
        ++cases;
    }
}

TEST(DividesBinomial, NonPrimitiveOmegaAgreesWithNumeric) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_poly(rng, 3, 3) * tri({{0, 0, -1}, {2, 3, 1}});
        for (long long n : {1, 2, 3, 4, 6})
            for (long long k = 0; k < n; ++k)
                EXPECT_EQ(divides_binomial(f, 2, 3, RootOfUnity(n, k)), vanishes_on_binomial(f, 2, 3, n, k));
    }
}

TEST(CycloRing, ArithmeticMatchesComplex) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> c(-6, 6);
    for (long long n : {1, 2, 3, 5, 8, 12}) {
        CycloRing R(n);
        cd w = std::polar(1.0, 2 * std::numbers::pi / n);
        auto to_c = [&](const CycloRing::Elem& e) {
            cd s = 0;
            for (size_t i = 0; i < e.size(); ++i) s += e[i].convert_to<double>() * std::pow(w, (double)i);
            return s;
        };
        for (int t = 0; t < 50; ++t) {
            std::vector<BigInt> a(6), b(6);
            for (auto& x : a) x = c(rng);
            for (auto& x : b) x = c(rng);
            auto ea = R.reduce(a), eb = R.reduce(b);
            EXPECT_NEAR(std::abs(to_c(R.mul(ea, eb)) - to_c(ea) * to_c(eb)), 0, 1e-8);
            EXPECT_NEAR(std::abs(to_c(R.add(ea, eb)) - to_c(ea) - to_c(eb)), 0, 1e-8);
        }
        EXPECT_NEAR(std::abs(to_c(R.x_pow(-1)) - std::conj(w)), 0, 1e-10);
        EXPECT_TRUE(CycloRing::is_zero(R.reduce(std::vector<BigInt>(cyclotomic((int)n).coeffs()))));
    }
}

TEST(EdgePolynomial, ProductOfFaces) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto f = random_poly(rng, 4, 3), g = random_poly(rng, 4, 3);
        auto fg = f * g;
        for (const auto& side : newton_polygon(fg).sides) {
            bool vertical = side.from.first == side.to.first;
            // outward normal of a counterclockwise side is (dy, -dx)
            Lattice normal{side.direction.second, -side.direction.first};
            auto lhs = edge_polynomial(fg, side);
            auto rhs = face(f, normal, vertical) * face(g, normal, vertical);
            EXPECT_EQ(lhs, rhs) << trial;
        }
    }
}

TEST(EdgePolynomial, RejectsNonSide) {
    auto f = tri({{0, 0, 1}, {2, 0, 1}, {0, 2, 1}, {2, 2, 1}});
    PolygonSide diag{{0, 0}, {2, 2}, {1, 1}};
    try {
        edge_polynomial(f, diag);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SideNotOnPolygon);
    }
}

TEST(CyclotomicProductTest, MultiplyBack) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> idx(1, 30), cnt(1, 4), sh(-5, 5);
    for (int t = 0; t < 200; ++t) {
        LaurentPoly p(t % 2 ? 1 : -1);
        int k = cnt(rng);
        for (int i = 0; i < k; ++i) p = p * cyclotomic(idx(rng));
        p = p.shifted(sh(rng));
        EXPECT_TRUE(cyclotomic_product_test(p)) << p.str();
        EXPECT_FALSE(cyclotomic_product_test(p * LaurentPoly::parse("t-2"))) << p.str();
        EXPECT_FALSE(cyclotomic_product_test(p * 2)) << p.str();
    }
    EXPECT_TRUE(cyclotomic_product_test(LaurentPoly::parse("t^6+1")));
    EXPECT_FALSE(cyclotomic_product_test(LaurentPoly::parse("t^2+3t+1")));
}
