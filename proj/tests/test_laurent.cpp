#include "knotlab/knot_record.hpp"
#include "knotlab/laurent.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

using namespace knotlab;

namespace {

// Independent dense integer polynomial arithmetic (low degree first).
using IntPoly = std::vector<long long>;

IntPoly mul(const IntPoly& a, const IntPoly& b) {
    IntPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// Exact division by a monic-up-to-sign divisor; asserts zero remainder.
IntPoly divide(IntPoly a, const IntPoly& b) {
    IntPoly q(a.size() - b.size() + 1, 0);
    for (size_t i = q.size(); i-- > 0;) {
        long long c = a[i + b.size() - 1] / b.back();
        q[i] = c;
        for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
    }
    for (long long x : a) EXPECT_EQ(x, 0);
    return q;
}

IntPoly t_pow_minus_one(int n) {
    IntPoly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    return p;
}

// (t^{pq}-1)(t-1)/((t^p-1)(t^q-1)), centred.
LaurentPoly torus_closed_form(int p, int q) {
    IntPoly num = mul(t_pow_minus_one(p * q), t_pow_minus_one(1));
    IntPoly quo = divide(divide(num, t_pow_minus_one(p)), t_pow_minus_one(q));
    int half = static_cast<int>(quo.size() - 1) / 2;
    return LaurentPoly::from_ints(-half, quo);
}

std::complex<double> direct_eval(const LaurentPoly& p, double theta) {
    std::complex<double> s = 0;
    for (int e = p.low(); e <= p.high(); ++e)
        s += p.coeff(e).convert_to<double>() * std::polar(1.0, e * theta);
    return s;
}

std::map<std::string, KnotRecord> table() {
    std::map<std::string, KnotRecord> out;
    for (const char* f : {"knots_3_8.csv", "knots_9.csv", "knots_10.csv"})
        for (auto& r : ingest_table(std::string(KNOTLAB_DATA_DIR) + "/" + f)) out[r.name] = r;
    return out;
}

const LaurentPoly kLehmer = LaurentPoly::parse("t^5-t^4+t^2-t+1-t^-1+t^-2-t^-4+t^-5");  // P(-2,3,7)

}  // namespace

TEST(Parse, TextRoundTrip) {
    for (const char* s : {"3t^2-6t+7-6t^-1+3t^-2", "t-1+t^-1", "-t+3-t^-1", "1", "0", "t^10-t^-3"}) {
        auto p = LaurentPoly::parse(s);
        EXPECT_EQ(LaurentPoly::parse(p.str()), p) << s;
    }
    EXPECT_EQ(LaurentPoly::parse("3t^2-6t+7-6t^-1+3t^-2").str(), "3t^2-6t+7-6t^-1+3t^-2");
}

TEST(Parse, JsonRoundTrip) {
    auto p = LaurentPoly::parse("3t^2-6t+7-6t^-1+3t^-2");
    EXPECT_EQ(p.to_json(), R"({"coeffs":[3,-6,7,-6,3],"low":-2})");
    EXPECT_EQ(LaurentPoly::parse_json(p.to_json()), p);
    LaurentPoly big = LaurentPoly(BigInt("123456789012345678901234567890")) * LaurentPoly::parse("t-1");
    EXPECT_EQ(LaurentPoly::parse_json(big.to_json()), big);
}

TEST(Parse, Malformed) {
    try {
        LaurentPoly::parse("3t^^2");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
    }
    try {
        LaurentPoly::parse_json(R"({"low":0})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
    }
}

TEST(AlexanderFromBraid, TrefoilMatchesTorusFormula) {
    auto d = normalize_alexander(alexander_from_braid({1, 1, 1}));
    EXPECT_EQ(d, torus_closed_form(2, 3));
    EXPECT_EQ(d, LaurentPoly::parse("t-1+t^-1"));
}

TEST(AlexanderFromBraid, TorusFamily) {
    // T(2,2k+1) and T(3,4), T(3,5) braids against the closed form
    for (int k = 1; k <= 5; ++k) {
        std::vector<int> b(2 * k + 1, 1);
        EXPECT_EQ(normalize_alexander(alexander_from_braid(b)), torus_closed_form(2, 2 * k + 1));
    }
    for (int q : {4, 5}) {
        std::vector<int> b;
        for (int i = 0; i < q; ++i) b.insert(b.end(), {1, 2});
        EXPECT_EQ(normalize_alexander(alexander_from_braid(b)), torus_closed_form(3, q));
    }
}

TEST(AlexanderFromBraid, FigureEightAndUnknot) {
    EXPECT_EQ(normalize_alexander(alexander_from_braid({1, -2, 1, -2})), LaurentPoly::parse("-t+3-t^-1"));
    EXPECT_EQ(normalize_alexander(alexander_from_braid({1})), LaurentPoly(1));
    EXPECT_EQ(normalize_alexander(alexander_from_braid({1, 2})), LaurentPoly(1));
}

TEST(AlexanderFromBraid, MatchesTable) {
    int checked = 0;
    for (const auto& [name, r] : table()) {
        if (r.braid.empty() || !r.alexander) continue;
        EXPECT_EQ(normalize_alexander(alexander_from_braid(r.braid)), *r.alexander) << name;
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(Normalize, IdempotentAndUnitAtOne) {
    for (const char* s : {"t^3-t^2+t", "-t^2+3t-1", "2t^4-5t^3+2t^2", "1"}) {
        auto n = normalize_alexander(LaurentPoly::parse(s));
        EXPECT_EQ(normalize_alexander(n), n);
        EXPECT_EQ(n.eval(1), 1);
        EXPECT_TRUE(n.is_symmetric());
    }
    try {
        normalize_alexander(LaurentPoly::parse("t^2+t+1-t^-1"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotSymmetric);
    }
}

TEST(EvalUnitCircle, KnownValues) {
    EXPECT_NEAR(eval_unit_circle(LaurentPoly::parse("3t^2-6t+7-6t^-1+3t^-2"), std::numbers::pi / 3), -2, 1e-10);
    EXPECT_NEAR(eval_unit_circle(kLehmer, std::numbers::pi / 2), -3, 1e-10);
    for (const char* s : {"t-1+t^-1", "3t^2-6t+7-6t^-1+3t^-2", "-t+3-t^-1"})
        EXPECT_NEAR(eval_unit_circle(LaurentPoly::parse(s), 0), 1, 1e-12);
}

TEST(EvalUnitCircle, AgreesWithDirectComplexEvaluation) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> deg(1, 6), coef(-9, 9);
    std::uniform_real_distribution<double> th(0, 2 * std::numbers::pi);
    for (int i = 0; i < 1000; ++i) {
        int d = deg(rng);
        std::vector<long long> half(d + 1);
        for (auto& c : half) c = coef(rng);
        std::vector<long long> c(2 * d + 1);
        for (int j = 0; j <= d; ++j) c[d + j] = c[d - j] = half[j];
        auto p = LaurentPoly::from_ints(-d, c);
        double theta = th(rng);
        EXPECT_NEAR(eval_unit_circle(p, theta), direct_eval(p, theta).real(), 1e-10);
        EXPECT_NEAR(std::abs(p.eval(std::polar(1.0, theta)) - direct_eval(p, theta)), 0, 1e-10);
    }
}

TEST(CyclotomicSplit, Examples) {
    auto a = cyclotomic_factor_split(LaurentPoly::parse("t-1+t^-1"));
    EXPECT_EQ(a.indices, std::vector<int>{6});
    EXPECT_TRUE(a.remainder.is_unit());

    auto b = cyclotomic_factor_split(LaurentPoly::parse("t-1+t^-1") * LaurentPoly::parse("5t-9+5t^-1"));
    EXPECT_EQ(b.indices, std::vector<int>{6});
    EXPECT_EQ(normalize_alexander(b.remainder), LaurentPoly::parse("5t-9+5t^-1"));

    auto c = cyclotomic_factor_split(LaurentPoly(1));
    EXPECT_TRUE(c.indices.empty());
    EXPECT_EQ(c.remainder, LaurentPoly(1));
}

TEST(CyclotomicSplit, ProductAndRemainderOverCorpus) {
    for (const auto& [name, r] : table()) {
        if (!r.alexander) continue;
        auto s = cyclotomic_factor_split(*r.alexander);
        EXPECT_EQ(s.cyclotomic_part * s.remainder, *r.alexander) << name;
        // remainder vanishes at no root of unity of order n with phi(n) <= 2d
        const int d = std::max(1, s.remainder.span());
        for (int n = 1; n <= 4 * d * d + 2; ++n) {
            if (euler_phi(n) > 2 * d) continue;
            for (int k = 0; k < n; ++k) {
                if (std::gcd(k, n) != 1) continue;
                EXPECT_GT(std::abs(direct_eval(s.remainder, 2 * std::numbers::pi * k / n)), 1e-8) << name << " n=" << n;
            }
        }
    }
}

TEST(OddCircleRoot, LehmerObstructedWithWitness) {
    auto ob = odd_circle_root_obstruction(kLehmer);
    ASSERT_TRUE(ob.obstructed);
    double f_lo = direct_eval(kLehmer, ob.witness_lo).real();
    double f_hi = direct_eval(kLehmer, ob.witness_hi).real();
    EXPECT_LT(f_lo * f_hi, 0);
    EXPECT_GE(ob.witness_lo, 0);
    EXPECT_LE(ob.witness_hi, std::numbers::pi / 2 + 1e-12);
}

TEST(OddCircleRoot, TrefoilNotObstructed) {
    EXPECT_FALSE(odd_circle_root_obstruction(LaurentPoly::parse("t-1+t^-1")).obstructed);
    EXPECT_FALSE(odd_circle_root_obstruction(LaurentPoly::parse("-t+3-t^-1")).obstructed);
}

TEST(OddCircleRoot, NineCrossingExamples) {
    auto t = table();
    for (const char* n : {"9_38", "9_49"}) EXPECT_TRUE(odd_circle_root_obstruction(*t.at(n).alexander).obstructed) << n;
}

TEST(OddCircleRoot, TenCrossingNegativeAtPiOverFour) {
    auto t = table();
    for (int n : {80, 92, 101, 111, 127, 128, 134, 145, 149, 150, 154, 157, 160, 161}) {
        const auto& d = *t.at("10_" + std::to_string(n)).alexander;
        EXPECT_LT(direct_eval(d, std::numbers::pi / 4).real(), 0) << n;
        EXPECT_TRUE(odd_circle_root_obstruction(d).obstructed) << n;
    }
}

TEST(Determinant, Examples) {
    auto t = table();
    EXPECT_EQ(determinant(LaurentPoly::parse("t-1+t^-1")), 3);
    EXPECT_EQ(determinant(*t.at("9_43").alexander), 13);
    EXPECT_EQ(determinant(LaurentPoly::parse("-t^2+3t-3+3t^-1-t^-2")), 11);
    EXPECT_EQ(LaurentPoly::parse("-t^2+3t-3+3t^-1-t^-2").eval(-1), -11);
}

TEST(Determinant, OddOverCorpus) {
    for (const auto& [name, r] : table())
        if (r.alexander) EXPECT_EQ(determinant(*r.alexander) % 2, 1) << name;
}

TEST(CoeffAbsSum, Examples) {
    EXPECT_EQ(coeff_abs_sum(LaurentPoly::parse("t-1+t^-1")), 3);
    EXPECT_EQ(coeff_abs_sum(LaurentPoly::parse("3t^2-6t+7-6t^-1+3t^-2")), 25);
    EXPECT_EQ(coeff_abs_sum(LaurentPoly(1)), 1);
}

TEST(FoxMilnor, Examples) {
    EXPECT_FALSE(fox_milnor_necessary(LaurentPoly::parse("-t+3-t^-1")));
    EXPECT_TRUE(fox_milnor_necessary(LaurentPoly::parse("-2t+5-2t^-1")));
    EXPECT_TRUE(fox_milnor_necessary(LaurentPoly(1)));
}

TEST(SmallKnotMultipleRule, Examples) {
    auto tref = LaurentPoly::parse("t-1+t^-1");
    EXPECT_TRUE(small_knot_multiple_rule(tref, Rational(6)));
    EXPECT_FALSE(small_knot_multiple_rule(tref, Rational(5)));
    auto no_roots = LaurentPoly::parse("-2t+5-2t^-1");
    for (int r = -20; r <= 20; ++r) EXPECT_TRUE(small_knot_multiple_rule(no_roots, Rational(r)));
    // t^2 - t + 1 - t^-1 + t^-2 = t^-2 Phi_10(t): oracle index 10 by direct comparison.
    auto p10 = LaurentPoly::parse("t^2-t+1-t^-1+t^-2");
    EXPECT_EQ(p10.shifted(2), cyclotomic(10));
    EXPECT_TRUE(small_knot_multiple_rule(p10, Rational(10)));
    EXPECT_FALSE(small_knot_multiple_rule(p10, Rational(5)));
    try {
        small_knot_multiple_rule(tref, Rational(13, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotInteger);
    }
}

TEST(Cyclotomic, DegreesAndProducts) {
    // prod_{d | n} Phi_d = t^n - 1
    for (int n = 1; n <= 30; ++n) {
        LaurentPoly prod(1);
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) prod = prod * cyclotomic(d);
        EXPECT_EQ(prod, LaurentPoly::from_ints(0, t_pow_minus_one(n)));
        EXPECT_EQ(cyclotomic(n).high(), euler_phi(n));
    }
}

TEST(DetBareiss, MatchesCofactorExpansion) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> c(-5, 5);
    std::function<long long(const std::vector<std::vector<long long>>&)> cof =
        [&](const std::vector<std::vector<long long>>& m) -> long long {
        if (m.size() == 1) return m[0][0];
        long long s = 0;
        for (size_t j = 0; j < m.size(); ++j) {
            std::vector<std::vector<long long>> sub;
            for (size_t i = 1; i < m.size(); ++i) {
                std::vector<long long> row;
                for (size_t k = 0; k < m.size(); ++k)
                    if (k != j) row.push_back(m[i][k]);
                sub.push_back(row);
            }
            s += (j % 2 ? -1 : 1) * m[0][j] * cof(sub);
        }
        return s;
    };
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + trial % 5;
        std::vector<std::vector<long long>> m(n, std::vector<long long>(n));
        std::vector<std::vector<BigInt>> b(n, std::vector<BigInt>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) b[i][j] = m[i][j] = c(rng);
        EXPECT_EQ(det_bareiss(b), cof(m));
    }
}
