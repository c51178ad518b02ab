#pragma once

#include "knotlab/common.hpp"
#include "knotlab/laurent.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace knotlab {

using Lattice = std::pair<long long, long long>;  // (M exponent, L exponent)

// Exact bivariate Laurent polynomial in M, L.
class BivPoly {
public:
    BivPoly() = default;
    static BivPoly monomial(const BigInt& c, long long m, long long l);
    static BivPoly from_triples(const std::vector<std::array<long long, 3>>& t);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Lattice, BigInt>& terms() const { return terms_; }
    BigInt coeff(long long m, long long l) const;
    void add_term(long long m, long long l, const BigInt& c);

    friend BivPoly operator+(const BivPoly& a, const BivPoly& b);
    friend BivPoly operator-(const BivPoly& a, const BivPoly& b);
    friend BivPoly operator*(const BivPoly& a, const BivPoly& b);
    friend bool operator==(const BivPoly& a, const BivPoly& b) { return a.terms_ == b.terms_; }

    BigInt content() const;
    BivPoly primitive() const;  // divided by content, leading sign kept
    std::string str() const;

    // JSON array of [m_exp, l_exp, coeff] triples.
    static BivPoly parse_json(const std::string& text);
    std::string to_json() const;

private:
    std::map<Lattice, BigInt> terms_;
};

struct PolygonSide {
    Lattice from, to;
    Lattice direction;  // primitive
};

struct NewtonPolygon {
    std::vector<Lattice> vertices;  // counterclockwise; 1 or 2 entries when degenerate
    std::vector<PolygonSide> sides;
    bool is_point() const { return vertices.size() == 1; }
    bool is_segment() const { return vertices.size() == 2; }
};

NewtonPolygon convex_hull(std::vector<Lattice> pts);
NewtonPolygon newton_polygon(const BivPoly& f);
NewtonPolygon minkowski_sum(const NewtonPolygon& p, const NewtonPolygon& q);
bool binomial_irreducibility(long long p, long long q);

// Boundary slope of a side with direction (dm, dl) is dm/dl; horizontal sides give inf.
std::vector<Slope> boundary_slopes_from_sides(const NewtonPolygon& poly);

// Coefficients along a side collected by M exponent (L exponent for vertical sides).
LaurentPoly edge_polynomial(const BivPoly& f, const PolygonSide& side);
bool cyclotomic_product_test(const LaurentPoly& theta);

struct RootOfUnity {
    long long order = 1;
    long long power = 0;
    RootOfUnity() = default;
    RootOfUnity(long long n, long long k);  // e^{2 pi i k / n}, reduced
    std::string str() const;
};

// Z[x]/Phi_n(x); x stands for a primitive n-th root of unity.
class CycloRing {
public:
    explicit CycloRing(long long n);
    long long order() const { return n_; }
    int degree() const { return static_cast<int>(phi_.size()) - 1; }

    using Elem = std::vector<BigInt>;  // length degree()
    Elem zero() const { return Elem(degree(), 0); }
    Elem x_pow(long long e) const;
    Elem reduce(std::vector<BigInt> poly) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem scale(const Elem& a, const BigInt& c) const;
    Elem mul(const Elem& a, const Elem& b) const;
    static bool is_zero(const Elem& a);

private:
    long long n_;
    std::vector<BigInt> phi_;  // monic, low to high
};

// Exact test that M^p L^q - omega divides A over Z[omega].
bool divides_binomial(const BivPoly& a, long long p, long long q, const RootOfUnity& omega);

// Boundary slopes read off the A-polynomial's sides together with their edge data.
struct SideReport {
    PolygonSide side;
    Slope boundary_slope;
    LaurentPoly edge;
    bool cyclotomic = false;
};
std::vector<SideReport> side_reports(const BivPoly& a);

}  // namespace knotlab
