#pragma once

#include "knotlab/common.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace knotlab {

// Exact integer Laurent polynomial sum a_j t^j.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long long c) : LaurentPoly(BigInt(c)) {}  // NOLINT: constants convert
    LaurentPoly(const BigInt& c);                          // NOLINT
    LaurentPoly(int low, std::vector<BigInt> coeffs);
    static LaurentPoly monomial(const BigInt& c, int e);
    static LaurentPoly from_ints(int low, const std::vector<long long>& coeffs);

    bool is_zero() const { return c_.empty(); }
    int low() const { return low_; }
    int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
    int span() const { return is_zero() ? 0 : high() - low(); }
    BigInt coeff(int e) const;
    const std::vector<BigInt>& coeffs() const { return c_; }

    LaurentPoly operator-() const;
    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.low_ == b.low_ && a.c_ == b.c_;
    }
    LaurentPoly shifted(int k) const;  // t^k * this

    BigInt eval(long long t) const;    // t = +-1 only for negative exponents
    std::complex<double> eval(std::complex<double> t) const;
    bool is_symmetric() const;         // a_j = a_{-j}
    bool is_unit() const;              // +-t^k

    // "3t^2-6t+7-6t^-1+3t^-2"
    std::string str() const;
    static LaurentPoly parse(const std::string& s);
    // {"low": -1, "coeffs": [1, -1, 1]}; coefficients beyond 64 bits are strings.
    std::string to_json() const;
    static LaurentPoly parse_json(const std::string& text);
    // Exponent-indexed coefficient list from low to high.
    std::vector<long long> to_int_vector() const;

private:
    void trim();
    int low_ = 0;
    std::vector<BigInt> c_;
};

// Exact quotient a/b in Z[t, t^-1], or nullopt if b does not divide a.
std::optional<LaurentPoly> exact_divide(const LaurentPoly& a, const LaurentPoly& b);

// Cyclotomic polynomial Phi_n as an ordinary polynomial (low exponent 0).
const LaurentPoly& cyclotomic(int n);
int euler_phi(int n);

// Shift and sign so that Delta(t) = Delta(1/t) and Delta(1) = 1.
LaurentPoly normalize_alexander(const LaurentPoly& p);

struct CyclotomicSplit {
    std::vector<int> indices;       // with multiplicity, ascending
    LaurentPoly cyclotomic_part;    // product of the Phi_n (shifted)
    LaurentPoly remainder;          // input = cyclotomic_part * remainder
};
CyclotomicSplit cyclotomic_factor_split(const LaurentPoly& p);

double eval_unit_circle(const LaurentPoly& p, double theta);

struct CircleRoot {
    double lo = 0, hi = 0;  // bracket of a sign change of f(theta)
    bool odd_order = true;
    bool root_of_unity = false;
    int cyclotomic_index = 0;
    int multiplicity = 0;
};

struct CircleRootReport {
    std::vector<CircleRoot> roots;  // sign changes of the cyclotomic-free part
    std::vector<CircleRoot> unity_roots;  // from stripped cyclotomic factors
    std::vector<std::string> notes;
};
CircleRootReport circle_root_report(const LaurentPoly& p, int samples = 10000);

struct ObstructionResult {
    bool obstructed = false;
    double witness_lo = 0, witness_hi = 0;
    std::vector<std::string> notes;
};
ObstructionResult odd_circle_root_obstruction(const LaurentPoly& p);

BigInt determinant(const LaurentPoly& p);
BigInt coeff_abs_sum(const LaurentPoly& p);
bool fox_milnor_necessary(const LaurentPoly& p);
bool small_knot_multiple_rule(const LaurentPoly& p, const Rational& r);

// Braid generators are +-i for sigma_i^{+-1}, 1-based; strands defaults to max|i|+1.
LaurentPoly alexander_from_braid(const std::vector<int>& braid, int strands = 0);
// Permutation induced on strands (0-based); closure is a knot iff it is one cycle.
std::vector<int> braid_permutation(const std::vector<int>& braid, int strands);

// Fox calculus on a presentation; generator images in H_1 are t^weights[i].
// Words are lists of signed 1-based generator indices.
LaurentPoly alexander_from_relators(int generators, const std::vector<std::vector<int>>& relators,
                                    const std::vector<int>& weights);

// Fraction-free determinant over Z[t, t^-1].
LaurentPoly det_bareiss(std::vector<std::vector<LaurentPoly>> m);
BigInt det_bareiss(std::vector<std::vector<BigInt>> m);

}  // namespace knotlab
