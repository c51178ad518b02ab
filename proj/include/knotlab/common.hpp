#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <stdexcept>
#include <string>

namespace knotlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<long long>;

enum class Errc {
    NonCommuting,
    NotUnit,
    SamplingTooCoarse,
    SolverDiverged,
    PresentationInvalid,
    InvalidTorusParams,
    ZeroWinding,
    DegenerateEndpoints,
    NoArcs,
    SlopesDisagree,
    SlopeEqualsR,
    IrrationalIntercept,
    InvalidCableParams,
    NotAKnot,
    NotSymmetric,
    NotInteger,
    ZeroPolynomial,
    DegeneratePoint,
    SideNotOnPolygon,
    NotCoprime,
    NotAlternating,
    NonRealizableCode,
    Disconnected,
    NotDivergenceFree,
    NotEquivariant,
    StepSizeUnderflow,
    NegativeArgument,
    BoundViolated,
    SchemaError,
    ConsistencyError,
    ParseError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

// Reduced surgery slope m/n with n >= 0; n == 0 is the slope at infinity.
struct Slope {
    long long m = 1;
    long long n = 0;

    Slope() = default;
    Slope(long long m_, long long n_);
    static Slope infinity() { return Slope(1, 0); }
    static Slope from_rational(const Rational& r) { return Slope(r.numerator(), r.denominator()); }

    bool is_infinite() const { return n == 0; }
    Rational value() const;
    double to_double() const;
    std::string str() const;
    static Slope parse(const std::string& s);

    friend bool operator==(const Slope& a, const Slope& b) { return a.m == b.m && a.n == b.n; }
    friend bool operator<(const Slope& a, const Slope& b);
};

std::string rational_str(const Rational& r);
Rational parse_rational(const std::string& s);

// Best rational approximation with denominator <= max_den (continued fractions).
Rational rational_reconstruct(double x, long long max_den);

}  // namespace knotlab
