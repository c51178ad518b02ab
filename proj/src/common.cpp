#include "knotlab/common.hpp"

#include <cmath>
#include <numeric>

namespace knotlab {

const char* errc_name(Errc e) {
    switch (e) {
        case Errc::NonCommuting: return "NonCommuting";
        case Errc::NotUnit: return "NotUnit";
        case Errc::SamplingTooCoarse: return "SamplingTooCoarse";
        case Errc::SolverDiverged: return "SolverDiverged";
        case Errc::PresentationInvalid: return "PresentationInvalid";
        case Errc::InvalidTorusParams: return "InvalidTorusParams";
        case Errc::ZeroWinding: return "ZeroWinding";
        case Errc::DegenerateEndpoints: return "DegenerateEndpoints";
        case Errc::NoArcs: return "NoArcs";
        case Errc::SlopesDisagree: return "SlopesDisagree";
        case Errc::SlopeEqualsR: return "SlopeEqualsR";
        case Errc::IrrationalIntercept: return "IrrationalIntercept";
        case Errc::InvalidCableParams: return "InvalidCableParams";
        case Errc::NotAKnot: return "NotAKnot";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NotInteger: return "NotInteger";
        case Errc::ZeroPolynomial: return "ZeroPolynomial";
        case Errc::DegeneratePoint: return "DegeneratePoint";
        case Errc::SideNotOnPolygon: return "SideNotOnPolygon";
        case Errc::NotCoprime: return "NotCoprime";
        case Errc::NotAlternating: return "NotAlternating";
        case Errc::NonRealizableCode: return "NonRealizableCode";
        case Errc::Disconnected: return "Disconnected";
        case Errc::NotDivergenceFree: return "NotDivergenceFree";
        case Errc::NotEquivariant: return "NotEquivariant";
        case Errc::StepSizeUnderflow: return "StepSizeUnderflow";
        case Errc::NegativeArgument: return "NegativeArgument";
        case Errc::BoundViolated: return "BoundViolated";
        case Errc::SchemaError: return "SchemaError";
        case Errc::ConsistencyError: return "ConsistencyError";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

Slope::Slope(long long m_, long long n_) : m(m_), n(n_) {
    if (m == 0 && n == 0) throw Error(Errc::ParseError, "slope 0/0");
    if (n < 0) {
        m = -m;
        n = -n;
    }
    long long g = std::gcd(m < 0 ? -m : m, n);
    if (g > 1) {
        m /= g;
        n /= g;
    }
    if (n == 0) m = 1;
}

Rational Slope::value() const {
    if (n == 0) throw Error(Errc::ParseError, "infinite slope has no rational value");
    return Rational(m, n);
}

double Slope::to_double() const {
    return n == 0 ? INFINITY : static_cast<double>(m) / static_cast<double>(n);
}

std::string Slope::str() const {
    if (n == 0) return "inf";
    if (n == 1) return std::to_string(m);
    return std::to_string(m) + "/" + std::to_string(n);
}

Slope Slope::parse(const std::string& s) {
    if (s == "inf" || s == "oo" || s == "1/0") return infinity();
    Rational r = parse_rational(s);
    return Slope(r.numerator(), r.denominator());
}

bool operator<(const Slope& a, const Slope& b) {
    if (a.n == 0 || b.n == 0) return a.n != 0 && b.n == 0;
    return Rational(a.m, a.n) < Rational(b.m, b.n);
}

std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
    try {
        size_t pos = 0;
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            long long v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return Rational(v);
        }
        long long a = std::stoll(s.substr(0, slash), &pos);
        if (pos != slash) throw std::invalid_argument(s);
        std::string den = s.substr(slash + 1);
        long long b = std::stoll(den, &pos);
        if (pos != den.size() || b == 0) throw std::invalid_argument(s);
        return Rational(a, b);
    } catch (const std::logic_error&) {
        throw Error(Errc::ParseError, "bad rational '" + s + "'");
    }
}

Rational rational_reconstruct(double x, long long max_den) {
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double y = x;
    Rational best(static_cast<long long>(std::llround(x)));
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(y);
        long long ai = static_cast<long long>(a);
        long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        best = Rational(h2, k2);
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        double frac = y - a;
        if (std::fabs(frac) < 1e-12) break;
        y = 1.0 / frac;
    }
    return best;
}

}  // namespace knotlab
