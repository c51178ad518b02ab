#include "knotlab/slopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace knotlab {

const char* verdict_name(SlopeVerdict v) {
    switch (v) {
        case SlopeVerdict::Avoided: return "avoided";
        case SlopeVerdict::Hit: return "hit";
        case SlopeVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

double gap_to_lattice(double g) {
    double k = std::round(g / kTwoPi);
    return std::abs(g - k * kTwoPi);
}

}  // namespace

AvoidanceCertificate check_slope(const PillowcaseImage& img, const Slope& s, double hit_threshold) {
    AvoidanceCertificate cert;
    cert.slope = s;
    cert.hit_threshold = hit_threshold;
    cert.min_gap = std::numeric_limits<double>::infinity();
    const double m = static_cast<double>(s.m), n = static_cast<double>(s.n);
    auto visit = [&](double a, double b) {
        double gap = gap_to_lattice(m * a + n * b);
        if (gap < cert.min_gap) {
            cert.min_gap = gap;
            cert.witness_alpha = a;
            cert.witness_beta = wrap_2pi(b);
        }
    };
    for (const auto& arc : img.arcs) {
        auto lift = lifted_arc(arc);
        for (size_t i = 0; i < lift.size(); ++i) {
            visit(lift[i][0], lift[i][1]);
            if (i == 0) continue;
            double g0 = m * lift[i - 1][0] + n * lift[i - 1][1];
            double g1 = m * lift[i][0] + n * lift[i][1];
            cert.slack = std::max(cert.slack, std::abs(g1 - g0) / 2);
            if (std::floor(g0 / kTwoPi) != std::floor(g1 / kTwoPi) && !cert.crossing) {
                cert.crossing = true;
                double k = std::max(std::floor(g0 / kTwoPi), std::floor(g1 / kTwoPi)) * kTwoPi;
                double t = g1 != g0 ? (k - g0) / (g1 - g0) : 0;
                cert.witness_alpha = lift[i - 1][0] + t * (lift[i][0] - lift[i - 1][0]);
                cert.witness_beta = wrap_2pi(lift[i - 1][1] + t * (lift[i][1] - lift[i - 1][1]));
            }
        }
    }
    for (const auto& q : img.isolated_points) visit(q.alpha, q.beta);
    cert.gap_threshold = 10 * cert.slack;
    if (cert.crossing) {
        cert.min_gap = 0;
        cert.verdict = SlopeVerdict::Hit;
    } else if (cert.min_gap < hit_threshold) {
        cert.verdict = SlopeVerdict::Hit;
    } else if (cert.min_gap > cert.gap_threshold) {
        cert.verdict = SlopeVerdict::Avoided;
    } else {
        cert.verdict = SlopeVerdict::Inconclusive;
    }
    return cert;
}

std::vector<AvoidanceCertificate> check_slopes(const PillowcaseImage& img, const std::vector<Slope>& slopes,
                                               bool parallel) {
    std::vector<AvoidanceCertificate> out(slopes.size());
    const long long count = static_cast<long long>(slopes.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long i = 0; i < count; ++i) out[i] = check_slope(img, slopes[i]);
    return out;
}

WindowCheck prop31_window(const std::array<double, 2>& p0, const std::array<double, 2>& p1, const Slope& s) {
    if (p0 == p1) throw Error(Errc::DegenerateEndpoints, "path endpoints coincide");
    if (s.n < 1) throw Error(Errc::ParseError, "slope window needs n >= 1");
    WindowCheck w;
    const double m = static_cast<double>(s.m), n = static_cast<double>(s.n);
    double da = p1[0] - p0[0], db = p1[1] - p0[1];
    if (std::abs(da) > 1e-15) {
        double r = db / da;
        w.lhs = std::abs(m / n + r);
        w.bound = kTwoPi / std::abs(da) / n;
    } else {
        w.lhs = n;
        w.bound = kTwoPi / std::abs(db);
    }
    w.margin = w.bound - w.lhs;
    w.inside = w.lhs < w.bound;
    return w;
}

std::pair<long long, long long> slope_window(const Rational& r, long long n) {
    if (n < 1) throw Error(Errc::ParseError, "slope window needs n >= 1");
    // m in [n r - |r|, n r + |r|], exactly in rationals
    Rational lo = r * n - boost::abs(r);
    Rational hi = r * n + boost::abs(r);
    auto ceil_r = [](const Rational& x) {
        long long q = x.numerator() / x.denominator();
        if (x.numerator() % x.denominator() != 0 && x.numerator() > 0) ++q;
        return q;
    };
    auto floor_r = [](const Rational& x) {
        long long q = x.numerator() / x.denominator();
        if (x.numerator() % x.denominator() != 0 && x.numerator() < 0) --q;
        return q;
    };
    return {ceil_r(lo), floor_r(hi)};
}

LimitSlopeEstimate estimate_limit_slope(const PillowcaseImage& img, long long max_den, double tol) {
    auto lines = fit_arc_lines(img, tol);
    if (lines.empty()) throw Error(Errc::NoArcs, "image has no arcs");
    LimitSlopeEstimate est;
    for (const auto& l : lines) {
        if (l.curved)
            throw Error(Errc::SlopesDisagree,
                        "arc " + std::to_string(l.arc_id) + " is curved (residual " + std::to_string(l.residual) + ")");
        est.arc_slopes.push_back(l.slope);
    }
    double mean = 0;
    for (double s : est.arc_slopes) mean += s;
    mean /= static_cast<double>(est.arc_slopes.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        est.agreement = std::max(est.agreement, std::abs(est.arc_slopes[i] - mean));
        for (size_t j = i + 1; j < lines.size(); ++j) {
            double a = est.arc_slopes[i], b = est.arc_slopes[j];
            if (std::isinf(a) || std::isinf(b) || std::abs(a - b) > tol * std::max(1.0, std::abs(a)))
                throw Error(Errc::SlopesDisagree, "arcs " + std::to_string(lines[i].arc_id) + " and " +
                                                      std::to_string(lines[j].arc_id) + " have slopes " +
                                                      std::to_string(a) + " and " + std::to_string(b));
        }
    }
    est.r_float = -mean;
    est.r = rational_reconstruct(est.r_float, max_den);
    double back = boost::rational_cast<double>(est.r);
    if (std::abs(back - est.r_float) > tol * std::max(1.0, std::abs(back)))
        throw Error(Errc::SlopesDisagree, "common slope " + std::to_string(est.r_float) +
                                              " has no rational approximation with small denominator");
    return est;
}

namespace {

// {x} with values within 1e-9 of an integer snapped, so exact multiples give 0.
double frac_snapped(double x) {
    double k = std::round(x);
    if (std::abs(x - k) < 1e-9) return 0.0;
    return x - std::floor(x);
}

}  // namespace

bool fractional_part_test(const Rational& r, double c, const Slope& s) {
    if (s.n < 1) throw Error(Errc::ParseError, "fractional part test needs n >= 1");
    Rational pq(s.m, s.n);
    if (pq == r) throw Error(Errc::SlopeEqualsR, "slope equals r");
    Rational head = Rational(s.n, 2) * (pq - r);
    double v = boost::rational_cast<double>(head) + frac_snapped(static_cast<double>(s.n) * c / kTwoPi);
    return v >= -1e-12 && v <= 1 + 1e-12;
}

Slope CyclicFamily::member(long long k) const {
    if (k == 0) throw Error(Errc::ParseError, "family index k must be nonzero");
    return Slope(k * n * m + 1, k * n * n);
}

CyclicFamily generate_cyclic_family(const Rational& r, const std::vector<ArcLine>& lines,
                                    const std::vector<ImagePoint>& isolated, long long kmax, long long max_den) {
    CyclicFamily fam;
    fam.r = r;
    auto reconstruct_over_pi = [&](double c, Rational& out) {
        double x = wrap_2pi(c) / kPi;
        out = rational_reconstruct(x, max_den);
        return std::abs(boost::rational_cast<double>(out) - x) < 1e-6;
    };
    for (const auto& l : lines) {
        Rational q;
        if (!reconstruct_over_pi(l.intercept, q))
            throw Error(Errc::IrrationalIntercept, "arc " + std::to_string(l.arc_id) + " intercept " +
                                                       std::to_string(l.intercept) + " is not a rational multiple of pi");
        fam.intercepts.push_back(q);
    }
    std::vector<std::pair<double, double>> blocking;  // (alpha, c') of isolated points off rational lines
    double rf = boost::rational_cast<double>(r);
    for (const auto& p : isolated) {
        double cprime = p.beta + rf * p.alpha;
        Rational q;
        if (reconstruct_over_pi(cprime, q)) fam.intercepts.push_back(q);
        else blocking.push_back({p.alpha, cprime});
    }
    long long n = r.denominator();
    for (const auto& q : fam.intercepts) n = std::lcm(n, q.denominator());
    fam.n = n;
    fam.N = n * n;
    fam.m = (r * n).numerator();
    for (long long k = -kmax; k <= kmax; ++k) {
        if (k == 0) continue;
        for (const auto& [a, cp] : blocking) {
            double v = a + static_cast<double>(k) * static_cast<double>(fam.N) * cp;
            if (gap_to_lattice(v) < 1e-6) {
                fam.excluded_k.push_back(k);
                fam.excluded.push_back(fam.member(k));
                break;
            }
        }
    }
    return fam;
}

Slope cable_slope_transform(long long p, long long q, long long n) {
    if (q < 2 || n < 1 || std::gcd(p < 0 ? -p : p, q) != 1)
        throw Error(Errc::InvalidCableParams, "cable slope needs gcd(p,q)=1, q>=2, n>=1");
    return Slope(p * q * n + 1, q * q * n);
}

}  // namespace knotlab
