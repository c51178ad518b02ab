#pragma once

#include "knotlab/common.hpp"
#include "knotlab/pillowcase.hpp"
#include "knotlab/repvar.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace knotlab {

enum class SlopeVerdict { Avoided, Hit, Inconclusive };
const char* verdict_name(SlopeVerdict v);

// Line-avoidance only: says whether the sampled irreducible image meets
// m*alpha + n*beta = 0 mod 2pi, not whether the surgery is SU(2)-cyclic.
struct AvoidanceCertificate {
    Slope slope;
    double min_gap = 0;        // +inf for an empty image
    SlopeVerdict verdict = SlopeVerdict::Inconclusive;
    double slack = 0;          // half the largest step of m*alpha + n*beta between samples
    double hit_threshold = 0;
    double gap_threshold = 0;  // 10 * slack
    bool crossing = false;     // a sampled arc crosses a multiple of 2pi
    double witness_alpha = 0;
    double witness_beta = 0;
};

AvoidanceCertificate check_slope(const PillowcaseImage& img, const Slope& s, double hit_threshold = 1e-6);
std::vector<AvoidanceCertificate> check_slopes(const PillowcaseImage& img, const std::vector<Slope>& slopes,
                                               bool parallel = true);

struct WindowCheck {
    bool inside = false;
    double lhs = 0;
    double bound = 0;
    double margin = 0;  // bound - lhs
};

// Necessary condition for m/n to be cyclic given a path between two lifted points.
WindowCheck prop31_window(const std::array<double, 2>& p0, const std::array<double, 2>& p1, const Slope& s);

// Integers m with |m/n - r| <= |r|/n.
std::pair<long long, long long> slope_window(const Rational& r, long long n);

struct LimitSlopeEstimate {
    Rational r{0};
    double r_float = 0;
    std::vector<double> arc_slopes;
    double agreement = 0;  // max deviation of arc slopes from the mean
};

LimitSlopeEstimate estimate_limit_slope(const PillowcaseImage& img, long long max_den = 64, double tol = 1e-6);

bool fractional_part_test(const Rational& r, double c, const Slope& s);

struct CyclicFamily {
    Rational r{0};
    long long n = 1;
    long long N = 1;
    long long m = 0;                     // n*r
    std::vector<Rational> intercepts;    // c_i / pi
    std::vector<long long> excluded_k;   // members that an isolated point may block
    std::vector<Slope> excluded;

    Slope member(long long k) const;     // r + 1/(kN)
};

CyclicFamily generate_cyclic_family(const Rational& r, const std::vector<ArcLine>& lines,
                                    const std::vector<ImagePoint>& isolated, long long kmax = 1000,
                                    long long max_den = 64);

Slope cable_slope_transform(long long p, long long q, long long n);

}  // namespace knotlab
