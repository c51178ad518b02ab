#pragma once

#include "knotlab/common.hpp"
#include "knotlab/pillowcase.hpp"
#include "knotlab/presentation.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace knotlab {

struct TraceOptions {
    int resolution = 256;         // alpha samples on (0, pi)
    int starts = 64;              // random starts per alpha
    std::uint64_t seed = 20240601;
    double match_threshold = 0.2; // continuation matching radius (rad)
    double residual_tol = 1e-10;
    double irreducible_tol = 1e-4;
    int max_rounds = 4;           // continuation sweeps
    bool parallel = true;
};

// One irreducible conjugacy class found at a fixed alpha.
struct AlphaSolution {
    double alpha = 0;
    double beta = 0;
    double residual = 0;
    std::vector<double> state;  // gauge-fixed generator data
    std::vector<SU2> rho;       // generator images
};

std::vector<AlphaSolution> solve_at_alpha(const KnotPresentation& pres, double alpha,
                                          const TraceOptions& opt = {});

PillowcaseImage trace_image(const KnotPresentation& pres, const TraceOptions& opt = {});
PillowcaseImage torus_knot_image(int p, int q, int resolution = 256);

struct SatelliteSpec {
    int winding = 1;
    int cable_p = 0;
    int cable_q = 0;   // 0 when not a cable
    int branch = -1;   // -1: all k = 0..|w|-1
};

PillowcaseImage satellite_image(const PillowcaseImage& img, const SatelliteSpec& spec);
PillowcaseImage connected_sum_image(const PillowcaseImage& a, const PillowcaseImage& b);

struct ArcLine {
    int arc_id = 0;
    double slope = 0;       // d beta / d alpha on the lift, i.e. -r
    double intercept = 0;   // in [0, 2pi)
    double alpha_lo = 0;
    double alpha_hi = 0;
    double residual = 0;    // max |beta - line| over samples
    bool curved = false;
};

std::vector<ArcLine> fit_arc_lines(const PillowcaseImage& img, double tol = 1e-6);

// 1 when some component of the image together with the reducible line beta = 0
// runs from beta = 0 to beta = 2pi in the cut-open pillowcase, else 0.
int connecting_path_winding(const PillowcaseImage& img);

// Lifted polyline of an arc with its limit points attached at the ends.
std::vector<std::array<double, 2>> lifted_arc(const Arc& arc);

}  // namespace knotlab
