#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace knotlab {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTol = 1e-9;
constexpr double kCommuteTol = 1e-9;

using Vec3 = std::array<double, 3>;

// Unit quaternion a + bi + cj + dk, i.e. the SU(2) matrix
// [[a+ib, c+id], [-c+id, a-ib]].
struct SU2 {
    double a = 1, b = 0, c = 0, d = 0;

    static SU2 identity() { return {1, 0, 0, 0}; }
    // cos(angle) + sin(angle) (axis . (i,j,k)); axis is normalized here.
    static SU2 rotation(double angle, const Vec3& axis);
    static SU2 diag(double angle) { return {std::cos(angle), std::sin(angle), 0, 0}; }

    SU2 inverse() const { return {a, -b, -c, -d}; }
    double trace() const { return 2 * a; }
    double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
    Vec3 vec() const { return {b, c, d}; }
    SU2 normalized() const;
};

SU2 operator*(const SU2& x, const SU2& y);
double distance(const SU2& x, const SU2& y);
SU2 conjugate_by(const SU2& g, const SU2& h);  // g h g^-1

struct PillowcasePoint {
    double alpha = 0;
    double beta = 0;
};

double wrap_2pi(double x);      // into [0, 2pi)
double wrap_pm_pi(double x);    // into (-pi, pi]
double circ_dist(double x, double y);  // distance on R/2piZ

PillowcasePoint pillowcase_coords(const SU2& m, const SU2& l);
PillowcasePoint iota_canonicalize(double alpha, double beta);
PillowcasePoint central_twist(const PillowcasePoint& p);
// Distance in the pillowcase between canonical representatives.
double pillowcase_dist(const PillowcasePoint& p, const PillowcasePoint& q);

struct ImagePoint {
    double alpha = 0;
    double beta = 0;
    double residual = 0;
    // Set for points on beta = 0 that are limits of irreducibles (arc endpoints).
    bool reducible_limit = false;
};

struct Arc {
    int id = 0;
    std::vector<ImagePoint> points;  // ordered by continuation
    // Closure points on the reducible line, if the arc was seen to approach it.
    std::vector<ImagePoint> limits;
};

struct PillowcaseImage {
    std::vector<Arc> arcs;
    std::vector<ImagePoint> isolated_points;
    double alpha_margin = 0;
    double grid_step = 0;
    bool partial = false;
    std::vector<std::string> notes;

    bool empty() const { return arcs.empty() && isolated_points.empty(); }
    std::vector<PillowcasePoint> all_points() const;
};

PillowcaseImage mirror_image(const PillowcaseImage& img);
PillowcaseImage central_twist_image(const PillowcaseImage& img);
double hausdorff_distance(const std::vector<PillowcasePoint>& a,
                          const std::vector<PillowcasePoint>& b);

struct PlanarLift {
    std::vector<std::array<double, 2>> points;
    int branch = 0;  // 2pi multiple of the first point's beta
};

PlanarLift lift_path(const std::vector<PillowcasePoint>& path);

}  // namespace knotlab
