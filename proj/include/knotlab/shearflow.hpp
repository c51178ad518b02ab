#pragma once

#include "knotlab/common.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace knotlab {

using Vec2 = std::array<double, 2>;
using Vec2i = std::array<int, 2>;
// Row-major 2x2.
using Mat2 = std::array<double, 4>;

inline constexpr Mat2 kIdentity2{1.0, 0.0, 0.0, 1.0};

Mat2 mat_mul(const Mat2& a, const Mat2& b);
double mat_det(const Mat2& a);
double op_norm(const Mat2& a);
// Difference reduced into (-pi, pi] per coordinate, then Euclidean norm.
double torus_distance(const Vec2& a, const Vec2& b);

struct FlowPoint {
    Vec2 p{0.0, 0.0};
    Mat2 J = kIdentity2;
};

// W(p) = a sin(k.p) + b cos(k.p), with a, b perpendicular to k.
struct FourierShearField {
    Vec2i k{0, 0};
    Vec2 a{0.0, 0.0};
    Vec2 b{0.0, 0.0};

    Vec2 eval(const Vec2& p) const;
    Mat2 jacobian(const Vec2& p) const;
    double sup_norm() const;
    double sup_jacobian() const;
    double sup_second() const;
};

// zeta_t(p) = p + t f(w.p) v with f(s) = c + alpha sin(g s) + beta cos(g s).
struct ShearingStep {
    Vec2i v{1, 0};
    Vec2i w{0, 1};
    int freq = 1;
    double constant = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    double profile(double s) const;
    double dprofile(double s) const;
    bool odd() const { return constant == 0.0 && beta == 0.0; }
    Vec2 eval(const Vec2& p) const;
    Mat2 jacobian(const Vec2& p) const;
    double sup_norm() const;
    double sup_jacobian() const;
    double sup_second() const;

    static ShearingStep from_mode(const FourierShearField& mode);
};

FlowPoint shear_step_apply(const ShearingStep& step, double t, const Vec2& p);

// Time-independent field given as a finite Fourier sum plus a constant.
struct FrozenField {
    std::vector<FourierShearField> modes;
    Vec2 constant{0.0, 0.0};

    Vec2 eval(const Vec2& p) const;
    Mat2 jacobian(const Vec2& p) const;
    // Flow is a single shear when all wavevectors are parallel and the
    // constant part is along the shear direction.
    bool single_shear() const;
    FrozenField scaled(double s) const;
};

// X(t, p) = g(t) * X0(p), g a polynomial in t.
class TimeDependentField {
public:
    TimeDependentField() = default;
    TimeDependentField(FrozenField base, std::vector<double> time_poly);

    Vec2 eval(double t, const Vec2& p) const;
    Mat2 jacobian(double t, const Vec2& p) const;
    FrozenField frozen(double t) const;
    double time_factor(double t) const;
    const FrozenField& base() const { return base_; }
    const std::vector<double>& time_poly() const { return poly_; }
    int smoothness() const { return -1; }

    // Largest |div X| seen by fourth-order differences on a grid x grid mesh.
    double divergence_defect(int grid = 128, int time_samples = 5) const;

    static TimeDependentField parse_json(const std::string& text);
    std::string to_json() const;

private:
    FrozenField base_;
    std::vector<double> poly_{1.0};
};

// Generic field used by the integrator.
struct VectorField {
    std::function<Vec2(double, const Vec2&)> value;
    std::function<Mat2(double, const Vec2&)> jacobian;

    static VectorField from(const TimeDependentField& X);
    static VectorField from(const FrozenField& X);
};

struct ReferenceOptions {
    double tol = 1e-10;
    double h0 = 1e-2;
    double h_min = 1e-12;
};

FlowPoint reference_flow(const VectorField& X, double t0, double t1, const Vec2& p,
                         bool with_jacobian = true, const ReferenceOptions& opt = {});
FlowPoint reference_flow(const TimeDependentField& X, double t, const Vec2& p,
                         bool with_jacobian = true, const ReferenceOptions& opt = {});
// Same path sampled at increasing times ts; one integration.
std::vector<FlowPoint> reference_flow_at(const VectorField& X, const std::vector<double>& ts,
                                         const Vec2& p, bool with_jacobian = true,
                                         const ReferenceOptions& opt = {});
// Fixed-step RK4, for order checks.
FlowPoint rk4_fixed(const VectorField& X, double t0, double t1, const Vec2& p, int steps,
                    bool with_jacobian = true);

FlowPoint frozen_flow(const FrozenField& X, double t, const Vec2& p, const ReferenceOptions& opt = {});

FlowPoint theta_flow(const std::vector<FrozenField>& fields, double t, const Vec2& p,
                     const ReferenceOptions& opt = {});

FlowPoint xi_flow(const std::vector<ShearingStep>& modes, int k, int n, double t, const Vec2& p);

struct SplittingSchedule {
    int n = 1;
    std::vector<int> m;  // per interval, filled from the projected modes
    std::vector<int> k;  // per interval

    static SplittingSchedule uniform(int n, int k);
    void validate() const;
};

FlowPoint omega_flow(const SplittingSchedule& schedule,
                     const std::vector<std::vector<ShearingStep>>& modes, double t, const Vec2& p);

struct Projection {
    std::vector<FourierShearField> modes;
    std::vector<ShearingStep> steps;  // constant mode split into two steps
    Vec2 constant{0.0, 0.0};
    double residual = 0.0;        // C1 norm of X - sum W on the grid
    double cosine_content = 0.0;  // largest dropped cosine amplitude (equivariant mode)

    FrozenField as_field() const;
};

Projection fourier_project(const std::function<Vec2(const Vec2&)>& X, int kmax, bool equivariant,
                           int log2_grid = 7);
Projection fourier_project(const FrozenField& X, int kmax, bool equivariant, int log2_grid = 7);

using FlowMap = std::function<FlowPoint(const Vec2&)>;

// Sup over a grid x grid mesh of torus distance, plus (r == 1) sup of the
// Jacobian difference operator norm.
double cr_distance(const FlowMap& f, const FlowMap& g, int grid, int r, bool parallel = true);

// Bound functions. Arguments that do not apply to a function are ignored.
struct BoundArgs {
    double t = 0.0;
    double x = 0.0;   // d, M or freeze gap depending on the function
    double K = 0.0;
    double K0 = 0.0;  // sup of the vector fields, used by d
    int n = 1;
    int k = 1;
    int m = 1;
    double r1 = 0.0;
};

double bound_a0(double t, double K);
double bound_a1(double t, double K);
double bound_b0(double t, double d, double K);
double bound_b1(double t, double d, double K);
double bound_f0(double t, double x, double K);
double bound_f1(double t, double x, double K);
double bound_h0(int n, double t, double x, double K);
double bound_h1(int n, double t, double x, double K);
double bound_c0(int m, double t, double M, double K);
double bound_c1(int m, double t, double M, double K, double r1);
double bound_d0(int n, int k, int m, double t, double M, double K, double K0);
double bound_d1(int n, int k, int m, double t, double M, double K, double K0, double r1);
double bound_function(const std::string& name, const BoundArgs& args);
const std::vector<std::string>& bound_function_names();

struct CertifyOptions {
    int n = 8;
    int k = 8;
    int kmax = 4;
    int grid = 64;
    bool equivariant = false;
    double inflation = 1.1;
    double slack = 1e-8;
    bool r1_given = false;
    double r1 = 0.0;
    std::vector<double> times{0.25, 0.5, 0.75, 1.0};
    bool parallel = true;
    bool throw_on_violation = true;
};

struct StageRow {
    std::string stage;  // freeze, fourier, split, total
    double t = 0.0;
    double c0 = 0.0;
    double c0_bound = 0.0;
    double c1 = 0.0;
    double c1_bound = 0.0;
    bool c1_asserted = false;
    bool ok = true;
};

struct CertifyReport {
    CertifyOptions options;
    std::vector<StageRow> rows;
    double freeze_gap_c0 = 0.0;
    double freeze_gap_c1 = 0.0;
    double fourier_residual = 0.0;
    double K0 = 0.0, K1 = 0.0, K2 = 0.0;
    double M0 = 0.0, M1 = 0.0;
    double det_defect = 0.0;
    double equivariance_defect = -1.0;  // negative when not measured
    double fixed_point_defect = -1.0;
    double seconds = 0.0;
    bool ok = true;

    std::string to_json() const;
    std::string to_csv() const;
};

CertifyReport certify_run(const TimeDependentField& X, const CertifyOptions& opt = {});

}  // namespace knotlab
