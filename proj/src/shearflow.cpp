#include "knotlab/shearflow.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>

namespace knotlab {

using json = nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
double dot_k(const Vec2i& k, const Vec2& p) { return k[0] * p[0] + k[1] * p[1]; }
double norm_i(const Vec2i& k) { return std::hypot(double(k[0]), double(k[1])); }

Mat2 outer(const Vec2& a, const Vec2& b) { return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]}; }
Mat2 mat_sub(const Mat2& a, const Mat2& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
Mat2 mat_add(const Mat2& a, const Mat2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
Vec2 mat_vec(const Mat2& a, const Vec2& v) { return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]}; }

Vec2 to_vec(const Vec2i& k) { return {double(k[0]), double(k[1])}; }

bool canonical(const Vec2i& k) { return k[0] > 0 || (k[0] == 0 && k[1] > 0); }

double wrap_pi(double x) {
    x = std::fmod(x + std::numbers::pi, kTwoPi);
    if (x < 0) x += kTwoPi;
    return x - std::numbers::pi;
}

int igcd(int a, int b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b) {
        int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Collects modes keyed by canonical wavevector.
struct ModeAccumulator {
    std::map<std::pair<int, int>, FourierShearField> modes;
    Vec2 constant{0.0, 0.0};

    void add(Vec2i k, Vec2 a, Vec2 b) {
        if (k[0] == 0 && k[1] == 0) {
            constant[0] += b[0];
            constant[1] += b[1];
            return;
        }
        if (!canonical(k)) {
            k = {-k[0], -k[1]};
            a = {-a[0], -a[1]};
        }
        auto& m = modes[{k[0], k[1]}];
        m.k = k;
        m.a = {m.a[0] + a[0], m.a[1] + a[1]};
        m.b = {m.b[0] + b[0], m.b[1] + b[1]};
    }

    // Hamiltonian term s sin(k.p) + c cos(k.p); X = (dH/dy, -dH/dx).
    void add_hamiltonian(Vec2i k, double s, double c) {
        if (k[0] == 0 && k[1] == 0) return;
        const Vec2 perp{double(k[1]), double(-k[0])};
        add(k, {-c * perp[0], -c * perp[1]}, {s * perp[0], s * perp[1]});
    }

    FrozenField field() const {
        FrozenField f;
        f.constant = constant;
        for (const auto& [key, m] : modes)
            if (norm(m.a) + norm(m.b) > 0.0) f.modes.push_back(m);
        return f;
    }
};

Vec2 read_vec(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::SchemaError, "expected a 2-vector");
    return {j[0].get<double>(), j[1].get<double>()};
}

Vec2i read_ivec(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::SchemaError, "expected an integer 2-vector");
    return {j[0].get<int>(), j[1].get<int>()};
}

// Fourth-order central difference Jacobian.
Mat2 fd_jacobian(const std::function<Vec2(const Vec2&)>& f, const Vec2& p, double h = 1e-3) {
    Mat2 J{};
    for (int c = 0; c < 2; ++c) {
        auto at = [&](double s) {
            Vec2 q = p;
            q[c] += s;
            return f(q);
        };
        const Vec2 p2 = at(2 * h), p1 = at(h), m1 = at(-h), m2 = at(-2 * h);
        for (int r = 0; r < 2; ++r) J[2 * r + c] = (-p2[r] + 8 * p1[r] - 8 * m1[r] + m2[r]) / (12 * h);
    }
    return J;
}

using State = std::array<double, 6>;

State rhs(const VectorField& X, double t, const State& y, bool with_jac) {
    const Vec2 p{y[0], y[1]};
    const Vec2 v = X.value(t, p);
    State d{v[0], v[1], 0, 0, 0, 0};
    if (with_jac) {
        const Mat2 A = X.jacobian(t, p);
        const Mat2 J{y[2], y[3], y[4], y[5]};
        const Mat2 AJ = mat_mul(A, J);
        for (int i = 0; i < 4; ++i) d[2 + i] = AJ[i];
    }
    return d;
}

State rk4_step(const VectorField& X, double t, const State& y, double h, bool with_jac) {
    auto axpy = [](const State& a, double s, const State& b) {
        State r;
        for (int i = 0; i < 6; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    const State k1 = rhs(X, t, y, with_jac);
    const State k2 = rhs(X, t + h / 2, axpy(y, h / 2, k1), with_jac);
    const State k3 = rhs(X, t + h / 2, axpy(y, h / 2, k2), with_jac);
    const State k4 = rhs(X, t + h, axpy(y, h, k3), with_jac);
    State r;
    for (int i = 0; i < 6; ++i) r[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return r;
}

State to_state(const Vec2& p) { return {p[0], p[1], 1, 0, 0, 1}; }
FlowPoint from_state(const State& y) { return {{y[0], y[1]}, {y[2], y[3], y[4], y[5]}}; }

}  // namespace

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

double mat_det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

double op_norm(const Mat2& a) {
    // largest singular value of a 2x2 matrix
    const double s = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    const double d = mat_det(a);
    const double disc = std::max(0.0, s * s / 4 - d * d);
    return std::sqrt(std::max(0.0, s / 2 + std::sqrt(disc)));
}

double torus_distance(const Vec2& a, const Vec2& b) {
    return std::hypot(wrap_pi(a[0] - b[0]), wrap_pi(a[1] - b[1]));
}

// ---- single modes ---------------------------------------------------------

Vec2 FourierShearField::eval(const Vec2& p) const {
    const double th = dot_k(k, p);
    const double s = std::sin(th), c = std::cos(th);
    return {a[0] * s + b[0] * c, a[1] * s + b[1] * c};
}

Mat2 FourierShearField::jacobian(const Vec2& p) const {
    const double th = dot_k(k, p);
    const double s = std::sin(th), c = std::cos(th);
    return outer({a[0] * c - b[0] * s, a[1] * c - b[1] * s}, to_vec(k));
}

double FourierShearField::sup_norm() const { return std::sqrt(dot(a, a) + dot(b, b)); }
double FourierShearField::sup_jacobian() const { return sup_norm() * norm_i(k); }
double FourierShearField::sup_second() const { return sup_norm() * norm_i(k) * norm_i(k); }

double ShearingStep::profile(double s) const {
    return constant + alpha * std::sin(freq * s) + beta * std::cos(freq * s);
}

double ShearingStep::dprofile(double s) const {
    return freq * (alpha * std::cos(freq * s) - beta * std::sin(freq * s));
}

Vec2 ShearingStep::eval(const Vec2& p) const {
    const double f = profile(dot_k(w, p));
    return {f * v[0], f * v[1]};
}

Mat2 ShearingStep::jacobian(const Vec2& p) const {
    Mat2 m = outer(to_vec(v), to_vec(w));
    const double d = dprofile(dot_k(w, p));
    for (double& x : m) x *= d;
    return m;
}

double ShearingStep::sup_norm() const {
    return (std::abs(constant) + std::hypot(alpha, beta)) * norm_i(v);
}

double ShearingStep::sup_jacobian() const { return freq * std::hypot(alpha, beta) * norm_i(v) * norm_i(w); }

double ShearingStep::sup_second() const {
    return double(freq) * freq * std::hypot(alpha, beta) * norm_i(v) * norm_i(w) * norm_i(w);
}

ShearingStep ShearingStep::from_mode(const FourierShearField& mode) {
    ShearingStep s;
    const int g = igcd(mode.k[0], mode.k[1]);
    if (g == 0) {
        throw Error(Errc::SchemaError, "zero wavevector is a constant field, not a mode");
    }
    s.freq = g;
    s.w = {mode.k[0] / g, mode.k[1] / g};
    s.v = {-s.w[1], s.w[0]};
    const Vec2 v = to_vec(s.v);
    const double vv = dot(v, v);
    s.alpha = dot(mode.a, v) / vv;
    s.beta = dot(mode.b, v) / vv;
    return s;
}

FlowPoint shear_step_apply(const ShearingStep& step, double t, const Vec2& p) {
    const double s = dot_k(step.w, p);
    const double f = step.profile(s);
    const double df = step.dprofile(s);
    FlowPoint out;
    out.p = {p[0] + t * f * step.v[0], p[1] + t * f * step.v[1]};
    out.J = {1.0 + t * df * step.v[0] * step.w[0], t * df * step.v[0] * step.w[1], t * df * step.v[1] * step.w[0],
             1.0 + t * df * step.v[1] * step.w[1]};
    return out;
}

// ---- fields ---------------------------------------------------------------

Vec2 FrozenField::eval(const Vec2& p) const {
    Vec2 r = constant;
    for (const auto& m : modes) {
        const Vec2 x = m.eval(p);
        r[0] += x[0];
        r[1] += x[1];
    }
    return r;
}

Mat2 FrozenField::jacobian(const Vec2& p) const {
    Mat2 J{};
    for (const auto& m : modes) J = mat_add(J, m.jacobian(p));
    return J;
}

bool FrozenField::single_shear() const {
    if (modes.empty()) return true;
    const Vec2i k0 = modes.front().k;
    for (const auto& m : modes)
        if (long(m.k[0]) * k0[1] - long(m.k[1]) * k0[0] != 0) return false;
    return std::abs(dot_k(k0, constant)) < 1e-15;
}

FrozenField FrozenField::scaled(double s) const {
    FrozenField f = *this;
    f.constant = {s * constant[0], s * constant[1]};
    for (auto& m : f.modes) {
        m.a = {s * m.a[0], s * m.a[1]};
        m.b = {s * m.b[0], s * m.b[1]};
    }
    return f;
}

TimeDependentField::TimeDependentField(FrozenField base, std::vector<double> time_poly)
    : base_(std::move(base)), poly_(std::move(time_poly)) {
    if (poly_.empty()) poly_ = {1.0};
}

double TimeDependentField::time_factor(double t) const {
    double r = 0.0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) r = r * t + *it;
    return r;
}

Vec2 TimeDependentField::eval(double t, const Vec2& p) const {
    const double g = time_factor(t);
    const Vec2 x = base_.eval(p);
    return {g * x[0], g * x[1]};
}

Mat2 TimeDependentField::jacobian(double t, const Vec2& p) const {
    const double g = time_factor(t);
    Mat2 J = base_.jacobian(p);
    for (double& x : J) x *= g;
    return J;
}

FrozenField TimeDependentField::frozen(double t) const { return base_.scaled(time_factor(t)); }

double TimeDependentField::divergence_defect(int grid, int time_samples) const {
    double worst = 0.0;
    auto f = [&](const Vec2& p) { return base_.eval(p); };
    double gmax = 0.0;
    for (int s = 0; s < time_samples; ++s)
        gmax = std::max(gmax, std::abs(time_factor(time_samples == 1 ? 0.0 : double(s) / (time_samples - 1))));
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Vec2 p{kTwoPi * i / grid, kTwoPi * j / grid};
            const Mat2 J = fd_jacobian(f, p);
            worst = std::max(worst, std::abs(J[0] + J[3]));
        }
    return worst * gmax;
}

TimeDependentField TimeDependentField::parse_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("field JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw Error(Errc::SchemaError, "field spec must be an object");
        ModeAccumulator acc;
        if (j.contains("constant")) {
            const Vec2 c = read_vec(j["constant"]);
            acc.constant = c;
        }
        if (j.contains("modes")) {
            for (const auto& m : j["modes"]) {
                const Vec2i k = read_ivec(m.at("k"));
                const Vec2 a = m.contains("a") ? read_vec(m["a"]) : Vec2{0, 0};
                const Vec2 b = m.contains("b") ? read_vec(m["b"]) : Vec2{0, 0};
                acc.add(k, a, b);
            }
        }
        if (j.contains("hamiltonian")) {
            for (const auto& h : j["hamiltonian"]) {
                if (h.contains("product")) {
                    const auto& pr = h["product"];
                    if (!pr.is_array() || pr.size() != 2) throw Error(Errc::SchemaError, "product needs two factors");
                    const std::string fx = pr[0].get<std::string>(), fy = pr[1].get<std::string>();
                    const Vec2i k = read_ivec(h.at("k"));
                    const double c = h.value("coeff", 1.0) / 2;
                    const Vec2i plus{k[0], k[1]}, minus{k[0], -k[1]};
                    if (fx == "sin" && fy == "sin") {
                        acc.add_hamiltonian(minus, 0, c);
                        acc.add_hamiltonian(plus, 0, -c);
                    } else if (fx == "sin" && fy == "cos") {
                        acc.add_hamiltonian(plus, c, 0);
                        acc.add_hamiltonian(minus, c, 0);
                    } else if (fx == "cos" && fy == "sin") {
                        acc.add_hamiltonian(plus, c, 0);
                        acc.add_hamiltonian(minus, -c, 0);
                    } else if (fx == "cos" && fy == "cos") {
                        acc.add_hamiltonian(minus, 0, c);
                        acc.add_hamiltonian(plus, 0, c);
                    } else {
                        throw Error(Errc::SchemaError, "product factors must be sin or cos");
                    }
                } else {
                    acc.add_hamiltonian(read_ivec(h.at("k")), h.value("sin", 0.0), h.value("cos", 0.0));
                }
            }
        }
        std::vector<double> poly{1.0};
        if (j.contains("time_poly")) poly = j["time_poly"].get<std::vector<double>>();
        return TimeDependentField(acc.field(), poly);
    } catch (const json::exception& e) {
        throw Error(Errc::SchemaError, std::string("field JSON: ") + e.what());
    }
}

std::string TimeDependentField::to_json() const {
    json j;
    j["constant"] = {base_.constant[0], base_.constant[1]};
    j["modes"] = json::array();
    for (const auto& m : base_.modes)
        j["modes"].push_back({{"k", {m.k[0], m.k[1]}}, {"a", {m.a[0], m.a[1]}}, {"b", {m.b[0], m.b[1]}}});
    j["time_poly"] = poly_;
    return j.dump(2);
}

VectorField VectorField::from(const TimeDependentField& X) {
    return {[X](double t, const Vec2& p) { return X.eval(t, p); },
            [X](double t, const Vec2& p) { return X.jacobian(t, p); }};
}

VectorField VectorField::from(const FrozenField& X) {
    return {[X](double, const Vec2& p) { return X.eval(p); }, [X](double, const Vec2& p) { return X.jacobian(p); }};
}

// ---- integration ----------------------------------------------------------

FlowPoint reference_flow(const VectorField& X, double t0, double t1, const Vec2& p, bool with_jacobian,
                         const ReferenceOptions& opt) {
    State y = to_state(p);
    double t = t0;
    double h = std::min(opt.h0, std::max(t1 - t0, 0.0));
    const double eps = 1e-15 * (1.0 + std::abs(t1));
    while (t1 - t > eps) {
        h = std::min(h, t1 - t);
        const State y1 = rk4_step(X, t, y, h, with_jacobian);
        const State yh = rk4_step(X, t, y, h / 2, with_jacobian);
        const State y2 = rk4_step(X, t + h / 2, yh, h / 2, with_jacobian);
        double err = 0.0;
        for (int i = 0; i < 6; ++i) err = std::max(err, std::abs(y2[i] - y1[i]) / 15.0);
        if (err <= opt.tol) {
            for (int i = 0; i < 6; ++i) y[i] = y2[i] + (y2[i] - y1[i]) / 15.0;
            t += h;
            h *= err == 0.0 ? 4.0 : std::min(4.0, 0.9 * std::pow(opt.tol / err, 0.2));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(opt.tol / err, 0.2));
            if (h < opt.h_min) throw Error(Errc::StepSizeUnderflow, "step size fell below " + std::to_string(opt.h_min));
        }
    }
    return from_state(y);
}

FlowPoint reference_flow(const TimeDependentField& X, double t, const Vec2& p, bool with_jacobian,
                         const ReferenceOptions& opt) {
    return reference_flow(VectorField::from(X), 0.0, t, p, with_jacobian, opt);
}

std::vector<FlowPoint> reference_flow_at(const VectorField& X, const std::vector<double>& ts, const Vec2& p,
                                         bool with_jacobian, const ReferenceOptions& opt) {
    std::vector<FlowPoint> out;
    FlowPoint cur{p, kIdentity2};
    double t = 0.0;
    for (double target : ts) {
        if (target < t) throw Error(Errc::SchemaError, "reference_flow_at needs increasing times");
        const FlowPoint seg = reference_flow(X, t, target, cur.p, with_jacobian, opt);
        cur = {seg.p, mat_mul(seg.J, cur.J)};
        t = target;
        out.push_back(cur);
    }
    return out;
}

FlowPoint rk4_fixed(const VectorField& X, double t0, double t1, const Vec2& p, int steps, bool with_jacobian) {
    State y = to_state(p);
    const double h = (t1 - t0) / steps;
    for (int s = 0; s < steps; ++s) y = rk4_step(X, t0 + s * h, y, h, with_jacobian);
    return from_state(y);
}

FlowPoint frozen_flow(const FrozenField& X, double t, const Vec2& p, const ReferenceOptions& opt) {
    if (X.single_shear()) {
        const Vec2 v = X.eval(p);
        Mat2 J = X.jacobian(p);
        for (double& x : J) x *= t;
        J[0] += 1.0;
        J[3] += 1.0;
        return {{p[0] + t * v[0], p[1] + t * v[1]}, J};
    }
    return reference_flow(VectorField::from(X), 0.0, t, p, true, opt);
}

namespace {

int slot(double t, int n) { return std::clamp(static_cast<int>(std::floor(t * n)), 0, n - 1); }

void compose(FlowPoint& acc, const FlowPoint& step) {
    acc.p = step.p;
    acc.J = mat_mul(step.J, acc.J);
}

}  // namespace

FlowPoint theta_flow(const std::vector<FrozenField>& fields, double t, const Vec2& p, const ReferenceOptions& opt) {
    const int n = static_cast<int>(fields.size());
    if (n == 0) throw Error(Errc::SchemaError, "theta_flow needs at least one field");
    const int i = slot(t, n);
    FlowPoint acc{p, kIdentity2};
    for (int j = 0; j < i; ++j) compose(acc, frozen_flow(fields[j], 1.0 / n, acc.p, opt));
    compose(acc, frozen_flow(fields[i], std::max(0.0, t - double(i) / n), acc.p, opt));
    return acc;
}

FlowPoint xi_flow(const std::vector<ShearingStep>& modes, int k, int n, double t, const Vec2& p) {
    FlowPoint acc{p, kIdentity2};
    const int m = static_cast<int>(modes.size());
    if (m == 0) return acc;
    const double tau = 1.0 / (double(k) * n);
    const double u = std::max(0.0, t) * k * n;
    int cycles = static_cast<int>(std::floor(u));
    double rem = u - cycles;
    if (cycles >= k) {
        cycles = k;
        rem = 0.0;
    }
    for (int c = 0; c < cycles; ++c)
        for (const auto& w : modes) compose(acc, shear_step_apply(w, tau, acc.p));
    if (rem > 0.0) {
        const double s = rem * m;
        const int r = std::min(static_cast<int>(std::floor(s)), m - 1);
        for (int q = 0; q < r; ++q) compose(acc, shear_step_apply(modes[q], tau, acc.p));
        compose(acc, shear_step_apply(modes[r], (s - r) * tau, acc.p));
    }
    return acc;
}

SplittingSchedule SplittingSchedule::uniform(int n, int k) {
    SplittingSchedule s;
    s.n = n;
    s.k.assign(n, k);
    s.m.assign(n, 1);
    return s;
}

void SplittingSchedule::validate() const {
    if (n < 1) throw Error(Errc::SchemaError, "schedule needs n >= 1");
    if (int(k.size()) != n) throw Error(Errc::SchemaError, "schedule needs one k per interval");
    for (int x : k)
        if (x < 1) throw Error(Errc::SchemaError, "schedule needs k >= 1");
    if (!m.empty() && int(m.size()) != n) throw Error(Errc::SchemaError, "schedule needs one m per interval");
    for (int x : m)
        if (x < 1) throw Error(Errc::SchemaError, "schedule needs m >= 1");
}

FlowPoint omega_flow(const SplittingSchedule& schedule, const std::vector<std::vector<ShearingStep>>& modes, double t,
                     const Vec2& p) {
    const int n = schedule.n;
    if (int(modes.size()) != n) throw Error(Errc::SchemaError, "omega_flow needs one mode list per interval");
    const int i = slot(t, n);
    FlowPoint acc{p, kIdentity2};
    for (int j = 0; j < i; ++j) compose(acc, xi_flow(modes[j], schedule.k[j], n, 1.0 / n, acc.p));
    compose(acc, xi_flow(modes[i], schedule.k[i], n, std::max(0.0, t - double(i) / n), acc.p));
    return acc;
}

// ---- projection -----------------------------------------------------------

FrozenField Projection::as_field() const {
    FrozenField f;
    f.modes = modes;
    f.constant = constant;
    return f;
}

namespace {

Projection project_impl(const std::function<Vec2(const Vec2&)>& X, const std::function<Mat2(const Vec2&)>& DX,
                        int kmax, bool equivariant, int log2_grid) {
    const int N = 1 << std::max(log2_grid, 7);
    const int NC = N / 2 + 1;
    std::vector<double> in(std::size_t(N) * N);
    std::array<std::vector<std::complex<double>>, 2> spec;
    std::vector<Vec2> samples(std::size_t(N) * N);
    std::vector<Mat2> jac(std::size_t(N) * N);
    double div = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Vec2 p{kTwoPi * i / N, kTwoPi * j / N};
            samples[i * N + j] = X(p);
            jac[i * N + j] = DX(p);
            div = std::max(div, std::abs(jac[i * N + j][0] + jac[i * N + j][3]));
        }
    if (div > 1e-8) throw Error(Errc::NotDivergenceFree, "divergence " + std::to_string(div) + " on the grid");

    for (int c = 0; c < 2; ++c) {
        spec[c].resize(std::size_t(N) * NC);
        for (std::size_t q = 0; q < in.size(); ++q) in[q] = samples[q][c];
        fftw_plan plan = fftw_plan_dft_r2c_2d(N, N, in.data(), reinterpret_cast<fftw_complex*>(spec[c].data()),
                                              FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / (double(N) * N);
    auto coef = [&](int c, int kx, int ky) {
        if (ky >= 0) return spec[c][std::size_t((kx % N + N) % N) * NC + ky] * scale;
        return std::conj(spec[c][std::size_t(((-kx) % N + N) % N) * NC + (-ky)]) * scale;
    };

    Projection out;
    double amp_scale = 0.0;
    for (const auto& s : samples) amp_scale = std::max(amp_scale, norm(s));
    const double drop = 1e-13 * std::max(1.0, amp_scale);

    out.constant = {coef(0, 0, 0).real(), coef(1, 0, 0).real()};
    if (equivariant) {
        out.cosine_content = norm(out.constant);
        out.constant = {0.0, 0.0};
    }
    if (norm(out.constant) <= drop) out.constant = {0.0, 0.0};

    for (int kx = 0; kx <= kmax; ++kx)
        for (int ky = -kmax; ky <= kmax; ++ky) {
            const Vec2i k{kx, ky};
            if (!canonical(k)) continue;
            const std::complex<double> u = coef(0, kx, ky), v = coef(1, kx, ky);
            Vec2 a{-2 * u.imag(), -2 * v.imag()};
            Vec2 b{2 * u.real(), 2 * v.real()};
            const Vec2 perp{-double(ky) / norm_i(k), double(kx) / norm_i(k)};
            const double pa = dot(a, perp), pb = dot(b, perp);
            a = {pa * perp[0], pa * perp[1]};
            b = {pb * perp[0], pb * perp[1]};
            if (equivariant) {
                out.cosine_content = std::max(out.cosine_content, norm(b));
                b = {0.0, 0.0};
            }
            if (norm(a) + norm(b) <= drop) continue;
            out.modes.push_back({k, a, b});
        }

    for (const auto& m : out.modes) out.steps.push_back(ShearingStep::from_mode(m));
    if (out.constant[0] != 0.0) {
        ShearingStep s;
        s.v = {1, 0};
        s.w = {0, 1};
        s.constant = out.constant[0];
        out.steps.push_back(s);
    }
    if (out.constant[1] != 0.0) {
        ShearingStep s;
        s.v = {0, 1};
        s.w = {1, 0};
        s.constant = out.constant[1];
        out.steps.push_back(s);
    }

    const FrozenField Z = out.as_field();
    double r0 = 0.0, r1 = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const Vec2 p{kTwoPi * i / N, kTwoPi * j / N};
            const Vec2 z = Z.eval(p);
            const Vec2& x = samples[i * N + j];
            r0 = std::max(r0, std::hypot(x[0] - z[0], x[1] - z[1]));
            r1 = std::max(r1, op_norm(mat_sub(jac[i * N + j], Z.jacobian(p))));
        }
    out.residual = r0 + r1;
    return out;
}

}  // namespace

Projection fourier_project(const std::function<Vec2(const Vec2&)>& X, int kmax, bool equivariant, int log2_grid) {
    return project_impl(X, [&](const Vec2& p) { return fd_jacobian(X, p); }, kmax, equivariant, log2_grid);
}

Projection fourier_project(const FrozenField& X, int kmax, bool equivariant, int log2_grid) {
    return project_impl([&](const Vec2& p) { return X.eval(p); }, [&](const Vec2& p) { return X.jacobian(p); },
                        kmax, equivariant, log2_grid);
}

// ---- distances ------------------------------------------------------------

double cr_distance(const FlowMap& f, const FlowMap& g, int grid, int r, bool parallel) {
    double c0 = 0.0, c1 = 0.0;
#pragma omp parallel for collapse(2) reduction(max : c0, c1) schedule(dynamic, 16) if (parallel)
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Vec2 p{kTwoPi * i / grid, kTwoPi * j / grid};
            const FlowPoint a = f(p), b = g(p);
            c0 = std::max(c0, torus_distance(a.p, b.p));
            if (r >= 1) c1 = std::max(c1, op_norm(mat_sub(a.J, b.J)));
        }
    return r >= 1 ? c0 + c1 : c0;
}

// ---- certification --------------------------------------------------------

namespace {

struct Sups {
    double c0 = 0.0;
    double c1 = 0.0;
};

Sups sup_difference(const std::vector<FlowPoint>& a, const std::vector<FlowPoint>& b) {
    Sups s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s.c0 = std::max(s.c0, torus_distance(a[i].p, b[i].p));
        s.c1 = std::max(s.c1, op_norm(mat_sub(a[i].J, b[i].J)));
    }
    return s;
}

// Lie bracket [A, B] = DB.A - DA.B of two shear sums.
Vec2 bracket(const ShearingStep& a, const std::vector<ShearingStep>& bs, std::size_t q, const Vec2& p) {
    Vec2 B{0, 0};
    Mat2 DB{};
    for (std::size_t i = 0; i < q; ++i) {
        const Vec2 x = bs[i].eval(p);
        B = {B[0] + x[0], B[1] + x[1]};
        DB = mat_add(DB, bs[i].jacobian(p));
    }
    const Vec2 A = a.eval(p);
    const Vec2 l = mat_vec(DB, A), r = mat_vec(a.jacobian(p), B);
    return {l[0] - r[0], l[1] - r[1]};
}

}  // namespace

CertifyReport certify_run(const TimeDependentField& X, const CertifyOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    CertifyReport rep;
    rep.options = opt;
    const int n = opt.n, G = opt.grid;
    SplittingSchedule sched = SplittingSchedule::uniform(n, opt.k);
    sched.validate();
    if (G < 64) throw Error(Errc::SchemaError, "certification grid must be at least 64");

    const double div = X.divergence_defect(128, 5);
    if (div > 1e-8) throw Error(Errc::NotDivergenceFree, "divergence " + std::to_string(div));

    std::vector<FrozenField> XF, ZF;
    std::vector<std::vector<ShearingStep>> steps;
    for (int j = 0; j < n; ++j) {
        XF.push_back(X.frozen(double(j) / n));
        Projection pr = fourier_project(XF.back(), opt.kmax, opt.equivariant);
        if (opt.equivariant && pr.cosine_content > 1e-10)
            throw Error(Errc::NotEquivariant, "cosine content " + std::to_string(pr.cosine_content));
        rep.fourier_residual = std::max(rep.fourier_residual, pr.residual);
        ZF.push_back(pr.as_field());
        if (pr.steps.empty()) pr.steps.push_back(ShearingStep{});
        sched.m[j] = int(pr.steps.size());
        steps.push_back(pr.steps);
    }

    // grid sups of the base field
    const FrozenField& X0 = X.base();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            const Vec2 p{kTwoPi * i / G, kTwoPi * j / G};
            s0 = std::max(s0, norm(X0.eval(p)));
            s1 = std::max(s1, op_norm(X0.jacobian(p)));
        }
    for (const auto& m : X0.modes) s2 += m.sup_second();
    double gmax = 0.0;
    for (int s = 0; s <= 1000; ++s) gmax = std::max(gmax, std::abs(X.time_factor(s / 1000.0)));
    const double inf = opt.inflation;
    rep.K0 = inf * gmax * s0;
    rep.K1 = inf * gmax * std::max(s0, s1);
    rep.K2 = std::max(rep.K1, inf * gmax * s2);

    // freeze gap: |g(j/n) - g(s)| times the base sups
    double dg = 0.0;
    for (int j = 0; j < n; ++j)
        for (int q = 0; q <= 32; ++q) {
            const double s = (j + q / 32.0) / n;
            dg = std::max(dg, std::abs(X.time_factor(double(j) / n) - X.time_factor(s)));
        }
    rep.freeze_gap_c0 = inf * dg * s0;
    rep.freeze_gap_c1 = inf * dg * (s0 + s1);
    const double xf = inf * rep.fourier_residual;

    // per-interval constants of the shear sums
    std::vector<double> KZ0(n), KZ1(n), KZ2(n), M0(n), M1(n);
    for (int j = 0; j < n; ++j) {
        double a = 0, b = 0, c = 0;
        for (const auto& w : steps[j]) {
            a += w.sup_norm();
            b += std::max(w.sup_norm(), w.sup_jacobian());
            c += std::max({w.sup_norm(), w.sup_jacobian(), w.sup_second()});
        }
        KZ0[j] = inf * a;
        KZ1[j] = inf * b;
        KZ2[j] = inf * c;
        double m0 = 0.0, m1 = 0.0;
        const auto& W = steps[j];
        for (std::size_t q = 1; q < W.size(); ++q)
            for (int i = 0; i < G; ++i)
                for (int l = 0; l < G; ++l) {
                    const Vec2 p{kTwoPi * i / G, kTwoPi * l / G};
                    m0 = std::max(m0, norm(bracket(W[q], W, q, p)));
                    const Mat2 D = fd_jacobian([&](const Vec2& x) { return bracket(W[q], W, q, x); }, p);
                    m1 = std::max(m1, op_norm(D));
                }
        M0[j] = inf * m0;
        M1[j] = inf * std::max(m0, m1);
        rep.M0 = std::max(rep.M0, M0[j]);
        rep.M1 = std::max(rep.M1, M1[j]);
    }

    const auto& ts = opt.times;
    const std::size_t T = ts.size(), P = std::size_t(G) * G;
    std::vector<std::vector<FlowPoint>> psi(T, std::vector<FlowPoint>(P)), thx = psi, thz = psi, om = psi;
    const VectorField VX = VectorField::from(X);
    ReferenceOptions ref;
    ref.tol = 1e-11;
    double det_defect = 0.0, eq_defect = 0.0;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : det_defect, eq_defect) if (opt.parallel)
    for (std::size_t q = 0; q < P; ++q) {
        const Vec2 p{kTwoPi * double(q / G) / G, kTwoPi * double(q % G) / G};
        const auto ref_path = reference_flow_at(VX, ts, p, true, ref);
        for (std::size_t a = 0; a < T; ++a) {
            psi[a][q] = ref_path[a];
            thx[a][q] = theta_flow(XF, ts[a], p, ref);
            thz[a][q] = theta_flow(ZF, ts[a], p, ref);
            om[a][q] = omega_flow(sched, steps, ts[a], p);
            det_defect = std::max(det_defect, std::abs(mat_det(om[a][q].J) - 1.0));
            if (opt.equivariant) {
                const FlowPoint mirror = omega_flow(sched, steps, ts[a], {-p[0], -p[1]});
                eq_defect = std::max(eq_defect, torus_distance(mirror.p, {-om[a][q].p[0], -om[a][q].p[1]}));
            }
        }
    }
    rep.det_defect = det_defect;
    if (opt.equivariant) {
        rep.equivariance_defect = eq_defect;
        double fixed = 0.0;
        const double pi = std::numbers::pi;
        for (const Vec2 f : {Vec2{0, 0}, Vec2{0, pi}, Vec2{pi, 0}, Vec2{pi, pi}})
            for (double t : ts) fixed = std::max(fixed, torus_distance(omega_flow(sched, steps, t, f).p, f));
        rep.fixed_point_defect = fixed;
    }

    for (std::size_t a = 0; a < T; ++a) {
        const double t = ts[a];
        const int j = slot(t, n);
        const double s = std::max(0.0, t - double(j) / n);

        // splitting stage: accumulate interval errors through the later flows
        double E0 = 0.0, E1 = 0.0, lip = 0.0;
        for (int i = 0; i < j; ++i) {
            E0 = bound_d0(n, sched.k[i], sched.m[i], 1.0 / n, M0[i], KZ1[i], KZ0[i]) + std::exp(KZ1[i] / n) * E0;
            E1 += bound_d1(n, sched.k[i], sched.m[i], 1.0 / n, M1[i], KZ2[i], KZ0[i], opt.r1) * std::exp(lip);
            lip += KZ1[i] / n;
        }
        const double split0 = bound_d0(n, sched.k[j], sched.m[j], s, M0[j], KZ1[j], KZ0[j]) + std::exp(KZ1[j] * s) * E0;
        const double split1 =
            E1 + bound_d1(n, sched.k[j], sched.m[j], s, M1[j], KZ2[j], KZ0[j], opt.r1) * std::exp(lip);

        StageRow fr{"freeze", t};
        const Sups d1 = sup_difference(psi[a], thx[a]);
        fr.c0 = d1.c0;
        fr.c1 = d1.c0 + d1.c1;
        fr.c0_bound = bound_h0(n, t, rep.freeze_gap_c0, rep.K1);
        fr.c1_bound = fr.c0_bound + bound_h1(n, t, rep.freeze_gap_c1, rep.K2);
        fr.c1_asserted = true;

        StageRow fo{"fourier", t};
        const Sups d2 = sup_difference(thx[a], thz[a]);
        fo.c0 = d2.c0;
        fo.c1 = d2.c0 + d2.c1;
        fo.c0_bound = bound_h0(n, t, xf, rep.K1 + xf);
        fo.c1_bound = fo.c0_bound + bound_h1(n, t, xf, rep.K2 + xf);
        fo.c1_asserted = true;

        StageRow sp{"split", t};
        const Sups d3 = sup_difference(thz[a], om[a]);
        sp.c0 = d3.c0;
        sp.c1 = d3.c0 + d3.c1;
        sp.c0_bound = split0;
        sp.c1_bound = split0 + split1;
        sp.c1_asserted = opt.r1_given;

        StageRow to{"total", t};
        const Sups d4 = sup_difference(psi[a], om[a]);
        to.c0 = d4.c0;
        to.c1 = d4.c0 + d4.c1;
        to.c0_bound = fr.c0_bound + fo.c0_bound + sp.c0_bound;
        to.c1_bound = fr.c1_bound + fo.c1_bound + sp.c1_bound;
        to.c1_asserted = opt.r1_given;

        for (StageRow* r : {&fr, &fo, &sp, &to}) {
            r->ok = r->c0 <= r->c0_bound + opt.slack && (!r->c1_asserted || r->c1 <= r->c1_bound + opt.slack);
            rep.ok = rep.ok && r->ok;
            rep.rows.push_back(*r);
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!rep.ok && opt.throw_on_violation) {
        for (const auto& r : rep.rows)
            if (!r.ok) {
                std::ostringstream os;
                os << "stage " << r.stage << " at t=" << r.t << ": C0 " << r.c0 << " vs " << r.c0_bound << ", C1 "
                   << r.c1 << " vs " << r.c1_bound;
                throw Error(Errc::BoundViolated, os.str());
            }
    }
    return rep;
}

std::string CertifyReport::to_json() const {
    json j;
    j["n"] = options.n;
    j["k"] = options.k;
    j["kmax"] = options.kmax;
    j["grid"] = options.grid;
    j["equivariant"] = options.equivariant;
    j["inflation"] = options.inflation;
    j["r1_given"] = options.r1_given;
    j["constants"] = {{"K0", K0}, {"K1", K1}, {"K2", K2}, {"M0", M0}, {"M1", M1}};
    j["freeze_gap"] = {{"c0", freeze_gap_c0}, {"c1", freeze_gap_c1}};
    j["fourier_residual"] = fourier_residual;
    j["det_defect"] = det_defect;
    if (equivariance_defect >= 0) {
        j["equivariance_defect"] = equivariance_defect;
        j["fixed_point_defect"] = fixed_point_defect;
    }
    j["rows"] = json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"stage", r.stage},
                             {"t", r.t},
                             {"c0", r.c0},
                             {"c0_bound", r.c0_bound},
                             {"c1", r.c1},
                             {"c1_bound", r.c1_bound},
                             {"c1_asserted", r.c1_asserted},
                             {"ok", r.ok}});
    j["seconds"] = seconds;
    j["ok"] = ok;
    return j.dump(2);
}

std::string CertifyReport::to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "stage,t,c0,c0_bound,c1,c1_bound,c1_asserted,ok\n";
    for (const auto& r : rows)
        os << r.stage << ',' << r.t << ',' << r.c0 << ',' << r.c0_bound << ',' << r.c1 << ',' << r.c1_bound << ','
           << (r.c1_asserted ? "true" : "false") << ',' << (r.ok ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace knotlab
