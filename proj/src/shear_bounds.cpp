#include "knotlab/shearflow.hpp"

#include <algorithm>
#include <cmath>

namespace knotlab {

namespace {

void require_nonnegative(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!(x >= 0.0)) throw Error(Errc::NegativeArgument, "bound function argument " + std::to_string(x));
}

void require_positive(std::initializer_list<int> xs) {
    for (int x : xs)
        if (x < 1) throw Error(Errc::NegativeArgument, "count argument " + std::to_string(x));
}

// j with j/n <= t <= (j+1)/n; the last interval absorbs t >= 1.
int interval_index(int n, double t) {
    int j = static_cast<int>(std::floor(t * n));
    return std::clamp(j, 0, n - 1);
}

}  // namespace

double bound_a0(double t, double K) {
    require_nonnegative({t, K});
    return std::exp(K * t);
}

double bound_a1(double t, double K) {
    require_nonnegative({t, K});
    return K * std::exp(3.0 * K * t);
}

double bound_b0(double t, double d, double K) {
    require_nonnegative({t, d, K});
    return d * std::exp(K * t);
}

// Gronwall on D(phi_X - phi_Y) with |DX - DY| <= d, |D^2 X| <= K,
// |D phi_Y| <= e^{(d+K)t}, |D phi_X| <= e^{Kt}.
double bound_b1(double t, double d, double K) {
    require_nonnegative({t, d, K});
    return (d * std::exp((d + K) * t) + K * d * std::exp(2.0 * K * t)) * std::exp(K * t);
}

double bound_f0(double t, double x, double K) {
    require_nonnegative({t, x, K});
    return t * x * std::exp(K * t);
}

double bound_f1(double t, double x, double K) {
    require_nonnegative({t, x, K});
    return (bound_b1(1.0, x, K) + bound_a1(1.0, K) * bound_f0(t, x, K)) * std::exp(K * t);
}

double bound_h0(int n, double t, double x, double K) {
    require_nonnegative({t, x, K});
    require_positive({n});
    const int j = interval_index(n, t);
    const double s = t - static_cast<double>(j) / n;
    double sum = 0.0;
    for (int i = 0; i < j; ++i) sum += std::exp(K * (t - static_cast<double>(i) / n));
    return s * x * std::exp(K * s) + x / n * sum;
}

double bound_h1(int n, double t, double x, double K) {
    require_nonnegative({t, x, K});
    require_positive({n});
    const int j = interval_index(n, t);
    const double step = 1.0 / n;
    const double b = bound_b1(step, x, K);
    const double a = bound_a1(step, K);
    const double s = t - static_cast<double>(j) / n;
    double total = s * (b + a * bound_h0(n, static_cast<double>(j) / n, x, K)) * std::exp(K * t);
    for (int i = 0; i < j; ++i) {
        const double ti = static_cast<double>(i) / n;
        total += step * (b + a * bound_h0(n, ti, x, K)) * std::exp(K * ti);
    }
    return total;
}

// Splitting error of m shears against the flow of their sum, per unit t^2.
double bound_c0(int m, double t, double M, double K) {
    require_nonnegative({t, M, K});
    require_positive({m});
    double sum = 0.0;
    for (int i = 1; i < m; ++i) sum += std::exp(i * K * t);
    return 0.5 * M * sum;
}

double bound_c1(int m, double t, double M, double K, double r1) {
    require_nonnegative({t, M, K, r1});
    const double e = std::exp(K * t);
    return (K * bound_c0(m, t, M, K) * e + 0.5 * M * e + 0.5 * r1) * e;
}

// tau = 1/(nk): whole cycles accumulate e_j = e^{K tau} e_{j-1} + tau^2 c0,
// a partial cycle of length s adds at most (m + 1) s K0. Kept nondecreasing in t.
double bound_d0(int n, int k, int m, double t, double M, double K, double K0) {
    require_nonnegative({t, M, K, K0});
    require_positive({n, k, m});
    const double tau = 1.0 / (static_cast<double>(n) * k);
    const long cycles = static_cast<long>(std::floor(t / tau + 1e-12));
    const double local = tau * tau * bound_c0(m, tau, M, K);
    const double grow = std::exp(K * tau);
    double e = 0.0, prev = 0.0;
    for (long j = 0; j < cycles; ++j) {
        prev = e;
        e = grow * e + local;
    }
    const double s = std::max(0.0, t - cycles * tau);
    double bound = std::exp(K * s) * e + (m + 1) * s * K0;
    // the partial-cycle estimate just before the last whole cycle closed can be larger
    if (cycles > 0) bound = std::max(bound, grow * prev + (m + 1) * tau * K0);
    return bound;
}

double bound_d1(int n, int k, int m, double t, double M, double K, double K0, double r1) {
    require_nonnegative({t, M, K, K0, r1});
    require_positive({n, k, m});
    const double inv_k = 1.0 / k;
    const double head = std::max(inv_k * bound_c1(m, 1.0, M, K, r1), 2.0 * inv_k * K * std::exp(K * inv_k));
    return 2.0 * (t + inv_k) * (head + bound_a1(inv_k, K) * bound_d0(n, k, m, 1.0, M, K, K0)) *
           std::exp(K * t);
}

const std::vector<std::string>& bound_function_names() {
    static const std::vector<std::string> names{"a0", "a1", "b0", "b1", "c0", "c1", "d0",
                                                "d1", "f0", "f1", "h0", "h1", "g0", "g1"};
    return names;
}

double bound_function(const std::string& name, const BoundArgs& a) {
    if (name == "a0") return bound_a0(a.t, a.K);
    if (name == "a1") return bound_a1(a.t, a.K);
    if (name == "b0") return bound_b0(a.t, a.x, a.K);
    if (name == "b1") return bound_b1(a.t, a.x, a.K);
    if (name == "c0") return bound_c0(a.m, a.t, a.x, a.K);
    if (name == "c1") return bound_c1(a.m, a.t, a.x, a.K, a.r1);
    if (name == "d0") return bound_d0(a.n, a.k, a.m, a.t, a.x, a.K, a.K0);
    if (name == "d1") return bound_d1(a.n, a.k, a.m, a.t, a.x, a.K, a.K0, a.r1);
    if (name == "f0") return bound_f0(a.t, a.x, a.K);
    if (name == "f1") return bound_f1(a.t, a.x, a.K);
    if (name == "h0" || name == "g0") return bound_h0(a.n, a.t, a.x, a.K);
    if (name == "h1" || name == "g1") return bound_h1(a.n, a.t, a.x, a.K);
    throw Error(Errc::SchemaError, "unknown bound function " + name);
}

}  // namespace knotlab
