#include "knotlab/pillowcase.hpp"

#include "knotlab/common.hpp"

#include <algorithm>
#include <limits>

namespace knotlab {

SU2 SU2::rotation(double angle, const Vec3& axis) {
    double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    double s = std::sin(angle) / n;
    return {std::cos(angle), s * axis[0], s * axis[1], s * axis[2]};
}

SU2 SU2::normalized() const {
    double n = norm();
    return {a / n, b / n, c / n, d / n};
}

SU2 operator*(const SU2& x, const SU2& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
            x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
            x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
}

double distance(const SU2& x, const SU2& y) {
    double da = x.a - y.a, db = x.b - y.b, dc = x.c - y.c, dd = x.d - y.d;
    return std::sqrt(da * da + db * db + dc * dc + dd * dd);
}

SU2 conjugate_by(const SU2& g, const SU2& h) { return g * h * g.inverse(); }

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

double wrap_pm_pi(double x) {
    double r = wrap_2pi(x);
    return r > kPi ? r - kTwoPi : r;
}

double circ_dist(double x, double y) { return std::fabs(wrap_pm_pi(x - y)); }

PillowcasePoint pillowcase_coords(const SU2& m, const SU2& l) {
    if (std::fabs(m.norm() - 1) > kCommuteTol || std::fabs(l.norm() - 1) > kCommuteTol)
        throw Error(Errc::NotUnit, "pillowcase_coords needs unit quaternions");
    if (distance(m * l, l * m) > kCommuteTol)
        throw Error(Errc::NonCommuting, "meridian and longitude images do not commute");
    double alpha = std::acos(std::clamp(m.a, -1.0, 1.0));
    Vec3 v = m.vec();
    double vn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (vn < 1e-7) {
        // m = +-I: any diagonalization of l will do.
        double beta = std::acos(std::clamp(l.a, -1.0, 1.0));
        return iota_canonicalize(alpha < kPi / 2 ? 0.0 : kPi, beta);
    }
    Vec3 lv = l.vec();
    double s = (lv[0] * v[0] + lv[1] * v[1] + lv[2] * v[2]) / vn;
    return iota_canonicalize(alpha, std::atan2(s, l.a));
}

PillowcasePoint iota_canonicalize(double alpha, double beta) {
    double a = wrap_2pi(alpha), b = wrap_2pi(beta);
    if (a > kPi) {
        a = kTwoPi - a;
        b = wrap_2pi(kTwoPi - b);
    }
    if (a < kAngleTol || kPi - a < kAngleTol) {
        a = a < kAngleTol ? 0.0 : kPi;
        if (b > kPi) b = kTwoPi - b;
    }
    if (kTwoPi - b < kAngleTol) b = 0;
    return {a, b};
}

PillowcasePoint central_twist(const PillowcasePoint& p) {
    return iota_canonicalize(kPi - p.alpha, kTwoPi - p.beta);
}

double pillowcase_dist(const PillowcasePoint& p, const PillowcasePoint& q) {
    // The two lifts of q in the fundamental strip.
    double d1 = std::hypot(p.alpha - q.alpha, circ_dist(p.beta, q.beta));
    double d2 = std::hypot(p.alpha + q.alpha, circ_dist(p.beta, -q.beta));
    double d3 = std::hypot(2 * kPi - p.alpha - q.alpha, circ_dist(p.beta, -q.beta));
    return std::min({d1, d2, d3});
}

std::vector<PillowcasePoint> PillowcaseImage::all_points() const {
    std::vector<PillowcasePoint> out;
    for (const auto& arc : arcs)
        for (const auto& p : arc.points) out.push_back({p.alpha, p.beta});
    for (const auto& p : isolated_points) out.push_back({p.alpha, p.beta});
    return out;
}

namespace {

template <class F>
PillowcaseImage map_image(const PillowcaseImage& img, F f) {
    PillowcaseImage out = img;
    auto apply = [&](ImagePoint& p) {
        PillowcasePoint q = f(PillowcasePoint{p.alpha, p.beta});
        p.alpha = q.alpha;
        p.beta = q.beta;
    };
    for (auto& arc : out.arcs) {
        for (auto& p : arc.points) apply(p);
        for (auto& p : arc.limits) apply(p);
    }
    for (auto& p : out.isolated_points) apply(p);
    return out;
}

}  // namespace

PillowcaseImage mirror_image(const PillowcaseImage& img) {
    return map_image(img, [](PillowcasePoint p) {
        return iota_canonicalize(p.alpha, kTwoPi - p.beta);
    });
}

PillowcaseImage central_twist_image(const PillowcaseImage& img) {
    return map_image(img, [](PillowcasePoint p) { return central_twist(p); });
}

double hausdorff_distance(const std::vector<PillowcasePoint>& a,
                          const std::vector<PillowcasePoint>& b) {
    if (a.empty() && b.empty()) return 0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    auto one_sided = [](const std::vector<PillowcasePoint>& x, const std::vector<PillowcasePoint>& y) {
        double worst = 0;
        #pragma omp parallel for reduction(max : worst)
        for (size_t i = 0; i < x.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, pillowcase_dist(x[i], q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

PlanarLift lift_path(const std::vector<PillowcasePoint>& path) {
    PlanarLift lift;
    if (path.empty()) return lift;
    double beta = wrap_2pi(path[0].beta);
    lift.points.push_back({path[0].alpha, beta});
    for (size_t i = 1; i < path.size(); ++i) {
        double da = path[i].alpha - path[i - 1].alpha;
        double db = wrap_pm_pi(path[i].beta - path[i - 1].beta);
        if (std::fabs(da) >= kPi / 4 || std::fabs(db) >= kPi / 4)
            throw Error(Errc::SamplingTooCoarse,
                        "consecutive points " + std::to_string(i - 1) + "," + std::to_string(i) +
                            " are too far apart");
        beta += db;
        lift.points.push_back({path[i].alpha, beta});
    }
    return lift;
}

}  // namespace knotlab
