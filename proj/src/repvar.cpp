#include "knotlab/repvar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace knotlab {

namespace {

Vec3 normalize3(const Vec3& v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n == 0) return {1, 0, 0};
    return {v[0] / n, v[1] / n, v[2] / n};
}

SU2 from4(const double* q) {
    SU2 s{q[0], q[1], q[2], q[3]};
    double n = s.norm();
    if (n == 0) return SU2::identity();
    return {s.a / n, s.b / n, s.c / n, s.d / n};
}

double perp_x(const Vec3& v) { return std::hypot(v[1], v[2]); }

// Unknowns and residuals for one presentation at fixed alpha.
class RepSystem {
public:
    RepSystem(const KnotPresentation& p, double alpha) : p_(p), alpha_(alpha) {
        meridional_ = p.meridional && p.meridian.size() == 1;
        if (meridional_) {
            mgen_ = std::abs(p.meridian[0]) - 1;
            msign_ = p.meridian[0] > 0 ? 1 : -1;
        }
    }

    bool meridional() const { return meridional_; }
    int param_count() const { return meridional_ ? 3 * (p_.generators - 1) : 4 * p_.generators; }
    int residual_count() const {
        return 4 * static_cast<int>(p_.relators.size()) + (meridional_ ? 0 : 1);
    }

    std::vector<SU2> generators(const Eigen::VectorXd& x) const {
        std::vector<SU2> g(p_.generators);
        if (meridional_) {
            int k = 0;
            for (int j = 0; j < p_.generators; ++j) {
                if (j == mgen_) {
                    g[j] = SU2::diag(msign_ * alpha_);
                } else {
                    g[j] = SU2::rotation(alpha_, {x[3 * k], x[3 * k + 1], x[3 * k + 2]});
                    ++k;
                }
            }
        } else {
            for (int j = 0; j < p_.generators; ++j) g[j] = from4(x.data() + 4 * j);
        }
        return g;
    }

    Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
        auto g = generators(x);
        Eigen::VectorXd r(residual_count());
        int i = 0;
        for (const auto& w : p_.relators) {
            SU2 v = eval_word(w, g);
            r[i++] = v.a - 1;
            r[i++] = v.b;
            r[i++] = v.c;
            r[i++] = v.d;
        }
        if (!meridional_) r[i++] = eval_word(p_.meridian, g).a - std::cos(alpha_);
        return r;
    }

    // Keep parameter blocks at unit length; the residual only sees directions.
    void renormalize(Eigen::VectorXd& x) const {
        const int block = meridional_ ? 3 : 4;
        for (int k = 0; k + block <= x.size(); k += block) {
            double n = x.segment(k, block).norm();
            if (n > 0) x.segment(k, block) /= n;
        }
    }

    Eigen::VectorXd random_start(std::mt19937_64& rng) const {
        std::normal_distribution<double> nd;
        Eigen::VectorXd x(param_count());
        for (int i = 0; i < x.size(); ++i) x[i] = nd(rng);
        renormalize(x);
        return x;
    }

    const KnotPresentation& pres() const { return p_; }
    double alpha() const { return alpha_; }

private:
    const KnotPresentation& p_;
    double alpha_;
    bool meridional_ = false;
    int mgen_ = 0;
    int msign_ = 1;
};

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Levenberg-Marquardt with a central-difference Jacobian.
double levenberg_marquardt(const RepSystem& sys, Eigen::VectorXd& x, int max_iter = 200) {
    const int n = static_cast<int>(x.size());
    const int m = sys.residual_count();
    if (m == 0) return 0;
    Eigen::VectorXd f = sys.residual(x);
    double cost = f.squaredNorm();
    double lambda = 1e-3;
    Eigen::MatrixXd jac(m, n);
    for (int it = 0; it < max_iter && inf_norm(f) > 1e-14; ++it) {
        const double h = 1e-7;
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac.col(j) = (sys.residual(xp) - sys.residual(xm)) / (2 * h);
        }
        Eigen::MatrixXd a = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * f;
        bool improved = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd damped = a;
            for (int j = 0; j < n; ++j) damped(j, j) += lambda * (a(j, j) + 1e-9);
            Eigen::VectorXd dx = damped.ldlt().solve(-g);
            Eigen::VectorXd xn = x + dx;
            sys.renormalize(xn);
            Eigen::VectorXd fn = sys.residual(xn);
            double cn = fn.squaredNorm();
            if (std::isfinite(cn) && cn < cost) {
                x = xn;
                f = fn;
                double rel = (cost - cn) / std::max(cost, 1e-300);
                cost = cn;
                lambda = std::max(lambda / 3, 1e-12);
                improved = true;
                if (rel < 1e-14) it = max_iter;
                break;
            }
            lambda *= 4;
        }
        if (!improved) break;
    }
    return inf_norm(f);
}

Vec3 rotate_x(const Vec3& v, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]};
}

SU2 rotate_x(const SU2& q, double theta) {
    Vec3 v = rotate_x(q.vec(), theta);
    return {q.a, v[0], v[1], v[2]};
}

bool irreducible(const std::vector<SU2>& g, double tol) {
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = i + 1; j < g.size(); ++j)
            if (distance(g[i] * g[j], g[j] * g[i]) > tol) return true;
    return false;
}

// Conjugate so rho(mu) = cos a + sin a i, then use the U(1) freedom on the first
// generator that is not a rotation about the x axis.
std::optional<AlphaSolution> gauge_fix(const RepSystem& sys, const Eigen::VectorXd& x, double res,
                                       const TraceOptions& opt) {
    const auto& p = sys.pres();
    std::vector<SU2> g = sys.generators(x);
    if (!irreducible(g, opt.irreducible_tol)) return std::nullopt;
    SU2 mu = eval_word(p.meridian, g);
    if (!sys.meridional()) {
        Vec3 v = normalize3(mu.vec());
        Vec3 x_hat{1, 0, 0};
        Vec3 axis{v[1] * x_hat[2] - v[2] * x_hat[1], v[2] * x_hat[0] - v[0] * x_hat[2],
                  v[0] * x_hat[1] - v[1] * x_hat[0]};
        double dot = v[0];
        double ang = std::acos(std::clamp(dot, -1.0, 1.0));
        if (std::hypot(axis[0], std::hypot(axis[1], axis[2])) < 1e-14) axis = {0, 1, 0};
        SU2 h = SU2::rotation(ang / 2, axis);
        for (auto& e : g) e = conjugate_by(h, e);
        mu = eval_word(p.meridian, g);
    }
    double theta = 0;
    for (const auto& e : g) {
        if (perp_x(e.vec()) > 1e-3) {
            Vec3 v = e.vec();
            theta = -std::atan2(v[2], v[1]);  // (y,z) -> (r,0)
            break;
        }
    }
    for (auto& e : g) e = rotate_x(e, theta);
    SU2 lam = eval_word(p.longitude, g);
    AlphaSolution s;
    s.alpha = sys.alpha();
    s.beta = wrap_2pi(std::atan2(lam.b, lam.a));
    mu = eval_word(p.meridian, g);
    double comm = std::max({std::abs(lam.c), std::abs(lam.d), std::abs(mu.c), std::abs(mu.d)});
    s.residual = std::max(res, comm);
    for (const auto& e : g) {
        s.state.insert(s.state.end(), {e.a, e.b, e.c, e.d});
    }
    s.rho = g;
    return s;
}

double state_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void add_unique(std::vector<AlphaSolution>& sols, AlphaSolution s) {
    for (const auto& t : sols)
        if (state_dist(t.state, s.state) < 1e-6 && circ_dist(t.beta, s.beta) < 1e-6) return;
    sols.push_back(std::move(s));
}

void sort_solutions(std::vector<AlphaSolution>& sols) {
    std::sort(sols.begin(), sols.end(), [](const AlphaSolution& a, const AlphaSolution& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.state < b.state;
    });
}

std::optional<AlphaSolution> solve_from(const RepSystem& sys, Eigen::VectorXd x, const TraceOptions& opt) {
    double res = levenberg_marquardt(sys, x);
    if (!(res < opt.residual_tol)) return std::nullopt;
    return gauge_fix(sys, x, res, opt);
}

// Parameter vector that reproduces a gauge-fixed solution at a new alpha.
Eigen::VectorXd seed_from(const RepSystem& sys, const AlphaSolution& s) {
    Eigen::VectorXd x(sys.param_count());
    const int g = sys.pres().generators;
    if (sys.meridional()) {
        int mgen = std::abs(sys.pres().meridian[0]) - 1;
        int k = 0;
        for (int j = 0; j < g; ++j) {
            if (j == mgen) continue;
            const SU2& e = s.rho[j];
            Vec3 v = normalize3(e.vec());
            x[3 * k] = v[0];
            x[3 * k + 1] = v[1];
            x[3 * k + 2] = v[2];
            ++k;
        }
    } else {
        for (int j = 0; j < g; ++j) {
            x[4 * j] = s.rho[j].a;
            x[4 * j + 1] = s.rho[j].b;
            x[4 * j + 2] = s.rho[j].c;
            x[4 * j + 3] = s.rho[j].d;
        }
    }
    return x;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<AlphaSolution> solve_at_alpha(const KnotPresentation& pres, double alpha, const TraceOptions& opt) {
    RepSystem sys(pres, alpha);
    std::vector<AlphaSolution> sols;
    if (pres.generators < 2 || sys.param_count() == 0) return sols;
    long long alpha_key = std::llround(alpha * 1e9);
    for (int s = 0; s < opt.starts; ++s) {
        std::mt19937_64 rng(mix(mix(opt.seed, static_cast<std::uint64_t>(alpha_key)), static_cast<std::uint64_t>(s)));
        auto sol = solve_from(sys, sys.random_start(rng), opt);
        if (sol) add_unique(sols, std::move(*sol));
    }
    sort_solutions(sols);
    return sols;
}

namespace {

struct OpenArc {
    Arc arc;
    std::vector<double> last_state;
    int last_index = -1;
    double prev_beta_lift = 0;
    double last_beta_lift = 0;
    int count = 0;
};

void attach_limits(Arc& arc, double step) {
    if (arc.points.size() < 3) return;
    auto lift = lift_path([&] {
        std::vector<PillowcasePoint> pts;
        for (const auto& q : arc.points) pts.push_back({q.alpha, q.beta});
        return pts;
    }());
    const size_t n = lift.points.size();
    // Whole-arc line first; if the arc is curved use the last few samples at each end.
    auto fit = [&](size_t lo, size_t hi) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double k = static_cast<double>(hi - lo);
        for (size_t i = lo; i < hi; ++i) {
            sx += lift.points[i][0];
            sy += lift.points[i][1];
            sxx += lift.points[i][0] * lift.points[i][0];
            sxy += lift.points[i][0] * lift.points[i][1];
        }
        double den = k * sxx - sx * sx;
        double s = den != 0 ? (k * sxy - sx * sy) / den : 0;
        double c = (sy - s * sx) / k;
        double r = 0;
        for (size_t i = lo; i < hi; ++i)
            r = std::max(r, std::abs(lift.points[i][1] - (s * lift.points[i][0] + c)));
        return std::array<double, 3>{s, c, r};
    };
    auto whole = fit(0, n);
    bool straight = whole[2] < 1e-6;
    for (int end = 0; end < 2; ++end) {
        std::array<double, 3> line = whole;
        if (!straight) {
            size_t w = std::min<size_t>(4, n);
            line = end == 0 ? fit(0, w) : fit(n - w, n);
        }
        const auto& tip = end == 0 ? lift.points.front() : lift.points.back();
        double s = line[0], c = line[1];
        if (std::abs(s) < 1e-12) continue;
        // Next multiple of 2pi reached when moving past the end of the arc.
        double dir = end == 0 ? -1.0 : 1.0;
        double beta_dir = dir * s;
        double k = beta_dir > 0 ? std::ceil(tip[1] / kTwoPi - 1e-12) : std::floor(tip[1] / kTwoPi + 1e-12);
        double a_star = (k * kTwoPi - c) / s;
        double gap = (a_star - tip[0]) * dir;
        if (gap < -1e-9 || gap > 1.5 * step) continue;
        if (a_star <= 0 || a_star >= kPi) continue;
        ImagePoint lp{a_star, 0.0, 0.0, true};
        arc.limits.push_back(lp);
    }
    std::sort(arc.limits.begin(), arc.limits.end(),
              [](const ImagePoint& a, const ImagePoint& b) { return a.alpha < b.alpha; });
}

// Reducible limits sit at roots of Delta(e^{2i alpha}); move an extrapolated limit onto the
// sign change within one grid step, if there is one.
void snap_limits(Arc& arc, const LaurentPoly& delta, double step) {
    if (delta.is_unit()) return;
    auto f = [&](double a) { return delta.eval(std::polar(1.0, 2 * a)).real(); };
    for (auto& l : arc.limits) {
        const double lo0 = std::max(1e-9, l.alpha - step), hi0 = std::min(kPi - 1e-9, l.alpha + step);
        const int probes = 16;
        double best_lo = 0, best_hi = 0, best_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < probes; ++j) {
            double a = lo0 + (hi0 - lo0) * j / probes, b = lo0 + (hi0 - lo0) * (j + 1) / probes;
            if (f(a) * f(b) > 0) continue;
            double d = std::abs(0.5 * (a + b) - l.alpha);
            if (d < best_d) best_d = d, best_lo = a, best_hi = b;
        }
        if (!std::isfinite(best_d)) continue;
        double flo = f(best_lo);
        for (int it = 0; it < 100 && best_hi - best_lo > 1e-15; ++it) {
            double mid = 0.5 * (best_lo + best_hi);
            if ((f(mid) > 0) == (flo > 0)) best_lo = mid, flo = f(mid);
            else best_hi = mid;
        }
        l.alpha = 0.5 * (best_lo + best_hi);
    }
}

}  // namespace

PillowcaseImage trace_image(const KnotPresentation& pres, const TraceOptions& opt) {
    if (opt.resolution < 8) throw Error(Errc::PresentationInvalid, "resolution too small");
    abelian_weights(pres);
    PillowcaseImage img;
    const int n = opt.resolution;
    img.grid_step = kPi / n;
    if (pres.generators < 2) return img;
    std::vector<double> alphas(n);
    for (int i = 0; i < n; ++i) alphas[i] = kPi * (i + 0.5) / n;
    std::vector<std::vector<AlphaSolution>> per(n);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int i = 0; i < n; ++i) per[i] = solve_at_alpha(pres, alphas[i], opt);

    // Continuation: seed each alpha from its neighbours' solutions until nothing new appears.
    for (int round = 0; round < opt.max_rounds; ++round) {
        std::vector<std::vector<AlphaSolution>> next = per;
        int added = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : added) if (opt.parallel)
        for (int i = 0; i < n; ++i) {
            RepSystem sys(pres, alphas[i]);
            for (int nb : {i - 1, i + 1}) {
                if (nb < 0 || nb >= n) continue;
                for (const auto& s : per[nb]) {
                    auto sol = solve_from(sys, seed_from(sys, s), opt);
                    if (!sol) continue;
                    size_t before = next[i].size();
                    add_unique(next[i], std::move(*sol));
                    if (next[i].size() > before) ++added;
                }
            }
            sort_solutions(next[i]);
        }
        per.swap(next);
        if (added == 0) break;
    }

    // Cluster into arcs by nearest-neighbour matching with linear beta prediction.
    std::vector<OpenArc> open, done;
    for (int i = 0; i < n; ++i) {
        struct Cand {
            double d;
            size_t arc, sol;
        };
        std::vector<Cand> cands;
        for (size_t a = 0; a < open.size(); ++a) {
            if (i - open[a].last_index > 2) continue;
            double pred = open[a].last_beta_lift;
            if (open[a].count >= 2)
                pred += (open[a].last_beta_lift - open[a].prev_beta_lift) * (i - open[a].last_index);
            for (size_t s = 0; s < per[i].size(); ++s) {
                double d = std::max(state_dist(open[a].last_state, per[i][s].state),
                                    circ_dist(per[i][s].beta, pred));
                if (d < opt.match_threshold) cands.push_back({d, a, s});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
            if (x.d != y.d) return x.d < y.d;
            if (x.arc != y.arc) return x.arc < y.arc;
            return x.sol < y.sol;
        });
        std::vector<bool> arc_used(open.size(), false), sol_used(per[i].size(), false);
        for (const auto& c : cands) {
            if (arc_used[c.arc] || sol_used[c.sol]) continue;
            arc_used[c.arc] = sol_used[c.sol] = true;
            auto& oa = open[c.arc];
            const auto& s = per[i][c.sol];
            double lifted = oa.last_beta_lift + wrap_pm_pi(s.beta - oa.last_beta_lift);
            oa.prev_beta_lift = oa.last_beta_lift;
            oa.last_beta_lift = lifted;
            oa.last_state = s.state;
            oa.last_index = i;
            ++oa.count;
            oa.arc.points.push_back({s.alpha, s.beta, s.residual, false});
        }
        for (size_t s = 0; s < per[i].size(); ++s) {
            if (sol_used[s]) continue;
            OpenArc oa;
            oa.last_state = per[i][s].state;
            oa.last_index = i;
            oa.prev_beta_lift = oa.last_beta_lift = per[i][s].beta;
            oa.count = 1;
            oa.arc.points.push_back({per[i][s].alpha, per[i][s].beta, per[i][s].residual, false});
            open.push_back(std::move(oa));
        }
        std::vector<OpenArc> still;
        for (auto& oa : open) {
            if (i - oa.last_index >= 2) done.push_back(std::move(oa));
            else still.push_back(std::move(oa));
        }
        open.swap(still);
    }
    for (auto& oa : open) done.push_back(std::move(oa));

    std::sort(done.begin(), done.end(), [](const OpenArc& a, const OpenArc& b) {
        const auto& p = a.arc.points.front();
        const auto& q = b.arc.points.front();
        if (p.alpha != q.alpha) return p.alpha < q.alpha;
        return p.beta < q.beta;
    });
    const LaurentPoly delta = alexander_polynomial(pres);
    double amin = kPi, amax = 0;
    for (auto& oa : done) {
        if (oa.arc.points.size() < 3) {
            for (const auto& q : oa.arc.points) img.isolated_points.push_back(q);
        } else {
            oa.arc.id = static_cast<int>(img.arcs.size());
            attach_limits(oa.arc, img.grid_step);
            snap_limits(oa.arc, delta, img.grid_step);
            img.arcs.push_back(std::move(oa.arc));
        }
    }
    for (const auto& q : img.all_points()) {
        amin = std::min(amin, q.alpha);
        amax = std::max(amax, q.alpha);
    }
    img.alpha_margin = img.empty() ? kPi / 2 : 0.5 * std::min(amin, kPi - amax);
    return img;
}

PillowcaseImage torus_knot_image(int p, int q, int resolution) {
    KnotPresentation pres = torus_presentation(p, q);
    TraceOptions opt;
    // keep the per-step beta change pq*pi/n well inside the matching threshold
    const double steep = std::abs(static_cast<double>(p) * q) * kPi / (0.5 * opt.match_threshold);
    opt.resolution = std::max(resolution, static_cast<int>(std::ceil(steep)));
    return trace_image(pres, opt);
}

namespace {

double recompute_margin(const PillowcaseImage& img) {
    if (img.empty()) return kPi / 2;
    double amin = kPi, amax = 0;
    for (const auto& q : img.all_points()) {
        amin = std::min(amin, q.alpha);
        amax = std::max(amax, q.alpha);
    }
    return 0.5 * std::min(amin, kPi - amax);
}

ImagePoint satellite_point(const ImagePoint& q, int w, int k) {
    PillowcasePoint c = iota_canonicalize((q.alpha + kTwoPi * k) / w, static_cast<double>(w) * q.beta);
    ImagePoint out = q;
    out.alpha = c.alpha;
    out.beta = c.beta;
    return out;
}

}  // namespace

PillowcaseImage satellite_image(const PillowcaseImage& img, const SatelliteSpec& spec) {
    if (spec.winding == 0) throw Error(Errc::ZeroWinding, "satellite with winding number 0");
    if (spec.cable_q != 0 && (spec.cable_q < 2 || std::gcd(spec.cable_p, spec.cable_q) != 1))
        throw Error(Errc::InvalidCableParams, "cable needs gcd(p,q)=1 and q>=2");
    const int w = std::abs(spec.winding);
    PillowcaseImage out;
    out.grid_step = img.grid_step / w;
    out.partial = true;
    out.notes = img.notes;
    out.notes.push_back("satellite sub-image from companion irreducibles only");
    for (int k = 0; k < w; ++k) {
        if (spec.branch >= 0 && spec.branch != k) continue;
        for (const auto& arc : img.arcs) {
            Arc a;
            a.id = static_cast<int>(out.arcs.size());
            for (const auto& q : arc.points) a.points.push_back(satellite_point(q, spec.winding, k));
            for (const auto& q : arc.limits) a.limits.push_back(satellite_point(q, spec.winding, k));
            out.arcs.push_back(std::move(a));
        }
        for (const auto& q : img.isolated_points) out.isolated_points.push_back(satellite_point(q, spec.winding, k));
    }
    out.alpha_margin = recompute_margin(out);
    return out;
}

std::vector<std::array<double, 2>> lifted_arc(const Arc& arc) {
    std::vector<PillowcasePoint> pts;
    for (const auto& q : arc.points) pts.push_back({q.alpha, q.beta});
    auto lift = lift_path(pts).points;
    if (lift.empty()) return lift;
    for (const auto& l : arc.limits) {
        bool front = l.alpha <= lift.front()[0];
        const auto& nb = front ? lift.front() : lift.back();
        double b = nb[1] + wrap_pm_pi(l.beta - nb[1]);
        if (front) lift.insert(lift.begin(), {l.alpha, b});
        else lift.push_back({l.alpha, b});
    }
    return lift;
}

namespace {

double interp_lift(const std::vector<std::array<double, 2>>& lift, double a) {
    auto it = std::lower_bound(lift.begin(), lift.end(), a,
                               [](const std::array<double, 2>& p, double x) { return p[0] < x; });
    if (it == lift.begin()) return lift.front()[1];
    if (it == lift.end()) return lift.back()[1];
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi[0] == lo[0]) return lo[1];
    double t = (a - lo[0]) / (hi[0] - lo[0]);
    return lo[1] + t * (hi[1] - lo[1]);
}

bool increasing_alpha(const Arc& arc) {
    for (size_t i = 1; i < arc.points.size(); ++i)
        if (arc.points[i].alpha <= arc.points[i - 1].alpha) return false;
    return !arc.points.empty();
}

}  // namespace

PillowcaseImage connected_sum_image(const PillowcaseImage& a, const PillowcaseImage& b) {
    PillowcaseImage out;
    out.partial = true;
    out.grid_step = std::max(a.grid_step, b.grid_step);
    out.notes.push_back("connected-sum sub-image");
    for (const auto* src : {&a, &b})
        for (const auto& arc : src->arcs) {
            Arc c = arc;
            c.id = static_cast<int>(out.arcs.size());
            out.arcs.push_back(std::move(c));
        }
    for (const auto* src : {&a, &b})
        for (const auto& q : src->isolated_points) out.isolated_points.push_back(q);

    for (const auto& x : a.arcs) {
        if (!increasing_alpha(x)) continue;
        auto lx = lift_path([&] {
            std::vector<PillowcasePoint> v;
            for (const auto& q : x.points) v.push_back({q.alpha, q.beta});
            return v;
        }()).points;
        for (const auto& y : b.arcs) {
            if (!increasing_alpha(y)) continue;
            auto ly = lift_path([&] {
                std::vector<PillowcasePoint> v;
                for (const auto& q : y.points) v.push_back({q.alpha, q.beta});
                return v;
            }()).points;
            double lo = std::max(lx.front()[0], ly.front()[0]);
            double hi = std::min(lx.back()[0], ly.back()[0]);
            if (lo > hi) continue;
            std::vector<double> grid;
            for (const auto& p : lx)
                if (p[0] >= lo - 1e-12 && p[0] <= hi + 1e-12) grid.push_back(p[0]);
            for (const auto& p : ly)
                if (p[0] >= lo - 1e-12 && p[0] <= hi + 1e-12) grid.push_back(p[0]);
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end(),
                                   [](double u, double v) { return std::abs(u - v) < 1e-12; }),
                       grid.end());
            Arc c;
            c.id = static_cast<int>(out.arcs.size());
            for (double al : grid) {
                double beta = wrap_2pi(interp_lift(lx, al) + interp_lift(ly, al));
                c.points.push_back({al, beta, 0.0, false});
            }
            if (c.points.size() >= 2) out.arcs.push_back(std::move(c));
        }
    }
    out.alpha_margin = recompute_margin(out);
    return out;
}

std::vector<ArcLine> fit_arc_lines(const PillowcaseImage& img, double tol) {
    std::vector<ArcLine> lines;
    for (const auto& arc : img.arcs) {
        if (arc.points.size() < 2) continue;
        std::vector<PillowcasePoint> pts;
        for (const auto& q : arc.points) pts.push_back({q.alpha, q.beta});
        auto lift = lift_path(pts).points;
        const double k = static_cast<double>(lift.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : lift) {
            sx += p[0];
            sy += p[1];
            sxx += p[0] * p[0];
            sxy += p[0] * p[1];
        }
        ArcLine l;
        l.arc_id = arc.id;
        double den = k * sxx - sx * sx;
        if (std::abs(den) < 1e-300) {
            // all samples at one alpha: vertical segment
            l.slope = std::numeric_limits<double>::infinity();
            l.intercept = lift.front()[0];
            l.alpha_lo = l.alpha_hi = lift.front()[0];
            lines.push_back(l);
            continue;
        }
        l.slope = (k * sxy - sx * sy) / den;
        double c = (sy - l.slope * sx) / k;
        for (const auto& p : lift) l.residual = std::max(l.residual, std::abs(p[1] - (l.slope * p[0] + c)));
        l.intercept = wrap_2pi(c);
        l.alpha_lo = lift.front()[0];
        l.alpha_hi = lift.front()[0];
        for (const auto& p : lift) {
            l.alpha_lo = std::min(l.alpha_lo, p[0]);
            l.alpha_hi = std::max(l.alpha_hi, p[0]);
        }
        for (const auto& q : arc.limits) {
            l.alpha_lo = std::min(l.alpha_lo, q.alpha);
            l.alpha_hi = std::max(l.alpha_hi, q.alpha);
        }
        l.curved = l.residual > tol;
        lines.push_back(l);
    }
    return lines;
}

int connecting_path_winding(const PillowcaseImage& img) {
    for (const auto& arc : img.arcs) {
        if (arc.points.empty()) continue;
        auto lift = lifted_arc(arc);
        double lo = lift.front()[1], hi = lo;
        for (const auto& p : lift) {
            lo = std::min(lo, p[1]);
            hi = std::max(hi, p[1]);
        }
        double k = std::ceil(lo / kTwoPi - 1e-9);
        if ((k + 1) * kTwoPi <= hi + 1e-9) return 1;
    }
    return 0;
}

}  // namespace knotlab
