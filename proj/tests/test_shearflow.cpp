#include "knotlab/knot_record.hpp"
#include "knotlab/shearflow.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace knotlab;

namespace {

constexpr double kPi = std::numbers::pi;

FrozenField sinsin() {
    // H = sin x sin y, X = (H_y, -H_x) = (sin x cos y, -cos x sin y)
    FrozenField f;
    f.modes.push_back({{1, 1}, {0.5, -0.5}, {0, 0}});
    f.modes.push_back({{1, -1}, {0.5, 0.5}, {0, 0}});
    return f;
}

Vec2 sinsin_direct(const Vec2& p) { return {std::sin(p[0]) * std::cos(p[1]), -std::cos(p[0]) * std::sin(p[1])}; }

TimeDependentField hamiltonian_test_field() { return TimeDependentField(sinsin(), {1.0, 0.5}); }

std::vector<Vec2> sample_points(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 2 * kPi);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

double mat_diff(const Mat2& a, const Mat2& b) {
    Mat2 d{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
    return op_norm(d);
}

// Flow of a sum of modes with parallel wavevectors: the normal coordinate is conserved.
Vec2 parallel_exact(const std::vector<FourierShearField>& modes, double t, const Vec2& p) {
    Vec2 s{0, 0};
    for (const auto& m : modes) {
        Vec2 w = m.eval(p);
        s[0] += w[0];
        s[1] += w[1];
    }
    return {p[0] + t * s[0], p[1] + t * s[1]};
}

}  // namespace

TEST(ShearStep, Examples) {
    ShearingStep zero;
    for (const auto& p : sample_points(20, 1)) {
        auto r = shear_step_apply(zero, 0.7, p);
        EXPECT_EQ(r.p, p);
    }
    ShearingStep s;
    s.alpha = 1.0;  // f = sin
    auto r = shear_step_apply(s, 1.0, {0, kPi / 2});
    EXPECT_NEAR(r.p[0], 1.0, 1e-15);
    EXPECT_NEAR(r.p[1], kPi / 2, 1e-15);
}

TEST(ShearStep, NormalCoordinateInvariantAndUnitDeterminant) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> iv(-3, 3);
    std::uniform_real_distribution<double> u(-2, 2);
    int done = 0;
    while (done < 1000) {
        Vec2i v{iv(rng), iv(rng)};
        if (v[0] == 0 && v[1] == 0) continue;
        ShearingStep s;
        s.v = v;
        s.w = {-v[1], v[0]};
        s.freq = 1 + done % 3;
        s.constant = u(rng);
        s.alpha = u(rng);
        s.beta = u(rng);
        Vec2 p{u(rng) * 3, u(rng) * 3};
        double t = u(rng);
        auto r = shear_step_apply(s, t, p);
        EXPECT_NEAR(s.w[0] * r.p[0] + s.w[1] * r.p[1], s.w[0] * p[0] + s.w[1] * p[1], 1e-11);
        EXPECT_NEAR(mat_det(r.J), 1.0, 1e-12);
        // central differences for the Jacobian
        const double h = 1e-6;
        for (int c = 0; c < 2; ++c) {
            Vec2 pp = p, pm = p;
            pp[c] += h;
            pm[c] -= h;
            auto a = shear_step_apply(s, t, pp).p, b = shear_step_apply(s, t, pm).p;
            EXPECT_NEAR((a[0] - b[0]) / (2 * h), r.J[c], 1e-6);
            EXPECT_NEAR((a[1] - b[1]) / (2 * h), r.J[2 + c], 1e-6);
        }
        ++done;
    }
}

TEST(FourierProject, HamiltonianTwoModes) {
    auto proj = fourier_project(sinsin_direct, 4, false);
    ASSERT_EQ(proj.modes.size(), 2u);
    EXPECT_LT(proj.residual, 1e-12);
    // trig identities: X = 1/2 sin(x+y) (1,-1) + 1/2 sin(x-y) (1,1)
    for (const auto& m : proj.modes) {
        const bool plus = m.k[0] * m.k[1] > 0;
        const double sgn = m.k[0] > 0 ? 1.0 : -1.0;  // k -> -k flips the sine amplitude
        EXPECT_EQ(std::abs(m.k[0]), 1);
        EXPECT_EQ(std::abs(m.k[1]), 1);
        EXPECT_NEAR(m.a[0] * sgn, 0.5, 1e-12);
        EXPECT_NEAR(m.a[1] * sgn, plus ? -0.5 : 0.5, 1e-12);
        EXPECT_NEAR(std::hypot(m.b[0], m.b[1]), 0, 1e-12);
        EXPECT_NEAR(m.a[0] * m.k[0] + m.a[1] * m.k[1], 0, 1e-14);
    }
    for (const auto& p : sample_points(100, 4)) {
        Vec2 v = proj.as_field().eval(p), x = sinsin_direct(p);
        EXPECT_NEAR(v[0], x[0], 1e-12);
        EXPECT_NEAR(v[1], x[1], 1e-12);
    }
}

TEST(FourierProject, ConstantAndSingleShear) {
    auto c = fourier_project([](const Vec2&) { return Vec2{1, 0}; }, 4, false);
    EXPECT_TRUE(c.modes.empty());
    EXPECT_NEAR(c.constant[0], 1, 1e-14);
    EXPECT_NEAR(c.constant[1], 0, 1e-14);
    EXPECT_LT(c.residual, 1e-12);
    ASSERT_FALSE(c.steps.empty());
    for (const auto& st : c.steps) EXPECT_EQ(st.v[0] * st.w[0] + st.v[1] * st.w[1], 0);

    auto s = fourier_project([](const Vec2& p) { return Vec2{std::sin(p[1]), 0}; }, 4, false);
    ASSERT_EQ(s.modes.size(), 1u);
    const double sgn = s.modes[0].k[1] > 0 ? 1.0 : -1.0;
    EXPECT_EQ(s.modes[0].k[0], 0);
    EXPECT_EQ(std::abs(s.modes[0].k[1]), 1);
    EXPECT_NEAR(s.modes[0].a[0] * sgn, 1, 1e-12);
    EXPECT_NEAR(s.modes[0].a[1], 0, 1e-12);
    EXPECT_LT(s.residual, 1e-12);
}

TEST(FourierProject, RejectsDivergentField) {
    try {
        fourier_project([](const Vec2& p) { return Vec2{std::sin(p[0]), 0}; }, 4, false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDivergenceFree);
    }
}

TEST(FourierProject, EquivariantDropsCosines) {
    auto p = fourier_project([](const Vec2& q) { return Vec2{std::sin(q[1]) + 0.25 * std::cos(2 * q[1]), 0}; }, 4, true);
    for (const auto& m : p.modes) EXPECT_NEAR(std::hypot(m.b[0], m.b[1]), 0, 1e-15);
    EXPECT_NEAR(p.cosine_content, 0.25, 1e-12);
}

TEST(ReferenceFlow, ZeroAndConstant) {
    FrozenField zero;
    FrozenField cst;
    cst.constant = {0.3, -1.2};
    for (const auto& p : sample_points(10, 5)) {
        auto z = reference_flow(TimeDependentField(zero, {1.0}), 0.8, p);
        EXPECT_NEAR(torus_distance(z.p, p), 0, 1e-14);
        EXPECT_LT(mat_diff(z.J, kIdentity2), 1e-14);
        auto c = reference_flow(TimeDependentField(cst, {1.0}), 0.8, p);
        EXPECT_NEAR(c.p[0], p[0] + 0.24, 1e-12);
        EXPECT_NEAR(c.p[1], p[1] - 0.96, 1e-12);
        EXPECT_LT(mat_diff(c.J, kIdentity2), 1e-12);
    }
}

TEST(ReferenceFlow, MatchesShearClosedForm) {
    FrozenField f;
    f.modes.push_back({{0, 1}, {1, 0}, {0, 0}});
    ShearingStep s;
    s.alpha = 1.0;
    for (const auto& p : sample_points(50, 6)) {
        auto ref = reference_flow(TimeDependentField(f, {1.0}), 1.0, p);
        auto ex = shear_step_apply(s, 1.0, p);
        EXPECT_NEAR(torus_distance(ref.p, ex.p), 0, 1e-10);
        EXPECT_LT(mat_diff(ref.J, ex.J), 1e-9);
    }
    auto r = reference_flow(TimeDependentField(f, {1.0}), 1.0, {0, kPi / 2});
    EXPECT_NEAR(r.p[0], 1, 1e-10);
    EXPECT_NEAR(r.p[1], kPi / 2, 1e-10);
}

TEST(ReferenceFlow, FourthOrder) {
    auto X = VectorField::from(hamiltonian_test_field());
    const Vec2 p{0.4, 1.3};
    auto exact = reference_flow(X, 0, 1, p, false, {1e-13, 1e-3, 1e-14});
    for (int n : {8, 16, 32}) {
        double e1 = torus_distance(rk4_fixed(X, 0, 1, p, n, false).p, exact.p);
        double e2 = torus_distance(rk4_fixed(X, 0, 1, p, 2 * n, false).p, exact.p);
        EXPECT_GE(e1 / e2, 12.0) << n;
    }
}

TEST(ThetaFlow, Identities) {
    auto f = sinsin();
    const double tol = 1e-9;
    for (const auto& p : sample_points(20, 7)) {
        auto a = theta_flow({f}, 0.6, p), b = frozen_flow(f, 0.6, p);
        EXPECT_LT(torus_distance(a.p, b.p), tol);
        std::vector<FrozenField> same(4, f);
        auto c = theta_flow(same, 0.9, p), d = frozen_flow(f, 0.9, p);
        EXPECT_LT(torus_distance(c.p, d.p), tol);
        EXPECT_LT(mat_diff(c.J, d.J), 1e-8);
    }
    // continuity across breakpoints
    std::vector<FrozenField> fields{sinsin(), sinsin().scaled(2.0), sinsin().scaled(0.5)};
    for (double tb : {1.0 / 3, 2.0 / 3}) {
        for (const auto& p : sample_points(10, 8)) {
            auto l = theta_flow(fields, tb - 1e-9, p), r = theta_flow(fields, tb + 1e-9, p);
            EXPECT_LT(torus_distance(l.p, r.p), 1e-7);
        }
    }
}

TEST(XiFlow, SingleModeIsShear) {
    FourierShearField w{{0, 1}, {1, 0}, {0, 0}};
    auto st = ShearingStep::from_mode(w);
    for (const auto& p : sample_points(20, 9)) {
        auto a = xi_flow({st}, 3, 1, 0.7, p), b = shear_step_apply(st, 0.7, p);
        EXPECT_LT(torus_distance(a.p, b.p), 1e-13);
    }
}

TEST(XiFlow, CommutingModesAreExact) {
    std::vector<FourierShearField> modes{{{0, 1}, {1, 0}, {0, 0}}, {{0, 2}, {-0.4, 0}, {0.3, 0}}, {{0, -3}, {0.2, 0}, {0, 0}}};
    std::vector<ShearingStep> steps;
    for (const auto& m : modes) steps.push_back(ShearingStep::from_mode(m));
    for (int k : {1, 2, 4, 8, 16})
        for (const auto& p : sample_points(30, 10)) {
            auto a = xi_flow(steps, k, 1, 1.0, p);
            EXPECT_LT(torus_distance(a.p, parallel_exact(modes, 1.0, p)), 1e-12) << k;
        }
}

TEST(XiFlow, UnitDeterminantOnGrid) {
    auto proj = fourier_project(sinsin(), 4, false);
    const int g = 128;
    double worst = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            Vec2 p{2 * kPi * i / g, 2 * kPi * j / g};
            worst = std::max(worst, std::abs(mat_det(xi_flow(proj.steps, 4, 2, 0.5, p).J) - 1));
        }
    EXPECT_LT(worst, 1e-13);
}

TEST(XiFlow, PerCycleErrorIsQuadratic) {
    auto f = sinsin();
    auto proj = fourier_project(f, 4, false);
    auto err = [&](int n) {
        double e = 0;
        for (const auto& p : sample_points(40, 11))
            e = std::max(e, torus_distance(xi_flow(proj.steps, 1, n, 1.0 / n, p).p,
                                           frozen_flow(f, 1.0 / n, p, {1e-13, 1e-3, 1e-14}).p));
        return e;
    };
    for (int n : {4, 8, 16}) EXPECT_GE(err(n) / err(2 * n), 3.0) << n;
}

TEST(XiFlow, ErrorDecreasesInK) {
    auto f = sinsin();
    auto proj = fourier_project(f, 4, false);
    auto pts = sample_points(40, 12);
    std::vector<double> errs;
    for (int k : {2, 4, 8, 16}) {
        double e = 0;
        for (const auto& p : pts)
            e = std::max(e, torus_distance(xi_flow(proj.steps, k, 1, 1.0, p).p, frozen_flow(f, 1.0, p, {1e-13, 1e-3, 1e-14}).p));
        errs.push_back(e);
    }
    int bumps = 0;
    for (size_t i = 1; i < errs.size(); ++i) bumps += errs[i] >= errs[i - 1];
    EXPECT_LE(bumps, 1);
    EXPECT_LT(errs.back(), errs.front());
}

TEST(OmegaFlow, SingleShearFieldExact) {
    FourierShearField w{{0, 1}, {0.8, 0}, {0.1, 0}};
    auto st = ShearingStep::from_mode(w);
    for (int n : {1, 2, 4})
        for (int k : {1, 3}) {
            auto sch = SplittingSchedule::uniform(n, k);
            std::vector<std::vector<ShearingStep>> modes(n, std::vector<ShearingStep>{st});
            for (const auto& p : sample_points(20, 13)) {
                auto a = omega_flow(sch, modes, 0.9, p);
                EXPECT_LT(torus_distance(a.p, shear_step_apply(st, 0.9, p).p), 1e-12);
                EXPECT_NEAR(mat_det(a.J), 1, 1e-13);
            }
        }
}

TEST(OmegaFlow, HamiltonianErrorDecreases) {
    auto X = hamiltonian_test_field();
    auto pts = sample_points(64, 14);
    std::vector<double> errs;
    for (int nk : {4, 8, 16}) {
        auto sch = SplittingSchedule::uniform(nk, nk);
        std::vector<std::vector<ShearingStep>> modes;
        for (int j = 0; j < nk; ++j) modes.push_back(fourier_project(X.frozen(double(j) / nk), 4, false).steps);
        double e = 0;
        for (const auto& p : pts) {
            auto ref = reference_flow(X, 1.0, p, false, {1e-11, 1e-2, 1e-13});
            e = std::max(e, torus_distance(omega_flow(sch, modes, 1.0, p).p, ref.p));
        }
        errs.push_back(e);
    }
    EXPECT_GT(errs[0], errs[1]);
    EXPECT_GT(errs[1], errs[2]);
}

TEST(CrDistance, Examples) {
    FlowMap id = [](const Vec2& p) { return FlowPoint{p, kIdentity2}; };
    EXPECT_EQ(cr_distance(id, id, 64, 1), 0.0);
    const double d = 0.125;
    FlowMap tr = [&](const Vec2& p) { return FlowPoint{{p[0] + d, p[1]}, kIdentity2}; };
    EXPECT_NEAR(cr_distance(tr, id, 64, 0), d, 1e-14);
    EXPECT_NEAR(cr_distance(tr, id, 64, 1), d, 1e-14);
    const double eps = 0.01;
    ShearingStep s;
    s.alpha = eps;
    FlowMap sh = [&](const Vec2& p) { return shear_step_apply(s, 1.0, p); };
    // grid of 64 hits y = pi/2 and y = 0, where |eps sin| and |eps cos| peak
    EXPECT_NEAR(cr_distance(sh, id, 64, 0), eps, 1e-14);
    EXPECT_NEAR(cr_distance(sh, id, 64, 1), 2 * eps, 1e-14);
    EXPECT_DOUBLE_EQ(cr_distance(sh, id, 64, 1, true), cr_distance(sh, id, 64, 1, false));
}

TEST(Bounds, Examples) {
    EXPECT_DOUBLE_EQ(bound_a0(0, 3.7), 1.0);
    EXPECT_NEAR(bound_a0(1, 1), std::numbers::e, 1e-15);
    for (double t : {0.0, 0.5, 2.0})
        for (double K : {0.0, 1.0, 4.0}) {
            EXPECT_EQ(bound_b0(t, 0, K), 0.0);
            EXPECT_EQ(bound_b1(t, 0, K), 0.0);
            EXPECT_NEAR(bound_f0(t, 0.3, K), t * 0.3 * std::exp(K * t), 1e-12);
            EXPECT_NEAR(bound_a1(t, K), K * std::exp(3 * K * t), 1e-12);
            EXPECT_NEAR(bound_f1(t, 0.3, K), (bound_b1(1, 0.3, K) + bound_a1(1, K) * bound_f0(t, 0.3, K)) * std::exp(K * t), 1e-12);
        }
    try {
        bound_a0(-1, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NegativeArgument);
    }
}

TEST(Bounds, MonotoneInEachArgument) {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(0, 2);
    for (const auto& name : bound_function_names()) {
        for (int trial = 0; trial < 50; ++trial) {
            BoundArgs a;
            a.t = u(rng);
            a.x = u(rng);
            a.K = u(rng);
            a.K0 = u(rng);
            a.r1 = u(rng);
            a.n = 1 + trial % 4;
            a.k = 1 + trial % 3;
            a.m = 1 + trial % 5;
            const double base = bound_function(name, a);
            for (double BoundArgs::*f : {&BoundArgs::t, &BoundArgs::x, &BoundArgs::K, &BoundArgs::K0, &BoundArgs::r1}) {
                BoundArgs b = a;
                b.*f += 0.25;
                EXPECT_GE(bound_function(name, b), base - 1e-12 * std::abs(base)) << name;
            }
        }
    }
}

TEST(Certify, SingleShearFieldHasNoError) {
    FrozenField f;
    f.modes.push_back({{0, 1}, {0.5, 0}, {0, 0}});
    CertifyOptions opt;
    opt.n = 2;
    opt.k = 2;
    opt.grid = 64;
    auto rep = certify_run(TimeDependentField(f, {1.0}), opt);
    EXPECT_TRUE(rep.ok);
    for (const auto& r : rep.rows) {
        EXPECT_LT(r.c0, 1e-9) << r.stage;
        EXPECT_LE(r.c0, r.c0_bound + opt.slack) << r.stage;
    }
    EXPECT_LT(rep.det_defect, 1e-12);
}

TEST(Certify, EquivariantFixedPoints) {
    CertifyOptions opt;
    opt.n = 2;
    opt.k = 2;
    opt.equivariant = true;
    opt.times = {0.5, 1.0};
    auto rep = certify_run(hamiltonian_test_field(), opt);
    EXPECT_TRUE(rep.ok);
    EXPECT_GE(rep.equivariance_defect, 0);
    EXPECT_LT(rep.equivariance_defect, 1e-12);
    EXPECT_LT(rep.fixed_point_defect, 1e-12);
}

TEST(Certify, RejectsCosineContentWhenEquivariant) {
    FrozenField f;
    f.modes.push_back({{0, 1}, {0, 0}, {1, 0}});
    CertifyOptions opt;
    opt.n = 1;
    opt.k = 1;
    opt.equivariant = true;
    try {
        certify_run(TimeDependentField(f, {1.0}), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotEquivariant);
    }
}

TEST(Field, DivergenceAndJsonRoundTrip) {
    auto X = TimeDependentField::parse_json(read_file(std::string(KNOTLAB_DATA_DIR) + "/fields/hamiltonian_sinsin.json"));
    EXPECT_LT(X.divergence_defect(), 1e-8);
    for (const auto& p : sample_points(20, 16)) {
        Vec2 v = X.eval(0.5, p), w = sinsin_direct(p);
        EXPECT_NEAR(v[0], 1.25 * w[0], 1e-12);
        EXPECT_NEAR(v[1], 1.25 * w[1], 1e-12);
    }
    auto Y = TimeDependentField::parse_json(X.to_json());
    for (const auto& p : sample_points(20, 17)) {
        EXPECT_NEAR(Y.eval(0.3, p)[0], X.eval(0.3, p)[0], 1e-14);
        EXPECT_NEAR(Y.eval(0.3, p)[1], X.eval(0.3, p)[1], 1e-14);
    }
}
