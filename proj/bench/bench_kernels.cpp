// Serial reference against the OpenMP path for each parallel kernel.
#include "knotlab/presentation.hpp"
#include "knotlab/repvar.hpp"
#include "knotlab/shearflow.hpp"
#include "knotlab/slopes.hpp"

#include <benchmark/benchmark.h>

using namespace knotlab;

namespace {

const PillowcaseImage& trefoil_image() {
    static const PillowcaseImage img = trace_image(presentation_from_two_bridge(3, 1));
    return img;
}

TimeDependentField test_field() {
    return TimeDependentField::parse_json(
        R"({"hamiltonian":[{"product":["sin","sin"],"k":[1,1],"coeff":1.0}],"time_poly":[1.0,0.5]})");
}

void BM_TraceImage(benchmark::State& st) {
    TraceOptions opt;
    opt.resolution = 64;
    opt.parallel = st.range(0) != 0;
    const auto pres = presentation_from_two_bridge(5, 3);
    for (auto _ : st) benchmark::DoNotOptimize(trace_image(pres, opt));
}

void BM_CheckSlopes(benchmark::State& st) {
    std::vector<Slope> slopes;
    for (long long k = 1; k <= 400; ++k) slopes.push_back(Slope(6 * k + 1, k));
    const bool parallel = st.range(0) != 0;
    const auto& img = trefoil_image();
    for (auto _ : st) benchmark::DoNotOptimize(check_slopes(img, slopes, parallel));
}

void BM_CrDistance(benchmark::State& st) {
    const auto X = test_field();
    const FlowMap f = [&](const Vec2& p) { return rk4_fixed(VectorField::from(X), 0.0, 1.0, p, 20); };
    const FlowMap g = [&](const Vec2& p) { return rk4_fixed(VectorField::from(X), 0.0, 1.0, p, 40); };
    const bool parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(cr_distance(f, g, 48, 1, parallel));
}

void BM_Certify(benchmark::State& st) {
    const auto X = test_field();
    CertifyOptions opt;
    opt.n = opt.k = 4;
    opt.grid = 64;
    opt.times = {1.0};
    opt.parallel = st.range(0) != 0;
    for (auto _ : st) benchmark::DoNotOptimize(certify_run(X, opt));
}

}  // namespace

BENCHMARK(BM_TraceImage)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CheckSlopes)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CrDistance)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->ArgName("omp")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
