#include <benchmark/benchmark.h>

#include <random>

#include "cmpkit/fit.hpp"
#include "cmpkit/fmr.hpp"
#include "cmpkit/geometry.hpp"
#include "cmpkit/polariton.hpp"
#include "cmpkit/spectrum.hpp"

using namespace cmpkit;

namespace {

DispersionModelParams cav01e() {
    DispersionModelParams p;
    p.model = DispersionModel::ShiftedDicke;
    p.cavity_freq_ghz = 4.46;
    p.coupling_ghz = 2.03;
    p.magnon_shift_ghz = 2.39;
    return p;
}

void DemagPoint(benchmark::State& state) {
    const auto g = SampleGeometry::yig_slab();
    const Vec3 p = {0.1e-3, 0.5e-3, 0.2e-3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(demag_at(g, p));
    }
}
BENCHMARK(DemagPoint);

void DemagVolumeAverage(benchmark::State& state) {
    const auto g = SampleGeometry::yig_slab();
    const int res = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(demag_volume_average(g, res));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(DemagVolumeAverage)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void DickeBranches(benchmark::State& state) {
    const auto p = cav01e();
    double wm = 0.0;
    for (auto _ : state) {
        wm += 1e-6;
        benchmark::DoNotOptimize(branches_clamped(p, 5.0 + wm));
    }
}
BENCHMARK(DickeBranches);

void FmrSweep(benchmark::State& state) {
    const auto p = FmrParams::yig_slab_default();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += fmr_frequency_ghz(0.05 + 0.20 * i / n, p);
        }
        benchmark::DoNotOptimize(acc);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FmrSweep)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void Synthesize(benchmark::State& state) {
    const auto model = cav01e();
    const auto fmr = FmrParams::yig_slab_default();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            synthesize(model, fmr, 1.38, {0.115, 0.25, n}, {0.5, 12.0, 2 * n + 1}, {}));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(Synthesize)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void ExtractBranches(benchmark::State& state) {
    const auto model = cav01e();
    const auto fmr = FmrParams::yig_slab_default();
    const int n = static_cast<int>(state.range(0));
    const auto spec = synthesize(model, fmr, 1.38, {0.115, 0.25, n}, {0.5, 12.0, 2 * n + 1}, {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_branches(spec, -25.0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ExtractBranches)->RangeMultiplier(2)->Range(32, 256)->Complexity();

void FitRoundTrip(benchmark::State& state) {
    const auto model = cav01e();
    const auto fmr = FmrParams::yig_slab_default();
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BranchData data;
    for (int i = 0; i < 25; ++i) {
        const double b = 0.10 + 0.17 * i / 24.0;
        const double wm = fmr_frequency_ghz(b, fmr);
        const auto bp = branches(model, wm);
        data.points.push_back({b, bp.lower_ghz * (1 + 0.005 * gauss(rng)), BranchLabel::Lower});
        data.points.push_back({b, bp.upper_ghz * (1 + 0.005 * gauss(rng)), BranchLabel::Upper});
    }
    FitProblem prob;
    prob.data = data;
    prob.model = DispersionModel::ShiftedDicke;
    prob.fmr = fmr;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(prob));
    }
}
BENCHMARK(FitRoundTrip);

} // namespace

BENCHMARK_MAIN();
