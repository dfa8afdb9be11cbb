#include "rydgate/blockade.hpp"
#include "rydgate/gatefid.hpp"
#include "rydgate/repeater.hpp"
#include "rydgate/scatter.hpp"
#include "rydgate/units.hpp"

#include <benchmark/benchmark.h>

using namespace rydgate;

namespace {

EnsembleModel reference_ensemble(double density = 0.25)
{
    return EnsembleModel::uniform(density, units::from_2pi_mhz(8.31e6));
}

void BM_ContinuumCooperativity(benchmark::State &state)
{
    const AtomCavityParams p = reference_params();
    const EnsembleModel e = reference_ensemble();
    for (auto _ : state) benchmark::DoNotOptimize(continuum_cooperativity(p, e));
}
BENCHMARK(BM_ContinuumCooperativity);

void BM_ExactReport(benchmark::State &state)
{
    const AtomCavityParams p = reference_params();
    const ReflectionSpectrum s = continuum_spectrum(p, reference_ensemble());
    const PulseSpectrum pulse = state.range(0) ? PulseSpectrum::from_duration(PulseShape::gaussian, 0, 300)
                                               : PulseSpectrum::from_duration(PulseShape::lorentzian, 0, 300);
    for (auto _ : state) benchmark::DoNotOptimize(exact_report(s, pulse));
}
BENCHMARK(BM_ExactReport)->Arg(1)->Arg(0)->ArgName("gaussian");

void BM_DiscreteSpectrum(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    AtomCavityParams p = reference_params();
    p.coop_single = 20.0 / static_cast<double>(n);
    EnsembleModel box = reference_ensemble();
    box.geometry = Geometry::box;
    const double side = std::cbrt(static_cast<double>(n) / 0.25);
    box.box_lengths = {side, side, side};
    const EnsembleModel atoms = EnsembleModel::discrete(sample_positions(box, n, 1), box.c6);
    const ReflectionSpectrum s = discrete_spectrum(p, {}, atoms, std::size_t{0});
    double w = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.r_blocked(w));
        w += 1e-3;
    }
}
BENCHMARK(BM_DiscreteSpectrum)->Arg(100)->Arg(1000)->Arg(10000);

void BM_MonteCarlo(benchmark::State &state)
{
    const AtomCavityParams p = reference_params();
    const EnsembleModel e = reference_ensemble();
    MonteCarloOptions opt;
    opt.n_samples = static_cast<std::size_t>(state.range(0));
    opt.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_cooperativity(p, e, opt));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FidelityCurve(benchmark::State &state)
{
    const AtomCavityParams p = reference_params();
    for (auto _ : state) {
        double sum = 0;
        for (int i = 0; i < 100; ++i) {
            const double cb = 2 + 48.0 * i / 99;
            const CooperativitySet c = CooperativitySet::from_cb(cb, cb, p);
            sum += fswap_leading(c, p, PulseSpectrum::delta()).f_swap;
            sum += exact_report(continuum_spectrum(p, EnsembleModel::uniform(density_for_blockade(p, units::from_2pi_mhz(8.31e6), cb),
                                                                             units::from_2pi_mhz(8.31e6))),
                                PulseSpectrum::delta())
                       .f_swap;
        }
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_FidelityCurve)->Unit(benchmark::kMillisecond);

void BM_SecretKeyRate(benchmark::State &state)
{
    RepeaterConfig c;
    c.source_model = state.range(0) ? SourceModel::probabilistic_raman : SourceModel::perfect_single_excitation;
    for (auto _ : state) benchmark::DoNotOptimize(secret_key_rate(c));
}
BENCHMARK(BM_SecretKeyRate)->Arg(0)->Arg(1)->ArgName("raman");

} // namespace

BENCHMARK_MAIN();
