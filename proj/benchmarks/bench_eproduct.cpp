#include <benchmark/benchmark.h>

#include "eprod/eproduct.hpp"
#include "eprod/hermite.hpp"
#include "eprod/parse.hpp"

using namespace eprod;

namespace {

void BM_HermiteEval(benchmark::State& state) {
  const Bits bits = SummationConfig{}.bits();
  const Real x = Real::parse("1.25", bits);
  const auto n = static_cast<unsigned long>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hermite_eval(n, x));
}
BENCHMARK(BM_HermiteEval)->Arg(10)->Arg(100)->Arg(1000);

// First N coefficients of a distribution. Atoms with a process-wide memo are
// served from cache after the first iteration.
void BM_CoefficientStream(benchmark::State& state, const char* text) {
  const Distribution d = parse_distribution(text);
  const Bits bits = SummationConfig{}.bits();
  const auto count = static_cast<unsigned long>(state.range(0));
  for (auto _ : state) {
    const CoeffSequence s = coeff_sequence(d, bits);
    benchmark::DoNotOptimize(s.at(count - 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_CoefficientStream, delta, "delta")->Arg(1000)->Arg(5000);
BENCHMARK_CAPTURE(BM_CoefficientStream, exp, "exp(1)")->Arg(1000);
BENCHMARK_CAPTURE(BM_CoefficientStream, psi, "psi(4)")->Arg(1000);

void BM_AbelSeriesA(benchmark::State& state) {
  const SummationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(abel_sum(exact_series_terms('a', 0, 0), cfg));
}
BENCHMARK(BM_AbelSeriesA)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state, const char* left, const char* right) {
  const Distribution F = parse_distribution(left), G = parse_distribution(right);
  SummationConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(classify_and_sum(F, G, cfg));
}
BENCHMARK_CAPTURE(BM_Classify, exp_delta, "exp(1)", "delta")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Classify, cos_delta, "cos(1)", "delta")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Classify, delta_delta, "delta", "delta")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Classify, phi3_psi3, "phi(3)", "psi(3)")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
