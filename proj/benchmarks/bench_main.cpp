#include <benchmark/benchmark.h>

#include "parsio/cdm.hpp"
#include "parsio/dorronsoro.hpp"
#include "parsio/harmonics.hpp"
#include "parsio/ibp.hpp"
#include "parsio/opnorm.hpp"

using namespace parsio;

namespace {

std::vector<TrigMode> modes() { return {{{1}, 1, 0.3, 0.2}, {{2}, 0, 0.2, -0.7}, {{0}, 1, 0.25, 1.1}}; }

void BM_ConvolutionApply(benchmark::State& st) {
  const int c = static_cast<int>(st.range(0));
  const ParabolicGrid g(2, 1.0 / 16.0, {c, c});
  const auto H = canonical_kernel("H2", 2);
  const auto eval = H.evaluator();
  const ConvolutionOperator S(g, [&](const SpaceTimePoint& p, double) { return eval(p); },
                              TruncationSpec::sharp(0.125));
  const auto f = sample(g, [](const SpaceTimePoint& p) { return std::cos(p.x[0]) + p.t; });
  for (auto _ : st) benchmark::DoNotOptimize(S.apply(f));
  st.SetComplexityN(static_cast<long>(g.size()));
}
BENCHMARK(BM_ConvolutionApply)->Arg(64)->Arg(128)->Arg(256)->Complexity(benchmark::oNLogN);

void BM_GraphSioApply(benchmark::State& st) {
  const int c = static_cast<int>(st.range(0));
  const ParabolicGrid g(2, 1.0 / 16.0, {c, c});
  const auto s = trig_surface(g, {{{1}, 1, 0.2, 0.0}}, 1.0, "b");
  const auto T = graph_sio(canonical_kernel("K2", 2), s, TruncationSpec::sharp(0.125));
  const auto f = sample(g, [](const SpaceTimePoint& p) { return std::sin(p.x[0] + p.t); });
  for (auto _ : st) benchmark::DoNotOptimize(T.apply(f));
  st.SetComplexityN(static_cast<long>(g.size()));
}
BENCHMARK(BM_GraphSioApply)->Arg(8)->Arg(16)->Arg(32)->Complexity(benchmark::oNSquared);

void BM_OpnormEstimate(benchmark::State& st) {
  const ParabolicGrid g(2, 1.0 / 16.0, {16, 16});
  const auto s = trig_surface(g, {{{1}, 1, 0.2, 0.0}}, 1.0, "b");
  const auto T = graph_sio(canonical_kernel("K2", 2), s, TruncationSpec::sharp(0.125));
  for (auto _ : st) benchmark::DoNotOptimize(opnorm_estimate(T, 1e-6, 50));
}
BENCHMARK(BM_OpnormEstimate)->Unit(benchmark::kMillisecond);

void BM_HzetaCompute(benchmark::State& st) {
  const auto K = canonical_kernel("K2", 2);
  const ZetaGrid z{64.0, 4096};
  const KappaGrid k{1024.0, 1.0 / 256.0};
  const SpaceTimePoint x({0.7}, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(hzeta_compute(K, x, z, k));
}
BENCHMARK(BM_HzetaCompute)->Unit(benchmark::kMillisecond);

void BM_ExpandSine(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const std::vector<double> b(n - 1, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(expand_sine(b, n, 32));
}
BENCHMARK(BM_ExpandSine)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_HtildeCompute(benchmark::State& st) {
  const auto H = canonical_kernel("H2", 2);
  const SpaceTimePoint p({0.4}, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(htilde_compute(H, p));
}
BENCHMARK(BM_HtildeCompute);

void BM_GammaField(benchmark::State& st) {
  const ParabolicGrid g(2, 1.0 / 16.0, {64, 256});
  const auto s = trig_surface(g, modes(), 1.0, "a");
  const auto nodes = ball_points(g, SpaceTimePoint({0.0}, 0.0), 0.25);
  const auto ds = dyadic_deltas(0.25, 0.5, 4);
  for (auto _ : st) benchmark::DoNotOptimize(gamma_field(s, nodes, ds));
}
BENCHMARK(BM_GammaField)->Unit(benchmark::kMillisecond);

void BM_BmoNorm(benchmark::State& st) {
  const ParabolicGrid g(2, 1.0 / 16.0, {32, 32});
  const auto f = sample(g, [](const SpaceTimePoint& p) { return std::sin(3 * p.x[0]) * std::cos(20 * p.t); });
  for (auto _ : st) benchmark::DoNotOptimize(bmo_norm(f));
}
BENCHMARK(BM_BmoNorm)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
