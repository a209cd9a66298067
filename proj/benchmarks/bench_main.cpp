#include "stein/convexify.hpp"
#include "stein/criteria.hpp"
#include "stein/domains.hpp"
#include "stein/estimators.hpp"
#include "stein/riccati.hpp"
#include "stein/sampling.hpp"
#include "stein/worm.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

constexpr double kPi = std::numbers::pi;

void BM_WormJet(benchmark::State& state) {
  const auto worm = stein::make_worm(0.6 * kPi);
  Eigen::VectorXd x(4);
  x << 0.1, -0.05, 0.9, 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(worm.jet(x));
}
BENCHMARK(BM_WormJet);

void BM_WormLevi(benchmark::State& state) {
  const auto worm = stein::make_worm(0.6 * kPi);
  Eigen::VectorXd x(4);
  x << 0.1, -0.05, 0.9, 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(worm.levi(x));
}
BENCHMARK(BM_WormLevi);

void BM_NormalDerivativeLevi(benchmark::State& state) {
  const auto worm = stein::make_worm(0.6 * kPi);
  const auto sigma = stein::worm_sigma(worm, 1);
  const auto& L = stein::sigma_kernel(sigma.front());
  for (auto _ : state) benchmark::DoNotOptimize(stein::normal_derivative_levi(worm, sigma.front(), L));
}
BENCHMARK(BM_NormalDerivativeLevi);

void BM_PshMargin(benchmark::State& state) {
  const auto ball = stein::make_ball(2);
  const auto anchors = stein::radial_boundary_samples(ball, Eigen::VectorXd::Zero(4), 64, 1);
  stein::ShellSpec spec;
  spec.samples = static_cast<std::size_t>(state.range(0));
  const auto shell = stein::sample_shell(ball, anchors, spec, stein::Side::Inner);
  const auto field = stein::df_power_field(ball.field, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(stein::psh_margin(field, shell));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PshMargin)->Arg(256)->Arg(2000);

void BM_WormCriterionVerify(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stein::worm_criterion_verify(0.6 * kPi, 1.5, 50));
}
BENCHMARK(BM_WormCriterionVerify);

void BM_RiccatiIntegrate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stein::riccati_integrate(1.0, 1.0, 1.0, 0.0, 1.5));
}
BENCHMARK(BM_RiccatiIntegrate);

void BM_ConvexifyEllipse(benchmark::State& state) {
  const auto body = stein::make_ellipse(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(stein::convexify(body, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ConvexifyEllipse)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
