#include <benchmark/benchmark.h>

#include <fellband/calculus.hpp>
#include <fellband/norms.hpp>
#include <fellband/section.hpp>

using namespace fellband;

namespace {

CrossSection harper(std::int64_t num, std::int64_t den) {
  auto sys = TwistedSystem::nc_torus(GroupModel::zd(2), num, den);
  CrossSection s(sys);
  for (const Point& x : sys->group().standard_generators().elements)
    if (!(x == sys->group().identity())) s.accumulate(x, Fiber::scalar({1, 0}));
  return s;
}

void bm_convolve_power(benchmark::State& state) {
  const CrossSection h = harper(1, 3);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(power(h, n).support_size());
  }
}
BENCHMARK(bm_convolve_power)->Arg(8)->Arg(32)->Arg(64);

void bm_ball_enumeration(benchmark::State& state) {
  const GroupModel g = GroupModel::heis3();
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CayleyBall ball(g, g.standard_generators());
    benchmark::DoNotOptimize(ball.ball_size(r));
  }
}
BENCHMARK(bm_ball_enumeration)->Arg(8)->Arg(16)->Arg(24);

void bm_opnorm_lanczos(benchmark::State& state) {
  const CrossSection h = harper(1, 2);
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opnorm_estimate(h, radius).value);
  }
}
BENCHMARK(bm_opnorm_lanczos)->Arg(15)->Arg(30)->Arg(60);

void bm_exp_it(benchmark::State& state) {
  auto sys = TwistedSystem::trivial(GroupModel::zd(1));
  CrossSection lap(sys);
  lap.accumulate(Point({1}), Fiber::scalar({1, 0}));
  lap.accumulate(Point({-1}), Fiber::scalar({1, 0}));
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_it(lap, t, 1e-8).value.part.support_size());
  }
}
BENCHMARK(bm_exp_it)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
