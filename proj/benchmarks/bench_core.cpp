#include <benchmark/benchmark.h>

#include <cmath>

#include "carleman/catalog.hpp"
#include "carleman/cplane.hpp"
#include "carleman/numeric.hpp"
#include "carleman/seqcore.hpp"
#include "carleman/wfun.hpp"

using namespace carleman;

static void BM_solve_dbar(benchmark::State& st) {
  Grid g = Grid::for_ellipse(0.4, std::size_t(st.range(0)));
  GridFn w(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double q = 0.16 - std::norm(g.z(k) - cplx(0.3, 0.0));
    if (q > 0) w.v[k] = q;
  }
  auto targets = ellipse_nodes(g, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(solve_dbar(w, targets));
  st.counters["targets"] = double(targets.size());
}
BENCHMARK(BM_solve_dbar)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_young_conjugate(benchmark::State& st) {
  auto w = mk_weight_function("power:0.5");
  auto s = logspace(0.5, 500.0, std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(young_conjugate(w, s));
}
BENCHMARK(BM_young_conjugate)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_moderate_growth(benchmark::State& st) {
  auto M = sequence_from_spec("gevrey:2", std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(moderate_growth_constant(M, M));
}
BENCHMARK(BM_moderate_growth)->Arg(256)->Arg(1024);

static void BM_m_circle(benchmark::State& st) {
  auto M = sequence_from_spec("q:1", std::size_t(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(m_circle_all(M.m()));
}
BENCHMARK(BM_m_circle)->Arg(256)->Arg(1024);
BENCHMARK_MAIN();
