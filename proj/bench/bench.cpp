// Serial reference vs OpenMP kernels. Thread count from OMP_NUM_THREADS or SSK_THREADS.

#include <omp.h>

#include <cstdlib>

#include <benchmark/benchmark.h>

#include "ssk/cavity1d.hpp"
#include "ssk/disorder.hpp"
#include "ssk/moment_engine.hpp"
#include "ssk/rs_solver.hpp"
#include "ssk/simulator.hpp"

namespace {

ssk::Execution mode(const benchmark::State& state) {
  return state.range(0) ? ssk::Execution::parallel : ssk::Execution::serial;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "parallel x" + std::to_string(omp_get_max_threads()) : "serial");
}

void BM_RunExperiment(benchmark::State& state) {
  ssk::ExperimentConfig c;
  c.n = 100;
  c.n_disorder = 8;
  c.sweeps = 4000;
  c.burnin = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(ssk::run_experiment(c, mode(state)));
  label(state);
}
BENCHMARK(BM_RunExperiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DisorderFill(benchmark::State& state) {
  const auto xi = ssk::MixturePolynomial::parse("p2:1,p3:0.5");
  for (auto _ : state) benchmark::DoNotOptimize(ssk::sample_disorder(xi, 150, 3, mode(state)));
  label(state);
}
BENCHMARK(BM_DisorderFill)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_QuadratureOracle(benchmark::State& state) {
  const auto p = ssk::rs_point(ssk::MixturePolynomial::parse("p2:1"), 0.2, 0.3);
  const ssk::ReplicaMonomial mono({2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(ssk::nu0_monomial_quadrature(mono, p, 10000, 60, mode(state)));
  label(state);
}
BENCHMARK(BM_QuadratureOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_McmcStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto d = ssk::sample_disorder(ssk::MixturePolynomial::parse("p2:1"), n, 1);
  const ssk::WorkingModel model(d, 0.2, 0.3);
  auto chain = ssk::init_chain(model, 5);
  for (auto _ : state) ssk::mcmc_step(model, chain);
  state.SetComplexityN(n);
}
BENCHMARK(BM_McmcStep)->Arg(100)->Arg(400)->Arg(1600)->Complexity();

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SSK_THREADS")) {
    const int count = std::atoi(threads);
    if (count > 0) omp_set_num_threads(count);
  }
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
