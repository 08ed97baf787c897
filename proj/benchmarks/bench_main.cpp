#include <benchmark/benchmark.h>

#include "jcinfo/measures.hpp"
#include "jcinfo/model.hpp"
#include "jcinfo/phase_space.hpp"

namespace {

using jcinfo::ModelConfig;

ModelConfig config_for(benchmark::State& state) {
  ModelConfig cfg;
  cfg.alpha_mag = static_cast<double>(state.range(0));
  return cfg;
}

void BM_EvolveClosedForm(benchmark::State& state) {
  const ModelConfig cfg = config_for(state);
  for (auto _ : state) {
    auto s = jcinfo::evolve_closed_form(cfg, 1.3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EvolveClosedForm)->Arg(1)->Arg(3)->Arg(5);

void BM_EvolveBruteForce(benchmark::State& state) {
  ModelConfig cfg = config_for(state);
  cfg.n_max = jcinfo::resolve_truncation(cfg);
  for (auto _ : state) {
    auto s = jcinfo::evolve_brute_force(cfg, 1.3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EvolveBruteForce)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SampleQField(benchmark::State& state) {
  const ModelConfig cfg = config_for(state);
  const auto grid = jcinfo::build_grid(cfg);
  const auto s = jcinfo::evolve_closed_form(cfg, 1.0);
  for (auto _ : state) {
    auto qf = jcinfo::sample_qfield(s, grid);
    benchmark::DoNotOptimize(qf);
  }
}
BENCHMARK(BM_SampleQField)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ComputeRecord(benchmark::State& state) {
  const ModelConfig cfg = config_for(state);
  const auto grid = jcinfo::build_grid(cfg);
  const auto qf = jcinfo::sample_qfield(jcinfo::evolve_closed_form(cfg, 1.0), grid);
  const bool marginals = state.range(1) != 0;
  for (auto _ : state) {
    auto rec = jcinfo::compute_record(qf, grid, marginals);
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_ComputeRecord)->Args({3, 0})->Args({3, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
