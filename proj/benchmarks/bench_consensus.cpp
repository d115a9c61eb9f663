// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dermxai/consensus.hpp"
#include "dermxai/simulate.hpp"

namespace {

dermxai::AnnotationDataset make_dataset(int raters, int images) {
  dermxai::SimParams params;
  params.n_raters = raters;
  params.n_images = images;
  params.seed = 1;
  auto sim = dermxai::simulate(params);
  return dermxai::AnnotationDataset::from_records(std::move(sim.annotations));
}

void BM_InferSr(benchmark::State& state) {
  const auto ds = make_dataset(static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(1)));
  dermxai::EmConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dermxai::infer_sr(ds, cfg));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(ds.records().size()));
}
BENCHMARK(BM_InferSr)
    ->Args({3, 100})
    ->Args({5, 500})
    ->Args({8, 2000})
    ->Unit(benchmark::kMillisecond);

void BM_MajorityVote(benchmark::State& state) {
  const auto ds = make_dataset(5, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dermxai::majority_vote(ds));
  }
}
BENCHMARK(BM_MajorityVote)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
