// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "dermxai/rng.hpp"
#include "dermxai/saliency.hpp"

namespace {

std::pair<dermxai::Heatmap, dermxai::Mask> make_pair(int side) {
  dermxai::Rng rng(7);
  dermxai::Heatmap h;
  h.width = h.height = side;
  h.z.resize(static_cast<std::size_t>(side) * side);
  for (auto& z : h.z) z = rng.uniform01();
  dermxai::Mask m;
  m.width = m.height = side;
  m.fg.resize(h.z.size());
  for (auto& f : m.fg) f = rng.bernoulli(0.3) ? 1 : 0;
  m.fg[0] = 1;
  m.fg[1] = 0;
  return {std::move(h), std::move(m)};
}

void BM_AnalyzePair(benchmark::State& state) {
  const auto [h, m] = make_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dermxai::analyze_pair(h, m, 64));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(h.z.size()));
}
BENCHMARK(BM_AnalyzePair)->Arg(64)->Arg(224)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_ConditionalPdfs(benchmark::State& state) {
  const auto [h, m] = make_pair(224);
  const auto norm = dermxai::normalize_heatmap(h);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dermxai::conditional_pdfs(norm, m, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ConditionalPdfs)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace
