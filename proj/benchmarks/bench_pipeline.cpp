// Copyright 2026 The shadowpair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "shadowpair/association.hpp"
#include "shadowpair/soap.hpp"
#include "shadowpair/synth.hpp"

namespace {

using namespace shadowpair;

SceneSpec spec_of(int images) {
  SceneSpec spec;
  spec.seed = 7;
  spec.image_count = images;
  return spec;
}

const GeneratedScene& scene() {
  static const GeneratedScene s = generate(spec_of(50));
  return s;
}

void BM_Generate(benchmark::State& state) {
  const SceneSpec spec = spec_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec));
}
BENCHMARK(BM_Generate)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MatchPredictions(benchmark::State& state) {
  const auto& s = scene();
  for (auto _ : state) benchmark::DoNotOptimize(match_predictions(s.noisy));
}
BENCHMARK(BM_MatchPredictions)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto& s = scene();
  const auto paired = match_predictions(s.noisy).paired;
  SoapConfig config;
  config.variant = state.range(0) == 0 ? Variant::kBox : Variant::kMask;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(paired, s.ground_truth, config));
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
