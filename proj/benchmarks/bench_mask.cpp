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

#include <random>

#include "shadowpair/mask.hpp"

namespace {

using namespace shadowpair;

Bitmap blob(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bitmap bitmap(size, size);
  std::uniform_int_distribution<int> pos(0, size);
  for (int k = 0; k < 6; ++k) {
    const int x0 = pos(rng), y0 = pos(rng), x1 = pos(rng), y1 = pos(rng);
    bitmap.fill_rect(std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1));
  }
  return bitmap;
}

void BM_Encode(benchmark::State& state) {
  const Bitmap bitmap = blob(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(encode(bitmap));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Encode)->Arg(64)->Arg(512);

void BM_Decode(benchmark::State& state) {
  const Mask mask = encode(blob(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(decode(mask));
}
BENCHMARK(BM_Decode)->Arg(64)->Arg(512);

void BM_MaskIou(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Mask a = encode(blob(size, 4)), b = encode(blob(size, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mask_iou(a, b));
}
BENCHMARK(BM_MaskIou)->Arg(64)->Arg(512);

void BM_Union(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const Mask a = encode(blob(size, 4)), b = encode(blob(size, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mask_union(a, b));
}
BENCHMARK(BM_Union)->Arg(512);

}  // namespace
