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
#include <vector>

#include "shadowpair/geometry.hpp"

namespace {

using shadowpair::BBox;

std::vector<BBox> random_boxes(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(0.0, 500.0), ext(1.0, 80.0);
  std::vector<BBox> boxes(n);
  for (auto& b : boxes) {
    const double x = coord(rng), y = coord(rng);
    b = {x, y, x + ext(rng), y + ext(rng)};
  }
  return boxes;
}

void BM_Iou(benchmark::State& state) {
  const auto boxes = random_boxes(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shadowpair::iou(boxes[i & 1023], boxes[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Iou);

void BM_ShortestDistance(benchmark::State& state) {
  const auto boxes = random_boxes(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shadowpair::shortest_distance(boxes[i & 1023], boxes[(i + 7) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_ShortestDistance);

}  // namespace
