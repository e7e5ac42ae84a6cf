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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "shadowpair/association.hpp"
#include "shadowpair/io.hpp"
#include "shadowpair/light.hpp"
#include "shadowpair/soap.hpp"
#include "shadowpair/synth.hpp"

namespace {

using namespace shadowpair;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Cli {
  int status;
  std::string out;
  std::string err;
};

Cli cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = tools::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Reports from every evaluation, checked for tau monotonicity afterwards.
std::vector<SoapReport> g_reports;

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "shadowpair_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

constexpr int kSeeds = 20;

Verdict oracle_pipeline() {
  Verdict v;
  double worst = 0.0;
  int runs = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const fs::path dir = work_dir() / ("oracle_" + std::to_string(seed));
    const std::string s = dir.string();
    for (const std::string variant : {"box", "mask"}) {
      const auto start = Clock::now();
      const auto gen = cli({"synth", "--out", s, "--seed", std::to_string(seed), "--images", "50",
                            "--width", "512", "--height", "512", "--max-pairs", "9",
                            "--zero-noise"});
      const auto match = cli({"match", "--pred", s + "/perfect.json", "--out", s + "/paired.json"});
      const auto eval = cli({"eval", "--gt", s + "/gt.json", "--pred", s + "/paired.json",
                             "--variant", variant, "--out", s + "/report_" + variant + ".json"});
      const double elapsed = seconds_since(start);
      worst = std::max(worst, elapsed);
      ++runs;
      if (gen.status != 0 || match.status != 0 || eval.status != 0) {
        v.pass = false;
        v.detail = "seed " + std::to_string(seed) + " failed: " + gen.err + match.err + eval.err;
        return v;
      }
      const auto report = report_from_json(read_text_file(s + "/report_" + variant + ".json"));
      g_reports.push_back(report);
      if (report.soap != 1.0) {
        v.pass = false;
        v.detail += fmt("seed %d %s SOAP %.9f; ", seed, variant.c_str(), report.soap);
      }
      if (elapsed >= 5.0) {
        v.pass = false;
        v.detail += fmt("seed %d %s took %.2f s; ", seed, variant.c_str(), elapsed);
      }
    }
  }
  if (v.pass) {
    v.detail = fmt("%d runs (%d seeds x box/mask, 50 images 512x512), SOAP = 1.0 exactly, "
                   "slowest run %.2f s",
                   runs, kSeeds, worst);
  }
  return v;
}

PairedAssociation fixture_prediction(BBox shadow, BBox object, double score, DetectionId id) {
  PairedAssociation p;
  p.image_id = 1;
  p.shadow = {3 * id, 1, InstanceKind::kShadow, score, shadow, std::nullopt};
  p.object = {3 * id + 1, 1, InstanceKind::kObject, score, object, std::nullopt};
  p.association = {3 * id + 2, 1, score, merge(shadow, object), 0.0};
  p.combined_score = score;
  return p;
}

Verdict ap_fixture() {
  auto rect = [](int x0, int y0, int x1, int y1) { return Mask::rectangle(100, 100, x0, y0, x1, y1); };
  GroundTruthDataset gt;
  auto& image = gt.images[1];
  image.info = {1, 100, 100};
  image.pairs.push_back(GroundTruthPair::make(1, 1, rect(0, 0, 10, 10), rect(0, 0, 20, 10)));
  image.pairs.push_back(GroundTruthPair::make(1, 2, rect(50, 50, 60, 60), rect(50, 50, 70, 60)));
  const std::vector preds = {
      fixture_prediction({0, 0, 10, 10}, {10, 0, 20, 10}, 0.9, 1),     // TP
      fixture_prediction({80, 0, 90, 10}, {90, 0, 99, 10}, 0.8, 2),    // FP
      fixture_prediction({50, 50, 60, 60}, {60, 50, 70, 60}, 0.7, 3)};  // TP
  SoapConfig config;
  config.thresholds = {0.5};
  const auto report = evaluate(preds, gt, config);
  const double ap = report.per_threshold.front().ap;
  const double oracle = testing::brute_force_ap({true, false, true}, 2);
  const double closed_form = (51.0 * 1.0 + 50.0 * (2.0 / 3.0)) / 101.0;
  Verdict v;
  v.pass = std::abs(ap - oracle) <= 1e-6 && std::abs(ap - closed_form) <= 1e-6 &&
           fmt("%.4f", ap) == "0.8350";
  v.detail = fmt("AP %.9f, brute-force oracle %.9f, (51 + 50*2/3)/101 = %.9f, rounds to %.4f",
                 ap, oracle, closed_form, ap);
  return v;
}

Verdict one_to_one() {
  Verdict v;
  std::size_t total = 0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const fs::path dir = work_dir() / ("noisy_" + std::to_string(seed));
    const std::string s = dir.string();
    const auto gen = cli({"synth", "--out", s, "--seed", std::to_string(seed), "--images", "50",
                          "--fp-rate", "0.5"});
    const auto match = cli({"match", "--pred", s + "/noisy.json", "--out", s + "/paired.json"});
    if (gen.status != 0 || match.status != 0) {
      v.pass = false;
      v.detail = "seed " + std::to_string(seed) + " failed: " + gen.err + match.err;
      return v;
    }
    const auto paired = load_paired(s + "/paired.json");
    std::set<DetectionId> shadows, objects, associations;
    for (const auto& p : paired) {
      const bool fresh = shadows.insert(p.shadow.id).second &&
                         objects.insert(p.object.id).second &&
                         associations.insert(p.association.id).second;
      if (!fresh) {
        v.pass = false;
        v.detail += fmt("seed %d repeats an id; ", seed);
        break;
      }
    }
    total += paired.size();
    for (const std::string variant : {"box", "mask"}) {
      const std::string out = s + "/report_" + variant + ".json";
      if (cli({"eval", "--gt", s + "/gt.json", "--pred", s + "/paired.json", "--variant", variant,
               "--out", out})
              .status == 0) {
        g_reports.push_back(report_from_json(read_text_file(out)));
      }
    }
  }
  if (v.pass) {
    v.detail = fmt("%zu paired associations over %d noisy seeds, no repeated shadow, object or "
                   "association id",
                   total, kSeeds);
  }
  return v;
}

Verdict monotonicity() {
  // Extra noise levels so the grid sees partial matches at every threshold.
  for (int seed = 1; seed <= kSeeds; ++seed) {
    SceneSpec spec;
    spec.seed = static_cast<std::uint64_t>(seed);
    spec.image_count = 10;
    const auto scene = generate(spec);
    for (const double jitter : {1.0, 3.0, 6.0}) {
      NoiseModel noise = NoiseModel::typical();
      noise.box_jitter = jitter;
      const auto paired = match_predictions(apply_noise(scene, spec, noise)).paired;
      for (const Variant variant : {Variant::kBox, Variant::kMask}) {
        SoapConfig config;
        config.variant = variant;
        g_reports.push_back(evaluate(paired, scene.ground_truth, config));
      }
    }
  }
  Verdict v;
  std::size_t checks = 0, violations = 0;
  for (const auto& report : g_reports) {
    if (report.per_threshold.size() != default_thresholds().size()) ++violations;
    for (std::size_t i = 1; i < report.per_threshold.size(); ++i) {
      ++checks;
      if (report.per_threshold[i].ap > report.per_threshold[i - 1].ap) ++violations;
    }
  }
  v.pass = violations == 0 && !g_reports.empty();
  v.detail = fmt("%zu reports, %zu adjacent-threshold comparisons, %zu violations",
                 g_reports.size(), checks, violations);
  return v;
}

Verdict merge_and_gate() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  std::uniform_real_distribution<double> extent(0.0, 200.0);
  auto random_box = [&] {
    const double x = coord(rng), y = coord(rng);
    return BBox{x, y, x + extent(rng), y + extent(rng)};
  };
  int merge_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const BBox s = random_box(), o = random_box();
    const BBox m = merge(s, o);
    const BBox direct{s.x_min < o.x_min ? s.x_min : o.x_min, s.y_min < o.y_min ? s.y_min : o.y_min,
                      s.x_max > o.x_max ? s.x_max : o.x_max, s.y_max > o.y_max ? s.y_max : o.y_max};
    if (!(m == direct)) ++merge_failures;
  }

  // Gate: an object exactly one shadow height away is rejected, the next
  // representable distance below is accepted. The shadow's near edge sits on
  // an axis so the gap is the distance with no rounding.
  int gate_failures = 0, gate_cases = 0;
  std::uniform_real_distribution<double> height(0.5, 300.0);
  for (int i = 0; i < 500; ++i) {
    const double h = height(rng), w = extent(rng) + 1.0, far = coord(rng);
    for (const bool horizontal : {true, false}) {
      const BBox shadow_box = horizontal ? BBox{-w, 0.0, 0.0, h} : BBox{far, -h, far + w, 0.0};
      auto object_at = [&](double gap) {
        const BBox b = horizontal ? BBox{gap, h / 2, gap + w, 2 * h}
                                  : BBox{far + w / 2, gap, far + 2 * w, gap + h};
        return std::vector{InstanceDetection{2, 1, InstanceKind::kObject, 0.9, b, std::nullopt}};
      };
      const std::vector shadows = {
          InstanceDetection{1, 1, InstanceKind::kShadow, 0.9, shadow_box, std::nullopt}};
      const auto at = object_at(h);
      const auto below = object_at(std::nextafter(h, 0.0));
      ++gate_cases;
      const bool exact = shadow_box.height() == h && shortest_distance(shadow_box, at[0].box) == h;
      const bool rejected = generate_candidates(shadows, at).empty();
      const bool accepted = generate_candidates(shadows, below).size() == 1;
      if (!exact || !rejected || !accepted) ++gate_failures;
    }
  }
  Verdict v;
  v.pass = merge_failures == 0 && gate_failures == 0;
  v.detail = fmt("merge: %d/1000 mismatches; gate: %d/%d cases fail to flip at distance = "
                 "shadow height",
                 merge_failures, gate_failures, gate_cases);
  return v;
}

Verdict light_math() {
  Verdict v;
  std::vector<std::string> notes;
  const double at_half = light_loss(0.5, 0.0);
  const double at_two = light_loss(2.0, 0.0);
  const bool branches = at_half == 0.125 && at_two == 1.5;
  const double quad = 0.5 * 1.0 * 1.0, lin = 1.0 - 0.5;
  const double at_one = light_loss(1.0, 0.0);
  const double left = light_loss(std::nextafter(1.0, 0.0), 0.0);
  const double right = light_loss(std::nextafter(1.0, 2.0), 0.0);
  const bool continuous = quad == 0.5 && lin == 0.5 && at_one == 0.5 &&
                          std::abs(left - 0.5) < 1e-12 && std::abs(right - 0.5) < 1e-12;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst_wrap = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < 10000; ++i) {
    const double a = angle(rng), b = angle(rng);
    const double base = light_loss(a, b);
    for (const double shift : {two_pi, -two_pi}) {
      worst_wrap = std::max(worst_wrap, std::abs(light_loss(a + shift, b) - base));
      worst_wrap = std::max(worst_wrap, std::abs(light_loss(a, b + shift) - base));
    }
  }

  double worst_recovery = 0.0;
  for (int seed = 1; seed <= kSeeds; ++seed) {
    SceneSpec spec;
    spec.seed = static_cast<std::uint64_t>(seed);
    spec.image_count = 10;
    spec.shapes = {ObjectShape::kPost};
    spec.noise = NoiseModel::zero();
    std::uniform_real_distribution<double> theta(-std::numbers::pi, std::numbers::pi);
    spec.light_angle = wrap_angle(theta(rng));
    const auto scene = generate(spec);
    const auto paired = match_predictions(scene.perfect).paired;
    std::map<ImageId, std::vector<PairedAssociation>> by_image;
    for (const auto& p : paired) by_image[p.image_id].push_back(p);
    for (const auto& [id, pairs] : by_image) {
      const double estimate = estimate_image_direction(pairs).radians();
      worst_recovery =
          std::max(worst_recovery, std::abs(wrap_angle(estimate - *spec.light_angle)));
    }
  }
  v.pass = branches && continuous && worst_wrap <= 1e-12 && worst_recovery < 0.05;
  v.detail = fmt("loss(0.5) = %.17g, loss(2) = %.17g, loss at |d| = 1: %.17g (left %.17g, right "
                 "%.17g), max wrap deviation %.3g, worst recovery error %.4f rad",
                 at_half, at_two, at_one, left, right, worst_wrap, worst_recovery);
  return v;
}

Verdict rle_codec() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 64);
  std::uniform_real_distribution<double> density(0.0, 1.0);
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const int w = dim(rng), h = dim(rng);
    const double p = density(rng);
    // Mix of scattered pixels and rectangles so long runs occur too.
    Bitmap bitmap(w, h);
    if (i % 2 == 0) {
      std::bernoulli_distribution on(p);
      for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) bitmap.set(r, c, on(rng));
      }
    } else {
      std::uniform_int_distribution<int> rx(0, w), ry(0, h);
      for (int k = 0; k < 3; ++k) {
        int x0 = rx(rng), x1 = rx(rng), y0 = ry(rng), y1 = ry(rng);
        bitmap.fill_rect(std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1));
      }
    }
    const Mask mask = encode(bitmap);
    const Mask again = encode(decode(mask));
    if (!(decode(mask) == bitmap) || !(again == mask)) ++failures;
  }
  auto counts = [](const Mask& m) {
    return std::vector<std::uint32_t>(m.counts().begin(), m.counts().end());
  };
  Bitmap zeros(2, 2), ones(2, 2), single(2, 2);
  ones.fill_rect(0, 0, 2, 2);
  single.set(0, 1, true);
  const bool golden = counts(encode(zeros)) == std::vector<std::uint32_t>{4} &&
                      counts(encode(ones)) == std::vector<std::uint32_t>{0, 4} &&
                      counts(encode(single)) == std::vector<std::uint32_t>{2, 1, 1};
  Verdict v;
  v.pass = failures == 0 && golden;
  v.detail = fmt("%d/10000 round-trip failures; golden [4], [0,4], [2,1,1]: %s", failures,
                 golden ? "match" : "MISMATCH");
  return v;
}

Verdict mask_box_consistency() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> dim(1, 80);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const int w = dim(rng), h = dim(rng);
    std::uniform_int_distribution<int> rx(0, w - 1), ry(0, h - 1);
    auto random_rect = [&] {
      const int x0 = rx(rng), y0 = ry(rng);
      std::uniform_int_distribution<int> ex(x0 + 1, w), ey(y0 + 1, h);
      return std::array<int, 4>{x0, y0, ex(rng), ey(rng)};
    };
    const auto a = random_rect(), b = random_rect();
    const double by_mask = mask_iou(Mask::rectangle(w, h, a[0], a[1], a[2], a[3]),
                                    Mask::rectangle(w, h, b[0], b[1], b[2], b[3]));
    const double by_box = iou(BBox{double(a[0]), double(a[1]), double(a[2]), double(a[3])},
                              BBox{double(b[0]), double(b[1]), double(b[2]), double(b[3])});
    worst = std::max(worst, std::abs(by_mask - by_box));
  }
  Verdict v;
  v.pass = worst <= 1e-12;
  v.detail = fmt("500 random rectangle pairs, max |mask IoU - box IoU| = %.3g", worst);
  return v;
}

Verdict statistics() {
  Verdict v;
  int generated_mismatches = 0;
  for (int seed = 1; seed <= 5; ++seed) {
    const std::string dir = (work_dir() / ("oracle_" + std::to_string(seed))).string();
    const auto r = cli({"stats", "--gt", dir + "/gt.json"});
    if (r.status != 0) {
      v.pass = false;
      v.detail = r.err;
      return v;
    }
    const json stats = json::parse(r.out);
    const json manifest = json::parse(read_text_file(dir + "/manifest.json"));
    if (stats["pair_count"] != manifest["pair_count"] ||
        stats["image_count"] != manifest["image_count"] ||
        stats["pairs_per_image"] != manifest["pairs_per_image"]) {
      ++generated_mismatches;
    }
  }

  // 623 images with 4 pairs and 377 with 3: 3,623 pairs over 1,000 images.
  GroundTruthDataset fixture;
  for (ImageId id = 1; id <= 1000; ++id) {
    auto& image = fixture.images[id];
    image.info = {id, 32, 32};
    const int pairs = id <= 623 ? 4 : 3;
    for (int k = 0; k < pairs; ++k) {
      const int x = 8 * k;
      image.pairs.push_back(GroundTruthPair::make(id, k + 1, Mask::rectangle(32, 32, x, 0, x + 4, 4),
                                                  Mask::rectangle(32, 32, x, 0, x + 4, 8)));
    }
  }
  const std::string fixture_path = (work_dir() / "fixture_gt.json").string();
  save_ground_truth(fixture, fixture_path);
  const auto r = cli({"stats", "--gt", fixture_path});
  double mean = -1.0;
  std::size_t pairs = 0, images = 0;
  if (r.status == 0) {
    const json stats = json::parse(r.out);
    mean = stats["mean_pairs_per_image"].get<double>();
    pairs = stats["pair_count"].get<std::size_t>();
    images = stats["image_count"].get<std::size_t>();
  }
  v.pass = generated_mismatches == 0 && pairs == 3623 && images == 1000 && mean == 3.623;
  v.detail = fmt("generated datasets: %d/5 mismatch manifest; fixture: %zu pairs / %zu images, "
                 "mean %.6f",
                 generated_mismatches, pairs, images, mean);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Verdict()> check;
  };
  // Monotonicity runs after the pipelines that feed it reports.
  const std::vector<Criterion> criteria = {
      {1, "oracle pipeline", oracle_pipeline},
      {2, "AP fixture", ap_fixture},
      {8, "one-to-one matching", one_to_one},
      {3, "SOAP monotone in threshold", monotonicity},
      {4, "merged box and candidate gate", merge_and_gate},
      {5, "light math", light_math},
      {6, "RLE codec", rle_codec},
      {7, "mask/box IoU consistency", mask_box_consistency},
      {9, "dataset statistics", statistics},
  };
  std::map<int, std::string> lines;
  bool all = true;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all = all && v.pass;
    lines[c.number] = fmt("%s [%d] %s: ", v.pass ? "PASS" : "FAIL", c.number, c.name) + v.detail;
  }
  for (const auto& [number, line] : lines) std::cout << line << "\n";
  fs::remove_all(work_dir());
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}
