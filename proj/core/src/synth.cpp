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

#include "shadowpair/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "shadowpair/error.hpp"
#include "shadowpair/light.hpp"

namespace shadowpair {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;
constexpr const char* kPrngDescription =
    "std::mt19937_64 per image, seeded with std::seed_seq{seed_lo32, seed_hi32, "
    "image_id, stream}; stream 0 = layout, stream 1 = noise";

class Rng {
 public:
  Rng(std::uint64_t seed, ImageId image_id, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(image_id),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(image_id) >> 32),
                      stream};
    engine_.seed(seq);
  }

  double uniform01() { return std::generate_canonical<double, 53>(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

Mask ellipse_mask(int width, int height, const BBox& box) {
  Bitmap bitmap(width, height);
  const Point c = center(box);
  const double rx = 0.5 * box.width();
  const double ry = 0.5 * box.height();
  const int c0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
  const int c1 = std::min(width, static_cast<int>(std::ceil(box.x_max)));
  const int r0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
  const int r1 = std::min(height, static_cast<int>(std::ceil(box.y_max)));
  for (int r = r0; r < r1; ++r) {
    for (int col = c0; col < c1; ++col) {
      const double dx = (col + 0.5 - c.x) / rx;
      const double dy = (r + 0.5 - c.y) / ry;
      if (dx * dx + dy * dy <= 1.0) bitmap.set(r, col);
    }
  }
  return encode(bitmap);
}

Mask solid_mask(int width, int height, const BBox& box) {
  return Mask::rectangle(width, height, static_cast<int>(box.x_min),
                         static_cast<int>(box.y_min), static_cast<int>(box.x_max),
                         static_cast<int>(box.y_max));
}

// Square-element erosion (radius < 0) or dilation (radius > 0), applied
// separably over the mask's neighbourhood only.
Mask morph(const Mask& mask, int radius) {
  if (radius == 0 || mask.is_empty()) return mask;
  const int w = mask.width();
  const int h = mask.height();
  const int r = std::abs(radius);
  const bool dilate = radius > 0;
  const BBox b = bbox_of(mask);
  const int c0 = std::max(0, static_cast<int>(b.x_min) - r);
  const int c1 = std::min(w, static_cast<int>(b.x_max) + r);
  const int r0 = std::max(0, static_cast<int>(b.y_min) - r);
  const int r1 = std::min(h, static_cast<int>(b.y_max) + r);

  const Bitmap src = decode(mask);
  auto pass = [&](const Bitmap& in, bool horizontal) {
    Bitmap out(w, h);
    for (int row = r0; row < r1; ++row) {
      for (int col = c0; col < c1; ++col) {
        bool acc = !dilate;
        for (int k = -r; k <= r; ++k) {
          const int rr = horizontal ? row : row + k;
          const int cc = horizontal ? col + k : col;
          const bool inside = rr >= 0 && rr < h && cc >= 0 && cc < w;
          const bool v = inside && in.at(rr, cc);
          acc = dilate ? (acc || v) : (acc && v);
        }
        if (acc) out.set(row, col);
      }
    }
    return out;
  };
  return encode(pass(pass(src, true), false));
}

// Keeps only the pixels inside the box, rounded outward to whole pixels.
Mask clip_to_box(const Mask& mask, const BBox& box) {
  const Mask window = Mask::rectangle(
      mask.width(), mask.height(), static_cast<int>(std::floor(box.x_min)),
      static_cast<int>(std::floor(box.y_min)), static_cast<int>(std::ceil(box.x_max)),
      static_cast<int>(std::ceil(box.y_max)));
  return intersect(mask, window);
}

BBox jitter_box(const BBox& box, double sigma, Rng& rng, int width, int height) {
  double x0 = box.x_min + sigma * rng.normal();
  double y0 = box.y_min + sigma * rng.normal();
  double x1 = box.x_max + sigma * rng.normal();
  double y1 = box.y_max + sigma * rng.normal();
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  x0 = std::clamp(x0, 0.0, static_cast<double>(width));
  x1 = std::clamp(x1, 0.0, static_cast<double>(width));
  y0 = std::clamp(y0, 0.0, static_cast<double>(height));
  y1 = std::clamp(y1, 0.0, static_cast<double>(height));
  return {x0, y0, x1, y1};
}

struct PlacedPair {
  ObjectShape shape;
  BBox footprint;
  double length_scale;
  Mask object;
  Mask shadow;
};

std::optional<PlacedPair> try_place(const SceneSpec& spec, double theta, Rng& rng,
                                    const std::vector<PlacedPair>& placed) {
  const ObjectShape shape =
      spec.shapes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(spec.shapes.size()) - 1))];
  const int h = static_cast<int>(std::lround(rng.uniform(spec.min_object_size, spec.max_object_size)));
  int w = 0;
  if (shape == ObjectShape::kPost) {
    w = std::max(4, static_cast<int>(std::lround(h * rng.uniform(0.15, 0.3))));
  } else {
    w = static_cast<int>(std::lround(rng.uniform(spec.min_object_size, spec.max_object_size)));
  }
  const double length_scale = rng.uniform(spec.min_length_scale, spec.max_length_scale);
  if (w > spec.width || h > spec.height) return std::nullopt;
  const int x0 = rng.uniform_int(0, spec.width - w);
  const int y0 = rng.uniform_int(0, spec.height - h);
  const BBox footprint{static_cast<double>(x0), static_cast<double>(y0),
                       static_cast<double>(x0 + w), static_cast<double>(y0 + h)};

  for (const auto& other : placed) {
    if (shortest_distance(footprint, other.footprint) < 2.0) return std::nullopt;
  }
  const ShadowQuad quad = project_shadow(footprint, h, LightAngle(theta), length_scale);
  const BBox image{0.0, 0.0, static_cast<double>(spec.width), static_cast<double>(spec.height)};
  if (!image.contains(quad.bounds())) return std::nullopt;

  Mask object = shape == ObjectShape::kEllipse ? ellipse_mask(spec.width, spec.height, footprint)
                                               : solid_mask(spec.width, spec.height, footprint);
  Mask shadow = subtract(quad.rasterize(spec.width, spec.height), object);
  if (area(object) < 8 || area(shadow) < 8) return std::nullopt;
  for (const auto& other : placed) {
    if (intersection_area(shadow, other.object) > 0 ||
        intersection_area(object, other.shadow) > 0) {
      return std::nullopt;
    }
  }
  const BBox shadow_box = bbox_of(shadow);
  if (!(shortest_distance(shadow_box, bbox_of(object)) < shadow_box.height())) {
    return std::nullopt;
  }
  return PlacedPair{shape, footprint, length_scale, std::move(object), std::move(shadow)};
}

InstanceDetection make_instance(DetectionId id, ImageId image, InstanceKind kind,
                                double score, const Mask& mask) {
  return {id, image, kind, score, bbox_of(mask), mask};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError("scene spec: " + what);
}

json noise_to_json(const NoiseModel& n) {
  return json{{"box_jitter", n.box_jitter},     {"mask_radius", n.mask_radius},
              {"tp_score_min", n.tp_score_min}, {"tp_score_max", n.tp_score_max},
              {"fp_score_min", n.fp_score_min}, {"fp_score_max", n.fp_score_max},
              {"fp_rate", n.fp_rate},           {"fn_rate", n.fn_rate},
              {"angle_noise", n.angle_noise}};
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("scene spec field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string_view to_string(ObjectShape shape) {
  switch (shape) {
    case ObjectShape::kPost:
      return "post";
    case ObjectShape::kEllipse:
      return "ellipse";
    case ObjectShape::kBox:
      return "box";
  }
  return "post";
}

ObjectShape parse_object_shape(std::string_view text) {
  if (text == "post") return ObjectShape::kPost;
  if (text == "ellipse") return ObjectShape::kEllipse;
  if (text == "box") return ObjectShape::kBox;
  throw ParseError("unknown object shape \"" + std::string(text) + "\"");
}

NoiseModel NoiseModel::typical() {
  NoiseModel n;
  n.box_jitter = 2.0;
  n.mask_radius = 1;
  n.tp_score_min = 0.5;
  n.tp_score_max = 1.0;
  n.fp_score_min = 0.05;
  n.fp_score_max = 0.6;
  n.fp_rate = 0.2;
  n.fn_rate = 0.05;
  n.angle_noise = 0.1;
  return n;
}

void NoiseModel::validate() const {
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  require(box_jitter >= 0.0 && angle_noise >= 0.0 && mask_radius >= 0,
          "noise spreads must be non-negative");
  require(rate(fp_rate) && rate(fn_rate), "noise rates must lie in [0, 1]");
  require(rate(tp_score_min) && rate(tp_score_max) && tp_score_min <= tp_score_max,
          "true-positive score range must be a subrange of [0, 1]");
  require(rate(fp_score_min) && rate(fp_score_max) && fp_score_min <= fp_score_max,
          "false-positive score range must be a subrange of [0, 1]");
}

void SceneSpec::validate() const {
  require(image_count >= 1, "image_count must be at least 1");
  require(width > 0 && height > 0, "image size must be positive");
  require(min_pairs >= 1 && min_pairs <= max_pairs, "pair range must satisfy 1 <= min <= max");
  require(max_pairs < kIdStride / 6, "too many pairs per image");
  require(!shapes.empty(), "at least one object shape is required");
  require(min_object_size >= 4.0 && min_object_size <= max_object_size,
          "object size range must satisfy 4 <= min <= max");
  require(min_length_scale > 0.0 && min_length_scale <= max_length_scale,
          "length scale range must satisfy 0 < min <= max");
  require(max_retries >= 1, "max_retries must be positive");
  if (light_angle) {
    require(*light_angle > -kPi && *light_angle <= kPi, "light_angle must lie in (-pi, pi]");
  }
  noise.validate();
}

GeneratedScene generate(const SceneSpec& spec) {
  spec.validate();
  GeneratedScene scene;
  scene.manifest.seed = spec.seed;
  scene.manifest.prng = kPrngDescription;

  for (ImageId image_id = 1; image_id <= spec.image_count; ++image_id) {
    Rng rng(spec.seed, image_id, 0);
    const int n_pairs = rng.uniform_int(spec.min_pairs, spec.max_pairs);
    const double drawn = kPi - 2.0 * kPi * rng.uniform01();  // (-pi, pi]
    const double theta = spec.light_angle.value_or(drawn);

    std::vector<PlacedPair> placed;
    for (int k = 0; k < n_pairs; ++k) {
      std::optional<PlacedPair> pair;
      for (int attempt = 0; attempt < spec.max_retries && !pair; ++attempt) {
        pair = try_place(spec, theta, rng, placed);
      }
      if (!pair) {
        std::ostringstream msg;
        msg << "image " << image_id << ": could not place pair " << k + 1 << " of "
            << n_pairs << " after " << spec.max_retries << " attempts";
        throw PlacementError(msg.str());
      }
      placed.push_back(std::move(*pair));
    }

    ImageGroundTruth gt{{image_id, spec.width, spec.height}, {}};
    ImagePredictions perfect;
    ManifestImage record{image_id, theta, {}};
    for (std::size_t k = 0; k < placed.size(); ++k) {
      const auto& p = placed[k];
      const std::int64_t pair_id = static_cast<std::int64_t>(k) + 1;
      const DetectionId base = image_id * kIdStride + 3 * static_cast<DetectionId>(k);
      gt.pairs.push_back(
          GroundTruthPair::make(image_id, pair_id, p.shadow, mask_union(p.shadow, p.object)));
      const auto& pair = gt.pairs.back();
      const double angle =
          ground_truth_angle(centroid(pair.shadow_mask()), centroid(pair.object_mask())).radians();

      perfect.instances.push_back(
          make_instance(base, image_id, InstanceKind::kShadow, 1.0, pair.shadow_mask()));
      perfect.instances.push_back(
          make_instance(base + 1, image_id, InstanceKind::kObject, 1.0, pair.object_mask()));
      perfect.associations.push_back({base + 2, image_id, 1.0, pair.association_box(), angle});
      record.pairs.push_back(
          {pair_id, p.shape, base, base + 1, base + 2, p.footprint, p.length_scale, angle});
    }
    scene.manifest.pair_count += gt.pairs.size();
    ++scene.manifest.pairs_per_image[static_cast<int>(gt.pairs.size())];
    scene.manifest.images.push_back(std::move(record));
    scene.ground_truth.images.emplace(image_id, std::move(gt));
    scene.perfect.images.emplace(image_id, std::move(perfect));
  }
  scene.manifest.image_count = scene.ground_truth.images.size();
  scene.noisy = apply_noise(scene, spec, spec.noise);
  return scene;
}

PredictionSet apply_noise(const GeneratedScene& scene, const SceneSpec& spec,
                          const NoiseModel& noise) {
  noise.validate();
  PredictionSet noisy;
  for (const auto& [image_id, perfect] : scene.perfect.images) {
    const ImageInfo& info = scene.ground_truth.images.at(image_id).info;
    Rng rng(spec.seed, image_id, 1);
    ImagePredictions out;

    // Every draw happens unconditionally so that images share the same
    // random stream across noise levels.
    for (const auto& det : perfect.instances) {
      const bool dropped = rng.bernoulli(noise.fn_rate);
      const double score = rng.uniform(noise.tp_score_min, noise.tp_score_max);
      const BBox box = jitter_box(det.box, noise.box_jitter, rng, info.width, info.height);
      const bool erode = rng.bernoulli(0.5);
      const int radius = rng.uniform_int(0, noise.mask_radius);
      if (dropped) continue;
      InstanceDetection d = det;
      d.score = score;
      d.box = box;
      if (d.mask) {
        Mask m = clip_to_box(morph(*d.mask, erode ? -radius : radius), box);
        if (m.is_empty()) continue;
        d.mask = std::move(m);
      }
      out.instances.push_back(std::move(d));
    }
    for (const auto& det : perfect.associations) {
      const bool dropped = rng.bernoulli(noise.fn_rate);
      const double score = rng.uniform(noise.tp_score_min, noise.tp_score_max);
      const BBox box = jitter_box(det.box, noise.box_jitter, rng, info.width, info.height);
      const double angle = wrap_angle(det.light_angle + noise.angle_noise * rng.normal());
      if (dropped) continue;
      AssociationDetection d = det;
      d.score = score;
      d.box = box;
      d.light_angle = angle;
      out.associations.push_back(d);
    }

    // Spurious triples come after the true detections in id order.
    const std::size_t true_pairs = perfect.associations.size();
    DetectionId next = image_id * kIdStride + 3 * static_cast<DetectionId>(true_pairs);
    for (std::size_t k = 0; k < true_pairs; ++k) {
      if (!rng.bernoulli(noise.fp_rate)) continue;
      auto random_box = [&]() {
        const int w = static_cast<int>(std::lround(rng.uniform(spec.min_object_size, spec.max_object_size)));
        const int h = static_cast<int>(std::lround(rng.uniform(spec.min_object_size, spec.max_object_size)));
        const int bw = std::min(w, info.width);
        const int bh = std::min(h, info.height);
        const int x = rng.uniform_int(0, info.width - bw);
        const int y = rng.uniform_int(0, info.height - bh);
        return BBox{static_cast<double>(x), static_cast<double>(y),
                    static_cast<double>(x + bw), static_cast<double>(y + bh)};
      };
      const BBox shadow_box = random_box();
      const BBox object_box = random_box();
      const Mask shadow_mask = ellipse_mask(info.width, info.height, shadow_box);
      const Mask object_mask = ellipse_mask(info.width, info.height, object_box);
      const double s1 = rng.uniform(noise.fp_score_min, noise.fp_score_max);
      const double s2 = rng.uniform(noise.fp_score_min, noise.fp_score_max);
      const double s3 = rng.uniform(noise.fp_score_min, noise.fp_score_max);
      const double angle = kPi - 2.0 * kPi * rng.uniform01();
      if (!shadow_mask.is_empty()) {
        out.instances.push_back({next, image_id, InstanceKind::kShadow, s1, shadow_box, shadow_mask});
      }
      if (!object_mask.is_empty()) {
        out.instances.push_back({next + 1, image_id, InstanceKind::kObject, s2, object_box, object_mask});
      }
      out.associations.push_back({next + 2, image_id, s3, merge(shadow_box, object_box), angle});
      next += 3;
    }
    noisy.images.emplace(image_id, std::move(out));
  }
  return noisy;
}

std::string scene_spec_to_json(const SceneSpec& spec) {
  json shapes = json::array();
  for (auto s : spec.shapes) shapes.push_back(std::string(to_string(s)));
  json doc{{"seed", spec.seed},
           {"image_count", spec.image_count},
           {"width", spec.width},
           {"height", spec.height},
           {"min_pairs", spec.min_pairs},
           {"max_pairs", spec.max_pairs},
           {"light_angle", spec.light_angle ? json(*spec.light_angle) : json(nullptr)},
           {"shapes", shapes},
           {"min_object_size", spec.min_object_size},
           {"max_object_size", spec.max_object_size},
           {"min_length_scale", spec.min_length_scale},
           {"max_length_scale", spec.max_length_scale},
           {"max_retries", spec.max_retries},
           {"noise", noise_to_json(spec.noise)}};
  return doc.dump(2) + "\n";
}

SceneSpec scene_spec_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scene spec: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scene spec must be a JSON object");
  SceneSpec spec;
  read_if(doc, "seed", spec.seed);
  read_if(doc, "image_count", spec.image_count);
  read_if(doc, "width", spec.width);
  read_if(doc, "height", spec.height);
  read_if(doc, "min_pairs", spec.min_pairs);
  read_if(doc, "max_pairs", spec.max_pairs);
  if (doc.contains("light_angle") && !doc["light_angle"].is_null()) {
    double theta = 0.0;
    read_if(doc, "light_angle", theta);
    spec.light_angle = theta;
  }
  if (doc.contains("shapes")) {
    std::vector<std::string> names;
    read_if(doc, "shapes", names);
    spec.shapes.clear();
    for (const auto& n : names) spec.shapes.push_back(parse_object_shape(n));
  }
  read_if(doc, "min_object_size", spec.min_object_size);
  read_if(doc, "max_object_size", spec.max_object_size);
  read_if(doc, "min_length_scale", spec.min_length_scale);
  read_if(doc, "max_length_scale", spec.max_length_scale);
  read_if(doc, "max_retries", spec.max_retries);
  if (doc.contains("noise")) {
    const json& n = doc["noise"];
    if (!n.is_object()) throw ParseError("scene spec noise must be an object");
    read_if(n, "box_jitter", spec.noise.box_jitter);
    read_if(n, "mask_radius", spec.noise.mask_radius);
    read_if(n, "tp_score_min", spec.noise.tp_score_min);
    read_if(n, "tp_score_max", spec.noise.tp_score_max);
    read_if(n, "fp_score_min", spec.noise.fp_score_min);
    read_if(n, "fp_score_max", spec.noise.fp_score_max);
    read_if(n, "fp_rate", spec.noise.fp_rate);
    read_if(n, "fn_rate", spec.noise.fn_rate);
    read_if(n, "angle_noise", spec.noise.angle_noise);
  }
  return spec;
}

std::string manifest_to_json(const Manifest& manifest, const SceneSpec& spec) {
  json histogram = json::object();
  for (const auto& [pairs, images] : manifest.pairs_per_image) {
    histogram[std::to_string(pairs)] = images;
  }
  json images = json::array();
  for (const auto& img : manifest.images) {
    json pairs = json::array();
    for (const auto& p : img.pairs) {
      pairs.push_back({{"pair_id", p.pair_id},
                       {"shape", std::string(to_string(p.shape))},
                       {"shadow_id", p.shadow_id},
                       {"object_id", p.object_id},
                       {"association_id", p.association_id},
                       {"footprint", {p.footprint.x_min, p.footprint.y_min,
                                      p.footprint.x_max, p.footprint.y_max}},
                       {"length_scale", p.length_scale},
                       {"ground_truth_angle", p.ground_truth_angle}});
    }
    images.push_back({{"image_id", img.image_id},
                      {"light_angle", img.light_angle},
                      {"pairs", pairs}});
  }
  json doc{{"format_version", 1},
           {"seed", manifest.seed},
           {"prng", manifest.prng},
           {"image_count", manifest.image_count},
           {"pair_count", manifest.pair_count},
           {"pairs_per_image", histogram},
           {"spec", json::parse(scene_spec_to_json(spec))},
           {"images", images}};
  return doc.dump(2) + "\n";
}

}  // namespace shadowpair
