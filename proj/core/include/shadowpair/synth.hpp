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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shadowpair/model.hpp"

namespace shadowpair {

enum class ObjectShape { kPost, kEllipse, kBox };

std::string_view to_string(ObjectShape shape);
ObjectShape parse_object_shape(std::string_view text);

/// Perturbations applied when deriving the noisy prediction file.
struct NoiseModel {
  double box_jitter = 0.0;   // std-dev of each box corner, pixels
  int mask_radius = 0;       // max erosion/dilation radius, pixels
  double tp_score_min = 1.0;
  double tp_score_max = 1.0;
  double fp_score_min = 0.05;
  double fp_score_max = 0.5;
  double fp_rate = 0.0;      // chance per true pair of one spurious triple
  double fn_rate = 0.0;      // chance each true detection is dropped
  double angle_noise = 0.0;  // std-dev of predicted light angle, radians

  static NoiseModel zero() { return {}; }
  // Moderate noise used by the CLI's default noisy output.
  static NoiseModel typical();

  // Throws PreconditionError on negative spreads or rates outside [0, 1].
  void validate() const;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int image_count = 50;
  int width = 512;
  int height = 512;
  int min_pairs = 1;
  int max_pairs = 9;
  // Fixed light direction for every image; drawn per image when unset.
  std::optional<double> light_angle;
  std::vector<ObjectShape> shapes = {ObjectShape::kPost, ObjectShape::kEllipse,
                                     ObjectShape::kBox};
  double min_object_size = 16.0;
  double max_object_size = 64.0;
  double min_length_scale = 0.8;
  double max_length_scale = 1.5;
  NoiseModel noise = NoiseModel::typical();
  int max_retries = 500;  // placement attempts per pair

  // Throws PreconditionError when any range is empty or out of bounds.
  void validate() const;
};

struct ManifestPair {
  std::int64_t pair_id = 0;
  ObjectShape shape = ObjectShape::kPost;
  DetectionId shadow_id = 0;
  DetectionId object_id = 0;
  DetectionId association_id = 0;
  BBox footprint;
  double length_scale = 0.0;
  double ground_truth_angle = 0.0;  // from the rasterised mask centroids
};

struct ManifestImage {
  ImageId image_id = 0;
  double light_angle = 0.0;
  std::vector<ManifestPair> pairs;
};

/// Bookkeeping of what the generator produced.
struct Manifest {
  std::uint64_t seed = 0;
  std::string prng;
  std::size_t image_count = 0;
  std::size_t pair_count = 0;
  std::map<int, std::size_t> pairs_per_image;
  std::vector<ManifestImage> images;
};

struct GeneratedScene {
  GroundTruthDataset ground_truth;
  PredictionSet perfect;  // ground truth re-emitted as score-1 detections
  PredictionSet noisy;
  Manifest manifest;
};

// Detection ids are image_id * kIdStride + k: shadows, objects and
// associations of pair k take 3k, 3k+1, 3k+2; spurious detections follow.
inline constexpr DetectionId kIdStride = 10000;

/// Generates a seeded synthetic dataset.
///
/// Each image draws its own generator from (seed, image_id), so images are
/// independent and output is byte-identical for equal specs. Objects stand
/// on pairwise-disjoint footprints; each casts a quadrilateral shadow
/// opposite the image's light direction (see project_shadow). Shadows may
/// overlap other shadows but never an object. A placement is redrawn when
/// it leaves the image, touches another object, or does not satisfy the
/// proximity rule the pairing step relies on (shadow-object box distance
/// below the shadow box height). Throws PlacementError when a pair cannot be
/// placed in max_retries attempts.
GeneratedScene generate(const SceneSpec& spec);

// Re-derives noisy predictions from an existing scene with another noise model.
PredictionSet apply_noise(const GeneratedScene& scene, const SceneSpec& spec,
                          const NoiseModel& noise);

std::string scene_spec_to_json(const SceneSpec& spec);
// Keys mirror SceneSpec/NoiseModel member names; absent keys keep defaults.
SceneSpec scene_spec_from_json(std::string_view text);
std::string manifest_to_json(const Manifest& manifest, const SceneSpec& spec);

}  // namespace shadowpair
