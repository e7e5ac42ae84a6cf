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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "shadowpair/geometry.hpp"
#include "shadowpair/mask.hpp"

namespace shadowpair {

using ImageId = std::int64_t;
using DetectionId = std::int64_t;

struct ImageInfo {
  ImageId id = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

/// One labelled shadow-object pair.
///
/// Only the shadow and association masks are authored; the object mask and
/// all three boxes are derived. Instances are built through `make`, which
/// enforces shadow ⊆ association and a nonempty object remainder.
class GroundTruthPair {
 public:
  // Throws ValidationError naming image_id/pair_id on any violation.
  static GroundTruthPair make(ImageId image_id, std::int64_t pair_id,
                              Mask shadow_mask, Mask association_mask);

  ImageId image_id() const { return image_id_; }
  std::int64_t pair_id() const { return pair_id_; }
  const Mask& shadow_mask() const { return shadow_mask_; }
  const Mask& association_mask() const { return association_mask_; }
  const Mask& object_mask() const { return object_mask_; }
  const BBox& shadow_box() const { return shadow_box_; }
  const BBox& object_box() const { return object_box_; }
  const BBox& association_box() const { return association_box_; }

  friend bool operator==(const GroundTruthPair&, const GroundTruthPair&) = default;

 private:
  GroundTruthPair(ImageId image_id, std::int64_t pair_id, Mask shadow,
                  Mask association, Mask object);

  ImageId image_id_;
  std::int64_t pair_id_;
  Mask shadow_mask_;
  Mask association_mask_;
  Mask object_mask_;
  BBox shadow_box_;
  BBox object_box_;
  BBox association_box_;
};

struct ImageGroundTruth {
  ImageInfo info;
  std::vector<GroundTruthPair> pairs;
};

/// Ground truth keyed by image id. Iteration order is ascending id.
struct GroundTruthDataset {
  std::map<ImageId, ImageGroundTruth> images;

  std::size_t pair_count() const;
  const ImageGroundTruth* find(ImageId id) const;
};

enum class InstanceKind { kShadow, kObject };

std::string_view to_string(InstanceKind kind);
// Throws ParseError on anything but "shadow" or "object".
InstanceKind parse_instance_kind(std::string_view text);

struct InstanceDetection {
  DetectionId id = 0;
  ImageId image_id = 0;
  InstanceKind kind = InstanceKind::kShadow;
  double score = 0.0;
  BBox box;
  std::optional<Mask> mask;

  friend bool operator==(const InstanceDetection&, const InstanceDetection&) = default;
};

struct AssociationDetection {
  DetectionId id = 0;
  ImageId image_id = 0;
  double score = 0.0;
  BBox box;
  double light_angle = 0.0;  // radians, (-pi, pi]

  friend bool operator==(const AssociationDetection&, const AssociationDetection&) = default;
};

// Throws ValidationError: score outside [0,1], invalid box, or a mask whose
// tight box escapes the detection box by more than one pixel.
void validate(const InstanceDetection& detection);
// Throws ValidationError: score outside [0,1], invalid box, angle outside (-pi, pi].
void validate(const AssociationDetection& detection);

struct ImagePredictions {
  std::vector<InstanceDetection> instances;
  std::vector<AssociationDetection> associations;

  std::vector<InstanceDetection> of_kind(InstanceKind kind) const;
};

/// Raw detections keyed by image id.
struct PredictionSet {
  std::map<ImageId, ImagePredictions> images;

  std::size_t instance_count() const;
  std::size_t association_count() const;
};

/// Summary statistics of a ground-truth dataset.
struct DatasetStats {
  // 10 equal bins over [0, 0.5] of the image area, plus one overflow bin.
  static constexpr int kAreaBins = 11;

  std::size_t image_count = 0;
  std::size_t pair_count = 0;
  std::map<int, std::size_t> pairs_per_image;  // pairs -> number of images
  double mean_pairs_per_image = 0.0;
  std::array<std::size_t, kAreaBins> shadow_area_histogram{};
  std::array<std::size_t, kAreaBins> object_area_histogram{};
  double fraction_images_with_9_plus = 0.0;
};

// Bin index for an instance covering `pixels` of a `total`-pixel image.
int area_fraction_bin(std::uint64_t pixels, std::uint64_t total);

// Throws PreconditionError on an empty dataset.
DatasetStats compute_stats(const GroundTruthDataset& dataset);

}  // namespace shadowpair
