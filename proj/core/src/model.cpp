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

#include "shadowpair/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

std::string pair_label(ImageId image_id, std::int64_t pair_id) {
  std::ostringstream out;
  out << "image " << image_id << " pair " << pair_id;
  return out.str();
}

std::string detection_label(const char* what, DetectionId id, ImageId image) {
  std::ostringstream out;
  out << what << " " << id << " (image " << image << ")";
  return out.str();
}

void check_score(double score, const std::string& label) {
  if (!(score >= 0.0 && score <= 1.0)) {
    std::ostringstream msg;
    msg << label << ": score " << score << " outside [0, 1]";
    throw ValidationError(msg.str());
  }
}

void check_box(const BBox& box, const std::string& label) {
  if (!box.valid()) throw ValidationError(label + ": invalid box");
}

}  // namespace

GroundTruthPair::GroundTruthPair(ImageId image_id, std::int64_t pair_id,
                                 Mask shadow, Mask association, Mask object)
    : image_id_(image_id),
      pair_id_(pair_id),
      shadow_mask_(std::move(shadow)),
      association_mask_(std::move(association)),
      object_mask_(std::move(object)),
      shadow_box_(bbox_of(shadow_mask_)),
      object_box_(bbox_of(object_mask_)),
      association_box_(merge(shadow_box_, object_box_)) {}

GroundTruthPair GroundTruthPair::make(ImageId image_id, std::int64_t pair_id,
                                      Mask shadow_mask, Mask association_mask) {
  const std::string label = pair_label(image_id, pair_id);
  if (shadow_mask.width() != association_mask.width() ||
      shadow_mask.height() != association_mask.height()) {
    throw ValidationError(label + ": shadow and association masks differ in size");
  }
  if (shadow_mask.is_empty()) throw ValidationError(label + ": shadow mask is empty");
  if (!is_subset(shadow_mask, association_mask)) {
    throw ValidationError(label + ": shadow mask is not contained in the association mask");
  }
  Mask object_mask = subtract(association_mask, shadow_mask);
  if (object_mask.is_empty()) {
    throw ValidationError(label + ": derived object mask is empty");
  }
  return GroundTruthPair(image_id, pair_id, std::move(shadow_mask),
                         std::move(association_mask), std::move(object_mask));
}

std::size_t GroundTruthDataset::pair_count() const {
  std::size_t n = 0;
  for (const auto& [id, image] : images) n += image.pairs.size();
  return n;
}

const ImageGroundTruth* GroundTruthDataset::find(ImageId id) const {
  auto it = images.find(id);
  return it == images.end() ? nullptr : &it->second;
}

std::string_view to_string(InstanceKind kind) {
  return kind == InstanceKind::kShadow ? "shadow" : "object";
}

InstanceKind parse_instance_kind(std::string_view text) {
  if (text == "shadow") return InstanceKind::kShadow;
  if (text == "object") return InstanceKind::kObject;
  throw ParseError("unknown instance kind \"" + std::string(text) + "\"");
}

void validate(const InstanceDetection& detection) {
  const std::string label =
      detection_label("instance", detection.id, detection.image_id);
  check_score(detection.score, label);
  check_box(detection.box, label);
  if (detection.mask && !detection.mask->is_empty()) {
    if (!detection.box.expanded(1.0).contains(bbox_of(*detection.mask))) {
      throw ValidationError(label + ": mask extends beyond the detection box");
    }
  }
}

void validate(const AssociationDetection& detection) {
  const std::string label =
      detection_label("association", detection.id, detection.image_id);
  check_score(detection.score, label);
  check_box(detection.box, label);
  const double angle = detection.light_angle;
  if (!(angle > -std::numbers::pi && angle <= std::numbers::pi)) {
    std::ostringstream msg;
    msg << label << ": light angle " << angle << " outside (-pi, pi]";
    throw ValidationError(msg.str());
  }
}

std::vector<InstanceDetection> ImagePredictions::of_kind(InstanceKind kind) const {
  std::vector<InstanceDetection> out;
  for (const auto& det : instances) {
    if (det.kind == kind) out.push_back(det);
  }
  return out;
}

std::size_t PredictionSet::instance_count() const {
  std::size_t n = 0;
  for (const auto& [id, image] : images) n += image.instances.size();
  return n;
}

std::size_t PredictionSet::association_count() const {
  std::size_t n = 0;
  for (const auto& [id, image] : images) n += image.associations.size();
  return n;
}

int area_fraction_bin(std::uint64_t pixels, std::uint64_t total) {
  // floor(20 * pixels / total) in exact integer arithmetic.
  const std::uint64_t bin = (pixels * 20) / total;
  return static_cast<int>(std::min<std::uint64_t>(bin, DatasetStats::kAreaBins - 1));
}

DatasetStats compute_stats(const GroundTruthDataset& dataset) {
  if (dataset.images.empty()) throw PreconditionError("compute_stats: dataset is empty");
  DatasetStats stats;
  std::size_t nine_plus = 0;
  for (const auto& [id, image] : dataset.images) {
    ++stats.image_count;
    stats.pair_count += image.pairs.size();
    ++stats.pairs_per_image[static_cast<int>(image.pairs.size())];
    if (image.pairs.size() >= 9) ++nine_plus;
    const std::uint64_t total =
        static_cast<std::uint64_t>(image.info.width) * image.info.height;
    for (const auto& pair : image.pairs) {
      ++stats.shadow_area_histogram[area_fraction_bin(area(pair.shadow_mask()), total)];
      ++stats.object_area_histogram[area_fraction_bin(area(pair.object_mask()), total)];
    }
  }
  stats.mean_pairs_per_image =
      static_cast<double>(stats.pair_count) / static_cast<double>(stats.image_count);
  stats.fraction_images_with_9_plus =
      static_cast<double>(nine_plus) / static_cast<double>(stats.image_count);
  return stats;
}

}  // namespace shadowpair
