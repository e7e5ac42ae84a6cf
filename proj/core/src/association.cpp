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

#include "shadowpair/association.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <tuple>

#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

auto corners(const BBox& b) { return std::tie(b.x_min, b.y_min, b.x_max, b.y_max); }

template <typename Detection>
void check_single_image(std::span<const Detection> detections, ImageId image,
                        const char* what) {
  for (const auto& det : detections) {
    if (det.image_id != image) {
      std::ostringstream msg;
      msg << what << " " << det.id << " belongs to image " << det.image_id
          << ", expected image " << image;
      throw PreconditionError(msg.str());
    }
  }
}

void check_kind(std::span<const InstanceDetection> detections, InstanceKind kind) {
  for (const auto& det : detections) {
    if (det.kind != kind) {
      std::ostringstream msg;
      msg << "detection " << det.id << " is a " << to_string(det.kind)
          << " but was passed as " << to_string(kind);
      throw PreconditionError(msg.str());
    }
  }
}

std::optional<ImageId> first_image(std::span<const InstanceDetection> a,
                                   std::span<const InstanceDetection> b,
                                   std::span<const AssociationDetection> c) {
  if (!a.empty()) return a.front().image_id;
  if (!b.empty()) return b.front().image_id;
  if (!c.empty()) return c.front().image_id;
  return std::nullopt;
}

struct IndexedCandidate {
  std::size_t shadow;
  std::size_t object;
  BBox merged_box;
  double distance;
};

std::vector<IndexedCandidate> candidate_indices(
    std::span<const InstanceDetection> shadows,
    std::span<const InstanceDetection> objects, double threshold_scale) {
  if (auto image = first_image(shadows, objects, {})) {
    check_single_image(shadows, *image, "shadow");
    check_single_image(objects, *image, "object");
  }
  check_kind(shadows, InstanceKind::kShadow);
  check_kind(objects, InstanceKind::kObject);

  std::vector<IndexedCandidate> out;
  for (std::size_t s = 0; s < shadows.size(); ++s) {
    const double threshold = shadows[s].box.height() * threshold_scale;
    for (std::size_t o = 0; o < objects.size(); ++o) {
      const double distance = shortest_distance(shadows[s].box, objects[o].box);
      if (distance < threshold) {
        out.push_back({s, o, merge(shadows[s].box, objects[o].box), distance});
      }
    }
  }
  return out;
}

struct TripleCandidate {
  double iou;
  std::size_t shadow;
  std::size_t object;
  std::size_t association;
};

}  // namespace

std::string_view to_string(ScoreMode mode) {
  switch (mode) {
    case ScoreMode::kGeometricMean:
      return "geometric_mean";
    case ScoreMode::kMin:
      return "min";
    case ScoreMode::kAssociationScore:
      return "association_score";
  }
  return "geometric_mean";
}

ScoreMode parse_score_mode(std::string_view text) {
  if (text == "geometric_mean") return ScoreMode::kGeometricMean;
  if (text == "min") return ScoreMode::kMin;
  if (text == "association_score") return ScoreMode::kAssociationScore;
  throw ParseError("unknown score mode \"" + std::string(text) + "\"");
}

MatchDiagnostics& MatchDiagnostics::operator+=(const MatchDiagnostics& other) {
  candidate_count += other.candidate_count;
  unmatched_shadows += other.unmatched_shadows;
  unmatched_objects += other.unmatched_objects;
  unmatched_associations += other.unmatched_associations;
  return *this;
}

double combine_scores(double shadow, double object, double association,
                      ScoreMode mode) {
  switch (mode) {
    case ScoreMode::kGeometricMean:
      return std::cbrt(shadow * object * association);
    case ScoreMode::kMin:
      return std::min({shadow, object, association});
    case ScoreMode::kAssociationScore:
      return association;
  }
  return 0.0;
}

void sort_canonical(std::vector<InstanceDetection>& detections) {
  std::sort(detections.begin(), detections.end(),
            [](const InstanceDetection& a, const InstanceDetection& b) {
              if (a.score != b.score) return a.score > b.score;
              if (corners(a.box) != corners(b.box)) return corners(a.box) < corners(b.box);
              return a.id < b.id;
            });
}

void sort_canonical(std::vector<AssociationDetection>& detections) {
  std::sort(detections.begin(), detections.end(),
            [](const AssociationDetection& a, const AssociationDetection& b) {
              if (a.score != b.score) return a.score > b.score;
              if (corners(a.box) != corners(b.box)) return corners(a.box) < corners(b.box);
              return a.id < b.id;
            });
}

std::vector<CandidatePair> generate_candidates(
    std::span<const InstanceDetection> shadows,
    std::span<const InstanceDetection> objects, double threshold_scale) {
  std::vector<CandidatePair> candidates;
  for (const auto& c : candidate_indices(shadows, objects, threshold_scale)) {
    candidates.push_back({shadows[c.shadow], objects[c.object], c.merged_box, c.distance});
  }
  return candidates;
}

MatchResult pair_and_match(std::span<const InstanceDetection> shadow_input,
                           std::span<const InstanceDetection> object_input,
                           std::span<const AssociationDetection> association_input,
                           const MatchConfig& config) {
  if (auto image = first_image(shadow_input, object_input, association_input)) {
    check_single_image(association_input, *image, "association");
  }

  std::vector<InstanceDetection> shadows(shadow_input.begin(), shadow_input.end());
  std::vector<InstanceDetection> objects(object_input.begin(), object_input.end());
  std::vector<AssociationDetection> associations(association_input.begin(),
                                                 association_input.end());
  sort_canonical(shadows);
  sort_canonical(objects);
  sort_canonical(associations);

  // Indices refer to the canonical orders above.
  const auto candidates =
      candidate_indices(shadows, objects, config.threshold_scale);

  std::vector<TripleCandidate> triples;
  for (const auto& cand : candidates) {
    for (std::size_t a = 0; a < associations.size(); ++a) {
      const double overlap = iou(cand.merged_box, associations[a].box);
      if (overlap > config.iou_floor) {
        triples.push_back({overlap, cand.shadow, cand.object, a});
      }
    }
  }
  std::sort(triples.begin(), triples.end(),
            [](const TripleCandidate& x, const TripleCandidate& y) {
              if (x.iou != y.iou) return x.iou > y.iou;
              return std::tie(x.shadow, x.object, x.association) <
                     std::tie(y.shadow, y.object, y.association);
            });

  std::vector<bool> shadow_used(shadows.size(), false);
  std::vector<bool> object_used(objects.size(), false);
  std::vector<bool> association_used(associations.size(), false);

  MatchResult result;
  result.diagnostics.candidate_count = candidates.size();
  for (const auto& t : triples) {
    if (shadow_used[t.shadow] || object_used[t.object] ||
        association_used[t.association]) {
      continue;
    }
    shadow_used[t.shadow] = object_used[t.object] = association_used[t.association] = true;

    const auto& shadow = shadows[t.shadow];
    const auto& object = objects[t.object];
    const auto& association = associations[t.association];
    PairedAssociation out;
    out.image_id = association.image_id;
    out.shadow = shadow;
    out.object = object;
    out.association = association;
    if (shadow.mask && object.mask) {
      out.combined_mask = mask_union(*shadow.mask, *object.mask);
    }
    out.combined_score =
        combine_scores(shadow.score, object.score, association.score, config.score_mode);
    out.light_angle = association.light_angle;
    out.match_iou = t.iou;
    result.paired.push_back(std::move(out));
  }

  auto unused = [](const std::vector<bool>& used) {
    return static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  };
  result.diagnostics.unmatched_shadows = unused(shadow_used);
  result.diagnostics.unmatched_objects = unused(object_used);
  result.diagnostics.unmatched_associations = unused(association_used);
  return result;
}

MatchResult match_predictions(const PredictionSet& predictions,
                              const MatchConfig& config) {
  MatchResult total;
  for (const auto& [image_id, image] : predictions.images) {
    const auto shadows = image.of_kind(InstanceKind::kShadow);
    const auto objects = image.of_kind(InstanceKind::kObject);
    auto result = pair_and_match(shadows, objects, image.associations, config);
    for (auto& p : result.paired) total.paired.push_back(std::move(p));
    total.diagnostics += result.diagnostics;
  }
  return total;
}

}  // namespace shadowpair
