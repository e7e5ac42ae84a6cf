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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shadowpair/geometry.hpp"
#include "shadowpair/mask.hpp"
#include "shadowpair/model.hpp"

namespace shadowpair {

// How the three member scores of an output pair collapse into one.
enum class ScoreMode { kGeometricMean, kMin, kAssociationScore };

std::string_view to_string(ScoreMode mode);
// Accepts "geometric_mean", "min", "association_score".
ScoreMode parse_score_mode(std::string_view text);

struct MatchConfig {
  // A shadow/object pair is a candidate when their box distance is below
  // threshold_scale * height(shadow box).
  double threshold_scale = 1.0;
  // Accepted triples need iou(merged box, association box) > iou_floor.
  double iou_floor = 0.0;
  ScoreMode score_mode = ScoreMode::kGeometricMean;
};

struct CandidatePair {
  InstanceDetection shadow;
  InstanceDetection object;
  BBox merged_box;
  double distance = 0.0;
};

/// A final output: one shadow, one object and the association that matched
/// their merged box.
struct PairedAssociation {
  ImageId image_id = 0;
  InstanceDetection shadow;
  InstanceDetection object;
  AssociationDetection association;
  std::optional<Mask> combined_mask;  // union of the instance masks
  double combined_score = 0.0;
  double light_angle = 0.0;
  double match_iou = 0.0;

  BBox merged_box() const { return merge(shadow.box, object.box); }

  friend bool operator==(const PairedAssociation&, const PairedAssociation&) = default;
};

struct MatchDiagnostics {
  std::size_t candidate_count = 0;
  std::size_t unmatched_shadows = 0;
  std::size_t unmatched_objects = 0;
  std::size_t unmatched_associations = 0;

  MatchDiagnostics& operator+=(const MatchDiagnostics& other);
};

struct MatchResult {
  std::vector<PairedAssociation> paired;  // in acceptance order
  MatchDiagnostics diagnostics;
};

double combine_scores(double shadow, double object, double association,
                      ScoreMode mode);

// Canonical order used before pairing: descending score, then box corners,
// then id. Makes the matcher independent of input order.
void sort_canonical(std::vector<InstanceDetection>& detections);
void sort_canonical(std::vector<AssociationDetection>& detections);

// Every shadow/object pair whose boxes are closer than the shadow height
// times `threshold_scale`. Throws PreconditionError if inputs mix images or
// kinds.
std::vector<CandidatePair> generate_candidates(
    std::span<const InstanceDetection> shadows,
    std::span<const InstanceDetection> objects, double threshold_scale = 1.0);

/// Pairs shadow and object instances of one image and matches each pair to
/// a predicted association box.
///
/// Candidates are built as in generate_candidates, every (candidate,
/// association) combination is scored by iou(merged box, association box),
/// and triples are accepted greedily by descending IoU while each shadow,
/// object and association is still unused. Ties resolve by lower index in
/// the canonical orders.
MatchResult pair_and_match(std::span<const InstanceDetection> shadows,
                           std::span<const InstanceDetection> objects,
                           std::span<const AssociationDetection> associations,
                           const MatchConfig& config = {});

// Runs pair_and_match per image. Output keeps ascending image order.
MatchResult match_predictions(const PredictionSet& predictions,
                              const MatchConfig& config = {});

}  // namespace shadowpair
