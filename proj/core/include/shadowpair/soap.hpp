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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shadowpair/association.hpp"
#include "shadowpair/model.hpp"

namespace shadowpair {

// Whether IoUs are taken between boxes or between masks.
enum class Variant { kBox, kMask };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

// 0.50, 0.55, ..., 0.95.
std::vector<double> default_thresholds();

// Parses "start:step:stop" (inclusive) or a comma-separated list.
// Values are snapped to a 1e-6 grid so "0.5:0.05:0.95" yields the literals.
std::vector<double> parse_thresholds(std::string_view text);

struct SoapConfig {
  std::vector<double> thresholds = default_thresholds();
  Variant variant = Variant::kBox;

  // Throws PreconditionError unless thresholds are nonempty, strictly
  // increasing and inside (0, 1).
  void validate() const;
};

struct TripleIou {
  double shadow = 0.0;
  double object = 0.0;
  double association = 0.0;

  double min() const;
};

// IoUs of the predicted shadow, object and association against one ground
// truth pair. Box variant compares the predicted association box with the
// merged ground-truth box; mask variant compares the union of predicted
// instance masks with the ground-truth association mask. Throws
// PreconditionError when the mask variant meets a detection without a mask.
TripleIou triple_iou(const PairedAssociation& pred, const GroundTruthPair& gt,
                     Variant variant);

// All three IoUs at least tau.
bool is_true_positive(const PairedAssociation& pred, const GroundTruthPair& gt,
                      double tau, Variant variant);

struct ThresholdResult {
  double tau = 0.0;
  double ap = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

struct SoapReport {
  Variant variant = Variant::kBox;
  std::vector<ThresholdResult> per_threshold;
  std::optional<double> soap50;  // present when 0.5 is evaluated
  std::optional<double> soap75;  // present when 0.75 is evaluated
  double soap = 0.0;             // mean AP over all thresholds

  const ThresholdResult* at(double tau) const;
};

// 101-point interpolated AP of a ranked TP/FP list against `positives`
// ground-truth items: mean over recall r in {0, 0.01, ..., 1} of the best
// precision achieved at recall >= r (0 when r is never reached).
double interpolated_ap(const std::vector<bool>& ranked_hits, std::size_t positives);

/// Shadow-object average precision over the configured IoU thresholds.
///
/// Predictions are ranked by descending combined_score. At each threshold
/// they are matched greedily, in rank order, to the still-unmatched ground
/// truth pair of the same image with the largest minimum IoU (ties: larger
/// association IoU, then lower pair_id), provided all three IoUs reach the
/// threshold.
///
/// Throws PreconditionError for empty ground truth and ValidationError for
/// predictions on images missing from the ground truth.
SoapReport evaluate(std::span<const PairedAssociation> predictions,
                    const GroundTruthDataset& ground_truth,
                    const SoapConfig& config = {});

// Aligned text table with one row per (method name, report):
//   Method  box SOAP_50  box SOAP_75  box SOAP
// Values are percentages with one decimal.
std::string format_table(
    std::span<const std::pair<std::string, SoapReport>> rows);

}  // namespace shadowpair
