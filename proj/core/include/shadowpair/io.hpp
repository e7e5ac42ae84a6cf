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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shadowpair/association.hpp"
#include "shadowpair/model.hpp"
#include "shadowpair/soap.hpp"

namespace shadowpair {

// Version stamped into every JSON document this library writes.
inline constexpr int kFormatVersion = 1;

// Reads a whole file. Throws Error naming the path when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Ground truth:
// {"images": [{"id", "width", "height"}],
//  "pairs": [{"image_id", "pair_id", "shadow_rle": [counts], "association_rle": [counts]}]}
// Object masks are derived on load; every pair is validated.
GroundTruthDataset ground_truth_from_json(std::string_view text);
std::string ground_truth_to_json(const GroundTruthDataset& dataset);
GroundTruthDataset load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruthDataset& dataset,
                       const std::filesystem::path& path);

// Predictions:
// {"instances": [{"id"?, "image_id", "kind", "score", "box": [x0, y0, x1, y1],
//                 "rle"?: {"size": [height, width], "counts": [...]}}],
//  "associations": [{"id"?, "image_id", "score", "box", "light_angle"}]}
// Missing ids default to the entry's position in its list.
PredictionSet predictions_from_json(std::string_view text);
std::string predictions_to_json(const PredictionSet& predictions);
PredictionSet load_predictions(const std::filesystem::path& path);
void save_predictions(const PredictionSet& predictions,
                      const std::filesystem::path& path);

// Paired associations:
// {"paired": [{"image_id", "shadow", "object", "association_box",
//              "association_id", "association_score", "combined_score",
//              "light_angle", "match_iou"}]}
std::vector<PairedAssociation> paired_from_json(std::string_view text);
std::string paired_to_json(std::span<const PairedAssociation> paired);
std::vector<PairedAssociation> load_paired(const std::filesystem::path& path);
void save_paired(std::span<const PairedAssociation> paired,
                 const std::filesystem::path& path);

// True if the document carries a top-level "paired" array.
bool is_paired_document(std::string_view text);

std::string diagnostics_to_json(const MatchDiagnostics& diagnostics);
std::string report_to_json(const SoapReport& report);
SoapReport report_from_json(std::string_view text);
std::string stats_to_json(const DatasetStats& stats);

}  // namespace shadowpair
