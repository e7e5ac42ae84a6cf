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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shadowpair/association.hpp"
#include "shadowpair/model.hpp"

namespace shadowpair::tools {

struct RenderStyle {
  std::vector<std::string> palette = {"#e6194b", "#3cb44b", "#4363d8", "#f58231",
                                      "#911eb4", "#42d4f4", "#f032e6", "#bfef45",
                                      "#469990", "#9a6324"};
  double stroke_width = 2.0;
  bool mask_outlines = true;
  bool association_outlines = true;
  bool light_arrows = true;
};

struct RenderSpec {
  std::optional<std::filesystem::path> ground_truth;
  std::optional<std::filesystem::path> paired;
  std::filesystem::path output_dir;
  RenderStyle style;

  // Throws PreconditionError when neither input is set.
  void validate() const;
};

// One SVG document for one image. Ground-truth pairs are drawn dashed,
// predicted pairs solid; each pair gets its own palette colour.
std::string render_image_svg(const ImageInfo& image, const ImageGroundTruth* ground_truth,
                             std::span<const PairedAssociation> paired,
                             const RenderStyle& style);

// Canvas with a single arrow through its centre pointing along `radians`.
std::string render_light_svg(int width, int height, double radians,
                             const RenderStyle& style);

// Writes image_<id>.svg per image into output_dir; returns the written paths.
std::vector<std::filesystem::path> render(const RenderSpec& spec);

}  // namespace shadowpair::tools
