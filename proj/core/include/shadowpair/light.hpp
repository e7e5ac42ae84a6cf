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
#include <span>

#include "shadowpair/association.hpp"
#include "shadowpair/geometry.hpp"
#include "shadowpair/mask.hpp"

namespace shadowpair {

// Maps any finite angle into the principal range (-pi, pi].
double wrap_angle(double radians);

/// Direction from a shadow toward its object, in image coordinates
/// (y grows downward, no flip). Always held in (-pi, pi].
class LightAngle {
 public:
  LightAngle() = default;
  explicit LightAngle(double radians) : radians_(wrap_angle(radians)) {}

  double radians() const { return radians_; }
  double degrees() const;

  friend bool operator==(const LightAngle&, const LightAngle&) = default;

 private:
  double radians_ = 0.0;
};

// atan2(object.y - shadow.y, object.x - shadow.x). Throws PreconditionError
// when the two points coincide.
LightAngle ground_truth_angle(const Point& shadow_centroid,
                              const Point& object_centroid);

// Smooth-L1 penalty on d = predicted - truth: 0.5 d^2 if |d| < 1, else |d| - 0.5.
// With `wrap`, d is first brought into (-pi, pi] so equivalent angles cost 0.
double light_loss(double predicted, double truth, bool wrap = true);

// Angle between the shadow and object box centres of one output pair.
LightAngle estimate_pair_direction(const PairedAssociation& pair);

// Weighted circular mean. Throws PreconditionError on empty input, mismatched
// lengths, or a vanishing resultant (e.g. two opposite angles).
LightAngle circular_mean(std::span<const double> angles,
                         std::span<const double> weights);

// Circular mean of per-pair directions weighted by combined_score.
LightAngle estimate_image_direction(std::span<const PairedAssociation> pairs);

/// Cast-shadow quadrilateral of an upright object standing on `footprint`.
struct ShadowQuad {
  std::array<Point, 4> corners;  // consistent winding, positive signed area

  Point centroid() const;
  BBox bounds() const;
  // Pixels whose centres fall inside the quad, clipped to the image.
  Mask rasterize(int width, int height) const;
};

// Extrudes the footprint's far side away from the light: the shadow starts
// on the footprint's supporting line facing direction light + pi and runs
// object_height * length_scale pixels along it, as wide as the footprint
// seen from that direction. Throws PreconditionError for a zero-area
// footprint or non-positive height/scale.
ShadowQuad project_shadow(const BBox& footprint, double object_height,
                          LightAngle light, double length_scale);

}  // namespace shadowpair
