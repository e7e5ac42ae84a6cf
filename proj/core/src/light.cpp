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

#include "shadowpair/light.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double wrap_angle(double radians) {
  double r = std::remainder(radians, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

double LightAngle::degrees() const { return radians_ * 180.0 / kPi; }

LightAngle ground_truth_angle(const Point& shadow_centroid,
                              const Point& object_centroid) {
  if (shadow_centroid == object_centroid) {
    std::ostringstream msg;
    msg << "light angle undefined: shadow and object centroids coincide at ("
        << shadow_centroid.x << ", " << shadow_centroid.y << ")";
    throw PreconditionError(msg.str());
  }
  return LightAngle(std::atan2(object_centroid.y - shadow_centroid.y,
                               object_centroid.x - shadow_centroid.x));
}

double light_loss(double predicted, double truth, bool wrap) {
  double d = predicted - truth;
  if (wrap) d = wrap_angle(d);
  const double ad = std::abs(d);
  return ad < 1.0 ? 0.5 * d * d : ad - 0.5;
}

LightAngle estimate_pair_direction(const PairedAssociation& pair) {
  return ground_truth_angle(center(pair.shadow.box), center(pair.object.box));
}

LightAngle circular_mean(std::span<const double> angles,
                         std::span<const double> weights) {
  if (angles.empty()) throw PreconditionError("circular mean of no angles");
  if (angles.size() != weights.size()) {
    throw PreconditionError("circular mean: angle and weight counts differ");
  }
  double sx = 0.0, sy = 0.0, total = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    sx += weights[i] * std::cos(angles[i]);
    sy += weights[i] * std::sin(angles[i]);
    total += std::abs(weights[i]);
  }
  if (total == 0.0 || std::hypot(sx, sy) <= 1e-12 * total) {
    throw PreconditionError("circular mean undefined: resultant vector is zero");
  }
  return LightAngle(std::atan2(sy, sx));
}

LightAngle estimate_image_direction(std::span<const PairedAssociation> pairs) {
  if (pairs.empty()) throw PreconditionError("no pairs to estimate light from");
  std::vector<double> angles, weights;
  angles.reserve(pairs.size());
  weights.reserve(pairs.size());
  for (const auto& p : pairs) {
    angles.push_back(estimate_pair_direction(p).radians());
    weights.push_back(p.combined_score);
  }
  return circular_mean(angles, weights);
}

Point ShadowQuad::centroid() const {
  // Polygon area centroid; the quad is a rectangle so this is its centre.
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point& p = corners[i];
    const Point& q = corners[(i + 1) % corners.size()];
    const double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

BBox ShadowQuad::bounds() const {
  BBox b{corners[0].x, corners[0].y, corners[0].x, corners[0].y};
  for (const auto& p : corners) b = merge(b, BBox{p.x, p.y, p.x, p.y});
  return b;
}

Mask ShadowQuad::rasterize(int width, int height) const {
  Bitmap bitmap(width, height);
  const BBox b = bounds();
  const int c0 = std::max(0, static_cast<int>(std::floor(b.x_min)));
  const int r0 = std::max(0, static_cast<int>(std::floor(b.y_min)));
  const int c1 = std::min(width, static_cast<int>(std::ceil(b.x_max)) + 1);
  const int r1 = std::min(height, static_cast<int>(std::ceil(b.y_max)) + 1);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      const Point p{c + 0.5, r + 0.5};
      bool inside = true;
      for (std::size_t i = 0; i < corners.size() && inside; ++i) {
        inside = cross(corners[i], corners[(i + 1) % corners.size()], p) >= 0.0;
      }
      if (inside) bitmap.set(r, c);
    }
  }
  return encode(bitmap);
}

ShadowQuad project_shadow(const BBox& footprint, double object_height,
                          LightAngle light, double length_scale) {
  if (!footprint.valid() || footprint.width() <= 0.0 || footprint.height() <= 0.0) {
    throw PreconditionError("project_shadow: degenerate footprint");
  }
  if (!(object_height > 0.0) || !(length_scale > 0.0)) {
    throw PreconditionError("project_shadow: height and length scale must be positive");
  }
  // Unit vector from the object toward its shadow, and its left normal.
  const double ux = -std::cos(light.radians());
  const double uy = -std::sin(light.radians());
  const double vx = -uy;
  const double vy = ux;

  const Point c = center(footprint);
  const double hw = 0.5 * footprint.width();
  const double hh = 0.5 * footprint.height();
  const double reach = hw * std::abs(ux) + hh * std::abs(uy);
  const double half_width = hw * std::abs(vx) + hh * std::abs(vy);
  const double length = object_height * length_scale;

  const Point base{c.x + reach * ux, c.y + reach * uy};
  const Point tip{base.x + length * ux, base.y + length * uy};
  ShadowQuad quad{{Point{base.x - half_width * vx, base.y - half_width * vy},
                   Point{base.x + half_width * vx, base.y + half_width * vy},
                   Point{tip.x + half_width * vx, tip.y + half_width * vy},
                   Point{tip.x - half_width * vx, tip.y - half_width * vy}}};
  // Keep a consistent (positive signed area) winding for rasterize().
  if (cross(quad.corners[0], quad.corners[1], quad.corners[2]) < 0.0) {
    std::reverse(quad.corners.begin(), quad.corners.end());
  }
  return quad;
}

}  // namespace shadowpair
