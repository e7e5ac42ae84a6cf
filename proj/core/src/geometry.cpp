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

#include "shadowpair/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shadowpair/error.hpp"

namespace shadowpair {

bool BBox::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) &&
         std::isfinite(x_max) && std::isfinite(y_max) && x_min <= x_max &&
         y_min <= y_max;
}

BBox checked_box(double x_min, double y_min, double x_max, double y_max) {
  BBox box{x_min, y_min, x_max, y_max};
  if (!box.valid()) {
    std::ostringstream msg;
    msg << "invalid box [" << x_min << ", " << y_min << ", " << x_max << ", "
        << y_max << "]";
    throw PreconditionError(msg.str());
  }
  return box;
}

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double shortest_distance(const BBox& a, const BBox& b) {
  const double dx =
      std::max(0.0, std::max(a.x_min, b.x_min) - std::min(a.x_max, b.x_max));
  const double dy =
      std::max(0.0, std::max(a.y_min, b.y_min) - std::min(a.y_max, b.y_max));
  return std::hypot(dx, dy);
}

BBox merge(const BBox& a, const BBox& b) {
  return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
          std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

Point center(const BBox& a) {
  return {0.5 * (a.x_min + a.x_max), 0.5 * (a.y_min + a.y_max)};
}

}  // namespace shadowpair
