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

#include <compare>

namespace shadowpair {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in continuous pixel coordinates.
///
/// Origin is the top-left image corner, x grows rightward and y downward.
/// A pixel at (row r, col c) covers [c, c+1) x [r, r+1), so the box of a
/// single pixel has area 1.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  // Corners ordered and finite.
  bool valid() const;

  bool contains(const BBox& other) const {
    return x_min <= other.x_min && y_min <= other.y_min &&
           x_max >= other.x_max && y_max >= other.y_max;
  }

  BBox expanded(double margin) const {
    return {x_min - margin, y_min - margin, x_max + margin, y_max + margin};
  }

  // Box covering pixel columns [col_min, col_max] and rows [row_min, row_max].
  static BBox from_pixel_extent(int col_min, int row_min, int col_max,
                                int row_max) {
    return {static_cast<double>(col_min), static_cast<double>(row_min),
            static_cast<double>(col_max) + 1.0,
            static_cast<double>(row_max) + 1.0};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Throws PreconditionError if the box has unordered or non-finite corners.
BBox checked_box(double x_min, double y_min, double x_max, double y_max);

double intersection_area(const BBox& a, const BBox& b);

// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

// Euclidean distance between the closest points of the two rectangles.
// Overlapping or touching boxes are at distance 0.
double shortest_distance(const BBox& a, const BBox& b);

// Smallest box containing both: (min of mins, max of maxes).
BBox merge(const BBox& a, const BBox& b);

Point center(const BBox& a);

}  // namespace shadowpair
