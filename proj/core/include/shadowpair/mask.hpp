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

#include <cstdint>
#include <span>
#include <vector>

#include "shadowpair/geometry.hpp"

namespace shadowpair {

/// Dense binary raster, row-major, one byte per pixel (0 or 1).
class Bitmap {
 public:
  Bitmap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool value = true) {
    pixels_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
  }

  // Sets every pixel of the half-open pixel rectangle, clipped to bounds.
  void fill_rect(int col_begin, int row_begin, int col_end, int row_end);

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Binary instance mask stored as uncompressed run-length counts.
///
/// Runs follow a column-major scan (index = col * height + row). The first
/// run counts zeros and runs alternate 0/1 from there, so a mask whose first
/// pixel is set starts with a zero-length run. Only the first count may be 0,
/// which makes the encoding canonical: two masks are pixel-equal iff their
/// counts are equal.
class Mask {
 public:
  // Validates dimensions and counts; throws ValidationError.
  static Mask from_counts(int width, int height,
                          std::vector<std::uint32_t> counts);
  static Mask empty(int width, int height);
  // Solid rectangle over the half-open pixel range, clipped to bounds.
  static Mask rectangle(int width, int height, int col_begin, int row_begin,
                        int col_end, int row_end);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  bool is_empty() const { return counts_.size() <= 1; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  Mask(int width, int height, std::vector<std::uint32_t> counts)
      : width_(width), height_(height), counts_(std::move(counts)) {}

  int width_;
  int height_;
  std::vector<std::uint32_t> counts_;
};

Mask encode(const Bitmap& bitmap);
Bitmap decode(const Mask& mask);
// Decodes into an existing raster; throws DimensionError if sizes differ.
void decode_into(const Mask& mask, Bitmap& target);

// Pixelwise a AND NOT b.
Mask subtract(const Mask& a, const Mask& b);
// Pixelwise OR.
Mask mask_union(const Mask& a, const Mask& b);
// Pixelwise AND.
Mask intersect(const Mask& a, const Mask& b);

std::uint64_t area(const Mask& mask);
std::uint64_t intersection_area(const Mask& a, const Mask& b);

// |a AND b| / |a OR b|, defined as 0 when both masks are empty.
double mask_iou(const Mask& a, const Mask& b);

// True if every foreground pixel of `inner` is set in `outer`.
bool is_subset(const Mask& inner, const Mask& outer);

// Tight box in the pixel-extent convention. Throws PreconditionError when empty.
BBox bbox_of(const Mask& mask);

// Mean of foreground pixel centres (col + 0.5, row + 0.5).
// Throws PreconditionError when empty.
Point centroid(const Mask& mask);

}  // namespace shadowpair
