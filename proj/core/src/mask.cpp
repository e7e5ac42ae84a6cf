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

#include "shadowpair/mask.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

void check_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    std::ostringstream msg;
    msg << "mask dimensions must be positive, got " << width << "x" << height;
    throw ValidationError(msg.str());
  }
}

void check_same_size(const Mask& a, const Mask& b, const char* op) {
  if (a.width() != b.width() || a.height() != b.height()) {
    std::ostringstream msg;
    msg << op << ": mask dimension mismatch " << a.width() << "x" << a.height()
        << " vs " << b.width() << "x" << b.height();
    throw DimensionError(msg.str());
  }
}

enum class RunOp { kAndNot = 0, kOr = 1, kAnd = 2 };

bool apply(RunOp op, bool a, bool b) {
  switch (op) {
    case RunOp::kAndNot:
      return a && !b;
    case RunOp::kOr:
      return a || b;
    case RunOp::kAnd:
      return a && b;
  }
  return false;
}

// Steps through a run list one segment at a time.
class RunCursor {
 public:
  explicit RunCursor(std::span<const std::uint32_t> counts) : counts_(counts) {
    remaining_ = counts_.empty() ? 0 : counts_[0];
    skip_empty();
  }

  bool value() const { return value_; }
  std::uint64_t remaining() const { return remaining_; }

  void advance(std::uint64_t n) {
    remaining_ -= n;
    skip_empty();
  }

 private:
  void skip_empty() {
    while (remaining_ == 0 && index_ + 1 < counts_.size()) {
      ++index_;
      remaining_ = counts_[index_];
      value_ = !value_;
    }
  }

  std::span<const std::uint32_t> counts_;
  std::size_t index_ = 0;
  std::uint64_t remaining_ = 0;
  bool value_ = false;
};

// Appends runs of `value` to a canonical count list.
class RunWriter {
 public:
  void push(bool value, std::uint64_t length) {
    if (length == 0) return;
    if (value == current_) {
      pending_ += length;
    } else {
      counts_.push_back(static_cast<std::uint32_t>(pending_));
      current_ = value;
      pending_ = length;
    }
  }

  std::vector<std::uint32_t> finish() && {
    counts_.push_back(static_cast<std::uint32_t>(pending_));
    return std::move(counts_);
  }

 private:
  std::vector<std::uint32_t> counts_;
  bool current_ = false;
  std::uint64_t pending_ = 0;
};

template <typename Visit>
void walk_pair(const Mask& a, const Mask& b, Visit&& visit) {
  const std::uint64_t total =
      static_cast<std::uint64_t>(a.width()) * static_cast<std::uint64_t>(a.height());
  RunCursor ca(a.counts());
  RunCursor cb(b.counts());
  std::uint64_t pos = 0;
  while (pos < total) {
    const std::uint64_t step = std::min(ca.remaining(), cb.remaining());
    visit(ca.value(), cb.value(), step);
    ca.advance(step);
    cb.advance(step);
    pos += step;
  }
}

// Calls visit(col, row_begin, row_end) for every foreground column segment.
template <typename Visit>
void for_each_segment(const Mask& mask, Visit&& visit) {
  const std::uint64_t h = static_cast<std::uint64_t>(mask.height());
  std::uint64_t pos = 0;
  const auto counts = mask.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t begin = pos;
    const std::uint64_t end = pos + counts[i];
    pos = end;
    if (i % 2 == 0 || begin == end) continue;
    for (std::uint64_t col = begin / h; col <= (end - 1) / h; ++col) {
      const std::uint64_t lo = std::max(begin, col * h) - col * h;
      const std::uint64_t hi = std::min(end, (col + 1) * h) - col * h;
      visit(static_cast<int>(col), static_cast<int>(lo), static_cast<int>(hi));
    }
  }
}

Mask combine_runs(const Mask& a, const Mask& b, RunOp op) {
  RunWriter writer;
  walk_pair(a, b, [&](bool va, bool vb, std::uint64_t n) {
    writer.push(apply(op, va, vb), n);
  });
  return Mask::from_counts(a.width(), a.height(), std::move(writer).finish());
}

}  // namespace

Bitmap::Bitmap(int width, int height) : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, 0);
}

void Bitmap::fill_rect(int col_begin, int row_begin, int col_end, int row_end) {
  col_begin = std::max(col_begin, 0);
  row_begin = std::max(row_begin, 0);
  col_end = std::min(col_end, width_);
  row_end = std::min(row_end, height_);
  for (int r = row_begin; r < row_end; ++r) {
    for (int c = col_begin; c < col_end; ++c) set(r, c);
  }
}

Mask Mask::from_counts(int width, int height,
                       std::vector<std::uint32_t> counts) {
  check_dimensions(width, height);
  if (counts.empty()) throw ValidationError("RLE counts are empty");
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0 && counts[i] == 0) {
      std::ostringstream msg;
      msg << "RLE count " << i << " is zero; only the first run may be empty";
      throw ValidationError(msg.str());
    }
    sum += counts[i];
  }
  const std::uint64_t expected = static_cast<std::uint64_t>(width) * height;
  if (sum != expected) {
    std::ostringstream msg;
    msg << "RLE counts sum to " << sum << " but mask is " << width << "x"
        << height << " (" << expected << " pixels)";
    throw ValidationError(msg.str());
  }
  return Mask(width, height, std::move(counts));
}

Mask Mask::empty(int width, int height) {
  check_dimensions(width, height);
  return Mask(width, height,
              {static_cast<std::uint32_t>(static_cast<std::uint64_t>(width) * height)});
}

Mask Mask::rectangle(int width, int height, int col_begin, int row_begin,
                     int col_end, int row_end) {
  Bitmap bitmap(width, height);
  bitmap.fill_rect(col_begin, row_begin, col_end, row_end);
  return encode(bitmap);
}

Mask encode(const Bitmap& bitmap) {
  RunWriter writer;
  for (int c = 0; c < bitmap.width(); ++c) {
    for (int r = 0; r < bitmap.height(); ++r) writer.push(bitmap.at(r, c), 1);
  }
  return Mask::from_counts(bitmap.width(), bitmap.height(),
                           std::move(writer).finish());
}

void decode_into(const Mask& mask, Bitmap& target) {
  if (target.width() != mask.width() || target.height() != mask.height()) {
    std::ostringstream msg;
    msg << "decode: target is " << target.width() << "x" << target.height()
        << " but mask is " << mask.width() << "x" << mask.height();
    throw DimensionError(msg.str());
  }
  for (int r = 0; r < target.height(); ++r) {
    for (int c = 0; c < target.width(); ++c) target.set(r, c, false);
  }
  for_each_segment(mask, [&](int col, int lo, int hi) {
    for (int r = lo; r < hi; ++r) target.set(r, col);
  });
}

Bitmap decode(const Mask& mask) {
  Bitmap bitmap(mask.width(), mask.height());
  decode_into(mask, bitmap);
  return bitmap;
}

Mask subtract(const Mask& a, const Mask& b) {
  check_same_size(a, b, "subtract");
  return combine_runs(a, b, RunOp::kAndNot);
}

Mask mask_union(const Mask& a, const Mask& b) {
  check_same_size(a, b, "union");
  return combine_runs(a, b, RunOp::kOr);
}

Mask intersect(const Mask& a, const Mask& b) {
  check_same_size(a, b, "intersect");
  return combine_runs(a, b, RunOp::kAnd);
}

std::uint64_t area(const Mask& mask) {
  std::uint64_t total = 0;
  const auto counts = mask.counts();
  for (std::size_t i = 1; i < counts.size(); i += 2) total += counts[i];
  return total;
}

std::uint64_t intersection_area(const Mask& a, const Mask& b) {
  check_same_size(a, b, "intersection");
  std::uint64_t total = 0;
  walk_pair(a, b, [&](bool va, bool vb, std::uint64_t n) {
    if (va && vb) total += n;
  });
  return total;
}

double mask_iou(const Mask& a, const Mask& b) {
  const std::uint64_t inter = intersection_area(a, b);
  const std::uint64_t uni = area(a) + area(b) - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

bool is_subset(const Mask& inner, const Mask& outer) {
  check_same_size(inner, outer, "subset");
  bool subset = true;
  walk_pair(inner, outer, [&](bool vi, bool vo, std::uint64_t) {
    if (vi && !vo) subset = false;
  });
  return subset;
}

BBox bbox_of(const Mask& mask) {
  if (mask.is_empty()) throw PreconditionError("bbox_of: mask is empty");
  int col_min = mask.width(), col_max = -1;
  int row_min = mask.height(), row_max = -1;
  for_each_segment(mask, [&](int col, int lo, int hi) {
    col_min = std::min(col_min, col);
    col_max = std::max(col_max, col);
    row_min = std::min(row_min, lo);
    row_max = std::max(row_max, hi - 1);
  });
  return BBox::from_pixel_extent(col_min, row_min, col_max, row_max);
}

Point centroid(const Mask& mask) {
  if (mask.is_empty()) throw PreconditionError("centroid: mask is empty");
  double sx = 0.0, sy = 0.0;
  std::uint64_t n = 0;
  for_each_segment(mask, [&](int col, int lo, int hi) {
    const double len = hi - lo;
    sx += len * (col + 0.5);
    sy += 0.5 * len * static_cast<double>(lo + hi);
    n += static_cast<std::uint64_t>(hi - lo);
  });
  return {sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

}  // namespace shadowpair
