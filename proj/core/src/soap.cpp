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

#include "shadowpair/soap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

constexpr int kRecallPoints = 101;

double snap(double v) { return std::round(v * 1e6) / 1e6; }

double parse_number(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("invalid threshold \"" + s + "\"");
  }
  if (used != s.size()) throw ParseError("invalid threshold \"" + s + "\"");
  return v;
}

const Mask& require_mask(const std::optional<Mask>& mask, const char* what,
                         DetectionId id) {
  if (!mask) {
    std::ostringstream msg;
    msg << "mask variant requires masks, but " << what << " " << id
        << " has none";
    throw PreconditionError(msg.str());
  }
  return *mask;
}

struct Match {
  std::size_t gt;
  TripleIou iou;
  std::int64_t pair_id;
};

}  // namespace

std::string_view to_string(Variant variant) {
  return variant == Variant::kBox ? "box" : "mask";
}

Variant parse_variant(std::string_view text) {
  if (text == "box") return Variant::kBox;
  if (text == "mask") return Variant::kMask;
  throw ParseError("unknown variant \"" + std::string(text) + "\"");
}

std::vector<double> default_thresholds() {
  std::vector<double> taus;
  for (int k = 0; k < 10; ++k) taus.push_back(snap(0.5 + 0.05 * k));
  return taus;
}

std::vector<double> parse_thresholds(std::string_view text) {
  std::vector<double> taus;
  if (text.find(':') != std::string_view::npos) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos) {
      throw ParseError("threshold range must be start:step:stop");
    }
    const double start = parse_number(text.substr(0, first));
    const double step = parse_number(text.substr(first + 1, second - first - 1));
    const double stop = parse_number(text.substr(second + 1));
    if (!(step > 0.0) || stop < start) {
      throw ParseError("threshold range needs a positive step and stop >= start");
    }
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) taus.push_back(snap(start + step * k));
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      taus.push_back(parse_number(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  return taus;
}

void SoapConfig::validate() const {
  if (thresholds.empty()) throw PreconditionError("no IoU thresholds given");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    if (!(t > 0.0 && t < 1.0)) {
      throw PreconditionError("IoU threshold " + std::to_string(t) + " outside (0, 1)");
    }
    if (i > 0 && !(t > thresholds[i - 1])) {
      throw PreconditionError("IoU thresholds must be strictly increasing");
    }
  }
}

double TripleIou::min() const { return std::min({shadow, object, association}); }

TripleIou triple_iou(const PairedAssociation& pred, const GroundTruthPair& gt,
                     Variant variant) {
  if (variant == Variant::kBox) {
    return {iou(pred.shadow.box, gt.shadow_box()),
            iou(pred.object.box, gt.object_box()),
            iou(pred.association.box, gt.association_box())};
  }
  const Mask& shadow = require_mask(pred.shadow.mask, "shadow", pred.shadow.id);
  const Mask& object = require_mask(pred.object.mask, "object", pred.object.id);
  const Mask combined =
      pred.combined_mask ? *pred.combined_mask : mask_union(shadow, object);
  return {mask_iou(shadow, gt.shadow_mask()), mask_iou(object, gt.object_mask()),
          mask_iou(combined, gt.association_mask())};
}

bool is_true_positive(const PairedAssociation& pred, const GroundTruthPair& gt,
                      double tau, Variant variant) {
  return triple_iou(pred, gt, variant).min() >= tau;
}

const ThresholdResult* SoapReport::at(double tau) const {
  for (const auto& r : per_threshold) {
    if (std::abs(r.tau - tau) < 1e-9) return &r;
  }
  return nullptr;
}

double interpolated_ap(const std::vector<bool>& ranked_hits, std::size_t positives) {
  if (positives == 0) throw PreconditionError("AP undefined without positives");
  const std::size_t n = ranked_hits.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked_hits[i]) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(positives);
  }
  // Envelope: precision at i becomes the best precision at any later rank.
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int k = 0; k < kRecallPoints; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kRecallPoints;
}

SoapReport evaluate(std::span<const PairedAssociation> predictions,
                    const GroundTruthDataset& ground_truth,
                    const SoapConfig& config) {
  config.validate();
  const std::size_t positives = ground_truth.pair_count();
  if (positives == 0) throw PreconditionError("ground truth has no pairs");

  // Global index over ground-truth pairs.
  std::vector<const GroundTruthPair*> gts;
  for (const auto& [id, image] : ground_truth.images) {
    for (const auto& p : image.pairs) gts.push_back(&p);
  }

  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = predictions[a];
    const auto& pb = predictions[b];
    if (pa.combined_score != pb.combined_score) return pa.combined_score > pb.combined_score;
    return std::tie(pa.image_id, pa.association.id, pa.shadow.id, pa.object.id) <
           std::tie(pb.image_id, pb.association.id, pb.shadow.id, pb.object.id);
  });

  // IoUs do not depend on tau; compute each (prediction, same-image gt) once.
  std::vector<std::vector<Match>> options(predictions.size());
  std::size_t gt_offset = 0;
  std::map<ImageId, std::size_t> first_gt;
  for (const auto& [id, image] : ground_truth.images) {
    first_gt[id] = gt_offset;
    gt_offset += image.pairs.size();
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const auto& pred = predictions[i];
    const ImageGroundTruth* image = ground_truth.find(pred.image_id);
    if (image == nullptr) {
      std::ostringstream msg;
      msg << "prediction refers to image " << pred.image_id
          << " which is not in the ground truth";
      throw ValidationError(msg.str());
    }
    const std::size_t base = first_gt[pred.image_id];
    for (std::size_t g = 0; g < image->pairs.size(); ++g) {
      const auto& gt = image->pairs[g];
      options[i].push_back({base + g, triple_iou(pred, gt, config.variant), gt.pair_id()});
    }
  }

  SoapReport report;
  report.variant = config.variant;
  for (const double tau : config.thresholds) {
    std::vector<bool> matched(gts.size(), false);
    std::vector<bool> hits;
    hits.reserve(order.size());
    for (const std::size_t i : order) {
      const Match* best = nullptr;
      for (const auto& m : options[i]) {
        if (matched[m.gt] || m.iou.min() < tau) continue;
        if (best == nullptr || m.iou.min() > best->iou.min() ||
            (m.iou.min() == best->iou.min() &&
             (m.iou.association > best->iou.association ||
              (m.iou.association == best->iou.association && m.pair_id < best->pair_id)))) {
          best = &m;
        }
      }
      if (best != nullptr) matched[best->gt] = true;
      hits.push_back(best != nullptr);
    }
    ThresholdResult r;
    r.tau = tau;
    r.true_positives = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), true));
    r.false_positives = hits.size() - r.true_positives;
    r.false_negatives = positives - r.true_positives;
    r.ap = interpolated_ap(hits, positives);
    report.per_threshold.push_back(r);
  }

  double sum = 0.0;
  for (const auto& r : report.per_threshold) sum += r.ap;
  report.soap = sum / static_cast<double>(report.per_threshold.size());
  if (const auto* r = report.at(0.5)) report.soap50 = r->ap;
  if (const auto* r = report.at(0.75)) report.soap75 = r->ap;
  return report;
}

std::string format_table(
    std::span<const std::pair<std::string, SoapReport>> rows) {
  const std::string prefix =
      rows.empty() ? std::string("box") : std::string(to_string(rows.front().second.variant));
  const std::vector<std::string> header = {"Method", prefix + " SOAP_50",
                                           prefix + " SOAP_75", prefix + " SOAP"};
  std::vector<std::vector<std::string>> cells = {header};
  auto pct = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
    return std::string(buf);
  };
  for (const auto& [name, report] : rows) {
    cells.push_back({name, pct(report.soap50), pct(report.soap75), pct(report.soap)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(widths[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(widths[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace shadowpair
