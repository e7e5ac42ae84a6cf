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

#include "shadowpair/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shadowpair/error.hpp"

namespace shadowpair {

namespace {

using nlohmann::json;

json parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top-level JSON value must be an object");
  if (doc.contains("format_version") && doc["format_version"] != kFormatVersion) {
    throw ParseError("unsupported format_version " + doc["format_version"].dump());
  }
  return doc;
}

// Wraps nlohmann type errors so callers only ever see ParseError.
template <typename T>
T field(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field \"") + key + "\" has the wrong type");
  }
}

const json& array_field(const json& obj, const char* key) {
  static const json kEmpty = json::array();
  if (!obj.contains(key)) return kEmpty;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array");
  return v;
}

json box_to_json(const BBox& b) { return json::array({b.x_min, b.y_min, b.x_max, b.y_max}); }

BBox box_from_json(const json& obj) {
  const auto v = field<std::vector<double>>(obj, "box");
  if (v.size() != 4) throw ParseError("box must have four numbers");
  BBox b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) throw ValidationError("box corners are not ordered");
  return b;
}

json counts_to_json(const Mask& m) {
  return json(std::vector<std::uint32_t>(m.counts().begin(), m.counts().end()));
}

json sized_rle_to_json(const Mask& m) {
  return json{{"size", {m.height(), m.width()}}, {"counts", counts_to_json(m)}};
}

Mask sized_rle_from_json(const json& obj) {
  if (!obj.is_object()) throw ParseError("rle must be an object with size and counts");
  const auto size = field<std::vector<int>>(obj, "size");
  if (size.size() != 2) throw ParseError("rle size must be [height, width]");
  return Mask::from_counts(size[1], size[0], field<std::vector<std::uint32_t>>(obj, "counts"));
}

json instance_to_json(const InstanceDetection& d, bool with_kind) {
  json j{{"id", d.id}, {"image_id", d.image_id}, {"score", d.score}, {"box", box_to_json(d.box)}};
  if (with_kind) j["kind"] = std::string(to_string(d.kind));
  if (d.mask) j["rle"] = sized_rle_to_json(*d.mask);
  return j;
}

InstanceDetection instance_from_json(const json& obj, DetectionId default_id,
                                     std::optional<InstanceKind> kind) {
  if (!obj.is_object()) throw ParseError("instance entry must be an object");
  InstanceDetection d;
  d.id = obj.contains("id") ? field<DetectionId>(obj, "id") : default_id;
  d.image_id = field<ImageId>(obj, "image_id");
  d.kind = kind ? *kind : parse_instance_kind(field<std::string>(obj, "kind"));
  d.score = field<double>(obj, "score");
  d.box = box_from_json(obj);
  if (obj.contains("rle") && !obj.at("rle").is_null()) d.mask = sized_rle_from_json(obj.at("rle"));
  validate(d);
  return d;
}

json association_to_json(const AssociationDetection& d) {
  return json{{"id", d.id},           {"image_id", d.image_id},
              {"score", d.score},     {"box", box_to_json(d.box)},
              {"light_angle", d.light_angle}};
}

AssociationDetection association_from_json(const json& obj, DetectionId default_id) {
  if (!obj.is_object()) throw ParseError("association entry must be an object");
  AssociationDetection d;
  d.id = obj.contains("id") ? field<DetectionId>(obj, "id") : default_id;
  d.image_id = field<ImageId>(obj, "image_id");
  d.score = field<double>(obj, "score");
  d.box = box_from_json(obj);
  d.light_angle = field<double>(obj, "light_angle");
  validate(d);
  return d;
}

std::string with_context(const std::string& where, const std::exception& e) {
  return where + ": " + e.what();
}

template <typename Fn>
auto load_with_path(const std::filesystem::path& path, Fn&& parse) {
  const std::string text = read_text_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(with_context(path.string(), e));
  } catch (const ValidationError& e) {
    throw ValidationError(with_context(path.string(), e));
  } catch (const Error& e) {
    throw Error(with_context(path.string(), e));
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

GroundTruthDataset ground_truth_from_json(std::string_view text) {
  const json doc = parse_document(text);
  GroundTruthDataset dataset;
  for (const auto& img : array_field(doc, "images")) {
    ImageInfo info{field<ImageId>(img, "id"), field<int>(img, "width"),
                   field<int>(img, "height")};
    if (info.width <= 0 || info.height <= 0) {
      throw ValidationError("image " + std::to_string(info.id) + " has non-positive size");
    }
    if (!dataset.images.emplace(info.id, ImageGroundTruth{info, {}}).second) {
      throw ValidationError("duplicate image id " + std::to_string(info.id));
    }
  }
  std::set<std::pair<ImageId, std::int64_t>> seen;
  for (const auto& p : array_field(doc, "pairs")) {
    const auto image_id = field<ImageId>(p, "image_id");
    const auto pair_id = field<std::int64_t>(p, "pair_id");
    const std::string label =
        "image " + std::to_string(image_id) + " pair " + std::to_string(pair_id);
    auto it = dataset.images.find(image_id);
    if (it == dataset.images.end()) throw ValidationError(label + ": unknown image id");
    if (!seen.emplace(image_id, pair_id).second) {
      throw ValidationError(label + ": duplicate pair id");
    }
    const ImageInfo& info = it->second.info;
    auto make_mask = [&](const char* key) {
      try {
        return Mask::from_counts(info.width, info.height,
                                 field<std::vector<std::uint32_t>>(p, key));
      } catch (const ValidationError& e) {
        throw ValidationError(label + " " + key + ": " + e.what());
      }
    };
    it->second.pairs.push_back(GroundTruthPair::make(
        image_id, pair_id, make_mask("shadow_rle"), make_mask("association_rle")));
  }
  return dataset;
}

std::string ground_truth_to_json(const GroundTruthDataset& dataset) {
  json images = json::array();
  json pairs = json::array();
  for (const auto& [id, image] : dataset.images) {
    images.push_back({{"id", id}, {"width", image.info.width}, {"height", image.info.height}});
    for (const auto& p : image.pairs) {
      pairs.push_back({{"image_id", p.image_id()},
                       {"pair_id", p.pair_id()},
                       {"shadow_rle", counts_to_json(p.shadow_mask())},
                       {"association_rle", counts_to_json(p.association_mask())}});
    }
  }
  json doc{{"format_version", kFormatVersion}, {"images", images}, {"pairs", pairs}};
  return doc.dump() + "\n";
}

GroundTruthDataset load_ground_truth(const std::filesystem::path& path) {
  return load_with_path(path, [](const std::string& t) { return ground_truth_from_json(t); });
}

void save_ground_truth(const GroundTruthDataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, ground_truth_to_json(dataset));
}

PredictionSet predictions_from_json(std::string_view text) {
  const json doc = parse_document(text);
  PredictionSet set;
  std::set<DetectionId> instance_ids, association_ids;
  DetectionId index = 0;
  for (const auto& obj : array_field(doc, "instances")) {
    auto d = instance_from_json(obj, index++, std::nullopt);
    if (!instance_ids.insert(d.id).second) {
      throw ValidationError("duplicate instance id " + std::to_string(d.id));
    }
    set.images[d.image_id].instances.push_back(std::move(d));
  }
  index = 0;
  for (const auto& obj : array_field(doc, "associations")) {
    auto d = association_from_json(obj, index++);
    if (!association_ids.insert(d.id).second) {
      throw ValidationError("duplicate association id " + std::to_string(d.id));
    }
    set.images[d.image_id].associations.push_back(std::move(d));
  }
  return set;
}

std::string predictions_to_json(const PredictionSet& predictions) {
  json instances = json::array();
  json associations = json::array();
  for (const auto& [id, image] : predictions.images) {
    for (const auto& d : image.instances) instances.push_back(instance_to_json(d, true));
    for (const auto& d : image.associations) associations.push_back(association_to_json(d));
  }
  json doc{{"format_version", kFormatVersion},
           {"instances", instances},
           {"associations", associations}};
  return doc.dump() + "\n";
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  return load_with_path(path, [](const std::string& t) { return predictions_from_json(t); });
}

void save_predictions(const PredictionSet& predictions, const std::filesystem::path& path) {
  write_file_atomic(path, predictions_to_json(predictions));
}

std::vector<PairedAssociation> paired_from_json(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.contains("paired")) throw ParseError("missing field \"paired\"");
  std::vector<PairedAssociation> out;
  for (const auto& e : array_field(doc, "paired")) {
    PairedAssociation p;
    p.image_id = field<ImageId>(e, "image_id");
    if (!e.contains("shadow") || !e.contains("object")) {
      throw ParseError("paired entry needs shadow and object");
    }
    json shadow = e.at("shadow");
    json object = e.at("object");
    shadow["image_id"] = p.image_id;
    object["image_id"] = p.image_id;
    p.shadow = instance_from_json(shadow, 0, InstanceKind::kShadow);
    p.object = instance_from_json(object, 0, InstanceKind::kObject);
    p.association.id = e.contains("association_id") ? field<DetectionId>(e, "association_id") : 0;
    p.association.image_id = p.image_id;
    p.association.score = e.contains("association_score")
                              ? field<double>(e, "association_score")
                              : field<double>(e, "combined_score");
    const auto box = field<std::vector<double>>(e, "association_box");
    if (box.size() != 4) throw ParseError("association_box must have four numbers");
    p.association.box = {box[0], box[1], box[2], box[3]};
    p.association.light_angle = field<double>(e, "light_angle");
    validate(p.association);
    p.light_angle = p.association.light_angle;
    p.combined_score = field<double>(e, "combined_score");
    p.match_iou = field<double>(e, "match_iou");
    if (p.shadow.mask && p.object.mask) {
      p.combined_mask = mask_union(*p.shadow.mask, *p.object.mask);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string paired_to_json(std::span<const PairedAssociation> paired) {
  json entries = json::array();
  for (const auto& p : paired) {
    json shadow = instance_to_json(p.shadow, false);
    json object = instance_to_json(p.object, false);
    shadow.erase("image_id");
    object.erase("image_id");
    entries.push_back({{"image_id", p.image_id},
                       {"shadow", shadow},
                       {"object", object},
                       {"association_box", box_to_json(p.association.box)},
                       {"association_id", p.association.id},
                       {"association_score", p.association.score},
                       {"combined_score", p.combined_score},
                       {"light_angle", p.light_angle},
                       {"match_iou", p.match_iou}});
  }
  json doc{{"format_version", kFormatVersion}, {"paired", entries}};
  return doc.dump() + "\n";
}

std::vector<PairedAssociation> load_paired(const std::filesystem::path& path) {
  return load_with_path(path, [](const std::string& t) { return paired_from_json(t); });
}

void save_paired(std::span<const PairedAssociation> paired, const std::filesystem::path& path) {
  write_file_atomic(path, paired_to_json(paired));
}

bool is_paired_document(std::string_view text) {
  const json doc = parse_document(text);
  return doc.contains("paired") && doc.at("paired").is_array();
}

std::string diagnostics_to_json(const MatchDiagnostics& d) {
  json doc{{"format_version", kFormatVersion},
           {"candidate_count", d.candidate_count},
           {"unmatched_shadows", d.unmatched_shadows},
           {"unmatched_objects", d.unmatched_objects},
           {"unmatched_associations", d.unmatched_associations}};
  return doc.dump(2) + "\n";
}

std::string report_to_json(const SoapReport& report) {
  json per = json::array();
  for (const auto& r : report.per_threshold) {
    per.push_back({{"tau", r.tau},
                   {"ap", r.ap},
                   {"true_positives", r.true_positives},
                   {"false_positives", r.false_positives},
                   {"false_negatives", r.false_negatives}});
  }
  json doc{{"format_version", kFormatVersion},
           {"variant", std::string(to_string(report.variant))},
           {"per_threshold", per},
           {"soap", report.soap},
           {"soap50", report.soap50 ? json(*report.soap50) : json(nullptr)},
           {"soap75", report.soap75 ? json(*report.soap75) : json(nullptr)}};
  return doc.dump(2) + "\n";
}

SoapReport report_from_json(std::string_view text) {
  const json doc = parse_document(text);
  SoapReport report;
  report.variant = parse_variant(field<std::string>(doc, "variant"));
  for (const auto& r : array_field(doc, "per_threshold")) {
    report.per_threshold.push_back({field<double>(r, "tau"), field<double>(r, "ap"),
                                    field<std::size_t>(r, "true_positives"),
                                    field<std::size_t>(r, "false_positives"),
                                    field<std::size_t>(r, "false_negatives")});
  }
  report.soap = field<double>(doc, "soap");
  if (doc.contains("soap50") && !doc["soap50"].is_null()) report.soap50 = field<double>(doc, "soap50");
  if (doc.contains("soap75") && !doc["soap75"].is_null()) report.soap75 = field<double>(doc, "soap75");
  return report;
}

std::string stats_to_json(const DatasetStats& s) {
  json histogram = json::object();
  for (const auto& [pairs, images] : s.pairs_per_image) histogram[std::to_string(pairs)] = images;
  auto bins = [](const std::array<std::size_t, DatasetStats::kAreaBins>& h) {
    json out = json::array();
    for (std::size_t i = 0; i < h.size(); ++i) {
      const bool overflow = i + 1 == h.size();
      out.push_back({{"lower", static_cast<double>(i) / 20.0},
                     {"upper", overflow ? json(nullptr) : json(static_cast<double>(i + 1) / 20.0)},
                     {"count", h[i]}});
    }
    return out;
  };
  json doc{{"format_version", kFormatVersion},
           {"image_count", s.image_count},
           {"pair_count", s.pair_count},
           {"mean_pairs_per_image", s.mean_pairs_per_image},
           {"pairs_per_image", histogram},
           {"fraction_images_with_9_plus", s.fraction_images_with_9_plus},
           {"shadow_area_fraction", bins(s.shadow_area_histogram)},
           {"object_area_fraction", bins(s.object_area_histogram)}};
  return doc.dump(2) + "\n";
}

}  // namespace shadowpair
