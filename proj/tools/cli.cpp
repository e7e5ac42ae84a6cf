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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "render.hpp"
#include "shadowpair/association.hpp"
#include "shadowpair/error.hpp"
#include "shadowpair/io.hpp"
#include "shadowpair/light.hpp"
#include "shadowpair/soap.hpp"
#include "shadowpair/synth.hpp"

namespace shadowpair::tools {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct MatchOptions {
  double iou_floor = 0.0;
  double threshold_scale = 1.0;
  std::string score_mode = "geometric_mean";

  MatchConfig config() const {
    return {threshold_scale, iou_floor, parse_score_mode(score_mode)};
  }
};

void add_match_options(CLI::App* cmd, MatchOptions& opts) {
  cmd->add_option("--iou-floor", opts.iou_floor,
                  "Minimum (exclusive) merged-box/association IoU")
      ->capture_default_str();
  cmd->add_option("--threshold-scale", opts.threshold_scale,
                  "Candidate distance threshold as a multiple of shadow box height")
      ->capture_default_str();
  cmd->add_option("--score-mode", opts.score_mode, "Pair score")
      ->check(CLI::IsMember({"geometric_mean", "min", "association_score"}))
      ->capture_default_str();
}

// Either an already-paired file or raw detections run through the matcher.
std::vector<PairedAssociation> load_any_predictions(const fs::path& path,
                                                    const MatchConfig& config) {
  const std::string text = read_text_file(path);
  bool paired = false;
  try {
    paired = is_paired_document(text);
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (paired) return load_paired(path);
  return match_predictions(load_predictions(path), config).paired;
}

void emit(std::ostream& out, const std::string& content, const std::string& path) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file_atomic(path, content);
  }
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string gt;
  std::string pred;
  std::string out;
  std::string variant = "box";
  std::string taus = "0.5:0.05:0.95";
  std::string method = "shadowpair";
  MatchOptions match;
};

int run_eval(const EvalOptions& o, std::ostream& out) {
  const GroundTruthDataset gt = load_ground_truth(o.gt);
  const auto preds = load_any_predictions(o.pred, o.match.config());
  SoapConfig config;
  config.variant = parse_variant(o.variant);
  config.thresholds = parse_thresholds(o.taus);
  const SoapReport report = evaluate(preds, gt, config);
  if (!o.out.empty()) write_file_atomic(o.out, report_to_json(report));
  const std::vector<std::pair<std::string, SoapReport>> rows = {{o.method, report}};
  out << format_table(rows);
  return 0;
}

// ---------------------------------------------------------------- match

struct MatchCommand {
  std::string pred;
  std::string out;
  std::string diag;
  MatchOptions match;
};

int run_match(const MatchCommand& o, std::ostream& out) {
  const PredictionSet predictions = load_predictions(o.pred);
  const MatchResult result = match_predictions(predictions, o.match.config());
  save_paired(result.paired, o.out);
  std::string diag = o.diag;
  if (diag.empty()) {
    fs::path p(o.out);
    p.replace_extension(".diagnostics.json");
    diag = p.string();
  }
  write_file_atomic(diag, diagnostics_to_json(result.diagnostics));
  out << "paired " << result.paired.size() << " associations ("
      << result.diagnostics.unmatched_shadows << " shadows, "
      << result.diagnostics.unmatched_objects << " objects, "
      << result.diagnostics.unmatched_associations << " associations unmatched)\n";
  return 0;
}

// ---------------------------------------------------------------- stats

int run_stats(const std::string& gt_path, const std::string& out_path, std::ostream& out) {
  const auto stats = compute_stats(load_ground_truth(gt_path));
  emit(out, stats_to_json(stats), out_path);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string out = ".";
  std::string spec_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> images;
  std::optional<int> width;
  std::optional<int> height;
  std::optional<int> min_pairs;
  std::optional<int> max_pairs;
  std::optional<double> light_angle;
  std::optional<std::string> shapes;
  bool zero_noise = false;
  std::optional<double> jitter;
  std::optional<int> mask_radius;
  std::optional<double> fp_rate;
  std::optional<double> fn_rate;
  std::optional<double> angle_noise;
};

int run_synth(const SynthOptions& o, std::ostream& out) {
  SceneSpec spec;
  if (!o.spec_file.empty()) spec = scene_spec_from_json(read_text_file(o.spec_file));
  if (o.seed) spec.seed = *o.seed;
  if (o.images) spec.image_count = *o.images;
  if (o.width) spec.width = *o.width;
  if (o.height) spec.height = *o.height;
  if (o.min_pairs) spec.min_pairs = *o.min_pairs;
  if (o.max_pairs) spec.max_pairs = *o.max_pairs;
  if (o.light_angle) spec.light_angle = *o.light_angle;
  if (o.shapes) {
    spec.shapes.clear();
    std::stringstream ss(*o.shapes);
    std::string item;
    while (std::getline(ss, item, ',')) spec.shapes.push_back(parse_object_shape(item));
  }
  if (o.zero_noise) spec.noise = NoiseModel::zero();
  if (o.jitter) spec.noise.box_jitter = *o.jitter;
  if (o.mask_radius) spec.noise.mask_radius = *o.mask_radius;
  if (o.fp_rate) spec.noise.fp_rate = *o.fp_rate;
  if (o.fn_rate) spec.noise.fn_rate = *o.fn_rate;
  if (o.angle_noise) spec.noise.angle_noise = *o.angle_noise;

  const GeneratedScene scene = generate(spec);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  save_ground_truth(scene.ground_truth, dir / "gt.json");
  save_predictions(scene.perfect, dir / "perfect.json");
  save_predictions(scene.noisy, dir / "noisy.json");
  write_file_atomic(dir / "manifest.json", manifest_to_json(scene.manifest, spec));
  out << "generated " << scene.manifest.image_count << " images, "
      << scene.manifest.pair_count << " pairs in " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- light

struct LightOptions {
  std::string pred;
  std::string gt;
  std::string out;
  std::string svg_dir;
  bool wrap = true;
  MatchOptions match;
};

json angle_json(double radians) {
  return {{"radians", radians}, {"degrees", radians * 180.0 / std::numbers::pi}};
}

int run_light(const LightOptions& o, std::ostream& out) {
  const auto preds = load_any_predictions(o.pred, o.match.config());
  std::optional<GroundTruthDataset> gt;
  if (!o.gt.empty()) gt = load_ground_truth(o.gt);

  std::map<ImageId, std::vector<PairedAssociation>> by_image;
  for (const auto& p : preds) by_image[p.image_id].push_back(p);

  json images = json::array();
  for (const auto& [id, pairs] : by_image) {
    json entry{{"image_id", id}, {"pair_count", pairs.size()}};
    std::optional<double> estimated;
    try {
      estimated = estimate_image_direction(pairs).radians();
      entry["estimated"] = angle_json(*estimated);
    } catch (const PreconditionError& e) {
      entry["estimated"] = nullptr;
      entry["warning"] = e.what();
    }
    std::vector<double> head_angles, weights;
    for (const auto& p : pairs) {
      head_angles.push_back(p.light_angle);
      weights.push_back(p.combined_score);
    }
    std::optional<double> head;
    try {
      head = circular_mean(head_angles, weights).radians();
      entry["predicted_head"] = angle_json(*head);
    } catch (const PreconditionError&) {
      entry["predicted_head"] = nullptr;
    }

    if (gt) {
      const ImageGroundTruth* image = gt->find(id);
      if (image == nullptr) {
        throw ValidationError("image " + std::to_string(id) + " is not in the ground truth");
      }
      std::vector<double> truth_angles;
      for (const auto& pair : image->pairs) {
        truth_angles.push_back(
            ground_truth_angle(centroid(pair.shadow_mask()), centroid(pair.object_mask())).radians());
      }
      if (!truth_angles.empty()) {
        const std::vector<double> ones(truth_angles.size(), 1.0);
        const double truth = circular_mean(truth_angles, ones).radians();
        entry["ground_truth"] = angle_json(truth);
        if (estimated) entry["loss"] = light_loss(*estimated, truth, o.wrap);
        if (head) entry["head_loss"] = light_loss(*head, truth, o.wrap);
      }
    }
    if (!o.svg_dir.empty() && estimated) {
      fs::create_directories(o.svg_dir);
      int w = 256, h = 256;
      if (gt) {
        if (const auto* image = gt->find(id)) {
          w = image->info.width;
          h = image->info.height;
        }
      }
      write_file_atomic(fs::path(o.svg_dir) / ("light_" + std::to_string(id) + ".svg"),
                        render_light_svg(w, h, *estimated, RenderStyle{}));
    }
    images.push_back(entry);
  }
  json doc{{"format_version", kFormatVersion},
           {"wrap_angles", o.wrap},
           {"images", images}};
  emit(out, doc.dump(2) + "\n", o.out);
  return 0;
}

// ---------------------------------------------------------------- render

int run_render(const std::string& gt, const std::string& pred, const std::string& out_dir,
               bool no_masks, std::ostream& out) {
  RenderSpec spec;
  if (!gt.empty()) spec.ground_truth = gt;
  if (!pred.empty()) spec.paired = pred;
  spec.output_dir = out_dir;
  spec.style.mask_outlines = !no_masks;
  const auto written = render(spec);
  out << "wrote " << written.size() << " SVG files to " << out_dir << "\n";
  return 0;
}

std::string error_json(const std::string& command, const std::string& type,
                       const std::string& message) {
  json doc{{"error", {{"command", command}, {"type", type}, {"message", message}}}};
  return doc.dump();
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const PlacementError*>(&e)) return "placement";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const Error*>(&e)) return "io";
  return "internal";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instance shadow detection toolkit: pair-and-match, SOAP evaluation, "
               "light direction and synthetic scenes"};
  app.name("shadowpair");
  app.require_subcommand(1);

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "Score predictions with SOAP");
  eval->add_option("--gt", eval_opts.gt, "Ground-truth JSON")->required();
  eval->add_option("--pred", eval_opts.pred, "Prediction or paired JSON")->required();
  eval->add_option("--out", eval_opts.out, "Write the JSON report here");
  eval->add_option("--variant", eval_opts.variant, "IoU on boxes or masks")
      ->check(CLI::IsMember({"box", "mask"}))
      ->capture_default_str();
  eval->add_option("--taus", eval_opts.taus, "start:step:stop or comma list")
      ->capture_default_str();
  eval->add_option("--method", eval_opts.method, "Row label in the table")
      ->capture_default_str();
  add_match_options(eval, eval_opts.match);

  MatchCommand match_opts;
  auto* match = app.add_subcommand("match", "Pair raw detections into shadow-object associations");
  match->add_option("--pred", match_opts.pred, "Prediction JSON")->required();
  match->add_option("--out", match_opts.out, "Paired-association JSON to write")->required();
  match->add_option("--diag", match_opts.diag,
                    "Diagnostics JSON (default: <out>.diagnostics.json)");
  add_match_options(match, match_opts.match);

  std::string stats_gt, stats_out;
  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  stats->add_option("--gt", stats_gt, "Ground-truth JSON")->required();
  stats->add_option("--out", stats_out, "Write JSON here instead of stdout");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--out", synth_opts.out, "Output directory")->capture_default_str();
  synth->add_option("--spec", synth_opts.spec_file, "Scene spec JSON; flags override it");
  synth->add_option("--seed", synth_opts.seed, "Random seed");
  synth->add_option("--images", synth_opts.images, "Number of images");
  synth->add_option("--width", synth_opts.width, "Image width");
  synth->add_option("--height", synth_opts.height, "Image height");
  synth->add_option("--min-pairs", synth_opts.min_pairs, "Fewest pairs per image");
  synth->add_option("--max-pairs", synth_opts.max_pairs, "Most pairs per image");
  synth->add_option("--light-angle", synth_opts.light_angle, "Fixed light angle (radians)");
  synth->add_option("--shapes", synth_opts.shapes, "Comma list of post,ellipse,box");
  synth->add_flag("--zero-noise", synth_opts.zero_noise, "Noisy file equals the perfect file");
  synth->add_option("--jitter", synth_opts.jitter, "Box corner noise (pixels)");
  synth->add_option("--mask-radius", synth_opts.mask_radius, "Max erosion/dilation radius");
  synth->add_option("--fp-rate", synth_opts.fp_rate, "Spurious triples per true pair");
  synth->add_option("--fn-rate", synth_opts.fn_rate, "Chance a true detection is dropped");
  synth->add_option("--angle-noise", synth_opts.angle_noise, "Light angle noise (radians)");

  LightOptions light_opts;
  auto* light = app.add_subcommand("light", "Estimate light direction per image");
  light->add_option("--pred", light_opts.pred, "Paired or prediction JSON")->required();
  light->add_option("--gt", light_opts.gt, "Ground truth for angle error");
  light->add_option("--out", light_opts.out, "Write JSON here instead of stdout");
  light->add_option("--svg", light_opts.svg_dir, "Directory for arrow overlays");
  light->add_option("--wrap-angles", light_opts.wrap,
                    "Wrap angle differences into (-pi, pi] before the loss")
      ->capture_default_str();
  add_match_options(light, light_opts.match);

  std::string render_gt, render_pred, render_out;
  bool render_no_masks = false;
  auto* render_cmd = app.add_subcommand("render", "Draw SVG overlays");
  render_cmd->add_option("--gt", render_gt, "Ground-truth JSON");
  render_cmd->add_option("--pred", render_pred, "Paired-association JSON");
  render_cmd->add_option("--out", render_out, "Output directory")->required();
  render_cmd->add_flag("--no-masks", render_no_masks, "Skip mask outlines");

  std::string command = args.empty() ? "" : args.front();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json(command, "usage", e.what()) << "\n";
    return 2;
  }

  try {
    if (*eval) return run_eval(eval_opts, out);
    if (*match) return run_match(match_opts, out);
    if (*stats) return run_stats(stats_gt, stats_out, out);
    if (*synth) return run_synth(synth_opts, out);
    if (*light) return run_light(light_opts, out);
    if (*render_cmd) return run_render(render_gt, render_pred, render_out, render_no_masks, out);
  } catch (const std::exception& e) {
    err << error_json(command, error_type(e), e.what()) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace shadowpair::tools
