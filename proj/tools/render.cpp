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

#include "render.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "shadowpair/error.hpp"
#include "shadowpair/io.hpp"
#include "shadowpair/light.hpp"

namespace shadowpair::tools {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

const std::string& colour(const RenderStyle& style, std::size_t index) {
  return style.palette[index % style.palette.size()];
}

void box_rect(std::ostringstream& out, const BBox& b, const std::string& stroke,
              double width, bool dashed) {
  out << "  <rect x=\"" << num(b.x_min) << "\" y=\"" << num(b.y_min) << "\" width=\""
      << num(b.width()) << "\" height=\"" << num(b.height())
      << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"";
  if (dashed) out << " stroke-dasharray=\"6 4\"";
  out << "/>\n";
}

// Boundary of the foreground as unit-length pixel edges.
void mask_outline(std::ostringstream& out, const Mask& mask, const std::string& stroke,
                  double width) {
  if (mask.is_empty()) return;
  const Bitmap bitmap = decode(mask);
  const BBox b = bbox_of(mask);
  auto on = [&](int r, int c) {
    return r >= 0 && c >= 0 && r < bitmap.height() && c < bitmap.width() && bitmap.at(r, c);
  };
  std::ostringstream d;
  for (int r = static_cast<int>(b.y_min); r < static_cast<int>(b.y_max); ++r) {
    for (int c = static_cast<int>(b.x_min); c < static_cast<int>(b.x_max); ++c) {
      if (!on(r, c)) continue;
      if (!on(r - 1, c)) d << "M" << c << " " << r << "h1";
      if (!on(r + 1, c)) d << "M" << c << " " << r + 1 << "h1";
      if (!on(r, c - 1)) d << "M" << c << " " << r << "v1";
      if (!on(r, c + 1)) d << "M" << c + 1 << " " << r << "v1";
    }
  }
  out << "  <path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(width / 2) << "\"/>\n";
}

void arrow(std::ostringstream& out, const Point& from, const Point& to,
           const std::string& stroke, double width) {
  out << "  <line x1=\"" << num(from.x) << "\" y1=\"" << num(from.y) << "\" x2=\""
      << num(to.x) << "\" y2=\"" << num(to.y) << "\" stroke=\"" << stroke
      << "\" stroke-width=\"" << num(width) << "\" marker-end=\"url(#arrow)\"/>\n";
}

void header(std::ostringstream& out, int width, int height) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" "
         "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">"
         "<path d=\"M0 0L10 5L0 10z\" fill=\"context-stroke\"/></marker></defs>\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
}

}  // namespace

void RenderSpec::validate() const {
  if (!ground_truth && !paired) {
    throw PreconditionError("render needs --gt and/or --pred");
  }
}

std::string render_image_svg(const ImageInfo& image, const ImageGroundTruth* ground_truth,
                             std::span<const PairedAssociation> paired,
                             const RenderStyle& style) {
  std::ostringstream out;
  header(out, image.width, image.height);
  const double w = style.stroke_width;

  if (ground_truth != nullptr) {
    out << "  <g id=\"ground-truth\">\n";
    for (std::size_t i = 0; i < ground_truth->pairs.size(); ++i) {
      const auto& p = ground_truth->pairs[i];
      const std::string& c = colour(style, i);
      if (style.mask_outlines) {
        mask_outline(out, p.shadow_mask(), c, w);
        mask_outline(out, p.object_mask(), c, w);
      }
      box_rect(out, p.shadow_box(), c, w, true);
      box_rect(out, p.object_box(), c, w, true);
      if (style.association_outlines) box_rect(out, p.association_box(), c, w / 2, true);
      if (style.light_arrows) {
        arrow(out, centroid(p.shadow_mask()), centroid(p.object_mask()), c, w);
      }
    }
    out << "  </g>\n";
  }

  if (!paired.empty()) {
    out << "  <g id=\"predictions\">\n";
    for (std::size_t i = 0; i < paired.size(); ++i) {
      const auto& p = paired[i];
      const std::string& c = colour(style, i);
      if (style.mask_outlines) {
        if (p.shadow.mask) mask_outline(out, *p.shadow.mask, c, w);
        if (p.object.mask) mask_outline(out, *p.object.mask, c, w);
      }
      box_rect(out, p.shadow.box, c, w, false);
      box_rect(out, p.object.box, c, w, false);
      if (style.association_outlines) box_rect(out, p.association.box, c, w / 2, false);
      if (style.light_arrows) {
        const Point from = center(p.association.box);
        const double len = 0.25 * std::min(p.association.box.width(), p.association.box.height()) + 10.0;
        arrow(out, from,
              {from.x + len * std::cos(p.light_angle), from.y + len * std::sin(p.light_angle)},
              c, w);
      }
    }
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_light_svg(int width, int height, double radians,
                             const RenderStyle& style) {
  std::ostringstream out;
  header(out, width, height);
  const Point c{0.5 * width, 0.5 * height};
  const double len = 0.4 * std::min(width, height);
  const Point from{c.x - len * std::cos(radians), c.y - len * std::sin(radians)};
  const Point to{c.x + len * std::cos(radians), c.y + len * std::sin(radians)};
  arrow(out, from, to, colour(style, 0), 2.0 * style.stroke_width);
  out << "</svg>\n";
  return out.str();
}

std::vector<std::filesystem::path> render(const RenderSpec& spec) {
  spec.validate();
  std::optional<GroundTruthDataset> gt;
  if (spec.ground_truth) gt = load_ground_truth(*spec.ground_truth);
  std::map<ImageId, std::vector<PairedAssociation>> paired;
  if (spec.paired) {
    for (auto& p : load_paired(*spec.paired)) paired[p.image_id].push_back(std::move(p));
  }

  // Images come from the ground truth when present; otherwise the canvas is
  // sized to fit every predicted box.
  std::map<ImageId, ImageInfo> images;
  if (gt) {
    for (const auto& [id, image] : gt->images) images[id] = image.info;
  }
  for (const auto& [id, pairs] : paired) {
    if (images.count(id)) continue;
    double w = 1.0, h = 1.0;
    for (const auto& p : pairs) {
      const BBox b = merge(merge(p.shadow.box, p.object.box), p.association.box);
      w = std::max(w, b.x_max);
      h = std::max(h, b.y_max);
      if (p.shadow.mask) {
        w = std::max(w, static_cast<double>(p.shadow.mask->width()));
        h = std::max(h, static_cast<double>(p.shadow.mask->height()));
      }
    }
    images[id] = {id, static_cast<int>(std::ceil(w)), static_cast<int>(std::ceil(h))};
  }

  std::filesystem::create_directories(spec.output_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [id, info] : images) {
    const ImageGroundTruth* image_gt = gt ? gt->find(id) : nullptr;
    auto it = paired.find(id);
    std::span<const PairedAssociation> preds;
    if (it != paired.end()) preds = it->second;
    const auto path = spec.output_dir / ("image_" + std::to_string(id) + ".svg");
    write_file_atomic(path, render_image_svg(info, image_gt, preds, spec.style));
    written.push_back(path);
  }
  return written;
}

}  // namespace shadowpair::tools
