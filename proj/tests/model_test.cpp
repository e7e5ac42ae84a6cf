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

#include "shadowpair/model.hpp"

#include <gtest/gtest.h>

#include <string>

#include "shadowpair/error.hpp"
#include "shadowpair/io.hpp"
#include "shadowpair/synth.hpp"

namespace shadowpair {
namespace {

const std::string kData = SHADOWPAIR_TEST_DATA;

std::string gt_doc(const std::string& shadow, const std::string& association) {
  return R"({"images": [{"id": 3, "width": 2, "height": 2}], "pairs": [{"image_id": 3, "pair_id": 9, "shadow_rle": )" +
         shadow + R"(, "association_rle": )" + association + "}]}";
}

TEST(ModelTest, LoadsGoldenGroundTruth) {
  const auto dataset = load_ground_truth(kData + "/gt_two_pairs.json");
  ASSERT_EQ(dataset.images.size(), 1u);
  EXPECT_EQ(dataset.pair_count(), 2u);
  const auto& pairs = dataset.images.at(1).pairs;
  EXPECT_EQ(pairs[0].shadow_box(), (BBox{0, 0, 1, 1}));
  EXPECT_EQ(pairs[0].object_box(), (BBox{0, 1, 1, 2}));
  EXPECT_EQ(pairs[0].association_box(), (BBox{0, 0, 1, 2}));
  EXPECT_EQ(area(pairs[1].object_mask()), 1u);
  EXPECT_EQ(pairs[1].object_box(), (BBox{3, 1, 4, 2}));
  for (const auto& p : pairs) {
    EXPECT_TRUE(p.association_box().contains(p.shadow_box()));
    EXPECT_TRUE(p.association_box().contains(p.object_box()));
    EXPECT_EQ(p.object_mask(), subtract(p.association_mask(), p.shadow_mask()));
  }
}

TEST(ModelTest, ShadowOutsideAssociationNamesThePair) {
  try {
    // Shadow at (0,0); association covers only (1,0).
    ground_truth_from_json(gt_doc("[0, 1, 3]", "[1, 1, 2]"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("image 3 pair 9"), std::string::npos) << msg;
  }
}

TEST(ModelTest, EmptyObjectMaskIsRejected) {
  EXPECT_THROW(ground_truth_from_json(gt_doc("[0, 1, 3]", "[0, 1, 3]")), ValidationError);
}

TEST(ModelTest, GroundTruthStructuralErrors) {
  EXPECT_THROW(ground_truth_from_json("not json"), ParseError);
  EXPECT_THROW(ground_truth_from_json(gt_doc("[0, 1, 2]", "[0, 2, 2]")), ValidationError);
  EXPECT_THROW(ground_truth_from_json(
                   R"({"images": [], "pairs": [{"image_id": 1, "pair_id": 1, "shadow_rle": [0, 1], "association_rle": [0, 1]}]})"),
               ValidationError);
  EXPECT_THROW(
      ground_truth_from_json(
          R"({"images": [{"id": 1, "width": 2, "height": 1}], "pairs": [
            {"image_id": 1, "pair_id": 1, "shadow_rle": [0, 1, 1], "association_rle": [0, 2]},
            {"image_id": 1, "pair_id": 1, "shadow_rle": [0, 1, 1], "association_rle": [0, 2]}]})"),
      ValidationError);
  EXPECT_THROW(ground_truth_from_json(R"({"format_version": 7})"), ParseError);
}

TEST(ModelTest, MissingFileNamesThePath) {
  try {
    load_ground_truth("/nonexistent/gt.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/gt.json"), std::string::npos);
  }
}

TEST(ModelTest, LoadsPredictions) {
  const auto set = load_predictions(kData + "/predictions_small.json");
  ASSERT_EQ(set.images.size(), 1u);
  const auto& image = set.images.at(1);
  ASSERT_EQ(image.instances.size(), 2u);
  EXPECT_EQ(image.instances[0].id, 0);
  EXPECT_EQ(image.instances[1].id, 1);
  EXPECT_EQ(image.instances[1].kind, InstanceKind::kObject);
  EXPECT_TRUE(image.instances[0].mask.has_value());
  EXPECT_FALSE(image.instances[1].mask.has_value());
  ASSERT_EQ(image.associations.size(), 1u);
}

TEST(ModelTest, PredictionErrors) {
  EXPECT_EQ(predictions_from_json("{}").images.size(), 0u);
  EXPECT_THROW(predictions_from_json(
                   R"({"instances": [{"image_id": 1, "kind": "car", "score": 0.5, "box": [0,0,1,1]}]})"),
               ParseError);
  EXPECT_THROW(predictions_from_json(
                   R"({"instances": [{"image_id": 1, "kind": "shadow", "score": 1.5, "box": [0,0,1,1]}]})"),
               ValidationError);
  EXPECT_THROW(predictions_from_json(
                   R"({"instances": [{"image_id": 1, "kind": "shadow", "score": 0.5, "box": [2,0,1,1]}]})"),
               ValidationError);
  EXPECT_THROW(predictions_from_json(
                   R"({"associations": [{"image_id": 1, "score": 0.5, "box": [0,0,1,1], "light_angle": -3.2}]})"),
               ValidationError);
  // Mask reaching outside its box by more than one pixel.
  EXPECT_THROW(predictions_from_json(
                   R"({"instances": [{"image_id": 1, "kind": "shadow", "score": 0.5, "box": [0,0,1,1],
                       "rle": {"size": [1, 4], "counts": [3, 1]}}]})"),
               ValidationError);
}

TEST(ModelTest, RoundTripIsIdentity) {
  SceneSpec spec;
  spec.seed = 5;
  spec.image_count = 4;
  spec.width = 160;
  spec.height = 120;
  spec.max_pairs = 4;
  const auto scene = generate(spec);

  const std::string gt_text = ground_truth_to_json(scene.ground_truth);
  const auto gt = ground_truth_from_json(gt_text);
  EXPECT_EQ(ground_truth_to_json(gt), gt_text);
  for (const auto& [id, image] : scene.ground_truth.images) {
    EXPECT_EQ(gt.images.at(id).pairs, image.pairs);
    EXPECT_EQ(gt.images.at(id).info, image.info);
  }

  const std::string pred_text = predictions_to_json(scene.noisy);
  const auto preds = predictions_from_json(pred_text);
  EXPECT_EQ(predictions_to_json(preds), pred_text);
  for (const auto& [id, image] : scene.noisy.images) {
    EXPECT_EQ(preds.images.at(id).instances, image.instances);
    EXPECT_EQ(preds.images.at(id).associations, image.associations);
  }
}

TEST(StatsTest, SinglePair) {
  const auto stats = compute_stats(load_ground_truth(kData + "/gt_two_pairs.json"));
  EXPECT_EQ(stats.image_count, 1u);
  EXPECT_EQ(stats.pair_count, 2u);
  EXPECT_EQ(stats.mean_pairs_per_image, 2.0);

  GroundTruthDataset one;
  one.images.emplace(1, ImageGroundTruth{{1, 2, 1}, {}});
  one.images.at(1).pairs.push_back(
      GroundTruthPair::make(1, 1, Mask::from_counts(2, 1, {0, 1, 1}), Mask::from_counts(2, 1, {0, 2})));
  const auto s = compute_stats(one);
  EXPECT_EQ(s.mean_pairs_per_image, 1.0);
  EXPECT_EQ(s.pairs_per_image, (std::map<int, std::size_t>{{1, 1}}));
  // Each instance covers half the image: overflow bin.
  EXPECT_EQ(s.shadow_area_histogram[10], 1u);
  EXPECT_EQ(s.object_area_histogram[10], 1u);
  EXPECT_EQ(s.fraction_images_with_9_plus, 0.0);
}

TEST(StatsTest, AreaBinsAreExact) {
  EXPECT_EQ(area_fraction_bin(0, 100), 0);
  EXPECT_EQ(area_fraction_bin(4, 100), 0);
  EXPECT_EQ(area_fraction_bin(5, 100), 1);
  EXPECT_EQ(area_fraction_bin(49, 100), 9);
  EXPECT_EQ(area_fraction_bin(50, 100), 10);
  EXPECT_EQ(area_fraction_bin(100, 100), 10);
}

TEST(StatsTest, EmptyDatasetIsAnError) {
  EXPECT_THROW(compute_stats(GroundTruthDataset{}), PreconditionError);
}

TEST(StatsTest, HistogramTotalsMatchCounts) {
  SceneSpec spec;
  spec.seed = 8;
  spec.image_count = 12;
  spec.width = 200;
  spec.height = 200;
  const auto scene = generate(spec);
  const auto stats = compute_stats(scene.ground_truth);
  EXPECT_EQ(stats.image_count, scene.manifest.image_count);
  EXPECT_EQ(stats.pair_count, scene.manifest.pair_count);
  EXPECT_EQ(stats.pairs_per_image, scene.manifest.pairs_per_image);
  std::size_t shadows = 0, objects = 0, images = 0;
  for (auto c : stats.shadow_area_histogram) shadows += c;
  for (auto c : stats.object_area_histogram) objects += c;
  for (const auto& [k, v] : stats.pairs_per_image) images += v;
  EXPECT_EQ(shadows, stats.pair_count);
  EXPECT_EQ(objects, stats.pair_count);
  EXPECT_EQ(images, stats.image_count);
}

}  // namespace
}  // namespace shadowpair
