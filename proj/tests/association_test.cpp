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

#include "shadowpair/association.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "shadowpair/error.hpp"
#include "shadowpair/synth.hpp"

namespace shadowpair {
namespace {

InstanceDetection shadow(DetectionId id, BBox box, double score = 0.9) {
  return {id, 1, InstanceKind::kShadow, score, box, std::nullopt};
}
InstanceDetection object(DetectionId id, BBox box, double score = 0.9) {
  return {id, 1, InstanceKind::kObject, score, box, std::nullopt};
}
AssociationDetection association(DetectionId id, BBox box, double score = 0.9,
                                 double angle = 0.5) {
  return {id, 1, score, box, angle};
}

TEST(CandidatesTest, DistanceGate) {
  // Shadow box height 5.
  const std::vector<InstanceDetection> s = {shadow(1, {0, 0, 2, 5})};
  EXPECT_EQ(generate_candidates(s, std::vector{object(2, {6, 0, 8, 5})}).size(), 1u);  // d = 4
  EXPECT_EQ(generate_candidates(s, std::vector{object(2, {8, 0, 9, 5})}).size(), 0u);  // d = 6
}

TEST(CandidatesTest, GateIsStrictAtShadowHeight) {
  const std::vector<InstanceDetection> s = {shadow(1, {0, 0, 2, 5})};
  EXPECT_TRUE(generate_candidates(s, std::vector{object(2, {7, 0, 8, 5})}).empty());
  const double just_inside = std::nextafter(7.0, 0.0);
  EXPECT_EQ(generate_candidates(s, std::vector{object(2, {just_inside, 0, 8, 5})}).size(), 1u);
}

TEST(CandidatesTest, AllOverlappingPairsAreCandidates) {
  const std::vector<InstanceDetection> s = {shadow(1, {0, 0, 10, 10}), shadow(2, {1, 1, 9, 9})};
  const std::vector<InstanceDetection> o = {object(3, {2, 2, 5, 5}), object(4, {3, 3, 6, 6}),
                                            object(5, {0, 0, 1, 1})};
  const auto c = generate_candidates(s, o);
  ASSERT_EQ(c.size(), 6u);
  for (const auto& p : c) {
    EXPECT_EQ(p.merged_box, merge(p.shadow.box, p.object.box));
    EXPECT_EQ(p.distance, 0.0);
  }
}

TEST(CandidatesTest, ThresholdScale) {
  const std::vector<InstanceDetection> s = {shadow(1, {0, 0, 2, 5})};
  const std::vector<InstanceDetection> o = {object(2, {8, 0, 9, 5})};  // d = 6
  EXPECT_EQ(generate_candidates(s, o, 1.5).size(), 1u);
}

TEST(CandidatesTest, RejectsMixedImagesOrKinds) {
  auto other = object(2, {0, 0, 1, 1});
  other.image_id = 2;
  EXPECT_THROW(generate_candidates(std::vector{shadow(1, {0, 0, 1, 1})}, std::vector{other}),
               PreconditionError);
  EXPECT_THROW(generate_candidates(std::vector{object(1, {0, 0, 1, 1})}, std::vector{object(2, {0, 0, 1, 1})}),
               PreconditionError);
}

TEST(PairAndMatchTest, PerfectAlignment) {
  const std::vector s = {shadow(1, {0, 0, 4, 2})};
  const std::vector o = {object(2, {4, 0, 6, 6})};
  const std::vector a = {association(3, {0, 0, 6, 6}, 0.9, 0.25)};
  const auto result = pair_and_match(s, o, a);
  ASSERT_EQ(result.paired.size(), 1u);
  const auto& p = result.paired[0];
  EXPECT_EQ(p.match_iou, 1.0);
  EXPECT_EQ(p.shadow.id, 1);
  EXPECT_EQ(p.object.id, 2);
  EXPECT_EQ(p.association.id, 3);
  EXPECT_EQ(p.light_angle, 0.25);
  EXPECT_NEAR(p.combined_score, 0.9, 1e-15);
  EXPECT_EQ(result.diagnostics.unmatched_shadows, 0u);
}

TEST(PairAndMatchTest, DisjointAssociationLeavesEverythingUnmatched) {
  const std::vector s = {shadow(1, {0, 0, 4, 2})};
  const std::vector o = {object(2, {4, 0, 6, 6})};
  const std::vector a = {association(3, {50, 50, 60, 60})};
  const auto result = pair_and_match(s, o, a);
  EXPECT_TRUE(result.paired.empty());
  EXPECT_EQ(result.diagnostics.unmatched_shadows, 1u);
  EXPECT_EQ(result.diagnostics.unmatched_objects, 1u);
  EXPECT_EQ(result.diagnostics.unmatched_associations, 1u);
}

TEST(PairAndMatchTest, IouFloorIsExclusive) {
  const std::vector s = {shadow(1, {0, 0, 2, 2})};
  const std::vector o = {object(2, {2, 0, 4, 2})};
  const std::vector a = {association(3, {0, 0, 2, 2})};  // IoU 0.5 with merged box
  MatchConfig config;
  config.iou_floor = 0.5;
  EXPECT_TRUE(pair_and_match(s, o, a, config).paired.empty());
  config.iou_floor = 0.49;
  EXPECT_EQ(pair_and_match(s, o, a, config).paired.size(), 1u);
}

TEST(PairAndMatchTest, OneAssociationCannotHostTwoPairs) {
  // Two shadows next to one object; one association box.
  const std::vector s = {shadow(1, {0, 0, 2, 4}), shadow(2, {6, 0, 8, 4})};
  const std::vector o = {object(3, {2, 0, 6, 4})};
  const std::vector a = {association(4, {0, 0, 6, 4})};
  const auto result = pair_and_match(s, o, a);
  ASSERT_EQ(result.paired.size(), 1u);
  EXPECT_EQ(result.paired[0].shadow.id, 1);
  EXPECT_EQ(result.diagnostics.unmatched_shadows, 1u);
}

TEST(PairAndMatchTest, ScoreModes) {
  EXPECT_NEAR(combine_scores(0.8, 0.5, 0.2, ScoreMode::kGeometricMean), std::cbrt(0.08), 1e-15);
  EXPECT_EQ(combine_scores(0.8, 0.5, 0.2, ScoreMode::kMin), 0.2);
  EXPECT_EQ(combine_scores(0.8, 0.5, 0.3, ScoreMode::kAssociationScore), 0.3);
  EXPECT_EQ(parse_score_mode("min"), ScoreMode::kMin);
  EXPECT_THROW(parse_score_mode("max"), Error);
}

TEST(PairAndMatchTest, CombinedMaskIsUnionOfInstanceMasks) {
  auto s = shadow(1, {0, 0, 1, 1});
  auto o = object(2, {1, 0, 2, 1});
  s.mask = Mask::rectangle(4, 4, 0, 0, 1, 1);
  o.mask = Mask::rectangle(4, 4, 1, 0, 2, 1);
  const auto result = pair_and_match(std::vector{s}, std::vector{o},
                                     std::vector{association(3, {0, 0, 2, 1})});
  ASSERT_EQ(result.paired.size(), 1u);
  ASSERT_TRUE(result.paired[0].combined_mask.has_value());
  EXPECT_EQ(*result.paired[0].combined_mask, Mask::rectangle(4, 4, 0, 0, 2, 1));
}

class RandomSceneTest : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomSceneTest, OneToOnePermutationInvariantAndNonIncreasing) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> pos(0, 100), ext(2, 20), score(0, 1);
  auto box = [&] {
    const double x = pos(rng), y = pos(rng);
    return BBox{x, y, x + ext(rng), y + ext(rng)};
  };
  std::vector<InstanceDetection> s, o;
  std::vector<AssociationDetection> a;
  for (int i = 0; i < 8; ++i) s.push_back(shadow(i, box(), score(rng)));
  for (int i = 0; i < 8; ++i) o.push_back(object(100 + i, box(), score(rng)));
  for (int i = 0; i < 10; ++i) a.push_back(association(200 + i, box(), score(rng)));

  const auto result = pair_and_match(s, o, a);
  std::set<DetectionId> used;
  double last = 2.0;
  for (const auto& p : result.paired) {
    EXPECT_TRUE(used.insert(p.shadow.id).second);
    EXPECT_TRUE(used.insert(p.object.id).second);
    EXPECT_TRUE(used.insert(p.association.id).second);
    EXPECT_LE(p.match_iou, last);
    EXPECT_GT(p.match_iou, 0.0);
    last = p.match_iou;
  }
  EXPECT_EQ(result.diagnostics.unmatched_shadows + result.paired.size(), s.size());

  std::shuffle(s.begin(), s.end(), rng);
  std::shuffle(o.begin(), o.end(), rng);
  std::shuffle(a.begin(), a.end(), rng);
  EXPECT_EQ(pair_and_match(s, o, a).paired, result.paired);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomSceneTest, ::testing::Range<std::uint64_t>(1, 21));

TEST(PairAndMatchTest, RecoversSyntheticPairing) {
  SceneSpec spec;
  spec.seed = 3;
  spec.image_count = 1;
  spec.min_pairs = spec.max_pairs = 4;
  spec.noise = NoiseModel::zero();
  const auto scene = generate(spec);
  const auto& image = scene.perfect.images.at(1);
  const auto result = pair_and_match(image.of_kind(InstanceKind::kShadow),
                                     image.of_kind(InstanceKind::kObject), image.associations);
  ASSERT_EQ(result.paired.size(), 4u);
  std::set<std::tuple<DetectionId, DetectionId, DetectionId>> truth, got;
  for (const auto& p : scene.manifest.images[0].pairs) {
    truth.insert({p.shadow_id, p.object_id, p.association_id});
  }
  for (const auto& p : result.paired) got.insert({p.shadow.id, p.object.id, p.association.id});
  EXPECT_EQ(got, truth);
}

}  // namespace
}  // namespace shadowpair
