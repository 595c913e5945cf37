// Copyright 2026 The Dilemma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dilemma/population.h"

#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace dilemma {
namespace {

TEST_CASE("attribute and placement names round trip") {
  for (GroupAttribute a :
       {GroupAttribute::kHeterogeneous, GroupAttribute::kHomogeneousHigh,
        GroupAttribute::kHomogeneousLow}) {
    CHECK(ParseAttribute(AttributeName(a)) == a);
  }
  CHECK(AttributeName(GroupAttribute::kHeterogeneous) == "hetero");
  CHECK(AttributeName(GroupAttribute::kHomogeneousHigh) == "homo-high");
  CHECK(AttributeName(GroupAttribute::kHomogeneousLow) == "homo-low");
  CHECK_FALSE(ParseAttribute("mixed").has_value());
  CHECK(ParsePlacement("split") == PlacementMode::kSplit);
  CHECK(ParsePlacement("uniform") == PlacementMode::kUniform);
  CHECK_FALSE(ParsePlacement("corner").has_value());
}

TEST_CASE("homogeneous high targets") {
  Rng rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    for (double t : SampleTargetRewards(GroupAttribute::kHomogeneousHigh,
                                        TargetRewardSpec(), 6, rng)) {
      CHECK(t >= 50);
      CHECK(t <= 100);
    }
  }
}

TEST_CASE("homogeneous low targets") {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    for (double t : SampleTargetRewards(GroupAttribute::kHomogeneousLow,
                                        TargetRewardSpec(), 6, rng)) {
      CHECK(t > 10);
      CHECK(t <= 25);
    }
  }
}

TEST_CASE("heterogeneous group is three low then three high") {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    const auto t = SampleTargetRewards(GroupAttribute::kHeterogeneous,
                                       TargetRewardSpec(), 6, rng);
    REQUIRE(t.size() == 6);
    for (int i = 0; i < 3; ++i) CHECK(t[i] <= 25);
    for (int i = 3; i < 6; ++i) CHECK(t[i] >= 50);
  }
}

TEST_CASE("point ranges give exact targets") {
  TargetRewardSpec spec;
  spec.low = {20, 20};
  spec.high = {60, 60};
  Rng rng(4);
  CHECK(SampleTargetRewards(GroupAttribute::kHeterogeneous, spec, 6, rng) ==
        std::vector<double>{20, 20, 20, 60, 60, 60});
}

TEST_CASE("every default sample classifies as exactly one class") {
  // High rewarders need R >= r_a * tau = 50, low ones R <= r_g * tau = 25.
  Rng rng(5);
  for (GroupAttribute a :
       {GroupAttribute::kHeterogeneous, GroupAttribute::kHomogeneousHigh,
        GroupAttribute::kHomogeneousLow}) {
    for (int rep = 0; rep < 500; ++rep) {
      for (double t : SampleTargetRewards(a, TargetRewardSpec(), 6, rng)) {
        const bool high = t >= 50;
        const bool low = t > 10 && t <= 25;
        CHECK(high != low);
      }
    }
  }
}

TEST_CASE("target spec validation") {
  TargetRewardSpec spec;
  CHECK_NOTHROW(spec.Validate());
  CHECK_NOTHROW(spec.ValidateClassification(10, 5, 5));
  spec.low = {30, 20};
  CHECK_THROWS_AS(spec.Validate(), std::invalid_argument);
  spec = TargetRewardSpec();
  spec.low = {10, 60};
  CHECK_THROWS_AS(spec.Validate(), std::invalid_argument);
  spec = TargetRewardSpec();
  spec.low = {0, 25};
  CHECK_THROWS_AS(spec.Validate(), std::invalid_argument);
  spec = TargetRewardSpec();
  // With tau = 4 the low threshold is 20, so (10, 25] no longer fits.
  CHECK_THROWS_AS(spec.ValidateClassification(10, 5, 4), std::invalid_argument);
  // With tau = 6 the high threshold is 60, above the low end of [50, 100].
  CHECK_THROWS_AS(spec.ValidateClassification(10, 5, 6), std::invalid_argument);
}

TEST_CASE("low rewarder count") {
  CHECK(NumLowRewarders(6) == 3);
  CHECK(NumLowRewarders(7) == 3);
  CHECK(NumLowRewarders(1) == 0);
}

TEST_CASE("split placement puts each group in its half") {
  Rng rng(6);
  for (int rep = 0; rep < 10000; ++rep) {
    const auto cells = InitialPlacement(PlacementMode::kSplit, 6, rng);
    REQUIRE(cells.size() == 6);
    const int first = ToCellIndex(cells[0]);
    const int fourth = ToCellIndex(cells[3]);
    CHECK(first >= 1);
    CHECK(first <= 120);
    CHECK(fourth <= -1);
    CHECK(fourth >= -120);
    for (int i = 0; i < 6; ++i) {
      CHECK(GridGeometry::HalfOf(cells[i]) ==
            (i < 3 ? Half::kGarbage : Half::kApple));
    }
  }
}

TEST_CASE("uniform placement reaches both halves") {
  Rng rng(7);
  int garbage = 0;
  int apple = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    for (Cell c : InitialPlacement(PlacementMode::kUniform, 6, rng)) {
      CHECK(GridGeometry::Contains(c.row, c.col));
      (GridGeometry::HalfOf(c) == Half::kGarbage ? garbage : apple)++;
    }
  }
  CHECK(garbage > 2500);
  CHECK(apple > 2500);
}

TEST_CASE("placement is deterministic for a seed") {
  Rng a(99);
  Rng b(99);
  CHECK(InitialPlacement(PlacementMode::kSplit, 6, a) ==
        InitialPlacement(PlacementMode::kSplit, 6, b));
}

}  // namespace
}  // namespace dilemma
