// Copyright 2026 The cobound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COBOUND_RANK_ONE_H_
#define COBOUND_RANK_ONE_H_

#include <vector>

#include "cobound/interval_map.h"

namespace cobound {

// One cut-and-stack step. Copy order[k] is placed k-th from the bottom and
// spacers[k] fresh levels are put on top of it.
struct RecipeStep {
  int cuts = 1;
  std::vector<int> order;
  std::vector<int> spacers;
  friend bool operator==(const RecipeStep&, const RecipeStep&) = default;
};

// Single column of equal-measure levels plus unused residual mass. Level j
// maps to level j+1 by the order-preserving matching; the top level and the
// residual are where the map is undefined.
class RankOneMachine {
 public:
  RankOneMachine() = default;
  static RankOneMachine Column(std::vector<IntervalSet> levels, IntervalSet residual);
  // One level [0, width) with residual [width, 1).
  static RankOneMachine Seed(const Quad& width = 1);
  // Levels [j/h, (j+1)/h); a single branch x -> x + 1/h below the top.
  static RankOneMachine UniformColumn(long h);
  // Seed cut into `base` pieces `depth` times, no spacers.
  static RankOneMachine Odometer(int base, int depth);
  static RankOneMachine Replay(const RankOneMachine& seed, const std::vector<RecipeStep>& recipe);

  RankOneMachine cut_and_stack(int cuts, std::vector<int> order = {},
                               std::vector<int> spacers = {}) const;
  RankOneMachine cut_and_stack(const RecipeStep& step) const;

  size_t height() const { return levels_.size(); }
  const std::vector<IntervalSet>& levels() const { return levels_; }
  const IntervalSet& level(size_t j) const { return levels_.at(j); }
  Quad width() const { return levels_.front().measure(); }
  const IntervalSet& residual() const { return residual_; }
  const std::vector<RecipeStep>& recipe() const { return recipe_; }
  IntervalSet column_set() const;
  IntervalSet undefined_region() const { return levels_.back().unite(residual_); }
  // Index of the level containing x, or -1.
  long level_of(const Quad& x) const;

  const IntervalMap& map() const { return map_; }

 private:
  void rebuild_map();

  std::vector<IntervalSet> levels_;
  IntervalSet residual_;
  std::vector<RecipeStep> recipe_;
  IntervalMap map_;
};

}  // namespace cobound

#endif  // COBOUND_RANK_ONE_H_
