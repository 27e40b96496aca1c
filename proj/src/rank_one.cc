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

#include "cobound/rank_one.h"

#include <algorithm>
#include <numeric>

namespace cobound {

RankOneMachine RankOneMachine::Column(std::vector<IntervalSet> levels, IntervalSet residual) {
  if (levels.empty()) throw std::invalid_argument("machine needs at least one level");
  Quad w = levels.front().measure();
  IntervalSet seen = residual;
  Quad total = residual.measure();
  for (const auto& l : levels) {
    if (l.measure() != w) throw std::invalid_argument("machine levels of unequal measure");
    if (!seen.disjoint_from(l)) throw std::invalid_argument("machine levels overlap");
    seen = seen.unite(l);
    total += w;
  }
  if (total != 1) throw std::invalid_argument("levels and residual do not fill [0,1)");
  RankOneMachine m;
  m.levels_ = std::move(levels);
  m.residual_ = std::move(residual);
  m.rebuild_map();
  return m;
}

RankOneMachine RankOneMachine::Seed(const Quad& width) {
  return Column({IntervalSet::Span(0, width)}, IntervalSet::Span(width, 1));
}

RankOneMachine RankOneMachine::UniformColumn(long h) {
  if (h < 1) throw std::invalid_argument("column height must be positive");
  RankOneMachine m;
  for (long j = 0; j < h; ++j) {
    m.levels_.push_back(IntervalSet::Span(Quad::Ratio(j, h), Quad::Ratio(j + 1, h)));
  }
  if (h > 1) m.map_ = IntervalMap::FromBranches({{Quad(0), Quad::Ratio(h - 1, h), Quad::Ratio(1, h)}});
  return m;
}

RankOneMachine RankOneMachine::Odometer(int base, int depth) {
  RankOneMachine m = Seed();
  for (int i = 0; i < depth; ++i) m = m.cut_and_stack(base);
  return m;
}

RankOneMachine RankOneMachine::Replay(const RankOneMachine& seed, const std::vector<RecipeStep>& recipe) {
  RankOneMachine m = seed;
  for (const auto& s : recipe) m = m.cut_and_stack(s);
  return m;
}

RankOneMachine RankOneMachine::cut_and_stack(const RecipeStep& step) const {
  return cut_and_stack(step.cuts, step.order, step.spacers);
}

RankOneMachine RankOneMachine::cut_and_stack(int cuts, std::vector<int> order, std::vector<int> spacers) const {
  if (cuts < 1) throw std::invalid_argument("cuts must be >= 1");
  if (order.empty()) {
    order.resize(cuts);
    std::iota(order.begin(), order.end(), 0);
  }
  if (spacers.empty()) spacers.assign(cuts, 0);
  if (static_cast<int>(order.size()) != cuts || static_cast<int>(spacers.size()) != cuts) {
    throw std::invalid_argument("order/spacers must have one entry per cut");
  }
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  for (int i = 0; i < cuts; ++i) {
    if (check[i] != i) throw std::invalid_argument("order is not a permutation");
  }
  long spacer_total = 0;
  for (int s : spacers) {
    if (s < 0) throw std::invalid_argument("negative spacer count");
    spacer_total += s;
  }
  Quad part = width() / Quad(cuts);
  if (residual_.measure() < part * Quad(spacer_total)) {
    throw std::invalid_argument("insufficient residual mass for spacers");
  }
  // copies[c][j] = c-th part of level j.
  std::vector<std::vector<IntervalSet>> copies(cuts, std::vector<IntervalSet>(levels_.size()));
  for (size_t j = 0; j < levels_.size(); ++j) {
    auto parts = levels_[j].split_equal(cuts);
    for (int c = 0; c < cuts; ++c) copies[c][j] = std::move(parts[c]);
  }
  RankOneMachine m;
  m.residual_ = residual_;
  for (int k = 0; k < cuts; ++k) {
    for (auto& l : copies[order[k]]) m.levels_.push_back(std::move(l));
    for (int s = 0; s < spacers[k]; ++s) {
      auto [sp, rest] = m.residual_.split_at_measure(part);
      m.levels_.push_back(std::move(sp));
      m.residual_ = std::move(rest);
    }
  }
  m.recipe_ = recipe_;
  m.recipe_.push_back({cuts, std::move(order), std::move(spacers)});
  m.rebuild_map();
  return m;
}

void RankOneMachine::rebuild_map() {
  std::vector<Branch> br;
  for (size_t j = 0; j + 1 < levels_.size(); ++j) {
    IntervalMap step = IntervalMap::Matching(levels_[j], levels_[j + 1]);
    br.insert(br.end(), step.branches().begin(), step.branches().end());
  }
  map_ = IntervalMap::FromBranches(std::move(br));
}

IntervalSet RankOneMachine::column_set() const { return UnionAll(levels_); }

long RankOneMachine::level_of(const Quad& x) const {
  for (size_t j = 0; j < levels_.size(); ++j) {
    if (levels_[j].contains(x)) return static_cast<long>(j);
  }
  return -1;
}

}  // namespace cobound
