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

#ifndef COBOUND_INTERVAL_SET_H_
#define COBOUND_INTERVAL_SET_H_

#include <utility>
#include <vector>

#include "cobound/quad.h"

namespace cobound {

// Half-open [lo, hi).
struct Interval {
  Quad lo;
  Quad hi;
  Quad length() const { return hi - lo; }
  bool contains(const Quad& x) const { return lo <= x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite union of half-open intervals kept sorted, disjoint and merged.
class IntervalSet {
 public:
  IntervalSet() = default;

  // Validated constructor for subsets of [0,1].
  static IntervalSet FromRaw(const std::vector<std::pair<Quad, Quad>>& raw);
  // Unvalidated: endpoints may lie anywhere (parameter spaces, shifted copies).
  static IntervalSet FromIntervals(std::vector<Interval> parts);
  static IntervalSet Span(const Quad& lo, const Quad& hi);
  static IntervalSet Unit() { return Span(0, 1); }

  const std::vector<Interval>& intervals() const { return parts_; }
  size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  Quad measure() const;
  bool contains(const Quad& x) const;
  Quad lower() const { return parts_.front().lo; }
  Quad upper() const { return parts_.back().hi; }

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet subtract(const IntervalSet& o) const;
  // Complement inside [0,1).
  IntervalSet complement() const { return Unit().subtract(*this); }
  IntervalSet translate(const Quad& s) const;
  bool subset_of(const IntervalSet& o) const { return subtract(o).empty(); }
  bool disjoint_from(const IntervalSet& o) const { return intersect(o).empty(); }

  // Point reached after sweeping measure m from the left edge.
  Quad point_at_measure(const Quad& m) const;
  // Left part of measure m (in left-to-right order) and the remainder.
  std::pair<IntervalSet, IntervalSet> split_at_measure(const Quad& m) const;
  // k consecutive parts of equal measure.
  std::vector<IntervalSet> split_equal(size_t k) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

IntervalSet UnionAll(const std::vector<IntervalSet>& sets);

}  // namespace cobound

#endif  // COBOUND_INTERVAL_SET_H_
