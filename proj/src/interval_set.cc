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

#include "cobound/interval_set.h"

#include <algorithm>
#include <stdexcept>

namespace cobound {

IntervalSet IntervalSet::FromIntervals(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return !(iv.lo < iv.hi); });
  std::sort(parts.begin(), parts.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  IntervalSet out;
  for (auto& iv : parts) {
    if (!out.parts_.empty() && iv.lo <= out.parts_.back().hi) {
      if (out.parts_.back().hi < iv.hi) out.parts_.back().hi = iv.hi;
    } else {
      out.parts_.push_back(std::move(iv));
    }
  }
  return out;
}

IntervalSet IntervalSet::FromRaw(const std::vector<std::pair<Quad, Quad>>& raw) {
  std::vector<Interval> parts;
  parts.reserve(raw.size());
  for (const auto& [lo, hi] : raw) {
    if (lo < 0 || hi > 1 || lo > 1 || hi < 0) {
      throw std::out_of_range("endpoint outside [0,1]: [" + lo.str() + ", " + hi.str() + ")");
    }
    if (hi < lo) throw std::invalid_argument("interval with hi < lo: [" + lo.str() + ", " + hi.str() + ")");
    parts.push_back({lo, hi});
  }
  return FromIntervals(std::move(parts));
}

IntervalSet IntervalSet::Span(const Quad& lo, const Quad& hi) {
  return FromIntervals({{lo, hi}});
}

Quad IntervalSet::measure() const {
  Quad m;
  for (const auto& iv : parts_) m += iv.length();
  return m;
}

bool IntervalSet::contains(const Quad& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Quad& v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  return x < std::prev(it)->hi;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return FromIntervals(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  IntervalSet out;
  size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = o.parts_[j];
    Quad lo = max(a.lo, b.lo);
    Quad hi = min(a.hi, b.hi);
    if (lo < hi) out.parts_.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalSet IntervalSet::subtract(const IntervalSet& o) const {
  IntervalSet out;
  size_t j = 0;
  for (const auto& a : parts_) {
    Quad cur = a.lo;
    while (j < o.parts_.size() && o.parts_[j].hi <= cur) ++j;
    size_t k = j;
    while (k < o.parts_.size() && o.parts_[k].lo < a.hi) {
      if (cur < o.parts_[k].lo) out.parts_.push_back({cur, o.parts_[k].lo});
      if (cur < o.parts_[k].hi) cur = o.parts_[k].hi;
      if (o.parts_[k].hi > a.hi) break;
      ++k;
    }
    if (cur < a.hi) out.parts_.push_back({cur, a.hi});
  }
  return out;
}

IntervalSet IntervalSet::translate(const Quad& s) const {
  IntervalSet out = *this;
  for (auto& iv : out.parts_) {
    iv.lo += s;
    iv.hi += s;
  }
  return out;
}

Quad IntervalSet::point_at_measure(const Quad& m) const {
  if (m < 0) throw std::invalid_argument("negative measure");
  Quad left = m;
  for (const auto& iv : parts_) {
    Quad len = iv.length();
    if (left < len) return iv.lo + left;
    left -= len;
  }
  if (left.is_zero() && !parts_.empty()) return parts_.back().hi;
  throw std::invalid_argument("measure exceeds set measure");
}

std::pair<IntervalSet, IntervalSet> IntervalSet::split_at_measure(const Quad& m) const {
  IntervalSet head, tail;
  Quad left = m;
  if (left < 0) throw std::invalid_argument("negative split measure");
  for (const auto& iv : parts_) {
    if (left.is_zero()) {
      tail.parts_.push_back(iv);
      continue;
    }
    Quad len = iv.length();
    if (len <= left) {
      head.parts_.push_back(iv);
      left -= len;
    } else {
      Quad cut = iv.lo + left;
      head.parts_.push_back({iv.lo, cut});
      tail.parts_.push_back({cut, iv.hi});
      left = 0;
    }
  }
  if (!left.is_zero()) throw std::invalid_argument("split measure exceeds set measure");
  return {head, tail};
}

std::vector<IntervalSet> IntervalSet::split_equal(size_t k) const {
  if (k == 0) throw std::invalid_argument("split into zero parts");
  std::vector<IntervalSet> out;
  Quad part = measure() / Quad(static_cast<long>(k));
  IntervalSet rest = *this;
  for (size_t i = 0; i + 1 < k; ++i) {
    auto [h, t] = rest.split_at_measure(part);
    out.push_back(std::move(h));
    rest = std::move(t);
  }
  out.push_back(std::move(rest));
  return out;
}

IntervalSet UnionAll(const std::vector<IntervalSet>& sets) {
  std::vector<Interval> all;
  for (const auto& s : sets) all.insert(all.end(), s.intervals().begin(), s.intervals().end());
  return IntervalSet::FromIntervals(std::move(all));
}

}  // namespace cobound
