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

#include "cobound/interval_map.h"

#include <algorithm>

namespace cobound {

namespace {

bool ByLo(const Branch& a, const Branch& b) { return a.lo < b.lo; }

}  // namespace

IntervalMap IntervalMap::FromBranches(std::vector<Branch> branches) {
  std::erase_if(branches, [](const Branch& b) { return !(b.lo < b.hi); });
  std::sort(branches.begin(), branches.end(), ByLo);
  for (size_t i = 1; i < branches.size(); ++i) {
    if (branches[i].lo < branches[i - 1].hi) {
      throw std::invalid_argument("overlapping branch domains at " + branches[i].lo.str());
    }
  }
  std::vector<Interval> images;
  images.reserve(branches.size());
  for (const auto& b : branches) images.push_back({b.lo + b.shift, b.hi + b.shift});
  std::sort(images.begin(), images.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (size_t i = 1; i < images.size(); ++i) {
    if (images[i].lo < images[i - 1].hi) {
      throw std::invalid_argument("map is not injective near " + images[i].lo.str());
    }
  }
  IntervalMap m;
  for (auto& b : branches) {
    if (!m.branches_.empty() && m.branches_.back().hi == b.lo && m.branches_.back().shift == b.shift) {
      m.branches_.back().hi = b.hi;
    } else {
      m.branches_.push_back(std::move(b));
    }
  }
  return m;
}

IntervalMap IntervalMap::Identity(const IntervalSet& s) {
  std::vector<Branch> br;
  for (const auto& iv : s.intervals()) br.push_back({iv.lo, iv.hi, Quad(0)});
  return FromBranches(std::move(br));
}

IntervalMap IntervalMap::Rotation(const Quad& alpha) {
  Quad a = alpha.frac();
  if (a.is_zero()) return Identity(IntervalSet::Unit());
  return FromBranches({{Quad(0), 1 - a, a}, {1 - a, Quad(1), a - 1}});
}

IntervalMap IntervalMap::Matching(const IntervalSet& src, const IntervalSet& dst) {
  if (src.measure() != dst.measure()) throw std::invalid_argument("matching sets of different measure");
  std::vector<Branch> br;
  const auto& a = src.intervals();
  const auto& b = dst.intervals();
  size_t i = 0, j = 0;
  Quad pa = a.empty() ? Quad(0) : a[0].lo;
  Quad pb = b.empty() ? Quad(0) : b[0].lo;
  while (i < a.size() && j < b.size()) {
    Quad len = min(a[i].hi - pa, b[j].hi - pb);
    br.push_back({pa, pa + len, pb - pa});
    pa += len;
    pb += len;
    if (pa == a[i].hi && ++i < a.size()) pa = a[i].lo;
    if (pb == b[j].hi && ++j < b.size()) pb = b[j].lo;
  }
  return FromBranches(std::move(br));
}

IntervalSet IntervalMap::domain() const {
  std::vector<Interval> ivs;
  for (const auto& b : branches_) ivs.push_back({b.lo, b.hi});
  return IntervalSet::FromIntervals(std::move(ivs));
}

IntervalSet IntervalMap::image() const {
  std::vector<Interval> ivs;
  for (const auto& b : branches_) ivs.push_back({b.lo + b.shift, b.hi + b.shift});
  return IntervalSet::FromIntervals(std::move(ivs));
}

const Branch* IntervalMap::find(const Quad& x) const {
  auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                             [](const Quad& v, const Branch& b) { return v < b.lo; });
  if (it == branches_.begin()) return nullptr;
  --it;
  return x < it->hi ? &*it : nullptr;
}

bool IntervalMap::defined_at(const Quad& x) const { return find(x) != nullptr; }

std::optional<Quad> IntervalMap::try_apply(const Quad& x) const {
  const Branch* b = find(x);
  if (!b) return std::nullopt;
  return x + b->shift;
}

Quad IntervalMap::apply(const Quad& x) const {
  const Branch* b = find(x);
  if (!b) throw UndefinedError("map undefined at " + x.str());
  return x + b->shift;
}

IntervalSet IntervalMap::pushforward(const IntervalSet& s) const {
  if (!s.subset_of(domain())) throw UndefinedError("set leaves the domain of the map");
  std::vector<Interval> out;
  const auto& ivs = s.intervals();
  size_t j = 0;
  for (const auto& b : branches_) {
    while (j < ivs.size() && ivs[j].hi <= b.lo) ++j;
    for (size_t k = j; k < ivs.size() && ivs[k].lo < b.hi; ++k) {
      Quad lo = max(ivs[k].lo, b.lo), hi = min(ivs[k].hi, b.hi);
      if (lo < hi) out.push_back({lo + b.shift, hi + b.shift});
    }
  }
  return IntervalSet::FromIntervals(std::move(out));
}

IntervalSet IntervalMap::preimage(const IntervalSet& s) const {
  std::vector<Interval> out;
  const auto& ivs = s.intervals();
  for (const auto& b : branches_) {
    Quad ilo = b.lo + b.shift, ihi = b.hi + b.shift;
    auto it = std::upper_bound(ivs.begin(), ivs.end(), ilo,
                               [](const Quad& v, const Interval& iv) { return v < iv.hi; });
    for (; it != ivs.end() && it->lo < ihi; ++it) {
      Quad lo = max(it->lo, ilo), hi = min(it->hi, ihi);
      if (lo < hi) out.push_back({lo - b.shift, hi - b.shift});
    }
  }
  return IntervalSet::FromIntervals(std::move(out));
}

StepFunction IntervalMap::pullback(const StepFunction& f) const {
  std::vector<Quad> cuts{f.lo()}, values{Quad(0)};
  auto emit = [&](const Quad& at, const Quad& v) {
    if (cuts.back() == at) {
      values.back() = v;
    } else {
      cuts.push_back(at);
      values.push_back(v);
    }
  };
  for (const auto& b : branches_) {
    Quad lo = max(b.lo, f.lo()), hi = min(b.hi, f.hi());
    if (!(lo < hi)) continue;
    Quad ilo = lo + b.shift, ihi = hi + b.shift;
    if (ilo < f.lo() || f.hi() < ihi) {
      // Portions of the image outside f's domain read as 0.
      Quad clo = max(ilo, f.lo()), chi = min(ihi, f.hi());
      emit(lo, Quad(0));
      if (clo < chi) {
        size_t i = f.segment_index(clo);
        for (; i < f.num_segments(); ++i) {
          Interval seg = f.segment(i);
          if (!(seg.lo < chi)) break;
          emit(max(seg.lo, clo) - b.shift, f.values()[i]);
        }
        if (chi - b.shift < hi) emit(chi - b.shift, Quad(0));
      }
    } else {
      size_t i = f.segment_index(ilo);
      for (; i < f.num_segments(); ++i) {
        Interval seg = f.segment(i);
        if (!(seg.lo < ihi)) break;
        emit(max(seg.lo, ilo) - b.shift, f.values()[i]);
      }
    }
    if (hi < f.hi()) emit(hi, Quad(0));
  }
  return StepFunction::FromBreaks(std::move(cuts), std::move(values), f.hi());
}

IntervalMap IntervalMap::inverse() const {
  std::vector<Branch> br;
  br.reserve(branches_.size());
  for (const auto& b : branches_) br.push_back({b.lo + b.shift, b.hi + b.shift, -b.shift});
  return FromBranches(std::move(br));
}

IntervalMap IntervalMap::after(const IntervalMap& g) const {
  std::vector<Branch> br;
  for (const auto& b : g.branches_) {
    Quad ilo = b.lo + b.shift, ihi = b.hi + b.shift;
    auto it = std::upper_bound(branches_.begin(), branches_.end(), ilo,
                               [](const Quad& v, const Branch& c) { return v < c.hi; });
    for (; it != branches_.end() && it->lo < ihi; ++it) {
      Quad lo = max(it->lo, ilo), hi = min(it->hi, ihi);
      if (lo < hi) br.push_back({lo - b.shift, hi - b.shift, b.shift + it->shift});
    }
  }
  return FromBranches(std::move(br));
}

IntervalMap IntervalMap::merged(const IntervalMap& other) const {
  std::vector<Branch> br = branches_;
  br.insert(br.end(), other.branches_.begin(), other.branches_.end());
  return FromBranches(std::move(br));
}

IntervalMap IntervalMap::restricted(const IntervalSet& s) const {
  std::vector<Branch> br;
  const auto& ivs = s.intervals();
  for (const auto& b : branches_) {
    auto it = std::upper_bound(ivs.begin(), ivs.end(), b.lo,
                               [](const Quad& v, const Interval& iv) { return v < iv.hi; });
    for (; it != ivs.end() && it->lo < b.hi; ++it) {
      Quad lo = max(it->lo, b.lo), hi = min(it->hi, b.hi);
      if (lo < hi) br.push_back({lo, hi, b.shift});
    }
  }
  return FromBranches(std::move(br));
}

IntervalMap IntervalMap::power(long k) const {
  if (k < 0) return inverse().power(-k);
  IntervalMap result = Identity(domain().unite(image()));
  IntervalMap base = *this;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : base.after(result);
      first = false;
    }
    k >>= 1;
    if (k > 0) base = base.after(base);
  }
  return result;
}

}  // namespace cobound
