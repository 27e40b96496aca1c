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

#include "cobound/serialize.h"

#include <sstream>
#include <stdexcept>

namespace cobound {

std::string Exact(const Rational& q) { return RationalString(q); }
std::string Exact(const Quad& x) { return x.str(); }
std::string Exact(const Surd& x) { return x.str(); }

std::string Decimal(const Real& x, int digits) {
  std::ostringstream os;
  os.setf(std::ios::scientific, std::ios::floatfield);
  os.precision(digits - 1);
  os << x;
  return os.str();
}

namespace {

std::string Text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw std::invalid_argument("expected an exact number as a string or integer, got " + j.dump());
}

}  // namespace

Rational RationalFrom(const Json& j) { return ParseRational(Text(j)); }
Quad QuadFrom(const Json& j) { return Quad::Parse(Text(j)); }
Surd SurdFrom(const Json& j) { return Surd::Parse(Text(j)); }

Json ToJson(const IntervalSet& s) {
  Json out = Json::array();
  for (const auto& iv : s.intervals()) out.push_back({Exact(iv.lo), Exact(iv.hi)});
  return out;
}

IntervalSet SetFrom(const Json& j) {
  std::vector<Interval> parts;
  for (const auto& e : j) parts.push_back({QuadFrom(e.at(0)), QuadFrom(e.at(1))});
  return IntervalSet::FromIntervals(std::move(parts));
}

Json ToJson(const StepFunction& f) {
  Json runs = Json::array();
  for (size_t i = 0; i < f.num_segments(); ++i) {
    Interval seg = f.segment(i);
    runs.push_back({Exact(seg.lo), Exact(seg.hi), Exact(f.values()[i])});
  }
  return Json{{"lo", Exact(f.lo())}, {"hi", Exact(f.hi())}, {"runs", runs}};
}

StepFunction StepFrom(const Json& j) {
  std::vector<Quad> cuts, values;
  Quad prev_hi;
  for (const auto& r : j.at("runs")) {
    Quad lo = QuadFrom(r.at(0));
    if (!cuts.empty() && lo != prev_hi) throw std::invalid_argument("step function runs are not contiguous");
    cuts.push_back(lo);
    values.push_back(QuadFrom(r.at(2)));
    prev_hi = QuadFrom(r.at(1));
  }
  Quad hi = QuadFrom(j.at("hi"));
  if (cuts.empty() || cuts.front() != QuadFrom(j.at("lo")) || prev_hi != hi)
    throw std::invalid_argument("step function runs do not cover the domain");
  return StepFunction::FromBreaks(std::move(cuts), std::move(values), hi);
}

Json ToJson(const IntervalMap& m) {
  Json out = Json::array();
  for (const auto& b : m.branches()) out.push_back({Exact(b.lo), Exact(b.hi), Exact(b.shift)});
  return out;
}

IntervalMap MapFrom(const Json& j) {
  std::vector<Branch> br;
  for (const auto& e : j) br.push_back({QuadFrom(e.at(0)), QuadFrom(e.at(1)), QuadFrom(e.at(2))});
  return IntervalMap::FromBranches(std::move(br));
}

Json ToJson(const std::vector<SurdRun>& runs) {
  Json out = Json::array();
  for (const auto& r : runs) out.push_back({Exact(r.x.lo), Exact(r.x.hi), Exact(r.value)});
  return out;
}

std::vector<SurdRun> RunsFrom(const Json& j) {
  std::vector<SurdRun> out;
  for (const auto& e : j) out.push_back({{QuadFrom(e.at(0)), QuadFrom(e.at(1))}, SurdFrom(e.at(2))});
  return out;
}

std::string CanonicalDump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cobound
