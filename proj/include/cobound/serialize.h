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

#ifndef COBOUND_SERIALIZE_H_
#define COBOUND_SERIALIZE_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "cobound/interval_map.h"
#include "cobound/non_coboundary.h"
#include "cobound/real.h"
#include "cobound/surd.h"

namespace cobound {

// Objects keep their keys sorted, which makes dumps canonical.
using Json = nlohmann::json;

std::string Exact(const Rational& q);
std::string Exact(const Quad& x);
std::string Exact(const Surd& x);
// Scientific notation with `digits` significant digits, for floating values only.
std::string Decimal(const Real& x, int digits = 30);

Rational RationalFrom(const Json& j);
Quad QuadFrom(const Json& j);
Surd SurdFrom(const Json& j);

// [[lo, hi], ...]
Json ToJson(const IntervalSet& s);
IntervalSet SetFrom(const Json& j);
// {"lo", "hi", "runs": [[lo, hi, value], ...]}, one run per segment.
Json ToJson(const StepFunction& f);
StepFunction StepFrom(const Json& j);
// [[lo, hi, shift], ...]
Json ToJson(const IntervalMap& m);
IntervalMap MapFrom(const Json& j);
Json ToJson(const std::vector<SurdRun>& runs);
std::vector<SurdRun> RunsFrom(const Json& j);

// Two-space indented dump with a trailing newline.
std::string CanonicalDump(const Json& j);

}  // namespace cobound

#endif  // COBOUND_SERIALIZE_H_
