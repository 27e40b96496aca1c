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

#ifndef COBOUND_INTERVAL_MAP_H_
#define COBOUND_INTERVAL_MAP_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "cobound/interval_set.h"
#include "cobound/step_function.h"

namespace cobound {

// Raised when a partial map is asked about a point or set outside its domain.
class UndefinedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// [lo, hi) -> [lo + shift, hi + shift).
struct Branch {
  Quad lo;
  Quad hi;
  Quad shift;
  friend bool operator==(const Branch&, const Branch&) = default;
};

// Injective piecewise translation, possibly partial.
class IntervalMap {
 public:
  IntervalMap() = default;
  // Branch domains must be disjoint, and so must the images.
  static IntervalMap FromBranches(std::vector<Branch> branches);
  static IntervalMap Identity(const IntervalSet& s);
  static IntervalMap Rotation(const Quad& alpha);
  // Order-preserving measure matching of src onto dst (equal measure).
  static IntervalMap Matching(const IntervalSet& src, const IntervalSet& dst);

  const std::vector<Branch>& branches() const { return branches_; }
  IntervalSet domain() const;
  IntervalSet image() const;
  bool defined_at(const Quad& x) const;
  std::optional<Quad> try_apply(const Quad& x) const;
  Quad apply(const Quad& x) const;

  IntervalSet pushforward(const IntervalSet& s) const;
  // {x in domain : map(x) in s}.
  IntervalSet preimage(const IntervalSet& s) const;
  // f o map on the domain, 0 elsewhere; result lives on f's domain.
  StepFunction pullback(const StepFunction& f) const;

  IntervalMap inverse() const;
  // (*this) o g.
  IntervalMap after(const IntervalMap& g) const;
  // Union of two maps with disjoint domains and images.
  IntervalMap merged(const IntervalMap& other) const;
  IntervalMap restricted(const IntervalSet& s) const;
  IntervalMap power(long k) const;

  friend bool operator==(const IntervalMap&, const IntervalMap&) = default;

 private:
  const Branch* find(const Quad& x) const;
  std::vector<Branch> branches_;
};

}  // namespace cobound

#endif  // COBOUND_INTERVAL_MAP_H_
