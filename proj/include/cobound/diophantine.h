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

#ifndef COBOUND_DIOPHANTINE_H_
#define COBOUND_DIOPHANTINE_H_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobound/quad.h"
#include "cobound/real.h"

namespace cobound {

struct ContinuedFraction {
  std::vector<Integer> quotients;                        // a_0, a_1, ...
  std::vector<std::pair<Integer, Integer>> convergents;  // (p_k, q_k)
  std::optional<size_t> period_start;                    // index of the first repeating quotient
  size_t period_length = 0;
  bool truncated = false;  // rational input ended before the requested depth
};

ContinuedFraction ContinuedFractionExpand(const Quad& alpha, size_t depth);

// |q alpha - p| for the nearest integer p.
Quad DistanceToInteger(const Quad& x);
Integer NearestInteger(const Quad& x);

struct Approximation {
  Integer q;
  std::vector<Integer> p;
};

class ApproximationNotFound : public std::runtime_error {
 public:
  ApproximationNotFound(const std::string& what, Integer retry) : std::runtime_error(what), retry_bound(retry) {}
  Integer retry_bound;
};

// Least q in [q_min, q_max] with |q x_i - p_i| < q^{-1/d} for all i, where p_i
// is the nearest integer to q x_i. Checked exactly as |q x_i - p_i|^d q < 1.
Approximation SimultaneousApproximation(const std::vector<Quad>& x, unsigned d, const Integer& q_max,
                                        const Integer& q_min = 2);
bool ApproximationHolds(const std::vector<Quad>& x, unsigned d, const Approximation& a);

struct ObstructionEntry {
  Integer q;
  Integer q_next;
  Real bound;  // certified lower bound of rho_q / |1 - e^{2 pi i q alpha}|
};

struct ObstructionReport {
  std::vector<ObstructionEntry> entries;
  bool strictly_increasing = false;
  std::string flag;  // "obstruction", "no obstruction", "inconclusive"
};

struct Profile {
  std::string name;
  std::function<Real(const Integer&)> rho;
  static Profile LogOverN();
  static Profile Inverse();
  static Profile Geometric();
  static Profile Named(const std::string& name);
};

// Uses convergents k = k_first.. with q_k <= depth.
ObstructionReport DiophantineObstruction(const Profile& rho, const Quad& alpha, const Integer& depth,
                                         size_t k_first = 1);

}  // namespace cobound

#endif  // COBOUND_DIOPHANTINE_H_
