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

#ifndef COBOUND_STEP_FUNCTION_H_
#define COBOUND_STEP_FUNCTION_H_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobound/interval_set.h"
#include "cobound/quad.h"
#include "cobound/real.h"

namespace cobound {

// Step function on a half-open domain [lo, hi) (default [0,1)).
// Stored as breakpoints cuts[0] = lo < cuts[1] < ... with values[i] on
// [cuts[i], cuts[i+1]); neighbouring equal values are merged.
class StepFunction {
 public:
  StepFunction() : StepFunction(Quad(0), Quad(1)) {}
  StepFunction(const Quad& lo, const Quad& hi);

  static StepFunction Constant(const Quad& v, const Quad& lo = 0, const Quad& hi = 1);
  static StepFunction Indicator(const IntervalSet& s, const Quad& v = 1,
                                const Quad& lo = 0, const Quad& hi = 1);
  // Supports must be pairwise disjoint; zero off their union.
  static StepFunction FromPieces(const std::vector<std::pair<IntervalSet, Quad>>& pieces,
                                 const Quad& lo = 0, const Quad& hi = 1);
  static StepFunction FromBreaks(std::vector<Quad> cuts, std::vector<Quad> values, const Quad& hi);

  const Quad& lo() const { return cuts_.front(); }
  const Quad& hi() const { return hi_; }
  const std::vector<Quad>& cuts() const { return cuts_; }
  const std::vector<Quad>& values() const { return values_; }
  size_t num_segments() const { return values_.size(); }
  Interval segment(size_t i) const {
    return {cuts_[i], i + 1 < cuts_.size() ? cuts_[i + 1] : hi_};
  }
  size_t segment_index(const Quad& x) const;

  Quad evaluate(const Quad& x) const;
  // Grouped by value (ascending), zero omitted.
  std::vector<std::pair<IntervalSet, Quad>> pieces() const;
  IntervalSet support() const;
  IntervalSet where(const std::function<bool(const Quad&)>& pred) const;

  Quad integral() const;
  Quad integral_over(const IntervalSet& s) const;
  StepFunction restrict(const IntervalSet& s) const;
  // Largest |value| over segments meeting s in positive measure (0 if none).
  Quad sup_abs_over(const IntervalSet& s) const;
  Quad sup_abs() const;
  Quad max_value() const;
  Quad min_value() const;

  StepFunction map(const std::function<Quad(const Quad&)>& g) const;
  StepFunction abs() const { return map([](const Quad& v) { return v.abs(); }); }
  static StepFunction Combine(const StepFunction& a, const StepFunction& b,
                              const std::function<Quad(const Quad&, const Quad&)>& op);

  StepFunction operator-() const { return map([](const Quad& v) { return -v; }); }
  friend StepFunction operator+(const StepFunction& a, const StepFunction& b);
  friend StepFunction operator-(const StepFunction& a, const StepFunction& b);
  friend StepFunction operator*(const Quad& c, const StepFunction& f);
  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  void canonicalize();

  std::vector<Quad> cuts_;
  std::vector<Quad> values_;
  Quad hi_;
};

// r in [1, inf]; finite r is rational.
struct NormIndex {
  bool infinite = false;
  Rational r{1};

  static NormIndex Inf() { return {true, 0}; }
  static NormIndex Of(const Rational& r);
  static NormIndex Parse(const std::string& s);
  bool is_integer() const { return !infinite && r.get_den() == 1; }
  std::string str() const { return infinite ? "inf" : RationalString(r); }
};

struct NormValue {
  std::optional<Quad> exact;  // the norm itself, when r in {1, inf}
  std::optional<Quad> power;  // integral of |f|^r, when r is an integer
  Real approx;

  std::string str() const;
};

NormValue LrNorm(const StepFunction& f, const NormIndex& r);
// Norm restricted to s (integrals over s only, sup over s only).
NormValue LrNormOver(const StepFunction& f, const NormIndex& r, const IntervalSet& s);

}  // namespace cobound

#endif  // COBOUND_STEP_FUNCTION_H_
