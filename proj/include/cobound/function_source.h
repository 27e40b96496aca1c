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

#ifndef COBOUND_FUNCTION_SOURCE_H_
#define COBOUND_FUNCTION_SOURCE_H_

#include <optional>
#include <string>
#include <utility>

#include "cobound/step_function.h"

namespace cobound {

// A function on [0,1) known either exactly as a polynomial of degree <= 2
// with rational coefficients (refinable to any resolution) or as fixed step data.
class FunctionSource {
 public:
  // c0 + c1 x + c2 x^2.
  static FunctionSource Polynomial(const Rational& c0, const Rational& c1, const Rational& c2,
                                   std::string name = "");
  static FunctionSource Identity() { return Polynomial(0, 1, 0, "x"); }
  static FunctionSource Square() { return Polynomial(0, 0, 1, "x^2"); }
  static FunctionSource Centered() { return Polynomial(Rational(-1, 2), 1, 0, "x-1/2"); }
  static FunctionSource Step(StepFunction data, std::string name = "step");

  const std::string& name() const { return name_; }
  bool refinable() const { return !step_.has_value(); }
  // Finitely-valued sources are exactly the step sources and constant polynomials.
  bool infinitely_valued() const { return refinable() && (c1_ != 0 || c2_ != 0); }
  const Rational& c0() const { return c0_; }
  const Rational& c1() const { return c1_; }
  const Rational& c2() const { return c2_; }

  // Resolution of the base representation: 1/4 for polynomials, the
  // shortest segment for step data.
  Quad resolution() const;
  StepFunction base() const;
  // Uniform bins of width 1/ceil(1/delta), midpoint values. A step source
  // returns its data when delta is at least its resolution and throws otherwise.
  StepFunction refine(const Rational& delta) const;

  Rational value(const Rational& x) const;
  Rational integral(const Rational& lo, const Rational& hi) const;
  // Exact inf and sup of the polynomial over [lo, hi].
  std::pair<Rational, Rational> range(const Rational& lo, const Rational& hi) const;
  Rational oscillation(const Rational& lo, const Rational& hi) const;
  Rational sup_abs() const;
  Rational mean() const { return integral(0, 1); }
  // f - c.
  FunctionSource shifted(const Rational& c) const;

 private:
  Rational c0_, c1_, c2_;
  std::optional<StepFunction> step_;
  std::string name_;
};

}  // namespace cobound

#endif  // COBOUND_FUNCTION_SOURCE_H_
