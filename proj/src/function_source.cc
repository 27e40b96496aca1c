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

#include "cobound/function_source.h"

#include <stdexcept>

namespace cobound {

FunctionSource FunctionSource::Polynomial(const Rational& c0, const Rational& c1, const Rational& c2,
                                          std::string name) {
  FunctionSource s;
  s.c0_ = c0;
  s.c1_ = c1;
  s.c2_ = c2;
  if (name.empty()) name = RationalString(c0) + "+" + RationalString(c1) + "x+" + RationalString(c2) + "x^2";
  s.name_ = std::move(name);
  return s;
}

FunctionSource FunctionSource::Step(StepFunction data, std::string name) {
  if (data.lo() != 0 || data.hi() != 1) throw std::invalid_argument("step source must live on [0,1)");
  FunctionSource s;
  s.step_ = std::move(data);
  s.name_ = std::move(name);
  return s;
}

Quad FunctionSource::resolution() const {
  if (!step_) return Quad(Rational(1, 4));
  Quad best(1);
  for (size_t i = 0; i < step_->num_segments(); ++i) best = min(best, step_->segment(i).length());
  return best;
}

StepFunction FunctionSource::base() const {
  if (step_) return *step_;
  return refine(Rational(1, 4));
}

StepFunction FunctionSource::refine(const Rational& delta) const {
  if (delta <= 0) throw std::invalid_argument("refinement resolution must be positive");
  if (step_) {
    if (Quad(delta) < resolution()) {
      throw std::invalid_argument("step source has no refiner below resolution " + resolution().str());
    }
    return *step_;
  }
  Rational inv = 1 / delta;
  Integer k;
  mpz_cdiv_q(k.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
  if (!k.fits_slong_p() || k > 100000000) throw std::invalid_argument("refinement too fine");
  long bins = k.get_si();
  std::vector<Quad> cuts, values;
  cuts.reserve(bins);
  values.reserve(bins);
  for (long i = 0; i < bins; ++i) {
    Rational lo(i, bins), mid(2 * i + 1, 2 * bins);
    lo.canonicalize();
    mid.canonicalize();
    cuts.emplace_back(lo);
    values.emplace_back(value(mid));
  }
  return StepFunction::FromBreaks(std::move(cuts), std::move(values), Quad(1));
}

Rational FunctionSource::value(const Rational& x) const {
  if (step_) return step_->evaluate(Quad(x)).rational();
  return c0_ + c1_ * x + c2_ * x * x;
}

Rational FunctionSource::integral(const Rational& lo, const Rational& hi) const {
  if (step_) return step_->integral_over(IntervalSet::Span(Quad(lo), Quad(hi))).rational();
  auto prim = [this](const Rational& x) -> Rational {
    return c0_ * x + c1_ * x * x / 2 + c2_ * x * x * x / 3;
  };
  return prim(hi) - prim(lo);
}

std::pair<Rational, Rational> FunctionSource::range(const Rational& lo, const Rational& hi) const {
  if (step_) {
    StepFunction part = step_->restrict(IntervalSet::Span(Quad(lo), Quad(hi)));
    Rational mn, mx;
    bool first = true;
    for (size_t i = 0; i < step_->num_segments(); ++i) {
      Interval seg = step_->segment(i);
      if (!(seg.lo < Quad(hi) && Quad(lo) < seg.hi)) continue;
      Rational v = step_->values()[i].rational();
      if (first || v < mn) mn = v;
      if (first || v > mx) mx = v;
      first = false;
    }
    return {mn, mx};
  }
  Rational a = value(lo), b = value(hi);
  Rational mn = a < b ? a : b, mx = a < b ? b : a;
  if (c2_ != 0) {
    Rational vx = -c1_ / (2 * c2_);
    if (lo < vx && vx < hi) {
      Rational vv = value(vx);
      if (vv < mn) mn = vv;
      if (vv > mx) mx = vv;
    }
  }
  return {mn, mx};
}

Rational FunctionSource::oscillation(const Rational& lo, const Rational& hi) const {
  auto [mn, mx] = range(lo, hi);
  return mx - mn;
}

Rational FunctionSource::sup_abs() const {
  if (step_) return step_->sup_abs().rational();
  auto [mn, mx] = range(0, 1);
  return abs(mn) > abs(mx) ? Rational(abs(mn)) : Rational(abs(mx));
}

FunctionSource FunctionSource::shifted(const Rational& c) const {
  if (step_) {
    return Step(step_->map([&c](const Quad& v) { return v - Quad(c); }), name_ + "-" + RationalString(c));
  }
  return Polynomial(c0_ - c, c1_, c2_, name_ + "-" + RationalString(c));
}

}  // namespace cobound
