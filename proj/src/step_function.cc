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

#include "cobound/step_function.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cobound {

namespace {

// Calls fn(value, overlap length) for every segment of f meeting s.
template <typename Fn>
void ForEachOverlap(const StepFunction& f, const IntervalSet& s, Fn fn) {
  size_t i = 0;
  const size_t n = f.num_segments();
  for (const auto& iv : s.intervals()) {
    if (iv.hi <= f.lo()) continue;
    if (f.hi() <= iv.lo) break;
    if (i < n && f.segment(i).hi <= iv.lo) i = f.segment_index(max(iv.lo, f.lo()));
    while (i < n) {
      Interval seg = f.segment(i);
      Quad a = max(seg.lo, iv.lo), b = min(seg.hi, iv.hi);
      if (a < b) fn(f.values()[i], b - a);
      if (iv.hi < seg.hi) break;
      ++i;
    }
  }
}

}  // namespace

StepFunction::StepFunction(const Quad& lo, const Quad& hi) : cuts_{lo}, values_{Quad(0)}, hi_(hi) {
  if (!(lo < hi)) throw std::invalid_argument("empty step function domain");
}

StepFunction StepFunction::Constant(const Quad& v, const Quad& lo, const Quad& hi) {
  StepFunction f(lo, hi);
  f.values_[0] = v;
  return f;
}

StepFunction StepFunction::FromBreaks(std::vector<Quad> cuts, std::vector<Quad> values, const Quad& hi) {
  if (cuts.empty() || cuts.size() != values.size()) throw std::invalid_argument("breaks/values size mismatch");
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) throw std::invalid_argument("breakpoints not increasing");
  }
  if (!(cuts.back() < hi)) throw std::invalid_argument("last breakpoint beyond domain");
  StepFunction f(cuts.front(), hi);
  f.cuts_ = std::move(cuts);
  f.values_ = std::move(values);
  f.canonicalize();
  return f;
}

StepFunction StepFunction::FromPieces(const std::vector<std::pair<IntervalSet, Quad>>& pieces,
                                      const Quad& lo, const Quad& hi) {
  std::vector<std::pair<Interval, Quad>> parts;
  for (const auto& [set, v] : pieces) {
    for (const auto& iv : set.intervals()) {
      if (iv.lo < lo || hi < iv.hi) throw std::out_of_range("piece outside domain");
      parts.push_back({iv, v});
    }
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& x, const auto& y) { return x.first.lo < y.first.lo; });
  std::vector<Quad> cuts{lo}, values{Quad(0)};
  Quad at = lo;
  for (const auto& [iv, v] : parts) {
    if (iv.lo < at) throw std::invalid_argument("overlapping step pieces");
    if (cuts.back() == iv.lo) {
      values.back() = v;
    } else {
      cuts.push_back(iv.lo);
      values.push_back(v);
    }
    at = iv.hi;
    if (at < hi) {
      cuts.push_back(at);
      values.push_back(Quad(0));
    }
  }
  StepFunction f(lo, hi);
  f.cuts_ = std::move(cuts);
  f.values_ = std::move(values);
  f.canonicalize();
  return f;
}

StepFunction StepFunction::Indicator(const IntervalSet& s, const Quad& v, const Quad& lo, const Quad& hi) {
  return FromPieces({{s.intersect(IntervalSet::Span(lo, hi)), v}}, lo, hi);
}

void StepFunction::canonicalize() {
  size_t w = 0;
  for (size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == values_[w]) continue;
    ++w;
    cuts_[w] = std::move(cuts_[i]);
    values_[w] = std::move(values_[i]);
  }
  cuts_.resize(w + 1);
  values_.resize(w + 1);
}

size_t StepFunction::segment_index(const Quad& x) const {
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
  if (it == cuts_.begin()) return 0;
  return static_cast<size_t>(it - cuts_.begin()) - 1;
}

Quad StepFunction::evaluate(const Quad& x) const {
  if (x < lo() || !(x < hi_)) return Quad(0);
  return values_[segment_index(x)];
}

std::vector<std::pair<IntervalSet, Quad>> StepFunction::pieces() const {
  std::map<Quad, std::vector<Interval>> groups;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].is_zero()) continue;
    groups[values_[i]].push_back(segment(i));
  }
  std::vector<std::pair<IntervalSet, Quad>> out;
  for (auto& [v, ivs] : groups) out.push_back({IntervalSet::FromIntervals(std::move(ivs)), v});
  return out;
}

IntervalSet StepFunction::where(const std::function<bool(const Quad&)>& pred) const {
  std::vector<Interval> ivs;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (pred(values_[i])) ivs.push_back(segment(i));
  }
  return IntervalSet::FromIntervals(std::move(ivs));
}

IntervalSet StepFunction::support() const {
  return where([](const Quad& v) { return !v.is_zero(); });
}

Quad StepFunction::integral() const {
  Quad s;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (!values_[i].is_zero()) s += values_[i] * segment(i).length();
  }
  return s;
}

Quad StepFunction::integral_over(const IntervalSet& s) const {
  Quad total;
  ForEachOverlap(*this, s, [&](const Quad& v, const Quad& len) {
    if (!v.is_zero()) total += v * len;
  });
  return total;
}

StepFunction StepFunction::restrict(const IntervalSet& s) const {
  StepFunction mask = Indicator(s, 1, lo(), hi_);
  return Combine(*this, mask, [](const Quad& v, const Quad& m) { return m.is_zero() ? Quad(0) : v; });
}

Quad StepFunction::sup_abs_over(const IntervalSet& s) const {
  Quad best;
  ForEachOverlap(*this, s, [&](const Quad& v, const Quad&) {
    Quad a = v.abs();
    if (best < a) best = a;
  });
  return best;
}

Quad StepFunction::sup_abs() const {
  Quad best;
  for (const auto& v : values_) {
    Quad a = v.abs();
    if (best < a) best = a;
  }
  return best;
}

Quad StepFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
Quad StepFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

StepFunction StepFunction::map(const std::function<Quad(const Quad&)>& g) const {
  StepFunction out = *this;
  for (auto& v : out.values_) v = g(v);
  out.canonicalize();
  return out;
}

StepFunction StepFunction::Combine(const StepFunction& a, const StepFunction& b,
                                   const std::function<Quad(const Quad&, const Quad&)>& op) {
  if (a.lo() != b.lo() || a.hi() != b.hi()) throw std::invalid_argument("step functions on different domains");
  StepFunction out(a.lo(), a.hi());
  out.cuts_.clear();
  out.values_.clear();
  out.cuts_.reserve(a.cuts_.size() + b.cuts_.size());
  out.values_.reserve(a.cuts_.size() + b.cuts_.size());
  size_t i = 0, j = 0;
  Quad at = a.lo();
  for (;;) {
    out.cuts_.push_back(at);
    out.values_.push_back(op(a.values_[i], b.values_[j]));
    const Quad* na = i + 1 < a.cuts_.size() ? &a.cuts_[i + 1] : nullptr;
    const Quad* nb = j + 1 < b.cuts_.size() ? &b.cuts_[j + 1] : nullptr;
    if (!na && !nb) break;
    if (na && (!nb || *na <= *nb)) {
      at = *na;
      if (nb && *nb == *na) ++j;
      ++i;
    } else {
      at = *nb;
      ++j;
    }
  }
  out.canonicalize();
  return out;
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  return StepFunction::Combine(a, b, [](const Quad& x, const Quad& y) { return x + y; });
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) {
  return StepFunction::Combine(a, b, [](const Quad& x, const Quad& y) { return x - y; });
}

StepFunction operator*(const Quad& c, const StepFunction& f) {
  return f.map([&c](const Quad& v) { return c * v; });
}

NormIndex NormIndex::Of(const Rational& r) {
  if (r < 1) throw std::invalid_argument("norm index r must be >= 1");
  return {false, r};
}

NormIndex NormIndex::Parse(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "\xE2\x88\x9E") return Inf();
  return Of(ParseRational(s));
}

std::string NormValue::str() const {
  if (exact) return exact->str();
  return RealString(approx, 40);
}

NormValue LrNormOver(const StepFunction& f, const NormIndex& r, const IntervalSet& s) {
  NormValue out;
  if (r.infinite) {
    out.exact = f.sup_abs_over(s);
    out.approx = ToReal(*out.exact);
    return out;
  }
  if (r.r < 1) throw std::invalid_argument("norm index r must be >= 1");
  if (r.r == 1) {
    Quad total;
    ForEachOverlap(f, s, [&](const Quad& v, const Quad& len) {
      if (!v.is_zero()) total += v.abs() * len;
    });
    out.exact = total;
    out.power = total;
    out.approx = ToReal(total);
    return out;
  }
  InitPrecision();
  if (r.is_integer()) {
    unsigned k = static_cast<unsigned>(r.r.get_num().get_ui());
    Quad total;
    ForEachOverlap(f, s, [&](const Quad& v, const Quad& len) {
      if (!v.is_zero()) total += pow(v.abs(), k) * len;
    });
    out.power = total;
    out.approx = boost::multiprecision::pow(ToReal(total), Real(1) / Real(k));
    return out;
  }
  Real rr = ToReal(r.r);
  Real total = 0;
  ForEachOverlap(f, s, [&](const Quad& v, const Quad& len) {
    if (!v.is_zero()) total += boost::multiprecision::pow(ToReal(v.abs()), rr) * ToReal(len);
  });
  out.approx = boost::multiprecision::pow(total, Real(1) / rr);
  return out;
}

NormValue LrNorm(const StepFunction& f, const NormIndex& r) {
  return LrNormOver(f, r, IntervalSet::Span(f.lo(), f.hi()));
}

}  // namespace cobound
