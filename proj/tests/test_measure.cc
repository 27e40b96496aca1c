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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cobound/function_source.h"
#include "cobound/step_function.h"

using namespace cobound;

namespace {

Quad Q(const char* s) { return Quad::Parse(s); }

IntervalSet RandomSet(std::mt19937_64& rng, int den) {
  std::uniform_int_distribution<int> pick(0, den);
  std::vector<std::pair<Quad, Quad>> raw;
  int k = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int i = 0; i < k; ++i) {
    int a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    raw.push_back({Quad::Ratio(a, den), Quad::Ratio(b, den)});
  }
  return IntervalSet::FromRaw(raw);
}

StepFunction RandomStep(std::mt19937_64& rng, int den) {
  std::uniform_int_distribution<int> val(-5, 5);
  std::vector<Quad> cuts, values;
  for (int i = 0; i < den; ++i) {
    if (i == 0 || rng() % 3 == 0) {
      cuts.push_back(Quad::Ratio(i, den));
      values.push_back(Quad(val(rng)));
    }
  }
  return StepFunction::FromBreaks(cuts, values, Quad(1));
}

}  // namespace

TEST_CASE("interval_set normalizes") {
  auto s = IntervalSet::FromRaw({{Q("0"), Q("1/2")}, {Q("1/2"), Q("3/4")}});
  REQUIRE(s.size() == 1);
  CHECK(s.intervals()[0].lo == Quad(0));
  CHECK(s.intervals()[0].hi == Q("3/4"));
  CHECK(IntervalSet::FromRaw({}).empty());
  CHECK(IntervalSet::FromRaw({}).measure() == Quad(0));
  auto t = IntervalSet::FromRaw({{Q("0"), Q("sqrt(2)-1")}, {Q("1/2"), Q("1")}});
  CHECK(t.size() == 2);
  CHECK(t.measure() == Q("sqrt(2)-1") + Q("1/2"));
  CHECK_THROWS_AS(IntervalSet::FromRaw({{Q("-1/2"), Q("1/2")}}), std::out_of_range);
  CHECK_THROWS_AS(IntervalSet::FromRaw({{Q("1/2"), Q("1/3")}}), std::invalid_argument);
}

TEST_CASE("measure examples") {
  CHECK(IntervalSet::FromRaw({{Q("0"), Q("1/3")}}).measure() == Q("1/3"));
  CHECK(IntervalSet::FromRaw({{Q("0"), Q("sqrt(2)-1")}}).measure() == Q("sqrt(2)-1"));
}

TEST_CASE("set algebra and splitting") {
  auto a = IntervalSet::FromRaw({{Q("0"), Q("1/2")}});
  auto b = IntervalSet::FromRaw({{Q("1/4"), Q("3/4")}});
  CHECK(a.intersect(b) == IntervalSet::Span(Q("1/4"), Q("1/2")));
  CHECK(a.subtract(b) == IntervalSet::Span(Q("0"), Q("1/4")));
  CHECK(a.unite(b) == IntervalSet::Span(Q("0"), Q("3/4")));
  CHECK(a.complement() == IntervalSet::Span(Q("1/2"), Q("1")));
  auto parts = IntervalSet::FromRaw({{Q("0"), Q("1/4")}, {Q("1/2"), Q("1")}}).split_equal(3);
  REQUIRE(parts.size() == 3);
  for (const auto& p : parts) CHECK(p.measure() == Q("1/4"));
  CHECK(parts[1] == IntervalSet::Span(Q("1/2"), Q("3/4")));
}

TEST_CASE("inclusion-exclusion holds exactly") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto a = RandomSet(rng, 24), b = RandomSet(rng, 36);
    CHECK(a.unite(b).measure() + a.intersect(b).measure() == a.measure() + b.measure());
    CHECK(a.subtract(b).measure() + a.intersect(b).measure() == a.measure());
  }
}

TEST_CASE("lr_norm examples") {
  auto f = StepFunction::FromBreaks({Q("0"), Q("1/2")}, {Q("1/2"), Q("-1/2")}, Quad(1));
  CHECK(*LrNorm(f, NormIndex::Of(1)).exact == Q("1/2"));
  StepFunction zero;
  for (auto r : {NormIndex::Of(1), NormIndex::Of(2), NormIndex::Of(Rational(3, 2)), NormIndex::Inf()}) {
    CHECK(LrNorm(zero, r).approx == 0);
  }
  auto g = StepFunction::FromBreaks({Q("0"), Q("1/3")}, {Q("2"), Q("-1")}, Quad(1));
  auto n2 = LrNorm(g, NormIndex::Of(2));
  CHECK(*n2.power == Quad(2));
  CHECK(abs(n2.approx - boost::multiprecision::sqrt(Real(2))) < Real("1e-45"));
  CHECK(*LrNorm(g, NormIndex::Inf()).exact == Quad(2));
  CHECK_THROWS(NormIndex::Of(Rational(1, 2)));
}

TEST_CASE("lr_norm is absolutely homogeneous") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto f = RandomStep(rng, 12);
    Quad c = Quad(static_cast<long>(rng() % 7) - 3) / Quad(2);
    CHECK(*LrNorm(c * f, NormIndex::Of(1)).exact == c.abs() * *LrNorm(f, NormIndex::Of(1)).exact);
    CHECK(*LrNorm(c * f, NormIndex::Inf()).exact == c.abs() * *LrNorm(f, NormIndex::Inf()).exact);
    auto p = LrNorm(c * f, NormIndex::Of(3));
    CHECK(abs(p.approx - ToReal(c.abs()) * LrNorm(f, NormIndex::Of(3)).approx) < Real("1e-40"));
  }
}

TEST_CASE("evaluate") {
  auto f = StepFunction::Indicator(IntervalSet::Span(Q("0"), Q("1/2")));
  CHECK(f.evaluate(Q("1/4")) == Quad(1));
  CHECK(f.evaluate(Q("1/2")) == Quad(0));
  auto g = StepFunction::Indicator(IntervalSet::Span(Q("0"), Q("sqrt(2)-1")));
  // 2/5 < sqrt(2) - 1 since (7/5)^2 = 49/25 < 2.
  CHECK(g.evaluate(Q("2/5")) == Quad(1));
  CHECK(g.evaluate(Q("5/12")) == Quad(0));
}

TEST_CASE("pieces merge equal values and integral matches Riemann sums") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto f = RandomStep(rng, 10);
    Quad by_pieces;
    for (const auto& [s, v] : f.pieces()) by_pieces += v * s.measure();
    Quad riemann;
    for (int k = 0; k < 60; ++k) riemann += f.evaluate(Quad::Ratio(k, 60)) * Quad::Ratio(1, 60);
    CHECK(by_pieces == f.integral());
    CHECK(riemann == f.integral());
    auto ps = f.pieces();
    for (size_t a = 0; a + 1 < ps.size(); ++a) CHECK(ps[a].second < ps[a + 1].second);
  }
  CHECK_THROWS(StepFunction::FromPieces({{IntervalSet::Span(0, Q("1/2")), Quad(1)},
                                         {IntervalSet::Span(Q("1/4"), 1), Quad(2)}}));
}

TEST_CASE("refine") {
  auto id = FunctionSource::Identity();
  CHECK(id.base().num_segments() == 4);
  auto r8 = id.refine(Rational(1, 8));
  CHECK(r8.num_segments() == 8);
  CHECK(r8.evaluate(Q("1/16")) == Q("1/16"));
  auto step = FunctionSource::Step(StepFunction::Indicator(IntervalSet::Span(0, Q("1/2"))));
  CHECK(step.refine(Rational(3, 4)) == step.base());
  CHECK_THROWS(step.refine(Rational(1, 4)));
  auto sq = FunctionSource::Square();
  auto r16 = sq.refine(Rational(1, 16));
  CHECK(r16.num_segments() == 16);
  // Exact L1 distance to x^2: per bin, integral of |x^2 - m^2| over [a, a+w).
  Rational dist = 0;
  for (int i = 0; i < 16; ++i) {
    Rational a = Frac(i, 16), w = Frac(1, 16), m = a + w / 2, mv = m * m;
    Rational b = a + w;
    // split at x = m where x^2 - m^2 changes sign
    auto prim = [&](const Rational& x) -> Rational { return x * x * x / 3 - mv * x; };
    dist += (prim(m) - prim(a)) * -1 + (prim(b) - prim(m));
  }
  CHECK(dist <= Rational(1, 16));
  // Oscillation per bin below delta for the built-in families.
  for (int i = 0; i < 16; ++i) CHECK(sq.oscillation(Frac(i, 16), Frac(i + 1, 16)) <= Rational(1, 8));
}
