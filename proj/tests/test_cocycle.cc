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

#include "cobound/cocycle.h"

using namespace cobound;

namespace {

Quad Q(const char* s) { return Quad::Parse(s); }

StepFunction RandomStep(std::mt19937_64& rng, int den) {
  std::uniform_int_distribution<int> val(-4, 4);
  std::vector<Quad> cuts, values;
  for (int i = 0; i < den; ++i) {
    if (i == 0 || rng() % 3 == 0) {
      cuts.push_back(Quad::Ratio(i, den));
      values.push_back(Quad(val(rng)));
    }
  }
  return StepFunction::FromBreaks(cuts, values, Quad(1));
}

StepFunction Ind(const Quad& lo, const Quad& hi, const Quad& v = 1) {
  return StepFunction::Indicator(IntervalSet::Span(lo, hi), v);
}

// sigma fixes [0,1/3) and swaps [1/3,2/3) with [2/3,1).
IntervalMap ThirdSwap() {
  return IntervalMap::FromBranches({{Quad(0), Quad::Ratio(1, 3), Quad(0)},
                                    {Quad::Ratio(1, 3), Quad::Ratio(2, 3), Quad::Ratio(1, 3)},
                                    {Quad::Ratio(2, 3), Quad(1), Quad::Ratio(-1, 3)}});
}

}  // namespace

TEST_CASE("birkhoff_sum examples") {
  Transform rot(Rotation(Q("√2-1")));
  CHECK(BirkhoffSum(rot, StepFunction(), 7, Quad::Ratio(1, 5)).is_zero());
  StepFunction f = Ind(0, Quad::Ratio(1, 2)) - StepFunction::Constant(Quad::Ratio(1, 2));
  CHECK(BirkhoffSum(rot, f, 0, 0).is_zero());
  Quad oracle, x = 0;
  for (int k = 0; k < 5; ++k) {
    oracle += f.evaluate(x);
    x = (x + Q("√2-1")).frac();
  }
  CHECK(BirkhoffSum(rot, f, 5, 0) == oracle);
  // Orbit 0, .414, .828, .243, .657 visits [0,1/2) three times.
  CHECK(oracle == Quad::Ratio(1, 2));

  Transform odo(RankOneMachine::Odometer(2, 2));
  CHECK(BirkhoffSum(odo, f, 4, 0) == BirkhoffSum(odo, f, 4, 0));
  CHECK_THROWS_AS(BirkhoffSum(odo, f, 5, 0), UndefinedError);
}

TEST_CASE("exact sums agree with orbit evaluation") {
  std::mt19937_64 rng(3);
  Transform rot(Rotation(Q("(√5-1)/2")));
  StepFunction f = RandomStep(rng, 12);
  BirkhoffSums sums(*rot.interval_map(), f);
  for (long n = 1; n <= 40; ++n) {
    sums.advance();
    for (int i = 0; i < 20; ++i) {
      Quad x = Quad::Ratio(std::uniform_int_distribution<int>(0, 996)(rng), 997);
      CHECK(sums.current().evaluate(x) == BirkhoffSum(rot, f, n, x));
    }
  }
}

TEST_CASE("telescoping identity S_{n+m} = S_n + S_m o t^n") {
  std::mt19937_64 rng(9);
  Transform rot(Rotation(Q("√3-1")));
  StepFunction f = RandomStep(rng, 10);
  for (int trial = 0; trial < 200; ++trial) {
    long n = std::uniform_int_distribution<long>(0, 20)(rng), m = std::uniform_int_distribution<long>(0, 20)(rng);
    Quad x = Quad::Ratio(std::uniform_int_distribution<int>(0, 100)(rng), 101);
    Quad y = x;
    for (long k = 0; k < n; ++k) y = rot.apply(y);
    CHECK(BirkhoffSum(rot, f, n + m, x) == BirkhoffSum(rot, f, n, x) + BirkhoffSum(rot, f, m, y));
  }
}

TEST_CASE("sweep of an exact coboundary stays below 2||h||") {
  Transform rot(Rotation(Q("√2-1")));
  StepFunction h = Ind(0, Quad::Ratio(1, 2));
  StepFunction f = h - rot.interval_map()->pullback(h);
  SweepOptions opt;
  opt.transfer = h;
  CocycleReport rep = CocycleNormSweep(rot, f, NormIndex::Inf(), 100, opt);
  REQUIRE(rep.entries.size() == 100);
  for (const auto& e : rep.entries) CHECK(*e.norm.exact <= 2);
  CHECK(rep.verdict == Verdict::kBounded);
  CHECK(*rep.bound->exact == 2);

  // Telescoping: S_n f = h - h o t^n exactly.
  BirkhoffSums sums(*rot.interval_map(), f);
  StepFunction hn = h;
  for (int n = 1; n <= 30; ++n) {
    sums.advance();
    hn = rot.interval_map()->pullback(hn);
    CHECK(sums.current() == h - hn);
  }
}

TEST_CASE("sweep of a non-coboundary grows") {
  // Under the rotation by 1/2, f(x) + f(x + 1/2) = 1 on [0,1/4), so S_n f grows linearly.
  Transform rot(Rotation(Quad::Ratio(1, 2)));
  StepFunction f = Ind(0, Quad::Ratio(1, 4)) + Ind(Quad::Ratio(1, 2), Quad::Ratio(3, 4)) -
                   StepFunction::Constant(Quad::Ratio(1, 2));
  CocycleReport rep = CocycleNormSweep(rot, f, NormIndex::Of(1), 64);
  CHECK(rep.verdict == Verdict::kGrowing);
  CHECK(rep.slope > 0.9);
  CHECK(*rep.entries.back().norm.exact == 32);
}

TEST_CASE("sampling takes over past the piece limit") {
  Transform rot(Rotation(Q("√2-1")));
  StepFunction f = Ind(0, Quad::Ratio(1, 3)) - StepFunction::Constant(Quad::Ratio(1, 3));
  SweepOptions opt;
  opt.piece_limit = 20;
  opt.samples = 256;
  CocycleReport rep = CocycleNormSweep(rot, f, NormIndex::Inf(), 60, opt);
  REQUIRE(rep.entries.size() == 60);
  CHECK(!rep.sampling_note.empty());
  CHECK(rep.entries.back().sampled);
  CHECK(!rep.entries.front().sampled);
  // Sampled sup never exceeds the exact sup.
  BirkhoffSums sums(*rot.interval_map(), f);
  for (const auto& e : rep.entries) {
    sums.advance();
    CHECK(*e.norm.exact <= sums.current().sup_abs());
  }
}

TEST_CASE("sweep norms are invariant under conjugation") {
  std::mt19937_64 rng(21);
  Transform rot(Rotation(Q("√2-1")));
  StepFunction f = RandomStep(rng, 8);
  f = f - StepFunction::Constant(f.integral());
  IntervalMap phi = IntervalMap::Matching(IntervalSet::Span(0, Quad::Ratio(1, 3)), IntervalSet::Span(Quad::Ratio(2, 3), 1))
                        .merged(IntervalMap::Matching(IntervalSet::Span(Quad::Ratio(1, 3), 1),
                                                      IntervalSet::Span(0, Quad::Ratio(2, 3))));
  IntervalMap conj = phi.after(rot.interval_map()->after(phi.inverse()));
  StepFunction g = phi.inverse().pullback(f);
  for (auto r : {NormIndex::Inf(), NormIndex::Of(1), NormIndex::Of(2)}) {
    CocycleReport a = CocycleNormSweep(rot, f, r, 25), b = CocycleNormSweep(Transform(conj), g, r, 25);
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t i = 0; i < a.entries.size(); ++i) {
      CHECK(a.entries[i].norm.exact == b.entries[i].norm.exact);
      CHECK(a.entries[i].norm.power == b.entries[i].norm.power);
    }
  }
}

TEST_CASE("schmidt tightness") {
  Transform rot(Rotation(Q("√2-1")));
  StepFunction h = Ind(Quad::Ratio(1, 5), Quad::Ratio(3, 5), 3);
  StepFunction f = h - rot.interval_map()->pullback(h);
  TightnessReport rep = SchmidtTightness(rot, f, Frac(1, 10), 60);
  for (const auto& e : rep.entries) CHECK(e.a_n <= Quad(2) * h.sup_abs());
  CHECK(rep.tight_candidate);

  TightnessReport zero = SchmidtTightness(rot, StepFunction(), Frac(1, 4), 20);
  for (const auto& e : zero.entries) CHECK(e.a_n.is_zero());

  // Smaller eps gives a larger bound.
  TightnessReport coarse = SchmidtTightness(rot, f, Frac(1, 2), 40), fine = SchmidtTightness(rot, f, Frac(1, 20), 40);
  for (size_t i = 0; i < coarse.entries.size(); ++i) CHECK(coarse.entries[i].a_n <= fine.entries[i].a_n);

  CHECK_THROWS_AS(SchmidtTightness(rot, f, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(SchmidtTightness(rot, f, 1, 5), std::invalid_argument);
}

TEST_CASE("cesaro transfer examples") {
  Transform rot(Rotation(Quad::Ratio(1, 3)));
  StepFunction f = Ind(0, Quad::Ratio(1, 3)) - StepFunction::Constant(Quad::Ratio(1, 3));
  StepFunction h1 = CesaroTransfer(rot, f, 1);
  CHECK(h1.sup_abs().is_zero());
  CHECK(CesaroResidual(rot, f, 1, h1).sup_abs().is_zero());
  CHECK(CesaroTransfer(rot, StepFunction(), 5).sup_abs().is_zero());

  StepFunction h = CesaroTransfer(rot, f, 3);
  CHECK(CesaroResidual(rot, f, 3, h).sup_abs().is_zero());
  // Pointwise oracle: both sides evaluated independently from orbits.
  for (const Quad& x : SampleGrid(1000)) {
    Quad avg = (BirkhoffSum(rot, f, 3, x)) / Quad(3);
    Quad lhs = f.evaluate(x) - avg;
    Quad hx = 0, hy = 0;
    Quad y = rot.apply(x);
    for (long k = 0; k < 3; ++k) {
      hx += BirkhoffSum(rot, f, k, x);
      hy += BirkhoffSum(rot, f, k, y);
    }
    CHECK(lhs == (hx - hy) / Quad(3));
  }
  CHECK_THROWS_AS(CesaroTransfer(rot, f, 0), std::invalid_argument);
}

TEST_CASE("cesaro identity on random triples") {
  std::mt19937_64 rng(2026);
  std::vector<Transform> maps = {Transform(Rotation(Q("√2-1"))), Transform(Rotation(Quad::Ratio(2, 7))),
                                 Transform(RankOneMachine::Odometer(2, 7)),
                                 Transform(SimplexTranslation(std::vector<Quad>{Q("(√5-1)/2"), Q("(3-√5)/2")}))};
  for (int trial = 0; trial < 20; ++trial) {
    const Transform& t = maps[trial % maps.size()];
    StepFunction f = RandomStep(rng, 6);
    long n = std::uniform_int_distribution<long>(1, 50)(rng);
    StepFunction h = CesaroTransfer(t, f, n);
    CHECK(CesaroResidual(t, f, n, h).sup_abs().is_zero());
    CHECK(h.sup_abs() <= Quad(n) * f.sup_abs());
  }
}

TEST_CASE("power rewrite") {
  Transform rot(Rotation(Q("√2-1")));
  StepFunction h = Ind(0, Quad::Ratio(1, 2));
  RewriteResult one = PowerRewrite(rot, h, 1);
  CHECK(one.transfers.at(0).second == h);
  CHECK(one.exact);

  // The height-2 column closed up cyclically is the rotation by 1/2.
  Transform odo(Rotation(Quad::Ratio(1, 2)));
  RewriteResult two = PowerRewrite(odo, h, 2);
  CHECK(two.exact);
  CHECK(two.transfers.at(0).second == StepFunction::Constant(1));
  CHECK(two.f.sup_abs().is_zero());

  // On the partial machine the identity holds where t^2 is defined.
  CHECK(PowerRewrite(Transform(RankOneMachine::Odometer(2, 3)), h, 2).exact);

  for (long n : {3, 5, 8}) CHECK(PowerRewrite(rot, Ind(Quad::Ratio(1, 7), Quad::Ratio(5, 7), 2), n).exact);
  CHECK_THROWS_AS(PowerRewrite(rot, h, 0), std::invalid_argument);
}

TEST_CASE("commuting rewrite") {
  Transform tau(Rotation(Q("√2-1"))), sigma(Rotation(Q("2√2-2")));
  StepFunction h = Ind(Quad::Ratio(1, 4), Quad::Ratio(2, 3), 5);
  RewriteResult r = PairRewrite(RewriteMode::kCommuting, tau, sigma, h);
  CHECK(r.exact);
  CHECK(r.relation_checks == 1000);
  const StepFunction& u = r.transfers.at(0).second;
  const StepFunction& v = r.transfers.at(1).second;
  for (const Quad& x : SampleGrid(1000)) {
    CHECK(r.f.evaluate(x) == u.evaluate(x) - u.evaluate(sigma.apply(x)));
    CHECK(r.f.evaluate(x) == v.evaluate(x) - v.evaluate(tau.apply(x)));
  }
  Transform other(RankOneMachine::Odometer(2, 3));
  CHECK_THROWS_AS(PairRewrite(RewriteMode::kCommuting, tau, other, h), std::exception);
}

TEST_CASE("conjugate rewrite") {
  Transform tau(Rotation(Quad::Ratio(1, 3))), sigma(ThirdSwap());
  StepFunction h = Ind(Quad::Ratio(1, 9), Quad::Ratio(1, 2), 2) + Ind(Quad::Ratio(5, 6), 1, -1);
  RewriteResult r = PairRewrite(RewriteMode::kConjugate, tau, sigma, h);
  CHECK(r.exact);
  const StepFunction& v = r.transfers.at(1).second;
  for (const Quad& x : SampleGrid(1000)) CHECK(r.f.evaluate(x) == v.evaluate(x) - v.evaluate(tau.apply(x)));
  CHECK_THROWS_AS(PairRewrite(RewriteMode::kCommuting, tau, sigma, h), std::invalid_argument);
}

TEST_CASE("verify coboundary") {
  Transform rot(Rotation(Q("√2-1")));
  StepFunction h = Ind(0, Quad::Ratio(1, 2));
  StepFunction f = h - rot.interval_map()->pullback(h);
  ResidualReport ok = VerifyCoboundary(rot, f, h, 1000, 100);
  CHECK(ok.sample_residual.is_zero());
  CHECK(ok.exact_residual->is_zero());
  CHECK(ok.within_bound);

  StepFunction bumped = f + Ind(Quad::Ratio(1, 10), Quad::Ratio(2, 10), Quad::Ratio(1, 1000));
  ResidualReport bad = VerifyCoboundary(rot, bumped, h, 1000, 10);
  CHECK(*bad.exact_residual == Quad::Ratio(1, 1000));
  CHECK(bad.sample_residual == Quad::Ratio(1, 1000));
}
