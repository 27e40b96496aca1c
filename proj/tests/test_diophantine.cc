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

#include <boost/math/constants/constants.hpp>
#include <cmath>

#include "cobound/diophantine.h"
#include "cobound/fourier.h"
#include "cobound/transforms.h"

using namespace cobound;

namespace {

Quad Q(const char* s) { return Quad::Parse(s); }

std::vector<std::pair<long, long>> Convergents(const ContinuedFraction& cf) {
  std::vector<std::pair<long, long>> out;
  for (const auto& [p, q] : cf.convergents) out.push_back({p.get_si(), q.get_si()});
  return out;
}

StepFunction Ind(const Quad& lo, const Quad& hi, const Quad& v = 1) {
  return StepFunction::Indicator(IntervalSet::Span(lo, hi), v);
}

// Least q >= 2 in double precision, with a margin test so a near tie fails loudly.
long BruteForceLeastQ(const std::vector<double>& x, unsigned d, long q_max) {
  for (long q = 2; q <= q_max; ++q) {
    bool ok = true;
    for (double v : x) {
      double e = std::fabs(q * v - std::round(q * v));
      double lhs = std::pow(e, d) * q;
      REQUIRE(std::fabs(lhs - 1) > 1e-9);
      if (lhs >= 1) ok = false;
    }
    if (ok) return q;
  }
  return -1;
}

}  // namespace

TEST_CASE("continued fraction examples") {
  ContinuedFraction half = ContinuedFractionExpand(Quad::Ratio(1, 2), 6);
  CHECK(half.quotients == std::vector<Integer>{0, 2});
  CHECK(Convergents(half) == std::vector<std::pair<long, long>>{{0, 1}, {1, 2}});
  CHECK(half.truncated);

  ContinuedFraction gold = ContinuedFractionExpand(Q("(√5-1)/2"), 6);
  CHECK(gold.quotients == std::vector<Integer>{0, 1, 1, 1, 1, 1});
  CHECK(Convergents(gold) == std::vector<std::pair<long, long>>{{0, 1}, {1, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 8}});
  CHECK(gold.period_start == 1);
  CHECK(gold.period_length == 1);
  CHECK(!gold.truncated);

  ContinuedFraction r2 = ContinuedFractionExpand(Q("√2-1"), 4);
  CHECK(r2.quotients == std::vector<Integer>{0, 2, 2, 2});
  CHECK(Convergents(r2) == std::vector<std::pair<long, long>>{{0, 1}, {1, 2}, {2, 5}, {5, 12}});
  CHECK(r2.period_start == 1);
  CHECK(r2.period_length == 1);

  ContinuedFraction r3 = ContinuedFractionExpand(Q("√3-1"), 7);
  CHECK(r3.quotients == std::vector<Integer>{0, 1, 2, 1, 2, 1, 2});
  CHECK(r3.period_length == 2);
}

TEST_CASE("convergent invariants") {
  for (const char* a : {"√2-1", "(√5-1)/2", "√3-1", "√7-2", "(√13-3)/2", "√11-3"}) {
    Quad alpha = Q(a);
    ContinuedFraction cf = ContinuedFractionExpand(alpha, 25);
    REQUIRE(cf.convergents.size() == 25);
    for (size_t k = 1; k < cf.convergents.size(); ++k) {
      const auto& [p, q] = cf.convergents[k];
      const auto& [pp, qp] = cf.convergents[k - 1];
      Integer det = p * qp - pp * q;
      CHECK(abs(det) == 1);
      if (k >= 2) CHECK(qp < q);
      // Alternating sides.
      Quad e = Quad(Rational(q)) * alpha - Quad(Rational(p));
      Quad ep = Quad(Rational(qp)) * alpha - Quad(Rational(pp));
      CHECK(e.sign() * ep.sign() < 0);
    }
    for (size_t k = 0; k + 1 < cf.convergents.size(); ++k) {
      const auto& [p, q] = cf.convergents[k];
      Quad e = (Quad(Rational(q)) * alpha - Quad(Rational(p))).abs();
      CHECK(e * Quad(Rational(cf.convergents[k + 1].second)) < Quad(1));
    }
  }
}

TEST_CASE("simultaneous approximation examples") {
  // Common denominator: q = 6 clears both errors.
  Approximation six{6, {2, 3}};
  CHECK(ApproximationHolds({Quad::Ratio(1, 3), Quad::Ratio(1, 2)}, 1, six));
  Approximation least = SimultaneousApproximation({Quad::Ratio(1, 3), Quad::Ratio(1, 2)}, 1, 100);
  CHECK(least.q == 2);
  CHECK(least.p == std::vector<Integer>{1, 1});
  Approximation exact = SimultaneousApproximation({Quad::Ratio(1, 3), Quad::Ratio(1, 2)}, 1, 100, 3);
  CHECK(exact.q == 6);
  CHECK(exact.p == std::vector<Integer>{2, 3});

  // |5(√2-1) - 2| < 5^{-1/2} holds, but q = 2 is already enough.
  CHECK(ApproximationHolds({Q("√2-1")}, 2, Approximation{5, {2}}));
  Approximation r2 = SimultaneousApproximation({Q("√2-1")}, 2, 100);
  CHECK(r2.q == 2);
  CHECK(r2.p == std::vector<Integer>{1});
  CHECK(SimultaneousApproximation({Q("√2-1")}, 2, 100, 1).q == 1);

  CHECK_THROWS_AS(SimultaneousApproximation({Q("√2-1")}, 0, 100), std::invalid_argument);
  CHECK_THROWS_AS(SimultaneousApproximation({Quad(1)}, 2, 100), std::invalid_argument);
}

TEST_CASE("simultaneous approximation against brute force") {
  struct Case {
    std::vector<const char*> x;
    unsigned d;
  };
  std::vector<Case> cases = {
      {{"√2-1", "√3-1"}, 4}, {{"√2-1", "√3-1"}, 1}, {{"√2-1", "√3-1"}, 2},
      {{"(√5-1)/2"}, 3},     {{"√7-2", "√11-3"}, 2}, {{"√2-1", "(√3-1)/2", "√5-2"}, 6},
  };
  for (const auto& c : cases) {
    std::vector<Quad> x;
    std::vector<double> xd;
    for (const char* s : c.x) {
      x.push_back(Q(s));
      xd.push_back(x.back().to_double());
    }
    long oracle = BruteForceLeastQ(xd, c.d, 5000);
    REQUIRE(oracle > 0);
    Approximation a = SimultaneousApproximation(x, c.d, 5000);
    CHECK(a.q == oracle);
    CHECK(ApproximationHolds(x, c.d, a));
  }
}

TEST_CASE("not found carries a retry bound") {
  try {
    SimultaneousApproximation({Quad::Ratio(1, 2)}, 1, 3, 3);
    FAIL("expected ApproximationNotFound");
  } catch (const ApproximationNotFound& e) {
    CHECK(e.retry_bound > 3);
  }
}

TEST_CASE("fourier transfer examples") {
  InitPrecision();
  Quad gold = Q("(√5-1)/2");
  FourierProfile f;
  f.coeff[1] = {Real(1), Real(0)};
  FourierTransfer t = RotationTransferFourier(f, gold, 4);
  double expect = 1 / (2 * std::sin(M_PI * gold.to_double()));
  CHECK(t.h.coeff.at(1).abs().convert_to<double>() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::fabs(expect - 0.5365) < 1e-4);
  REQUIRE(t.tail_bound);
  CHECK(*t.tail_bound == 0);

  FourierTransfer zero = RotationTransferFourier(FourierProfile{}, gold, 8);
  CHECK(zero.h.coeff.empty());
  CHECK(*zero.tail_bound == 0);

  FourierProfile bad;
  bad.coeff[0] = {Real(1), Real(0)};
  CHECK_THROWS_AS(RotationTransferFourier(bad, gold, 4), std::invalid_argument);
  CHECK_THROWS_AS(RotationTransferFourier(f, Quad::Ratio(1, 3), 4), std::invalid_argument);
}

TEST_CASE("eigenfunctions and powers") {
  InitPrecision();
  Quad alpha = Q("√2-1");
  for (long k : {1, 2, 5}) {
    FourierProfile f;
    f.coeff[k] = {Real(1), Real(0)};
    for (long m : {1, 2, 3}) {
      Quad a = Quad(m) * alpha;
      FourierTransfer t = RotationTransferFourier(f, a, k);
      Complex e = Expi(ToReal(a) * k);
      Complex want = t.h.coeff.at(k);
      // h(1 - e^{2 pi i k m alpha}) = 1.
      Real re = want.re * (1 - e.re) + want.im * e.im;
      Real im = want.im * (1 - e.re) - want.re * e.im;
      CHECK(abs(re - 1) < Real("1e-40"));
      CHECK(abs(im) < Real("1e-40"));
      CHECK(FourierResidual(f, t.h, a, 1000) < Real("1e-12"));
    }
  }
}

TEST_CASE("trigonometric polynomials are solved exactly") {
  InitPrecision();
  Quad alpha = Q("(√5-1)/2");
  FourierProfile f;
  f.coeff[1] = {Real("0.5"), Real("-0.25")};
  f.coeff[-1] = {Real("0.5"), Real("0.25")};
  f.coeff[3] = {Real("-1"), Real("2")};
  f.coeff[-3] = {Real("-1"), Real("-2")};
  CHECK(f.conjugate_symmetric(Real("1e-40")));
  CHECK(f.degree() == 3);
  FourierTransfer t = RotationTransferFourier(f, alpha, 3);
  CHECK(t.h.conjugate_symmetric(Real("1e-30")));
  Real witness;
  CHECK(FourierResidual(f, t.h, alpha, 1000, &witness) < Real("1e-30"));

  // A lower band leaves the degree-3 terms in the tail.
  FourierTransfer low = RotationTransferFourier(f, alpha, 1);
  CHECK(*low.tail_bound > 0);
  CHECK(FourierResidual(f, low.h, alpha, 1000) > Real("1"));
}

TEST_CASE("small divisor bounds bracket the exact value") {
  InitPrecision();
  for (const char* a : {"√2-1", "(√5-1)/2", "√3-1"}) {
    Quad alpha = Q(a);
    for (long n = 1; n <= 200; ++n) {
      Real dist = ToReal(DistanceToInteger(Quad(n) * alpha));
      Real mod = Expi(ToReal(alpha) * n).re;
      Real chord = boost::multiprecision::sqrt(2 - 2 * mod);
      CHECK(chord >= 4 * dist);
      CHECK(chord <= 2 * boost::math::constants::pi<Real>() * dist);
    }
  }
}

TEST_CASE("obstruction examples") {
  Quad gold = Q("(√5-1)/2");
  ContinuedFraction cf = ContinuedFractionExpand(gold, 12);
  Integer depth = cf.convergents[10].second;
  ObstructionReport log_rep = DiophantineObstruction(Profile::LogOverN(), gold, depth, 3);
  CHECK(log_rep.entries.size() == 8);
  CHECK(log_rep.entries.front().q == cf.convergents[3].second);
  CHECK(log_rep.entries.back().q == depth);
  CHECK(log_rep.strictly_increasing);
  CHECK(log_rep.flag == "obstruction");
  // Bounds are certified: below the true ratio.
  for (const auto& e : log_rep.entries) {
    Real q = ToReal(Rational(e.q));
    Real chord = abs(Real(1) - Expi(ToReal(gold) * q).re);
    Real exact_ratio = (log(q) / q) / boost::multiprecision::sqrt(2 * chord);
    CHECK(e.bound <= exact_ratio);
  }

  ObstructionReport geo = DiophantineObstruction(Profile::Geometric(), gold, 1000);
  CHECK(geo.flag == "no obstruction");
  CHECK(geo.entries.back().bound < Real("1e-100"));

  ObstructionReport inv = DiophantineObstruction(Profile::Inverse(), Q("√2-1"), 100000);
  CHECK(inv.flag == "inconclusive");
  Real lo = inv.entries.front().bound, hi = inv.entries.front().bound;
  for (const auto& e : inv.entries) {
    lo = e.bound < lo ? e.bound : lo;
    hi = e.bound > hi ? e.bound : hi;
  }
  CHECK(hi < 2 * lo);

  CHECK_THROWS_AS(DiophantineObstruction(Profile::LogOverN(), gold, 2), std::invalid_argument);
  CHECK_THROWS_AS(DiophantineObstruction(Profile::LogOverN(), Quad::Ratio(1, 3), 100), std::invalid_argument);
  CHECK(Profile::Named("log").name == "log(n)/n");
  CHECK_THROWS(Profile::Named("nope"));
}

TEST_CASE("eigenvalue witness examples") {
  InitPrecision();
  Transform rot(Rotation(Quad::Ratio(1, 3)));
  const IntervalMap& t = *rot.interval_map();
  StepFunction F = Ind(0, Quad::Ratio(1, 3));
  StepFunction h = Ind(Quad::Ratio(1, 3), Quad::Ratio(2, 3), Quad::Ratio(-2, 3)) +
                   Ind(Quad::Ratio(2, 3), 1, Quad::Ratio(-1, 3));
  // h is a transfer for F - 1/3.
  CHECK((h - t.pullback(h) - (F - StepFunction::Constant(Quad::Ratio(1, 3)))).sup_abs().is_zero());
  EigenvalueReport rep = EigenvalueWitness(F, t, h, 1000, Real("1e-12"));
  CHECK(rep.passed);
  CHECK(rep.c == Quad::Ratio(1, 3));
  CHECK(rep.c_rational);
  CHECK(rep.modulus_error < Real("1e-12"));
  CHECK(abs(rep.eigenvalue.re + Real("0.5")) < Real("1e-40"));

  StepFunction corrupted = h + Ind(Quad::Ratio(1, 2), Quad::Ratio(7, 12), Quad::Ratio(1, 10));
  EigenvalueReport bad = EigenvalueWitness(F, t, corrupted, 1000, Real("1e-12"));
  CHECK(!bad.passed);
  CHECK(bad.max_residual > Real("1e-6"));
  Quad w = bad.witness;
  bool near = (Quad::Ratio(1, 2) <= w && w < Quad::Ratio(7, 12)) ||
              (Quad::Ratio(1, 6) <= w && w < Quad::Ratio(1, 4));
  CHECK(near);

  // Integer mean: eigenvalue 1.
  Transform half(Rotation(Quad::Ratio(1, 2)));
  StepFunction F2 = Ind(0, Quad::Ratio(1, 2), 2);
  EigenvalueReport one = EigenvalueWitness(F2, *half.interval_map(), Ind(0, Quad::Ratio(1, 2)), 500, Real("1e-12"));
  CHECK(one.passed);
  CHECK(one.c == 1);
  CHECK(abs(one.eigenvalue.re - 1) < Real("1e-40"));

  CHECK_THROWS_AS(EigenvalueWitness(Ind(0, Quad::Ratio(1, 2), Quad::Ratio(1, 2)), t, h, 10, Real("1e-12")),
                  std::invalid_argument);
}
