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

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "cobound/cocycle.h"
#include "cobound/diophantine.h"
#include "cobound/fourier.h"
#include "cobound/non_coboundary.h"
#include "cobound/pipelines.h"
#include "cobound/stacking.h"
#include "cobound/step_coboundary.h"

using namespace cobound;

namespace {

using Rng = std::mt19937_64;

// Collects failed expectations for one criterion.
struct Tally {
  std::vector<std::string> failures;
  size_t checks = 0;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

long Uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Quad Q(const char* s) { return Quad::Parse(s); }

// Distinct sorted rationals in (0, 1) with denominator den.
std::vector<Quad> Cuts(Rng& rng, size_t k, long den) {
  std::vector<long> num;
  while (num.size() < k) {
    long v = Uniform(rng, 1, den - 1);
    if (std::find(num.begin(), num.end(), v) == num.end()) num.push_back(v);
  }
  std::sort(num.begin(), num.end());
  std::vector<Quad> out;
  for (long v : num) out.push_back(Quad(Frac(v, den)));
  return out;
}

StepFunction RandomStep(Rng& rng, size_t pieces, std::optional<Quad> extra_cut = std::nullopt) {
  std::vector<Quad> cuts{0};
  for (const auto& c : Cuts(rng, pieces - 1, 97)) cuts.push_back(c);
  if (extra_cut && std::find(cuts.begin(), cuts.end(), *extra_cut) == cuts.end()) {
    cuts.push_back(*extra_cut);
    std::sort(cuts.begin(), cuts.end());
  }
  std::vector<Quad> values;
  for (size_t i = 0; i < cuts.size(); ++i) values.push_back(Quad(Frac(Uniform(rng, -12, 12), Uniform(rng, 1, 6))));
  return StepFunction::FromBreaks(cuts, values, 1);
}

Quad RandomIrrational(Rng& rng) {
  long d = Uniform(rng, 0, 1) ? 2 : 5;
  Quad a(Frac(Uniform(rng, -5, 5), Uniform(rng, 1, 7)), Frac(Uniform(rng, 1, 4) * (Uniform(rng, 0, 1) ? 1 : -1), Uniform(rng, 1, 5)), d);
  return a.frac();
}

// Interval exchange: k pieces of rational length, permuted.
IntervalMap RandomIet(Rng& rng) {
  size_t k = Uniform(rng, 3, 5);
  std::vector<Quad> cuts{0};
  for (const auto& c : Cuts(rng, k - 1, 60)) cuts.push_back(c);
  cuts.push_back(1);
  std::vector<size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Branch> br;
  Quad at = 0;
  for (size_t i : perm) {
    br.push_back({cuts[i], cuts[i + 1], at - cuts[i]});
    at += cuts[i + 1] - cuts[i];
  }
  return IntervalMap::FromBranches(br);
}

Transform RandomTransform(Rng& rng, std::string& name) {
  switch (Uniform(rng, 0, 4)) {
    case 0: {
      Quad a = RandomIrrational(rng);
      name = "rotation " + a.str();
      return Transform(Rotation(a));
    }
    case 1: {
      Quad a(Frac(Uniform(rng, 1, 10), 11));
      name = "rotation " + a.str();
      return Transform(Rotation(a));
    }
    case 2: {
      long h = Uniform(rng, 3, 12);
      name = "uniform column " + std::to_string(h);
      return Transform(RankOneMachine::UniformColumn(h));
    }
    case 3: {
      int d = static_cast<int>(Uniform(rng, 2, 4));
      name = "odometer 2^" + std::to_string(d);
      return Transform(RankOneMachine::Odometer(2, d));
    }
    default:
      name = "interval exchange";
      return Transform(RandomIet(rng));
  }
}

StepFunction Levels(const RankOneMachine& m, size_t from, size_t to, const Quad& v) {
  std::vector<IntervalSet> ls(m.levels().begin() + from, m.levels().begin() + to);
  return StepFunction::Indicator(UnionAll(ls), v);
}

// ---------------------------------------------------------------------------

void CheckCesaro(Tally& t) {
  Rng rng(2026);
  for (int trial = 0; trial < 20; ++trial) {
    std::string name;
    Transform tr = RandomTransform(rng, name);
    StepFunction f = RandomStep(rng, Uniform(rng, 2, 6));
    long n = Uniform(rng, 1, 50);
    StepFunction h = CesaroTransfer(tr, f, n);
    Quad residual = CesaroResidual(tr, f, n, h).sup_abs();
    std::string tag = name + ", n = " + std::to_string(n);
    t.expect(residual.is_zero(), "nonzero residual " + residual.str() + " for " + tag);
    // Pointwise: f - S_n f / n = h - h o tau along single orbits.
    const IntervalMap& map = *tr.interval_map();
    for (int k = 0; k < 10; ++k) {
      Quad x(Frac(2 * Uniform(rng, 0, 4999) + 1, 10000));
      auto y = map.try_apply(x);
      if (!y) continue;
      Quad sn;
      try {
        sn = BirkhoffSum(map, f, n, x);
      } catch (const UndefinedError&) {
        continue;
      }
      Quad lhs = f.evaluate(x) - sn / Quad(n);
      t.expect(lhs == h.evaluate(x) - h.evaluate(*y), "pointwise identity fails at " + x.str() + " for " + tag);
    }
  }
}

void CheckTorus(Tally& t) {
  StepData d{{Surd::Parse("√2-1"), Surd::Parse("2-√2")}, {Surd::Parse("2-√2"), Surd::Parse("-(√2-1)")}};
  TorusCoboundary c = BuildTorusCoboundary(d);
  t.expect(c.bound == Surd(4), "bound 2m sum|a_j| is " + c.bound.str() + ", expected 4");
  std::vector<Quad> norms = TorusChartNorms(c, 10000);
  t.expect(norms.size() == 10000, "chart sweep length");
  Quad mx = 0;
  for (const auto& v : norms) mx = max(mx, v);
  t.expect(Surd(mx) < c.bound, "sup_{n <= 10^4} ||S_n f||_inf = " + mx.str() + " is not below 4");
  // Second route: exact orbit sums on the simplex, bounded by the chart values.
  OrbitSweep os = TorusOrbitSweep(c, 2000, 16);
  t.expect(os.max < c.bound, "orbit sweep max " + os.max.str() + " is not below 4");
  for (size_t n = 0; n < os.sup.size(); ++n)
    if (os.sup[n] > Surd(norms[n])) t.expect(false, "orbit sup exceeds the chart norm at n = " + std::to_string(n + 1));
}

void CheckRationalStacking(Tally& t) {
  StepFunction f = StepFunction::FromPieces({{IntervalSet::Span(0, Q("1/3")), Q("2/3")},
                                             {IntervalSet::Span(Q("1/3"), 1), Q("-1/3")}});
  RationalCoboundary rc = BuildRationalCoboundary(f);
  t.expect(rc.q == 3, "column height " + std::to_string(rc.q) + ", expected 3");
  RankOneMachine last;
  for (int k = 0; k < 5; ++k) {
    RankOneMachine m = rc.stage(k);
    StepFunction res = RationalResidual(rc, m);
    t.expect(res.sup_abs().is_zero(), "stage " + std::to_string(k) + " residual " + res.sup_abs().str());
    // Second route: pointwise on the defined region.
    for (long i = 0; i < 200; ++i) {
      Quad x(Frac(2 * i + 1, 400));
      if (auto y = m.map().try_apply(x))
        t.expect(f.evaluate(x) == rc.g.evaluate(x) - rc.g.evaluate(*y), "pointwise residual at stage " + std::to_string(k));
    }
    last = std::move(m);
  }
  // F = 1_A is integer-valued and F - 1/3 = f has transfer g.
  StepFunction F = f + StepFunction::Constant(Q("1/3"));
  Real tol("1e-12");
  EigenvalueReport ev = EigenvalueWitness(F, last.map(), rc.g, 1000, tol);
  t.expect(ev.passed, "eigenvalue witness did not pass");
  t.expect(ev.c == Q("1/3"), "c = " + ev.c.str() + ", expected 1/3");
  Complex want = Expi(Real(1) / 3);
  Real dist = boost::multiprecision::sqrt((ev.eigenvalue.re - want.re) * (ev.eigenvalue.re - want.re) +
                                          (ev.eigenvalue.im - want.im) * (ev.eigenvalue.im - want.im));
  t.expect(dist < tol, "eigenvalue differs from e^{2 pi i/3} by " + RealString(dist, 6));
  t.expect(ev.max_residual < tol, "eigenfunction residual " + RealString(ev.max_residual, 6));
}

void CheckTelescoping(Tally& t) {
  Rng rng(77);
  struct Pair {
    std::string name;
    Transform tr;
    StepFunction f, h;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < 4; ++i) {
    Quad a = RandomIrrational(rng);
    Transform tr{Rotation(a)};
    StepFunction h = RandomStep(rng, Uniform(rng, 2, 5));
    pairs.push_back({"rotation " + a.str(), tr, h - tr.interval_map()->pullback(h), h});
  }
  {
    Transform tr{Rotation(Q("√2-1"))};
    StepFunction h = RandomStep(rng, 3);
    RewriteResult pr = PowerRewrite(tr, h, 3);
    t.expect(pr.exact, "power rewrite identity");
    pairs.push_back({"power rewrite", tr, pr.f, pr.transfers.front().second});
  }
  {
    Transform tr{Rotation(Q("(√5-1)/2"))};
    StepFunction f = RandomStep(rng, 4);
    StepFunction h = CesaroTransfer(tr, f, 7);
    pairs.push_back({"Cesaro pair", tr, h - tr.interval_map()->pullback(h), h});
  }
  {
    StepFunction f = StepFunction::FromPieces({{IntervalSet::Span(0, Q("1/3")), Q("2/3")},
                                               {IntervalSet::Span(Q("1/3"), 1), Q("-1/3")}});
    RationalCoboundary rc = BuildRationalCoboundary(f);
    pairs.push_back({"rational stacking", Transform(rc.stage(4)), f, rc.g});
  }
  {
    Transform tr{RandomIet(rng)};
    StepFunction h = RandomStep(rng, 4);
    pairs.push_back({"interval exchange", tr, h - tr.interval_map()->pullback(h), h});
  }
  for (const auto& p : pairs) {
    ResidualReport r = VerifyCoboundary(p.tr, p.f, p.h, 500, 1000);
    t.expect(r.exact_residual && r.exact_residual->is_zero(), p.name + ": f is not h - h o tau");
    t.expect(r.sweep_sup <= r.two_h,
             p.name + ": sup ||S_n f||_inf = " + r.sweep_sup.str() + " exceeds 2||h||_inf = " + r.two_h.str());
  }

  SlowGrowth g = slow_growth_function(RankOneMachine::UniformColumn(5120), Rate::Sqrt(), 16, 1024);
  t.expect(g.ok, "slow growth construction not certified");
  t.expect(g.checks.size() == 1009, "expected checks for n = 16..1024");
  for (const auto& c : g.checks) {
    Rational n(static_cast<long>(c.n));
    // ||S_n f||_1 >= lower and lower^2 >= n, both exact.
    if (!(c.lower >= Quad(c.rho_upper) && c.lower * c.lower >= Quad(n)))
      t.expect(false, "||S_n f||_1 >= sqrt(n) not certified at n = " + std::to_string(c.n));
  }
  // Second route: direct L1 norms at a few n.
  for (unsigned long n : {16ul, 100ul, 1024ul}) {
    Quad direct = CocycleL1(RankOneMachine::UniformColumn(5120).map(), g.f, n);
    t.expect(direct * direct >= Quad(static_cast<long>(n)), "direct ||S_n f||_1 below sqrt(n) at n = " + std::to_string(n));
  }
}

// Mean-zero c0 + c1 x + c2 x^2 on [a, b).
FunctionSource MeanZero(const Rational& c1, const Rational& c2, const Rational& a, const Rational& b) {
  Rational c0 = -(c1 * (a + b) / 2 + c2 * (a * a + a * b + b * b) / 3);
  return FunctionSource::Polynomial(c0, c1, c2);
}

void CheckCheckers(Tally& t) {
  Rng rng(515);
  const std::vector<Rational> eps{Frac(1, 4), Frac(1, 6), Frac(1, 8), Frac(1, 10)};
  auto random_source = [&](IntervalSet& A) {
    Rational a = Frac(Uniform(rng, 0, 3), 8), b = Frac(Uniform(rng, 5, 8), 8);
    A = IntervalSet::Span(Quad(a), Quad(b));
    Rational c1 = Frac(Uniform(rng, 1, 4), 2) * (Uniform(rng, 0, 1) ? 1 : -1);
    Rational c2 = Frac(Uniform(rng, -2, 2), 4);
    return MeanZero(c1, c2, a, b);
  };
  for (int i = 0; i < 10; ++i) {
    IntervalSet A;
    FunctionSource src = random_source(A);
    Rational e = eps[Uniform(rng, 0, 3)];
    std::string tag = "source " + Exact(src.c0()) + ", " + Exact(src.c1()) + ", " + Exact(src.c2()) + " at eps " + Exact(e);
    PUBPartition p = pub_partition(src, A, e);
    ConditionReport r = CheckPUBSource(src, p);
    t.expect(r.ok(), "PUB " + tag + ": " + (r.ok() ? "" : r.failures().front()));
  }
  for (int i = 0; i < 10; ++i) {
    IntervalSet A;
    FunctionSource src = random_source(A);
    Rational e = eps[Uniform(rng, 0, 3)];
    unsigned long N = Uniform(rng, 2, 8);
    std::string tag = "N " + std::to_string(N) + " eps " + Exact(e);
    TUBBuild b = tub_build(src, A, e, N);
    ConditionReport r = CheckTUB(b.f, A, b.tower);
    t.expect(r.ok(), "TUB " + tag + ": " + (r.ok() ? "" : r.failures().front()));
  }
  for (int i = 0; i < 10; ++i) {
    IntervalSet A;
    FunctionSource src = random_source(A);
    Rational e = eps[Uniform(rng, 0, 3)];
    unsigned long N = Uniform(rng, 2, 8);
    std::string tag = "N " + std::to_string(N) + " eps " + Exact(e);
    try {
      WTUBBuild b = wtub_build(src, A, e, N);
      ConditionReport r = CheckWTUB(b.f, A, b.tower);
      t.expect(r.ok(), "W-TUB " + tag + ": " + (r.ok() ? "" : r.failures().front()));
    } catch (const std::exception& ex) {
      t.expect(false, "W-TUB " + tag + " not constructed: " + ex.what());
    }
  }

  // Greedy stacking against brute force.
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long> v(Uniform(rng, 1, 11));
    for (auto& x : v) x = Uniform(rng, -9, 9);
    v.push_back(-std::accumulate(v.begin(), v.end(), 0L));
    long n = static_cast<long>(v.size());
    std::vector<std::pair<IntervalSet, Quad>> pieces;
    for (long i = 0; i < n; ++i)
      pieces.emplace_back(IntervalSet::Span(Quad(Frac(i, n)), Quad(Frac(i + 1, n))), Quad(v[i]) * Quad(Frac(1, 5)));
    GreedyOrder g = greedy_stack(pieces);
    Quad bound = 0;
    for (const auto& pc : pieces) bound = max(bound, pc.second.abs());
    t.expect(g.bound == bound, "greedy bound is not max |integral|");
    bool within = g.order.size() == pieces.size();
    for (const auto& s : g.prefix) within = within && s.abs() <= bound;
    t.expect(within, "greedy prefix exceeds the bound in trial " + std::to_string(trial));
    if (n <= 8) {
      std::vector<Quad> vals;
      for (const auto& pc : pieces) vals.push_back(pc.second);
      std::sort(vals.begin(), vals.end());
      Quad best;
      bool first = true;
      do {
        Quad s = 0, worst = 0;
        for (const auto& x : vals) worst = max(worst, (s += x).abs());
        if (first || worst < best) best = worst;
        first = false;
      } while (std::next_permutation(vals.begin(), vals.end()));
      t.expect(best <= bound, "brute force finds no ordering within the bound");
    }
  }
}

void CheckWeakMixing(Tally& t) {
  ScheduleParams sch = ScheduleParams::Make({Frac(1, 4), Frac(1, 8), Frac(1, 16)}, {8, 16, 32});
  WeakMixingResult r = weak_mixing_coboundary(FunctionSource::Centered(), sch, 3);
  t.expect(r.log.size() == 3, "expected 3 stage records");
  for (size_t i = 0; i < r.log.size(); ++i) {
    const StageRecord& s = r.log[i];
    std::string tag = "stage " + std::to_string(s.stage);
    if (i > 0) {
      t.expect(s.cauchy.has_value(), tag + ": no Cauchy value");
      if (s.cauchy) t.expect(*s.cauchy < Quad(*s.cauchy_bound), tag + ": |g_k - g_{k-1}| = " + s.cauchy->str() +
                                                                      " not below " + Exact(*s.cauchy_bound));
      t.expect(s.undefined_measure < r.log[i - 1].undefined_measure, tag + ": undefined measure does not decrease");
    }
  }
  t.expect(r.residual_defined.is_zero(), "f - (g - g o tau) nonzero on the domain");
  Quad walk = r.walk_check(12, 5);
  t.expect(walk.is_zero(), "walk check " + walk.str());
}

void CheckJointApprox(Tally& t) {
  Json config = Json::parse(R"({"pipeline": "joint-approx", "machine": {"odometer": [2, 9]}, "M": 4, "N": 256,
                                "K": {"minus": [0, 128], "plus": [128, 256]}})");
  Json report = RunExperiment(config);
  VerifyResult v = VerifyReport(report);
  t.expect(v.ok(), "verify: " + (v.ok() ? std::string() : v.failures.front()));
  t.expect(v.checked > 0, "verify checked nothing");
  const Json& j = report.at("joint");
  Quad se = QuadFrom(j.at("sigma_error")), te = QuadFrom(j.at("tau_error"));
  t.expect(se <= Q("1/32"), "||H - H o sigma||_1 = " + se.str());
  t.expect(te <= Q("1/4"), "||H - H o tau - K||_1 = " + te.str());

  // M = 2, N = 8 against cells of width 1/64, on which everything is constant.
  auto sigma = RankOneMachine::Odometer(2, 4);
  auto K = Levels(sigma, 0, 2, -1) + Levels(sigma, 2, 4, 1) + Levels(sigma, 4, 6, 1) + Levels(sigma, 6, 8, -1);
  auto ja = joint_approximation_construct(sigma, K, 2, 8);
  const long G = 64;
  Quad cell(Frac(1, G)), s_or = 0, t_or = 0;
  for (long k = 0; k < G; ++k) {
    Quad x(Frac(2 * k + 1, 2 * G));
    if (auto y = sigma.map().try_apply(x)) s_or += (ja.H.evaluate(x) - ja.H.evaluate(*y)).abs() * cell;
    if (auto y = ja.tau.try_apply(x)) t_or += (ja.H.evaluate(x) - ja.H.evaluate(*y) - K.evaluate(x)).abs() * cell;
  }
  t.expect(ja.report.sigma_error == s_or, "M=2 sigma error " + ja.report.sigma_error.str() + " vs oracle " + s_or.str());
  t.expect(ja.report.tau_error == t_or, "M=2 tau error " + ja.report.tau_error.str() + " vs oracle " + t_or.str());
}

void CheckL1Transfer(Tally& t) {
  auto m = RankOneMachine::UniformColumn(128);
  auto lt = l1_nonintegrable_transfer(m, 100);
  const auto& r = lt.report;
  t.expect(r.H_norms.size() == 100, "expected 100 partial norms");
  Surd half_sum;
  for (size_t i = 0; i < r.H_norms.size(); ++i) {
    half_sum += Surd::Root(Rational(1, 2 * static_cast<long>(i + 1)), static_cast<long>(i + 1));
    if (r.H_norms[i] != half_sum) t.expect(false, "||H_N||_1 differs from (1/2) sum n^{-1/2} at N = " + std::to_string(i + 1));
  }
  t.expect(SurdL1(lt.H) == r.H_norms.back(), "||H_100||_1 from the runs differs");
  t.expect(r.H_norms.back() > Surd(4), "||H_100||_1 = " + std::to_string(r.H_norms.back().to_double()) + " not above 4");
  t.expect(r.increasing, "partial norms not strictly increasing");
  Surd limit_upper = r.dominating.back() + Surd(r.tail_bound);
  t.expect(limit_upper < Surd(Rational(262, 100)),
           "dominating sum bound " + std::to_string(limit_upper.to_double()) + " not below 2.62");
  t.expect(r.dominated, "coboundary norm exceeds the dominating sum");
  t.expect(r.identity_ok, "partial coboundary identity");
}

void CheckFourier(Tally& t) {
  InitPrecision();
  Rng rng(909);
  Real tol("1e-12");
  for (const char* a : {"(√5-1)/2", "√2-1"}) {
    Quad alpha = Q(a);
    for (int trial = 0; trial < 5; ++trial) {
      FourierProfile f;
      long deg = Uniform(rng, 1, 8);
      for (long k = 1; k <= deg; ++k) {
        Real re = Real(Uniform(rng, -20, 20)) / 10, im = Real(Uniform(rng, -20, 20)) / 10;
        if (re == 0 && im == 0) continue;
        f.coeff[k] = {re, im};
        f.coeff[-k] = {re, -im};
      }
      if (f.coeff.empty()) f.coeff[1] = f.coeff[-1] = {Real(1), Real(0)};
      FourierTransfer ft = RotationTransferFourier(f, alpha, 8);
      Real res = FourierResidual(f, ft.h, alpha, 1000);
      std::string tag = std::string(a) + " degree " + std::to_string(f.degree());
      t.expect(res < tol, "residual " + RealString(res, 6) + " for " + tag);
      // Second route: direct evaluation at random points.
      Real shift = ToReal(alpha), worst = 0;
      for (int i = 0; i < 50; ++i) {
        Real x = Real(Uniform(rng, 0, 999999)) / 1000000;
        Complex d = f.evaluate(x), h0 = ft.h.evaluate(x), h1 = ft.h.evaluate(x + shift);
        Real re = d.re - h0.re + h1.re, im = d.im - h0.im + h1.im;
        worst = max(worst, Real(boost::multiprecision::sqrt(re * re + im * im)));
      }
      t.expect(worst < tol, "pointwise residual " + RealString(worst, 6) + " for " + tag);
    }
  }
  Quad gold = Q("(√5-1)/2");
  ContinuedFraction cf = ContinuedFractionExpand(gold, 12);
  ObstructionReport rep = DiophantineObstruction(Profile::LogOverN(), gold, cf.convergents[10].second, 3);
  t.expect(rep.entries.size() == 8, "expected convergents k = 3..10");
  bool up = true;
  for (size_t i = 1; i < rep.entries.size(); ++i) up = up && rep.entries[i].bound > rep.entries[i - 1].bound;
  t.expect(up && rep.strictly_increasing, "obstruction bounds not strictly increasing");
}

void CheckDeterminism(Tally& t) {
  const char* configs[] = {
      R"({"pipeline": "sweep", "transform": {"kind": "rotation", "alpha": "√2-1"},
          "f": {"runs": [["0", "1/2", "1"], ["1/2", "1", "-1"]]}, "N": 300, "r": "inf"})",
      R"({"pipeline": "sweep", "transform": {"kind": "machine", "odometer": [3, 3]},
          "f": {"runs": [["0", "1/3", "1"], ["1/3", "2/3", "-1"]]}, "N": 40, "r": "3/2"})",
      R"({"pipeline": "step-coboundary", "f": {"measures": ["1/3", "2/3"], "values": ["2/3", "-1/3"]}})",
      R"({"pipeline": "step-coboundary", "N": 2000, "f": {"measures": ["√2-1", "2-√2"], "values": ["2-√2", "1-√2"]}})",
      R"({"pipeline": "step-coboundary", "N": 500, "starts": 8,
          "f": {"measures": ["√2-1", "(√2-1)/2", "(5-3√2)/2"], "values": ["1", "-2", "0"]}})",
      R"({"pipeline": "weak-mixing", "source": {"polynomial": ["-1/2", "1", "0"]}, "eps": ["1/4", "1/8"],
          "N": [8, 16], "stages": 2, "seed": 3})",
      R"({"pipeline": "non-coboundary", "mode": "slow-escape", "machine": {"uniform": 1024},
          "schedule": {"geometric": {"scale": "1/8", "ratio": "1/2"}}, "delta1": "1/4", "n_verify": 16})",
      R"({"pipeline": "non-coboundary", "mode": "series", "machine": {"uniform": 1024}, "ratio": "1/32"})",
      R"({"pipeline": "non-coboundary", "mode": "l1-transfer", "machine": {"uniform": 64}, "N_max": 20})",
      R"({"pipeline": "diophantine", "alpha": "√2-1", "fourier": {"coefficients": [[3, "1", "0.5"], [-3, "1", "-0.5"]]}})",
      R"({"pipeline": "joint-approx", "machine": {"odometer": [2, 6]}, "M": 2, "N": 32,
          "K": {"minus": [0, 16], "plus": [16, 32]}})"};
  for (const char* text : configs) {
    Json c = Json::parse(text);
    std::string a = CanonicalDump(RunExperiment(c)), b = CanonicalDump(RunExperiment(c));
    t.expect(a == b, c.at("pipeline").get<std::string>() + " report differs between runs");
    t.expect(CanonicalDump(Json::parse(a)) == a, c.at("pipeline").get<std::string>() + " dump is not canonical");
  }
}

}  // namespace

int main() {
  InitPrecision();
  const std::vector<std::pair<std::string, std::function<void(Tally&)>>> criteria{
      {"Cesaro identity with zero residual on 20 random triples", CheckCesaro},
      {"torus coboundary bound sup_{n <= 10^4} ||S_n f||_inf < 4", CheckTorus},
      {"rational coboundary at 5 stages and eigenvalue e^{2 pi i/3}", CheckRationalStacking},
      {"telescoping bound and sqrt(n) slow growth for 16 <= n <= 1024", CheckTelescoping},
      {"PUB/TUB/W-TUB checkers and greedy stacking", CheckCheckers},
      {"weak-mixing Cauchy bound and shrinking undefined region", CheckWeakMixing},
      {"joint approximation M=4, N=256 via verify; M=2, N=8 oracle", CheckJointApprox},
      {"L1 transfer norms exact, above 4, dominating sum below 2.62", CheckL1Transfer},
      {"Fourier transfer residuals and increasing obstruction bounds", CheckFourier},
      {"byte-identical canonical JSON across runs", CheckDeterminism}};

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Tally t;
    auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(t);
    } catch (const std::exception& e) {
      t.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60) t.failures.push_back("took " + std::to_string(secs) + " s, over the 60 s budget");
    bool pass = t.failures.empty();
    failed += !pass;
    std::printf("criterion %zu: %s  %s  (%zu checks, %.1f s)\n", i + 1, pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                t.checks, secs);
    for (size_t k = 0; k < std::min<size_t>(t.failures.size(), 5); ++k) std::printf("    %s\n", t.failures[k].c_str());
    if (t.failures.size() > 5) std::printf("    ... %zu more\n", t.failures.size() - 5);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
