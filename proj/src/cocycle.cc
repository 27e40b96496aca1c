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

#include "cobound/cocycle.h"

#include <algorithm>
#include <cmath>

namespace cobound {

namespace {

const IntervalMap& OneDim(const Transform& t) {
  const IntervalMap* m = t.interval_map();
  if (!m) throw std::invalid_argument(t.kind() + " has no exact one-dimensional map");
  return *m;
}

// Largest |value| of s over region and the left end of where it occurs.
std::pair<Quad, Quad> ArgmaxAbs(const StepFunction& s, const IntervalSet& region) {
  Quad best(-1), at;
  for (size_t i = 0; i < s.num_segments(); ++i) {
    Quad a = s.values()[i].abs();
    if (!(best < a)) continue;
    Interval seg = s.segment(i);
    IntervalSet part = region.intersect(IntervalSet::Span(seg.lo, seg.hi));
    if (part.empty()) continue;
    best = a;
    at = part.lower();
  }
  if (best < 0) best = Quad(0);
  return {best, at};
}

bool NormLeq(const NormValue& a, const NormValue& b) {
  if (a.exact && b.exact) return *a.exact <= *b.exact;
  if (a.power && b.power) return *a.power <= *b.power;
  return a.approx <= b.approx;
}

void FitGrowth(CocycleReport& rep) {
  std::vector<double> xs, ys;
  for (const auto& e : rep.entries) {
    double v = e.norm.approx.convert_to<double>();
    if (e.n >= 1 && v > 0) {
      xs.push_back(std::log(static_cast<double>(e.n)));
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() < 3) return;
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) return;
  rep.slope = sxy / sxx;
  rep.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
}

}  // namespace

BirkhoffSums::BirkhoffSums(const IntervalMap& t, StepFunction f)
    : t_(t), f_(std::move(f)), sum_(StepFunction::Constant(0, f_.lo(), f_.hi())),
      valid_(IntervalSet::Span(f_.lo(), f_.hi())), dom_(t.domain()) {}

void BirkhoffSums::advance() {
  if (n_ == 0) {
    sum_ = f_;
  } else {
    sum_ = f_ + t_.pullback(sum_);
    valid_ = dom_.intersect(t_.preimage(valid_));
  }
  ++n_;
}

Quad BirkhoffSum(const IntervalMap& t, const StepFunction& f, long n, const Quad& x) {
  Quad sum, y = x;
  for (long k = 0; k < n; ++k) {
    sum += f.evaluate(y);
    if (k + 1 < n) y = t.apply(y);
  }
  return sum;
}

Quad BirkhoffSum(const Transform& t, const StepFunction& f, long n, const Quad& x) {
  return BirkhoffSum(OneDim(t), f, n, x);
}

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kBounded:
      return "bounded";
    case Verdict::kGrowing:
      return "growing";
    default:
      return "inconclusive";
  }
}

std::vector<Quad> SampleGrid(long samples) {
  std::vector<Quad> pts;
  pts.reserve(samples);
  for (long k = 0; k < samples; ++k) pts.emplace_back(Frac(2 * k + 1, 2 * samples));
  return pts;
}

CocycleReport CocycleNormSweep(const Transform& t, const StepFunction& f, const NormIndex& r, long N,
                               const SweepOptions& opt) {
  const IntervalMap& map = OneDim(t);
  CocycleReport rep;
  rep.r = r;
  BirkhoffSums sums(map, f);
  long n = 1;
  for (; n <= N; ++n) {
    sums.advance();
    if (sums.current().num_segments() > opt.piece_limit) break;
    SweepEntry e;
    e.n = n;
    e.norm = LrNormOver(sums.current(), r, sums.valid());
    e.witness = ArgmaxAbs(sums.current(), sums.valid()).second;
    rep.entries.push_back(std::move(e));
  }
  if (n <= N) {
    // Piece count exploded: continue on a sample grid, starting from the exact sum.
    rep.sampling_note = "sampled from n=" + std::to_string(n) + " on " + std::to_string(opt.samples) +
                        " midpoints; norms are grid estimates";
    std::vector<Quad> pts = SampleGrid(static_cast<long>(opt.samples));
    // sum[i] = S_n f(x_i) and y[i] = t^n x_i, the next point to add.
    std::vector<Quad> sum(pts.size()), y(pts.size());
    std::vector<bool> alive(pts.size(), true), has_next(pts.size(), true);
    for (size_t i = 0; i < pts.size(); ++i) {
      alive[i] = sums.valid().contains(pts[i]);
      if (!alive[i]) continue;
      sum[i] = sums.current().evaluate(pts[i]);
      y[i] = pts[i];
      for (long k = 0; k < n && has_next[i]; ++k) {
        auto next = map.try_apply(y[i]);
        if (!next) has_next[i] = false;
        else y[i] = *next;
      }
    }
    InitPrecision();
    for (bool first = true; n <= N; ++n, first = false) {
      Quad best(-1), at;
      Real acc = 0;
      long count = 0;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (!alive[i]) continue;
        if (!first) {
          if (!has_next[i]) {
            alive[i] = false;
            continue;
          }
          sum[i] += f.evaluate(y[i]);
          auto next = map.try_apply(y[i]);
          if (next) y[i] = *next;
          else has_next[i] = false;
        }
        Quad a = sum[i].abs();
        if (best < a) {
          best = a;
          at = pts[i];
        }
        if (!r.infinite) acc += boost::multiprecision::pow(ToReal(a), ToReal(r.r));
        ++count;
      }
      SweepEntry e;
      e.n = n;
      e.sampled = true;
      e.witness = at;
      if (r.infinite) {
        e.norm.exact = max(best, Quad(0));
        e.norm.approx = ToReal(*e.norm.exact);
      } else {
        e.norm.approx = count ? boost::multiprecision::pow(acc / count, 1 / ToReal(r.r)) : Real(0);
      }
      rep.entries.push_back(std::move(e));
    }
  }
  FitGrowth(rep);
  if (opt.transfer) {
    NormValue h = LrNorm(*opt.transfer, r);
    NormValue b;
    if (h.exact) b.exact = Quad(2) * *h.exact;
    if (h.power && r.is_integer()) {
      unsigned k = static_cast<unsigned>(r.r.get_num().get_ui());
      b.power = pow(Quad(2), k) * *h.power;
    }
    b.approx = 2 * h.approx;
    rep.bound = b;
    bool all = std::all_of(rep.entries.begin(), rep.entries.end(),
                           [&](const SweepEntry& e) { return NormLeq(e.norm, b); });
    if (all) {
      rep.verdict = Verdict::kBounded;
      return rep;
    }
  }
  if (rep.slope >= 0.5 && rep.r_squared >= 0.9) rep.verdict = Verdict::kGrowing;
  return rep;
}

Quad DistributionBound(const StepFunction& s, const IntervalSet& region, const Rational& eps) {
  std::vector<std::pair<Quad, Quad>> mass;  // (|value|, measure)
  for (size_t i = 0; i < s.num_segments(); ++i) {
    Interval seg = s.segment(i);
    Quad m = region.intersect(IntervalSet::Span(seg.lo, seg.hi)).measure();
    if (m.sign() > 0) mass.push_back({s.values()[i].abs(), m});
  }
  std::sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Quad need = Quad(1 - eps) * region.measure();
  Quad acc;
  for (const auto& [v, m] : mass) {
    acc += m;
    if (need <= acc) return v;
  }
  return mass.empty() ? Quad(0) : mass.back().first;
}

TightnessReport SchmidtTightness(const Transform& t, const StepFunction& f, const Rational& eps, long N) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("tightness level must lie in (0,1)");
  TightnessReport rep;
  rep.eps = eps;
  BirkhoffSums sums(OneDim(t), f);
  for (long n = 1; n <= N; ++n) {
    sums.advance();
    rep.entries.push_back({n, DistributionBound(sums.current(), sums.valid(), eps)});
  }
  if (N >= 2) {
    Quad first, second;
    for (const auto& e : rep.entries) {
      if (2 * e.n <= N) first = max(first, e.a_n);
      else second = max(second, e.a_n);
    }
    rep.tight_candidate = second <= first;
  }
  return rep;
}

StepFunction CesaroTransfer(const Transform& t, const StepFunction& f, long n) {
  if (n < 1) throw std::invalid_argument("Cesaro transfer needs n >= 1");
  BirkhoffSums sums(OneDim(t), f);
  StepFunction total = sums.current();
  for (long k = 1; k < n; ++k) {
    sums.advance();
    total = total + sums.current();
  }
  return Quad(Frac(1, n)) * total;
}

StepFunction CesaroResidual(const Transform& t, const StepFunction& f, long n, const StepFunction& h) {
  const IntervalMap& map = OneDim(t);
  BirkhoffSums sums(map, f);
  for (long k = 0; k < n; ++k) sums.advance();
  StepFunction lhs = f - Quad(Frac(1, n)) * sums.current();
  StepFunction rhs = h - map.pullback(h);
  return (lhs - rhs).restrict(sums.valid().intersect(map.domain()));
}

RewriteResult PowerRewrite(const Transform& t, const StepFunction& h, long n) {
  if (n < 1) throw std::invalid_argument("power rewrite needs n >= 1");
  const IntervalMap& map = OneDim(t);
  StepFunction term = h, H = h;
  IntervalSet region = IntervalSet::Span(h.lo(), h.hi());
  for (long k = 1; k < n; ++k) {
    term = map.pullback(term);
    region = map.domain().intersect(map.preimage(region));
    H = H + term;
  }
  StepFunction hn = map.pullback(term);
  region = map.domain().intersect(map.preimage(region));
  RewriteResult out;
  out.f = h - hn;
  out.transfers.push_back({"tau", H});
  StepFunction diff = (out.f - (H - map.pullback(H))).restrict(region);
  out.exact = diff.sup_abs().is_zero();
  return out;
}

RewriteResult PairRewrite(RewriteMode mode, const Transform& tau, const Transform& sigma, const StepFunction& h,
                          long checks) {
  const IntervalMap& t = OneDim(tau);
  const IntervalMap& s = OneDim(sigma);
  RewriteResult out;
  for (const Quad& x : SampleGrid(checks)) {
    Quad lhs = t.apply(s.apply(x));
    Quad rhs = mode == RewriteMode::kCommuting ? s.apply(t.apply(x)) : s.apply(t.apply(t.apply(x)));
    if (lhs != rhs) {
      throw std::invalid_argument(std::string("group relation fails at x=") + x.str() +
                                  (mode == RewriteMode::kCommuting ? " (tau sigma != sigma tau)"
                                                                   : " (tau sigma != sigma tau^2)"));
    }
    ++out.relation_checks;
  }
  StepFunction u = h - t.pullback(h);
  out.f = u - s.pullback(u);
  out.transfers.push_back({"sigma", u});
  StepFunction v;
  if (mode == RewriteMode::kCommuting) {
    v = h - s.pullback(h);
  } else if (mode == RewriteMode::kConjugate) {
    StepFunction hs = s.pullback(h);
    v = h - hs - t.pullback(hs);
  } else {
    throw std::invalid_argument("power mode takes an exponent, not a second map");
  }
  out.transfers.push_back({"tau", v});
  IntervalSet region = t.domain().intersect(s.domain());
  bool ok_sigma = (out.f - (u - s.pullback(u))).restrict(region).sup_abs().is_zero();
  bool ok_tau = (out.f - (v - t.pullback(v))).restrict(region).sup_abs().is_zero();
  out.exact = ok_sigma && ok_tau;
  return out;
}

ResidualReport VerifyCoboundary(const Transform& t, const StepFunction& f, const StepFunction& h, long samples,
                                long N) {
  const IntervalMap& map = OneDim(t);
  ResidualReport rep;
  for (const Quad& x : SampleGrid(samples)) {
    auto y = map.try_apply(x);
    if (!y) continue;
    Quad r = (f.evaluate(x) - h.evaluate(x) + h.evaluate(*y)).abs();
    if (rep.sample_residual < r) {
      rep.sample_residual = r;
      rep.sample_witness = x;
    }
  }
  StepFunction diff = f - (h - map.pullback(h));
  rep.exact_residual = diff.sup_abs_over(map.domain());
  BirkhoffSums sums(map, f);
  for (long n = 1; n <= N; ++n) {
    sums.advance();
    rep.sweep_sup = max(rep.sweep_sup, sums.current().sup_abs_over(sums.valid()));
  }
  rep.two_h = Quad(2) * h.sup_abs();
  rep.within_bound = rep.sweep_sup <= rep.two_h;
  return rep;
}

}  // namespace cobound
