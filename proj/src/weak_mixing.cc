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

#include <algorithm>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "cobound/stacking.h"

namespace cobound {

ScheduleParams ScheduleParams::Make(std::vector<Rational> eps, std::vector<unsigned long> N) {
  if (eps.empty() || eps.size() != N.size()) throw std::invalid_argument("schedule needs matching eps and N lists");
  for (size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0 && eps[i] < 1)) throw std::invalid_argument("schedule eps must lie in (0,1)");
    if (N[i] < 1) throw std::invalid_argument("schedule N must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("schedule eps must decrease strictly");
    if (i > 0 && !(N[i] > N[i - 1])) throw std::invalid_argument("schedule N must increase strictly");
  }
  ScheduleParams s;
  s.eps = std::move(eps);
  s.N = std::move(N);
  // A single term carries no rate; halving is assumed for the tail.
  s.ratio = Rational(1, 2);
  if (s.eps.size() > 1) s.ratio = 0;
  for (size_t i = 0; i < s.eps.size(); ++i) {
    s.partial_sum += s.eps[i] + Rational(1, s.N[i]);
    if (i > 0) {
      s.ratio = std::max(s.ratio, Rational(s.eps[i] / s.eps[i - 1]));
      s.ratio = std::max(s.ratio, Rational(static_cast<long>(s.N[i - 1]), static_cast<long>(s.N[i])));
    }
  }
  s.ratio.canonicalize();
  Rational last = s.eps.back() + Rational(1, s.N.back());
  s.tail_bound = last * s.ratio / (1 - s.ratio);
  return s;
}

ScheduleParams ScheduleParams::Geometric(const Rational& eps0, unsigned long N0, size_t count) {
  std::vector<Rational> eps;
  std::vector<unsigned long> N;
  Rational e = eps0;
  unsigned long n = N0;
  for (size_t i = 0; i < count; ++i) {
    eps.push_back(e);
    N.push_back(n);
    e /= 2;
    n *= 2;
  }
  return Make(std::move(eps), std::move(N));
}

namespace {

// outer o inner for piecewise translations; inner may be many-to-one. Parts
// of inner whose image misses outer are kept unchanged when keep is set.
std::vector<Branch> Compose(const std::vector<Branch>& outer, const std::vector<Branch>& inner, bool keep) {
  std::vector<Branch> out;
  for (const auto& b : inner) {
    const Quad lo = b.lo + b.shift, hi = b.hi + b.shift;
    auto it = std::upper_bound(outer.begin(), outer.end(), lo, [](const Quad& v, const Branch& x) { return v < x.lo; });
    if (it != outer.begin()) --it;
    Quad cur = lo;
    for (; it != outer.end() && it->lo < hi; ++it) {
      Quad a = std::max(cur, it->lo), c = std::min(hi, it->hi);
      if (!(a < c)) continue;
      if (keep && cur < a) out.push_back({cur - b.shift, a - b.shift, b.shift});
      out.push_back({a - b.shift, c - b.shift, b.shift + it->shift});
      cur = c;
    }
    if (keep && cur < hi) out.push_back({cur - b.shift, hi - b.shift, b.shift});
  }
  std::sort(out.begin(), out.end(), [](const Branch& x, const Branch& y) { return x.lo < y.lo; });
  return out;
}

// h o br on the domain of br, as runs.
std::vector<std::pair<Interval, Quad>> PullRuns(const std::vector<Branch>& br, const StepFunction& h) {
  std::vector<std::pair<Interval, Quad>> runs;
  for (const auto& b : br) {
    for (const auto& [iv, v] : Overlaps(h, IntervalSet::FromIntervals({{b.lo + b.shift, b.hi + b.shift}}))) {
      if (!v.is_zero()) runs.push_back({{iv.lo - b.shift, iv.hi - b.shift}, v});
    }
  }
  return runs;
}

size_t LevelsSplit(const std::vector<IntervalSet>& levels, size_t k) {
  const Quad scale{Rational(Integer(1) << static_cast<unsigned>(k))};
  size_t split = 0;
  for (const auto& l : levels) {
    if (l.empty()) continue;
    Integer first = (l.lower() * scale).floor();
    Integer last = (l.upper() * scale).ceil() - 1;
    if (first != last) ++split;
  }
  return split;
}

struct State {
  IntervalMap tau;
  IntervalSet covered;
  IntervalSet tops;
  IntervalSet rest;
  IntervalMap beta;
  StepFunction F;
  StepFunction g;
  StepFunction heights;
  std::vector<Branch> proj;
};

}  // namespace

WeakMixingResult weak_mixing_coboundary(const FunctionSource& src, const ScheduleParams& schedule, size_t stages) {
  if (stages < 1) throw std::invalid_argument("at least one stage is required");
  if (stages > schedule.size()) throw std::invalid_argument("schedule exhausted before the requested stages");
  if (!src.infinitely_valued()) {
    throw std::invalid_argument("source takes finitely many values; use the step-coboundary module");
  }
  Rational finest = schedule.eps[stages - 1];
  Rational delta = WorkingResolution(src, finest / 2);
  if (src.integral(0, 1) != 0) throw std::invalid_argument("source is not mean-zero");
  StepFunction f = src.refine(delta);
  Quad shift = f.integral();
  if (!shift.is_zero()) f = f - StepFunction::Constant(shift);

  WeakMixingResult out;
  out.f = f;
  State st;
  {
    WTUBBuild w = WtubFromStep(f, IntervalSet::Unit(), schedule.eps[0], schedule.N[0]);
    st.tau = w.tower.map;
    st.covered = w.tower.support();
    std::vector<IntervalSet> tops, bases, levels;
    for (const auto& t : w.tower.subtowers) {
      tops.push_back(t.levels.back());
      bases.push_back(t.levels.front());
      levels.insert(levels.end(), t.levels.begin(), t.levels.end());
    }
    st.tops = UnionAll(tops);
    st.rest = IntervalSet::Unit().subtract(st.covered);
    st.beta = w.columns.to_base;
    st.F = w.columns.full_sum;
    st.g = w.columns.transfer;
    st.proj = w.columns.to_top;
    st.heights = Columns(st.tau, UnionAll(bases), StepFunction::Indicator(st.covered)).full_sum;

    StageRecord r;
    r.stage = 0;
    r.epsilon = schedule.eps[0];
    r.N = schedule.N[0];
    r.width = w.pub.cell_measure / Quad(3);
    for (const auto& t : w.tower.subtowers) r.heights.push_back(t.height());
    r.max_column_height = r.heights.back();
    r.undefined_measure = st.tops.measure() + st.rest.measure();
    r.top_sum_sup = st.F.sup_abs();
    r.f1_sup = Quad();
    r.dyadic_resolution = 1;
    r.levels_total = levels.size();
    r.levels_split = LevelsSplit(levels, 1);
    r.map_branches = st.tau.branches().size();
    r.transfer_pieces = st.g.num_segments();
    out.log.push_back(std::move(r));
  }

  for (size_t s = 1; s < stages; ++s) {
    const Rational& eps = schedule.eps[s];
    auto [I, J] = PairedTub(st.F, st.tops, f, st.rest, eps, schedule.N[s]);
    const IntervalSet IH = I.tower.levels.back();
    const IntervalSet J1 = J.tower.levels.front();
    const IntervalSet Jh = J.tower.levels.back();
    const IntervalSet used = I.tower.support();
    const IntervalSet Jsup = J.tower.support();
    const IntervalSet leftover = st.tops.subtract(used);
    IntervalMap phi = IntervalMap::Matching(IH, J1);

    StageRecord r;
    r.stage = s;
    r.epsilon = eps;
    r.N = schedule.N[s];
    r.width = I.pub.cell_measure;
    r.heights = {I.tower.height(), J.tower.height()};
    r.f1_sup = st.F.sup_abs();
    r.f1_bound_prev = 3 * schedule.eps[s - 1];
    r.f1_bound_curr = 3 * eps;
    r.cauchy = I.columns.transfer.sup_abs();
    r.cauchy_bound = 3 * (eps + schedule.eps[s - 1]);
    r.cauchy_ok = *r.cauchy < Quad(*r.cauchy_bound);
    if (!*r.cauchy_ok) out.cauchy_ok = false;

    // J_h to I_H along the little tower and back through phi.
    IntervalMap K = phi.inverse().after(J.columns.to_base);
    IntervalMap lift = J.columns.to_base.inverse().after(phi);

    // Transfer: old columns shift by the big-tower transfer at their top, the
    // little tower continues from the big tower's column sums.
    StepFunction g = st.g + StepFromRuns(PullRuns(st.proj, I.columns.transfer));
    std::vector<Branch> jdown = Compose(K.branches(), J.columns.to_top, false);
    StepFunction carry = StepFromRuns(PullRuns(jdown, I.columns.full_sum));
    g = g + J.columns.transfer - carry.restrict(Jsup);

    std::vector<Branch> lam = Compose(lift.branches(), I.columns.to_top, false);
    std::vector<Branch> proj = Compose(lam, st.proj, true);
    proj.insert(proj.end(), J.columns.to_top.begin(), J.columns.to_top.end());

    IntervalMap up = st.beta.after(I.tower.map);
    IntervalMap tau = st.tau.merged(up).merged(phi).merged(J.tower.map);
    IntervalMap beta = st.beta.after(I.columns.to_base.after(K)).merged(st.beta.restricted(leftover));
    StepFunction F = J.columns.full_sum + K.pullback(I.columns.full_sum).restrict(Jh) + st.F.restrict(leftover);
    StepFunction hsum = Columns(I.tower.map, I.tower.levels.front(), st.heights).full_sum;
    StepFunction heights = K.pullback(hsum).restrict(Jh) +
                           StepFunction::Indicator(Jh, Quad(static_cast<long>(J.tower.height()))) +
                           st.heights.restrict(leftover);

    st.tau = std::move(tau);
    st.covered = st.covered.unite(Jsup);
    st.tops = Jh.unite(leftover);
    st.rest = st.rest.subtract(Jsup);
    st.beta = std::move(beta);
    st.F = std::move(F);
    st.g = std::move(g);
    st.heights = std::move(heights);
    st.proj = std::move(proj);

    r.max_column_height = static_cast<size_t>(st.heights.max_value().floor().get_ui());
    r.undefined_measure = st.tops.measure() + st.rest.measure();
    r.top_sum_sup = st.F.sup_abs();
    std::vector<IntervalSet> levels = I.tower.levels;
    levels.insert(levels.end(), J.tower.levels.begin(), J.tower.levels.end());
    r.dyadic_resolution = s + 1;
    r.levels_total = levels.size();
    r.levels_split = LevelsSplit(levels, s + 1);
    r.map_branches = st.tau.branches().size();
    r.transfer_pieces = st.g.num_segments();
    out.log.push_back(std::move(r));
  }

  out.tau = st.tau;
  out.g = st.g;
  out.covered = st.covered;
  out.tops = st.tops;
  out.to_base = st.beta;
  out.top_sums = st.F;
  IntervalSet dom = st.tau.domain();
  StepFunction resid = st.g - st.tau.pullback(st.g) - f;
  out.residual_defined = resid.sup_abs_over(dom);
  StepFunction closed = st.g - st.beta.pullback(st.g) - f;
  out.residual_closed = std::max(out.residual_defined, closed.sup_abs_over(st.tops));
  return out;
}

Quad WeakMixingResult::walk_check(size_t samples, unsigned long seed) const {
  std::mt19937_64 rng(seed);
  const IntervalMap inv = tau.inverse();
  const Quad total = covered.measure();
  const Integer den = Integer(1) << 30;
  Quad worst;
  for (size_t i = 0; i < samples; ++i) {
    Integer k = Integer(static_cast<unsigned long>(rng() >> 34));
    Quad x = covered.point_at_measure(total * Quad(Rational(k, den)));
    Quad sum;
    Quad y = x;
    while (auto prev = inv.try_apply(y)) {
      y = *prev;
      sum += f.evaluate(y);
    }
    worst = std::max(worst, (g.evaluate(x) + sum).abs());
  }
  return worst;
}

std::vector<std::string> WeakMixingResult::log_lines() const {
  std::vector<std::string> lines;
  for (const auto& r : log) {
    nlohmann::ordered_json j;
    j["stage"] = r.stage;
    j["epsilon"] = RationalString(r.epsilon);
    j["N"] = r.N;
    j["width"] = r.width.str();
    j["heights"] = r.heights;
    j["max_column_height"] = r.max_column_height;
    j["undefined_measure"] = r.undefined_measure.str();
    j["top_sum_sup"] = r.top_sum_sup.str();
    j["f1_sup"] = r.f1_sup.str();
    if (r.f1_bound_prev) j["f1_bound_prev"] = RationalString(*r.f1_bound_prev);
    if (r.f1_bound_curr) j["f1_bound_curr"] = RationalString(*r.f1_bound_curr);
    if (r.cauchy) {
      j["cauchy"] = r.cauchy->str();
      j["cauchy_bound"] = RationalString(*r.cauchy_bound);
      j["cauchy_ok"] = *r.cauchy_ok;
    }
    j["dyadic_resolution"] = r.dyadic_resolution;
    j["levels_split"] = r.levels_split;
    j["levels_total"] = r.levels_total;
    j["map_branches"] = r.map_branches;
    j["transfer_pieces"] = r.transfer_pieces;
    lines.push_back(j.dump());
  }
  return lines;
}

}  // namespace cobound
