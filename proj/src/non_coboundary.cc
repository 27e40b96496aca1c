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

#include "cobound/non_coboundary.h"

#include <algorithm>
#include <cmath>

#include "cobound/real.h"

namespace cobound {

IntervalSet StaysIn(const IntervalMap& t, const IntervalSet& s, unsigned long n) {
  IntervalSet cur = s;
  for (unsigned long k = 0; k < n && !cur.empty(); ++k) cur = s.intersect(t.preimage(cur));
  return cur;
}

Quad CocycleL1(const IntervalMap& t, const StepFunction& f, unsigned long n) {
  if (n == 0) return 0;
  StepFunction sum(f.lo(), f.hi());
  unsigned long len = 0;
  StepFunction block = f;
  unsigned long blen = 1;
  IntervalMap tb = t;
  for (unsigned long k = n; k > 0; k >>= 1) {
    if (k & 1) {
      sum = len == 0 ? block : sum + t.power(static_cast<long>(len)).pullback(block);
      len += blen;
    }
    if (k > 1) {
      block = block + tb.pullback(block);
      tb = tb.after(tb);
      blen *= 2;
    }
  }
  IntervalSet valid = n == 1 ? IntervalSet::Span(f.lo(), f.hi()) : t.power(static_cast<long>(n - 1)).domain();
  return sum.abs().integral_over(valid);
}

// ---------------------------------------------------------------------------

AlmostInvariantSet almost_invariant_set(const RankOneMachine& m, const Rational& delta, unsigned long n,
                                        const Rational& eps, const AlmostInvariantOptions& opts) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0,1]");
  if (m.height() == 0) throw std::invalid_argument("empty machine");

  AlmostInvariantSet out;
  out.delta = delta;
  out.epsilon = eps;
  out.n = n;
  Rational need = Rational(n) / eps;
  Integer B = n == 0 ? Integer(1) : Integer((need.get_num() + need.get_den() - 1) / need.get_den());
  if (B > Integer(static_cast<unsigned long>(m.height())))
    throw std::invalid_argument("machine too shallow: blocks of " + B.get_str() + " levels needed, height " +
                                std::to_string(m.height()));
  size_t b = B.get_ui();
  out.block_height = b;
  Rational w = m.width().rational();
  Rational block_mass = Rational(static_cast<long>(b)) * w;
  Rational q = delta / block_mass;
  Integer c = q.get_num() / q.get_den();
  Rational rem = delta - Rational(c) * block_mass;
  out.full_blocks = c.get_ui();
  out.strip = rem > 0;
  size_t stride = opts.layout == BlockLayout::kContiguous ? b : 2 * b;
  size_t count = out.full_blocks + (out.strip ? 1 : 0);
  size_t last_end = opts.first_level + (count - 1) * stride + b;
  if (count == 0 || last_end > m.height())
    throw std::invalid_argument("machine too shallow: " + std::to_string(count) + " blocks of " + std::to_string(b) +
                                " levels from level " + std::to_string(opts.first_level) + " exceed height " +
                                std::to_string(m.height()));
  out.end_level = last_end;

  std::vector<IntervalSet> parts;
  for (size_t i = 0; i < out.full_blocks; ++i)
    for (size_t j = 0; j < b; ++j) parts.push_back(m.level(opts.first_level + i * stride + j));
  if (out.strip) {
    size_t s = opts.first_level + out.full_blocks * stride;
    IntervalSet piece = m.level(s).split_at_measure(Quad(rem / Rational(static_cast<long>(b)))).first;
    for (size_t j = 0; j < b; ++j) {
      parts.push_back(piece);
      if (j + 1 < b) piece = m.map().pushforward(piece);
    }
  }
  out.A = UnionAll(parts);
  out.intersection = StaysIn(m.map(), out.A, n).measure();
  out.bound = Quad((1 - eps) * delta);
  out.ok = out.A.measure() == Quad(delta) && out.intersection >= out.bound;
  return out;
}

// ---------------------------------------------------------------------------

SlowEscapeSet slow_escape_set(const RankOneMachine& m, const Schedule& eps, const SlowEscapeOptions& opts) {
  if (opts.n_verify < 1) throw std::invalid_argument("n_verify must be positive");
  std::vector<Rational> e(opts.n_verify + 1);
  for (unsigned long n = 1; n <= opts.n_verify; ++n) {
    e[n] = eps(n);
    if (!(e[n] > 0)) throw std::invalid_argument("eps_" + std::to_string(n) + " must be positive");
    if (!(e[n] < Rational(1, 4)))
      throw std::invalid_argument("eps_" + std::to_string(n) + " = " + RationalString(e[n]) +
                                  " is not below 1/4: delta_1 >= 2 eps_n leaves gamma = 1 - 2 delta_1 <= 0");
    if (n > 1 && e[n] > e[n - 1]) throw std::invalid_argument("eps schedule must be non-increasing");
  }

  SlowEscapeSet out;
  Rational d1 = opts.delta1.value_or(2 * e[1]);
  if (d1 < 2 * e[1]) throw std::invalid_argument("delta_1 must be at least 2 eps_1");
  out.gamma = 1 - 2 * d1;
  if (!(out.gamma > 0)) throw std::invalid_argument("delta_1 must be below 1/2");
  out.N.push_back(1);
  out.delta.push_back(d1);
  for (size_t k = 2;; ++k) {
    Rational thr = out.gamma / Rational(Integer(1) << (2 * static_cast<unsigned>(k == 2 ? 1 : k)));
    std::optional<unsigned long> found;
    for (unsigned long n = out.N.back() + 1; n <= opts.n_verify; ++n) {
      if (2 * e[n] <= thr) {
        found = n;
        break;
      }
    }
    if (!found) break;
    out.N.push_back(*found);
    out.delta.push_back(2 * e[*found]);
  }

  size_t level = 0;
  std::vector<IntervalSet> Fs;
  for (size_t i = 0; i < out.N.size(); ++i) {
    unsigned long inv = i + 1 < out.N.size() ? out.N[i + 1] - 1 : opts.n_verify;
    auto a = almost_invariant_set(m, out.delta[i], inv, Rational(1, 2), {level, BlockLayout::kContiguous});
    level = a.end_level;
    Fs.push_back(a.A);
    out.blocks.push_back(std::move(a));
  }
  out.E = IntervalSet::Unit().subtract(UnionAll(Fs));

  const auto& t = m.map();
  IntervalSet pre = out.E, uni, dom = IntervalSet::Unit();
  bool ok = true;
  for (const auto& b : out.blocks) ok = ok && b.ok;
  for (unsigned long n = 1; n <= opts.n_verify; ++n) {
    pre = t.preimage(pre);
    uni = uni.unite(pre);
    dom = t.preimage(dom);
    EscapeCheck c;
    c.n = n;
    c.escape = dom.subtract(uni).measure();
    c.eps = e[n];
    c.ok = c.escape >= Quad(e[n]);
    ok = ok && c.ok;
    out.checks.push_back(c);
  }
  out.ok = ok;
  return out;
}

// ---------------------------------------------------------------------------

Rate Rate::Sqrt() {
  return {"sqrt(n)", [](unsigned long n) { return SqrtBracket(Rational(n), 12).second; },
          [](unsigned long n) { return std::sqrt(static_cast<double>(n)); }};
}

Rate Rate::NOverLog() {
  return {"n/log(n)",
          [](unsigned long n) -> Rational {
            if (n < 3) return Rational(3);
            return Rational(n) / Rational(std::log(static_cast<double>(n)) - 1e-9);
          },
          [](unsigned long n) { return n < 3 ? 3.0 : static_cast<double>(n) / std::log(static_cast<double>(n)); }};
}

Rate Rate::Zero() {
  return {"0", [](unsigned long) { return Rational(0); }, [](unsigned long) { return 0.0; }};
}

SlowGrowth slow_growth_function(const RankOneMachine& m, const Rate& rho, unsigned long n_lo, unsigned long n_hi,
                                const Rational& cap) {
  if (n_lo < 1 || n_lo > n_hi) throw std::invalid_argument("need 1 <= n_lo <= n_hi");
  if (!(cap > 0 && cap < Rational(1, 4))) throw std::invalid_argument("eps cap must lie in (0, 1/4)");
  SlowGrowth out;
  bool zero = true;
  for (unsigned long n = n_lo; n <= n_hi && zero; ++n) zero = rho.upper(n) == 0;
  if (zero) {
    out.degenerate = true;
    out.F = IntervalSet();
    out.f = StepFunction();
    for (unsigned long n = n_lo; n <= n_hi; ++n) out.checks.push_back({n, Quad(0), Rational(0), true, Quad(0), true});
    out.ok = true;
    return out;
  }
  out.eps.resize(n_hi);
  for (unsigned long n = 1; n <= n_hi; ++n) out.eps[n - 1] = std::min<Rational>(cap, 4 * rho.upper(n) / Rational(n));
  out.escape = slow_escape_set(m, [&](unsigned long n) { return out.eps[n - 1]; }, {n_hi, std::nullopt});
  const IntervalSet& E = out.escape.E;
  out.F = IntervalSet::Unit().subtract(E);
  Quad pF = out.F.measure(), pE = E.measure();
  out.f = StepFunction::Indicator(out.F) - StepFunction::Constant(pF);

  const auto& t = m.map();
  IntervalSet inF = out.F, inE = E;
  bool ok = out.escape.ok;
  for (unsigned long n = 1; n <= n_hi; ++n) {
    if (n > 1) {
      inF = out.F.intersect(t.preimage(inF));
      inE = E.intersect(t.preimage(inE));
    }
    if (n < n_lo) continue;
    GrowthCheck c;
    c.n = n;
    Quad nq(static_cast<long>(n));
    c.lower = nq * pE * inF.measure() + nq * pF * inE.measure();
    c.rho_upper = rho.upper(n);
    c.ok = c.lower >= Quad(c.rho_upper);
    c.sup_ok = !inF.empty();
    c.sup_lower = c.sup_ok ? nq * pE : Quad(0);
    ok = ok && c.ok && c.sup_ok;
    out.checks.push_back(c);
  }
  out.ok = ok;
  return out;
}

// ---------------------------------------------------------------------------

SeriesResult series_noncoboundary(const RankOneMachine& m, const Rational& ratio, const SeriesOptions& opts) {
  if (!(ratio > 0 && ratio < 1)) throw std::invalid_argument("eps ratio must lie in (0,1)");
  Rational tail_factor = ratio / (2 * (1 - ratio));  // sum_{k>m} eps_k/2 = tail_factor * eps_m
  if (tail_factor > Rational(1, 32))
    throw std::invalid_argument("eps ratio " + RationalString(ratio) + " fails the tail constraint: tail = eps_m * " +
                                RationalString(tail_factor) + " > eps_m/32");
  if (opts.stages < 1) throw std::invalid_argument("at least one stage is required");
  if (opts.n1 < 1 || opts.growth < 2) throw std::invalid_argument("need n1 >= 1 and growth >= 2");

  std::vector<unsigned long> ns(opts.stages);
  ns[0] = opts.n1;
  for (size_t i = 1; i < ns.size(); ++i) ns[i] = ns[i - 1] * opts.growth;
  std::vector<Rational> eps(opts.stages);
  eps[0] = ratio;
  for (size_t i = 1; i < eps.size(); ++i) eps[i] = eps[i - 1] * ratio;

  for (size_t attempt = 0;; ++attempt) {
    SeriesResult out;
    out.ratio = ratio;
    std::vector<StepFunction> fs;
    std::vector<AlmostInvariantSet> As;
    StepFunction f;
    for (size_t i = 0; i < ns.size(); ++i) {
      As.push_back(almost_invariant_set(m, Rational(1, 2), ns[i], Rational(1, 2), {0, BlockLayout::kAlternating}));
      fs.push_back(StepFunction::Indicator(As.back().A) - StepFunction::Constant(Quad(Rational(1, 2))));
      f = f + Quad(eps[i]) * fs.back();
    }
    out.f = f;
    bool ok = true;
    std::optional<size_t> failed;
    for (size_t i = 0; i < ns.size(); ++i) {
      SeriesStage s;
      s.m = i + 1;
      s.eps = eps[i];
      s.n = ns[i];
      s.A = As[i];
      Rational n(ns[i]);
      Quad cross = 0, tail = 0;
      for (size_t k = 0; k < ns.size(); ++k) {
        Quad v = Quad(eps[k]) * CocycleL1(m.map(), fs[k], ns[i]);
        if (k < i) cross += v;
        else if (k == i) s.main = v;
        else tail += v;
      }
      s.cross = cross;
      s.tail = tail;
      s.main_bound = eps[i] * n / 8;
      s.cross_bound = eps[i] * n / 32;
      s.tail_bound = tail_factor * eps[i] * n;
      s.triangle = s.main - s.cross - s.tail;
      s.total = CocycleL1(m.map(), f, ns[i]);
      s.total_bound = eps[i] * n / 16;
      s.growth_ok = n * eps[i] * eps[i] >= 1;
      s.ok = s.main >= Quad(s.main_bound) && s.cross <= Quad(s.cross_bound) && s.tail <= Quad(s.tail_bound) &&
             s.triangle >= Quad(s.total_bound) && s.total >= Quad(s.total_bound);
      if (s.cross > Quad(s.cross_bound) && !failed) failed = i;
      ok = ok && s.ok;
      out.stages.push_back(std::move(s));
    }
    if (!failed) {
      out.ok = ok;
      return out;
    }
    if (attempt >= opts.retries)
      throw CrossTermError("cross terms exceed eps_m n_m/32 at stage " + std::to_string(*failed + 1) + " with n = " +
                           std::to_string(ns[*failed]) + " after " + std::to_string(attempt) + " retries");
    for (size_t i = *failed; i < ns.size(); ++i) ns[i] *= 2;
  }
}

// ---------------------------------------------------------------------------

Surd SurdL1(const std::vector<SurdRun>& runs) {
  Surd s;
  for (const auto& r : runs) s += r.value.abs() * Surd(r.x.length());
  return s;
}

L1Transfer l1_nonintegrable_transfer(const RankOneMachine& m, unsigned long N_max) {
  if (N_max < 1) throw std::invalid_argument("N_max must be positive");
  const size_t H = m.height();
  if (H < N_max + 1)
    throw std::runtime_error("tower allocation failure: machine height " + std::to_string(H) + " is below N_max + 1");
  const auto& t = m.map();
  IntervalMap inv = t.inverse();
  Quad w = m.width();

  L1Transfer out;
  auto& rep = out.report;
  rep.identity_ok = true;
  Surd H_norm, expected, dom;
  for (unsigned long n = 1; n <= N_max; ++n) {
    L1TransferTerm term;
    term.n = n;
    Quad need = Quad(Rational(1, 2) / (Rational(n) * n * n));
    std::vector<IntervalSet> pieces;
    for (size_t j = 0; j + n + 1 <= H && need > 0; j += n + 1) {
      Quad take = std::min(need, w);
      pieces.push_back(take == w ? m.level(j) : m.level(j).split_at_measure(take).first);
      need -= take;
    }
    if (need > 0)
      throw std::runtime_error("tower allocation failure: no room for D_" + std::to_string(n) + " with towers of height " +
                               std::to_string(n + 1));
    term.D = UnionAll(pieces);
    std::vector<IntervalSet> sup{term.D};
    IntervalSet cur = term.D;
    for (unsigned long k = 1; k <= n; ++k) {
      cur = t.pushforward(cur);
      if (k < n) sup.push_back(cur);
    }
    term.top = cur;
    term.support = UnionAll(sup);
    term.weight = Surd::Root(Rational(n), static_cast<long>(n));
    term.norm = term.weight * Surd(term.support.measure());
    StepFunction h = StepFunction::Indicator(term.support);
    term.identity_ok =
        h - inv.pullback(h) == StepFunction::Indicator(term.D) - StepFunction::Indicator(term.top);
    rep.identity_ok = rep.identity_ok && term.identity_ok;

    H_norm += term.norm;
    expected += Surd::Root(Rational(1, 2 * static_cast<long>(n)), static_cast<long>(n));
    dom += term.weight * Surd(2 * term.D.measure());
    rep.H_norms.push_back(H_norm);
    rep.expected.push_back(expected);
    rep.dominating.push_back(dom);
    rep.terms.push_back(std::move(term));
  }

  std::vector<Quad> cuts;
  for (const auto& term : rep.terms)
    for (const IntervalSet* s : {&term.D, &term.support, &term.top})
      for (const auto& iv : s->intervals()) {
        cuts.push_back(iv.lo);
        cuts.push_back(iv.hi);
      }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval atom{cuts[i], cuts[i + 1]};
    Surd hv, fv;
    for (const auto& term : rep.terms) {
      if (term.support.contains(atom.lo)) hv += term.weight;
      if (term.D.contains(atom.lo)) fv += term.weight;
      if (term.top.contains(atom.lo)) fv -= term.weight;
    }
    if (!hv.is_zero()) out.H.push_back({atom, hv});
    if (!fv.is_zero()) out.f.push_back({atom, fv});
  }
  rep.H_direct = SurdL1(out.H);
  rep.coboundary_norm = SurdL1(out.f);
  rep.tail_bound = 2 / SqrtBracket(Rational(N_max), 12).first;

  rep.norms_exact = rep.H_direct == rep.H_norms.back();
  for (size_t i = 0; i < rep.H_norms.size(); ++i) rep.norms_exact = rep.norms_exact && rep.H_norms[i] == rep.expected[i];
  rep.increasing = true;
  for (size_t i = 1; i < rep.H_norms.size(); ++i) rep.increasing = rep.increasing && rep.H_norms[i] > rep.H_norms[i - 1];
  rep.dominated = rep.coboundary_norm <= rep.dominating.back();
  rep.ok = rep.norms_exact && rep.increasing && rep.dominated && rep.identity_ok;
  return out;
}

}  // namespace cobound
