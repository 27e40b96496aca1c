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
#include <cmath>
#include <map>
#include <stdexcept>

#include "cobound/stacking.h"

namespace cobound {

bool ConditionReport::ok() const {
  for (const auto& [name, good] : items) {
    if (!good) return false;
  }
  return true;
}

std::vector<std::string> ConditionReport::failures() const {
  std::vector<std::string> out;
  for (const auto& [name, good] : items) {
    if (!good) out.push_back(name);
  }
  return out;
}

std::vector<std::pair<Interval, Quad>> Overlaps(const StepFunction& f, const IntervalSet& s) {
  std::vector<std::pair<Interval, Quad>> out;
  const size_t n = f.num_segments();
  size_t i = 0;
  for (const auto& iv : s.intervals()) {
    Quad lo = std::max(iv.lo, f.lo());
    Quad hi = std::min(iv.hi, f.hi());
    if (!(lo < hi)) continue;
    while (i < n && !(lo < f.segment(i).hi)) ++i;
    for (; i < n; ++i) {
      Interval seg = f.segment(i);
      Quad a = std::max(lo, seg.lo);
      Quad b = std::min(hi, seg.hi);
      if (a < b) out.push_back({{a, b}, f.values()[i]});
      if (!(seg.hi < hi)) break;
    }
  }
  return out;
}

std::pair<Quad, Quad> ValueRange(const StepFunction& f, const IntervalSet& s) {
  auto runs = Overlaps(f, s);
  if (runs.empty()) throw std::invalid_argument("value range of an empty set");
  Quad lo = runs.front().second, hi = lo;
  for (const auto& [iv, v] : runs) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

unsigned BinCount(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  Rational r = Rational(2) / eps;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return static_cast<unsigned>(fl.get_ui()) + 1;
}

Rational WorkingResolution(const FunctionSource& src, const Rational& eps) {
  if (!src.refinable()) return src.resolution().rational();
  unsigned m = BinCount(eps);
  Rational room = (eps - Rational(1, m)) / 2;
  Rational lip = abs(src.c1()) + 2 * abs(src.c2());
  Rational delta(1, 4);
  while (!(lip * delta < room)) delta /= 2;
  return delta;
}

StepFunction WorkingFunction(const FunctionSource& src, const Rational& eps) {
  if (!src.refinable()) return src.base();
  return src.refine(WorkingResolution(src, eps));
}

namespace {

struct Atom {
  Interval iv;
  Quad v;
};

struct Bin {
  long key = 0;
  std::vector<Atom> atoms;
  Quad measure;
  Quad integral;
};

struct Part {
  StepFunction f;
  IntervalSet A;
  std::vector<Bin> bins;
  Quad pA;
  Quad intA;
  Quad sup;
};

Part MakePart(const StepFunction& f, const IntervalSet& A, unsigned m) {
  Part p{f, A, {}, A.measure(), Quad(), Quad()};
  std::map<long, Bin> bins;
  Quad covered;
  for (const auto& [iv, v] : Overlaps(f, A)) {
    long key = (v * Quad(Rational(m))).floor().get_si();
    Bin& b = bins[key];
    b.key = key;
    b.atoms.push_back({iv, v});
    b.measure += iv.length();
    b.integral += v * iv.length();
    covered += iv.length();
    p.sup = std::max(p.sup, v.abs());
  }
  if (covered != p.pA) throw std::invalid_argument("domain leaves the function's support interval");
  if (p.pA.is_zero()) throw std::invalid_argument("empty domain");
  for (auto& [k, b] : bins) {
    p.intA += b.integral;
    p.bins.push_back(std::move(b));
  }
  return p;
}

IntervalSet SetOf(const std::vector<Interval>& ivs) {
  std::vector<Interval> keep;
  for (const auto& iv : ivs) {
    if (iv.lo < iv.hi) keep.push_back(iv);
  }
  return IntervalSet::FromIntervals(std::move(keep));
}

// Moves B-mass inside one bin between low and high values so that the
// integral over B changes by delta (as far as capacity allows).
void Rebalance(const Bin& bin, std::vector<Quad>& t, Quad& delta) {
  std::vector<size_t> idx(bin.atoms.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return bin.atoms[a].v < bin.atoms[b].v; });
  size_t lo = 0, hi = idx.size();
  while (!delta.is_zero() && lo < hi) {
    size_t a = idx[lo], b = idx[hi - 1];
    Quad gap = bin.atoms[b].v - bin.atoms[a].v;
    if (!(gap.sign() > 0)) break;
    Quad la = bin.atoms[a].iv.length(), lb = bin.atoms[b].iv.length();
    if (delta.sign() > 0) {
      // Less B on the low atom, more on the high one.
      Quad cap = std::min(t[a] * la, (Quad(1) - t[b]) * lb);
      Quad mu = std::min(cap, delta / gap);
      t[a] -= mu / la;
      t[b] += mu / lb;
      delta -= mu * gap;
      if (t[a].is_zero()) ++lo;
      if (t[b] == Quad(1)) --hi;
    } else {
      Quad cap = std::min((Quad(1) - t[a]) * la, t[b] * lb);
      Quad mu = std::min(cap, -delta / gap);
      t[a] += mu / la;
      t[b] -= mu / lb;
      delta += mu * gap;
      if (t[a] == Quad(1)) ++lo;
      if (t[b].is_zero()) --hi;
    }
  }
}

// Lowest-valued (low = true) or highest-valued atoms of total mass mu.
IntervalSet Extreme(std::vector<Atom> atoms, const Quad& mu, bool low, Quad* edge) {
  std::stable_sort(atoms.begin(), atoms.end(), [&](const Atom& a, const Atom& b) { return low ? a.v < b.v : b.v < a.v; });
  std::vector<Interval> out;
  Quad left = mu;
  for (const auto& a : atoms) {
    if (!(left.sign() > 0)) break;
    Quad len = a.iv.length();
    Quad take = std::min(len, left);
    // Take from the left end of the atom.
    out.push_back({a.iv.lo, a.iv.lo + take});
    left -= take;
    *edge = a.v;
  }
  return SetOf(out);
}

std::optional<PUBPartition> Carve(const Part& part, const Rational& eps, unsigned m, const Integer& q,
                                  std::vector<Integer> p, const PUBOptions& opts) {
  const Quad n{Rational(q + 1)};
  const size_t k = part.bins.size();
  std::vector<Quad> lambda(k);
  Quad pE;
  Integer cells = 0;
  for (size_t i = 0; i < k; ++i) {
    Quad pb = part.bins[i].measure - Quad(Rational(p[i])) / n;
    // Rounded up past the bin: round down instead.
    if (pb.sign() < 0) {
      p[i] -= 1;
      pb = part.bins[i].measure - Quad(Rational(p[i])) / n;
    }
    if (p[i] < 0 || pb.sign() < 0) return std::nullopt;
    lambda[i] = pb / part.bins[i].measure;
    pE += pb;
    cells += p[i];
  }
  if (!(pE < Quad(eps) * part.pA)) return std::nullopt;
  if (cells < static_cast<unsigned long>(opts.min_cells)) return std::nullopt;

  // Proportional balance sets, then an exact correction of the B-integral.
  std::vector<std::vector<Quad>> t(k);
  Quad have;
  for (size_t i = 0; i < k; ++i) {
    t[i].assign(part.bins[i].atoms.size(), lambda[i]);
    have += lambda[i] * part.bins[i].integral;
  }
  Quad delta = pE / part.pA * part.intA - have;
  if (!delta.is_zero()) {
    std::vector<size_t> order(k);
    std::vector<Quad> spread(k);
    for (size_t i = 0; i < k; ++i) {
      order[i] = i;
      Quad lo = part.bins[i].atoms.front().v, hi = lo;
      for (const auto& a : part.bins[i].atoms) {
        lo = std::min(lo, a.v);
        hi = std::max(hi, a.v);
      }
      spread[i] = hi - lo;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return spread[b] < spread[a]; });
    for (size_t i : order) {
      if (delta.is_zero()) break;
      Rebalance(part.bins[i], t[i], delta);
    }
    if (!delta.is_zero()) return std::nullopt;
  }

  PUBPartition out;
  out.domain = part.A;
  out.epsilon = eps;
  out.m = m;
  out.q = q;
  out.cell_measure = Quad(1) / n;
  std::vector<IntervalSet> bsets;
  std::vector<IntervalSet> rest(k);
  std::vector<std::vector<Atom>> rest_atoms(k);
  for (size_t i = 0; i < k; ++i) {
    std::vector<Interval> b, r;
    for (size_t j = 0; j < part.bins[i].atoms.size(); ++j) {
      const Atom& a = part.bins[i].atoms[j];
      Quad cut = a.iv.lo + t[i][j] * a.iv.length();
      b.push_back({a.iv.lo, cut});
      r.push_back({cut, a.iv.hi});
      if (cut < a.iv.hi) rest_atoms[i].push_back({{cut, a.iv.hi}, a.v});
    }
    bsets.push_back(SetOf(b));
    rest[i] = SetOf(r);
  }
  out.exceptional = UnionAll(bsets);

  // Tamping pairs in the bin whose remainder has the widest value spread.
  std::optional<size_t> tb;
  Quad best;
  if (opts.tamping) {
    for (size_t i = 0; i < k; ++i) {
      if (p[i] < 1 || rest_atoms[i].empty()) continue;
      auto [lo, hi] = ValueRange(part.f, rest[i]);
      if (best < hi - lo) {
        best = hi - lo;
        tb = i;
      }
    }
    if (!tb && opts.tamping_required) throw TampingNotFound("no bin with two separated value groups");
  }
  size_t pairs = 0;
  IntervalSet low_used, high_used;
  if (tb) {
    const auto& atoms = rest_atoms[*tb];
    std::vector<Atom> sorted = atoms;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) { return a.v < b.v; });
    Quad total = rest[*tb].measure();
    // Median value, then the masses strictly below and strictly above it.
    Quad acc, median;
    for (const auto& a : sorted) {
      acc += a.iv.length();
      if (!(acc * 2 < total)) {
        median = a.v;
        break;
      }
    }
    Quad below, above;
    for (const auto& a : sorted) {
      if (a.v < median) below += a.iv.length();
      if (median < a.v) above += a.iv.length();
    }
    // When the lower and upper halves share no value the whole halves qualify.
    Quad half = total / 2;
    Quad mu = std::min(below, above);
    Quad e1, e2;
    Extreme(atoms, half, true, &e1);
    Extreme(atoms, half, false, &e2);
    if (e1 < e2) mu = half;
    Integer c = std::min(Integer((mu * n * Quad(2)).floor()), p[*tb]);
    if (c > 0) {
      Quad take = Quad(Rational(c)) / (n * Quad(2));
      low_used = Extreme(atoms, take, true, &e1);
      high_used = Extreme(atoms, take, false, &e2);
      Quad gap = ValueRange(part.f, high_used).first - ValueRange(part.f, low_used).second;
      Integer cap = (Quad(4) * part.sup / gap).floor();
      c = std::min(c, cap);
      if (c > 0) {
        take = Quad(Rational(c)) / (n * Quad(2));
        low_used = Extreme(atoms, take, true, &e1);
        high_used = Extreme(atoms, take, false, &e2);
        out.tamping_gap = gap;
        out.tamping_bin = part.bins[*tb].key;
        pairs = c.get_ui();
      }
    }
    if (pairs == 0) {
      if (opts.tamping_required) throw TampingNotFound("no separated value groups of usable mass");
      low_used = high_used = IntervalSet();
    }
  }
  out.tamping_pairs = pairs;

  for (size_t i = 0; i < k; ++i) {
    if (p[i] == 0) continue;
    size_t count = p[i].get_ui();
    if (tb && i == *tb && pairs > 0) {
      auto lows = low_used.split_equal(pairs);
      auto highs = high_used.split_equal(pairs);
      for (size_t j = 0; j < pairs; ++j) {
        out.cells.push_back(lows[j].unite(highs[j]));
        out.cell_bin.push_back(part.bins[i].key);
      }
      IntervalSet left = rest[i].subtract(low_used).subtract(high_used);
      if (count > pairs) {
        for (auto& c : left.split_equal(count - pairs)) {
          out.cells.push_back(std::move(c));
          out.cell_bin.push_back(part.bins[i].key);
        }
      }
      continue;
    }
    for (auto& c : rest[i].split_equal(count)) {
      out.cells.push_back(std::move(c));
      out.cell_bin.push_back(part.bins[i].key);
    }
  }
  for (const auto& c : out.cells) {
    auto [lo, hi] = ValueRange(part.f, c);
    out.oscillation_bound = std::max(out.oscillation_bound, hi - lo);
  }
  return out;
}

}  // namespace

std::vector<PUBPartition> JointPub(const std::vector<std::pair<StepFunction, IntervalSet>>& parts,
                                   const Rational& eps, const PUBOptions& opts) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  if (parts.empty()) throw std::invalid_argument("no domains");
  const unsigned m = BinCount(eps);
  std::vector<Part> ps;
  std::vector<Quad> x;
  for (const auto& [f, A] : parts) {
    ps.push_back(MakePart(f, A, m));
    for (const auto& b : ps.back().bins) {
      if (!(b.measure < 1)) throw std::invalid_argument("a single value bin fills the whole unit interval");
      x.push_back(b.measure);
    }
  }
  // Floating-point screen of the exceptional measure; survivors are checked exactly.
  std::vector<std::vector<double>> xd;
  for (const auto& part : ps) {
    xd.emplace_back();
    for (const auto& b : part.bins) xd.back().push_back(b.measure.to_double());
  }
  const double e = Rational(eps).get_d();
  for (Integer q = std::max(opts.q_min, Integer(2)); q <= opts.q_max; ++q) {
    const double qd = q.get_d(), nd = qd + 1;
    bool promising = true;
    for (size_t j = 0; j < ps.size() && promising; ++j) {
      double pE = 0, cells = 0;
      for (double x : xd[j]) {
        double p = std::nearbyint(qd * x);
        if (x - p / nd < 0) p -= 1;
        pE += x - p / nd;
        cells += p;
      }
      if (!(pE < e * ps[j].pA.to_double() * (1 + 1e-9) + 1e-12) || cells + 0.5 < opts.min_cells) promising = false;
    }
    if (!promising) continue;
    Approximation a;
    try {
      a = SimultaneousApproximation(x, 2 * m, q, q);
    } catch (const ApproximationNotFound&) {
      continue;
    }
    std::vector<PUBPartition> out;
    size_t off = 0;
    bool ok = true;
    for (const auto& part : ps) {
      std::vector<Integer> p(a.p.begin() + off, a.p.begin() + off + part.bins.size());
      off += part.bins.size();
      auto carved = Carve(part, eps, m, a.q, p, opts);
      if (!carved) {
        ok = false;
        break;
      }
      out.push_back(std::move(*carved));
    }
    if (ok) return out;
  }
  throw ApproximationNotFound("no admissible denominator up to " + opts.q_max.get_str(), opts.q_max * 4);
}

PUBPartition PubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps, const PUBOptions& opts) {
  return JointPub({{f, A}}, eps, opts).front();
}

PUBPartition pub_partition(const FunctionSource& src, const IntervalSet& A, const Rational& eps,
                           const PUBOptions& opts) {
  if (!src.infinitely_valued()) {
    throw std::invalid_argument("source takes finitely many values; use the step-coboundary module");
  }
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
  return PubFromStep(WorkingFunction(src, eps), A, eps, opts);
}

ConditionReport CheckPUB(const StepFunction& f, const PUBPartition& p) {
  ConditionReport r;
  const Quad pA = p.domain.measure();
  Quad total = p.exceptional.measure();
  std::vector<IntervalSet> all = p.cells;
  all.push_back(p.exceptional);
  for (const auto& c : p.cells) total += c.measure();
  r.add("partition of the domain", UnionAll(all) == p.domain && total == pA);
  r.add("(1) exceptional measure below eps p(A)", p.exceptional.measure() < Quad(p.epsilon) * pA);
  IntervalSet main = p.domain.subtract(p.exceptional);
  r.add("(2) balance identity",
        f.integral_over(main) * pA == main.measure() * f.integral_over(p.domain));
  bool osc = true;
  for (const auto& c : p.cells) {
    auto [lo, hi] = ValueRange(f, c);
    if (!(hi - lo < Quad(p.epsilon))) osc = false;
  }
  r.add("(3) oscillation below eps on every cell", osc);
  bool equal = !p.cells.empty();
  for (const auto& c : p.cells) {
    if (c.measure() != p.cells.front().measure()) equal = false;
  }
  r.add("(4) equal cell measures", equal);
  return r;
}

ConditionReport CheckPUBSource(const FunctionSource& src, const PUBPartition& p) {
  ConditionReport r;
  bool osc = true;
  for (const auto& c : p.cells) {
    std::optional<Rational> lo, hi;
    for (const auto& iv : c.intervals()) {
      std::pair<Rational, Rational> rg;
      if (src.refinable()) {
        rg = src.range(iv.lo.rational(), iv.hi.rational());
      } else {
        auto [a, b] = ValueRange(src.base(), IntervalSet::FromIntervals({iv}));
        rg = {a.rational(), b.rational()};
      }
      lo = lo ? std::min(*lo, rg.first) : rg.first;
      hi = hi ? std::max(*hi, rg.second) : rg.second;
    }
    if (lo && !(*hi - *lo < p.epsilon)) osc = false;
  }
  r.add("(3) source oscillation below eps on every cell", osc);
  return r;
}

GreedyOrder greedy_stack(const std::vector<std::pair<IntervalSet, Quad>>& pieces, std::optional<size_t> first) {
  GreedyOrder out;
  if (pieces.empty()) return out;
  Quad total;
  for (const auto& [s, v] : pieces) {
    if (s.measure() != pieces.front().first.measure()) throw std::invalid_argument("pieces differ in measure");
    total += v;
    out.bound = std::max(out.bound, v.abs());
  }
  if (!total.is_zero()) throw std::invalid_argument("total integral is not zero");
  std::vector<bool> used(pieces.size(), false);
  Quad sigma;
  auto take = [&](size_t i) {
    used[i] = true;
    sigma += pieces[i].second;
    out.order.push_back(i);
    out.prefix.push_back(sigma);
  };
  if (first) {
    if (*first >= pieces.size()) throw std::out_of_range("forced first piece");
    take(*first);
  }
  while (out.order.size() < pieces.size()) {
    std::optional<size_t> pick;
    const bool want_nonneg = sigma.sign() <= 0;
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (used[i]) continue;
      const Quad& v = pieces[i].second;
      bool admissible = want_nonneg ? v.sign() >= 0 : v.sign() < 0;
      if (!admissible) continue;
      if (!pick || pieces[*pick].second.abs() < v.abs()) pick = i;
    }
    if (!pick) throw std::logic_error("greedy stacking found no admissible piece");
    take(*pick);
  }
  return out;
}

}  // namespace cobound
