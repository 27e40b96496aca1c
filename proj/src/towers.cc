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
#include <map>
#include <stdexcept>

#include "cobound/stacking.h"

namespace cobound {

StepFunction StepFromRuns(std::vector<std::pair<Interval, Quad>> runs) {
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.first.lo < b.first.lo; });
  std::vector<Quad> cuts{Quad(0)}, values{Quad(0)};
  Quad at(0);
  for (auto& [iv, v] : runs) {
    if (!(iv.lo < iv.hi)) continue;
    if (iv.lo < at) throw std::invalid_argument("overlapping runs");
    if (cuts.back() == iv.lo) {
      values.back() = v;
    } else {
      cuts.push_back(iv.lo);
      values.push_back(v);
    }
    at = iv.hi;
    if (at < Quad(1)) {
      cuts.push_back(at);
      values.push_back(Quad(0));
    }
  }
  return StepFunction::FromBreaks(std::move(cuts), std::move(values), Quad(1));
}

namespace {

std::vector<Branch> Compact(std::vector<Branch> br) {
  std::sort(br.begin(), br.end(), [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
  std::vector<Branch> out;
  for (auto& b : br) {
    if (!(b.lo < b.hi)) continue;
    if (!out.empty() && out.back().hi == b.lo && out.back().shift == b.shift) {
      out.back().hi = b.hi;
    } else {
      out.push_back(std::move(b));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strand tables: every base point followed up its column.

struct Strand {
  Quad w;
  std::vector<Quad> pos;
  std::vector<Quad> val;
};

Strand Sub(const Strand& s, const Quad& off, const Quad& w) {
  Strand t{w, s.pos, s.val};
  if (!off.is_zero()) {
    for (auto& p : t.pos) p += off;
  }
  return t;
}

std::vector<Strand> Walk(const IntervalMap& map, const IntervalSet& base, const StepFunction& f) {
  std::vector<Strand> active, done;
  for (const auto& [iv, v] : Overlaps(f, base)) active.push_back({iv.length(), {iv.lo}, {v}});
  const auto& br = map.branches();
  size_t steps = 0;
  while (!active.empty()) {
    if (++steps > 1000000) throw std::logic_error("column walk does not reach a top");
    std::vector<Strand> next;
    for (auto& s : active) {
      const Quad x = s.pos.back();
      const Quad e = x + s.w;
      auto it = std::upper_bound(br.begin(), br.end(), x, [](const Quad& v, const Branch& b) { return v < b.lo; });
      if (it != br.begin()) --it;
      Quad cur = x;
      bool any = false;
      for (; it != br.end() && it->lo < e; ++it) {
        Quad a = std::max(cur, it->lo);
        Quad b = std::min(e, it->hi);
        if (!(a < b)) continue;
        if (cur < a) done.push_back(Sub(s, cur - x, a - cur));
        any = true;
        auto runs = Overlaps(f, IntervalSet::FromIntervals({{a + it->shift, b + it->shift}}));
        for (const auto& [iv, v] : runs) {
          Strand t = Sub(s, iv.lo - it->shift - x, iv.length());
          t.pos.push_back(iv.lo);
          t.val.push_back(v);
          next.push_back(std::move(t));
        }
        cur = b;
      }
      if (!any) {
        done.push_back(std::move(s));
      } else if (cur < e) {
        done.push_back(Sub(s, cur - x, e - cur));
      }
    }
    active = std::move(next);
  }
  return done;
}

Quad SumOf(const Strand& s) {
  Quad t;
  for (const auto& v : s.val) t += v;
  return t;
}

IntervalMap MapFromStrands(const std::vector<Strand>& strands) {
  std::vector<Branch> br;
  for (const auto& s : strands) {
    for (size_t i = 0; i + 1 < s.pos.size(); ++i) br.push_back({s.pos[i], s.pos[i] + s.w, s.pos[i + 1] - s.pos[i]});
  }
  return IntervalMap::FromBranches(Compact(std::move(br)));
}

// ---------------------------------------------------------------------------
// Parameter coordinates on a level: measure swept from its left edge.

struct ParamRun {
  Quad start;
  Quad width;
  Quad value;
};

struct Geom {
  std::vector<Interval> ivs;
  std::vector<Quad> off;
  Quad measure;

  explicit Geom(const IntervalSet& s) {
    for (const auto& iv : s.intervals()) {
      off.push_back(measure);
      ivs.push_back(iv);
      measure += iv.length();
    }
  }
  size_t locate(const Quad& u) const {
    auto it = std::upper_bound(off.begin(), off.end(), u);
    return static_cast<size_t>(it - off.begin()) - 1;
  }
  void slices(const Quad& a, const Quad& w, std::vector<Interval>& out) const {
    size_t i = locate(a);
    Quad u;
    while (u < w) {
      Quad x = ivs[i].lo + (a + u - off[i]);
      Quad c = std::min(ivs[i].hi - x, w - u);
      out.push_back({x, x + c});
      u += c;
      ++i;
    }
  }
  std::vector<ParamRun> runs(const StepFunction& f) const {
    std::vector<ParamRun> out;
    size_t i = 0;
    for (const auto& [iv, v] : Overlaps(f, IntervalSet::FromIntervals(ivs))) {
      while (!(iv.lo < ivs[i].hi)) ++i;
      Quad start = off[i] + (iv.lo - ivs[i].lo);
      if (!out.empty() && out.back().value == v && out.back().start + out.back().width == start) {
        out.back().width += iv.length();
      } else {
        out.push_back({start, iv.length(), v});
      }
    }
    return out;
  }
};

// Branches carrying param [a, a + w) of s onto param [b, b + w) of d.
void Link(const Geom& s, const Quad& a, const Geom& d, const Quad& b, const Quad& w, std::vector<Branch>& out) {
  size_t i = s.locate(a), j = d.locate(b);
  Quad u;
  while (u < w) {
    Quad xa = s.ivs[i].lo + (a + u - s.off[i]);
    Quad xb = d.ivs[j].lo + (b + u - d.off[j]);
    Quad ra = s.ivs[i].hi - xa, rb = d.ivs[j].hi - xb;
    Quad c = std::min({ra, rb, w - u});
    out.push_back({xa, xa + c, xb - xa});
    u += c;
    if (c == ra) ++i;
    if (c == rb) ++j;
  }
}

struct Node {
  int geom;
  Quad start;
  Quad width;
  Quad value;
  Quad sum;  // f summed from the column base up to and including this node
  int parent;
  Quad offset;  // where this node sits inside the parent's range
  int tag;
  int depth;
};

struct Incoming {
  int node;  // -1: fresh column base
  Quad width;
  Quad sum;
  int tag;
  int depth;  // depth of the children
  Quad start;
};

// Builds level matchings strand by strand. merge() pairs the strands with the
// lowest running sums against the highest values of the next level.
class Engine {
 public:
  explicit Engine(const StepFunction& f) : f_(f) {}

  int add(const IntervalSet& s) {
    geoms_.emplace_back(s);
    return static_cast<int>(geoms_.size()) - 1;
  }
  const Geom& geom(int g) const { return geoms_[g]; }

  static Incoming Fresh(const Quad& w, int tag) { return {-1, w, Quad(), tag, 0, Quad()}; }

  std::vector<Incoming> incoming(const std::vector<int>& ids) const {
    std::vector<Incoming> in;
    for (int id : ids) {
      const Node& n = nodes_[id];
      in.push_back({id, n.width, n.sum, n.tag, n.depth + 1, n.start});
    }
    return in;
  }

  std::vector<int> base(int g, int tag) { return merge({Fresh(geoms_[g].measure, tag)}, g, false); }

  std::vector<int> merge(std::vector<Incoming> in, int g, bool anti) {
    std::vector<ParamRun> runs = geoms_[g].runs(f_);
    if (anti) {
      std::stable_sort(in.begin(), in.end(), [](const Incoming& a, const Incoming& b) {
        if (a.sum != b.sum) return a.sum < b.sum;
        return a.tag < b.tag;
      });
      std::stable_sort(runs.begin(), runs.end(), [](const ParamRun& a, const ParamRun& b) { return b.value < a.value; });
    } else {
      std::stable_sort(in.begin(), in.end(), [](const Incoming& a, const Incoming& b) { return a.start < b.start; });
    }
    std::vector<int> out;
    size_t a = 0, b = 0;
    Quad ua, ub;
    while (a < in.size() && b < runs.size()) {
      Quad c = std::min(in[a].width - ua, runs[b].width - ub);
      Node n{g, runs[b].start + ub, c, runs[b].value, in[a].sum + runs[b].value, in[a].node, ua, in[a].tag, in[a].depth};
      if (in[a].node < 0) n.depth = 0;
      nodes_.push_back(std::move(n));
      out.push_back(static_cast<int>(nodes_.size()) - 1);
      ua += c;
      ub += c;
      if (ua == in[a].width) {
        ++a;
        ua = Quad();
      }
      if (ub == runs[b].width) {
        ++b;
        ub = Quad();
      }
    }
    if (a != in.size() || b != runs.size()) throw std::logic_error("strand widths do not match the level");
    return out;
  }

  std::vector<Branch> branches(std::optional<int> tag = std::nullopt) const {
    std::vector<Branch> br;
    for (const auto& n : nodes_) {
      if (n.parent < 0 || (tag && n.tag != *tag)) continue;
      const Node& p = nodes_[n.parent];
      Link(geoms_[p.geom], p.start + n.offset, geoms_[n.geom], n.start, n.width, br);
    }
    return Compact(std::move(br));
  }

  // Union of the node ranges with this tag, grouped by depth.
  std::vector<IntervalSet> levels(int tag) const {
    std::map<int, std::vector<Interval>> by;
    for (const auto& n : nodes_) {
      if (n.tag == tag) geoms_[n.geom].slices(n.start, n.width, by[n.depth]);
    }
    std::vector<IntervalSet> out;
    for (auto& [d, ivs] : by) {
      if (d != static_cast<int>(out.size())) throw std::logic_error("missing depth in sub-tower");
      out.push_back(IntervalSet::FromIntervals(std::move(ivs)));
    }
    return out;
  }

 private:
  const StepFunction& f_;
  std::vector<Geom> geoms_;
  std::vector<Node> nodes_;
};

Quad SpreadOf(const std::vector<Strand>& strands) {
  if (strands.empty()) return Quad();
  Quad lo = SumOf(strands.front()), hi = lo;
  for (const auto& s : strands) {
    Quad t = SumOf(s);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return hi - lo;
}

// Partial sums along the tower levels, by pulling back through the inverse map.
// Returns the sup of |partial sum| over each level.
std::vector<Quad> PartialSups(const StepFunction& f, const IntervalMap& inv, const std::vector<IntervalSet>& levels) {
  std::vector<Quad> sups;
  StepFunction P = f.restrict(levels.front());
  sups.push_back(P.sup_abs_over(levels.front()));
  for (size_t i = 1; i < levels.size(); ++i) {
    P = inv.restricted(levels[i]).pullback(P) + f.restrict(levels[i]);
    sups.push_back(P.sup_abs_over(levels[i]));
  }
  return sups;
}

bool MapCarries(const IntervalMap& map, const std::vector<IntervalSet>& levels) {
  try {
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
      if (!levels[i].subset_of(map.domain())) return false;
      if (map.pushforward(levels[i]) != levels[i + 1]) return false;
    }
  } catch (const UndefinedError&) {
    return false;
  }
  return true;
}

void CheckMeanZero(const StepFunction& f, const IntervalSet& A) {
  if (!f.integral_over(A).is_zero()) throw std::invalid_argument("f must have mean zero on the domain");
}

// Working function for a polynomial source: refined values shifted by the
// quadrature error so that the mean over A is exactly zero.
StepFunction CenteredWorking(const FunctionSource& src, const IntervalSet& A, const Rational& delta) {
  if (!src.infinitely_valued()) {
    throw std::invalid_argument("source takes finitely many values; use the step-coboundary module");
  }
  Rational exact;
  for (const auto& iv : A.intervals()) exact += src.integral(iv.lo.rational(), iv.hi.rational());
  if (exact != 0) throw std::invalid_argument("source is not mean-zero on the domain");
  StepFunction f = src.refine(delta);
  Quad shift = f.integral_over(A) / A.measure();
  if (!shift.is_zero()) f = f - StepFunction::Constant(shift);
  return f;
}

void CheckEps(const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0,1)");
}

TUBBuild StackCells(const StepFunction& f, const IntervalSet& A, const Rational& eps, PUBPartition pub) {
  TUBBuild out;
  out.f = f;
  std::vector<std::pair<IntervalSet, Quad>> pieces;
  for (const auto& c : pub.cells) pieces.push_back({c, f.integral_over(c)});
  out.order = greedy_stack(pieces);
  Engine e(f);
  std::vector<int> geoms;
  for (size_t i : out.order.order) geoms.push_back(e.add(pub.cells[i]));
  std::vector<int> cur = e.base(geoms.front(), 0);
  for (size_t k = 1; k < geoms.size(); ++k) cur = e.merge(e.incoming(cur), geoms[k], true);
  TUBTower t;
  for (size_t i : out.order.order) t.levels.push_back(pub.cells[i]);
  t.map = IntervalMap::FromBranches(e.branches());
  t.epsilon = eps;
  out.tower = level_refine(t, f, eps, 10000, &out.refine);
  out.columns = Columns(out.tower.map, out.tower.levels.front(), f);
  out.pub = std::move(pub);
  (void)A;
  return out;
}

}  // namespace

ColumnData Columns(const IntervalMap& map, const IntervalSet& base, const StepFunction& f) {
  std::vector<Strand> strands = Walk(map, base, f);
  ColumnData c;
  std::vector<Branch> down;
  std::vector<std::pair<Interval, Quad>> transfer, sums;
  for (const auto& s : strands) {
    const Quad top = s.pos.back();
    Quad below;
    for (size_t i = 0; i < s.pos.size(); ++i) {
      c.to_top.push_back({s.pos[i], s.pos[i] + s.w, top - s.pos[i]});
      transfer.push_back({{s.pos[i], s.pos[i] + s.w}, -below});
      below += s.val[i];
    }
    down.push_back({top, top + s.w, s.pos.front() - top});
    sums.push_back({{top, top + s.w}, below});
  }
  c.to_top = Compact(std::move(c.to_top));
  c.to_base = IntervalMap::FromBranches(Compact(std::move(down)));
  c.transfer = StepFromRuns(std::move(transfer));
  c.full_sum = StepFromRuns(std::move(sums));
  c.spread = SpreadOf(strands);
  return c;
}

StepFunction ColumnSums(const TUBTower& tower, const StepFunction& f) {
  return Columns(tower.map, tower.levels.front(), f).full_sum;
}

TUBTower level_refine(const TUBTower& tower, const StepFunction& f, const Rational& eps, size_t max_iters,
                      RefineReport* report) {
  std::vector<Strand> s = Walk(tower.map, tower.levels.front(), f);
  std::vector<Quad> F;
  for (const auto& x : s) F.push_back(SumOf(x));
  RefineReport r;
  r.spread_before = SpreadOf(s);
  const Quad e(eps);
  auto satisfied = [&] {
    for (const auto& v : F) {
      if (!(v.abs() < e)) return false;
    }
    return true;
  };
  while (r.swaps < max_iters && !satisfied() && s.size() > 1) {
    size_t a = 0, b = 0;
    for (size_t i = 1; i < s.size(); ++i) {
      if (F[a] < F[i]) a = i;
      if (F[i] < F[b]) b = i;
    }
    const Quad gap = F[a] - F[b];
    if (!(gap.sign() > 0)) break;
    // Level where trading the two pieces brings the sums closest together.
    std::optional<size_t> level;
    Quad best;
    const size_t h = std::min(s[a].val.size(), s[b].val.size());
    for (size_t i = 0; i < h; ++i) {
      Quad d = s[a].val[i] - s[b].val[i];
      if (!(d.sign() > 0 && d < gap)) continue;
      Quad miss = (gap - d * 2).abs();
      if (!level || miss < best) {
        level = i;
        best = miss;
      }
    }
    if (!level) break;
    if (s[a].w != s[b].w) {
      size_t big = s[b].w < s[a].w ? a : b;
      Quad w = std::min(s[a].w, s[b].w);
      Strand rest = Sub(s[big], w, s[big].w - w);
      s[big] = Sub(s[big], Quad(), w);
      s.push_back(std::move(rest));
      F.push_back(F[big]);
    }
    const size_t i = *level;
    std::swap(s[a].pos[i], s[b].pos[i]);
    std::swap(s[a].val[i], s[b].val[i]);
    Quad d = s[b].val[i] - s[a].val[i];
    F[a] -= d;
    F[b] += d;
    ++r.swaps;
  }
  r.spread_after = SpreadOf(s);
  r.satisfied = satisfied();
  if (report) *report = r;
  TUBTower out = tower;
  if (r.swaps > 0) out.map = MapFromStrands(s);
  return out;
}

ConditionReport CheckTUB(const StepFunction& f, const IntervalSet& A, const TUBTower& t) {
  ConditionReport r;
  if (t.levels.empty()) {
    r.add("nonempty tower", false);
    return r;
  }
  const Quad e(t.epsilon);
  const Quad norm = f.sup_abs_over(A);
  IntervalSet support = t.support();
  Quad total;
  bool equal = true;
  for (const auto& l : t.levels) {
    total += l.measure();
    if (l.measure() != t.levels.front().measure()) equal = false;
  }
  r.add("levels disjoint inside the domain", total == support.measure() && support.subset_of(A));
  r.add("levels of equal measure", equal);
  r.add("coverage above (1 - eps) p(A)", (Quad(1) - e) * A.measure() < support.measure());
  r.add("map carries each level onto the next", MapCarries(t.map, t.levels));
  auto sups = PartialSups(f, t.map.inverse(), t.levels);
  bool partial = true;
  for (const auto& s : sups) {
    if (!(s < norm + e)) partial = false;
  }
  r.add("partial sums below ||f|| + eps", partial);
  r.add("full sums below eps", sups.back() < e);
  Quad sum;
  for (const auto& l : t.levels) sum += f.integral_over(l);
  r.add("level integrals sum to the integral over A", sum == f.integral_over(A));
  return r;
}

IntervalSet WTUBTower::support() const {
  std::vector<IntervalSet> all;
  for (const auto& t : subtowers) all.push_back(t.support());
  return UnionAll(all);
}

ConditionReport CheckWTUB(const StepFunction& f, const IntervalSet& A, const WTUBTower& t) {
  ConditionReport r;
  if (t.subtowers.empty()) {
    r.add("nonempty tower", false);
    return r;
  }
  const Quad e(t.epsilon);
  const Quad norm = f.sup_abs_over(A);
  const IntervalMap inv = t.map.inverse();
  Quad total;
  bool heights = true, widths = true, partial = true, full = true, carried = true;
  for (size_t j = 0; j < t.subtowers.size(); ++j) {
    const TUBTower& s = t.subtowers[j];
    if (s.height() != t.subtowers.front().height() + j) heights = false;
    if (s.levels.front().measure() != t.subtowers.front().levels.front().measure()) widths = false;
    for (const auto& l : s.levels) {
      total += l.measure();
      if (l.measure() != s.levels.front().measure()) widths = false;
    }
    if (!MapCarries(t.map, s.levels)) carried = false;
    auto sups = PartialSups(f, inv, s.levels);
    for (const auto& v : sups) {
      if (!(v < Quad(static_cast<long>(t.M)) * norm)) partial = false;
    }
    if (!(sups.back() < e)) full = false;
  }
  IntervalSet support = t.support();
  r.add("levels disjoint inside the domain", total == support.measure() && support.subset_of(A));
  r.add("consecutive heights h, h+1, ...", heights);
  r.add("equal base widths", widths);
  r.add("coverage above (1 - eps) p(A)", (Quad(1) - e) * A.measure() < support.measure());
  r.add("map carries each level onto the next", carried);
  r.add("partial sums below M ||f||", partial);
  r.add("full sums below eps in every sub-tower", full);
  Quad sum;
  for (const auto& s : t.subtowers) {
    for (const auto& l : s.levels) sum += f.integral_over(l);
  }
  r.add("level integrals sum to the integral over A", sum == f.integral_over(A));
  return r;
}

TUBBuild TubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps, unsigned long N) {
  CheckEps(eps);
  CheckMeanZero(f, A);
  PUBOptions o;
  o.min_cells = N + 1;
  o.q_min = std::max(Integer(2), Integer((Quad(Rational(static_cast<long>(N))) / A.measure()).floor()));
  return StackCells(f, A, eps, PubFromStep(f, A, eps / 2, o));
}

TUBBuild tub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps, unsigned long N) {
  CheckEps(eps);
  return TubFromStep(CenteredWorking(src, A, WorkingResolution(src, eps / 2)), A, eps, N);
}

std::pair<TUBBuild, TUBBuild> PairedTub(const StepFunction& f1, const IntervalSet& A1, const StepFunction& f2,
                                        const IntervalSet& A2, const Rational& eps, unsigned long N) {
  CheckEps(eps);
  CheckMeanZero(f1, A1);
  CheckMeanZero(f2, A2);
  if (!A1.disjoint_from(A2)) throw std::invalid_argument("paired domains overlap");
  PUBOptions o;
  o.q_min = std::max(Integer(2), Integer(static_cast<unsigned long>(N)));
  auto pubs = JointPub({{f1, A1}, {f2, A2}}, eps / 2, o);
  return {StackCells(f1, A1, eps, std::move(pubs[0])), StackCells(f2, A2, eps, std::move(pubs[1]))};
}

std::pair<TUBBuild, TUBBuild> tub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps,
                                        unsigned long N, const FunctionSource& src2, const IntervalSet& A2) {
  CheckEps(eps);
  Rational delta = std::min(WorkingResolution(src, eps / 2), WorkingResolution(src2, eps / 2));
  return PairedTub(CenteredWorking(src, A, delta), A, CenteredWorking(src2, A2, delta), A2, eps, N);
}

WTUBBuild WtubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps, unsigned long N) {
  CheckEps(eps);
  CheckMeanZero(f, A);
  PUBOptions o;
  o.min_cells = N + 2;
  o.q_min = std::max(Integer(2), Integer((Quad(Rational(static_cast<long>(N + 1))) / A.measure()).floor()));
  o.tamping = true;
  o.tamping_required = true;
  WTUBBuild out;
  out.f = f;
  out.pub = PubFromStep(f, A, eps / 2, o);
  const auto& cells = out.pub.cells;

  // Bottom cell: smallest sup |f|, outside the tamping bin when possible.
  std::optional<size_t> first;
  Quad best;
  for (int pass = 0; pass < 2 && !first; ++pass) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (pass == 0 && out.pub.tamping_pairs > 0 && out.pub.cell_bin[i] == out.pub.tamping_bin) continue;
      Quad s = f.sup_abs_over(cells[i]);
      if (!first || s < best) {
        first = i;
        best = s;
      }
    }
  }
  std::vector<std::pair<IntervalSet, Quad>> pieces;
  for (const auto& c : cells) pieces.push_back({c, f.integral_over(c)});
  out.order = greedy_stack(pieces, first);

  // Cut the bottom cell into thirds L, M, R: the second sub-tower starts on
  // M, the third on R and then L, the first on the next cell.
  const Quad third = out.pub.cell_measure / Quad(3);
  auto [L, rest] = cells[out.order.order.front()].split_at_measure(third);
  auto [Mid, R] = rest.split_at_measure(third);
  Engine e(f);
  int gL = e.add(L), gM = e.add(Mid), gR = e.add(R);
  std::vector<int> col2 = e.base(gM, 1);
  std::vector<int> col3 = e.base(gR, 2);
  col3 = e.merge(e.incoming(col3), gL, false);
  std::vector<Incoming> in{Engine::Fresh(third, 0)};
  for (auto& x : e.incoming(col2)) in.push_back(x);
  for (auto& x : e.incoming(col3)) in.push_back(x);
  std::vector<int> cur;
  for (size_t k = 1; k < out.order.order.size(); ++k) {
    int g = e.add(cells[out.order.order[k]]);
    cur = e.merge(k == 1 ? in : e.incoming(cur), g, true);
  }
  WTUBTower t;
  t.epsilon = eps;
  t.M = 3;
  std::vector<IntervalSet> bases;
  for (int tag = 0; tag < 3; ++tag) {
    TUBTower s;
    s.levels = e.levels(tag);
    s.map = IntervalMap::FromBranches(e.branches(tag));
    s.epsilon = eps;
    bases.push_back(s.levels.front());
    t.subtowers.push_back(std::move(s));
  }
  t.map = IntervalMap::FromBranches(e.branches());
  out.tower = std::move(t);
  out.columns = Columns(out.tower.map, UnionAll(bases), f);
  return out;
}

WTUBBuild wtub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps, unsigned long N) {
  CheckEps(eps);
  Rational delta = WorkingResolution(src, eps / 2);
  for (size_t attempt = 0;; ++attempt) {
    try {
      WTUBBuild b = WtubFromStep(CenteredWorking(src, A, delta), A, eps, N);
      b.refinements = attempt;
      return b;
    } catch (const TampingNotFound&) {
      if (attempt + 1 >= 3) throw;
      delta /= 2;
    }
  }
}

}  // namespace cobound
