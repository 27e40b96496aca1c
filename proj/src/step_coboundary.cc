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

#include "cobound/step_coboundary.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cobound {

namespace {

Surd SumOf(const std::vector<Surd>& xs) {
  Surd s;
  for (const auto& x : xs) s += x;
  return s;
}

void CheckData(const StepData& f) {
  if (f.measures.empty() || f.measures.size() != f.values.size()) {
    throw std::invalid_argument("step data needs one value per piece");
  }
  for (const auto& b : f.measures) {
    if (b.sign() < 0) throw std::invalid_argument("negative piece measure " + b.str());
  }
  if (SumOf(f.measures) != Surd(1)) throw std::invalid_argument("pieces do not tile [0,1)");
  if (!f.mean().is_zero()) throw std::invalid_argument("f is not mean-zero: integral " + f.mean().str());
}

bool AllRational(const std::vector<Surd>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Surd& x) { return x.is_rational(); });
}

Quad AsQuad(const Surd& x) { return x.to_quad(); }

void CheckUnitDomain(const StepFunction& f) {
  if (f.lo() != 0 || f.hi() != 1) throw std::invalid_argument("step function must live on [0,1)");
}

// Value classes in order of first appearance.
std::vector<std::pair<IntervalSet, Quad>> OrderedClasses(const StepFunction& f) {
  std::vector<Quad> order;
  for (const auto& v : f.values()) {
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  }
  std::vector<std::pair<IntervalSet, Quad>> out;
  for (const auto& v : order) out.push_back({f.where([&](const Quad& y) { return y == v; }), v});
  return out;
}

}  // namespace

StepData StepData::Of(const StepFunction& f) {
  CheckUnitDomain(f);
  StepData d;
  for (const auto& [set, v] : OrderedClasses(f)) {
    d.measures.push_back(Surd(set.measure()));
    d.values.push_back(Surd(v));
  }
  return d;
}

StepFunction StepData::layout() const {
  std::vector<Quad> cuts, vals;
  Quad at = 0;
  for (size_t i = 0; i < size(); ++i) {
    if (measures[i].is_zero()) continue;
    cuts.push_back(at);
    vals.push_back(AsQuad(values[i]));
    at += AsQuad(measures[i]);
  }
  if (at != 1) throw std::invalid_argument("pieces do not tile [0,1)");
  return StepFunction::FromBreaks(std::move(cuts), std::move(vals), Quad(1));
}

Surd StepData::mean() const {
  Surd s;
  for (size_t i = 0; i < size(); ++i) s += measures[i] * values[i];
  return s;
}

std::string StepCaseName(StepCase c) {
  switch (c) {
    case StepCase::kAllRational:
      return "all-rational";
    case StepCase::kRationallyIndependent:
      return "rationally-independent";
    case StepCase::kMixed:
      return "mixed";
  }
  return "unknown";
}

Classification ClassifyStepFunction(const StepData& f) {
  CheckData(f);
  const size_t n = f.size();
  Classification c;
  c.order.resize(n);
  std::iota(c.order.begin(), c.order.end(), size_t{0});
  if (AllRational(f.measures)) return c;
  std::vector<Surd> test(f.measures.begin(), f.measures.end() - 1);
  auto kernel = RationalKernel(test);
  if (kernel.empty()) {
    c.tag = StepCase::kRationallyIndependent;
    test.push_back(Surd(1));
    c.ergodic = RationalKernel(test).empty();
    return c;
  }
  if (kernel.size() > 1) {
    throw std::invalid_argument("measures satisfy " + std::to_string(kernel.size()) +
                                " independent rational relations; only a single relation is supported");
  }
  const auto& r = kernel.front();
  size_t j = r.size();
  while (j > 0 && r[j - 1] == 0) --j;
  --j;
  c.tag = StepCase::kMixed;
  c.order.clear();
  for (size_t i = 0; i + 1 < n; ++i) {
    if (i == j) continue;
    c.order.push_back(i);
    Rational coef = -r[i] / r[j];
    coef.canonicalize();
    c.relation.push_back(coef);
  }
  c.order.push_back(j);
  c.order.push_back(n - 1);
  return c;
}

Classification ClassifyStepFunction(const StepFunction& f) { return ClassifyStepFunction(StepData::Of(f)); }

Surd TorusCoboundary::value_at(const std::vector<Surd>& x) const { return f.values[t.label(x)]; }

Surd TorusCoboundary::transfer(const std::vector<Surd>& x) const {
  Surd h;
  for (size_t j = 0; j < x.size(); ++j) h += f.values[j] * x[j];
  return h;
}

Surd TorusCoboundary::birkhoff(const std::vector<Surd>& x, long n) const {
  Surd s;
  std::vector<Surd> y = x;
  for (long k = 0; k < n; ++k) {
    s += value_at(y);
    y = t.apply(y);
  }
  return s;
}

Surd TorusCoboundary::transfer_handle(const std::vector<Surd>& x, long N) const {
  if (N < 1) throw std::invalid_argument("handle needs N >= 1");
  Surd s, total;
  std::vector<Surd> y = x;
  for (long k = 0; k < N; ++k) {
    total += s;
    s += value_at(y);
    y = t.apply(y);
  }
  return total / Rational(N);
}

TorusCoboundary BuildTorusCoboundary(const StepData& f) {
  Classification cls = ClassifyStepFunction(f);
  if (cls.tag != StepCase::kRationallyIndependent) {
    throw std::invalid_argument("torus construction needs the rationally-independent case, got " +
                                StepCaseName(cls.tag));
  }
  const size_t m = f.size();
  if (m < 2) throw std::invalid_argument("torus construction needs m >= 2 pieces");
  Surd total;
  for (const auto& a : f.values) total += a.abs();
  TorusCoboundary out{SimplexTranslation(f.measures), f, Surd(Rational(2 * static_cast<long>(m))) * total,
                      cls.ergodic, {}, {}, {}};
  bool one_field = m == 2;
  if (one_field) {
    try {
      (void)(AsQuad(f.measures[0]) + AsQuad(f.measures[1]) + AsQuad(f.values[0]) + AsQuad(f.values[1]));
    } catch (const FieldMismatch&) {
      one_field = false;
    }
  }
  if (one_field) out.line_f = f.layout();
  return out;
}

TorusCoboundary BuildTorusCoboundary(const StepFunction& f) {
  TorusCoboundary out = BuildTorusCoboundary(StepData::Of(f));
  if (out.line_f) out.line_f = f;
  if (out.line_f) {
    const Quad alpha1 = out.t.chart_alpha();
    auto classes = OrderedClasses(*out.line_f);
    IntervalSet b1 = IntervalSet::Span(1 - alpha1, 1), b2 = IntervalSet::Span(0, 1 - alpha1);
    out.phi = IntervalMap::Matching(classes[0].first, b1).merged(IntervalMap::Matching(classes[1].first, b2));
    out.line_map = out.phi->inverse().after(out.t.chart_map().after(*out.phi));
  }
  return out;
}

std::vector<Quad> TorusChartNorms(const TorusCoboundary& c, long N) {
  if (c.f.size() != 2) throw std::invalid_argument("chart closed form needs m = 2");
  const Quad alpha = c.t.chart_alpha();
  const Quad a1 = AsQuad(c.f.values[0]), a2 = AsQuad(c.f.values[1]);
  std::vector<Quad> out;
  out.reserve(N);
  for (long n = 1; n <= N; ++n) {
    Quad na = Quad(n) * alpha;
    Quad low = Quad(n) * a2 + (a1 - a2) * Quad(Rational(na.floor()));
    Quad high = low + (a1 - a2);
    // floor(u + n alpha) takes the value floor(n alpha) + 1 on a set of
    // positive measure only when n alpha is not an integer.
    bool integral = na.is_rational() && na.rational().get_den() == 1;
    out.push_back(integral ? low.abs() : max(low.abs(), high.abs()));
  }
  return out;
}

OrbitSweep TorusOrbitSweep(const TorusCoboundary& c, long N, long starts, long stride) {
  if (N < 1 || starts < 1 || stride < 1) throw std::invalid_argument("sweep sizes must be positive");
  const size_t m = c.f.size();
  OrbitSweep out;
  out.starts = starts;
  out.sup.assign(N, Surd());
  std::vector<std::vector<Surd>> points;
  std::vector<Surd> x(m);
  for (long k = 0; k < starts; ++k) {
    points.push_back(x);
    for (long s = 0; s < stride; ++s) x = c.t.apply(x);
  }
  for (const auto& p : points) {
    const Surd sum0 = SumOf(p);
    Surd s;
    std::vector<Surd> y = p;
    for (long n = 1; n <= N; ++n) {
      s += c.value_at(y);
      y = c.t.apply(y);
      if (SumOf(y) != sum0) out.sum_conserved = false;
      Surd v = s.abs();
      if (out.sup[n - 1] < v) {
        out.sup[n - 1] = v;
        if (out.max < v) {
          out.max = v;
          out.argmax_n = n;
          out.witness = p;
        }
      }
    }
  }
  out.within_bound = out.max < c.bound;
  return out;
}

RankOneMachine RationalCoboundary::stage(int k) const {
  RankOneMachine m = column;
  for (int i = 0; i < k; ++i) m = m.cut_and_stack(static_cast<int>(q));
  return m;
}

RationalCoboundary BuildRationalCoboundary(const StepFunction& f) {
  CheckUnitDomain(f);
  Classification cls = ClassifyStepFunction(f);
  if (cls.tag != StepCase::kAllRational) {
    throw std::invalid_argument("odometer construction needs the all-rational case, got " + StepCaseName(cls.tag));
  }
  RationalCoboundary out;
  out.f = f;
  auto classes = OrderedClasses(f);
  Integer q = 1;
  for (const auto& [set, v] : classes) {
    Integer den = set.measure().rational().get_den();
    mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
  }
  if (!q.fits_slong_p()) throw std::invalid_argument("column height too large");
  out.q = q.get_si();
  std::vector<IntervalSet> levels;
  for (const auto& [set, v] : classes) {
    Rational count = set.measure().rational() * Rational(q);
    for (auto& piece : set.split_equal(count.get_num().get_ui())) {
      levels.push_back(std::move(piece));
      out.level_f.push_back(v);
    }
  }
  out.column = RankOneMachine::Column(levels, IntervalSet());
  Quad g = 0;
  std::vector<std::pair<IntervalSet, Quad>> g_pieces;
  for (size_t j = 0; j < levels.size(); ++j) {
    out.level_g.push_back(g);
    g_pieces.push_back({levels[j], g});
    g -= out.level_f[j];
  }
  // After the top level the recurrence returns to g(L_1) = 0 because f has mean zero.
  if (!g.is_zero()) throw std::logic_error("transfer recurrence does not close");
  out.g = StepFunction::FromPieces(g_pieces);
  return out;
}

StepFunction RationalResidual(const RationalCoboundary& c, const RankOneMachine& m) {
  const IntervalMap& t = m.map();
  return (c.f - c.g + t.pullback(c.g)).restrict(t.domain());
}

TightnessEvidence ExtensionSweep(const FiniteExtension& t, long N, long starts) {
  if (N < 2 || starts < 1) throw std::invalid_argument("sweep sizes must be positive");
  const size_t k = t.alpha().size();
  const Quad lambda = t.measure_d();
  TightnessEvidence ev;
  ev.N = N;
  ev.starts = starts;
  ev.sup.assign(N, Quad(0));
  for (long j = 0; j < starts; ++j) {
    std::vector<Quad> x(k);
    for (size_t i = 0; i < k; ++i) {
      x[i] = Quad(Frac(2 * j + 1, 2 * starts) + Frac(static_cast<long>(i), static_cast<long>(k))).frac();
    }
    long count = 0;
    for (long n = 1; n <= N; ++n) {
      if (t.in_d(x)) ++count;
      for (size_t i = 0; i < k; ++i) {
        x[i] += t.alpha()[i];
        if (!(x[i] < 1)) x[i] -= 1;
      }
      Quad v = (Quad(count) - Quad(n) * lambda).abs();
      if (ev.sup[n - 1] < v) ev.sup[n - 1] = v;
    }
  }
  for (long n = 1; n <= N; ++n) {
    const Quad& v = ev.sup[n - 1];
    if (ev.max < v) ev.max = v;
    Quad& half = n <= N / 2 ? ev.first_half_max : ev.second_half_max;
    if (half < v) half = v;
  }
  ev.bounded_evidence = !(ev.first_half_max < ev.second_half_max);
  return ev;
}

ExtensionCoboundary BuildFiniteExtensionCoboundary(const StepData& f, long N, long starts,
                                                   std::optional<std::vector<Rational>> relation) {
  CheckData(f);
  if (AllRational(f.measures)) throw std::invalid_argument("all measures rational: use the odometer construction");
  const size_t n = f.size();
  ExtensionCoboundary out;
  if (relation) {
    if (n < 2 || relation->size() + 2 != n) throw std::invalid_argument("relation coefficients inconsistent: wrong count");
    Surd rhs;
    for (size_t i = 0; i < relation->size(); ++i) rhs += Surd((*relation)[i]) * f.measures[i];
    if (rhs != f.measures[n - 2]) throw std::invalid_argument("relation coefficients inconsistent: relation fails");
    out.cls.tag = StepCase::kMixed;
    out.cls.order.resize(n);
    std::iota(out.cls.order.begin(), out.cls.order.end(), size_t{0});
    out.cls.relation = *relation;
  } else {
    out.cls = ClassifyStepFunction(f);
    if (out.cls.tag != StepCase::kMixed) {
      throw std::invalid_argument("extension construction needs the mixed case, got " + StepCaseName(out.cls.tag));
    }
  }
  for (size_t i : out.cls.order) {
    out.pieces.measures.push_back(f.measures[i]);
    out.pieces.values.push_back(f.values[i]);
  }
  const size_t m = n - 2, last = n - 1;
  const auto& rel = out.cls.relation;
  bool degenerate = std::all_of(rel.begin(), rel.end(), [](const Rational& c) { return c == 0; });
  if (degenerate) {
    StepData rest;
    for (size_t i = 0; i < n; ++i) {
      if (i == m) continue;
      rest.measures.push_back(out.pieces.measures[i]);
      rest.values.push_back(out.pieces.values[i]);
    }
    out.reduced = BuildTorusCoboundary(rest);
    return out;
  }
  for (const auto& c : rel) {
    if (c < 0) throw std::invalid_argument("relation coefficients inconsistent: negative coefficient " + RationalString(c));
  }
  out.beta_m = AsQuad(out.pieces.measures[m]);
  const Quad scale = 1 - out.beta_m;
  for (size_t i = 0; i < m; ++i) out.alpha.push_back(AsQuad(out.pieces.measures[i]) / scale);
  out.alpha_last = AsQuad(out.pieces.measures[last]) / scale;
  const Quad shift = AsQuad(out.pieces.values[m]) * out.beta_m;
  for (size_t i = 0; i < n; ++i) {
    if (i != m) out.f_alpha_values.push_back(AsQuad(out.pieces.values[i]) + shift);
  }
  out.t = FiniteExtension(out.alpha, rel, out.beta_m);
  out.measure_d = out.t->measure_d();
  out.mean_corrected = out.measure_d != out.beta_m;
  if (N > 0) out.evidence = ExtensionSweep(*out.t, N, starts);
  return out;
}

ExtensionCoboundary BuildFiniteExtensionCoboundary(const StepFunction& f, long N, long starts) {
  return BuildFiniteExtensionCoboundary(StepData::Of(f), N, starts);
}

}  // namespace cobound
