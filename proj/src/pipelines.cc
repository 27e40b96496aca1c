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

#include "cobound/pipelines.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cobound/cocycle.h"
#include "cobound/diophantine.h"
#include "cobound/fourier.h"
#include "cobound/non_coboundary.h"
#include "cobound/stacking.h"
#include "cobound/step_coboundary.h"

namespace cobound {

namespace {

constexpr long kMaxLevels = 1L << 16;

// Config parsing: any failure inside becomes a ConfigError.
template <class F>
auto Parsed(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

const Json& Need(const Json& c, const char* key) {
  if (!c.is_object() || !c.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return c.at(key);
}

long Natural(const Json& c, const char* key, long fallback = -1) {
  if (!c.contains(key)) {
    if (fallback < 0) throw ConfigError(std::string("missing field '") + key + "'");
    return fallback;
  }
  const Json& v = c.at(key);
  long n = v.is_string() ? std::stol(v.get<std::string>()) : v.get<long>();
  if (n < 0) throw ConfigError(std::string("field '") + key + "' must be non-negative");
  return n;
}

RankOneMachine ParseMachine(const Json& j) {
  if (j.contains("uniform")) {
    long h = j.at("uniform").get<long>();
    if (h < 1 || h > kMaxLevels) throw ConfigError("uniform column height out of range [1, 65536]");
    return RankOneMachine::UniformColumn(h);
  }
  if (j.contains("odometer")) {
    int base = j.at("odometer").at(0).get<int>(), depth = j.at("odometer").at(1).get<int>();
    if (base < 2 || depth < 0 || std::pow(base, depth) > kMaxLevels)
      throw ConfigError("odometer size out of range (base >= 2, base^depth <= 65536)");
    return RankOneMachine::Odometer(base, depth);
  }
  throw ConfigError("machine needs 'uniform' or 'odometer'");
}

Transform ParseTransform(const Json& j) {
  std::string kind = Need(j, "kind").get<std::string>();
  if (kind == "rotation") return Transform(Rotation(QuadFrom(Need(j, "alpha"))));
  if (kind == "machine") return Transform(ParseMachine(j));
  if (kind == "interval-map") return Transform(MapFrom(Need(j, "branches")));
  throw ConfigError("unknown transform kind '" + kind + "'");
}

// {"runs": [[lo, hi, value], ...]}, zero off the listed runs.
StepFunction ParseStep(const Json& j) {
  std::vector<std::pair<IntervalSet, Quad>> pieces;
  for (const auto& r : Need(j, "runs"))
    pieces.emplace_back(IntervalSet::FromRaw({{QuadFrom(r.at(0)), QuadFrom(r.at(1))}}), QuadFrom(r.at(2)));
  return StepFunction::FromPieces(pieces);
}

FunctionSource ParseSource(const Json& j) {
  if (j.contains("polynomial")) {
    const Json& p = j.at("polynomial");
    return FunctionSource::Polynomial(RationalFrom(p.at(0)), RationalFrom(p.at(1)), RationalFrom(p.at(2)),
                                      j.value("name", std::string()));
  }
  return FunctionSource::Step(ParseStep(j), j.value("name", std::string("step")));
}

Json RecipeJson(const std::vector<RecipeStep>& recipe) {
  Json out = Json::array();
  for (const auto& s : recipe) out.push_back({{"cuts", s.cuts}, {"order", s.order}, {"spacers", s.spacers}});
  return out;
}

std::string Fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Certificates.

class Certificate {
 public:
  void exact(const std::string& name, const Surd& lhs, const std::string& rel, const Surd& rhs) {
    add(name, Exact(lhs), rel, Exact(rhs), "exact");
  }
  void decimal(const std::string& name, const Real& lhs, const std::string& rel, const Real& rhs) {
    add(name, Decimal(lhs), rel, Decimal(rhs), "decimal");
  }
  bool ok() const { return ok_; }
  const Json& list() const { return list_; }

 private:
  void add(const std::string& name, const std::string& lhs, const std::string& rel, const std::string& rhs,
           const std::string& arith) {
    bool holds = EvaluateInequality(lhs, rel, rhs, arith);
    ok_ = ok_ && holds;
    list_.push_back({{"name", name}, {"lhs", lhs}, {"rel", rel}, {"rhs", rhs}, {"arith", arith}, {"holds", holds}});
  }
  Json list_ = Json::array();
  bool ok_ = true;
};

std::string Idx(const std::string& s, unsigned long n) { return s + " " + std::to_string(n); }

// ---------------------------------------------------------------------------
// sweep

Json RunSweep(const Json& c, Certificate& cert) {
  struct Cfg {
    std::optional<Transform> t;
    StepFunction f;
    NormIndex r;
    long N = 0;
    SweepOptions opt;
  };
  Cfg cfg = Parsed("sweep config", [&] {
    Cfg s;
    s.t = ParseTransform(Need(c, "transform"));
    s.f = ParseStep(Need(c, "f"));
    s.r = NormIndex::Parse(c.value("r", std::string("inf")));
    s.N = Natural(c, "N");
    if (s.N < 1) throw ConfigError("N must be at least 1");
    if (c.contains("transfer")) s.opt.transfer = ParseStep(c.at("transfer"));
    s.opt.samples = Natural(c, "samples", 4096);
    return s;
  });

  CocycleReport rep = CocycleNormSweep(*cfg.t, cfg.f, cfg.r, cfg.N, cfg.opt);
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json j{{"n", e.n},
           {"norm", e.norm.exact ? Exact(*e.norm.exact) : Decimal(e.norm.approx)},
           {"exact", e.norm.exact.has_value()},
           {"approx", Decimal(e.norm.approx, 17)},
           {"witness", Exact(e.witness)},
           {"sampled", e.sampled}};
    if (e.norm.power) j["power"] = Exact(*e.norm.power);
    entries.push_back(std::move(j));
  }
  Json out{{"sweep", {{"r", cfg.r.str()}, {"entries", entries}}},
           {"verdict", VerdictName(rep.verdict)},
           {"slope", Fixed(rep.slope)},
           {"r_squared", Fixed(rep.r_squared)},
           {"sampling_note", rep.sampling_note}};

  if (cfg.opt.transfer) {
    const StepFunction& h = *cfg.opt.transfer;
    NormValue hn = LrNorm(h, cfg.r);
    out["transfer"] = ToJson(h);
    out["bound"] = hn.exact ? Exact(Quad(2) * *hn.exact) : Decimal(2 * hn.approx);
    for (const auto& e : rep.entries) {
      std::string name = Idx("||S_n f||_" + cfg.r.str() + " <= 2||h||, n =", e.n);
      if (e.norm.exact && hn.exact) {
        cert.exact(name, *e.norm.exact, "<=", Quad(2) * *hn.exact);
      } else if (e.norm.power && hn.power) {
        // Compare r-th powers: integral |S_n f|^r <= 2^r integral |h|^r.
        unsigned r = static_cast<unsigned>(cfg.r.r.get_num().get_ui());
        cert.exact(name + " (r-th powers)", *e.norm.power, "<=", pow(Quad(2), r) * *hn.power);
      } else {
        cert.decimal(name, e.norm.approx, "<=", 2 * hn.approx);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// step-coboundary

Json RunStepCoboundary(const Json& c, Certificate& cert) {
  struct Cfg {
    StepData d;
    long N = 0, starts = 0, stages = 0, orbit_N = 0, telescoping_N = 0, samples = 0;
  };
  Cfg cfg = Parsed("step-coboundary config", [&] {
    Cfg s;
    const Json& f = Need(c, "f");
    for (const auto& m : Need(f, "measures")) s.d.measures.push_back(SurdFrom(m));
    for (const auto& v : Need(f, "values")) s.d.values.push_back(SurdFrom(v));
    if (s.d.measures.size() != s.d.values.size() || s.d.measures.empty())
      throw ConfigError("measures and values must be non-empty and of equal length");
    s.N = Natural(c, "N", 10000);
    s.starts = Natural(c, "starts", 64);
    s.stages = Natural(c, "stages", 5);
    s.orbit_N = Natural(c, "orbit_N", 1000);
    s.telescoping_N = Natural(c, "telescoping_N", 1000);
    s.samples = Natural(c, "samples", 1000);
    return s;
  });

  Classification cls = ClassifyStepFunction(cfg.d);
  Json out{{"case", StepCaseName(cls.tag)}, {"order", cls.order}};
  Json rel = Json::array();
  for (const auto& r : cls.relation) rel.push_back(Exact(r));
  out["relation"] = rel;

  if (cls.tag == StepCase::kAllRational) {
    StepFunction f = cfg.d.layout();
    RationalCoboundary rc = BuildRationalCoboundary(f);
    Json lf = Json::array(), lg = Json::array();
    for (const auto& v : rc.level_f) lf.push_back(Exact(v));
    for (const auto& v : rc.level_g) lg.push_back(Exact(v));
    out["rational"] = {{"q", rc.q}, {"f", ToJson(f)}, {"g", ToJson(rc.g)}, {"level_f", lf}, {"level_g", lg}};
    Json stages = Json::array();
    RankOneMachine last = rc.column;
    for (long k = 0; k < cfg.stages; ++k) {
      RankOneMachine m = rc.stage(static_cast<int>(k));
      Quad res = RationalResidual(rc, m).sup_abs();
      stages.push_back({{"stage", k},
                        {"height", m.height()},
                        {"recipe", RecipeJson(m.recipe())},
                        {"undefined_measure", Exact(m.undefined_region().measure())},
                        {"residual", Exact(res)}});
      cert.exact(Idx("sup |f - (g - g o tau)| at stage", k), res, "==", 0);
      last = std::move(m);
    }
    out["stages"] = stages;

    Transform lt(last);
    ResidualReport vr = VerifyCoboundary(lt, f, rc.g, cfg.samples, cfg.telescoping_N);
    out["telescoping"] = {{"N", cfg.telescoping_N}, {"sweep_sup", Exact(vr.sweep_sup)}, {"two_h", Exact(vr.two_h)}};
    cert.exact("sup_{n <= " + std::to_string(cfg.telescoping_N) + "} ||S_n f||_inf <= 2||g||_inf", vr.sweep_sup,
               "<=", vr.two_h);

    // F = f - frac(a_1) is integer-valued exactly when the values differ by integers.
    Quad shift = f.values().empty() ? Quad(0) : cfg.d.values.front().to_quad().frac();
    StepFunction F = f - StepFunction::Constant(shift);
    bool integral = true;
    for (const auto& v : F.values()) integral = integral && v.is_rational() && v.rational().get_den() == 1;
    if (integral) {
      Real tol("1e-12");
      EigenvalueReport ev = EigenvalueWitness(F, last.map(), rc.g, cfg.samples, tol);
      out["eigenvalue"] = {{"c", Exact(ev.c)},
                           {"c_rational", ev.c_rational},
                           {"re", Decimal(ev.eigenvalue.re)},
                           {"im", Decimal(ev.eigenvalue.im)},
                           {"modulus_error", Decimal(ev.modulus_error)},
                           {"max_residual", Decimal(ev.max_residual)},
                           {"witness", Exact(ev.witness)},
                           {"passed", ev.passed}};
      cert.decimal("eigenvalue | |lambda| - 1 |", ev.modulus_error, "<", tol);
      cert.decimal("eigenvalue max |H o tau - lambda H|", ev.max_residual, "<", tol);
    }
  } else if (cls.tag == StepCase::kRationallyIndependent) {
    TorusCoboundary tc = BuildTorusCoboundary(cfg.d);
    Json alpha = Json::array();
    for (const auto& a : tc.t.alpha()) alpha.push_back(Exact(a));
    out["torus"] = {{"alpha", alpha}, {"bound", Exact(tc.bound)}, {"ergodic", tc.ergodic}, {"transfer", "<a, x>"}};
    if (tc.line_f) {
      std::vector<Quad> norms = TorusChartNorms(tc, cfg.N);
      Quad mx = 0;
      long arg = 0;
      for (size_t i = 0; i < norms.size(); ++i)
        if (mx < norms[i]) mx = norms[i], arg = static_cast<long>(i) + 1;
      out["torus"]["chart"] = {{"N", cfg.N}, {"max", Exact(mx)}, {"argmax_n", arg}};
      cert.exact("sup_{n <= " + std::to_string(cfg.N) + "} ||S_n f||_inf (chart) < 2m sum|a_j|", mx, "<", tc.bound);
    }
    OrbitSweep os = TorusOrbitSweep(tc, cfg.orbit_N, cfg.starts);
    out["torus"]["orbit"] = {{"N", cfg.orbit_N}, {"starts", os.starts}, {"max", Exact(os.max)},
                             {"argmax_n", os.argmax_n}, {"sum_conserved", os.sum_conserved}};
    cert.exact("sup_{n <= " + std::to_string(cfg.orbit_N) + "} |S_n f| on orbits < 2m sum|a_j|", os.max, "<",
               tc.bound);
  } else {
    ExtensionCoboundary ec = BuildFiniteExtensionCoboundary(cfg.d, cfg.N, cfg.starts);
    Json ext{{"beta_m", Exact(ec.beta_m)}, {"measure_d", Exact(ec.measure_d)}, {"mean_corrected", ec.mean_corrected}};
    Json alpha = Json::array();
    for (const auto& a : ec.alpha) alpha.push_back(Exact(a));
    ext["alpha"] = alpha;
    ext["alpha_last"] = Exact(ec.alpha_last);
    if (ec.evidence) {
      const auto& ev = *ec.evidence;
      ext["evidence"] = {{"N", ev.N},
                         {"starts", ev.starts},
                         {"max", Exact(ev.max)},
                         {"first_half_max", Exact(ev.first_half_max)},
                         {"second_half_max", Exact(ev.second_half_max)},
                         {"bounded_evidence", ev.bounded_evidence},
                         {"status", ev.status}};
    }
    if (ec.reduced) ext["reduced_bound"] = Exact(ec.reduced->bound);
    out["extension"] = ext;
  }
  return out;
}

// ---------------------------------------------------------------------------
// weak-mixing

Json RunWeakMixing(const Json& c, Certificate& cert) {
  struct Cfg {
    std::optional<FunctionSource> src;
    std::vector<Rational> eps;
    std::vector<unsigned long> N;
    long stages = 0, walk_samples = 0, seed = 0;
  };
  Cfg cfg = Parsed("weak-mixing config", [&] {
    Cfg s;
    s.src = ParseSource(Need(c, "source"));
    for (const auto& e : Need(c, "eps")) s.eps.push_back(RationalFrom(e));
    for (const auto& n : Need(c, "N")) s.N.push_back(n.get<unsigned long>());
    s.stages = Natural(c, "stages", static_cast<long>(s.eps.size()));
    s.walk_samples = Natural(c, "walk_samples", 12);
    s.seed = Natural(c, "seed", 1);
    return s;
  });

  ScheduleParams sch = ScheduleParams::Make(cfg.eps, cfg.N);
  WeakMixingResult r = weak_mixing_coboundary(*cfg.src, sch, cfg.stages);
  Json log = Json::array();
  for (const auto& line : r.log_lines()) log.push_back(Json::parse(line));
  Quad walk = r.walk_check(cfg.walk_samples, cfg.seed);
  Json out{{"stage_log", log},
           {"schedule", {{"ratio", Exact(sch.ratio)}, {"partial_sum", Exact(sch.partial_sum)},
                         {"tail_bound", Exact(sch.tail_bound)}}},
           {"machine", {{"tau", ToJson(r.tau)}, {"covered", ToJson(r.covered)}, {"tops", ToJson(r.tops)},
                        {"to_base", ToJson(r.to_base)}}},
           {"f", ToJson(r.f)},
           {"g", ToJson(r.g)},
           {"residual", {{"defined", Exact(r.residual_defined)}, {"closed", Exact(r.residual_closed)},
                         {"walk_check", Exact(walk)}, {"walk_samples", cfg.walk_samples}, {"seed", cfg.seed}}}};

  for (size_t i = 0; i < r.log.size(); ++i) {
    const StageRecord& s = r.log[i];
    if (s.cauchy) cert.exact(Idx("sup |g_s - g_{s-1}| < 3(eps_s + eps_{s-1}), s =", s.stage), *s.cauchy, "<",
                             *s.cauchy_bound);
    if (i > 0)
      cert.exact(Idx("undefined measure decreases, stage", s.stage), s.undefined_measure, "<",
                 r.log[i - 1].undefined_measure);
  }
  cert.exact("sup |f - (g - g o tau)| on the domain of tau", r.residual_defined, "==", 0);
  cert.exact("walk check", walk, "==", 0);
  return out;
}

// ---------------------------------------------------------------------------
// non-coboundary

Schedule ParseSchedule(const Json& j) {
  if (j.contains("geometric")) {
    Rational scale = RationalFrom(Need(j.at("geometric"), "scale"));
    Rational ratio = RationalFrom(Need(j.at("geometric"), "ratio"));
    return [scale, ratio](unsigned long n) -> Rational {
      Rational v = scale;
      for (unsigned long k = 0; k < n; ++k) v *= ratio;
      return v;
    };
  }
  if (j.contains("list")) {
    std::vector<Rational> vals;
    for (const auto& v : j.at("list")) vals.push_back(RationalFrom(v));
    if (vals.empty()) throw ConfigError("empty schedule list");
    // eps_n for n = 1..k, then the last value.
    return [vals](unsigned long n) -> Rational { return vals[std::min<size_t>(std::max<size_t>(n, 1), vals.size()) - 1]; };
  }
  throw ConfigError("schedule needs 'geometric' or 'list'");
}

Rate ParseRate(const std::string& name) {
  if (name == "sqrt") return Rate::Sqrt();
  if (name == "n/log n") return Rate::NOverLog();
  if (name == "zero") return Rate::Zero();
  throw ConfigError("unknown rate '" + name + "' (sqrt, n/log n, zero)");
}

Json AlmostJson(const AlmostInvariantSet& a) {
  return {{"A", ToJson(a.A)},       {"delta", Exact(a.delta)},         {"epsilon", Exact(a.epsilon)},
          {"n", a.n},               {"block_height", a.block_height}, {"full_blocks", a.full_blocks},
          {"strip", a.strip},       {"end_level", a.end_level},       {"intersection", Exact(a.intersection)},
          {"bound", Exact(a.bound)}, {"ok", a.ok}};
}

void CertifyAlmost(Certificate& cert, const std::string& tag, const AlmostInvariantSet& a) {
  cert.exact(tag + " p(A) = delta", a.A.measure(), "==", a.delta);
  cert.exact(tag + " p(A and its first n preimages) >= (1 - eps) delta", a.intersection, ">=", a.bound);
}

Json EscapeJson(const SlowEscapeSet& e, Certificate& cert) {
  Json blocks = Json::array(), checks = Json::array(), delta = Json::array();
  for (size_t i = 0; i < e.blocks.size(); ++i) {
    blocks.push_back(AlmostJson(e.blocks[i]));
    CertifyAlmost(cert, "A_" + std::to_string(i + 1), e.blocks[i]);
  }
  for (const auto& d : e.delta) delta.push_back(Exact(d));
  for (const auto& ch : e.checks) {
    checks.push_back({{"n", ch.n}, {"escape", Exact(ch.escape)}, {"eps", Exact(ch.eps)}});
    cert.exact(Idx("escape >= eps_n, n =", ch.n), ch.escape, ">=", ch.eps);
  }
  return {{"E", ToJson(e.E)}, {"pE", Exact(e.E.measure())}, {"gamma", Exact(e.gamma)}, {"N", e.N},
          {"delta", delta},   {"blocks", blocks},               {"checks", checks}};
}

Json RunNonCoboundary(const Json& c, Certificate& cert) {
  std::string mode = Parsed("non-coboundary config", [&] { return Need(c, "mode").get<std::string>(); });
  RankOneMachine m = Parsed("non-coboundary config", [&] { return ParseMachine(Need(c, "machine")); });
  Json out{{"mode", mode}};

  if (mode == "almost-invariant") {
    struct Cfg {
      Rational delta, eps;
      unsigned long n = 0;
      AlmostInvariantOptions opts;
    };
    Cfg cfg = Parsed("almost-invariant config", [&] {
      Cfg s;
      s.delta = RationalFrom(Need(c, "delta"));
      s.eps = RationalFrom(Need(c, "eps"));
      s.n = Natural(c, "n");
      s.opts.first_level = Natural(c, "first_level", 0);
      std::string layout = c.value("layout", std::string("contiguous"));
      if (layout == "alternating") s.opts.layout = BlockLayout::kAlternating;
      else if (layout != "contiguous") throw ConfigError("layout must be contiguous or alternating");
      return s;
    });
    AlmostInvariantSet a = almost_invariant_set(m, cfg.delta, cfg.n, cfg.eps, cfg.opts);
    out["almost_invariant"] = AlmostJson(a);
    CertifyAlmost(cert, "A", a);
  } else if (mode == "slow-escape") {
    struct Cfg {
      Schedule eps;
      SlowEscapeOptions opts;
    };
    Cfg cfg = Parsed("slow-escape config", [&] {
      Cfg s;
      s.eps = ParseSchedule(Need(c, "schedule"));
      s.opts.n_verify = Natural(c, "n_verify", 64);
      if (c.contains("delta1")) s.opts.delta1 = RationalFrom(c.at("delta1"));
      return s;
    });
    out["escape"] = EscapeJson(slow_escape_set(m, cfg.eps, cfg.opts), cert);
  } else if (mode == "slow-growth") {
    struct Cfg {
      std::optional<Rate> rate;
      unsigned long lo = 0, hi = 0;
      Rational cap{1, 5};
    };
    Cfg cfg = Parsed("slow-growth config", [&] {
      Cfg s;
      s.rate = ParseRate(c.value("rate", std::string("sqrt")));
      s.lo = Natural(c, "n_lo");
      s.hi = Natural(c, "n_hi");
      if (s.lo < 1 || s.hi < s.lo) throw ConfigError("need 1 <= n_lo <= n_hi");
      if (c.contains("cap")) s.cap = RationalFrom(c.at("cap"));
      return s;
    });
    SlowGrowth g = slow_growth_function(m, *cfg.rate, cfg.lo, cfg.hi, cfg.cap);
    Json checks = Json::array();
    for (const auto& ch : g.checks) {
      checks.push_back({{"n", ch.n}, {"lower", Exact(ch.lower)}, {"rho_upper", Exact(ch.rho_upper)},
                        {"sup_lower", Exact(ch.sup_lower)}, {"sup_ok", ch.sup_ok}});
      cert.exact(Idx("||S_n f||_1 lower bound >= rho_n, n =", ch.n), ch.lower, ">=", ch.rho_upper);
    }
    out["growth"] = {{"rate", cfg.rate->name}, {"f", ToJson(g.f)}, {"F", ToJson(g.F)}, {"degenerate", g.degenerate},
                     {"checks", checks}};
    if (!g.degenerate) out["growth"]["escape"] = EscapeJson(g.escape, cert);
  } else if (mode == "series") {
    struct Cfg {
      Rational ratio;
      SeriesOptions opts;
    };
    Cfg cfg = Parsed("series config", [&] {
      Cfg s;
      s.ratio = RationalFrom(Need(c, "ratio"));
      s.opts.stages = Natural(c, "stages", 3);
      s.opts.n1 = Natural(c, "n1", 4);
      s.opts.growth = Natural(c, "growth", 4);
      s.opts.retries = Natural(c, "retries", 3);
      return s;
    });
    SeriesResult sr = series_noncoboundary(m, cfg.ratio, cfg.opts);
    Json stages = Json::array();
    for (const auto& s : sr.stages) {
      stages.push_back({{"m", s.m},
                        {"eps", Exact(s.eps)},
                        {"n", s.n},
                        {"main", Exact(s.main)},
                        {"main_bound", Exact(s.main_bound)},
                        {"cross", Exact(s.cross)},
                        {"cross_bound", Exact(s.cross_bound)},
                        {"tail", Exact(s.tail)},
                        {"tail_bound", Exact(s.tail_bound)},
                        {"triangle", Exact(s.triangle)},
                        {"total", Exact(s.total)},
                        {"total_bound", Exact(s.total_bound)},
                        {"growth_ok", s.growth_ok}});
      std::string tag = "stage " + std::to_string(s.m) + ": ";
      cert.exact(tag + "main >= eps n / 8", s.main, ">=", s.main_bound);
      cert.exact(tag + "cross <= eps n / 32", s.cross, "<=", s.cross_bound);
      cert.exact(tag + "tail <= sum of later eps_k n / 2", s.tail, "<=", s.tail_bound);
      cert.exact(tag + "main - cross - tail >= eps n / 16", s.triangle, ">=", s.total_bound);
      cert.exact(tag + "||S_n f||_1 >= eps n / 16", s.total, ">=", s.total_bound);
    }
    out["series"] = {{"ratio", Exact(sr.ratio)}, {"f", ToJson(sr.f)}, {"stages", stages}};
  } else if (mode == "l1-transfer") {
    unsigned long N = Parsed("l1-transfer config", [&] { return static_cast<unsigned long>(Natural(c, "N_max")); });
    L1Transfer t = l1_nonintegrable_transfer(m, N);
    const auto& rep = t.report;
    Json terms = Json::array(), norms = Json::array(), dom = Json::array();
    for (const auto& term : rep.terms)
      terms.push_back({{"n", term.n}, {"D", ToJson(term.D)}, {"pD", Exact(term.D.measure())},
                       {"weight", Exact(term.weight)}, {"norm", Exact(term.norm)}, {"identity_ok", term.identity_ok}});
    for (size_t i = 0; i < rep.H_norms.size(); ++i) {
      norms.push_back(Exact(rep.H_norms[i]));
      dom.push_back(Exact(rep.dominating[i]));
      cert.exact(Idx("||H_N||_1 = (1/2) sum n^{-1/2}, N =", i + 1), rep.H_norms[i], "==", rep.expected[i]);
      if (i > 0) cert.exact(Idx("||H_N||_1 > ||H_{N-1}||_1, N =", i + 1), rep.H_norms[i], ">", rep.H_norms[i - 1]);
    }
    cert.exact("||H_N - H_N o t^{-1}||_1 <= sum 2 n^{3/2} p(D_n)", rep.coboundary_norm, "<=", rep.dominating.back());
    out["l1"] = {{"N_max", N},
                 {"terms", terms},
                 {"H_norms", norms},
                 {"dominating", dom},
                 {"tail_bound", Exact(rep.tail_bound)},
                 {"dominating_limit_upper", Exact(rep.dominating.back() + rep.tail_bound)},
                 {"coboundary_norm", Exact(rep.coboundary_norm)},
                 {"H", ToJson(t.H)},
                 {"f", ToJson(t.f)},
                 {"identity_ok", rep.identity_ok}};
    cert.exact("partial coboundary identities hold", rep.identity_ok ? 1 : 0, "==", 1);
  } else {
    throw ConfigError("unknown non-coboundary mode '" + mode +
                      "' (almost-invariant, slow-escape, slow-growth, series, l1-transfer)");
  }
  return out;
}

// ---------------------------------------------------------------------------
// diophantine

Json RunDiophantine(const Json& c, Certificate& cert) {
  struct Cfg {
    Quad alpha;
    std::optional<Profile> rho;
    long k_first = 0, k_last = 0;
    std::optional<FourierProfile> fourier;
    long band = 0, samples = 0;
    Real tol;
  };
  Cfg cfg = Parsed("diophantine config", [&] {
    Cfg s;
    s.alpha = QuadFrom(Need(c, "alpha"));
    if (s.alpha.is_rational()) throw ConfigError("alpha must be irrational");
    s.rho = Profile::Named(c.value("profile", std::string("log(n)/n")));
    s.k_first = Natural(c, "k_first", 3);
    s.k_last = Natural(c, "k_last", 10);
    if (s.k_last < s.k_first) throw ConfigError("k_last must be at least k_first");
    if (c.contains("fourier")) {
      const Json& fj = c.at("fourier");
      FourierProfile p;
      for (const auto& e : Need(fj, "coefficients"))
        p.coeff[e.at(0).get<long>()] = {Real(e.at(1).get<std::string>()), Real(e.at(2).get<std::string>())};
      s.band = Natural(fj, "band", p.degree());
      s.samples = Natural(fj, "samples", 1000);
      s.tol = Real(fj.value("tolerance", std::string("1e-12")));
      s.fourier = p;
    }
    return s;
  });

  ContinuedFraction cf = ContinuedFractionExpand(cfg.alpha.frac(), cfg.k_last + 2);
  if (cf.convergents.size() <= static_cast<size_t>(cfg.k_last)) throw ConfigError("continued fraction too short");
  Integer depth = cf.convergents[cfg.k_last].second;
  ObstructionReport rep = DiophantineObstruction(*cfg.rho, cfg.alpha, depth, cfg.k_first);

  Json quotients = Json::array(), conv = Json::array(), entries = Json::array();
  for (const auto& a : cf.quotients) quotients.push_back(a.get_str());
  for (const auto& [p, q] : cf.convergents) conv.push_back({p.get_str(), q.get_str()});
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    entries.push_back({{"q", e.q.get_str()}, {"q_next", e.q_next.get_str()}, {"bound", Decimal(e.bound)}});
    if (i > 0) cert.decimal("obstruction bound increases at q = " + e.q.get_str(), e.bound, ">",
                            rep.entries[i - 1].bound);
  }
  Json out{{"continued_fraction", {{"quotients", quotients}, {"convergents", conv}}},
           {"obstruction", {{"profile", cfg.rho->name}, {"depth", depth.get_str()}, {"entries", entries},
                            {"strictly_increasing", rep.strictly_increasing}, {"flag", rep.flag}}}};

  if (cfg.fourier) {
    FourierTransfer ft = RotationTransferFourier(*cfg.fourier, cfg.alpha, cfg.band);
    Real witness;
    Real res = FourierResidual(*cfg.fourier, ft.h, cfg.alpha, cfg.samples, &witness);
    Json h = Json::array();
    for (const auto& [k, v] : ft.h.coeff) h.push_back({k, Decimal(v.re), Decimal(v.im)});
    out["fourier"] = {{"h", h},
                      {"band", cfg.band},
                      {"samples", cfg.samples},
                      {"residual", Decimal(res)},
                      {"witness", Decimal(witness)},
                      {"tail_bound", ft.tail_bound ? Decimal(*ft.tail_bound) : "not estimable"}};
    cert.decimal("max |f - (h - h o tau)| over the samples", res, "<", cfg.tol);
  }
  return out;
}

// ---------------------------------------------------------------------------
// joint-approx

StepFunction LevelSigns(const RankOneMachine& m, const Json& K) {
  std::vector<std::pair<IntervalSet, Quad>> pieces;
  for (const auto& [key, value] : {std::pair<const char*, long>{"minus", -1}, {"plus", 1}}) {
    if (!K.contains(key)) continue;
    long lo = K.at(key).at(0).get<long>(), hi = K.at(key).at(1).get<long>();
    if (lo < 0 || hi < lo || hi > static_cast<long>(m.height()))
      throw ConfigError(std::string("K level range '") + key + "' out of range");
    std::vector<IntervalSet> levels(m.levels().begin() + lo, m.levels().begin() + hi);
    if (!levels.empty()) pieces.emplace_back(UnionAll(levels), Quad(value));
  }
  return StepFunction::FromPieces(pieces);
}

struct JointErrors {
  Quad sigma_error;
  Quad tau_error;
};

JointErrors RecomputeJoint(const IntervalMap& sigma, const IntervalMap& tau, const StepFunction& H,
                           const StepFunction& K) {
  return {(H - sigma.pullback(H)).abs().integral_over(sigma.domain()),
          (H - tau.pullback(H) - K).abs().integral_over(tau.domain())};
}

Json RunJointApprox(const Json& c, Certificate& cert) {
  struct Cfg {
    RankOneMachine m;
    StepFunction K;
    unsigned long M = 0, N = 0;
  };
  Cfg cfg = Parsed("joint-approx config", [&] {
    Cfg s;
    s.m = ParseMachine(Need(c, "machine"));
    s.M = Natural(c, "M");
    s.N = Natural(c, "N");
    s.K = LevelSigns(s.m, Need(c, "K"));
    return s;
  });
  JointApproximation ja = joint_approximation_construct(cfg.m, cfg.K, cfg.M, cfg.N);
  const auto& r = ja.report;
  JointErrors again = RecomputeJoint(cfg.m.map(), ja.tau, ja.H, cfg.K);
  cert.exact("||H - H o sigma||_1 <= 2M/N", r.sigma_error, "<=", r.sigma_bound);
  cert.exact("||H - H o tau - K||_1 <= 1/M", r.tau_error, "<=", r.tau_bound);
  cert.exact("end-strip mass <= 1/M", r.end_strip_mass, "<=", r.tau_bound);
  cert.exact("measure defect", r.measure_defect, "==", 0);
  cert.exact("sigma error recomputed", again.sigma_error, "==", r.sigma_error);
  cert.exact("tau error recomputed", again.tau_error, "==", r.tau_error);
  return {{"joint",
           {{"M", r.M},
            {"N", r.N},
            {"sigma", ToJson(cfg.m.map())},
            {"K", ToJson(cfg.K)},
            {"tau", ToJson(ja.tau)},
            {"H", ToJson(ja.H)},
            {"sigma_error", Exact(r.sigma_error)},
            {"sigma_bound", Exact(r.sigma_bound)},
            {"tau_error", Exact(r.tau_error)},
            {"tau_bound", Exact(r.tau_bound)},
            {"end_strip_mass", Exact(r.end_strip_mass)},
            {"measure_defect", Exact(r.measure_defect)}}}};
}

bool Compare(int sign, const std::string& rel) {
  if (rel == "<") return sign < 0;
  if (rel == "<=") return sign <= 0;
  if (rel == "==") return sign == 0;
  if (rel == ">=") return sign >= 0;
  if (rel == ">") return sign > 0;
  throw std::invalid_argument("unknown relation '" + rel + "'");
}

void WriteFile(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

const std::vector<std::string>& PipelineNames() {
  static const std::vector<std::string> names{"sweep",          "step-coboundary", "weak-mixing",
                                              "non-coboundary", "diophantine",     "joint-approx"};
  return names;
}

bool EvaluateInequality(const std::string& lhs, const std::string& rel, const std::string& rhs,
                        const std::string& arith) {
  if (arith == "exact") return Compare((Surd::Parse(lhs) - Surd::Parse(rhs)).sign(), rel);
  if (arith == "decimal") {
    InitPrecision();
    Real a(lhs), b(rhs);
    return Compare(a < b ? -1 : (a > b ? 1 : 0), rel);
  }
  throw std::invalid_argument("unknown arithmetic '" + arith + "'");
}

Json RunExperiment(const Json& config) {
  if (!config.is_object() || config.empty()) throw ConfigError("empty config: expected a JSON object with 'pipeline'");
  std::string name = Parsed("config", [&] { return Need(config, "pipeline").get<std::string>(); });
  InitPrecision();
  Certificate cert;
  Json body;
  if (name == "sweep") body = RunSweep(config, cert);
  else if (name == "step-coboundary") body = RunStepCoboundary(config, cert);
  else if (name == "weak-mixing") body = RunWeakMixing(config, cert);
  else if (name == "non-coboundary") body = RunNonCoboundary(config, cert);
  else if (name == "diophantine") body = RunDiophantine(config, cert);
  else if (name == "joint-approx") body = RunJointApprox(config, cert);
  else throw ConfigError("unknown pipeline '" + name + "'");

  body["pipeline"] = name;
  body["config"] = config;
  body["precision_digits"] = PrecisionDigits();
  body["inequalities"] = cert.list();
  body["ok"] = cert.ok();
  return body;
}

VerifyResult VerifyReport(const Json& report) {
  VerifyResult out;
  auto fail = [&](const std::string& what) { out.failures.push_back(what); };
  if (!report.is_object() || !report.contains("inequalities") || !report.contains("pipeline")) {
    fail("not a run report");
    return out;
  }
  bool all = true;
  for (const auto& q : report.at("inequalities")) {
    std::string name = q.value("name", std::string("?"));
    try {
      bool holds = EvaluateInequality(q.at("lhs").get<std::string>(), q.at("rel").get<std::string>(),
                                      q.at("rhs").get<std::string>(), q.at("arith").get<std::string>());
      ++out.checked;
      all = all && holds;
      if (!holds) fail(name + ": does not hold");
      if (holds != q.at("holds").get<bool>()) fail(name + ": recorded verdict disagrees");
    } catch (const std::exception& e) {
      fail(name + ": " + e.what());
    }
  }
  if (report.value("ok", false) != all) fail("recorded ok flag disagrees with the inequalities");

  try {
    if (report.contains("joint")) {
      const Json& j = report.at("joint");
      IntervalMap sigma = MapFrom(j.at("sigma")), tau = MapFrom(j.at("tau"));
      StepFunction H = StepFrom(j.at("H")), K = StepFrom(j.at("K"));
      JointErrors e = RecomputeJoint(sigma, tau, H, K);
      ++out.checked;
      if (e.sigma_error != QuadFrom(j.at("sigma_error"))) fail("sigma error does not match the serialized maps");
      if (e.tau_error != QuadFrom(j.at("tau_error"))) fail("tau error does not match the serialized maps");
      unsigned long M = j.at("M").get<unsigned long>(), N = j.at("N").get<unsigned long>();
      if (!(e.sigma_error <= Quad(Frac(2 * static_cast<long>(M), static_cast<long>(N)))))
        fail("recomputed sigma error exceeds 2M/N");
      if (!(e.tau_error <= Quad(Frac(1, static_cast<long>(M))))) fail("recomputed tau error exceeds 1/M");
      // tau preserves measure: the image of its domain has the same measure.
      if (tau.image().measure() != tau.domain().measure()) fail("tau does not preserve measure");
    }
    if (report.contains("l1")) {
      const Json& l = report.at("l1");
      ++out.checked;
      if (SurdL1(RunsFrom(l.at("H"))) != SurdFrom(l.at("H_norms").back())) fail("||H_N||_1 does not match the runs");
      if (SurdL1(RunsFrom(l.at("f"))) != SurdFrom(l.at("coboundary_norm")))
        fail("||H_N - H_N o t^{-1}||_1 does not match the runs");
    }
    if (report.contains("growth") && report.at("growth").contains("escape")) {
      const Json& g = report.at("growth");
      Quad pE = SetFrom(g.at("escape").at("E")).measure();
      ++out.checked;
      if (pE != QuadFrom(g.at("escape").at("pE"))) fail("p(E) does not match the serialized set");
      for (const auto& ch : g.at("checks")) {
        if (!ch.at("sup_ok").get<bool>()) fail("sup bound not witnessed at n = " + ch.at("n").dump());
        if (QuadFrom(ch.at("sup_lower")) != Quad(ch.at("n").get<long>()) * pE)
          fail("sup lower bound is not n p(E) at n = " + ch.at("n").dump());
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("recomputation failed: ") + e.what());
  }
  return out;
}

std::vector<Format> ParseFormats(const std::string& text) {
  std::vector<Format> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "json") out.push_back(Format::kJson);
    else if (item == "csv") out.push_back(Format::kCsv);
    else if (item == "svg") out.push_back(Format::kSvg);
    else throw ConfigError("unknown format '" + item + "' (json, csv, svg)");
  }
  if (out.empty()) throw ConfigError("no output format requested");
  return out;
}

bool HasSweep(const Json& report) { return report.contains("sweep"); }

std::string SweepCsv(const Json& report) {
  std::string out = "n,norm,witness\n";
  for (const auto& e : report.at("sweep").at("entries"))
    out += std::to_string(e.at("n").get<long>()) + "," + e.at("norm").get<std::string>() + "," +
           e.at("witness").get<std::string>() + "\n";
  return out;
}

std::string SweepSvg(const Json& report) {
  const double W = 640, H = 420, L = 80, R = 20, T = 30, B = 60;
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : report.at("sweep").at("entries")) {
    double v = std::stod(e.at("approx").get<std::string>());
    if (v > 0) pts.emplace_back(std::log10(e.at("n").get<double>()), std::log10(v));
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = pts[0].first;
    y0 = y1 = pts[0].second;
    for (auto [x, y] : pts) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
    y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::string r = report.at("sweep").at("r").get<std::string>();

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(x0); k <= static_cast<int>(x1); ++k)
    os << "<text x=\"" << Fixed(px(k), 2) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e" << k << "</text>\n";
  for (int k = static_cast<int>(y0); k <= static_cast<int>(y1); ++k)
    os << "<text x=\"" << L - 8 << "\" y=\"" << Fixed(py(k) + 4, 2) << "\" text-anchor=\"end\">1e" << k << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">n (log scale)</text>\n";
  os << "<text x=\"20\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << (T + H - B) / 2 << ")\">||S_n f||_" << r << " (log scale)</text>\n";
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < pts.size(); ++i)
    os << (i ? " " : "") << Fixed(px(pts[i].first), 2) << "," << Fixed(py(pts[i].second), 2);
  os << "\"/>\n</svg>\n";
  return os.str();
}

std::vector<std::string> EmitOutputs(const Json& report, const std::filesystem::path& dir,
                                     const std::vector<Format>& formats) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    WriteFile(dir / name, text);
    written.push_back(name);
  };
  for (Format f : formats) {
    if (f == Format::kJson) {
      emit("report.json", CanonicalDump(report));
      if (report.contains("stage_log")) {
        std::string lines;
        for (const auto& s : report.at("stage_log")) lines += s.dump() + "\n";
        emit("stages.jsonl", lines);
      }
    } else if (f == Format::kCsv && HasSweep(report)) {
      emit("sweep.csv", SweepCsv(report));
    } else if (f == Format::kSvg && HasSweep(report)) {
      emit("sweep.svg", SweepSvg(report));
    }
  }
  return written;
}

}  // namespace cobound
