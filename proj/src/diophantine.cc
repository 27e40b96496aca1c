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

#include "cobound/diophantine.h"

#include <cmath>
#include <map>

namespace cobound {

ContinuedFraction ContinuedFractionExpand(const Quad& alpha, size_t depth) {
  if (!(alpha.sign() > 0 && alpha < 1)) throw std::invalid_argument("expansion needs 0 < alpha < 1");
  ContinuedFraction cf;
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  std::map<std::pair<std::string, std::string>, size_t> seen;
  Quad x = alpha;
  for (size_t k = 0; k < depth; ++k) {
    if (!cf.period_start && !x.is_rational()) {
      auto key = std::make_pair(x.str(), std::to_string(x.d()));
      auto it = seen.find(key);
      if (it != seen.end()) {
        cf.period_start = it->second;
        cf.period_length = k - it->second;
      } else {
        seen.emplace(key, k);
      }
    }
    Integer a = x.floor();
    cf.quotients.push_back(a);
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    cf.convergents.push_back({p1, q1});
    Quad rest = x - Quad(Rational(a));
    if (rest.is_zero()) {
      cf.truncated = cf.quotients.size() < depth;
      break;
    }
    x = Quad(1) / rest;
  }
  return cf;
}

Integer NearestInteger(const Quad& x) { return (x + Quad(Frac(1, 2))).floor(); }

Quad DistanceToInteger(const Quad& x) { return (x - Quad(Rational(NearestInteger(x)))).abs(); }

namespace {

// |err|^d q < 1, screened in floating point and decided exactly near the boundary.
bool BelowBound(const Quad& err, unsigned d, const Quad& q) {
  if (err.is_zero()) return true;
  double lg = d * std::log(err.to_double()) + std::log(q.to_double());
  if (lg < -1e-6) return true;
  if (lg > 1e-6) return false;
  return pow(err, d) * q < Quad(1);
}

}  // namespace

bool ApproximationHolds(const std::vector<Quad>& x, unsigned d, const Approximation& a) {
  if (a.p.size() != x.size()) return false;
  Quad q{Rational(a.q)};
  for (size_t i = 0; i < x.size(); ++i) {
    Quad err = (q * x[i] - Quad(Rational(a.p[i]))).abs();
    if (!BelowBound(err, d, q)) return false;
  }
  return true;
}

Approximation SimultaneousApproximation(const std::vector<Quad>& x, unsigned d, const Integer& q_max,
                                        const Integer& q_min) {
  if (d < 1) throw std::invalid_argument("exponent d must be >= 1");
  for (const auto& v : x) {
    if (!(v.sign() > 0 && v < 1)) throw std::invalid_argument("approximation targets must lie in (0,1)");
  }
  for (Integer q = q_min < 1 ? Integer(1) : q_min; q <= q_max; ++q) {
    Approximation a;
    a.q = q;
    bool ok = true;
    Quad qq{Rational(q)};
    for (const auto& v : x) {
      Quad t = qq * v;
      Integer p = NearestInteger(t);
      Quad err = (t - Quad(Rational(p))).abs();
      if (!BelowBound(err, d, qq)) {
        ok = false;
        break;
      }
      a.p.push_back(p);
    }
    if (ok) return a;
  }
  // Dirichlet: some q <= N^k works with errors < 1/N, which meets the bound once N^d >= q.
  Integer retry = q_max * 4;
  throw ApproximationNotFound("no simultaneous approximation with q <= " + q_max.get_str(), retry);
}

Profile Profile::LogOverN() {
  return {"log(n)/n", [](const Integer& n) -> Real {
            InitPrecision();
            Real v = ToReal(Rational(n));
            return boost::multiprecision::log(v) / v;
          }};
}

Profile Profile::Inverse() {
  return {"1/n", [](const Integer& n) -> Real {
            InitPrecision();
            return Real(1) / ToReal(Rational(n));
          }};
}

Profile Profile::Geometric() {
  return {"2^-n", [](const Integer& n) -> Real {
            InitPrecision();
            return boost::multiprecision::pow(Real(2), -ToReal(Rational(n)));
          }};
}

Profile Profile::Named(const std::string& name) {
  if (name == "log(n)/n" || name == "log") return LogOverN();
  if (name == "1/n" || name == "inverse") return Inverse();
  if (name == "2^-n" || name == "geometric") return Geometric();
  throw std::invalid_argument("unknown profile '" + name + "'");
}

ObstructionReport DiophantineObstruction(const Profile& rho, const Quad& alpha, const Integer& depth,
                                         size_t k_first) {
  if (alpha.is_rational()) throw std::invalid_argument("obstruction needs irrational alpha");
  InitPrecision();
  ContinuedFraction cf = ContinuedFractionExpand(alpha.frac(), 200);
  ObstructionReport rep;
  // |1 - e^{2 pi i t}| <= 2 pi ||t|| and pi < 355/113.
  const Rational pi_hi(355, 113);
  const Real shave = 1 - boost::multiprecision::pow(Real(10), -Real(PrecisionDigits() - 10));
  for (size_t k = k_first; k + 1 < cf.convergents.size(); ++k) {
    const Integer& q = cf.convergents[k].second;
    if (q > depth) break;
    Quad dist = DistanceToInteger(Quad(Rational(q)) * alpha);
    Rational dist_hi = Bracket(dist, PrecisionDigits()).second;
    Real denom = ToReal(Rational(2 * pi_hi * dist_hi));
    rep.entries.push_back({q, cf.convergents[k + 1].second, rho.rho(q) * shave / denom});
  }
  if (rep.entries.size() < 3) throw std::invalid_argument("fewer than 3 convergents below the depth");
  rep.strictly_increasing = true;
  for (size_t i = 1; i < rep.entries.size(); ++i) {
    if (!(rep.entries[i - 1].bound < rep.entries[i].bound)) rep.strictly_increasing = false;
  }
  const Real& first = rep.entries.front().bound;
  const Real& last = rep.entries.back().bound;
  size_t n = rep.entries.size();
  bool tail_decreasing = rep.entries[n - 1].bound < rep.entries[n - 2].bound &&
                         rep.entries[n - 2].bound < rep.entries[n - 3].bound;
  if (rep.strictly_increasing && last >= 2 * first) {
    rep.flag = "obstruction";
  } else if (tail_decreasing && 2 * last <= first) {
    rep.flag = "no obstruction";
  } else {
    rep.flag = "inconclusive";
  }
  return rep;
}

}  // namespace cobound
