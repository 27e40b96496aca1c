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

#ifndef COBOUND_NON_COBOUNDARY_H_
#define COBOUND_NON_COBOUNDARY_H_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobound/rank_one.h"
#include "cobound/step_function.h"
#include "cobound/surd.h"

namespace cobound {

// Points whose orbit stays in s for steps 0..n (only points where t^n is defined).
IntervalSet StaysIn(const IntervalMap& t, const IntervalSet& s, unsigned long n);
// ||S_n f||_1 over the region where t^{n-1} is defined, by doubling.
Quad CocycleL1(const IntervalMap& t, const StepFunction& f, unsigned long n);

// ---------------------------------------------------------------------------

enum class BlockLayout { kContiguous, kAlternating };

struct AlmostInvariantOptions {
  size_t first_level = 0;
  BlockLayout layout = BlockLayout::kContiguous;
};

struct AlmostInvariantSet {
  IntervalSet A;
  Rational delta;
  Rational epsilon;
  unsigned long n = 0;
  size_t block_height = 0;
  size_t full_blocks = 0;
  bool strip = false;       // one extra block carries a thin strip
  size_t end_level = 0;     // first level after the blocks
  Quad intersection;        // p(A and its first n preimages)
  Quad bound;               // (1 - eps) delta
  bool ok = false;
};

// Blocks of ceil(n/eps) consecutive levels, plus a strip block for the remainder.
AlmostInvariantSet almost_invariant_set(const RankOneMachine& m, const Rational& delta, unsigned long n,
                                        const Rational& eps, const AlmostInvariantOptions& opts = {});

// ---------------------------------------------------------------------------

using Schedule = std::function<Rational(unsigned long)>;

struct SlowEscapeOptions {
  unsigned long n_verify = 64;
  std::optional<Rational> delta1;  // default 2 eps_1
};

struct EscapeCheck {
  unsigned long n = 0;
  Quad escape;   // 1 - p(union of the first n preimages of E, plus where t^n is undefined)
  Rational eps;
  bool ok = false;
};

struct SlowEscapeSet {
  IntervalSet E;
  Rational gamma;
  std::vector<unsigned long> N;  // N_1 = 1 < N_2 < ...
  std::vector<Rational> delta;
  std::vector<AlmostInvariantSet> blocks;
  std::vector<EscapeCheck> checks;
  bool ok = false;
};

SlowEscapeSet slow_escape_set(const RankOneMachine& m, const Schedule& eps, const SlowEscapeOptions& opts = {});

// ---------------------------------------------------------------------------

// A growth rate with exact rational upper bounds.
struct Rate {
  std::string name;
  std::function<Rational(unsigned long)> upper;
  std::function<double(unsigned long)> value;
  static Rate Sqrt();
  static Rate NOverLog();
  static Rate Zero();
};

struct GrowthCheck {
  unsigned long n = 0;
  Quad lower;          // exact lower bound on ||S_n f||_1
  Rational rho_upper;
  bool ok = false;
  Quad sup_lower;      // n p(E) when the orbit set in F is nonempty
  bool sup_ok = false;
};

struct SlowGrowth {
  StepFunction f;
  IntervalSet F;
  std::vector<Rational> eps;  // eps_1 .. eps_{n_hi}
  SlowEscapeSet escape;
  std::vector<GrowthCheck> checks;
  bool degenerate = false;
  bool ok = false;
};

SlowGrowth slow_growth_function(const RankOneMachine& m, const Rate& rho, unsigned long n_lo, unsigned long n_hi,
                                const Rational& cap = Rational(1, 5));

// ---------------------------------------------------------------------------

struct SeriesOptions {
  size_t stages = 3;
  unsigned long n1 = 4;
  unsigned long growth = 4;  // n_{m+1} = growth * n_m; a multiple of 4 keeps the periods nested
  size_t retries = 3;
};

struct SeriesStage {
  size_t m = 0;
  Rational eps;
  unsigned long n = 0;
  AlmostInvariantSet A;
  Quad main;             // ||S_n (eps_m f_m)||_1
  Rational main_bound;   // eps_m n / 8
  Quad cross;            // sum over earlier k of eps_k ||S_n f_k||_1
  Rational cross_bound;  // eps_m n / 32
  Quad tail;             // the same over later constructed k
  Rational tail_bound;   // sum over all later k of (eps_k / 2) n
  Quad triangle;         // main - cross - tail
  Quad total;            // ||S_n f||_1
  Rational total_bound;  // eps_m n / 16
  bool growth_ok = false;  // n >= 1/eps_m^2
  bool ok = false;
};

struct SeriesResult {
  StepFunction f;
  Rational ratio;
  std::vector<SeriesStage> stages;
  bool ok = false;
};

class CrossTermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// f = sum eps_m f_{n_m}, eps_m = ratio^m, f_n = 1_{A_n} - 1/2.
SeriesResult series_noncoboundary(const RankOneMachine& m, const Rational& ratio, const SeriesOptions& opts = {});

// ---------------------------------------------------------------------------

struct SurdRun {
  Interval x;
  Surd value;
};

struct L1TransferTerm {
  unsigned long n = 0;
  IntervalSet D;
  IntervalSet support;  // D, tD, ..., t^{n-1} D
  IntervalSet top;      // t^n D
  Surd weight;          // n^{3/2}
  Surd norm;            // n^{3/2} ||h_n||_1
  bool identity_ok = false;  // h_n - h_n o t^{-1} = 1_D - 1_{t^n D}
};

struct L1TransferReport {
  std::vector<L1TransferTerm> terms;
  std::vector<Surd> H_norms;       // ||H_N||_1, N = 1..N_max
  std::vector<Surd> expected;      // (1/2) sum n^{-1/2}
  Surd H_direct;                   // ||H_{N_max}||_1 from the runs
  std::vector<Surd> dominating;    // sum 2 n^{3/2} p(D_n), N = 1..N_max
  Rational tail_bound;             // 2/sqrt(N_max) bound on the rest of sum n^{-3/2}, rounded up
  Surd coboundary_norm;            // ||H_N - H_N o t^{-1}||_1 at N_max
  bool norms_exact = false;
  bool increasing = false;
  bool dominated = false;
  bool identity_ok = false;
  bool ok = false;
};

struct L1Transfer {
  std::vector<SurdRun> f;  // H_N - H_N o t^{-1}
  std::vector<SurdRun> H;  // H_N
  L1TransferReport report;
};

L1Transfer l1_nonintegrable_transfer(const RankOneMachine& m, unsigned long N_max);

Surd SurdL1(const std::vector<SurdRun>& runs);

}  // namespace cobound

#endif  // COBOUND_NON_COBOUNDARY_H_
