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

#ifndef COBOUND_STACKING_H_
#define COBOUND_STACKING_H_

#include <optional>
#include <string>
#include <vector>

#include "cobound/diophantine.h"
#include "cobound/function_source.h"
#include "cobound/interval_map.h"
#include "cobound/rank_one.h"
#include "cobound/step_function.h"

namespace cobound {

// Named pass/fail conditions from an independent checker.
struct ConditionReport {
  std::vector<std::pair<std::string, bool>> items;
  void add(std::string name, bool ok) { items.emplace_back(std::move(name), ok); }
  bool ok() const;
  std::vector<std::string> failures() const;
};

// (x, value) runs of f over s, in increasing x.
std::vector<std::pair<Interval, Quad>> Overlaps(const StepFunction& f, const IntervalSet& s);
// Least and greatest value of f on s (positive-measure overlaps only).
std::pair<Quad, Quad> ValueRange(const StepFunction& f, const IntervalSet& s);
// Step function on [0,1) from disjoint runs, zero elsewhere.
StepFunction StepFromRuns(std::vector<std::pair<Interval, Quad>> runs);

// ---------------------------------------------------------------------------
// Balanced uniform partitions.

struct PUBPartition {
  IntervalSet domain;
  std::vector<IntervalSet> cells;
  IntervalSet exceptional;
  Rational epsilon;
  unsigned m = 0;          // value bins of width 1/m
  Integer q;               // cells have measure 1/(q + 1)
  Quad cell_measure;
  Quad oscillation_bound;  // largest oscillation of the working function over a cell
  std::vector<long> cell_bin;
  // Tamping pairs: cells made of a low half and a high half from one bin.
  size_t tamping_pairs = 0;
  Quad tamping_gap;
  long tamping_bin = 0;
};

struct PUBOptions {
  Integer q_min = 2;
  Integer q_max = 20000000;
  size_t min_cells = 1;      // per domain
  bool tamping = false;      // carve tamping pairs in the bin with the widest value spread
  bool tamping_required = false;
};

// Thrown when a bin with two separated value groups cannot be found.
class TampingNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least m with 2/m < eps.
unsigned BinCount(const Rational& eps);
// Grid 2^-k fine enough that cells built from the refined function have
// oscillation below eps for the source itself.
Rational WorkingResolution(const FunctionSource& src, const Rational& eps);
StepFunction WorkingFunction(const FunctionSource& src, const Rational& eps);

PUBPartition pub_partition(const FunctionSource& src, const IntervalSet& A, const Rational& eps,
                           const PUBOptions& opts = {});
// Same construction on a fixed step function.
PUBPartition PubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps,
                         const PUBOptions& opts = {});
// One approximation over the bins of every domain: all cells share 1/(q+1).
std::vector<PUBPartition> JointPub(const std::vector<std::pair<StepFunction, IntervalSet>>& parts,
                                   const Rational& eps, const PUBOptions& opts = {});

ConditionReport CheckPUB(const StepFunction& f, const PUBPartition& p);
// Condition (3) against the source itself, through its exact range on each grid cell.
ConditionReport CheckPUBSource(const FunctionSource& src, const PUBPartition& p);

// ---------------------------------------------------------------------------
// Greedy stacking.

struct GreedyOrder {
  std::vector<size_t> order;
  std::vector<Quad> prefix;  // sigma_1 .. sigma_h
  Quad bound;                // max |integral| over the pieces
};

// pieces: (set, integral of f over it). first: piece forced to the bottom.
GreedyOrder greedy_stack(const std::vector<std::pair<IntervalSet, Quad>>& pieces,
                         std::optional<size_t> first = std::nullopt);

// ---------------------------------------------------------------------------
// Towers.

struct TUBTower {
  std::vector<IntervalSet> levels;
  IntervalMap map;  // level i onto level i + 1
  Rational epsilon;
  size_t height() const { return levels.size(); }
  IntervalSet support() const { return UnionAll(levels); }
};

// Column bookkeeping produced with a tower.
struct ColumnData {
  IntervalMap to_base;          // top level onto the base level(s), along columns
  std::vector<Branch> to_top;   // every level onto the top level (many to one)
  StepFunction transfer;        // minus the sum of f over the levels below
  StepFunction full_sum;        // column sums, carried by the top level
  Quad spread;                  // max - min of the column sums
};

// Columns of a tower given by its map and base: follows every base point up
// until the map is undefined.
ColumnData Columns(const IntervalMap& map, const IntervalSet& base, const StepFunction& f);

struct RefineReport {
  size_t swaps = 0;
  Quad spread_before;
  Quad spread_after;
  bool satisfied = false;  // every column sum below eps in absolute value
};

struct TUBBuild {
  TUBTower tower;
  PUBPartition pub;
  GreedyOrder order;
  ColumnData columns;
  RefineReport refine;
  StepFunction f;  // working function
};

ConditionReport CheckTUB(const StepFunction& f, const IntervalSet& A, const TUBTower& t);

// Swap search on the level matchings. Spread never increases and the
// weighted square sum of column sums strictly decreases with each swap.
TUBTower level_refine(const TUBTower& tower, const StepFunction& f, const Rational& eps, size_t max_iters,
                      RefineReport* report = nullptr);
// Column sums of a tower, as a step function on its top level.
StepFunction ColumnSums(const TUBTower& tower, const StepFunction& f);

TUBBuild tub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps, unsigned long N);
TUBBuild TubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps, unsigned long N);
// Two towers with the same width 1/n, n > N.
std::pair<TUBBuild, TUBBuild> PairedTub(const StepFunction& f1, const IntervalSet& A1, const StepFunction& f2,
                                        const IntervalSet& A2, const Rational& eps, unsigned long N);
std::pair<TUBBuild, TUBBuild> tub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps,
                                        unsigned long N, const FunctionSource& src2, const IntervalSet& A2);

struct WTUBTower {
  std::vector<TUBTower> subtowers;  // heights h, h + 1, h + 2
  IntervalMap map;
  Rational epsilon;
  unsigned M = 3;
  IntervalSet support() const;
};

struct WTUBBuild {
  WTUBTower tower;
  PUBPartition pub;
  GreedyOrder order;
  ColumnData columns;
  StepFunction f;
  size_t refinements = 0;  // extra refinements spent finding the tamping groups
};

ConditionReport CheckWTUB(const StepFunction& f, const IntervalSet& A, const WTUBTower& t);

WTUBBuild wtub_build(const FunctionSource& src, const IntervalSet& A, const Rational& eps, unsigned long N);
WTUBBuild WtubFromStep(const StepFunction& f, const IntervalSet& A, const Rational& eps, unsigned long N);

// ---------------------------------------------------------------------------
// Weak-mixing coboundary.

struct ScheduleParams {
  std::vector<Rational> eps;
  std::vector<unsigned long> N;
  // Geometric decay certificate: eps_{i+1}/eps_i and N_i/N_{i+1} are at most ratio < 1.
  Rational ratio;
  Rational partial_sum;  // sum of eps_i + 1/N_i over the listed terms
  Rational tail_bound;   // bound on the sum of the unlisted terms under the decay law
  static ScheduleParams Make(std::vector<Rational> eps, std::vector<unsigned long> N);
  static ScheduleParams Geometric(const Rational& eps0, unsigned long N0, size_t count);
  size_t size() const { return eps.size(); }
};

struct StageRecord {
  size_t stage = 0;
  Rational epsilon;
  unsigned long N = 0;
  Quad width;                     // 1/n of this stage's cells
  std::vector<size_t> heights;    // new column heights (levels of the stage's towers)
  size_t max_column_height = 0;
  Quad undefined_measure;         // where the map is not yet defined
  Quad top_sum_sup;               // sup |column sum| over the tops
  std::optional<Quad> cauchy;     // sup |g_s - g_{s-1}| over the old region
  std::optional<Rational> cauchy_bound;  // 3(eps_s + eps_{s-1})
  std::optional<bool> cauchy_ok;
  std::optional<Rational> f1_bound_prev;  // 3 eps_{s-1}
  std::optional<Rational> f1_bound_curr;  // 3 eps_s
  Quad f1_sup;                    // sup |f_1| on the tops entering this stage
  size_t dyadic_resolution = 0;   // 2^-k with k = stage + 1
  size_t levels_split = 0;        // new levels meeting at least two dyadic cells
  size_t levels_total = 0;
  size_t map_branches = 0;
  size_t transfer_pieces = 0;
};

struct WeakMixingResult {
  IntervalMap tau;
  StepFunction f;          // working function
  StepFunction g;          // transfer on the covered region
  IntervalSet covered;     // union of all columns
  IntervalSet tops;
  IntervalMap to_base;     // tops onto their column bases
  StepFunction top_sums;   // column sums on the tops
  std::vector<StageRecord> log;
  Quad residual_defined;   // sup |f - (g - g o tau)| on the domain of tau
  Quad residual_closed;    // the same with tau closed by to_base on the tops
  bool cauchy_ok = true;
  // Walk back along tau from sample points and compare with g.
  Quad walk_check(size_t samples, unsigned long seed) const;
  std::vector<std::string> log_lines() const;  // JSON lines
};

WeakMixingResult weak_mixing_coboundary(const FunctionSource& src, const ScheduleParams& schedule, size_t stages);

// ---------------------------------------------------------------------------
// Tower-shift joint approximation.

struct JointApproximationReport {
  unsigned long M = 0;
  unsigned long N = 0;
  Quad sigma_error;      // ||H - H o sigma||_1 on the tower
  Quad sigma_bound;      // 2M/N
  Quad tau_error;        // ||H - H o tau - K||_1 on the defined region
  Quad tau_bound;        // 1/M
  Quad end_strip_mass;   // mass where the shift rule is replaced by cross-class matching
  Quad measure_defect;   // p(S) - p(tau S) over the checked sets, expected 0
  bool ok = false;
};

struct JointApproximation {
  IntervalMap tau;
  StepFunction H;
  JointApproximationReport report;
};

JointApproximation joint_approximation_construct(const RankOneMachine& sigma, const StepFunction& K,
                                                 unsigned long M, unsigned long N);

}  // namespace cobound

#endif  // COBOUND_STACKING_H_
