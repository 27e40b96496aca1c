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

#ifndef COBOUND_STEP_COBOUNDARY_H_
#define COBOUND_STEP_COBOUNDARY_H_

#include <optional>
#include <string>
#include <vector>

#include "cobound/surd.h"
#include "cobound/transforms.h"

namespace cobound {

// f = sum a_i 1_{A_i} seen through the measures p(A_i) and values a_i only.
struct StepData {
  std::vector<Surd> measures;
  std::vector<Surd> values;
  // Value classes of f on [0,1) in order of first appearance, the zero class included.
  static StepData Of(const StepFunction& f);
  // Consecutive intervals A_1 = [0, b_1), A_2 = [b_1, b_1 + b_2), ...
  StepFunction layout() const;
  Surd mean() const;
  size_t size() const { return measures.size(); }
};

enum class StepCase { kAllRational, kRationallyIndependent, kMixed };
std::string StepCaseName(StepCase c);

struct Classification {
  StepCase tag = StepCase::kAllRational;
  // Piece order used by the builders. For kMixed, order[n-2] is the dependent
  // piece and order[n-1] the last piece; otherwise the identity.
  std::vector<size_t> order;
  // kMixed: beta_{order[n-2]} = sum_i relation[i] beta_{order[i]}, i < n - 2.
  std::vector<Rational> relation;
  // kRationallyIndependent: 1 is outside the rational span of the test set,
  // so the torus translation is ergodic.
  bool ergodic = false;
};

// The test set is every piece but the last. Throws std::invalid_argument when
// f is not mean-zero, the measures do not sum to 1, or several independent
// rational relations hold.
Classification ClassifyStepFunction(const StepData& f);
Classification ClassifyStepFunction(const StepFunction& f);

struct TorusCoboundary {
  SimplexTranslation t;
  StepData f;  // a_j on B_j = {label = j}, p(B_j) = alpha_j
  Surd bound;  // 2 m sum |a_j|
  bool ergodic = false;
  // m = 2 in one quadratic field: f on [0,1), the matching phi of each A_j onto
  // B_j in the chart, and the conjugated map phi^{-1} o chart o phi.
  std::optional<StepFunction> line_f;
  std::optional<IntervalMap> phi;
  std::optional<IntervalMap> line_map;

  Surd value_at(const std::vector<Surd>& x) const;
  // The exact transfer <a, x>: f = h - h o t on the whole state space.
  Surd transfer(const std::vector<Surd>& x) const;
  // (1/N) sum_{k<N} S_k f(x), which tends to h(x) minus the mean of h.
  Surd transfer_handle(const std::vector<Surd>& x, long N) const;
  Surd birkhoff(const std::vector<Surd>& x, long n) const;
};

TorusCoboundary BuildTorusCoboundary(const StepData& f);
TorusCoboundary BuildTorusCoboundary(const StepFunction& f);

// ||S_n f||_inf for n = 1..N from the chart closed form
// S_n f(u) = n a_2 + (a_1 - a_2) floor(u + n alpha_1). Needs m = 2.
std::vector<Quad> TorusChartNorms(const TorusCoboundary& c, long N);

struct OrbitSweep {
  std::vector<Surd> sup;  // sup over the starting points of |S_n f|, n = 1..N
  Surd max;
  long argmax_n = 0;
  std::vector<Surd> witness;
  bool within_bound = false;
  bool sum_conserved = true;
  long starts = 0;
};

// Exact orbit sums from `starts` points t^{stride k}(0).
OrbitSweep TorusOrbitSweep(const TorusCoboundary& c, long N, long starts, long stride = 17);

struct RationalCoboundary {
  long q = 1;
  StepFunction f;
  RankOneMachine column;  // C_0, levels of width 1/q drawn from the A_i
  std::vector<Quad> level_f;
  std::vector<Quad> level_g;
  StepFunction g;
  // C_0 after k cut-and-stack steps with q cuts and no spacers.
  RankOneMachine stage(int k) const;
};

RationalCoboundary BuildRationalCoboundary(const StepFunction& f);

// f - (g - g o t) on the region where the machine is defined.
StepFunction RationalResidual(const RationalCoboundary& c, const RankOneMachine& m);

struct TightnessEvidence {
  long N = 0;
  long starts = 0;
  std::vector<Quad> sup;  // sup over starts of |S_n f_beta|, n = 1..N
  Quad max;
  Quad first_half_max;
  Quad second_half_max;
  bool bounded_evidence = false;
  std::string status = "evidence, not certificate";
};

struct ExtensionCoboundary {
  Classification cls;
  StepData pieces;  // reordered per cls.order
  std::optional<FiniteExtension> t;
  std::vector<Quad> alpha;           // base angles beta_i / (1 - beta_m), i < m
  Quad alpha_last;                   // beta_{m+1} / (1 - beta_m)
  std::vector<Quad> f_alpha_values;  // a_i + a_m beta_m over the base pieces, last piece included
  Quad beta_m;
  Quad measure_d;
  bool mean_corrected = false;  // p(D) differs from beta_m, so f_beta = 1_D - p(D)
  std::optional<TightnessEvidence> evidence;
  std::optional<TorusCoboundary> reduced;  // beta_m = 0
};

// relation overrides the discovered coefficients when supplied; it is checked exactly.
ExtensionCoboundary BuildFiniteExtensionCoboundary(const StepData& f, long N = 10000, long starts = 64,
                                                   std::optional<std::vector<Rational>> relation = {});
ExtensionCoboundary BuildFiniteExtensionCoboundary(const StepFunction& f, long N = 10000, long starts = 64);

// Orbit sums of 1_D - p(D) over the base rotation from a deterministic grid.
TightnessEvidence ExtensionSweep(const FiniteExtension& t, long N, long starts);

}  // namespace cobound

#endif  // COBOUND_STEP_COBOUNDARY_H_
