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

#ifndef COBOUND_COCYCLE_H_
#define COBOUND_COCYCLE_H_

#include <optional>
#include <string>
#include <vector>

#include "cobound/transforms.h"

namespace cobound {

// S_1 f, S_2 f, ... computed exactly by S_{k+1} = f + S_k o t. The valid
// region shrinks to the points whose orbit stays inside a partial map.
class BirkhoffSums {
 public:
  BirkhoffSums(const IntervalMap& t, StepFunction f);
  // S_0 = 0 is current after construction.
  void advance();
  long n() const { return n_; }
  const StepFunction& current() const { return sum_; }
  const IntervalSet& valid() const { return valid_; }

 private:
  const IntervalMap& t_;
  StepFunction f_;
  StepFunction sum_;
  IntervalSet valid_;
  IntervalSet dom_;
  long n_ = 0;
};

// S_n f(x) by direct orbit evaluation; throws UndefinedError off the domain.
Quad BirkhoffSum(const Transform& t, const StepFunction& f, long n, const Quad& x);
Quad BirkhoffSum(const IntervalMap& t, const StepFunction& f, long n, const Quad& x);

enum class Verdict { kBounded, kGrowing, kInconclusive };
std::string VerdictName(Verdict v);

struct SweepEntry {
  long n = 0;
  NormValue norm;
  Quad witness;  // a point where |S_n f| is maximal
  bool sampled = false;
};

struct CocycleReport {
  NormIndex r;
  std::vector<SweepEntry> entries;
  Verdict verdict = Verdict::kInconclusive;
  std::optional<NormValue> bound;  // 2 ||h||_r when h is supplied
  double slope = 0;
  double r_squared = 0;
  std::string sampling_note;
};

struct SweepOptions {
  std::optional<StepFunction> transfer;
  size_t piece_limit = 1000000;
  size_t samples = 4096;
};

CocycleReport CocycleNormSweep(const Transform& t, const StepFunction& f, const NormIndex& r, long N,
                               const SweepOptions& opt = {});

struct TightnessEntry {
  long n = 0;
  Quad a_n;
};

struct TightnessReport {
  Rational eps;
  std::vector<TightnessEntry> entries;
  bool tight_candidate = false;
};

// Least A with p{|S| <= A} >= (1 - eps) p(region), over the region.
Quad DistributionBound(const StepFunction& s, const IntervalSet& region, const Rational& eps);
TightnessReport SchmidtTightness(const Transform& t, const StepFunction& f, const Rational& eps, long N);

// h = (1/n) sum_{k=0}^{n-1} S_k f, so that f - A_n f = h - h o t.
StepFunction CesaroTransfer(const Transform& t, const StepFunction& f, long n);
// f - A_n f - (h - h o t) restricted to the region where t^n is defined.
StepFunction CesaroResidual(const Transform& t, const StepFunction& f, long n, const StepFunction& h);

enum class RewriteMode { kPower, kCommuting, kConjugate };

struct RewriteResult {
  StepFunction f;
  // Named transfer functions with their maps, e.g. {"tau", H}.
  std::vector<std::pair<std::string, StepFunction>> transfers;
  bool exact = false;  // every identity checked with zero residual
  long relation_checks = 0;
};

RewriteResult PowerRewrite(const Transform& t, const StepFunction& h, long n);
// sigma must commute with tau (kCommuting) or satisfy tau sigma = sigma tau^2 (kConjugate).
RewriteResult PairRewrite(RewriteMode mode, const Transform& tau, const Transform& sigma, const StepFunction& h,
                          long checks = 1000);

struct ResidualReport {
  Quad sample_residual;
  Quad sample_witness;
  std::optional<Quad> exact_residual;  // sup |f - (h - h o t)| over the domain
  Quad sweep_sup;                      // sup_{n <= N} ||S_n f||_inf
  Quad two_h;                          // 2 ||h||_inf
  bool within_bound = false;
};

ResidualReport VerifyCoboundary(const Transform& t, const StepFunction& f, const StepFunction& h, long samples,
                                long N);

// Midpoints (2k+1)/(2 samples), k < samples.
std::vector<Quad> SampleGrid(long samples);

}  // namespace cobound

#endif  // COBOUND_COCYCLE_H_
