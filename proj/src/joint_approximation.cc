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

#include <stdexcept>

#include "cobound/stacking.h"

namespace cobound {

JointApproximation joint_approximation_construct(const RankOneMachine& sigma, const StepFunction& K,
                                                 unsigned long M, unsigned long N) {
  if (M == 0 || N == 0) throw std::invalid_argument("joint_approximation: M and N must be positive");
  if (sigma.height() < N)
    throw std::invalid_argument("joint_approximation: machine height " + std::to_string(sigma.height()) +
                                " is below N = " + std::to_string(N));

  // Sign of K on each tower level.
  std::vector<int> sign(N, 0);
  std::vector<size_t> down, up;  // K = -1 levels, K = +1 levels
  for (size_t j = 0; j < N; ++j) {
    auto [lo, hi] = ValueRange(K, sigma.level(j));
    if (lo != hi) throw std::invalid_argument("joint_approximation: K is not constant on level " + std::to_string(j));
    if (lo == Quad(-1)) {
      sign[j] = -1;
      down.push_back(j);
    } else if (lo == Quad(1)) {
      sign[j] = 1;
      up.push_back(j);
    } else if (lo != Quad(0)) {
      throw std::invalid_argument("joint_approximation: K takes value " + lo.str() + " on level " +
                                  std::to_string(j));
    }
  }
  if (down.size() != up.size())
    throw std::invalid_argument("joint_approximation: K is not mean-zero on the tower (" +
                                std::to_string(down.size()) + " levels at -1, " + std::to_string(up.size()) +
                                " at +1)");

  // Strips: the base split in M parts, carried up by sigma.
  std::vector<std::vector<IntervalSet>> R(N);
  R[0] = sigma.level(0).split_equal(M);
  for (size_t j = 1; j < N; ++j) {
    R[j].reserve(M);
    for (const auto& s : R[j - 1]) R[j].push_back(sigma.map().pushforward(s));
  }

  std::vector<std::pair<IntervalSet, Quad>> hp;
  for (size_t j = 0; j < N; ++j)
    for (size_t i = 0; i < M; ++i) hp.emplace_back(R[j][i], Quad(static_cast<long>(i + 1)));
  StepFunction H = StepFunction::FromPieces(hp);

  std::vector<Branch> br;
  Quad defect = 0;
  auto link = [&](const IntervalSet& a, const IntervalSet& b) {
    auto m = IntervalMap::Matching(a, b);
    defect += (m.pushforward(a).measure() - a.measure()).abs();
    br.insert(br.end(), m.branches().begin(), m.branches().end());
  };
  for (size_t j = 0; j < N; ++j) {
    for (size_t i = 0; i < M; ++i) {
      if (sign[j] == 0) link(R[j][i], R[j][i]);
      else if (sign[j] < 0 && i + 1 < M) link(R[j][i], R[j][i + 1]);
      else if (sign[j] > 0 && i > 0) link(R[j][i], R[j][i - 1]);
    }
  }
  // Top strips of the up-shift class go to the top strips of the down-shift
  // class, bottom strips the other way.
  Quad end_mass = 0;
  for (size_t r = 0; r < down.size(); ++r) {
    link(R[down[r]][M - 1], R[up[r]][M - 1]);
    link(R[up[r]][0], R[down[r]][0]);
    end_mass += R[down[r]][M - 1].measure() + R[up[r]][0].measure();
  }

  JointApproximation out;
  out.tau = IntervalMap::FromBranches(std::move(br));
  out.H = H;

  auto& rep = out.report;
  rep.M = M;
  rep.N = N;
  const auto& s = sigma.map();
  rep.sigma_error = (H - s.pullback(H)).abs().integral_over(s.domain());
  rep.sigma_bound = Quad(Frac(2 * static_cast<long>(M), static_cast<long>(N)));
  rep.tau_error = (H - out.tau.pullback(H) - K).abs().integral_over(out.tau.domain());
  rep.tau_bound = Quad(Frac(1, static_cast<long>(M)));
  rep.end_strip_mass = end_mass;
  rep.measure_defect = defect;
  rep.ok = rep.sigma_error <= rep.sigma_bound && rep.tau_error <= rep.tau_bound &&
           rep.end_strip_mass <= rep.tau_bound && rep.measure_defect == Quad(0);
  return out;
}

}  // namespace cobound
