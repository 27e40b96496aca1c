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

#ifndef COBOUND_TRANSFORMS_H_
#define COBOUND_TRANSFORMS_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cobound/interval_map.h"
#include "cobound/rank_one.h"
#include "cobound/surd.h"

namespace cobound {

// x -> x + alpha mod 1.
class Rotation {
 public:
  explicit Rotation(const Quad& alpha);
  const Quad& alpha() const { return alpha_; }
  const IntervalMap& map() const { return map_; }

 private:
  Quad alpha_;
  IntervalMap map_;
};

// Points of R^m; every coordinate gains alpha_i and the least index j
// maximizing x_j + alpha_j loses 1. The coordinate sum is invariant.
class SimplexTranslation {
 public:
  explicit SimplexTranslation(std::vector<Surd> alpha);
  explicit SimplexTranslation(const std::vector<Quad>& alpha);
  const std::vector<Surd>& alpha() const { return alpha_; }
  size_t dim() const { return alpha_.size(); }

  // Index that loses 1 on the next step.
  size_t label(const std::vector<Surd>& x) const;
  std::vector<Surd> apply(const std::vector<Surd>& x) const;
  // A preimage, trying the losing index j = 0, 1, ... in turn. For m >= 3 the
  // map is injective only on a fundamental domain.
  std::vector<Surd> apply_inverse(const std::vector<Surd>& y) const;

  // For m = 2 on the sum-zero line the dynamics is a rotation by alpha_1 of
  // the chart u = x_1 - L, with the label-1 set equal to [1 - alpha_1, 1).
  // Needs the weights in one quadratic field.
  Quad chart_alpha() const;
  Quad chart_offset() const;
  std::vector<Surd> from_chart(const Quad& u) const;
  Quad to_chart(const std::vector<Surd>& x) const;
  IntervalMap chart_map() const;

 private:
  std::vector<Surd> alpha_;
};

// Two-floor extension of a rotation of [0,1)^k: (x,0) climbs to (x,1) when
// x lies in D = {0 <= sum c_i x_i < beta}, otherwise (x,i) -> (R x, 0).
class FiniteExtension {
 public:
  FiniteExtension(std::vector<Quad> alpha, std::vector<Rational> coef, Quad beta);

  struct Point {
    std::vector<Quad> x;
    int floor = 0;
    friend bool operator==(const Point&, const Point&) = default;
  };

  const std::vector<Quad>& alpha() const { return alpha_; }
  const std::vector<Rational>& coef() const { return coef_; }
  const Quad& beta() const { return beta_; }
  bool in_d(const std::vector<Quad>& x) const;
  // Lebesgue measure of D in [0,1)^k.
  Quad measure_d() const;
  std::vector<Quad> rotate(const std::vector<Quad>& x) const;
  Point apply(const Point& p) const;
  Point apply_inverse(const Point& p) const;

 private:
  std::vector<Quad> alpha_;
  std::vector<Rational> coef_;
  Quad beta_;
};

class Transform {
 public:
  using Variant = std::variant<Rotation, SimplexTranslation, RankOneMachine, FiniteExtension, IntervalMap>;

  Transform(Variant v);  // NOLINT
  const Variant& variant() const { return v_; }
  std::string kind() const;
  // The exact one-dimensional map, when the transform has one
  // (m = 2 simplex translations use their chart).
  const IntervalMap* interval_map() const;
  bool is_one_dimensional() const { return interval_map() != nullptr; }
  Quad apply(const Quad& x) const;
  Quad apply_inverse(const Quad& x) const;
  IntervalSet pushforward(const IntervalSet& s) const;

 private:
  Variant v_;
  std::optional<IntervalMap> chart_;
};

// levels[j+1] is the image of levels[j].
struct Tower {
  std::vector<IntervalSet> levels;
  IntervalSet base() const { return levels.front(); }
  size_t height() const { return levels.size(); }
  Quad covered() const;
};

// Tower of the given height covering at least 1 - eps.
Tower RokhlinTower(const Transform& t, size_t height, const Rational& eps);

}  // namespace cobound

#endif  // COBOUND_TRANSFORMS_H_
