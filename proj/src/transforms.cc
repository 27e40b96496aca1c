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

#include "cobound/transforms.h"

#include <algorithm>
#include <optional>

namespace cobound {

Rotation::Rotation(const Quad& alpha) : alpha_(alpha.frac()), map_(IntervalMap::Rotation(alpha)) {}

SimplexTranslation::SimplexTranslation(std::vector<Surd> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) throw std::invalid_argument("simplex translation needs m >= 2");
  Surd sum;
  for (const auto& a : alpha_) {
    if (a.sign() <= 0) throw std::invalid_argument("simplex weights must be positive");
    sum += a;
  }
  if (sum != Surd(1)) throw std::invalid_argument("simplex weights must sum to 1, got " + sum.str());
}

SimplexTranslation::SimplexTranslation(const std::vector<Quad>& alpha)
    : SimplexTranslation(std::vector<Surd>(alpha.begin(), alpha.end())) {}

size_t SimplexTranslation::label(const std::vector<Surd>& x) const {
  if (x.size() != alpha_.size()) throw std::invalid_argument("state has wrong dimension");
  size_t best = 0;
  Surd top = x[0] + alpha_[0];
  for (size_t i = 1; i < x.size(); ++i) {
    Surd v = x[i] + alpha_[i];
    if (top < v) {
      top = std::move(v);
      best = i;
    }
  }
  return best;
}

std::vector<Surd> SimplexTranslation::apply(const std::vector<Surd>& x) const {
  size_t j = label(x);
  std::vector<Surd> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + alpha_[i];
  y[j] -= Surd(1);
  return y;
}

std::vector<Surd> SimplexTranslation::apply_inverse(const std::vector<Surd>& y) const {
  for (size_t j = 0; j < y.size(); ++j) {
    std::vector<Surd> x(y.size());
    for (size_t i = 0; i < y.size(); ++i) x[i] = y[i] - alpha_[i];
    x[j] += Surd(1);
    if (label(x) == j) return x;
  }
  throw UndefinedError("state has no preimage");
}

Quad SimplexTranslation::chart_alpha() const {
  if (dim() != 2) throw std::invalid_argument("chart exists only for m = 2");
  return alpha_[0].to_quad();
}

Quad SimplexTranslation::chart_offset() const {
  Quad a1 = chart_alpha(), a2 = alpha_[1].to_quad();
  Quad c = (a2 - a1) / Quad(2);
  return c + a1 - 1;
}

std::vector<Surd> SimplexTranslation::from_chart(const Quad& u) const {
  Quad x1 = u + chart_offset();
  return {Surd(x1), Surd(-x1)};
}

Quad SimplexTranslation::to_chart(const std::vector<Surd>& x) const {
  if (x.size() != 2 || !(x[0] + x[1]).is_zero()) throw std::invalid_argument("state is not on the sum-zero line");
  Quad u = x[0].to_quad() - chart_offset();
  if (u < 0 || !(u < 1)) throw std::invalid_argument("state outside the invariant chart");
  return u;
}

IntervalMap SimplexTranslation::chart_map() const { return IntervalMap::Rotation(chart_alpha()); }

FiniteExtension::FiniteExtension(std::vector<Quad> alpha, std::vector<Rational> coef, Quad beta)
    : alpha_(std::move(alpha)), coef_(std::move(coef)), beta_(std::move(beta)) {
  if (alpha_.empty() || alpha_.size() != coef_.size()) throw std::invalid_argument("extension dimension mismatch");
  for (const auto& c : coef_) {
    if (c < 0) throw std::invalid_argument("relation coefficients must be nonnegative");
  }
  if (beta_.sign() < 0) throw std::invalid_argument("negative skyscraper threshold");
}

bool FiniteExtension::in_d(const std::vector<Quad>& x) const {
  Quad s;
  for (size_t i = 0; i < x.size(); ++i) s += Quad(coef_[i]) * x[i];
  return s.sign() >= 0 && s < beta_;
}

Quad FiniteExtension::measure_d() const {
  std::vector<Rational> c;
  for (const auto& v : coef_) {
    if (v != 0) c.push_back(v);
  }
  if (beta_.is_zero()) return Quad(0);
  if (c.empty()) return Quad(1);
  const size_t k = c.size();
  Rational denom = 1;
  for (size_t i = 1; i <= k; ++i) denom *= static_cast<long>(i);
  for (const auto& v : c) denom *= v;
  Quad total;
  for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
    Rational cs = 0;
    int bits = 0;
    for (size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        cs += c[i];
        ++bits;
      }
    }
    Quad t = beta_ - Quad(cs);
    if (t.sign() <= 0) continue;
    Quad term = pow(t, static_cast<unsigned>(k));
    total += bits % 2 ? -term : term;
  }
  return total / Quad(denom);
}

std::vector<Quad> FiniteExtension::rotate(const std::vector<Quad>& x) const {
  std::vector<Quad> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = (x[i] + alpha_[i]).frac();
  return y;
}

FiniteExtension::Point FiniteExtension::apply(const Point& p) const {
  if (p.floor == 0 && in_d(p.x)) return {p.x, 1};
  return {rotate(p.x), 0};
}

FiniteExtension::Point FiniteExtension::apply_inverse(const Point& p) const {
  if (p.floor == 1) return {p.x, 0};
  std::vector<Quad> z(p.x.size());
  for (size_t i = 0; i < z.size(); ++i) z[i] = (p.x[i] - alpha_[i]).frac();
  return {z, in_d(z) ? 1 : 0};
}

namespace {

struct KindName {
  std::string operator()(const Rotation&) const { return "rotation"; }
  std::string operator()(const SimplexTranslation&) const { return "simplex"; }
  std::string operator()(const RankOneMachine&) const { return "rank_one"; }
  std::string operator()(const FiniteExtension&) const { return "finite_extension"; }
  std::string operator()(const IntervalMap&) const { return "interval_map"; }
};

}  // namespace

std::string Transform::kind() const { return std::visit(KindName{}, v_); }

Transform::Transform(Variant v) : v_(std::move(v)) {
  if (auto* s = std::get_if<SimplexTranslation>(&v_)) {
    if (s->dim() == 2 && s->alpha()[0].is_quad() && s->alpha()[1].is_quad()) chart_ = s->chart_map();
  }
}

const IntervalMap* Transform::interval_map() const {
  if (auto* r = std::get_if<Rotation>(&v_)) return &r->map();
  if (auto* m = std::get_if<RankOneMachine>(&v_)) return &m->map();
  if (auto* g = std::get_if<IntervalMap>(&v_)) return g;
  if (chart_) return &*chart_;
  return nullptr;
}

Quad Transform::apply(const Quad& x) const {
  const IntervalMap* m = interval_map();
  if (!m) throw std::invalid_argument(kind() + " has no one-dimensional map");
  return m->apply(x);
}

Quad Transform::apply_inverse(const Quad& x) const {
  const IntervalMap* m = interval_map();
  if (!m) throw std::invalid_argument(kind() + " has no one-dimensional map");
  return m->inverse().apply(x);
}

IntervalSet Transform::pushforward(const IntervalSet& s) const {
  const IntervalMap* m = interval_map();
  if (!m) throw std::invalid_argument(kind() + " has no one-dimensional map");
  return m->pushforward(s);
}

Quad Tower::covered() const {
  Quad total;
  for (const auto& l : levels) total += l.measure();
  return total;
}

namespace {

Tower MachineTower(const RankOneMachine& m, size_t height, const Rational& eps) {
  size_t blocks = m.height() / height;
  Quad covered = m.width() * Quad(static_cast<long>(blocks * height));
  if (blocks == 0 || covered < Quad(1 - eps)) {
    throw std::invalid_argument("machine too shallow for a tower of height " + std::to_string(height) +
                                "; cut and stack further");
  }
  Tower t;
  for (size_t i = 0; i < height; ++i) {
    std::vector<IntervalSet> parts;
    for (size_t b = 0; b < blocks; ++b) parts.push_back(m.level(b * height + i));
    t.levels.push_back(UnionAll(parts));
  }
  return t;
}

Tower RotationTower(const IntervalMap& map, const Quad& alpha, size_t height, const Rational& eps) {
  // Base [0, delta) with delta = ||q alpha|| for a convergent denominator q.
  Quad delta;
  if (alpha.is_rational()) {
    delta = Quad(Rational(1) / Rational(alpha.rational().get_den()));
  } else {
    Quad target(Rational(eps / static_cast<long>(height - 1)));
    Quad x = alpha;
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int k = 0; k < 200; ++k) {
      Integer a = x.floor();
      Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
      if (q1 > 0) {
        Quad err = (Quad(Rational(q1)) * alpha - Quad(Rational(p1))).abs();
        if (!err.is_zero() && err <= target) {
          delta = err;
          break;
        }
      }
      x = Quad(1) / (x - Quad(Rational(a)));
    }
    if (delta.is_zero()) throw std::invalid_argument("no convergent reached the requested tower precision");
  }
  IntervalSet base = IntervalSet::Span(0, delta);
  // Kakutani skyscraper over the base. A piece {lo, hi, off} is the set of
  // base points [lo, hi) whose current image is [lo + off, hi + off).
  struct Piece {
    Quad lo, hi, off;
  };
  std::vector<std::pair<long, IntervalSet>> columns;
  std::vector<Piece> live{{Quad(0), delta, Quad(0)}};
  for (long t = 1; !live.empty(); ++t) {
    std::vector<Piece> next;
    std::vector<Interval> back;
    for (const auto& p : live) {
      for (const auto& b : map.branches()) {
        Quad lo = max(p.lo + p.off, b.lo), hi = min(p.hi + p.off, b.hi);
        if (!(lo < hi)) continue;
        Quad off = p.off + b.shift;
        Quad ilo = lo + b.shift, ihi = hi + b.shift;
        // Split the image at delta: the part below returns now.
        if (ilo < delta) {
          Quad cut = min(ihi, delta);
          back.push_back({ilo - off, cut - off});
          if (cut < ihi) next.push_back({cut - off, ihi - off, off});
        } else {
          next.push_back({ilo - off, ihi - off, off});
        }
      }
    }
    if (!back.empty()) columns.push_back({t, IntervalSet::FromIntervals(std::move(back))});
    live = std::move(next);
    if (t > 100000000) throw std::runtime_error("return time computation diverged");
  }
  Tower tower;
  tower.levels.assign(height, IntervalSet());
  for (const auto& [r, start] : columns) {
    long blocks = r / static_cast<long>(height);
    IntervalSet lvl = start;
    for (long s = 0; s < blocks * static_cast<long>(height); ++s) {
      size_t i = static_cast<size_t>(s) % height;
      tower.levels[i] = tower.levels[i].unite(lvl);
      lvl = map.pushforward(lvl);
    }
  }
  if (tower.covered() < Quad(1 - eps)) throw std::runtime_error("rotation tower misses the coverage target");
  return tower;
}

}  // namespace

Tower RokhlinTower(const Transform& t, size_t height, const Rational& eps) {
  if (height == 0) throw std::invalid_argument("tower height must be positive");
  if (eps < 0) throw std::invalid_argument("negative coverage slack");
  if (auto* m = std::get_if<RankOneMachine>(&t.variant())) return MachineTower(*m, height, eps);
  std::optional<Quad> alpha;
  if (auto* r = std::get_if<Rotation>(&t.variant())) alpha = r->alpha();
  if (auto* s = std::get_if<SimplexTranslation>(&t.variant()); s && s->dim() == 2) alpha = s->chart_alpha();
  if (!alpha) throw std::invalid_argument("towers are available for machines and rotations only");
  if (height == 1) return Tower{{IntervalSet::Unit()}};
  return RotationTower(*t.interval_map(), *alpha, height, eps);
}

}  // namespace cobound
