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

#ifndef COBOUND_SURD_H_
#define COBOUND_SURD_H_

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "cobound/quad.h"

namespace cobound {

// Exact sum of c_k sqrt(k) over square-free k >= 1 (k = 1 is the rational
// part). Closed under +, -, *; the sign is decided by the exact zero test
// followed by rational brackets of growing precision.
class Surd {
 public:
  Surd() = default;
  Surd(long v) : Surd(Rational(v)) {}  // NOLINT
  Surd(const Rational& r);             // NOLINT
  Surd(const Quad& q);                 // NOLINT

  // c * sqrt(n) for any n >= 0.
  static Surd Root(const Rational& c, long n);
  static Surd Parse(const std::string& text);

  const std::vector<std::pair<long, Rational>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1); }
  Rational rational_part() const;
  Rational coefficient(long k) const;
  // Representable in a single quadratic field.
  bool is_quad() const;
  Quad to_quad() const;

  int sign() const;
  Surd abs() const { return sign() < 0 ? -*this : *this; }
  double to_double() const;
  // Rational bracket lo <= value <= hi.
  std::pair<Rational, Rational> bracket(unsigned digits) const;
  std::string str() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator/(Surd a, const Rational& r);

  friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const Surd& a, const Surd& b);

 private:
  void add_term(long k, const Rational& c);
  std::vector<std::pair<long, Rational>> terms_;  // sorted by k, nonzero coefficients
};

// Rational linear algebra on the radical basis: a basis of the vectors r with
// sum r_i x_i = 0, in reduced echelon form.
std::vector<std::vector<Rational>> RationalKernel(const std::vector<Surd>& xs);
// The first kernel vector, or empty when the xs are rationally independent.
std::vector<Rational> RationalRelation(const std::vector<Surd>& xs);

}  // namespace cobound

#endif  // COBOUND_SURD_H_
