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

#ifndef COBOUND_QUAD_H_
#define COBOUND_QUAD_H_

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cobound {

using Rational = mpq_class;
using Integer = mpz_class;

// Raised when two irrational elements of different quadratic fields meet.
class FieldMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact element a + b*sqrt(d) of Q(sqrt d), d square-free.
// Rationals carry d = 0 and combine with any field.
class Quad {
 public:
  Quad() = default;
  Quad(long v) : a_(v) {}  // NOLINT
  Quad(const Rational& a) : a_(a) { a_.canonicalize(); }  // NOLINT
  Quad(Rational a, Rational b, long d);

  static Quad Sqrt(long n);
  static Quad Ratio(long p, long q) { return Quad(Rational(p, q)); }
  // Accepts "p/q", "a+b√d", "sqrt(2)-1", "(√5-1)/2" and similar.
  static Quad Parse(std::string_view text);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long d() const { return b_ == 0 ? 0 : d_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  int sign() const;
  Quad abs() const { return sign() < 0 ? -*this : *this; }
  Quad conj() const;
  Rational norm() const;
  Integer floor() const;
  Integer ceil() const;
  Quad frac() const { return *this - Quad(Rational(floor())); }
  Rational rational() const;
  double to_double() const;
  std::string str() const;

  Quad operator-() const;
  Quad& operator+=(const Quad& o);
  Quad& operator-=(const Quad& o);
  Quad& operator*=(const Quad& o);
  Quad& operator/=(const Quad& o);

  friend Quad operator+(Quad x, const Quad& y) { return x += y; }
  friend Quad operator-(Quad x, const Quad& y) { return x -= y; }
  friend Quad operator*(Quad x, const Quad& y) { return x *= y; }
  friend Quad operator/(Quad x, const Quad& y) { return x /= y; }

  friend bool operator==(const Quad& x, const Quad& y);
  friend std::strong_ordering operator<=>(const Quad& x, const Quad& y);

 private:
  long merge_field(const Quad& o) const;
  void normalize();

  Rational a_;
  Rational b_;
  long d_ = 0;
};

Quad min(const Quad& x, const Quad& y);
Quad max(const Quad& x, const Quad& y);
Quad pow(const Quad& x, unsigned k);

// Square-free kernel: n = s^2 * k, returns {s, k}.
std::pair<long, long> SquareFreeSplit(long n);

// Canonical p/q.
inline Rational Frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string RationalString(const Rational& q);
Rational ParseRational(std::string_view text);

}  // namespace cobound

#endif  // COBOUND_QUAD_H_
