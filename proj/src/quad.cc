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

#include "cobound/quad.h"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cobound {

std::pair<long, long> SquareFreeSplit(long n) {
  if (n <= 0) throw std::invalid_argument("radicand must be positive");
  long s = 1, k = 1;
  for (long p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      s *= p;
    }
    if (n % p == 0) {
      n /= p;
      k *= p;
    }
  }
  k *= n;
  return {s, k};
}

Quad::Quad(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (b_ != 0) {
    auto [s, k] = SquareFreeSplit(d);
    b_ *= s;
    d_ = k;
  }
  normalize();
}

void Quad::normalize() {
  if (b_ != 0 && d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (b_ == 0) d_ = 0;
}

Quad Quad::Sqrt(long n) { return Quad(0, 1, n); }

long Quad::merge_field(const Quad& o) const {
  if (b_ == 0) return o.d_;
  if (o.b_ == 0) return d_;
  if (d_ != o.d_) {
    throw FieldMismatch("mixed quadratic fields Q(sqrt " + std::to_string(d_) +
                        ") and Q(sqrt " + std::to_string(o.d_) + ")");
  }
  return d_;
}

int Quad::sign() const {
  int sa = sgn(a_), sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa >= 0 && sb > 0) return 1;
  if (sa <= 0 && sb < 0) return -1;
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * d_;
  return lhs > rhs ? sa : sb;
}

Quad Quad::conj() const {
  Quad r = *this;
  r.b_ = -r.b_;
  return r;
}

Rational Quad::norm() const { return a_ * a_ - b_ * b_ * d_; }

Integer Quad::floor() const {
  if (b_ == 0) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
    return q;
  }
  Integer k(std::floor(to_double()));
  while (Quad(Rational(k)) > *this) k -= 1;
  while (Quad(Rational(k + 1)) <= *this) k += 1;
  return k;
}

Integer Quad::ceil() const {
  Integer f = floor();
  if (Quad(Rational(f)) == *this) return f;
  return f + 1;
}

Rational Quad::rational() const {
  if (b_ != 0) throw std::domain_error("value is irrational: " + str());
  return a_;
}

double Quad::to_double() const {
  double v = a_.get_d();
  if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
  return v;
}

std::string RationalString(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string Quad::str() const {
  if (b_ == 0) return RationalString(a_);
  std::string rad = "sqrt(" + std::to_string(d_) + ")";
  std::string out;
  if (a_ != 0) out = RationalString(a_);
  Rational mag = ::abs(b_);
  std::string coef = mag == 1 ? "" : RationalString(mag) + "*";
  if (b_ < 0) {
    out += "-";
  } else if (a_ != 0) {
    out += "+";
  }
  return out + coef + rad;
}

Quad Quad::operator-() const {
  Quad r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Quad& Quad::operator+=(const Quad& o) {
  d_ = merge_field(o);
  a_ += o.a_;
  b_ += o.b_;
  normalize();
  return *this;
}

Quad& Quad::operator-=(const Quad& o) {
  d_ = merge_field(o);
  a_ -= o.a_;
  b_ -= o.b_;
  normalize();
  return *this;
}

Quad& Quad::operator*=(const Quad& o) {
  long d = merge_field(o);
  if (o.b_ == 0) {
    a_ *= o.a_;
    b_ *= o.a_;
  } else if (b_ == 0) {
    b_ = a_ * o.b_;
    a_ *= o.a_;
  } else {
    Rational na = a_ * o.a_ + b_ * o.b_ * d;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = na;
    b_ = nb;
  }
  d_ = d;
  normalize();
  return *this;
}

Quad& Quad::operator/=(const Quad& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (o.b_ == 0) {
    a_ /= o.a_;
    b_ /= o.a_;
    normalize();
    return *this;
  }
  Rational n = o.norm();
  *this *= o.conj();
  a_ /= n;
  b_ /= n;
  normalize();
  return *this;
}

bool operator==(const Quad& x, const Quad& y) {
  return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
}

std::strong_ordering operator<=>(const Quad& x, const Quad& y) {
  if (x.b_ == 0 && y.b_ == 0) {
    int c = cmp(x.a_, y.a_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  int s = (x - y).sign();
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Quad min(const Quad& x, const Quad& y) { return y < x ? y : x; }
Quad max(const Quad& x, const Quad& y) { return x < y ? y : x; }

Quad pow(const Quad& x, unsigned k) {
  Quad r(1), base = x;
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

Rational ParseRational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (dot != std::string::npos && slash == std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg) whole = whole.substr(1);
    Integer den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Integer num((whole.empty() ? "0" : whole) + frac, 10);
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

namespace {

// Recursive-descent reader over + - * / ( ) sqrt(n) and the UTF-8 radical sign.
class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Quad Expr() {
    Quad v = Term();
    for (;;) {
      Skip();
      if (Eat('+')) {
        v += Term();
      } else if (Eat('-')) {
        v -= Term();
      } else {
        return v;
      }
    }
  }

  void Finish() {
    Skip();
    if (pos_ != s_.size()) Fail("trailing characters");
  }

 private:
  Quad Term() {
    Quad v = Unary();
    for (;;) {
      Skip();
      if (Eat('*')) {
        v *= Unary();
      } else if (Eat('/')) {
        v /= Unary();
      } else if (AtRadical() || Peek() == '(') {
        v *= Unary();
      } else {
        return v;
      }
    }
  }

  Quad Unary() {
    Skip();
    if (Eat('-')) return -Unary();
    if (Eat('+')) return Unary();
    return Atom();
  }

  Quad Atom() {
    Skip();
    if (Eat('(')) {
      Quad v = Expr();
      Skip();
      if (!Eat(')')) Fail("expected ')'");
      return v;
    }
    if (AtRadical()) {
      if (s_.substr(pos_, 4) == "sqrt") {
        pos_ += 4;
      } else {
        pos_ += 3;
      }
      Skip();
      bool paren = Eat('(');
      Quad r = paren ? Expr() : Atom();
      if (paren) {
        Skip();
        if (!Eat(')')) Fail("expected ')'");
      }
      Rational q = r.rational();
      if (q < 0) Fail("negative radicand");
      // sqrt(p/q) = sqrt(p*q)/q
      Integer num = q.get_num() * q.get_den();
      if (!num.fits_slong_p()) Fail("radicand too large");
      return Quad(0, Rational(1, 1) / Rational(q.get_den()), num.get_si());
    }
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) Fail("expected number");
    return Quad(ParseRational(s_.substr(start, pos_ - start)));
  }

  bool AtRadical() const {
    return s_.substr(pos_, 4) == "sqrt" || s_.substr(pos_, 3) == "\xE2\x88\x9A";
  }
  char Peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool Eat(char c) {
    if (Peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void Skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void Fail(const std::string& why) const {
    throw std::invalid_argument("cannot parse number '" + std::string(s_) + "': " + why);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

Quad Quad::Parse(std::string_view text) {
  Reader r(text);
  Quad v = r.Expr();
  r.Finish();
  return v;
}

}  // namespace cobound
