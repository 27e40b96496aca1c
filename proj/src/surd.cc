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

#include "cobound/surd.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "cobound/real.h"

namespace cobound {

namespace {

const std::pair<Rational, Rational>& CachedRoot(long k, unsigned digits) {
  static std::mutex mu;
  static std::map<std::pair<long, unsigned>, std::pair<Rational, Rational>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, digits);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, SqrtBracket(Rational(k), digits)).first;
  return it->second;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Surd parse() {
    Surd v = expr();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  bool at(const std::string& tok) {
    skip();
    return s_.compare(pos_, tok.size(), tok) == 0;
  }
  [[noreturn]] void fail() const { throw std::invalid_argument("cannot parse surd '" + s_ + "'"); }

  Surd expr() {
    Surd v = term();
    for (;;) {
      if (eat("+")) {
        v += term();
      } else if (eat("-")) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Surd term() {
    Surd v = factor();
    for (;;) {
      if (eat("*")) {
        v *= factor();
      } else if (eat("/")) {
        Surd d = factor();
        if (!d.is_rational() || d.is_zero()) fail();
        v = v / d.rational_part();
      } else if (at("\xE2\x88\x9A") || at("sqrt") || at("(")) {
        v *= factor();
      } else {
        return v;
      }
    }
  }

  Surd root_of(const Surd& inner) {
    if (!inner.is_rational() || inner.sign() < 0) fail();
    Rational r = inner.rational_part();
    // sqrt(p/q) = sqrt(p q) / q.
    Integer pq = r.get_num() * r.get_den();
    if (!pq.fits_slong_p()) fail();
    return Surd::Root(Rational(1) / Rational(r.get_den()), pq.get_si());
  }

  Surd factor() {
    if (eat("-")) return -factor();
    if (eat("(")) {
      Surd v = expr();
      if (!eat(")")) fail();
      return v;
    }
    if (eat("\xE2\x88\x9A") || eat("sqrt")) {
      if (eat("(")) {
        Surd v = expr();
        if (!eat(")")) fail();
        return root_of(v);
      }
      return root_of(number());
    }
    return number();
  }

  Surd number() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (start == pos_) fail();
    return Surd(ParseRational(s_.substr(start, pos_ - start)));
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

Surd::Surd(const Rational& r) {
  if (r != 0) {
    Rational c = r;
    c.canonicalize();
    terms_.push_back({1, c});
  }
}

Surd::Surd(const Quad& q) : Surd(q.a()) {
  if (!q.is_rational()) add_term(q.d(), q.b());
}

Surd Surd::Root(const Rational& c, long n) {
  if (n < 0) throw std::domain_error("square root of a negative number");
  Surd s;
  if (n == 0 || c == 0) return s;
  auto [sq, k] = SquareFreeSplit(n);
  s.add_term(k, c * sq);
  return s;
}

Surd Surd::Parse(const std::string& text) { return Parser(text).parse(); }

void Surd::add_term(long k, const Rational& c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const auto& t, long v) { return t.first < v; });
  if (it != terms_.end() && it->first == k) {
    it->second += c;
    it->second.canonicalize();
    if (it->second == 0) terms_.erase(it);
  } else {
    Rational cc = c;
    cc.canonicalize();
    terms_.insert(it, {k, cc});
  }
}

Rational Surd::coefficient(long k) const {
  for (const auto& [kk, c] : terms_) {
    if (kk == k) return c;
  }
  return 0;
}

Rational Surd::rational_part() const { return coefficient(1); }

bool Surd::is_quad() const {
  size_t radicals = 0;
  for (const auto& t : terms_) radicals += t.first != 1;
  return radicals <= 1;
}

Quad Surd::to_quad() const {
  if (!is_quad()) throw FieldMismatch("surd " + str() + " is not in a single quadratic field");
  Quad q(rational_part());
  for (const auto& [k, c] : terms_) {
    if (k != 1) q += Quad(Rational(0), c, k);
  }
  return q;
}

std::pair<Rational, Rational> Surd::bracket(unsigned digits) const {
  Rational lo = 0, hi = 0;
  for (const auto& [k, c] : terms_) {
    if (k == 1) {
      lo += c;
      hi += c;
      continue;
    }
    const auto& [rl, rh] = CachedRoot(k, digits);
    if (c > 0) {
      lo += c * rl;
      hi += c * rh;
    } else {
      lo += c * rh;
      hi += c * rl;
    }
  }
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

int Surd::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return sgn(terms_[0].second);
  // Square roots of distinct square-free integers are linearly independent
  // over Q, so a nonzero coefficient vector means a nonzero value and the
  // refinement terminates.
  for (unsigned digits = 24;; digits *= 2) {
    auto [lo, hi] = bracket(digits);
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
}

double Surd::to_double() const {
  double v = 0;
  for (const auto& [k, c] : terms_) v += c.get_d() * std::sqrt(static_cast<double>(k));
  return v;
}

std::string Surd::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, c] : terms_) {
    Rational m = c;
    bool neg = m < 0;
    if (neg) m = -m;
    std::string piece;
    if (k == 1) {
      piece = RationalString(m);
    } else {
      std::string root = "\xE2\x88\x9A" + std::to_string(k);
      if (m == 1) {
        piece = root;
      } else if (m.get_den() == 1) {
        piece = m.get_num().get_str() + root;
      } else if (m.get_num() == 1) {
        piece = root + "/" + m.get_den().get_str();
      } else {
        piece = m.get_num().get_str() + root + "/" + m.get_den().get_str();
      }
    }
    if (out.empty()) {
      out = neg ? "-" + piece : piece;
    } else {
      out += neg ? "-" + piece : "+" + piece;
    }
  }
  return out;
}

Surd Surd::operator-() const {
  Surd s = *this;
  for (auto& t : s.terms_) t.second = -t.second;
  return s;
}

Surd& Surd::operator+=(const Surd& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

Surd& Surd::operator*=(const Surd& o) {
  Surd out;
  for (const auto& [k1, c1] : terms_) {
    for (const auto& [k2, c2] : o.terms_) {
      long g = std::gcd(k1, k2);
      // sqrt(k1) sqrt(k2) = g sqrt(k1 k2 / g^2), and k1 k2 / g^2 is square-free.
      out.add_term((k1 / g) * (k2 / g), c1 * c2 * g);
    }
  }
  *this = std::move(out);
  return *this;
}

Surd operator/(Surd a, const Rational& r) {
  if (r == 0) throw std::domain_error("division by zero");
  for (auto& t : a.terms_) {
    t.second /= r;
    t.second.canonicalize();
  }
  return a;
}

std::strong_ordering operator<=>(const Surd& a, const Surd& b) {
  int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::vector<std::vector<Rational>> RationalKernel(const std::vector<Surd>& xs) {
  std::vector<long> basis;
  for (const auto& x : xs) {
    for (const auto& t : x.terms()) basis.push_back(t.first);
  }
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  const size_t n = xs.size(), m = basis.size();
  // Columns are the xs; find a kernel vector by Gauss-Jordan elimination.
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = 0; i < m; ++i) a[i][j] = xs[j].coefficient(basis[i]);
  }
  std::vector<long> pivot_col;
  size_t row = 0;
  std::vector<bool> is_pivot(n, false);
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t p = row;
    while (p < m && a[p][col] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (size_t i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (size_t j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(static_cast<long>(col));
    is_pivot[col] = true;
    ++row;
  }
  std::vector<std::vector<Rational>> kernel;
  for (size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> r(n, Rational(0));
    r[free] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) r[pivot_col[i]] = -a[i][free];
    for (auto& v : r) v.canonicalize();
    kernel.push_back(std::move(r));
  }
  return kernel;
}

std::vector<Rational> RationalRelation(const std::vector<Surd>& xs) {
  auto k = RationalKernel(xs);
  return k.empty() ? std::vector<Rational>{} : k.front();
}

}  // namespace cobound
