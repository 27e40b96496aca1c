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

#include "cobound/real.h"

#include <cstdlib>
#include <sstream>

namespace cobound {

unsigned PrecisionDigits() {
  static const unsigned digits = [] {
    const char* env = std::getenv("COCYCLE_PRECISION");
    if (env == nullptr) return 50u;
    long v = std::strtol(env, nullptr, 10);
    return v >= 20 && v <= 10000 ? static_cast<unsigned>(v) : 50u;
  }();
  return digits;
}

void InitPrecision() {
  if (Real::default_precision() != PrecisionDigits()) {
    Real::default_precision(PrecisionDigits());
  }
}

Real ToReal(const Rational& q) {
  InitPrecision();
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real ToReal(const Quad& x) {
  Real r = ToReal(x.a());
  if (!x.is_rational()) r += ToReal(x.b()) * boost::multiprecision::sqrt(Real(x.d()));
  return r;
}

std::string RealString(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::pair<Rational, Rational> SqrtBracket(const Rational& n, unsigned digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  // floor(sqrt(n * scale^2)) computed on num*den to keep integers.
  Integer num = n.get_num() * n.get_den() * scale * scale;
  Integer root;
  mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
  Rational den(n.get_den() * scale);
  Rational lo(root, 1);
  lo /= den;
  Rational hi(root + 1, 1);
  hi /= den;
  return {lo, hi};
}

std::pair<Rational, Rational> Bracket(const Quad& x, unsigned digits) {
  if (x.is_rational()) return {x.a(), x.a()};
  auto [lo, hi] = SqrtBracket(Rational(x.d()), digits + 2);
  if (x.b() > 0) return {x.a() + x.b() * lo, x.a() + x.b() * hi};
  return {x.a() + x.b() * hi, x.a() + x.b() * lo};
}

}  // namespace cobound
