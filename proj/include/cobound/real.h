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

#ifndef COBOUND_REAL_H_
#define COBOUND_REAL_H_

#include <boost/multiprecision/mpfr.hpp>
#include <string>

#include "cobound/quad.h"

namespace cobound {

using Real = boost::multiprecision::mpfr_float;

// Working precision in decimal digits; COCYCLE_PRECISION overrides the default 50.
unsigned PrecisionDigits();
// Applies PrecisionDigits() to Real's thread default. Idempotent.
void InitPrecision();

Real ToReal(const Rational& q);
Real ToReal(const Quad& x);
std::string RealString(const Real& x, int digits = 30);

// Rational bracket lo <= sqrt(n) <= hi with hi - lo <= 10^-digits.
std::pair<Rational, Rational> SqrtBracket(const Rational& n, unsigned digits);
// Rational bracket around a Quad (exact when rational).
std::pair<Rational, Rational> Bracket(const Quad& x, unsigned digits);

}  // namespace cobound

#endif  // COBOUND_REAL_H_
