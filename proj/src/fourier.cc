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

#include "cobound/fourier.h"

#include <boost/math/constants/constants.hpp>

#include "cobound/cocycle.h"
#include "cobound/diophantine.h"

namespace cobound {

namespace {

Real Pi() { return boost::math::constants::pi<Real>(); }

Complex Mul(const Complex& a, const Complex& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

Complex Div(const Complex& a, const Complex& b) {
  Real n = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

}  // namespace

Real Complex::abs() const { return boost::multiprecision::sqrt(re * re + im * im); }

Complex Expi(const Real& t) {
  Real th = 2 * Pi() * t;
  return {boost::multiprecision::cos(th), boost::multiprecision::sin(th)};
}

Complex FourierProfile::evaluate(const Real& x) const {
  Complex s{0, 0};
  for (const auto& [n, c] : coeff) {
    Complex e = Mul(c, Expi(x * n));
    s.re += e.re;
    s.im += e.im;
  }
  return s;
}

bool FourierProfile::conjugate_symmetric(const Real& tol) const {
  for (const auto& [n, c] : coeff) {
    auto it = coeff.find(-n);
    Complex m = it == coeff.end() ? Complex{0, 0} : it->second;
    if (boost::multiprecision::abs(c.re - m.re) > tol || boost::multiprecision::abs(c.im + m.im) > tol) return false;
  }
  return true;
}

long FourierProfile::degree() const {
  long d = 0;
  for (const auto& [n, c] : coeff) d = std::max(d, n < 0 ? -n : n);
  return d;
}

FourierTransfer RotationTransferFourier(const FourierProfile& f, const Quad& alpha, long band) {
  if (alpha.is_rational()) throw std::invalid_argument("rotation angle must be irrational");
  InitPrecision();
  FourierTransfer out;
  out.h.band = band;
  Real a = ToReal(alpha);
  Real tail = 0;
  for (const auto& [n, c] : f.coeff) {
    if (n == 0) {
      if (c.abs() > Real("1e-40")) throw std::invalid_argument("profile must have zero mean");
      continue;
    }
    if ((n < 0 ? -n : n) > band) {
      // |1 - e^{2 pi i t}| >= 4 ||t||.
      Quad dist = DistanceToInteger(Quad(n) * alpha);
      Rational lo = Bracket(dist, PrecisionDigits()).first;
      tail += c.abs() / (4 * ToReal(lo));
      continue;
    }
    Complex e = Expi(a * n);
    out.h.coeff[n] = Div(c, {1 - e.re, -e.im});
  }
  out.tail_bound = tail;
  return out;
}

Real FourierResidual(const FourierProfile& f, const FourierProfile& h, const Quad& alpha, long samples,
                     Real* witness) {
  InitPrecision();
  Real a = ToReal(alpha);
  Real worst = 0;
  for (long k = 0; k < samples; ++k) {
    Real x = Real(2 * k + 1) / Real(2 * samples);
    Complex fx = f.evaluate(x), hx = h.evaluate(x), hy = h.evaluate(x + a);
    Complex r{fx.re - hx.re + hy.re, fx.im - hx.im + hy.im};
    Real m = r.abs();
    if (m > worst) {
      worst = m;
      if (witness) *witness = x;
    }
  }
  return worst;
}

EigenvalueReport EigenvalueWitness(const StepFunction& F, const IntervalMap& t, const StepFunction& h,
                                   long samples, const Real& tol) {
  for (const auto& v : F.values()) {
    if (!v.is_rational() || v.rational().get_den() != 1) {
      throw std::invalid_argument("eigenvalue witness needs integer step values, got " + v.str());
    }
  }
  InitPrecision();
  EigenvalueReport rep;
  rep.c = F.integral();
  rep.c_rational = rep.c.is_rational();
  rep.eigenvalue = Expi(ToReal(rep.c));
  rep.modulus_error = boost::multiprecision::abs(rep.eigenvalue.abs() - 1);
  rep.max_residual = 0;
  for (const Quad& x : SampleGrid(samples)) {
    auto y = t.try_apply(x);
    if (!y) continue;
    Complex hx = Expi(ToReal(h.evaluate(x)));
    Complex hy = Expi(ToReal(h.evaluate(*y)));
    Complex rhs = Mul(rep.eigenvalue, hx);
    Real r = Complex{hy.re - rhs.re, hy.im - rhs.im}.abs();
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.witness = x;
    }
  }
  rep.passed = rep.max_residual < tol && rep.modulus_error < tol;
  return rep;
}

}  // namespace cobound
