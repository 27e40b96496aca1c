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

#ifndef COBOUND_FOURIER_H_
#define COBOUND_FOURIER_H_

#include <complex>
#include <map>
#include <optional>
#include <string>

#include "cobound/interval_map.h"
#include "cobound/real.h"

namespace cobound {

struct Complex {
  Real re;
  Real im;
  Real abs() const;
};

// Finitely many coefficients c(n) of sum c(n) e^{2 pi i n x}.
struct FourierProfile {
  std::map<long, Complex> coeff;
  long band = 0;

  Complex evaluate(const Real& x) const;
  bool conjugate_symmetric(const Real& tol) const;
  long degree() const;
};

// e^{2 pi i t}.
Complex Expi(const Real& t);

struct FourierTransfer {
  FourierProfile h;
  std::optional<Real> tail_bound;  // empty means not estimable
};

FourierTransfer RotationTransferFourier(const FourierProfile& f, const Quad& alpha, long band);

// max_x |f(x) - (h(x) - h(x + alpha))| over midpoints of `samples` bins.
Real FourierResidual(const FourierProfile& f, const FourierProfile& h, const Quad& alpha, long samples,
                     Real* witness = nullptr);

struct EigenvalueReport {
  Quad c;              // sum m_k p(E_k)
  bool c_rational = false;
  Complex eigenvalue;  // e^{2 pi i c}
  Real modulus_error;  // | |eigenvalue| - 1 |
  Real max_residual;   // max |H(t x) - e^{2 pi i c} H(x)|
  Quad witness;
  bool passed = false;
};

// F integer-valued; h a transfer for F - integral(F) under t.
EigenvalueReport EigenvalueWitness(const StepFunction& F, const IntervalMap& t, const StepFunction& h,
                                   long samples, const Real& tol);

}  // namespace cobound

#endif  // COBOUND_FOURIER_H_
