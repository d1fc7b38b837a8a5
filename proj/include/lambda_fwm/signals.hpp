// Copyright 2026 The lambda-fwm Authors
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

#pragma once

#include "lambda_fwm/bloch.hpp"
#include "lambda_fwm/model.hpp"

#include <cstddef>

namespace lfwm {

struct PulsePair {
  RealTrace fwm;
  RealTrace swm;
  bool convolved = false;
  double tau = 0.0;  // detector response time, 1/Gamma
};

struct EnergyPair {
  double u_fwm = 0.0;
  double u_swm = 0.0;
  double quadrature_error = 0.0;
  // Number of leading samples that entered each integral.
  std::size_t support_fwm = 0;
  std::size_t support_swm = 0;
};

// Slowly varying FWM amplitude
//   |Omega_R| |A| exp(-gamma t_s) / (I_t Gamma) * [f_r I_R + g_r I_R'].
ComplexTrace fwm_coherence(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                           const LambdaParams& params);

// Slowly varying SWM amplitude
//   I_R |Omega_R'| |A| exp(-gamma t_s) / (I_t Gamma) * [f_r - g_r].
ComplexTrace swm_coherence(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                           const LambdaParams& params);

RealTrace pulse_intensity(const ComplexTrace& coherence);

// Causal single-pole detector, h(t) = exp(-t/tau)/tau sampled on the trace
// grid with weights normalised to unit DC gain. tau = 0 is the identity.
RealTrace detector_convolve(const RealTrace& intensity, double tau);

// Retrieved energies
//   U_FWM = |A|^2 e^{-2 gamma t_s} (I_R / I_t^2) int |f_r I_R + g_r I_R'|^2 dt
//   U_SWM = |A|^2 e^{-2 gamma t_s} (I_R' I_R^2 / I_t^2) int |f_r - g_r|^2 dt
// by the trapezoid rule on the f/g grid, truncated once the integrand stays
// below 1e-8 of its running peak for 100 consecutive samples.
EnergyPair retrieved_energies(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                              const LambdaParams& params);

// Trapezoid rule over the first `count` samples.
double trapezoid(const RealTrace& trace, std::size_t count);

}  // namespace lfwm
