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

#include "lambda_fwm/signals.hpp"

#include "lambda_fwm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lfwm {

namespace {

void check_consistent(const FgFunctions& fg, const ReadoutDrive& drive) {
  drive.validate();
  if (std::abs(fg.i_t - drive.i_t()) > 1e-9)
    throw DomainError("f/g were extracted at I_t = " + std::to_string(fg.i_t) + " but the drive has I_t = " +
                      std::to_string(drive.i_t()));
  if (fg.f_r.size() != fg.g_r.size()) throw DomainError("f_r and g_r are on different grids");
}

double storage_factor(const StoredGrating& grating, const LambdaParams& params) {
  if (!(grating.t_s >= 0.0)) throw DomainError("storage time must be nonnegative");
  return std::abs(grating.amplitude) * std::exp(-params.gamma_g * grating.t_s);
}

struct Truncated {
  double integral = 0.0;
  double error = 0.0;
  std::size_t support = 0;
};

Truncated integrate_truncated(const RealTrace& integrand) {
  constexpr double kRelativeFloor = 1e-8;
  constexpr std::size_t kQuietSamples = 100;
  constexpr double kTailTolerance = 1e-4;
  const auto n = integrand.size();
  double peak = 0.0;
  std::size_t quiet = 0;
  std::size_t support = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = integrand.values(static_cast<Eigen::Index>(i));
    peak = std::max(peak, v);
    if (peak > 0.0 && v < kRelativeFloor * peak) {
      if (++quiet == kQuietSamples) {
        support = i + 1;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  Truncated out;
  if (peak == 0.0) {
    out.support = n;
    return out;
  }
  if (support == n) {
    const double tail = integrand.values(static_cast<Eigen::Index>(n - 1)) / peak;
    if (tail > kTailTolerance)
      throw ConvergenceError("energy integrand has not decayed on the grid (tail " + std::to_string(tail) +
                             " of peak); extend the time grid");
  }
  out.support = support;
  out.integral = trapezoid(integrand, support);
  // Richardson estimate from the same rule at twice the step.
  if (support >= 5) {
    const std::size_t even = (support - 1) / 2 * 2 + 1;
    double coarse = 0.0;
    for (std::size_t i = 0; i + 2 < even; i += 2)
      coarse += integrand.values(static_cast<Eigen::Index>(i)) + integrand.values(static_cast<Eigen::Index>(i + 2));
    coarse *= integrand.dt;
    out.error = std::abs(trapezoid(integrand, even) - coarse) / 3.0;
  }
  return out;
}

}  // namespace

ComplexTrace fwm_coherence(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                           const LambdaParams& params) {
  check_consistent(fg, drive);
  const double pre = drive.omega_r() * storage_factor(grating, params) / (drive.i_t() * params.gamma_e);
  ComplexTrace out{fg.f_r.t0, fg.f_r.dt, Eigen::VectorXcd::Zero(fg.f_r.values.size())};
  if (pre == 0.0) return out;
  out.values = pre * (drive.i_r * fg.f_r.values + drive.i_rp * fg.g_r.values);
  return out;
}

ComplexTrace swm_coherence(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                           const LambdaParams& params) {
  check_consistent(fg, drive);
  const double pre = drive.i_r * drive.omega_rp() * storage_factor(grating, params) / (drive.i_t() * params.gamma_e);
  ComplexTrace out{fg.f_r.t0, fg.f_r.dt, Eigen::VectorXcd::Zero(fg.f_r.values.size())};
  if (pre == 0.0) return out;
  out.values = pre * (fg.f_r.values - fg.g_r.values);
  return out;
}

RealTrace pulse_intensity(const ComplexTrace& coherence) {
  return {coherence.t0, coherence.dt, coherence.values.cwiseAbs2()};
}

RealTrace detector_convolve(const RealTrace& intensity, double tau) {
  if (!(tau >= 0.0)) throw DomainError("detector response time must be nonnegative");
  intensity.validate();
  if (tau == 0.0) return intensity;
  // y_n = sum_k (1 - a) a^k x_{n-k} with a = exp(-dt/tau), evaluated recursively.
  const double a = std::exp(-intensity.dt / tau);
  RealTrace out{intensity.t0, intensity.dt, Eigen::VectorXd(intensity.values.size())};
  double acc = 0.0;
  for (Eigen::Index i = 0; i < intensity.values.size(); ++i) {
    acc = a * acc + (1.0 - a) * intensity.values(i);
    out.values(i) = acc;
  }
  return out;
}

double trapezoid(const RealTrace& trace, std::size_t count) {
  count = std::min(count, trace.size());
  if (count < 2) return 0.0;
  const auto n = static_cast<Eigen::Index>(count);
  const double inner = trace.values.segment(1, n - 2).sum();
  return trace.dt * (0.5 * (trace.values(0) + trace.values(n - 1)) + inner);
}

EnergyPair retrieved_energies(const FgFunctions& fg, const ReadoutDrive& drive, const StoredGrating& grating,
                              const LambdaParams& params) {
  check_consistent(fg, drive);
  const double it = drive.i_t();
  const double common = std::pow(storage_factor(grating, params), 2) / (it * it);
  const double pre_fwm = common * drive.i_r;
  const double pre_swm = common * drive.i_rp * drive.i_r * drive.i_r;

  EnergyPair e;
  if (pre_fwm > 0.0) {
    const RealTrace integrand{fg.f_r.t0, fg.f_r.dt,
                              (drive.i_r * fg.f_r.values + drive.i_rp * fg.g_r.values).cwiseAbs2()};
    const Truncated q = integrate_truncated(integrand);
    e.u_fwm = pre_fwm * q.integral;
    e.support_fwm = q.support;
    e.quadrature_error += pre_fwm * q.error;
  }
  if (pre_swm > 0.0) {
    const RealTrace integrand{fg.f_r.t0, fg.f_r.dt, (fg.f_r.values - fg.g_r.values).cwiseAbs2()};
    const Truncated q = integrate_truncated(integrand);
    e.u_swm = pre_swm * q.integral;
    e.support_swm = q.support;
    e.quadrature_error += pre_swm * q.error;
  }
  return e;
}

}  // namespace lfwm
