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

#include "lambda_fwm/model.hpp"

#include "lambda_fwm/errors.hpp"

#include <cmath>
#include <string>

namespace lfwm {

void LambdaParams::validate() const {
  if (!(gamma_e > 0.0)) throw DomainError("gamma_e must be positive");
  if (!(gamma_g >= 0.0)) throw DomainError("gamma_g must be nonnegative");
  if (!(gamma_g < gamma_e)) throw DomainError("gamma_g must be smaller than gamma_e");
  if (!(branch_1 >= 0.0 && branch_1 <= 1.0 && branch_2 >= 0.0 && branch_2 <= 1.0))
    throw DomainError("branching fractions must lie in [0, 1]");
  if (std::abs(branch_1 + branch_2 - 1.0) > 1e-12)
    throw DomainError("branching fractions must sum to 1");
}

double ReadoutDrive::omega_r() const { return intensity_to_rabi(i_r); }
double ReadoutDrive::omega_rp() const { return intensity_to_rabi(i_rp); }

void ReadoutDrive::validate() const {
  if (!(i_r >= 0.0) || !(i_rp >= 0.0)) throw DomainError("readout intensities must be nonnegative");
  if (!std::isfinite(phase_r) || !std::isfinite(phase_rp)) throw DomainError("drive phases must be finite");
}

ReadoutDrive ReadoutDrive::split(double i_t, double fraction_r) {
  if (!(i_t >= 0.0)) throw DomainError("total intensity must be nonnegative");
  if (!(fraction_r >= 0.0 && fraction_r <= 1.0)) throw DomainError("split fraction must lie in [0, 1]");
  ReadoutDrive d;
  d.i_r = fraction_r * i_t;
  // Exact complement so that i_r + i_rp reproduces i_t at the endpoints.
  d.i_rp = fraction_r == 1.0 ? 0.0 : i_t - d.i_r;
  return d;
}

void StoredGrating::validate() const {
  if (!(t_s >= 0.0)) throw DomainError("storage time must be nonnegative");
  if (!(pop_1 >= 0.0 && pop_2 >= 0.0)) throw DomainError("ground populations must be nonnegative");
  if (std::abs(pop_1 + pop_2 - 1.0) > 1e-12) throw DomainError("ground populations must sum to 1");
  if (std::abs(amplitude) > std::sqrt(pop_1 * pop_2) + 1e-12)
    throw DomainError("grating amplitude exceeds sqrt(pop_1 * pop_2)");
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
  if (size == 0) throw DomainError("time grid is empty");
}

TimeGrid TimeGrid::span(double t_max, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(t_max >= 0.0)) throw DomainError("grid length must be nonnegative");
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  return {0.0, dt, steps + 1};
}

template <typename Vector>
void UniformTrace<Vector>::validate() const {
  if (!(dt > 0.0)) throw DomainError("trace step must be positive");
  if (values.size() == 0) throw DomainError("trace is empty");
}

template struct UniformTrace<Eigen::VectorXcd>;
template struct UniformTrace<Eigen::VectorXd>;

double intensity_to_rabi(double intensity) {
  if (!(intensity >= 0.0)) throw DomainError("intensity must be nonnegative, got " + std::to_string(intensity));
  return std::sqrt(intensity / 2.0);
}

double rabi_to_intensity(double rabi) { return 2.0 * rabi * rabi; }

StateReport validate_state(const DensityMatrix3& rho, const StateTolerance& tol) {
  StateReport r;
  r.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_defect = std::abs(rho.trace() - Complex(1.0, 0.0));
  const DensityMatrix3 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix3> es(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.pass = r.hermiticity_defect <= tol.hermiticity && r.trace_defect <= tol.trace &&
           r.min_eigenvalue >= -tol.eigenvalue && rho.allFinite();
  return r;
}

}  // namespace lfwm
