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

// Shared types of the three-level Lambda model.
//
// Internal units: the excited-state decay rate Gamma is 1, times are in 1/Gamma,
// intensities are in units of the saturation intensity I_s. Basis ordering is
// {|1>, |2>, |e>}: two Zeeman ground states and one excited state.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace lfwm {

using Complex = std::complex<double>;

template <typename Scalar = double>
using DensityMatrix = Eigen::Matrix<std::complex<Scalar>, 3, 3>;
using DensityMatrix3 = DensityMatrix<double>;

enum Level : Eigen::Index { kGround1 = 0, kGround2 = 1, kExcited = 2 };

// Intensity <-> Rabi rule. Only one is supported: I/I_s = 2 Omega^2 / Gamma^2,
// so I = I_s corresponds to Omega = Gamma/sqrt(2).
enum class SaturationConvention { kTwoOmegaSquared };

struct LambdaParams {
  double gamma_e = 1.0;    // excited-state decay, defines the unit
  double gamma_g = 0.002;  // ground-coherence dephasing, in Gamma
  double branch_1 = 0.5;   // fraction of Gamma decaying into |1>
  double branch_2 = 0.5;
  SaturationConvention i_sat_convention = SaturationConvention::kTwoOmegaSquared;

  void validate() const;

  // Same parameters with the ground dephasing switched off.
  LambdaParams without_dephasing() const {
    LambdaParams p = *this;
    p.gamma_g = 0.0;
    return p;
  }
};

// Readout intensities in I_s and drive phases (k_R.r, k_R'.r at the atom).
// R drives |2> <-> |e>, R' drives |1> <-> |e>.
struct ReadoutDrive {
  double i_r = 0.0;
  double i_rp = 0.0;
  double phase_r = 0.0;
  double phase_rp = 0.0;

  double i_t() const { return i_r + i_rp; }
  double omega_r() const;
  double omega_rp() const;
  void validate() const;

  static ReadoutDrive split(double i_t, double fraction_r);
};

// Ground coherence left behind by the writing stage. The coherence enters the
// readout as <1|rho|2> = amplitude * exp(-i phase_g) * exp(-gamma t_s).
struct StoredGrating {
  Complex amplitude{0.5, 0.0};
  double phase_g = 0.0;
  double t_s = 0.0;
  double pop_1 = 0.5;
  double pop_2 = 0.5;

  void validate() const;
};

struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.005;
  std::size_t size = 0;

  double at(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  double t_end() const { return size == 0 ? t0 : at(size - 1); }
  void validate() const;

  // Grid [0, t_max] with step dt (t_max rounded up to a whole step).
  static TimeGrid span(double t_max, double dt);
};

template <typename Vector>
struct UniformTrace {
  double t0 = 0.0;
  double dt = 1.0;
  Vector values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  TimeGrid grid() const { return {t0, dt, size()}; }
  void validate() const;
};

using ComplexTrace = UniformTrace<Eigen::VectorXcd>;
using RealTrace = UniformTrace<Eigen::VectorXd>;

double intensity_to_rabi(double intensity);
double rabi_to_intensity(double rabi);

struct StateReport {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool pass = false;
};

struct StateTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-9;
  double eigenvalue = 1e-9;
};

StateReport validate_state(const DensityMatrix3& rho, const StateTolerance& tol = {});

inline double purity(const DensityMatrix3& rho) { return (rho * rho).trace().real(); }

}  // namespace lfwm
