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

// Resonant three-level master equation for the readout stage, writing-stage
// dark state, grating-phase Fourier analysis and f_r/g_r reconstruction.

#include "lambda_fwm/model.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace lfwm {

// Rotating-frame drive Hamiltonian, all fields resonant:
//   H = -(Omega_R e^{i phi_R}/2)|e><2| - (Omega_R' e^{i phi_R'}/2)|e><1| + h.c.
template <typename Scalar = double>
DensityMatrix<Scalar> readout_hamiltonian(Scalar omega_r, Scalar phase_r, Scalar omega_rp, Scalar phase_rp) {
  DensityMatrix<Scalar> h = DensityMatrix<Scalar>::Zero();
  h(kExcited, kGround2) = -Scalar(0.5) * omega_r * std::polar(Scalar(1), phase_r);
  h(kExcited, kGround1) = -Scalar(0.5) * omega_rp * std::polar(Scalar(1), phase_rp);
  h(kGround2, kExcited) = std::conj(h(kExcited, kGround2));
  h(kGround1, kExcited) = std::conj(h(kExcited, kGround1));
  return h;
}

// Right-hand side of d(rho)/dt = -i[H, rho] + L(rho) with radiative decay of
// |e> at gamma_e (branching into |1>, |2>) and ground dephasing in Lindblad
// form, jump operator sqrt(gamma_g / 2) (|1><1| - |2><2|): the ground
// coherence decays at gamma_g, optical coherences pick up gamma_g / 4.
template <typename Scalar = double>
struct LambdaGenerator {
  DensityMatrix<Scalar> hamiltonian = DensityMatrix<Scalar>::Zero();
  Scalar gamma_e = 1;
  Scalar branch_1 = Scalar(0.5);
  Scalar branch_2 = Scalar(0.5);
  Scalar gamma_g = 0;

  DensityMatrix<Scalar> operator()(const DensityMatrix<Scalar>& rho) const {
    using C = std::complex<Scalar>;
    DensityMatrix<Scalar> d = C(0, -1) * (hamiltonian * rho - rho * hamiltonian);
    const C ree = rho(kExcited, kExcited);
    d(kExcited, kExcited) -= gamma_e * ree;
    d(kGround1, kGround1) += gamma_e * branch_1 * ree;
    d(kGround2, kGround2) += gamma_e * branch_2 * ree;
    const Scalar half = Scalar(0.5) * gamma_e + Scalar(0.25) * gamma_g;
    for (Eigen::Index g : {Eigen::Index(kGround1), Eigen::Index(kGround2)}) {
      d(g, kExcited) -= half * rho(g, kExcited);
      d(kExcited, g) -= half * rho(kExcited, g);
    }
    d(kGround1, kGround2) -= gamma_g * rho(kGround1, kGround2);
    d(kGround2, kGround1) -= gamma_g * rho(kGround2, kGround1);
    return d;
  }
};

template <typename Generator, typename State>
State rk4_step(const Generator& f, const State& y, double dt) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * dt) * k1));
  const State k3 = f(State(y + (0.5 * dt) * k2));
  const State k4 = f(State(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

LambdaGenerator<double> make_generator(const ReadoutDrive& drive, const LambdaParams& params);

// Writing-stage coherent-population-trapping state
// (Omega_W'|1> - Omega_W|2>)/N, with W on |1> <-> |e> and W' on |2> <-> |e>.
DensityMatrix3 dark_state(Complex omega_w, Complex omega_wp);

// Density matrix holding the grating before storage decay:
// rho_11 = pop_1, rho_22 = pop_2, rho_12 = amplitude * exp(-i phase_g).
DensityMatrix3 grating_state(const StoredGrating& grating);

// Grating read off a prepared state, with an additional spatial phase.
StoredGrating grating_from_state(const DensityMatrix3& rho, double phase_g, double t_s);

// Dark storage interval: ground coherence decays as exp(-gamma_g t_s); any
// excited population has relaxed into the grounds by branching.
DensityMatrix3 apply_storage(const DensityMatrix3& rho, double t_s, const LambdaParams& params);

// grating_state followed by apply_storage(grating.t_s).
DensityMatrix3 readout_initial_state(const StoredGrating& grating, const LambdaParams& params);

// Largest step accepted by evolve_readout, and the design step.
double max_readout_step(const ReadoutDrive& drive, const LambdaParams& params);
double default_readout_step(const ReadoutDrive& drive, const LambdaParams& params);

struct ReadoutSolution {
  TimeGrid grid;
  std::vector<DensityMatrix3> rho_t;  // empty unless states were kept
  ComplexTrace sigma_e1;              // <1|rho|e>
  ComplexTrace sigma_e2;              // <2|rho|e>
  double max_trace_drift = 0.0;
};

struct EvolveOptions {
  bool keep_states = true;
};

// Fixed-step RK4 with one step per grid interval.
ReadoutSolution evolve_readout(const DensityMatrix3& rho0, const ReadoutDrive& drive, const LambdaParams& params,
                               const TimeGrid& grid, const EvolveOptions& options = {});

enum class Coherence { kSigma1e, kSigma2e };

// 2-D Fourier coefficient traces c_{m,n}(t) of the optical coherences over
// grating phase phi_g and drive phase difference Delta = phi_R' - phi_R:
//   sigma(t; phi_g, Delta) = sum_{m,n} c_{m,n}(t) exp(i(m phi_g + n Delta)).
// Orders run over [-n_phi/2, n_phi - n_phi/2 - 1] in each index.
class PhaseComponents {
 public:
  PhaseComponents(int n_phi, TimeGrid grid);

  int n_phi() const { return n_phi_; }
  int min_order() const { return -(n_phi_ / 2); }
  int max_order() const { return n_phi_ - n_phi_ / 2 - 1; }
  const TimeGrid& grid() const { return grid_; }

  const ComplexTrace& component(Coherence c, int m, int n) const;
  ComplexTrace& component(Coherence c, int m, int n);

  // Phase-matched delayed FWM, e^{-i(k_R + k_W - k_W').r}.
  const ComplexTrace& fwm() const { return component(Coherence::kSigma1e, -1, 0); }
  // Phase-matched delayed SWM, e^{-i(2k_R - k_R' + k_W - k_W').r}.
  const ComplexTrace& swm() const { return component(Coherence::kSigma2e, -1, 1); }
  // Stimulated emission along R (on <2|rho|e>) and R' (on <1|rho|e>).
  const ComplexTrace& stimulated_r() const { return component(Coherence::kSigma2e, 0, 0); }
  const ComplexTrace& stimulated_rp() const { return component(Coherence::kSigma1e, 0, -1); }

  // Trigonometric interpolant at arbitrary phases, sample i.
  Complex reconstruct(Coherence c, std::size_t i, double phase_g, double delta) const;

  double reconstruction_residual = 0.0;  // at the sampled phases
  double aliasing_residual = 0.0;        // at an off-grid validation phase

 private:
  std::size_t slot(Coherence c, int m, int n) const;

  int n_phi_;
  TimeGrid grid_;
  std::vector<ComplexTrace> traces_;
};

struct PhaseOptions {
  unsigned threads = 1;
  double aliasing_tolerance = 1e-10;
};

// Runs n_phi x n_phi readouts over phi_g = 2 pi j / n_phi and
// Delta = 2 pi l / n_phi, with phi_R = drive_template.phase_r as reference.
PhaseComponents extract_phase_components(const ReadoutDrive& drive_template, const StoredGrating& grating_template,
                                         const LambdaParams& params, const TimeGrid& grid, int n_phi = 8,
                                         const PhaseOptions& options = {});

struct FgFunctions {
  double i_t = 0.0;
  ComplexTrace f_r;
  ComplexTrace g_r;
};

struct FgOptions {
  std::array<double, 2> split_fractions{0.75, 0.25};  // I_R / I_t of the two runs
  int n_phi = 8;
  unsigned threads = 1;
};

// Reconstructs f_r(t), g_r(t) from the FWM component at two intensity splits
// of the same I_t: fwm = (|Omega_R| / I_t) [f_r I_R + g_r I_R'] for a unit
// stored coherence and t_s = 0. The readout runs without ground dephasing,
// which is the regime where f_r, g_r depend on I_t and Gamma only.
FgFunctions extract_fg(double i_t, const LambdaParams& params, const TimeGrid& grid, const FgOptions& options = {});

}  // namespace lfwm
