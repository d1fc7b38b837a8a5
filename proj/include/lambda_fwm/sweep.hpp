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

// Experiment drivers: intensity-split energy sweeps, pulse shapes with
// detector response, storage-time scans and low-intensity scaling probes.

#include "lambda_fwm/bloch.hpp"
#include "lambda_fwm/signals.hpp"

#include <string>
#include <vector>

namespace lfwm {

struct SweepRow {
  double control = 0.0;
  double u_fwm = 0.0;
  double u_swm = 0.0;
  double u_fwm_norm = 0.0;
  double u_swm_norm = 0.0;
};

struct SweepTable {
  std::string control_name;
  std::vector<SweepRow> rows;
  double u_max = 0.0;  // largest U_FWM in the table
};

// Readout grid and extraction settings shared by the drivers.
struct SimulationSettings {
  double t_max = 80.0;  // 1/Gamma
  double dt = 0.0;      // 0 selects the design step for the drive
  int n_phi = 8;
  unsigned threads = 1;

  TimeGrid grid_for(double i_t, const LambdaParams& params) const;
  FgOptions fg_options() const { return {.n_phi = n_phi, .threads = threads}; }
};

// f_r, g_r on the settings' grid.
FgFunctions compute_fg(double i_t, const LambdaParams& params, const SimulationSettings& settings);

// n evenly spaced I_R in [0, I_t] with I_R' = I_t - I_R, normalised by U_max.
SweepTable split_sweep(const FgFunctions& fg, int n, const LambdaParams& params, const StoredGrating& grating);
SweepTable split_sweep(double i_t, int n, const LambdaParams& params, const StoredGrating& grating,
                       const SimulationSettings& settings = {});

struct PulseShapes {
  PulsePair raw;
  PulsePair convolved;
  double peak_time_fwm_raw = 0.0;
  double peak_time_swm_raw = 0.0;
  double peak_time_fwm_conv = 0.0;
  double peak_time_swm_conv = 0.0;

  // Each pair divided by the larger of its two peaks.
  PulsePair raw_normalized() const;
  PulsePair convolved_normalized() const;
};

PulseShapes pulse_shapes(const FgFunctions& fg, const ReadoutDrive& drive, double tau, const LambdaParams& params,
                         const StoredGrating& grating);
PulseShapes pulse_shapes(double i_t, double i_r, double i_rp, double tau, const LambdaParams& params,
                         const StoredGrating& grating, const SimulationSettings& settings = {});

// Energies at each storage time (grating.t_s is replaced per row).
SweepTable storage_sweep(const std::vector<double>& storage_times, const FgFunctions& fg, const ReadoutDrive& drive,
                         const StoredGrating& grating, const LambdaParams& params);

struct ScalingRow {
  double lambda = 0.0;
  double abs_fwm = 0.0;
  double abs_swm = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double t_star = 0.0;
  double slope_fwm = 0.0;
  double slope_swm = 0.0;
  std::vector<double> local_slopes_fwm;
  std::vector<double> local_slopes_swm;
};

// Scales both readout Rabi frequencies by lambda and records the
// phase-extracted FWM/SWM magnitudes at t_star, with log-log slope fits.
ScalingTable scaling_probe(const std::vector<double>& lambdas, const ReadoutDrive& base, double t_star,
                           const LambdaParams& params, const StoredGrating& grating,
                           const SimulationSettings& settings = {});

// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Sample index of the maximum (first occurrence).
std::size_t peak_index(const RealTrace& trace);

}  // namespace lfwm
