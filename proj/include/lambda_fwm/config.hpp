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

// Run configuration for the command-line front end. Physical inputs are in
// laboratory units here (MHz, kHz, us, I_s, mrad, nm, mm) and converted to
// the unit-free internal system only at this boundary.

#include "lambda_fwm/model.hpp"
#include "lambda_fwm/phasematch.hpp"

#include <numbers>
#include <string>
#include <string_view>

namespace lfwm {

struct GeometryConfig {
  double theta_mrad = 10.0;    // angle between W and W'
  double r_angle_mrad = 0.0;   // tilt of R away from -W
  double rp_angle_mrad = 0.0;  // tilt of R' away from -W
  double lambda_nm = 852.0;
  double length_mm = 3.0;
  double threshold_rad = std::numbers::pi;

  bool operator==(const GeometryConfig&) const = default;
};

struct RunConfig {
  double gamma_e_mhz = 5.2;   // Gamma / 2 pi
  double gamma_g_khz = 10.4;  // gamma / 2 pi, i.e. 0.002 Gamma
  double branch_1 = 0.5;
  double write_ratio = 10.0;  // I_W / I_W' during writing
  double i_r_isat = 1.4;
  double i_rp_isat = 1.4;
  double sweep_i_t_isat = 2.2;
  double t_s_us = 1.0;
  double tau_us = 0.2;
  double t_max_us = 3.0;
  double dt_gamma = 0.0;  // 0 selects the design step
  int n_phi = 8;
  int points = 21;
  int storage_points = 11;
  double storage_span = 5.0;  // storage scan covers [0, storage_span / gamma]
  double scaling_t_star = 0.3;  // 1/Gamma
  int scaling_levels = 6;       // lambda = 1, 1/2, ..., 1/2^(levels-1)
  std::string fit_channel = "fwm";
  double fit_split = 0.5;
  double fit_i_t_lo = 2.0;
  double fit_i_t_hi = 3.6;
  double fit_tau_lo_us = 0.01;
  double fit_tau_hi_us = 1.0;
  double fit_t0_lo_us = -0.5;
  double fit_t0_hi_us = 0.5;
  std::string output_dir = ".";
  GeometryConfig geometry;

  bool operator==(const RunConfig&) const = default;

  double gamma_rad_per_us() const;
  double to_internal_time(double us) const { return us * gamma_rad_per_us(); }
  double to_us(double internal) const { return internal / gamma_rad_per_us(); }

  LambdaParams lambda_params() const;
  ReadoutDrive readout() const { return {i_r_isat, i_rp_isat}; }
  // Dark-state grating for the configured writing ratio, stored for t_s.
  StoredGrating grating() const;
  BeamGeometry beam_geometry() const;
};

// `key = value` lines, `#` comments, one `[geometry]` section. Unknown keys,
// malformed numbers and negative rates are errors carrying the line number.
// Without defaults every key must be present.
RunConfig parse_config(std::string_view text, bool use_defaults = true);

// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

// Canonical text form; parse_config(print_config(c)) == c.
std::string print_config(const RunConfig& config);

}  // namespace lfwm
