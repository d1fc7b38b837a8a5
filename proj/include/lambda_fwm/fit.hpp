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

// Nonlinear least-squares estimation of amplitude scale, time offset, total
// readout intensity, detector response time and (optionally) ground
// dephasing from a measured pulse trace.

#include "lambda_fwm/bloch.hpp"
#include "lambda_fwm/sweep.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace lfwm {

enum class FitChannel { kFwm, kSwm };

struct FitParameter {
  double value = 0.0;  // initial guess
  double lower = 0.0;
  double upper = 0.0;
  bool free = true;
};

enum FitIndex : std::size_t { kScale = 0, kTimeOffset = 1, kTotalIntensity = 2, kResponseTime = 3, kDephasing = 4 };
inline constexpr std::size_t kFitParameterCount = 5;
inline constexpr std::array<const char*, kFitParameterCount> kFitParameterNames{"scale", "t0_us", "i_t_isat", "tau_us",
                                                                                "gamma_g"};

using FitVector = std::array<double, kFitParameterCount>;

struct FitProblem {
  std::vector<double> time_us;
  std::vector<double> value;
  FitChannel channel = FitChannel::kFwm;

  // scale multiplies the peak-normalised convolved model; gamma_g in Gamma.
  std::array<FitParameter, kFitParameterCount> parameters{{
      {1.0, 0.0, 10.0, true},
      {0.0, -0.5, 0.5, true},
      {2.8, 2.0, 3.6, true},
      {0.2, 0.01, 1.0, true},
      {0.002, 0.0, 0.1, false},
  }};

  // Fixed physics.
  double split_fraction = 0.5;  // I_R / I_t
  double gamma_e_mhz = 5.2;     // Gamma / 2 pi
  double t_s_us = 1.0;
  LambdaParams lambda_params;
  StoredGrating grating;

  void validate() const;
  double gamma_rad_per_us() const;
};

struct FitResult {
  FitVector estimates{};
  double ssr = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool hit_bounds = false;
  std::vector<double> ssr_history;  // best SSR after each iteration
};

// f_r, g_r on a fixed I_t lattice (spacing in I_s) sharing one time grid;
// intermediate I_t are linearly interpolated. Populate before fitting; the
// populated cache is read-only and safe to share.
class FgCache {
 public:
  FgCache(LambdaParams params, SimulationSettings settings, double spacing = 0.1);

  void populate(double i_t_lo, double i_t_hi);
  bool covers(double i_t) const;
  FgFunctions at(double i_t) const;

  const TimeGrid& grid() const { return grid_; }
  double spacing() const { return spacing_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  const FgFunctions& node(long k) const;

  LambdaParams params_;
  SimulationSettings settings_;
  double spacing_;
  TimeGrid grid_;
  std::map<long, FgFunctions> nodes_;
};

// scale * I_conv(t - t0) / max I_conv for the problem's channel.
class ForwardModel {
 public:
  ForwardModel(const FgCache& cache, const FitProblem& problem) : cache_(cache), problem_(problem) {}

  std::vector<double> evaluate(const FitVector& p, const std::vector<double>& time_us) const;

 private:
  const FgCache& cache_;
  const FitProblem& problem_;
};

// Cache sized for the problem's I_t bounds and time span.
FgCache make_fit_cache(const FitProblem& problem, SimulationSettings settings = {}, double spacing = 0.1);

struct FitOptions {
  double simplex_tolerance = 1e-8;
  int max_evaluations = 10000;
  double ssr_floor = 1e-20;  // relative to sum(value^2)
  double initial_step = 0.1; // in box-normalised coordinates
};

FitResult fit_trace(const FitProblem& problem, const FgCache& cache, const FitOptions& options = {});

// Parses a `time_us,value` CSV trace.
void read_trace_csv(const std::string& text, std::vector<double>& time_us, std::vector<double>& value);

}  // namespace lfwm
