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

#include "lambda_fwm/sweep.hpp"

#include "lambda_fwm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lfwm {

TimeGrid SimulationSettings::grid_for(double i_t, const LambdaParams& params) const {
  // The design step at the full intensity bounds every split of I_t.
  const double step = dt > 0.0 ? dt : default_readout_step(ReadoutDrive{i_t, 0.0}, params);
  return TimeGrid::span(t_max, step);
}

FgFunctions compute_fg(double i_t, const LambdaParams& params, const SimulationSettings& settings) {
  return extract_fg(i_t, params, settings.grid_for(i_t, params), settings.fg_options());
}

namespace {

void normalize(SweepTable& table) {
  table.u_max = 0.0;
  for (const auto& r : table.rows) table.u_max = std::max(table.u_max, r.u_fwm);
  for (auto& r : table.rows) {
    r.u_fwm_norm = table.u_max > 0.0 ? r.u_fwm / table.u_max : 0.0;
    r.u_swm_norm = table.u_max > 0.0 ? r.u_swm / table.u_max : 0.0;
  }
}

double time_of(const RealTrace& t, std::size_t i) { return t.time(i); }

}  // namespace

SweepTable split_sweep(const FgFunctions& fg, int n, const LambdaParams& params, const StoredGrating& grating) {
  if (!(fg.i_t > 0.0)) throw DomainError("total intensity must be positive");
  if (n < 3) throw DomainError("split sweep needs at least 3 points");
  SweepTable table;
  table.control_name = "i_r";
  table.rows.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double fraction = static_cast<double>(k) / (n - 1);
    const ReadoutDrive drive = ReadoutDrive::split(fg.i_t, fraction);
    const EnergyPair e = retrieved_energies(fg, drive, grating, params);
    table.rows[static_cast<std::size_t>(k)] = {drive.i_r, e.u_fwm, e.u_swm, 0.0, 0.0};
  }
  normalize(table);
  return table;
}

SweepTable split_sweep(double i_t, int n, const LambdaParams& params, const StoredGrating& grating,
                       const SimulationSettings& settings) {
  if (!(i_t > 0.0)) throw DomainError("total intensity must be positive");
  if (n < 3) throw DomainError("split sweep needs at least 3 points");
  return split_sweep(compute_fg(i_t, params, settings), n, params, grating);
}

std::size_t peak_index(const RealTrace& trace) {
  Eigen::Index idx = 0;
  trace.values.maxCoeff(&idx);
  return static_cast<std::size_t>(idx);
}

namespace {

PulsePair scaled(const PulsePair& p) {
  PulsePair out = p;
  const double peak = std::max(p.fwm.values.maxCoeff(), p.swm.values.maxCoeff());
  if (peak > 0.0) {
    out.fwm.values /= peak;
    out.swm.values /= peak;
  }
  return out;
}

}  // namespace

PulsePair PulseShapes::raw_normalized() const { return scaled(raw); }
PulsePair PulseShapes::convolved_normalized() const { return scaled(convolved); }

PulseShapes pulse_shapes(const FgFunctions& fg, const ReadoutDrive& drive, double tau, const LambdaParams& params,
                         const StoredGrating& grating) {
  PulseShapes out;
  out.raw.fwm = pulse_intensity(fwm_coherence(fg, drive, grating, params));
  out.raw.swm = pulse_intensity(swm_coherence(fg, drive, grating, params));
  out.convolved.fwm = detector_convolve(out.raw.fwm, tau);
  out.convolved.swm = detector_convolve(out.raw.swm, tau);
  out.convolved.convolved = true;
  out.convolved.tau = tau;
  out.peak_time_fwm_raw = time_of(out.raw.fwm, peak_index(out.raw.fwm));
  out.peak_time_swm_raw = time_of(out.raw.swm, peak_index(out.raw.swm));
  out.peak_time_fwm_conv = time_of(out.convolved.fwm, peak_index(out.convolved.fwm));
  out.peak_time_swm_conv = time_of(out.convolved.swm, peak_index(out.convolved.swm));
  return out;
}

PulseShapes pulse_shapes(double i_t, double i_r, double i_rp, double tau, const LambdaParams& params,
                         const StoredGrating& grating, const SimulationSettings& settings) {
  if (std::abs(i_r + i_rp - i_t) > 1e-9 * std::max(1.0, i_t)) throw DomainError("readout split must sum to I_t");
  const FgFunctions fg = compute_fg(i_t, params, settings);
  ReadoutDrive drive{i_r, i_rp};
  // Keep I_t bit-identical to the value f/g were extracted at.
  drive.i_rp = i_t - i_r;
  return pulse_shapes(fg, drive, tau, params, grating);
}

SweepTable storage_sweep(const std::vector<double>& storage_times, const FgFunctions& fg, const ReadoutDrive& drive,
                         const StoredGrating& grating, const LambdaParams& params) {
  SweepTable table;
  table.control_name = "t_s";
  for (double ts : storage_times) {
    if (!(ts >= 0.0)) throw DomainError("storage times must be nonnegative");
    StoredGrating g = grating;
    g.t_s = ts;
    const EnergyPair e = retrieved_energies(fg, drive, g, params);
    table.rows.push_back({ts, e.u_fwm, e.u_swm, 0.0, 0.0});
  }
  normalize(table);
  return table;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("log-log fit requires positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw DomainError("degenerate abscissae in slope fit");
  return (n * sxy - sx * sy) / denom;
}

ScalingTable scaling_probe(const std::vector<double>& lambdas, const ReadoutDrive& base, double t_star,
                           const LambdaParams& params, const StoredGrating& grating,
                           const SimulationSettings& settings) {
  if (!(t_star > 0.0)) throw DomainError("probe time must be positive");
  base.validate();
  ScalingTable table;
  table.t_star = t_star;
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("scale factors must lie in [0, 1]");
    ScalingRow row{lambda, 0.0, 0.0};
    if (lambda > 0.0) {
      ReadoutDrive d = base;
      d.i_r *= lambda * lambda;
      d.i_rp *= lambda * lambda;
      const double step0 = settings.dt > 0.0 ? settings.dt : default_readout_step(d, params);
      const auto steps = static_cast<std::size_t>(std::ceil(t_star / step0 - 1e-9));
      const TimeGrid grid{0.0, t_star / static_cast<double>(steps), steps + 1};
      const PhaseComponents pc =
          extract_phase_components(d, grating, params, grid, settings.n_phi, {.threads = settings.threads});
      row.abs_fwm = std::abs(pc.fwm().values(static_cast<Eigen::Index>(steps)));
      row.abs_swm = std::abs(pc.swm().values(static_cast<Eigen::Index>(steps)));
    }
    table.rows.push_back(row);
  }

  std::vector<ScalingRow> fit_rows;
  for (const auto& r : table.rows)
    if (r.lambda > 0.0) fit_rows.push_back(r);
  std::sort(fit_rows.begin(), fit_rows.end(), [](const auto& a, const auto& b) { return a.lambda > b.lambda; });
  if (fit_rows.size() < 2) return table;

  std::vector<double> x, yf, ys;
  for (const auto& r : fit_rows) {
    x.push_back(r.lambda);
    yf.push_back(r.abs_fwm);
    ys.push_back(r.abs_swm);
  }
  table.slope_fwm = log_log_slope(x, yf);
  table.slope_swm = log_log_slope(x, ys);
  for (std::size_t k = 0; k + 1 < fit_rows.size(); ++k) {
    const double dl = std::log(x[k]) - std::log(x[k + 1]);
    table.local_slopes_fwm.push_back((std::log(yf[k]) - std::log(yf[k + 1])) / dl);
    table.local_slopes_swm.push_back((std::log(ys[k]) - std::log(ys[k + 1])) / dl);
  }
  for (const auto* local : {&table.local_slopes_fwm, &table.local_slopes_swm})
    for (std::size_t k = 0; k + 1 < local->size(); ++k)
      if (std::abs((*local)[k + 1] - (*local)[k]) > 0.1)
        throw ConvergenceError("probe time outside the perturbative window: local slopes drift by more than 0.1");
  return table;
}

}  // namespace lfwm
