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

#include "lambda_fwm/bloch.hpp"

#include "lambda_fwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace lfwm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_rate(const ReadoutDrive& drive, const LambdaParams& params) {
  return std::max({params.gamma_e, drive.omega_r(), drive.omega_rp()});
}

// Runs job(k) for k in [0, count) on up to `threads` workers. Each job writes
// only its own output slot, so the result does not depend on scheduling.
template <typename Job>
void run_indexed(std::size_t count, unsigned threads, const Job& job) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < count; k += workers) job(k);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

LambdaGenerator<double> make_generator(const ReadoutDrive& drive, const LambdaParams& params) {
  LambdaGenerator<double> gen;
  gen.hamiltonian = readout_hamiltonian(drive.omega_r(), drive.phase_r, drive.omega_rp(), drive.phase_rp);
  gen.gamma_e = params.gamma_e;
  gen.branch_1 = params.branch_1;
  gen.branch_2 = params.branch_2;
  gen.gamma_g = params.gamma_g;
  return gen;
}

DensityMatrix3 dark_state(Complex omega_w, Complex omega_wp) {
  const double norm2 = std::norm(omega_w) + std::norm(omega_wp);
  if (!(norm2 > 0.0)) throw DomainError("dark state undefined: both writing Rabi frequencies are zero");
  Eigen::Vector3cd psi(omega_wp, -omega_w, Complex(0.0));
  psi /= std::sqrt(norm2);
  return psi * psi.adjoint();
}

DensityMatrix3 grating_state(const StoredGrating& grating) {
  grating.validate();
  DensityMatrix3 rho = DensityMatrix3::Zero();
  rho(kGround1, kGround1) = grating.pop_1;
  rho(kGround2, kGround2) = grating.pop_2;
  rho(kGround1, kGround2) = grating.amplitude * std::polar(1.0, -grating.phase_g);
  rho(kGround2, kGround1) = std::conj(rho(kGround1, kGround2));
  return rho;
}

StoredGrating grating_from_state(const DensityMatrix3& rho, double phase_g, double t_s) {
  StoredGrating g;
  const double p1 = rho(kGround1, kGround1).real();
  const double p2 = rho(kGround2, kGround2).real();
  const double pg = p1 + p2;
  if (!(pg > 0.0)) throw DomainError("state has no ground population");
  g.pop_1 = p1 / pg;
  g.pop_2 = 1.0 - g.pop_1;
  g.amplitude = rho(kGround1, kGround2) / pg;
  g.phase_g = phase_g;
  g.t_s = t_s;
  g.validate();
  return g;
}

DensityMatrix3 apply_storage(const DensityMatrix3& rho, double t_s, const LambdaParams& params) {
  if (!(t_s >= 0.0)) throw DomainError("storage time must be nonnegative");
  params.validate();
  DensityMatrix3 out = DensityMatrix3::Zero();
  const Complex ree = rho(kExcited, kExcited);
  out(kGround1, kGround1) = rho(kGround1, kGround1) + params.branch_1 * ree;
  out(kGround2, kGround2) = rho(kGround2, kGround2) + params.branch_2 * ree;
  const double decay = std::exp(-params.gamma_g * t_s);
  out(kGround1, kGround2) = decay * rho(kGround1, kGround2);
  out(kGround2, kGround1) = decay * rho(kGround2, kGround1);
  return out;
}

DensityMatrix3 readout_initial_state(const StoredGrating& grating, const LambdaParams& params) {
  return apply_storage(grating_state(grating), grating.t_s, params);
}

double max_readout_step(const ReadoutDrive& drive, const LambdaParams& params) {
  return 0.01 / max_rate(drive, params);
}

double default_readout_step(const ReadoutDrive& drive, const LambdaParams& params) {
  return 0.005 / max_rate(drive, params);
}

ReadoutSolution evolve_readout(const DensityMatrix3& rho0, const ReadoutDrive& drive, const LambdaParams& params,
                               const TimeGrid& grid, const EvolveOptions& options) {
  params.validate();
  drive.validate();
  grid.validate();
  const StateReport report = validate_state(rho0);
  if (!report.pass) throw DomainError("initial state is not a valid density matrix");
  const double limit = max_readout_step(drive, params);
  if (grid.dt > limit * (1.0 + 1e-12))
    throw StepSizeError("time step " + std::to_string(grid.dt) + " exceeds limit " + std::to_string(limit));

  const auto gen = make_generator(drive, params);
  const auto n = static_cast<Eigen::Index>(grid.size);

  ReadoutSolution sol;
  sol.grid = grid;
  sol.sigma_e1 = {grid.t0, grid.dt, Eigen::VectorXcd(n)};
  sol.sigma_e2 = {grid.t0, grid.dt, Eigen::VectorXcd(n)};
  if (options.keep_states) sol.rho_t.reserve(grid.size);

  DensityMatrix3 rho = rho0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) rho = rk4_step(gen, rho, grid.dt);
    sol.sigma_e1.values(i) = rho(kGround1, kExcited);
    sol.sigma_e2.values(i) = rho(kGround2, kExcited);
    sol.max_trace_drift = std::max(sol.max_trace_drift, std::abs(rho.trace() - Complex(1.0)));
    if (options.keep_states) sol.rho_t.push_back(rho);
  }
  return sol;
}

PhaseComponents::PhaseComponents(int n_phi, TimeGrid grid) : n_phi_(n_phi), grid_(grid) {
  const auto n = static_cast<Eigen::Index>(grid.size);
  traces_.assign(2 * static_cast<std::size_t>(n_phi) * static_cast<std::size_t>(n_phi),
                 ComplexTrace{grid.t0, grid.dt, Eigen::VectorXcd::Zero(n)});
}

std::size_t PhaseComponents::slot(Coherence c, int m, int n) const {
  if (m < min_order() || m > max_order() || n < min_order() || n > max_order())
    throw DomainError("Fourier order (" + std::to_string(m) + ", " + std::to_string(n) + ") not resolved by n_phi = " +
                      std::to_string(n_phi_));
  const auto mi = static_cast<std::size_t>(m - min_order());
  const auto ni = static_cast<std::size_t>(n - min_order());
  const auto np = static_cast<std::size_t>(n_phi_);
  return (c == Coherence::kSigma1e ? 0 : np * np) + mi * np + ni;
}

const ComplexTrace& PhaseComponents::component(Coherence c, int m, int n) const { return traces_[slot(c, m, n)]; }
ComplexTrace& PhaseComponents::component(Coherence c, int m, int n) { return traces_[slot(c, m, n)]; }

Complex PhaseComponents::reconstruct(Coherence c, std::size_t i, double phase_g, double delta) const {
  Complex sum = 0.0;
  const auto idx = static_cast<Eigen::Index>(i);
  for (int m = min_order(); m <= max_order(); ++m)
    for (int n = min_order(); n <= max_order(); ++n)
      sum += component(c, m, n).values(idx) * std::polar(1.0, m * phase_g + n * delta);
  return sum;
}

PhaseComponents extract_phase_components(const ReadoutDrive& drive_template, const StoredGrating& grating_template,
                                         const LambdaParams& params, const TimeGrid& grid, int n_phi,
                                         const PhaseOptions& options) {
  if (n_phi < 2) throw DomainError("n_phi must be at least 2");
  drive_template.validate();
  grating_template.validate();
  grid.validate();

  const auto np = static_cast<std::size_t>(n_phi);
  const auto phase_at = [n_phi](std::size_t j) { return kTwoPi * static_cast<double>(j) / n_phi; };

  const auto single_run = [&](double phase_g, double delta) {
    StoredGrating g = grating_template;
    g.phase_g = phase_g;
    ReadoutDrive d = drive_template;
    d.phase_rp = d.phase_r + delta;
    return evolve_readout(readout_initial_state(g, params), d, params, grid, {.keep_states = false});
  };

  // Index k = j * n_phi + l over (phi_g, Delta) samples, plus one off-grid
  // validation run at the end.
  const double check_g = 0.37 * kTwoPi / n_phi;
  const double check_delta = 0.61 * kTwoPi / n_phi;
  std::vector<ReadoutSolution> runs(np * np + 1);
  run_indexed(runs.size(), options.threads, [&](std::size_t k) {
    if (k == np * np)
      runs[k] = single_run(check_g, check_delta);
    else
      runs[k] = single_run(phase_at(k / np), phase_at(k % np));
  });

  PhaseComponents out(n_phi, grid);
  const auto nt = static_cast<Eigen::Index>(grid.size);

  // Separable 2-D DFT: first over Delta at fixed phi_g, then over phi_g.
  for (Coherence c : {Coherence::kSigma1e, Coherence::kSigma2e}) {
    const auto trace_of = [c](const ReadoutSolution& s) -> const Eigen::VectorXcd& {
      return c == Coherence::kSigma1e ? s.sigma_e1.values : s.sigma_e2.values;
    };
    std::vector<Eigen::VectorXcd> partial(np * np, Eigen::VectorXcd::Zero(nt));  // [j][n]
    for (std::size_t j = 0; j < np; ++j)
      for (int n = out.min_order(); n <= out.max_order(); ++n) {
        Eigen::VectorXcd& acc = partial[j * np + static_cast<std::size_t>(n - out.min_order())];
        for (std::size_t l = 0; l < np; ++l) acc += std::polar(1.0, -n * phase_at(l)) * trace_of(runs[j * np + l]);
      }
    const double norm = 1.0 / static_cast<double>(np * np);
    for (int m = out.min_order(); m <= out.max_order(); ++m)
      for (int n = out.min_order(); n <= out.max_order(); ++n) {
        Eigen::VectorXcd& dst = out.component(c, m, n).values;
        for (std::size_t j = 0; j < np; ++j)
          dst += std::polar(1.0, -m * phase_at(j)) * partial[j * np + static_cast<std::size_t>(n - out.min_order())];
        dst *= norm;
      }

    double scale = 0.0;
    for (std::size_t k = 0; k < np * np; ++k) scale = std::max(scale, trace_of(runs[k]).cwiseAbs().maxCoeff());
    scale = std::max(scale, 1e-300);
    // Inverse transform back onto the sampled phases, separably.
    double sampled = 0.0;
    std::vector<Eigen::VectorXcd> back(np * np, Eigen::VectorXcd::Zero(nt));  // [m][l]
    for (int m = out.min_order(); m <= out.max_order(); ++m)
      for (std::size_t l = 0; l < np; ++l) {
        Eigen::VectorXcd& acc = back[static_cast<std::size_t>(m - out.min_order()) * np + l];
        for (int n = out.min_order(); n <= out.max_order(); ++n)
          acc += std::polar(1.0, n * phase_at(l)) * out.component(c, m, n).values;
      }
    for (std::size_t j = 0; j < np; ++j)
      for (std::size_t l = 0; l < np; ++l) {
        Eigen::VectorXcd recon = -trace_of(runs[j * np + l]);
        for (int m = out.min_order(); m <= out.max_order(); ++m)
          recon += std::polar(1.0, m * phase_at(j)) * back[static_cast<std::size_t>(m - out.min_order()) * np + l];
        sampled = std::max(sampled, recon.cwiseAbs().maxCoeff());
      }
    Eigen::VectorXcd off = -trace_of(runs.back());
    for (int m = out.min_order(); m <= out.max_order(); ++m)
      for (int n = out.min_order(); n <= out.max_order(); ++n)
        off += std::polar(1.0, m * check_g + n * check_delta) * out.component(c, m, n).values;
    const double off_grid = off.cwiseAbs().maxCoeff();
    out.reconstruction_residual = std::max(out.reconstruction_residual, sampled / scale);
    out.aliasing_residual = std::max(out.aliasing_residual, off_grid / scale);
  }

  if (out.aliasing_residual > options.aliasing_tolerance || out.reconstruction_residual > options.aliasing_tolerance)
    throw AliasingError("phase reconstruction residual " + std::to_string(out.aliasing_residual) +
                        " exceeds tolerance with n_phi = " + std::to_string(n_phi));
  return out;
}

FgFunctions extract_fg(double i_t, const LambdaParams& params, const TimeGrid& grid, const FgOptions& options) {
  if (!(i_t > 0.0)) throw DomainError("total readout intensity must be positive");
  params.validate();
  const auto [s1, s2] = options.split_fractions;
  if (!(s1 > 0.0 && s1 <= 1.0 && s2 > 0.0 && s2 <= 1.0))
    throw ConditioningError("split fractions must lie in (0, 1]");
  // Determinant of [[s1, 1 - s1], [s2, 1 - s2]] in units of I_t^2.
  const double det = s1 - s2;
  if (std::abs(det) < 1e-3) throw ConditioningError("intensity splits too close for f/g inversion");

  const LambdaParams readout = params.without_dephasing();
  StoredGrating unit;
  unit.amplitude = 0.5;
  unit.t_s = 0.0;

  std::array<Eigen::VectorXcd, 2> y;
  std::array<ReadoutDrive, 2> drives{ReadoutDrive::split(i_t, s1), ReadoutDrive::split(i_t, s2)};
  for (std::size_t k = 0; k < 2; ++k) {
    const PhaseComponents pc =
        extract_phase_components(drives[k], unit, readout, grid, options.n_phi, {.threads = options.threads});
    // Strip |Omega_R| / (I_t Gamma) and the stored amplitude.
    y[k] = pc.fwm().values * (i_t * readout.gamma_e / (drives[k].omega_r() * unit.amplitude.real()));
  }
  // [I_R1 I_R'1; I_R2 I_R'2] [f; g] = [y1; y2]
  const double a = drives[0].i_r, b = drives[0].i_rp, c = drives[1].i_r, d = drives[1].i_rp;
  const double determinant = a * d - b * c;
  FgFunctions fg;
  fg.i_t = i_t;
  fg.f_r = {grid.t0, grid.dt, (d * y[0] - b * y[1]) / determinant};
  fg.g_r = {grid.t0, grid.dt, (a * y[1] - c * y[0]) / determinant};
  if (!fg.f_r.values.allFinite() || !fg.g_r.values.allFinite()) throw ConditioningError("non-finite f/g inversion");
  return fg;
}

}  // namespace lfwm
