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

#include "lambda_fwm/fit.hpp"

#include "lambda_fwm/errors.hpp"
#include "lambda_fwm/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lfwm {

void FitProblem::validate() const {
  if (time_us.size() != value.size()) throw DomainError("time and value columns differ in length");
  if (time_us.size() < 10) throw DomainError("a fit needs at least 10 samples");
  for (std::size_t i = 0; i < time_us.size(); ++i) {
    if (!std::isfinite(time_us[i]) || !std::isfinite(value[i])) throw DomainError("non-finite sample in trace");
    if (i > 0 && !(time_us[i] > time_us[i - 1])) throw DomainError("sample times must be strictly increasing");
  }
  for (std::size_t k = 0; k < kFitParameterCount; ++k) {
    const auto& p = parameters[k];
    if (!(p.lower <= p.value && p.value <= p.upper))
      throw DomainError(std::string("initial guess outside bounds for ") + kFitParameterNames[k]);
    if (p.free && !(p.lower < p.upper)) throw DomainError(std::string("empty bounds for ") + kFitParameterNames[k]);
  }
  if (!(parameters[kTotalIntensity].lower > 0.0)) throw DomainError("I_t bounds must be positive");
  if (!(parameters[kResponseTime].lower >= 0.0)) throw DomainError("tau bounds must be nonnegative");
  if (!(parameters[kDephasing].lower >= 0.0)) throw DomainError("gamma_g bounds must be nonnegative");
  if (!(split_fraction > 0.0 && split_fraction <= 1.0)) throw DomainError("split fraction must lie in (0, 1]");
  if (channel == FitChannel::kSwm && split_fraction == 1.0) throw DomainError("SWM vanishes at I_R = I_t");
  if (!(gamma_e_mhz > 0.0)) throw DomainError("Gamma must be positive");
  if (!(t_s_us >= 0.0)) throw DomainError("storage time must be nonnegative");
  lambda_params.validate();
  grating.validate();
}

double FitProblem::gamma_rad_per_us() const { return 2.0 * std::numbers::pi * gamma_e_mhz; }

FgCache::FgCache(LambdaParams params, SimulationSettings settings, double spacing)
    : params_(params), settings_(settings), spacing_(spacing) {
  if (!(spacing > 0.0)) throw DomainError("I_t lattice spacing must be positive");
}

void FgCache::populate(double i_t_lo, double i_t_hi) {
  if (!(i_t_lo > 0.0 && i_t_hi >= i_t_lo)) throw DomainError("invalid I_t range for the f/g cache");
  const auto k_lo = static_cast<long>(std::floor(i_t_lo / spacing_ + 1e-9));
  const auto k_hi = static_cast<long>(std::ceil(i_t_hi / spacing_ - 1e-9));
  if (nodes_.empty()) grid_ = settings_.grid_for(static_cast<double>(k_hi) * spacing_, params_);
  for (long k = std::max(1L, k_lo); k <= k_hi; ++k) {
    if (nodes_.count(k)) continue;
    nodes_.emplace(k, extract_fg(static_cast<double>(k) * spacing_, params_, grid_, settings_.fg_options()));
  }
}

bool FgCache::covers(double i_t) const {
  const double x = i_t / spacing_;
  const auto k0 = static_cast<long>(std::floor(x));
  return nodes_.count(k0) && (static_cast<double>(k0) == x || nodes_.count(k0 + 1));
}

const FgFunctions& FgCache::node(long k) const {
  const auto it = nodes_.find(k);
  if (it == nodes_.end()) throw DomainError("I_t outside the populated f/g cache");
  return it->second;
}

FgFunctions FgCache::at(double i_t) const {
  const double x = i_t / spacing_;
  const auto k0 = static_cast<long>(std::floor(x));
  const double w = x - static_cast<double>(k0);
  const FgFunctions& a = node(k0);
  FgFunctions out = a;
  out.i_t = i_t;
  if (w > 0.0) {
    const FgFunctions& b = node(k0 + 1);
    out.f_r.values = (1.0 - w) * a.f_r.values + w * b.f_r.values;
    out.g_r.values = (1.0 - w) * a.g_r.values + w * b.g_r.values;
  }
  return out;
}

std::vector<double> ForwardModel::evaluate(const FitVector& p, const std::vector<double>& time_us) const {
  const double gamma = problem_.gamma_rad_per_us();
  const double i_t = p[kTotalIntensity];
  const FgFunctions fg = cache_.at(i_t);

  ReadoutDrive drive = ReadoutDrive::split(i_t, problem_.split_fraction);
  drive.i_rp = i_t - drive.i_r;
  StoredGrating grating = problem_.grating;
  grating.t_s = 0.0;
  const ComplexTrace coherence = problem_.channel == FitChannel::kFwm
                                     ? fwm_coherence(fg, drive, grating, problem_.lambda_params)
                                     : swm_coherence(fg, drive, grating, problem_.lambda_params);
  const RealTrace conv = detector_convolve(pulse_intensity(coherence), p[kResponseTime] * gamma);
  const double peak = conv.values.maxCoeff();
  const double amplitude =
      peak > 0.0 ? p[kScale] * std::exp(-2.0 * p[kDephasing] * problem_.t_s_us * gamma) / peak : 0.0;

  std::vector<double> out(time_us.size(), 0.0);
  const auto n = static_cast<Eigen::Index>(conv.size());
  for (std::size_t i = 0; i < time_us.size(); ++i) {
    const double t = (time_us[i] - p[kTimeOffset]) * gamma;
    if (t < conv.t0) continue;
    const double x = (t - conv.t0) / conv.dt;
    const auto k = static_cast<Eigen::Index>(std::floor(x));
    double v;
    if (k >= n - 1) {
      v = conv.values(n - 1);
    } else {
      const double w = x - static_cast<double>(k);
      v = (1.0 - w) * conv.values(k) + w * conv.values(k + 1);
    }
    out[i] = amplitude * v;
  }
  return out;
}

namespace {

void require_varying(const FitProblem& problem) {
  const auto [lo, hi] = std::minmax_element(problem.value.begin(), problem.value.end());
  if (*lo == *hi) throw IllPosedError("trace is constant; nothing to fit");
}

}  // namespace

FgCache make_fit_cache(const FitProblem& problem, SimulationSettings settings, double spacing) {
  problem.validate();
  require_varying(problem);
  const double gamma = problem.gamma_rad_per_us();
  const double span_us = problem.time_us.back() - problem.parameters[kTimeOffset].lower;
  settings.t_max = std::max(1.0, span_us * gamma) + 1.0;
  FgCache cache(problem.lambda_params, settings, spacing);
  const auto& it = problem.parameters[kTotalIntensity];
  if (it.free)
    cache.populate(it.lower, it.upper);
  else
    cache.populate(it.value, it.value);
  return cache;
}

namespace {

class BoxMap {
 public:
  explicit BoxMap(const FitProblem& problem) : problem_(problem) {
    for (std::size_t k = 0; k < kFitParameterCount; ++k)
      if (problem.parameters[k].free) free_.push_back(k);
  }

  std::size_t dim() const { return free_.size(); }

  Eigen::VectorXd to_unit(const FitVector& p) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) {
      const auto& b = problem_.parameters[free_[i]];
      u(static_cast<Eigen::Index>(i)) = (p[free_[i]] - b.lower) / (b.upper - b.lower);
    }
    return u;
  }

  // Projection onto the box happens here, before every evaluation.
  FitVector from_unit(const Eigen::VectorXd& u) const {
    FitVector p{};
    for (std::size_t k = 0; k < kFitParameterCount; ++k) p[k] = problem_.parameters[k].value;
    for (std::size_t i = 0; i < dim(); ++i) {
      const auto& b = problem_.parameters[free_[i]];
      const double c = std::clamp(u(static_cast<Eigen::Index>(i)), 0.0, 1.0);
      p[free_[i]] = b.lower + c * (b.upper - b.lower);
    }
    return p;
  }

 private:
  const FitProblem& problem_;
  std::vector<std::size_t> free_;
};

}  // namespace

FitResult fit_trace(const FitProblem& problem, const FgCache& cache, const FitOptions& options) {
  problem.validate();
  require_varying(problem);
  const auto& it = problem.parameters[kTotalIntensity];
  if (!cache.covers(it.free ? it.lower : it.value) || !cache.covers(it.free ? it.upper : it.value))
    throw DomainError("f/g cache does not cover the I_t bounds");

  const ForwardModel model(cache, problem);
  const BoxMap box(problem);
  const double norm2 = std::inner_product(problem.value.begin(), problem.value.end(), problem.value.begin(), 0.0);
  const double floor = options.ssr_floor * norm2;

  FitResult result;
  const auto ssr_of = [&](const Eigen::VectorXd& u) {
    ++result.evaluations;
    const std::vector<double> m = model.evaluate(box.from_unit(u), problem.time_us);
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) s += (problem.value[i] - m[i]) * (problem.value[i] - m[i]);
    return s;
  };

  FitVector guess{};
  for (std::size_t k = 0; k < kFitParameterCount; ++k) guess[k] = problem.parameters[k].value;
  const auto d = static_cast<Eigen::Index>(box.dim());
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> f;
  simplex.push_back(box.to_unit(guess));
  f.push_back(ssr_of(simplex[0]));

  const auto finish = [&](std::size_t best, bool converged) {
    result.estimates = box.from_unit(simplex[best]);
    result.ssr = f[best];
    result.converged = converged;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double u = std::clamp(simplex[best](i), 0.0, 1.0);
      if (u <= 1e-9 || u >= 1.0 - 1e-9) result.hit_bounds = true;
    }
    return result;
  };

  if (d == 0 || f[0] <= floor) {
    result.ssr_history.push_back(f[0]);
    return finish(0, true);
  }

  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd v = simplex[0];
    v(i) += v(i) + options.initial_step <= 1.0 ? options.initial_step : -options.initial_step;
    simplex.push_back(v);
    f.push_back(ssr_of(v));
  }

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  std::vector<std::size_t> order(simplex.size());
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double spread = 0.0;
    for (const auto& v : simplex) spread = std::max(spread, (v - simplex[best]).cwiseAbs().maxCoeff());
    if (spread <= options.simplex_tolerance || f[best] <= floor) return finish(best, true);
    if (result.evaluations >= options.max_evaluations) return finish(best, false);

    ++result.iterations;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t k : order)
      if (k != worst) centroid += simplex[k];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - simplex[worst]);
    const double fr = ssr_of(xr);
    if (fr < f[best]) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = ssr_of(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        f[worst] = fe;
      } else {
        simplex[worst] = xr;
        f[worst] = fr;
      }
    } else if (fr < f[second]) {
      simplex[worst] = xr;
      f[worst] = fr;
    } else {
      const bool outside = fr < f[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + kContract * (xr - centroid))
                                         : Eigen::VectorXd(centroid + kContract * (simplex[worst] - centroid));
      const double fc = ssr_of(xc);
      if (fc < (outside ? fr : f[worst])) {
        simplex[worst] = xc;
        f[worst] = fc;
      } else {
        for (std::size_t k = 0; k < simplex.size(); ++k) {
          if (k == best) continue;
          simplex[k] = simplex[best] + kShrink * (simplex[k] - simplex[best]);
          f[k] = ssr_of(simplex[k]);
        }
      }
    }
    result.ssr_history.push_back(*std::min_element(f.begin(), f.end()));
  }
}

void read_trace_csv(const std::string& text, std::vector<double>& time_us, std::vector<double>& value) {
  time_us.clear();
  value.clear();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "time_us,value") throw ConfigError(line_no, "expected header 'time_us,value'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError(line_no, "expected two comma-separated columns");
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      const double t = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      const double v = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      time_us.push_back(t);
      value.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError(line_no, "malformed number");
    }
  }
  if (!header) throw ConfigError(0, "trace file has no header");
}

}  // namespace lfwm
