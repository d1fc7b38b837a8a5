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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lambda_fwm/config.hpp"
#include "lambda_fwm/errors.hpp"
#include "lambda_fwm/sweep.hpp"

#include <cmath>

using namespace lfwm;

namespace {

const RunConfig& defaults() {
  static const RunConfig c;
  return c;
}

const FgFunctions& fg22() {
  static const FgFunctions fg = compute_fg(2.2, defaults().lambda_params(), SimulationSettings{});
  return fg;
}

SimulationSettings pulse_settings() {
  SimulationSettings s;
  s.t_max = defaults().to_internal_time(3.0);
  return s;
}

const PulseShapes& pulse28() {
  static const PulseShapes p = pulse_shapes(2.8, 1.4, 1.4, defaults().to_internal_time(0.2), defaults().lambda_params(),
                                            defaults().grating(), pulse_settings());
  return p;
}

}  // namespace

TEST_CASE("split sweep at I_t = 2.2") {
  const SweepTable t = split_sweep(fg22(), 21, defaults().lambda_params(), defaults().grating());
  REQUIRE(t.rows.size() == 21);
  CHECK(t.control_name == "i_r");
  CHECK(t.rows.front().control == 0.0);
  CHECK(t.rows.back().control == doctest::Approx(2.2));
  CHECK(t.rows.front().u_swm_norm == 0.0);
  CHECK(t.rows.back().u_swm_norm == 0.0);
  CHECK(t.rows.front().u_swm == 0.0);
  CHECK(t.rows.back().u_swm == 0.0);
  CHECK(t.rows.back().u_fwm_norm == 1.0);
  CHECK(t.u_max == t.rows.back().u_fwm);
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].u_fwm >= t.rows[i - 1].u_fwm - 1e-12 * t.u_max);
  for (const SweepRow& r : t.rows) {
    CHECK(r.u_fwm_norm >= 0.0);
    CHECK(r.u_fwm_norm <= 1.0 + 1e-12);
    CHECK(r.u_swm_norm >= 0.0);
    CHECK(r.u_swm_norm <= 1.0 + 1e-12);
  }

  SUBCASE("SWM peaks inside the sweep") {
    std::size_t best = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      if (t.rows[i].u_swm > t.rows[best].u_swm) best = i;
    CHECK(best > 0);
    CHECK(best + 1 < t.rows.size());
    // Regression lock for the default model.
    CHECK(best == 13);
    CHECK(t.rows[best].u_swm_norm == doctest::Approx(0.039442278879427216).epsilon(1e-9));
  }

  SUBCASE("curve is not forced to be symmetric") {
    CHECK(std::abs(t.rows[6].u_swm - t.rows[14].u_swm) > 1e-3 * t.u_max);
  }
}

TEST_CASE("re-extracting f and g per split leaves the table unchanged") {
  const SweepTable t = split_sweep(fg22(), 5, defaults().lambda_params(), defaults().grating());
  for (const SweepRow& r : t.rows) {
    const double frac = r.control / 2.2;
    FgOptions opt;
    if (frac > 0.0 && frac < 1.0 && std::abs(frac - 0.5) > 1e-9) opt.split_fractions = {frac, 1.0 - frac};
    if (std::abs(frac - 0.5) <= 1e-9) opt.split_fractions = {0.5, 0.8};
    const SimulationSettings s;
    const FgFunctions fg = extract_fg(2.2, defaults().lambda_params(), s.grid_for(2.2, defaults().lambda_params()), opt);
    const EnergyPair e = retrieved_energies(fg, ReadoutDrive::split(2.2, frac), defaults().grating(),
                                            defaults().lambda_params());
    CHECK(std::abs(e.u_fwm / t.u_max - r.u_fwm_norm) <= 1e-9);
    CHECK(std::abs(e.u_swm / t.u_max - r.u_swm_norm) <= 1e-9);
  }
}

TEST_CASE("sweeps are bit-reproducible") {
  SimulationSettings s;
  s.t_max = 60.0;
  const SweepTable a = split_sweep(1.0, 7, defaults().lambda_params(), defaults().grating(), s);
  s.threads = 3;
  const SweepTable b = split_sweep(1.0, 7, defaults().lambda_params(), defaults().grating(), s);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].u_fwm == b.rows[i].u_fwm);
    CHECK(a.rows[i].u_swm == b.rows[i].u_swm);
  }
  CHECK_THROWS_AS(split_sweep(fg22(), 2, defaults().lambda_params(), defaults().grating()), DomainError);
  CHECK_THROWS_AS(split_sweep(0.0, 5, defaults().lambda_params(), defaults().grating(), s), DomainError);
}

TEST_CASE("pulse shapes at I_t = 2.8, tau = 0.2 us") {
  const PulseShapes& p = pulse28();
  CHECK(p.raw.swm.values(0) == 0.0);
  CHECK(p.peak_time_swm_conv > p.peak_time_fwm_conv);
  CHECK(p.peak_time_swm_raw > p.peak_time_fwm_raw);
  CHECK(p.convolved.convolved);
  // Regression lock, internal time units.
  CHECK(p.peak_time_fwm_conv == doctest::Approx(3.8158714600992525).epsilon(1e-12));
  CHECK(p.peak_time_swm_conv == doctest::Approx(9.1276659510679803).epsilon(1e-12));
  CHECK(p.peak_time_fwm_raw == doctest::Approx(1.7283404509198166).epsilon(1e-12));
  CHECK(p.peak_time_swm_raw == doctest::Approx(2.970717205370736).epsilon(1e-12));

  const PulsePair raw = p.raw_normalized();
  CHECK(std::max(raw.fwm.values.maxCoeff(), raw.swm.values.maxCoeff()) == 1.0);
  const PulsePair conv = p.convolved_normalized();
  CHECK(std::max(conv.fwm.values.maxCoeff(), conv.swm.values.maxCoeff()) == 1.0);
}

TEST_CASE("raw FWM is already on at the start of the readout" * doctest::test_suite("fwm-onset")) {
  CHECK(pulse28().raw.fwm.values(0) > 0.0);
}

TEST_CASE("zero response time leaves the pulses unchanged") {
  const ReadoutDrive d = ReadoutDrive::split(2.2, 0.4);
  const PulseShapes p = pulse_shapes(fg22(), d, 0.0, defaults().lambda_params(), defaults().grating());
  CHECK(p.convolved.fwm.values == p.raw.fwm.values);
  CHECK(p.convolved.swm.values == p.raw.swm.values);
  CHECK_THROWS_AS(pulse_shapes(2.2, 1.0, 1.0, 0.0, defaults().lambda_params(), defaults().grating()), DomainError);
}

TEST_CASE("storage scan") {
  const ReadoutDrive d = ReadoutDrive::split(2.2, 0.6);
  const LambdaParams params = defaults().lambda_params();
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(0.5 * k / params.gamma_g);
  const SweepTable t = storage_sweep(times, fg22(), d, defaults().grating(), params);
  REQUIRE(t.rows.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expect = std::exp(-2.0 * params.gamma_g * times[i]);
    CHECK(t.rows[i].u_fwm / t.rows[0].u_fwm == doctest::Approx(expect).epsilon(1e-12));
    CHECK(t.rows[i].u_swm / t.rows[0].u_swm == doctest::Approx(expect).epsilon(1e-12));
  }
  const double step = t.rows[1].u_fwm / t.rows[0].u_fwm;
  for (std::size_t i = 2; i < times.size(); ++i)
    CHECK(t.rows[i].u_fwm / t.rows[i - 1].u_fwm == doctest::Approx(step).epsilon(1e-12));

  const SweepTable flat = storage_sweep(times, fg22(), d, defaults().grating(), params.without_dephasing());
  for (const SweepRow& r : flat.rows) CHECK(r.u_fwm == flat.rows[0].u_fwm);

  CHECK_THROWS_AS(storage_sweep({-1.0}, fg22(), d, defaults().grating(), params), DomainError);
}

TEST_CASE("low-intensity scaling") {
  const std::vector<double> lambdas{0.0, 1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  const ScalingTable t =
      scaling_probe(lambdas, defaults().readout(), 0.3, defaults().lambda_params(), defaults().grating());
  CHECK(t.rows[0].abs_fwm == 0.0);
  CHECK(t.rows[0].abs_swm == 0.0);
  CHECK(t.slope_fwm == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(t.slope_swm - 3.0) <= 0.1);
  CHECK_THROWS_AS(scaling_probe({1.0, 0.5, 0.25, 0.125}, defaults().readout(), 3.0, defaults().lambda_params(),
                                defaults().grating()),
                  ConvergenceError);
}

TEST_CASE("helpers") {
  CHECK(log_log_slope({1.0, 2.0, 4.0}, {3.0, 24.0, 192.0}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_log_slope({1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(log_log_slope({1.0, 2.0}, {0.0, 1.0}), DomainError);
  RealTrace r{0.0, 1.0, Eigen::VectorXd(5)};
  r.values << 0.0, 2.0, 5.0, 5.0, 1.0;
  CHECK(peak_index(r) == 2);
}
