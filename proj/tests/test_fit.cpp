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
#include "lambda_fwm/fit.hpp"

#include <cmath>

using namespace lfwm;

namespace {

FitProblem base_problem() {
  const RunConfig c;
  FitProblem p;
  for (int i = 0; i < 160; ++i) p.time_us.push_back(0.0125 * i);
  p.value.assign(p.time_us.size(), 0.0);
  p.lambda_params = c.lambda_params();
  p.grating = c.grating();
  p.parameters[kScale] = {0.9, 0.0, 5.0, true};
  p.parameters[kTimeOffset] = {0.02, -0.1, 0.1, true};
  p.parameters[kTotalIntensity] = {2.75, 2.7, 2.9, true};
  p.parameters[kResponseTime] = {0.25, 0.05, 0.5, true};
  return p;
}

const FgCache& cache() {
  static const FgCache c = [] {
    FitProblem p = base_problem();
    p.value[1] = 1.0;
    return make_fit_cache(p);
  }();
  return c;
}

constexpr FitVector kTruth{1.0, 0.0, 2.8, 0.2, 0.002};

FitProblem synthetic(double factor = 1.0) {
  FitProblem p = base_problem();
  const ForwardModel model(cache(), p);
  p.value = model.evaluate(kTruth, p.time_us);
  for (double& v : p.value) v *= factor;
  return p;
}

}  // namespace

TEST_CASE("cache nodes and interpolation") {
  CHECK(cache().node_count() == 3);
  CHECK(cache().covers(2.7));
  CHECK(cache().covers(2.85));
  CHECK_FALSE(cache().covers(3.05));
  CHECK_THROWS_AS(cache().at(3.5), DomainError);
  const FgFunctions mid = cache().at(2.85);
  const FgFunctions a = cache().at(2.8), b = cache().at(2.9);
  CHECK((mid.f_r.values - 0.5 * (a.f_r.values + b.f_r.values)).norm() <= 1e-12 * a.f_r.values.norm());
}

TEST_CASE("round trip recovers the generating parameters") {
  const FitProblem p = synthetic();
  const FitResult r = fit_trace(p, cache());
  CHECK(r.converged);
  CHECK(r.estimates[kTotalIntensity] == doctest::Approx(2.8).epsilon(0.01));
  CHECK(r.estimates[kResponseTime] == doctest::Approx(0.2).epsilon(0.01));
  CHECK(r.estimates[kScale] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(r.estimates[kTimeOffset]) <= 0.01 * 0.2);
  CHECK_FALSE(r.hit_bounds);

  SUBCASE("best SSR never increases") {
    for (std::size_t i = 1; i < r.ssr_history.size(); ++i) CHECK(r.ssr_history[i] <= r.ssr_history[i - 1]);
  }
  SUBCASE("deterministic") {
    const FitResult again = fit_trace(p, cache());
    CHECK(again.estimates == r.estimates);
    CHECK(again.iterations == r.iterations);
  }
}

TEST_CASE("rescaling the data rescales only the amplitude") {
  const FitResult r = fit_trace(synthetic(), cache());
  FitProblem scaled = synthetic(7.0);
  scaled.parameters[kScale] = {0.9 * 7.0, 0.0, 35.0, true};
  const FitResult s = fit_trace(scaled, cache());
  CHECK(s.estimates[kScale] == doctest::Approx(7.0 * r.estimates[kScale]).epsilon(1e-6));
  for (std::size_t k : {kTimeOffset, kTotalIntensity, kResponseTime})
    CHECK(s.estimates[k] == doctest::Approx(r.estimates[k]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("exact initial guess converges immediately") {
  FitProblem p = synthetic();
  for (std::size_t k = 0; k < kFitParameterCount; ++k) p.parameters[k].value = kTruth[k];
  const FitResult r = fit_trace(p, cache());
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  CHECK(r.ssr <= 1e-16);
}

TEST_CASE("ill-posed and invalid problems") {
  FitProblem p = base_problem();
  CHECK_THROWS_AS(fit_trace(p, cache()), IllPosedError);
  CHECK_THROWS_AS(make_fit_cache(p), IllPosedError);
  p = synthetic();
  p.parameters[kTotalIntensity] = {3.0, 2.5, 3.2, true};
  CHECK_THROWS_AS(fit_trace(p, cache()), DomainError);
  p = synthetic();
  p.parameters[kResponseTime].value = 2.0;
  CHECK_THROWS_AS(fit_trace(p, cache()), DomainError);
  p = synthetic();
  p.time_us[5] = p.time_us[4];
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = synthetic();
  p.channel = FitChannel::kSwm;
  p.split_fraction = 1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("trace csv") {
  std::vector<double> t, v;
  read_trace_csv("# measured\ntime_us,value\r\n0,1.5\n0.5,2e-3\n", t, v);
  CHECK(t == std::vector<double>{0.0, 0.5});
  CHECK(v == std::vector<double>{1.5, 2e-3});

  const auto line_of = [](const std::string& text) {
    std::vector<double> a, b;
    try {
      read_trace_csv(text, a, b);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("t,v\n0,1\n") == 1);
  CHECK(line_of("time_us,value\n0,1\n0.1;2\n") == 3);
  CHECK(line_of("time_us,value\n0,1\n0.1,abc\n") == 3);
  CHECK(line_of("time_us,value\n0,1x\n") == 2);
  CHECK(line_of("") == 0);
}
