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

#include "lambda_fwm/errors.hpp"
#include "lambda_fwm/phasematch.hpp"
#include "oracles.hpp"

#include <Eigen/Geometry>

#include <cmath>

using namespace lfwm;

namespace {

MixingTerm term(std::array<int, 4> c, Channel ch = Channel::kGround1) { return {"t", c, ch}; }

std::array<Eigen::Vector3d, 4> dirs(const BeamGeometry& g) { return {g.r, g.rp, g.w, g.wp}; }

const TermReport& find(const std::vector<TermReport>& rows, const std::string& label, Channel ch) {
  for (const TermReport& r : rows)
    if (r.term.label == label && r.term.polarization_channel == ch) return r;
  throw std::runtime_error("missing term " + label);
}

}  // namespace

TEST_CASE("signal wavevectors in the counterpropagating geometry") {
  const BeamGeometry g = BeamGeometry::counterpropagating();
  const double k = g.wavenumber();
  CHECK((term_wavevector(term({1, 0, 1, -1}), g) + k * g.wp).norm() <= 1e-9 * k);
  CHECK((term_wavevector(term({2, -1, 1, -1}), g) + k * g.wp).norm() <= 1e-9 * k);
  CHECK((term_wavevector(term({1, 0, 0, 0}), g) - k * g.r).norm() == 0.0);
}

TEST_CASE("mismatch values") {
  const BeamGeometry g = BeamGeometry::counterpropagating(10e-3, 852e-9, 3e-3);
  CHECK(mismatch(term({1, 0, 1, -1}), g) <= 1e-9);
  CHECK(mismatch(term({1, 0, 0, 0}), g) <= 1e-9);
  CHECK(mismatch(term({0, 1, 0, 0}), g) <= 1e-9);

  const double mirror = mismatch(term({1, 0, -1, 1}), g);
  CHECK(mirror == doctest::Approx(oracle::mismatch({1, 0, -1, 1}, dirs(g), 852e-9, 3e-3)).epsilon(1e-9));
  // |-2 k_W + k_W'| = k sqrt(5 - 4 cos theta).
  const double closed = g.wavenumber() * 3e-3 * (std::sqrt(5.0 - 4.0 * std::cos(10e-3)) - 1.0);
  CHECK(mirror == doctest::Approx(closed).epsilon(1e-9));
  CHECK(mirror == doctest::Approx(2.2122601495971903).epsilon(1e-9));
}

TEST_CASE("mirror terms exceed pi at the pinned geometry" * doctest::test_suite("mirror-mismatch")) {
  const BeamGeometry g = BeamGeometry::counterpropagating(10e-3, 852e-9, 3e-3);
  CHECK(mismatch(term({1, 0, -1, 1}), g) > std::numbers::pi);
}

TEST_CASE("mismatch agrees with direct vector arithmetic for every candidate") {
  const BeamGeometry g = BeamGeometry::planar(7e-3, 2e-3, -3e-3, 780e-9, 2e-3);
  for (const MixingTerm& t : candidate_terms())
    CHECK(mismatch(t, g) == doctest::Approx(oracle::mismatch(t.coefficients, dirs(g), 780e-9, 2e-3)).epsilon(1e-9));
}

TEST_CASE("default geometry matches the two signals into -k_W' on opposite channels") {
  const std::vector<TermReport> rows = enumerate_terms(BeamGeometry::counterpropagating());
  CHECK(rows.size() == 20);
  int into = 0;
  for (const TermReport& r : rows)
    if (r.matched && !r.term.is_stimulated() && r.into_minus_wp) ++into;
  CHECK(into == 2);
  const TermReport& fwm = find(rows, "FWM_R+", Channel::kGround1);
  const TermReport& swm = find(rows, "SWM_R+", Channel::kGround2);
  CHECK(fwm.matched);
  CHECK(swm.matched);
  CHECK(fwm.into_minus_wp);
  CHECK(swm.into_minus_wp);
  CHECK(fwm.term.polarization_channel != swm.term.polarization_channel);
  // Same directions on the wrong channel are forbidden.
  CHECK_FALSE(find(rows, "FWM_R+", Channel::kGround2).allowed);
  CHECK_FALSE(find(rows, "SWM_R+", Channel::kGround1).allowed);
  // Matched rows are listed first.
  bool seen_unmatched = false;
  for (const TermReport& r : rows) {
    if (!r.matched) seen_unmatched = true;
    if (seen_unmatched) CHECK_FALSE(r.matched);
  }
}

TEST_CASE("R' along -W' moves the six-wave term off -k_W'") {
  const double theta = 10e-3;
  const BeamGeometry g = BeamGeometry::planar(theta, 0.0, -theta, 852e-9, 3e-3);
  CHECK((g.rp + g.wp).norm() < 1e-15);
  const TermReport& swm = find(enumerate_terms(g), "SWM_R+", Channel::kGround2);
  CHECK_FALSE((swm.matched && swm.into_minus_wp));
}

TEST_CASE("collinear writing beams make grating terms degenerate") {
  const BeamGeometry g = BeamGeometry::counterpropagating(0.0);
  CHECK((term_wavevector(term({1, 0, 1, -1}), g) - term_wavevector(term({1, 0, 0, 0}), g)).norm() == 0.0);
  CHECK((term_wavevector(term({0, 1, -1, 1}), g) - term_wavevector(term({0, 1, 0, 0}), g)).norm() == 0.0);
  for (const MixingTerm& t : candidate_terms()) CHECK(mismatch(t, g) <= 1e-9);
}

TEST_CASE("wavevector is linear in the coefficients") {
  const BeamGeometry g = BeamGeometry::planar(12e-3, 4e-3, -1e-3, 852e-9, 3e-3);
  const std::array<int, 4> a{2, -1, 1, -1}, b{-1, 3, 0, 2};
  std::array<int, 4> sum{}, scaled{};
  for (int i = 0; i < 4; ++i) {
    sum[i] = a[i] + b[i];
    scaled[i] = 3 * a[i];
  }
  const double k = g.wavenumber();
  CHECK((term_wavevector(term(sum), g) - term_wavevector(term(a), g) - term_wavevector(term(b), g)).norm() <= 1e-9 * k);
  CHECK((term_wavevector(term(scaled), g) - 3.0 * term_wavevector(term(a), g)).norm() <= 1e-9 * k);
}

TEST_CASE("mismatch is rotation invariant") {
  const BeamGeometry g = BeamGeometry::planar(10e-3, 1e-3, 2e-3, 852e-9, 3e-3);
  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()) * Eigen::AngleAxisd(-1.1, Eigen::Vector3d::UnitY()))
          .toRotationMatrix();
  BeamGeometry r = g;
  r.w = rot * g.w;
  r.wp = rot * g.wp;
  r.r = rot * g.r;
  r.rp = rot * g.rp;
  for (const MixingTerm& t : candidate_terms())
    CHECK(mismatch(t, r) == doctest::Approx(mismatch(t, g)).epsilon(1e-9).scale(1.0));
}

TEST_CASE("term properties and geometry validation") {
  CHECK(term({2, -1, 1, -1}).order() == 5);
  CHECK(term({1, 0, 0, 0}).is_stimulated());
  for (const MixingTerm& t : candidate_terms()) CHECK(t.order() <= 5);
  BeamGeometry g;
  g.w = {0, 0, 2};
  CHECK_THROWS_AS(g.validate(), DomainError);
  CHECK_THROWS_AS(BeamGeometry::planar(0.01, 0, 0, -1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(BeamGeometry::planar(0.01, 0, 0, 852e-9, 0.0), DomainError);
  CHECK(to_string(Channel::kGround1) == "sigma_1e");
}
