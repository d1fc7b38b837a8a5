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

#include "lambda_fwm/phasematch.hpp"

#include "lambda_fwm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lfwm {

void BeamGeometry::validate() const {
  for (const Eigen::Vector3d* v : {&w, &wp, &r, &rp})
    if (std::abs(v->norm() - 1.0) > 1e-12) throw DomainError("beam directions must be unit vectors");
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (!(length > 0.0)) throw DomainError("interaction length must be positive");
}

BeamGeometry BeamGeometry::planar(double theta, double r_angle, double rp_angle, double wavelength, double length) {
  BeamGeometry g;
  g.w = {0.0, 0.0, 1.0};
  g.wp = {std::sin(theta), 0.0, std::cos(theta)};
  g.r = {std::sin(r_angle), 0.0, -std::cos(r_angle)};
  g.rp = {std::sin(rp_angle), 0.0, -std::cos(rp_angle)};
  g.wavelength = wavelength;
  g.length = length;
  g.validate();
  return g;
}

std::string to_string(Channel c) { return c == Channel::kGround1 ? "sigma_1e" : "sigma_2e"; }

int MixingTerm::order() const {
  int s = 0;
  for (int c : coefficients) s += std::abs(c);
  return s;
}

bool MixingTerm::allowed() const {
  // Photon charges: R -1, R' +1, W +1, W' -1.
  constexpr std::array<int, 4> kCharge{-1, +1, +1, -1};
  int q = 0;
  for (std::size_t i = 0; i < 4; ++i) q += coefficients[i] * kCharge[i];
  return q == (polarization_channel == Channel::kGround1 ? +1 : -1);
}

Eigen::Vector3d term_wavevector(const MixingTerm& term, const BeamGeometry& geom) {
  const auto& c = term.coefficients;
  return geom.wavenumber() * (c[0] * geom.r + c[1] * geom.rp + c[2] * geom.w + c[3] * geom.wp);
}

double mismatch(const MixingTerm& term, const BeamGeometry& geom) {
  return std::abs(term_wavevector(term, geom).norm() - geom.wavenumber()) * geom.length;
}

std::vector<MixingTerm> candidate_terms() {
  std::vector<MixingTerm> terms{
      {"STIM_R", {1, 0, 0, 0}},      {"STIM_RP", {0, 1, 0, 0}},    {"FWM_R+", {1, 0, 1, -1}},
      {"FWM_R-", {1, 0, -1, 1}},     {"FWM_RP+", {0, 1, 1, -1}},   {"FWM_RP-", {0, 1, -1, 1}},
      {"SWM_R+", {2, -1, 1, -1}},    {"SWM_R-", {2, -1, -1, 1}},   {"SWM_RP+", {-1, 2, 1, -1}},
      {"SWM_RP-", {-1, 2, -1, 1}},
  };
  return terms;
}

std::vector<TermReport> enumerate_terms(const BeamGeometry& geom, double threshold) {
  geom.validate();
  const Eigen::Vector3d minus_wp = -geom.wp;
  std::vector<TermReport> out;
  for (const MixingTerm& base : candidate_terms()) {
    for (Channel ch : {Channel::kGround1, Channel::kGround2}) {
      TermReport r;
      r.term = base;
      r.term.polarization_channel = ch;
      r.wavevector = term_wavevector(r.term, geom);
      r.mismatch = mismatch(r.term, geom);
      r.allowed = r.term.allowed();
      r.matched = r.allowed && r.mismatch <= threshold;
      const double norm = r.wavevector.norm();
      r.into_minus_wp = norm > 0.0 && (r.wavevector / norm - minus_wp).norm() < 1e-9;
      out.push_back(std::move(r));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TermReport& a, const TermReport& b) {
    if (a.matched != b.matched) return a.matched;
    return a.mismatch < b.mismatch;
  });
  return out;
}

}  // namespace lfwm
