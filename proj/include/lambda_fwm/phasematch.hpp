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

// Wavevector bookkeeping for the writing/reading beam geometry.

#include <Eigen/Dense>

#include <array>
#include <numbers>
#include <string>
#include <vector>

namespace lfwm {

struct BeamGeometry {
  Eigen::Vector3d w{0, 0, 1};
  Eigen::Vector3d wp{0, 0, 1};
  Eigen::Vector3d r{0, 0, -1};
  Eigen::Vector3d rp{0, 0, -1};
  double wavelength = 852e-9;  // m
  double length = 3e-3;        // m

  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
  void validate() const;

  // W along +z, W' tilted by theta in the x-z plane; R and R' tilted from -z
  // by their own angles in the same plane. Angles in radians.
  static BeamGeometry planar(double theta, double r_angle, double rp_angle, double wavelength, double length);
  // Both readout beams counterpropagating to W.
  static BeamGeometry counterpropagating(double theta = 10e-3, double wavelength = 852e-9, double length = 3e-3) {
    return planar(theta, 0.0, 0.0, wavelength, length);
  }
};

// The two optical transitions; |1> <-> |e> carries W and R', |2> <-> |e>
// carries W' and R, with opposite circular polarisations.
enum class Channel { kGround1, kGround2 };

std::string to_string(Channel c);

struct MixingTerm {
  std::string label;
  // Multiplicities of k_R, k_R', k_W, k_W'.
  std::array<int, 4> coefficients{};
  Channel polarization_channel = Channel::kGround1;

  int order() const;
  bool is_stimulated() const { return coefficients[2] == 0 && coefficients[3] == 0; }
  // Angular momentum balance: the term can radiate on this channel.
  bool allowed() const;
};

Eigen::Vector3d term_wavevector(const MixingTerm& term, const BeamGeometry& geom);

// | |sum c_X k_X| - k0 | * L
double mismatch(const MixingTerm& term, const BeamGeometry& geom);

struct TermReport {
  MixingTerm term;
  Eigen::Vector3d wavevector;
  double mismatch = 0.0;
  bool allowed = false;
  bool matched = false;        // allowed and mismatch <= threshold
  bool into_minus_wp = false;  // wavevector direction is -k_W'
};

// Candidate set {stimulated} + one grating order + one R/R' exchange, each on
// both channels, sorted matched-first then by mismatch.
std::vector<TermReport> enumerate_terms(const BeamGeometry& geom, double threshold = std::numbers::pi);

// Canonical candidate terms (without a channel assignment).
std::vector<MixingTerm> candidate_terms();

}  // namespace lfwm
