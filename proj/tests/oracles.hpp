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

// Reference computations used only by the tests. Each one is written without
// the library's numerical kernels: the master equation is assembled as a 9x9
// superoperator and propagated by matrix exponential, convolution is a direct
// double sum, phase harmonics come from a direct Fourier sum.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Mat9 = Eigen::Matrix<cd, 9, 9>;
using Vec9 = Eigen::Matrix<cd, 9, 1>;

inline Eigen::Vector3cd ket(int i) {
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  v(i) = 1.0;
  return v;
}

// |i><j|
inline Mat3 op(int i, int j) { return ket(i) * ket(j).adjoint(); }

// Basis {|1>, |2>, |e>} = indices {0, 1, 2}. R couples |2>-|e>, R' couples |1>-|e>.
inline Mat3 hamiltonian(double omega_r, double phi_r, double omega_rp, double phi_rp) {
  const Mat3 up = -0.5 * omega_r * std::polar(1.0, phi_r) * op(2, 1) - 0.5 * omega_rp * std::polar(1.0, phi_rp) * op(2, 0);
  return up + up.adjoint();
}

// Kronecker product of two 3x3 matrices.
inline Mat9 kron(const Mat3& a, const Mat3& b) {
  Mat9 k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return k;
}

// Column-stacking vec: vec(A X B) = (B^T kron A) vec(X).
inline Vec9 vec(const Mat3& m) { return Eigen::Map<const Vec9>(m.data()); }
inline Mat3 unvec(const Vec9& v) { return Eigen::Map<const Mat3>(v.data()); }

// d vec(rho)/dt = L vec(rho). Decay |e> -> |1>, |2> and ground dephasing,
// all as Lindblad jumps.
inline Mat9 liouvillian(const Mat3& h, double gamma_e, double b1, double b2, double gamma_g) {
  const Mat3 id = Mat3::Identity();
  Mat9 l = cd(0, -1) * (kron(id, h) - kron(h.transpose(), id));
  const std::array<Mat3, 3> jumps{std::sqrt(gamma_e * b1) * op(0, 2), std::sqrt(gamma_e * b2) * op(1, 2),
                                  std::sqrt(gamma_g / 2) * (op(0, 0) - op(1, 1))};
  for (const Mat3& c : jumps) {
    const Mat3 cdc = c.adjoint() * c;
    l += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
  }
  return l;
}

inline Mat3 propagate(const Mat9& l, const Mat3& rho0, double t) {
  const Mat9 u = (l * t).exp();
  return unvec(u * vec(rho0));
}

// Exact state at a set of times.
inline std::vector<Mat3> trajectory(const Mat9& l, const Mat3& rho0, const std::vector<double>& times) {
  std::vector<Mat3> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(propagate(l, rho0, t));
  return out;
}

// Stored grating <1|rho|2> = a e^{-i phi_g}, populations p1, p2.
inline Mat3 grating(cd a, double phi_g, double p1, double p2) {
  Mat3 rho = Mat3::Zero();
  rho(0, 0) = p1;
  rho(1, 1) = p2;
  rho(0, 1) = a * std::polar(1.0, -phi_g);
  rho(1, 0) = std::conj(rho(0, 1));
  return rho;
}

// Phase harmonic c_{m,n}(t) of <g|rho|e> by direct Fourier sum over an
// n x n lattice of (phi_g, Delta), exact propagation at time t.
inline cd harmonic(int ground, int m, int n_order, int n_phi, double omega_r, double omega_rp, cd a, double p1,
                   double p2, double gamma_g, double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  cd sum = 0.0;
  for (int j = 0; j < n_phi; ++j)
    for (int k = 0; k < n_phi; ++k) {
      const double phi_g = two_pi * j / n_phi;
      const double delta = two_pi * k / n_phi;
      const Mat9 l = liouvillian(hamiltonian(omega_r, 0.0, omega_rp, delta), 1.0, 0.5, 0.5, gamma_g);
      const Mat3 rho = propagate(l, grating(a, phi_g, p1, p2), t);
      sum += rho(ground, 2) * std::polar(1.0, -(m * phi_g + n_order * delta));
    }
  return sum / static_cast<double>(n_phi * n_phi);
}

// y_n = sum_k w_k x_{n-k}, w_k = (1 - a) a^k, a = exp(-dt / tau).
inline std::vector<double> direct_convolve(const std::vector<double>& x, double dt, double tau) {
  const double a = std::exp(-dt / tau);
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n)
    for (std::size_t k = 0; k <= n; ++k) y[n] += (1.0 - a) * std::pow(a, static_cast<double>(k)) * x[n - k];
  return y;
}

inline double trapezoid(const std::vector<double>& y, double dt) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * dt;
}

// L * | |sum c_i k_i| - k |
inline double mismatch(const std::array<int, 4>& c, const std::array<Eigen::Vector3d, 4>& dirs, double wavelength,
                       double length) {
  const double k = 2.0 * std::numbers::pi / wavelength;
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (int i = 0; i < 4; ++i) total += c[i] * k * dirs[i];
  return std::abs(total.norm() - k) * length;
}

}  // namespace oracle
