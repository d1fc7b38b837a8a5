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

#include "lambda_fwm/config.hpp"

#include "lambda_fwm/bloch.hpp"
#include "lambda_fwm/errors.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <variant>
#include <vector>

namespace lfwm {

double RunConfig::gamma_rad_per_us() const { return 2.0 * std::numbers::pi * gamma_e_mhz; }

LambdaParams RunConfig::lambda_params() const {
  LambdaParams p;
  p.gamma_e = 1.0;
  p.gamma_g = gamma_g_khz * 1e-3 / gamma_e_mhz;
  p.branch_1 = branch_1;
  p.branch_2 = 1.0 - branch_1;
  return p;
}

StoredGrating RunConfig::grating() const {
  const DensityMatrix3 rho = dark_state(std::sqrt(write_ratio), 1.0);
  return grating_from_state(rho, 0.0, to_internal_time(t_s_us));
}

BeamGeometry RunConfig::beam_geometry() const {
  return BeamGeometry::planar(geometry.theta_mrad * 1e-3, geometry.r_angle_mrad * 1e-3,
                              geometry.rp_angle_mrad * 1e-3, geometry.lambda_nm * 1e-9, geometry.length_mm * 1e-3);
}

namespace {

using Member = std::variant<double RunConfig::*, int RunConfig::*, std::string RunConfig::*,
                            double GeometryConfig::*>;

struct Field {
  const char* key;
  Member member;
  bool nonnegative;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields{
      {"gamma_e_mhz", &RunConfig::gamma_e_mhz, true},
      {"gamma_g_khz", &RunConfig::gamma_g_khz, true},
      {"branch_1", &RunConfig::branch_1, true},
      {"write_ratio", &RunConfig::write_ratio, true},
      {"i_r_isat", &RunConfig::i_r_isat, true},
      {"i_rp_isat", &RunConfig::i_rp_isat, true},
      {"sweep_i_t_isat", &RunConfig::sweep_i_t_isat, true},
      {"t_s_us", &RunConfig::t_s_us, true},
      {"tau_us", &RunConfig::tau_us, true},
      {"t_max_us", &RunConfig::t_max_us, true},
      {"dt_gamma", &RunConfig::dt_gamma, true},
      {"n_phi", &RunConfig::n_phi, true},
      {"points", &RunConfig::points, true},
      {"storage_points", &RunConfig::storage_points, true},
      {"storage_span", &RunConfig::storage_span, true},
      {"scaling_t_star", &RunConfig::scaling_t_star, true},
      {"scaling_levels", &RunConfig::scaling_levels, true},
      {"fit_channel", &RunConfig::fit_channel, false},
      {"fit_split", &RunConfig::fit_split, true},
      {"fit_i_t_lo", &RunConfig::fit_i_t_lo, true},
      {"fit_i_t_hi", &RunConfig::fit_i_t_hi, true},
      {"fit_tau_lo_us", &RunConfig::fit_tau_lo_us, true},
      {"fit_tau_hi_us", &RunConfig::fit_tau_hi_us, true},
      {"fit_t0_lo_us", &RunConfig::fit_t0_lo_us, false},
      {"fit_t0_hi_us", &RunConfig::fit_t0_hi_us, false},
      {"output_dir", &RunConfig::output_dir, false},
      {"theta_mrad", &GeometryConfig::theta_mrad, true},
      {"r_angle_mrad", &GeometryConfig::r_angle_mrad, false},
      {"rp_angle_mrad", &GeometryConfig::rp_angle_mrad, false},
      {"lambda_nm", &GeometryConfig::lambda_nm, true},
      {"length_mm", &GeometryConfig::length_mm, true},
      {"threshold_rad", &GeometryConfig::threshold_rad, true},
  };
  return kFields;
}

bool in_geometry(const Field& f) { return std::holds_alternative<double GeometryConfig::*>(f.member); }

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, int line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(line, "malformed number '" + std::string(text) + "'");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(v)) throw ConfigError(line, "non-finite number '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

RunConfig parse_config(std::string_view text, bool use_defaults) {
  RunConfig cfg;
  std::set<std::string> seen;
  bool geometry = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[geometry]") throw ConfigError(line_no, "unknown section " + std::string(line));
      if (geometry) throw ConfigError(line_no, "duplicate [geometry] section");
      geometry = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    const Field* field = nullptr;
    for (const Field& f : fields())
      if (key == f.key) field = &f;
    if (field == nullptr) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (in_geometry(*field) != geometry)
      throw ConfigError(line_no, "key '" + key + "' belongs " + (geometry ? "before" : "in") + " the [geometry] section");
    if (!seen.insert(key).second) throw ConfigError(line_no, "duplicate key '" + key + "'");

    std::visit(
        [&](auto member) {
          using M = decltype(member);
          if constexpr (std::is_same_v<M, std::string RunConfig::*>) {
            if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
            cfg.*member = std::string(value);
          } else if constexpr (std::is_same_v<M, int RunConfig::*>) {
            const int v = parse_number<int>(value, line_no);
            if (field->nonnegative && v < 0) throw ConfigError(line_no, "'" + key + "' must be nonnegative");
            cfg.*member = v;
          } else {
            const double v = parse_number<double>(value, line_no);
            if (field->nonnegative && v < 0.0) throw ConfigError(line_no, "'" + key + "' must be nonnegative");
            if constexpr (std::is_same_v<M, double GeometryConfig::*>)
              cfg.geometry.*member = v;
            else
              cfg.*member = v;
          }
        },
        field->member);
  }
  if (!use_defaults)
    for (const Field& f : fields())
      if (!seen.count(f.key)) throw ConfigError(0, std::string("missing required key '") + f.key + "'");
  if (cfg.fit_channel != "fwm" && cfg.fit_channel != "swm")
    throw ConfigError(0, "fit_channel must be 'fwm' or 'swm'");
  if (cfg.branch_1 > 1.0) throw ConfigError(0, "branch_1 must not exceed 1");
  return cfg;
}

std::string print_config(const RunConfig& cfg) {
  std::ostringstream out;
  bool geometry = false;
  for (const Field& f : fields()) {
    if (in_geometry(f) && !geometry) {
      out << "\n[geometry]\n";
      geometry = true;
    }
    out << f.key << " = ";
    std::visit(
        [&](auto member) {
          using M = decltype(member);
          if constexpr (std::is_same_v<M, std::string RunConfig::*>)
            out << cfg.*member;
          else if constexpr (std::is_same_v<M, int RunConfig::*>)
            out << cfg.*member;
          else if constexpr (std::is_same_v<M, double GeometryConfig::*>)
            out << format_number(cfg.geometry.*member);
          else
            out << format_number(cfg.*member);
        },
        f.member);
    out << '\n';
  }
  return out.str();
}

}  // namespace lfwm
