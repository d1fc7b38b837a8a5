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

#include "lambda_fwm/cli.hpp"

#include "lambda_fwm/bloch.hpp"
#include "lambda_fwm/errors.hpp"
#include "lambda_fwm/fit.hpp"
#include "lambda_fwm/phasematch.hpp"
#include "lambda_fwm/signals.hpp"
#include "lambda_fwm/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace lfwm {

namespace fs = std::filesystem;

std::string provenance_line(const std::string& subcommand, const RunConfig& config) {
  std::string text = print_config(config);
  std::string line = "# provenance: subcommand=" + subcommand;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l.empty() || l.front() == '[') continue;
    const auto eq = l.find(" = ");
    line += "; " + l.substr(0, eq) + "=" + l.substr(eq + 3);
  }
  return line;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::string& subcommand, const RunConfig& config, std::vector<std::string> columns)
      : width_(columns.size()) {
    text_ << provenance_line(subcommand, config) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) text_ << (i ? "," : "") << columns[i];
    text_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
  }
  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_number(v));
    row(s);
  }

  std::string str() const { return text_.str(); }

 private:
  std::size_t width_;
  std::ostringstream text_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  if (f.bad()) throw IoError("failed reading " + path);
  return s.str();
}

struct Context {
  const RunConfig& config;
  const CliFlags& flags;
  fs::path out_dir;
  std::ostream& out;

  SimulationSettings settings() const {
    SimulationSettings s;
    s.t_max = config.to_internal_time(config.t_max_us);
    s.dt = config.dt_gamma;
    s.n_phi = config.n_phi;
    s.threads = flags.threads;
    return s;
  }

  void emit(const std::string& name, const std::string& content) const {
    write_file(out_dir / name, content);
    out << "wrote " << (out_dir / name).string() << '\n';
  }

  // Gnuplot script plotting the named columns of a CSV against its first.
  void emit_plot(const std::string& csv, const std::vector<std::string>& columns,
                 const std::vector<std::string>& plotted, const std::string& xlabel, const std::string& ylabel) const {
    if (!flags.emit_plot) return;
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel '" << xlabel << "'\n"
       << "set ylabel '" << ylabel << "'\n"
       << "plot ";
    bool first = true;
    for (const std::string& name : plotted) {
      const auto at = std::find(columns.begin(), columns.end(), name);
      if (at == columns.end()) throw Error("plot column '" + name + "' not in " + csv);
      gp << (first ? "" : ", \\\n     ") << "'" << csv << "' using 1:" << (at - columns.begin()) + 1
         << " with lines";
      first = false;
    }
    gp << '\n';
    const std::string base = csv.substr(0, csv.rfind('.'));
    emit(base + ".gp", gp.str());
  }
};

void run_pulse(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const double i_t = c.i_r_isat + c.i_rp_isat;
  const PulseShapes p = pulse_shapes(i_t, c.i_r_isat, c.i_rp_isat, c.to_internal_time(c.tau_us), c.lambda_params(),
                                     c.grating(), ctx.settings());
  const PulsePair raw = p.raw_normalized();
  const PulsePair conv = p.convolved_normalized();
  const std::vector<std::string> cols{"time_us", "fwm_raw_norm", "swm_raw_norm", "fwm_conv_norm", "swm_conv_norm"};
  CsvWriter csv("pulse", c, cols);
  for (std::size_t i = 0; i < raw.fwm.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    csv.row(std::vector<double>{c.to_us(raw.fwm.time(i)), raw.fwm.values[k], raw.swm.values[k], conv.fwm.values[k],
                                conv.swm.values[k]});
  }
  ctx.emit("pulse.csv", csv.str());
  ctx.emit_plot("pulse.csv", cols, {cols.begin() + 1, cols.end()}, "time (us)", "intensity (norm)");
  ctx.out << "peak_fwm_raw_us = " << format_number(c.to_us(p.peak_time_fwm_raw)) << '\n'
          << "peak_swm_raw_us = " << format_number(c.to_us(p.peak_time_swm_raw)) << '\n'
          << "peak_fwm_conv_us = " << format_number(c.to_us(p.peak_time_fwm_conv)) << '\n'
          << "peak_swm_conv_us = " << format_number(c.to_us(p.peak_time_swm_conv)) << '\n';
}

void run_sweep(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = ctx.flags.points.value_or(c.points);
  const double i_t = c.sweep_i_t_isat;
  const SweepTable t = split_sweep(i_t, n, c.lambda_params(), c.grating(), ctx.settings());
  const std::vector<std::string> cols{"i_r_isat", "i_r_frac_norm", "u_fwm_au", "u_swm_au", "u_fwm_norm", "u_swm_norm"};
  CsvWriter csv("sweep", c, cols);
  for (const SweepRow& r : t.rows)
    csv.row(std::vector<double>{r.control, r.control / i_t, r.u_fwm, r.u_swm, r.u_fwm_norm, r.u_swm_norm});
  ctx.emit("sweep.csv", csv.str());
  ctx.emit_plot("sweep.csv", cols, {"u_fwm_norm", "u_swm_norm"}, "I_R (I_s)", "U / U_max");
  ctx.out << "u_max_au = " << format_number(t.u_max) << '\n';
}

void run_storage(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const int n = ctx.flags.points.value_or(c.storage_points);
  if (n < 2) throw DomainError("storage scan needs at least 2 points");
  const LambdaParams params = c.lambda_params();
  // Span in internal time; without dephasing fall back to a multiple of t_s.
  const double span = params.gamma_g > 0.0 ? c.storage_span / params.gamma_g
                                           : 10.0 * c.to_internal_time(c.t_s_us);
  std::vector<double> times(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) times[static_cast<std::size_t>(k)] = span * k / (n - 1);
  const SimulationSettings s = ctx.settings();
  const ReadoutDrive drive = c.readout();
  const FgFunctions fg = compute_fg(drive.i_t(), params, s);
  ReadoutDrive exact = drive;
  exact.i_rp = fg.i_t - drive.i_r;
  const SweepTable t = storage_sweep(times, fg, exact, c.grating(), params);
  const std::vector<std::string> cols{"t_s_us", "u_fwm_au", "u_swm_au", "u_fwm_norm", "u_swm_norm"};
  CsvWriter csv("storage", c, cols);
  for (const SweepRow& r : t.rows)
    csv.row(std::vector<double>{c.to_us(r.control), r.u_fwm, r.u_swm, r.u_fwm_norm, r.u_swm_norm});
  ctx.emit("storage.csv", csv.str());
  ctx.emit_plot("storage.csv", cols, {"u_fwm_norm", "u_swm_norm"}, "t_s (us)", "U / U(0)");
}

void run_scaling(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const int levels = ctx.flags.points.value_or(c.scaling_levels);
  if (levels < 2) throw DomainError("scaling probe needs at least 2 levels");
  std::vector<double> lambdas;
  for (int k = 0; k < levels; ++k) lambdas.push_back(std::ldexp(1.0, -k));
  const ScalingTable t =
      scaling_probe(lambdas, c.readout(), c.scaling_t_star, c.lambda_params(), c.grating(), ctx.settings());
  const std::vector<std::string> cols{"lambda_norm", "abs_fwm_au", "abs_swm_au"};
  CsvWriter csv("scaling", c, cols);
  for (const ScalingRow& r : t.rows) csv.row(std::vector<double>{r.lambda, r.abs_fwm, r.abs_swm});
  ctx.emit("scaling.csv", csv.str());
  if (ctx.flags.emit_plot) {
    std::ostringstream gp;
    gp << "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n"
       << "set xlabel 'lambda'\nset ylabel '|sigma| (a.u.)'\n"
       << "plot 'scaling.csv' using 1:2 with linespoints, \\\n     'scaling.csv' using 1:3 with linespoints\n";
    ctx.emit("scaling.gp", gp.str());
  }
  ctx.out << "slope_fwm = " << format_number(t.slope_fwm) << '\n'
          << "slope_swm = " << format_number(t.slope_swm) << '\n';
}

void run_phasematch(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const std::vector<TermReport> rows = enumerate_terms(c.beam_geometry(), c.geometry.threshold_rad);
  CsvWriter csv("phasematch", c,
                {"label", "c_r", "c_rp", "c_w", "c_wp", "channel", "allowed", "mismatch_rad", "matched",
                 "into_minus_wp"});
  int signals = 0;
  int into_wp = 0;
  for (const TermReport& r : rows) {
    const auto& k = r.term.coefficients;
    csv.row(std::vector<std::string>{r.term.label, std::to_string(k[0]), std::to_string(k[1]), std::to_string(k[2]),
                                     std::to_string(k[3]), to_string(r.term.polarization_channel),
                                     r.allowed ? "1" : "0", format_number(r.mismatch), r.matched ? "1" : "0",
                                     r.into_minus_wp ? "1" : "0"});
    if (r.matched && !r.term.is_stimulated()) {
      ++signals;
      if (r.into_minus_wp) ++into_wp;
      ctx.out << "matched " << r.term.label << " channel=" << to_string(r.term.polarization_channel)
              << " mismatch_rad=" << format_number(r.mismatch) << (r.into_minus_wp ? " into -k_W'" : "") << '\n';
    }
  }
  ctx.emit("phasematch.csv", csv.str());
  ctx.out << "matched_signal_terms = " << signals << '\n'
          << "matched_signal_terms_into_minus_wp = " << into_wp << '\n';
}

void run_extract_fg(const Context& ctx) {
  const RunConfig& c = ctx.config;
  const FgFunctions fg = compute_fg(c.i_r_isat + c.i_rp_isat, c.lambda_params(), ctx.settings());
  const std::vector<std::string> cols{"time_us", "f_re_au", "f_im_au", "g_re_au", "g_im_au"};
  CsvWriter csv("extract-fg", c, cols);
  for (std::size_t i = 0; i < fg.f_r.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Complex f = fg.f_r.values[k], g = fg.g_r.values[k];
    csv.row(std::vector<double>{c.to_us(fg.f_r.time(i)), f.real(), f.imag(), g.real(), g.imag()});
  }
  ctx.emit("fg.csv", csv.str());
  ctx.emit_plot("fg.csv", cols, {cols.begin() + 1, cols.end()}, "time (us)", "f, g (a.u.)");
}

void run_fit(const Context& ctx) {
  const RunConfig& c = ctx.config;
  if (ctx.flags.data_path.empty()) throw ConfigError(0, "fit needs --data PATH");
  FitProblem problem;
  read_trace_csv(read_file(ctx.flags.data_path), problem.time_us, problem.value);
  problem.channel = c.fit_channel == "swm" ? FitChannel::kSwm : FitChannel::kFwm;
  problem.split_fraction = c.fit_split;
  problem.gamma_e_mhz = c.gamma_e_mhz;
  problem.t_s_us = c.t_s_us;
  problem.lambda_params = c.lambda_params();
  problem.grating = c.grating();
  auto& p = problem.parameters;
  p[kTotalIntensity] = {0.5 * (c.fit_i_t_lo + c.fit_i_t_hi), c.fit_i_t_lo, c.fit_i_t_hi, true};
  p[kResponseTime] = {std::clamp(c.tau_us, c.fit_tau_lo_us, c.fit_tau_hi_us), c.fit_tau_lo_us, c.fit_tau_hi_us, true};
  p[kTimeOffset] = {std::clamp(0.0, c.fit_t0_lo_us, c.fit_t0_hi_us), c.fit_t0_lo_us, c.fit_t0_hi_us, true};
  p[kDephasing] = {problem.lambda_params.gamma_g, 0.0, 0.1, false};
  double peak = 0.0;
  for (double v : problem.value) peak = std::max(peak, v);
  p[kScale] = {peak > 0.0 ? peak : 1.0, 0.0, 10.0 * std::max(peak, 1.0), true};
  problem.validate();

  SimulationSettings s = ctx.settings();
  const FgCache cache = make_fit_cache(problem, s);
  const FitResult r = fit_trace(problem, cache);

  std::ostringstream report;
  report << provenance_line("fit", c) << '\n';
  for (std::size_t k = 0; k < kFitParameterCount; ++k)
    report << kFitParameterNames[k] << " = " << format_number(r.estimates[k]) << '\n';
  report << "ssr = " << format_number(r.ssr) << '\n'
         << "iterations = " << r.iterations << '\n'
         << "evaluations = " << r.evaluations << '\n'
         << "converged = " << (r.converged ? "true" : "false") << '\n'
         << "hit_bounds = " << (r.hit_bounds ? "true" : "false") << '\n';
  ctx.emit("fit_report.txt", report.str());
  ctx.out << report.str().substr(report.str().find('\n') + 1);

  const std::vector<double> model = ForwardModel(cache, problem).evaluate(r.estimates, problem.time_us);
  const std::vector<std::string> cols{"time_us", "data_au", "model_au"};
  CsvWriter csv("fit", c, cols);
  for (std::size_t i = 0; i < model.size(); ++i)
    csv.row(std::vector<double>{problem.time_us[i], problem.value[i], model[i]});
  ctx.emit("fit_model.csv", csv.str());
  ctx.emit_plot("fit_model.csv", cols, {"data_au", "model_au"}, "time (us)", "signal (a.u.)");
}

const std::map<std::string, std::function<void(const Context&)>>& handlers() {
  static const std::map<std::string, std::function<void(const Context&)>> kHandlers{
      {"pulse", run_pulse},       {"sweep", run_sweep},           {"storage", run_storage},
      {"scaling", run_scaling},   {"phasematch", run_phasematch}, {"extract-fg", run_extract_fg},
      {"fit", run_fit},
  };
  return kHandlers;
}

}  // namespace

int run_subcommand(const std::string& name, const RunConfig& config, const CliFlags& flags, std::ostream& out,
                   std::ostream& err) {
  const auto it = handlers().find(name);
  if (it == handlers().end()) {
    err << "error: unknown subcommand '" << name << "'\n";
    return kExitUsage;
  }
  try {
    const fs::path dir = flags.out_dir.empty() ? fs::path(config.output_dir) : fs::path(flags.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    it->second(Context{config, flags, dir, out});
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const IllPosedError& e) {
    err << "ill-posed: " << e.what() << '\n';
    return kExitIllPosed;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delayed four- and six-wave mixing readout of a stored ground-state coherence"};
  app.require_subcommand(1, 1);
  std::string config_path;
  CliFlags flags;
  int points = 0;
  unsigned threads = 1;
  const std::map<std::string, std::string> about{
      {"pulse", "raw and detector-convolved FWM/SWM pulse shapes"},
      {"sweep", "retrieved energies over the I_R / I_R' split at fixed I_t"},
      {"storage", "retrieved energies against storage time"},
      {"scaling", "low-intensity scaling of the signal amplitudes"},
      {"phasematch", "phase-matching report for the beam geometry"},
      {"extract-fg", "pulse-shape functions f_r, g_r"},
      {"fit", "fit a measured pulse trace"},
  };
  for (const std::string& name : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--points", points, "number of scan points")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--emit-plot", flags.emit_plot, "also write gnuplot scripts");
    if (name == "fit") sub->add_option("--data", flags.data_path, "measured trace, time_us,value CSV")->required();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  for (const CLI::App* sub : app.get_subcommands())
    if (sub->count("--points") > 0) flags.points = points;
  flags.threads = threads;

  RunConfig config;
  try {
    if (!config_path.empty()) config = parse_config(read_file(config_path));
  } catch (const ConfigError& e) {
    err << "config error: " << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return run_subcommand(name, config, flags, out, err);
}

}  // namespace lfwm
