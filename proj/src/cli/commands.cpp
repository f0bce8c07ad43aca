// Copyright 2026 The nvscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nvscope/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nvscope/analysis.hpp"
#include "nvscope/cli/io.hpp"
#include "nvscope/constants.hpp"
#include "nvscope/dsl.hpp"
#include "nvscope/experiments.hpp"
#include "nvscope/xy_model.hpp"

namespace nvscope::cli {

using nlohmann::json;

namespace {

// Bad flag combinations found after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Outcome {
  json record;
  Table trace;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> plot;
};

// Runs an analysis stage; any library error inside it counts as an analysis failure.
template <class F>
auto analysis_stage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const AnalysisError&) {
    throw;
  } catch (const Error& e) {
    throw AnalysisError(e.what());
  }
}

double proton_larmor_mhz(const SpinSystem& system) {
  return larmor_frequency(PhysicalConstants::standard().gamma_h_khz_per_mt, system.b0_mt);
}

json peaks_json(const std::vector<Peak>& peaks) {
  json out = json::array();
  for (const auto& p : peaks) out.push_back({{"freq_mhz", p.freq_mhz}, {"magnitude", p.magnitude}});
  return out;
}

json components_json(const SinusoidFit& fit) {
  json out = json::array();
  for (const auto& c : fit.components) {
    out.push_back({{"freq_mhz", c.freq_mhz},
                   {"freq_khz", c.freq_mhz * 1e3},
                   {"amplitude", c.amplitude},
                   {"phase_rad", c.phase_rad},
                   {"decay_per_us", c.decay_per_us}});
  }
  return out;
}

json provenance_json(const std::vector<ProvenanceStep>& steps) {
  json out = json::array();
  for (const auto& s : steps) out.push_back({{"stage", s.stage}, {"values", s.values}});
  return out;
}

json hyperfine_json(const HyperfineEstimate& h) {
  return {{"a_par_khz", h.a_par_khz},
          {"a_perp_khz", h.a_perp_khz},
          {"closed_form", {{"a_par_khz", h.closed_par_khz}, {"a_perp_khz", h.closed_perp_khz}}},
          {"numerical", {{"a_par_khz", h.numeric_par_khz}, {"a_perp_khz", h.numeric_perp_khz}}},
          {"newton_iterations", h.newton_iterations}};
}

json localization_json(const Localization& loc) {
  return {{"hyperfine", hyperfine_json(loc.hyperfine)},
          {"geometry", {{"r_nm", loc.geometry.r_nm}, {"theta_deg", loc.geometry.theta_deg}}},
          {"provenance", provenance_json(loc.provenance)}};
}

// The two components of a correlation fit as (f0, f1): f0 is the one nearest
// the reference when given, else the stronger one.
std::pair<double, double> assign_branches(const SinusoidFit& fit, std::optional<double> reference_mhz) {
  const auto& a = fit.components.at(0);
  const auto& b = fit.components.at(1);
  bool a_is_f0 = false;
  if (reference_mhz) {
    a_is_f0 = std::abs(a.freq_mhz - *reference_mhz) <= std::abs(b.freq_mhz - *reference_mhz);
  } else {
    a_is_f0 = std::abs(a.amplitude) >= std::abs(b.amplitude);
  }
  return a_is_f0 ? std::pair{a.freq_mhz, b.freq_mhz} : std::pair{b.freq_mhz, a.freq_mhz};
}

Table two_column(const std::string& axis, const std::vector<double>& x, const std::string& value,
                 const std::vector<double>& y) {
  Table t;
  t.header = {axis, value};
  t.columns = {x, y};
  return t;
}

double readout_contrast(const SimulationOptions& options) {
  return options.readout.mode == ReadoutMode::Ideal ? 1.0 : options.readout.contrast;
}

Outcome run_xy_spectrum(const ExperimentConfig& cfg, const XySpectrumExperiment& e, const SimulationOptions& opt) {
  const auto r = sweep_tau(cfg.system, e.n_pulses, tau_grid_for_frequencies(e.freq_mhz), opt);
  Outcome o;
  o.trace = two_column(r.axis_name, r.axis_values, "p0", r.p0_values);
  o.record["derived"] = analysis_stage([&] {
    const auto dip = find_dip(r.axis_values, r.p0_values);
    return json{{"dip_center_mhz", dip.center}, {"dip_depth", dip.depth}, {"dip_min_p0", dip.min_value},
                {"n_pulses", e.n_pulses}};
  });
  o.title = "XY16-" + std::to_string(e.n_pulses) + " spectrum";
  o.x_label = "1/(2 tau) [MHz]";
  o.y_label = "P0";
  o.plot = {{"P0", r.axis_values, r.p0_values}};
  return o;
}

Outcome run_pulse_sweep(const ExperimentConfig& cfg, const PulseSweepExperiment& e, const SimulationOptions& opt) {
  const auto r = sweep_pulses(cfg.system, e.tau_us, e.n_pulses, opt);
  Outcome o;
  o.trace = two_column(r.axis_name, r.axis_values, "p0", r.p0_values);
  o.record["derived"] = analysis_stage([&] {
    std::vector<double> t;
    for (double n : r.axis_values) t.push_back(n * e.tau_us);
    const double dt = uniform_step(t);
    SinusoidFitOptions fo;
    fo.t0_us = t.front();
    const auto fit = fit_damped_sinusoid(r.p0_values, dt, 1, fo);
    json d{{"tau_us", e.tau_us}, {"f_osc_khz", fit.components[0].freq_mhz * 1e3}, {"fit", components_json(fit)},
           {"offset", fit.offset}, {"residual_norm", fit.residual_norm}};
    if (cfg.system.n_nuclei() == 1) {
      const auto& n = cfg.system.nuclei[0];
      d["model_f_osc_khz"] =
          xy_oscillation_khz(cfg.system.larmor_mhz(0), n.hyperfine.par_khz, n.hyperfine.perp_khz, e.tau_us);
    }
    return d;
  });
  o.title = "P0 against pulse number";
  o.x_label = "N";
  o.y_label = "P0";
  o.plot = {{"P0", r.axis_values, r.p0_values}};
  return o;
}

Outcome run_correlation(const ExperimentConfig& cfg, const CorrelationExperiment& e, const SimulationOptions& opt) {
  const auto r = sweep_correlation(cfg.system, e.tau_us, e.t_corr_us, opt, e.block_pulses);
  Outcome o;
  o.trace = two_column(r.axis_name, r.axis_values, "p0", r.p0_values);
  o.record["derived"] = analysis_stage([&] {
    const double dt = uniform_step(r.axis_values);
    const double f_h = proton_larmor_mhz(cfg.system);
    const auto spec = spectrum(r.p0_values, dt);
    SinusoidFitOptions fo;
    fo.t0_us = r.axis_values.front();
    const auto fit = fit_damped_sinusoid(r.p0_values, dt, 2, fo);
    const auto [f0, f1] = assign_branches(fit, f_h);
    json d{{"peaks", peaks_json(find_peaks(spec))},
           {"fit", components_json(fit)},
           {"f0_mhz", f0},
           {"f1_mhz", f1},
           {"f0_minus_f1_khz", (f0 - f1) * 1e3}};
    if (e.inversion) {
      const auto h = hyperfine_from_correlation(f0, f1, e.inversion->f_osc_khz, e.inversion->tau_us, f_h);
      d["localization"] = localization_json(localize(h, PhysicalConstants::standard()));
    }
    return d;
  });
  o.title = "Correlation signal";
  o.x_label = "t_corr [us]";
  o.y_label = "P0";
  o.plot = {{"P0", r.axis_values, r.p0_values}};
  return o;
}

Outcome run_b0_sweep(const ExperimentConfig& cfg, const B0SweepExperiment& e, const SimulationOptions& opt) {
  const auto points = sweep_b0(cfg.system, e.b0_mt, opt, e.nucleus, e.n_pulses);
  Outcome o;
  std::vector<double> b0, f0, f1, fxy;
  for (const auto& p : points) {
    b0.push_back(p.b0_mt);
    f0.push_back(p.f0_mhz);
    f1.push_back(p.f1_mhz);
    fxy.push_back(p.f_xy_mhz);
  }
  o.trace.header = {"b0_mt", "f_xy_mhz", "f0_mhz", "f1_mhz"};
  o.trace.columns = {b0, fxy, f0, f1};
  o.record["derived"] = analysis_stage([&] {
    json table = json::array();
    for (const auto& p : points) {
      table.push_back({{"b0_mt", p.b0_mt},
                       {"f0_mhz", p.f0_mhz},
                       {"f1_mhz", p.f1_mhz},
                       {"f_xy_mhz", p.f_xy_mhz},
                       {"f_xy_minus_f0_khz", (p.f_xy_mhz - p.f0_mhz) * 1e3}});
    }
    json d{{"table", table}};
    if (points.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < b0.size(); ++i) mx += b0[i], my += fxy[i];
      mx /= static_cast<double>(b0.size());
      my /= static_cast<double>(b0.size());
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < b0.size(); ++i) {
        sxy += (b0[i] - mx) * (fxy[i] - my);
        sxx += (b0[i] - mx) * (b0[i] - mx);
      }
      if (sxx > 0) d["f_xy_slope_khz_per_mt"] = sxy / sxx * 1e3;
    }
    return d;
  });
  o.title = "XY16 dip against field";
  o.x_label = "B0 [mT]";
  o.y_label = "frequency [MHz]";
  o.plot = {{"f_xy", b0, fxy}, {"f0", b0, f0}, {"f1", b0, f1}};
  return o;
}

Outcome run_pulsepol(const ExperimentConfig& cfg, const PulsePolExperiment& e, const SimulationOptions& opt) {
  std::vector<double> tau_pol;
  for (double f : e.inverse_2tau_pol_mhz) tau_pol.push_back(1.0 / (2.0 * f));
  const auto r = sweep_pulsepol(cfg.system, tau_pol, e.repeats, opt);
  Outcome o;
  o.trace = two_column(r.axis_name, r.axis_values, "p0", r.p0_values);
  o.record["derived"] = analysis_stage([&] {
    const auto dip = find_dip(r.axis_values, r.p0_values);
    return json{{"dip_center_mhz", dip.center},
                {"dip_depth", dip.depth},
                {"dip_min_p0", dip.min_value},
                {"resonance_mhz", 3.0 * dip.center},
                {"repeats", e.repeats}};
  });
  o.title = "PulsePol spectrum";
  o.x_label = "1/(2 tau_pol) [MHz]";
  o.y_label = "P0";
  o.plot = {{"P0", r.axis_values, r.p0_values}};
  return o;
}

Outcome run_transient(const ExperimentConfig& cfg, const TransientExperiment& e, const SimulationOptions& opt) {
  const auto r = polarization_transient(cfg.system, 0.5 * e.two_tau_pol_us, e.n_blocks, e.repeats, opt);
  const auto& s = r.series;
  Outcome o;
  o.trace = two_column(s.axis_name, s.axis_values, "p0", s.p0_values);
  o.record["derived"] = analysis_stage([&] {
    const auto fit = nspin_curve(s.p0_values, r.block_duration_us, readout_contrast(opt));
    return json{{"n_spin_sat", fit.n_spin_sat},
                {"t_c_us", fit.t_c_us},
                {"p0_sat", fit.p0_sat},
                {"tail_slope", fit.tail_slope},
                {"block_duration_us", r.block_duration_us},
                {"t_us", fit.t_us},
                {"n_spin", fit.n_spin}};
  });
  o.title = "Polarization transient";
  o.x_label = "block";
  o.y_label = "P0";
  o.plot = {{"P0", s.axis_values, s.p0_values}};
  return o;
}

Outcome run_rabi(const ExperimentConfig& cfg, const RabiExperiment& e, const SimulationOptions& opt) {
  const auto r = simulate_rabi(cfg.system, e.spec, e.t_rf_us, opt);
  Outcome o;
  o.trace = two_column(r.axis_name, r.axis_values, "p0", r.p0_values);
  o.record["derived"] = analysis_stage([&] {
    const double dt = uniform_step(r.axis_values);
    SinusoidFitOptions fo;
    fo.t0_us = r.axis_values.front();
    const auto fit = fit_damped_sinusoid(r.p0_values, dt, 1, fo);
    const double f = fit.components[0].freq_mhz;
    return json{{"rabi_khz", f * 1e3}, {"pi_half_us", 1.0 / (4.0 * f)}, {"fit", components_json(fit)},
                {"offset", fit.offset}};
  });
  o.title = "Nuclear Rabi oscillation";
  o.x_label = "T_rf [us]";
  o.y_label = "P0";
  o.plot = {{"P0", r.axis_values, r.p0_values}};
  return o;
}

Outcome run_fid(const ExperimentConfig& cfg, const FidExperiment& e, const SimulationOptions& opt) {
  const auto r = simulate_fid_pair(cfg.system, e.spec, opt);
  Outcome o;
  o.trace.header = {"t_us", "difference", "poly", "polx"};
  o.trace.columns = {r.t_us, r.difference, r.poly, r.polx};
  o.record["derived"] = analysis_stage([&] {
    const double f_h = proton_larmor_mhz(cfg.system);
    SpectrumOptions so;
    so.zone = e.zone ? *e.zone : nyquist_zone(f_h, r.sample_rate_mhz);
    const auto spec = spectrum(r.difference, e.spec.t_l_us, so);
    json d{{"sample_rate_mhz", r.sample_rate_mhz}, {"zone", *so.zone}, {"peaks", peaks_json(find_peaks(spec))}};
    if (cfg.system.n_nuclei() >= 1) {
      const double f0 = branch_precession_mhz(cfg.system, 0, NvBranch::Zero);
      const double f1 = branch_precession_mhz(cfg.system, 0, NvBranch::MinusOne);
      d["f_p_predicted_mhz"] = predict_fp(f0, f1, 16.0 * e.spec.tau_us, e.spec.t_l_us);
    }
    return d;
  });
  o.title = "FID (PolY - PolX)";
  o.x_label = "t [us]";
  o.y_label = "P0 difference";
  o.plot = {{"PolY - PolX", r.t_us, r.difference}};
  return o;
}

Outcome run_outcome(const ExperimentConfig& cfg, unsigned threads) {
  SimulationOptions opt = cfg.options;
  opt.threads = std::max(1u, threads);
  Outcome o = std::visit(
      [&](const auto& e) -> Outcome {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, XySpectrumExperiment>) return run_xy_spectrum(cfg, e, opt);
        if constexpr (std::is_same_v<T, PulseSweepExperiment>) return run_pulse_sweep(cfg, e, opt);
        if constexpr (std::is_same_v<T, CorrelationExperiment>) return run_correlation(cfg, e, opt);
        if constexpr (std::is_same_v<T, B0SweepExperiment>) return run_b0_sweep(cfg, e, opt);
        if constexpr (std::is_same_v<T, PulsePolExperiment>) return run_pulsepol(cfg, e, opt);
        if constexpr (std::is_same_v<T, TransientExperiment>) return run_transient(cfg, e, opt);
        if constexpr (std::is_same_v<T, RabiExperiment>) return run_rabi(cfg, e, opt);
        if constexpr (std::is_same_v<T, FidExperiment>) return run_fid(cfg, e, opt);
      },
      cfg.experiment);
  const std::uint64_t seed = cfg.options.readout.seed;
  o.record["toolkit"] = "nvscope";
  o.record["version"] = version();
  o.record["config_fingerprint"] = fingerprint(json{{"config", cfg.source}, {"seed", seed}});
  o.record["experiment"] = cfg.kind;
  o.record["seed"] = seed;
  o.record["axis"] = o.trace.header.at(0);
  o.record["axis_values"] = o.trace.columns.at(0);
  o.record["value_name"] = o.trace.header.at(1);
  o.record["values"] = o.trace.columns.at(1);
  return o;
}

void report_error(std::ostream& err, const char* category, const std::string& message,
                  const json& extra = json::object()) {
  json e{{"error", category}, {"message", message}};
  e.update(extra);
  err << e.dump() << '\n';
}

std::string read_stream(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---- run -------------------------------------------------------------------

struct RunFlags {
  std::string config;
  std::optional<long long> seed;
  int threads = 0;
  std::string out_dir;
};

int cmd_run(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(flags.config);
  } catch (const ConfigError& e) {
    report_error(err, "schema", e.what(), {{"pointer", e.pointer()}});
    return kExitUsage;
  }
  if (flags.seed) {
    if (*flags.seed < 0) {
      report_error(err, "usage", "--seed must be >= 0");
      return kExitUsage;
    }
    cfg.options.readout.seed = static_cast<std::uint64_t>(*flags.seed);
  }
  if (!flags.out_dir.empty()) cfg.output.dir = flags.out_dir;

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run_outcome(cfg, resolve_threads(flags.threads));
  } catch (const AnalysisError& e) {
    report_error(err, "analysis", e.what());
    return kExitAnalysis;
  } catch (const Error& e) {
    report_error(err, "simulation", e.what());
    return kExitSimulation;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.record["wall_time_s"] = wall;

  namespace fs = std::filesystem;
  try {
    const fs::path dir(cfg.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "'");
    write_atomic((dir / "results.json").string(), o.record.dump(2) + "\n");
    if (cfg.output.csv) write_atomic((dir / "trace.csv").string(), format_csv(o.trace));
    if (cfg.output.svg) {
      write_atomic((dir / "plot.svg").string(), render_svg(o.title, o.x_label, o.y_label, o.plot));
    }
    out << "wrote " << (dir / "results.json").string() << '\n';
  } catch (const Error& e) {
    report_error(err, "io", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeFlags {
  std::string csv;
  std::string kind;
  std::string column;
  std::optional<int> zone;
  std::optional<double> fs_mhz;
  std::optional<double> tau_us;
  std::optional<double> f_osc_khz;
  std::optional<double> f_h_mhz;
  std::optional<double> block_us;
  double contrast = 1.0;
  double gamma = 42.577;
  int components = 1;
  std::string out_path;
};

json analyze_table(const Table& table, const AnalyzeFlags& f) {
  if (table.header.size() < 2) {
    throw CsvError(1, "missing axis: expected an axis column followed by a value column");
  }
  std::size_t value_col = 1;
  if (!f.column.empty()) {
    value_col = table.column(f.column);
  } else if (std::find(table.header.begin(), table.header.end(), "difference") != table.header.end()) {
    value_col = table.column("difference");
  }
  if (value_col == 0) throw UsageError("the value column cannot be the axis column");
  const std::string& axis_name = table.header[0];
  const auto& y = table.columns[value_col];

  json result{{"input", {{"axis", axis_name}, {"value", table.header[value_col]}, {"rows", table.rows()}}},
              {"kind", f.kind}};

  if (f.kind == "nspin") {
    if (!f.block_us) throw UsageError("--kind nspin requires --block-us");
    const auto fit = analysis_stage([&] { return nspin_curve(y, *f.block_us, f.contrast); });
    result["n_spin_sat"] = fit.n_spin_sat;
    result["t_c_us"] = fit.t_c_us;
    result["p0_sat"] = fit.p0_sat;
    result["tail_slope"] = fit.tail_slope;
    result["t_us"] = fit.t_us;
    result["n_spin"] = fit.n_spin;
    return result;
  }

  // Time axis of the trace.
  std::vector<double> t = table.columns[0];
  if (axis_name == "n_pulses") {
    if (!f.tau_us) throw UsageError("an n_pulses axis requires --tau");
    for (double& v : t) v *= *f.tau_us;
  }
  const double dt = f.fs_mhz ? 1.0 / *f.fs_mhz : analysis_stage([&] { return uniform_step(t); });
  const double t0 = t.front();

  if (f.kind == "spectrum") {
    SpectrumOptions so;
    so.zone = f.zone;
    const auto spec = analysis_stage([&] { return spectrum(y, dt, so); });
    result["sample_rate_mhz"] = spec.sample_rate_mhz;
    result["bin_mhz"] = spec.bin_mhz;
    result["zone"] = spec.nyquist_zone;
    result["peaks"] = peaks_json(find_peaks(spec));
    return result;
  }

  const bool chain = f.kind == "invert" || f.kind == "localize";
  if (f.kind != "fit" && !chain) throw UsageError("unknown --kind '" + f.kind + "'");
  const int n = chain ? 2 : f.components;
  if (n != 1 && n != 2) throw UsageError("--components must be 1 or 2");
  if (chain && (!f.f_osc_khz || !f.tau_us)) throw UsageError("--kind " + f.kind + " requires --fosc and --tau");

  SinusoidFitOptions fo;
  fo.t0_us = t0;
  const auto fit = analysis_stage([&] { return fit_damped_sinusoid(y, dt, n, fo); });
  result["fit"] = components_json(fit);
  result["offset"] = fit.offset;
  result["residual_norm"] = fit.residual_norm;
  if (n == 1) {
    result["f_osc_khz"] = fit.components[0].freq_mhz * 1e3;
    return result;
  }
  const auto [f0, f1] = assign_branches(fit, f.f_h_mhz);
  result["f0_mhz"] = f0;
  result["f1_mhz"] = f1;
  result["f0_minus_f1_khz"] = (f0 - f1) * 1e3;
  if (!chain) return result;

  analysis_stage([&] {
    const double f_h = f.f_h_mhz.value_or(f0);
    const auto h = hyperfine_from_correlation(f0, f1, *f.f_osc_khz, *f.tau_us, f_h);
    result["hyperfine"] = hyperfine_json(h);
    if (f.kind == "localize") {
      const auto loc = localize(h, PhysicalConstants::standard(), {}, f.gamma);
      result["geometry"] = {{"r_nm", loc.geometry.r_nm}, {"theta_deg", loc.geometry.theta_deg}};
      result["provenance"] = provenance_json(loc.provenance);
    }
    return 0;
  });
  return result;
}

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out, std::ostream& err) {
  json result;
  try {
    result = analyze_table(read_csv(f.csv), f);
  } catch (const CsvError& e) {
    report_error(err, "csv", e.what(), {{"line", e.line()}});
    return kExitUsage;
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, "analysis", e.what());
    return kExitAnalysis;
  }
  const std::string text = result.dump(2) + "\n";
  if (!f.out_path.empty()) {
    try {
      write_atomic(f.out_path, text);
    } catch (const Error& e) {
      report_error(err, "io", e.what());
      return kExitUsage;
    }
  }
  out << text;
  return kExitOk;
}

// ---- seq -------------------------------------------------------------------

struct SeqFlags {
  std::string action;
  std::string file;
  std::optional<double> target_mhz;
  double tolerance = 1e-3;
};

void collect_macros(const std::vector<Node>& nodes, std::vector<const Block*>& out) {
  for (const auto& n : nodes) {
    if (const Block* b = n.block()) {
      if (!std::holds_alternative<std::monostate>(b->macro)) out.push_back(b);
      collect_macros(b->body, out);
    }
  }
}

std::string summary(const PulseProgram& p) {
  const auto c = count_elements(p);
  std::ostringstream o;
  o << "pi pulses: " << c.pi << "\n"
    << "pi/2 pulses: " << c.half_pi << "\n"
    << "delays: " << c.delays << "\n"
    << "rf pulses: " << c.rf << "\n"
    << "laser init: " << c.laser_init << "\n"
    << "laser read: " << c.laser_read << "\n"
    << "total duration us: " << format_number(total_duration(p)) << "\n";
  return o.str();
}

int cmd_seq(const SeqFlags& f, std::ostream& out, std::ostream& err) {
  std::string text;
  if (f.file.empty() || f.file == "-") {
    text = read_stream(std::cin);
  } else {
    std::ifstream in(f.file, std::ios::binary);
    if (!in) {
      report_error(err, "usage", "cannot read '" + f.file + "'");
      return kExitUsage;
    }
    text = read_stream(in);
  }
  PulseProgram program;
  try {
    program = parse_sequence(text);
    validate(program);
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what(),
                 {{"line", e.line()}, {"column", e.column()}, {"token", e.token()}, {"detail", e.detail()}});
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, "parse", e.what());
    return kExitUsage;
  }

  if (f.action == "format") {
    out << format_sequence(program);
    return kExitOk;
  }
  if (f.action == "parse") {
    out << format_sequence(program) << summary(program);
    return kExitOk;
  }

  // check
  if (!(f.tolerance > 0.0)) {
    report_error(err, "usage", "--tolerance must be > 0");
    return kExitUsage;
  }
  std::vector<const Block*> macros;
  collect_macros(program.nodes, macros);
  out << "program: " << (program.name.empty() ? "(unnamed)" : program.name) << "\n" << summary(program);
  bool ok = true;
  for (const Block* b : macros) {
    if (const auto* pol = std::get_if<PulsePolMacro>(&b->macro)) {
      const double two_tau = 2.0 * pol->tau_pol_us;
      out << (pol->variant == PolVariant::PolY ? "PolY" : "PolX") << " 2tau_pol us: " << format_number(two_tau)
          << " x" << b->count << "\n";
      if (f.target_mhz) {
        const double want = 3.0 / *f.target_mhz;
        const double rel = std::abs(two_tau - want) / want;
        const bool pass = rel <= f.tolerance;
        ok = ok && pass;
        out << "  commensurate 2tau_pol = 3/f_target: " << format_number(two_tau) << " vs "
            << format_number(want) << " (relative " << format_number(rel) << ") " << (pass ? "PASS" : "FAIL")
            << "\n";
      }
    } else if (const auto* xy = std::get_if<Xy16Macro>(&b->macro)) {
      const double f_res = 1.0 / (2.0 * xy->tau_us);
      out << "XY16-" << xy->pulses * b->count << " tau us: " << format_number(xy->tau_us)
          << " resonance MHz: " << format_number(f_res) << "\n";
      if (f.target_mhz) {
        const double rel = std::abs(f_res - *f.target_mhz) / *f.target_mhz;
        const bool pass = rel <= f.tolerance;
        ok = ok && pass;
        out << "  resonant 1/(2tau) = f_target: relative " << format_number(rel) << " "
            << (pass ? "PASS" : "FAIL") << "\n";
      }
    }
  }
  out << (ok ? "check: PASS" : "check: FAIL") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

const char* version() { return NVSCOPE_VERSION; }

json run_experiment(const ExperimentConfig& config, unsigned threads) {
  return run_outcome(config, threads).record;
}

unsigned resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("NVSCOPE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and analysis of NV-center nuclear spin experiments", "nvscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("nvscope ") + version());

  RunFlags run;
  long long seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Simulate and analyse the experiment in a JSON config");
  run_cmd->add_option("config", run.config, "Config file")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Readout noise seed (overrides the config)");
  run_cmd->add_option("--threads", run.threads, "Worker threads (default: NVSCOPE_THREADS, else all cores)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out_dir, "Output directory (overrides the config)");

  AnalyzeFlags an;
  auto* an_cmd = app.add_subcommand("analyze", "Analyse a trace CSV (axis column first)");
  an_cmd->add_option("csv", an.csv, "Trace CSV")->required();
  an_cmd->add_option("--kind", an.kind, "Analysis")
      ->required()
      ->check(CLI::IsMember({"spectrum", "fit", "invert", "localize", "nspin"}));
  an_cmd->add_option("--column", an.column, "Value column (default: difference if present, else the second)");
  an_cmd->add_option("--zone", an.zone, "Nyquist zone of the true frequencies")->check(CLI::NonNegativeNumber);
  an_cmd->add_option("--fs", an.fs_mhz, "Sample rate in MHz (overrides the axis spacing)")
      ->check(CLI::PositiveNumber);
  an_cmd->add_option("--tau", an.tau_us, "Pulse spacing tau in us")->check(CLI::PositiveNumber);
  an_cmd->add_option("--fosc", an.f_osc_khz, "Pulse-number oscillation frequency in kHz")
      ->check(CLI::PositiveNumber);
  an_cmd->add_option("--fh", an.f_h_mhz, "Bare proton Larmor frequency in MHz; picks f0 among fitted lines")
      ->check(CLI::PositiveNumber);
  an_cmd->add_option("--components", an.components, "Sinusoids to fit (1 or 2)")->capture_default_str();
  an_cmd->add_option("--block-us", an.block_us, "Duration of one polarization block in us")
      ->check(CLI::PositiveNumber);
  an_cmd->add_option("--contrast", an.contrast, "Readout contrast")->capture_default_str()->check(CLI::Range(1e-9, 1.0));
  an_cmd->add_option("--gamma", an.gamma, "Nuclear gyromagnetic ratio in kHz/mT")->capture_default_str();
  an_cmd->add_option("--out", an.out_path, "Also write the JSON result to this file");

  SeqFlags sq;
  auto* seq_cmd = app.add_subcommand("seq", "Parse, format or check pulse-sequence text");
  seq_cmd->add_option("action", sq.action, "parse, format or check")
      ->required()
      ->check(CLI::IsMember({"parse", "format", "check"}));
  seq_cmd->add_option("file", sq.file, "Sequence file (default: stdin)");
  seq_cmd->add_option("--target-mhz", sq.target_mhz, "Target frequency for the check")->check(CLI::PositiveNumber);
  seq_cmd->add_option("--tolerance", sq.tolerance, "Relative tolerance for the check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run_cmd->parsed()) {
    if (seed_opt->count() > 0) run.seed = seed;
    return cmd_run(run, out, err);
  }
  if (an_cmd->parsed()) return cmd_analyze(an, out, err);
  return cmd_seq(sq, out, err);
}

}  // namespace nvscope::cli
