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

#include "nvscope/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "nvscope/constants.hpp"

namespace nvscope::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxGridPoints = 100000;

class Obj {
 public:
  Obj(const json& j, std::string pointer) : j_(j), ptr_(std::move(pointer)) {
    if (!j_.is_object()) throw ConfigError(ptr_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : j_.items()) {
      if (allowed.count(item.key()) == 0) throw ConfigError(path(item.key()), "unknown key");
    }
  }

  std::string path(const std::string& key) const { return ptr_ + "/" + key; }
  const std::string& pointer() const { return ptr_; }
  bool has(const char* key) const { return j_.contains(key); }

  const json& at(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(path(key), "required key is missing");
    return j_.at(key);
  }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key), "expected a finite number");
    return x;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  double positive(const char* key) const {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigError(path(key), "must be > 0");
    return x;
  }
  double positive(const char* key, double fallback) const { return has(key) ? positive(key) : fallback; }

  long long integer(const char* key) const {
    const json& v = at(key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
    }
    throw ConfigError(path(key), "expected an integer");
  }
  int count(const char* key, int fallback, int min_value = 1) const {
    if (!has(key)) return fallback;
    const long long v = integer(key);
    if (v < min_value || v > 1000000) {
      throw ConfigError(path(key), "must be an integer in [" + std::to_string(min_value) + ", 1000000]");
    }
    return static_cast<int>(v);
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  Obj object(const char* key) const { return Obj(at(key), path(key)); }

  // Either an array of numbers or {"start", "stop", "step"} with stop inclusive.
  std::vector<double> grid(const char* key) const {
    const json& v = at(key);
    const std::string p = path(key);
    std::vector<double> out;
    if (v.is_array()) {
      if (v.empty()) throw ConfigError(p, "grid is empty");
      if (v.size() > kMaxGridPoints) throw ConfigError(p, "grid has too many points");
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(p + "/" + std::to_string(i), "expected a number");
        out.push_back(v[i].get<double>());
      }
      return out;
    }
    const Obj g(v, p);
    g.allow({"start", "stop", "step"});
    const double start = g.number("start");
    const double stop = g.number("stop");
    const double step = g.positive("step");
    if (stop < start) throw ConfigError(g.path("stop"), "must be >= start");
    const double span = (stop - start) / step;
    if (span + 1.0 > static_cast<double>(kMaxGridPoints)) throw ConfigError(p, "grid has too many points");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }

  std::vector<double> positive_grid(const char* key) const {
    auto g = grid(key);
    for (double x : g) {
      if (!(x > 0.0)) throw ConfigError(path(key), "grid values must be > 0");
    }
    return g;
  }

 private:
  const json& j_;
  std::string ptr_;
};

double species_gamma(const Obj& nucleus) {
  const auto& c = PhysicalConstants::standard();
  if (nucleus.has("gamma_khz_per_mt")) {
    if (nucleus.has("species")) throw ConfigError(nucleus.path("gamma_khz_per_mt"), "give either species or gamma");
    const double g = nucleus.number("gamma_khz_per_mt");
    if (g == 0.0) throw ConfigError(nucleus.path("gamma_khz_per_mt"), "must be non-zero");
    return g;
  }
  const std::string s = nucleus.string("species", "1H");
  if (s == "1H") return c.gamma_h_khz_per_mt;
  if (s == "15N") return c.gamma_n15_khz_per_mt;
  throw ConfigError(nucleus.path("species"), "unknown species (expected 1H or 15N)");
}

NuclearSpec parse_nucleus(const Obj& o, std::size_t index) {
  o.allow({"label", "species", "gamma_khz_per_mt", "a_par_khz", "a_perp_khz", "r_nm", "theta_deg"});
  const auto& c = PhysicalConstants::standard();
  NuclearSpec n;
  n.label = o.string("label", "n" + std::to_string(index));
  n.gamma_khz_per_mt = species_gamma(o);
  const bool has_hf = o.has("a_par_khz") || o.has("a_perp_khz");
  const bool has_geo = o.has("r_nm") || o.has("theta_deg");
  if (has_geo) {
    const Geometry g{o.positive("r_nm"), o.number("theta_deg")};
    if (!(g.theta_deg >= 0.0 && g.theta_deg <= 180.0)) throw ConfigError(o.path("theta_deg"), "must lie in [0, 180]");
    n = NuclearSpec::from_geometry(n.label, n.gamma_khz_per_mt, g, c);
    if (has_hf) {
      const double par = o.number("a_par_khz");
      const double perp = o.number("a_perp_khz");
      auto close = [](double a, double b) { return std::abs(a - b) <= 1e-6 * std::max({std::abs(a), std::abs(b), 1e-9}); };
      if (!close(par, n.hyperfine.par_khz) || !close(perp, n.hyperfine.perp_khz)) {
        throw ConfigError(o.pointer(), "hyperfine values and geometry disagree beyond 1e-6 relative");
      }
    }
    return n;
  }
  n.hyperfine.par_khz = o.number("a_par_khz", 0.0);
  n.hyperfine.perp_khz = o.number("a_perp_khz", 0.0);
  if (n.hyperfine.perp_khz < 0.0) throw ConfigError(o.path("a_perp_khz"), "must be >= 0");
  return n;
}

ReadoutModel parse_readout(const Obj& o, double system_contrast) {
  o.allow({"mode", "contrast", "photons_per_read", "seed"});
  const std::string mode = o.string("mode", "ideal");
  ReadoutModel m;
  if (mode == "ideal") {
    m.mode = ReadoutMode::Ideal;
  } else if (mode == "contrast") {
    m.mode = ReadoutMode::Contrast;
  } else if (mode == "shot_noise") {
    m.mode = ReadoutMode::ShotNoise;
  } else {
    throw ConfigError(o.path("mode"), "expected ideal, contrast or shot_noise");
  }
  m.contrast = o.number("contrast", system_contrast);
  if (!(m.contrast >= 0.0 && m.contrast <= 1.0)) throw ConfigError(o.path("contrast"), "must lie in [0, 1]");
  m.photons_per_read = o.count("photons_per_read", 1000);
  if (o.has("seed")) {
    const long long s = o.integer("seed");
    if (s < 0) throw ConfigError(o.path("seed"), "must be >= 0");
    m.seed = static_cast<std::uint64_t>(s);
  }
  return m;
}

void parse_system(const Obj& o, ExperimentConfig& cfg) {
  o.allow({"b0_mt", "f_h_mhz", "nuclei", "nn_couplings", "contrast", "readout"});
  SpinSystem& s = cfg.system;
  if (o.has("b0_mt") == o.has("f_h_mhz")) throw ConfigError(o.pointer(), "give exactly one of b0_mt and f_h_mhz");
  s.b0_mt = o.has("b0_mt") ? o.positive("b0_mt") : SpinSystem::b0_for_proton_larmor(o.positive("f_h_mhz"));
  s.contrast = o.number("contrast", 1.0);
  if (!(s.contrast >= 0.0 && s.contrast <= 1.0)) throw ConfigError(o.path("contrast"), "must lie in [0, 1]");

  const json& nuclei = o.at("nuclei");
  if (!nuclei.is_array()) throw ConfigError(o.path("nuclei"), "expected an array");
  if (nuclei.size() > kMaxNuclei) {
    throw ConfigError(o.path("nuclei"), "at most " + std::to_string(kMaxNuclei) + " nuclei are supported");
  }
  for (std::size_t i = 0; i < nuclei.size(); ++i) {
    s.nuclei.push_back(parse_nucleus(Obj(nuclei[i], o.path("nuclei") + "/" + std::to_string(i)), i));
  }
  if (o.has("nn_couplings")) {
    const json& list = o.at("nn_couplings");
    if (!list.is_array()) throw ConfigError(o.path("nn_couplings"), "expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const Obj c(list[k], o.path("nn_couplings") + "/" + std::to_string(k));
      c.allow({"i", "j", "d_zz_khz"});
      const long long i = c.integer("i");
      const long long j = c.integer("j");
      const auto n = static_cast<long long>(s.nuclei.size());
      if (i < 0 || i >= n) throw ConfigError(c.path("i"), "nucleus index out of range");
      if (j < 0 || j >= n || j == i) throw ConfigError(c.path("j"), "nucleus index out of range or equal to i");
      s.nn_couplings.push_back(
          NuclearCoupling{static_cast<std::size_t>(i), static_cast<std::size_t>(j), c.number("d_zz_khz")});
    }
  }
  cfg.options.readout =
      o.has("readout") ? parse_readout(o.object("readout"), s.contrast) : ReadoutModel::ideal();
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(o.pointer(), e.what());
  }
}

void parse_simulation(const Obj& o, SimulationOptions& options) {
  o.allow({"mw_pi_duration_us", "depolarization_per_laser", "coherence_decay_us"});
  options.mw_pi_duration_us = o.number("mw_pi_duration_us", 0.0);
  if (options.mw_pi_duration_us < 0.0) throw ConfigError(o.path("mw_pi_duration_us"), "must be >= 0");
  options.depolarization_per_laser = o.number("depolarization_per_laser", 0.0);
  if (!(options.depolarization_per_laser >= 0.0 && options.depolarization_per_laser <= 1.0)) {
    throw ConfigError(o.path("depolarization_per_laser"), "must lie in [0, 1]");
  }
  options.coherence_decay_us = o.number("coherence_decay_us", 0.0);
  if (options.coherence_decay_us < 0.0) throw ConfigError(o.path("coherence_decay_us"), "must be >= 0");
}

RfSpec parse_rf(const Obj& o) {
  o.allow({"frequency_mhz", "rabi_khz", "phase_rad"});
  return RfSpec{o.positive("frequency_mhz"), o.number("phase_rad", 0.0), o.positive("rabi_khz")};
}

std::vector<int> pulse_grid(const Obj& o, const char* key) {
  std::vector<int> out;
  for (double x : o.grid(key)) {
    if (x != std::floor(x) || x < 16 || static_cast<long long>(x) % 16 != 0 || x > 1e6) {
      throw ConfigError(o.path(key), "pulse numbers must be positive multiples of 16");
    }
    out.push_back(static_cast<int>(x));
  }
  return out;
}

int pulse_count(const Obj& o, const char* key, int fallback) {
  const int n = o.count(key, fallback, 16);
  if (n % 16 != 0) throw ConfigError(o.path(key), "must be a positive multiple of 16");
  return n;
}

Experiment parse_experiment(const Obj& o, const std::string& kind, const SpinSystem& system) {
  if (kind == "xy_spectrum") {
    o.allow({"kind", "n_pulses", "freq_mhz"});
    return XySpectrumExperiment{pulse_count(o, "n_pulses", 64), o.positive_grid("freq_mhz")};
  }
  if (kind == "pulse_sweep") {
    o.allow({"kind", "tau_us", "n_pulses"});
    PulseSweepExperiment e;
    e.tau_us = o.positive("tau_us");
    if (o.has("n_pulses")) {
      e.n_pulses = pulse_grid(o, "n_pulses");
    } else {
      for (int n = 16; n <= 656; n += 16) e.n_pulses.push_back(n);
    }
    return e;
  }
  if (kind == "correlation") {
    o.allow({"kind", "tau_us", "t_corr_us", "block_pulses", "inversion"});
    CorrelationExperiment e;
    e.tau_us = o.positive("tau_us");
    e.t_corr_us = o.grid("t_corr_us");
    for (double t : e.t_corr_us) {
      if (t < 0.0) throw ConfigError(o.path("t_corr_us"), "grid values must be >= 0");
    }
    e.block_pulses = pulse_count(o, "block_pulses", 32);
    if (o.has("inversion")) {
      const Obj inv = o.object("inversion");
      inv.allow({"f_osc_khz", "tau_us"});
      e.inversion = InversionInputs{inv.positive("f_osc_khz"), inv.positive("tau_us")};
    }
    return e;
  }
  if (kind == "b0_sweep") {
    o.allow({"kind", "b0_mt", "n_pulses", "nucleus"});
    B0SweepExperiment e;
    e.b0_mt = o.positive_grid("b0_mt");
    e.n_pulses = pulse_count(o, "n_pulses", 64);
    e.nucleus = static_cast<std::size_t>(o.count("nucleus", 0, 0));
    if (e.nucleus >= system.n_nuclei()) throw ConfigError(o.path("nucleus"), "nucleus index out of range");
    return e;
  }
  if (kind == "pulsepol_spectrum") {
    o.allow({"kind", "inverse_2tau_pol_mhz", "repeats"});
    return PulsePolExperiment{o.positive_grid("inverse_2tau_pol_mhz"), o.count("repeats", 20)};
  }
  if (kind == "polarization_transient") {
    o.allow({"kind", "two_tau_pol_us", "n_blocks", "repeats"});
    return TransientExperiment{o.positive("two_tau_pol_us"), o.count("n_blocks", 20), o.count("repeats", 20)};
  }
  if (kind == "rabi") {
    o.allow({"kind", "two_tau_pol_us", "pol_repeats", "blocks", "t_rf_us", "rf"});
    RabiExperiment e;
    e.spec.tau_pol_us = 0.5 * o.positive("two_tau_pol_us");
    e.spec.pol_repeats = o.count("pol_repeats", 20);
    e.spec.blocks = o.count("blocks", 10);
    e.spec.rf = parse_rf(o.object("rf"));
    e.t_rf_us = o.grid("t_rf_us");
    for (double t : e.t_rf_us) {
      if (t < 0.0) throw ConfigError(o.path("t_rf_us"), "grid values must be >= 0");
    }
    return e;
  }
  if (kind == "fid") {
    o.allow({"kind", "two_tau_pol_us", "pol_repeats", "pol_blocks", "rf", "t_half_pi_us", "n_readouts", "tau_us",
             "t_l_us", "zone"});
    FidExperiment e;
    e.spec.tau_pol_us = 0.5 * o.positive("two_tau_pol_us");
    e.spec.pol_repeats = o.count("pol_repeats", 20);
    e.spec.pol_blocks = o.count("pol_blocks", 5);
    e.spec.rf = parse_rf(o.object("rf"));
    e.spec.t_half_pi_us = o.positive("t_half_pi_us", 1.0 / (4.0 * e.spec.rf.rabi_khz * 1e-3));
    e.spec.n_readouts = o.count("n_readouts", 50);
    e.spec.tau_us = o.positive("tau_us");
    e.spec.t_l_us = o.positive("t_l_us");
    if (o.has("zone")) e.zone = o.count("zone", 0, 0);
    try {
      (void)build_fid(e.spec);
    } catch (const ParameterError& err) {
      throw ConfigError(o.path("t_l_us"), err.what());
    }
    return e;
  }
  throw ConfigError(o.path("kind"),
                    "unknown experiment kind (expected xy_spectrum, pulse_sweep, correlation, b0_sweep, "
                    "pulsepol_spectrum, polarization_transient, rabi or fid)");
}

}  // namespace

ExperimentConfig parse_config(const json& document) {
  const Obj root(document, "");
  root.allow({"system", "experiment", "simulation", "output"});
  ExperimentConfig cfg;
  cfg.source = document;
  parse_system(root.object("system"), cfg);
  if (root.has("simulation")) parse_simulation(root.object("simulation"), cfg.options);
  const Obj exp = root.object("experiment");
  const json& kind = exp.at("kind");
  if (!kind.is_string()) throw ConfigError(exp.path("kind"), "expected a string");
  cfg.kind = kind.get<std::string>();
  cfg.experiment = parse_experiment(exp, cfg.kind, cfg.system);
  if (root.has("output")) {
    const Obj out = root.object("output");
    out.allow({"dir", "csv", "svg"});
    cfg.output.dir = out.string("dir", cfg.output.dir);
    if (cfg.output.dir.empty()) throw ConfigError(out.path("dir"), "must not be empty");
    cfg.output.csv = out.boolean("csv", true);
    cfg.output.svg = out.boolean("svg", true);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json document;
  try {
    document = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(document);
}

std::string fingerprint(const json& document) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : document.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nvscope::cli
