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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "nvscope/cli/commands.hpp"
#include "nvscope/cli/io.hpp"

using namespace nvscope;
using namespace nvscope::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(NVSCOPE_SOURCE_DIR) + "/configs/";

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nvscope");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const fs::path& scratch_root() {
  // Removed when the test binary exits.
  static const struct Root {
    fs::path path = fs::temp_directory_path() / ("nvscope_test_" + std::to_string(::getpid()));
    ~Root() {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  } root;
  return root.path;
}

fs::path scratch(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

json minimal() {
  return json::parse(R"({
    "system": {"f_h_mhz": 1.2239, "nuclei": [{"a_par_khz": -19.0, "a_perp_khz": 22.9}]},
    "experiment": {"kind": "xy_spectrum", "freq_mhz": {"start": 1.20, "stop": 1.23, "step": 0.001}}
  })");
}

std::string pointer_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

json without_wall_time(json j) {
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST_CASE("config schema is strict and reports JSON pointers") {
  CHECK(pointer_of(json::object()) == "/system");
  CHECK(pointer_of(minimal()) == "<accepted>");

  auto j = minimal();
  j["extra"] = 1;
  CHECK(pointer_of(j) == "/extra");
  j = minimal();
  j["system"]["nuclei"][0]["a_prp_khz"] = 1.0;
  CHECK(pointer_of(j) == "/system/nuclei/0/a_prp_khz");
  j = minimal();
  j["system"]["b0_mt"] = 28.0;
  CHECK(pointer_of(j) == "/system");
  j = minimal();
  j["experiment"]["kind"] = "nmr";
  CHECK(pointer_of(j) == "/experiment/kind");
  j = minimal();
  j["experiment"]["n_pulses"] = 63;
  CHECK(pointer_of(j) == "/experiment/n_pulses");
  j = minimal();
  j["experiment"]["freq_mhz"] = {{"start", 1.2}, {"stop", 1.1}, {"step", 0.01}};
  CHECK(pointer_of(j) == "/experiment/freq_mhz/stop");
  j = minimal();
  j["system"]["readout"] = {{"mode", "loud"}};
  CHECK(pointer_of(j) == "/system/readout/mode");
  j = minimal();
  j["system"]["nn_couplings"] = {{{"i", 0}, {"j", 1}, {"d_zz_khz", 3.0}}};
  CHECK(pointer_of(j) == "/system/nn_couplings/0/j");
}

TEST_CASE("the shipped JSON schema lists exactly the keys the parser accepts") {
  std::ifstream in(std::string(NVSCOPE_SOURCE_DIR) + "/schemas/config.schema.json");
  const json schema = json::parse(in);
  auto complaint = [](const json& cfg) -> std::string {
    try {
      (void)parse_config(cfg);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  std::size_t kinds = 0;
  for (const auto& variant : schema["properties"]["experiment"]["oneOf"]) {
    const std::string kind = variant["properties"]["kind"]["const"];
    ++kinds;
    for (const auto& item : variant["properties"].items()) {
      auto j = minimal();
      j["experiment"] = {{"kind", kind}, {item.key(), "?"}};
      if (item.key() == "kind") continue;
      CAPTURE(kind);
      CAPTURE(item.key());
      CHECK(complaint(j).find("unknown key") == std::string::npos);
    }
    auto j = minimal();
    j["experiment"] = {{"kind", kind}, {"not_a_key", 1}};
    CHECK(complaint(j).find("unknown key") != std::string::npos);
  }
  CHECK(kinds == 8);
  for (const auto& item : schema["properties"]["system"]["properties"].items()) {
    auto j = minimal();
    j["system"][item.key()] = "?";
    CAPTURE(item.key());
    CHECK(complaint(j).find("unknown key") == std::string::npos);
  }
}

TEST_CASE("hyperfine and geometry must agree when both are given") {
  auto j = minimal();
  auto& n = j["system"]["nuclei"][0];
  n = {{"r_nm", 1.44}, {"theta_deg", 72.3}};
  const auto cfg = parse_config(j);
  const double par = cfg.system.nuclei[0].hyperfine.par_khz;
  const double perp = cfg.system.nuclei[0].hyperfine.perp_khz;
  n["a_par_khz"] = par;
  n["a_perp_khz"] = perp;
  CHECK(pointer_of(j) == "<accepted>");
  n["a_par_khz"] = par * (1 + 1e-5);
  CHECK(pointer_of(j) == "/system/nuclei/0");
}

TEST_CASE("config fingerprints follow content, not key order") {
  const auto a = json::parse(R"({"b": 1, "a": [1, 2]})");
  const auto b = json::parse(R"({"a": [1, 2], "b": 1})");
  const auto c = json::parse(R"({"a": [1, 2], "b": 2})");
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(c));
  CHECK(fingerprint(a).size() == 16);
}

TEST_CASE("CSV parsing and formatting") {
  const auto t = parse_csv("t_us,p0\n0,1\n0.1,0.5\n\n0.2,-1e-3\n");
  CHECK(t.rows() == 3);
  CHECK(t.column("p0") == 1);
  CHECK(t.columns[1][2] == -1e-3);
  CHECK_THROWS_AS(t.column("q"), CsvError);
  const auto back = parse_csv(format_csv(t));
  CHECK(back.header == t.header);
  CHECK(back.columns == t.columns);

  Table r;
  r.header = {"x", "y"};
  r.columns = {{0.1, 1.0 / 3.0}, {2.0 / 7.0, 1e-300}};
  CHECK(parse_csv(format_csv(r)).columns == r.columns);

  auto line_of = [](const std::string& text) {
    try {
      parse_csv(text);
    } catch (const CsvError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("a,b\n1,2\n3\n") == 3);
  CHECK(line_of("a,b\n1,2\n3,abc\n") == 3);
  CHECK(line_of("a,b\n") > 0);
  CHECK(line_of("") > 0);
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = scratch("atomic");
  const auto target = dir / "f.txt";
  write_atomic(target.string(), "one");
  write_atomic(target.string(), "two");
  CHECK(slurp(target) == "two");
  CHECK_FALSE(fs::exists(dir / "f.txt.tmp"));
}

TEST_CASE("run: XY16-64 spectrum config") {
  const auto dir = scratch("xy64");
  const auto r = invoke({"run", kConfigs + "nv1_xy64.json", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const auto res = json::parse(slurp(dir / "results.json"));
  CHECK(res["derived"]["dip_center_mhz"].get<double>() == doctest::Approx(1.2140).epsilon(0.0005 / 1.2140));
  CHECK(res["toolkit"] == "nvscope");
  CHECK(res["axis"] == "inverse_2tau_mhz");
  CHECK(res.contains("wall_time_s"));
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(slurp(dir / "plot.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("run: schema violations exit 2 with the pointer") {
  const auto dir = scratch("schema");
  write(dir / "empty.json", "{}");
  auto r = invoke({"run", (dir / "empty.json").string()});
  CHECK(r.code == kExitUsage);
  CHECK(json::parse(r.err)["pointer"] == "/system");
  write(dir / "blank.json", "");
  CHECK(invoke({"run", (dir / "blank.json").string()}).code == kExitUsage);
  CHECK(invoke({"run", (dir / "missing.json").string()}).code == kExitUsage);
  CHECK(invoke({"run"}).code == kExitUsage);
  CHECK(invoke({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("run: failures map to simulation and analysis exit codes") {
  const auto dir = scratch("codes");
  auto j = minimal();
  // A flat spectrum has no dip to locate.
  j["system"]["nuclei"] = json::array();
  write(dir / "flat.json", j.dump());
  CHECK(invoke({"run", (dir / "flat.json").string(), "--out", (dir / "o1").string()}).code == kExitAnalysis);
}

TEST_CASE("run: identical configs give identical records for any thread count") {
  const auto dir = scratch("determinism");
  auto j = json::parse(slurp(kConfigs + "shot_noise_xy64.json"));
  j["experiment"]["freq_mhz"] = {{"start", 1.20}, {"stop", 1.23}, {"step", 0.001}};
  write(dir / "cfg.json", j.dump());
  std::vector<std::string> payloads;
  for (const char* threads : {"1", "1", "3"}) {
    const auto out = dir / ("t" + std::to_string(payloads.size()));
    REQUIRE(invoke({"run", (dir / "cfg.json").string(), "--threads", threads, "--out", out.string()}).code == 0);
    payloads.push_back(without_wall_time(json::parse(slurp(out / "results.json"))).dump());
    CHECK(slurp(out / "trace.csv") == slurp(dir / "t0" / "trace.csv"));
  }
  CHECK(payloads[0] == payloads[1]);
  CHECK(payloads[0] == payloads[2]);
  REQUIRE(invoke({"run", (dir / "cfg.json").string(), "--seed", "8", "--out", (dir / "s8").string()}).code == 0);
  CHECK(without_wall_time(json::parse(slurp(dir / "s8" / "results.json"))).dump() != payloads[0]);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  ::setenv("NVSCOPE_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  CHECK(resolve_threads(2) == 2);
  ::setenv("NVSCOPE_THREADS", "zero", 1);
  CHECK(resolve_threads(0) >= 1);
  ::unsetenv("NVSCOPE_THREADS");
}

TEST_CASE("analyze accepts run traces unmodified") {
  const auto dir = scratch("roundtrip");
  auto j = json::parse(slurp(kConfigs + "nv1_pulse_sweep.json"));
  write(dir / "cfg.json", j.dump());
  REQUIRE(invoke({"run", (dir / "cfg.json").string(), "--out", dir.string()}).code == 0);
  const auto run = json::parse(slurp(dir / "results.json"));
  const auto r = invoke({"analyze", (dir / "trace.csv").string(), "--kind", "fit", "--tau", "0.4115"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["f_osc_khz"].get<double>() ==
        doctest::Approx(run["derived"]["f_osc_khz"].get<double>()).epsilon(1e-12));
  CHECK(invoke({"analyze", (dir / "trace.csv").string(), "--kind", "fit"}).code == kExitUsage);
}

TEST_CASE("analyze: correlation trace through the localization chain") {
  const auto dir = scratch("chain");
  auto j = json::parse(slurp(kConfigs + "nv1_correlation.json"));
  j["experiment"].erase("inversion");
  write(dir / "cfg.json", j.dump());
  REQUIRE(invoke({"run", (dir / "cfg.json").string(), "--out", dir.string()}).code == 0);
  const auto r = invoke({"analyze", (dir / "trace.csv").string(), "--kind", "localize", "--fosc", "7.3705304701",
                      "--tau", "0.4115", "--fh", "1.2239", "--out", (dir / "chain.json").string()});
  REQUIRE(r.code == 0);
  const auto res = json::parse(r.out);
  CHECK(res["f0_mhz"].get<double>() == doctest::Approx(1.2239).epsilon(1e-6));
  CHECK(res["hyperfine"]["a_par_khz"].get<double>() == doctest::Approx(-19.0).epsilon(0.01));
  CHECK(res["hyperfine"]["a_perp_khz"].get<double>() == doctest::Approx(22.9).epsilon(0.01));
  CHECK(res["geometry"]["r_nm"].get<double>() == doctest::Approx(1.4427).epsilon(0.01));
  CHECK(res["provenance"].size() == 3);
  CHECK(json::parse(slurp(dir / "chain.json")) == res);
}

TEST_CASE("analyze: CSV errors exit 2 with the line number") {
  const auto dir = scratch("badcsv");
  write(dir / "one.csv", "p0\n0.1\n0.2\n");
  auto r = invoke({"analyze", (dir / "one.csv").string(), "--kind", "spectrum"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("missing axis") != std::string::npos);
  write(dir / "bad.csv", "t_us,p0\n0,1\n0.1,oops\n");
  r = invoke({"analyze", (dir / "bad.csv").string(), "--kind", "spectrum"});
  CHECK(r.code == kExitUsage);
  CHECK(json::parse(r.err)["line"] == 3);
  write(dir / "short.csv", "t_us,p0\n0,1\n0.1,0.5\n0.2,0.7\n");
  CHECK(invoke({"analyze", (dir / "short.csv").string(), "--kind", "spectrum"}).code == kExitAnalysis);
}

TEST_CASE("analyze: undersampled FID trace with an explicit zone and sample rate") {
  const auto dir = scratch("fid");
  Table t;
  t.header = {"t_us", "difference"};
  t.columns.resize(2);
  const double fs = 0.0844595;
  for (int k = 0; k < 256; ++k) {
    const double time = k / fs;
    t.columns[0].push_back(time);
    t.columns[1].push_back(0.01 * std::cos(2 * 3.141592653589793 * 1.2182 * time));
  }
  write(dir / "fid.csv", format_csv(t));
  const auto r = invoke({"analyze", (dir / "fid.csv").string(), "--kind", "spectrum", "--zone", "28", "--fs", "0.0844595"});
  REQUIRE(r.code == 0);
  const auto peaks = json::parse(r.out)["peaks"];
  REQUIRE(peaks.size() == 1);
  CHECK(peaks[0]["freq_mhz"].get<double>() == doctest::Approx(1.2182).epsilon(1e-5));
}

TEST_CASE("seq: parse, format and commensurability check") {
  const auto dir = scratch("seq");
  write(dir / "poly.seq", "@name poly\n(PolY t=1.248)^20 -- LRO\n");
  auto r = invoke({"seq", "check", (dir / "poly.seq").string(), "--target-mhz", "1.2019"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  r = invoke({"seq", "check", (dir / "poly.seq").string(), "--target-mhz", "1.2239"});
  CHECK(r.code == kExitCheckFailed);

  write(dir / "bad.seq", "L -- Z/2 -- LRO\n");
  r = invoke({"seq", "parse", (dir / "bad.seq").string()});
  CHECK(r.code == kExitUsage);
  const auto e = json::parse(r.err);
  CHECK(e["line"] == 1);
  CHECK(e["column"] == 6);

  write(dir / "xy.seq", "L--X/2--  (XY16-64 t=0.4115) -- -X/2--LRO\n");
  r = invoke({"seq", "format", (dir / "xy.seq").string()});
  REQUIRE(r.code == 0);
  write(dir / "xy2.seq", r.out);
  CHECK(invoke({"seq", "format", (dir / "xy2.seq").string()}).out == r.out);
  r = invoke({"seq", "parse", (dir / "xy.seq").string()});
  CHECK(r.out.find("pi pulses: 64") != std::string::npos);
}
