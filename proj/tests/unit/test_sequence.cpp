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

#include <cmath>
#include <random>

#include "nvscope/sequence.hpp"

using namespace nvscope;

namespace {

std::size_t count_pi(const PulseProgram& p) { return count_elements(p).pi; }

// Random program tree mixing every element type, generic blocks and both macros.
std::vector<Node> random_nodes(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 9 : 7);
  std::uniform_int_distribution<int> len(1, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Node> out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0: out.push_back(MwPulse{static_cast<MwAxis>(rng() % 4), MwAngle::Pi}); break;
      case 1: out.push_back(MwPulse{static_cast<MwAxis>(rng() % 4), MwAngle::HalfPi}); break;
      case 2: out.push_back(Delay{u(rng) * 10.0}); break;
      case 3: out.push_back(RfPulse{1.0 + u(rng), u(rng) * 6.0 - 3.0, u(rng) * 20.0, 1.0 + u(rng) * 100.0}); break;
      case 4: out.push_back(LaserInit{}); break;
      case 5: out.push_back(LaserRead{}); break;
      case 6: out.push_back(build_xy16(16 * (1 + static_cast<int>(rng() % 8)), 0.1 + u(rng)).nodes.front()); break;
      case 7:
        out.push_back(build_pulsepol(0.5 + u(rng) * 2.0, rng() % 2 ? PolVariant::PolX : PolVariant::PolY,
                                     1 + static_cast<int>(rng() % 20))
                          .nodes.front());
        break;
      default: out.push_back(Block{random_nodes(rng, depth - 1), 1 + static_cast<int>(rng() % 6), {}}); break;
    }
  }
  return out;
}

PulseProgram random_program(std::mt19937_64& rng) {
  PulseProgram p;
  p.nodes = random_nodes(rng, 2);
  if (rng() % 2) p.name = "prog_" + std::to_string(rng() % 1000);
  if (rng() % 2) p.readout_axis = (rng() % 2) ? "X" : "-Y";
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < static_cast<int>(rng() % 3); ++k) p.parameters["p" + std::to_string(k)] = u(rng);
  return p;
}

}  // namespace

TEST_CASE("XY16 unit timing") {
  const auto unit = xy16_unit(0.4);
  PulseProgram p{"", unit, {}, ""};
  CHECK(count_elements(p).pi == 16);
  CHECK(total_duration(p) == doctest::Approx(16 * 0.4));
  CHECK(free_evolution(unit) == doctest::Approx(16 * 0.4));
  const auto flat = flatten(p);
  CHECK(std::get<Delay>(flat.front()).duration_us == doctest::Approx(0.2));
  CHECK(std::get<Delay>(flat.back()).duration_us == doctest::Approx(0.2));
}

TEST_CASE("XY16-N readout program") {
  const auto p = build_xy16_readout(64, 0.4115);
  const auto c = count_elements(p);
  CHECK(c.pi == 64);
  CHECK(c.half_pi == 2);
  CHECK(c.laser_init == 1);
  CHECK(c.laser_read == 1);
  CHECK(total_duration(p) == doctest::Approx(64 * 0.4115));
  CHECK_THROWS_AS(build_xy16(63, 0.4), ParameterError);
  CHECK_THROWS_AS(build_xy16(0, 0.4), ParameterError);
  CHECK_THROWS_AS(build_xy16(16, 0.0), ParameterError);
}

TEST_CASE("PulsePol unit and variants") {
  const auto y = pulsepol_unit(2.0, PolVariant::PolY);
  const auto x = pulsepol_unit(2.0, PolVariant::PolX);
  PulseProgram py{"", y, {}, ""};
  const auto c = count_elements(py);
  CHECK(c.pi + c.half_pi == 12);
  CHECK(c.delays == 8);
  CHECK(free_evolution(y) == doctest::Approx(2 * 2.0));
  // PolX is PolY played backwards.
  auto reversed = flatten(y);
  std::reverse(reversed.begin(), reversed.end());
  CHECK(reversed == flatten(x));
  CHECK(flatten(y) != flatten(x));
}

TEST_CASE("composite PulsePol programs") {
  const auto s = build_pulsepol_spectrum(1.248, 20);
  CHECK(count_elements(s).laser_init == 1);
  CHECK(count_elements(s).laser_read == 1);
  CHECK(total_duration(s) == doctest::Approx(2 * 20 * 2.496));
  const auto t = build_polarization_transient(1.248, 5, 20);
  CHECK(count_elements(t).laser_init == 5);
  CHECK(count_elements(t).laser_read == 5);
  CHECK_THROWS_AS(build_pulsepol(1.0, PolVariant::PolY, 0), ParameterError);
}

TEST_CASE("correlation program keeps both sensing blocks") {
  const auto p = build_correlation(0.4125, 3.0, -1, 32);
  CHECK(count_pi(p) == 64);
  CHECK(total_duration(p) == doctest::Approx(64 * 0.4125 + 3.0));
  CHECK(count_elements(build_correlation(0.4125, 0.0)).delays < count_elements(p).delays);
  CHECK_THROWS_AS(build_correlation(0.4, -1.0), ParameterError);
  CHECK_THROWS_AS(build_correlation(0.4, 1.0, 0), ParameterError);
}

TEST_CASE("Rabi and FID programs") {
  RabiSpec r;
  r.tau_pol_us = 1.2351;
  r.t_rf_us = 4.0;
  r.rf = {1.2239, 0.0, 57.7};
  CHECK(count_elements(build_rabi(r)).rf == 1);
  r.t_rf_us = 0.0;
  CHECK(count_elements(build_rabi(r)).rf == 0);

  FidSpec f;
  f.tau_pol_us = 1.2351;
  f.rf = {1.2239, 0.0, 57.7};
  f.t_half_pi_us = 4.333;
  f.n_readouts = 10;
  f.tau_us = 0.4115;
  f.t_l_us = 11.84;
  const auto p = build_fid(f);
  CHECK(count_elements(p).laser_init == static_cast<std::size_t>(f.pol_blocks));
  CHECK(count_elements(p).laser_read == static_cast<std::size_t>(f.n_readouts));
  CHECK(p.readout_axis == "Y");
  // Readout cycles are exactly t_L apart.
  const double pol = total_duration(build_fid([&] {
    auto g = f;
    g.n_readouts = 1;
    return g;
  }()));
  CHECK(total_duration(p) - pol == doctest::Approx(9 * 11.84));
  f.t_l_us = 16 * 0.4115 * 0.99;
  CHECK_THROWS_AS(build_fid(f), TimingError);
}

TEST_CASE("program validation") {
  PulseProgram p{"", {Delay{-1.0}}, {}, ""};
  CHECK_THROWS_AS(validate(p), ParameterError);
  p.nodes = {RfPulse{1.0, 0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(validate(p), ParameterError);
  p.nodes = {Block{{Delay{1.0}}, 0, {}}};
  CHECK_THROWS_AS(validate(p), ParameterError);
  p.nodes = {Block{{Delay{1.0}, LaserRead{}}, 3, {}}};
  CHECK_NOTHROW(validate(p));
  CHECK(flatten(p).size() == 6);
  CHECK(contains_laser(p.nodes));
  CHECK_FALSE(contains_rf(p.nodes));
}

TEST_CASE("parse a hand-written program") {
  const auto p = parse_sequence(
      "@name xy\n"
      "@param tau=0.4115\n"
      "# comment\n"
      "L -- X/2 -- (XY16-64 t=0.4115) -- -X/2 -- LRO\n");
  CHECK(p.name == "xy");
  CHECK(p.parameters.at("tau") == doctest::Approx(0.4115));
  const auto want = build_xy16_readout(64, 0.4115);
  CHECK(p.nodes == want.nodes);
  CHECK(format_sequence(p).find("L--X/2--(XY16-64 t=0.4115)---X/2--LRO") != std::string::npos);
}

TEST_CASE("parse rf, delays, groups and PulsePol macros") {
  const auto p = parse_sequence("(PolY t=1.248)^20 -- L -- rf(f=1.2239, T=4.333, W=57.7) -- d(3.5) -- (X -- d(1))^3");
  REQUIRE(p.nodes.size() == 5);
  const Block* pol = p.nodes[0].block();
  REQUIRE(pol != nullptr);
  CHECK(pol->count == 20);
  CHECK(std::get<PulsePolMacro>(pol->macro).tau_pol_us == doctest::Approx(1.248));
  const auto rf = std::get<RfPulse>(*p.nodes[2].element());
  CHECK(rf.phase_rad == 0.0);
  CHECK(rf.rabi_khz == doctest::Approx(57.7));
  CHECK(p.nodes[4].block()->count == 3);
}

TEST_CASE("parse errors report line and column") {
  auto error_at = [](const std::string& text) {
    try {
      parse_sequence(text);
    } catch (const ParseError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair<std::size_t, std::size_t>{0, 0};
  };
  CHECK(error_at("L -- Z/2 -- LRO") == std::pair<std::size_t, std::size_t>{1, 6});
  CHECK(error_at("L --\n  (XY16-63 t=0.4)") == std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(error_at("(X -- Y") == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(error_at("X -- Y)") == std::pair<std::size_t, std::size_t>{1, 7});
  CHECK(error_at("(X)^2.5").first == 1);
  CHECK(error_at("").first == 1);
  CHECK(error_at("X -- @name late").first == 1);
  CHECK(error_at("d(-1)").first == 1);
  CHECK(error_at("rf(f=1, T=2)").first == 1);
  CHECK_THROWS_AS(parse_sequence("X Y"), ParseError);
}

TEST_CASE("format then parse is the identity on random programs") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 300; ++k) {
    const auto p = random_program(rng);
    const auto text = format_sequence(p);
    const auto back = parse_sequence(text);
    CHECK(back == p);
    CHECK(format_sequence(back) == text);
  }
}

TEST_CASE("formatting is idempotent on hand-written text") {
  for (const char* text : {"L--X/2--(XY16-32 t=0.4)--Y/2--LRO", "  (  PolX  t = 1.5 ) ^ 3 --L",
                           "@readout Y\nd(0.1)--(Y--(X)^2)^4--rf(f=1,phi=0.5,T=2,W=3)"}) {
    const auto once = format_sequence(parse_sequence(text));
    CHECK(format_sequence(parse_sequence(once)) == once);
  }
}

TEST_CASE("shortest round-trip numbers") {
  CHECK(format_number(0.4115) == "0.4115");
  CHECK(format_number(2.0) == "2");
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(rng);
    CHECK(std::stod(format_number(v)) == v);
  }
}
