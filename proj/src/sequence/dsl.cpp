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

#include "nvscope/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <type_traits>

#include "nvscope/builders.hpp"
#include "nvscope/errors.hpp"

namespace nvscope {
namespace {

bool is_word_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '/' ||
         c == '_' || c == '.';
}

bool is_number_char(char c) {
  return (c >= '0' && c <= '9') || c == '.' || c == 'e' || c == 'E' || c == '+' || c == '-';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

struct Mark {
  std::size_t pos;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PulseProgram parse() {
    PulseProgram program;
    skip_blank();
    while (peek() == '@') {
      directive(program);
      skip_blank();
    }
    if (at_end()) fail("empty program", here(), "");
    program.nodes = sequence();
    skip_blank();
    if (!at_end()) {
      const Mark m = here();
      if (peek() == '@') fail("directives must precede the sequence", m, word_at(m));
      if (peek() == ')') fail("unbalanced ')'", m, ")");
      fail("expected '--' between elements", m, word_at(m));
    }
    return program;
  }

 private:
  // Cursor.
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  Mark here() const { return Mark{pos_, line_, column_}; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && !at_end(); ++k) advance();
  }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).substr(0, s.size()) == s; }

  [[noreturn]] void fail(const std::string& message, const Mark& m, std::string token) const {
    throw ParseError(message, m.line, m.column, std::move(token));
  }

  std::string word_at(const Mark& m) const {
    std::size_t end = m.pos;
    if (end < text_.size() && text_[end] == '-') ++end;
    while (end < text_.size() && is_word_char(text_[end])) ++end;
    if (end == m.pos && end < text_.size()) ++end;
    return std::string(text_.substr(m.pos, end - m.pos));
  }

  void skip_blank() {
    while (!at_end()) {
      if (is_space(peek())) {
        advance();
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }

  std::string read_word() {
    const std::size_t start = pos_;
    if (peek() == '-') advance();
    while (!at_end() && is_word_char(peek())) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (is_word_char(peek()) && peek() != '/' && peek() != '.')) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  double read_number(const char* what) {
    const Mark m = here();
    while (!at_end() && is_number_char(peek())) advance();
    const std::string_view token = text_.substr(m.pos, pos_ - m.pos);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
      fail(std::string("invalid number for ") + what, m, token.empty() ? word_at(m) : std::string(token));
    }
    return value;
  }

  void expect(char c, const char* context) {
    if (peek() != c) {
      const Mark m = here();
      fail(std::string("expected '") + c + "' " + context, m, at_end() ? "" : word_at(m));
    }
    advance();
  }

  // Directives.
  void directive(PulseProgram& program) {
    const Mark m = here();
    advance();
    const std::string key = read_identifier();
    skip_inline_space();
    const Mark vm = here();
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != '\n' && text_[end] != '#') ++end;
    std::string_view value = text_.substr(pos_, end - pos_);
    while (!value.empty() && is_space(value.back())) value.remove_suffix(1);
    if (key == "name") {
      if (value.empty()) fail("@name needs a value", vm, "");
      program.name = std::string(value);
      advance(end - pos_);
    } else if (key == "readout") {
      if (value != "X" && value != "Y" && value != "-X" && value != "-Y") {
        fail("@readout must be X, Y, -X or -Y", vm, std::string(value));
      }
      program.readout_axis = std::string(value);
      advance(end - pos_);
    } else if (key == "param") {
      const std::string name = read_identifier();
      if (name.empty()) fail("@param needs name=value", vm, std::string(value));
      skip_inline_space();
      expect('=', "after parameter name");
      skip_inline_space();
      const double v = read_number("parameter");
      skip_inline_space();
      if (!at_end() && peek() != '\n' && peek() != '#') fail("trailing text after parameter", here(), word_at(here()));
      if (!program.parameters.emplace(name, v).second) fail("duplicate parameter", vm, name);
    } else {
      fail("unknown directive", m, "@" + key);
    }
  }

  // Sequence grammar.
  std::vector<Node> sequence() {
    std::vector<Node> nodes;
    nodes.push_back(item());
    for (;;) {
      skip_blank();
      if (!starts_with("--")) break;
      advance(2);
      skip_blank();
      nodes.push_back(item());
    }
    return nodes;
  }

  Node item() {
    const Mark m = here();
    if (at_end()) fail("expected an element", m, "");
    if (peek() == '(') return group();
    const std::string word = read_word();
    if (word == "X" || word == "Y" || word == "-X" || word == "-Y") return MwPulse{axis_of(word), MwAngle::Pi};
    if (word == "X/2" || word == "Y/2" || word == "-X/2" || word == "-Y/2") {
      return MwPulse{axis_of(word.substr(0, word.size() - 2)), MwAngle::HalfPi};
    }
    if (word == "L") return LaserInit{};
    if (word == "LRO") return LaserRead{};
    if (word == "d" && peek() == '(') return delay();
    if (word == "rf" && peek() == '(') return rf(m);
    fail("unknown token", m, word.empty() ? word_at(m) : word);
  }

  static MwAxis axis_of(const std::string& s) {
    if (s == "X") return MwAxis::X;
    if (s == "Y") return MwAxis::Y;
    if (s == "-X") return MwAxis::MinusX;
    return MwAxis::MinusY;
  }

  Node delay() {
    advance();
    skip_blank();
    const Mark m = here();
    const double t = read_number("delay");
    if (t < 0.0) fail("delay must be >= 0", m, std::string(text_.substr(m.pos, pos_ - m.pos)));
    skip_blank();
    expect(')', "to close d(");
    return Delay{t};
  }

  Node rf(const Mark& start) {
    advance();
    std::optional<double> f, phi, T, W;
    for (;;) {
      skip_blank();
      const Mark km = here();
      const std::string key = read_identifier();
      std::optional<double>* slot = key == "f" ? &f : key == "phi" ? &phi : key == "T" ? &T : key == "W" ? &W : nullptr;
      if (slot == nullptr) fail("unknown rf field (expected f, phi, T, W)", km, key.empty() ? word_at(km) : key);
      if (slot->has_value()) fail("duplicate rf field", km, key);
      skip_blank();
      expect('=', "after rf field");
      skip_blank();
      const Mark vm = here();
      *slot = read_number("rf field");
      if (key == "T" && **slot < 0.0) fail("rf duration must be >= 0", vm, word_at(vm));
      if (key == "W" && !(**slot > 0.0)) fail("rf Rabi frequency must be > 0", vm, word_at(vm));
      skip_blank();
      if (peek() == ',') {
        advance();
        continue;
      }
      expect(')', "to close rf(");
      break;
    }
    if (!f || !T || !W) fail("rf needs f=, T= and W=", start, "rf");
    return RfPulse{*f, phi.value_or(0.0), *T, *W};
  }

  Node group() {
    const Mark open = here();
    advance();
    skip_blank();
    Block block;
    if (starts_with("XY16-")) {
      const Mark mm = here();
      advance(5);
      const std::string digits = read_word();
      const std::string token = "XY16-" + digits;
      int n = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        fail("XY16 pulse count must be an integer", mm, token);
      }
      if (n <= 0 || n % 16 != 0) fail("XY16 pulse count must be a positive multiple of 16", mm, token);
      const double tau = macro_time();
      close_group(open);
      block = Block{xy16_unit(tau), n / 16, Xy16Macro{n, tau}};
      skip_blank();
      if (peek() == '^') return Block{{std::move(block)}, repetition(), {}};
      return block;
    }
    if (starts_with("PolY") || starts_with("PolX")) {
      const PolVariant v = peek(3) == 'Y' ? PolVariant::PolY : PolVariant::PolX;
      advance(4);
      const double tau_pol = macro_time();
      close_group(open);
      block = Block{pulsepol_unit(tau_pol, v), 1, PulsePolMacro{v, tau_pol}};
    } else {
      if (peek() == ')') fail("empty group", open, "()");
      block.body = sequence();
      close_group(open);
    }
    skip_blank();
    if (peek() == '^') block.count = repetition();
    return block;
  }

  double macro_time() {
    skip_blank();
    const Mark key = here();
    if (at_end() || peek() != 't') fail("expected t=<us> in macro", key, word_at(key));
    advance();
    skip_blank();
    if (at_end() || peek() != '=') fail("expected t=<us> in macro", key, word_at(key));
    advance();
    skip_blank();
    const Mark m = here();
    const double t = read_number("macro time");
    if (!(t > 0.0)) fail("macro time must be > 0", m, std::string(text_.substr(m.pos, pos_ - m.pos)));
    return t;
  }

  void close_group(const Mark& open) {
    skip_blank();
    if (at_end()) fail("unbalanced '('", open, "(");
    if (peek() != ')') {
      const Mark m = here();
      fail("expected ')'", m, word_at(m));
    }
    advance();
  }

  int repetition() {
    advance();
    skip_blank();
    const Mark m = here();
    std::size_t end = pos_;
    // A sign is part of the token only when a digit follows; "--" separates elements.
    if (end + 1 < text_.size() && text_[end] == '-' && std::isdigit(static_cast<unsigned char>(text_[end + 1]))) ++end;
    while (end < text_.size() && is_word_char(text_[end])) ++end;
    const std::string token(text_.substr(pos_, end - pos_));
    int k = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), k);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || k < 1) {
      fail("repetition count must be a positive integer", m, token);
    }
    advance(end - pos_);
    return k;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

const char* axis_text(MwAxis axis) {
  switch (axis) {
    case MwAxis::X:
      return "X";
    case MwAxis::Y:
      return "Y";
    case MwAxis::MinusX:
      return "-X";
    case MwAxis::MinusY:
      return "-Y";
  }
  return "X";
}

void format_nodes(const std::vector<Node>& nodes, std::string& out);

void format_element(const PulseElement& element, std::string& out) {
  std::visit(
      [&out](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, MwPulse>) {
          out += axis_text(e.axis);
          if (e.angle == MwAngle::HalfPi) out += "/2";
        } else if constexpr (std::is_same_v<T, Delay>) {
          out += "d(" + format_number(e.duration_us) + ")";
        } else if constexpr (std::is_same_v<T, RfPulse>) {
          out += "rf(f=" + format_number(e.frequency_mhz) + ",phi=" + format_number(e.phase_rad) +
                 ",T=" + format_number(e.duration_us) + ",W=" + format_number(e.rabi_khz) + ")";
        } else if constexpr (std::is_same_v<T, LaserInit>) {
          out += "L";
        } else {
          out += "LRO";
        }
      },
      element);
}

void format_block(const Block& block, std::string& out) {
  if (const auto* xy = std::get_if<Xy16Macro>(&block.macro)) {
    out += "(XY16-" + std::to_string(xy->pulses) + " t=" + format_number(xy->tau_us) + ")";
    return;
  }
  if (const auto* pol = std::get_if<PulsePolMacro>(&block.macro)) {
    out += pol->variant == PolVariant::PolY ? "(PolY t=" : "(PolX t=";
    out += format_number(pol->tau_pol_us) + ")";
  } else {
    out += "(";
    format_nodes(block.body, out);
    out += ")";
  }
  if (block.count != 1) out += "^" + std::to_string(block.count);
}

void format_nodes(const std::vector<Node>& nodes, std::string& out) {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (k > 0) out += "--";
    if (const auto* e = nodes[k].element()) {
      format_element(*e, out);
    } else {
      format_block(*nodes[k].block(), out);
    }
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw ContractError("number formatting failed");
  return std::string(buf, ptr);
}

PulseProgram parse_sequence(std::string_view text) { return Parser(text).parse(); }

std::string format_sequence(const PulseProgram& program) {
  std::string out;
  if (!program.name.empty()) out += "@name " + program.name + "\n";
  for (const auto& [key, value] : program.parameters) out += "@param " + key + "=" + format_number(value) + "\n";
  if (!program.readout_axis.empty()) out += "@readout " + program.readout_axis + "\n";
  format_nodes(program.nodes, out);
  out += "\n";
  return out;
}

}  // namespace nvscope
