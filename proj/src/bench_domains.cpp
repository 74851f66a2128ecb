// Copyright 2026 The kbrefactor Authors. All rights reserved.
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


#include <algorithm>
#include <cctype>
#include <random>

#include "kbr/bench.hpp"

namespace kbr {
namespace {

constexpr std::size_t kMaxOutput = 64;

const char* const kStringActions[] = {"mk_uppercase", "mk_lowercase", "skip", "copy", "write"};

Program declare(std::initializer_list<std::pair<const char*, std::size_t>> prims) {
  Program p;
  for (const auto& [name, arity] : prims) p.registry.declare(Symbol(name), arity, Role::Primitive);
  return p;
}

bool has_char(const State& s) { return s.pos < static_cast<int>(s.data.size()); }

unsigned char current(const State& s) {
  return static_cast<unsigned char>(s.data[static_cast<std::size_t>(s.pos)]);
}

}  // namespace

std::string_view to_string(Domain d) { return d == Domain::Lego ? "lego" : "string"; }

std::size_t StateHash::operator()(const State& s) const noexcept {
  std::size_t h = std::hash<std::string>{}(s.data);
  h ^= std::hash<std::string>{}(s.out) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 31 + static_cast<std::size_t>(s.pos);
}

State lego_state(const std::vector<int>& heights, int cursor) {
  State s;
  for (int h : heights) s.data.push_back(static_cast<char>(h));
  s.pos = cursor;
  return s;
}

std::vector<int> lego_heights(const State& s) {
  std::vector<int> out;
  for (char c : s.data) out.push_back(static_cast<int>(c));
  return out;
}

State string_state(std::string input, int pos, std::string out) {
  return State{std::move(input), std::move(out), pos};
}

Program lego_primitives() {
  return declare({{"left", 2}, {"right", 2}, {"place_brick", 2}, {"at_left", 1},
                  {"at_right", 1}, {"not_at_left", 1}, {"not_at_right", 1}});
}

Program string_primitives() {
  return declare({{"mk_uppercase", 2}, {"mk_lowercase", 2}, {"skip", 2}, {"copy", 2},
                  {"write", 2}, {"is_letter", 1}, {"is_uppercase", 1}, {"is_space", 1},
                  {"is_number", 1}});
}

Program domain_primitives(Domain d) {
  return d == Domain::Lego ? lego_primitives() : string_primitives();
}

std::optional<State> apply_action(Domain d, std::string_view name, const State& s) {
  State t = s;
  if (d == Domain::Lego) {
    const int width = static_cast<int>(s.data.size());
    if (name == "left") {
      if (s.pos == 0) return std::nullopt;
      --t.pos;
    } else if (name == "right") {
      if (s.pos + 1 >= width) return std::nullopt;
      ++t.pos;
    } else if (name == "place_brick") {
      char& h = t.data[static_cast<std::size_t>(t.pos)];
      if (h >= kMaxLegoHeight) return std::nullopt;
      ++h;
    } else {
      return std::nullopt;
    }
    return t;
  }
  if (name == "write") {
    if (t.out.size() >= kMaxOutput) return std::nullopt;
    t.out.push_back('.');
    return t;
  }
  if (!has_char(s)) return std::nullopt;
  const unsigned char c = current(s);
  if (name == "skip") {
  } else if (name == "copy") {
    t.out.push_back(static_cast<char>(c));
  } else if (name == "mk_uppercase" || name == "mk_lowercase") {
    if (!std::isalpha(c)) return std::nullopt;
    t.out.push_back(static_cast<char>(name == "mk_uppercase" ? std::toupper(c) : std::tolower(c)));
  } else {
    return std::nullopt;
  }
  if (t.out.size() > kMaxOutput) return std::nullopt;
  ++t.pos;
  return t;
}

bool holds(Domain d, std::string_view name, const State& s) {
  if (d == Domain::Lego) {
    const int last = static_cast<int>(s.data.size()) - 1;
    if (name == "at_left") return s.pos == 0;
    if (name == "at_right") return s.pos == last;
    if (name == "not_at_left") return s.pos != 0;
    if (name == "not_at_right") return s.pos != last;
    return false;
  }
  if (!has_char(s)) return false;
  const unsigned char c = current(s);
  if (name == "is_letter") return std::isalpha(c) != 0;
  if (name == "is_uppercase") return std::isupper(c) != 0;
  if (name == "is_space") return c == ' ';
  if (name == "is_number") return std::isdigit(c) != 0;
  return false;
}

bool outputs_match(Domain d, const State& got, const State& want) {
  return d == Domain::Lego ? got.data == want.data : got.out == want.out;
}

std::vector<SynthesisTask> gen_lego_tasks(std::size_t width, std::size_t n,
                                          std::uint64_t seed, int max_height) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> height(0, std::clamp(max_height, 0, kMaxLegoHeight));
  std::vector<SynthesisTask> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<int> target(width);
    for (int& h : target) h = height(rng);
    SynthesisTask t;
    t.name = "lego_w" + std::to_string(width) + "_" + std::to_string(k);
    t.domain = Domain::Lego;
    t.examples.push_back({lego_state(std::vector<int>(width, 0)), lego_state(target)});
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<SynthesisTask> gen_string_tasks(std::size_t n, std::uint64_t seed,
                                            std::size_t examples, std::size_t max_length) {
  static const std::string kAlphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_char(0, kAlphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_action(0, std::size(kStringActions) - 1);
  std::uniform_int_distribution<std::size_t> pick_len(2, std::max<std::size_t>(2, max_length));
  std::vector<SynthesisTask> out;
  while (out.size() < n) {
    std::vector<std::string_view> program(pick_len(rng));
    for (auto& a : program) a = kStringActions[pick_action(rng)];
    SynthesisTask t;
    t.name = "string_" + std::to_string(out.size());
    t.domain = Domain::String;
    for (int attempt = 0; attempt < 20 && t.examples.size() < examples; ++attempt) {
      std::string input(program.size() + rng() % 4, ' ');
      for (char& c : input) c = kAlphabet[pick_char(rng)];
      std::optional<State> s = string_state(input);
      for (auto a : program)
        if (s) s = apply_action(Domain::String, a, *s);
      if (s && !s->out.empty()) t.examples.push_back({string_state(input), *s});
    }
    if (t.examples.size() == examples) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace kbr
