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


#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "kbr/term.hpp"

namespace kbr {
namespace {

// Append-only intern table shared by every thread. Id 0 is the empty symbol.
class SymbolTable {
 public:
  SymbolTable() { texts_.emplace_back(); }

  std::uint32_t intern(std::string_view text) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(text); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(text); it != index_.end()) return it->second;
    return insert_locked(text);
  }

  std::uint32_t fresh(std::string_view prefix) {
    std::unique_lock lock(mutex_);
    for (;;) {
      std::string candidate(prefix);
      candidate += std::to_string(counter_++);
      if (index_.find(candidate) == index_.end()) return insert_locked(candidate);
    }
  }

  std::string_view text(std::uint32_t id) {
    std::shared_lock lock(mutex_);
    return texts_[id];
  }

 private:
  std::uint32_t insert_locked(std::string_view text) {
    auto id = static_cast<std::uint32_t>(texts_.size());
    texts_.emplace_back(text);
    // deque never relocates existing elements, so the view stays valid.
    index_.emplace(std::string_view(texts_.back()), id);
    return id;
  }

  std::shared_mutex mutex_;
  std::deque<std::string> texts_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
  std::uint64_t counter_ = 0;
};

SymbolTable& table() {
  static SymbolTable instance;
  return instance;
}

}  // namespace

Symbol::Symbol(std::string_view text) : id_(table().intern(text)) {}

std::string_view Symbol::str() const { return table().text(id_); }

Symbol Symbol::fresh(std::string_view prefix) {
  Symbol s;
  s.id_ = table().fresh(prefix);
  return s;
}

bool lexical_less(Symbol a, Symbol b) {
  return a != b && a.str() < b.str();
}

}  // namespace kbr
