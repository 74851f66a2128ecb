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


#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kbr/term.hpp"

namespace kbr {

/// Injective map from pattern variables to target variables, with an undo
/// trail. Clauses are small, so linear scans beat hashing here.
class Renaming {
 public:
  std::optional<Symbol> lookup(Symbol from) const;
  bool is_image(Symbol to) const;

  /// Extends the map with from -> to. Fails if `from` is bound elsewhere or
  /// `to` is already the image of another variable.
  bool bind(Symbol from, Symbol to);

  std::size_t mark() const { return pairs_.size(); }
  void undo(std::size_t mark) { pairs_.resize(mark); }

  const std::vector<std::pair<Symbol, Symbol>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<Symbol, Symbol>> pairs_;
};

/// Structural match of `pattern` onto `target` where pattern variables may
/// only map to target variables (a renaming, never an instantiation).
/// On failure the renaming may hold partial bindings; callers undo to a mark.
bool match_renaming(const Term& pattern, const Term& target, Renaming& r);
bool match_renaming(const Atom& pattern, const Atom& target, Renaming& r);

/// Callback receives, for every pattern literal, the index of the target
/// literal it was mapped to. Return false to stop the enumeration.
using EmbeddingVisitor =
    std::function<bool(const std::vector<std::size_t>&, const Renaming&)>;

/// Enumerates every embedding of the pattern literals into pairwise distinct
/// target literals under a single injective renaming that extends `r`.
/// `usable`, when non-empty, masks the target literals that may be used.
/// Returns false if the visitor stopped the enumeration.
bool for_each_embedding(std::span<const Atom> pattern,
                        std::span<const Atom> target, Renaming& r,
                        const EmbeddingVisitor& visit,
                        const std::vector<bool>& usable = {});

}  // namespace kbr
