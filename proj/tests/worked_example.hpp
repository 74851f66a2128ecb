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

// The pillar construction used throughout the tests.
namespace kbr::example {

inline constexpr const char* kPillarUnfolded =
    "pillar(X,Y,E,F) :- place(hor,X,E,E1), right(X,Z), place(brick,Z,E1,E2), "
    "place(brick,Z,E2,E3), place(brick,Z,E3,E4), left(Z,Y), place(hor,X,E4,F).";
inline constexpr const char* kVer =
    "ver(X,E,F) :- place(brick,X,E,E1), place(brick,X,E1,E2), place(brick,X,E2,F).";
inline constexpr const char* kPillarFolded =
    "pillar(X,Y,E,F) :- place(hor,X,E,E1), right(X,Z), ver(Z,E1,E2), left(Z,Y), "
    "place(hor,X,E2,F).";
inline constexpr const char* kSup =
    "sup(X,E) :- place(brick,X,E,E1), place(brick,X,E1,F).";

inline constexpr const char* kPrimitives =
    "#primitive place/4.\n#primitive right/2.\n#primitive left/2.\n";

}  // namespace kbr::example
