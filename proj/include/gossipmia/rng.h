//
// Copyright 2026 The gossipmia Authors
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
//

#ifndef GOSSIPMIA_RNG_H_
#define GOSSIPMIA_RNG_H_

#include <cstdint>
#include <random>

namespace gossipmia {

using Rng = std::mt19937_64;

// Returns a generator for the stream `stream` of `seed`. Distinct
// (seed, stream) pairs give independent generators.
Rng MakeRng(uint64_t seed, uint64_t stream = 0);

}  // namespace gossipmia

#endif  // GOSSIPMIA_RNG_H_
