// Copyright 2026 The refprice Authors
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

#ifndef REFPRICE_RANDOM_H_
#define REFPRICE_RANDOM_H_

#include <cstdint>
#include <random>

namespace refprice {

using Rng = std::mt19937_64;
using Seed = std::uint64_t;

// Seed for the i-th independent stream of a run: master + index.
inline Seed SplitSeed(Seed master, std::uint64_t index) {
  return master + index;
}

}  // namespace refprice

#endif  // REFPRICE_RANDOM_H_
