// Copyright 2026 The tensor-reid Authors
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

#include <cstdint>
#include <random>

namespace treid {

/// Reproducible random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the distributions below are
/// implemented here rather than taken from <random>, whose algorithms vary
/// across standard libraries.
///
///  - uniform01: top 53 bits of one engine draw, scaled by 2^-53, in [0, 1).
///  - normal: Box-Muller, one variate per call from two uniform01 draws:
///    sqrt(-2 ln(1 - u1)) * cos(2 pi u2). The second variate is discarded.
///  - below(n): rejection sampling on the largest multiple of n that fits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace treid
