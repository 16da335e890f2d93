// Copyright 2026 The green-cran Authors. All Rights Reserved.
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

// Keyed random streams.  A stream is a pure function of
// (seed, label, index), so work can be split across threads in any order
// without changing the numbers drawn.

#ifndef GCRAN_RNG_H_
#define GCRAN_RNG_H_

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace gcran {

class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    // FNV-1a over the label.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : label) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  // CN(0, 1): real and imaginary parts each have variance 1/2.
  std::complex<double> complex_normal() {
    constexpr double kHalfSqrt = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kHalfSqrt * re, kHalfSqrt * im};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gcran

#endif  // GCRAN_RNG_H_
