// Copyright 2026 The Fragscope Authors
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

#ifndef FRAGSCOPE_HISTOGRAM_HPP_
#define FRAGSCOPE_HISTOGRAM_HPP_

#include <array>
#include <cstdint>

#include "fragscope/snapshot.hpp"

namespace fragscope {

inline constexpr int kBinsPerChannel = 4;
inline constexpr int kBins = kBinsPerChannel * kBinsPerChannel * kBinsPerChannel;

struct Histogram {
  std::array<std::uint64_t, kBins> counts{};
  std::uint64_t total = 0;

  double freq(int bin) const {
    return total ? static_cast<double>(counts[bin]) / static_cast<double>(total) : 0.0;
  }
  bool operator==(const Histogram&) const = default;
};

inline int bin_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return (r >> 6) * 16 + (g >> 6) * 4 + (b >> 6);
}

// Serial reference.
Histogram histogram(const Raster& r);
// OpenMP kernel; bit-identical to the serial reference.
Histogram histogram_parallel(const Raster& r);

// Half L1 distance between normalised histograms, in [0,1]. Exact zero iff
// the normalised histograms agree.
double imagediff(const Histogram& a, const Histogram& b);
double imagediff(const Raster& a, const Raster& b);

}  // namespace fragscope

#endif  // FRAGSCOPE_HISTOGRAM_HPP_
