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

#include "fragscope/histogram.hpp"

#include <cstdlib>

namespace fragscope {

Histogram histogram(const Raster& r) {
  Histogram h;
  const std::size_t n = r.pixels.size() / 3;
  for (std::size_t i = 0; i < n; ++i) {
    ++h.counts[bin_of(r.pixels[3 * i], r.pixels[3 * i + 1], r.pixels[3 * i + 2])];
  }
  h.total = n;
  return h;
}

Histogram histogram_parallel(const Raster& r) {
  Histogram h;
  const long long n = static_cast<long long>(r.pixels.size() / 3);
  const std::uint8_t* px = r.pixels.data();
  std::uint64_t* counts = h.counts.data();
#pragma omp parallel
  {
    std::array<std::uint64_t, kBins> local{};
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < n; ++i) {
      ++local[bin_of(px[3 * i], px[3 * i + 1], px[3 * i + 2])];
    }
    for (int b = 0; b < kBins; ++b) {
#pragma omp atomic
      counts[b] += local[b];
    }
  }
  h.total = static_cast<std::uint64_t>(n);
  return h;
}

double imagediff(const Histogram& a, const Histogram& b) {
  if (a.total == 0 && b.total == 0) return 0.0;
  if (a.total == 0 || b.total == 0) return 1.0;
  // Integer cross-multiplication keeps identical distributions at exactly 0.
  unsigned __int128 num = 0;
  for (int i = 0; i < kBins; ++i) {
    unsigned __int128 x = static_cast<unsigned __int128>(a.counts[i]) * b.total;
    unsigned __int128 y = static_cast<unsigned __int128>(b.counts[i]) * a.total;
    num += x > y ? x - y : y - x;
  }
  long double den = static_cast<long double>(a.total) * static_cast<long double>(b.total);
  return static_cast<double>(static_cast<long double>(num) / den / 2.0L);
}

double imagediff(const Raster& a, const Raster& b) { return imagediff(histogram(a), histogram(b)); }

}  // namespace fragscope
