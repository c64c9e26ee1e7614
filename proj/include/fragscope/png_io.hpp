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

#ifndef FRAGSCOPE_PNG_IO_HPP_
#define FRAGSCOPE_PNG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fragscope/snapshot.hpp"

namespace fragscope {

Raster read_png(const std::string& path);
void write_png(const Raster& r, const std::string& path);
std::vector<std::uint8_t> encode_png(const Raster& r);
std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace fragscope

#endif  // FRAGSCOPE_PNG_IO_HPP_
