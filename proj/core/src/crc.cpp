/*
 Copyright 2026 The ltescan authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <algorithm>

#include "ltescan/phy/coding.hpp"

namespace ltescan::phy {

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

namespace {

Bits crc_generic(const Bits& data, uint32_t poly, int n) {
  const uint32_t mask = (n == 32) ? 0xFFFFFFFFu : ((1u << n) - 1u);
  uint32_t reg = 0;
  for (uint8_t bit : data) {
    uint32_t fb = ((reg >> (n - 1)) & 1u) ^ (bit & 1u);
    reg = (reg << 1) & mask;
    if (fb) reg ^= poly;
  }
  Bits out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = (reg >> (n - 1 - i)) & 1u;
  return out;
}

} // namespace

Bits crc16(const Bits& data) { return crc_generic(data, 0x1021u, 16); }

Bits crc24a(const Bits& data) { return crc_generic(data, 0x864CFBu, 24); }

const std::array<uint8_t, 16>& pbch_crc_mask(int ports) {
  static const std::array<uint8_t, 16> one = {0, 0, 0, 0, 0, 0, 0, 0,
                                              0, 0, 0, 0, 0, 0, 0, 0};
  static const std::array<uint8_t, 16> two = {1, 1, 1, 1, 1, 1, 1, 1,
                                              1, 1, 1, 1, 1, 1, 1, 1};
  static const std::array<uint8_t, 16> four = {0, 1, 0, 1, 0, 1, 0, 1,
                                               0, 1, 0, 1, 0, 1, 0, 1};
  switch (ports) {
    case 1: return one;
    case 2: return two;
    case 4: return four;
    default: throw Error("pbch_crc_mask: ports must be 1, 2 or 4");
  }
}

} // namespace ltescan::phy
