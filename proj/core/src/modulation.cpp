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
#include <cmath>
#include <functional>

#include "ltescan/phy/modulation.hpp"

namespace ltescan::phy {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

std::vector<cplx> qpsk_modulate(const Bits& bits) {
  if (bits.size() % 2 != 0) throw Error("qpsk_modulate: odd bit count");
  std::vector<cplx> out(bits.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = cplx((1.0 - 2.0 * bits[2 * i]) * kInvSqrt2,
                  (1.0 - 2.0 * bits[2 * i + 1]) * kInvSqrt2);
  return out;
}

Llrs qpsk_soft_demod(const std::vector<cplx>& soft_symbols) {
  Llrs out(2 * soft_symbols.size());
  for (size_t i = 0; i < soft_symbols.size(); ++i) {
    out[2 * i] = std::sqrt(2.0) * soft_symbols[i].real();
    out[2 * i + 1] = std::sqrt(2.0) * soft_symbols[i].imag();
  }
  return out;
}

void scramble(Bits& bits, const Bits& sequence, size_t seq_offset) {
  if (seq_offset + bits.size() > sequence.size())
    throw Error("scramble: sequence too short");
  for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= sequence[seq_offset + i];
}

void descramble(Llrs& llrs, const Bits& sequence, size_t seq_offset) {
  if (seq_offset + llrs.size() > sequence.size())
    throw Error("descramble: sequence too short");
  for (size_t i = 0; i < llrs.size(); ++i)
    if (sequence[seq_offset + i]) llrs[i] = -llrs[i];
}

std::vector<std::vector<cplx>> txd_precode(const std::vector<cplx>& symbols,
                                           int ports) {
  const size_t n = symbols.size();
  if (ports == 1) return {symbols};
  if (ports == 2) {
    if (n % 2 != 0) throw Error("txd_precode: need an even symbol count");
    std::vector<std::vector<cplx>> out(2, std::vector<cplx>(n));
    for (size_t i = 0; i + 1 < n; i += 2) {
      const cplx x0 = symbols[i], x1 = symbols[i + 1];
      out[0][i] = x0 * kInvSqrt2;
      out[0][i + 1] = x1 * kInvSqrt2;
      out[1][i] = -std::conj(x1) * kInvSqrt2;
      out[1][i + 1] = std::conj(x0) * kInvSqrt2;
    }
    return out;
  }
  if (ports == 4) {
    if (n % 4 != 0) throw Error("txd_precode: need a multiple of 4 symbols");
    std::vector<std::vector<cplx>> out(4, std::vector<cplx>(n, 0.0));
    for (size_t i = 0; i + 3 < n; i += 4) {
      const cplx x0 = symbols[i], x1 = symbols[i + 1];
      const cplx x2 = symbols[i + 2], x3 = symbols[i + 3];
      // Ports (0,2) carry the first pair, ports (1,3) the second.
      out[0][i] = x0 * kInvSqrt2;
      out[0][i + 1] = x1 * kInvSqrt2;
      out[2][i] = -std::conj(x1) * kInvSqrt2;
      out[2][i + 1] = std::conj(x0) * kInvSqrt2;
      out[1][i + 2] = x2 * kInvSqrt2;
      out[1][i + 3] = x3 * kInvSqrt2;
      out[3][i + 2] = -std::conj(x3) * kInvSqrt2;
      out[3][i + 3] = std::conj(x2) * kInvSqrt2;
    }
    return out;
  }
  throw Error("txd_precode: ports must be 1, 2 or 4");
}

namespace {

// One Alamouti pair: received (r0, r1) through channels (ha, hb).
inline void alamouti_pair(cplx r0, cplx r1, cplx ha, cplx hb, cplx& x0,
                          cplx& x1) {
  x0 = std::sqrt(2.0) * (std::conj(ha) * r0 + hb * std::conj(r1));
  x1 = std::sqrt(2.0) * (std::conj(ha) * r1 - hb * std::conj(r0));
}

} // namespace

std::vector<cplx> txd_deprecode(const std::vector<cplx>& y,
                                const std::vector<std::vector<cplx>>& h,
                                int ports) {
  const size_t n = y.size();
  if (ports == 1) {
    std::vector<cplx> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = std::conj(h[0][i]) * y[i];
    return out;
  }
  if (ports == 2) {
    if (n % 2 != 0) throw Error("txd_deprecode: need an even RE count");
    std::vector<cplx> out(n);
    for (size_t i = 0; i + 1 < n; i += 2)
      alamouti_pair(y[i], y[i + 1], h[0][i], h[1][i], out[i], out[i + 1]);
    return out;
  }
  if (ports == 4) {
    if (n % 4 != 0) throw Error("txd_deprecode: need a multiple of 4 REs");
    std::vector<cplx> out(n);
    for (size_t i = 0; i + 3 < n; i += 4) {
      alamouti_pair(y[i], y[i + 1], h[0][i], h[2][i], out[i], out[i + 1]);
      alamouti_pair(y[i + 2], y[i + 3], h[1][i + 2], h[3][i + 2], out[i + 2],
                    out[i + 3]);
    }
    return out;
  }
  throw Error("txd_deprecode: ports must be 1, 2 or 4");
}

} // namespace ltescan::phy
