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
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ltescan/util.hpp"

// Bit-exact encode/decode primitives shared by the transmit oracle and the
// receive chain. Bits are uint8_t 0/1; soft values are LLRs with positive
// meaning "bit 0".
namespace ltescan::phy {

using Bits = std::vector<uint8_t>;
using Llrs = std::vector<double>;

/// Saturating LLR accumulation bound (fixed-point style +/-127/8 scale).
inline constexpr double kLlrClamp = 127.0 / 8.0;
double clamp_llr(double v);

// ------------------------------------------------------------------- CRC
Bits crc16(const Bits& data);                 // x^16 + x^12 + x^5 + 1
Bits crc24a(const Bits& data);                // LTE transport-block CRC

/// PBCH CRC mask for 1, 2 or 4 cell-specific reference ports.
const std::array<uint8_t, 16>& pbch_crc_mask(int ports);

// ------------------------------------- tail-biting convolutional code (K=7)
/// Rate-1/3 encoder, generators 133/171/165 octal, register preloaded with
/// the block tail. Returns the three output streams, each data.size() long.
std::array<Bits, 3> conv_encode_tbcc(const Bits& data);

/// Wrap-around Viterbi decoder (3 circular passes, best-metric state).
Bits conv_decode_tbcc(const std::array<Llrs, 3>& streams);

// ------------------------------------------------------------ turbo code
/// Valid turbo interleaver sizes: 40..512 step 8, ..., 2112..6144 step 64.
bool valid_turbo_block_size(int k);
std::vector<int> turbo_block_sizes();

/// QPP interleaver indices pi(i) = (f1*i + f2*i^2) mod K.
std::vector<int> turbo_interleaver(int k);

/// Rate-1/3 parallel-concatenated encoder with trellis termination.
/// Streams are K+4 long (tail bits multiplexed per the transport channel
/// spec so each stream stays equal length).
std::array<Bits, 3> turbo_encode(const Bits& data);

/// Max-log-MAP decoder. Runs up to `iterations`, stopping early when
/// `check` (if provided) accepts the hard decision. Returns K bits.
Bits turbo_decode(const std::array<Llrs, 3>& streams, int iterations,
                  const std::function<bool(const Bits&)>& check = nullptr);

// ---------------------------------------------------------- rate matching
/// Transmission-order source indices for the convolutional-code circular
/// buffer. Entry t maps transmitted bit position t (mod 3*D) to an index
/// into the concatenated d-streams (stream*D + i).
std::vector<int32_t> conv_rate_match_order(int d_len);

/// e(k) for k in [first_bit, first_bit+e_len) of the rate-matched stream.
Bits conv_rate_match(const std::array<Bits, 3>& d, size_t first_bit,
                     size_t e_len);

/// Soft de-rate-matching: accumulate LLRs back onto the d-streams.
void conv_rate_dematch(const Llrs& e, size_t first_bit,
                       std::array<Llrs, 3>& d_acc);

/// Turbo circular buffer: w[j] -> source index into the concatenated
/// d-streams, or -1 for <NULL> padding. Also exposes k0 per redundancy
/// version for bit selection.
struct TurboCircularBuffer {
  int d_len = 0;       // K + 4
  int rows = 0;        // sub-block interleaver rows
  std::vector<int32_t> w_source; // length 3*Kpi
  int k0(int rv) const;
};
TurboCircularBuffer turbo_circular_buffer(int d_len);

Bits turbo_rate_match(const std::array<Bits, 3>& d, int rv, size_t e_len);
void turbo_rate_dematch(const Llrs& e, int rv, std::array<Llrs, 3>& d_acc);

} // namespace ltescan::phy
