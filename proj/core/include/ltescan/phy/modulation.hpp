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

#include <vector>

#include "ltescan/phy/coding.hpp"
#include "ltescan/util.hpp"

namespace ltescan::phy {

/// QPSK, bit 0 on I, bit 1 on Q, Gray mapped: ((1-2*b0) + j(1-2*b1))/sqrt(2).
std::vector<cplx> qpsk_modulate(const Bits& bits);

/// Soft symbols -> LLRs (positive = bit 0). Soft symbols are expected to be
/// matched-filter combined, i.e. scaled by the channel gain.
Llrs qpsk_soft_demod(const std::vector<cplx>& soft_symbols);

void scramble(Bits& bits, const Bits& sequence, size_t seq_offset = 0);
void descramble(Llrs& llrs, const Bits& sequence, size_t seq_offset = 0);

/// Transmit-diversity precoding (SFBC for 2 ports, SFBC-FSTD for 4).
/// Input length must be a multiple of 2 (2 ports) or 4 (4 ports).
/// Returns one stream per port, same length as the input.
std::vector<std::vector<cplx>> txd_precode(const std::vector<cplx>& symbols,
                                           int ports);

/// Alamouti combining. `y` are received REs in mapping order, `h[p]` the
/// per-port channel at those REs. Output soft symbols carry the combined
/// gain (sum |h|^2), so downstream LLRs stay reliability-weighted.
std::vector<cplx> txd_deprecode(const std::vector<cplx>& y,
                                const std::vector<std::vector<cplx>>& h,
                                int ports);

} // namespace ltescan::phy
