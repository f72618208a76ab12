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

#include <cstdint>
#include <vector>

#include "ltescan/util.hpp"

namespace ltescan::phy {

/// Length-31 Gold sequence c(n) used for all downlink scrambling.
std::vector<uint8_t> gold_sequence(uint32_t c_init, size_t length);

/// Primary synchronization signal: 62-point Zadoff-Chu sequence, roots
/// {25, 29, 34} for n_id2 = 0, 1, 2. Constant modulus.
std::vector<cplx> generate_pss(int n_id2);

/// Secondary synchronization signal for subframe 0 or 5. Real, +/-1 valued;
/// the two subframe variants of one identity differ in their cyclic shifts.
std::vector<cplx> generate_sss(int n_id1, int n_id2, int subframe);

/// Time-domain PSS replica at 1.92 MS/s: 128-point symbol plus 9-sample CP,
/// unit energy. Used as the cell-search correlation reference.
std::vector<cplx> pss_time_reference(int n_id2);

/// One cell-specific reference signal resource element.
struct CrsRe {
  int subcarrier;    // row within the n_rb-wide grid
  int symbol_in_slot;
  cplx value;
};

/// CRS symbol indices within a slot for an antenna port (normal CP).
std::vector<int> crs_symbols_for_port(int port);

/// Frequency shift (v + v_shift) mod 6 for a port/symbol combination.
int crs_shift(int pci, int port, int symbol_in_slot, int slot_index);

/// All CRS resource elements of one port in one slot of an n_rb-wide grid.
/// The values are the 3GPP sequence centered on 110 RB, so a 6-RB window cut
/// from a wider carrier carries exactly the same values as a 6-RB carrier.
std::vector<CrsRe> generate_crs(int pci, int port, int nrb, int slot_index);

} // namespace ltescan::phy
