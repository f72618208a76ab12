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
#include <vector>

#include "ltescan/phy/params.hpp"
#include "ltescan/util.hpp"

namespace ltescan::phy {

/// One resource-element group: four data REs in one OFDM symbol.
struct Reg {
  int symbol = 0;
  std::array<int, 4> subcarriers{};
};

/// REG ownership layout of one subframe's control region. Built identically
/// by the generator and the decoder from MIB-known parameters.
struct ControlRegion {
  int nrb = 0;
  int n_symbols = 0; // control span incl. the narrow-band extra symbol
  std::vector<Reg> pcfich; // always 4
  std::vector<Reg> phich;  // 3 per group, zero-power reservation here
  std::vector<Reg> pdcch;  // remaining REGs, time-first order
  int n_cce() const { return static_cast<int>(pdcch.size()) / 9; }
};

ControlRegion build_control_region(int nrb, int cfi, int pci, int ports,
                                   PhichResource phich_res,
                                   PhichDuration phich_dur);

/// The three 32-bit CFI codewords.
const std::array<std::array<uint8_t, 32>, 3>& cfi_codewords();

/// PCFICH scrambling init for a subframe.
uint32_t pcfich_scrambling_init(int pci, int subframe);

/// PDCCH scrambling init for a subframe.
uint32_t pdcch_scrambling_init(int pci, int subframe);

/// Quadruplet permutation for the PDCCH control region: entry i gives the
/// source quadruplet carried by PDCCH REG i (sub-block interleaving plus the
/// cell-specific cyclic shift).
std::vector<int32_t> pdcch_quad_permutation(int m_quad, int pci);

/// Common-search-space candidates at one aggregation level: start CCE of
/// each candidate that fits into n_cce.
std::vector<int> common_search_candidates(int agg_level, int n_cce);

} // namespace ltescan::phy
