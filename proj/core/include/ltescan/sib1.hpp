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

#include <optional>

#include "ltescan/ofdm_grid.hpp"
#include "ltescan/phy/coding.hpp"
#include "ltescan/phy/control_region.hpp"
#include "ltescan/phy/dci.hpp"

namespace ltescan {

/// Cell facts needed past the MIB stage; both the receive chain and the
/// generator build their control regions from exactly these.
struct CellConfig {
  int pci = 0;
  int nrb = 6;
  int ports = 1;
  phy::PhichResource phich_resource = phy::PhichResource::One;
  phy::PhichDuration phich_duration = phy::PhichDuration::Normal;
};

struct TransportBlock {
  phy::Bits bits; // payload without the CRC
  bool crc_ok = false;
  int combined_count = 1;
};

/// Incremental-redundancy combining state for repeated SI transmissions.
struct DlschSoftState {
  std::array<phy::Llrs, 3> d_acc;
  int tbs_bits = -1;
  int combined = 0;
  void reset(int tbs);
  bool empty() const { return combined == 0; }
};

/// Redundancy version of the SIB1 repetition in an even frame.
int sib1_redundancy_version(int sfn);

// --------------------------------------------------------------- decoding

/// CFI from the PCFICH (nearest of the three codewords). Throws when the
/// best codeword correlation is too weak to trust.
int decode_cfi(const ResourceGrid& grid, const CellConfig& cell,
               int subframe_index, int subframe_col0);

/// Blind decode over the common search space (aggregation levels 4 and 8,
/// formats 1A and 1C). Returns the first CRC+RNTI match.
std::optional<DciMessage> blind_decode_pdcch(const ResourceGrid& grid,
                                             const CellConfig& cell, int cfi,
                                             int subframe_index,
                                             int subframe_col0,
                                             uint16_t rnti = phy::kSiRnti);

/// PDSCH soft bits for a grant (deprecode, demodulate, descramble).
phy::Llrs decode_pdsch(const ResourceGrid& grid, const CellConfig& cell,
                       const DciMessage& dci, int cfi, int subframe_index,
                       int subframe_col0, uint16_t rnti = phy::kSiRnti);

/// Rate recovery + turbo decode + CRC24A. When `state` is given, soft bits
/// accumulate into it so later repetitions can be combined.
TransportBlock decode_dlsch(const phy::Llrs& soft, int tbs_bits, int rv,
                            DlschSoftState* state = nullptr);

// --------------------------------------------------------------- encoding
// The oracle writes composite (sum over antenna ports) symbols, which is
// what a single receive antenna sees through the flat test channel.

std::vector<cplx> pcfich_encode(int cfi, const CellConfig& cell,
                                int subframe_index);

/// Control-region quadruplets for one subframe; REGs beyond the grant carry
/// zero power. `dci` may be absent (empty control region).
std::vector<std::array<cplx, 4>> pdcch_encode_region(
    const std::optional<DciMessage>& dci, const phy::ControlRegion& cr,
    const CellConfig& cell, int subframe_index, uint16_t rnti = phy::kSiRnti);

phy::Bits dlsch_encode(const phy::Bits& payload, int rv, size_t e_len);

std::vector<cplx> pdsch_encode(const phy::Bits& e_bits, const CellConfig& cell,
                               int subframe_index,
                               uint16_t rnti = phy::kSiRnti);

/// PDSCH resource elements of one subframe in mapping order (k fastest),
/// excluding CRS, the control region, and the sync/PBCH reservations.
/// Trimmed to the transmit-diversity alignment for the port count.
std::vector<std::pair<int, int>> pdsch_re_positions(
    const CellConfig& cell, int n_ctrl_symbols, int subframe_index,
    const std::vector<int>& prb_slot0, const std::vector<int>& prb_slot1);

/// PCFICH RE positions (subcarrier, symbol-in-subframe) in mapping order.
std::vector<std::pair<int, int>> pcfich_positions(const CellConfig& cell);

} // namespace ltescan
