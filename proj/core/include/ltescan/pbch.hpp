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
#include <span>

#include "ltescan/ofdm_grid.hpp"
#include "ltescan/phy/coding.hpp"
#include "ltescan/phy/params.hpp"

namespace ltescan {

struct MibInfo {
  int n_rb = 6;
  phy::PhichDuration phich_duration = phy::PhichDuration::Normal;
  phy::PhichResource phich_resource = phy::PhichResource::One;
  int sfn = 0;            // full 10-bit frame number once the burst is known
  int cell_ref_ports = 1; // discovered through the CRC mask
  uint16_t spare = 0;     // the 10 spare payload bits, preserved
};

/// 24 transmitted MIB bits -> fields (SFN low bits left at zero).
MibInfo parse_mib_bits(const phy::Bits& payload);
phy::Bits pack_mib_bits(const MibInfo& mib);

/// PBCH resource elements of one frame (subframe 0, second slot, first four
/// symbols of the central six RB), with per-port channel estimates gathered
/// at the same positions. Channel entries stay empty for ports whose CRS is
/// absent.
struct PbchBurst {
  std::vector<cplx> re;                         // 240 observations
  std::array<std::vector<cplx>, 4> chan;        // per port
};

/// Positions (subcarrier within the 72-row window, symbol within the frame)
/// in mapping order. CRS positions are reserved for four ports regardless of
/// the transmitted count.
const std::vector<std::pair<int, int>>& pbch_re_positions(int pci);

PbchBurst extract_pbch_burst(const ResourceGrid& grid6, int frame_index);

/// Full 40 ms TTI of scrambled PBCH bits (4 x 480) for the oracle.
phy::Bits pbch_encode_tti(const MibInfo& mib, int pci, int ports);

/// Decode from bursts of consecutive frames, accumulating soft bits across
/// the TTI. Tries every burst-phase hypothesis; on success the returned SFN
/// is the frame number of bursts[0]. Failure means "out of coverage".
std::optional<MibInfo> soft_combine_decode(std::span<const PbchBurst> bursts,
                                           int pci);

/// Single-subframe decode (first frame of the grid).
std::optional<MibInfo> decode_mib(const ResourceGrid& grid6, int pci);

struct MibSearchResult {
  MibInfo mib;
  int frame_index = 0; // frame within the grid whose SFN equals mib.sfn
};

/// Slide a four-frame window across the grid until a decode lands.
std::optional<MibSearchResult> decode_mib_sliding(const ResourceGrid& grid6,
                                                  int pci);

} // namespace ltescan
