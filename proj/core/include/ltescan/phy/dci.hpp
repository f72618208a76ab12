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

#include "ltescan/phy/coding.hpp"
#include "ltescan/util.hpp"

namespace ltescan {

enum class DciFormat : uint8_t { Format1A, Format1C };

/// Downlink grant recovered from (or fed to) the PDCCH. rb_allocation is
/// resolved per slot because distributed VRB mappings hop at the slot
/// boundary.
struct DciMessage {
  DciFormat format = DciFormat::Format1A;
  uint16_t rnti = 0;
  bool localized = true; // 1A flag; 1C is always distributed
  int riv = 0;
  int mcs_index = 0;     // 1A: I_MCS; 1C: 5-bit TBS index
  int tbs_bits = 0;
  int rv_field = 0;      // informational for SI grants (RV follows the SFN)
  int n_prb_1a = 2;      // TBS column selector for SI grants (TPC LSB)
  int harq_process = 0;
  int new_data = 0;
  std::vector<int> prb_slot0; // allocated PRBs, first slot of the subframe
  std::vector<int> prb_slot1;

  int aggregation_level = 0; // decode detail
  int cce_start = 0;
};

namespace phy {

int dci_payload_size(DciFormat format, int nrb);

/// Resource allocation type 2 RIV for a contiguous block.
int riv_encode(int nrb_field, int start, int length);
void riv_decode(int nrb_field, int riv, int& start, int& length);

/// Distributed VRB -> PRB for one slot (gap-1 interleaving).
int n_gap1(int nrb);
int n_vrb_dl_gap1(int nrb);
int dvrb_step(int nrb); // 1C allocation granularity
std::vector<int> vrb_to_prb_gap1(const std::vector<int>& vrbs, int nrb,
                                 int slot_parity);

/// Transport block sizes for SI grants.
int tbs_format1a(int i_tbs, int n_prb_1a); // n_prb_1a in {2, 3}
int tbs_format1c(int index);               // 5-bit index

Bits dci_pack(const DciMessage& dci, int nrb);
/// Parses payload bits; fills everything except CCE/aggregation metadata.
DciMessage dci_unpack(const Bits& payload, DciFormat format, int nrb,
                      uint16_t rnti);

/// CRC-16 with the RNTI xor-mask appended (PDCCH transport layout).
Bits dci_attach_crc(const Bits& payload, uint16_t rnti);
bool dci_check_crc(const Bits& decoded, uint16_t rnti);

} // namespace phy
} // namespace ltescan
