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
#include <optional>
#include <string>
#include <vector>

#include "ltescan/phy/coding.hpp"
#include "ltescan/util.hpp"

namespace ltescan {

/// Fields mined out of a BCCH-DL-SCH SystemInformationBlockType1.
struct Sib1Info {
  uint16_t mcc = 0;      // always three digits
  uint16_t mnc = 0;
  uint8_t mnc_digits = 2; // 2 or 3; "05" and "005" are different PLMNs
  int plmn_count = 1;     // list length; the first entry is reported
  uint16_t tac = 0;
  uint32_t cid = 0;       // 28-bit cell identity
  phy::Bits raw_bits;     // payload as it came off the transport block
};

struct Ecgi {
  uint16_t mcc = 0;
  uint16_t mnc = 0;
  uint8_t mnc_digits = 2;
  uint32_t cid = 0;
  std::string canonical_text() const; // "MCC-MNC-CCCCCCC" (7 hex digits)
};

Ecgi compose_ecgi(const Sib1Info& info);
Ecgi parse_ecgi_text(const std::string& text);

/// Derived accessors for the eNB/sector split of the 28-bit identity.
constexpr uint32_t ecgi_enb_id(uint32_t cid) { return cid >> 8; }
constexpr uint32_t ecgi_sector_id(uint32_t cid) { return cid & 0xFF; }

/// Knobs for the oracle-side encoder; optional fields exercise the parser's
/// skip logic.
struct Sib1EncodeOptions {
  bool include_p_max = false;
  int p_max = 23;
  bool include_q_offset = false;
  bool include_csg_identity = false;
  int extra_plmns = 0; // additional list entries after the first
  std::vector<uint8_t> non_critical_extension; // opaque skipped octets
};

/// Unaligned-PER encode of the BCCH-DL-SCH message carrying SIB1.
phy::Bits encode_sib1(const Sib1Info& info, const Sib1EncodeOptions& opt = {});

/// Unaligned-PER parse. Throws ParseError naming the field on truncation or
/// an unsupported choice.
Sib1Info parse_sib1(const phy::Bits& bits);

/// .per payload files: the bit string packed big-endian into bytes.
void write_per_file(const std::string& path, const phy::Bits& bits);
phy::Bits read_per_file(const std::string& path);

} // namespace ltescan
