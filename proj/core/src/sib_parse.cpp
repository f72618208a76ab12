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
#include <cstdio>
#include <fstream>

#include "ltescan/sib_parse.hpp"

// Hand-rolled unaligned-PER codec for the SIB1 subtree this project needs:
// the BCCH-DL-SCH choice header, the SIB1 sequence preamble, the PLMN list,
// TAC, cell identity, and enough of the trailing fields to skip cleanly over
// anything optional.
namespace ltescan {

using phy::Bits;

std::string Ecgi::canonical_text() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03u-%0*u-%07x", mcc,
                static_cast<int>(mnc_digits), mnc, cid);
  return buf;
}

Ecgi compose_ecgi(const Sib1Info& info) {
  Ecgi e;
  e.mcc = info.mcc;
  e.mnc = info.mnc;
  e.mnc_digits = info.mnc_digits;
  e.cid = info.cid;
  return e;
}

Ecgi parse_ecgi_text(const std::string& text) {
  auto parts = split(text, '-');
  if (parts.size() != 3) throw ParseError("ECGI: expected MCC-MNC-CID");
  Ecgi e;
  if (parts[0].size() != 3) throw ParseError("ECGI: MCC must have 3 digits");
  if (parts[1].size() != 2 && parts[1].size() != 3)
    throw ParseError("ECGI: MNC must have 2 or 3 digits");
  e.mcc = static_cast<uint16_t>(std::stoul(parts[0]));
  e.mnc = static_cast<uint16_t>(std::stoul(parts[1]));
  e.mnc_digits = static_cast<uint8_t>(parts[1].size());
  if (parts[2].size() != 7) throw ParseError("ECGI: CID must have 7 hex digits");
  e.cid = static_cast<uint32_t>(std::stoul(parts[2], nullptr, 16));
  return e;
}

namespace {

void put_digits(BitWriter& w, uint16_t value, int n_digits) {
  // Digits encode individually as INTEGER (0..9), 4 bits each.
  int divisor = 1;
  for (int i = 1; i < n_digits; ++i) divisor *= 10;
  for (int i = 0; i < n_digits; ++i) {
    w.put_bits(static_cast<uint64_t>((value / divisor) % 10), 4);
    divisor /= 10;
  }
}

uint16_t get_digits(BitReader& r, int n_digits, const char* field) {
  uint16_t v = 0;
  for (int i = 0; i < n_digits; ++i) {
    uint64_t d = r.get_bits(4, field);
    if (d > 9) throw ParseError(std::string("SIB1: digit out of range in ") +
                                field);
    v = static_cast<uint16_t>(v * 10 + d);
  }
  return v;
}

void encode_plmn_identity_info(BitWriter& w, uint16_t mcc, uint16_t mnc,
                               int mnc_digits) {
  w.put_bit(1); // mcc present
  put_digits(w, mcc, 3);
  w.put_bit(mnc_digits == 3 ? 1 : 0); // MNC SIZE(2..3) length
  put_digits(w, mnc, mnc_digits);
  w.put_bit(1); // cellReservedForOperatorUse: notReserved
}

} // namespace

Bits encode_sib1(const Sib1Info& info, const Sib1EncodeOptions& opt) {
  if (info.mcc > 999 || (info.mnc_digits != 2 && info.mnc_digits != 3))
    throw Error("encode_sib1: bad PLMN");
  if (info.mnc >= (info.mnc_digits == 2 ? 100 : 1000))
    throw Error("encode_sib1: MNC does not fit its digit count");
  if (info.cid >= (1u << 28)) throw Error("encode_sib1: CID needs 28 bits");

  BitWriter w;
  w.put_bit(0); // BCCH-DL-SCH-MessageType: c1 (not messageClassExtension)
  w.put_bit(1); // c1: systemInformationBlockType1

  // SIB1 sequence preamble: p-Max, tdd-Config, nonCriticalExtension.
  w.put_bit(opt.include_p_max ? 1 : 0);
  w.put_bit(0); // tdd-Config absent (FDD)
  w.put_bit(opt.non_critical_extension.empty() ? 0 : 1);

  // cellAccessRelatedInfo
  w.put_bit(opt.include_csg_identity ? 1 : 0); // csg-Identity present?
  const int n_plmn = 1 + opt.extra_plmns;
  if (n_plmn < 1 || n_plmn > 6) throw Error("encode_sib1: PLMN list size 1..6");
  w.put_bits(static_cast<uint64_t>(n_plmn - 1), 3);
  encode_plmn_identity_info(w, info.mcc, info.mnc, info.mnc_digits);
  for (int i = 0; i < opt.extra_plmns; ++i)
    encode_plmn_identity_info(w, 999, static_cast<uint16_t>(i + 1), 2);
  w.put_bits(info.tac, 16);
  w.put_bits(info.cid, 28);
  w.put_bit(1); // cellBarred: notBarred
  w.put_bit(0); // intraFreqReselection: allowed
  w.put_bit(0); // csg-Indication: false
  if (opt.include_csg_identity) w.put_bits(0x5A5A5A5u & 0x7FFFFFF, 27);

  // cellSelectionInfo
  w.put_bit(opt.include_q_offset ? 1 : 0);
  w.put_bits(static_cast<uint64_t>(-64 - (-70)), 6); // q-RxLevMin = -64
  if (opt.include_q_offset) w.put_bits(2 - 1, 3);    // q-RxLevMinOffset = 2

  if (opt.include_p_max)
    w.put_bits(static_cast<uint64_t>(opt.p_max + 30), 6);
  w.put_bits(12 - 1, 6); // freqBandIndicator = 12

  // schedulingInfoList: one entry, periodicity rf8, empty mapping info.
  w.put_bits(0, 5); // list size - 1
  w.put_bits(0, 3); // si-Periodicity: rf8
  w.put_bits(0, 5); // sib-MappingInfo: empty

  w.put_bits(5, 3); // si-WindowLength: ms20
  w.put_bits(0, 5); // systemInfoValueTag

  if (!opt.non_critical_extension.empty()) {
    // Opaque octet string with a one-byte length determinant.
    if (opt.non_critical_extension.size() > 127)
      throw Error("encode_sib1: extension blob too long");
    w.put_bits(opt.non_critical_extension.size(), 8);
    for (uint8_t byte : opt.non_critical_extension) w.put_bits(byte, 8);
  }
  return w.bits();
}

Sib1Info parse_sib1(const phy::Bits& bits) {
  BitReader r(bits);
  Sib1Info info;
  info.raw_bits = bits;

  if (r.get_bit("choice header") != 0)
    throw ParseError("SIB1: messageClassExtension is not a SIB1 payload");
  if (r.get_bit("choice header") != 1)
    throw ParseError("SIB1: c1 choice carries systemInformation, not SIB1");

  const int has_p_max = r.get_bit("sib1 preamble");
  const int has_tdd = r.get_bit("sib1 preamble");
  const int has_ext = r.get_bit("sib1 preamble");

  const int has_csg_id = r.get_bit("cellAccessRelatedInfo preamble");
  const int n_plmn = static_cast<int>(r.get_bits(3, "plmn list size")) + 1;
  if (n_plmn > 6) throw ParseError("SIB1: PLMN list size out of range");
  info.plmn_count = n_plmn;

  uint16_t last_mcc = 0;
  bool have_mcc = false;
  for (int i = 0; i < n_plmn; ++i) {
    const int mcc_present = r.get_bit("plmn preamble");
    uint16_t mcc = last_mcc;
    if (mcc_present) {
      mcc = get_digits(r, 3, "mcc");
      last_mcc = mcc;
      have_mcc = true;
    } else if (!have_mcc) {
      throw ParseError("SIB1: first PLMN entry lacks an MCC");
    }
    const int mnc_digits = r.get_bit("mnc length") ? 3 : 2;
    const uint16_t mnc = get_digits(r, mnc_digits, "mnc");
    r.get_bit("cellReservedForOperatorUse");
    if (i == 0) {
      info.mcc = mcc;
      info.mnc = mnc;
      info.mnc_digits = static_cast<uint8_t>(mnc_digits);
    }
  }

  info.tac = static_cast<uint16_t>(r.get_bits(16, "trackingAreaCode"));
  info.cid = static_cast<uint32_t>(r.get_bits(28, "cellIdentity"));
  r.get_bit("cellBarred");
  r.get_bit("intraFreqReselection");
  r.get_bit("csg-Indication");
  if (has_csg_id) r.skip(27, "csg-Identity");

  const int has_q_offset = r.get_bit("cellSelectionInfo preamble");
  r.skip(6, "q-RxLevMin");
  if (has_q_offset) r.skip(3, "q-RxLevMinOffset");

  if (has_p_max) r.skip(6, "p-Max");
  r.skip(6, "freqBandIndicator");

  const int n_sched = static_cast<int>(r.get_bits(5, "schedulingInfoList")) + 1;
  for (int i = 0; i < n_sched; ++i) {
    r.skip(3, "si-Periodicity");
    const int n_map = static_cast<int>(r.get_bits(5, "sib-MappingInfo"));
    for (int j = 0; j < n_map; ++j) {
      // SIB-Type is an extensible enum: flag + 4-bit root index, or a
      // normally-small number for release extensions.
      if (r.get_bit("sib-Type")) {
        if (r.get_bit("sib-Type")) throw ParseError("SIB1: sib-Type extension too large");
        r.skip(6, "sib-Type");
      } else {
        r.skip(4, "sib-Type");
      }
    }
  }

  if (has_tdd) r.skip(3 + 4, "tdd-Config");
  r.skip(3, "si-WindowLength");
  r.skip(5, "systemInfoValueTag");
  if (has_ext) {
    const size_t len = r.get_bits(8, "nonCriticalExtension length");
    r.skip(len * 8, "nonCriticalExtension");
  }
  return info;
}

void write_per_file(const std::string& path, const phy::Bits& bits) {
  BitWriter w;
  w.append(bits);
  auto bytes = w.to_bytes();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write .per file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

phy::Bits read_per_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open .per file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes_to_bits(bytes);
}

} // namespace ltescan
