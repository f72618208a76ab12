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
#include <algorithm>
#include <map>
#include <mutex>

#include "ltescan/pbch.hpp"
#include "ltescan/phy/modulation.hpp"
#include "ltescan/phy/sequences.hpp"

namespace ltescan {

using namespace phy;

namespace {
constexpr int kPbchBitsPerFrame = 480;
constexpr int kPbchBitsTti = 4 * kPbchBitsPerFrame;
constexpr int kPbchRePerFrame = 240;
constexpr int kMibBits = 24;
} // namespace

MibInfo parse_mib_bits(const Bits& payload) {
  if (payload.size() != kMibBits)
    throw Error("parse_mib_bits: payload must be 24 bits");
  BitReader r(payload);
  const int bw = static_cast<int>(r.get_bits(3, "bandwidth"));
  if (bw > 5) throw Error("parse_mib_bits: bandwidth code " +
                          std::to_string(bw) + " outside the RB table");
  MibInfo mib;
  mib.n_rb = kNrbTable[static_cast<size_t>(bw)];
  mib.phich_duration = static_cast<PhichDuration>(r.get_bit("phich duration"));
  mib.phich_resource =
      static_cast<PhichResource>(r.get_bits(2, "phich resource"));
  mib.sfn = static_cast<int>(r.get_bits(8, "sfn")) << 2;
  mib.spare = static_cast<uint16_t>(r.get_bits(10, "spare"));
  return mib;
}

phy::Bits pack_mib_bits(const MibInfo& mib) {
  int bw = -1;
  for (size_t i = 0; i < kNrbTable.size(); ++i)
    if (kNrbTable[i] == mib.n_rb) bw = static_cast<int>(i);
  if (bw < 0) throw Error("pack_mib_bits: invalid N_RB");
  BitWriter w;
  w.put_bits(static_cast<uint64_t>(bw), 3);
  w.put_bit(static_cast<int>(mib.phich_duration));
  w.put_bits(static_cast<uint64_t>(mib.phich_resource), 2);
  w.put_bits(static_cast<uint64_t>((mib.sfn >> 2) & 0xFF), 8);
  w.put_bits(mib.spare, 10);
  return w.bits();
}

const std::vector<std::pair<int, int>>& pbch_re_positions(int pci) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::pair<int, int>>> cache;
  std::lock_guard<std::mutex> lk(mutex);
  auto it = cache.find(pci % 3);
  if (it != cache.end()) return it->second;

  std::vector<std::pair<int, int>> pos;
  pos.reserve(kPbchRePerFrame);
  const int crs_mod = pci % 3;
  for (int l = 0; l < 4; ++l) {
    const int sym = kSymbolsPerSlot + l; // second slot of subframe 0
    for (int k = 0; k < 72; ++k) {
      if (l < 2 && k % 3 == crs_mod) continue; // reserved for 4-port CRS
      pos.emplace_back(k, sym);
    }
  }
  return cache.emplace(pci % 3, std::move(pos)).first->second;
}

PbchBurst extract_pbch_burst(const ResourceGrid& grid6, int frame_index) {
  if (grid6.nrb() != 6) throw Error("extract_pbch_burst: needs the 6-RB grid");
  const int base = frame_index * kSlotsPerFrame * kSymbolsPerSlot;
  if (base + kSymbolsPerSubframe > grid6.n_symbols())
    throw Error("extract_pbch_burst: frame outside grid");

  const auto& pos = pbch_re_positions(grid6.pci());
  PbchBurst burst;
  burst.re.reserve(pos.size());
  std::array<std::vector<cplx>, 4> chan_full;
  for (int p = 0; p < 4; ++p) {
    try {
      chan_full[p] = estimate_channel(grid6, grid6.pci(), p);
    } catch (const Error&) {
      chan_full[p].clear(); // port not transmitted (or no energy)
    }
  }
  for (const auto& [k, sym] : pos) {
    burst.re.push_back(grid6.at(k, base + sym));
    for (int p = 0; p < 4; ++p) {
      if (chan_full[p].empty()) continue;
      burst.chan[p].push_back(
          chan_full[p][static_cast<size_t>(base + sym) * grid6.n_subcarriers() +
                       static_cast<size_t>(k)]);
    }
  }
  return burst;
}

phy::Bits pbch_encode_tti(const MibInfo& mib, int pci, int ports) {
  Bits payload = pack_mib_bits(mib);
  Bits crc = crc16(payload);
  const auto& mask = pbch_crc_mask(ports);
  for (int i = 0; i < 16; ++i) crc[static_cast<size_t>(i)] ^= mask[i];
  Bits codeword = payload;
  codeword.insert(codeword.end(), crc.begin(), crc.end());

  auto d = conv_encode_tbcc(codeword);
  Bits e = conv_rate_match(d, 0, kPbchBitsTti);
  Bits scr = gold_sequence(static_cast<uint32_t>(pci), kPbchBitsTti);
  scramble(e, scr);
  return e;
}

namespace {

// Soft bits of one burst for a port hypothesis, not yet descrambled.
bool burst_llrs(const PbchBurst& burst, int ports, Llrs& out) {
  std::vector<std::vector<cplx>> h(4);
  for (int p = 0; p < ports; ++p) {
    if (burst.chan[static_cast<size_t>(p)].size() != burst.re.size())
      return false; // CRS for this port is absent: hypothesis impossible
    h[static_cast<size_t>(p)] = burst.chan[static_cast<size_t>(p)];
  }
  std::vector<cplx> soft = txd_deprecode(burst.re, h, ports);
  out = qpsk_soft_demod(soft);
  return true;
}

} // namespace

std::optional<MibInfo> soft_combine_decode(std::span<const PbchBurst> bursts,
                                           int pci) {
  if (bursts.empty()) return std::nullopt;
  Bits scr = gold_sequence(static_cast<uint32_t>(pci), kPbchBitsTti);

  for (int ports : {1, 2, 4}) {
    // Per-burst LLRs for this port hypothesis.
    std::vector<Llrs> llrs(bursts.size());
    bool ok = true;
    for (size_t i = 0; i < bursts.size(); ++i)
      if (!burst_llrs(bursts[i], ports, llrs[i])) {
        ok = false;
        break;
      }
    if (!ok) continue;

    for (int b0 = 0; b0 < 4; ++b0) {
      const size_t n_use = std::min(bursts.size(), static_cast<size_t>(4 - b0));
      std::array<Llrs, 3> d_acc;
      for (auto& s : d_acc) s.assign(40, 0.0);
      for (size_t i = 0; i < n_use; ++i) {
        Llrs seg = llrs[i];
        descramble(seg, scr, static_cast<size_t>(b0 + i) * kPbchBitsPerFrame);
        conv_rate_dematch(seg, static_cast<size_t>(b0 + i) * kPbchBitsPerFrame,
                          d_acc);
      }
      Bits decoded = conv_decode_tbcc(d_acc);
      Bits payload(decoded.begin(), decoded.begin() + kMibBits);
      Bits crc_rx(decoded.begin() + kMibBits, decoded.end());
      Bits crc = crc16(payload);
      const auto& mask = pbch_crc_mask(ports);
      bool match = true;
      for (int i = 0; i < 16 && match; ++i)
        match = ((crc[static_cast<size_t>(i)] ^ mask[i]) ==
                 crc_rx[static_cast<size_t>(i)]);
      if (!match) continue;
      try {
        MibInfo mib = parse_mib_bits(payload);
        mib.cell_ref_ports = ports;
        mib.sfn |= b0;
        return mib;
      } catch (const Error&) {
        // CRC collision onto an invalid bandwidth code: keep searching.
      }
    }
  }
  return std::nullopt;
}

std::optional<MibInfo> decode_mib(const ResourceGrid& grid6, int pci) {
  ResourceGrid g = grid6;
  g.set_pci(pci);
  PbchBurst burst = extract_pbch_burst(g, 0);
  return soft_combine_decode(std::span<const PbchBurst>(&burst, 1), pci);
}

std::optional<MibSearchResult> decode_mib_sliding(const ResourceGrid& grid6,
                                                  int pci) {
  ResourceGrid g = grid6;
  g.set_pci(pci);
  const int frames = g.n_frames();
  if (frames < 1) return std::nullopt;

  std::vector<PbchBurst> bursts;
  bursts.reserve(static_cast<size_t>(frames));
  for (int f = 0; f < frames; ++f) bursts.push_back(extract_pbch_burst(g, f));

  for (int w = 0; w < frames; ++w) {
    const size_t count = std::min<size_t>(4, static_cast<size_t>(frames - w));
    auto mib = soft_combine_decode(
        std::span<const PbchBurst>(bursts.data() + w, count), pci);
    if (mib) return MibSearchResult{*mib, w};
  }
  return std::nullopt;
}

} // namespace ltescan
