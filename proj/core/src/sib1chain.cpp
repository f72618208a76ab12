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
#include <cmath>
#include <functional>
#include <set>

#include "ltescan/phy/modulation.hpp"
#include "ltescan/phy/sequences.hpp"
#include "ltescan/sib1.hpp"

namespace ltescan {

using namespace phy;

void DlschSoftState::reset(int tbs) {
  tbs_bits = tbs;
  combined = 0;
  for (auto& s : d_acc) s.assign(static_cast<size_t>(tbs + 24 + 4), 0.0);
}

int sib1_redundancy_version(int sfn) {
  if (sfn % 2 != 0)
    throw Error("sib1_redundancy_version: SIB1 lives in even frames");
  const int k = (sfn / 2) % 4;
  return static_cast<int>(std::ceil(1.5 * k)) % 4; // cycle 0, 2, 3, 1
}

namespace {

std::array<std::vector<cplx>, 4> port_channels(const ResourceGrid& grid,
                                               const CellConfig& cell) {
  std::array<std::vector<cplx>, 4> chan;
  for (int p = 0; p < cell.ports; ++p) {
    try {
      chan[static_cast<size_t>(p)] = estimate_channel(grid, cell.pci, p);
    } catch (const Error&) {
      chan[static_cast<size_t>(p)].clear();
    }
  }
  return chan;
}

struct GatheredRes {
  std::vector<cplx> y;
  std::vector<std::vector<cplx>> h;
};

GatheredRes gather(const ResourceGrid& grid,
                   const std::array<std::vector<cplx>, 4>& chan,
                   const CellConfig& cell, int subframe_col0,
                   const std::vector<std::pair<int, int>>& positions) {
  GatheredRes g;
  g.y.reserve(positions.size());
  g.h.assign(4, {});
  for (int p = 0; p < cell.ports; ++p) {
    if (chan[static_cast<size_t>(p)].empty())
      throw Error("gather: missing channel estimate for port " +
                  std::to_string(p));
    g.h[static_cast<size_t>(p)].reserve(positions.size());
  }
  const size_t stride = static_cast<size_t>(grid.n_subcarriers());
  for (const auto& [k, l] : positions) {
    const int col = subframe_col0 + l;
    g.y.push_back(grid.at(k, col));
    for (int p = 0; p < cell.ports; ++p)
      g.h[static_cast<size_t>(p)].push_back(
          chan[static_cast<size_t>(p)][static_cast<size_t>(col) * stride +
                                       static_cast<size_t>(k)]);
  }
  return g;
}

std::vector<cplx> composite_precode(const std::vector<cplx>& syms, int ports) {
  auto per_port = txd_precode(syms, ports);
  std::vector<cplx> out(syms.size(), 0.0);
  for (const auto& port : per_port)
    for (size_t i = 0; i < out.size(); ++i) out[i] += port[i];
  return out;
}

ControlRegion region_for(const CellConfig& cell, int cfi) {
  return build_control_region(cell.nrb, cfi, cell.pci, cell.ports,
                              cell.phich_resource, cell.phich_duration);
}

} // namespace

std::vector<std::pair<int, int>> pcfich_positions(const CellConfig& cell) {
  // PCFICH positions depend only on PCI/N_RB; use a minimal region so this
  // works before the PHICH configuration is known.
  ControlRegion cr =
      build_control_region(cell.nrb, 1, cell.pci, cell.ports,
                           PhichResource::OneSixth, PhichDuration::Normal);
  std::vector<std::pair<int, int>> pos;
  for (const auto& reg : cr.pcfich)
    for (int re : reg.subcarriers) pos.emplace_back(re, reg.symbol);
  return pos;
}

// ------------------------------------------------------------------- CFI

std::vector<cplx> pcfich_encode(int cfi, const CellConfig& cell,
                                int subframe_index) {
  if (cfi < 1 || cfi > 3) throw Error("pcfich_encode: CFI must be 1..3");
  Bits bits(cfi_codewords()[static_cast<size_t>(cfi - 1)].begin(),
            cfi_codewords()[static_cast<size_t>(cfi - 1)].end());
  Bits scr = gold_sequence(pcfich_scrambling_init(cell.pci, subframe_index), 32);
  scramble(bits, scr);
  return composite_precode(qpsk_modulate(bits), cell.ports);
}

int decode_cfi(const ResourceGrid& grid, const CellConfig& cell,
               int subframe_index, int subframe_col0) {
  auto chan = port_channels(grid, cell);
  auto pos = pcfich_positions(cell);
  GatheredRes g = gather(grid, chan, cell, subframe_col0, pos);
  std::vector<cplx> soft = txd_deprecode(g.y, g.h, cell.ports);
  Llrs llrs = qpsk_soft_demod(soft);
  Bits scr = gold_sequence(pcfich_scrambling_init(cell.pci, subframe_index), 32);
  descramble(llrs, scr);

  double total = 0.0;
  for (double v : llrs) total += std::abs(v);
  double best = -1e300;
  int best_cfi = 0;
  for (int c = 0; c < 3; ++c) {
    double score = 0.0;
    const auto& cw = cfi_codewords()[static_cast<size_t>(c)];
    for (int i = 0; i < 32; ++i)
      score += cw[i] ? -llrs[static_cast<size_t>(i)]
                     : llrs[static_cast<size_t>(i)];
    if (score > best) {
      best = score;
      best_cfi = c + 1;
    }
  }
  if (total < 1e-12 || best / total < 0.25)
    throw Error("decode_cfi: unreliable CFI (no codeword close enough)");
  return best_cfi;
}

// ----------------------------------------------------------------- PDCCH

std::vector<std::array<cplx, 4>> pdcch_encode_region(
    const std::optional<DciMessage>& dci, const ControlRegion& cr,
    const CellConfig& cell, int subframe_index, uint16_t rnti) {
  const int m_quad = static_cast<int>(cr.pdcch.size());
  const int n_cce = cr.n_cce();
  std::vector<cplx> symbols(static_cast<size_t>(n_cce) * 36, 0.0);

  if (dci) {
    if (dci->cce_start + dci->aggregation_level > n_cce)
      throw Error("pdcch_encode_region: grant exceeds the CCE space");
    Bits payload = dci_pack(*dci, cr.nrb);
    Bits coded = dci_attach_crc(payload, rnti);
    auto d = conv_encode_tbcc(coded);
    const size_t e_len = 72u * static_cast<size_t>(dci->aggregation_level);
    Bits e = conv_rate_match(d, 0, e_len);
    Bits scr = gold_sequence(pdcch_scrambling_init(cell.pci, subframe_index),
                             72u * static_cast<size_t>(n_cce));
    scramble(e, scr, 72u * static_cast<size_t>(dci->cce_start));
    std::vector<cplx> syms = composite_precode(qpsk_modulate(e), cell.ports);
    std::copy(syms.begin(), syms.end(),
              symbols.begin() + 36 * static_cast<size_t>(dci->cce_start));
  }

  std::vector<std::array<cplx, 4>> quads(
      static_cast<size_t>(m_quad), {cplx(0), cplx(0), cplx(0), cplx(0)});
  auto perm = pdcch_quad_permutation(m_quad, cell.pci);
  for (int i = 0; i < m_quad; ++i) {
    const int src = perm[static_cast<size_t>(i)];
    if (src >= n_cce * 9) continue; // padding beyond the CCE space
    for (int j = 0; j < 4; ++j)
      quads[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          symbols[static_cast<size_t>(src) * 4 + static_cast<size_t>(j)];
  }
  return quads;
}

std::optional<DciMessage> blind_decode_pdcch(const ResourceGrid& grid,
                                             const CellConfig& cell, int cfi,
                                             int subframe_index,
                                             int subframe_col0,
                                             uint16_t rnti) {
  ControlRegion cr = region_for(cell, cfi);
  const int m_quad = static_cast<int>(cr.pdcch.size());
  const int n_cce = cr.n_cce();
  if (n_cce < 1) return std::nullopt;

  auto chan = port_channels(grid, cell);
  std::vector<std::pair<int, int>> pos;
  pos.reserve(static_cast<size_t>(m_quad) * 4);
  for (const auto& reg : cr.pdcch)
    for (int re : reg.subcarriers) pos.emplace_back(re, reg.symbol);
  GatheredRes g = gather(grid, chan, cell, subframe_col0, pos);

  // Undo the REG-level interleave + cyclic shift, drop the padding tail.
  auto perm = pdcch_quad_permutation(m_quad, cell.pci);
  const size_t n_symbols = static_cast<size_t>(n_cce) * 36;
  std::vector<cplx> y(n_symbols, 0.0);
  std::vector<std::vector<cplx>> h(4, std::vector<cplx>(n_symbols, 0.0));
  for (int i = 0; i < m_quad; ++i) {
    const int src = perm[static_cast<size_t>(i)];
    if (src >= n_cce * 9) continue;
    for (int j = 0; j < 4; ++j) {
      const size_t at = static_cast<size_t>(src) * 4 + static_cast<size_t>(j);
      const size_t from = static_cast<size_t>(i) * 4 + static_cast<size_t>(j);
      y[at] = g.y[from];
      for (int p = 0; p < cell.ports; ++p) h[static_cast<size_t>(p)][at] =
          g.h[static_cast<size_t>(p)][from];
    }
  }

  std::vector<cplx> soft = txd_deprecode(y, h, cell.ports);
  Llrs llrs = qpsk_soft_demod(soft);
  Bits scr = gold_sequence(pdcch_scrambling_init(cell.pci, subframe_index),
                           72u * static_cast<size_t>(n_cce));
  descramble(llrs, scr);

  for (int agg : {4, 8}) {
    for (int start : common_search_candidates(agg, n_cce)) {
      Llrs cand(llrs.begin() + 72 * static_cast<size_t>(start),
                llrs.begin() + 72 * static_cast<size_t>(start + agg));
      for (DciFormat fmt : {DciFormat::Format1A, DciFormat::Format1C}) {
        const int a = dci_payload_size(fmt, cell.nrb);
        std::array<Llrs, 3> d_acc;
        for (auto& s : d_acc) s.assign(static_cast<size_t>(a + 16), 0.0);
        conv_rate_dematch(cand, 0, d_acc);
        Bits decoded = conv_decode_tbcc(d_acc);
        if (!dci_check_crc(decoded, rnti)) continue;
        Bits payload(decoded.begin(), decoded.end() - 16);
        try {
          DciMessage dci = dci_unpack(payload, fmt, cell.nrb, rnti);
          dci.aggregation_level = agg;
          dci.cce_start = start;
          return dci;
        } catch (const ParseError&) {
          continue; // CRC matched but the fields are nonsense: keep looking
        }
      }
    }
  }
  return std::nullopt;
}

// ----------------------------------------------------------------- PDSCH

std::vector<std::pair<int, int>> pdsch_re_positions(
    const CellConfig& cell, int n_ctrl_symbols, int subframe_index,
    const std::vector<int>& prb_slot0, const std::vector<int>& prb_slot1) {
  const int n_subc = kSubcarriersPerRb * cell.nrb;
  const int center_lo = n_subc / 2 - 36;
  const int center_hi = n_subc / 2 + 36;

  // CRS positions repeat per RB; build the per-symbol exclusion sets once.
  std::array<std::set<int>, kSymbolsPerSlot> crs_mod12;
  for (int p = 0; p < cell.ports; ++p)
    for (int l : crs_symbols_for_port(p)) {
      crs_mod12[static_cast<size_t>(l)].insert(crs_shift(cell.pci, p, l, 0) % 6);
      crs_mod12[static_cast<size_t>(l)].insert(crs_shift(cell.pci, p, l, 1) % 6);
    }

  std::vector<std::pair<int, int>> out;
  for (int l = n_ctrl_symbols; l < kSymbolsPerSubframe; ++l) {
    const int slot = l / kSymbolsPerSlot;
    const int lsym = l % kSymbolsPerSlot;
    const auto& prbs = slot == 0 ? prb_slot0 : prb_slot1;
    const bool sync_symbol =
        (subframe_index == 0 || subframe_index == 5) && slot == 0 &&
        (lsym == 5 || lsym == 6);
    const bool pbch_symbol = subframe_index == 0 && slot == 1 && lsym < 4;
    for (int prb : prbs) {
      for (int k = prb * 12; k < (prb + 1) * 12; ++k) {
        if ((sync_symbol || pbch_symbol) && k >= center_lo && k < center_hi)
          continue;
        const auto& excl = crs_mod12[static_cast<size_t>(lsym)];
        bool is_crs = false;
        for (int shift : excl)
          if (k % 6 == shift) is_crs = true;
        if (is_crs) continue;
        out.emplace_back(k, l);
      }
    }
  }
  // Transmit diversity needs pair/quad alignment; both ends drop the tail.
  const size_t align = cell.ports == 4 ? 4 : (cell.ports == 2 ? 2 : 1);
  while (out.size() % align != 0) out.pop_back();
  return out;
}

phy::Llrs decode_pdsch(const ResourceGrid& grid, const CellConfig& cell,
                       const DciMessage& dci, int cfi, int subframe_index,
                       int subframe_col0, uint16_t rnti) {
  for (const auto& prbs : {dci.prb_slot0, dci.prb_slot1}) {
    if (prbs.empty()) throw Error("decode_pdsch: empty allocation");
    for (int prb : prbs)
      if (prb < 0 || prb >= cell.nrb)
        throw Error("decode_pdsch: allocation outside the grid");
  }
  const int n_ctrl = control_symbols(cfi, cell.nrb);
  auto pos = pdsch_re_positions(cell, n_ctrl, subframe_index, dci.prb_slot0,
                                dci.prb_slot1);
  if (pos.empty()) throw Error("decode_pdsch: allocation has no data REs");
  auto chan = port_channels(grid, cell);
  GatheredRes g = gather(grid, chan, cell, subframe_col0, pos);
  std::vector<cplx> soft = txd_deprecode(g.y, g.h, cell.ports);
  Llrs llrs = qpsk_soft_demod(soft);
  Bits scr = gold_sequence(
      (static_cast<uint32_t>(rnti) << 14) +
          (static_cast<uint32_t>(subframe_index) << 9) +
          static_cast<uint32_t>(cell.pci),
      llrs.size());
  descramble(llrs, scr);
  return llrs;
}

std::vector<cplx> pdsch_encode(const phy::Bits& e_bits, const CellConfig& cell,
                               int subframe_index, uint16_t rnti) {
  Bits bits = e_bits;
  Bits scr = gold_sequence(
      (static_cast<uint32_t>(rnti) << 14) +
          (static_cast<uint32_t>(subframe_index) << 9) +
          static_cast<uint32_t>(cell.pci),
      bits.size());
  scramble(bits, scr);
  return composite_precode(qpsk_modulate(bits), cell.ports);
}

// ---------------------------------------------------------------- DL-SCH

phy::Bits dlsch_encode(const phy::Bits& payload, int rv, size_t e_len) {
  Bits crc = crc24a(payload);
  Bits block = payload;
  block.insert(block.end(), crc.begin(), crc.end());
  if (!valid_turbo_block_size(static_cast<int>(block.size())))
    throw Error("dlsch_encode: TBS+24 is not a turbo block size");
  auto d = turbo_encode(block);
  return turbo_rate_match(d, rv, e_len);
}

TransportBlock decode_dlsch(const phy::Llrs& soft, int tbs_bits, int rv,
                            DlschSoftState* state) {
  const int k = tbs_bits + 24;
  if (soft.empty()) throw Error("decode_dlsch: no soft bits for this TBS");
  if (!valid_turbo_block_size(k))
    throw Error("decode_dlsch: TBS+24 is not a turbo block size");

  DlschSoftState local;
  DlschSoftState* st = state ? state : &local;
  if (st->tbs_bits != tbs_bits || st->d_acc[0].size() != static_cast<size_t>(k + 4))
    st->reset(tbs_bits);
  turbo_rate_dematch(soft, rv, st->d_acc);
  st->combined += 1;

  auto crc_check = [&](const Bits& hard) {
    Bits payload(hard.begin(), hard.begin() + tbs_bits);
    Bits crc(hard.begin() + tbs_bits, hard.end());
    return crc24a(payload) == crc;
  };
  Bits hard = turbo_decode(st->d_acc, 5, crc_check);

  TransportBlock tb;
  tb.combined_count = st->combined;
  tb.crc_ok = crc_check(hard);
  if (tb.crc_ok) tb.bits.assign(hard.begin(), hard.begin() + tbs_bits);
  return tb;
}

} // namespace ltescan
