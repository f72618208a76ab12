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
#include <set>

#include "ltescan/phy/control_region.hpp"

namespace ltescan::phy {

namespace {

// REGs of one OFDM symbol, ordered by subcarrier. Symbols carrying CRS hold
// two 6-wide groups per RB (the two CRS REs skipped); others three 4-wide.
std::vector<Reg> regs_in_symbol(int nrb, int symbol, int pci, int ports) {
  const bool has_crs =
      symbol == 0 || (symbol == 1 && ports == 4) ||
      false;
  std::vector<Reg> out;
  const int n_subc = kSubcarriersPerRb * nrb;
  if (has_crs) {
    const int crs_mod = pci % 3;
    for (int base = 0; base < n_subc; base += 6) {
      Reg reg;
      reg.symbol = symbol;
      int idx = 0;
      for (int k = base; k < base + 6; ++k)
        if (k % 3 != crs_mod) reg.subcarriers[idx++] = k;
      out.push_back(reg);
    }
  } else {
    for (int base = 0; base < n_subc; base += 4) {
      Reg reg;
      reg.symbol = symbol;
      for (int i = 0; i < 4; ++i) reg.subcarriers[i] = base + i;
      out.push_back(reg);
    }
  }
  return out;
}

} // namespace

ControlRegion build_control_region(int nrb, int cfi, int pci, int ports,
                                   PhichResource phich_res,
                                   PhichDuration phich_dur) {
  if (cfi < 1 || cfi > 3) throw Error("build_control_region: CFI must be 1..3");
  ControlRegion cr;
  cr.nrb = nrb;
  cr.n_symbols = control_symbols(cfi, nrb);
  if (phich_dur == PhichDuration::Extended && cr.n_symbols < 3)
    throw Error("build_control_region: extended PHICH needs a 3-symbol span");

  std::vector<std::vector<Reg>> sym_regs;
  for (int l = 0; l < cr.n_symbols; ++l)
    sym_regs.push_back(regs_in_symbol(nrb, l, pci, ports));

  // PCFICH: four groups in symbol 0, spread in quarters from a PCI offset.
  const int n_subc = kSubcarriersPerRb * nrb;
  std::set<std::pair<int, int>> taken; // (symbol, first subcarrier)
  const int k_bar = 6 * (pci % (2 * nrb));
  for (int i = 0; i < 4; ++i) {
    const int k = (k_bar + (i * nrb / 2) * 6) % n_subc;
    const Reg& reg = sym_regs[0][static_cast<size_t>(k / 6)];
    cr.pcfich.push_back(reg);
    taken.insert({0, reg.subcarriers[0]});
  }

  // PHICH reservation: three REGs per group among the REGs not used by
  // PCFICH. Normal duration keeps everything in symbol 0; extended spreads
  // one REG into each of the first three symbols.
  const int groups = phich_group_count(phich_res, nrb);
  const int n1 = static_cast<int>(
      (cr.n_symbols > 1 ? sym_regs[1] : regs_in_symbol(nrb, 1, pci, ports))
          .size());
  for (int m = 0; m < groups; ++m) {
    for (int i = 0; i < 3; ++i) {
      const int l = phich_dur == PhichDuration::Normal ? 0 : i;
      std::vector<const Reg*> avail;
      for (const auto& reg : sym_regs[static_cast<size_t>(l)])
        if (!taken.count({l, reg.subcarriers[0]})) avail.push_back(&reg);
      if (avail.empty())
        throw Error("build_control_region: control region exhausted by PHICH");
      const int nl = static_cast<int>(avail.size());
      int idx = (pci * nl / std::max(1, n1) + m +
                 (phich_dur == PhichDuration::Normal ? i * nl / 3 : 0)) %
                nl;
      // Positions are computed against the running free list, so collisions
      // cannot occur; idx is still probed for safety.
      cr.phich.push_back(*avail[static_cast<size_t>(idx)]);
      taken.insert({l, avail[static_cast<size_t>(idx)]->subcarriers[0]});
    }
  }

  // Remaining REGs belong to the PDCCH, mapped time-first (symbol index
  // cycling fastest along each subcarrier position).
  for (int k = 0; k < n_subc; ++k) {
    for (int l = 0; l < cr.n_symbols; ++l) {
      for (const auto& reg : sym_regs[static_cast<size_t>(l)]) {
        if (reg.subcarriers[0] != k) continue;
        if (taken.count({l, k})) continue;
        cr.pdcch.push_back(reg);
      }
    }
  }
  return cr;
}

const std::array<std::array<uint8_t, 32>, 3>& cfi_codewords() {
  static const auto words = [] {
    std::array<std::array<uint8_t, 32>, 3> w{};
    const uint8_t base[3][3] = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 32; ++i) w[c][i] = base[c][i % 3];
    return w;
  }();
  return words;
}

uint32_t pcfich_scrambling_init(int pci, int subframe) {
  return (static_cast<uint32_t>(subframe) + 1u) *
             (2u * static_cast<uint32_t>(pci) + 1u) * 512u +
         static_cast<uint32_t>(pci);
}

uint32_t pdcch_scrambling_init(int pci, int subframe) {
  return (static_cast<uint32_t>(subframe) << 9) + static_cast<uint32_t>(pci);
}

std::vector<int32_t> pdcch_quad_permutation(int m_quad, int pci) {
  // Sub-block interleaver on quadruplet indices with <NULL> removal.
  const int rows = (m_quad + 31) / 32;
  const int kpi = 32 * rows;
  const int nd = kpi - m_quad;
  static constexpr int kColPerm[32] = {
      0, 16, 8,  24, 4,  20, 12, 28, 2,  18, 10, 26, 6,  22, 14, 30,
      1, 17, 9,  25, 5,  21, 13, 29, 3,  19, 11, 27, 7,  23, 15, 31};
  std::vector<int32_t> interleaved;
  interleaved.reserve(static_cast<size_t>(m_quad));
  for (int k = 0; k < kpi; ++k) {
    const int y = (k % rows) * 32 + kColPerm[k / rows];
    if (y >= nd) interleaved.push_back(y - nd);
  }
  std::vector<int32_t> out(static_cast<size_t>(m_quad));
  for (int i = 0; i < m_quad; ++i)
    out[static_cast<size_t>(i)] =
        interleaved[static_cast<size_t>((i + pci) % m_quad)];
  return out;
}

std::vector<int> common_search_candidates(int agg_level, int n_cce) {
  if (agg_level != 4 && agg_level != 8)
    throw Error("common_search_candidates: common space uses L in {4, 8}");
  const int max_candidates = 16 / agg_level;
  std::vector<int> out;
  for (int m = 0; m < max_candidates; ++m) {
    const int start = m * agg_level;
    if (start + agg_level <= n_cce) out.push_back(start);
  }
  return out;
}

} // namespace ltescan::phy
