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
#include <cmath>

#include "ltescan/ofdm_grid.hpp"
#include "ltescan/phy/sequences.hpp"

namespace ltescan {

using namespace phy;

std::vector<cplx> estimate_channel(const ResourceGrid& grid, int pci,
                                   int port) {
  const int n_subc = grid.n_subcarriers();
  const int n_sym = grid.n_symbols();
  const auto crs_syms = crs_symbols_for_port(port);

  // Least squares at each CRS-bearing symbol, interpolated across frequency.
  std::vector<int> pilot_cols;
  std::vector<std::vector<cplx>> col_est; // per pilot column, full-height
  double crs_energy = 0.0;

  for (int slot = 0; slot < grid.n_slots(); ++slot) {
    const auto crs = generate_crs(pci, port, grid.nrb(), slot % kSlotsPerFrame);
    for (int l : crs_syms) {
      const int col = slot * kSymbolsPerSlot + l;
      if (col >= n_sym) continue;
      std::vector<int> ks;
      std::vector<cplx> ls;
      for (const auto& re : crs) {
        if (re.symbol_in_slot != l) continue;
        const cplx rx = grid.at(re.subcarrier, col);
        crs_energy += std::norm(rx);
        ks.push_back(re.subcarrier);
        ls.push_back(rx / re.value); // |value| = 1, so this is rx * conj(value)
      }
      if (ks.empty()) continue;
      std::vector<cplx> full(static_cast<size_t>(n_subc));
      size_t seg = 0;
      for (int k = 0; k < n_subc; ++k) {
        if (k <= ks.front()) {
          full[k] = ls.front();
        } else if (k >= ks.back()) {
          full[k] = ls.back();
        } else {
          while (ks[seg + 1] < k) ++seg;
          const double t = static_cast<double>(k - ks[seg]) /
                           static_cast<double>(ks[seg + 1] - ks[seg]);
          full[k] = ls[seg] * (1.0 - t) + ls[seg + 1] * t;
        }
      }
      pilot_cols.push_back(col);
      col_est.push_back(std::move(full));
    }
  }

  if (pilot_cols.empty() || crs_energy <= 0.0)
    throw Error("estimate_channel: no CRS energy in grid");

  // Nearest pilot symbol in time.
  std::vector<cplx> out(static_cast<size_t>(n_subc) * n_sym);
  size_t near = 0;
  for (int col = 0; col < n_sym; ++col) {
    while (near + 1 < pilot_cols.size() &&
           std::abs(pilot_cols[near + 1] - col) <=
               std::abs(pilot_cols[near] - col))
      ++near;
    // `near` only advances, so rewind check against the previous column
    size_t best = near;
    if (near > 0 && std::abs(pilot_cols[near - 1] - col) <
                        std::abs(pilot_cols[near] - col))
      best = near - 1;
    for (int k = 0; k < n_subc; ++k)
      out[static_cast<size_t>(col) * n_subc + k] = col_est[best][k];
  }
  return out;
}

ResourceGrid equalize(const ResourceGrid& grid, const std::vector<cplx>& chan) {
  if (chan.size() != static_cast<size_t>(grid.n_subcarriers()) * grid.n_symbols())
    throw Error("equalize: channel size mismatch");
  ResourceGrid out = grid;
  const int n_subc = grid.n_subcarriers();
  for (int l = 0; l < grid.n_symbols(); ++l)
    for (int k = 0; k < n_subc; ++k) {
      const cplx h = chan[static_cast<size_t>(l) * n_subc + k];
      out.at(k, l) = std::norm(h) > 1e-30 ? grid.at(k, l) / h : cplx(0.0);
    }
  return out;
}

std::optional<RsrpMeasurement> measure_rsrp(const ResourceGrid& grid, int pci) {
  double acc = 0.0;
  int count = 0;
  for (int slot = 0; slot < grid.n_slots(); ++slot) {
    const auto crs = generate_crs(pci, 0, grid.nrb(), slot % kSlotsPerFrame);
    for (const auto& re : crs) {
      const int col = slot * kSymbolsPerSlot + re.symbol_in_slot;
      if (col >= grid.n_symbols()) continue;
      acc += std::norm(grid.at(re.subcarrier, col));
      ++count;
    }
  }
  if (count < 8 || acc <= 0.0) return std::nullopt;
  RsrpMeasurement m;
  m.rsrp_dbfs = 10.0 * std::log10(acc / count);
  m.n_crs_res = count;
  m.pci = pci;
  return m;
}

} // namespace ltescan
