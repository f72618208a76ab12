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

namespace ltescan {

using namespace phy;

ResourceGrid::ResourceGrid(int nrb, int n_symbols, int pci)
    : nrb_(nrb),
      n_subc_(kSubcarriersPerRb * nrb),
      n_symbols_(n_symbols),
      pci_(pci),
      re_(static_cast<size_t>(n_subc_) * n_symbols_, cplx(0.0)) {
  if (!valid_nrb(nrb)) throw Error("ResourceGrid: unsupported N_RB");
}

double ResourceGrid::energy() const {
  double acc = 0.0;
  for (const auto& v : re_) acc += std::norm(v);
  return acc;
}

void ResourceGrid::scale(double factor) {
  for (auto& v : re_) v *= factor;
}

ResourceGrid ResourceGrid::center_six_rb() const {
  if (nrb_ == 6) return *this;
  ResourceGrid out(6, n_symbols_, pci_);
  const int offset = n_subc_ / 2 - 36;
  for (int l = 0; l < n_symbols_; ++l)
    for (int k = 0; k < 72; ++k) out.at(k, l) = at(k + offset, l);
  return out;
}

namespace {

// row <-> FFT bin mapping with the DC bin skipped
inline int bin_for_row(int row, int half, int fft) {
  const int f = row < half ? row - half : row - half + 1;
  return (f + fft) % fft;
}

} // namespace

ResourceGrid ofdm_demodulate(const dsp::ComplexSeries& x, int64_t timing_offset,
                             int nrb) {
  if (!valid_nrb(nrb)) throw Error("ofdm_demodulate: unsupported N_RB");
  const int fft = fft_size_for_nrb(nrb);
  const double want_rate = sample_rate_for_nrb(nrb);
  if (std::abs(x.rate_hz - want_rate) > 1.0)
    throw Error("ofdm_demodulate: sample rate " + std::to_string(x.rate_hz) +
                " does not match " + std::to_string(want_rate) + " for " +
                std::to_string(nrb) + " RB (LTE bandwidth/rate table)");
  if (timing_offset < 0 || static_cast<size_t>(timing_offset) >= x.data.size())
    throw Error("ofdm_demodulate: timing offset outside capture");

  const int slot_len = slot_samples(fft);
  const int64_t avail = static_cast<int64_t>(x.data.size()) - timing_offset;
  const int n_slots = static_cast<int>(avail / slot_len);
  if (n_slots < 1) throw Error("ofdm_demodulate: less than one slot of data");

  ResourceGrid grid(nrb, n_slots * kSymbolsPerSlot);
  const int half = grid.n_subcarriers() / 2;
  std::vector<cplx> bins(static_cast<size_t>(fft));
  for (int slot = 0; slot < n_slots; ++slot) {
    const int64_t slot_start = timing_offset + static_cast<int64_t>(slot) * slot_len;
    for (int l = 0; l < kSymbolsPerSlot; ++l) {
      const int64_t body =
          slot_start + symbol_offset_in_slot(fft, l) + cp_length(fft, l);
      std::span<const cplx> in(x.data.data() + body, static_cast<size_t>(fft));
      dsp::fft_unitary(in, bins, false);
      const int col = slot * kSymbolsPerSlot + l;
      for (int r = 0; r < grid.n_subcarriers(); ++r)
        grid.at(r, col) = bins[static_cast<size_t>(bin_for_row(r, half, fft))];
    }
  }
  return grid;
}

dsp::ComplexSeries ofdm_modulate(const ResourceGrid& grid) {
  const int nrb = grid.nrb();
  const int fft = fft_size_for_nrb(nrb);
  const int slot_len = slot_samples(fft);
  const int n_slots = grid.n_symbols() / kSymbolsPerSlot;
  const int half = grid.n_subcarriers() / 2;

  dsp::ComplexSeries out;
  out.rate_hz = sample_rate_for_nrb(nrb);
  out.data.assign(static_cast<size_t>(n_slots) * slot_len, cplx(0.0));

  std::vector<cplx> bins(static_cast<size_t>(fft));
  std::vector<cplx> body(static_cast<size_t>(fft));
  for (int slot = 0; slot < n_slots; ++slot) {
    for (int l = 0; l < kSymbolsPerSlot; ++l) {
      const int col = slot * kSymbolsPerSlot + l;
      std::fill(bins.begin(), bins.end(), cplx(0.0));
      for (int r = 0; r < grid.n_subcarriers(); ++r)
        bins[static_cast<size_t>(bin_for_row(r, half, fft))] = grid.at(r, col);
      dsp::fft_unitary(bins, body, true);
      const int cp = cp_length(fft, l);
      const size_t start = static_cast<size_t>(slot) * slot_len +
                           static_cast<size_t>(symbol_offset_in_slot(fft, l));
      for (int i = 0; i < cp; ++i)
        out.data[start + static_cast<size_t>(i)] =
            body[static_cast<size_t>(fft - cp + i)];
      for (int i = 0; i < fft; ++i)
        out.data[start + static_cast<size_t>(cp + i)] =
            body[static_cast<size_t>(i)];
    }
  }
  return out;
}

} // namespace ltescan
