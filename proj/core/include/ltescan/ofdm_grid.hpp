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
#include <vector>

#include "ltescan/dsp.hpp"
#include "ltescan/phy/params.hpp"
#include "ltescan/util.hpp"

namespace ltescan {

/// Subcarriers x OFDM symbols, column 0 aligned to slot 0 / symbol 0 of a
/// radio frame. Row r maps to baseband frequency r-6*nrb for the lower half
/// and r-6*nrb+1 above DC (the DC bin itself is discarded).
class ResourceGrid {
 public:
  ResourceGrid() = default;
  ResourceGrid(int nrb, int n_symbols, int pci = -1);

  int nrb() const { return nrb_; }
  int n_subcarriers() const { return n_subc_; }
  int n_symbols() const { return n_symbols_; }
  int n_slots() const { return n_symbols_ / phy::kSymbolsPerSlot; }
  int n_frames() const { return n_slots() / phy::kSlotsPerFrame; }
  int pci() const { return pci_; }
  void set_pci(int pci) { pci_ = pci; }

  cplx& at(int subcarrier, int symbol) {
    return re_[static_cast<size_t>(symbol) * n_subc_ + subcarrier];
  }
  const cplx& at(int subcarrier, int symbol) const {
    return re_[static_cast<size_t>(symbol) * n_subc_ + subcarrier];
  }
  std::span<cplx> symbol(int l) {
    return {re_.data() + static_cast<size_t>(l) * n_subc_,
            static_cast<size_t>(n_subc_)};
  }
  std::span<const cplx> symbol(int l) const {
    return {re_.data() + static_cast<size_t>(l) * n_subc_,
            static_cast<size_t>(n_subc_)};
  }

  double energy() const;
  void scale(double factor);

  /// Central 72-subcarrier cut (the sync/PBCH window).
  ResourceGrid center_six_rb() const;

 private:
  int nrb_ = 0;
  int n_subc_ = 0;
  int n_symbols_ = 0;
  int pci_ = -1;
  std::vector<cplx> re_;
};

/// OFDM demodulation: per-symbol CP removal and unitary FFT; DC and guards
/// discarded. The input rate must match the rate for n_rb (1.92 MS/s for
/// 6 RB ... 30.72 MS/s for 100 RB). Only whole slots are demodulated.
ResourceGrid ofdm_demodulate(const dsp::ComplexSeries& x, int64_t timing_offset,
                             int nrb);

/// Inverse transform used by the downlink generator (unitary IFFT + CP).
dsp::ComplexSeries ofdm_modulate(const ResourceGrid& grid);

/// Least-squares channel estimate from the CRS of one port, linearly
/// interpolated in frequency and nearest-neighbor in time. Same shape as the
/// grid. Throws if the grid carries no CRS energy.
std::vector<cplx> estimate_channel(const ResourceGrid& grid, int pci,
                                   int port = 0);

/// Zero-forcing equalization (divide by the estimate per RE).
ResourceGrid equalize(const ResourceGrid& grid, const std::vector<cplx>& chan);

struct RsrpMeasurement {
  double rsrp_dbfs = 0.0;
  int n_crs_res = 0;
  int pci = -1;
};

/// Mean power over the port-0 CRS resource elements, in dB relative to
/// digital full scale. Empty optional when the grid carries no signal.
std::optional<RsrpMeasurement> measure_rsrp(const ResourceGrid& grid, int pci);

} // namespace ltescan
