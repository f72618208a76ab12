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

#include <array>
#include <cstdint>
#include <stdexcept>

// Downlink numerology for FDD with normal cyclic prefix. Everything here is
// shared by the transmit oracle and the receive chain so the two sides cannot
// drift apart.
namespace ltescan::phy {

inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kSymbolsPerSlot = 7;   // normal CP
inline constexpr int kSlotsPerFrame = 20;
inline constexpr int kSymbolsPerSubframe = 2 * kSymbolsPerSlot;
inline constexpr int kSyncSubcarriers = 62; // PSS/SSS occupy 62 around DC
inline constexpr int kMaxNrbDl = 110;       // CRS sequence centering reference
inline constexpr int kPciCount = 504;
inline constexpr uint16_t kSiRnti = 0xFFFF;

// Bandwidth field in the MIB indexes this set.
inline constexpr std::array<int, 6> kNrbTable = {6, 15, 25, 50, 75, 100};

constexpr bool valid_nrb(int nrb) {
  for (int v : kNrbTable)
    if (v == nrb) return true;
  return false;
}

constexpr int fft_size_for_nrb(int nrb) {
  switch (nrb) {
    case 6: return 128;
    case 15: return 256;
    case 25: return 512;
    case 50: return 1024;
    case 75: return 1536;
    case 100: return 2048;
    default: throw std::invalid_argument("unsupported N_RB");
  }
}

// 15 kHz subcarrier spacing: 1.92 MS/s for 6 RB up to 30.72 MS/s for 100 RB.
constexpr double sample_rate_for_nrb(int nrb) {
  return 15000.0 * fft_size_for_nrb(nrb);
}

// CP lengths scale from the 2048-point reference (160/144 samples).
constexpr int cp_length(int fft_size, int symbol_in_slot) {
  return (symbol_in_slot == 0 ? 160 : 144) * fft_size / 2048;
}

constexpr int slot_samples(int fft_size) { return fft_size * 15 / 2; }
constexpr int subframe_samples(int fft_size) { return 2 * slot_samples(fft_size); }
constexpr int frame_samples(int fft_size) {
  return kSlotsPerFrame * slot_samples(fft_size);
}

// Offset of symbol l (0..6) from the start of its slot, including earlier CPs.
constexpr int symbol_offset_in_slot(int fft_size, int l) {
  int off = 0;
  for (int s = 0; s < l; ++s) off += cp_length(fft_size, s) + fft_size;
  return off;
}

inline constexpr double kSearchRateHz = 1.92e6; // cell search always runs here
inline constexpr int kSearchFftSize = 128;
inline constexpr int kSearchSlotSamples = 960;
inline constexpr int kSearchFrameSamples = 19200;

// PHICH group multiplier Ng from the MIB (values 1/6, 1/2, 1, 2).
enum class PhichDuration : uint8_t { Normal = 0, Extended = 1 };
enum class PhichResource : uint8_t { OneSixth = 0, Half = 1, One = 2, Two = 3 };

constexpr int phich_group_count(PhichResource res, int nrb) {
  // ceil(Ng * nrb / 8) with Ng in {1/6, 1/2, 1, 2}
  switch (res) {
    case PhichResource::OneSixth: return (nrb + 47) / 48;
    case PhichResource::Half: return (nrb + 15) / 16;
    case PhichResource::One: return (nrb + 7) / 8;
    case PhichResource::Two: return (2 * nrb + 7) / 8;
  }
  return 1;
}

// Control region span in OFDM symbols. Narrow systems get one extra symbol.
constexpr int control_symbols(int cfi, int nrb) {
  return nrb <= 10 ? cfi + 1 : cfi;
}

} // namespace ltescan::phy
