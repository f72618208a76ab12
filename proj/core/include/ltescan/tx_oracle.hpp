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

#include <limits>

#include "ltescan/capture.hpp"
#include "ltescan/ofdm_grid.hpp"
#include "ltescan/pbch.hpp"
#include "ltescan/sib1.hpp"
#include "ltescan/sib_parse.hpp"

namespace ltescan {

/// Everything needed to synthesize a downlink carrying MIB and SIB1.
struct DownlinkConfig {
  int pci = 0;
  int n_rb = 6;
  int sfn0 = 0;      // SFN of the first generated frame
  int n_frames = 16; // 160 ms default
  int cell_ref_ports = 1;
  phy::PhichDuration phich_duration = phy::PhichDuration::Normal;
  phy::PhichResource phich_resource = phy::PhichResource::One;
  int cfi = 2;

  // SI grant (subframe 5 of even frames).
  DciFormat si_format = DciFormat::Format1A;
  bool si_localized = true; // 1A only; 1C is inherently distributed
  int si_mcs = 5;           // 1A: I_MCS; 1C: TBS index
  int si_n_prb_1a = 2;
  int si_alloc_start = 0;   // PRBs (1A localized), VRBs (1A distributed),
  int si_alloc_len = 4;     // or N_step units (1C)
  int si_agg_level = 4;     // 8 needs a control region of >= 8 CCEs
  int si_cce_start = 0;

  Sib1Info sib1{310, 410, 3, 1, 0x1234, 0x00ABCDE, {}};
  Sib1EncodeOptions sib1_options{};

  // Unallocated data REs carry seeded filler so the waveform looks like a
  // loaded cell (all seven CP peaks present).
  bool fill_unused = true;
  uint64_t fill_seed = 1;

  double center_freq_hz = 739e6;
  double start_time = 0.0;
};

struct ImpairmentSpec {
  double cfo_hz = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
  int64_t delay_samples = 0;
  cplx flat_gain = 1.0;
};

/// The resolved DCI the generator will transmit (useful as ground truth).
DciMessage si_grant_for(const DownlinkConfig& cfg);

/// Transport-block payload: the UPER-encoded SIB1 zero-padded to the TBS.
phy::Bits sib1_transport_block(const DownlinkConfig& cfg);

ResourceGrid generate_downlink_grid(const DownlinkConfig& cfg);

/// Grid generation + OFDM modulation, normalized to unit RMS.
IqCapture generate_downlink(const DownlinkConfig& cfg);

/// Delay, flat gain, CFO rotation and AWGN at the requested SNR.
IqCapture impair(const IqCapture& x, const ImpairmentSpec& spec,
                 uint64_t noise_seed = 0);

/// Additive two-cell mix (shorter input zero-padded).
IqCapture mix(const IqCapture& a, const IqCapture& b);

} // namespace ltescan
