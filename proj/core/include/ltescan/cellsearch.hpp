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
#include <vector>

#include "ltescan/dsp.hpp"
#include "ltescan/phy/params.hpp"

namespace ltescan {

struct CellDetection {
  int pci = 0;
  int n_id1 = 0;
  int n_id2 = 0;
  int64_t timing_offset_samples = 0; // frame start, in [0, 19200)
  double peak = 0.0;                 // normalized PSS correlation
  double sss_metric = 0.0;
  int detected_subframe = 0;         // 0 or 5: where the first PSS peak sat
};

struct CfoEstimate {
  double phi_per_sample_rad = 0.0; // in (-pi/128, pi/128]
  double f_offset_hz = 0.0;        // phi / (2*pi*Ts), in (-7500, 7500]
};

/// Detection thresholds. Defaults were tuned on generated-downlink SNR
/// sweeps; any of them can be overridden per scan.
struct DetectConfig {
  double pss_peak_min = 0.15;
  double pss_ratio_min = 4.0; // peak over the correlation-floor median
  double sss_corr_min = 0.25;
  int max_cells = 3;
};

/// Blind CP-product CFO estimate on a 1.92 MS/s series. The 128-sample
/// delay conjugate product bounds the range to +/-7.5 kHz.
CfoEstimate estimate_cfo(const dsp::ComplexSeries& x);

/// Derotate by the estimated offset; estimate_cfo on the output is ~0.
dsp::ComplexSeries correct_cfo(const dsp::ComplexSeries& x,
                               const CfoEstimate& est);

/// PSS/SSS search over all 504 identities. Returns the strongest cells
/// above threshold, strongest first, at most cfg.max_cells.
std::vector<CellDetection> detect_cells(const dsp::ComplexSeries& x,
                                        const DetectConfig& cfg = {});

std::optional<CellDetection> detect_cell(const dsp::ComplexSeries& x,
                                         const DetectConfig& cfg = {});

} // namespace ltescan
