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

#include "ltescan/cellsearch.hpp"
#include "ltescan/phy/sequences.hpp"

namespace ltescan {

using namespace phy;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kHalfFrame = kSearchFrameSamples / 2;
// CP start of the PSS symbol (last of the slot) measured from the slot start.
constexpr int kPssCpOffset = 823;

void check_rate(const dsp::ComplexSeries& x) {
  if (std::abs(x.rate_hz - kSearchRateHz) > 1.0)
    throw Error("cell search runs at 1.92 MS/s; resample first");
}

} // namespace

CfoEstimate estimate_cfo(const dsp::ComplexSeries& x) {
  check_rate(x);
  std::vector<cplx> z =
      dsp::cp_phase_sums(x, kSearchFftSize, kSearchSlotSamples);

  size_t s_star = 0;
  for (size_t s = 1; s < z.size(); ++s)
    if (std::abs(z[s]) > std::abs(z[s_star])) s_star = s;

  // The strongest phase is one of the seven CP positions; test each anchor
  // hypothesis and coherently sum the aligned set.
  static const int kCpStarts[7] = {0, 138, 275, 412, 549, 686, 823};
  double best_score = -1.0;
  cplx best_sum = 0.0;
  for (int anchor = 0; anchor < 7; ++anchor) {
    cplx acc = 0.0;
    double mag = 0.0;
    for (int j = 0; j < 7; ++j) {
      const int phase =
          (static_cast<int>(s_star) - kCpStarts[anchor] + kCpStarts[j] +
           kSearchSlotSamples) %
          kSearchSlotSamples;
      acc += z[static_cast<size_t>(phase)];
      mag += std::abs(z[static_cast<size_t>(phase)]);
    }
    if (mag > best_score) {
      best_score = mag;
      best_sum = acc;
    }
  }

  CfoEstimate est;
  est.phi_per_sample_rad = -std::arg(best_sum) / kSearchFftSize;
  est.f_offset_hz =
      est.phi_per_sample_rad * kSearchRateHz / (2.0 * kPi);
  return est;
}

dsp::ComplexSeries correct_cfo(const dsp::ComplexSeries& x,
                               const CfoEstimate& est) {
  dsp::ComplexSeries out;
  out.rate_hz = x.rate_hz;
  out.data.resize(x.data.size());
  const double step = -2.0 * kPi * est.f_offset_hz / x.rate_hz;
  // Incremental rotation drifts over long captures; rebase periodically.
  cplx rot = 1.0;
  const cplx inc = std::polar(1.0, step);
  for (size_t n = 0; n < x.data.size(); ++n) {
    if (n % 4096 == 0) rot = std::polar(1.0, step * static_cast<double>(n));
    out.data[n] = x.data[n] * rot;
    rot *= inc;
  }
  return out;
}

namespace {

struct PssCandidate {
  int n_id2;
  int phase;   // folded position of the PSS CP start within a half frame
  double peak; // folded normalized correlation
};

// SSS resolution for one PSS candidate.
struct SssResolution {
  int n_id1 = -1;
  double metric = 0.0;
  int first_subframe = 0; // subframe of the earliest usable PSS occurrence
  int64_t first_occurrence = 0;
};

std::optional<SssResolution> resolve_sss(const dsp::ComplexSeries& x,
                                         int n_id2, int phase) {
  const int fft = kSearchFftSize;
  std::vector<cplx> pss_d = generate_pss(n_id2);

  // Collect frequency-domain observations at every usable occurrence.
  std::vector<std::vector<cplx>> weights; // Y_sss * conj(H) per bin
  int64_t first_occ = -1;
  const int64_t n = static_cast<int64_t>(x.data.size());
  for (int64_t t = phase; t + kPssCpOffset < n; t += kHalfFrame) {
    const int64_t pss_body = t + 9;
    const int64_t sss_body = t - fft;
    if (sss_body < 0 || pss_body + fft > n) continue;
    std::vector<cplx> bins_pss(fft), bins_sss(fft);
    dsp::fft_unitary(
        std::span<const cplx>(x.data.data() + pss_body, static_cast<size_t>(fft)),
        bins_pss, false);
    dsp::fft_unitary(
        std::span<const cplx>(x.data.data() + sss_body, static_cast<size_t>(fft)),
        bins_sss, false);
    std::vector<cplx> w(62);
    for (int i = 0; i < 62; ++i) {
      const int f = i < 31 ? i - 31 : i - 30;
      const int bin = (f + fft) % fft;
      const cplx h = bins_pss[static_cast<size_t>(bin)] *
                     std::conj(pss_d[static_cast<size_t>(i)]);
      w[static_cast<size_t>(i)] =
          bins_sss[static_cast<size_t>(bin)] * std::conj(h);
    }
    if (first_occ < 0) first_occ = t;
    weights.push_back(std::move(w));
  }
  if (weights.empty()) return std::nullopt;

  SssResolution best;
  for (int n_id1 = 0; n_id1 < 168; ++n_id1) {
    std::vector<cplx> sss0 = generate_sss(n_id1, n_id2, 0);
    std::vector<cplx> sss5 = generate_sss(n_id1, n_id2, 5);
    for (int q = 0; q < 2; ++q) { // q=0: first occurrence is subframe 0
      double acc = 0.0;
      for (size_t k = 0; k < weights.size(); ++k) {
        const auto& s = ((k + static_cast<size_t>(q)) % 2 == 0) ? sss0 : sss5;
        cplx corr = 0.0;
        double norm = 0.0;
        for (int i = 0; i < 62; ++i) {
          corr += weights[k][static_cast<size_t>(i)] *
                  s[static_cast<size_t>(i)].real();
          norm += std::abs(weights[k][static_cast<size_t>(i)]);
        }
        if (norm > 1e-30) acc += std::abs(corr) / norm;
      }
      acc /= static_cast<double>(weights.size());
      if (acc > best.metric) {
        best.metric = acc;
        best.n_id1 = n_id1;
        best.first_subframe = q == 0 ? 0 : 5;
      }
    }
  }
  best.first_occurrence = first_occ;
  return best;
}

} // namespace

std::vector<CellDetection> detect_cells(const dsp::ComplexSeries& x,
                                        const DetectConfig& cfg) {
  check_rate(x);
  if (x.data.size() < static_cast<size_t>(kSearchFrameSamples))
    throw Error("detect_cells: need at least one frame of samples");

  std::vector<CellDetection> results;
  for (int n_id2 = 0; n_id2 < 3; ++n_id2) {
    std::vector<cplx> ref = pss_time_reference(n_id2);
    std::vector<double> corr = dsp::sliding_correlate(x, ref);

    // Fold onto a half frame; PSS repeats every 9600 samples.
    std::vector<double> folded(kHalfFrame, 0.0);
    std::vector<int> counts(kHalfFrame, 0);
    for (size_t i = 0; i < corr.size(); ++i) {
      folded[i % kHalfFrame] += corr[i];
      counts[i % kHalfFrame] += 1;
    }
    for (int i = 0; i < kHalfFrame; ++i)
      if (counts[i] > 0) folded[static_cast<size_t>(i)] /= counts[i];

    std::vector<double> sorted = folded;
    std::nth_element(sorted.begin(), sorted.begin() + kHalfFrame / 2,
                     sorted.end());
    const double median = sorted[kHalfFrame / 2];

    // Strongest folded peaks, separated by at least a symbol.
    std::vector<PssCandidate> candidates;
    std::vector<double> work = folded;
    for (int pick = 0; pick < cfg.max_cells; ++pick) {
      int arg = static_cast<int>(std::max_element(work.begin(), work.end()) -
                                 work.begin());
      const double peak = work[static_cast<size_t>(arg)];
      if (peak < cfg.pss_peak_min) break;
      if (median > 1e-30 && peak / median < cfg.pss_ratio_min) break;
      candidates.push_back({n_id2, arg, peak});
      for (int d = -137; d <= 137; ++d) {
        int idx = (arg + d + kHalfFrame) % kHalfFrame;
        work[static_cast<size_t>(idx)] = 0.0;
      }
    }

    for (const auto& cand : candidates) {
      auto sss = resolve_sss(x, n_id2, cand.phase);
      if (!sss || sss->metric < cfg.sss_corr_min) continue;

      CellDetection det;
      det.n_id2 = n_id2;
      det.n_id1 = sss->n_id1;
      det.pci = 3 * sss->n_id1 + n_id2;
      det.peak = cand.peak;
      det.sss_metric = sss->metric;
      det.detected_subframe = sss->first_subframe;
      int64_t frame_start = sss->first_occurrence - kPssCpOffset;
      if (sss->first_subframe == 5) frame_start -= kHalfFrame;
      frame_start %= kSearchFrameSamples;
      if (frame_start < 0) frame_start += kSearchFrameSamples;
      det.timing_offset_samples = frame_start;
      results.push_back(det);
    }
  }

  // Keep the best instance of each PCI, strongest first; exact ties go to
  // the lower PCI.
  std::sort(results.begin(), results.end(),
            [](const CellDetection& a, const CellDetection& b) {
              if (a.peak != b.peak) return a.peak > b.peak;
              return a.pci < b.pci;
            });
  std::vector<CellDetection> unique;
  for (const auto& det : results) {
    bool seen = false;
    for (const auto& u : unique) seen = seen || u.pci == det.pci;
    if (!seen) unique.push_back(det);
    if (static_cast<int>(unique.size()) >= cfg.max_cells) break;
  }
  return unique;
}

std::optional<CellDetection> detect_cell(const dsp::ComplexSeries& x,
                                         const DetectConfig& cfg) {
  auto cells = detect_cells(x, cfg);
  if (cells.empty()) return std::nullopt;
  return cells.front();
}

} // namespace ltescan
