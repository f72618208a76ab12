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

#include <cstdint>
#include <span>
#include <vector>

#include "ltescan/util.hpp"

namespace ltescan::dsp {

/// Complex baseband series tagged with its sample rate.
struct ComplexSeries {
  std::vector<cplx> data;
  double rate_hz = 0.0;
};

struct Rational {
  int64_t num = 1;
  int64_t den = 1;
};

/// Best rational approximation with bounded numerator/denominator.
/// Throws if no fraction within `rel_tol` exists.
Rational rational_ratio(double value, int64_t max_digits = 9999,
                        double rel_tol = 1e-9);

/// Forward/inverse DFT, unitary scaling (1/sqrt(N) both directions).
/// Any size FFTW accepts; plans are cached per (size, direction).
void fft_unitary(std::span<const cplx> in, std::span<cplx> out, bool inverse);
std::vector<cplx> fft_unitary(const std::vector<cplx>& in, bool inverse);

/// Polyphase rational resampler with a Kaiser-windowed-sinc prototype
/// (0.45 normalized cutoff). Zero net group delay: output sample n sits at
/// input time n*M/L. Identity when the rates already match.
ComplexSeries resample(const ComplexSeries& x, double to_rate_hz);

/// Normalized sliding cross-correlation magnitude:
///   out[k] = |sum_m x[k+m] conj(ref[m])| / (||x[k..k+R)|| * ||ref||)
/// Values fall in [0,1]. Switches to overlap-save FFT for long inputs.
std::vector<double> sliding_correlate(const ComplexSeries& x,
                                      std::span<const cplx> ref);

/// Per-slot-phase complex sums of x(n)*conj(x(n+fft_size)) integrated over
/// the minimum CP span and averaged across slots. The underlying quantity of
/// the CP-based timing/frequency metrics.
std::vector<cplx> cp_phase_sums(const ComplexSeries& x, int fft_size = 128,
                                int slot_len = 960);

/// Magnitude of cp_phase_sums normalized by its own mean, so the result is
/// invariant to amplitude scaling. Peaks align with the 7 CP positions.
std::vector<double> cp_metric(const ComplexSeries& x, int fft_size = 128,
                              int slot_len = 960);

/// Mean power of a series (sum |x|^2 / N).
double mean_power(std::span<const cplx> x);

} // namespace ltescan::dsp
