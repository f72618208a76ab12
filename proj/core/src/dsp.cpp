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
#include "ltescan/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace ltescan::dsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- FFT cache
// Plans are created once per (size, direction) under a lock and executed with
// the new-array interface, which is thread safe. FFTW_UNALIGNED keeps the
// plans valid for arbitrary caller buffers.
class FftCache {
 public:
  static FftCache& instance() {
    static FftCache c;
    return c;
  }

  void execute(std::span<const cplx> in, std::span<cplx> out, bool inverse) {
    const int n = static_cast<int>(in.size());
    fftw_plan plan = get_plan(n, inverse);
    std::vector<cplx> tmp_in(in.begin(), in.end());
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(tmp_in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) v *= scale;
  }

 private:
  fftw_plan get_plan(int n, bool inverse) {
    std::lock_guard<std::mutex> lk(mutex_);
    auto key = std::make_pair(n, inverse);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(n), b(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()),
        inverse ? FFTW_BACKWARD : FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mutex_;
  std::map<std::pair<int, bool>, fftw_plan> plans_;
};

double kaiser(double x, double beta) {
  // I0(beta*sqrt(1-x^2)) / I0(beta), |x| <= 1
  auto bessel_i0 = [](double v) {
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 40; ++k) {
      term *= (v * v) / (4.0 * k * k);
      sum += term;
      if (term < 1e-16 * sum) break;
    }
    return sum;
  };
  double t = 1.0 - x * x;
  if (t < 0.0) return 0.0;
  return bessel_i0(beta * std::sqrt(t)) / bessel_i0(beta);
}

struct PolyphaseBank {
  int64_t up = 1, down = 1;
  int half_width = 0;                // in input samples
  std::vector<std::vector<double>> taps; // [phase][tap]
};

// Kernel bank cache, keyed by the reduced up/down ratio.
std::mutex g_bank_mutex;
std::map<std::pair<int64_t, int64_t>, PolyphaseBank> g_banks;

const PolyphaseBank& get_bank(int64_t up, int64_t down) {
  std::lock_guard<std::mutex> lk(g_bank_mutex);
  auto key = std::make_pair(up, down);
  auto it = g_banks.find(key);
  if (it != g_banks.end()) return it->second;

  PolyphaseBank bank;
  bank.up = up;
  bank.down = down;
  // Cutoff at 0.45 of the lower Nyquist; width sized for >60 dB stopband.
  const double r = std::min(1.0, static_cast<double>(up) / down);
  const double c = 0.9 * r; // 2*fc/f_in with fc = 0.45*min(f_in, f_out)
  bank.half_width = static_cast<int>(std::ceil(10.0 / r));
  const double beta = 8.6;
  const int ntaps = 2 * bank.half_width + 1;
  bank.taps.resize(static_cast<size_t>(up));
  for (int64_t p = 0; p < up; ++p) {
    auto& row = bank.taps[static_cast<size_t>(p)];
    row.resize(ntaps);
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    double sum = 0.0;
    for (int m = -bank.half_width; m <= bank.half_width; ++m) {
      const double tau = frac - m;
      double sinc = (tau == 0.0) ? 1.0 : std::sin(kPi * c * tau) / (kPi * c * tau);
      double h = c * sinc * kaiser(tau / (bank.half_width + 0.5), beta);
      row[m + bank.half_width] = h;
      sum += h;
    }
    // Unity DC gain per phase keeps passband amplitude flat.
    for (auto& t : row) t /= sum;
  }
  return g_banks.emplace(key, std::move(bank)).first->second;
}

} // namespace

Rational rational_ratio(double value, int64_t max_digits, double rel_tol) {
  if (!(value > 0.0)) throw Error("rational_ratio: ratio must be positive");
  // Continued-fraction expansion, stop when both terms fit.
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    int64_t a = static_cast<int64_t>(std::floor(x));
    int64_t p2 = a * p1 + p0;
    int64_t q2 = a * q1 + q0;
    if (p2 > max_digits || q2 > max_digits) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = x - static_cast<double>(a);
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (q1 == 0 || p1 == 0)
    throw Error("rational_ratio: no rational fit within digit limit");
  double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::abs(approx - value) > rel_tol * value)
    throw Error("rational_ratio: ratio not expressible with <=4-digit terms");
  int64_t g = std::gcd(p1, q1);
  return {p1 / g, q1 / g};
}

void fft_unitary(std::span<const cplx> in, std::span<cplx> out, bool inverse) {
  if (in.size() != out.size()) throw Error("fft: size mismatch");
  if (in.empty()) return;
  FftCache::instance().execute(in, out, inverse);
}

std::vector<cplx> fft_unitary(const std::vector<cplx>& in, bool inverse) {
  std::vector<cplx> out(in.size());
  fft_unitary(std::span<const cplx>(in), std::span<cplx>(out), inverse);
  return out;
}

ComplexSeries resample(const ComplexSeries& x, double to_rate_hz) {
  if (!(x.rate_hz > 0.0) || !(to_rate_hz > 0.0))
    throw Error("resample: rates must be positive");
  if (to_rate_hz == x.rate_hz) return x;

  Rational r = rational_ratio(to_rate_hz / x.rate_hz);
  const auto& bank = get_bank(r.num, r.den);
  const int64_t n_in = static_cast<int64_t>(x.data.size());
  const int64_t n_out = (n_in * r.num + r.den / 2) / r.den;

  ComplexSeries out;
  out.rate_hz = to_rate_hz;
  out.data.resize(static_cast<size_t>(n_out));
  const int hw = bank.half_width;
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t num = n * r.den;
    const int64_t i0 = num / r.num;
    const int64_t phase = num % r.num;
    const auto& taps = bank.taps[static_cast<size_t>(phase)];
    cplx acc = 0.0;
    for (int m = -hw; m <= hw; ++m) {
      const int64_t k = i0 + m;
      if (k < 0 || k >= n_in) continue;
      acc += x.data[static_cast<size_t>(k)] * taps[m + hw];
    }
    out.data[static_cast<size_t>(n)] = acc;
  }
  return out;
}

namespace {

std::vector<double> correlate_direct(std::span<const cplx> x,
                                     std::span<const cplx> ref,
                                     size_t n_lags) {
  std::vector<double> out(n_lags);
  for (size_t k = 0; k < n_lags; ++k) {
    cplx acc = 0.0;
    for (size_t m = 0; m < ref.size(); ++m)
      acc += x[k + m] * std::conj(ref[m]);
    out[k] = std::abs(acc);
  }
  return out;
}

std::vector<double> correlate_fft(std::span<const cplx> x,
                                  std::span<const cplx> ref, size_t n_lags) {
  const size_t rlen = ref.size();
  size_t block = 1;
  while (block < 8 * rlen || block < 4096) block <<= 1;
  const size_t valid = block - rlen + 1;

  std::vector<cplx> ref_pad(block, 0.0);
  std::copy(ref.begin(), ref.end(), ref_pad.begin());
  std::vector<cplx> ref_fft = fft_unitary(ref_pad, false);

  std::vector<double> out(n_lags);
  std::vector<cplx> seg(block), spec(block), prod(block), corr(block);
  for (size_t start = 0; start < n_lags; start += valid) {
    const size_t count = std::min(valid, n_lags - start);
    for (size_t i = 0; i < block; ++i) {
      const size_t idx = start + i;
      seg[i] = idx < x.size() ? x[idx] : cplx(0.0);
    }
    fft_unitary(std::span<const cplx>(seg), std::span<cplx>(spec), false);
    for (size_t i = 0; i < block; ++i) prod[i] = spec[i] * std::conj(ref_fft[i]);
    fft_unitary(std::span<const cplx>(prod), std::span<cplx>(corr), true);
    // unitary transforms leave a 1/sqrt(N) pair => scale back by sqrt(N)
    const double scale = std::sqrt(static_cast<double>(block));
    for (size_t i = 0; i < count; ++i) out[start + i] = std::abs(corr[i]) * scale;
  }
  return out;
}

} // namespace

std::vector<double> sliding_correlate(const ComplexSeries& x,
                                      std::span<const cplx> ref) {
  if (ref.empty()) throw Error("sliding_correlate: empty reference");
  if (ref.size() > x.data.size())
    throw Error("sliding_correlate: reference longer than input");
  const size_t n_lags = x.data.size() - ref.size() + 1;

  double ref_energy = 0.0;
  for (const auto& v : ref) ref_energy += std::norm(v);
  const double ref_norm = std::sqrt(ref_energy);

  std::vector<double> raw =
      (x.data.size() * ref.size() > 4u * 1000u * 1000u && ref.size() >= 16)
          ? correlate_fft(x.data, ref, n_lags)
          : correlate_direct(x.data, ref, n_lags);

  // Sliding window energy via prefix sums.
  std::vector<double> prefix(x.data.size() + 1, 0.0);
  for (size_t i = 0; i < x.data.size(); ++i)
    prefix[i + 1] = prefix[i] + std::norm(x.data[i]);

  std::vector<double> out(n_lags);
  for (size_t k = 0; k < n_lags; ++k) {
    double win = prefix[k + ref.size()] - prefix[k];
    double denom = std::sqrt(win) * ref_norm;
    out[k] = denom > 1e-300 ? std::min(1.0, raw[k] / denom) : 0.0;
  }
  return out;
}

std::vector<cplx> cp_phase_sums(const ComplexSeries& x, int fft_size,
                                int slot_len) {
  const int64_t n = static_cast<int64_t>(x.data.size());
  if (n < slot_len + fft_size)
    throw Error("cp_phase_sums: input shorter than one slot");
  const int cp_min = 9 * fft_size / 128; // shortest CP at this FFT size

  std::vector<cplx> y(static_cast<size_t>(n - fft_size));
  for (int64_t i = 0; i + fft_size < n; ++i)
    y[static_cast<size_t>(i)] =
        x.data[static_cast<size_t>(i)] *
        std::conj(x.data[static_cast<size_t>(i + fft_size)]);

  std::vector<cplx> z(static_cast<size_t>(slot_len), 0.0);
  const int64_t usable = static_cast<int64_t>(y.size()) - cp_min + 1;
  for (int64_t start = 0; start + slot_len <= usable; start += slot_len) {
    for (int s = 0; s < slot_len; ++s) {
      cplx acc = 0.0;
      for (int i = 0; i < cp_min; ++i)
        acc += y[static_cast<size_t>(start + s + i)];
      z[static_cast<size_t>(s)] += acc;
    }
  }
  return z;
}

std::vector<double> cp_metric(const ComplexSeries& x, int fft_size,
                              int slot_len) {
  std::vector<cplx> z = cp_phase_sums(x, fft_size, slot_len);
  std::vector<double> out(z.size());
  double mean = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    out[i] = std::abs(z[i]);
    mean += out[i];
  }
  mean /= static_cast<double>(z.size());
  if (mean > 1e-300)
    for (auto& v : out) v /= mean;
  return out;
}

double mean_power(std::span<const cplx> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc / static_cast<double>(x.size());
}

} // namespace ltescan::dsp
