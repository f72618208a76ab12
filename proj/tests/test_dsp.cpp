#include <doctest.h>

#include <cmath>
#include <random>

#include "ltescan/dsp.hpp"

using namespace ltescan;
using dsp::ComplexSeries;

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexSeries tone(double freq_hz, double rate_hz, size_t n, double amp = 1.0) {
  ComplexSeries s;
  s.rate_hz = rate_hz;
  s.data.resize(n);
  for (size_t i = 0; i < n; ++i)
    s.data[i] = std::polar(amp, 2.0 * kPi * freq_hz * static_cast<double>(i) /
                                    rate_hz);
  return s;
}

ComplexSeries noise(double rate_hz, size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
  ComplexSeries s;
  s.rate_hz = rate_hz;
  s.data.resize(n);
  for (auto& v : s.data) v = cplx(g(rng), g(rng));
  return s;
}

// Mean phase increment of a clean tone gives its frequency to well under a
// hertz over long records.
double tone_freq_hz(const ComplexSeries& s, size_t skip = 64) {
  cplx acc = 0.0;
  for (size_t i = skip + 1; i + skip < s.data.size(); ++i)
    acc += s.data[i] * std::conj(s.data[i - 1]);
  return std::arg(acc) * s.rate_hz / (2.0 * kPi);
}

double mean_amplitude(const ComplexSeries& s, size_t skip = 64) {
  double acc = 0.0;
  size_t n = 0;
  for (size_t i = skip; i + skip < s.data.size(); ++i, ++n)
    acc += std::abs(s.data[i]);
  return acc / static_cast<double>(n);
}

} // namespace

TEST_CASE("rational ratio reduction") {
  auto r = dsp::rational_ratio(1.92e6 / 2.0e6);
  CHECK(r.num == 24);
  CHECK(r.den == 25);
  r = dsp::rational_ratio(15.36e6 / (100e6 / 6.0));
  CHECK(r.num == 576);
  CHECK(r.den == 625);
  CHECK_THROWS_AS(dsp::rational_ratio(kPi / 2.0), Error);
}

TEST_CASE("resample length arithmetic 2 MHz to 1.92 MHz") {
  ComplexSeries x = noise(2.0e6, 160000, 1);
  ComplexSeries y = dsp::resample(x, 1.92e6);
  CHECK(y.data.size() == 153600);
  CHECK(y.rate_hz == doctest::Approx(1.92e6));
}

TEST_CASE("resample identity when rates match") {
  ComplexSeries x = noise(2.0e6, 1000, 2);
  ComplexSeries y = dsp::resample(x, 2.0e6);
  REQUIRE(y.data.size() == x.data.size());
  for (size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("resample preserves a 100 kHz tone in frequency and amplitude") {
  ComplexSeries x = tone(100e3, 2.0e6, 160000);
  ComplexSeries y = dsp::resample(x, 1.92e6);
  CHECK(std::abs(tone_freq_hz(y) - 100e3) < 1.0);
  const double amp_db = 20.0 * std::log10(mean_amplitude(y));
  CHECK(std::abs(amp_db) < 0.5);
}

TEST_CASE("resample round trip through a rational pair keeps frequency") {
  ComplexSeries x = tone(250e3, 2.0e6, 100000);
  ComplexSeries mid = dsp::resample(x, 1.92e6);
  ComplexSeries back = dsp::resample(mid, 2.0e6);
  CHECK(std::abs(tone_freq_hz(back) - 250e3) < 1.0);
}

TEST_CASE("resample upsamples too") {
  ComplexSeries x = tone(100e3, 1.92e6, 96000);
  ComplexSeries y = dsp::resample(x, 15.36e6);
  CHECK(y.data.size() == 96000u * 8u);
  CHECK(std::abs(tone_freq_hz(y) - 100e3) < 1.0);
}

TEST_CASE("sliding correlation finds an embedded reference") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.05);
  ComplexSeries x = noise(1.92e6, 8192, 4);
  for (auto& v : x.data) v *= 0.05;
  std::vector<cplx> ref(137);
  std::normal_distribution<double> gr(0.0, 1.0);
  for (auto& v : ref) v = cplx(gr(rng), gr(rng));
  for (size_t i = 0; i < ref.size(); ++i) x.data[4096 + i] += ref[i];

  auto corr = dsp::sliding_correlate(x, ref);
  size_t arg = 0;
  for (size_t i = 1; i < corr.size(); ++i)
    if (corr[i] > corr[arg]) arg = i;
  CHECK(arg == 4096);
  CHECK(corr[arg] > 0.9);
  CHECK(corr[arg] <= 1.0);
}

TEST_CASE("sliding correlation of zeros is zero") {
  ComplexSeries x;
  x.rate_hz = 1.92e6;
  x.data.assign(4000, cplx(0.0));
  std::vector<cplx> ref(64, cplx(1.0));
  auto corr = dsp::sliding_correlate(x, ref);
  for (double v : corr) CHECK(v == 0.0);
}

TEST_CASE("impulse reference tracks the envelope") {
  ComplexSeries x = noise(1.92e6, 2048, 5);
  x.data[777] *= 25.0;
  std::vector<cplx> ref = {cplx(1.0)};
  auto corr = dsp::sliding_correlate(x, ref);
  size_t arg = 0;
  for (size_t i = 1; i < corr.size(); ++i)
    if (corr[i] > corr[arg]) arg = i;
  CHECK(arg == 777);
  // single-sample window: normalized correlation is exactly 1 everywhere
  for (double v : corr) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sliding correlation invariant under a global phase rotation") {
  ComplexSeries x = noise(1.92e6, 4096, 6);
  std::vector<cplx> ref(x.data.begin() + 1000, x.data.begin() + 1137);
  auto base = dsp::sliding_correlate(x, ref);
  ComplexSeries rot = x;
  const cplx phase = std::polar(1.0, 1.2345);
  for (auto& v : rot.data) v *= phase;
  auto rotated = dsp::sliding_correlate(rot, ref);
  for (size_t i = 0; i < base.size(); ++i)
    CHECK(rotated[i] == doctest::Approx(base[i]).epsilon(1e-9));
}

TEST_CASE("FFT and direct correlation paths agree") {
  // Big enough to push sliding_correlate onto the FFT path.
  ComplexSeries x = noise(1.92e6, 40000, 7);
  std::vector<cplx> ref(x.data.begin() + 23456, x.data.begin() + 23456 + 137);
  auto corr = dsp::sliding_correlate(x, ref);
  // Direct evaluation at a few lags.
  double ref_energy = 0.0;
  for (const auto& v : ref) ref_energy += std::norm(v);
  for (size_t lag : {0u, 1234u, 23456u, 39000u}) {
    cplx acc = 0.0;
    double win = 0.0;
    for (size_t m = 0; m < ref.size(); ++m) {
      acc += x.data[lag + m] * std::conj(ref[m]);
      win += std::norm(x.data[lag + m]);
    }
    const double expect = std::abs(acc) / std::sqrt(win * ref_energy);
    CHECK(corr[lag] == doctest::Approx(expect).epsilon(1e-6));
  }
  size_t arg = 0;
  for (size_t i = 1; i < corr.size(); ++i)
    if (corr[i] > corr[arg]) arg = i;
  CHECK(arg == 23456);
}

TEST_CASE("cp metric rejects white noise") {
  // No phase alignment at the CP spacing: no peak above 3x the median.
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ComplexSeries x = noise(1.92e6, 6 * 960 + 128, 100 + trial);
    auto metric = dsp::cp_metric(x);
    std::vector<double> sorted = metric;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double peak = *std::max_element(metric.begin(), metric.end());
    if (peak > 3.0 * median) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("cp metric invariant under amplitude scaling") {
  ComplexSeries x = noise(1.92e6, 5000, 11);
  auto a = dsp::cp_metric(x);
  for (auto& v : x.data) v *= 7.5;
  auto b = dsp::cp_metric(x);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
}

TEST_CASE("cp metric errors on short input") {
  ComplexSeries x = noise(1.92e6, 500, 12);
  CHECK_THROWS_AS(dsp::cp_metric(x), Error);
}

TEST_CASE("unitary FFT satisfies Parseval") {
  ComplexSeries x = noise(1.0, 128, 13);
  auto spec = dsp::fft_unitary(x.data, false);
  double et = 0.0, ef = 0.0;
  for (const auto& v : x.data) et += std::norm(v);
  for (const auto& v : spec) ef += std::norm(v);
  CHECK(ef == doctest::Approx(et).epsilon(1e-12));
  auto back = dsp::fft_unitary(spec, true);
  for (size_t i = 0; i < back.size(); ++i)
    CHECK(std::abs(back[i] - x.data[i]) < 1e-12);
}
