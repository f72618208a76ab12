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
#include <functional>
#include <limits>

#include "ltescan/phy/coding.hpp"

namespace ltescan::phy {

namespace {

// 64-state trellis, generators 133/171/165 octal. State bit 5 is the most
// recent input.
struct Trellis {
  uint8_t next[64][2];
  uint8_t out[64][2]; // 3 output bits packed as (d0<<2)|(d1<<1)|d2

  Trellis() {
    for (int s = 0; s < 64; ++s) {
      const int s5 = (s >> 5) & 1, s4 = (s >> 4) & 1, s3 = (s >> 3) & 1,
                s2 = (s >> 2) & 1, s1 = (s >> 1) & 1, s0 = s & 1;
      for (int b = 0; b < 2; ++b) {
        const int d0 = b ^ s4 ^ s3 ^ s1 ^ s0;
        const int d1 = b ^ s5 ^ s4 ^ s3 ^ s0;
        const int d2 = b ^ s5 ^ s4 ^ s2 ^ s0;
        next[s][b] = static_cast<uint8_t>((b << 5) | (s >> 1));
        out[s][b] = static_cast<uint8_t>((d0 << 2) | (d1 << 1) | d2);
      }
    }
  }
};

const Trellis& trellis() {
  static Trellis t;
  return t;
}

} // namespace

std::array<Bits, 3> conv_encode_tbcc(const Bits& data) {
  const size_t n = data.size();
  if (n < 6) throw Error("conv_encode_tbcc: block too short");
  const Trellis& t = trellis();

  int state = 0;
  for (int i = 0; i < 6; ++i) // tail-biting: preload with the last 6 bits
    state |= (data[n - 1 - i] & 1) << (5 - i);

  std::array<Bits, 3> d;
  for (auto& s : d) s.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const int b = data[k] & 1;
    const uint8_t o = t.out[state][b];
    d[0][k] = (o >> 2) & 1;
    d[1][k] = (o >> 1) & 1;
    d[2][k] = o & 1;
    state = t.next[state][b];
  }
  return d;
}

Bits conv_decode_tbcc(const std::array<Llrs, 3>& streams) {
  const size_t n = streams[0].size();
  if (n == 0 || streams[1].size() != n || streams[2].size() != n)
    throw Error("conv_decode_tbcc: stream size mismatch");
  const Trellis& t = trellis();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  // Branch metric: sum of llr * (1 - 2*coded_bit).
  auto branch_metric = [&](size_t k, uint8_t out) {
    const double s0 = ((out >> 2) & 1) ? -streams[0][k] : streams[0][k];
    const double s1 = ((out >> 1) & 1) ? -streams[1][k] : streams[1][k];
    const double s2 = (out & 1) ? -streams[2][k] : streams[2][k];
    return s0 + s1 + s2;
  };

  std::vector<double> metric(64, 0.0), next_metric(64);
  std::vector<uint8_t> survivors(n * 64);

  // Wrap-around decoding: two warm-up passes propagate the circular state,
  // the final pass records survivors for traceback.
  const int passes = 3;
  for (int pass = 0; pass < passes; ++pass) {
    const bool record = (pass == passes - 1);
    for (size_t k = 0; k < n; ++k) {
      std::fill(next_metric.begin(), next_metric.end(), kNegInf);
      uint8_t* surv = record ? &survivors[k * 64] : nullptr;
      for (int s = 0; s < 64; ++s) {
        const double m = metric[s];
        for (int b = 0; b < 2; ++b) {
          const int ns = t.next[s][b];
          const double cand = m + branch_metric(k, t.out[s][b]);
          if (cand > next_metric[ns]) {
            next_metric[ns] = cand;
            if (record) surv[ns] = static_cast<uint8_t>(s);
          }
        }
      }
      metric.swap(next_metric);
      // Keep metrics bounded across wrap passes.
      const double top = *std::max_element(metric.begin(), metric.end());
      for (auto& v : metric) v -= top;
    }
  }

  int state = 0;
  for (int s = 1; s < 64; ++s)
    if (metric[s] > metric[state]) state = s;

  Bits out(n);
  for (size_t k = n; k-- > 0;) {
    out[k] = static_cast<uint8_t>((state >> 5) & 1);
    state = survivors[k * 64 + static_cast<size_t>(state)];
  }
  return out;
}

} // namespace ltescan::phy
