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
#include <functional>

#include "ltescan/phy/coding.hpp"

namespace ltescan::phy {

namespace {

// Inter-column permutation shared by both sub-block interleavers.
constexpr int kColPerm[32] = {0, 16, 8,  24, 4,  20, 12, 28, 2,  18, 10,
                              26, 6,  22, 14, 30, 1,  17, 9,  25, 5,  21,
                              13, 29, 3,  19, 11, 27, 7,  23, 15, 31};

// Matrix sub-block interleaver: returns, per output position k, the index
// into the d-stream or -1 for a front-padding dummy.
std::vector<int32_t> subblock_matrix(int d_len) {
  const int rows = (d_len + 31) / 32;
  const int kpi = 32 * rows;
  const int nd = kpi - d_len;
  std::vector<int32_t> v(static_cast<size_t>(kpi));
  for (int k = 0; k < kpi; ++k) {
    const int col = k / rows;
    const int row = k % rows;
    const int y = row * 32 + kColPerm[col];
    v[static_cast<size_t>(k)] = (y < nd) ? -1 : (y - nd);
  }
  return v;
}

// Shifted formula used for the third turbo stream.
std::vector<int32_t> subblock_shifted(int d_len) {
  const int rows = (d_len + 31) / 32;
  const int kpi = 32 * rows;
  const int nd = kpi - d_len;
  std::vector<int32_t> v(static_cast<size_t>(kpi));
  for (int k = 0; k < kpi; ++k) {
    const int y = (kColPerm[k / rows] + 32 * (k % rows) + 1) % kpi;
    v[static_cast<size_t>(k)] = (y < nd) ? -1 : (y - nd);
  }
  return v;
}

} // namespace

std::vector<int32_t> conv_rate_match_order(int d_len) {
  // Circular buffer is the plain concatenation v0|v1|v2; transmission skips
  // the dummies, so the order table has exactly 3*d_len entries.
  std::vector<int32_t> matrix = subblock_matrix(d_len);
  std::vector<int32_t> order;
  order.reserve(3u * static_cast<size_t>(d_len));
  for (int s = 0; s < 3; ++s)
    for (int32_t src : matrix)
      if (src >= 0) order.push_back(src + s * d_len);
  return order;
}

Bits conv_rate_match(const std::array<Bits, 3>& d, size_t first_bit,
                     size_t e_len) {
  const int d_len = static_cast<int>(d[0].size());
  std::vector<int32_t> order = conv_rate_match_order(d_len);
  Bits e(e_len);
  for (size_t k = 0; k < e_len; ++k) {
    const int32_t src = order[(first_bit + k) % order.size()];
    e[k] = d[static_cast<size_t>(src / d_len)][static_cast<size_t>(src % d_len)];
  }
  return e;
}

void conv_rate_dematch(const Llrs& e, size_t first_bit,
                       std::array<Llrs, 3>& d_acc) {
  const int d_len = static_cast<int>(d_acc[0].size());
  std::vector<int32_t> order = conv_rate_match_order(d_len);
  for (size_t k = 0; k < e.size(); ++k) {
    const int32_t src = order[(first_bit + k) % order.size()];
    double& slot =
        d_acc[static_cast<size_t>(src / d_len)][static_cast<size_t>(src % d_len)];
    slot = clamp_llr(slot + e[k]);
  }
}

int TurboCircularBuffer::k0(int rv) const {
  const int ncb = static_cast<int>(w_source.size());
  return rows * (2 * ((ncb + 8 * rows - 1) / (8 * rows)) * rv + 2);
}

TurboCircularBuffer turbo_circular_buffer(int d_len) {
  TurboCircularBuffer buf;
  buf.d_len = d_len;
  buf.rows = (d_len + 31) / 32;
  const int kpi = 32 * buf.rows;

  std::vector<int32_t> v0 = subblock_matrix(d_len);
  std::vector<int32_t> v1 = subblock_matrix(d_len);
  std::vector<int32_t> v2 = subblock_shifted(d_len);

  buf.w_source.assign(3u * static_cast<size_t>(kpi), -1);
  for (int k = 0; k < kpi; ++k) {
    if (v0[k] >= 0) buf.w_source[static_cast<size_t>(k)] = v0[k];
    if (v1[k] >= 0)
      buf.w_source[static_cast<size_t>(kpi + 2 * k)] = v1[k] + d_len;
    if (v2[k] >= 0)
      buf.w_source[static_cast<size_t>(kpi + 2 * k + 1)] = v2[k] + 2 * d_len;
  }
  return buf;
}

Bits turbo_rate_match(const std::array<Bits, 3>& d, int rv, size_t e_len) {
  const int d_len = static_cast<int>(d[0].size());
  TurboCircularBuffer buf = turbo_circular_buffer(d_len);
  const size_t ncb = buf.w_source.size();
  Bits e(e_len);
  size_t j = static_cast<size_t>(buf.k0(rv));
  for (size_t k = 0; k < e_len;) {
    const int32_t src = buf.w_source[j % ncb];
    ++j;
    if (src < 0) continue;
    e[k++] = d[static_cast<size_t>(src / d_len)][static_cast<size_t>(src % d_len)];
  }
  return e;
}

void turbo_rate_dematch(const Llrs& e, int rv, std::array<Llrs, 3>& d_acc) {
  const int d_len = static_cast<int>(d_acc[0].size());
  TurboCircularBuffer buf = turbo_circular_buffer(d_len);
  const size_t ncb = buf.w_source.size();
  size_t j = static_cast<size_t>(buf.k0(rv));
  for (size_t k = 0; k < e.size();) {
    const int32_t src = buf.w_source[j % ncb];
    ++j;
    if (src < 0) continue;
    double& slot =
        d_acc[static_cast<size_t>(src / d_len)][static_cast<size_t>(src % d_len)];
    slot = clamp_llr(slot + e[k]);
    ++k;
  }
}

} // namespace ltescan::phy
