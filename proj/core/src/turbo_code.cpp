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
#include <functional>
#include <limits>
#include <map>

#include "ltescan/phy/coding.hpp"

namespace ltescan::phy {

namespace {

struct QppEntry {
  int k, f1, f2;
};

// Quadratic permutation polynomial parameters per block size.
constexpr QppEntry kQppTable[] = {
    {40, 3, 10},     {48, 7, 12},     {56, 19, 42},    {64, 7, 16},
    {72, 7, 18},     {80, 11, 20},    {88, 5, 22},     {96, 11, 24},
    {104, 7, 26},    {112, 41, 84},   {120, 103, 90},  {128, 15, 32},
    {136, 9, 34},    {144, 17, 108},  {152, 9, 38},    {160, 21, 120},
    {168, 101, 84},  {176, 21, 44},   {184, 57, 46},   {192, 23, 48},
    {200, 13, 50},   {208, 27, 52},   {216, 11, 36},   {224, 27, 56},
    {232, 85, 58},   {240, 29, 60},   {248, 33, 62},   {256, 15, 32},
    {264, 17, 198},  {272, 33, 68},   {280, 103, 210}, {288, 19, 36},
    {296, 19, 74},   {304, 37, 76},   {312, 19, 78},   {320, 21, 120},
    {328, 21, 82},   {336, 115, 84},  {344, 193, 86},  {352, 21, 44},
    {360, 133, 90},  {368, 81, 46},   {376, 45, 94},   {384, 23, 48},
    {392, 243, 98},  {400, 151, 40},  {408, 155, 102}, {416, 25, 52},
    {424, 51, 106},  {432, 47, 72},   {440, 91, 110},  {448, 29, 168},
    {456, 29, 114},  {464, 247, 58},  {472, 29, 118},  {480, 89, 180},
    {488, 91, 122},  {496, 157, 62},  {504, 55, 84},   {512, 31, 64},
    {528, 17, 66},   {544, 35, 68},   {560, 227, 420}, {576, 65, 96},
    {592, 19, 74},   {608, 37, 76},   {624, 41, 234},  {640, 39, 80},
    {656, 185, 82},  {672, 43, 252},  {688, 21, 86},   {704, 155, 44},
    {720, 79, 120},  {736, 139, 92},  {752, 23, 94},   {768, 217, 48},
    {784, 25, 98},   {800, 17, 80},   {816, 127, 102}, {832, 25, 52},
    {848, 239, 106}, {864, 17, 48},   {880, 137, 110}, {896, 215, 112},
    {912, 29, 114},  {928, 15, 58},   {944, 147, 118}, {960, 29, 60},
    {976, 59, 122},  {992, 65, 124},  {1008, 55, 84},  {1024, 31, 64},
    {1056, 17, 66},  {1088, 171, 204},{1120, 67, 140}, {1152, 35, 72},
    {1184, 19, 74},  {1216, 39, 76},  {1248, 19, 78},  {1280, 199, 240},
    {1312, 21, 82},  {1344, 211, 252},{1376, 21, 86},  {1408, 43, 88},
    {1440, 149, 60}, {1472, 45, 92},  {1504, 49, 846}, {1536, 71, 48},
    {1568, 13, 28},  {1600, 17, 80},  {1632, 25, 102}, {1664, 183, 104},
    {1696, 55, 954}, {1728, 127, 96}, {1760, 27, 110}, {1792, 29, 112},
    {1824, 29, 114}, {1856, 57, 116}, {1888, 45, 354}, {1920, 31, 120},
    {1952, 59, 610}, {1984, 185, 124},{2016, 113, 420},{2048, 31, 64},
    {2112, 17, 66},  {2176, 171, 136},{2240, 209, 420},{2304, 253, 216},
    {2368, 367, 444},{2432, 265, 456},{2496, 181, 468},{2560, 39, 80},
    {2624, 27, 164}, {2688, 127, 504},{2752, 143, 172},{2816, 43, 88},
    {2880, 29, 300}, {2944, 45, 92},  {3008, 157, 188},{3072, 47, 96},
    {3136, 13, 28},  {3200, 111, 240},{3264, 443, 204},{3328, 51, 104},
    {3392, 51, 212}, {3456, 451, 192},{3520, 257, 220},{3584, 57, 336},
    {3648, 313, 228},{3712, 271, 232},{3776, 179, 236},{3840, 331, 120},
    {3904, 363, 244},{3968, 375, 248},{4032, 127, 168},{4096, 31, 64},
    {4160, 33, 130}, {4224, 43, 264}, {4288, 33, 134}, {4352, 477, 408},
    {4416, 35, 138}, {4480, 233, 280},{4544, 357, 142},{4608, 337, 480},
    {4672, 37, 146}, {4736, 71, 444}, {4800, 71, 120}, {4864, 37, 152},
    {4928, 39, 462}, {4992, 127, 234},{5056, 39, 158}, {5120, 39, 80},
    {5184, 31, 96},  {5248, 113, 902},{5312, 41, 166}, {5376, 251, 336},
    {5440, 43, 170}, {5504, 21, 86},  {5568, 43, 174}, {5632, 45, 176},
    {5696, 45, 178}, {5760, 161, 120},{5824, 89, 182}, {5888, 323, 184},
    {5952, 47, 186}, {6016, 23, 94},  {6080, 47, 190}, {6144, 263, 480},
};

const QppEntry* find_qpp(int k) {
  for (const auto& e : kQppTable)
    if (e.k == k) return &e;
  return nullptr;
}

// 8-state RSC constituent: feedback 1+D^2+D^3, parity 1+D+D^3.
// State bit 2 is the newest register cell.
inline int rsc_feedback(int state) {
  return ((state >> 1) & 1) ^ (state & 1); // r2 ^ r3
}
inline int rsc_parity(int state, int a) {
  return a ^ ((state >> 2) & 1) ^ (state & 1); // a ^ r1 ^ r3
}
inline int rsc_next(int state, int a) { return (a << 2) | (state >> 1); }

void rsc_encode(const Bits& in, Bits& sys, Bits& par, Bits& sys_tail,
                Bits& par_tail) {
  int state = 0;
  sys.resize(in.size());
  par.resize(in.size());
  for (size_t k = 0; k < in.size(); ++k) {
    const int b = in[k] & 1;
    const int a = b ^ rsc_feedback(state);
    sys[k] = static_cast<uint8_t>(b);
    par[k] = static_cast<uint8_t>(rsc_parity(state, a));
    state = rsc_next(state, a);
  }
  sys_tail.resize(3);
  par_tail.resize(3);
  for (int k = 0; k < 3; ++k) { // drive register to zero
    const int b = rsc_feedback(state);
    sys_tail[k] = static_cast<uint8_t>(b);
    par_tail[k] = static_cast<uint8_t>(rsc_parity(state, 0));
    state = rsc_next(state, 0);
  }
}

// Max-log BCJR over one constituent code. sys/par carry K+3 LLRs with the
// termination transitions at the end. Returns full posterior LLRs for the
// K data bits.
void max_log_bcjr(const Llrs& sys, const Llrs& par, size_t k_data,
                  Llrs& posterior) {
  const size_t n = sys.size(); // k_data + 3
  constexpr double kNegInf = -1e30;

  static thread_local std::vector<double> alpha, beta;
  alpha.assign((n + 1) * 8, kNegInf);
  beta.assign((n + 1) * 8, kNegInf);
  alpha[0] = 0.0;
  for (int s = 0; s < 8; ++s) beta[n * 8 + s] = kNegInf;
  beta[n * 8 + 0] = 0.0;

  auto gamma = [&](size_t k, int state, int b) {
    const int a = b ^ rsc_feedback(state);
    const int z = rsc_parity(state, a);
    double g = b ? -0.5 * sys[k] : 0.5 * sys[k];
    g += z ? -0.5 * par[k] : 0.5 * par[k];
    return g;
  };

  // Forward. During termination only the feedback-driven branch exists.
  for (size_t k = 0; k < n; ++k) {
    const bool tail = k >= k_data;
    for (int s = 0; s < 8; ++s) {
      const double a0 = alpha[k * 8 + s];
      if (a0 <= kNegInf) continue;
      for (int b = 0; b < 2; ++b) {
        if (tail && b != rsc_feedback(s)) continue;
        const int in_bit = b ^ rsc_feedback(s);
        const int ns = rsc_next(s, tail ? 0 : in_bit);
        const double cand = a0 + gamma(k, s, b);
        double& slot = alpha[(k + 1) * 8 + ns];
        if (cand > slot) slot = cand;
      }
    }
  }
  // Backward.
  for (size_t k = n; k-- > 0;) {
    const bool tail = k >= k_data;
    for (int s = 0; s < 8; ++s) {
      double best = kNegInf;
      for (int b = 0; b < 2; ++b) {
        if (tail && b != rsc_feedback(s)) continue;
        const int in_bit = b ^ rsc_feedback(s);
        const int ns = rsc_next(s, tail ? 0 : in_bit);
        const double cand = gamma(k, s, b) + beta[(k + 1) * 8 + ns];
        if (cand > best) best = cand;
      }
      beta[k * 8 + s] = best;
    }
  }

  posterior.resize(k_data);
  for (size_t k = 0; k < k_data; ++k) {
    double m0 = kNegInf, m1 = kNegInf;
    for (int s = 0; s < 8; ++s) {
      const double a0 = alpha[k * 8 + s];
      if (a0 <= kNegInf) continue;
      for (int b = 0; b < 2; ++b) {
        const int a = b ^ rsc_feedback(s);
        const int ns = rsc_next(s, a);
        const double m = a0 + gamma(k, s, b) + beta[(k + 1) * 8 + ns];
        if (b == 0) m0 = std::max(m0, m);
        else m1 = std::max(m1, m);
      }
    }
    posterior[k] = m0 - m1;
  }
}

} // namespace

bool valid_turbo_block_size(int k) { return find_qpp(k) != nullptr; }

std::vector<int> turbo_block_sizes() {
  std::vector<int> out;
  for (const auto& e : kQppTable) out.push_back(e.k);
  return out;
}

std::vector<int> turbo_interleaver(int k) {
  const QppEntry* e = find_qpp(k);
  if (!e) throw Error("turbo_interleaver: invalid block size " + std::to_string(k));
  std::vector<int> pi(static_cast<size_t>(k));
  // (f1*i + f2*i^2) mod K evaluated incrementally to stay in 64-bit range.
  int64_t x = 0;                       // f1*i + f2*i^2 mod k
  int64_t step = (e->f1 + e->f2) % k;  // delta when going i -> i+1
  for (int i = 0; i < k; ++i) {
    pi[static_cast<size_t>(i)] = static_cast<int>(x);
    x = (x + step) % k;
    step = (step + 2 * e->f2) % k;
  }
  return pi;
}

std::array<Bits, 3> turbo_encode(const Bits& data) {
  const int k = static_cast<int>(data.size());
  if (!valid_turbo_block_size(k))
    throw Error("turbo_encode: invalid block size " + std::to_string(k));
  std::vector<int> pi = turbo_interleaver(k);
  Bits interleaved(data.size());
  for (int i = 0; i < k; ++i)
    interleaved[static_cast<size_t>(i)] = data[static_cast<size_t>(pi[i])];

  Bits x, z, xt, zt, x2, z2, xt2, zt2;
  rsc_encode(data, x, z, xt, zt);
  rsc_encode(interleaved, x2, z2, xt2, zt2);

  std::array<Bits, 3> d;
  for (auto& s : d) s.resize(data.size() + 4);
  for (int i = 0; i < k; ++i) {
    d[0][i] = x[i];
    d[1][i] = z[i];
    d[2][i] = z2[i];
  }
  // Tail multiplexing keeps the three streams equal length.
  d[0][k] = xt[0]; d[0][k + 1] = zt[1]; d[0][k + 2] = xt2[0]; d[0][k + 3] = zt2[1];
  d[1][k] = zt[0]; d[1][k + 1] = xt[2]; d[1][k + 2] = zt2[0]; d[1][k + 3] = xt2[2];
  d[2][k] = xt[1]; d[2][k + 1] = zt[2]; d[2][k + 2] = xt2[1]; d[2][k + 3] = zt2[2];
  return d;
}

Bits turbo_decode(const std::array<Llrs, 3>& streams, int iterations,
                  const std::function<bool(const Bits&)>& check) {
  const size_t dlen = streams[0].size();
  if (dlen < 5 || streams[1].size() != dlen || streams[2].size() != dlen)
    throw Error("turbo_decode: stream size mismatch");
  const int k = static_cast<int>(dlen) - 4;
  std::vector<int> pi = turbo_interleaver(k);

  // Unpack tails (inverse of the encode-side multiplexing).
  const size_t ku = static_cast<size_t>(k);
  Llrs sys1(ku + 3), par1(ku + 3), sys2(ku + 3), par2(ku + 3);
  for (size_t i = 0; i < ku; ++i) {
    sys1[i] = streams[0][i];
    par1[i] = streams[1][i];
    par2[i] = streams[2][i];
  }
  sys1[ku] = streams[0][ku];     sys1[ku + 1] = streams[2][ku];
  sys1[ku + 2] = streams[1][ku + 1];
  par1[ku] = streams[1][ku];     par1[ku + 1] = streams[0][ku + 1];
  par1[ku + 2] = streams[2][ku + 1];
  sys2[ku] = streams[0][ku + 2]; sys2[ku + 1] = streams[2][ku + 2];
  sys2[ku + 2] = streams[1][ku + 3];
  par2[ku] = streams[1][ku + 2]; par2[ku + 1] = streams[0][ku + 3];
  par2[ku + 2] = streams[2][ku + 3];

  Llrs apriori1(ku, 0.0), in1(ku + 3), in2(ku + 3), post1, post2;
  Bits hard(ku);
  Bits best = hard;
  for (int it = 0; it < iterations; ++it) {
    for (size_t i = 0; i < ku; ++i) in1[i] = sys1[i] + apriori1[i];
    for (size_t i = ku; i < ku + 3; ++i) in1[i] = sys1[i];
    max_log_bcjr(in1, par1, ku, post1);

    for (size_t i = 0; i < ku; ++i) {
      const size_t p = static_cast<size_t>(pi[i]);
      in2[i] = (post1[p] - apriori1[p]); // systematic + extrinsic, interleaved
    }
    for (size_t i = ku; i < ku + 3; ++i) in2[i] = sys2[i];
    max_log_bcjr(in2, par2, ku, post2);

    for (size_t i = 0; i < ku; ++i) {
      const size_t p = static_cast<size_t>(pi[i]);
      hard[p] = post2[i] < 0.0 ? 1 : 0;
      // extrinsic of decoder 2 becomes decoder 1's prior
      apriori1[p] = post2[i] - in2[i];
    }
    best = hard;
    if (check && check(best)) break;
  }
  return best;
}

} // namespace ltescan::phy
