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
#include "ltescan/phy/sequences.hpp"

#include <cmath>

#include "ltescan/dsp.hpp"
#include "ltescan/phy/params.hpp"

namespace ltescan::phy {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<uint8_t> gold_sequence(uint32_t c_init, size_t length) {
  constexpr size_t kNc = 1600;
  const size_t total = kNc + length + 31;
  std::vector<uint8_t> x1(total), x2(total);
  x1[0] = 1;
  for (int i = 0; i < 31; ++i) x2[i] = (c_init >> i) & 1u;
  for (size_t n = 0; n + 31 < total; ++n) {
    x1[n + 31] = x1[n + 3] ^ x1[n];
    x2[n + 31] = x2[n + 3] ^ x2[n + 2] ^ x2[n + 1] ^ x2[n];
  }
  std::vector<uint8_t> c(length);
  for (size_t n = 0; n < length; ++n) c[n] = x1[n + kNc] ^ x2[n + kNc];
  return c;
}

std::vector<cplx> generate_pss(int n_id2) {
  if (n_id2 < 0 || n_id2 > 2) throw Error("generate_pss: n_id2 must be 0..2");
  static constexpr int kRoots[3] = {25, 29, 34};
  const int u = kRoots[n_id2];
  std::vector<cplx> d(62);
  for (int n = 0; n < 31; ++n)
    d[n] = std::polar(1.0, -kPi * u * n * (n + 1) / 63.0);
  for (int n = 31; n < 62; ++n)
    d[n] = std::polar(1.0, -kPi * u * (n + 1) * (n + 2) / 63.0);
  return d;
}

namespace {

// The three length-31 m-sequences behind the SSS.
struct SssTables {
  int s[31], c[31], z[31]; // +/-1 valued
  SssTables() {
    uint8_t xs[31] = {0, 0, 0, 0, 1}, xc[31] = {0, 0, 0, 0, 1},
            xz[31] = {0, 0, 0, 0, 1};
    for (int i = 0; i + 5 < 31; ++i) {
      xs[i + 5] = xs[i + 2] ^ xs[i];
      xc[i + 5] = xc[i + 3] ^ xc[i];
      xz[i + 5] = xz[i + 4] ^ xz[i + 2] ^ xz[i + 1] ^ xz[i];
    }
    for (int i = 0; i < 31; ++i) {
      s[i] = 1 - 2 * xs[i];
      c[i] = 1 - 2 * xc[i];
      z[i] = 1 - 2 * xz[i];
    }
  }
};

const SssTables& sss_tables() {
  static SssTables t;
  return t;
}

} // namespace

std::vector<cplx> generate_sss(int n_id1, int n_id2, int subframe) {
  if (n_id1 < 0 || n_id1 > 167) throw Error("generate_sss: n_id1 must be 0..167");
  if (n_id2 < 0 || n_id2 > 2) throw Error("generate_sss: n_id2 must be 0..2");
  if (subframe != 0 && subframe != 5)
    throw Error("generate_sss: subframe must be 0 or 5");

  const auto& t = sss_tables();
  const int qp = n_id1 / 30;
  const int q = (n_id1 + qp * (qp + 1) / 2) / 30;
  const int mp = n_id1 + q * (q + 1) / 2;
  const int m0 = mp % 31;
  const int m1 = (m0 + mp / 31 + 1) % 31;

  std::vector<cplx> d(62);
  for (int n = 0; n < 31; ++n) {
    const int s0 = t.s[(n + m0) % 31];
    const int s1 = t.s[(n + m1) % 31];
    const int c0 = t.c[(n + n_id2) % 31];
    const int c1 = t.c[(n + n_id2 + 3) % 31];
    const int z1m0 = t.z[(n + (m0 % 8)) % 31];
    const int z1m1 = t.z[(n + (m1 % 8)) % 31];
    if (subframe == 0) {
      d[2 * n] = s0 * c0;
      d[2 * n + 1] = s1 * c1 * z1m0;
    } else {
      d[2 * n] = s1 * c0;
      d[2 * n + 1] = s0 * c1 * z1m1;
    }
  }
  return d;
}

std::vector<cplx> pss_time_reference(int n_id2) {
  const int n = kSearchFftSize;
  std::vector<cplx> d = generate_pss(n_id2);
  std::vector<cplx> bins(n, 0.0);
  // d(0..30) on negative frequencies -31..-1, d(31..61) on +1..+31.
  for (int i = 0; i < 31; ++i) bins[static_cast<size_t>(n - 31 + i)] = d[i];
  for (int i = 0; i < 31; ++i) bins[static_cast<size_t>(1 + i)] = d[31 + i];
  std::vector<cplx> body = dsp::fft_unitary(bins, true);

  const int cp = cp_length(n, 6);
  std::vector<cplx> out(static_cast<size_t>(cp + n));
  for (int i = 0; i < cp; ++i) out[i] = body[static_cast<size_t>(n - cp + i)];
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(cp + i)] = body[i];

  double energy = 0.0;
  for (const auto& v : out) energy += std::norm(v);
  const double scale = 1.0 / std::sqrt(energy);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<int> crs_symbols_for_port(int port) {
  switch (port) {
    case 0:
    case 1: return {0, 4};
    case 2:
    case 3: return {1};
    default: throw Error("crs_symbols_for_port: port must be 0..3");
  }
}

int crs_shift(int pci, int port, int symbol_in_slot, int slot_index) {
  int v = 0;
  switch (port) {
    case 0: v = (symbol_in_slot == 0) ? 0 : 3; break;
    case 1: v = (symbol_in_slot == 0) ? 3 : 0; break;
    case 2: v = 3 * (slot_index % 2); break;
    case 3: v = 3 + 3 * (slot_index % 2); break;
    default: throw Error("crs_shift: port must be 0..3");
  }
  return (v + pci % 6) % 6;
}

std::vector<CrsRe> generate_crs(int pci, int port, int nrb, int slot_index) {
  if (pci < 0 || pci >= kPciCount) throw Error("generate_crs: bad PCI");
  const int ns = slot_index % kSlotsPerFrame;
  std::vector<CrsRe> out;
  for (int l : crs_symbols_for_port(port)) {
    const uint32_t c_init =
        1024u * static_cast<uint32_t>(7 * (ns + 1) + l + 1) *
            static_cast<uint32_t>(2 * pci + 1) +
        static_cast<uint32_t>(2 * pci) + 1u; // +1: normal CP
    // Sequence is defined for the 110-RB reference; grab the centered cut.
    const int m_offset = kMaxNrbDl - nrb;
    auto c = gold_sequence(c_init, 2u * static_cast<size_t>(2 * nrb + m_offset));
    const int shift = crs_shift(pci, port, l, ns);
    for (int m = 0; m < 2 * nrb; ++m) {
      const int mp = m + m_offset;
      const double re = (1.0 - 2.0 * c[2 * mp]) / std::sqrt(2.0);
      const double im = (1.0 - 2.0 * c[2 * mp + 1]) / std::sqrt(2.0);
      out.push_back({6 * m + shift, l, cplx(re, im)});
    }
  }
  return out;
}

} // namespace ltescan::phy
