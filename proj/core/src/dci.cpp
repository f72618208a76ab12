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

#include "ltescan/phy/dci.hpp"
#include "ltescan/phy/params.hpp"

namespace ltescan::phy {

namespace {

int ceil_log2(int64_t v) {
  int bits = 0;
  int64_t cap = 1;
  while (cap < v) {
    cap <<= 1;
    ++bits;
  }
  return bits;
}

// Sizes a format-0 grant could alias; one zero bit is appended to avoid them.
constexpr int kAmbiguousSizes[] = {12, 14, 16, 20, 24, 26, 32, 40, 44, 56};

bool is_ambiguous(int size) {
  for (int s : kAmbiguousSizes)
    if (s == size) return true;
  return false;
}

int riv_bits_1a(int nrb) {
  return ceil_log2(static_cast<int64_t>(nrb) * (nrb + 1) / 2);
}

int riv_bits_1c(int nrb) {
  const int n = n_vrb_dl_gap1(nrb) / dvrb_step(nrb);
  return ceil_log2(static_cast<int64_t>(n) * (n + 1) / 2);
}

// TBS columns for N_PRB = 2 and 3 (the SI grant sizes), rows I_TBS 0..26.
constexpr int kTbs1a[27][2] = {
    {32, 56},     {56, 88},     {72, 144},    {104, 176},   {120, 208},
    {144, 224},   {176, 256},   {224, 328},   {256, 392},   {296, 456},
    {328, 504},   {376, 584},   {440, 680},   {488, 744},   {552, 840},
    {600, 904},   {632, 968},   {696, 1064},  {776, 1160},  {840, 1288},
    {904, 1384},  {1000, 1480}, {1064, 1608}, {1128, 1736}, {1192, 1800},
    {1256, 1864}, {1480, 2216},
};

constexpr int kTbs1c[32] = {40,   56,   72,   120,  136,  144,  176,  208,
                            224,  256,  280,  296,  328,  336,  392,  488,
                            552,  600,  632,  696,  776,  840,  904,  968,
                            1064, 1160, 1288, 1384, 1480, 1608, 1736, 1800};

} // namespace

int n_gap1(int nrb) {
  if (nrb <= 10) return (nrb + 1) / 2;
  if (nrb == 11) return 4;
  if (nrb <= 19) return 8;
  if (nrb <= 26) return 12;
  if (nrb <= 44) return 18;
  if (nrb <= 49) return 27;
  if (nrb <= 63) return 27;
  if (nrb <= 79) return 32;
  return 48;
}

int n_vrb_dl_gap1(int nrb) { return 2 * std::min(n_gap1(nrb), nrb - n_gap1(nrb)); }

int dvrb_step(int nrb) { return nrb < 50 ? 2 : 4; }

int dci_payload_size(DciFormat format, int nrb) {
  if (format == DciFormat::Format1A) {
    int size = 1 + 1 + riv_bits_1a(nrb) + 5 + 3 + 1 + 2 + 2;
    if (is_ambiguous(size)) ++size;
    return size;
  }
  int size = (nrb >= 50 ? 1 : 0) + riv_bits_1c(nrb) + 5;
  return size;
}

int riv_encode(int nrb_field, int start, int length) {
  if (length < 1 || start < 0 || start + length > nrb_field)
    throw Error("riv_encode: allocation outside the carrier");
  if (length - 1 <= nrb_field / 2)
    return nrb_field * (length - 1) + start;
  return nrb_field * (nrb_field - length + 1) + (nrb_field - 1 - start);
}

void riv_decode(int nrb_field, int riv, int& start, int& length) {
  const int l = riv / nrb_field;
  const int s = riv % nrb_field;
  if (l + 1 <= nrb_field - s) {
    length = l + 1;
    start = s;
  } else {
    length = nrb_field - l + 1;
    start = nrb_field - 1 - s;
  }
  if (length < 1 || start < 0 || start + length > nrb_field)
    throw Error("riv_decode: invalid RIV");
}

std::vector<int> vrb_to_prb_gap1(const std::vector<int>& vrbs, int nrb,
                                 int slot_parity) {
  const int n_vrb = n_vrb_dl_gap1(nrb);
  const int gap = n_gap1(nrb);
  const int rows = ((n_vrb + 7) / 8) * 2; // ceil(N/(4*2))*2
  const int n_null = 4 * rows - n_vrb;

  // Block interleaver: write row-major, read column-major, with the null
  // cells at the bottom of the 2nd and 4th columns.
  auto is_null = [&](int row, int col) {
    return (col == 1 || col == 3) && row >= rows - n_null / 2;
  };
  std::vector<int> even_map(static_cast<size_t>(n_vrb));
  {
    std::vector<std::vector<int>> cells(4, std::vector<int>(rows, -1));
    int w = 0;
    for (int r = 0; r < rows && w < n_vrb; ++r)
      for (int c = 0; c < 4 && w < n_vrb; ++c)
        if (!is_null(r, c)) cells[c][r] = w++;
    int p = 0;
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < rows; ++r)
        if (cells[c][r] >= 0) even_map[static_cast<size_t>(cells[c][r])] = p++;
  }

  std::vector<int> out;
  out.reserve(vrbs.size());
  for (int vrb : vrbs) {
    if (vrb < 0 || vrb >= n_vrb)
      throw Error("vrb_to_prb_gap1: VRB outside distributed range");
    int tilde = even_map[static_cast<size_t>(vrb)];
    if (slot_parity % 2 == 1) tilde = (tilde + n_vrb / 2) % n_vrb;
    const int prb = tilde < n_vrb / 2 ? tilde : tilde + gap - n_vrb / 2;
    out.push_back(prb);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int tbs_format1a(int i_tbs, int n_prb_1a) {
  if (i_tbs < 0 || i_tbs > 26) throw Error("tbs_format1a: I_TBS out of range");
  if (n_prb_1a != 2 && n_prb_1a != 3)
    throw Error("tbs_format1a: N_PRB must be 2 or 3 for SI grants");
  return kTbs1a[i_tbs][n_prb_1a - 2];
}

int tbs_format1c(int index) {
  if (index < 0 || index > 31) throw Error("tbs_format1c: index out of range");
  return kTbs1c[index];
}

Bits dci_pack(const DciMessage& dci, int nrb) {
  BitWriter w;
  if (dci.format == DciFormat::Format1A) {
    w.put_bit(1); // format 0 / 1A discriminator
    w.put_bit(dci.localized ? 0 : 1);
    w.put_bits(static_cast<uint64_t>(dci.riv), riv_bits_1a(nrb));
    w.put_bits(static_cast<uint64_t>(dci.mcs_index), 5);
    w.put_bits(static_cast<uint64_t>(dci.harq_process), 3);
    w.put_bit(dci.new_data);
    w.put_bits(static_cast<uint64_t>(dci.rv_field), 2);
    // TPC field: LSB selects N_PRB^1A 2 vs 3 for broadcast grants.
    w.put_bits(dci.n_prb_1a == 3 ? 1u : 0u, 2);
    if (is_ambiguous(static_cast<int>(w.size()))) w.put_bit(0);
  } else {
    if (nrb >= 50) w.put_bit(0); // gap-1 only
    w.put_bits(static_cast<uint64_t>(dci.riv), riv_bits_1c(nrb));
    w.put_bits(static_cast<uint64_t>(dci.mcs_index), 5);
  }
  return w.bits();
}

DciMessage dci_unpack(const Bits& payload, DciFormat format, int nrb,
                      uint16_t rnti) {
  BitReader r(payload);
  DciMessage dci;
  dci.format = format;
  dci.rnti = rnti;
  if (format == DciFormat::Format1A) {
    if (r.get_bit("dci flag") != 1)
      throw ParseError("dci_unpack: format 0 flag in a downlink search");
    dci.localized = r.get_bit("vrb flag") == 0;
    dci.riv = static_cast<int>(r.get_bits(riv_bits_1a(nrb), "riv"));
    dci.mcs_index = static_cast<int>(r.get_bits(5, "mcs"));
    dci.harq_process = static_cast<int>(r.get_bits(3, "harq"));
    dci.new_data = r.get_bit("ndi");
    dci.rv_field = static_cast<int>(r.get_bits(2, "rv"));
    const int tpc = static_cast<int>(r.get_bits(2, "tpc"));
    dci.n_prb_1a = (tpc & 1) ? 3 : 2;
    if (dci.mcs_index > 26)
      throw ParseError("dci_unpack: MCS beyond the SI TBS table");
    dci.tbs_bits = tbs_format1a(dci.mcs_index, dci.n_prb_1a);

    if (dci.localized) {
      int start = 0, len = 0;
      riv_decode(nrb, dci.riv, start, len);
      for (int i = 0; i < len; ++i) dci.prb_slot0.push_back(start + i);
      dci.prb_slot1 = dci.prb_slot0;
    } else {
      // Distributed 1A: RIV counts whole VRBs of the gap-1 range. On wide
      // carriers the field's MSB turns into the gap selector.
      if (nrb >= 50 && (dci.riv >> (riv_bits_1a(nrb) - 1)))
        throw ParseError("dci_unpack: gap-2 distributed mapping unsupported");
      const int n_vrb = n_vrb_dl_gap1(nrb);
      int start_v = 0, len_v = 0;
      riv_decode(n_vrb, dci.riv, start_v, len_v);
      std::vector<int> vrbs;
      for (int i = 0; i < len_v; ++i) vrbs.push_back(start_v + i);
      dci.prb_slot0 = vrb_to_prb_gap1(vrbs, nrb, 0);
      dci.prb_slot1 = vrb_to_prb_gap1(vrbs, nrb, 1);
    }
  } else {
    if (nrb >= 50 && r.get_bit("gap") != 0)
      throw ParseError("dci_unpack: gap-2 distributed mapping unsupported");
    dci.localized = false;
    dci.riv = static_cast<int>(r.get_bits(riv_bits_1c(nrb), "riv"));
    dci.mcs_index = static_cast<int>(r.get_bits(5, "tbs index"));
    dci.tbs_bits = tbs_format1c(dci.mcs_index);

    const int step = dvrb_step(nrb);
    const int units = n_vrb_dl_gap1(nrb) / step;
    int start_u = 0, len_u = 0;
    riv_decode(units, dci.riv, start_u, len_u);
    std::vector<int> vrbs;
    for (int i = 0; i < len_u * step; ++i) vrbs.push_back(start_u * step + i);
    dci.prb_slot0 = vrb_to_prb_gap1(vrbs, nrb, 0);
    dci.prb_slot1 = vrb_to_prb_gap1(vrbs, nrb, 1);
  }
  return dci;
}

Bits dci_attach_crc(const Bits& payload, uint16_t rnti) {
  Bits crc = crc16(payload);
  for (int i = 0; i < 16; ++i)
    crc[static_cast<size_t>(i)] ^= static_cast<uint8_t>((rnti >> (15 - i)) & 1u);
  Bits out = payload;
  out.insert(out.end(), crc.begin(), crc.end());
  return out;
}

bool dci_check_crc(const Bits& decoded, uint16_t rnti) {
  if (decoded.size() <= 16) return false;
  Bits payload(decoded.begin(), decoded.end() - 16);
  Bits expect = crc16(payload);
  for (int i = 0; i < 16; ++i)
    expect[static_cast<size_t>(i)] ^=
        static_cast<uint8_t>((rnti >> (15 - i)) & 1u);
  return std::equal(expect.begin(), expect.end(), decoded.end() - 16);
}

} // namespace ltescan::phy
