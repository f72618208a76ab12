#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "ltescan/phy/coding.hpp"
#include "ltescan/phy/dci.hpp"
#include "ltescan/phy/params.hpp"

using namespace ltescan;
using namespace ltescan::phy;

namespace {

Bits random_bits(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bits b(n);
  for (auto& v : b) v = static_cast<uint8_t>(rng() & 1u);
  return b;
}

Bits ascii_bits(const std::string& s) {
  Bits b;
  for (char c : s)
    for (int i = 7; i >= 0; --i)
      b.push_back(static_cast<uint8_t>((c >> i) & 1));
  return b;
}

uint32_t bits_to_uint(const Bits& b) {
  uint32_t v = 0;
  for (uint8_t bit : b) v = (v << 1) | bit;
  return v;
}

// Independent byte-table CRC for cross-checking the bit-serial one.
uint32_t table_crc(const Bits& bits, uint32_t poly, int n) {
  std::vector<uint32_t> table(256);
  const uint32_t top = 1u << (n - 1);
  const uint32_t mask = (n == 32) ? 0xFFFFFFFF : ((1u << n) - 1);
  for (uint32_t byte = 0; byte < 256; ++byte) {
    uint32_t reg = byte << (n - 8);
    for (int i = 0; i < 8; ++i)
      reg = (reg & top) ? ((reg << 1) ^ poly) & mask : (reg << 1) & mask;
    table[byte] = reg;
  }
  // Pad to whole bytes on the right with zeros, then divide; padding zeros
  // would change the CRC, so process bit-by-byte only on exact multiples.
  REQUIRE(bits.size() % 8 == 0);
  uint32_t reg = 0;
  for (size_t i = 0; i < bits.size(); i += 8) {
    uint32_t byte = 0;
    for (size_t j = 0; j < 8; ++j) byte = (byte << 1) | bits[i + j];
    reg = ((reg << 8) & mask) ^ table[((reg >> (n - 8)) ^ byte) & 0xFF];
  }
  return reg;
}

} // namespace

TEST_CASE("crc16 matches the published check value") {
  // CRC-16/XMODEM of the ASCII digits 1..9
  CHECK(bits_to_uint(crc16(ascii_bits("123456789"))) == 0x31C3);
}

TEST_CASE("crc16 and crc24a agree with an independent table implementation") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Bits data = random_bits(8 * (8 + seed), seed);
    CHECK(bits_to_uint(crc16(data)) == table_crc(data, 0x1021, 16));
    CHECK(bits_to_uint(crc24a(data)) == table_crc(data, 0x864CFB, 24));
  }
}

TEST_CASE("pbch crc masks separate the three port counts") {
  const auto& m1 = pbch_crc_mask(1);
  const auto& m2 = pbch_crc_mask(2);
  const auto& m4 = pbch_crc_mask(4);
  CHECK(m1 != m2);
  CHECK(m1 != m4);
  CHECK(m2 != m4);
  CHECK_THROWS_AS(pbch_crc_mask(3), Error);
}

TEST_CASE("tail-biting conv encoder matches a reference shift register") {
  // Independent implementation: explicit register array.
  Bits data = random_bits(40, 7);
  auto d = conv_encode_tbcc(data);
  std::array<int, 6> reg;
  for (int i = 0; i < 6; ++i) reg[static_cast<size_t>(i)] = data[40 - 1 - i];
  for (size_t k = 0; k < data.size(); ++k) {
    const int b = data[k];
    const int d0 = b ^ reg[1] ^ reg[2] ^ reg[4] ^ reg[5];
    const int d1 = b ^ reg[0] ^ reg[1] ^ reg[2] ^ reg[5];
    const int d2 = b ^ reg[0] ^ reg[1] ^ reg[3] ^ reg[5];
    CHECK(d[0][k] == d0);
    CHECK(d[1][k] == d1);
    CHECK(d[2][k] == d2);
    for (int i = 5; i > 0; --i) reg[static_cast<size_t>(i)] = reg[i - 1];
    reg[0] = b;
  }
  // tail-biting: the register ends where it started
  for (int i = 0; i < 6; ++i) CHECK(reg[static_cast<size_t>(i)] == data[40 - 1 - i]);
}

TEST_CASE("wrap-around Viterbi decodes clean and noisy blocks") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.35);
  for (int trial = 0; trial < 50; ++trial) {
    Bits data = random_bits(40, 100 + static_cast<uint64_t>(trial));
    auto d = conv_encode_tbcc(data);
    std::array<Llrs, 3> llrs;
    for (int s = 0; s < 3; ++s) {
      llrs[static_cast<size_t>(s)].resize(40);
      for (size_t k = 0; k < 40; ++k)
        llrs[static_cast<size_t>(s)][k] =
            (d[static_cast<size_t>(s)][k] ? -1.0 : 1.0) + noise(rng);
    }
    CHECK(conv_decode_tbcc(llrs) == data);
  }
}

TEST_CASE("conv rate matching order covers every coded bit") {
  for (int d_len : {40, 56, 61, 128}) {
    auto order = conv_rate_match_order(d_len);
    REQUIRE(static_cast<int>(order.size()) == 3 * d_len);
    std::set<int32_t> seen(order.begin(), order.end());
    CHECK(static_cast<int>(seen.size()) == 3 * d_len);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == 3 * d_len - 1);
  }
}

TEST_CASE("conv rate match and dematch are inverse under repetition") {
  Bits data = random_bits(40, 13);
  auto d = conv_encode_tbcc(data);
  Bits e = conv_rate_match(d, 0, 1920);
  std::array<Llrs, 3> acc;
  for (auto& s : acc) s.assign(40, 0.0);
  Llrs soft(e.size());
  for (size_t i = 0; i < e.size(); ++i) soft[i] = e[i] ? -1.0 : 1.0;
  conv_rate_dematch(soft, 0, acc);
  for (int s = 0; s < 3; ++s)
    for (size_t k = 0; k < 40; ++k) {
      const double v = acc[static_cast<size_t>(s)][k];
      CHECK(std::abs(v) > 0.0);
      CHECK((v < 0.0) == (d[static_cast<size_t>(s)][k] == 1));
    }
  // a segment picks up exactly where the stream index says
  Bits seg = conv_rate_match(d, 480, 480);
  Bits whole(e.begin() + 480, e.begin() + 960);
  CHECK(seg == whole);
}

TEST_CASE("turbo interleaver parameters exist and permute for every size") {
  auto sizes = turbo_block_sizes();
  CHECK(sizes.size() == 188);
  CHECK(sizes.front() == 40);
  CHECK(sizes.back() == 6144);
  int prev = 0;
  for (int k : sizes) {
    CHECK(k > prev);
    prev = k;
    auto pi = turbo_interleaver(k);
    std::vector<uint8_t> hit(static_cast<size_t>(k), 0);
    for (int v : pi) {
      REQUIRE(v >= 0);
      REQUIRE(v < k);
      hit[static_cast<size_t>(v)] ^= 1;
    }
    bool all = true;
    for (uint8_t h : hit) all = all && h == 1;
    CHECK(all); // bijective
  }
  CHECK_FALSE(valid_turbo_block_size(41));
  CHECK(valid_turbo_block_size(6144));
}

TEST_CASE("turbo encode/decode round trip, clean and noisy") {
  std::mt19937_64 rng(17);
  for (int k : {40, 64, 104, 256, 1088}) {
    Bits data = random_bits(static_cast<size_t>(k), 200 + static_cast<uint64_t>(k));
    auto d = turbo_encode(data);
    REQUIRE(d[0].size() == static_cast<size_t>(k + 4));
    std::array<Llrs, 3> llrs;
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int s = 0; s < 3; ++s) {
      llrs[static_cast<size_t>(s)].resize(static_cast<size_t>(k + 4));
      for (size_t i = 0; i < llrs[static_cast<size_t>(s)].size(); ++i)
        llrs[static_cast<size_t>(s)][i] =
            (d[static_cast<size_t>(s)][i] ? -2.0 : 2.0) + noise(rng);
    }
    Bits out = turbo_decode(llrs, 5);
    CHECK(out == data);
  }
}

TEST_CASE("turbo circular buffer k0 depends on the redundancy version") {
  auto buf = turbo_circular_buffer(64 + 4);
  std::set<int> k0s;
  for (int rv = 0; rv < 4; ++rv) k0s.insert(buf.k0(rv));
  CHECK(k0s.size() == 4);
  int data_positions = 0;
  for (int32_t v : buf.w_source) data_positions += v >= 0 ? 1 : 0;
  CHECK(data_positions == 3 * 68);
}

TEST_CASE("turbo rate matching round trips across redundancy versions") {
  const int k = 256;
  Bits data = random_bits(k, 23);
  auto d = turbo_encode(data);
  for (int rv : {0, 1, 2, 3}) {
    Bits e = turbo_rate_match(d, rv, 2 * 3 * (k + 4));
    std::array<Llrs, 3> acc;
    for (auto& s : acc) s.assign(static_cast<size_t>(k + 4), 0.0);
    Llrs soft(e.size());
    for (size_t i = 0; i < e.size(); ++i) soft[i] = e[i] ? -1.0 : 1.0;
    turbo_rate_dematch(soft, rv, acc);
    for (int s = 0; s < 3; ++s)
      for (size_t i = 0; i < acc[static_cast<size_t>(s)].size(); ++i)
        CHECK((acc[static_cast<size_t>(s)][i] < 0.0) ==
              (d[static_cast<size_t>(s)][i] == 1));
  }
}

TEST_CASE("every SI transport block size is a valid turbo payload") {
  for (int i_tbs = 0; i_tbs <= 26; ++i_tbs)
    for (int n_prb : {2, 3})
      CHECK(valid_turbo_block_size(tbs_format1a(i_tbs, n_prb) + 24));
  for (int idx = 0; idx < 32; ++idx)
    CHECK(valid_turbo_block_size(tbs_format1c(idx) + 24));
  CHECK_THROWS_AS(tbs_format1a(27, 2), Error);
  CHECK_THROWS_AS(tbs_format1a(0, 4), Error);
  CHECK_THROWS_AS(tbs_format1c(32), Error);
}

TEST_CASE("type-2 RIV encoding round trips every allocation") {
  for (int nrb : {6, 15, 25, 50, 75, 100}) {
    for (int start = 0; start < nrb; ++start)
      for (int len = 1; start + len <= nrb; ++len) {
        int riv = riv_encode(nrb, start, len);
        int s2 = -1, l2 = -1;
        riv_decode(nrb, riv, s2, l2);
        REQUIRE(s2 == start);
        REQUIRE(l2 == len);
      }
  }
  CHECK_THROWS_AS(riv_encode(6, 5, 3), Error);
}

TEST_CASE("distributed VRB map is a slot-wise bijection onto real PRBs") {
  for (int nrb : {6, 15, 25, 50, 100}) {
    const int n_vrb = n_vrb_dl_gap1(nrb);
    std::vector<int> all(static_cast<size_t>(n_vrb));
    std::iota(all.begin(), all.end(), 0);
    for (int parity : {0, 1}) {
      auto prbs = vrb_to_prb_gap1(all, nrb, parity);
      std::set<int> uniq(prbs.begin(), prbs.end());
      CHECK(static_cast<int>(uniq.size()) == n_vrb);
      for (int p : uniq) {
        CHECK(p >= 0);
        CHECK(p < nrb);
      }
    }
  }
}

TEST_CASE("dci pack/unpack round trips both formats") {
  for (int nrb : {6, 15, 25, 50, 100}) {
    DciMessage dci;
    dci.format = DciFormat::Format1A;
    dci.localized = true;
    dci.riv = riv_encode(nrb, 1, 3);
    dci.mcs_index = 5;
    dci.n_prb_1a = 3;
    dci.rv_field = 2;
    Bits p = dci_pack(dci, nrb);
    CHECK(static_cast<int>(p.size()) == dci_payload_size(DciFormat::Format1A, nrb));
    DciMessage back = dci_unpack(p, DciFormat::Format1A, nrb, kSiRnti);
    CHECK(back.riv == dci.riv);
    CHECK(back.mcs_index == 5);
    CHECK(back.n_prb_1a == 3);
    CHECK(back.rv_field == 2);
    CHECK(back.tbs_bits == tbs_format1a(5, 3));
    REQUIRE(back.prb_slot0.size() == 3);
    CHECK(back.prb_slot0.front() == 1);
    CHECK(back.prb_slot0 == back.prb_slot1);

    DciMessage c;
    c.format = DciFormat::Format1C;
    const int units = n_vrb_dl_gap1(nrb) / dvrb_step(nrb);
    c.riv = riv_encode(units, 0, std::min(2, units));
    c.mcs_index = 9;
    Bits pc = dci_pack(c, nrb);
    CHECK(static_cast<int>(pc.size()) == dci_payload_size(DciFormat::Format1C, nrb));
    DciMessage cb = dci_unpack(pc, DciFormat::Format1C, nrb, kSiRnti);
    CHECK(cb.tbs_bits == tbs_format1c(9));
    CHECK_FALSE(cb.localized);
    CHECK(cb.prb_slot0.size() == cb.prb_slot1.size());
    CHECK_FALSE(cb.prb_slot0.empty());
  }
}

TEST_CASE("dci crc attach/check honors the RNTI mask") {
  Bits payload = random_bits(27, 31);
  Bits coded = dci_attach_crc(payload, kSiRnti);
  CHECK(dci_check_crc(coded, kSiRnti));
  CHECK_FALSE(dci_check_crc(coded, 0x1234));
  coded[3] ^= 1;
  CHECK_FALSE(dci_check_crc(coded, kSiRnti));
}

TEST_CASE("llr clamp saturates at the fixed-point bound") {
  CHECK(clamp_llr(1000.0) == doctest::Approx(127.0 / 8.0));
  CHECK(clamp_llr(-1000.0) == doctest::Approx(-127.0 / 8.0));
  CHECK(clamp_llr(0.5) == doctest::Approx(0.5));
}
