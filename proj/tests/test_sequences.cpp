#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "ltescan/phy/sequences.hpp"

using namespace ltescan;
using namespace ltescan::phy;

TEST_CASE("gold sequence is linear in its initializer") {
  // c(a) xor c(b) xor c(0) == c(a xor b) because x2 is linear over GF(2).
  const uint32_t a = 0x12345678, b = 0x0F0F375A;
  auto ca = gold_sequence(a, 200);
  auto cb = gold_sequence(b, 200);
  auto c0 = gold_sequence(0, 200);
  auto cx = gold_sequence(a ^ b, 200);
  for (size_t i = 0; i < 200; ++i)
    CHECK(static_cast<int>(ca[i] ^ cb[i] ^ c0[i]) == static_cast<int>(cx[i]));
}

TEST_CASE("gold sequence is balanced-ish and deterministic") {
  auto c = gold_sequence(301, 10000);
  auto c2 = gold_sequence(301, 10000);
  CHECK(c == c2);
  int ones = 0;
  for (auto b : c) ones += b;
  CHECK(std::abs(ones - 5000) < 300);
}

TEST_CASE("pss sequences are constant modulus and distinct") {
  for (int n2 = 0; n2 < 3; ++n2) {
    auto d = generate_pss(n2);
    REQUIRE(d.size() == 62);
    for (const auto& v : d) CHECK(std::abs(v) == doctest::Approx(1.0));
    CHECK(generate_pss(n2) == d); // deterministic
  }
  // pairwise normalized cross-correlation at zero lag < 0.3
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      auto da = generate_pss(a);
      auto db = generate_pss(b);
      cplx acc = 0.0;
      for (int i = 0; i < 62; ++i) acc += da[i] * std::conj(db[i]);
      CHECK(std::abs(acc) / 62.0 < 0.3);
    }
  CHECK_THROWS_AS(generate_pss(3), Error);
}

TEST_CASE("sss values are real binary and subframe variants differ") {
  auto s0 = generate_sss(10, 1, 0);
  auto s5 = generate_sss(10, 1, 5);
  REQUIRE(s0.size() == 62);
  bool all_differ = false;
  for (int i = 0; i < 62; ++i) {
    CHECK(s0[i].imag() == 0.0);
    CHECK(std::abs(std::abs(s0[i].real()) - 1.0) < 1e-12);
    if (s0[i] != s5[i]) all_differ = true;
  }
  CHECK(all_differ);
  CHECK_THROWS_AS(generate_sss(10, 1, 3), Error);
  CHECK_THROWS_AS(generate_sss(168, 0, 0), Error);
}

TEST_CASE("the full sss family has no collisions") {
  std::set<std::vector<int>> seen;
  for (int n1 = 0; n1 < 168; ++n1)
    for (int n2 = 0; n2 < 3; ++n2)
      for (int sf : {0, 5}) {
        auto s = generate_sss(n1, n2, sf);
        std::vector<int> key(62);
        for (int i = 0; i < 62; ++i) key[i] = s[i].real() > 0 ? 1 : 0;
        CHECK(seen.insert(key).second);
      }
  CHECK(seen.size() == 168u * 3u * 2u);
}

TEST_CASE("pss time reference has unit energy and a CP prefix") {
  auto ref = pss_time_reference(1);
  REQUIRE(ref.size() == 137);
  double e = 0.0;
  for (const auto& v : ref) e += std::norm(v);
  CHECK(e == doctest::Approx(1.0));
  for (int i = 0; i < 9; ++i)
    CHECK(std::abs(ref[i] - ref[128 + i]) < 1e-12); // prefix copies the tail
}

TEST_CASE("crs shift depends on pci mod 6 only") {
  // pci 7 and 1 share a shift (both are 1 mod 6)
  CHECK(crs_shift(7, 0, 0, 0) == crs_shift(1, 0, 0, 0));
  CHECK(crs_shift(7, 0, 4, 0) == crs_shift(1, 0, 4, 0));
  // ports 0 and 1 are offset by three subcarriers
  CHECK((crs_shift(0, 1, 0, 0) - crs_shift(0, 0, 0, 0) + 6) % 6 == 3);
}

TEST_CASE("crs REs sit every six subcarriers with unit-magnitude QPSK") {
  auto crs = generate_crs(7, 0, 6, 0);
  REQUIRE(crs.size() == 2u * 2u * 6u); // two symbols, 2*nrb each
  for (const auto& re : crs) {
    CHECK(std::abs(re.value) == doctest::Approx(1.0));
    CHECK(re.subcarrier % 6 == crs_shift(7, 0, re.symbol_in_slot, 0) % 6);
  }
}

TEST_CASE("crs sequences differ between pci 0 and pci 3") {
  auto a = generate_crs(0, 0, 6, 0);
  auto b = generate_crs(3, 0, 6, 0);
  REQUIRE(a.size() == b.size());
  bool differ = false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].value - b[i].value) > 1e-12) differ = true;
  CHECK(differ);
}

TEST_CASE("center window of a wide carrier carries the 6-RB crs values") {
  // The sequence is centered on the 110-RB reference, so the middle six RB
  // of a 50-RB cell must equal a 6-RB cell's CRS.
  auto wide = generate_crs(17, 0, 50, 3);
  auto narrow = generate_crs(17, 0, 6, 3);
  const int offset = (50 * 12) / 2 - 36;
  for (const auto& re : narrow) {
    bool found = false;
    for (const auto& wre : wide) {
      if (wre.symbol_in_slot != re.symbol_in_slot) continue;
      if (wre.subcarrier != re.subcarrier + offset) continue;
      found = true;
      CHECK(std::abs(wre.value - re.value) < 1e-12);
    }
    CHECK(found);
  }
}
