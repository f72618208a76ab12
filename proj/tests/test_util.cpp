#include <doctest.h>

#include "ltescan/util.hpp"

using namespace ltescan;

TEST_CASE("split and trim") {
  auto f = split("a,b,,c", ',');
  REQUIRE(f.size() == 4);
  CHECK(f[0] == "a");
  CHECK(f[2] == "");
  CHECK(trim("  x y \t") == "x y");
}

TEST_CASE("time parse and format round trip") {
  const double t = parse_time_utc("2026-08-10T12:34:56.500Z");
  CHECK(format_time_utc(t) == "2026-08-10T12:34:56.500Z");
  CHECK(parse_time_utc("123.5") == doctest::Approx(123.5));
  CHECK(parse_time_utc("1970-01-01T00:00:00Z") == doctest::Approx(0.0));
  CHECK(parse_time_utc("1970-01-02T00:00:00Z") == doctest::Approx(86400.0));
  CHECK_THROWS_AS(parse_time_utc(""), ParseError);
}

TEST_CASE("strict double parse accepts fractions") {
  CHECK(parse_double_strict("2e6") == doctest::Approx(2e6));
  CHECK(parse_double_strict("100e6/6") == doctest::Approx(100e6 / 6.0));
  CHECK_THROWS_AS(parse_double_strict("12x"), ParseError);
  CHECK_THROWS_AS(parse_double_strict("1/0"), ParseError);
}

TEST_CASE("bit writer and reader round trip") {
  BitWriter w;
  w.put_bits(0b1011, 4);
  w.put_bit(1);
  w.put_bits(0xABCD, 16);
  BitReader r(w.bits());
  CHECK(r.get_bits(4, "a") == 0b1011);
  CHECK(r.get_bit("b") == 1);
  CHECK(r.get_bits(16, "c") == 0xABCD);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(r.get_bit("past end"), ParseError);
}

TEST_CASE("byte packing is MSB first") {
  BitWriter w;
  w.put_bits(0b10100000, 8);
  w.put_bits(0b11, 2);
  auto bytes = w.to_bytes();
  REQUIRE(bytes.size() == 2);
  CHECK(bytes[0] == 0xA0);
  CHECK(bytes[1] == 0xC0);
  auto bits = bytes_to_bits(bytes);
  CHECK(bits.size() == 16);
  CHECK(bits[0] == 1);
  CHECK(bits[8] == 1);
  CHECK(bits[9] == 1);
  CHECK(bits[10] == 0);
}
