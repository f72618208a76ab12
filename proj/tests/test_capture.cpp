#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ltescan/capture.hpp"

using namespace ltescan;

namespace {

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ltescan_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string with_checksum(const std::string& body) {
  uint8_t cs = 0;
  for (char c : body) cs ^= static_cast<uint8_t>(c);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "*%02X", cs);
  return "$" + body + buf;
}

} // namespace

TEST_CASE("RMC conversion applies DD + MM/60 and sign rules") {
  const std::string body =
      "GPRMC,120000.00,A,3546.0210,N,07840.5000,W,12.5,0.0,100826,,";
  GpsFix fix = parse_rmc(with_checksum(body));
  CHECK(fix.valid);
  CHECK(fix.latitude_deg == doctest::Approx(35.767017).epsilon(1e-6));
  CHECK(fix.longitude_deg == doctest::Approx(-78.675).epsilon(1e-9));
  CHECK(fix.speed_knots == doctest::Approx(12.5));
}

TEST_CASE("RMC status V marks the fix invalid") {
  const std::string body =
      "GPRMC,120000.00,V,3546.0210,N,07840.5000,W,0.0,0.0,100826,,";
  GpsFix fix = parse_rmc(with_checksum(body));
  CHECK_FALSE(fix.valid);
}

TEST_CASE("RMC zero coordinates parse to the origin") {
  const std::string body =
      "GPRMC,000000.00,A,0000.0000,N,00000.0000,E,0.0,0.0,010100,,";
  GpsFix fix = parse_rmc(with_checksum(body));
  CHECK(fix.latitude_deg == 0.0);
  CHECK(fix.longitude_deg == 0.0);
}

TEST_CASE("RMC field count and checksum are enforced") {
  CHECK_THROWS_AS(parse_rmc(with_checksum("GPRMC,120000.00,A,3546.0210,N")),
                  ParseError);
  // checksum corrupted
  std::string s = with_checksum(
      "GPRMC,120000.00,A,3546.0210,N,07840.5000,W,0.0,0.0,100826,,");
  s.back() = s.back() == '0' ? '1' : '0';
  CHECK_THROWS_AS(parse_rmc(s), ParseError);
  // but tolerated when the recorder stripped checksums and checking is off
  NmeaOptions lax{false};
  CHECK_NOTHROW(parse_rmc(
      "$GPRMC,120000.00,A,3546.0210,N,07840.5000,W,0.0,0.0,100826,,", lax));
  CHECK_THROWS_AS(
      parse_rmc("$GPRMC,120000.00,A,3546.0210,N,07840.5000,W,0.0,0.0,100826,,"),
      ParseError);
}

TEST_CASE("RMC serialize/parse keeps coordinates to 1e-6 degrees") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> lat(-89.9, 89.9), lon(-179.9, 179.9),
      kn(0.0, 80.0);
  for (int i = 0; i < 200; ++i) {
    GpsFix fix;
    fix.time_utc = 1.7e9 + i;
    fix.latitude_deg = lat(rng);
    fix.longitude_deg = lon(rng);
    fix.speed_knots = kn(rng);
    fix.valid = true;
    GpsFix back = parse_rmc(serialize_rmc(fix));
    CHECK(std::abs(back.latitude_deg - fix.latitude_deg) < 1e-6);
    CHECK(std::abs(back.longitude_deg - fix.longitude_deg) < 1e-6);
    CHECK(back.valid == fix.valid);
  }
}

TEST_CASE("IQ text capture: 160000 rows at 2 MHz is 80 ms") {
  const std::string path = temp_path("cap_text.iq");
  IqCapture cap;
  cap.sample_rate_hz = 2e6;
  cap.center_freq_hz = 739e6;
  cap.samples.resize(160000);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& v : cap.samples) v = cplx(g(rng), g(rng));
  cap.duration_ms = 80.0;
  save_iq_capture(path, cap);

  CaptureMeta meta;
  meta.sample_rate_hz = 2e6;
  meta.center_freq_hz = 739e6;
  IqCapture in = load_iq_capture(path, meta);
  CHECK(in.duration_ms == doctest::Approx(80.0));
  REQUIRE(in.samples.size() == cap.samples.size());
  for (size_t i = 0; i < 1000; ++i) CHECK(in.samples[i] == cap.samples[i]);
}

TEST_CASE("IQ binary sidecar round trips float32 data") {
  const std::string path = temp_path("cap.bin");
  IqCapture cap;
  cap.sample_rate_hz = 1.92e6;
  cap.samples.resize(4096);
  std::mt19937_64 rng(2);
  std::normal_distribution<float> g;
  for (auto& v : cap.samples) v = cplx(g(rng), g(rng)); // exact float values
  cap.duration_ms = 1000.0 * 4096 / 1.92e6;
  save_iq_capture(path, cap);
  CaptureMeta meta;
  meta.sample_rate_hz = 1.92e6;
  IqCapture in = load_iq_capture(path, meta);
  REQUIRE(in.samples.size() == cap.samples.size());
  for (size_t i = 0; i < in.samples.size(); ++i)
    CHECK(in.samples[i] == cap.samples[i]);
}

TEST_CASE("IQ loader rejects empty and malformed files") {
  const std::string path = temp_path("empty.iq");
  std::ofstream(path).close();
  CaptureMeta meta;
  meta.sample_rate_hz = 2e6;
  CHECK_THROWS_AS(load_iq_capture(path, meta), Error);

  const std::string bad = temp_path("bad.iq");
  std::ofstream out(bad);
  out << "0.1,0.2\nhello,world\n";
  out.close();
  CHECK_THROWS_WITH_AS(load_iq_capture(bad, meta),
                       doctest::Contains("row 2"), ParseError);
}

TEST_CASE("session assembly merges rotated GPS files in time order") {
  std::vector<GpsFix> log1, log2;
  for (int i = 0; i < 5; ++i) {
    GpsFix f;
    f.time_utc = 100.0 + i;
    f.valid = true;
    log1.push_back(f);
  }
  for (int i = 0; i < 5; ++i) {
    GpsFix f;
    f.time_utc = 105.0 + i;
    f.valid = true;
    log2.push_back(f);
  }
  IqCapture cap;
  cap.sample_rate_hz = 1.92e6;
  cap.samples.resize(1920);
  cap.duration_ms = 1.0;
  cap.start_time = 101.0;
  CaptureSession s = assemble_session({cap}, {log2, log1});
  REQUIRE(s.fixes.size() == 10);
  for (size_t i = 1; i < s.fixes.size(); ++i)
    CHECK(s.fixes[i].time_utc >= s.fixes[i - 1].time_utc);
  CHECK_FALSE(s.no_gps_warning);
}

TEST_CASE("session with no GPS carries a warning flag") {
  IqCapture cap;
  cap.sample_rate_hz = 1.92e6;
  cap.samples.resize(1920);
  cap.duration_ms = 1.0;
  CaptureSession s = assemble_session({cap}, {});
  CHECK(s.no_gps_warning);
  CHECK(s.fixes.empty());
}

TEST_CASE("overlapping captures are rejected with the offender named") {
  IqCapture a, b;
  a.sample_rate_hz = b.sample_rate_hz = 1.92e6;
  a.samples.resize(19200);
  b.samples.resize(19200);
  a.duration_ms = b.duration_ms = 10.0;
  a.start_time = 100.0;
  b.start_time = 100.005; // inside a's 10 ms
  CHECK_THROWS_WITH_AS(assemble_session({a, b}, {}),
                       doctest::Contains("overlapping"), Error);
}

TEST_CASE("hop plan entries must be positive") {
  IqCapture cap;
  cap.sample_rate_hz = 1.92e6;
  cap.samples.resize(1920);
  cap.duration_ms = 1.0;
  CHECK_THROWS_AS(assemble_session({cap}, {}, {739e6, -1.0}), Error);
  CaptureSession s = assemble_session({cap}, {}, {739e6, 2132e6});
  CHECK(s.hop_plan_hz.size() == 2);
}

TEST_CASE("manifest drives session assembly") {
  const std::string dir =
      (std::filesystem::temp_directory_path() / "ltescan_tests").string();
  const std::string iq = temp_path("m_cap.iq");
  IqCapture cap;
  cap.sample_rate_hz = 1.92e6;
  cap.samples.assign(19200, cplx(0.01, 0.0));
  cap.duration_ms = 10.0;
  save_iq_capture(iq, cap);

  const std::string nmea = temp_path("m_gps.nmea");
  {
    std::ofstream out(nmea);
    GpsFix f;
    f.time_utc = parse_time_utc("2026-08-10T12:00:00Z");
    f.latitude_deg = 35.5;
    f.longitude_deg = -78.5;
    f.valid = true;
    out << serialize_rmc(f) << "\n";
  }
  const std::string mpath = temp_path("session.manifest");
  {
    std::ofstream out(mpath);
    out << "version = 1\n"
        << "rotation_s = 60\n"
        << "hop_plan_hz = 739e6, 2132e6\n"
        << "[captures]\n"
        << "m_cap.iq, 739e6, 1.92e6, 2026-08-10T12:00:00Z\n"
        << "[gps]\n"
        << "m_gps.nmea\n";
  }
  (void)dir;
  CaptureSession s = assemble_session(load_manifest(mpath));
  REQUIRE(s.captures.size() == 1);
  CHECK(s.captures[0].center_freq_hz == doctest::Approx(739e6));
  REQUIRE(s.fixes.size() == 1);
  CHECK(s.hop_plan_hz.size() == 2);

  auto fix = nearest_fix(s.fixes, s.captures[0].mid_time(), 1.0);
  REQUIRE(fix);
  CHECK(fix->latitude_deg == doctest::Approx(35.5));
  CHECK_FALSE(nearest_fix(s.fixes, s.captures[0].mid_time() + 10.0, 1.0));
}

TEST_CASE("capture duration/length invariant holds within one sample") {
  IqCapture cap;
  cap.sample_rate_hz = 2e6;
  cap.samples.resize(160000);
  cap.duration_ms = 80.0;
  CHECK_NOTHROW(validate_capture(cap));
  cap.duration_ms = 81.0;
  CHECK_THROWS_AS(validate_capture(cap), Error);
}
