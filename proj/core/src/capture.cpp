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
#include "ltescan/capture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace ltescan {

namespace {

uint8_t nmea_checksum(std::string_view body) {
  uint8_t cs = 0;
  for (char c : body) cs ^= static_cast<uint8_t>(c);
  return cs;
}

// "DDMM.MMMM" (lat) or "DDDMM.MMMM" (lon) -> decimal degrees, unsigned.
double dm_to_degrees(const std::string& text, int deg_digits,
                     const char* field) {
  if (text.size() < static_cast<size_t>(deg_digits) + 2)
    throw ParseError(std::string("RMC: coordinate too short in ") + field);
  for (int i = 0; i < deg_digits; ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError(std::string("RMC: bad degree digits in ") + field);
  double deg = std::stod(text.substr(0, deg_digits));
  double minutes = parse_double_strict(text.substr(deg_digits));
  if (minutes < 0.0 || minutes >= 60.0)
    throw ParseError(std::string("RMC: minutes out of range in ") + field);
  return deg + minutes / 60.0;
}

} // namespace

GpsFix parse_rmc(std::string_view sentence, const NmeaOptions& opt) {
  std::string line = trim(sentence);
  if (line.empty() || line[0] != '$')
    throw ParseError("RMC: sentence must start with '$'");

  // Split off "*hh" checksum (Table-style field 12).
  std::string body = line.substr(1);
  std::string cs_text;
  size_t star = body.rfind('*');
  if (star != std::string::npos) {
    cs_text = body.substr(star + 1);
    body = body.substr(0, star);
  }
  if (opt.require_checksum) {
    if (cs_text.size() != 2)
      throw ParseError("RMC: missing checksum");
    unsigned given = std::stoul(cs_text, nullptr, 16);
    if (nmea_checksum(body) != static_cast<uint8_t>(given))
      throw ParseError("RMC: checksum mismatch");
  }

  std::vector<std::string> f = split(body, ',');
  if (!(f[0] == "GPRMC" || f[0] == "GNRMC" || f[0] == "GLRMC"))
    throw ParseError("RMC: not an RMC protocol header: " + f[0]);
  if (f.size() != 12)
    throw ParseError("RMC: expected 12 fields, got " +
                     std::to_string(f.size()));

  GpsFix fix;
  const std::string& status = f[2];
  if (status == "A") fix.valid = true;
  else if (status == "V") fix.valid = false;
  else throw ParseError("RMC: bad status field: " + status);

  if (!f[3].empty() && !f[4].empty()) {
    double lat = dm_to_degrees(f[3], 2, "latitude");
    if (f[4] == "S") lat = -lat;
    else if (f[4] != "N") throw ParseError("RMC: bad N/S indicator");
    if (lat < -90.0 || lat > 90.0) throw ParseError("RMC: latitude out of range");
    fix.latitude_deg = lat;
  }
  if (!f[5].empty() && !f[6].empty()) {
    double lon = dm_to_degrees(f[5], 3, "longitude");
    if (f[6] == "W") lon = -lon;
    else if (f[6] != "E") throw ParseError("RMC: bad E/W indicator");
    if (lon < -180.0 || lon > 180.0)
      throw ParseError("RMC: longitude out of range");
    fix.longitude_deg = lon;
  }
  if (!f[7].empty()) {
    fix.speed_knots = parse_double_strict(f[7]);
    if (fix.speed_knots < 0.0) throw ParseError("RMC: negative speed");
  }

  // UTC hhmmss.sss plus date ddmmyy.
  if (f[1].size() >= 6 && f[9].size() == 6) {
    int hh = std::stoi(f[1].substr(0, 2));
    int mi = std::stoi(f[1].substr(2, 2));
    double ss = parse_double_strict(f[1].substr(4));
    int dd = std::stoi(f[9].substr(0, 2));
    int mo = std::stoi(f[9].substr(2, 2));
    int yy = std::stoi(f[9].substr(4, 2));
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%09.6f",
                  2000 + yy, mo, dd, hh, mi, ss);
    fix.time_utc = parse_time_utc(buf);
  }
  return fix;
}

std::string serialize_rmc(const GpsFix& fix) {
  double lat = std::abs(fix.latitude_deg);
  double lon = std::abs(fix.longitude_deg);
  int lat_d = static_cast<int>(lat);
  int lon_d = static_cast<int>(lon);
  double lat_m = (lat - lat_d) * 60.0;
  double lon_m = (lon - lon_d) * 60.0;

  // Recover hhmmss.ss and ddmmyy from the unix time.
  std::string iso = format_time_utc(fix.time_utc); // YYYY-MM-DDThh:mm:ss.sssZ
  std::string date = iso.substr(8, 2) + iso.substr(5, 2) + iso.substr(2, 2);
  std::string hms = iso.substr(11, 2) + iso.substr(14, 2) + iso.substr(17, 6);

  char body[128];
  std::snprintf(body, sizeof(body),
                "GPRMC,%s,%c,%02d%08.5f,%c,%03d%08.5f,%c,%.2f,0.0,%s,,",
                hms.c_str(), fix.valid ? 'A' : 'V', lat_d, lat_m,
                fix.latitude_deg < 0 ? 'S' : 'N', lon_d, lon_m,
                fix.longitude_deg < 0 ? 'W' : 'E', fix.speed_knots,
                date.c_str());
  char out[144];
  std::snprintf(out, sizeof(out), "$%s*%02X", body, nmea_checksum(body));
  return out;
}

std::vector<GpsFix> load_nmea_file(const std::string& path,
                                   const NmeaOptions& opt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open NMEA file: " + path);
  std::vector<GpsFix> fixes;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.find("RMC,") == std::string::npos) continue;
    try {
      fixes.push_back(parse_rmc(t, opt));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return fixes;
}

void validate_capture(const IqCapture& c) {
  if (c.sample_rate_hz <= 0.0) throw Error("capture: sample rate must be positive");
  if (c.center_freq_hz < 0.0) throw Error("capture: negative center frequency");
  double expected = c.sample_rate_hz * c.duration_ms / 1000.0;
  if (std::abs(static_cast<double>(c.samples.size()) - expected) > 1.0)
    throw Error("capture: sample count inconsistent with duration");
}

IqFormat iq_format_for_path(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".bin" || ext == ".f32" || ext == ".iqbin") return IqFormat::Binary;
  return IqFormat::Text;
}

IqCapture load_iq_capture(const std::string& path, const CaptureMeta& meta) {
  return load_iq_capture(path, meta, iq_format_for_path(path));
}

IqCapture load_iq_capture(const std::string& path, const CaptureMeta& meta,
                          IqFormat format) {
  IqCapture cap;
  cap.sample_rate_hz = meta.sample_rate_hz;
  cap.center_freq_hz = meta.center_freq_hz;
  cap.start_time = meta.start_time;
  if (meta.sample_rate_hz <= 0.0)
    throw Error("load_iq_capture: sample rate required");

  if (format == IqFormat::Binary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open IQ file: " + path);
    in.seekg(0, std::ios::end);
    auto bytes = static_cast<size_t>(in.tellg());
    in.seekg(0);
    if (bytes == 0) throw Error("empty IQ file: " + path);
    if (bytes % 8 != 0)
      throw Error("binary IQ file not a whole number of float32 pairs: " + path);
    size_t n = bytes / 8;
    std::vector<float> raw(2 * n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw Error("short read on IQ file: " + path);
    cap.samples.resize(n);
    for (size_t i = 0; i < n; ++i)
      cap.samples[i] = cplx(raw[2 * i], raw[2 * i + 1]);
  } else {
    std::ifstream in(path);
    if (!in) throw Error("cannot open IQ file: " + path);
    std::string line;
    size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      // Accept comma- or whitespace-separated I,Q columns.
      for (auto& ch : t)
        if (ch == ',' || ch == '\t') ch = ' ';
      char* end = nullptr;
      double i_val = std::strtod(t.c_str(), &end);
      if (end == t.c_str())
        throw ParseError(path + ": non-numeric row " + std::to_string(row));
      char* end2 = nullptr;
      double q_val = std::strtod(end, &end2);
      if (end2 == end)
        throw ParseError(path + ": missing Q column at row " + std::to_string(row));
      while (*end2 == ' ') ++end2;
      if (*end2 != '\0')
        throw ParseError(path + ": trailing junk at row " + std::to_string(row));
      cap.samples.emplace_back(i_val, q_val);
    }
    if (cap.samples.empty()) throw Error("empty IQ file: " + path);
  }

  double derived_ms = 1000.0 * static_cast<double>(cap.samples.size()) /
                      cap.sample_rate_hz;
  cap.duration_ms = meta.duration_ms > 0.0 ? meta.duration_ms : derived_ms;
  validate_capture(cap);
  return cap;
}

void save_iq_capture(const std::string& path, const IqCapture& capture) {
  save_iq_capture(path, capture, iq_format_for_path(path));
}

void save_iq_capture(const std::string& path, const IqCapture& capture,
                     IqFormat format) {
  if (format == IqFormat::Binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write IQ file: " + path);
    std::vector<float> raw(2 * capture.samples.size());
    for (size_t i = 0; i < capture.samples.size(); ++i) {
      raw[2 * i] = static_cast<float>(capture.samples[i].real());
      raw[2 * i + 1] = static_cast<float>(capture.samples[i].imag());
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
  } else {
    std::ofstream out(path);
    if (!out) throw Error("cannot write IQ file: " + path);
    char buf[96];
    for (const auto& s : capture.samples) {
      // 17 significant digits round-trip a double exactly
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s.real(), s.imag());
      out << buf;
    }
  }
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  auto dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };

  Manifest m;
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      if (section != "captures" && section != "gps")
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) {
      size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key == "rotation_s") m.rotation_s = parse_double_strict(value);
      else if (key == "hop_plan_hz") {
        for (const auto& tok : split(value, ','))
          m.hop_plan_hz.push_back(parse_double_strict(tok));
      } else if (key == "nmea_checksum") {
        m.require_checksum = (value == "strict" || value == "on" || value == "1");
      } else if (key == "version") {
        // accepted for forward compatibility
      } else {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": unknown key '" + key + "'");
      }
    } else if (section == "captures") {
      // path, center_freq_hz, sample_rate_hz, start_time [, format]
      auto f = split(t, ',');
      if (f.size() < 4)
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": capture rows need path, freq, rate, start_time");
      ManifestEntry e;
      e.path = resolve(trim(f[0]));
      e.meta.center_freq_hz = parse_double_strict(f[1]);
      e.meta.sample_rate_hz = parse_double_strict(f[2]);
      e.meta.start_time = parse_time_utc(f[3]);
      if (f.size() >= 5) {
        std::string fmt = trim(f[4]);
        if (fmt == "text") e.format = IqFormat::Text;
        else if (fmt == "binary") e.format = IqFormat::Binary;
        else if (!fmt.empty())
          throw ParseError(path + ":" + std::to_string(lineno) +
                           ": unknown format '" + fmt + "'");
      }
      m.captures.push_back(std::move(e));
    } else { // gps
      m.gps_paths.push_back(resolve(t));
    }
  }
  return m;
}

namespace {

void check_overlaps(const std::vector<IqCapture>& captures) {
  std::string offenders;
  for (size_t i = 1; i < captures.size(); ++i) {
    const auto& prev = captures[i - 1];
    double prev_end = prev.start_time + prev.duration_ms / 1000.0;
    if (captures[i].start_time < prev_end - 1e-9) {
      offenders += (offenders.empty() ? "" : ", ") +
                   format_time_utc(captures[i].start_time);
    }
  }
  if (!offenders.empty())
    throw Error("assemble_session: overlapping captures at " + offenders);
}

} // namespace

CaptureSession assemble_session(const std::vector<IqCapture>& captures,
                                const std::vector<std::vector<GpsFix>>& gps_logs,
                                const std::vector<double>& hop_plan_hz) {
  CaptureSession s;
  for (double f : hop_plan_hz)
    if (f <= 0.0) throw Error("assemble_session: hop plan entries must be positive");
  s.hop_plan_hz = hop_plan_hz;
  s.captures = captures;
  std::stable_sort(s.captures.begin(), s.captures.end(),
                   [](const IqCapture& a, const IqCapture& b) {
                     return a.start_time < b.start_time;
                   });
  check_overlaps(s.captures);

  for (const auto& log : gps_logs)
    s.fixes.insert(s.fixes.end(), log.begin(), log.end());
  std::stable_sort(s.fixes.begin(), s.fixes.end(),
                   [](const GpsFix& a, const GpsFix& b) {
                     return a.time_utc < b.time_utc;
                   });
  s.no_gps_warning = s.fixes.empty();
  return s;
}

CaptureSession assemble_session(const Manifest& manifest) {
  std::vector<IqCapture> captures;
  captures.reserve(manifest.captures.size());
  for (const auto& e : manifest.captures) {
    IqCapture c = e.format ? load_iq_capture(e.path, e.meta, *e.format)
                           : load_iq_capture(e.path, e.meta);
    captures.push_back(std::move(c));
  }
  std::vector<std::vector<GpsFix>> logs;
  NmeaOptions opt{manifest.require_checksum};
  for (const auto& p : manifest.gps_paths) logs.push_back(load_nmea_file(p, opt));
  CaptureSession s = assemble_session(captures, logs, manifest.hop_plan_hz);
  s.rotation_s = manifest.rotation_s;
  return s;
}

std::optional<GpsFix> nearest_fix(const std::vector<GpsFix>& fixes,
                                  double time_utc, double max_dt_s) {
  std::optional<GpsFix> best;
  double best_dt = max_dt_s;
  for (const auto& f : fixes) {
    if (!f.valid) continue;
    double dt = std::abs(f.time_utc - time_utc);
    if (dt <= best_dt) {
      best_dt = dt;
      best = f;
    }
  }
  return best;
}

} // namespace ltescan
