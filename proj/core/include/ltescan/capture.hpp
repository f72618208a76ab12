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
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltescan/dsp.hpp"
#include "ltescan/util.hpp"

namespace ltescan {

/// Timed complex baseband recording. Samples are dimensionless full-scale.
struct IqCapture {
  std::vector<cplx> samples;
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  double start_time = 0.0; // unix seconds, UTC
  double duration_ms = 0.0;

  dsp::ComplexSeries series() const { return {samples, sample_rate_hz}; }
  double mid_time() const { return start_time + duration_ms / 2000.0; }
};

/// Checks the length/rate/duration consistency invariant (within one sample).
void validate_capture(const IqCapture& c);

struct GpsFix {
  double time_utc = 0.0;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double speed_knots = 0.0;
  bool valid = false;
};

struct NmeaOptions {
  bool require_checksum = true;
};

/// Parse one RMC sentence (12 comma-separated fields, trailing *hh checksum).
/// Status "V" yields valid=false; structural problems throw ParseError.
GpsFix parse_rmc(std::string_view sentence, const NmeaOptions& opt = {});

/// Inverse of parse_rmc, good to 1e-6 degrees round-trip.
std::string serialize_rmc(const GpsFix& fix);

/// Parse every RMC sentence in a file; non-RMC sentences are skipped.
std::vector<GpsFix> load_nmea_file(const std::string& path,
                                   const NmeaOptions& opt = {});

struct CaptureMeta {
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  double start_time = 0.0;
  double duration_ms = 0.0; // 0 = derive from file length
};

enum class IqFormat { Text, Binary };

IqFormat iq_format_for_path(const std::string& path);

/// Load a two-column I,Q file (text) or interleaved float32-LE (binary).
IqCapture load_iq_capture(const std::string& path, const CaptureMeta& meta,
                          IqFormat format);
IqCapture load_iq_capture(const std::string& path, const CaptureMeta& meta);

void save_iq_capture(const std::string& path, const IqCapture& capture,
                     IqFormat format);
void save_iq_capture(const std::string& path, const IqCapture& capture);

struct CaptureSession {
  std::vector<IqCapture> captures;    // time ordered, non-overlapping
  std::vector<GpsFix> fixes;          // time ordered
  std::vector<double> hop_plan_hz;
  double rotation_s = 60.0;           // recorder file-rotation threshold
  bool no_gps_warning = false;
};

/// Session manifest: `key = value` entries followed by [captures] and [gps]
/// file tables. Relative paths resolve against the manifest directory.
struct ManifestEntry {
  std::string path;
  CaptureMeta meta;
  std::optional<IqFormat> format;
};

struct Manifest {
  std::vector<ManifestEntry> captures;
  std::vector<std::string> gps_paths;
  std::vector<double> hop_plan_hz;
  double rotation_s = 60.0;
  bool require_checksum = true;
};

Manifest load_manifest(const std::string& path);

CaptureSession assemble_session(const Manifest& manifest);
CaptureSession assemble_session(const std::vector<IqCapture>& captures,
                                const std::vector<std::vector<GpsFix>>& gps_logs,
                                const std::vector<double>& hop_plan_hz = {});

/// Nearest valid fix within `max_dt_s` of a time point, if any.
std::optional<GpsFix> nearest_fix(const std::vector<GpsFix>& fixes,
                                  double time_utc, double max_dt_s = 1.0);

} // namespace ltescan
