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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ltescan/analysis.hpp"
#include "ltescan/capture.hpp"
#include "ltescan/cellsearch.hpp"
#include "ltescan/pbch.hpp"
#include "ltescan/sib1.hpp"
#include "ltescan/sib_parse.hpp"

namespace ltescan {

struct ScanOptions {
  DetectConfig detect{};
  bool try_sib1 = true;
  std::ostream* trace = nullptr; // stage-by-stage log when set
};

/// Everything learned about one cell in one capture.
struct CellScanResult {
  CellDetection detection;
  std::optional<RsrpMeasurement> rsrp;
  std::optional<MibInfo> mib;
  std::optional<int> cfi;
  std::optional<DciMessage> dci;
  std::optional<Sib1Info> sib1;
  std::optional<Ecgi> ecgi;
  int sib1_combined = 0;
  std::string status() const; // none | sync | mib | sib1
};

struct ScanResult {
  double time = 0.0;
  double freq_hz = 0.0;
  double cfo_hz = 0.0;
  std::vector<CellScanResult> cells; // strongest RSRP first
  bool coverage() const;
};

/// Full single-capture pipeline: resample to the search rate, CFO estimate
/// and correction, PSS/SSS search, MIB, then (bandwidth permitting) the
/// SIB1 chain at the native rate.
ScanResult scan_capture(const IqCapture& capture, const ScanOptions& opt = {});

// ------------------------------------------------------- record file format
// Line-delimited TSV with a versioned header; diff-able and deterministic.

std::string scan_record_header();
std::string scan_record_lines(const ScanResult& result);

/// Read a scan record file back into analytics inputs.
std::vector<DetectionRecord> read_scan_records(const std::string& path);

} // namespace ltescan
