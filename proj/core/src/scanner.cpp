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
#include <cstdio>
#include <fstream>
#include <ostream>

#include "ltescan/scanner.hpp"

namespace ltescan {

using namespace phy;

std::string CellScanResult::status() const {
  if (sib1) return "sib1";
  if (mib) return "mib";
  return "sync";
}

bool ScanResult::coverage() const {
  for (const auto& c : cells)
    if (c.mib) return true;
  return false;
}

namespace {

void trace(const ScanOptions& opt, const std::string& line) {
  if (opt.trace) *opt.trace << line << "\n";
}

const char* phich_res_text(PhichResource r) {
  switch (r) {
    case PhichResource::OneSixth: return "1/6";
    case PhichResource::Half: return "1/2";
    case PhichResource::One: return "1";
    case PhichResource::Two: return "2";
  }
  return "?";
}

// SIB1 acquisition over every even frame in the capture, with soft
// combining across repetitions.
void try_sib1_chain(CellScanResult& cell, const dsp::ComplexSeries& native,
                    int64_t timing_native, int sfn_frame0,
                    const ScanOptions& opt) {
  const MibInfo& mib = *cell.mib;
  const CellConfig cfg{cell.detection.pci, mib.n_rb, mib.cell_ref_ports,
                       mib.phich_resource, mib.phich_duration};
  ResourceGrid grid = ofdm_demodulate(native, timing_native, mib.n_rb);
  grid.set_pci(cell.detection.pci);

  DlschSoftState state;
  for (int f = 0; f < grid.n_frames(); ++f) {
    const int sfn = (sfn_frame0 + f) % 1024;
    if (sfn % 2 != 0) continue;
    const int col0 = (f * kSlotsPerFrame + 10) * kSymbolsPerSlot; // subframe 5
    if (col0 + kSymbolsPerSubframe > grid.n_symbols()) break;

    int cfi = 0;
    try {
      cfi = decode_cfi(grid, cfg, 5, col0);
    } catch (const Error&) {
      trace(opt, "  sfn " + std::to_string(sfn) + ": unreliable CFI, skipped");
      continue;
    }
    cell.cfi = cfi;
    auto dci = blind_decode_pdcch(grid, cfg, cfi, 5, col0);
    if (!dci) {
      trace(opt, "  sfn " + std::to_string(sfn) + ": no SI grant in CFI=" +
                     std::to_string(cfi));
      continue;
    }
    cell.dci = dci;
    try {
      Llrs soft = decode_pdsch(grid, cfg, *dci, cfi, 5, col0);
      const int rv = sib1_redundancy_version(sfn);
      TransportBlock tb = decode_dlsch(soft, dci->tbs_bits, rv, &state);
      cell.sib1_combined = tb.combined_count;
      trace(opt, "  sfn " + std::to_string(sfn) + ": CFI=" +
                     std::to_string(cfi) + " DCI fmt=" +
                     (dci->format == DciFormat::Format1A ? "1A" : "1C") +
                     " tbs=" + std::to_string(dci->tbs_bits) + " rv=" +
                     std::to_string(rv) +
                     (tb.crc_ok ? " crc=ok" : " crc=fail"));
      if (!tb.crc_ok) continue;
      Sib1Info info = parse_sib1(tb.bits);
      cell.sib1 = info;
      cell.ecgi = compose_ecgi(info);
      return;
    } catch (const Error& e) {
      trace(opt, std::string("  sib1 chain: ") + e.what());
    }
  }
}

} // namespace

ScanResult scan_capture(const IqCapture& capture, const ScanOptions& opt) {
  ScanResult result;
  result.time = capture.mid_time();
  result.freq_hz = capture.center_freq_hz;

  if (capture.sample_rate_hz + 1.0 < kSearchRateHz)
    throw Error("scan_capture: sample rate below the 1.92 MS/s search rate");

  // Search always happens at 1.92 MS/s.
  dsp::ComplexSeries search = capture.series();
  if (std::abs(search.rate_hz - kSearchRateHz) > 1.0)
    search = dsp::resample(search, kSearchRateHz);

  CfoEstimate cfo = estimate_cfo(search);
  result.cfo_hz = cfo.f_offset_hz;
  trace(opt, "cfo_hz=" + std::to_string(cfo.f_offset_hz));
  dsp::ComplexSeries corrected = correct_cfo(search, cfo);

  std::vector<CellDetection> detections = detect_cells(corrected, opt.detect);
  trace(opt, "detections=" + std::to_string(detections.size()));

  for (const auto& det : detections) {
    CellScanResult cell;
    cell.detection = det;
    trace(opt, "pci=" + std::to_string(det.pci) + " peak=" +
                   std::to_string(det.peak) + " timing=" +
                   std::to_string(det.timing_offset_samples));

    ResourceGrid grid6 =
        ofdm_demodulate(corrected, det.timing_offset_samples, 6);
    grid6.set_pci(det.pci);
    auto rsrp = measure_rsrp(grid6, det.pci);
    cell.rsrp = rsrp;
    if (rsrp) trace(opt, "  rsrp_dbfs=" + std::to_string(rsrp->rsrp_dbfs));

    auto mib_res = decode_mib_sliding(grid6, det.pci);
    if (mib_res) {
      cell.mib = mib_res->mib;
      trace(opt, "  mib: nrb=" + std::to_string(mib_res->mib.n_rb) + " sfn=" +
                     std::to_string(mib_res->mib.sfn) + " ports=" +
                     std::to_string(mib_res->mib.cell_ref_ports));

      const double native_rate = sample_rate_for_nrb(mib_res->mib.n_rb);
      const bool rate_ok = capture.sample_rate_hz + 1.0 >= native_rate;
      if (opt.try_sib1 && rate_ok) {
        dsp::ComplexSeries native = capture.series();
        if (std::abs(native.rate_hz - native_rate) > 1.0)
          native = dsp::resample(native, native_rate);
        if (std::abs(cfo.f_offset_hz) > 1e-9) native = correct_cfo(native, cfo);
        const int64_t scale =
            static_cast<int64_t>(std::llround(native_rate / kSearchRateHz));
        const int64_t timing_native = det.timing_offset_samples * scale;
        const int sfn0 =
            ((mib_res->mib.sfn - mib_res->frame_index) % 1024 + 1024) % 1024;
        try {
          try_sib1_chain(cell, native, timing_native, sfn0, opt);
        } catch (const Error& e) {
          trace(opt, std::string("  sib1: ") + e.what());
        }
      } else if (opt.try_sib1 && !rate_ok) {
        trace(opt, "  sib1 skipped: capture rate below " +
                       std::to_string(native_rate));
      }
    }
    result.cells.push_back(std::move(cell));
  }

  // Strongest RSRP first (MIB-less sync hits sink to the end).
  std::stable_sort(result.cells.begin(), result.cells.end(),
                   [](const CellScanResult& a, const CellScanResult& b) {
                     const double ra = a.rsrp ? a.rsrp->rsrp_dbfs : -1e9;
                     const double rb = b.rsrp ? b.rsrp->rsrp_dbfs : -1e9;
                     if ((a.mib != std::nullopt) != (b.mib != std::nullopt))
                       return a.mib != std::nullopt;
                     return ra > rb;
                   });
  return result;
}

std::string scan_record_header() {
  return "#ltescan-scan v1\n"
         "#time_utc\tfreq_hz\tstatus\tpci\tpeak\tcfo_hz\trsrp_dbfs\tnrb\tsfn\t"
         "ports\tphich_dur\tphich_res\tcfi\tmcc\tmnc\ttac\tcid\tecgi\n";
}

std::string scan_record_lines(const ScanResult& r) {
  std::string out;
  char buf[512];
  const std::string when = format_time_utc(r.time);
  if (r.cells.empty()) {
    std::snprintf(buf, sizeof(buf),
                  "%s\t%.0f\tnone\t-\t-\t%.1f\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-"
                  "\t-\n",
                  when.c_str(), r.freq_hz, r.cfo_hz);
    return buf;
  }
  for (const auto& c : r.cells) {
    std::string rsrp = "-";
    if (c.rsrp) {
      std::snprintf(buf, sizeof(buf), "%.2f", c.rsrp->rsrp_dbfs);
      rsrp = buf;
    }
    std::string nrb = "-", sfn = "-", ports = "-", pdur = "-", pres = "-";
    if (c.mib) {
      nrb = std::to_string(c.mib->n_rb);
      sfn = std::to_string(c.mib->sfn);
      ports = std::to_string(c.mib->cell_ref_ports);
      pdur = c.mib->phich_duration == PhichDuration::Normal ? "normal"
                                                            : "extended";
      pres = phich_res_text(c.mib->phich_resource);
    }
    std::string cfi = c.cfi ? std::to_string(*c.cfi) : "-";
    std::string mcc = "-", mnc = "-", tac = "-", cid = "-", ecgi = "-";
    if (c.sib1) {
      std::snprintf(buf, sizeof(buf), "%03u", c.sib1->mcc);
      mcc = buf;
      std::snprintf(buf, sizeof(buf), "%0*u", c.sib1->mnc_digits, c.sib1->mnc);
      mnc = buf;
      std::snprintf(buf, sizeof(buf), "0x%04x", c.sib1->tac);
      tac = buf;
      std::snprintf(buf, sizeof(buf), "0x%07x", c.sib1->cid);
      cid = buf;
      ecgi = c.ecgi->canonical_text();
    }
    std::snprintf(buf, sizeof(buf),
                  "%s\t%.0f\t%s\t%d\t%.4f\t%.1f\t%s\t%s\t%s\t%s\t%s\t%s\t%s\t%"
                  "s\t%s\t%s\t%s\t%s\n",
                  when.c_str(), r.freq_hz, c.status().c_str(), c.detection.pci,
                  c.detection.peak, r.cfo_hz, rsrp.c_str(), nrb.c_str(),
                  sfn.c_str(), ports.c_str(), pdur.c_str(), pres.c_str(),
                  cfi.c_str(), mcc.c_str(), mnc.c_str(), tac.c_str(),
                  cid.c_str(), ecgi.c_str());
    out += buf;
  }
  return out;
}

std::vector<DetectionRecord> read_scan_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scan records: " + path);
  std::string line;
  if (!std::getline(in, line) || !starts_with(line, "#ltescan-scan v1"))
    throw ParseError(path + ": not a ltescan scan record file");

  std::vector<DetectionRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f.size() < 18) throw ParseError(path + ": short record line");
    const double time = parse_time_utc(f[0]);
    const double freq = parse_double_strict(f[1]);
    if (out.empty() || std::abs(out.back().time - time) > 1e-9 ||
        out.back().freq_hz != freq) {
      DetectionRecord rec;
      rec.time = time;
      rec.freq_hz = freq;
      out.push_back(rec);
    }
    const std::string& status = f[2];
    if (status == "none") continue;
    CellObservation cell;
    cell.pci = std::stoi(f[3]);
    cell.rsrp_dbfs = f[6] == "-" ? -300.0 : parse_double_strict(f[6]);
    cell.mib_ok = (status == "mib" || status == "sib1");
    if (f[17] != "-") cell.ecgi = parse_ecgi_text(f[17]);
    out.back().cells.push_back(std::move(cell));
  }
  return out;
}

} // namespace ltescan
