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
#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "ltescan/cli.hpp"
#include "ltescan/scanner.hpp"

namespace ltescan::cli {

namespace {

std::vector<std::string> default_cell_dbs(const std::vector<std::string>& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("LTESCAN_CELL_DB"))
    return {std::string(env)};
  return {};
}

DownlinkConfig config_from_kv(
    const std::vector<std::pair<std::string, std::string>>& kv,
    const std::string& where) {
  DownlinkConfig cfg;
  auto to_int = [&](const std::string& v) {
    return static_cast<int>(std::strtol(v.c_str(), nullptr, 0));
  };
  for (const auto& [key, value] : kv) {
    if (key == "pci") cfg.pci = to_int(value);
    else if (key == "nrb") cfg.n_rb = to_int(value);
    else if (key == "sfn0") cfg.sfn0 = to_int(value);
    else if (key == "frames") cfg.n_frames = to_int(value);
    else if (key == "ports") cfg.cell_ref_ports = to_int(value);
    else if (key == "cfi") cfg.cfi = to_int(value);
    else if (key == "phich_duration") {
      if (value == "normal") cfg.phich_duration = phy::PhichDuration::Normal;
      else if (value == "extended")
        cfg.phich_duration = phy::PhichDuration::Extended;
      else throw ParseError(where + ": phich_duration is normal|extended");
    } else if (key == "phich_resource") {
      if (value == "1/6") cfg.phich_resource = phy::PhichResource::OneSixth;
      else if (value == "1/2") cfg.phich_resource = phy::PhichResource::Half;
      else if (value == "1") cfg.phich_resource = phy::PhichResource::One;
      else if (value == "2") cfg.phich_resource = phy::PhichResource::Two;
      else throw ParseError(where + ": phich_resource is 1/6|1/2|1|2");
    } else if (key == "si_format") {
      if (value == "1A") cfg.si_format = DciFormat::Format1A;
      else if (value == "1C") cfg.si_format = DciFormat::Format1C;
      else throw ParseError(where + ": si_format is 1A|1C");
    } else if (key == "si_localized") cfg.si_localized = to_int(value) != 0;
    else if (key == "si_mcs") cfg.si_mcs = to_int(value);
    else if (key == "si_n_prb_1a") cfg.si_n_prb_1a = to_int(value);
    else if (key == "si_alloc_start") cfg.si_alloc_start = to_int(value);
    else if (key == "si_alloc_len") cfg.si_alloc_len = to_int(value);
    else if (key == "si_agg_level") cfg.si_agg_level = to_int(value);
    else if (key == "si_cce_start") cfg.si_cce_start = to_int(value);
    else if (key == "mcc") cfg.sib1.mcc = static_cast<uint16_t>(to_int(value));
    else if (key == "mnc") {
      cfg.sib1.mnc = static_cast<uint16_t>(to_int(value));
      cfg.sib1.mnc_digits = value.size() == 3 ? 3 : 2;
    } else if (key == "tac") cfg.sib1.tac = static_cast<uint16_t>(to_int(value));
    else if (key == "cid") cfg.sib1.cid = static_cast<uint32_t>(std::strtoul(value.c_str(), nullptr, 0));
    else if (key == "fill_seed") cfg.fill_seed = std::strtoull(value.c_str(), nullptr, 0);
    else if (key == "fill_unused") cfg.fill_unused = to_int(value) != 0;
    else if (key == "center_freq_hz") cfg.center_freq_hz = parse_double_strict(value);
    else if (key == "start_time") cfg.start_time = parse_time_utc(value);
    else throw ParseError(where + ": unknown key '" + key + "'");
  }
  return cfg;
}

} // namespace

DownlinkConfig parse_downlink_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open downlink config: " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected key = value");
    kv.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return config_from_kv(kv, path);
}

namespace {

int cmd_scan(const std::string& manifest_path, const std::string& out_path,
             int max_cells, bool no_sib1, int threads, bool verbose,
             std::ostream& out, std::ostream& err) {
  Manifest manifest = load_manifest(manifest_path);
  CaptureSession session = assemble_session(manifest);
  if (session.no_gps_warning)
    err << "warning: session has no GPS fixes; geospatial joins disabled\n";

  ScanOptions opt;
  opt.detect.max_cells = max_cells;
  opt.try_sib1 = !no_sib1;
  if (verbose) opt.trace = &err;

  const size_t n = session.captures.size();
  std::vector<ScanResult> results(n);
  std::vector<std::string> failures(n);
  std::atomic<size_t> next{0};
  const int n_threads = std::max(
      1, std::min<int>(threads, static_cast<int>(n)));
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        results[i] = scan_capture(session.captures[i], opt);
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw Error("cannot write: " + out_path);
    sink = &file;
  }
  *sink << scan_record_header();
  int rc = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) {
      err << "capture " << i << ": " << failures[i] << "\n";
      rc = 1;
      continue;
    }
    *sink << scan_record_lines(results[i]);
  }
  return rc;
}

int cmd_decode(const std::string& in_path, double rate, double freq,
               const std::string& format, bool sib1, bool verbose,
               const std::string& dump_per, std::ostream& out,
               std::ostream& err) {
  CaptureMeta meta;
  meta.sample_rate_hz = rate;
  meta.center_freq_hz = freq;
  IqCapture cap =
      format.empty()
          ? load_iq_capture(in_path, meta)
          : load_iq_capture(in_path, meta,
                            format == "binary" ? IqFormat::Binary
                                               : IqFormat::Text);
  ScanOptions opt;
  opt.try_sib1 = sib1;
  if (verbose) opt.trace = &err;
  ScanResult res = scan_capture(cap, opt);
  out << scan_record_header() << scan_record_lines(res);

  if (!dump_per.empty()) {
    for (const auto& cell : res.cells)
      if (cell.sib1) {
        write_per_file(dump_per, cell.sib1->raw_bits);
        err << "wrote SIB1 payload to " << dump_per << "\n";
        break;
      }
  }
  return res.coverage() ? 0 : 2;
}

int cmd_analyze(const std::string& scan_path, const std::string& manifest_path,
                const std::vector<std::string>& gps_paths,
                const std::vector<std::string>& db_paths,
                const std::string& county_path,
                const std::string& thresholds_text,
                const std::string& bins_text, double max_gap,
                const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  std::vector<DetectionRecord> records = read_scan_records(scan_path);

  std::vector<GpsFix> fixes;
  if (!manifest_path.empty()) {
    CaptureSession session = assemble_session(load_manifest(manifest_path));
    fixes = session.fixes;
  }
  for (const auto& p : gps_paths) {
    auto more = load_nmea_file(p);
    fixes.insert(fixes.end(), more.begin(), more.end());
  }
  std::sort(fixes.begin(), fixes.end(),
            [](const GpsFix& a, const GpsFix& b) {
              return a.time_utc < b.time_utc;
            });

  std::optional<CellDatabase> db;
  auto dbs = default_cell_dbs(db_paths);
  if (!dbs.empty()) db = CellDatabase::load_all(dbs);
  else
    err << "warning: no cell database; distance statistics omitted\n";

  AnalysisOptions opt;
  if (!thresholds_text.empty()) {
    opt.thresholds_db.clear();
    for (const auto& tok : split(thresholds_text, ','))
      opt.thresholds_db.push_back(parse_double_strict(tok));
  }
  if (!bins_text.empty()) {
    for (const auto& tok : split(bins_text, ',')) {
      auto kv = split(tok, '=');
      if (kv.size() != 2)
        throw ParseError("--bins wants rsrp=5,dist=500,vel=2 style entries");
      const std::string key = trim(kv[0]);
      const double v = parse_double_strict(kv[1]);
      if (key == "rsrp") opt.rsrp_bin_db = v;
      else if (key == "dist") opt.dist_bin_m = v;
      else if (key == "vel") opt.vel_bin_mps = v;
      else throw ParseError("--bins: unknown axis '" + key + "'");
    }
  }
  opt.max_gap_s = max_gap;

  std::vector<CountyRegion> counties;
  if (!county_path.empty()) counties = load_county_file(county_path);

  auto samples = build_drive_samples(records, fixes,
                                     db ? &*db : nullptr);
  auto written = write_analysis_tables(samples, counties, opt, out_dir);
  for (const auto& p : written) out << p << "\n";
  return 0;
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 double rate, double cfo, double snr, int64_t delay,
                 double gain, uint64_t seed, const std::string& manifest_path,
                 std::ostream& out, std::ostream& err) {
  (void)err;
  DownlinkConfig cfg = parse_downlink_config(config_path);
  IqCapture cap = generate_downlink(cfg);

  ImpairmentSpec spec;
  spec.cfo_hz = cfo;
  spec.snr_db = snr;
  spec.delay_samples = delay;
  spec.flat_gain = gain;
  if (cfo != 0.0 || std::isfinite(snr) || delay != 0 || gain != 1.0)
    cap = impair(cap, spec, seed);

  if (rate > 0.0 && std::abs(rate - cap.sample_rate_hz) > 1.0) {
    dsp::ComplexSeries s = dsp::resample(cap.series(), rate);
    cap.samples = std::move(s.data);
    cap.sample_rate_hz = rate;
    cap.duration_ms =
        1000.0 * static_cast<double>(cap.samples.size()) / rate;
  }
  save_iq_capture(out_path, cap);
  out << "wrote " << cap.samples.size() << " samples @ " << cap.sample_rate_hz
      << " Hz to " << out_path << "\n";

  if (!manifest_path.empty()) {
    std::ofstream mf(manifest_path);
    if (!mf) throw Error("cannot write manifest: " + manifest_path);
    mf << "version = 1\n[captures]\n"
       << out_path << ", " << cap.center_freq_hz << ", "
       << cap.sample_rate_hz << ", " << format_time_utc(cap.start_time)
       << "\n";
    out << "wrote manifest to " << manifest_path << "\n";
  }
  return 0;
}

int cmd_gps_parse(const std::string& in_path, const std::string& out_path,
                  bool no_checksum, std::ostream& out, std::ostream& err) {
  (void)err;
  NmeaOptions opt{!no_checksum};
  auto fixes = load_nmea_file(in_path, opt);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw Error("cannot write: " + out_path);
    sink = &file;
  }
  *sink << "#time_utc\tlatitude_deg\tlongitude_deg\tspeed_knots\tspeed_mps\t"
           "valid\n";
  char buf[160];
  for (const auto& f : fixes) {
    std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\t%.2f\t%.2f\t%d\n",
                  format_time_utc(f.time_utc).c_str(), f.latitude_deg,
                  f.longitude_deg, f.speed_knots, f.speed_knots * kKnotsToMps,
                  f.valid ? 1 : 0);
    *sink << buf;
  }
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"ltescan: LTE downlink cell scanner and drive-test analytics"};
  app.require_subcommand(1);

  // scan
  std::string scan_manifest, scan_out;
  int scan_max_cells = 3, scan_threads =
      static_cast<int>(std::thread::hardware_concurrency());
  bool scan_no_sib1 = false, scan_verbose = false;
  auto* scan = app.add_subcommand("scan", "decode every capture in a session");
  scan->add_option("--manifest", scan_manifest, "session manifest")->required();
  scan->add_option("--out", scan_out, "record file (default stdout)");
  scan->add_option("--max-cells", scan_max_cells, "cells per capture");
  scan->add_option("--threads", scan_threads, "worker threads");
  scan->add_flag("--no-sib1", scan_no_sib1, "stop after the MIB");
  scan->add_flag("--verbose", scan_verbose, "stage trace on stderr");

  // decode-mib / decode-sib1
  std::string dm_in, dm_format, ds_in, ds_format, ds_dump;
  double dm_rate = 0, dm_freq = 0, ds_rate = 0, ds_freq = 0;
  bool dm_verbose = false, ds_verbose = false;
  auto* dm = app.add_subcommand("decode-mib", "deep decode of one capture, "
                                              "MIB stage only");
  dm->add_option("--in", dm_in, "IQ file")->required();
  dm->add_option("--rate", dm_rate, "sample rate in Hz")->required();
  dm->add_option("--freq", dm_freq, "center frequency in Hz");
  dm->add_option("--format", dm_format, "text|binary (default by extension)");
  dm->add_flag("--verbose", dm_verbose, "stage trace on stderr");

  auto* ds = app.add_subcommand("decode-sib1",
                                "deep decode of one capture through SIB1");
  ds->add_option("--in", ds_in, "IQ file")->required();
  ds->add_option("--rate", ds_rate, "sample rate in Hz")->required();
  ds->add_option("--freq", ds_freq, "center frequency in Hz");
  ds->add_option("--format", ds_format, "text|binary (default by extension)");
  ds->add_option("--dump-per", ds_dump, "write the SIB1 payload bits (.per)");
  ds->add_flag("--verbose", ds_verbose, "stage trace on stderr");

  // analyze
  std::string an_scan, an_manifest, an_counties, an_thresholds, an_bins,
      an_out = "analysis";
  std::vector<std::string> an_gps, an_dbs;
  double an_max_gap = 30.0;
  auto* an = app.add_subcommand("analyze", "statistics tables from records");
  an->add_option("--scan", an_scan, "scan record file")->required();
  an->add_option("--manifest", an_manifest, "manifest (GPS source)");
  an->add_option("--gps", an_gps, "extra NMEA files");
  an->add_option("--cell-db", an_dbs,
                 "cell location snapshots (or LTESCAN_CELL_DB)");
  an->add_option("--counties", an_counties, "county gazetteer csv");
  an->add_option("--thresholds", an_thresholds, "RSRP thresholds, dB, comma");
  an->add_option("--bins", an_bins, "bin widths: rsrp=5,dist=500,vel=2");
  an->add_option("--max-gap", an_max_gap, "seconds before a run breaks");
  an->add_option("--out", an_out, "output directory");

  // generate
  std::string gen_config, gen_out, gen_manifest;
  double gen_rate = 0, gen_cfo = 0,
         gen_snr = std::numeric_limits<double>::infinity(), gen_gain = 1.0;
  int64_t gen_delay = 0;
  uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "synthesize a downlink capture");
  gen->add_option("--config", gen_config, "downlink config file")->required();
  gen->add_option("--out", gen_out, "output IQ file")->required();
  gen->add_option("--rate", gen_rate, "resample to this rate (Hz)");
  gen->add_option("--cfo", gen_cfo, "carrier offset to impair (Hz)");
  gen->add_option("--snr", gen_snr, "AWGN SNR in dB (default: none)");
  gen->add_option("--delay", gen_delay, "delay in samples");
  gen->add_option("--gain", gen_gain, "flat gain");
  gen->add_option("--seed", gen_seed, "noise seed");
  gen->add_option("--manifest", gen_manifest, "also write a session manifest");

  // gps-parse
  std::string gp_in, gp_out;
  bool gp_nock = false;
  auto* gp = app.add_subcommand("gps-parse", "NMEA RMC file to a fix table");
  gp->add_option("--in", gp_in, "NMEA file")->required();
  gp->add_option("--out", gp_out, "fix table (default stdout)");
  gp->add_flag("--no-checksum", gp_nock, "accept missing checksums");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int rc = app.exit(e, msg, msg);
    (rc == 0 ? out : err) << msg.str();
    return rc;
  }

  try {
    if (scan->parsed())
      return cmd_scan(scan_manifest, scan_out, scan_max_cells, scan_no_sib1,
                      scan_threads, scan_verbose, out, err);
    if (dm->parsed())
      return cmd_decode(dm_in, dm_rate, dm_freq, dm_format, false, dm_verbose,
                        "", out, err);
    if (ds->parsed())
      return cmd_decode(ds_in, ds_rate, ds_freq, ds_format, true, ds_verbose,
                        ds_dump, out, err);
    if (an->parsed())
      return cmd_analyze(an_scan, an_manifest, an_gps, an_dbs, an_counties,
                         an_thresholds, an_bins, an_max_gap, an_out, out, err);
    if (gen->parsed())
      return cmd_generate(gen_config, gen_out, gen_rate, gen_cfo, gen_snr,
                          gen_delay, gen_gain, gen_seed, gen_manifest, out,
                          err);
    if (gp->parsed()) return cmd_gps_parse(gp_in, gp_out, gp_nock, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 1;
}

} // namespace ltescan::cli
