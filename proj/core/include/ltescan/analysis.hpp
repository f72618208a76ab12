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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltescan/capture.hpp"
#include "ltescan/geodb.hpp"
#include "ltescan/sib_parse.hpp"

namespace ltescan {

inline constexpr double kKnotsToMps = 0.514444;

/// One decoded cell observation inside a capture.
struct CellObservation {
  int pci = -1;
  double rsrp_dbfs = 0.0;
  bool mib_ok = false; // the coverage criterion
  std::optional<Ecgi> ecgi;
};

/// Timestamped join of a capture's decode results with GPS and site data.
struct DriveSample {
  double time = 0.0;
  std::optional<GpsFix> fix;
  double freq_hz = 0.0;
  std::vector<CellObservation> detections; // only MIB-confirmed cells
  std::optional<CellObservation> strongest;
  std::optional<double> bs_distance_m;
  std::optional<double> velocity_knots;
  std::optional<double> velocity_mps;
};

struct DisconnectedInterval {
  double threshold_db = 0.0;
  double start_time = 0.0;
  double duration_s = 0.0;
};

enum class EnvironmentLabel { Rural, SemiUrban, Urban };

struct EnvironmentClass {
  EnvironmentLabel label = EnvironmentLabel::Rural;
  std::string county;
  long long population = 0;
};

const char* to_string(EnvironmentLabel label);

/// Population cutoffs are configuration, not survey ground truth.
struct EnvironmentCutoffs {
  long long semi_urban = 50000;  // population at/above -> semi-urban
  long long urban = 200000;      // population at/above -> urban
};

EnvironmentClass classify_environment(const std::string& county,
                                      long long population,
                                      const EnvironmentCutoffs& cut = {});

/// County gazetteer: bounding boxes with populations, used to label fixes.
struct CountyRegion {
  std::string name;
  long long population = 0;
  double min_lat = 0, max_lat = 0, min_lon = 0, max_lon = 0;
  bool contains(const GpsFix& fix) const;
};

std::vector<CountyRegion> load_county_file(const std::string& path);

/// Per-capture decode summary as consumed by the analytics (decoupled from
/// the scanner so tables can be rebuilt from stored records).
struct DetectionRecord {
  double time = 0.0;
  double freq_hz = 0.0;
  std::vector<CellObservation> cells;
};

std::vector<DriveSample> build_drive_samples(
    const std::vector<DetectionRecord>& records,
    const std::vector<GpsFix>& fixes, const CellDatabase* db,
    double gps_max_dt_s = 1.0);

/// Right-continuous empirical CDF: sorted (value, fraction <= value) pairs,
/// one per distinct value, ending at 1.
std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<double>& values);

struct JointHistogram {
  std::vector<double> x_edges, y_edges;
  std::vector<std::vector<double>> mass; // [x bin][y bin], sums to 1 in-range
  long long n_in = 0;
  long long n_out = 0;
};

JointHistogram joint_histogram(const std::vector<double>& xs,
                               const std::vector<double>& ys,
                               const std::vector<double>& x_edges,
                               const std::vector<double>& y_edges);

std::vector<double> linspace_edges(double lo, double hi, double step);

/// Maximal runs where no detection reaches the threshold. Gaps longer than
/// max_gap_s break a run instead of counting toward it.
std::vector<DisconnectedInterval> disconnected_durations(
    const std::vector<DriveSample>& samples, double threshold_db,
    double max_gap_s = 30.0);

std::map<double, std::vector<DisconnectedInterval>> disconnected_durations(
    const std::vector<DriveSample>& samples,
    const std::vector<double>& thresholds_db, double max_gap_s = 30.0);

/// Table emission (TSV with headers, spreadsheet/gnuplot friendly).
struct AnalysisOptions {
  std::vector<double> thresholds_db = {-30, -20, -10, 0};
  double max_gap_s = 30.0;
  double rsrp_bin_db = 5.0;
  double rsrp_lo = -60.0, rsrp_hi = 60.0;
  double dist_bin_m = 500.0;
  double dist_lo = 0.0, dist_hi = 10000.0;
  double vel_bin_mps = 2.0;
  double vel_lo = 0.0, vel_hi = 40.0;
  EnvironmentCutoffs cutoffs{};
};

/// Writes cdf_rsrp, cdf_distance, cdf_velocity, joint_rsrp_distance,
/// joint_velocity_rsrp, joint_velocity_distance and disconnected_durations
/// tables (.tsv) into out_dir. Returns the paths written.
std::vector<std::string> write_analysis_tables(
    const std::vector<DriveSample>& samples,
    const std::vector<CountyRegion>& counties, const AnalysisOptions& opt,
    const std::string& out_dir);

} // namespace ltescan
