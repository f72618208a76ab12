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
#include <filesystem>
#include <fstream>

#include "ltescan/analysis.hpp"

namespace ltescan {

const char* to_string(EnvironmentLabel label) {
  switch (label) {
    case EnvironmentLabel::Rural: return "rural";
    case EnvironmentLabel::SemiUrban: return "semi-urban";
    case EnvironmentLabel::Urban: return "urban";
  }
  return "?";
}

EnvironmentClass classify_environment(const std::string& county,
                                      long long population,
                                      const EnvironmentCutoffs& cut) {
  if (population < 0) throw Error("classify_environment: negative population");
  EnvironmentClass e;
  e.county = county;
  e.population = population;
  if (population >= cut.urban) e.label = EnvironmentLabel::Urban;
  else if (population >= cut.semi_urban) e.label = EnvironmentLabel::SemiUrban;
  else e.label = EnvironmentLabel::Rural;
  return e;
}

bool CountyRegion::contains(const GpsFix& fix) const {
  return fix.latitude_deg >= min_lat && fix.latitude_deg <= max_lat &&
         fix.longitude_deg >= min_lon && fix.longitude_deg <= max_lon;
}

std::vector<CountyRegion> load_county_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open county file: " + path);
  std::vector<CountyRegion> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split(t, ',');
    if (f.size() < 6)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": need county,population,min_lat,max_lat,min_lon,max_lon");
    CountyRegion r;
    r.name = trim(f[0]);
    r.population = std::stoll(trim(f[1]));
    r.min_lat = parse_double_strict(f[2]);
    r.max_lat = parse_double_strict(f[3]);
    r.min_lon = parse_double_strict(f[4]);
    r.max_lon = parse_double_strict(f[5]);
    out.push_back(r);
  }
  return out;
}

std::vector<DriveSample> build_drive_samples(
    const std::vector<DetectionRecord>& records,
    const std::vector<GpsFix>& fixes, const CellDatabase* db,
    double gps_max_dt_s) {
  std::vector<DriveSample> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    DriveSample s;
    s.time = rec.time;
    s.freq_hz = rec.freq_hz;
    s.fix = nearest_fix(fixes, rec.time, gps_max_dt_s);
    if (s.fix) {
      s.velocity_knots = s.fix->speed_knots;
      s.velocity_mps = s.fix->speed_knots * kKnotsToMps;
    }
    for (const auto& cell : rec.cells)
      if (cell.mib_ok) s.detections.push_back(cell); // coverage requires MIB
    if (!s.detections.empty()) {
      auto best = std::max_element(
          s.detections.begin(), s.detections.end(),
          [](const CellObservation& a, const CellObservation& b) {
            if (a.rsrp_dbfs != b.rsrp_dbfs) return a.rsrp_dbfs < b.rsrp_dbfs;
            return a.pci > b.pci; // deterministic on exact ties
          });
      s.strongest = *best;
      if (db && s.fix && s.strongest->ecgi) {
        auto site = db->lookup(*s.strongest->ecgi);
        if (site)
          s.bs_distance_m = haversine_m(
              {s.fix->latitude_deg, s.fix->longitude_deg},
              {site->latitude_deg, site->longitude_deg});
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<double>& values) {
  if (values.empty()) throw Error("empirical_cdf: empty input");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue; // keep last duplicate
    out.emplace_back(v[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::vector<double> linspace_edges(double lo, double hi, double step) {
  std::vector<double> edges;
  for (double e = lo; e < hi + step / 2; e += step) edges.push_back(e);
  if (edges.size() < 2) throw Error("linspace_edges: empty range");
  return edges;
}

JointHistogram joint_histogram(const std::vector<double>& xs,
                               const std::vector<double>& ys,
                               const std::vector<double>& x_edges,
                               const std::vector<double>& y_edges) {
  if (xs.size() != ys.size())
    throw Error("joint_histogram: coordinate lengths differ");
  if (x_edges.size() < 2 || y_edges.size() < 2)
    throw Error("joint_histogram: need at least one bin per axis");
  for (size_t i = 1; i < x_edges.size(); ++i)
    if (x_edges[i] <= x_edges[i - 1])
      throw Error("joint_histogram: x edges not increasing");
  for (size_t i = 1; i < y_edges.size(); ++i)
    if (y_edges[i] <= y_edges[i - 1])
      throw Error("joint_histogram: y edges not increasing");

  JointHistogram h;
  h.x_edges = x_edges;
  h.y_edges = y_edges;
  h.mass.assign(x_edges.size() - 1,
                std::vector<double>(y_edges.size() - 1, 0.0));

  auto bin_of = [](const std::vector<double>& edges, double v) -> int {
    if (v < edges.front() || v >= edges.back()) return -1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    return static_cast<int>(it - edges.begin()) - 1;
  };
  for (size_t i = 0; i < xs.size(); ++i) {
    const int bx = bin_of(x_edges, xs[i]);
    const int by = bin_of(y_edges, ys[i]);
    if (bx < 0 || by < 0) {
      h.n_out++;
      continue;
    }
    h.mass[static_cast<size_t>(bx)][static_cast<size_t>(by)] += 1.0;
    h.n_in++;
  }
  if (h.n_in > 0)
    for (auto& row : h.mass)
      for (auto& m : row) m /= static_cast<double>(h.n_in);
  return h;
}

std::vector<DisconnectedInterval> disconnected_durations(
    const std::vector<DriveSample>& samples, double threshold_db,
    double max_gap_s) {
  for (size_t i = 1; i < samples.size(); ++i)
    if (samples[i].time < samples[i - 1].time)
      throw Error("disconnected_durations: samples not time-sorted");

  auto disconnected = [&](const DriveSample& s) {
    return !s.strongest || s.strongest->rsrp_dbfs < threshold_db;
  };

  std::vector<DisconnectedInterval> out;
  std::optional<double> run_start;
  double last_time = 0.0;
  auto close_run = [&](double end_time) {
    if (!run_start) return;
    const double dur = end_time - *run_start;
    if (dur > 0.0) out.push_back({threshold_db, *run_start, dur});
    run_start.reset();
  };

  for (const auto& s : samples) {
    if (run_start && s.time - last_time > max_gap_s) close_run(last_time);
    if (disconnected(s)) {
      if (!run_start) run_start = s.time;
    } else {
      close_run(s.time); // reconnection bounds the interval
    }
    last_time = s.time;
  }
  close_run(last_time);
  return out;
}

std::map<double, std::vector<DisconnectedInterval>> disconnected_durations(
    const std::vector<DriveSample>& samples,
    const std::vector<double>& thresholds_db, double max_gap_s) {
  std::map<double, std::vector<DisconnectedInterval>> out;
  for (double th : thresholds_db)
    out[th] = disconnected_durations(samples, th, max_gap_s);
  return out;
}

namespace {

std::string env_of(const DriveSample& s,
                   const std::vector<CountyRegion>& counties,
                   const EnvironmentCutoffs& cutoffs) {
  if (!s.fix) return "all";
  for (const auto& c : counties)
    if (c.contains(*s.fix))
      return to_string(classify_environment(c.name, c.population, cutoffs).label);
  return "all";
}

void write_cdf(std::ofstream& out, const std::string& env,
               const std::string& metric,
               const std::vector<double>& values) {
  if (values.empty()) return;
  for (auto& [v, fr] : empirical_cdf(values)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%.6f\t%.6f\n", env.c_str(),
                  metric.c_str(), v, fr);
    out << buf;
  }
}

void write_joint(const std::string& path, const char* xname, const char* yname,
                 const std::map<std::string, std::pair<std::vector<double>,
                                                       std::vector<double>>>& data,
                 const std::vector<double>& xe, const std::vector<double>& ye) {
  std::ofstream out(path);
  out << "environment\t" << xname << "_lo\t" << xname << "_hi\t" << yname
      << "_lo\t" << yname << "_hi\tmass\n";
  for (const auto& [env, xy] : data) {
    if (xy.first.empty()) continue;
    JointHistogram h = joint_histogram(xy.first, xy.second, xe, ye);
    for (size_t i = 0; i + 1 < xe.size(); ++i)
      for (size_t j = 0; j + 1 < ye.size(); ++j) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\t%.6f\t%.6f\t%.8f\n",
                      env.c_str(), xe[i], xe[i + 1], ye[j], ye[j + 1],
                      h.mass[i][j]);
        out << buf;
      }
  }
}

} // namespace

std::vector<std::string> write_analysis_tables(
    const std::vector<DriveSample>& samples,
    const std::vector<CountyRegion>& counties, const AnalysisOptions& opt,
    const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  // Bucket metric vectors per environment ("all" always included).
  std::map<std::string, std::vector<double>> rsrp, dist, vel_kn, vel_ms;
  std::map<std::string,
           std::pair<std::vector<double>, std::vector<double>>>
      j_rsrp_dist, j_vel_rsrp, j_vel_dist;
  std::map<std::string, std::vector<DriveSample>> per_env;

  for (const auto& s : samples) {
    std::vector<std::string> envs = {"all"};
    const std::string e = env_of(s, counties, opt.cutoffs);
    if (e != "all") envs.push_back(e);
    for (const auto& env : envs) {
      per_env[env].push_back(s);
      if (s.strongest) rsrp[env].push_back(s.strongest->rsrp_dbfs);
      if (s.bs_distance_m) dist[env].push_back(*s.bs_distance_m);
      if (s.fix && s.velocity_knots) {
        vel_kn[env].push_back(*s.velocity_knots);
        vel_ms[env].push_back(*s.velocity_mps);
      }
      if (s.strongest && s.bs_distance_m) {
        j_rsrp_dist[env].first.push_back(s.strongest->rsrp_dbfs);
        j_rsrp_dist[env].second.push_back(*s.bs_distance_m);
      }
      if (s.strongest && s.velocity_mps) {
        j_vel_rsrp[env].first.push_back(*s.velocity_mps);
        j_vel_rsrp[env].second.push_back(s.strongest->rsrp_dbfs);
      }
      if (s.bs_distance_m && s.velocity_mps) {
        j_vel_dist[env].first.push_back(*s.velocity_mps);
        j_vel_dist[env].second.push_back(*s.bs_distance_m);
      }
    }
  }

  auto path_of = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };

  {
    std::ofstream out(path_of("cdf_rsrp.tsv"));
    out << "environment\tmetric\trsrp_dbfs\tfraction\n";
    for (auto& [env, v] : rsrp) write_cdf(out, env, "rsrp", v);
    written.push_back(path_of("cdf_rsrp.tsv"));
  }
  {
    std::ofstream out(path_of("cdf_distance.tsv"));
    out << "environment\tmetric\tdistance_m\tfraction\n";
    for (auto& [env, v] : dist) write_cdf(out, env, "distance", v);
    written.push_back(path_of("cdf_distance.tsv"));
  }
  {
    std::ofstream out(path_of("cdf_velocity.tsv"));
    out << "environment\tmetric\tvelocity\tfraction\n";
    for (auto& [env, v] : vel_kn) write_cdf(out, env, "velocity_knots", v);
    for (auto& [env, v] : vel_ms) write_cdf(out, env, "velocity_mps", v);
    written.push_back(path_of("cdf_velocity.tsv"));
  }

  const auto rsrp_edges = linspace_edges(opt.rsrp_lo, opt.rsrp_hi, opt.rsrp_bin_db);
  const auto dist_edges = linspace_edges(opt.dist_lo, opt.dist_hi, opt.dist_bin_m);
  const auto vel_edges = linspace_edges(opt.vel_lo, opt.vel_hi, opt.vel_bin_mps);

  write_joint(path_of("joint_rsrp_distance.tsv"), "rsrp_dbfs", "distance_m",
              j_rsrp_dist, rsrp_edges, dist_edges);
  written.push_back(path_of("joint_rsrp_distance.tsv"));
  write_joint(path_of("joint_velocity_rsrp.tsv"), "velocity_mps", "rsrp_dbfs",
              j_vel_rsrp, vel_edges, rsrp_edges);
  written.push_back(path_of("joint_velocity_rsrp.tsv"));
  write_joint(path_of("joint_velocity_distance.tsv"), "velocity_mps",
              "distance_m", j_vel_dist, vel_edges, dist_edges);
  written.push_back(path_of("joint_velocity_distance.tsv"));

  {
    std::ofstream out(path_of("disconnected_durations.tsv"));
    out << "environment\tthreshold_db\tstart_time\tduration_s\n";
    for (auto& [env, sub] : per_env) {
      auto runs = disconnected_durations(sub, opt.thresholds_db, opt.max_gap_s);
      for (auto& [th, intervals] : runs)
        for (auto& iv : intervals) {
          char buf[128];
          std::snprintf(buf, sizeof(buf), "%s\t%.1f\t%.3f\t%.3f\n", env.c_str(),
                        th, iv.start_time, iv.duration_s);
          out << buf;
        }
    }
    written.push_back(path_of("disconnected_durations.tsv"));
  }
  return written;
}

} // namespace ltescan
