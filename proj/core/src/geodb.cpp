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
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ltescan/geodb.hpp"

namespace ltescan {

CellDatabase CellDatabase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open cell database: " + path);
  const std::string source = std::filesystem::path(path).filename().string();

  std::string header;
  if (!std::getline(in, header))
    throw Error("cell database is empty: " + path);
  auto cols = split(header, ',');
  int c_mcc = -1, c_mnc = -1, c_cid = -1, c_lat = -1, c_lon = -1;
  for (size_t i = 0; i < cols.size(); ++i) {
    std::string name = trim(cols[i]);
    for (auto& ch : name) ch = static_cast<char>(std::tolower(ch));
    if (name == "mcc") c_mcc = static_cast<int>(i);
    else if (name == "mnc" || name == "net") c_mnc = static_cast<int>(i);
    else if (name == "cid" || name == "cell") c_cid = static_cast<int>(i);
    else if (name == "lat") c_lat = static_cast<int>(i);
    else if (name == "lon") c_lon = static_cast<int>(i);
  }
  for (auto [col, name] : {std::pair{c_mcc, "mcc"}, {c_mnc, "mnc"},
                           {c_cid, "cid"}, {c_lat, "lat"}, {c_lon, "lon"}}) {
    if (col < 0)
      throw Error("cell database " + path + " is missing column '" +
                  std::string(name) + "'");
  }

  CellDatabase db;
  std::string line;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split(t, ',');
    const size_t need = static_cast<size_t>(
        std::max({c_mcc, c_mnc, c_cid, c_lat, c_lon}) + 1);
    if (f.size() < need) {
      db.rejected_rows_++;
      continue;
    }
    try {
      CellSiteRecord rec;
      std::string mcc_s = trim(f[static_cast<size_t>(c_mcc)]);
      std::string mnc_s = trim(f[static_cast<size_t>(c_mnc)]);
      rec.ecgi.mcc = static_cast<uint16_t>(std::stoul(mcc_s));
      rec.ecgi.mnc = static_cast<uint16_t>(std::stoul(mnc_s));
      rec.ecgi.mnc_digits = static_cast<uint8_t>(
          mnc_s.size() == 3 ? 3 : 2); // leading zeros matter
      rec.ecgi.cid =
          static_cast<uint32_t>(std::stoul(trim(f[static_cast<size_t>(c_cid)])));
      rec.latitude_deg = parse_double_strict(f[static_cast<size_t>(c_lat)]);
      rec.longitude_deg = parse_double_strict(f[static_cast<size_t>(c_lon)]);
      rec.source = source;
      if (rec.latitude_deg < -90.0 || rec.latitude_deg > 90.0 ||
          rec.longitude_deg < -180.0 || rec.longitude_deg > 180.0 ||
          rec.ecgi.cid >= (1u << 28)) {
        db.rejected_rows_++;
        continue;
      }
      auto key = rec.ecgi.canonical_text();
      if (db.records_.count(key)) db.duplicate_warnings_++;
      db.records_[key] = rec; // last wins within one snapshot
    } catch (const std::exception&) {
      db.rejected_rows_++;
    }
  }
  return db;
}

CellDatabase CellDatabase::load_all(const std::vector<std::string>& paths) {
  CellDatabase merged;
  for (const auto& p : paths) {
    CellDatabase db = load(p);
    merged.duplicate_warnings_ += db.duplicate_warnings_;
    merged.rejected_rows_ += db.rejected_rows_;
    for (auto& [key, rec] : db.records_)
      merged.records_.emplace(key, rec); // first hit wins across snapshots
  }
  return merged;
}

std::optional<CellSiteRecord> CellDatabase::lookup(const Ecgi& ecgi) const {
  return lookup(ecgi.canonical_text());
}

std::optional<CellSiteRecord> CellDatabase::lookup(
    const std::string& canonical) const {
  // Normalize free-form keys through the parser (case, zero padding).
  std::string key = canonical;
  try {
    key = parse_ecgi_text(canonical).canonical_text();
  } catch (const ParseError&) {
    // fall through with the raw key
  }
  auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double d2r = M_PI / 180.0;
  const double dlat = (b.latitude_deg - a.latitude_deg) * d2r;
  const double dlon = (b.longitude_deg - a.longitude_deg) * d2r;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(a.latitude_deg * d2r) *
                                 std::cos(b.latitude_deg * d2r) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

} // namespace ltescan
