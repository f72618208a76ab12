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

#include "ltescan/sib_parse.hpp"
#include "ltescan/util.hpp"

namespace ltescan {

struct GeoPoint {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

struct CellSiteRecord {
  Ecgi ecgi;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  std::string source;      // snapshot identifier (file name)
  bool approximate = true; // crowd-sourced positions always are
};

/// Offline cell-location snapshot(s), ECGI-keyed.
class CellDatabase {
 public:
  /// Load one delimited snapshot (header row with at least mcc, mnc, cid,
  /// lat, lon). Duplicate ECGIs within a file resolve last-wins.
  static CellDatabase load(const std::string& path);

  /// Multiple snapshots merge first-hit-wins in load order.
  static CellDatabase load_all(const std::vector<std::string>& paths);

  std::optional<CellSiteRecord> lookup(const Ecgi& ecgi) const;
  std::optional<CellSiteRecord> lookup(const std::string& canonical) const;

  size_t size() const { return records_.size(); }
  int duplicate_warnings() const { return duplicate_warnings_; }
  int rejected_rows() const { return rejected_rows_; }

 private:
  std::map<std::string, CellSiteRecord> records_;
  int duplicate_warnings_ = 0;
  int rejected_rows_ = 0;
};

/// Great-circle distance on the IUGG mean-radius sphere.
inline constexpr double kEarthRadiusM = 6371008.8;
double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// A remote lookup service (the offline snapshot is the default provider;
/// a network-backed one can be slotted in without touching callers).
class CellLocationProvider {
 public:
  virtual ~CellLocationProvider() = default;
  virtual std::optional<CellSiteRecord> find(const Ecgi& ecgi) const = 0;
};

class SnapshotProvider final : public CellLocationProvider {
 public:
  explicit SnapshotProvider(CellDatabase db) : db_(std::move(db)) {}
  std::optional<CellSiteRecord> find(const Ecgi& ecgi) const override {
    return db_.lookup(ecgi);
  }

 private:
  CellDatabase db_;
};

} // namespace ltescan
