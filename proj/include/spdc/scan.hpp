#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spdc {

struct ScanPoint {
  double setting = 0.0;
  double value = 0.0;
  double uncertainty = 0.0;
};

// Generic (setting, value, uncertainty) series: fringes, angle scans,
// path-length scans. Settings must be strictly monotone.
struct ScanResult {
  std::string kind;
  std::string setting_unit;
  std::string value_unit;
  std::vector<ScanPoint> points;
  nlohmann::json metadata;  // fixed parameters, seed, config hash

  void validate() const;  // throws std::invalid_argument
};

// CSV with '#'-prefixed header lines carrying kind/units/metadata, '.' decimal,
// comma separator. A <path>.meta.json sidecar holds the metadata block.
void write_scan_csv(const std::string& path, const ScanResult& scan);
ScanResult read_scan_csv(const std::string& path);

}  // namespace spdc
