#include "spdc/scan.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spdc {

void ScanResult::validate() const {
  for (size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].setting > points[i - 1].setting))
      throw std::invalid_argument("scan settings must be strictly monotone");
  }
  for (const auto& p : points) {
    if (p.uncertainty < 0.0)
      throw std::invalid_argument("scan uncertainties must be non-negative");
  }
}

void write_scan_csv(const std::string& path, const ScanResult& scan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# kind: " << scan.kind << "\n";
  out << "# columns: setting,value,uncertainty\n";
  out << "# units: " << scan.setting_unit << "," << scan.value_unit << ","
      << scan.value_unit << "\n";
  for (auto it = scan.metadata.begin(); it != scan.metadata.end(); ++it) {
    out << "# " << it.key() << ": "
        << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
        << "\n";
  }
  char buf[128];
  for (const auto& p : scan.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.setting, p.value,
                  p.uncertainty);
    out << buf;
  }
  std::ofstream meta(path + ".meta.json");
  nlohmann::json m = scan.metadata;
  m["kind"] = scan.kind;
  m["setting_unit"] = scan.setting_unit;
  m["value_unit"] = scan.value_unit;
  meta << m.dump(2) << "\n";
}

ScanResult read_scan_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scan file: " + path);
  ScanResult scan;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(2, colon - 2);
      std::string value = line.substr(colon + 1);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      if (key == "kind") scan.kind = value;
      else if (key == "units") {
        const auto comma = value.find(',');
        scan.setting_unit = value.substr(0, comma);
        if (comma != std::string::npos) {
          std::string rest = value.substr(comma + 1);
          scan.value_unit = rest.substr(0, rest.find(','));
        }
      } else if (key != "columns") {
        scan.metadata[key] = value;
      }
      continue;
    }
    ScanPoint p;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &p.setting, &p.value,
                    &p.uncertainty) != 3)
      throw std::runtime_error("malformed scan row: " + line);
    scan.points.push_back(p);
  }
  return scan;
}

}  // namespace spdc
