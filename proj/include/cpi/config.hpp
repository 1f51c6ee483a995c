#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpi/cpi_engine.hpp"

namespace cpi {

// A full experiment description parsed from a JSON config file.  All physical
// keys carry explicit unit suffixes; unknown keys are hard errors.
struct RunConfig {
  OpticalSetup setup;
  ScanSpec scan;
  std::optional<ScanSpec> wli_scan; // fringe-resolved scan; defaults to `scan`
  MapSpec map;
  std::optional<ScanSpec> map_scan; // wider scan for the spectrum map
  std::vector<double> loss_transmissions{1.0, 0.5, 0.1, 0.01};
  std::string materials_path; // resolved absolute/relative path actually used
};

// Parse `path`.  The materials file is resolved in this order: the
// CPI_MATERIALS environment variable, the config's `materials_file` key
// (relative to the config file), then `materials.json` next to the config.
RunConfig parse_config(const std::string& path);

} // namespace cpi
