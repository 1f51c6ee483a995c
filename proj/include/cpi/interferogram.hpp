#pragma once

#include <string>
#include <vector>

#include "cpi/errors.hpp"
#include "cpi/units.hpp"

namespace cpi {

enum class TraceKind { CpiDip, WliFringes, HomDip };

// Stage scan result: positions (um), the equivalent optical delays
// tau = 2x/c (fs), and a detected signal per point.
struct Interferogram {
  std::vector<double> stage_um;
  std::vector<double> delay_fs;
  std::vector<double> signal;
  TraceKind kind = TraceKind::CpiDip;
  std::vector<std::string> notes;

  std::size_t size() const { return stage_um.size(); }
};

struct ScanSpec {
  double start_um = 0.0;
  double stop_um = 0.0;
  double step_um = 1.0;

  std::vector<double> positions() const {
    if (!(step_um > 0.0)) throw ConfigError("scan step must be positive");
    if (stop_um < start_um) throw ConfigError("scan stop before start");
    std::vector<double> xs;
    const int n = static_cast<int>(std::floor((stop_um - start_um) / step_um + 0.5)) + 1;
    if (n < 1) throw ConfigError("degenerate scan (0 points)");
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(start_um + i * step_um);
    return xs;
  }
};

inline Interferogram make_trace(const std::vector<double>& xs, TraceKind kind) {
  Interferogram tr;
  tr.stage_um = xs;
  tr.delay_fs.reserve(xs.size());
  for (double x : xs) tr.delay_fs.push_back(units::stage_um_to_delay_fs(x));
  tr.signal.assign(xs.size(), 0.0);
  tr.kind = kind;
  return tr;
}

} // namespace cpi
