#pragma once

#include <string>

#include "cpi/analysis.hpp"
#include "cpi/cpi_engine.hpp"
#include "cpi/interferogram.hpp"

namespace cpi {

// CSV schemas (header row, full double precision, byte-stable across runs):
//   traces: stage_position_um,delay_fs,signal
//   maps:   stage_position_um,wavelength_nm,power  (long form)
//   sweeps: transmission,visibility
void write_trace_csv(const std::string& path, const Interferogram& trace);
void write_map_csv(const std::string& path, const SpectrumMap& map);
void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& sweep);

Interferogram read_trace_csv(const std::string& path);

// Companion gnuplot script referencing the CSV.
void write_trace_gnuplot(const std::string& csv_path, const Interferogram& trace);
void write_map_gnuplot(const std::string& csv_path);
void write_sweep_gnuplot(const std::string& csv_path);

std::string format_double(double v);

} // namespace cpi
