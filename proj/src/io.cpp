#include "cpi/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cpi/errors.hpp"

namespace cpi {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  return out;
}

std::string gnuplot_path_for(const std::string& csv_path) {
  return csv_path + ".gp";
}

const char* kind_label(TraceKind k) {
  switch (k) {
    case TraceKind::CpiDip: return "cpi-dip";
    case TraceKind::WliFringes: return "wli-fringes";
    case TraceKind::HomDip: return "hom-dip";
  }
  return "?";
}

} // namespace

void write_trace_csv(const std::string& path, const Interferogram& trace) {
  auto out = open_out(path);
  out << "stage_position_um,delay_fs,signal\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << format_double(trace.stage_um[i]) << ','
        << format_double(trace.delay_fs[i]) << ','
        << format_double(trace.signal[i]) << '\n';
}

void write_map_csv(const std::string& path, const SpectrumMap& map) {
  auto out = open_out(path);
  out << "stage_position_um,wavelength_nm,power\n";
  for (std::size_t i = 0; i < map.stage_um.size(); ++i)
    for (std::size_t b = 0; b < map.wavelength_nm.size(); ++b)
      out << format_double(map.stage_um[i]) << ','
          << format_double(map.wavelength_nm[b]) << ','
          << format_double(map.power[i][b]) << '\n';
}

void write_sweep_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& sweep) {
  auto out = open_out(path);
  out << "transmission,visibility\n";
  for (const auto& [eta, v] : sweep)
    out << format_double(eta) << ',' << format_double(v) << '\n';
}

Interferogram read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("stage_position_um", 0) != 0)
    throw ConfigError("'" + path + "' is not a trace CSV (missing header)");
  Interferogram tr;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double x, tau, s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &tau, &s) != 3)
      throw ConfigError("'" + path + "': malformed row at line " +
                        std::to_string(lineno));
    tr.stage_um.push_back(x);
    tr.delay_fs.push_back(tau);
    tr.signal.push_back(s);
  }
  if (tr.size() < 2) throw ConfigError("'" + path + "': too few rows");
  return tr;
}

void write_trace_gnuplot(const std::string& csv_path, const Interferogram& trace) {
  auto out = open_out(gnuplot_path_for(csv_path));
  out << "set datafile separator ','\n"
      << "set xlabel 'stage position (um)'\n"
      << "set ylabel 'signal'\n"
      << "set title '" << kind_label(trace.kind) << "'\n"
      << "plot '" << csv_path << "' using 1:3 skip 1 with "
      << (trace.kind == TraceKind::WliFringes ? "lines" : "linespoints")
      << " notitle\n"
      << "pause -1\n";
}

void write_map_gnuplot(const std::string& csv_path) {
  auto out = open_out(gnuplot_path_for(csv_path));
  out << "set datafile separator ','\n"
      << "set xlabel 'stage position (um)'\n"
      << "set ylabel 'wavelength (nm)'\n"
      << "set view map\n"
      << "splot '" << csv_path << "' using 1:2:3 skip 1 with points pt 5 ps 0.4 "
         "palette notitle\n"
      << "pause -1\n";
}

void write_sweep_gnuplot(const std::string& csv_path) {
  auto out = open_out(gnuplot_path_for(csv_path));
  out << "set datafile separator ','\n"
      << "set xlabel 'sample-arm transmission'\n"
      << "set ylabel 'visibility'\n"
      << "set yrange [0:1.05]\n"
      << "plot '" << csv_path << "' using 1:2 skip 1 with linespoints notitle\n"
      << "pause -1\n";
}

} // namespace cpi
