#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpi/analysis.hpp"
#include "cpi/cli.hpp"
#include "cpi/config.hpp"
#include "cpi/errors.hpp"
#include "cpi/io.hpp"
#include "cpi/units.hpp"
#include "test_helpers.hpp"

using namespace cpi;
using namespace cpi::test;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_tmp_config(const std::string& name, const std::string& body) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

const char* kMinimalConfig = R"({
  "laser": { "centre_wavelength_nm": 790.0, "fwhm_duration_fs": 110.0 },
  "chirp": { "chirped_quadratic_phase_fs2": 848190.837269658,
             "antichirped_quadratic_phase_fs2": -848190.837269658 },
  "filter": { "centre_wavelength_nm": 395.0, "fwhm_nm": 0.4 },
  "scan": { "start_um": -20.0, "stop_um": 20.0, "step_um": 2.0 }
})";

} // namespace

TEST_CASE("the shipped default config parses to the experiment settings") {
  const RunConfig cfg = parse_config(repo_path("configs/paper_fig2.cfg"));
  CHECK(cfg.setup.laser.centre_wavelength_nm == 790.0);
  CHECK(cfg.setup.chirped.chirp.quadratic_phase_fs2 ==
        doctest::Approx(848190.837269658));
  CHECK(cfg.setup.antichirped.chirp.quadratic_phase_fs2 ==
        doctest::Approx(-848190.837269658));
  CHECK(cfg.setup.chirped.bandwidth_fwhm_nm.value() == 10.0);
  CHECK(cfg.setup.antichirped.bandwidth_fwhm_nm.value() == 9.0);
  CHECK(cfg.setup.filter.centre_wavelength_nm == 395.9);
  CHECK(cfg.setup.filter.fwhm_nm == 0.4);
  CHECK(!cfg.setup.sfg_acceptance_fwhm_nm.has_value());
  CHECK(cfg.setup.sample.empty());
  CHECK(cfg.scan.step_um == 1.0);
  CHECK(cfg.map_scan.has_value());
  // stretched durations from the arm bandwidths at the common rate: 51.2 / 46.1 ps
  const double dur_c = 2.0 * cfg.setup.chirped.chirp.quadratic_phase_fs2 *
                       units::omega_width_from_wavelength_width(10.0, 790.0);
  CHECK(dur_c == doctest::Approx(51200.0).epsilon(1e-9));
}

TEST_CASE("the dispersive sample config resolves materials") {
  const RunConfig cfg = parse_config(repo_path("configs/paper_fig3_sample.cfg"));
  REQUIRE(cfg.setup.sample.layers.size() == 2);
  CHECK(cfg.setup.sample.layers[0].material.name == "calcite_o");
  CHECK(cfg.setup.sample.layers[0].thickness_mm == 80.60);
  CHECK(cfg.setup.sample.layers[1].material.name == "bk7");
  CHECK(cfg.setup.sample.layers[1].thickness_mm == 28.93);
  CHECK(cfg.wli_scan.has_value());
}

TEST_CASE("config validation failures") {
  SUBCASE("empty sample section means vacuum") {
    const auto p = write_tmp_config("cpi_vac.json", kMinimalConfig);
    CHECK(parse_config(p).setup.sample.empty());
  }

  SUBCASE("unknown keys are hard errors") {
    std::string bad = kMinimalConfig;
    bad.replace(bad.find("\"laser\""), 7, "\"lazer\"");
    const auto p = write_tmp_config("cpi_bad1.json", bad);
    CHECK_THROWS_AS(parse_config(p), ConfigError);
  }

  SUBCASE("missing unit suffix is an unknown key") {
    std::string bad = kMinimalConfig;
    bad.replace(bad.find("centre_wavelength_nm"), 20, "centre_wavelength___");
    const auto p = write_tmp_config("cpi_bad2.json", bad);
    CHECK_THROWS_AS(parse_config(p), ConfigError);
  }

  SUBCASE("transmission out of range") {
    std::string bad = kMinimalConfig;
    bad.insert(bad.rfind('}'), ",\"loss\": {\"sample_transmission\": 1.5}\n");
    const auto p = write_tmp_config("cpi_bad3.json", bad);
    CHECK_THROWS_AS(parse_config(p), ConfigError);
  }

  SUBCASE("unknown material") {
    std::string bad = kMinimalConfig;
    bad.insert(bad.rfind('}'),
               ",\"sample\": {\"layers\": [{\"material\": \"kryptonite\", "
               "\"thickness_mm\": 1.0}]},\n\"materials_file\": \"" +
                   repo_path("data/materials.json") + "\"\n");
    const auto p = write_tmp_config("cpi_bad4.json", bad);
    CHECK_THROWS_AS(parse_config(p), ConfigError);
  }

  SUBCASE("missing config file") {
    CHECK_THROWS_AS(parse_config("/nonexistent/nowhere.cfg"), ConfigError);
  }
}

TEST_CASE("CPI_MATERIALS overrides the materials path") {
  std::string cfg = kMinimalConfig;
  cfg.insert(cfg.rfind('}'),
             ",\"sample\": {\"layers\": [{\"material\": \"bk7\", "
             "\"thickness_mm\": 1.0}]}\n");
  const auto p = write_tmp_config("cpi_env.json", cfg);
  // no materials file next to the temp config: fails without the override
  CHECK_THROWS_AS(parse_config(p), ConfigError);
  setenv("CPI_MATERIALS", repo_path("data/materials.json").c_str(), 1);
  const RunConfig rc = parse_config(p);
  unsetenv("CPI_MATERIALS");
  CHECK(rc.setup.sample.layers.size() == 1);
  CHECK(rc.setup.sample.layers[0].material.name == "bk7");
}

TEST_CASE("trace CSV round trip is exact") {
  Interferogram tr = make_trace(ScanSpec{-5.0, 5.0, 0.5}.positions(),
                                TraceKind::CpiDip);
  for (std::size_t i = 0; i < tr.size(); ++i)
    tr.signal[i] = 1e-6 * (1.0 + std::sin(0.1 * i) / 3.0);
  const auto path = (fs::temp_directory_path() / "cpi_roundtrip.csv").string();
  write_trace_csv(path, tr);
  const Interferogram back = read_trace_csv(path);
  REQUIRE(back.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(back.stage_um[i] == tr.stage_um[i]);
    CHECK(back.delay_fs[i] == tr.delay_fs[i]);
    CHECK(back.signal[i] == tr.signal[i]);
  }
}

TEST_CASE("cli: dip run, byte-stable output, fit round trip") {
  const auto out1 = (fs::temp_directory_path() / "cpi_cli1.csv").string();
  const auto out2 = (fs::temp_directory_path() / "cpi_cli2.csv").string();
  const auto cfg = repo_path("configs/paper_fig2.cfg");

  CHECK(cli_run({"cpi-dip", "--config", cfg, "--out", out1, "--threads", "2"}) == 0);
  CHECK(cli_run({"cpi-dip", "--config", cfg, "--out", out2, "--threads", "3"}) == 0);
  CHECK(slurp(out1) == slurp(out2));

  // the fit subcommand reproduces the in-process fit on the written CSV
  CHECK(cli_run({"fit", out1}) == 0);
  const Interferogram disk = read_trace_csv(out1);
  const FitResult from_disk = fit_gaussian_dip(disk);
  const RunConfig rc = parse_config(cfg);
  const FitResult in_process =
      fit_gaussian_dip(cpi_interferogram(rc.setup, rc.scan, 2));
  CHECK(from_disk.visibility == in_process.visibility);
  CHECK(from_disk.centre_um == in_process.centre_um);
  CHECK(from_disk.fwhm_um == in_process.fwhm_um);
}

TEST_CASE("cli: gnuplot companion, group-delay report, error codes") {
  const auto out = (fs::temp_directory_path() / "cpi_cli3.csv").string();
  const auto cfg = repo_path("configs/paper_fig3_sample.cfg");

  CHECK(cli_run({"group-delay", "--config", cfg}) == 0);

  const auto p_hom = write_tmp_config("cpi_gp.json", kMinimalConfig);
  CHECK(cli_run({"hom-dip", "--config", p_hom, "--out", out, "--gnuplot"}) == 0);
  CHECK(fs::exists(out + ".gp"));

  CHECK(cli_run({"cpi-dip", "--config", "/nonexistent.cfg", "--out", out}) == 2);

  // scan far outside the guard band: numerical failure
  std::string bad = kMinimalConfig;
  bad.replace(bad.find("-20.0"), 5, "99000");
  bad.replace(bad.find("\"stop_um\": 20.0"), 15, "\"stop_um\": 99040");
  const auto p = write_tmp_config("cpi_guard.json", bad);
  CHECK(cli_run({"cpi-dip", "--config", p, "--out", out}) == 3);

  CHECK(cli_run({"frobnicate"}) == 2);
}

TEST_CASE("cli: hom reference and loss sweep") {
  const auto out = (fs::temp_directory_path() / "cpi_cli4.csv").string();
  const auto p = write_tmp_config("cpi_hom.json", kMinimalConfig);
  CHECK(cli_run({"hom-dip", "--config", p, "--out", out}) == 0);
  const Interferogram tr = read_trace_csv(out);
  CHECK(tr.size() == 21);

  // zero background: visibilities equal to 1e-6 across the sweep
  std::string sweep_cfg = kMinimalConfig;
  sweep_cfg.insert(sweep_cfg.rfind('}'),
                   ",\"loss_sweep\": {\"transmissions\": [1.0, 0.5, 0.1, 0.01]}\n");
  const auto p2 = write_tmp_config("cpi_sweep.json", sweep_cfg);
  const auto out2 = (fs::temp_directory_path() / "cpi_cli5.csv").string();
  CHECK(cli_run({"loss-sweep", "--config", p2, "--out", out2}) == 0);
  std::ifstream in(out2);
  std::string line;
  std::getline(in, line);
  double vmin = 2.0, vmax = -1.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double v = std::stod(line.substr(comma + 1));
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  CHECK(vmax - vmin < 1e-6);
}
