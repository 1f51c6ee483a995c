#include "cpi/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "cpi/errors.hpp"
#include "cpi/units.hpp"

namespace cpi {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void require_keys(const json& obj, const std::string& section,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  if (!obj.is_object())
    throw ConfigError("config section '" + section + "' must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in section '" + section +
                        "' (unit suffixes are part of the key name)");
  }
  for (const auto& k : required) {
    if (!obj.contains(k))
      throw ConfigError("missing required key '" + k + "' in section '" + section + "'");
  }
}

double get_num(const json& obj, const std::string& section, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("key '" + key + "' in section '" + section + "' must be a number");
  return v.get<double>();
}

ScanSpec parse_scan(const json& j, const std::string& section) {
  require_keys(j, section, {"start_um", "stop_um", "step_um"},
               {"start_um", "stop_um", "step_um"});
  ScanSpec s;
  s.start_um = get_num(j, section, "start_um");
  s.stop_um = get_num(j, section, "stop_um");
  s.step_um = get_num(j, section, "step_um");
  if (!(s.step_um > 0.0)) throw ConfigError("scan step_um must be positive");
  if (s.stop_um < s.start_um) throw ConfigError("scan stop_um before start_um");
  return s;
}

} // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  require_keys(j, "(top level)",
               {"laser", "chirp", "sample", "loss", "filter", "sfg_acceptance",
                "detector", "grid", "scan", "wli_scan", "spectrum_map",
                "loss_sweep", "materials_file"},
               {"laser", "chirp", "filter", "scan"});

  RunConfig cfg;
  OpticalSetup& s = cfg.setup;

  {
    const auto& jl = j.at("laser");
    require_keys(jl, "laser",
                 {"centre_wavelength_nm", "fwhm_duration_fs", "pulse_energy"},
                 {"centre_wavelength_nm", "fwhm_duration_fs"});
    s.laser.centre_wavelength_nm = get_num(jl, "laser", "centre_wavelength_nm");
    s.laser.fwhm_duration_fs = get_num(jl, "laser", "fwhm_duration_fs");
    if (jl.contains("pulse_energy"))
      s.laser.pulse_energy = get_num(jl, "laser", "pulse_energy");
    if (!(s.laser.centre_wavelength_nm > 0.0) || !(s.laser.fwhm_duration_fs > 0.0) ||
        s.laser.pulse_energy < 0.0)
      throw ConfigError("laser parameters must be positive");
  }

  {
    const auto& jc = j.at("chirp");
    require_keys(jc, "chirp",
                 {"chirped_quadratic_phase_fs2", "antichirped_quadratic_phase_fs2",
                  "chirped_overlap_offset_fs", "antichirped_overlap_offset_fs",
                  "chirped_bandwidth_fwhm_nm", "antichirped_bandwidth_fwhm_nm"},
                 {"chirped_quadratic_phase_fs2", "antichirped_quadratic_phase_fs2"});
    s.chirped.chirp.quadratic_phase_fs2 =
        get_num(jc, "chirp", "chirped_quadratic_phase_fs2");
    s.antichirped.chirp.quadratic_phase_fs2 =
        get_num(jc, "chirp", "antichirped_quadratic_phase_fs2");
    if (jc.contains("chirped_overlap_offset_fs"))
      s.chirped.chirp.overlap_offset_fs =
          get_num(jc, "chirp", "chirped_overlap_offset_fs");
    if (jc.contains("antichirped_overlap_offset_fs"))
      s.antichirped.chirp.overlap_offset_fs =
          get_num(jc, "chirp", "antichirped_overlap_offset_fs");
    if (jc.contains("chirped_bandwidth_fwhm_nm"))
      s.chirped.bandwidth_fwhm_nm = get_num(jc, "chirp", "chirped_bandwidth_fwhm_nm");
    if (jc.contains("antichirped_bandwidth_fwhm_nm"))
      s.antichirped.bandwidth_fwhm_nm =
          get_num(jc, "chirp", "antichirped_bandwidth_fwhm_nm");
  }

  // materials path resolution (needed before the sample section)
  const fs::path cfg_dir = fs::path(path).parent_path();
  if (const char* env = std::getenv("CPI_MATERIALS"); env && *env) {
    cfg.materials_path = env;
  } else if (j.contains("materials_file")) {
    const auto rel = j.at("materials_file").get<std::string>();
    cfg.materials_path = (fs::path(rel).is_absolute() ? fs::path(rel)
                                                      : cfg_dir / rel).string();
  } else {
    cfg.materials_path = (cfg_dir / "materials.json").string();
  }

  if (j.contains("sample") && !j.at("sample").empty()) {
    const auto& js = j.at("sample");
    require_keys(js, "sample", {"layers"}, {"layers"});
    const auto& layers = js.at("layers");
    if (!layers.is_array()) throw ConfigError("sample.layers must be an array");
    if (!layers.empty()) {
      const MaterialDb db = MaterialDb::load(cfg.materials_path);
      for (const auto& jl : layers) {
        require_keys(jl, "sample.layers[]", {"material", "thickness_mm"},
                     {"material", "thickness_mm"});
        Layer layer;
        layer.material = db.get(jl.at("material").get<std::string>());
        layer.thickness_mm = get_num(jl, "sample.layers[]", "thickness_mm");
        if (layer.thickness_mm < 0.0)
          throw ConfigError("layer thickness must be >= 0");
        s.sample.layers.push_back(std::move(layer));
      }
    }
  }

  if (j.contains("loss")) {
    const auto& jl = j.at("loss");
    require_keys(jl, "loss", {"sample_transmission"}, {"sample_transmission"});
    s.sample_transmission = get_num(jl, "loss", "sample_transmission");
    if (!(s.sample_transmission >= 0.0 && s.sample_transmission <= 1.0))
      throw ConfigError("loss.sample_transmission must lie in [0, 1]");
  }

  {
    const auto& jf = j.at("filter");
    require_keys(jf, "filter", {"centre_wavelength_nm", "fwhm_nm", "shape"},
                 {"centre_wavelength_nm", "fwhm_nm"});
    s.filter.centre_wavelength_nm = get_num(jf, "filter", "centre_wavelength_nm");
    s.filter.fwhm_nm = get_num(jf, "filter", "fwhm_nm");
    if (!(s.filter.centre_wavelength_nm > 0.0) || !(s.filter.fwhm_nm > 0.0))
      throw ConfigError("filter parameters must be positive");
    if (jf.contains("shape")) {
      const auto shape = jf.at("shape").get<std::string>();
      if (shape == "gaussian") s.filter.shape = FilterShape::Gaussian;
      else if (shape == "rect") s.filter.shape = FilterShape::Rectangular;
      else throw ConfigError("filter.shape must be 'gaussian' or 'rect'");
    }
  }

  if (j.contains("sfg_acceptance")) {
    const auto& ja = j.at("sfg_acceptance");
    if (ja.is_string()) {
      if (ja.get<std::string>() != "ideal")
        throw ConfigError("sfg_acceptance must be a width in nm or the string 'ideal'");
    } else if (ja.is_number()) {
      const double w = ja.get<double>();
      if (!(w > 0.0)) throw ConfigError("sfg_acceptance width must be positive");
      s.sfg_acceptance_fwhm_nm = w;
    } else {
      throw ConfigError("sfg_acceptance must be a width in nm or the string 'ideal'");
    }
  }

  if (j.contains("detector")) {
    const auto& jd = j.at("detector");
    require_keys(jd, "detector", {"background", "bias"}, {});
    if (jd.contains("background"))
      s.detector.background = get_num(jd, "detector", "background");
    if (jd.contains("bias")) s.detector.bias = get_num(jd, "detector", "bias");
    if (s.detector.background < 0.0)
      throw ConfigError("detector.background must be >= 0");
  }

  if (j.contains("grid")) {
    const auto& jg = j.at("grid");
    require_keys(jg, "grid", {"n_points", "span_factor", "span_fs"}, {});
    if (jg.contains("n_points")) {
      const double n = get_num(jg, "grid", "n_points");
      s.grid.n_points = static_cast<int>(n);
      if (s.grid.n_points != n) throw ConfigError("grid.n_points must be an integer");
    }
    if (jg.contains("span_factor")) {
      s.grid.span_factor = get_num(jg, "grid", "span_factor");
      if (!(s.grid.span_factor >= 4.0))
        throw ConfigError("grid.span_factor must be >= 4 (pulses need a guard band)");
    }
    if (jg.contains("span_fs")) s.grid.span_fs_override = get_num(jg, "grid", "span_fs");
  }

  cfg.scan = parse_scan(j.at("scan"), "scan");
  if (j.contains("wli_scan")) cfg.wli_scan = parse_scan(j.at("wli_scan"), "wli_scan");

  if (j.contains("spectrum_map")) {
    const auto& jm = j.at("spectrum_map");
    require_keys(jm, "spectrum_map",
                 {"span_nm", "bin_nm", "start_um", "stop_um", "step_um"}, {});
    if (jm.contains("span_nm")) cfg.map.span_nm = get_num(jm, "spectrum_map", "span_nm");
    if (jm.contains("bin_nm")) cfg.map.bin_nm = get_num(jm, "spectrum_map", "bin_nm");
    const int n_scan_keys = jm.contains("start_um") + jm.contains("stop_um") +
                            jm.contains("step_um");
    if (n_scan_keys == 3) {
      ScanSpec ms;
      ms.start_um = get_num(jm, "spectrum_map", "start_um");
      ms.stop_um = get_num(jm, "spectrum_map", "stop_um");
      ms.step_um = get_num(jm, "spectrum_map", "step_um");
      cfg.map_scan = ms;
    } else if (n_scan_keys != 0) {
      throw ConfigError("spectrum_map scan override needs all of start_um, stop_um, step_um");
    }
  }

  if (j.contains("loss_sweep")) {
    const auto& jl = j.at("loss_sweep");
    require_keys(jl, "loss_sweep", {"transmissions"}, {"transmissions"});
    cfg.loss_transmissions = jl.at("transmissions").get<std::vector<double>>();
    for (double eta : cfg.loss_transmissions)
      if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("loss_sweep transmissions must lie in [0, 1]");
  }

  return cfg;
}

} // namespace cpi
