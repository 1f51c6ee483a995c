#include "cpi/cli.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpi/analysis.hpp"
#include "cpi/config.hpp"
#include "cpi/cpi_engine.hpp"
#include "cpi/errors.hpp"
#include "cpi/hom.hpp"
#include "cpi/io.hpp"
#include "cpi/units.hpp"
#include "cpi/wli_engine.hpp"

namespace cpi {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json fit_summary(const FitResult& fit) {
  return ordered_json{{"visibility", fit.visibility},
                      {"centre_um", fit.centre_um},
                      {"fwhm_um", fit.fwhm_um},
                      {"fwhm_fs", fit.fwhm_fs},
                      {"baseline", fit.baseline},
                      {"residual_rms", fit.residual_rms},
                      {"converged", fit.converged},
                      {"iterations", fit.iterations}};
}

void print_summary(const std::string& command, ordered_json body) {
  ordered_json out{{"command", command}};
  out.update(body);
  std::cout << out.dump(2) << std::endl;
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  int threads = 1;
  bool gnuplot = false;
};

void add_common(CLI::App* sub, CommonArgs& args, const std::string& default_out) {
  sub->add_option("--config", args.config_path, "experiment config file")
      ->required();
  sub->add_option("--out", args.out_path, "output CSV path")
      ->default_val(default_out);
  sub->add_option("--threads", args.threads,
                  "worker threads for scan points (0 = all cores)")
      ->default_val(1);
  sub->add_flag("--gnuplot", args.gnuplot, "also write a gnuplot script");
}

double pair_centre_omega(const OpticalSetup& s) {
  return units::omega_from_wavelength_nm(s.filter.centre_wavelength_nm) / 2.0;
}

int run_cpi_dip(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const Interferogram tr = cpi_interferogram(cfg.setup, cfg.scan, a.threads);
  write_trace_csv(a.out_path, tr);
  if (a.gnuplot) write_trace_gnuplot(a.out_path, tr);
  const FitResult fit = fit_gaussian_dip(tr);
  auto body = fit_summary(fit);
  body["csv"] = a.out_path;
  print_summary("cpi-dip", body);
  return 0;
}

int run_wli(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const ScanSpec scan = cfg.wli_scan.value_or(cfg.scan);
  const Interferogram tr = wli_interferogram(cfg.setup, scan, a.threads);
  write_trace_csv(a.out_path, tr);
  if (a.gnuplot) write_trace_gnuplot(a.out_path, tr);
  const auto env = hilbert_envelope(tr);
  const auto [fwhm_um, centre_um] = envelope_fwhm_centre(env, tr.stage_um);
  print_summary("wli",
                ordered_json{{"envelope_fwhm_um", fwhm_um},
                             {"envelope_fwhm_fs", units::stage_um_to_delay_fs(fwhm_um)},
                             {"envelope_centre_um", centre_um},
                             {"fringe_visibility", fringe_visibility(tr)},
                             {"csv", a.out_path}});
  return 0;
}

int run_hom_dip(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const OpticalSetup& s = cfg.setup;
  auto [tg, fg] = setup_grids(s);
  SpectralField chirped = arm_spectrum(s, s.chirped, tg, fg);
  SpectralField anti = arm_spectrum(s, s.antichirped, tg, fg);
  const BiphotonSpectrum weights =
      product_biphoton_weights(chirped, anti, pair_centre_omega(s));
  const Interferogram tr = hom_dip(weights, s.sample, cfg.scan, pair_centre_omega(s));
  write_trace_csv(a.out_path, tr);
  if (a.gnuplot) write_trace_gnuplot(a.out_path, tr);
  const FitResult fit = fit_gaussian_dip(tr);
  auto body = fit_summary(fit);
  body["csv"] = a.out_path;
  print_summary("hom-dip", body);
  return 0;
}

int run_spectrum_map(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const SpectrumMap map = sfg_spectrum_map(cfg.setup, cfg.map_scan.value_or(cfg.scan),
                                           cfg.map, a.threads);
  write_map_csv(a.out_path, map);
  if (a.gnuplot) write_map_gnuplot(a.out_path);
  print_summary("spectrum-map",
                ordered_json{{"stage_positions", map.stage_um.size()},
                             {"wavelength_bins", map.wavelength_nm.size()},
                             {"csv", a.out_path}});
  return 0;
}

int run_loss_sweep(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const auto sweep = loss_sweep(cfg.setup, cfg.scan, cfg.loss_transmissions, a.threads);
  write_sweep_csv(a.out_path, sweep);
  if (a.gnuplot) write_sweep_gnuplot(a.out_path);
  ordered_json rows = ordered_json::array();
  for (const auto& [eta, v] : sweep)
    rows.push_back(ordered_json{{"transmission", eta}, {"visibility", v}});
  print_summary("loss-sweep", ordered_json{{"points", rows}, {"csv", a.out_path}});
  return 0;
}

int run_fit(const std::string& csv_path, std::optional<double> bias) {
  Interferogram tr = read_trace_csv(csv_path);
  if (bias) tr = subtract_bias(tr, *bias);
  const FitResult fit = fit_gaussian_dip(tr);
  auto body = fit_summary(fit);
  body["csv"] = csv_path;
  body["direct_visibility"] = dip_visibility(tr);
  if (!tr.notes.empty()) body["notes"] = tr.notes;
  print_summary("fit", body);
  return 0;
}

int run_group_delay(const CommonArgs& a) {
  const RunConfig cfg = parse_config(a.config_path);
  const OpticalSetup& s = cfg.setup;
  const double w0 = units::omega_from_wavelength_nm(s.laser.centre_wavelength_nm);
  const double w_pair = pair_centre_omega(s);
  ordered_json layers = ordered_json::array();
  for (const auto& layer : s.sample.layers) {
    SampleStack one{{layer}};
    layers.push_back(ordered_json{
        {"material", layer.material.name},
        {"thickness_mm", layer.thickness_mm},
        {"group_delay_fs", group_delay(one, w_pair)},
        {"gvd_fs2", gvd(one, w_pair)}});
  }
  const double gd = group_delay(s.sample, w_pair);
  print_summary(
      "group-delay",
      ordered_json{{"evaluated_at_nm", units::wavelength_nm_from_omega(w_pair)},
                   {"laser_centre_group_delay_fs", group_delay(s.sample, w0)},
                   {"group_delay_fs", gd},
                   {"excess_group_path_mm", gd * units::kC_mm_fs},
                   {"stage_shift_um", units::delay_fs_to_stage_um(gd)},
                   {"gvd_fs2", gvd(s.sample, w_pair)},
                   {"layers", layers}});
  return 0;
}

} // namespace

int cli_run(const std::vector<std::string>& args) {
  CLI::App app{"Chirped-pulse interferometry simulator"};
  app.require_subcommand(1);

  CommonArgs dip_args, map_args, wli_args, hom_args, sweep_args, gd_args;
  std::string fit_csv;
  std::optional<double> fit_bias;

  add_common(app.add_subcommand("cpi-dip", "cross-correlator dip scan"), dip_args,
             "cpi_dip.csv");
  add_common(app.add_subcommand("spectrum-map", "SFG spectrum versus delay"),
             map_args, "spectrum_map.csv");
  add_common(app.add_subcommand("wli", "white-light interferogram"), wli_args,
             "wli.csv");
  add_common(app.add_subcommand("hom-dip", "coincidence-integral reference dip"),
             hom_args, "hom_dip.csv");
  add_common(app.add_subcommand("loss-sweep", "dip visibility versus loss"),
             sweep_args, "loss_sweep.csv");

  auto* fit_cmd = app.add_subcommand("fit", "Gaussian dip fit of an existing CSV");
  fit_cmd->add_option("csv", fit_csv, "trace CSV to fit")->required();
  double bias_val = 0.0;
  auto* bias_opt = fit_cmd->add_option("--bias", bias_val,
                                       "detector bias to subtract before fitting");

  auto* gd_cmd = app.add_subcommand("group-delay", "sample stack dispersion report");
  gd_cmd->add_option("--config", gd_args.config_path, "experiment config file")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("cpi-dip")) return run_cpi_dip(dip_args);
    if (app.got_subcommand("spectrum-map")) return run_spectrum_map(map_args);
    if (app.got_subcommand("wli")) return run_wli(wli_args);
    if (app.got_subcommand("hom-dip")) return run_hom_dip(hom_args);
    if (app.got_subcommand("loss-sweep")) return run_loss_sweep(sweep_args);
    if (app.got_subcommand("fit")) {
      if (*bias_opt) fit_bias = bias_val;
      return run_fit(fit_csv, fit_bias);
    }
    if (app.got_subcommand("group-delay")) return run_group_delay(gd_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
  return 2;
}

} // namespace cpi
