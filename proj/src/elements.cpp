#include "cpi/elements.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cpi/errors.hpp"
#include "cpi/units.hpp"

namespace cpi {

using units::kC_mm_fs;
using units::kFourLn2;
using units::kTwoPi;

double IndexModel::n_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  double n2 = 0.0;
  for (const auto& t : terms) {
    switch (t.kind) {
      case DispersionTerm::Kind::Constant: n2 += t.b; break;
      case DispersionTerm::Kind::Sellmeier: n2 += t.b * l2 / (l2 - t.c); break;
      case DispersionTerm::Kind::Pole: n2 += t.b / (l2 - t.c); break;
      case DispersionTerm::Kind::LambdaSq: n2 += t.b * l2; break;
    }
  }
  return n2;
}

double IndexModel::index(double lambda_um) const {
  return std::sqrt(n_squared(lambda_um));
}

namespace {

double layer_phase_at(const Layer& layer, double omega) {
  if (const auto* tm = std::get_if<TaylorModel>(&layer.material.model)) {
    const double W = omega - tm->omega_ref;
    double per_mm = tm->alpha_fs_per_mm * W + tm->beta_fs2_per_mm * W * W;
    double Wk = W * W;
    for (double c : tm->higher) {
      Wk *= W;
      per_mm += c * Wk;
    }
    return per_mm * layer.thickness_mm;
  }
  const auto& im = std::get<IndexModel>(layer.material.model);
  const double lambda_um = kTwoPi * units::kC_um_fs / omega;
  const double n2 = im.n_squared(lambda_um);
  if (!(n2 > 1.0))
    throw NumericalError("material '" + layer.material.name +
                         "' has n^2 <= 1 at lambda = " + std::to_string(lambda_um) +
                         " um (resonance inside the simulated band?)");
  return (std::sqrt(n2) - 1.0) * omega / kC_mm_fs * layer.thickness_mm;
}

} // namespace

double material_phase_at(const SampleStack& stack, double omega) {
  double phi = 0.0;
  for (const auto& layer : stack.layers) phi += layer_phase_at(layer, omega);
  return phi;
}

std::vector<double> material_phase(const SampleStack& stack,
                                   const FrequencyGrid& grid) {
  std::vector<double> phi(grid.n_points, 0.0);
  if (stack.empty()) return phi;
  for (int k = 0; k < grid.n_points; ++k)
    phi[k] = material_phase_at(stack, grid.omega(k));
  return phi;
}

double group_delay(const SampleStack& stack, double omega_eval, double fd_step) {
  double gd = 0.0;
  for (const auto& layer : stack.layers) {
    if (const auto* tm = std::get_if<TaylorModel>(&layer.material.model)) {
      const double W = omega_eval - tm->omega_ref;
      double per_mm = tm->alpha_fs_per_mm + 2.0 * tm->beta_fs2_per_mm * W;
      double Wk = W;
      for (std::size_t i = 0; i < tm->higher.size(); ++i) {
        const double k = static_cast<double>(i + 3);
        per_mm += k * tm->higher[i] * Wk * W;
        Wk *= W;
      }
      gd += per_mm * layer.thickness_mm;
    } else {
      SampleStack one{{layer}};
      gd += (material_phase_at(one, omega_eval + fd_step) -
             material_phase_at(one, omega_eval - fd_step)) / (2.0 * fd_step);
    }
  }
  return gd;
}

double gvd(const SampleStack& stack, double omega_eval, double fd_step) {
  double g = 0.0;
  for (const auto& layer : stack.layers) {
    if (const auto* tm = std::get_if<TaylorModel>(&layer.material.model)) {
      const double W = omega_eval - tm->omega_ref;
      double per_mm = tm->beta_fs2_per_mm;
      double Wk = 1.0;
      for (std::size_t i = 0; i < tm->higher.size(); ++i) {
        const double k = static_cast<double>(i + 3);
        per_mm += 0.5 * k * (k - 1.0) * tm->higher[i] * Wk * W;
        Wk *= W;
      }
      g += per_mm * layer.thickness_mm;
    } else {
      SampleStack one{{layer}};
      const double p0 = material_phase_at(one, omega_eval);
      const double pp = material_phase_at(one, omega_eval + fd_step);
      const double pm = material_phase_at(one, omega_eval - fd_step);
      g += 0.5 * (pp - 2.0 * p0 + pm) / (fd_step * fd_step);
    }
  }
  return g;
}

SpectralField apply_spectral_phase(const SpectralField& f,
                                   std::span<const double> phase) {
  if (phase.size() != f.samples.size())
    throw std::invalid_argument("phase array length does not match field");
  SpectralField out = f;
  for (std::size_t k = 0; k < phase.size(); ++k)
    out.samples[k] *= std::polar(1.0, phase[k]);
  return out;
}

ChirpSpec chirp_for_duration(double target_duration_fs,
                             double spectral_fwhm_radfs, int sign) {
  if (!(spectral_fwhm_radfs > 0.0))
    throw std::invalid_argument("spectral width must be positive");
  const double tl = kFourLn2 / spectral_fwhm_radfs;
  if (!(target_duration_fs >= 10.0 * tl))
    throw ConfigError("chirp target below 10x the transform limit");
  const double a = target_duration_fs / (2.0 * spectral_fwhm_radfs);
  return ChirpSpec{sign >= 0 ? a : -a, 0.0};
}

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

template <typename Field>
std::pair<Field, Field> bs_combine(const Field& c, const Field& a) {
  if (!(c.grid == a.grid))
    throw std::invalid_argument("beamsplitter inputs on mismatched grids");
  Field out1 = c, out2 = c;
  for (std::size_t j = 0; j < c.samples.size(); ++j) {
    out1.samples[j] = (c.samples[j] + a.samples[j]) * kInvSqrt2;
    out2.samples[j] = (c.samples[j] - a.samples[j]) * kInvSqrt2;
  }
  return {std::move(out1), std::move(out2)};
}

} // namespace

std::pair<TemporalField, TemporalField>
beamsplitter_combine(const TemporalField& c, const TemporalField& a) {
  if (c.carrier != a.carrier)
    throw std::invalid_argument("beamsplitter inputs at different carriers");
  return bs_combine(c, a);
}

std::pair<SpectralField, SpectralField>
beamsplitter_combine(const SpectralField& c, const SpectralField& a) {
  return bs_combine(c, a);
}

namespace {

template <typename Field>
Field attenuate_impl(const Field& f, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw ConfigError("transmission must lie in [0, 1]");
  Field out = f;
  const double amp = std::sqrt(eta);
  for (auto& s : out.samples) s *= amp;
  return out;
}

} // namespace

TemporalField attenuate(const TemporalField& f, double eta) {
  return attenuate_impl(f, eta);
}
SpectralField attenuate(const SpectralField& f, double eta) {
  return attenuate_impl(f, eta);
}

TemporalField delay_field(const TemporalField& f, double tau_fs) {
  if (std::abs(tau_fs) > f.grid.span_fs() / 4.0)
    throw NumericalError("delay exceeds the grid guard band (wrap-around)");
  SpectralField spec = to_spectrum(f);
  for (int k = 0; k < spec.grid.n_points; ++k)
    spec.samples[k] *= std::polar(1.0, spec.grid.detuning(k) * tau_fs);
  TemporalField out = f;
  auto fft = Fft::get(f.grid.n_points);
  samples_from_spectrum(f.grid, *fft, spec.samples.data(), out.samples.data());
  const Complex carrier_rot = std::polar(1.0, f.carrier * tau_fs);
  for (auto& s : out.samples) s *= carrier_rot;
  return out;
}

std::vector<double> filter_transmission(const FrequencyGrid& grid,
                                        double centre_nm, double fwhm_nm,
                                        FilterShape shape) {
  std::vector<double> T(grid.n_points, 1.0);
  if (std::isinf(fwhm_nm)) return T;
  if (!(fwhm_nm > 0.0)) throw ConfigError("filter width must be positive");
  const double wc = units::omega_from_wavelength_nm(centre_nm);
  if (std::abs(wc - grid.omega_offset) > grid.band_halfwidth())
    throw NumericalError("filter centre outside the grid band");
  const double fw = units::omega_width_from_wavelength_width(fwhm_nm, centre_nm);
  for (int k = 0; k < grid.n_points; ++k) {
    const double d = grid.omega(k) - wc;
    if (shape == FilterShape::Gaussian)
      T[k] = std::exp(-kFourLn2 * d * d / (fw * fw));
    else
      T[k] = std::abs(d) <= fw / 2.0 ? 1.0 : 0.0;
  }
  return T;
}

SpectralField bandpass_filter(const SpectralField& f, double centre_nm,
                              double fwhm_nm, FilterShape shape) {
  const auto T = filter_transmission(f.grid, centre_nm, fwhm_nm, shape);
  SpectralField out = f;
  for (int k = 0; k < f.grid.n_points; ++k)
    out.samples[k] *= std::sqrt(T[k]);
  return out;
}

// ---------------------------------------------------------------------------
// materials file

namespace {

using nlohmann::json;

DispersionTerm::Kind term_kind(const std::string& s) {
  if (s == "constant") return DispersionTerm::Kind::Constant;
  if (s == "sellmeier") return DispersionTerm::Kind::Sellmeier;
  if (s == "pole") return DispersionTerm::Kind::Pole;
  if (s == "lambda_sq") return DispersionTerm::Kind::LambdaSq;
  throw ConfigError("unknown dispersion term kind '" + s + "'");
}

MaterialSpec parse_material(const std::string& name, const json& j) {
  MaterialSpec m;
  m.name = name;
  m.source = j.value("source", "");
  const std::string model = j.at("model").get<std::string>();
  if (model == "sellmeier") {
    const auto b = j.at("b").get<std::vector<double>>();
    const auto c = j.at("c").get<std::vector<double>>();
    if (b.size() != c.size() || b.empty())
      throw ConfigError("material '" + name + "': b and c must be equal-length, non-empty");
    IndexModel im;
    im.terms.push_back({DispersionTerm::Kind::Constant, 1.0, 0.0});
    for (std::size_t i = 0; i < b.size(); ++i)
      im.terms.push_back({DispersionTerm::Kind::Sellmeier, b[i], c[i]});
    m.model = std::move(im);
  } else if (model == "dispersion_formula") {
    IndexModel im;
    for (const auto& t : j.at("terms")) {
      DispersionTerm term;
      term.kind = term_kind(t.at("kind").get<std::string>());
      term.b = t.at("b").get<double>();
      term.c = t.value("c", 0.0);
      im.terms.push_back(term);
    }
    if (im.terms.empty())
      throw ConfigError("material '" + name + "': empty dispersion formula");
    m.model = std::move(im);
  } else if (model == "taylor") {
    TaylorModel tm;
    tm.alpha_fs_per_mm = j.value("alpha_fs_per_mm", 0.0);
    tm.beta_fs2_per_mm = j.value("beta_fs2_per_mm", 0.0);
    if (j.contains("higher_orders"))
      tm.higher = j.at("higher_orders").get<std::vector<double>>();
    tm.omega_ref = j.at("reference_omega_radfs").get<double>();
    m.model = tm;
  } else {
    throw ConfigError("material '" + name + "': unknown model '" + model + "'");
  }
  return m;
}

} // namespace

MaterialDb MaterialDb::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open materials file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("materials file '" + path + "': " + e.what());
  }
  MaterialDb db;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "header") continue; // free-form provenance block
    db.materials_[it.key()] = parse_material(it.key(), it.value());
  }
  return db;
}

const MaterialSpec& MaterialDb::get(const std::string& name) const {
  auto it = materials_.find(name);
  if (it == materials_.end())
    throw ConfigError("unknown material '" + name + "'");
  return it->second;
}

} // namespace cpi
