// wavepacket: matter-wave Gaussian packet toolkit CLI.
//
// Subcommands: propagate, curves, fit, oracle-verify, constants.
// Exit codes: 0 success, 1 generic error, 2 parse error, 3 ill-posed fit,
// 4 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "wavepacket/analytic.hpp"
#include "wavepacket/coherence.hpp"
#include "wavepacket/constants.hpp"
#include "wavepacket/experiment.hpp"
#include "wavepacket/io.hpp"
#include "wavepacket/oracle.hpp"

namespace wp = wavepacket;
namespace fs = std::filesystem;

namespace {

struct Settings {
  wp::PhysicalConstants constants{};
  double mass_u = wp::kC70MassU;
  std::optional<double> v_z;
  double b = 1.0e-7;            // m
  int dim = 1;
  double delta_kx = 9.0e6;      // 1/m
  double t = 6.65e-3;           // s
  double detector_fwhm = 12e-6; // m
  std::string kernel = "gaussian";
  double slit_factor = 1.0;
  std::string theta_convention = "sqrt2-sigma";
  bool deconvolve = true;
  std::string vdw_mode = "per_point_flag";
  double vdw_factor = 1.0 / 3.0;
  double vdw_threshold = 0.0;
  // sweeps
  double a_min = 5.0e-8, a_max = 2.0e-6;
  int a_points = 200;
  bool log_x = true;
  double t_max = 6.65e-3;
  int t_steps = 200;
  // oracle
  std::size_t grid_n = 16384;
  int nodes = 32;
  int ladder_steps = 64;
  unsigned seed = 0;
  std::string out_dir = ".";

  double mass() const { return mass_u * constants.atomic_mass_unit; }

  wp::Particle particle() const { return wp::Particle(mass(), v_z); }

  wp::MixedState mixed_state() const {
    return wp::MixedState{wp::PacketParams(b, 1, mass(), constants),
                          wp::CoherenceSpec(delta_kx), particle(), constants};
  }

  wp::DetectorSpec detector() const {
    wp::DetectorSpec d;
    d.fwhm = detector_fwhm;
    if (kernel == "gaussian")
      d.kernel = wp::DetectorKernel::gaussian;
    else if (kernel == "tophat")
      d.kernel = wp::DetectorKernel::tophat;
    else
      throw std::invalid_argument("kernel must be gaussian or tophat");
    return d;
  }

  wp::ExperimentConfig experiment() const {
    wp::VdwPolicy vdw;
    if (vdw_mode == "none")
      vdw.mode = wp::VdwMode::none;
    else if (vdw_mode == "factor_below_threshold")
      vdw.mode = wp::VdwMode::factor_below_threshold;
    else if (vdw_mode == "per_point_flag")
      vdw.mode = wp::VdwMode::per_point_flag;
    else
      throw std::invalid_argument("vdw.mode must be none, factor_below_threshold or per_point_flag");
    vdw.factor = vdw_factor;
    vdw.threshold = vdw_threshold;
    return wp::ExperimentConfig{particle(), t, detector(), slit_factor, vdw,
                                deconvolve, constants};
  }

  std::vector<std::pair<std::string, std::string>> metadata() const {
    using wp::io::format_double;
    std::vector<std::pair<std::string, std::string>> md = {
        {"hbar", format_double(constants.hbar)},
        {"amu", format_double(constants.atomic_mass_unit)},
        {"particle.mass_u", format_double(mass_u)},
        {"packet.b_m", format_double(b)},
        {"coherence.delta_kx", format_double(delta_kx)},
        {"experiment.t_s", format_double(t)},
        {"experiment.detector_fwhm_m", format_double(detector_fwhm)},
        {"experiment.kernel", kernel},
        {"experiment.slit_factor", format_double(slit_factor)},
        {"experiment.deconvolve", deconvolve ? "1" : "0"},
        {"experiment.vdw_mode", vdw_mode},
        {"experiment.theta_convention", theta_convention},
    };
    if (v_z) md.emplace_back("particle.v_z", format_double(*v_z));
    return md;
  }
};

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw wp::io::ParseError("config key '" + key + "': bad number '" + value + "'", 0);
  }
}

void apply_config(Settings& s, const std::map<std::string, std::string>& cfg) {
  for (const auto& [key, value] : cfg) {
    if (key == "hbar") s.constants.hbar = to_double(key, value);
    else if (key == "amu") s.constants.atomic_mass_unit = to_double(key, value);
    else if (key == "particle.mass_u") s.mass_u = to_double(key, value);
    else if (key == "particle.v_z") s.v_z = to_double(key, value);
    else if (key == "packet.b_m") s.b = to_double(key, value);
    else if (key == "packet.dim") s.dim = static_cast<int>(to_double(key, value));
    else if (key == "coherence.delta_kx") s.delta_kx = to_double(key, value);
    else if (key == "experiment.t_s") s.t = to_double(key, value);
    else if (key == "experiment.detector_fwhm_m") s.detector_fwhm = to_double(key, value);
    else if (key == "experiment.kernel") s.kernel = value;
    else if (key == "experiment.slit_factor") s.slit_factor = to_double(key, value);
    else if (key == "experiment.theta_convention") s.theta_convention = value;
    else if (key == "experiment.deconvolve") s.deconvolve = to_double(key, value) != 0.0;
    else if (key == "experiment.vdw_mode") s.vdw_mode = value;
    else if (key == "experiment.vdw_factor") s.vdw_factor = to_double(key, value);
    else if (key == "experiment.vdw_threshold_m") s.vdw_threshold = to_double(key, value);
    else if (key == "curves.a_min_m") s.a_min = to_double(key, value);
    else if (key == "curves.a_max_m") s.a_max = to_double(key, value);
    else if (key == "curves.n_points") s.a_points = static_cast<int>(to_double(key, value));
    else if (key == "curves.log_x") s.log_x = to_double(key, value) != 0.0;
    else if (key == "propagate.t_max_s") s.t_max = to_double(key, value);
    else if (key == "propagate.n_steps") s.t_steps = static_cast<int>(to_double(key, value));
    else if (key == "oracle.grid_n") s.grid_n = static_cast<std::size_t>(to_double(key, value));
    else if (key == "oracle.nodes") s.nodes = static_cast<int>(to_double(key, value));
    else if (key == "oracle.steps") s.ladder_steps = static_cast<int>(to_double(key, value));
    else if (key == "oracle.seed") s.seed = static_cast<unsigned>(to_double(key, value));
    else throw wp::io::ParseError("unknown config key '" + key + "'", 0);
  }
}

std::string out_path(const Settings& s, const std::string& name) {
  fs::create_directories(s.out_dir);
  return (fs::path(s.out_dir) / name).string();
}

std::vector<double> slit_sweep(const Settings& s) {
  std::vector<double> a(static_cast<std::size_t>(s.a_points));
  for (int i = 0; i < s.a_points; ++i) {
    const double f = s.a_points == 1 ? 0.0 : static_cast<double>(i) / (s.a_points - 1);
    a[static_cast<std::size_t>(i)] =
        s.log_x ? s.a_min * std::pow(s.a_max / s.a_min, f)
                : s.a_min + f * (s.a_max - s.a_min);
  }
  return a;
}

int cmd_constants(const Settings& s) {
  using wp::io::format_double;
  std::cout << "hbar_Js=" << format_double(s.constants.hbar) << "\n"
            << "planck_Js=" << format_double(s.constants.planck()) << "\n"
            << "amu_kg=" << format_double(s.constants.atomic_mass_unit) << "\n"
            << "particle.mass_u=" << format_double(s.mass_u) << "\n"
            << "particle.mass_kg=" << format_double(s.mass()) << "\n"
            << "packet.b_m=" << format_double(s.b) << "\n"
            << "packet.tau_b_s=" << format_double(wp::timescale_tau(s.mass(), s.b, s.constants))
            << "\n";
  if (s.v_z) {
    std::cout << "particle.v_z=" << format_double(*s.v_z) << "\n"
              << "lambda_P_m=" << format_double(wp::de_broglie_wavelength(s.particle(), s.constants))
              << "\n"
              << "k_z_per_m=" << format_double(wp::wavenumber_kz(s.particle(), s.constants)) << "\n";
  }
  return 0;
}

int cmd_propagate(const Settings& s) {
  const wp::MixedState ms = s.mixed_state();
  const wp::PureEvolution ev = ms.pure();
  wp::io::CurveFile file;
  file.metadata = s.metadata();
  file.metadata.emplace_back("propagate.t_max_s", wp::io::format_double(s.t_max));
  file.metadata.emplace_back("propagate.n_steps", std::to_string(s.t_steps));
  file.columns = {"t_s", "B_m", "R_s", "mu_pure_rad", "sigma_xx_m2",
                  "sigma_pp_kg2m2s2", "sigma_xp_Js", "det"};
  for (int i = 0; i <= s.t_steps; ++i) {
    const double t = s.t_max * i / s.t_steps;
    const wp::CovarianceMatrix cov = wp::covariance_pure(t, ev);
    file.rows.push_back({t, wp::width_B(t, ms.params), wp::radius_R(t, ms.params),
                         wp::gouy_pure(t, ms.params), cov.sigma_xx, cov.sigma_pp,
                         cov.sigma_xp, cov.determinant()});
  }
  wp::io::write_csv(out_path(s, "propagate.csv"), file);
  std::cout << "wrote " << out_path(s, "propagate.csv") << "\n";
  return 0;
}

int cmd_curves(const Settings& s) {
  const wp::ExperimentConfig cfg = s.experiment();
  const std::vector<double> a = slit_sweep(s);

  struct Sheet {
    std::string stem;
    std::string column;
    std::string y_label;
    std::vector<std::pair<double, double>> data;
  };
  std::vector<Sheet> sheets = {
      {"width_vs_slit", "fwhm_m", "W_FWHM (m)", wp::predict_fwhm_curve(a, s.delta_kx, cfg)},
      {"sigma_xp_vs_slit", "sigma_xp_Js", "sigma_xp (J s)", wp::sigma_xp_curve(a, s.delta_kx, cfg)},
      {"gouy_vs_slit", "gouy_rad", "Gouy phase (rad)", wp::gouy_curve(a, s.delta_kx, cfg)},
  };
  for (const auto& sheet : sheets) {
    wp::io::CurveFile file;
    file.metadata = s.metadata();
    file.columns = {"slit_width_m", sheet.column};
    std::vector<double> xs, ys;
    for (const auto& [x, y] : sheet.data) {
      file.rows.push_back({x, y});
      xs.push_back(x);
      ys.push_back(y);
    }
    wp::io::write_csv(out_path(s, sheet.stem + ".csv"), file);
    wp::io::PlotSpec plot;
    plot.title = sheet.stem;
    plot.x_label = "slit width (m)";
    plot.y_label = sheet.y_label;
    plot.log_x = s.log_x;
    wp::io::write_svg_plot(out_path(s, sheet.stem + ".svg"), xs, ys, plot);
    std::cout << "wrote " << out_path(s, sheet.stem + ".csv") << " and .svg\n";
  }
  return 0;
}

int cmd_fit(const Settings& s, const std::string& dataset_path, double init) {
  const wp::ExperimentConfig cfg = s.experiment();
  const std::vector<wp::DataPoint> data = wp::io::parse_dataset(dataset_path);
  if (data.size() < 3) throw wp::IllPosedFitError("fit requires at least 3 data points");
  const wp::FitResult fit = wp::fit_delta_kx(data, cfg, init);

  using wp::io::format_double;
  std::ofstream report(out_path(s, "fit_report.txt"), std::ios::binary);
  report << "dataset=" << dataset_path << "\n"
         << "n_points=" << data.size() << "\n"
         << "slit_factor=" << format_double(s.slit_factor) << "\n"
         << "vdw_mode=" << s.vdw_mode << " (factor " << format_double(s.vdw_factor) << ")\n"
         << "detector_fwhm_m=" << format_double(s.detector_fwhm) << " kernel=" << s.kernel << "\n"
         << "deconvolve=" << (s.deconvolve ? "on" : "off") << "\n"
         << "t_s=" << format_double(s.t) << "\n"
         << "delta_kx=" << format_double(fit.delta_kx) << "\n"
         << "parameter_stderr=" << format_double(fit.parameter_stderr) << "\n"
         << "residual_rms_m=" << format_double(fit.residual_rms) << "\n"
         << "n_iterations=" << fit.n_iterations << "\n"
         << "converged=" << (fit.converged ? "true" : "false") << "\n";

  wp::io::CurveFile file;
  file.metadata = s.metadata();
  file.metadata.emplace_back("dataset", dataset_path);
  file.columns = {"delta_kx", "parameter_stderr", "residual_rms_m", "n_iterations", "converged"};
  file.rows.push_back({fit.delta_kx, fit.parameter_stderr, fit.residual_rms,
                       static_cast<double>(fit.n_iterations), fit.converged ? 1.0 : 0.0});
  wp::io::write_csv(out_path(s, "fit_result.csv"), file);

  std::cout << "delta_kx = " << format_double(fit.delta_kx)
            << " 1/m (stderr " << format_double(fit.parameter_stderr) << ", rms "
            << format_double(fit.residual_rms) << " m, "
            << (fit.converged ? "converged" : "NOT converged") << ")\n";
  return 0;
}

int cmd_oracle_verify(const Settings& s) {
  const wp::MixedState ms = s.mixed_state();
  const double tau = ms.params.tau_b;
  wp::oracle::EnsembleSpec spec;
  spec.quadrature_nodes = s.nodes;
  spec.grid_n = s.grid_n;
  spec.seed = s.seed;

  wp::io::CurveFile file;
  file.metadata = s.metadata();
  file.columns = {"case_id", "t_over_tau", "numeric", "closed_form", "rel_deviation",
                  "threshold", "pass"};
  int case_id = 0;
  bool all_pass = true;
  auto add_row = [&](double t_over_tau, double numeric, double closed, double threshold,
                     const std::string& what) {
    const double dev = std::abs(numeric - closed) /
                       std::max(std::abs(closed), 1e-300);
    const bool pass = dev <= threshold;
    all_pass = all_pass && pass;
    file.rows.push_back({static_cast<double>(case_id++), t_over_tau, numeric, closed,
                         dev, threshold, pass ? 1.0 : 0.0});
    std::cout << (pass ? "[pass] " : "[FAIL] ") << what << ": numeric "
              << wp::io::format_double(numeric) << " vs " << wp::io::format_double(closed)
              << " (rel dev " << wp::io::format_double(dev) << ")\n";
  };

  // pure-state width and Gouy phase on the standard time ladder
  const wp::MixedState pure{ms.params, wp::CoherenceSpec(0.0), ms.particle, ms.constants};
  const std::vector<double> t_factors = {0.5, 1.0, 5.0, 50.0};
  try {
    const double t_final = t_factors.back() * tau;
    const double half = std::max(8.0 * ms.params.b,
                                 8.0 * wp::width_B(t_final, ms.params));
    const wp::oracle::GridField init =
        wp::oracle::initial_gaussian(ms.params.b, 0.0, half, s.grid_n);
    std::vector<double> times;
    for (double f : t_factors) times.push_back(f * tau);
    const std::vector<double> phases =
        wp::oracle::gouy_ladder(init, times, ms.particle.mass, ms.constants);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const wp::oracle::GridField ft =
          wp::oracle::propagate_free(init, times[i], ms.particle.mass, ms.constants);
      const wp::CovarianceMatrix cov = wp::oracle::numeric_moments(ft, ms.constants);
      add_row(t_factors[i], std::sqrt(2.0 * cov.sigma_xx), wp::width_B(times[i], ms.params),
              1e-6, "pure width B(t)");
      add_row(t_factors[i], phases[i], -0.5 * std::atan(times[i] / tau), 1e-6,
              "pure Gouy phase");
    }
  } catch (const wp::oracle::GridOverflowError& e) {
    std::cout << "[FAIL] pure-state cases: " << e.what() << "\n";
    all_pass = false;
  }

  // mixed-state covariance via ensemble average
  for (double f : {1.0, 5.0}) {
    const double t = f * tau;
    try {
      const auto res = wp::oracle::ensemble_average(ms, t, spec);
      const wp::CovarianceMatrix closed = wp::covariance_mixed(t, ms);
      add_row(f, res.covariance.sigma_xx, closed.sigma_xx, 1e-8, "mixed sigma_xx");
      add_row(f, res.covariance.sigma_pp, closed.sigma_pp, 1e-8, "mixed sigma_pp");
      add_row(f, res.covariance.sigma_xp, closed.sigma_xp, 1e-8, "mixed sigma_xp");
    } catch (const wp::oracle::GridOverflowError& e) {
      std::cout << "[FAIL] mixed covariance at t=" << f << " tau: " << e.what() << "\n";
      all_pass = false;
    }
  }

  // width-integral vs closed-form Gouy phase (numeric widths)
  try {
    const auto report = wp::oracle::verify_conjecture(ms, 3.0 * tau, s.ladder_steps, spec);
    add_row(3.0, report.rows.back().gouy_numeric, report.rows.back().gouy_closed, 1e-5,
            "Gouy width-integral identity");
  } catch (const wp::oracle::GridOverflowError& e) {
    std::cout << "[FAIL] conjecture check: " << e.what() << "\n";
    all_pass = false;
  }

  wp::io::write_csv(out_path(s, "oracle_report.csv"), file);
  std::cout << (all_pass ? "all checks passed\n" : "verification FAILED\n");
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matter-wave Gaussian packet toolkit"};
  app.require_subcommand(1);

  Settings s;
  std::string config_path;
  std::string dataset_path;
  double fit_init = 1.0e6;

  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", s.out_dir, "output directory");
  auto* opt_dkx = app.add_option("--dkx", s.delta_kx, "transverse momentum spread (1/m)");
  auto* opt_t = app.add_option("--t", s.t, "time of flight (s)");
  auto* opt_b = app.add_option("--b", s.b, "packet Gaussian parameter (m)");
  auto* opt_vz = app.add_option("--vz", s.v_z, "longitudinal velocity (m/s)");
  auto* opt_det = app.add_option("--detector-fwhm", s.detector_fwhm, "detector resolution FWHM (m)");
  auto* opt_sf = app.add_option("--slit-factor", s.slit_factor, "slit width -> b factor");
  auto* opt_kernel = app.add_option("--kernel", s.kernel, "detector kernel")
                         ->check(CLI::IsMember({"gaussian", "tophat"}));
  auto* opt_theta = app.add_option("--theta-convention", s.theta_convention,
                                   "angular divergence convention")
                        ->check(CLI::IsMember({"sigma", "sqrt2-sigma"}));

  auto* sub_propagate = app.add_subcommand("propagate", "t-sweep of the pure-state closed forms");
  auto* sub_curves = app.add_subcommand("curves", "width, sigma_xp and Gouy phase vs slit width");
  auto* sub_fit = app.add_subcommand("fit", "fit delta_kx to a slit-width/FWHM dataset");
  sub_fit->add_option("dataset", dataset_path, "dataset CSV")->required();
  sub_fit->add_option("--init", fit_init, "initial delta_kx guess (1/m)");
  auto* sub_oracle = app.add_subcommand("oracle-verify", "numeric oracle vs closed forms");
  auto* sub_constants = app.add_subcommand("constants", "print the constant table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!config_path.empty()) {
      // flags must win over the config file: snapshot flag values first
      Settings flag_values = s;
      apply_config(s, wp::io::read_config(config_path));
      if (opt_dkx->count()) s.delta_kx = flag_values.delta_kx;
      if (opt_t->count()) s.t = flag_values.t;
      if (opt_b->count()) s.b = flag_values.b;
      if (opt_det->count()) s.detector_fwhm = flag_values.detector_fwhm;
      if (opt_sf->count()) s.slit_factor = flag_values.slit_factor;
      if (opt_kernel->count()) s.kernel = flag_values.kernel;
      if (opt_theta->count()) s.theta_convention = flag_values.theta_convention;
      if (opt_vz->count()) s.v_z = flag_values.v_z;
    }

    if (sub_constants->parsed()) return cmd_constants(s);
    if (sub_propagate->parsed()) return cmd_propagate(s);
    if (sub_curves->parsed()) return cmd_curves(s);
    if (sub_fit->parsed()) return cmd_fit(s, dataset_path, fit_init);
    if (sub_oracle->parsed()) return cmd_oracle_verify(s);
    return 1;
  } catch (const wp::io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const wp::IllPosedFitError& e) {
    std::cerr << "ill-posed fit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
