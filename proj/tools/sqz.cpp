// sqz — command-line front end: model evaluation, spectra, fits,
// trace correction, cavity figures, and synthetic data generation.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sqz/cavity.hpp"
#include "sqz/constants.hpp"
#include "sqz/estimation.hpp"
#include "sqz/io.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/synth.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "csv";
};

json load_config(const GlobalOpts& opts) {
  if (opts.config_path.empty())
    throw sqz::io::ParseError("--config is required");
  json cfg = sqz::io::load_json_file(opts.config_path);
  if (!cfg.is_object())
    throw sqz::io::ParseError("config root must be a JSON object");
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sqz::io::ParseError("cannot open output file '" + path + "'");
  return out;
}

std::string out_path(const GlobalOpts& opts, const json& cfg,
                     const char* key) {
  if (opts.out) return *opts.out;
  if (cfg.contains(key)) return cfg.at(key).get<std::string>();
  return "";
}

double require_number(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg.at(key).is_number())
    throw sqz::io::ParseError(std::string("missing or non-numeric field '") +
                              key + "'");
  return cfg.at(key).get<double>();
}

sqz::SqueezerParams params_from_config(const json& cfg) {
  if (!cfg.contains("params"))
    throw sqz::io::ParseError("config needs a 'params' object");
  sqz::SqueezerParams p = sqz::io::params_from_json(cfg.at("params"));
  p.validate();
  return p;
}

sqz::TraceSpec trace_spec_from_config(const json& cfg,
                                      const GlobalOpts& opts) {
  if (!cfg.contains("trace"))
    throw sqz::io::ParseError("config needs a 'trace' object");
  const json& t = cfg.at("trace");
  sqz::TraceSpec spec;
  spec.n_points = static_cast<int>(require_number(t, "n_points"));
  spec.rbw = require_number(t, "rbw_Hz");
  spec.vbw = require_number(t, "vbw_Hz");
  spec.n_averages = static_cast<int>(t.value("n_averages", 1.0));
  if (t.contains("relative_scatter"))
    spec.relative_scatter = t.at("relative_scatter").get<double>();
  spec.dark_level = t.value("dark_level", 0.0);
  spec.seed = opts.seed.value_or(
      static_cast<std::uint64_t>(t.value("seed", 0.0)));
  spec.validate();
  return spec;
}

std::string fmt_db(double db) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.2f", db);
  return buf;
}

int cmd_model(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  const sqz::SqueezerParams params = params_from_config(cfg);
  const double pump = require_number(cfg, "pump_mW") * 1e-3;
  const double freq = require_number(cfg, "frequency_Hz");

  const sqz::VariancePair mixed = sqz::apply_phase_jitter(
      sqz::opa_variance_pair(params, {pump, freq}), params.phase_jitter);

  if (opts.format == "json") {
    json report;
    report["schema_version"] = sqz::io::kSchemaVersion;
    report["tool_version"] = sqz::io::kToolVersion;
    report["config_hash"] = sqz::io::config_hash(cfg);
    report["inputs"] = cfg;
    report["squeezed_dB"] = sqz::to_db(mixed.v1);
    report["antisqueezed_dB"] = sqz::to_db(mixed.v2);
    report["squeezed_linear"] = mixed.v1;
    report["antisqueezed_linear"] = mixed.v2;
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << fmt_db(sqz::to_db(mixed.v1)) << " dB / "
              << fmt_db(sqz::to_db(mixed.v2)) << " dB\n";
    std::printf("squeezed:       %s dB  (%.6g linear)\n",
                fmt_db(sqz::to_db(mixed.v1)).c_str(), mixed.v1);
    std::printf("anti-squeezed:  %s dB  (%.6g linear)\n",
                fmt_db(sqz::to_db(mixed.v2)).c_str(), mixed.v2);
  }
  return 0;
}

int cmd_spectrum(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  const sqz::SqueezerParams params = params_from_config(cfg);
  if (!cfg.contains("pump_mW") || !cfg.at("pump_mW").is_array() ||
      cfg.at("pump_mW").empty())
    throw sqz::io::ParseError("field 'pump_mW' must be a non-empty array");
  const double f_lo = require_number(cfg, "f_lo_Hz");
  const double f_hi = require_number(cfg, "f_hi_Hz");
  const int n = static_cast<int>(require_number(cfg, "n_points"));
  if (n < 1 || !(f_lo > 0.0) || f_hi < f_lo)
    throw sqz::io::ParseError("empty or invalid frequency range");
  const bool zero_jitter = cfg.value("include_zero_jitter", false);

  sqz::TraceSpec spec;  // noiseless evaluation
  spec.n_points = 2;
  spec.rbw = 1.0;
  spec.vbw = 1.0;
  spec.relative_scatter = 0.0;

  std::vector<double> pumps;
  for (const auto& p : cfg.at("pump_mW")) pumps.push_back(p.get<double>() * 1e-3);

  std::vector<std::vector<sqz::SpectrumPoint>> curves;
  for (double pump : pumps)
    curves.push_back(sqz::synth_spectrum(params, pump, f_lo, f_hi, n, spec));
  std::vector<sqz::SpectrumPoint> nojitter;
  if (zero_jitter) {
    sqz::SqueezerParams quiet = params;
    quiet.phase_jitter = 0.0;
    nojitter = sqz::synth_spectrum(quiet, pumps.back(), f_lo, f_hi, n, spec);
  }

  const std::string path = out_path(opts, cfg, "out");
  std::ofstream file;
  if (!path.empty()) file = open_out(path);
  std::ostream& out = path.empty() ? std::cout : file;

  out << "frequency_Hz";
  for (double pump : pumps) {
    char head[80];
    std::snprintf(head, sizeof(head), ",squeezed_dB_%gmW,antisqueezed_dB_%gmW",
                  pump * 1e3, pump * 1e3);
    out << head;
  }
  if (zero_jitter) out << ",squeezed_dB_nojitter";
  out << "\n";
  for (int i = 0; i < n; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", curves[0][i].frequency);
    out << buf;
    for (const auto& curve : curves) {
      std::snprintf(buf, sizeof(buf), ",%.6f,%.6f", curve[i].squeezed_db,
                    curve[i].antisqueezed_db);
      out << buf;
    }
    if (zero_jitter) {
      std::snprintf(buf, sizeof(buf), ",%.6f", nojitter[i].squeezed_db);
      out << buf;
    }
    out << "\n";
  }
  return 0;
}

int cmd_fit(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  if (!cfg.contains("cavity"))
    throw sqz::io::ParseError("config needs a 'cavity' object");
  sqz::CavityConstants cavity;
  cavity.coupler_transmissivity = require_number(cfg.at("cavity"), "T");
  cavity.round_trip_loss = require_number(cfg.at("cavity"), "L");
  cavity.round_trip_length = require_number(cfg.at("cavity"), "l_m");
  cavity.validate();

  if (!cfg.contains("dataset"))
    throw sqz::io::ParseError("config needs a 'dataset' file path");
  const sqz::Dataset dataset = sqz::io::read_dataset_csv_file(
      cfg.at("dataset").get<std::string>(), cavity);

  sqz::FitConfig fit_cfg;
  if (cfg.contains("fit")) {
    const json& f = cfg.at("fit");
    if (f.value("residual_domain", "dB") == std::string("linear"))
      fit_cfg.residual_domain = sqz::ResidualDomain::linear;
    fit_cfg.fit_phase_jitter = f.value("fit_phase_jitter", true);
    if (f.contains("initial_eta"))
      fit_cfg.initial_efficiency = f.at("initial_eta").get<double>();
    if (f.contains("initial_threshold_mW"))
      fit_cfg.initial_threshold_power =
          f.at("initial_threshold_mW").get<double>() * 1e-3;
    if (f.contains("initial_theta_deg"))
      fit_cfg.initial_phase_jitter =
          sqz::deg_to_rad(f.at("initial_theta_deg").get<double>());
  }

  const sqz::FitResult result = sqz::fit(dataset, fit_cfg);

  json report;
  report["schema_version"] = sqz::io::kSchemaVersion;
  report["tool_version"] = sqz::io::kToolVersion;
  report["config_hash"] = sqz::io::config_hash(cfg);
  report["inputs"] = cfg;
  report["params"] = sqz::io::params_to_json(result.params);
  report["std_errors"] = {{"eta", result.std_errors[0]},
                          {"threshold_mW", result.std_errors[1] * 1e3},
                          {"theta_fluc_deg", sqz::rad_to_deg(result.std_errors[2])}};
  report["covariance"] = result.covariance;
  report["covariance_unscaled"] = result.covariance_unscaled;
  report["chi_squared"] = result.chi_squared;
  report["dof"] = result.dof;
  report["chi_squared_per_dof"] =
      result.dof > 0 ? result.chi_squared / result.dof : 0.0;
  report["converged"] = result.converged;
  report["at_boundary"] = result.at_boundary;
  report["iterations"] = result.iterations;

  // Fitted model curve across the dataset's pump range.
  double p_lo = dataset.points.front().pump_power, p_hi = p_lo;
  double freq = dataset.points.front().frequency;
  for (const auto& pt : dataset.points) {
    p_lo = std::min(p_lo, pt.pump_power);
    p_hi = std::max(p_hi, pt.pump_power);
  }
  const int n_curve = static_cast<int>(cfg.value("curve_points", 100.0));
  json curve = json::array();
  const std::string curve_path = cfg.value("out_curve", "");
  std::ofstream curve_file;
  if (!curve_path.empty()) {
    curve_file = open_out(curve_path);
    curve_file << "pump_mW,squeezed_dB,antisqueezed_dB\n";
  }
  for (int i = 0; i < n_curve; ++i) {
    const double pump = p_lo + (p_hi - p_lo) * i / (n_curve - 1.0);
    const sqz::VariancePair mixed = sqz::apply_phase_jitter(
        sqz::opa_variance_pair(result.params, {pump, freq}),
        result.params.phase_jitter);
    curve.push_back({{"pump_mW", pump * 1e3},
                     {"squeezed_dB", sqz::to_db(mixed.v1)},
                     {"antisqueezed_dB", sqz::to_db(mixed.v2)}});
    if (!curve_path.empty()) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", pump * 1e3,
                    sqz::to_db(mixed.v1), sqz::to_db(mixed.v2));
      curve_file << buf;
    }
  }
  report["curve"] = curve;

  const std::string path = out_path(opts, cfg, "out_report");
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    open_out(path) << report.dump(2) << "\n";
  }
  return 0;
}

int cmd_correct(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  const double vacuum_db = cfg.value("vacuum_dB", 0.0);
  const double vacuum = sqz::from_db(vacuum_db);
  const double dark =
      cfg.contains("dark_dB") ? sqz::from_db(cfg.at("dark_dB").get<double>())
                              : 0.0;

  if (cfg.contains("measured_dB")) {
    const double meas = sqz::from_db(cfg.at("measured_dB").get<double>());
    const double corrected = sqz::normalize_and_correct(meas, vacuum, dark);
    std::printf("%+.4f dB\n", sqz::to_db(corrected));
    return 0;
  }

  if (!cfg.contains("input"))
    throw sqz::io::ParseError("config needs 'measured_dB' or an 'input' file");
  std::ifstream in(cfg.at("input").get<std::string>());
  if (!in)
    throw sqz::io::ParseError("cannot open input file '" +
                              cfg.at("input").get<std::string>() + "'");

  const std::string path = out_path(opts, cfg, "out");
  std::ofstream file;
  if (!path.empty()) file = open_out(path);
  std::ostream& out = path.empty() ? std::cout : file;

  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      out << line << "\n";
      continue;
    }
    if (!header_seen) {
      if (line.find("value_dB") == std::string::npos)
        throw sqz::io::ParseError("missing column 'value_dB' in header",
                                  line_no);
      header_seen = true;
      out << line << "\n";
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw sqz::io::ParseError("expected at least 2 columns", line_no);
    double value_db = 0.0;
    try {
      value_db = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw sqz::io::ParseError("invalid number in column value_dB", line_no);
    }
    const double corrected =
        sqz::normalize_and_correct(sqz::from_db(value_db), vacuum, dark);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", sqz::to_db(corrected));
    out << line.substr(0, comma + 1) << buf << "\n";
  }
  if (!header_seen) throw sqz::io::ParseError("empty input file");
  return 0;
}

int cmd_cavity(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  const json& layout_json =
      cfg.contains("layout") ? cfg.at("layout") : cfg;
  const sqz::CavityLayout layout = sqz::io::layout_from_json(layout_json);
  layout.validate();
  const double loss = cfg.value("round_trip_loss", 0.0);

  const double r1 = layout.coupler().power_reflectivity;
  const double r2 = layout.end_mirror().power_reflectivity;
  const double round_trip = sqz::optical_round_trip_length(layout);

  json report;
  report["schema_version"] = sqz::io::kSchemaVersion;
  report["tool_version"] = sqz::io::kToolVersion;
  report["config_hash"] = sqz::io::config_hash(cfg);
  report["round_trip_mm"] = round_trip * 1e3;
  report["fsr_GHz"] = sqz::free_spectral_range(layout) / 1e9;
  report["finesse"] = sqz::finesse(r1, r2, loss);
  report["fwhm_MHz"] = sqz::fwhm_linewidth(layout, r1, r2, loss) / 1e6;
  sqz::CavityConstants constants{1.0 - r1, loss, round_trip};
  report["decay_rate_per_s"] = sqz::decay_rate(constants);

  try {
    const sqz::EigenmodeResult mode = sqz::eigenmode(layout);
    report["stable"] = true;
    report["waist_um"] = mode.waist_radius * 1e6;
    report["waist_position_mm"] = mode.waist_position * 1e3;
    report["stability_parameter"] = mode.stability_parameter;
    report["rayleigh_range_mm"] = mode.rayleigh_range * 1e3;
  } catch (const sqz::InstabilityError& e) {
    report["stable"] = false;
    report["stability_parameter"] = e.stability;
    report["diagnostic"] = e.what();
  }

  const std::string path = out_path(opts, cfg, "out");
  if (opts.format == "json" || !path.empty()) {
    if (path.empty())
      std::cout << report.dump(2) << "\n";
    else
      open_out(path) << report.dump(2) << "\n";
  } else {
    std::printf("round trip      %.3f mm\n",
                report["round_trip_mm"].get<double>());
    std::printf("FSR             %.4f GHz\n", report["fsr_GHz"].get<double>());
    std::printf("finesse         %.2f\n", report["finesse"].get<double>());
    std::printf("FWHM            %.2f MHz\n", report["fwhm_MHz"].get<double>());
    std::printf("decay rate      %.4g 1/s\n",
                report["decay_rate_per_s"].get<double>());
    if (report["stable"].get<bool>()) {
      std::printf("waist           %.2f um at %.2f mm from coupler\n",
                  report["waist_um"].get<double>(),
                  report["waist_position_mm"].get<double>());
      std::printf("stability       %.4f\n",
                  report["stability_parameter"].get<double>());
    } else {
      std::printf("UNSTABLE        stability parameter %.4f outside (0, 1)\n",
                  report["stability_parameter"].get<double>());
    }
  }
  return 0;
}

int cmd_synth(const GlobalOpts& opts) {
  const json cfg = load_config(opts);
  const sqz::SqueezerParams params = params_from_config(cfg);
  const sqz::TraceSpec spec = trace_spec_from_config(cfg, opts);
  const std::string mode = cfg.value("mode", "sweep");

  const std::string path = out_path(opts, cfg, "out");
  std::ofstream file;
  if (!path.empty()) file = open_out(path);
  std::ostream& out = path.empty() ? std::cout : file;

  if (mode == "sweep") {
    if (!cfg.contains("pump_mW") || !cfg.at("pump_mW").is_array())
      throw sqz::io::ParseError("sweep mode needs a 'pump_mW' array");
    std::vector<double> pumps;
    for (const auto& p : cfg.at("pump_mW"))
      pumps.push_back(p.get<double>() * 1e-3);
    const double freq = require_number(cfg, "frequency_Hz");
    const double jitter = cfg.value("pump_jitter_rel", 0.03);
    sqz::Dataset dataset =
        sqz::synth_pump_sweep(params, pumps, freq, spec, jitter);
    sqz::io::write_dataset_csv(out, dataset);
  } else if (mode == "zero_span") {
    const double pump = require_number(cfg, "pump_mW") * 1e-3;
    const double freq = require_number(cfg, "frequency_Hz");
    const std::string kind_name = cfg.value("kind", "squeezed");
    sqz::TraceKind kind = sqz::TraceKind::squeezed;
    if (kind_name == "antisqueezed") kind = sqz::TraceKind::antisqueezed;
    else if (kind_name == "vacuum") kind = sqz::TraceKind::vacuum;
    else if (kind_name == "dark") kind = sqz::TraceKind::dark;
    else if (kind_name != "squeezed")
      throw sqz::io::ParseError("unknown trace kind '" + kind_name + "'");
    const sqz::Trace trace =
        sqz::synth_zero_span(params, {pump, freq}, kind, spec);
    sqz::io::write_trace_csv(out, trace);
  } else if (mode == "spectrum") {
    const double pump = require_number(cfg, "pump_mW") * 1e-3;
    const double f_lo = require_number(cfg, "f_lo_Hz");
    const double f_hi = require_number(cfg, "f_hi_Hz");
    const int n = static_cast<int>(require_number(cfg, "n_points"));
    const auto points =
        sqz::synth_spectrum(params, pump, f_lo, f_hi, n, spec);
    out << "# seed " << spec.seed << "\n";
    out << "frequency_Hz,squeezed_dB,antisqueezed_dB\n";
    for (const auto& p : points) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.10g,%.6f,%.6f\n", p.frequency,
                    p.squeezed_db, p.antisqueezed_db);
      out << buf;
    }
  } else {
    throw sqz::io::ParseError("unknown synth mode '" + mode + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-light source modeling and characterization"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_option("--config", opts.config_path, "JSON config file")
      ->expected(1);
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "Override the config seed");
  std::string out_value;
  auto* out_opt = app.add_option("--out", out_value, "Output file path");
  app.add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* model = app.add_subcommand("model", "Evaluate the variance model");
  auto* spectrum =
      app.add_subcommand("spectrum", "Emit squeezing spectra as CSV");
  auto* fit = app.add_subcommand("fit", "Fit source parameters to a dataset");
  auto* correct =
      app.add_subcommand("correct", "Dark-noise correct and normalize");
  auto* cavity = app.add_subcommand("cavity", "Cavity eigenmode and figures");
  auto* synth = app.add_subcommand("synth", "Generate synthetic data");

  // Allow the global flags after the subcommand too.
  std::vector<CLI::Option*> seed_opts{seed_opt};
  std::vector<CLI::Option*> out_opts{out_opt};
  for (auto* sub : {model, spectrum, fit, correct, cavity, synth}) {
    sub->add_option("--config", opts.config_path)->expected(1);
    seed_opts.push_back(sub->add_option("--seed", seed_value));
    out_opts.push_back(sub->add_option("--out", out_value));
    sub->add_option("--format", opts.format)
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto given = [](const std::vector<CLI::Option*>& options) {
    return std::any_of(options.begin(), options.end(),
                       [](const CLI::Option* o) { return o->count() > 0; });
  };
  if (given(seed_opts)) opts.seed = seed_value;
  if (given(out_opts)) opts.out = out_value;

  try {
    if (model->parsed()) return cmd_model(opts);
    if (spectrum->parsed()) return cmd_spectrum(opts);
    if (fit->parsed()) return cmd_fit(opts);
    if (correct->parsed()) return cmd_correct(opts);
    if (cavity->parsed()) return cmd_cavity(opts);
    if (synth->parsed()) return cmd_synth(opts);
  } catch (const sqz::io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const sqz::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
