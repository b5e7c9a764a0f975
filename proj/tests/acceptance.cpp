// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "sqz/cavity.hpp"
#include "sqz/constants.hpp"
#include "sqz/estimation.hpp"
#include "sqz/io.hpp"
#include "sqz/quadrature.hpp"
#include "sqz/rng.hpp"
#include "sqz/synth.hpp"

using namespace sqz;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %-55s %s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  if (!ok) ++failures;
}

SqueezerParams reference_params() {
  SqueezerParams p;
  p.efficiency = 0.965;
  p.threshold_power = 0.221;
  p.phase_jitter = deg_to_rad(0.66);
  p.cavity = {0.10, 0.001, 0.0798};
  return p;
}

CavityLayout opa_layout() {
  CavityLayout layout;
  layout.wavelength = 1550e-9;
  layout.elements = {CurvedMirror{25e-3, 0.90, 1.0}, Gap{23e-3},
                     FlatInterface{}, Slab{9.3e-3, 1.816},
                     CurvedMirror{12e-3, 1.0, 1.816}};
  return layout;
}

CavityLayout shg_layout() {
  CavityLayout layout;
  layout.wavelength = 1550e-9;
  layout.elements = {CurvedMirror{25e-3, 0.90, 1.0}, Gap{20e-3},
                     FlatInterface{}, Slab{10e-3, 1.816},
                     FlatInterface{},  Gap{20e-3},
                     CurvedMirror{25e-3, 1.0, 1.0}};
  return layout;
}

void criterion_1_reference_point() {
  const auto params = reference_params();
  const VariancePair mixed = apply_phase_jitter(
      opa_variance_pair(params, {0.180, 5e6}), params.phase_jitter);
  const double sqz_db = to_db(mixed.v1);
  const double asqz_db = to_db(mixed.v2);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "sqz %.3f dB, antisqz %.3f dB",
                sqz_db, asqz_db);
  const bool ok = std::abs(sqz_db - (-12.41)) < 0.1 &&
                  std::abs(asqz_db - 19.3) < 0.6;
  report("1 reference-point model values", ok, detail);
}

void criterion_2_zero_jitter_bound() {
  auto params = reference_params();
  params.phase_jitter = 0.0;
  const VariancePair pair = opa_variance_pair(params, {0.180, 2.5e6});
  const double sqz_db = to_db(pair.v1);
  char detail[64];
  std::snprintf(detail, sizeof(detail), "sqz %.3f dB at 2.5 MHz", sqz_db);
  report("2 zero-phase-noise squeezing bound",
         std::abs(sqz_db - (-14.05)) < 0.10, detail);
}

void criterion_3_cavity_figures() {
  const CavityLayout opa = opa_layout();
  const CavityLayout shg = shg_layout();
  const double opa_w0 = eigenmode(opa).waist_radius * 1e6;
  const double shg_w0 = eigenmode(shg).waist_radius * 1e6;
  const double opa_fwhm = fwhm_linewidth(opa, 0.90, 1.0, 0.001) / 1e6;
  const double shg_fwhm = fwhm_linewidth(shg, 0.90, 1.0, 0.0) / 1e6;
  const double round_trip = optical_round_trip_length(opa) * 1e3;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "OPA w0 %.2f um fwhm %.2f MHz rt %.3f mm; SHG w0 %.2f um "
                "fwhm %.2f MHz",
                opa_w0, opa_fwhm, round_trip, shg_w0, shg_fwhm);
  const bool ok = std::abs(opa_w0 / 40.3 - 1.0) < 0.05 &&
                  std::abs(opa_fwhm / 63.6 - 1.0) < 0.05 &&
                  std::abs(shg_w0 / 59.4 - 1.0) < 0.05 &&
                  std::abs(shg_fwhm / 43.3 - 1.0) < 0.05 &&
                  std::abs(round_trip - 79.8) < 0.1;
  report("3 cavity figures (OPA + SHG)", ok, detail);
}

std::vector<double> sweep_powers() {
  std::vector<double> powers;
  for (int i = 0; i < 12; ++i) powers.push_back(0.006 + 0.174 * i / 11.0);
  return powers;
}

void criterion_4_noiseless_round_trip() {
  const auto truth = reference_params();
  TraceSpec spec;
  spec.n_points = 100;
  spec.rbw = 200e3;
  spec.vbw = 200;
  spec.relative_scatter = 0.0;
  spec.seed = 1;
  const Dataset d = synth_pump_sweep(truth, sweep_powers(), 5e6, spec, 0.0);
  const FitResult r = fit(d);
  const double de = std::abs(r.params.efficiency / truth.efficiency - 1.0);
  const double dp =
      std::abs(r.params.threshold_power / truth.threshold_power - 1.0);
  const double dt = std::abs(r.params.phase_jitter / truth.phase_jitter - 1.0);
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "rel dev eta %.1e, P_thr %.1e, theta %.1e", de, dp, dt);
  report("4 noiseless fit round-trip",
         r.converged && de < 1e-6 && dp < 1e-6 && dt < 1e-6, detail);
}

void criterion_5_noisy_round_trip() {
  const auto truth = reference_params();
  const int n_rep = 100;
  int within_3sigma = 0;
  std::vector<double> err_eta, err_pthr, err_theta;
  for (int rep = 0; rep < n_rep; ++rep) {
    TraceSpec spec;
    spec.n_points = 300;
    spec.rbw = 200e3;
    spec.vbw = 200;
    spec.relative_scatter = 0.0715;  // 0.3 dB trace scatter
    spec.seed = 1000 + rep;
    const Dataset d = synth_pump_sweep(truth, sweep_powers(), 5e6, spec, 0.03);
    const FitResult r = fit(d);
    if (!r.converged) continue;
    const bool ok =
        std::abs(r.params.efficiency - truth.efficiency) <
            3.0 * r.std_errors[0] &&
        std::abs(r.params.threshold_power - truth.threshold_power) <
            3.0 * r.std_errors[1] &&
        std::abs(r.params.phase_jitter - truth.phase_jitter) <
            3.0 * r.std_errors[2];
    if (ok) ++within_3sigma;
    err_eta.push_back(r.std_errors[0]);
    err_pthr.push_back(r.std_errors[1]);
    err_theta.push_back(r.std_errors[2]);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double med_eta = median(err_eta);
  const double med_pthr = median(err_pthr);
  const double med_theta = median(err_theta);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d/%d in 3 sigma; median errs %.4f, %.1f mW, %.3f deg",
                within_3sigma, n_rep, med_eta, med_pthr * 1e3,
                rad_to_deg(med_theta));
  auto factor_ok = [](double value, double ref) {
    return value > ref / 3.0 && value < ref * 3.0;
  };
  const bool ok = within_3sigma >= 95 && factor_ok(med_eta, 0.002) &&
                  factor_ok(med_pthr, 0.003) &&
                  factor_ok(med_theta, deg_to_rad(0.06));
  report("5 noisy fit round-trip (100 repetitions)", ok, detail);
}

void criterion_6_invariants() {
  bool ok = true;
  std::string why = "all invariants hold";
  CounterRng rng(606);

  // eta = 1 purity, ordering, jitter sum conservation
  for (int i = 0; i < 1000 && ok; ++i) {
    SqueezerParams p;
    p.efficiency = 1.0;
    p.threshold_power = 0.05 + 0.5 * rng.uniform();
    p.phase_jitter = 1.5 * rng.uniform();
    p.cavity = {0.01 + 0.2 * rng.uniform(), 0.005 * rng.uniform(),
                0.02 + 0.2 * rng.uniform()};
    const OperatingPoint op{0.95 * p.threshold_power * rng.uniform(),
                            1e5 + 5e7 * rng.uniform()};
    const VariancePair pair = opa_variance_pair(p, op);
    if (std::abs(uncertainty_product(pair) - 1.0) > 1e-9) {
      ok = false;
      why = "eta=1 purity violated";
    }
    if (pair.v1 > 1.0 || pair.v2 < 1.0) {
      ok = false;
      why = "variance ordering violated";
    }
    const VariancePair mixed = apply_phase_jitter(pair, p.phase_jitter);
    if (mixed.v2 != (pair.v1 + pair.v2) - mixed.v1) {
      ok = false;
      why = "jitter sum not conserved";
    }
  }

  // Jacobian vs central finite differences, 20 random configurations
  for (int trial = 0; trial < 20 && ok; ++trial) {
    SqueezerParams p;
    p.efficiency = 0.5 + 0.45 * rng.uniform();
    p.threshold_power = 0.1 + 0.3 * rng.uniform();
    p.phase_jitter = 0.005 + 0.05 * rng.uniform();
    p.cavity = {0.05 + 0.1 * rng.uniform(), 0.001,
                0.05 + 0.1 * rng.uniform()};
    MeasurementPoint pt;
    pt.pump_power = (0.1 + 0.8 * rng.uniform()) * p.threshold_power;
    pt.sigma_pump = 0.0;
    pt.frequency = 1e6 + 2e7 * rng.uniform();
    pt.tag = rng.uniform() < 0.5 ? QuadratureTag::squeezed
                                 : QuadratureTag::antisqueezed;
    pt.value_db = 0.0;
    pt.sigma_db = 0.3;
    const auto g = model_gradient(p, pt);
    const std::array<double, 3> steps = {1e-6 * std::max(p.efficiency, 0.1),
                                         1e-6 * p.threshold_power,
                                         1e-6 * std::max(p.phase_jitter, 0.1)};
    for (int k = 0; k < 3 && ok; ++k) {
      SqueezerParams hi = p, lo = p;
      (k == 0 ? hi.efficiency : k == 1 ? hi.threshold_power
                                       : hi.phase_jitter) += steps[k];
      (k == 0 ? lo.efficiency : k == 1 ? lo.threshold_power
                                       : lo.phase_jitter) -= steps[k];
      const double fd = (model_prediction(hi, pt) - model_prediction(lo, pt)) /
                        (2.0 * steps[k]);
      if (std::abs(fd) > 1e-8 && std::abs(g[k] / fd - 1.0) > 1e-5) {
        ok = false;
        why = "Jacobian/finite-difference mismatch";
      }
    }
  }

  // dB round trip across [1e-6, 1e6]
  for (int i = 0; i < 1000 && ok; ++i) {
    const double v = std::pow(10.0, 12.0 * (rng.uniform() - 0.5));
    if (std::abs(from_db(to_db(v)) / v - 1.0) > 1e-12) {
      ok = false;
      why = "dB round-trip drift";
    }
  }

  // CSV write/read identity
  {
    TraceSpec spec;
    spec.n_points = 40;
    spec.rbw = 200e3;
    spec.vbw = 200;
    spec.relative_scatter = 0.0715;
    spec.seed = 17;
    const Dataset d = synth_pump_sweep(reference_params(),
                                       {0.006, 0.056, 0.106, 0.180}, 5e6,
                                       spec, 0.03);
    std::stringstream buf;
    io::write_dataset_csv(buf, d);
    Dataset back = io::read_dataset_csv(buf);
    back.cavity = d.cavity;
    std::stringstream buf2;
    io::write_dataset_csv(buf2, back);
    std::stringstream buf1;
    io::write_dataset_csv(buf1, d);
    if (buf1.str() != buf2.str()) {
      ok = false;
      why = "CSV round-trip not identical";
    }
    // seeded determinism
    const Dataset d2 = synth_pump_sweep(reference_params(),
                                        {0.006, 0.056, 0.106, 0.180}, 5e6,
                                        spec, 0.03);
    std::stringstream buf3;
    io::write_dataset_csv(buf3, d2);
    if (buf1.str() != buf3.str()) {
      ok = false;
      why = "seeded rerun not byte-identical";
    }
  }

  report("6 invariant suites", ok, why);
}

void criterion_7_dark_noise_correction() {
  const double corrected_db =
      to_db(normalize_and_correct(from_db(-12.3), 1.0, from_db(-26.0)));
  char detail[64];
  std::snprintf(detail, sizeof(detail), "corrected %.4f dB", corrected_db);
  report("7 dark-noise correction",
         std::abs(corrected_db - (-12.48)) < 0.02, detail);
}

}  // namespace

int main() {
  criterion_1_reference_point();
  criterion_2_zero_jitter_bound();
  criterion_3_cavity_figures();
  criterion_4_noiseless_round_trip();
  criterion_5_noisy_round_trip();
  criterion_6_invariants();
  criterion_7_dark_noise_correction();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
