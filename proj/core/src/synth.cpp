#include "sqz/synth.hpp"

#include <cmath>
#include <limits>

#include "sqz/rng.hpp"

namespace sqz {

namespace {

constexpr double kDbFactor = 10.0 / 2.302585092994045684;

double base_variance(const SqueezerParams& params, const OperatingPoint& op,
                     TraceKind kind) {
  switch (kind) {
    case TraceKind::vacuum:
      return 1.0;
    case TraceKind::dark:
      return 0.0;
    default: {
      const VariancePair mixed =
          apply_phase_jitter(opa_variance_pair(params, op), params.phase_jitter);
      return kind == TraceKind::squeezed ? mixed.v1 : mixed.v2;
    }
  }
}

double noisy_sample(double base, double scatter, int n_averages,
                    CounterRng& rng) {
  double acc = 0.0;
  for (int j = 0; j < n_averages; ++j)
    acc += base * (1.0 + scatter * rng.gaussian());
  return acc / n_averages;
}

}  // namespace

void TraceSpec::validate() const {
  if (n_points < 2) throw DomainError("trace needs at least 2 points");
  if (!(rbw > 0.0)) throw DomainError("rbw must be positive");
  if (!(vbw > 0.0)) throw DomainError("vbw must be positive");
  if (n_averages < 1) throw DomainError("n_averages must be >= 1");
  if (relative_scatter && !(*relative_scatter >= 0.0))
    throw DomainError("relative scatter must be >= 0");
  if (!(dark_level >= 0.0 && dark_level < 1.0))
    throw DomainError("dark level must lie in [0, 1)");
}

double TraceSpec::scatter() const {
  if (relative_scatter) return *relative_scatter;
  return 1.0 / std::sqrt(rbw / (2.0 * vbw));
}

Trace synth_zero_span(const SqueezerParams& params, const OperatingPoint& op,
                      TraceKind kind, const TraceSpec& spec) {
  spec.validate();
  params.validate();
  const double base = base_variance(params, op, kind);
  const double s = spec.scatter();

  CounterRng rng(spec.seed);
  Trace trace;
  trace.kind = kind;
  trace.spec = spec;
  trace.samples.reserve(spec.n_points);
  for (int i = 0; i < spec.n_points; ++i) {
    double value = kind == TraceKind::dark
                       ? noisy_sample(spec.dark_level, s, spec.n_averages, rng)
                       : noisy_sample(base, s, spec.n_averages, rng) +
                             spec.dark_level;
    trace.samples.push_back(value);
  }
  return trace;
}

TraceSummary reduce_trace(const Trace& trace) {
  const auto n = trace.samples.size();
  if (n < 2) throw TraceError("trace too short to reduce");
  if (trace.kind != TraceKind::dark)
    for (double v : trace.samples)
      if (!(v > 0.0)) throw TraceError("non-positive sample in light trace");

  double mean_idx = (static_cast<double>(n) - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double v : trace.samples) mean_y += v;
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - mean_idx;
    sxx += dx * dx;
    sxy += dx * (trace.samples[i] - mean_y);
  }
  const double slope = sxy / sxx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fitted =
        mean_y + slope * (static_cast<double>(i) - mean_idx);
    const double res = trace.samples[i] - fitted;
    ss_res += res * res;
  }
  const double resid_std =
      n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0)) : 0.0;

  TraceSummary out;
  out.mean_linear = mean_y;  // fitted line evaluated at the midpoint
  if (mean_y > 0.0) {
    out.mean_db = to_db(mean_y);
    out.sigma_db = kDbFactor * resid_std / mean_y;
  } else {
    out.mean_db = -std::numeric_limits<double>::infinity();
    out.sigma_db = 0.0;
  }
  return out;
}

Dataset synth_pump_sweep(const SqueezerParams& params,
                         const std::vector<double>& pump_powers,
                         double frequency, const TraceSpec& spec,
                         double pump_jitter_rel) {
  spec.validate();
  params.validate();
  if (pump_powers.empty()) throw DomainError("empty pump power list");
  if (!(pump_jitter_rel >= 0.0))
    throw DomainError("pump jitter must be >= 0");

  CounterRng master(spec.seed);
  Dataset dataset;
  dataset.cavity = params.cavity;
  dataset.metadata.push_back("synthetic pump sweep, seed " +
                             std::to_string(spec.seed));

  for (double power : pump_powers) {
    if (power >= params.threshold_power)
      throw AboveThresholdError(power, params.threshold_power);
    // The true pump drives the source; the recorded reading carries the
    // calibration error.
    const double recorded =
        power * (1.0 + pump_jitter_rel * master.gaussian());
    const OperatingPoint op{power, frequency};
    for (const TraceKind kind :
         {TraceKind::squeezed, TraceKind::antisqueezed}) {
      TraceSpec sub = spec;
      sub.seed = master.next_u64();
      // Acquisitions drift between traces; the drift factor shares the
      // within-trace scatter scale, so the reduced mean fluctuates at the
      // level its sigma_db quotes.
      const double drift = 1.0 + spec.scatter() * master.gaussian();
      Trace trace = synth_zero_span(params, op, kind, sub);
      for (double& v : trace.samples) v *= drift;
      const TraceSummary summary = reduce_trace(trace);
      MeasurementPoint point;
      point.pump_power = recorded;
      point.sigma_pump = pump_jitter_rel * recorded;
      point.frequency = frequency;
      point.tag = kind == TraceKind::squeezed ? QuadratureTag::squeezed
                                              : QuadratureTag::antisqueezed;
      point.value_db = summary.mean_db;
      point.sigma_db = std::max(summary.sigma_db, 1e-9);
      dataset.points.push_back(point);
    }
  }
  return dataset;
}

std::vector<SpectrumPoint> synth_spectrum(const SqueezerParams& params,
                                          double pump_power, double f_lo,
                                          double f_hi, int n,
                                          const TraceSpec& spec) {
  spec.validate();
  params.validate();
  if (n < 1) throw DomainError("spectrum needs at least 1 point");
  if (!(f_lo > 0.0) || f_hi < f_lo)
    throw DomainError("invalid frequency range");

  const double s = spec.scatter();
  CounterRng rng(spec.seed);
  std::vector<SpectrumPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double f =
        n == 1 ? f_lo : f_lo + (f_hi - f_lo) * i / (n - 1.0);
    const VariancePair mixed = apply_phase_jitter(
        opa_variance_pair(params, {pump_power, f}), params.phase_jitter);
    double v1 = mixed.v1, v2 = mixed.v2;
    if (s > 0.0) {
      v1 = noisy_sample(v1, s, spec.n_averages, rng);
      v2 = noisy_sample(v2, s, spec.n_averages, rng);
    }
    out.push_back({f, to_db(v1), to_db(v2)});
  }
  return out;
}

}  // namespace sqz
