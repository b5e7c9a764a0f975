#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqz/dataset.hpp"

namespace sqz {

// Spectrum-analyzer-like acquisition settings for synthetic traces.
struct TraceSpec {
  int n_points = 0;
  double rbw = 0.0;  // Hz
  double vbw = 0.0;  // Hz
  int n_averages = 1;
  // Std of the multiplicative fluctuation on the linear variance. When
  // unset, a suggestion 1/sqrt(rbw / (2 vbw)) is derived from the
  // bandwidth settings.
  std::optional<double> relative_scatter;
  double dark_level = 0.0;  // linear power relative to vacuum
  std::uint64_t seed = 0;

  void validate() const;
  double scatter() const;
};

enum class TraceKind { vacuum, squeezed, antisqueezed, dark };

// Zero-span noise-power record: samples of linear power vs index.
struct Trace {
  std::vector<double> samples;
  TraceKind kind = TraceKind::vacuum;
  TraceSpec spec;
};

struct TraceSummary {
  double mean_linear = 0.0;
  double mean_db = 0.0;
  double sigma_db = 0.0;
};

// Simulated zero-span measurement of one quadrature (or the vacuum/dark
// reference) at a fixed pump power and sideband frequency.
Trace synth_zero_span(const SqueezerParams& params, const OperatingPoint& op,
                      TraceKind kind, const TraceSpec& spec);

// Full synthetic pump sweep: one squeezed and one anti-squeezed point per
// pump power, reduced to (mean, sigma) like the real data treatment.
// Pump readings carry a relative jitter (default 3 %).
Dataset synth_pump_sweep(const SqueezerParams& params,
                         const std::vector<double>& pump_powers,
                         double frequency, const TraceSpec& spec,
                         double pump_jitter_rel = 0.03);

// Linear least-squares line through the linear-power samples; mean is the
// fitted value at the trace midpoint, sigma the residual scatter, both
// expressed in dB.
TraceSummary reduce_trace(const Trace& trace);

struct SpectrumPoint {
  double frequency = 0.0;
  double squeezed_db = 0.0;
  double antisqueezed_db = 0.0;
};

// Squeezing/anti-squeezing spectrum over [f_lo, f_hi] with n points,
// noiseless when the scatter is zero, otherwise averaged over
// spec.n_averages seeded draws per point.
std::vector<SpectrumPoint> synth_spectrum(const SqueezerParams& params,
                                          double pump_power, double f_lo,
                                          double f_hi, int n,
                                          const TraceSpec& spec);

}  // namespace sqz
