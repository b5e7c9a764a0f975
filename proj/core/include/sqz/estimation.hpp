#pragma once

#include <array>
#include <optional>

#include "sqz/dataset.hpp"

namespace sqz {

enum class ResidualDomain { decibel, linear };

struct FitConfig {
  int max_iterations = 500;
  double initial_damping = 1e-3;
  double chi2_rel_tol = 1e-12;
  double step_tol = 1e-10;
  ResidualDomain residual_domain = ResidualDomain::decibel;
  // When false the phase jitter stays at its initial value and only
  // (eta, P_thr) are optimized.
  bool fit_phase_jitter = true;
  // Optional overrides for the automatic initial guesses.
  std::optional<double> initial_efficiency;
  std::optional<double> initial_threshold_power;  // W
  std::optional<double> initial_phase_jitter;     // rad
};

struct FitResult {
  SqueezerParams params;
  // Covariance over (eta, P_thr, theta_fluc), scaled by chi2/dof.
  std::array<std::array<double, 3>, 3> covariance{};
  std::array<std::array<double, 3>, 3> covariance_unscaled{};
  std::array<double, 3> std_errors{};  // dimensionless, W, rad
  double chi_squared = 0.0;
  int dof = 0;
  bool converged = false;
  // Set when a parameter finished within numerical reach of a bound
  // (eta at 0 or 1, theta at 0); the covariance is unreliable there.
  bool at_boundary = false;
  int iterations = 0;
};

// Model value in dB for one measurement point: Eq-style variance pair,
// phase-jitter mixed, quadrature selected by the point's tag.
double model_prediction(const SqueezerParams& params,
                        const MeasurementPoint& point);

// Partial derivatives of model_prediction in dB with respect to
// (eta, P_thr, theta_fluc) and, last, the pump power P.
std::array<double, 4> model_gradient(const SqueezerParams& params,
                                     const MeasurementPoint& point);

// Weighted residuals r_i = (value - model) / sigma_eff with
// sigma_eff^2 = sigma_db^2 + (d model / d P * sigma_pump)^2.
std::vector<double> residual_vector(const SqueezerParams& params,
                                    const Dataset& dataset,
                                    ResidualDomain domain = ResidualDomain::decibel);

// Residual Jacobian, n x 3, analytic; columns in (eta, P_thr, theta) order.
std::vector<std::array<double, 3>> jacobian(const SqueezerParams& params,
                                            const Dataset& dataset,
                                            ResidualDomain domain = ResidualDomain::decibel);

// Damped Gauss-Newton fit of (eta, P_thr, theta_fluc) with the cavity
// constants taken from the dataset.
FitResult fit(const Dataset& dataset, const FitConfig& config = {});

// Standard errors of a converged fit: (dimensionless, W, rad).
std::array<double, 3> parameter_errors(const FitResult& result);

}  // namespace sqz
