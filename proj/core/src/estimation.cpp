#include "sqz/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sqz/constants.hpp"

namespace sqz {

namespace {

constexpr double kDbFactor = 10.0 / 2.302585092994045684;  // 10 / ln 10

struct LinearModel {
  double value = 0.0;  // jitter-mixed variance for the point's tag
  double d_eta = 0.0;
  double d_pthr = 0.0;
  double d_theta = 0.0;
  double d_pump = 0.0;
};

// Jitter-mixed variance and its analytic partials, all in linear units.
LinearModel evaluate_linear(const SqueezerParams& params,
                            const MeasurementPoint& point) {
  if (point.pump_power >= params.threshold_power)
    throw AboveThresholdError(point.pump_power, params.threshold_power);

  const double x = std::sqrt(point.pump_power / params.threshold_power);
  const double kappa = decay_rate(params.cavity);
  const double omega = 2.0 * kPi * point.frequency / kappa;
  const double det_sq = 4.0 * omega * omega;
  const double eta = params.efficiency;

  const double d1 = (1.0 + x) * (1.0 + x) + det_sq;
  const double d2 = (1.0 - x) * (1.0 - x) + det_sq;
  const double s1 = 4.0 * x / d1;
  const double s2 = 4.0 * x / d2;
  const double ds1_dx = (4.0 * d1 - 8.0 * x * (1.0 + x)) / (d1 * d1);
  const double ds2_dx = (4.0 * d2 + 8.0 * x * (1.0 - x)) / (d2 * d2);

  const double v1 = 1.0 - eta * s1;
  const double v2 = 1.0 + eta * s2;
  const double dv1_deta = -s1;
  const double dv2_deta = s2;

  const double dx_dpthr = -x / (2.0 * params.threshold_power);
  const double dv1_dpthr = -eta * ds1_dx * dx_dpthr;
  const double dv2_dpthr = eta * ds2_dx * dx_dpthr;

  // d x / d P diverges at P = 0; the pump-error term vanishes there
  // anyway (sigma_pump scales with P), so drop it.
  double dv1_dpump = 0.0, dv2_dpump = 0.0;
  if (point.pump_power > 0.0) {
    const double dx_dpump = x / (2.0 * point.pump_power);
    dv1_dpump = -eta * ds1_dx * dx_dpump;
    dv2_dpump = eta * ds2_dx * dx_dpump;
  }

  // Mixing written exactly as in apply_phase_jitter so model_prediction
  // agrees with the composed quadrature operations bit for bit.
  const double theta = params.phase_jitter;
  const double st = std::sin(theta);
  const double s2t = st * st;
  const double c2 = 1.0 - s2t;
  const double sin2theta = std::sin(2.0 * theta);
  const bool squeezed = point.tag == QuadratureTag::squeezed;

  LinearModel m;
  if (squeezed) {
    m.value = v1 * c2 + v2 * s2t;
    m.d_eta = dv1_deta * c2 + dv2_deta * s2t;
    m.d_pthr = dv1_dpthr * c2 + dv2_dpthr * s2t;
    m.d_pump = dv1_dpump * c2 + dv2_dpump * s2t;
    m.d_theta = (v2 - v1) * sin2theta;
  } else {
    m.value = (v1 + v2) - (v1 * c2 + v2 * s2t);
    m.d_eta = dv1_deta * s2t + dv2_deta * c2;
    m.d_pthr = dv1_dpthr * s2t + dv2_dpthr * c2;
    m.d_pump = dv1_dpump * s2t + dv2_dpump * c2;
    m.d_theta = (v1 - v2) * sin2theta;
  }
  return m;
}

// Effective per-point sigma in the chosen residual domain, folding the
// pump-power uncertainty in by the effective-variance method.
double effective_sigma(const LinearModel& m, const MeasurementPoint& point,
                       ResidualDomain domain) {
  if (domain == ResidualDomain::decibel) {
    const double dmodel_dpump = kDbFactor * m.d_pump / m.value;
    const double pump_term = dmodel_dpump * point.sigma_pump;
    return std::sqrt(point.sigma_db * point.sigma_db + pump_term * pump_term);
  }
  const double sigma_lin = from_db(point.value_db) * point.sigma_db / kDbFactor;
  const double pump_term = m.d_pump * point.sigma_pump;
  return std::sqrt(sigma_lin * sigma_lin + pump_term * pump_term);
}

double point_residual(const LinearModel& m, const MeasurementPoint& point,
                      ResidualDomain domain) {
  const double sigma = effective_sigma(m, point, domain);
  if (domain == ResidualDomain::decibel)
    return (point.value_db - to_db(m.value)) / sigma;
  return (from_db(point.value_db) - m.value) / sigma;
}

std::array<double, 3> point_jacobian_row(const LinearModel& m,
                                         const MeasurementPoint& point,
                                         ResidualDomain domain) {
  // sigma_eff is treated as locally constant: only the model partials
  // enter the Jacobian.
  const double sigma = effective_sigma(m, point, domain);
  double scale = -1.0 / sigma;
  if (domain == ResidualDomain::decibel) scale *= kDbFactor / m.value;
  return {scale * m.d_eta, scale * m.d_pthr, scale * m.d_theta};
}

struct Reparam {
  // eta = sin^2(u1), P_thr = p_max (1 + exp(u2)), theta = pi/2 sin^2(u3)
  double p_max = 0.0;

  std::array<double, 3> to_params(const std::array<double, 3>& u) const {
    return {std::sin(u[0]) * std::sin(u[0]),
            p_max * (1.0 + std::exp(u[1])),
            (kPi / 2.0) * std::sin(u[2]) * std::sin(u[2])};
  }
  std::array<double, 3> to_u(const std::array<double, 3>& p) const {
    return {std::asin(std::sqrt(std::clamp(p[0], 1e-12, 1.0 - 1e-12))),
            std::log(p[1] / p_max - 1.0),
            std::asin(std::sqrt(std::clamp(p[2] / (kPi / 2.0), 1e-12,
                                           1.0 - 1e-12)))};
  }
  std::array<double, 3> gradient(const std::array<double, 3>& u) const {
    return {std::sin(2.0 * u[0]), p_max * std::exp(u[1]),
            (kPi / 2.0) * std::sin(2.0 * u[2])};
  }
};

double chi_squared_of(const SqueezerParams& params, const Dataset& dataset,
                      ResidualDomain domain) {
  double chi2 = 0.0;
  for (const auto& point : dataset.points) {
    const double r =
        point_residual(evaluate_linear(params, point), point, domain);
    chi2 += r * r;
  }
  return chi2;
}

}  // namespace

double model_prediction(const SqueezerParams& params,
                        const MeasurementPoint& point) {
  params.validate();
  return to_db(evaluate_linear(params, point).value);
}

std::array<double, 4> model_gradient(const SqueezerParams& params,
                                     const MeasurementPoint& point) {
  params.validate();
  const LinearModel m = evaluate_linear(params, point);
  const double s = kDbFactor / m.value;
  return {s * m.d_eta, s * m.d_pthr, s * m.d_theta, s * m.d_pump};
}

std::vector<double> residual_vector(const SqueezerParams& params,
                                    const Dataset& dataset,
                                    ResidualDomain domain) {
  params.validate();
  std::vector<double> r;
  r.reserve(dataset.points.size());
  for (const auto& point : dataset.points)
    r.push_back(point_residual(evaluate_linear(params, point), point, domain));
  return r;
}

std::vector<std::array<double, 3>> jacobian(const SqueezerParams& params,
                                            const Dataset& dataset,
                                            ResidualDomain domain) {
  params.validate();
  std::vector<std::array<double, 3>> rows;
  rows.reserve(dataset.points.size());
  for (const auto& point : dataset.points)
    rows.push_back(
        point_jacobian_row(evaluate_linear(params, point), point, domain));
  return rows;
}

FitResult fit(const Dataset& dataset, const FitConfig& config) {
  dataset.validate();

  double p_max = 0.0;
  double v_min = 1.0;
  for (const auto& point : dataset.points) {
    p_max = std::max(p_max, point.pump_power);
    if (point.tag == QuadratureTag::squeezed)
      v_min = std::min(v_min, from_db(point.value_db));
  }

  Reparam rp{p_max};
  double eta0 = config.initial_efficiency.value_or(
      std::clamp(1.0 - v_min, 0.5, 0.999));
  double pthr0 = config.initial_threshold_power.value_or(1.3 * p_max);
  if (!(pthr0 > p_max))
    throw DomainError("initial threshold power must exceed all pump powers");
  double theta0 = config.initial_phase_jitter.value_or(deg_to_rad(0.5));

  std::array<double, 3> u = rp.to_u({eta0, pthr0, theta0});
  const int n_active = config.fit_phase_jitter ? 3 : 2;
  const auto n = static_cast<int>(dataset.points.size());

  auto make_params = [&](const std::array<double, 3>& uu) {
    const auto p = rp.to_params(uu);
    SqueezerParams sp;
    sp.efficiency = p[0];
    sp.threshold_power = p[1];
    sp.phase_jitter = config.fit_phase_jitter ? p[2] : theta0;
    sp.cavity = dataset.cavity;
    return sp;
  };

  const ResidualDomain domain = config.residual_domain;
  double chi2 = chi_squared_of(make_params(u), dataset, domain);
  double damping = config.initial_damping;

  FitResult result;
  result.dof = n - n_active;
  bool converged = false;
  int iterations = 0;

  while (iterations < config.max_iterations && !converged) {
    ++iterations;
    const SqueezerParams params = make_params(u);
    const auto grad_u = rp.gradient(u);

    Eigen::MatrixXd J(n, n_active);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      const LinearModel m = evaluate_linear(params, dataset.points[i]);
      r(i) = point_residual(m, dataset.points[i], domain);
      const auto row = point_jacobian_row(m, dataset.points[i], domain);
      for (int k = 0; k < n_active; ++k) J(i, k) = row[k] * grad_u[k];
    }

    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd jtr = J.transpose() * r;

    bool accepted = false;
    while (!accepted && damping < 1e14) {
      Eigen::MatrixXd damped = jtj;
      for (int k = 0; k < n_active; ++k)
        damped(k, k) += damping * std::max(jtj(k, k), 1e-30);
      const Eigen::VectorXd step = damped.ldlt().solve(-jtr);

      std::array<double, 3> u_trial = u;
      for (int k = 0; k < n_active; ++k) u_trial[k] += step(k);
      const double chi2_trial =
          chi_squared_of(make_params(u_trial), dataset, domain);

      if (chi2_trial <= chi2) {
        const double rel_change =
            (chi2 - chi2_trial) / std::max(chi2, 1e-300);
        u = u_trial;
        const double prev = chi2;
        chi2 = chi2_trial;
        damping /= 10.0;
        accepted = true;
        if (rel_change < config.chi2_rel_tol ||
            step.norm() < config.step_tol || prev == 0.0)
          converged = true;
      } else {
        damping *= 10.0;
      }
    }
    if (!accepted) break;  // damping exhausted, stuck
  }

  result.params = make_params(u);
  result.chi_squared = chi2;
  result.converged = converged;
  result.iterations = iterations;

  const double eta = result.params.efficiency;
  const double theta = result.params.phase_jitter;
  result.at_boundary = eta <= 1e-6 || eta >= 1.0 - 1e-9 ||
                       (config.fit_phase_jitter && theta <= 1e-8);

  // Covariance in physical parameters at the optimum.
  Eigen::MatrixXd J(n, n_active);
  for (int i = 0; i < n; ++i) {
    const LinearModel m = evaluate_linear(result.params, dataset.points[i]);
    const auto row = point_jacobian_row(m, dataset.points[i], domain);
    for (int k = 0; k < n_active; ++k) J(i, k) = row[k];
  }
  const Eigen::MatrixXd jtj = J.transpose() * J;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (lu.isInvertible() && result.dof > 0) {
    const Eigen::MatrixXd cov_u = lu.inverse();
    const double scale = result.chi_squared / result.dof;
    for (int a = 0; a < n_active; ++a)
      for (int b = 0; b < n_active; ++b) {
        result.covariance_unscaled[a][b] = cov_u(a, b);
        result.covariance[a][b] = cov_u(a, b) * scale;
      }
    for (int k = 0; k < n_active; ++k)
      result.std_errors[k] = std::sqrt(std::max(result.covariance[k][k], 0.0));
  } else {
    result.at_boundary = true;
    for (auto& row : result.covariance) row.fill(0.0);
    for (auto& row : result.covariance_unscaled) row.fill(0.0);
    result.std_errors.fill(0.0);
  }
  return result;
}

std::array<double, 3> parameter_errors(const FitResult& result) {
  if (!result.converged)
    throw DomainError("parameter errors require a converged fit");
  return result.std_errors;
}

}  // namespace sqz
