#include "netcatalyst/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netcatalyst/random.hpp"

namespace netcatalyst {

bool convergence_check(std::span<const double> tratios, double overall) {
  if (tratios.empty()) throw std::invalid_argument("convergence_check: empty t-ratio vector");
  double worst = 0.0;
  for (const double t : tratios) {
    if (!std::isfinite(t)) return false;
    worst = std::max(worst, std::abs(t));
  }
  return worst < kMaxTRatio && overall < kMaxOverallRatio;
}

bool operator==(const EstimationResult& a, const EstimationResult& b) {
  auto same_log = [](const std::vector<IterationRecord>& x, const std::vector<IterationRecord>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].run != y[i].run || x[i].phase != y[i].phase || x[i].subphase != y[i].subphase ||
          x[i].iteration != y[i].iteration || x[i].gain != y[i].gain ||
          x[i].theta != y[i].theta || x[i].deviation != y[i].deviation) {
        return false;
      }
    }
    return true;
  };
  // NaN standard errors of a flagged fit compare equal when both are NaN.
  auto same_values = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] == y[i] || (std::isnan(x[i]) && std::isnan(y[i])))) return false;
    }
    return true;
  };
  return a.names == b.names && a.fixed == b.fixed && same_values(a.estimates, b.estimates) &&
         same_values(a.standard_errors, b.standard_errors) && same_values(a.tratios, b.tratios) &&
         (a.overall_ratio == b.overall_ratio ||
          (std::isnan(a.overall_ratio) && std::isnan(b.overall_ratio))) &&
         a.converged == b.converged && a.iterations == b.iterations && a.seed == b.seed &&
         a.flag == b.flag && same_log(a.log, b.log);
}

Eigen::VectorXd column_means(const Eigen::MatrixXd& rows) {
  return rows.colwise().mean().transpose();
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows) {
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - mean;
  const double denom = std::max<double>(1.0, static_cast<double>(rows.rows()) - 1.0);
  return centered.transpose() * centered / denom;
}

double overall_convergence_ratio(const Eigen::VectorXd& deviation,
                                 const Eigen::MatrixXd& covariance) {
  const auto cod = covariance.completeOrthogonalDecomposition();
  const Eigen::VectorXd solved = cod.solve(deviation);
  const Eigen::VectorXd residual = covariance * solved - deviation;
  if (residual.norm() > 1e-8 * std::max(1.0, deviation.norm())) {
    return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(std::max(0.0, deviation.dot(solved)));
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void check_variances(const Eigen::MatrixXd& stats, const std::vector<std::string>& names) {
  const Eigen::MatrixXd cov = sample_covariance(stats);
  for (Eigen::Index k = 0; k < cov.rows(); ++k) {
    if (!(cov(k, k) >= 1e-12)) {
      throw EstimationError("degenerate model: simulated statistic '" +
                            names[static_cast<std::size_t>(k)] + "' has zero variance");
    }
  }
}

Eigen::MatrixXd invert_derivative(Eigen::MatrixXd d, double diagonalize) {
  if (diagonalize > 0.0) {
    const Eigen::MatrixXd diag = d.diagonal().asDiagonal();
    d = (1.0 - diagonalize) * d + diagonalize * diag;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-10 * sv(0)) || !std::isfinite(sv(0))) {
    throw EstimationError("derivative matrix is numerically singular");
  }
  return d.inverse();
}

struct PhaseThree {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  Eigen::VectorXd tratios;
  Eigen::VectorXd standard_errors;
  Eigen::MatrixXd derivative;
  double overall = 0.0;
};

PhaseThree run_phase_three(MomentModel& model, const Eigen::VectorXd& theta,
                           const RmSettings& settings, std::uint64_t seed) {
  auto batch = model.simulate_batch(theta, static_cast<std::size_t>(settings.phase3_draws), seed, true);
  check_variances(batch.stats, model.names());
  PhaseThree out;
  const Eigen::MatrixXd cov = sample_covariance(batch.stats);
  out.mean = column_means(batch.stats);
  out.sd = cov.diagonal().cwiseSqrt();
  const Eigen::VectorXd deviation = out.mean - model.observed();
  out.tratios = deviation.cwiseQuotient(out.sd);
  out.overall = overall_convergence_ratio(deviation, cov);
  out.derivative = batch.jacobian.size() == 0 ? cov : batch.jacobian;
  const Eigen::MatrixXd dinv = invert_derivative(out.derivative, 0.0);
  const Eigen::MatrixXd theta_cov = dinv * cov * dinv.transpose();
  out.standard_errors = theta_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

}  // namespace

MomentSolution solve_moments(MomentModel& model, const Eigen::VectorXd& init,
                             const RmSettings& settings, std::uint64_t seed) {
  const auto p = static_cast<Eigen::Index>(model.dimension());
  if (init.size() != p) throw std::invalid_argument("solve_moments: init has wrong dimension");
  if (settings.subphases < 1 || settings.phase1_draws < 2 || settings.phase3_draws < 2 ||
      settings.max_runs < 1 || !(settings.initial_gain > 0.0)) {
    throw std::invalid_argument("solve_moments: invalid Robbins-Monro settings");
  }
  const Eigen::VectorXd& observed = model.observed();
  const auto names = model.names();

  MomentSolution sol;
  Eigen::VectorXd theta = model.constrain(init, init);

  // Phase 1: derivative matrix and a damped, truncated Newton step.
  auto batch = model.simulate_batch(theta, static_cast<std::size_t>(settings.phase1_draws),
                                    derive_seed(seed, {1}), true);
  check_variances(batch.stats, names);
  Eigen::MatrixXd derivative = batch.jacobian.size() == 0 ? sample_covariance(batch.stats)
                                                          : batch.jacobian;
  Eigen::MatrixXd dinv = invert_derivative(derivative, settings.diagonalize);
  // Natural step scale per coordinate: one simulated SD of the statistic,
  // mapped through the diagonal of the derivative.
  Eigen::VectorXd scale = sample_covariance(batch.stats).diagonal().cwiseSqrt();
  for (Eigen::Index k = 0; k < p; ++k) {
    const double d = std::abs(derivative(k, k));
    scale(k) = d > 0.0 ? scale(k) / d : 1.0;
  }
  auto truncate = [&](Eigen::VectorXd step) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) worst = std::max(worst, std::abs(step(k)) / scale(k));
    if (worst > settings.max_step) step *= settings.max_step / worst;
    return step;
  };
  {
    const Eigen::VectorXd deviation = column_means(batch.stats) - observed;
    theta = model.constrain(
        theta - truncate(settings.initial_gain * invert_derivative(derivative, 0.0) * deviation), theta);
    sol.log.push_back({0, 1, 0, 0, settings.initial_gain, to_std(theta), to_std(deviation)});
  }

  const double base = static_cast<double>(7 + p) * settings.phase2_scale;
  for (int run = 0; run < settings.max_runs; ++run) {
    // Phase 2.
    double gain = settings.initial_gain;
    for (int sub = 0; sub < settings.subphases && sol.flag.empty(); ++sub, gain /= 2.0) {
      const int min_iter =
          std::max(1, static_cast<int>(std::lround(base * std::pow(2.52, sub))));
      const int max_iter = min_iter + settings.phase2_extra;
      Eigen::VectorXd theta_sum = Eigen::VectorXd::Zero(p);
      Eigen::VectorXd crossing = Eigen::VectorXd::Zero(p);
      Eigen::VectorXd previous;
      int it = 0;
      for (; it < max_iter; ++it) {
        const std::uint64_t s = derive_seed(seed, {2, static_cast<std::uint64_t>(run),
                                                   static_cast<std::uint64_t>(sub),
                                                   static_cast<std::uint64_t>(it)});
        const Eigen::VectorXd deviation = model.simulate_one(theta, s) - observed;
        theta = model.constrain(theta - truncate(gain * dinv * deviation), theta);
        theta_sum += theta;
        ++sol.iterations;
        sol.log.push_back({run, 2, sub + 1, it, gain, to_std(theta), to_std(deviation)});
        if (theta.cwiseAbs().maxCoeff() > settings.divergence_bound || !theta.allFinite()) {
          sol.flag = "divergent: parameter magnitude exceeded " +
                     std::to_string(settings.divergence_bound);
          break;
        }
        if (auto b = model.boundary(theta)) {
          sol.flag = *b;
          break;
        }
        if (previous.size() == p) crossing += deviation.cwiseProduct(previous);
        previous = deviation;
        if (it + 1 >= min_iter && (crossing.array() < 0.0).all()) {
          ++it;
          break;
        }
      }
      if (sol.flag.empty()) {
        const Eigen::VectorXd average = theta_sum / static_cast<double>(std::max(it, 1));
        theta = model.constrain(average, average);
      }
    }
    sol.theta = theta;
    if (!sol.flag.empty()) break;

    // Phase 3.
    const auto three = run_phase_three(model, theta, settings,
                                       derive_seed(seed, {3, static_cast<std::uint64_t>(run)}));
    sol.simulated_mean = three.mean;
    sol.simulated_sd = three.sd;
    sol.tratios = three.tratios;
    sol.standard_errors = three.standard_errors;
    sol.overall_ratio = three.overall;
    sol.converged = convergence_check(std::span<const double>(three.tratios.data(),
                                                              static_cast<std::size_t>(p)),
                                      three.overall);
    if (sol.converged) break;
    derivative = three.derivative;
    dinv = invert_derivative(derivative, settings.diagonalize);
  }

  if (!sol.flag.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sol.converged = false;
    sol.standard_errors = Eigen::VectorXd::Constant(p, nan);
    sol.tratios = Eigen::VectorXd::Constant(p, nan);
    sol.overall_ratio = nan;
  }
  return sol;
}

}  // namespace netcatalyst
