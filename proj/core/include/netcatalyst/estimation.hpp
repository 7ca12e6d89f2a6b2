#ifndef NETCATALYST_ESTIMATION_HPP_
#define NETCATALYST_ESTIMATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace netcatalyst {

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Convergence gate: every |t-ratio| below 0.1 and the overall ratio below 0.25.
inline constexpr double kMaxTRatio = 0.1;
inline constexpr double kMaxOverallRatio = 0.25;

/// True iff max |t| < 0.1 and overall < 0.25. Throws on an empty vector.
bool convergence_check(std::span<const double> tratios, double overall);

/// Settings of the three-phase Robbins-Monro moment solver.
struct RmSettings {
  double initial_gain = 0.2;
  int subphases = 4;
  /// Phase-1 draws used to estimate the derivative matrix.
  int phase1_draws = 50;
  /// Minimum phase-2 iterations in sub-phase k is round(phase2_scale * 2.52^(k-1) * (7 + p)).
  double phase2_scale = 1.0;
  /// Extra iterations allowed beyond the minimum before a sub-phase is cut off.
  int phase2_extra = 200;
  int phase3_draws = 1000;
  /// Phase 2 + phase 3 are repeated from the last estimate until convergence or this cap.
  int max_runs = 3;
  /// Mixing weight towards the diagonal of the derivative matrix in phase 2
  /// (0 uses the full matrix). Phase 1 and standard errors use the full matrix.
  double diagonalize = 0.2;
  /// Phase-1 and phase-2 steps are shrunk so no coordinate moves more than this many
  /// step scales (simulated SD of its statistic over the derivative diagonal).
  double max_step = 1.0;
  /// Any |theta_k| beyond this bound aborts the run as divergent.
  double divergence_bound = 50.0;
  unsigned threads = 1;

  // ERGM sampler controls; zero selects sizes from the number of free pairs.
  std::size_t burnin = 0;
  std::size_t thin = 0;
  std::size_t chains = 8;

  // SAOM finite-difference step for the derivative matrix.
  double fd_epsilon = 0.1;
};

struct IterationRecord {
  int run = 0;
  int phase = 0;
  int subphase = 0;
  int iteration = 0;
  double gain = 0.0;
  std::vector<double> theta;
  std::vector<double> deviation;
};

/// Outcome of an ERGM or SAOM fit. Vectors are aligned with `names`; fixed
/// parameters carry their value, standard error 0 and t-ratio 0.
struct EstimationResult {
  std::vector<std::string> names;
  std::vector<bool> fixed;
  std::vector<double> estimates;
  std::vector<double> standard_errors;
  std::vector<double> tratios;
  double overall_ratio = 0.0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t seed = 0;
  /// Set when the solve stopped early: divergence, rate boundary, singular derivative.
  std::string flag;
  std::vector<IterationRecord> log;

  friend bool operator==(const EstimationResult& a, const EstimationResult& b);
};

/// A moment condition E_theta[S] = s_obs that the Robbins-Monro solver
/// drives to zero. Implementations own their simulation state.
class MomentModel {
 public:
  virtual ~MomentModel() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::vector<std::string> names() const = 0;
  virtual const Eigen::VectorXd& observed() const = 0;

  struct Batch {
    Eigen::MatrixXd stats;     ///< one row per draw
    Eigen::MatrixXd jacobian;  ///< dE[S]/dtheta; empty means use Cov(S)
  };

  /// `count` draws at theta. Must be a deterministic function of (theta, seed).
  virtual Batch simulate_batch(const Eigen::VectorXd& theta, std::size_t count,
                               std::uint64_t seed, bool with_derivative) = 0;

  /// One phase-2 draw.
  virtual Eigen::VectorXd simulate_one(const Eigen::VectorXd& theta, std::uint64_t seed) = 0;

  /// Maps a proposed update back into the admissible region; `current` is
  /// the value the update started from.
  virtual Eigen::VectorXd constrain(const Eigen::VectorXd& proposal,
                                    const Eigen::VectorXd& /*current*/) const {
    return proposal;
  }

  /// Non-empty when theta sits on a boundary that invalidates the fit.
  virtual std::optional<std::string> boundary(const Eigen::VectorXd& /*theta*/) const {
    return std::nullopt;
  }
};

/// Output of the solver in the model's (free-parameter) coordinates.
struct MomentSolution {
  Eigen::VectorXd theta;
  Eigen::VectorXd standard_errors;
  Eigen::VectorXd tratios;
  Eigen::VectorXd simulated_mean;
  Eigen::VectorXd simulated_sd;
  double overall_ratio = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string flag;
  std::vector<IterationRecord> log;
};

/// Three-phase stochastic approximation: phase 1 estimates the derivative
/// matrix and takes a damped Newton step, phase 2 runs `subphases` rounds of
/// theta <- theta - a D^-1 (S - s_obs) with a halved each round and the
/// round's average as its result, phase 3 evaluates t-ratios, the overall
/// ratio and standard errors D^-1 Cov(S) D^-T at the estimate.
MomentSolution solve_moments(MomentModel& model, const Eigen::VectorXd& init,
                             const RmSettings& settings, std::uint64_t seed);

/// sqrt(d' Cov^-1 d): the largest |t-ratio| over all unit-norm linear
/// combinations of the deviations.
double overall_convergence_ratio(const Eigen::VectorXd& deviation, const Eigen::MatrixXd& covariance);

Eigen::VectorXd column_means(const Eigen::MatrixXd& rows);
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows);

}  // namespace netcatalyst

#endif  // NETCATALYST_ESTIMATION_HPP_
