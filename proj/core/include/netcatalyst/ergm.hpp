#ifndef NETCATALYST_ERGM_HPP_
#define NETCATALYST_ERGM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netcatalyst/attributes.hpp"
#include "netcatalyst/estimation.hpp"
#include "netcatalyst/graph.hpp"
#include "netcatalyst/random.hpp"

namespace netcatalyst::ergm {

enum class EffectKind { edges, gwdegree, gwesp, triangles, nodefactor, nodematch };

struct Effect {
  EffectKind kind = EffectKind::edges;
  double decay = 0.5;   ///< gwdegree / gwesp only
  std::string attr;     ///< nodefactor / nodematch
  std::string level;    ///< nodefactor

  std::string name() const;
  friend bool operator==(const Effect&, const Effect&) = default;
};

/// Ordered effect list with one parameter per effect. `fixed[k]` holds a
/// parameter at its value during fitting.
struct Spec {
  std::vector<Effect> effects;
  std::vector<double> params;
  std::vector<bool> fixed;

  /// Throws std::invalid_argument on an empty list, duplicate effects or a
  /// parameter vector of the wrong length.
  void validate() const;
  std::vector<std::string> names() const;

  static Spec from(std::vector<Effect> effects, std::vector<double> params = {});
};

/// Effect statistics resolved against a covariate table, so the sampler
/// inner loop never looks up attributes by name.
class StatisticsEngine {
 public:
  StatisticsEngine(const Spec& spec, const NodeAttributes& attrs);

  std::size_t dimension() const noexcept { return terms_.size(); }
  Eigen::VectorXd stats(const Graph& g) const;
  /// g_A(y with (i,j)) - g_A(y without (i,j)); no validation of the pair.
  void change(const Graph& g, NodeIndex i, NodeIndex j, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  struct Term {
    EffectKind kind;
    double decay;
    std::vector<int> codes;
    int level = 0;
  };
  std::vector<Term> terms_;
  std::size_t n_attr_ = 0;
};

Eigen::VectorXd ergm_stats(const Graph& g, const Spec& spec, const NodeAttributes& attrs);

/// Throws GraphError subclasses for an invalid pair.
Eigen::VectorXd change_stats(const Graph& g, NodeIndex i, NodeIndex j, const Spec& spec,
                             const NodeAttributes& attrs);

/// Metropolis chain over single-pair toggles proposed uniformly among free
/// pairs. Current state and statistics are kept incrementally.
class Sampler {
 public:
  Sampler(const Spec& spec, const NodeAttributes& attrs, Graph start, std::uint64_t seed);

  void set_params(const Eigen::VectorXd& eta) { eta_ = eta; }
  void run(std::size_t steps);
  const Graph& state() const noexcept { return graph_; }
  const Eigen::VectorXd& stats() const noexcept { return stats_; }
  std::size_t accepted() const noexcept { return accepted_; }

 private:
  StatisticsEngine engine_;
  Graph graph_;
  std::vector<Dyad> pairs_;
  Eigen::VectorXd eta_;
  Eigen::VectorXd stats_;
  Eigen::VectorXd delta_;
  Rng rng_;
  std::size_t accepted_ = 0;
};

std::vector<Graph> mcmc_sample(const Spec& spec, const NodeAttributes& attrs, const Graph& g0,
                               std::size_t burnin, std::size_t thin, std::size_t count,
                               std::uint64_t seed);

struct ExactMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double log_normalizer = 0.0;
};

inline constexpr std::size_t kMaxExactNodes = 7;

/// Exhaustive enumeration over every graph on the free pairs of `support`
/// (n <= 7). The parameters come from `eta`, not `spec.params`.
ExactMoments exact_moments(const Spec& spec, const NodeAttributes& attrs,
                           const Eigen::VectorXd& eta, const Graph& support);
ExactMoments exact_moments(const Spec& spec, const NodeAttributes& attrs,
                           const Eigen::VectorXd& eta, std::size_t n);

/// Default sampler sizes for a graph with `free_pairs` toggleable pairs.
std::size_t default_burnin(std::size_t free_pairs);
std::size_t default_thin(std::size_t free_pairs);

/// Method-of-moments fit of E_eta[g] = g(y_obs), which for an exponential
/// family is the likelihood score equation. Standard errors are the
/// square roots of the diagonal of the inverse simulated covariance.
EstimationResult fit_ergm(const Graph& observed, const Spec& spec, const NodeAttributes& attrs,
                          const std::vector<double>& init, const RmSettings& rm,
                          std::uint64_t seed);

}  // namespace netcatalyst::ergm

#endif  // NETCATALYST_ERGM_HPP_
