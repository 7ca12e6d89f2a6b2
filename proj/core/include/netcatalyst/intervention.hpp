#ifndef NETCATALYST_INTERVENTION_HPP_
#define NETCATALYST_INTERVENTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netcatalyst/estimation.hpp"
#include "netcatalyst/graph.hpp"
#include "netcatalyst/saom.hpp"

namespace netcatalyst::lab {

enum class InterventionMode { nao_clique, nao_hub, link_budget };

std::string to_string(InterventionMode mode);
InterventionMode parse_mode(const std::string& text);

struct InterventionPlan {
  std::vector<NodeIndex> targets;
  InterventionMode mode = InterventionMode::nao_clique;
  std::size_t budget = 0;                  ///< link_budget only
  std::vector<std::size_t> active_periods; ///< 0-based period indices
  std::size_t capacity = 0;                ///< nao_hub: maximum roster size, 0 = unbounded

  /// Throws std::invalid_argument on an empty or out-of-roster target set
  /// or a budget above C(|targets|, 2).
  void validate(std::size_t roster) const;
  bool active(std::size_t period) const;
};

/// Adds the plan's ties; never removes one. nao_hub appends an auxiliary
/// node tied to every target, or reuses `hub` when given. link_budget
/// draws from the absent target pairs using `seed`.
Graph apply_intervention(const Graph& g, const InterventionPlan& plan, std::uint64_t seed = 0,
                         std::optional<NodeIndex> hub = std::nullopt);

/// Share of all degree held by the targets: sum deg(t) / (2 |E|).
double metric_target_share(const Graph& g, const std::vector<NodeIndex>& targets);
/// Gini coefficient of the degree sequence; 0 for an empty graph.
double metric_degree_gini(const Graph& g);
double metric_mean_target_degree(const Graph& g, const std::vector<NodeIndex>& targets);

/// One-sided sign-flip permutation p-value for mean(differences) > 0.
double sign_flip_p_value(const std::vector<double>& differences, std::size_t resamples,
                         std::uint64_t seed);

struct ExperimentConfig {
  std::size_t n = 50;
  std::size_t waves = 4;
  /// Initial graph: uniform with this many edges, shared by both arms.
  std::size_t initial_edges = 100;
  saom::Spec spec;                ///< true parameters, one rate per period
  InterventionPlan plan;
  bool intervene = true;          ///< false gives the null experiment
  std::size_t replicates = 200;
  std::size_t permutations = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Replicates whose arms are refitted period by period with an
  /// egoPlusAltX(member) effect; 0 disables fitting.
  std::size_t fit_replicates = 0;
  RmSettings rm;

  void validate() const;
};

inline const std::vector<std::string> kMetrics{"target_share", "degree_gini", "mean_target_degree"};

struct WaveTest {
  std::string metric;
  std::size_t wave = 0;
  double treated_mean = 0.0;
  double control_mean = 0.0;
  double mean_difference = 0.0;
  double paired_se = 0.0;
  double p_value = 1.0;
};

struct MembershipFit {
  std::size_t replicate = 0;
  std::string arm;
  std::size_t period = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  bool converged = false;
};

struct ExperimentReport {
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> replicate_seeds;
  /// values[metric][wave][replicate], per arm.
  std::vector<std::vector<std::vector<double>>> treated;
  std::vector<std::vector<std::vector<double>>> control;
  std::vector<WaveTest> tests;
  /// Last wave produced by an active period and the final wave; the H3
  /// check compares target-share gaps between them.
  std::optional<std::size_t> last_active_wave;
  double shrink_fraction = 0.0;
  std::vector<MembershipFit> fits;

  const WaveTest& test(const std::string& metric, std::size_t wave) const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace netcatalyst::lab

#endif  // NETCATALYST_INTERVENTION_HPP_
