#ifndef NETCATALYST_SAOM_HPP_
#define NETCATALYST_SAOM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netcatalyst/attributes.hpp"
#include "netcatalyst/estimation.hpp"
#include "netcatalyst/graph.hpp"
#include "netcatalyst/panel.hpp"

namespace netcatalyst::saom {

enum class EffectKind { density, trans_triad, in_pop, ego_plus_alt_x, same_x };

/// Evaluation effect. For ego_plus_alt_x on a categorical covariate the
/// covariate value is the indicator of `level` (default "yes").
struct Effect {
  EffectKind kind = EffectKind::density;
  std::string attr;
  std::string level;

  std::string name() const;
  friend bool operator==(const Effect&, const Effect&) = default;
};

struct Spec {
  std::vector<Effect> effects;
  std::vector<double> params;   ///< beta, one per effect
  std::vector<bool> fixed;      ///< per effect; empty means all free
  std::vector<double> rates;    ///< lambda, one per period
  std::vector<bool> rate_fixed; ///< per period; empty means all free

  /// Exactly one density effect, no duplicates, aligned vectors, rates > 0.
  void validate() const;
  bool is_fixed(std::size_t effect) const { return !fixed.empty() && fixed[effect]; }
  bool is_rate_fixed(std::size_t period) const { return !rate_fixed.empty() && rate_fixed[period]; }
  /// "rate period m" names followed by effect names.
  std::vector<std::string> names() const;

  static Spec from(std::vector<Effect> effects, std::vector<double> params,
                   std::vector<double> rates);
};

/// Effect statistics and tie gains resolved against one covariate table.
/// Missing numeric covariates are replaced by the roster mean with a warning.
class Evaluator {
 public:
  Evaluator(std::span<const Effect> effects, const NodeAttributes& attrs);

  std::size_t dimension() const noexcept { return terms_.size(); }

  /// s_ik(x) for effect k.
  double stat(const Graph& x, NodeIndex i, std::size_t k) const;

  /// f_i(x with (i,j)) - f_i(x without (i,j)) under parameters beta.
  double gain(const Graph& x, NodeIndex i, NodeIndex j, std::span<const double> beta) const;

  /// Sum over nodes with active[i] of s_ik(x), for every k.
  Eigen::VectorXd total_stats(const Graph& x, const ActiveMask& active) const;

 private:
  struct Term {
    EffectKind kind;
    std::vector<double> values;  // ego_plus_alt_x
    std::vector<int> codes;      // same_x, categorical
    bool categorical = false;
  };
  std::vector<Term> terms_;
};

double effect_stat(const Graph& x, NodeIndex i, const Effect& effect, const NodeAttributes& attrs);
double objective(const Graph& x, NodeIndex i, const Spec& spec, const NodeAttributes& attrs);

/// Choice distribution of one micro-step: probs[0] is "keep", probs[r + 1]
/// toggles (i, partners[r]).
struct MicrostepDistribution {
  std::vector<NodeIndex> partners;
  std::vector<double> probs;
};

/// Multinomial logit over f_i of the candidate states. Partners must be
/// active (if a mask is given) and not forbidden. Throws if i is absent.
MicrostepDistribution microstep_probs(const Graph& x, NodeIndex i, const Spec& spec,
                                      const NodeAttributes& attrs, const ActiveMask& active = {});

/// Probability that j accepts a tie proposed by i: logistic of j's
/// objective change. Throws if the tie already exists.
double confirm_prob(const Graph& x, NodeIndex j, NodeIndex i, const Spec& spec,
                    const NodeAttributes& attrs);

/// Forward simulation of one period: a unit-rate clock over [0, n_active *
/// lambda] yields K ~ Poisson(n_active * lambda) opportunities, each taken by
/// a uniformly chosen active actor. Creations need the partner's
/// confirmation; dissolutions are unilateral. Deterministic given seed.
Graph simulate_period(const Graph& x0, double rate, std::span<const double> beta,
                      const Evaluator& evaluator, const ActiveMask& active, std::uint64_t seed);

Graph simulate_period(const Graph& x0, double rate, const Spec& spec, const NodeAttributes& attrs,
                      const ActiveMask& active, std::uint64_t seed);

/// Observed targets: per-period Hamming distances, then per-effect sums of
/// s_ik over the actors at each period's end wave.
Eigen::VectorXd target_statistics(const Panel& panel, const Spec& spec);

/// Fills unset (NaN) rates and the density parameter from the panel.
Spec with_default_initial_values(const Panel& panel, Spec spec);

/// Method-of-moments fit, each period simulated from its observed start wave.
EstimationResult fit_saom(const Panel& panel, const Spec& spec, const RmSettings& rm,
                          std::uint64_t seed);

/// Rates below this value mark a fit as degenerate.
inline constexpr double kRateBoundary = 1e-3;

}  // namespace netcatalyst::saom

#endif  // NETCATALYST_SAOM_HPP_
