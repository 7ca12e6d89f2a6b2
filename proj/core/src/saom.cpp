#include "netcatalyst/saom.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "netcatalyst/log.hpp"
#include "netcatalyst/parallel.hpp"
#include "netcatalyst/random.hpp"
#include "netcatalyst/statistics.hpp"

namespace netcatalyst::saom {

std::string Effect::name() const {
  switch (kind) {
    case EffectKind::density: return "density";
    case EffectKind::trans_triad: return "transTriad";
    case EffectKind::in_pop: return "inPop";
    case EffectKind::ego_plus_alt_x:
      return "egoPlusAltX(" + attr + (level.empty() ? "" : "=" + level) + ")";
    case EffectKind::same_x: return "sameX(" + attr + ")";
  }
  return "unknown";
}

void Spec::validate() const {
  if (params.size() != effects.size()) {
    throw std::invalid_argument("SAOM spec has " + std::to_string(params.size()) +
                                " parameters for " + std::to_string(effects.size()) + " effects");
  }
  if (!fixed.empty() && fixed.size() != effects.size()) {
    throw std::invalid_argument("SAOM spec fixed mask has wrong length");
  }
  if (!rate_fixed.empty() && rate_fixed.size() != rates.size()) {
    throw std::invalid_argument("SAOM spec rate mask has wrong length");
  }
  const auto densities = std::count_if(effects.begin(), effects.end(), [](const Effect& e) {
    return e.kind == EffectKind::density;
  });
  if (densities != 1) throw std::invalid_argument("SAOM spec needs exactly one density effect");
  std::set<std::tuple<int, std::string, std::string>> seen;
  for (const auto& e : effects) {
    if ((e.kind == EffectKind::ego_plus_alt_x || e.kind == EffectKind::same_x) && e.attr.empty()) {
      throw std::invalid_argument("effect " + e.name() + " needs an attribute");
    }
    if (!seen.emplace(static_cast<int>(e.kind), e.attr, e.level).second) {
      throw std::invalid_argument("duplicate effect " + e.name());
    }
  }
  for (std::size_t m = 0; m < rates.size(); ++m) {
    if (!(rates[m] > 0.0) && !std::isnan(rates[m])) {
      throw std::invalid_argument("rate of period " + std::to_string(m + 1) + " must be > 0");
    }
  }
}

std::vector<std::string> Spec::names() const {
  std::vector<std::string> out;
  for (std::size_t m = 0; m < rates.size(); ++m) out.push_back("rate period " + std::to_string(m + 1));
  for (const auto& e : effects) out.push_back(e.name());
  return out;
}

Spec Spec::from(std::vector<Effect> effects, std::vector<double> params, std::vector<double> rates) {
  Spec s;
  s.effects = std::move(effects);
  s.params = params.empty() ? std::vector<double>(s.effects.size(), 0.0) : std::move(params);
  s.rates = std::move(rates);
  return s;
}

Evaluator::Evaluator(std::span<const Effect> effects, const NodeAttributes& attrs) {
  for (const auto& e : effects) {
    Term t{e.kind, {}, {}, false};
    if (e.kind == EffectKind::ego_plus_alt_x) {
      t.values.resize(attrs.size());
      if (attrs.is_categorical(e.attr)) {
        const std::string level = e.level.empty() ? "yes" : e.level;
        const int code = attrs.level_code(e.attr, level);
        for (std::size_t i = 0; i < attrs.size(); ++i) {
          t.values[i] = attrs.category(e.attr, i) == code ? 1.0 : 0.0;
        }
      } else {
        NodeAttributes copy = attrs;
        if (const auto imputed = copy.impute_mean(e.attr); imputed > 0) {
          warn("covariate '" + e.attr + "': " + std::to_string(imputed) +
               " missing value(s) replaced by the roster mean");
        }
        for (std::size_t i = 0; i < attrs.size(); ++i) t.values[i] = copy.numeric(e.attr, i);
      }
    } else if (e.kind == EffectKind::same_x) {
      t.codes.resize(attrs.size());
      if (attrs.is_categorical(e.attr)) {
        t.categorical = true;
        for (std::size_t i = 0; i < attrs.size(); ++i) t.codes[i] = attrs.category(e.attr, i);
      } else {
        NodeAttributes copy = attrs;
        if (const auto imputed = copy.impute_mean(e.attr); imputed > 0) {
          warn("covariate '" + e.attr + "': " + std::to_string(imputed) +
               " missing value(s) replaced by the roster mean");
        }
        t.values.resize(attrs.size());
        for (std::size_t i = 0; i < attrs.size(); ++i) t.values[i] = copy.numeric(e.attr, i);
      }
    }
    terms_.push_back(std::move(t));
  }
}

namespace {

double match(const std::vector<int>& codes, const std::vector<double>& values, bool categorical,
             NodeIndex i, NodeIndex j) {
  if (categorical) {
    return (codes[i] != NodeAttributes::kMissingLevel && codes[i] == codes[j]) ? 1.0 : 0.0;
  }
  return values[i] == values[j] ? 1.0 : 0.0;
}

}  // namespace

double Evaluator::stat(const Graph& x, NodeIndex i, std::size_t k) const {
  const auto& t = terms_.at(k);
  double s = 0.0;
  switch (t.kind) {
    case EffectKind::density: return static_cast<double>(x.degree(i));
    case EffectKind::trans_triad: return node_triangles(x, i);
    case EffectKind::in_pop:
      x.for_each_neighbor(i, [&](NodeIndex j) { s += static_cast<double>(x.degree(j)); });
      return s;
    case EffectKind::ego_plus_alt_x:
      x.for_each_neighbor(i, [&](NodeIndex j) { s += t.values[i] + t.values[j]; });
      return s;
    case EffectKind::same_x:
      x.for_each_neighbor(i, [&](NodeIndex j) { s += match(t.codes, t.values, t.categorical, i, j); });
      return s;
  }
  return s;
}

double Evaluator::gain(const Graph& x, NodeIndex i, NodeIndex j, std::span<const double> beta) const {
  const std::size_t tie = x.has_edge(i, j) ? 1 : 0;
  double f = 0.0;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (beta[k] == 0.0) continue;
    const auto& t = terms_[k];
    double c = 0.0;
    switch (t.kind) {
      case EffectKind::density: c = 1.0; break;
      case EffectKind::trans_triad: c = static_cast<double>(x.shared_partners(i, j)); break;
      case EffectKind::in_pop: c = static_cast<double>(x.degree(j) - tie + 1); break;
      case EffectKind::ego_plus_alt_x: c = t.values[i] + t.values[j]; break;
      case EffectKind::same_x: c = match(t.codes, t.values, t.categorical, i, j); break;
    }
    f += beta[k] * c;
  }
  return f;
}

Eigen::VectorXd Evaluator::total_stats(const Graph& x, const ActiveMask& active) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(terms_.size()));
  for (NodeIndex i = 0; i < x.size(); ++i) {
    if (!active.empty() && !active[i]) continue;
    for (std::size_t k = 0; k < terms_.size(); ++k) out(static_cast<Eigen::Index>(k)) += stat(x, i, k);
  }
  return out;
}

double effect_stat(const Graph& x, NodeIndex i, const Effect& effect, const NodeAttributes& attrs) {
  if (i >= x.size()) throw NodeRangeError(i, x.size());
  const Evaluator ev(std::span<const Effect>(&effect, 1), attrs);
  return ev.stat(x, i, 0);
}

double objective(const Graph& x, NodeIndex i, const Spec& spec, const NodeAttributes& attrs) {
  if (i >= x.size()) throw NodeRangeError(i, x.size());
  const Evaluator ev(spec.effects, attrs);
  double f = 0.0;
  for (std::size_t k = 0; k < spec.effects.size(); ++k) f += spec.params.at(k) * ev.stat(x, i, k);
  return f;
}

namespace {

bool eligible(const Graph& x, NodeIndex i, NodeIndex j, const ActiveMask& active) {
  return j != i && (active.empty() || active[j]) && !x.is_forbidden(i, j);
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

MicrostepDistribution microstep_probs(const Graph& x, NodeIndex i, const Spec& spec,
                                      const NodeAttributes& attrs, const ActiveMask& active) {
  if (i >= x.size()) throw NodeRangeError(i, x.size());
  if (!active.empty() && !active[i]) {
    throw std::invalid_argument("actor " + std::to_string(i) + " is not active in this period");
  }
  if (x.size() > 1) {
    bool absent = true;
    for (NodeIndex j = 0; j < x.size() && absent; ++j) absent = j == i || x.is_forbidden(i, j);
    if (absent) throw std::invalid_argument("actor " + std::to_string(i) + " is structurally absent");
  }
  const Evaluator ev(spec.effects, attrs);
  MicrostepDistribution out;
  std::vector<double> values{0.0};
  for (NodeIndex j = 0; j < x.size(); ++j) {
    if (!eligible(x, i, j, active)) continue;
    const double g = ev.gain(x, i, j, spec.params);
    out.partners.push_back(j);
    values.push_back(x.has_edge(i, j) ? -g : g);
  }
  const double top = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (auto& v : values) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : values) v /= total;
  out.probs = std::move(values);
  return out;
}

double confirm_prob(const Graph& x, NodeIndex j, NodeIndex i, const Spec& spec,
                    const NodeAttributes& attrs) {
  x.check_pair(i, j);
  if (x.has_edge(i, j)) {
    throw std::invalid_argument("confirmation requested for existing tie (" + std::to_string(i) +
                                ", " + std::to_string(j) + "); dissolution is unilateral");
  }
  const Evaluator ev(spec.effects, attrs);
  return logistic(ev.gain(x, j, i, spec.params));
}

Graph simulate_period(const Graph& x0, double rate, std::span<const double> beta,
                      const Evaluator& evaluator, const ActiveMask& active, std::uint64_t seed) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw std::invalid_argument("simulate_period: rate must be finite and >= 0");
  if (!active.empty() && active.size() != x0.size()) {
    throw std::invalid_argument("simulate_period: active mask has wrong size");
  }
  Graph x = x0;
  std::vector<NodeIndex> actors;
  for (NodeIndex i = 0; i < x.size(); ++i) {
    if (active.empty() || active[i]) actors.push_back(i);
  }
  if (actors.empty() || rate == 0.0) return x;

  Rng timing(derive_seed(seed, {0}));
  Rng choice(derive_seed(seed, {1}));
  const double horizon = static_cast<double>(actors.size()) * rate;
  std::vector<double> weights;
  std::vector<NodeIndex> partners;
  weights.reserve(x.size());
  partners.reserve(x.size());

  for (double t = -std::log1p(-uniform01(timing)); t < horizon; t -= std::log1p(-uniform01(timing))) {
    const NodeIndex i = actors[std::min(actors.size() - 1,
                                        static_cast<std::size_t>(uniform01(choice) *
                                                                 static_cast<double>(actors.size())))];
    partners.clear();
    weights.clear();
    double top = 0.0;
    for (const NodeIndex j : actors) {
      if (j == i || x.is_forbidden(i, j)) continue;
      const double g = evaluator.gain(x, i, j, beta);
      const double v = x.has_edge(i, j) ? -g : g;
      partners.push_back(j);
      weights.push_back(v);
      top = std::max(top, v);
    }
    double total = std::exp(-top);  // keep
    for (auto& w : weights) {
      w = std::exp(w - top);
      total += w;
    }
    double u = uniform01(choice) * total - std::exp(-top);
    if (u < 0.0) continue;
    std::size_t r = 0;
    for (; r + 1 < weights.size() && u >= weights[r]; ++r) u -= weights[r];
    if (weights.empty()) continue;
    const NodeIndex j = partners[r];
    assert(!x.is_forbidden(i, j));
    if (x.has_edge(i, j)) {
      x.flip(i, j);
    } else if (uniform01(choice) < logistic(evaluator.gain(x, j, i, beta))) {
      x.flip(i, j);
    }
  }
  return x;
}

Graph simulate_period(const Graph& x0, double rate, const Spec& spec, const NodeAttributes& attrs,
                      const ActiveMask& active, std::uint64_t seed) {
  const Evaluator ev(spec.effects, attrs);
  return simulate_period(x0, rate, spec.params, ev, active, seed);
}

Eigen::VectorXd target_statistics(const Panel& panel, const Spec& spec) {
  panel.validate();
  const std::size_t periods = panel.period_count();
  const auto k = static_cast<Eigen::Index>(spec.effects.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(periods) + k);
  for (std::size_t m = 0; m < periods; ++m) {
    const Graph start = panel.period_start(m);
    const ActiveMask active = panel.period_active(m);
    out(static_cast<Eigen::Index>(m)) = static_cast<double>(hamming_distance(start, panel.period_end(m)));
    const Evaluator ev(spec.effects, panel.attributes[m]);
    out.tail(k) += ev.total_stats(panel.period_end(m), active);
  }
  return out;
}

Spec with_default_initial_values(const Panel& panel, Spec spec) {
  const std::size_t periods = panel.period_count();
  if (spec.rates.empty()) spec.rates.assign(periods, std::numeric_limits<double>::quiet_NaN());
  if (spec.rates.size() != periods) {
    throw std::invalid_argument("spec has " + std::to_string(spec.rates.size()) +
                                " rates for a panel with " + std::to_string(periods) + " periods");
  }
  double ties = 0.0;
  double pairs = 0.0;
  for (std::size_t m = 0; m < periods; ++m) {
    const ActiveMask active = panel.period_active(m);
    const double n_active = static_cast<double>(std::count(active.begin(), active.end(), 1));
    const Graph start = panel.period_start(m);
    const double distance = static_cast<double>(hamming_distance(start, panel.period_end(m)));
    if (std::isnan(spec.rates[m])) spec.rates[m] = std::max(0.1, 2.0 * distance / std::max(1.0, n_active));
    ties += static_cast<double>(panel.period_end(m).edge_count());
    pairs += n_active * (n_active - 1.0) / 2.0;
  }
  for (std::size_t k = 0; k < spec.effects.size(); ++k) {
    if (!std::isnan(spec.params[k])) continue;
    if (spec.effects[k].kind == EffectKind::density && pairs > 0.0) {
      const double rho = std::clamp(ties / pairs, 1e-3, 1.0 - 1e-3);
      spec.params[k] = std::log(rho / (1.0 - rho));
    } else {
      spec.params[k] = 0.0;
    }
  }
  return spec;
}

namespace {

class SaomMoments final : public MomentModel {
 public:
  SaomMoments(const Panel& panel, const Spec& spec, const RmSettings& rm)
      : spec_(spec), rm_(rm) {
    const std::size_t periods = panel.period_count();
    for (std::size_t m = 0; m < periods; ++m) {
      starts_.push_back(panel.period_start(m));
      active_.push_back(panel.period_active(m));
      evaluators_.emplace_back(spec_.effects, panel.attributes[m]);
    }
    const Eigen::VectorXd targets = target_statistics(panel, spec_);
    for (std::size_t m = 0; m < periods; ++m) {
      if (!spec_.is_rate_fixed(m)) free_.push_back(static_cast<Eigen::Index>(m));
    }
    for (std::size_t k = 0; k < spec_.effects.size(); ++k) {
      if (!spec_.is_fixed(k)) free_.push_back(static_cast<Eigen::Index>(periods + k));
    }
    if (free_.empty()) throw std::invalid_argument("SAOM fit: every parameter is fixed");
    observed_.resize(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) observed_(static_cast<Eigen::Index>(f)) = targets(free_[f]);
    all_names_ = spec_.names();
    spread_ = change_spread();
  }

  std::size_t dimension() const override { return free_.size(); }
  std::vector<std::string> names() const override {
    std::vector<std::string> out;
    for (const auto f : free_) out.push_back(all_names_[static_cast<std::size_t>(f)]);
    return out;
  }
  const Eigen::VectorXd& observed() const override { return observed_; }

  Eigen::VectorXd full(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd all(static_cast<Eigen::Index>(spec_.rates.size() + spec_.params.size()));
    for (std::size_t m = 0; m < spec_.rates.size(); ++m) all(static_cast<Eigen::Index>(m)) = spec_.rates[m];
    for (std::size_t k = 0; k < spec_.params.size(); ++k) {
      all(static_cast<Eigen::Index>(spec_.rates.size() + k)) = spec_.params[k];
    }
    for (std::size_t f = 0; f < free_.size(); ++f) all(free_[f]) = theta(static_cast<Eigen::Index>(f));
    return all;
  }

  Eigen::VectorXd initial() const {
    const Eigen::VectorXd all = full(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_.size())));
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const auto idx = static_cast<std::size_t>(free_[f]);
      out(static_cast<Eigen::Index>(f)) =
          idx < spec_.rates.size() ? spec_.rates[idx] : spec_.params[idx - spec_.rates.size()];
    }
    (void)all;
    return out;
  }

  Eigen::VectorXd simulate_full(const Eigen::VectorXd& all, std::uint64_t seed) const {
    const std::size_t periods = starts_.size();
    const auto k = static_cast<Eigen::Index>(spec_.effects.size());
    std::vector<double> beta(all.data() + periods, all.data() + all.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(periods) + k);
    for (std::size_t m = 0; m < periods; ++m) {
      const Graph end = simulate_period(starts_[m], all(static_cast<Eigen::Index>(m)), beta,
                                        evaluators_[m], active_[m], derive_seed(seed, {m}));
      out(static_cast<Eigen::Index>(m)) = static_cast<double>(hamming_distance(starts_[m], end));
      out.tail(k) += evaluators_[m].total_stats(end, active_[m]);
    }
    return out;
  }

  Eigen::VectorXd select(const Eigen::VectorXd& s) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) out(static_cast<Eigen::Index>(f)) = s(free_[f]);
    return out;
  }

  // Root mean square of each effect's change statistic over the admissible
  // toggles of the start waves.
  std::vector<double> change_spread() const {
    const std::size_t k = spec_.effects.size();
    std::vector<double> sum(k, 0.0);
    double count = 0.0;
    std::vector<double> unit(k, 0.0);
    for (std::size_t m = 0; m < starts_.size(); ++m) {
      const Graph& x = starts_[m];
      const ActiveMask& active = active_[m];
      for (NodeIndex i = 0; i < x.size(); ++i) {
        if (!active.empty() && !active[i]) continue;
        for (NodeIndex j = 0; j < x.size(); ++j) {
          if (j == i || (!active.empty() && !active[j]) || x.is_forbidden(i, j)) continue;
          for (std::size_t e = 0; e < k; ++e) {
            unit[e] = 1.0;
            const double c = evaluators_[m].gain(x, i, j, unit);
            unit[e] = 0.0;
            sum[e] += c * c;
          }
          count += 1.0;
        }
      }
    }
    for (auto& v : sum) v = count > 0.0 ? std::sqrt(v / count) : 1.0;
    return sum;
  }

  // Rates step in proportion to their size; effects step so the typical
  // change in a choice's log-odds is fd_epsilon.
  double step(std::size_t f, const Eigen::VectorXd& theta) const {
    const auto idx = static_cast<std::size_t>(free_[f]);
    if (idx < spec_.rates.size()) return rm_.fd_epsilon * std::max(theta(static_cast<Eigen::Index>(f)), 1.0);
    return rm_.fd_epsilon / std::max(spread_[idx - spec_.rates.size()], 1.0);
  }

  Batch simulate_batch(const Eigen::VectorXd& theta, std::size_t count, std::uint64_t seed,
                       bool with_derivative) override {
    const auto p = static_cast<Eigen::Index>(free_.size());
    Batch batch;
    batch.stats.resize(static_cast<Eigen::Index>(count), p);
    std::vector<Eigen::MatrixXd> jac(with_derivative ? count : 0);
    const Eigen::VectorXd base = full(theta);
    parallel_for(count, rm_.threads, [&](std::size_t r) {
      const std::uint64_t s = derive_seed(seed, {r});
      const Eigen::VectorXd stats = select(simulate_full(base, s));
      batch.stats.row(static_cast<Eigen::Index>(r)) = stats.transpose();
      if (!with_derivative) return;
      Eigen::MatrixXd d(p, p);
      for (Eigen::Index f = 0; f < p; ++f) {
        Eigen::VectorXd shifted = theta;
        const double eps = step(static_cast<std::size_t>(f), theta);
        shifted(f) += eps;
        d.col(f) = (select(simulate_full(full(shifted), s)) - stats) / eps;
      }
      jac[r] = std::move(d);
    });
    if (with_derivative) {
      batch.jacobian = Eigen::MatrixXd::Zero(p, p);
      for (const auto& d : jac) batch.jacobian += d;
      batch.jacobian /= static_cast<double>(count);
    }
    return batch;
  }

  Eigen::VectorXd simulate_one(const Eigen::VectorXd& theta, std::uint64_t seed) override {
    return select(simulate_full(full(theta), seed));
  }

  Eigen::VectorXd constrain(const Eigen::VectorXd& proposal, const Eigen::VectorXd& current) const override {
    Eigen::VectorXd out = proposal;
    for (std::size_t f = 0; f < free_.size(); ++f) {
      if (static_cast<std::size_t>(free_[f]) >= spec_.rates.size()) continue;
      const auto e = static_cast<Eigen::Index>(f);
      // A rate may shrink by at most a factor of ten per step and never below the boundary.
      out(e) = std::max({out(e), 0.1 * current(e), kRateBoundary});
    }
    return out;
  }

  std::optional<std::string> boundary(const Eigen::VectorXd& theta) const override {
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const auto idx = static_cast<std::size_t>(free_[f]);
      if (idx < spec_.rates.size() && theta(static_cast<Eigen::Index>(f)) <= kRateBoundary) {
        return "rate boundary: " + all_names_[idx] + " driven to 0";
      }
    }
    return std::nullopt;
  }

 private:
  Spec spec_;
  RmSettings rm_;
  std::vector<Graph> starts_;
  std::vector<ActiveMask> active_;
  std::vector<Evaluator> evaluators_;
  std::vector<Eigen::Index> free_;
  Eigen::VectorXd observed_;
  std::vector<double> spread_;
  std::vector<std::string> all_names_;
};

}  // namespace

EstimationResult fit_saom(const Panel& panel, const Spec& spec, const RmSettings& rm,
                          std::uint64_t seed) {
  panel.validate();
  const Spec working = with_default_initial_values(panel, spec);
  working.validate();

  SaomMoments model(panel, working, rm);
  const MomentSolution sol = solve_moments(model, model.initial(), rm, seed);

  EstimationResult res;
  res.names = working.names();
  res.seed = seed;
  res.converged = sol.converged;
  res.iterations = sol.iterations;
  res.overall_ratio = sol.overall_ratio;
  res.flag = sol.flag;
  res.log = sol.log;
  const Eigen::VectorXd all = model.full(sol.theta);
  const std::size_t periods = working.rates.size();
  std::size_t f = 0;
  for (std::size_t idx = 0; idx < res.names.size(); ++idx) {
    const bool fixed = idx < periods ? working.is_rate_fixed(idx) : working.is_fixed(idx - periods);
    res.fixed.push_back(fixed);
    res.estimates.push_back(all(static_cast<Eigen::Index>(idx)));
    if (fixed) {
      res.standard_errors.push_back(0.0);
      res.tratios.push_back(0.0);
    } else {
      res.standard_errors.push_back(sol.standard_errors(static_cast<Eigen::Index>(f)));
      res.tratios.push_back(sol.tratios(static_cast<Eigen::Index>(f)));
      ++f;
    }
  }
  return res;
}

}  // namespace netcatalyst::saom
