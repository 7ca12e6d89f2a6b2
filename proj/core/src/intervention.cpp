#include "netcatalyst/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "netcatalyst/generators.hpp"
#include "netcatalyst/parallel.hpp"
#include "netcatalyst/random.hpp"

namespace netcatalyst::lab {

std::string to_string(InterventionMode mode) {
  switch (mode) {
    case InterventionMode::nao_clique: return "nao-clique";
    case InterventionMode::nao_hub: return "nao-hub";
    case InterventionMode::link_budget: return "link-budget";
  }
  return "unknown";
}

InterventionMode parse_mode(const std::string& text) {
  if (text == "nao-clique") return InterventionMode::nao_clique;
  if (text == "nao-hub") return InterventionMode::nao_hub;
  if (text == "link-budget") return InterventionMode::link_budget;
  throw std::invalid_argument("unknown intervention mode '" + text + "'");
}

void InterventionPlan::validate(std::size_t roster) const {
  if (targets.empty()) throw std::invalid_argument("intervention plan has no targets");
  std::vector<NodeIndex> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("intervention plan lists a target twice");
  }
  if (sorted.back() >= roster) {
    throw std::invalid_argument("unknown target id " + std::to_string(sorted.back()) +
                                " (roster has " + std::to_string(roster) + " nodes)");
  }
  const std::size_t pairs = targets.size() * (targets.size() - 1) / 2;
  if (mode == InterventionMode::link_budget && budget > pairs) {
    throw std::invalid_argument("link budget " + std::to_string(budget) + " exceeds the " +
                                std::to_string(pairs) + " target pairs");
  }
}

bool InterventionPlan::active(std::size_t period) const {
  return std::find(active_periods.begin(), active_periods.end(), period) != active_periods.end();
}

Graph apply_intervention(const Graph& g, const InterventionPlan& plan, std::uint64_t seed,
                         std::optional<NodeIndex> hub) {
  plan.validate(g.size());
  Graph out = g;
  switch (plan.mode) {
    case InterventionMode::nao_clique:
      for (std::size_t a = 0; a < plan.targets.size(); ++a) {
        for (std::size_t b = a + 1; b < plan.targets.size(); ++b) {
          const NodeIndex i = plan.targets[a];
          const NodeIndex j = plan.targets[b];
          if (!out.has_edge(i, j) && !out.is_forbidden(i, j)) out.flip(i, j);
        }
      }
      break;
    case InterventionMode::nao_hub: {
      NodeIndex h = 0;
      if (hub) {
        if (*hub >= out.size()) throw NodeRangeError(*hub, out.size());
        h = *hub;
      } else {
        if (plan.capacity != 0 && out.size() >= plan.capacity) {
          throw std::invalid_argument("nao-hub: roster is at its capacity of " +
                                      std::to_string(plan.capacity) + " nodes");
        }
        h = out.add_node();
      }
      for (const NodeIndex t : plan.targets) {
        if (t == h) throw std::invalid_argument("nao-hub: the hub cannot be its own target");
        if (!out.has_edge(h, t) && !out.is_forbidden(h, t)) out.flip(h, t);
      }
      break;
    }
    case InterventionMode::link_budget: {
      std::vector<Dyad> open;
      for (std::size_t a = 0; a < plan.targets.size(); ++a) {
        for (std::size_t b = a + 1; b < plan.targets.size(); ++b) {
          const NodeIndex i = std::min(plan.targets[a], plan.targets[b]);
          const NodeIndex j = std::max(plan.targets[a], plan.targets[b]);
          if (!out.has_edge(i, j) && !out.is_forbidden(i, j)) open.push_back({i, j});
        }
      }
      std::sort(open.begin(), open.end());
      Rng rng = make_rng(seed);
      const std::size_t count = std::min(plan.budget, open.size());
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t pick =
            k + std::min(open.size() - k - 1,
                         static_cast<std::size_t>(uniform01(rng) * static_cast<double>(open.size() - k)));
        std::swap(open[k], open[pick]);
        out.flip(open[k].first, open[k].second);
      }
      break;
    }
  }
  return out;
}

double metric_target_share(const Graph& g, const std::vector<NodeIndex>& targets) {
  if (g.edge_count() == 0) throw std::invalid_argument("target share is undefined on a graph without edges");
  double held = 0.0;
  for (const NodeIndex t : targets) {
    if (t >= g.size()) throw NodeRangeError(t, g.size());
    held += static_cast<double>(g.degree(t));
  }
  return held / (2.0 * static_cast<double>(g.edge_count()));
}

double metric_degree_gini(const Graph& g) {
  std::vector<double> d(g.size());
  for (NodeIndex i = 0; i < g.size(); ++i) d[i] = static_cast<double>(g.degree(i));
  std::sort(d.begin(), d.end());
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  if (total == 0.0) return 0.0;
  // sum_{i,j} |d_i - d_j| = 2 sum_k (2k - n + 1) d_(k) over the sorted sequence.
  const double n = static_cast<double>(d.size());
  double weighted = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) weighted += (2.0 * static_cast<double>(k) - n + 1.0) * d[k];
  return weighted / (n * total);
}

double metric_mean_target_degree(const Graph& g, const std::vector<NodeIndex>& targets) {
  if (targets.empty()) throw std::invalid_argument("mean target degree needs at least one target");
  double sum = 0.0;
  for (const NodeIndex t : targets) {
    if (t >= g.size()) throw NodeRangeError(t, g.size());
    sum += static_cast<double>(g.degree(t));
  }
  return sum / static_cast<double>(targets.size());
}

double sign_flip_p_value(const std::vector<double>& differences, std::size_t resamples,
                         std::uint64_t seed) {
  if (differences.empty()) throw std::invalid_argument("sign-flip test needs at least one difference");
  if (resamples == 0) throw std::invalid_argument("sign-flip test needs at least one resample");
  const double observed = std::accumulate(differences.begin(), differences.end(), 0.0);
  const double tolerance = 1e-12 * std::max(1.0, std::abs(observed));
  Rng rng = make_rng(seed);
  std::size_t extreme = 0;
  for (std::size_t b = 0; b < resamples; ++b) {
    double sum = 0.0;
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < differences.size(); ++i) {
      if (i % 64 == 0) bits = rng();
      sum += (bits & 1U) ? differences[i] : -differences[i];
      bits >>= 1U;
    }
    if (sum >= observed - tolerance) ++extreme;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(resamples + 1);
}

void ExperimentConfig::validate() const {
  if (replicates < 2) throw std::invalid_argument("an experiment needs at least 2 replicates");
  if (waves < 2) throw std::invalid_argument("an experiment needs at least 2 waves");
  if (n < 2) throw std::invalid_argument("an experiment needs at least 2 nodes");
  if (spec.rates.size() != waves - 1) {
    throw std::invalid_argument("experiment spec has " + std::to_string(spec.rates.size()) +
                                " rates for " + std::to_string(waves - 1) + " periods");
  }
  spec.validate();
  plan.validate(n);
  for (const auto p : plan.active_periods) {
    if (p + 1 >= waves) throw std::invalid_argument("intervention period " + std::to_string(p) + " out of range");
  }
  if (initial_edges > n * (n - 1) / 2) throw std::invalid_argument("initial edge count exceeds the pair count");
  if (permutations == 0) throw std::invalid_argument("permutation count must be positive");
}

const WaveTest& ExperimentReport::test(const std::string& metric, std::size_t wave) const {
  for (const auto& t : tests) {
    if (t.metric == metric && t.wave == wave) return t;
  }
  throw std::out_of_range("no test for " + metric + " at wave " + std::to_string(wave));
}

namespace {

Graph focal(const Graph& g, std::size_t n) {
  if (g.size() == n) return g;
  Graph out(n);
  for (const auto& e : g.edges()) {
    if (e.second < n) out.flip(e.first, e.second);
  }
  return out;
}

std::vector<double> metrics(const Graph& g, std::size_t n, const std::vector<NodeIndex>& targets) {
  const Graph f = focal(g, n);
  const double share = f.edge_count() == 0 ? 0.0 : metric_target_share(f, targets);
  return {share, metric_degree_gini(f), metric_mean_target_degree(f, targets)};
}

NodeAttributes membership(std::size_t n, const std::vector<NodeIndex>& targets) {
  std::vector<std::string> values(n, "no");
  for (const auto t : targets) values[t] = "yes";
  NodeAttributes attrs(n);
  attrs.set_categorical("member", {"no", "yes"}, values);
  return attrs;
}

struct Replicate {
  std::vector<std::vector<double>> treated;  // [wave][metric]
  std::vector<std::vector<double>> control;
  std::vector<MembershipFit> fits;
};

std::vector<MembershipFit> fit_arm(const std::vector<Graph>& waves, const ExperimentConfig& cfg,
                                   const NodeAttributes& attrs, const std::string& arm,
                                   std::size_t replicate, std::uint64_t seed) {
  saom::Spec spec;
  spec.effects = cfg.spec.effects;
  const saom::Effect member{saom::EffectKind::ego_plus_alt_x, "member", "yes"};
  auto found = std::find(spec.effects.begin(), spec.effects.end(), member);
  if (found == spec.effects.end()) {
    spec.effects.push_back(member);
    found = spec.effects.end() - 1;
  }
  const auto index = static_cast<std::size_t>(found - spec.effects.begin());
  spec.params.assign(spec.effects.size(), std::numeric_limits<double>::quiet_NaN());
  spec.rates.assign(1, std::numeric_limits<double>::quiet_NaN());
  RmSettings rm = cfg.rm;
  rm.threads = 1;

  std::vector<MembershipFit> out;
  for (std::size_t m = 0; m + 1 < waves.size(); ++m) {
    const Panel panel = Panel::from_waves({focal(waves[m], cfg.n), focal(waves[m + 1], cfg.n)}, attrs);
    MembershipFit fit{replicate, arm, m, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), false};
    try {
      const auto res = saom::fit_saom(panel, spec, rm, derive_seed(seed, {m}));
      fit.estimate = res.estimates[1 + index];
      fit.standard_error = res.standard_errors[1 + index];
      fit.converged = res.converged;
    } catch (const EstimationError&) {
      // Degenerate period: reported as a missing estimate.
    }
    out.push_back(fit);
  }
  return out;
}

Replicate run_replicate(const ExperimentConfig& cfg, std::size_t r, std::uint64_t rseed) {
  const std::size_t periods = cfg.waves - 1;
  const NodeAttributes attrs = membership(cfg.n, cfg.plan.targets);
  NodeAttributes treated_attrs = attrs;
  const saom::Evaluator control_eval(cfg.spec.effects, attrs);
  std::optional<saom::Evaluator> treated_eval;

  Graph control = generate_er(cfg.n, cfg.initial_edges, derive_seed(rseed, {0}));
  Graph treated = control;
  std::optional<NodeIndex> hub;
  Replicate rep;
  std::vector<Graph> treated_waves{treated};
  std::vector<Graph> control_waves{control};
  rep.treated.push_back(metrics(treated, cfg.n, cfg.plan.targets));
  rep.control.push_back(metrics(control, cfg.n, cfg.plan.targets));

  for (std::size_t m = 0; m < periods; ++m) {
    if (cfg.intervene && cfg.plan.active(m)) {
      treated = apply_intervention(treated, cfg.plan, derive_seed(rseed, {2, m}), hub);
      if (cfg.plan.mode == InterventionMode::nao_hub && !hub) {
        hub = cfg.n;
        treated_attrs.append_node();
      }
    } else if (hub) {
      // The coordinating node withdraws once the intervention ends.
      for (const auto j : treated.neighbors(*hub)) treated.flip(*hub, j);
    }
    ActiveMask mask;
    if (hub) {
      mask.assign(treated.size(), 1);
      mask[*hub] = 0;
      if (!treated_eval) treated_eval.emplace(cfg.spec.effects, treated_attrs);
    }
    const saom::Evaluator& tev = hub ? *treated_eval : control_eval;
    const std::uint64_t s = derive_seed(rseed, {1, m});
    control = saom::simulate_period(control, cfg.spec.rates[m], cfg.spec.params, control_eval, {}, s);
    treated = saom::simulate_period(treated, cfg.spec.rates[m], cfg.spec.params, tev, mask, s);
    rep.treated.push_back(metrics(treated, cfg.n, cfg.plan.targets));
    rep.control.push_back(metrics(control, cfg.n, cfg.plan.targets));
    treated_waves.push_back(treated);
    control_waves.push_back(control);
  }
  if (r < cfg.fit_replicates) {
    auto t = fit_arm(treated_waves, cfg, attrs, "treated", r, derive_seed(rseed, {3, 0}));
    auto c = fit_arm(control_waves, cfg, attrs, "control", r, derive_seed(rseed, {3, 1}));
    rep.fits.insert(rep.fits.end(), t.begin(), t.end());
    rep.fits.insert(rep.fits.end(), c.begin(), c.end());
  }
  return rep;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t R = config.replicates;
  ExperimentReport report;
  report.replicates = R;
  report.seed = config.seed;
  for (std::size_t r = 0; r < R; ++r) report.replicate_seeds.push_back(derive_seed(config.seed, {r}));

  std::vector<Replicate> reps(R);
  parallel_for(R, config.threads, [&](std::size_t r) {
    reps[r] = run_replicate(config, r, report.replicate_seeds[r]);
  });

  const std::size_t M = kMetrics.size();
  report.treated.assign(M, std::vector<std::vector<double>>(config.waves, std::vector<double>(R)));
  report.control = report.treated;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t w = 0; w < config.waves; ++w) {
      for (std::size_t k = 0; k < M; ++k) {
        report.treated[k][w][r] = reps[r].treated[w][k];
        report.control[k][w][r] = reps[r].control[w][k];
      }
    }
    report.fits.insert(report.fits.end(), reps[r].fits.begin(), reps[r].fits.end());
  }

  const double rn = static_cast<double>(R);
  for (std::size_t k = 0; k < M; ++k) {
    for (std::size_t w = 0; w < config.waves; ++w) {
      WaveTest t;
      t.metric = kMetrics[k];
      t.wave = w;
      std::vector<double> diff(R);
      for (std::size_t r = 0; r < R; ++r) diff[r] = report.treated[k][w][r] - report.control[k][w][r];
      t.treated_mean = std::accumulate(report.treated[k][w].begin(), report.treated[k][w].end(), 0.0) / rn;
      t.control_mean = std::accumulate(report.control[k][w].begin(), report.control[k][w].end(), 0.0) / rn;
      t.mean_difference = std::accumulate(diff.begin(), diff.end(), 0.0) / rn;
      double ss = 0.0;
      for (const double d : diff) ss += (d - t.mean_difference) * (d - t.mean_difference);
      t.paired_se = std::sqrt(ss / (rn - 1.0) / rn);
      t.p_value = sign_flip_p_value(diff, config.permutations, derive_seed(config.seed, {1u << 20, k, w}));
      report.tests.push_back(t);
    }
  }

  if (config.intervene && !config.plan.active_periods.empty()) {
    const std::size_t last = *std::max_element(config.plan.active_periods.begin(),
                                               config.plan.active_periods.end()) + 1;
    if (last + 1 < config.waves) {
      report.last_active_wave = last;
      const auto& tr = report.treated[0];
      const auto& co = report.control[0];
      const std::size_t final_wave = config.waves - 1;
      std::size_t shrunk = 0;
      for (std::size_t r = 0; r < R; ++r) {
        if (tr[final_wave][r] - co[final_wave][r] < tr[last][r] - co[last][r]) ++shrunk;
      }
      report.shrink_fraction = static_cast<double>(shrunk) / rn;
    }
  }
  return report;
}

}  // namespace netcatalyst::lab
