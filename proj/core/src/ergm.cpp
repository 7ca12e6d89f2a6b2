#include "netcatalyst/ergm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "netcatalyst/parallel.hpp"
#include "netcatalyst/statistics.hpp"

namespace netcatalyst::ergm {

std::string Effect::name() const {
  std::ostringstream os;
  switch (kind) {
    case EffectKind::edges: return "edges";
    case EffectKind::triangles: return "triangles";
    case EffectKind::gwdegree: os << "gwdegree(" << decay << ")"; break;
    case EffectKind::gwesp: os << "gwesp(" << decay << ")"; break;
    case EffectKind::nodefactor: os << "nodefactor(" << attr << "=" << level << ")"; break;
    case EffectKind::nodematch: os << "nodematch(" << attr << ")"; break;
  }
  return os.str();
}

void Spec::validate() const {
  if (effects.empty()) throw std::invalid_argument("ERGM spec has no effects");
  if (params.size() != effects.size()) {
    throw std::invalid_argument("ERGM spec has " + std::to_string(params.size()) +
                                " parameters for " + std::to_string(effects.size()) + " effects");
  }
  if (!fixed.empty() && fixed.size() != effects.size()) {
    throw std::invalid_argument("ERGM spec fixed mask has wrong length");
  }
  std::set<std::tuple<int, std::string, std::string>> seen;
  for (const auto& e : effects) {
    const bool has_attr = e.kind == EffectKind::nodefactor || e.kind == EffectKind::nodematch;
    if (has_attr && e.attr.empty()) {
      throw std::invalid_argument("effect " + e.name() + " needs an attribute");
    }
    if (e.kind == EffectKind::nodefactor && e.level.empty()) {
      throw std::invalid_argument("effect " + e.name() + " needs a level");
    }
    if ((e.kind == EffectKind::gwdegree || e.kind == EffectKind::gwesp) &&
        !(std::isfinite(e.decay) && e.decay >= 0.0)) {
      throw std::invalid_argument("effect " + e.name() + " needs a finite decay >= 0");
    }
    if (!seen.emplace(static_cast<int>(e.kind), e.attr, e.level).second) {
      throw std::invalid_argument("duplicate effect " + e.name());
    }
  }
}

std::vector<std::string> Spec::names() const {
  std::vector<std::string> out;
  for (const auto& e : effects) out.push_back(e.name());
  return out;
}

Spec Spec::from(std::vector<Effect> effects, std::vector<double> params) {
  Spec s;
  s.effects = std::move(effects);
  s.params = params.empty() ? std::vector<double>(s.effects.size(), 0.0) : std::move(params);
  s.fixed.assign(s.effects.size(), false);
  return s;
}

StatisticsEngine::StatisticsEngine(const Spec& spec, const NodeAttributes& attrs)
    : n_attr_(attrs.size()) {
  spec.validate();
  for (const auto& e : spec.effects) {
    Term t{e.kind, e.decay, {}, 0};
    if (e.kind == EffectKind::nodefactor || e.kind == EffectKind::nodematch) {
      if (!attrs.is_categorical(e.attr)) {
        throw AttributeError("effect " + e.name() + " requires a categorical attribute");
      }
      t.codes.resize(attrs.size());
      for (std::size_t i = 0; i < attrs.size(); ++i) t.codes[i] = attrs.category(e.attr, i);
      if (e.kind == EffectKind::nodefactor) t.level = attrs.level_code(e.attr, e.level);
    }
    terms_.push_back(std::move(t));
  }
}

Eigen::VectorXd StatisticsEngine::stats(const Graph& g) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (!t.codes.empty() && t.codes.size() < g.size()) {
      throw AttributeError("attributes cover " + std::to_string(t.codes.size()) +
                           " nodes but graph has " + std::to_string(g.size()));
    }
    double v = 0.0;
    switch (t.kind) {
      case EffectKind::edges: v = stat_edges(g); break;
      case EffectKind::triangles: v = stat_triangles(g); break;
      case EffectKind::gwdegree: v = stat_gwdegree(g, t.decay); break;
      case EffectKind::gwesp: v = stat_gwesp(g, t.decay); break;
      case EffectKind::nodefactor:
        for (const auto& e : g.edges()) {
          v += (t.codes[e.first] == t.level) + (t.codes[e.second] == t.level);
        }
        break;
      case EffectKind::nodematch:
        for (const auto& e : g.edges()) {
          const int a = t.codes[e.first];
          v += (a != NodeAttributes::kMissingLevel && a == t.codes[e.second]) ? 1.0 : 0.0;
        }
        break;
    }
    out(static_cast<Eigen::Index>(k)) = v;
  }
  return out;
}

void StatisticsEngine::change(const Graph& g, NodeIndex i, NodeIndex j,
                              Eigen::Ref<Eigen::VectorXd> out) const {
  const std::size_t tie = g.has_edge(i, j) ? 1 : 0;
  std::size_t sp = 0;
  bool sp_known = false;
  auto shared = [&] {
    if (!sp_known) {
      sp = g.shared_partners(i, j);
      sp_known = true;
    }
    return sp;
  };
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    double v = 0.0;
    switch (t.kind) {
      case EffectKind::edges: v = 1.0; break;
      case EffectKind::triangles: v = static_cast<double>(shared()); break;
      case EffectKind::gwdegree:
        v = geometric_increment(g.degree(i) - tie, t.decay) +
            geometric_increment(g.degree(j) - tie, t.decay);
        break;
      case EffectKind::gwesp: {
        v = geometric_weight(shared(), t.decay);
        if (shared() > 0) {
          const auto ri = g.row(i);
          const auto rj = g.row(j);
          for (std::size_t w = 0; w < ri.size(); ++w) {
            std::uint64_t bits = ri[w] & rj[w];
            while (bits != 0) {
              const auto m = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
              bits &= bits - 1;
              v += geometric_increment(g.shared_partners(i, m) - tie, t.decay);
              v += geometric_increment(g.shared_partners(j, m) - tie, t.decay);
            }
          }
        }
        break;
      }
      case EffectKind::nodefactor:
        v = static_cast<double>((t.codes[i] == t.level) + (t.codes[j] == t.level));
        break;
      case EffectKind::nodematch:
        v = (t.codes[i] != NodeAttributes::kMissingLevel && t.codes[i] == t.codes[j]) ? 1.0 : 0.0;
        break;
    }
    out(static_cast<Eigen::Index>(k)) = v;
  }
}

Eigen::VectorXd ergm_stats(const Graph& g, const Spec& spec, const NodeAttributes& attrs) {
  return StatisticsEngine(spec, attrs).stats(g);
}

Eigen::VectorXd change_stats(const Graph& g, NodeIndex i, NodeIndex j, const Spec& spec,
                             const NodeAttributes& attrs) {
  g.check_pair(i, j);
  StatisticsEngine engine(spec, attrs);
  Eigen::VectorXd out(static_cast<Eigen::Index>(engine.dimension()));
  engine.change(g, i, j, out);
  return out;
}

Sampler::Sampler(const Spec& spec, const NodeAttributes& attrs, Graph start, std::uint64_t seed)
    : engine_(spec, attrs),
      graph_(std::move(start)),
      pairs_(graph_.free_pairs()),
      eta_(Eigen::Map<const Eigen::VectorXd>(spec.params.data(),
                                             static_cast<Eigen::Index>(spec.params.size()))),
      stats_(engine_.stats(graph_)),
      delta_(static_cast<Eigen::Index>(engine_.dimension())),
      rng_(seed) {
  if (graph_.size() < 2 || pairs_.empty()) {
    throw std::invalid_argument("ERGM sampler: graph has no toggleable pair");
  }
}

void Sampler::run(std::size_t steps) {
  std::uniform_int_distribution<std::size_t> pick(0, pairs_.size() - 1);
  for (std::size_t s = 0; s < steps; ++s) {
    const Dyad d = pairs_[pick(rng_)];
    engine_.change(graph_, d.first, d.second, delta_);
    const double sign = graph_.has_edge(d.first, d.second) ? -1.0 : 1.0;
    const double log_ratio = sign * eta_.dot(delta_);
    if (log_ratio >= 0.0 || uniform01(rng_) < std::exp(log_ratio)) {
      graph_.flip(d.first, d.second);
      stats_ += sign * delta_;
      ++accepted_;
    }
  }
}

std::vector<Graph> mcmc_sample(const Spec& spec, const NodeAttributes& attrs, const Graph& g0,
                               std::size_t burnin, std::size_t thin, std::size_t count,
                               std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("mcmc_sample: count must be >= 1");
  if (thin < 1) throw std::invalid_argument("mcmc_sample: thin must be >= 1");
  Sampler sampler(spec, attrs, g0, seed);
  sampler.run(burnin);
  std::vector<Graph> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    sampler.run(thin);
    out.push_back(sampler.state());
  }
  return out;
}

ExactMoments exact_moments(const Spec& spec, const NodeAttributes& attrs,
                           const Eigen::VectorXd& eta, const Graph& support) {
  if (support.size() > kMaxExactNodes) {
    throw std::invalid_argument("exact_moments: n = " + std::to_string(support.size()) +
                                " exceeds the enumeration limit of " +
                                std::to_string(kMaxExactNodes));
  }
  spec.validate();
  const StatisticsEngine engine(spec, attrs);
  const auto p = static_cast<Eigen::Index>(engine.dimension());
  if (eta.size() != p) throw std::invalid_argument("exact_moments: eta has wrong length");

  Graph g(support.size());
  for (NodeIndex i = 0; i < support.size(); ++i) {
    for (NodeIndex j = i + 1; j < support.size(); ++j) {
      if (support.is_forbidden(i, j)) g.forbid(i, j);
    }
  }
  const auto pairs = g.free_pairs();
  const std::uint64_t states = std::uint64_t{1} << pairs.size();

  // Running log-sum-exp: sums are scaled by exp(-shift).
  double shift = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(p, p);
  for (std::uint64_t code = 0; code < states; ++code) {
    if (code > 0) {
      // Gray code: consecutive states differ in the lowest set bit of code.
      const auto bit = static_cast<std::size_t>(std::countr_zero(code));
      g.flip(pairs[bit].first, pairs[bit].second);
    }
    const Eigen::VectorXd s = engine.stats(g);
    const double lw = eta.dot(s);
    if (lw > shift) {
      const double scale = std::exp(shift - lw);
      total *= scale;
      first *= scale;
      second *= scale;
      shift = lw;
    }
    const double w = std::exp(lw - shift);
    total += w;
    first += w * s;
    second.noalias() += w * s * s.transpose();
  }
  ExactMoments out;
  out.mean = first / total;
  out.covariance = second / total - out.mean * out.mean.transpose();
  out.log_normalizer = shift + std::log(total);
  return out;
}

ExactMoments exact_moments(const Spec& spec, const NodeAttributes& attrs,
                           const Eigen::VectorXd& eta, std::size_t n) {
  if (n > kMaxExactNodes) {
    throw std::invalid_argument("exact_moments: n = " + std::to_string(n) +
                                " exceeds the enumeration limit of " +
                                std::to_string(kMaxExactNodes));
  }
  return exact_moments(spec, attrs, eta, Graph(n));
}

std::size_t default_burnin(std::size_t free_pairs) { return std::max<std::size_t>(1000, 16 * free_pairs); }
std::size_t default_thin(std::size_t free_pairs) { return std::max<std::size_t>(20, 2 * free_pairs); }

namespace {

class ErgmMoments final : public MomentModel {
 public:
  ErgmMoments(const Graph& observed, const Spec& spec, const NodeAttributes& attrs,
              const RmSettings& rm, std::uint64_t seed)
      : spec_(spec), attrs_(attrs), start_(observed), rm_(rm), seed_(seed) {
    const StatisticsEngine engine(spec_, attrs_);
    full_observed_ = engine.stats(observed);
    for (std::size_t k = 0; k < spec_.effects.size(); ++k) {
      if (spec_.fixed.empty() || !spec_.fixed[k]) free_.push_back(static_cast<Eigen::Index>(k));
    }
    if (free_.empty()) throw std::invalid_argument("ERGM fit: every parameter is fixed");
    observed_.resize(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) {
      observed_(static_cast<Eigen::Index>(f)) = full_observed_(free_[f]);
    }
    const std::size_t pairs = observed.free_pairs().size();
    burnin_ = rm.burnin > 0 ? rm.burnin : default_burnin(pairs);
    thin_ = rm.thin > 0 ? rm.thin : default_thin(pairs);
  }

  std::size_t dimension() const override { return free_.size(); }
  std::vector<std::string> names() const override {
    std::vector<std::string> out;
    for (const auto k : free_) out.push_back(spec_.effects[static_cast<std::size_t>(k)].name());
    return out;
  }
  const Eigen::VectorXd& observed() const override { return observed_; }

  Eigen::VectorXd full(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd eta = Eigen::Map<const Eigen::VectorXd>(
        spec_.params.data(), static_cast<Eigen::Index>(spec_.params.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) eta(free_[f]) = theta(static_cast<Eigen::Index>(f));
    return eta;
  }

  Eigen::VectorXd select(const Eigen::VectorXd& s) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) out(static_cast<Eigen::Index>(f)) = s(free_[f]);
    return out;
  }

  Batch simulate_batch(const Eigen::VectorXd& theta, std::size_t count, std::uint64_t seed,
                       bool /*with_derivative*/) override {
    const Eigen::VectorXd eta = full(theta);
    const std::size_t chains = std::max<std::size_t>(1, std::min(rm_.chains, count));
    const std::size_t per_chain = (count + chains - 1) / chains;
    std::vector<Eigen::MatrixXd> chunks(chains);
    parallel_for(chains, rm_.threads, [&](std::size_t c) {
      Sampler sampler(spec_, attrs_, start_, derive_seed(seed, {c}));
      sampler.set_params(eta);
      sampler.run(burnin_);
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(per_chain), static_cast<Eigen::Index>(free_.size()));
      for (std::size_t r = 0; r < per_chain; ++r) {
        sampler.run(thin_);
        rows.row(static_cast<Eigen::Index>(r)) = select(sampler.stats()).transpose();
      }
      chunks[c] = std::move(rows);
    });
    Batch batch;
    batch.stats.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(free_.size()));
    std::size_t row = 0;
    for (std::size_t c = 0; c < chains && row < count; ++c) {
      for (Eigen::Index r = 0; r < chunks[c].rows() && row < count; ++r, ++row) {
        batch.stats.row(static_cast<Eigen::Index>(row)) = chunks[c].row(r);
      }
    }
    return batch;
  }

  Eigen::VectorXd simulate_one(const Eigen::VectorXd& theta, std::uint64_t /*seed*/) override {
    if (!chain_) {
      chain_.emplace(spec_, attrs_, start_, derive_seed(seed_, {7}));
      chain_->set_params(full(theta));
      chain_->run(burnin_);
    }
    chain_->set_params(full(theta));
    chain_->run(thin_);
    return select(chain_->stats());
  }

 private:
  Spec spec_;
  NodeAttributes attrs_;
  Graph start_;
  RmSettings rm_;
  std::uint64_t seed_;
  std::vector<Eigen::Index> free_;
  Eigen::VectorXd full_observed_;
  Eigen::VectorXd observed_;
  std::size_t burnin_ = 0;
  std::size_t thin_ = 0;
  std::optional<Sampler> chain_;
};

}  // namespace

EstimationResult fit_ergm(const Graph& observed, const Spec& spec, const NodeAttributes& attrs,
                          const std::vector<double>& init, const RmSettings& rm,
                          std::uint64_t seed) {
  spec.validate();
  const auto free_pairs = observed.free_pairs().size();
  if (free_pairs == 0) throw EstimationError("ERGM fit: observed graph has no toggleable pair");
  if (observed.edge_count() == 0 || observed.edge_count() == free_pairs) {
    throw EstimationError("ERGM fit: observed graph is " +
                          std::string(observed.edge_count() == 0 ? "empty" : "complete") +
                          "; the edge statistic sits on the boundary and no MLE exists");
  }
  Spec working = spec;
  if (!init.empty()) {
    if (init.size() != spec.effects.size()) throw std::invalid_argument("fit_ergm: init has wrong length");
    working.params = init;
  }
  if (working.fixed.empty()) working.fixed.assign(working.effects.size(), false);
  // Unset starting values: the edges parameter starts at the logit of the
  // observed density, everything else at 0.
  for (std::size_t k = 0; k < working.effects.size(); ++k) {
    if (!std::isnan(working.params[k])) continue;
    if (working.fixed[k]) throw std::invalid_argument("fixed effect " + working.effects[k].name() + " has no value");
    const double rho = static_cast<double>(observed.edge_count()) / static_cast<double>(free_pairs);
    working.params[k] = working.effects[k].kind == EffectKind::edges ? std::log(rho / (1.0 - rho)) : 0.0;
  }
  const Eigen::VectorXd full_observed = StatisticsEngine(working, attrs).stats(observed);
  if (!full_observed.allFinite()) throw EstimationError("ERGM fit: observed statistics are not finite");

  ErgmMoments model(observed, working, attrs, rm, seed);
  Eigen::VectorXd start(static_cast<Eigen::Index>(model.dimension()));
  {
    std::size_t f = 0;
    for (std::size_t k = 0; k < working.effects.size(); ++k) {
      if (!working.fixed[k]) start(static_cast<Eigen::Index>(f++)) = working.params[k];
    }
  }
  const MomentSolution sol = solve_moments(model, start, rm, seed);

  EstimationResult res;
  res.names = working.names();
  res.fixed = working.fixed;
  res.seed = seed;
  res.converged = sol.converged;
  res.iterations = sol.iterations;
  res.overall_ratio = sol.overall_ratio;
  res.flag = sol.flag;
  res.log = sol.log;
  const Eigen::VectorXd eta = model.full(sol.theta);
  std::size_t f = 0;
  for (std::size_t k = 0; k < working.effects.size(); ++k) {
    res.estimates.push_back(eta(static_cast<Eigen::Index>(k)));
    if (working.fixed[k]) {
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

}  // namespace netcatalyst::ergm
