#include "netcatalyst/gof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netcatalyst/parallel.hpp"
#include "netcatalyst/random.hpp"

namespace netcatalyst::gof {

std::size_t GofReport::inside_count() const {
  return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [](const Bin& b) { return b.inside; }));
}

double GofReport::inside_fraction() const {
  return bins.empty() ? 0.0 : static_cast<double>(inside_count()) / static_cast<double>(bins.size());
}

std::vector<std::string> GofReport::families() const {
  std::vector<std::string> out;
  for (const auto& b : bins) {
    if (std::find(out.begin(), out.end(), b.family) == out.end()) out.push_back(b.family);
  }
  return out;
}

namespace {

const char* const kTriadLabels[] = {"empty", "one-edge", "two-path", "triangle"};

Bin make_bin(std::string family, std::size_t index, std::string label, double observed,
             std::vector<double> draws, double coverage) {
  std::sort(draws.begin(), draws.end());
  const double alpha = 1.0 - coverage;
  const double last = static_cast<double>(draws.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(alpha / 2.0 * last + 1e-9));
  const auto hi = static_cast<std::size_t>(std::ceil((1.0 - alpha / 2.0) * last - 1e-9));
  const double mid = 0.5 * last;
  const auto below = static_cast<std::size_t>(std::floor(mid));
  const auto above = std::min(draws.size() - 1, below + 1);
  Bin b;
  b.family = std::move(family);
  b.index = index;
  b.label = std::move(label);
  b.observed = observed;
  b.lo = draws[lo];
  b.hi = draws[std::min(hi, draws.size() - 1)];
  b.median = draws[below] + (mid - static_cast<double>(below)) * (draws[above] - draws[below]);
  b.inside = b.lo <= observed && observed <= b.hi;
  return b;
}

void add_family(GofReport& report, const std::string& family, const std::vector<double>& observed,
                const std::vector<AuxStats>& simulated,
                const std::vector<double> AuxStats::*member, double coverage) {
  for (std::size_t k = 0; k < observed.size(); ++k) {
    std::vector<double> draws;
    draws.reserve(simulated.size());
    for (const auto& s : simulated) draws.push_back((s.*member).at(k));
    std::string label = std::to_string(k);
    if (k + 1 == observed.size()) label += "+";
    report.bins.push_back(make_bin(family, k, label, observed[k], std::move(draws), coverage));
  }
}

void check_nsims(std::size_t nsims) {
  if (nsims < kMinSimulations) {
    throw std::invalid_argument("goodness of fit needs at least " + std::to_string(kMinSimulations) +
                                " simulations (got " + std::to_string(nsims) + ")");
  }
}

Graph induced(const Graph& g, const ActiveMask& active) {
  std::vector<NodeIndex> index(g.size(), g.size());
  std::size_t count = 0;
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (active[v]) index[v] = count++;
  }
  Graph out(count);
  for (const auto& e : g.edges()) {
    if (active[e.first] && active[e.second]) out.flip(index[e.first], index[e.second]);
  }
  return out;
}

void accumulate(AuxStats& into, const AuxStats& add) {
  if (into.degree.empty()) {
    into = add;
    return;
  }
  for (std::size_t k = 0; k < into.degree.size(); ++k) into.degree[k] += add.degree[k];
  for (std::size_t k = 0; k < into.esp.size(); ++k) into.esp[k] += add.esp[k];
  for (std::size_t k = 0; k < into.triads.size(); ++k) into.triads[k] += add.triads[k];
}

}  // namespace

GofReport band_report(const AuxStats& observed, const std::vector<AuxStats>& simulated,
                      double coverage, std::string model) {
  if (simulated.empty()) throw std::invalid_argument("band_report: empty ensemble");
  if (!(coverage > 0.0 && coverage < 1.0)) throw std::invalid_argument("band coverage must lie in (0, 1)");
  GofReport report;
  report.model = std::move(model);
  report.nsims = simulated.size();
  report.coverage = coverage;
  add_family(report, "degree", observed.degree, simulated, &AuxStats::degree, coverage);
  add_family(report, "esp", observed.esp, simulated, &AuxStats::esp, coverage);
  for (std::size_t k = 0; k < observed.triads.size(); ++k) {
    std::vector<double> draws;
    for (const auto& s : simulated) draws.push_back(s.triads[k]);
    report.bins.push_back(make_bin("triad", k, kTriadLabels[k], observed.triads[k], std::move(draws), coverage));
  }
  return report;
}

GofReport gof_ergm(const EstimationResult& fit, const ergm::Spec& spec, const NodeAttributes& attrs,
                   const Graph& observed, std::size_t nsims, std::uint64_t seed,
                   const GofOptions& options) {
  check_nsims(nsims);
  if (fit.estimates.size() != spec.effects.size()) {
    throw std::invalid_argument("fit has " + std::to_string(fit.estimates.size()) +
                                " estimates for " + std::to_string(spec.effects.size()) + " effects");
  }
  ergm::Spec fitted = spec;
  fitted.params = fit.estimates;
  const std::size_t free = observed.free_pairs().size();
  const std::size_t burnin = options.burnin ? options.burnin : ergm::default_burnin(free);
  const std::size_t thin = options.thin ? options.thin : ergm::default_thin(free);
  const auto draws = ergm::mcmc_sample(fitted, attrs, observed, burnin, thin, nsims, seed);

  const std::size_t max_k = std::min(options.max_k, observed.size() - 1);
  std::vector<AuxStats> simulated(nsims);
  parallel_for(nsims, options.threads, [&](std::size_t s) { simulated[s] = aux_statistics(draws[s], max_k); });
  GofReport report = band_report(aux_statistics(observed, max_k), simulated, options.coverage, "ergm");
  return report;
}

GofReport gof_saom(const EstimationResult& fit, const saom::Spec& spec, const Panel& panel,
                   std::size_t nsims, std::uint64_t seed, const GofOptions& options) {
  check_nsims(nsims);
  panel.validate();
  const std::size_t periods = panel.period_count();
  if (fit.estimates.size() != periods + spec.effects.size()) {
    throw std::invalid_argument("fit does not match the panel's periods and the spec's effects");
  }
  const std::vector<double> rates(fit.estimates.begin(), fit.estimates.begin() + static_cast<std::ptrdiff_t>(periods));
  const std::vector<double> beta(fit.estimates.begin() + static_cast<std::ptrdiff_t>(periods), fit.estimates.end());

  std::vector<Graph> starts;
  std::vector<ActiveMask> active;
  std::vector<saom::Evaluator> evaluators;
  std::size_t max_k = options.max_k;
  for (std::size_t m = 0; m < periods; ++m) {
    starts.push_back(panel.period_start(m));
    active.push_back(panel.period_active(m));
    evaluators.emplace_back(spec.effects, panel.attributes[m]);
    const auto n_active = static_cast<std::size_t>(std::count(active[m].begin(), active[m].end(), 1));
    if (n_active < 2) throw std::invalid_argument("period " + std::to_string(m + 1) + " has fewer than 2 actors");
    max_k = std::min(max_k, n_active - 1);
  }

  AuxStats observed;
  for (std::size_t m = 0; m < periods; ++m) accumulate(observed, aux_statistics(induced(panel.period_end(m), active[m]), max_k));

  std::vector<AuxStats> simulated(nsims);
  parallel_for(nsims, options.threads, [&](std::size_t s) {
    AuxStats pooled;
    for (std::size_t m = 0; m < periods; ++m) {
      const Graph end = saom::simulate_period(starts[m], rates[m], beta, evaluators[m], active[m],
                                              derive_seed(seed, {s, m}));
      accumulate(pooled, aux_statistics(induced(end, active[m]), max_k));
    }
    simulated[s] = std::move(pooled);
  });
  return band_report(observed, simulated, options.coverage, "saom");
}

}  // namespace netcatalyst::gof
