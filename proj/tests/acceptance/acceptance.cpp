// Acceptance suite: one PASS/FAIL line per criterion. Arguments select
// criteria by number; no arguments runs all of them.

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "netcatalyst/ergm.hpp"
#include "netcatalyst/generators.hpp"
#include "netcatalyst/gof.hpp"
#include "netcatalyst/intervention.hpp"
#include "netcatalyst/report.hpp"
#include "netcatalyst/saom.hpp"
#include "oracle.hpp"

using namespace netcatalyst;
namespace fs = std::filesystem;

namespace {

const std::string kData = NETCATALYST_TEST_DATA;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

saom::Spec table4_truth() {
  return saom::Spec::from({{saom::EffectKind::density}, {saom::EffectKind::trans_triad}, {saom::EffectKind::in_pop}},
                          {-3.3, 0.33, 0.12}, {3.0, 3.0});
}

saom::Spec free_copy(saom::Spec spec) {
  spec.params.assign(spec.params.size(), std::nan(""));
  spec.rates.assign(spec.rates.size(), std::nan(""));
  return spec;
}

// Planted SAOM panel: n = 50, 3 waves, first wave uniform with 300 ties.
Panel planted_panel(std::uint64_t trial) {
  const Graph x0 = generate_er(50, 300, derive_seed(99, {trial, 0}));
  return simulate_panel(x0, table4_truth(), NodeAttributes(50), derive_seed(99, {trial, 1}));
}

std::size_t state_index(const Graph& g) {
  return static_cast<std::size_t>(g.has_edge(0, 1)) | static_cast<std::size_t>(g.has_edge(0, 2)) << 1 |
         static_cast<std::size_t>(g.has_edge(1, 2)) << 2;
}

Outcome ergm_oracle() {
  const auto spec = ergm::Spec::from({{ergm::EffectKind::edges}, {ergm::EffectKind::triangles}}, {0.0, std::log(2.0)});
  const auto exact = ergm::exact_moments(spec, NodeAttributes(3), Eigen::Vector2d(0.0, std::log(2.0)), 3);
  const auto states = oracle::enumerate(
      3, [](const oracle::Matrix& a) { return std::vector<double>{oracle::edges(a), oracle::triangles(a)}; },
      {0.0, std::log(2.0)});
  const std::size_t draws = 100000;
  const auto sample = ergm::mcmc_sample(spec, NodeAttributes(3), Graph(3), 1000, 10, draws, 2024);

  // Batch means give the Monte Carlo standard error under autocorrelation.
  const std::size_t batches = 100, per = draws / batches;
  std::vector<double> counts(8, 0.0);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(batches, 2);
  for (std::size_t d = 0; d < draws; ++d) {
    counts[state_index(sample[d])] += 1.0;
    means.row(static_cast<Eigen::Index>(d / per)) += ergm::ergm_stats(sample[d], spec, NodeAttributes(3)).transpose();
  }
  means /= static_cast<double>(per);
  bool within = true;
  std::string detail;
  const double want[2] = {15.0 / 9.0, 2.0 / 9.0};
  for (Eigen::Index k = 0; k < 2; ++k) {
    const double m = means.col(k).mean();
    const double sd = std::sqrt((means.col(k).array() - m).square().sum() / (batches - 1.0));
    const double se = sd / std::sqrt(static_cast<double>(batches));
    within = within && std::abs(m - want[k]) <= 3.0 * se && std::abs(exact.mean(k) - want[k]) < 1e-12;
    detail += fmt("E[%s] %.4f vs %.4f (MC SE %.4f); ", k ? "triangles" : "edges", m, want[k], se);
  }
  double chi2 = 0.0;
  for (std::size_t s = 0; s < 8; ++s) {
    const double e = states.probs[s] * static_cast<double>(draws);
    chi2 += (counts[s] - e) * (counts[s] - e) / e;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(7), chi2));
  detail += fmt("chi-square %.2f on 7 df, p = %.3f", chi2, p);
  return {within && p > 0.01, detail};
}

Outcome ergm_recovery() {
  bool pass = true;
  std::string detail;
  const auto edges = ergm::Spec::from({{ergm::EffectKind::edges}});
  for (const auto& [count, truth] : {std::pair<std::size_t, double>{390, 0.0}, {585, std::log(3.0)}}) {
    const Graph g = generate_er(40, count, derive_seed(31, {count}));
    const auto fit = ergm::fit_ergm(g, edges, NodeAttributes(40), {}, RmSettings{}, derive_seed(32, {count}));
    const bool ok = std::abs(fit.estimates[0] - truth) <= 2.0 * fit.standard_errors[0];
    pass = pass && ok;
    detail += fmt("density %.2f: %.3f (%.3f) vs %.3f; ", count / 780.0, fit.estimates[0], fit.standard_errors[0], truth);
  }

  // Two-effect fits on every 5- and 6-node graph of a fixed random set whose
  // MLE exists, against Newton on the exact enumeration. Graphs whose
  // statistics sit on the hull boundary (no finite MLE) are skipped.
  const oracle::StatFn triangles = [](const oracle::Matrix& a) {
    return std::vector<double>{oracle::edges(a), oracle::triangles(a)};
  };
  const oracle::StatFn gwesp = [](const oracle::Matrix& a) {
    return std::vector<double>{oracle::edges(a), oracle::geometric(oracle::esp_counts(a), 0.5)};
  };
  double worst = 0.0;
  int fits = 0, skipped = 0;
  for (std::uint64_t s = 0; s < 12; ++s) {
    const std::size_t n = 5 + s % 2;
    const Graph g = fixtures::random_graph(n, 0.5, 100 + s);
    for (int which = 0; which < 2; ++which) {
      const auto spec = which ? ergm::Spec::from({{ergm::EffectKind::edges}, {ergm::EffectKind::gwesp, 0.5}})
                              : ergm::Spec::from({{ergm::EffectKind::edges}, {ergm::EffectKind::triangles}});
      const auto& fn = which ? gwesp : triangles;
      const auto observed = fn(oracle::to_matrix(g));
      if (!oracle::mle_exists(n, fn, observed)) {
        ++skipped;
        continue;
      }
      const auto mle = oracle::newton_mle(n, fn, observed, {0.0, 0.0});
      try {
        const auto fit = ergm::fit_ergm(g, spec, NodeAttributes(n), {}, fixtures::precise_rm(), derive_seed(33, {s, static_cast<std::uint64_t>(which)}));
        worst = std::max({worst, std::abs(fit.estimates[0] - mle[0]), std::abs(fit.estimates[1] - mle[1])});
        ++fits;
      } catch (const std::exception& e) {
        pass = false;
        detail += fmt("graph %d spec %d failed: %s; ", static_cast<int>(s), which, e.what());
      }
    }
  }
  pass = pass && fits > 0 && worst <= 0.05;
  detail += fmt("%d small-graph fits (%d without a finite MLE skipped), worst coordinate error %.4f", fits, skipped, worst);
  return {pass, detail};
}

Outcome microstep() {
  const auto spec = saom::Spec::from({{saom::EffectKind::density}}, {-1.0}, {1.0});
  const auto d = saom::microstep_probs(Graph(3), 0, spec, NodeAttributes(3));
  const double e = std::exp(-1.0);
  const double keep = 1.0 / (1.0 + 2.0 * e), add = e / (1.0 + 2.0 * e), confirm = 1.0 / (1.0 + std::exp(1.0));
  const double c = saom::confirm_prob(Graph(3), 1, 0, spec, NodeAttributes(3));
  const bool pass = d.probs.size() == 3 && std::abs(d.probs[0] - keep) < 1e-6 && std::abs(d.probs[1] - add) < 1e-6 &&
                    std::abs(d.probs[2] - add) < 1e-6 && std::abs(c - confirm) < 1e-6;
  return {pass, fmt("keep %.6f, each addition %.6f, %.6f, confirm %.6f", d.probs[0], d.probs[1], d.probs[2], c)};
}

Outcome stationarity() {
  const auto spec = saom::Spec::from({{saom::EffectKind::density}}, {0.0}, {50.0});
  double total = 0.0;
  for (std::uint64_t r = 0; r < 1000; ++r) {
    const Graph end = saom::simulate_period(Graph(20), 50.0, spec, NodeAttributes(20), {}, derive_seed(41, {r}));
    total += static_cast<double>(end.edge_count()) / 190.0;
  }
  const double density = total / 1000.0;
  return {std::abs(density - 1.0 / 3.0) <= 0.02, fmt("mean end density %.4f vs 1/3", density)};
}

Outcome planted_recovery() {
  const auto truth = table4_truth();
  int within[3] = {0, 0, 0}, converged = 0, honest = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const auto u = static_cast<std::uint64_t>(t);
    const auto fit = saom::fit_saom(planted_panel(u), free_copy(truth), RmSettings{}, derive_seed(7, {u}));
    converged += fit.converged;
    const bool gate = convergence_check(fit.tratios, fit.overall_ratio);
    honest += fit.converged == gate;
    for (int k = 0; k < 3; ++k) {
      const double est = fit.estimates[2 + k], se = fit.standard_errors[2 + k];
      within[k] += std::isfinite(se) && std::abs(est - truth.params[static_cast<std::size_t>(k)]) <= 2.0 * se;
    }
  }
  const bool pass = within[0] >= 18 && within[1] >= 18 && within[2] >= 18 && honest == trials;
  return {pass, fmt("within 2 SE: density %d/20, transTriad %d/20, inPop %d/20; converged %d/20; flag agrees with "
                    "the t-ratio gate in %d/20",
                    within[0], within[1], within[2], converged, honest)};
}

Outcome h1() {
  int significant = 0, er_positive = 0, er_significant = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Panel ba = ba_panel(150, 2, derive_seed(5, {t}));
    const Panel er = matched_er_panel(ba, derive_seed(6, {t}));
    for (std::uint64_t arm = 0; arm < 2; ++arm) {
      const Panel& panel = arm ? er : ba;
      auto spec = saom::Spec::from({{saom::EffectKind::density}, {saom::EffectKind::in_pop}}, {std::nan(""), std::nan("")},
                                   {std::nan(""), std::nan("")});
      spec = saom::with_default_initial_values(panel, spec);
      spec.rate_fixed = {true, true};
      const auto fit = saom::fit_saom(panel, spec, RmSettings{}, derive_seed(7, {t, arm}));
      const double est = fit.estimates[3], se = fit.standard_errors[3];
      const bool sig = est > 0.0 && std::abs(est) > 2.0 * se;
      if (arm == 0) {
        significant += sig;
      } else {
        er_positive += est > 0.0;
        er_significant += sig;
      }
    }
  }
  return {significant >= 16 && er_positive <= 12,
          fmt("BA: inPop positive beyond 2 SE in %d/20; matched ER: positive in %d/20 (beyond 2 SE in %d/20)",
              significant, er_positive, er_significant)};
}

Outcome h2_h3() {
  lab::ExperimentConfig cfg;
  cfg.n = 50;
  cfg.waves = 4;
  cfg.initial_edges = 150;
  cfg.spec = saom::Spec::from({{saom::EffectKind::density}, {saom::EffectKind::trans_triad}, {saom::EffectKind::in_pop}},
                              {-3.3, 0.33, 0.12}, {3.0, 3.0, 3.0});
  cfg.plan.targets = {0, 1, 2, 3, 4, 5};
  cfg.plan.active_periods = {0, 1};
  cfg.replicates = 200;
  cfg.permutations = 10000;
  cfg.seed = 61;
  const auto report = lab::run_experiment(cfg);
  const std::size_t wave = report.last_active_wave.value_or(0);
  const auto& t = report.test("target_share", wave);
  const bool pass = report.last_active_wave && t.mean_difference > 0.0 && t.p_value < 0.05 && report.shrink_fraction > 0.5;
  return {pass, fmt("wave %zu target share treated %.4f vs control %.4f, one-sided p = %.4f; gap shrinks after the "
                    "intervention in %.1f%% of replicates",
                    wave, t.treated_mean, t.control_mean, t.p_value, 100.0 * report.shrink_fraction)};
}

Outcome gof_calibration() {
  std::size_t ergm_in = 0, ergm_bins = 0, saom_in = 0, saom_bins = 0;
  int failures = 0;
  const std::size_t n = 30;
  const auto truth = ergm::Spec::from({{ergm::EffectKind::edges}, {ergm::EffectKind::gwesp, 0.5}}, {-2.5, 0.6});
  for (std::uint64_t r = 0; r < 20; ++r) {
    try {
      const auto draw = ergm::mcmc_sample(truth, NodeAttributes(n), Graph(n), 4 * ergm::default_burnin(n * (n - 1) / 2), 1, 1,
                                          derive_seed(71, {r}));
      auto spec = truth;
      spec.params.assign(2, std::nan(""));
      const auto fit = ergm::fit_ergm(draw.front(), spec, NodeAttributes(n), {}, RmSettings{}, derive_seed(72, {r}));
      const auto report = gof::gof_ergm(fit, spec, NodeAttributes(n), draw.front(), 100, derive_seed(73, {r}));
      ergm_in += report.inside_count();
      ergm_bins += report.bins.size();
    } catch (const std::exception&) {
      ++failures;
    }
    try {
      const Panel panel = planted_panel(1000 + r);
      const auto spec = free_copy(table4_truth());
      const auto fit = saom::fit_saom(panel, spec, RmSettings{}, derive_seed(74, {r}));
      const auto report = gof::gof_saom(fit, spec, panel, 100, derive_seed(75, {r}));
      saom_in += report.inside_count();
      saom_bins += report.bins.size();
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const double e = ergm_bins ? static_cast<double>(ergm_in) / static_cast<double>(ergm_bins) : 0.0;
  const double s = saom_bins ? static_cast<double>(saom_in) / static_cast<double>(saom_bins) : 0.0;
  return {failures == 0 && e >= 0.85 && s >= 0.85,
          fmt("bins inside 95%% bands: ERGM %.1f%% (%zu/%zu), SAOM %.1f%% (%zu/%zu); %d failed runs", 100.0 * e, ergm_in,
              ergm_bins, 100.0 * s, saom_in, saom_bins, failures)};
}

Outcome report_fidelity() {
  using namespace netcatalyst::io;
  const std::string density = format_cell(make_row("Density", -3.998, 0.069));
  const std::string sematech = format_cell(make_row("Sematech Effect", 0.287, 0.341));
  bool pass = density == "-3.998*** (0.069) [0.000]" && sematech == "0.287 (0.341) [0.399]";
  const std::string table = format_report({{"Model 1", {make_row("Density", -3.998, 0.069)}},
                                           {"Model 4", {make_row("Sematech Effect", 0.287, 0.341)}}});
  pass = pass && table.find("-3.998*** (0.069) [0.000]") != std::string::npos &&
         table.find("0.287 (0.341) [0.399]") != std::string::npos &&
         table.find("*** p < 0.001, ** p < 0.01, * p < 0.05; exact p-values in brackets; 0.000 is used for p-values "
                    "below 0.001; standard errors in parentheses") != std::string::npos;
  // Star and floor rules at and around every threshold.
  for (const double p : {0.0, 0.0004, 0.000999, 0.001, 0.0099, 0.01, 0.0499, 0.05, 0.5}) {
    const std::string want = p < 0.001 ? "***" : p < 0.01 ? "**" : p < 0.05 ? "*" : "";
    pass = pass && significance_stars(p) == want && (p >= 0.001 || format_p_value(p) == "0.000");
  }
  return {pass, "Table 3 Model 1 Density: " + density + "; Table 4 Model 4 Sematech: " + sematech};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Output files plus console text, with the output directory masked.
std::map<std::string, std::string> snapshot(const fs::path& dir, std::string out, std::string err, int code) {
  for (std::string* text : {&out, &err}) {
    for (auto at = text->find(dir.string()); at != std::string::npos; at = text->find(dir.string())) {
      text->replace(at, dir.string().size(), "<out>");
    }
  }
  std::map<std::string, std::string> files{{"<stdout>", out}, {"<stderr>", err}, {"<exit>", std::to_string(code)}};
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

Outcome determinism() {
  const std::string demo = kData + "/demo/";
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"fit-ergm", {"fit-ergm", "--graph", demo + "edges.tsv", "--nodes", demo + "nodes.tsv", "--wave", "2", "--spec",
                    kData + "/configs/ergm.spec", "--gof-sims", "40"}},
      {"fit-saom", {"fit-saom", "--panel", demo + "edges.tsv", "--nodes", demo + "nodes.tsv", "--composition",
                    demo + "composition.tsv", "--membership", demo + "membership.tsv", "--spec", demo + "m.spec",
                    "--gof-sims", "40"}},
      {"experiment", {"experiment", "--config", kData + "/configs/experiment.json"}},
      {"generate ba", {"generate", "--kind", "ba", "--n", "60", "--m", "2"}},
      {"generate er", {"generate", "--kind", "er", "--n", "60", "--m", "2"}},
      {"generate saom", {"generate", "--kind", "saom", "--n", "30", "--waves", "3", "--initial-edges", "40", "--spec",
                         kData + "/configs/saom_truth.spec"}},
  };
  const fs::path root = fs::temp_directory_path() / "netcatalyst_acceptance";
  bool pass = true;
  std::string detail;
  for (const auto& [name, args] : commands) {
    for (const std::string threads : {"1", "3"}) {
      std::map<std::string, std::string> runs[2];
      for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / (std::to_string(k) + "_" + threads);
        fs::remove_all(dir);
        std::vector<std::string> argv{"netcatalyst"};
        argv.insert(argv.end(), args.begin(), args.end());
        argv.insert(argv.end(), {"--seed", "17", "--threads", threads, "--out", dir.string()});
        std::ostringstream out, err;
        const int code = cli::run_cli(argv, out, err);
        runs[k] = fs::exists(dir) ? snapshot(dir, out.str(), err.str(), code) : std::map<std::string, std::string>{};
      }
      const bool same = !runs[0].empty() && runs[0] == runs[1];
      pass = pass && same;
      if (!same) detail += name + " differs at " + threads + " threads; ";
    }
  }
  fs::remove_all(root);
  if (pass) detail = "fit-ergm, fit-saom, experiment and generate ba/er/saom byte-identical at 1 and 3 threads";
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ERGM oracle equivalence", ergm_oracle},
      {"ERGM MLE recovery", ergm_recovery},
      {"SAOM micro-step exactness", microstep},
      {"SAOM stationarity law", stationarity},
      {"planted-parameter recovery", planted_recovery},
      {"H1 analogue", h1},
      {"H2/H3 analogue", h2_h3},
      {"GOF self-calibration", gof_calibration},
      {"report fidelity", report_fidelity},
      {"determinism", determinism},
  };
  std::set<int> chosen;
  for (int a = 1; a < argc; ++a) chosen.insert(std::atoi(argv[a]));
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int number = static_cast<int>(c) + 1;
    if (!chosen.empty() && !chosen.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", number, criteria[c].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
