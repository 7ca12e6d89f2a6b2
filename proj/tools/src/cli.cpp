#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "netcatalyst/attributes.hpp"
#include "netcatalyst/generators.hpp"
#include "netcatalyst/gof.hpp"
#include "netcatalyst/io.hpp"
#include "netcatalyst/parallel.hpp"
#include "netcatalyst/random.hpp"

namespace netcatalyst::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::optional<unsigned> threads;

  unsigned workers() const { return threads ? std::max(1u, *threads) : default_thread_count(); }
  std::string path(const std::string& name) const { return (fs::path(out) / name).string(); }
};

struct FitOptions {
  io::PanelFiles files;
  std::string spec;
  std::size_t wave = 1;
  std::size_t gof_sims = 0;
  int phase3 = 1000;
  int max_runs = 3;
};

struct GenerateOptions {
  std::string kind = "ba";
  std::size_t n = 100;
  std::size_t m = 2;
  std::size_t waves = 3;
  std::size_t initial_edges = 0;
  std::string spec;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Root random seed")->required();
  cmd->add_option("--out", c.out, "Output directory")->required();
  cmd->add_option("--threads", c.threads, "Worker threads (default: NETCATALYST_THREADS or all cores)");
}

void add_panel_files(CLI::App* cmd, io::PanelFiles& f, const std::string& edges_flag) {
  cmd->add_option(edges_flag, f.edges, "Edge list: wave, node_a, node_b")->required();
  cmd->add_option("--nodes", f.nodes, "Node table: node_id, categorical, numeric...")->required();
  cmd->add_option("--composition", f.composition, "Composition: node_id, entry_wave, exit_wave");
  cmd->add_option("--membership", f.membership, "Membership: wave, node_id");
}

void add_fit_controls(CLI::App* cmd, FitOptions& o) {
  cmd->add_option("--spec", o.spec, "Model specification file")->required();
  cmd->add_option("--gof-sims", o.gof_sims, "Goodness-of-fit simulations (0 = skip, otherwise >= 20)")
      ->check(CLI::Validator(
          [](const std::string& v) {
            const long n = std::stol(v);
            return n == 0 || n >= static_cast<long>(gof::kMinSimulations) ? std::string()
                                                                           : "needs 0 or at least 20 simulations";
          },
          "0 or >= 20"));
  cmd->add_option("--phase3", o.phase3, "Phase-3 simulations")->check(CLI::PositiveNumber);
  cmd->add_option("--max-runs", o.max_runs, "Maximum estimation runs")->check(CLI::PositiveNumber);
}

RmSettings settings(const FitOptions& o, const Common& c) {
  RmSettings rm;
  rm.phase3_draws = o.phase3;
  rm.max_runs = o.max_runs;
  rm.threads = c.workers();
  return rm;
}

void write_fit(const Common& c, const EstimationResult& fit, const std::string& title) {
  io::write_estimates(c.path("estimates.tsv"), fit);
  io::write_text(c.path("report.txt"), io::fit_report_text(fit, title));
  io::write_iterations(c.path("iterations.tsv"), fit);
}

void write_gof(const Common& c, const gof::GofReport& report) {
  io::write_gof(c.path("gof.tsv"), report);
  for (const auto& family : report.families()) {
    io::write_text(c.path("gof_" + family + ".svg"), io::gof_svg(report, family));
  }
}

int finish(const EstimationResult& fit, std::ostream& out, std::ostream& err) {
  out << (fit.converged ? "converged" : "not converged") << "; overall convergence ratio "
      << io::format_number(fit.overall_ratio) << '\n';
  if (fit.converged) return kSuccess;
  err << "estimation did not converge" << (fit.flag.empty() ? "" : " (" + fit.flag + ")") << '\n';
  return kNotConverged;
}

int fit_ergm_cmd(const FitOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  const ergm::Spec spec = io::to_ergm_spec(io::read_model_file(o.spec));
  const Panel panel = io::load_waves(o.files);
  if (o.wave < 1 || o.wave > panel.wave_count()) {
    throw io::DataError("wave " + std::to_string(o.wave) + " not in the edge file (1.." +
                        std::to_string(panel.wave_count()) + ")");
  }
  const Graph& g = panel.waves[o.wave - 1];
  const NodeAttributes& attrs = panel.attributes[o.wave - 1];
  fs::create_directories(c.out);
  const EstimationResult fit = ergm::fit_ergm(g, spec, attrs, spec.params, settings(o, c), c.seed);
  write_fit(c, fit, "ERGM");
  if (o.gof_sims > 0) {
    gof::GofOptions opt;
    opt.threads = c.workers();
    write_gof(c, gof::gof_ergm(fit, spec, attrs, g, o.gof_sims, derive_seed(c.seed, {1}), opt));
  }
  return finish(fit, out, err);
}

int fit_saom_cmd(const FitOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
  const io::ModelFile model = io::read_model_file(o.spec);
  const Panel panel = io::load_panel(o.files);
  const saom::Spec spec = io::to_saom_spec(model, panel.period_count());
  fs::create_directories(c.out);
  const EstimationResult fit = saom::fit_saom(panel, spec, settings(o, c), c.seed);
  write_fit(c, fit, "SAOM");
  if (o.gof_sims > 0) {
    gof::GofOptions opt;
    opt.threads = c.workers();
    write_gof(c, gof::gof_saom(fit, spec, panel, o.gof_sims, derive_seed(c.seed, {1}), opt));
  }
  return finish(fit, out, err);
}

int experiment_cmd(const std::string& config_path, const Common& c, std::ostream& out) {
  lab::ExperimentConfig cfg = read_experiment_config(config_path);
  cfg.seed = c.seed;
  cfg.threads = c.workers();
  const lab::ExperimentReport report = lab::run_experiment(cfg);
  fs::create_directories(c.out);
  io::write_experiment(c.path("experiment.tsv"), report);
  io::write_experiment_replicates(c.path("experiment_replicates.tsv"), report);
  for (std::size_t k = 0; k < lab::kMetrics.size(); ++k) {
    io::write_text(c.path("experiment_" + lab::kMetrics[k] + ".svg"), io::experiment_svg(report, k));
  }
  out << report.replicates << " replicates written to " << c.out << '\n';
  return kSuccess;
}

int generate_cmd(const GenerateOptions& o, const Common& c, std::ostream& out) {
  Panel panel;
  if (o.kind == "ba") {
    panel = ba_panel(o.n, o.m, c.seed);
  } else if (o.kind == "er") {
    panel = matched_er_panel(ba_panel(o.n, o.m, derive_seed(c.seed, {0})), derive_seed(c.seed, {1}));
  } else {
    if (o.spec.empty()) throw io::SpecError("generate --kind saom needs --spec");
    if (o.waves < 2) throw io::SpecError("generate --kind saom needs --waves >= 2");
    const saom::Spec spec = io::to_saom_spec(io::read_model_file(o.spec), o.waves - 1);
    for (const double v : spec.params) {
      if (std::isnan(v)) throw io::SpecError(o.spec + ": every effect needs a value (init= or fix=)");
    }
    for (const double v : spec.rates) {
      if (std::isnan(v)) throw io::SpecError(o.spec + ": every period needs a rate line");
    }
    const Graph x0 = generate_er(o.n, o.initial_edges, derive_seed(c.seed, {0}));
    panel = simulate_panel(x0, spec, NodeAttributes(o.n), derive_seed(c.seed, {1}));
  }
  fs::create_directories(c.out);
  io::save_panel(panel, {c.path("edges.tsv"), c.path("nodes.tsv"), c.path("composition.tsv"), ""});
  out << "panel with " << panel.size() << " nodes and " << panel.wave_count() << " waves written to " << c.out
      << '\n';
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network model estimation and intervention experiments", "netcatalyst"};
  app.require_subcommand(1);

  Common common;
  FitOptions fit;
  GenerateOptions gen;
  std::string config;

  auto* fe = app.add_subcommand("fit-ergm", "Fit an ERGM to one wave");
  add_panel_files(fe, fit.files, "--graph");
  fe->add_option("--wave", fit.wave, "Wave of the edge file to fit (from 1)");
  add_fit_controls(fe, fit);
  add_common(fe, common);

  auto* fs_cmd = app.add_subcommand("fit-saom", "Fit a SAOM to a panel");
  add_panel_files(fs_cmd, fit.files, "--panel");
  add_fit_controls(fs_cmd, fit);
  add_common(fs_cmd, common);

  auto* ex = app.add_subcommand("experiment", "Run a treated-vs-control intervention experiment");
  ex->add_option("--config", config, "Experiment configuration (JSON)")->required();
  add_common(ex, common);

  auto* ge = app.add_subcommand("generate", "Write a synthetic panel");
  ge->add_option("--kind", gen.kind, "ba, er (matched to a BA panel) or saom")
      ->check(CLI::IsMember({"ba", "er", "saom"}));
  ge->add_option("--n", gen.n, "Final roster size");
  ge->add_option("--m", gen.m, "Edges per new node (ba, er)");
  ge->add_option("--waves", gen.waves, "Waves (saom)");
  ge->add_option("--initial-edges", gen.initial_edges, "Edges of the uniform first wave (saom)");
  ge->add_option("--spec", gen.spec, "Model with values for every effect and rate (saom)");
  add_common(ge, common);

  std::vector<const char*> raw;
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  try {
    if (fe->parsed()) return fit_ergm_cmd(fit, common, out, err);
    if (fs_cmd->parsed()) return fit_saom_cmd(fit, common, out, err);
    if (ex->parsed()) return experiment_cmd(config, common, out);
    return generate_cmd(gen, common, out);
  } catch (const io::SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const EstimationError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace netcatalyst::cli
