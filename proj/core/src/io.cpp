#include "netcatalyst/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "netcatalyst/log.hpp"
#include "netcatalyst/report.hpp"

namespace netcatalyst::io {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<Line> rows;

  std::string where(const Line& line) const { return path + ":" + std::to_string(line.number) + ": "; }
};

std::vector<std::string> split_tabs(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = s.find('\t', start);
    out.push_back(s.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \r\n");
  return s.substr(a, b - a + 1);
}

/// Tab-separated with empty cells preserved when `keep_empty`; otherwise any
/// whitespace separates fields.
Table read_table(const std::string& path, const std::string& what, bool keep_empty) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + what + " file '" + path + "'");
  Table t;
  t.path = path;
  std::string raw;
  std::size_t number = 0;
  bool header = true;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (number == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto fields = keep_empty ? split_tabs(raw) : split_ws(raw);
    for (auto& f : fields) f = trim(f);
    if (header) {
      t.header = std::move(fields);
      header = false;
    } else {
      t.rows.push_back({number, std::move(fields)});
    }
  }
  if (header) throw ParseError(path + ": missing header row");
  return t;
}

long parse_wave(const Table& t, const Line& line, const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno != 0 || v < 1) {
    throw ParseError(t.where(line) + "wave '" + text + "' is not a positive integer");
  }
  return v;
}

std::optional<double> parse_real(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (*end != '\0' || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

void require_columns(const Table& t, const Line& line, std::size_t count) {
  if (line.fields.size() < count) {
    throw ParseError(t.where(line) + "expected " + std::to_string(count) + " columns, found " +
                     std::to_string(line.fields.size()));
  }
}

std::string print17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write '" + path + "'");
  return out;
}

}  // namespace

Panel load_waves(const PanelFiles& files) {
  const Table nodes = read_table(files.nodes, "nodes", true);
  if (nodes.header.empty() || nodes.header.front().empty()) throw ParseError(files.nodes + ": empty header");

  Panel panel;
  std::map<std::string, NodeIndex> index;
  for (const auto& row : nodes.rows) {
    if (row.fields.size() > nodes.header.size()) {
      throw ParseError(nodes.where(row) + "more fields than header columns");
    }
    const std::string& id = row.fields[0];
    if (id.empty()) throw ParseError(nodes.where(row) + "empty node id");
    if (!index.emplace(id, panel.ids.size()).second) {
      throw ParseError(nodes.where(row) + "duplicate node id '" + id + "'");
    }
    panel.ids.push_back(id);
  }
  const std::size_t n = panel.ids.size();
  if (n == 0) throw ParseError(files.nodes + ": no nodes");

  NodeAttributes base(n);
  for (std::size_t c = 1; c < nodes.header.size(); ++c) {
    const std::string& name = nodes.header[c];
    if (name.empty()) throw ParseError(files.nodes + ": header column " + std::to_string(c + 1) + " has no name");
    if (name == "member") throw ParseError(files.nodes + ": column name 'member' is reserved for membership");
    std::vector<std::string> cells(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& f = nodes.rows[r].fields;
      cells[r] = c < f.size() ? f[c] : "";
    }
    if (c == 1) {
      std::set<std::string> levels;
      for (const auto& v : cells) {
        if (!v.empty()) levels.insert(v);
      }
      if (!levels.empty()) base.set_categorical(name, {levels.begin(), levels.end()}, cells);
    } else {
      std::vector<std::optional<double>> values(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (cells[r].empty()) continue;
        values[r] = parse_real(cells[r]);
        if (!values[r]) {
          throw ParseError(nodes.where(nodes.rows[r]) + "column '" + name + "': '" + cells[r] + "' is not a number");
        }
      }
      base.set_numeric(name, values);
    }
  }

  const Table edges = read_table(files.edges, "edges", false);
  struct EdgeRow {
    long wave;
    NodeIndex a, b;
    const Line* line;
  };
  std::vector<EdgeRow> rows;
  std::map<long, const Line*> first_line;
  auto lookup = [&](const Table& t, const Line& line, const std::string& id) {
    const auto it = index.find(id);
    if (it == index.end()) throw UnknownNodeError(t.where(line) + "unknown node id '" + id + "'");
    return it->second;
  };
  for (const auto& row : edges.rows) {
    require_columns(edges, row, 3);
    const long wave = parse_wave(edges, row, row.fields[0]);
    const NodeIndex a = lookup(edges, row, row.fields[1]);
    const NodeIndex b = lookup(edges, row, row.fields[2]);
    if (a == b) throw SelfLoopRowError(edges.where(row) + "self-loop on node '" + row.fields[1] + "'");
    rows.push_back({wave, a, b, &row});
    first_line.emplace(wave, &row);
  }
  if (first_line.empty()) throw ParseError(files.edges + ": no edge rows");
  long expected = 1;
  for (const auto& [wave, line] : first_line) {
    if (wave != expected) {
      throw WaveGapError(edges.where(*line) + "wave " + std::to_string(wave) + " follows wave " +
                         std::to_string(expected - 1) + "; waves must be contiguous from 1");
    }
    ++expected;
  }
  const auto W = static_cast<std::size_t>(first_line.rbegin()->first);

  panel.entry.assign(n, 0);
  panel.exit.assign(n, W - 1);
  if (!files.composition.empty()) {
    const Table comp = read_table(files.composition, "composition", false);
    std::vector<bool> seen(n, false);
    for (const auto& row : comp.rows) {
      require_columns(comp, row, 3);
      const NodeIndex v = lookup(comp, row, row.fields[0]);
      const long entry = parse_wave(comp, row, row.fields[1]);
      const long exit = parse_wave(comp, row, row.fields[2]);
      if (seen[v]) throw CompositionError(comp.where(row) + "second composition row for '" + row.fields[0] + "'");
      seen[v] = true;
      if (entry > exit || static_cast<std::size_t>(exit) > W) {
        throw CompositionError(comp.where(row) + "invalid presence interval " + row.fields[1] + ".." +
                               row.fields[2] + " for a panel of " + std::to_string(W) + " waves");
      }
      panel.entry[v] = static_cast<std::size_t>(entry - 1);
      panel.exit[v] = static_cast<std::size_t>(exit - 1);
    }
  }

  panel.waves.assign(W, Graph(n));
  for (const auto& e : rows) {
    const auto w = static_cast<std::size_t>(e.wave - 1);
    for (const NodeIndex v : {e.a, e.b}) {
      if (!panel.present(v, w)) {
        throw CompositionError(edges.where(*e.line) + "node '" + panel.ids[v] + "' is absent in wave " +
                               std::to_string(e.wave));
      }
    }
    if (panel.waves[w].has_edge(e.a, e.b)) {
      warn(edges.where(*e.line) + "duplicate edge " + panel.ids[e.a] + " - " + panel.ids[e.b] + " ignored");
      continue;
    }
    panel.waves[w].flip(e.a, e.b);
  }

  panel.attributes.assign(W, base);
  if (!files.membership.empty()) {
    const Table mem = read_table(files.membership, "membership", false);
    std::vector<std::vector<std::string>> member(W, std::vector<std::string>(n, "no"));
    for (const auto& row : mem.rows) {
      require_columns(mem, row, 2);
      const long wave = parse_wave(mem, row, row.fields[0]);
      if (static_cast<std::size_t>(wave) > W) {
        throw ParseError(mem.where(row) + "wave " + row.fields[0] + " beyond the last wave " + std::to_string(W));
      }
      member[static_cast<std::size_t>(wave - 1)][lookup(mem, row, row.fields[1])] = "yes";
    }
    for (std::size_t w = 0; w < W; ++w) panel.attributes[w].set_categorical("member", {"no", "yes"}, member[w]);
  }

  panel.apply_composition();
  return panel;
}

Panel load_panel(const PanelFiles& files) {
  Panel panel = load_waves(files);
  try {
    panel.validate();
  } catch (const PanelError& e) {
    throw DataError(files.edges + ": " + e.what());
  }
  return panel;
}

void save_panel(const Panel& panel, const PanelFiles& files) {
  panel.validate();
  const NodeAttributes& attrs = panel.attributes.front();
  std::string categorical;
  std::vector<std::string> numeric;
  for (const auto& name : attrs.names()) {
    if (name == "member") continue;
    if (attrs.is_categorical(name)) {
      if (!categorical.empty()) throw DataError("save_panel: more than one categorical covariate besides membership");
      categorical = name;
    } else {
      numeric.push_back(name);
    }
  }
  {
    auto out = open_out(files.nodes);
    out << "node_id\t" << (categorical.empty() ? "country" : categorical);
    for (const auto& name : numeric) out << '\t' << name;
    out << '\n';
    for (NodeIndex v = 0; v < panel.size(); ++v) {
      out << panel.ids[v] << '\t';
      if (!categorical.empty() && !attrs.is_missing(categorical, v)) {
        out << attrs.levels(categorical)[static_cast<std::size_t>(attrs.category(categorical, v))];
      }
      for (const auto& name : numeric) {
        out << '\t';
        if (!attrs.is_missing(name, v)) out << print17(attrs.numeric(name, v));
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(files.edges);
    out << "wave\tnode_a\tnode_b\n";
    for (std::size_t w = 0; w < panel.wave_count(); ++w) {
      for (const auto& e : panel.waves[w].edges()) {
        out << (w + 1) << '\t' << panel.ids[e.first] << '\t' << panel.ids[e.second] << '\n';
      }
    }
  }
  if (!files.composition.empty()) {
    auto out = open_out(files.composition);
    out << "node_id\tentry_wave\texit_wave\n";
    for (NodeIndex v = 0; v < panel.size(); ++v) {
      out << panel.ids[v] << '\t' << (panel.entry[v] + 1) << '\t' << (panel.exit[v] + 1) << '\n';
    }
  }
  if (!files.membership.empty() && attrs.has("member")) {
    auto out = open_out(files.membership);
    out << "wave\tnode_id\n";
    for (std::size_t w = 0; w < panel.wave_count(); ++w) {
      const auto& a = panel.attributes[w];
      const int yes = a.level_code("member", "yes");
      for (NodeIndex v = 0; v < panel.size(); ++v) {
        if (a.category("member", v) == yes) out << (w + 1) << '\t' << panel.ids[v] << '\n';
      }
    }
  }
}

ModelFile parse_model(const std::string& text, const std::string& origin) {
  ModelFile model;
  model.origin = origin;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tokens = split_ws(raw);
    if (tokens.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number) + ": ";
    if (tokens[0] != "effect" && tokens[0] != "rate") {
      throw SpecError(where + "unknown directive '" + tokens[0] + "' (expected 'effect' or 'rate')");
    }
    if (tokens.size() < 2) throw SpecError(where + "'" + tokens[0] + "' needs an argument");
    const bool is_effect = tokens[0] == "effect";
    ModelEffect effect;
    ModelRate rate;
    effect.line = rate.line = number;
    if (is_effect) {
      effect.name = tokens[1];
    } else {
      char* end = nullptr;
      const long p = std::strtol(tokens[1].c_str(), &end, 10);
      if (*end != '\0' || p < 1) throw SpecError(where + "rate period '" + tokens[1] + "' is not a positive integer");
      rate.period = static_cast<std::size_t>(p);
    }
    for (std::size_t k = 2; k < tokens.size(); ++k) {
      const auto eq = tokens[k].find('=');
      if (eq == std::string::npos || eq == 0) throw SpecError(where + "expected key=value, got '" + tokens[k] + "'");
      const std::string key = tokens[k].substr(0, eq);
      const std::string value = tokens[k].substr(eq + 1);
      auto number_of = [&]() {
        const auto v = parse_real(value);
        if (!v) throw SpecError(where + key + "='" + value + "' is not a number");
        return *v;
      };
      if (key == "init") {
        (is_effect ? effect.init : rate.init) = number_of();
      } else if (key == "fix") {
        (is_effect ? effect.fix : rate.fix) = number_of();
      } else if (is_effect && key == "attr") {
        effect.attr = value;
      } else if (is_effect && key == "level") {
        effect.level = value;
      } else if (is_effect && key == "decay") {
        effect.decay = number_of();
      } else {
        throw SpecError(where + "unknown key '" + key + "'");
      }
    }
    if ((is_effect && effect.init && effect.fix) || (!is_effect && rate.init && rate.fix)) {
      throw SpecError(where + "init and fix are mutually exclusive");
    }
    if (is_effect) {
      model.effects.push_back(std::move(effect));
    } else {
      model.rates.push_back(rate);
    }
  }
  return model;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open model file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str(), path);
}

namespace {

std::string where(const ModelFile& model, std::size_t line) {
  return model.origin + ":" + std::to_string(line) + ": ";
}

double start_value(const std::optional<double>& fix, const std::optional<double>& init) {
  if (fix) return *fix;
  if (init) return *init;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ergm::Spec to_ergm_spec(const ModelFile& model) {
  static const std::map<std::string, ergm::EffectKind> kinds{
      {"edges", ergm::EffectKind::edges},           {"gwdegree", ergm::EffectKind::gwdegree},
      {"gwesp", ergm::EffectKind::gwesp},           {"triangles", ergm::EffectKind::triangles},
      {"nodefactor", ergm::EffectKind::nodefactor}, {"nodematch", ergm::EffectKind::nodematch}};
  if (!model.rates.empty()) throw SpecError(where(model, model.rates.front().line) + "ERGM models have no rates");
  if (model.effects.empty()) throw SpecError(model.origin + ": no effects");
  ergm::Spec spec;
  for (const auto& e : model.effects) {
    const auto it = kinds.find(e.name);
    if (it == kinds.end()) throw SpecError(where(model, e.line) + "unknown ERGM effect '" + e.name + "'");
    ergm::Effect effect;
    effect.kind = it->second;
    effect.attr = e.attr;
    effect.level = e.level;
    if (e.decay) {
      if (it->second != ergm::EffectKind::gwdegree && it->second != ergm::EffectKind::gwesp) {
        throw SpecError(where(model, e.line) + "effect '" + e.name + "' takes no decay");
      }
      effect.decay = *e.decay;
    }
    spec.effects.push_back(effect);
    spec.params.push_back(start_value(e.fix, e.init));
    spec.fixed.push_back(e.fix.has_value());
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& ex) {
    throw SpecError(model.origin + ": " + ex.what());
  }
  return spec;
}

saom::Spec to_saom_spec(const ModelFile& model, std::size_t periods) {
  static const std::map<std::string, saom::EffectKind> kinds{
      {"density", saom::EffectKind::density},       {"degree", saom::EffectKind::density},
      {"transTriad", saom::EffectKind::trans_triad}, {"inPop", saom::EffectKind::in_pop},
      {"egoPlusAltX", saom::EffectKind::ego_plus_alt_x}, {"sameX", saom::EffectKind::same_x}};
  if (model.effects.empty()) throw SpecError(model.origin + ": no effects");
  saom::Spec spec;
  for (const auto& e : model.effects) {
    const auto it = kinds.find(e.name);
    if (it == kinds.end()) throw SpecError(where(model, e.line) + "unknown SAOM effect '" + e.name + "'");
    if (e.decay) throw SpecError(where(model, e.line) + "SAOM effect '" + e.name + "' takes no decay");
    saom::Effect effect{it->second, e.attr, e.level};
    spec.effects.push_back(effect);
    spec.params.push_back(start_value(e.fix, e.init));
    spec.fixed.push_back(e.fix.has_value());
  }
  spec.rates.assign(periods, std::numeric_limits<double>::quiet_NaN());
  spec.rate_fixed.assign(periods, false);
  std::vector<bool> seen(periods, false);
  for (const auto& r : model.rates) {
    if (r.period > periods) {
      throw SpecError(where(model, r.line) + "rate for period " + std::to_string(r.period) +
                      " but the panel has " + std::to_string(periods) + " periods");
    }
    if (seen[r.period - 1]) throw SpecError(where(model, r.line) + "second rate line for period " + std::to_string(r.period));
    seen[r.period - 1] = true;
    spec.rates[r.period - 1] = start_value(r.fix, r.init);
    spec.rate_fixed[r.period - 1] = r.fix.has_value();
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& ex) {
    throw SpecError(model.origin + ": " + ex.what());
  }
  return spec;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  if (!out) throw FileError("failed writing '" + path + "'");
}

void write_estimates(const std::string& path, const EstimationResult& fit) {
  std::ostringstream out;
  out << "parameter\testimate\tstd_error\tt_ratio\tfixed\n";
  for (std::size_t k = 0; k < fit.names.size(); ++k) {
    out << fit.names[k] << '\t' << format_number(fit.estimates[k]) << '\t'
        << format_number(fit.standard_errors[k]) << '\t' << format_number(fit.tratios[k]) << '\t'
        << (fit.fixed[k] ? 1 : 0) << '\n';
  }
  write_text(path, out.str());
}

std::string fit_report_text(const EstimationResult& fit, const std::string& title) {
  std::string text = format_report({{title, report_rows(fit)}});
  double worst = 0.0;
  for (std::size_t k = 0; k < fit.tratios.size(); ++k) {
    if (fit.fixed[k]) continue;
    worst = std::isnan(fit.tratios[k]) || std::isnan(worst) ? std::numeric_limits<double>::quiet_NaN()
                                                            : std::max(worst, std::abs(fit.tratios[k]));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "\nmaximum |t-ratio| %.3f, overall convergence ratio %.3f, converged: %s\n",
                worst, fit.overall_ratio, fit.converged ? "yes" : "no");
  text += buf;
  if (!fit.flag.empty()) text += "flag: " + fit.flag + "\n";
  text += "seed " + std::to_string(fit.seed) + ", " + std::to_string(fit.iterations) + " phase-2 iterations\n";
  return text;
}

void write_iterations(const std::string& path, const EstimationResult& fit) {
  std::ostringstream out;
  out << "run\tphase\tsubphase\titeration\tgain";
  std::vector<std::string> free;
  for (std::size_t k = 0; k < fit.names.size(); ++k) {
    if (!fit.fixed[k]) free.push_back(fit.names[k]);
  }
  for (const auto& n : free) out << "\ttheta:" << n;
  for (const auto& n : free) out << "\tdeviation:" << n;
  out << '\n';
  for (const auto& r : fit.log) {
    out << r.run + 1 << '\t' << r.phase << '\t' << r.subphase << '\t' << r.iteration << '\t' << format_number(r.gain);
    for (const double v : r.theta) out << '\t' << format_number(v);
    for (const double v : r.deviation) out << '\t' << format_number(v);
    out << '\n';
  }
  write_text(path, out.str());
}

void write_gof(const std::string& path, const gof::GofReport& report) {
  std::ostringstream out;
  char pct[64];
  std::snprintf(pct, sizeof pct, "%g", 100.0 * report.coverage);
  out << "family\tindex\tlabel\tobserved\tlower\tmedian\tupper\tinside\n";
  for (const auto& b : report.bins) {
    out << b.family << '\t' << b.index << '\t' << b.label << '\t' << format_number(b.observed) << '\t'
        << format_number(b.lo) << '\t' << format_number(b.median) << '\t' << format_number(b.hi) << '\t'
        << (b.inside ? 1 : 0) << '\n';
  }
  out << "# model " << report.model << ", " << report.nsims << " simulations, " << pct << "% bands, "
      << report.inside_count() << " of " << report.bins.size() << " bins inside\n";
  write_text(path, out.str());
}

void write_experiment(const std::string& path, const lab::ExperimentReport& report) {
  std::ostringstream out;
  out << "metric\twave\ttreated_mean\tcontrol_mean\tdifference\tpaired_se\tp_value\n";
  for (const auto& t : report.tests) {
    out << t.metric << '\t' << t.wave + 1 << '\t' << format_number(t.treated_mean) << '\t'
        << format_number(t.control_mean) << '\t' << format_number(t.mean_difference) << '\t'
        << format_number(t.paired_se) << '\t' << format_number(t.p_value) << '\n';
  }
  out << "# replicates " << report.replicates << ", seed " << report.seed << '\n';
  std::string text = out.str();
  if (report.last_active_wave) {
    text += "# target-share gap smaller at the final wave than at wave " +
            std::to_string(*report.last_active_wave + 1) + " in " + format_number(report.shrink_fraction) +
            " of replicates\n";
  }
  for (const auto& f : report.fits) {
    text += "# fit replicate " + std::to_string(f.replicate + 1) + " " + f.arm + " period " +
            std::to_string(f.period + 1) + " member " + format_number(f.estimate) + " (" +
            format_number(f.standard_error) + ") converged " + (f.converged ? "1" : "0") + "\n";
  }
  write_text(path, text);
}

void write_experiment_replicates(const std::string& path, const lab::ExperimentReport& report) {
  std::ostringstream out;
  out << "metric\twave\treplicate\ttreated\tcontrol\n";
  for (std::size_t k = 0; k < report.treated.size(); ++k) {
    for (std::size_t w = 0; w < report.treated[k].size(); ++w) {
      for (std::size_t r = 0; r < report.replicates; ++r) {
        out << lab::kMetrics[k] << '\t' << w + 1 << '\t' << r + 1 << '\t'
            << format_number(report.treated[k][w][r]) << '\t' << format_number(report.control[k][w][r]) << '\n';
      }
    }
  }
  write_text(path, out.str());
}

}  // namespace netcatalyst::io
