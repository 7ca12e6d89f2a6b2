#include "config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace netcatalyst::cli {

namespace {

using nlohmann::json;

const std::map<std::string, saom::EffectKind> kEffects{
    {"density", saom::EffectKind::density},         {"degree", saom::EffectKind::density},
    {"transTriad", saom::EffectKind::trans_triad},   {"inPop", saom::EffectKind::in_pop},
    {"egoPlusAltX", saom::EffectKind::ego_plus_alt_x}, {"sameX", saom::EffectKind::same_x}};

void check_keys(const json& object, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

lab::ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");
  check_keys(doc, {"n", "waves", "initial_edges", "replicates", "permutations", "fit_replicates", "intervene",
                   "effects", "rates", "intervention"},
             origin);
  lab::ExperimentConfig cfg;
  try {
    cfg.n = doc.value("n", cfg.n);
    cfg.waves = doc.value("waves", cfg.waves);
    cfg.initial_edges = doc.value("initial_edges", cfg.initial_edges);
    cfg.replicates = doc.value("replicates", cfg.replicates);
    cfg.permutations = doc.value("permutations", cfg.permutations);
    cfg.fit_replicates = doc.value("fit_replicates", cfg.fit_replicates);
    cfg.intervene = doc.value("intervene", cfg.intervene);

    if (!doc.contains("effects")) throw ConfigError(origin + ": missing 'effects'");
    for (const auto& e : doc.at("effects")) {
      check_keys(e, {"effect", "attr", "level", "value"}, origin + ": effects");
      const std::string name = e.at("effect").get<std::string>();
      const auto it = kEffects.find(name);
      if (it == kEffects.end()) throw ConfigError(origin + ": unknown SAOM effect '" + name + "'");
      cfg.spec.effects.push_back({it->second, e.value("attr", std::string()), e.value("level", std::string())});
      cfg.spec.params.push_back(e.at("value").get<double>());
    }
    if (!doc.contains("rates")) throw ConfigError(origin + ": missing 'rates'");
    cfg.spec.rates = doc.at("rates").get<std::vector<double>>();

    if (!doc.contains("intervention")) throw ConfigError(origin + ": missing 'intervention'");
    const auto& iv = doc.at("intervention");
    check_keys(iv, {"mode", "targets", "active_periods", "budget", "capacity"}, origin + ": intervention");
    cfg.plan.mode = lab::parse_mode(iv.value("mode", std::string("nao-clique")));
    cfg.plan.targets = iv.at("targets").get<std::vector<NodeIndex>>();
    for (const auto p : iv.value("active_periods", std::vector<std::size_t>{})) {
      if (p < 1) throw ConfigError(origin + ": active periods count from 1");
      cfg.plan.active_periods.push_back(p - 1);
    }
    cfg.plan.budget = iv.value("budget", std::size_t{0});
    cfg.plan.capacity = iv.value("capacity", std::size_t{0});
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

lab::ExperimentConfig read_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path);
}

}  // namespace netcatalyst::cli
