#include "netcatalyst/attributes.hpp"

#include <algorithm>

namespace netcatalyst {

void NodeAttributes::set_categorical(const std::string& name, std::vector<std::string> levels,
                                     const std::vector<std::string>& values) {
  if (values.size() != n_) {
    throw AttributeError("covariate '" + name + "' has " + std::to_string(values.size()) +
                         " rows for " + std::to_string(n_) + " nodes");
  }
  Column col;
  col.categorical = true;
  col.levels = std::move(levels);
  col.codes.reserve(n_);
  for (const auto& v : values) {
    if (v.empty()) {
      col.codes.push_back(kMissingLevel);
      continue;
    }
    const auto it = std::find(col.levels.begin(), col.levels.end(), v);
    if (it == col.levels.end()) {
      throw AttributeError("covariate '" + name + "': value '" + v + "' not in level set");
    }
    col.codes.push_back(static_cast<int>(it - col.levels.begin()));
  }
  columns_[name] = std::move(col);
}

void NodeAttributes::set_numeric(const std::string& name,
                                 const std::vector<std::optional<double>>& values) {
  if (values.size() != n_) {
    throw AttributeError("covariate '" + name + "' has " + std::to_string(values.size()) +
                         " rows for " + std::to_string(n_) + " nodes");
  }
  Column col;
  col.values.reserve(n_);
  col.missing.reserve(n_);
  for (const auto& v : values) {
    col.values.push_back(v.value_or(0.0));
    col.missing.push_back(!v.has_value());
  }
  columns_[name] = std::move(col);
}

bool NodeAttributes::has(const std::string& name) const { return columns_.contains(name); }

bool NodeAttributes::is_categorical(const std::string& name) const {
  return column(name).categorical;
}

std::vector<std::string> NodeAttributes::names() const {
  std::vector<std::string> out;
  for (const auto& [name, col] : columns_) out.push_back(name);
  return out;
}

const NodeAttributes::Column& NodeAttributes::column(const std::string& name) const {
  const auto it = columns_.find(name);
  if (it == columns_.end()) throw AttributeError("unknown attribute '" + name + "'");
  return it->second;
}

const std::vector<std::string>& NodeAttributes::levels(const std::string& name) const {
  const auto& col = column(name);
  if (!col.categorical) throw AttributeError("attribute '" + name + "' is not categorical");
  return col.levels;
}

int NodeAttributes::level_code(const std::string& name, const std::string& level) const {
  const auto& lv = levels(name);
  const auto it = std::find(lv.begin(), lv.end(), level);
  if (it == lv.end()) {
    throw AttributeError("attribute '" + name + "' has no level '" + level + "'");
  }
  return static_cast<int>(it - lv.begin());
}

int NodeAttributes::category(const std::string& name, std::size_t node) const {
  const auto& col = column(name);
  if (!col.categorical) throw AttributeError("attribute '" + name + "' is not categorical");
  return col.codes.at(node);
}

bool NodeAttributes::is_missing(const std::string& name, std::size_t node) const {
  const auto& col = column(name);
  if (col.categorical) return col.codes.at(node) == kMissingLevel;
  return col.missing.at(node);
}

double NodeAttributes::numeric(const std::string& name, std::size_t node) const {
  const auto& col = column(name);
  if (col.categorical) throw AttributeError("attribute '" + name + "' is not numeric");
  if (col.missing.at(node)) {
    throw AttributeError("attribute '" + name + "' is missing for node " + std::to_string(node));
  }
  return col.values[node];
}

std::size_t NodeAttributes::impute_mean(const std::string& name) {
  auto it = columns_.find(name);
  if (it == columns_.end()) throw AttributeError("unknown attribute '" + name + "'");
  auto& col = it->second;
  if (col.categorical) return 0;
  double sum = 0.0;
  std::size_t observed = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (!col.missing[i]) {
      sum += col.values[i];
      ++observed;
    }
  }
  const double mean = observed == 0 ? 0.0 : sum / static_cast<double>(observed);
  std::size_t imputed = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (col.missing[i]) {
      col.values[i] = mean;
      col.missing[i] = false;
      ++imputed;
    }
  }
  return imputed;
}

void NodeAttributes::append_node() {
  ++n_;
  for (auto& [name, col] : columns_) {
    if (col.categorical) {
      col.codes.push_back(kMissingLevel);
    } else {
      col.values.push_back(0.0);
      col.missing.push_back(true);
    }
  }
}

}  // namespace netcatalyst
