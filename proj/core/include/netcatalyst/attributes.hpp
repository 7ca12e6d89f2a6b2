#ifndef NETCATALYST_ATTRIBUTES_HPP_
#define NETCATALYST_ATTRIBUTES_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcatalyst {

class AttributeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Per-node covariates. Categorical covariates store level codes into a
/// declared level set (code -1 marks a missing level); numeric covariates
/// carry an explicit missing marker.
class NodeAttributes {
 public:
  static constexpr int kMissingLevel = -1;

  NodeAttributes() = default;
  explicit NodeAttributes(std::size_t n) : n_(n) {}

  std::size_t size() const noexcept { return n_; }

  /// `values[i]` must be one of `levels` or empty (missing).
  void set_categorical(const std::string& name, std::vector<std::string> levels,
                       const std::vector<std::string>& values);
  void set_numeric(const std::string& name, const std::vector<std::optional<double>>& values);

  bool has(const std::string& name) const;
  bool is_categorical(const std::string& name) const;
  std::vector<std::string> names() const;

  const std::vector<std::string>& levels(const std::string& name) const;
  /// Code of `level`; throws AttributeError if the level is not declared.
  int level_code(const std::string& name, const std::string& level) const;
  int category(const std::string& name, std::size_t node) const;

  bool is_missing(const std::string& name, std::size_t node) const;
  /// Numeric value; throws AttributeError when missing.
  double numeric(const std::string& name, std::size_t node) const;

  /// Replaces missing numeric values with the mean of the observed ones.
  /// Returns the number of imputed entries.
  std::size_t impute_mean(const std::string& name);

  /// Appends one node whose covariates are all missing.
  void append_node();

  friend bool operator==(const NodeAttributes&, const NodeAttributes&) = default;

 private:
  struct Column {
    bool categorical = false;
    std::vector<std::string> levels;
    std::vector<int> codes;
    std::vector<double> values;
    std::vector<bool> missing;

    friend bool operator==(const Column&, const Column&) = default;
  };

  const Column& column(const std::string& name) const;

  std::size_t n_ = 0;
  std::map<std::string, Column> columns_;
};

}  // namespace netcatalyst

#endif  // NETCATALYST_ATTRIBUTES_HPP_
