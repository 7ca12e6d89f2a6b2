#ifndef NETCATALYST_TOOLS_CONFIG_HPP_
#define NETCATALYST_TOOLS_CONFIG_HPP_

#include <stdexcept>
#include <string>

#include "netcatalyst/intervention.hpp"

namespace netcatalyst::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON experiment description. Periods in "active_periods" count from 1,
/// targets are 0-based node indices.
lab::ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin);
lab::ExperimentConfig read_experiment_config(const std::string& path);

}  // namespace netcatalyst::cli

#endif  // NETCATALYST_TOOLS_CONFIG_HPP_
