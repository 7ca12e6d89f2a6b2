#ifndef NETCATALYST_IO_HPP_
#define NETCATALYST_IO_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcatalyst/ergm.hpp"
#include "netcatalyst/estimation.hpp"
#include "netcatalyst/gof.hpp"
#include "netcatalyst/intervention.hpp"
#include "netcatalyst/panel.hpp"
#include "netcatalyst/saom.hpp"

namespace netcatalyst::io {

/// Problems with input data. Messages start with "path:line:" when a line
/// is to blame.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class FileError : public DataError {
 public:
  using DataError::DataError;
};
class ParseError : public DataError {
 public:
  using DataError::DataError;
};
class UnknownNodeError : public DataError {
 public:
  using DataError::DataError;
};
class SelfLoopRowError : public DataError {
 public:
  using DataError::DataError;
};
class WaveGapError : public DataError {
 public:
  using DataError::DataError;
};
class CompositionError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed model specification; a usage problem rather than a data one.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tab-separated files with a header row.
///   edges:       wave  node_a  node_b
///   nodes:       node_id  <categorical>  <numeric...>   (empty cell = missing)
///   composition: node_id  entry_wave  exit_wave        (optional)
///   membership:  wave  node_id                         (optional)
/// Waves are numbered from 1. Membership becomes the categorical covariate
/// "member" with levels no/yes.
struct PanelFiles {
  std::string edges;
  std::string nodes;
  std::string composition;
  std::string membership;
};

Panel load_panel(const PanelFiles& files);

/// As load_panel but a single wave is enough; used for cross-sectional fits.
Panel load_waves(const PanelFiles& files);

/// Canonical form: waves ascending, pairs in roster order with a < b.
void save_panel(const Panel& panel, const PanelFiles& files);

struct ModelEffect {
  std::string name;
  std::string attr;
  std::string level;
  std::optional<double> decay;
  std::optional<double> fix;
  std::optional<double> init;
  std::size_t line = 0;
};

struct ModelRate {
  std::size_t period = 0;  ///< 1-based as written
  std::optional<double> fix;
  std::optional<double> init;
  std::size_t line = 0;
};

/// Lines `effect <name> key=value...` (keys attr, level, decay, fix, init)
/// and `rate <period> init=<x>|fix=<x>`; `#` starts a comment.
struct ModelFile {
  std::string origin;
  std::vector<ModelEffect> effects;
  std::vector<ModelRate> rates;
};

ModelFile parse_model(const std::string& text, const std::string& origin);
ModelFile read_model_file(const std::string& path);

/// Unset starting values are NaN.
ergm::Spec to_ergm_spec(const ModelFile& model);
saom::Spec to_saom_spec(const ModelFile& model, std::size_t periods);

/// Six significant digits.
std::string format_number(double value);

void write_text(const std::string& path, const std::string& content);

void write_estimates(const std::string& path, const EstimationResult& fit);
std::string fit_report_text(const EstimationResult& fit, const std::string& title);
void write_iterations(const std::string& path, const EstimationResult& fit);
void write_gof(const std::string& path, const gof::GofReport& report);
void write_experiment(const std::string& path, const lab::ExperimentReport& report);
void write_experiment_replicates(const std::string& path, const lab::ExperimentReport& report);

/// Observed line over the simulated band for one statistic family.
std::string gof_svg(const gof::GofReport& report, const std::string& family);
/// Per-wave arm means with 95% ensemble bands for one metric.
std::string experiment_svg(const lab::ExperimentReport& report, std::size_t metric);

}  // namespace netcatalyst::io

#endif  // NETCATALYST_IO_HPP_
