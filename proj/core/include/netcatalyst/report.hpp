#ifndef NETCATALYST_REPORT_HPP_
#define NETCATALYST_REPORT_HPP_

#include <string>
#include <vector>

#include "netcatalyst/estimation.hpp"

namespace netcatalyst::io {

struct ReportRow {
  std::string effect;
  double estimate = 0.0;
  double standard_error = 0.0;
  double p_value = 1.0;
  std::string stars;
  bool fixed = false;
};

/// p = 2 (1 - Phi(|estimate / se|)). Throws std::invalid_argument unless se > 0.
double two_sided_p(double estimate, double standard_error);

/// "***" below 0.001, "**" below 0.01, "*" below 0.05, otherwise empty.
std::string significance_stars(double p);

/// Three decimals, truncated rather than rounded, so anything below 0.001
/// prints as "0.000".
std::string format_p_value(double p);

ReportRow make_row(const std::string& effect, double estimate, double standard_error);

/// "estimate<stars> (SE) [p]".
std::string format_cell(const ReportRow& row);

/// Rows of a fit: fixed parameters print as "value (fixed)", parameters
/// without a usable standard error as "value (n/a)".
std::vector<ReportRow> report_rows(const EstimationResult& fit);

struct ReportColumn {
  std::string title;
  std::vector<ReportRow> rows;
};

/// Table layout: one line per effect in order of first appearance, one
/// column per model, followed by the significance legend.
std::string format_report(const std::vector<ReportColumn>& columns);

}  // namespace netcatalyst::io

#endif  // NETCATALYST_REPORT_HPP_
