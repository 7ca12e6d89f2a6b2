#include "netcatalyst/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace netcatalyst::io {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

double two_sided_p(double estimate, double standard_error) {
  if (!(standard_error > 0.0)) {
    throw std::invalid_argument("standard error must be positive (got " + std::to_string(standard_error) + ")");
  }
  return std::erfc(std::abs(estimate / standard_error) / std::sqrt(2.0));
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

std::string format_p_value(double p) {
  // The epsilon keeps exact thousandths such as 0.018 from flooring to 0.017.
  return fixed3(std::floor(std::clamp(p, 0.0, 1.0) * 1000.0 + 1e-7) / 1000.0);
}

ReportRow make_row(const std::string& effect, double estimate, double standard_error) {
  ReportRow row;
  row.effect = effect;
  row.estimate = estimate;
  row.standard_error = standard_error;
  row.p_value = two_sided_p(estimate, standard_error);
  row.stars = significance_stars(row.p_value);
  return row;
}

std::string format_cell(const ReportRow& row) {
  if (row.fixed) return fixed3(row.estimate) + " (fixed)";
  if (!(row.standard_error > 0.0) || !std::isfinite(row.standard_error)) {
    if (std::isnan(row.standard_error)) return fixed3(row.estimate) + " (n/a)";
    throw std::invalid_argument("effect '" + row.effect + "' has a nonpositive standard error");
  }
  return fixed3(row.estimate) + row.stars + " (" + fixed3(row.standard_error) + ") [" +
         format_p_value(row.p_value) + "]";
}

std::vector<ReportRow> report_rows(const EstimationResult& fit) {
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < fit.names.size(); ++k) {
    const double se = fit.standard_errors[k];
    if (fit.fixed[k] || !std::isfinite(se) || !(se > 0.0)) {
      ReportRow row;
      row.effect = fit.names[k];
      row.estimate = fit.estimates[k];
      row.standard_error = fit.fixed[k] ? 0.0 : std::numeric_limits<double>::quiet_NaN();
      row.p_value = std::numeric_limits<double>::quiet_NaN();
      row.fixed = fit.fixed[k];
      rows.push_back(row);
    } else {
      rows.push_back(make_row(fit.names[k], fit.estimates[k], se));
    }
  }
  return rows;
}

std::string format_report(const std::vector<ReportColumn>& columns) {
  std::vector<std::string> effects;
  for (const auto& c : columns) {
    for (const auto& r : c.rows) {
      if (std::find(effects.begin(), effects.end(), r.effect) == effects.end()) effects.push_back(r.effect);
    }
  }
  std::vector<std::vector<std::string>> cells(effects.size(), std::vector<std::string>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& r : columns[c].rows) {
      const auto e = static_cast<std::size_t>(std::find(effects.begin(), effects.end(), r.effect) - effects.begin());
      cells[e][c] = format_cell(r);
    }
  }
  std::size_t first = 6;
  for (const auto& e : effects) first = std::max(first, e.size());
  std::vector<std::size_t> width(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    width[c] = columns[c].title.size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::string out = pad("Effect", first);
  for (std::size_t c = 0; c < columns.size(); ++c) out += "  " + pad(columns[c].title, width[c]);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  out += '\n';
  for (std::size_t e = 0; e < effects.size(); ++e) {
    std::string line = pad(effects[e], first);
    for (std::size_t c = 0; c < columns.size(); ++c) line += "  " + pad(cells[e][c], width[c]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  out += "*** p < 0.001, ** p < 0.01, * p < 0.05; exact p-values in brackets; 0.000 is used for "
         "p-values below 0.001; standard errors in parentheses\n";
  return out;
}

}  // namespace netcatalyst::io
