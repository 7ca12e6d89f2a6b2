#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcatalyst/io.hpp"

namespace netcatalyst::io {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  std::size_t points;
  double ymax;

  double x(std::size_t i) const {
    const double span = kWidth - kLeft - kRight;
    return points < 2 ? kLeft + span / 2.0 : kLeft + span * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  double y(double v) const { return kHeight - kBottom - (kHeight - kTop - kBottom) * v / ymax; }
};

std::string header(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
}

std::string axes(const Frame& f, const std::vector<std::string>& labels, const std::string& xlabel) {
  std::string s;
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(f.y(0)) + "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" +
       num(f.y(0)) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(f.y(0)) +
       "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = f.ymax * t / 4.0;
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(f.y(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + format_number(v) + "</text>\n";
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    s += "<text x=\"" + num(f.x(i)) + "\" y=\"" + num(f.y(0) + 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + escape(labels[i]) + "</text>\n";
  }
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 10) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + escape(xlabel) + "</text>\n";
  return s;
}

std::string band(const Frame& f, const std::vector<double>& lo, const std::vector<double>& hi,
                 const std::string& fill) {
  std::string pts;
  for (std::size_t i = 0; i < lo.size(); ++i) pts += num(f.x(i)) + "," + num(f.y(hi[i])) + " ";
  for (std::size_t i = lo.size(); i-- > 0;) pts += num(f.x(i)) + "," + num(f.y(lo[i])) + " ";
  pts.pop_back();
  return "<polygon points=\"" + pts + "\" fill=\"" + fill + "\" fill-opacity=\"0.3\" stroke=\"none\"/>\n";
}

std::string polyline(const Frame& f, const std::vector<double>& v, const std::string& stroke,
                     const std::string& extra) {
  std::string pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts += num(f.x(i)) + "," + num(f.y(v[i])) + " ";
  pts.pop_back();
  return "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"2\"" + extra + "/>\n";
}

double nice_max(double v) { return v > 0.0 ? v * 1.1 : 1.0; }

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const auto above = std::min(v.size() - 1, below + 1);
  return v[below] + (pos - static_cast<double>(below)) * (v[above] - v[below]);
}

}  // namespace

std::string gof_svg(const gof::GofReport& report, const std::string& family) {
  std::vector<double> lo, mid, hi, obs;
  std::vector<std::string> labels;
  for (const auto& b : report.bins) {
    if (b.family != family) continue;
    lo.push_back(b.lo);
    mid.push_back(b.median);
    hi.push_back(b.hi);
    obs.push_back(b.observed);
    labels.push_back(b.label);
  }
  if (labels.empty()) throw std::invalid_argument("GOF report has no family '" + family + "'");
  double top = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) top = std::max({top, hi[i], obs[i]});
  const Frame f{labels.size(), nice_max(top)};
  char pct[32];
  std::snprintf(pct, sizeof pct, "%g", 100.0 * report.coverage);
  std::string s = header(family + " goodness of fit (" + report.model + ", " + std::to_string(report.nsims) +
                         " simulations, " + pct + "% band)");
  s += axes(f, labels, family);
  s += band(f, lo, hi, "#7f8c8d");
  s += polyline(f, mid, "#7f8c8d", " stroke-dasharray=\"4 3\"");
  s += polyline(f, obs, "black", "");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const bool inside = lo[i] <= obs[i] && obs[i] <= hi[i];
    s += "<circle cx=\"" + num(f.x(i)) + "\" cy=\"" + num(f.y(obs[i])) + "\" r=\"3\" fill=\"" +
         (inside ? "black" : "#c0392b") + "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string experiment_svg(const lab::ExperimentReport& report, std::size_t metric) {
  if (metric >= report.treated.size()) throw std::out_of_range("experiment metric index out of range");
  const auto& arms = {std::make_pair(&report.treated[metric], std::string("#c0392b")),
                      std::make_pair(&report.control[metric], std::string("#2c3e50"))};
  const std::size_t waves = report.treated[metric].size();
  std::vector<std::string> labels;
  for (std::size_t w = 0; w < waves; ++w) labels.push_back(std::to_string(w + 1));
  double top = 0.0;
  for (const auto& [values, colour] : arms) {
    for (const auto& wave : *values) top = std::max(top, quantile(wave, 0.975));
  }
  const Frame f{waves, nice_max(top)};
  std::string s = header(lab::kMetrics[metric] + ": treated (red) vs control (dark), mean and 95% band");
  s += axes(f, labels, "wave");
  for (const auto& [values, colour] : arms) {
    std::vector<double> lo, hi, mean;
    for (const auto& wave : *values) {
      lo.push_back(quantile(wave, 0.025));
      hi.push_back(quantile(wave, 0.975));
      double sum = 0.0;
      for (const double v : wave) sum += v;
      mean.push_back(sum / static_cast<double>(wave.size()));
    }
    s += band(f, lo, hi, colour);
    s += polyline(f, mean, colour, "");
  }
  s += "</svg>\n";
  return s;
}

}  // namespace netcatalyst::io
