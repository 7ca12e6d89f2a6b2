// Naive reference implementations used to check the library. Everything
// here works on a plain adjacency matrix and follows the textbook
// definitions directly, with no shared code paths.
#ifndef NETCATALYST_TESTS_ORACLE_HPP_
#define NETCATALYST_TESTS_ORACLE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "netcatalyst/graph.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline Matrix to_matrix(const netcatalyst::Graph& g) {
  Matrix a(g.size(), std::vector<int>(g.size(), 0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) a[i][j] = i != j && g.has_edge(i, j) ? 1 : 0;
  }
  return a;
}

inline int degree(const Matrix& a, std::size_t i) {
  int d = 0;
  for (int x : a[i]) d += x;
  return d;
}

inline double edges(const Matrix& a) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) e += a[i][j];
  }
  return e;
}

inline double triangles(const Matrix& a) {
  double t = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) t += a[i][j] * a[j][k] * a[i][k];
    }
  }
  return t;
}

inline int shared(const Matrix& a, std::size_t i, std::size_t j) {
  int s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[i][k] * a[j][k];
  return s;
}

inline std::vector<double> degree_counts(const Matrix& a) {
  std::vector<double> d(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) d[static_cast<std::size_t>(degree(a, i))] += 1;
  return d;
}

inline std::vector<double> esp_counts(const Matrix& a) {
  std::vector<double> ep(a.size() > 1 ? a.size() - 1 : 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i][j]) ep[static_cast<std::size_t>(shared(a, i, j))] += 1;
    }
  }
  return ep;
}

/// Classes by the number of edges among the three nodes.
inline std::array<double, 4> triads(const Matrix& a) {
  std::array<double, 4> c{};
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) c[static_cast<std::size_t>(a[i][j] + a[j][k] + a[i][k])] += 1;
    }
  }
  return c;
}

/// e^t sum_k [1 - (1 - e^-t)^k] counts[k], k >= 1.
inline double geometric(const std::vector<double>& counts, double t) {
  double s = 0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    s += std::exp(t) * (1.0 - std::pow(1.0 - std::exp(-t), static_cast<double>(k))) * counts[k];
  }
  return s;
}

using StatFn = std::function<std::vector<double>(const Matrix&)>;

struct Exact {
  std::vector<double> mean;
  std::vector<std::vector<double>> cov;
  double log_z = 0;
  std::vector<double> probs;  // indexed by edge bitmask over pairs (i<j) in row order
};

/// Brute force over all 2^C(n,2) graphs.
inline Exact enumerate(std::size_t n, const StatFn& stats, const std::vector<double>& eta) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const std::size_t states = std::size_t{1} << pairs.size();
  const std::size_t p = eta.size();
  std::vector<double> w(states);
  std::vector<std::vector<double>> s(states);
  double top = -1e300;
  for (std::size_t m = 0; m < states; ++m) {
    Matrix a(n, std::vector<int>(n, 0));
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (m >> e & 1U) a[pairs[e].first][pairs[e].second] = a[pairs[e].second][pairs[e].first] = 1;
    }
    s[m] = stats(a);
    double v = 0;
    for (std::size_t k = 0; k < p; ++k) v += eta[k] * s[m][k];
    w[m] = v;
    top = std::max(top, v);
  }
  double z = 0;
  for (auto& v : w) z += (v = std::exp(v - top));
  Exact out;
  out.log_z = top + std::log(z);
  out.mean.assign(p, 0.0);
  out.cov.assign(p, std::vector<double>(p, 0.0));
  out.probs.resize(states);
  for (std::size_t m = 0; m < states; ++m) {
    out.probs[m] = w[m] / z;
    for (std::size_t k = 0; k < p; ++k) out.mean[k] += out.probs[m] * s[m][k];
  }
  for (std::size_t m = 0; m < states; ++m) {
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t l = 0; l < p; ++l) {
        out.cov[k][l] += out.probs[m] * (s[m][k] - out.mean[k]) * (s[m][l] - out.mean[l]);
      }
    }
  }
  return out;
}

/// Whether the observed statistics (one or two of them) lie strictly inside
/// the convex hull of all attainable values, i.e. whether a finite MLE exists.
inline bool mle_exists(std::size_t n, const StatFn& stats, const std::vector<double>& observed) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::vector<double>> points;
  for (std::size_t m = 0; m < (std::size_t{1} << pairs.size()); ++m) {
    Matrix a(n, std::vector<int>(n, 0));
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (m >> e & 1U) a[pairs[e].first][pairs[e].second] = a[pairs[e].second][pairs[e].first] = 1;
    }
    points.push_back(stats(a));
  }
  const double tol = 1e-9;
  if (observed.size() == 1) {
    double lo = points[0][0], hi = points[0][0];
    for (const auto& q : points) lo = std::min(lo, q[0]), hi = std::max(hi, q[0]);
    return observed[0] > lo + tol && observed[0] < hi - tol;
  }
  // Monotone-chain hull, counter-clockwise.
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [&](const auto& x, const auto& y) {
                             return std::abs(x[0] - y[0]) < tol && std::abs(x[1] - y[1]) < tol;
                           }),
               points.end());
  auto cross = [](const std::vector<double>& o, const std::vector<double>& a, const std::vector<double>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::vector<double>> hull(2 * points.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= tol) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = points.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], points[i - 1]) <= tol) --k;
    hull[k++] = points[i - 1];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], observed) <= tol) return false;
  }
  return true;
}

/// Newton iteration on the exact score equation E_eta[s] = observed, 2x2 or 1x1.
inline std::vector<double> newton_mle(std::size_t n, const StatFn& stats, const std::vector<double>& observed,
                                      std::vector<double> eta) {
  auto loglik = [&](const Exact& ex, const std::vector<double>& at) {
    double v = -ex.log_z;
    for (std::size_t k = 0; k < at.size(); ++k) v += at[k] * observed[k];
    return v;
  };
  Exact ex = enumerate(n, stats, eta);
  for (int it = 0; it < 200; ++it) {
    std::vector<double> g(eta.size());
    double worst = 0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      g[k] = ex.mean[k] - observed[k];
      worst = std::max(worst, std::abs(g[k]));
    }
    if (worst < 1e-9) break;
    std::vector<double> step(eta.size());
    if (eta.size() == 1) {
      step[0] = g[0] / ex.cov[0][0];
    } else {
      const double det = ex.cov[0][0] * ex.cov[1][1] - ex.cov[0][1] * ex.cov[1][0];
      step[0] = (ex.cov[1][1] * g[0] - ex.cov[0][1] * g[1]) / det;
      step[1] = (-ex.cov[1][0] * g[0] + ex.cov[0][0] * g[1]) / det;
    }
    // Newton direction, capped in length and halved until the concave
    // log-likelihood improves (up to rounding of log Z).
    double size = 0;
    for (const double s : step) size = std::max(size, std::abs(s));
    double t = size > 1.0 ? 1.0 / size : 1.0;
    const double base = loglik(ex, eta);
    bool moved = false;
    for (int half = 0; half < 40 && !moved; ++half, t *= 0.5) {
      std::vector<double> next = eta;
      for (std::size_t k = 0; k < eta.size(); ++k) next[k] -= t * step[k];
      Exact cand = enumerate(n, stats, next);
      if (loglik(cand, next) >= base - 1e-12 * (1.0 + std::abs(base))) {
        eta = std::move(next);
        ex = std::move(cand);
        moved = true;
      }
    }
    if (!moved) break;
  }
  return eta;
}

}  // namespace oracle

#endif  // NETCATALYST_TESTS_ORACLE_HPP_
