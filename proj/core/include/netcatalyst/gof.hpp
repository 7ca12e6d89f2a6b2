#ifndef NETCATALYST_GOF_HPP_
#define NETCATALYST_GOF_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "netcatalyst/attributes.hpp"
#include "netcatalyst/ergm.hpp"
#include "netcatalyst/estimation.hpp"
#include "netcatalyst/panel.hpp"
#include "netcatalyst/saom.hpp"
#include "netcatalyst/statistics.hpp"

namespace netcatalyst::gof {

inline constexpr std::size_t kMinSimulations = 20;

struct GofOptions {
  std::size_t max_k = 15;  ///< clamped to n - 1
  double coverage = 0.95;
  unsigned threads = 1;
  std::size_t burnin = 0;  ///< ERGM only; 0 picks the sampler default
  std::size_t thin = 0;
};

/// One auxiliary-statistic bin. Families are "degree", "esp" and "triad".
struct Bin {
  std::string family;
  std::size_t index = 0;
  std::string label;
  double observed = 0.0;
  double lo = 0.0;
  double median = 0.0;
  double hi = 0.0;
  bool inside = false;
};

struct GofReport {
  std::string model;
  std::size_t nsims = 0;
  double coverage = 0.95;
  std::vector<Bin> bins;

  std::size_t inside_count() const;
  double inside_fraction() const;
  std::vector<std::string> families() const;
};

/// Per-bin bands from an ensemble. With N draws and alpha = 1 - coverage the
/// band is [x_(floor(alpha/2 (N-1))), x_(ceil((1-alpha/2)(N-1)))] over the
/// sorted draws, so with N <= 40 at 95% it spans the full ensemble range.
GofReport band_report(const AuxStats& observed, const std::vector<AuxStats>& simulated,
                      double coverage, std::string model);

GofReport gof_ergm(const EstimationResult& fit, const ergm::Spec& spec, const NodeAttributes& attrs,
                   const Graph& observed, std::size_t nsims, std::uint64_t seed,
                   const GofOptions& options = {});

/// Simulates every period from its observed start wave at the fitted
/// parameters and pools the end-wave statistics over periods. Only the
/// period's actors enter the statistics.
GofReport gof_saom(const EstimationResult& fit, const saom::Spec& spec, const Panel& panel,
                   std::size_t nsims, std::uint64_t seed, const GofOptions& options = {});

}  // namespace netcatalyst::gof

#endif  // NETCATALYST_GOF_HPP_
