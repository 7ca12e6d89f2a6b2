#ifndef NETCATALYST_PANEL_HPP_
#define NETCATALYST_PANEL_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcatalyst/attributes.hpp"
#include "netcatalyst/graph.hpp"

namespace netcatalyst {

/// One flag per node; nonzero marks a node that takes part in a period.
using ActiveMask = std::vector<std::uint8_t>;

class PanelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered waves over a fixed roster with per-wave covariates and
/// composition change. Node v is present in waves entry[v]..exit[v]
/// (0-based, inclusive); in every other wave all its pairs are structural
/// zeros and tie-free.
///
/// Period m runs from wave m to wave m + 1. Its actors are the nodes present
/// at wave m + 1: joiners start the period with an empty row, leavers are
/// frozen at zero and never picked.
struct Panel {
  std::vector<std::string> ids;
  std::vector<Graph> waves;
  std::vector<NodeAttributes> attributes;
  std::vector<std::size_t> entry;
  std::vector<std::size_t> exit;

  std::size_t size() const noexcept { return ids.size(); }
  std::size_t wave_count() const noexcept { return waves.size(); }
  std::size_t period_count() const noexcept { return waves.empty() ? 0 : waves.size() - 1; }

  bool present(NodeIndex node, std::size_t wave) const {
    return entry.at(node) <= wave && wave <= exit.at(node);
  }

  ActiveMask period_active(std::size_t period) const;
  /// Wave `period` restricted to the period's actors; all other pairs forbidden.
  Graph period_start(std::size_t period) const;
  /// Wave `period + 1` (already restricted by composition).
  const Graph& period_end(std::size_t period) const { return waves.at(period + 1); }

  /// Marks every pair incident to an absent node as forbidden in each wave.
  /// Throws PanelError if such a pair holds a tie.
  void apply_composition();

  /// Checks wave count, roster sizes and composition; throws PanelError.
  void validate() const;

  /// Panel without composition change; `attrs` is copied to every wave.
  static Panel from_waves(std::vector<Graph> waves, const NodeAttributes& attrs,
                          std::vector<std::string> ids = {});

  friend bool operator==(const Panel&, const Panel&) = default;
};

}  // namespace netcatalyst

#endif  // NETCATALYST_PANEL_HPP_
