#ifndef NETCATALYST_LOG_HPP_
#define NETCATALYST_LOG_HPP_

#include <functional>
#include <string_view>

namespace netcatalyst {

using WarningSink = std::function<void(std::string_view)>;

/// Emits a warning through the installed sink (stderr by default).
void warn(std::string_view message);

/// Installs `sink` and returns the previous one. An empty sink silences warnings.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace netcatalyst

#endif  // NETCATALYST_LOG_HPP_
