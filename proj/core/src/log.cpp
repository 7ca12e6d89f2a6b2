#include "netcatalyst/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace netcatalyst {
namespace {

std::mutex sink_mutex;

WarningSink& sink() {
  static WarningSink current = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return current;
}

}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

WarningSink set_warning_sink(WarningSink next) {
  std::lock_guard lock(sink_mutex);
  return std::exchange(sink(), std::move(next));
}

}  // namespace netcatalyst
