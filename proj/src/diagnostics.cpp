#include "mrw/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace mrw {
namespace {

WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return s;
}

}  // namespace

void set_warning_sink(WarningSink s) { sink() = std::move(s); }

void warn(std::string_view message) {
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  if (sink()) sink()(message);
}

ScopedWarningSink::ScopedWarningSink(WarningSink s) : previous_(std::move(sink())) {
  sink() = std::move(s);
}

ScopedWarningSink::~ScopedWarningSink() { sink() = std::move(previous_); }

}  // namespace mrw
