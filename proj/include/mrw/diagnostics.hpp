#pragma once

#include <functional>
#include <string_view>

namespace mrw {

using WarningSink = std::function<void(std::string_view)>;

// Non-fatal diagnostics (clamped spectra, dropped rows, moment-bound
// violations). Default sink writes to stderr. Not synchronised: install
// the sink before starting concurrent work.
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

// RAII: installs a sink for the lifetime of the guard and restores the previous one.
class ScopedWarningSink {
 public:
  explicit ScopedWarningSink(WarningSink sink);
  ~ScopedWarningSink();
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace mrw
