#pragma once

#include <filesystem>
#include <sstream>
#include <string>

namespace mrw {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Buffers text and publishes it with write-then-rename on commit(), so a
/// reader never observes a partially written file.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path path);
  std::ostream& stream() { return buffer_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::ostringstream buffer_;
};

}  // namespace mrw
