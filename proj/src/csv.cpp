#include "mrw/csv.hpp"

#include <charconv>
#include <fstream>

#include "mrw/error.hpp"

namespace mrw {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

AtomicFile::AtomicFile(std::filesystem::path path) : path_(std::move(path)) {}

void AtomicFile::commit() {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << buffer_.str();
    if (!out.flush()) throw DataError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
}

}  // namespace mrw
