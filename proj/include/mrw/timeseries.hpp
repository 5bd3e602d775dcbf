#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrw {

/// Daily close prices. Timestamps are optional labels; all arithmetic runs
/// on integer day indices with dt = 1.
class PriceSeries {
 public:
  /// Throws DataError unless prices are finite and > 0, labels (when given)
  /// are strictly increasing and the series has at least two points.
  explicit PriceSeries(std::vector<double> prices, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return prices_.size(); }
  std::span<const double> prices() const noexcept { return prices_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  /// Label of point i, or its index rendered as text when unlabelled.
  std::string label(std::size_t i) const;

 private:
  std::vector<double> prices_;
  std::vector<std::string> labels_;
};

/// Log-returns at scale tau. Element t spans prices [origin + t, origin + t + tau].
struct ReturnSeries {
  std::vector<double> values;
  int tau = 1;
  std::size_t origin = 0;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> span() const noexcept { return values; }
};

/// A contiguous view [start, start + length) into a ReturnSeries.
struct Window {
  std::size_t start = 0;
  std::size_t length = 0;

  std::size_t end() const noexcept { return start + length; }
  /// Index of the last return in the window (the window's timestamp).
  std::size_t last() const noexcept { return start + length - 1; }
  std::span<const double> view(const ReturnSeries& series) const;
};

inline constexpr std::size_t kMinWindowLength = 250;

/// values[t] = log(p[t + tau]) - log(p[t]).
ReturnSeries log_returns(const PriceSeries& prices, int tau = 1);

/// Windows starting at 0, shift, 2*shift, ... that fit entirely inside the series.
/// Throws InvalidParams for shift < 1 or length < kMinWindowLength and
/// DataError when the series is shorter than one window.
std::vector<Window> rolling_windows(const ReturnSeries& series, std::size_t length,
                                    std::size_t shift);

/// Either a price series or, for files written by `mrw simulate`, the
/// increments themselves.
struct LoadedSeries {
  std::optional<PriceSeries> prices;
  std::optional<ReturnSeries> increments;
  std::size_t dropped_rows = 0;

  /// One-day log-returns regardless of which form was loaded.
  ReturnSeries returns() const;
  /// Label of the price closing return t.
  std::string return_label(std::size_t t) const;
};

/// Reads `date,price` (header required), a single `price` column (header
/// optional) or the `index,increment,cumulative` simulation format.
/// Rows with a non-finite or missing price are dropped and counted with a warning.
LoadedSeries read_series_csv(const std::filesystem::path& path);

}  // namespace mrw
