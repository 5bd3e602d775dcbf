#include "mrw/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "mrw/diagnostics.hpp"
#include "mrw/error.hpp"

namespace mrw {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

std::optional<double> parse_double(std::string_view s) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool is_missing_token(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.empty() || lower == "na" || lower == "n/a" || lower == "null" || lower == "nan";
}

bool label_less(const std::string& a, const std::string& b) {
  const auto na = parse_double(a);
  const auto nb = parse_double(b);
  if (na && nb) return *na < *nb;
  return a < b;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<double> prices, std::vector<std::string> labels)
    : prices_(std::move(prices)), labels_(std::move(labels)) {
  if (prices_.size() < 2) throw DataError("price series needs at least 2 points");
  if (!labels_.empty() && labels_.size() != prices_.size())
    throw DataError("price and timestamp columns differ in length");
  for (std::size_t i = 0; i < prices_.size(); ++i) {
    if (!std::isfinite(prices_[i]) || prices_[i] <= 0.0)
      throw DataError("non-positive or non-finite price at row " + std::to_string(i));
  }
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (!label_less(labels_[i - 1], labels_[i]))
      throw DataError("timestamps not strictly increasing at '" + labels_[i] + "'");
  }
}

std::string PriceSeries::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_.at(i);
}

std::span<const double> Window::view(const ReturnSeries& series) const {
  return std::span<const double>(series.values).subspan(start, length);
}

ReturnSeries log_returns(const PriceSeries& prices, int tau) {
  if (tau < 1) throw InvalidParams("tau must be >= 1");
  const auto p = prices.prices();
  if (static_cast<std::size_t>(tau) >= p.size())
    throw DataError("tau " + std::to_string(tau) + " >= series length " +
                    std::to_string(p.size()));
  ReturnSeries out;
  out.tau = tau;
  out.values.resize(p.size() - static_cast<std::size_t>(tau));
  for (std::size_t t = 0; t < out.values.size(); ++t)
    out.values[t] = std::log(p[t + static_cast<std::size_t>(tau)]) - std::log(p[t]);
  return out;
}

std::vector<Window> rolling_windows(const ReturnSeries& series, std::size_t length,
                                    std::size_t shift) {
  if (shift < 1) throw InvalidParams("window shift must be >= 1");
  if (length < kMinWindowLength)
    throw InvalidParams("window length " + std::to_string(length) + " below minimum " +
                        std::to_string(kMinWindowLength));
  if (length > series.size())
    throw DataError("series of " + std::to_string(series.size()) +
                    " returns is shorter than one window of " + std::to_string(length));
  std::vector<Window> windows;
  for (std::size_t start = 0; start + length <= series.size(); start += shift)
    windows.push_back({start, length});
  return windows;
}

ReturnSeries LoadedSeries::returns() const {
  if (increments) return *increments;
  return log_returns(*prices, 1);
}

std::string LoadedSeries::return_label(std::size_t t) const {
  if (prices) return prices->label(t + 1);
  return std::to_string(t);
}

LoadedSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> row;
    for (auto cell : split(line)) row.emplace_back(cell);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": empty file");

  // Header detection: a first row whose last cell is not numeric.
  std::vector<std::string> header;
  if (!parse_double(rows.front().back()) && !is_missing_token(rows.front().back())) {
    header = rows.front();
    rows.erase(rows.begin());
  }
  for (auto& h : header)
    std::transform(h.begin(), h.end(), h.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  LoadedSeries loaded;
  const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };

  if (const auto inc = column("increment")) {
    ReturnSeries series;
    for (const auto& row : rows) {
      if (*inc >= row.size()) throw DataError(path.string() + ": short row");
      const auto v = parse_double(row[*inc]);
      if (!v || !std::isfinite(*v)) throw DataError(path.string() + ": bad increment '" + row[*inc] + "'");
      series.values.push_back(*v);
    }
    if (series.values.empty()) throw DataError(path.string() + ": no increments");
    loaded.increments = std::move(series);
    return loaded;
  }

  std::size_t price_col = 0;
  std::optional<std::size_t> date_col;
  if (!header.empty()) {
    if (const auto p = column("price")) {
      price_col = *p;
    } else if (header.size() == 2) {
      price_col = 1;
    } else if (header.size() != 1) {
      throw DataError(path.string() + ": expected columns date,price or price");
    }
    if (header.size() >= 2) date_col = price_col == 0 ? 1 : 0;
  } else if (!rows.empty() && rows.front().size() >= 2) {
    price_col = 1;
    date_col = 0;
  }

  std::vector<double> prices;
  std::vector<std::string> labels;
  for (const auto& row : rows) {
    if (price_col >= row.size() || is_missing_token(row[price_col])) {
      ++loaded.dropped_rows;
      continue;
    }
    const auto v = parse_double(row[price_col]);
    if (!v) throw DataError(path.string() + ": unparsable price '" + row[price_col] + "'");
    if (!std::isfinite(*v)) {
      ++loaded.dropped_rows;
      continue;
    }
    prices.push_back(*v);
    if (date_col) labels.push_back(*date_col < row.size() ? row[*date_col] : std::string{});
  }
  if (loaded.dropped_rows > 0)
    warn(path.string() + ": dropped " + std::to_string(loaded.dropped_rows) +
         " rows with missing or non-finite prices");
  loaded.prices.emplace(std::move(prices), std::move(labels));
  return loaded;
}

}  // namespace mrw
