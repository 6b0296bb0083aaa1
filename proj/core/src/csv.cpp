#include "tsad/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <fstream>
#include <sstream>
#include <string>

#include "tsad/error.hpp"

namespace tsad {
namespace {

[[noreturn]] void row_error(const std::filesystem::path& path, std::size_t row,
                            const std::string& what) {
  fail(ErrorCode::FormatError, path.string() + " row " + std::to_string(row) + ": " + what);
}

// Days since 1970-01-01 for a civil date (Hinnant's algorithm).
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// ISO-8601 date-time or integer epoch seconds.
bool parse_timestamp(std::string_view s, std::int64_t& out) {
  if (all_digits(s)) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
  }
  int y, mo, d, h, mi, sec;
  char sep;
  if (std::sscanf(std::string(s).c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi,
                  &sec) != 7)
    return false;
  if (sep != 'T' && sep != ' ') return false;
  if (!s.empty() && s.back() == 'Z') { /* UTC marker, nothing to adjust */
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0 ||
      sec > 60)
    return false;
  out = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 +
        h * 3600 + mi * 60 + sec;
  return true;
}

bool parse_double(std::string_view s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && s[b] == ' ') ++b;
  return s.substr(b);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) row_error(path, 1, "missing header");
  ++row;
  if (trim(line) != "timestamp,value")
    row_error(path, row, "expected header 'timestamp,value', got '" + trim(line) + "'");

  TimeSeries series;
  series.name = path.stem().string();
  std::optional<std::int64_t> t_first;
  while (std::getline(in, line)) {
    ++row;
    const std::string cleaned = trim(line);
    if (cleaned.empty()) continue;
    const std::size_t comma = cleaned.find(',');
    if (comma == std::string::npos) row_error(path, row, "missing comma");
    std::int64_t ts = 0;
    if (!parse_timestamp(trim(cleaned.substr(0, comma)), ts))
      row_error(path, row, "bad timestamp '" + cleaned.substr(0, comma) + "'");
    double value = 0.0;
    if (!parse_double(trim(cleaned.substr(comma + 1)), value))
      row_error(path, row, "bad value '" + cleaned.substr(comma + 1) + "'");
    if (!t_first)
      t_first = ts;
    else if (series.values.size() == 1 && ts > *t_first)
      series.sample_interval_s = static_cast<double>(ts - *t_first);
    series.values.push_back(value);
  }
  if (series.values.empty()) fail(ErrorCode::EmptyDataset, path.string() + " has no data rows");
  return series;
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      std::int64_t start_epoch_s) {
  series.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << "timestamp,value\n";
  const std::int64_t step = std::llround(series.sample_interval_s);
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << (start_epoch_s + static_cast<std::int64_t>(i) * step) << ','
        << format_double(series.values[i]) << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

std::vector<std::pair<std::size_t, int>> read_labels_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line)) row_error(path, 1, "missing header");
  ++row;
  if (trim(line) != "window_id,label")
    row_error(path, row, "expected header 'window_id,label', got '" + trim(line) + "'");

  std::vector<std::pair<std::size_t, int>> labels;
  while (std::getline(in, line)) {
    ++row;
    const std::string cleaned = trim(line);
    if (cleaned.empty()) continue;
    const std::size_t comma = cleaned.find(',');
    if (comma == std::string::npos) row_error(path, row, "missing comma");
    const std::string id_str = trim(cleaned.substr(0, comma));
    const std::string label_str = trim(cleaned.substr(comma + 1));
    std::size_t id;
    auto res = std::from_chars(id_str.data(), id_str.data() + id_str.size(), id);
    if (res.ec != std::errc() || res.ptr != id_str.data() + id_str.size())
      row_error(path, row, "bad window_id '" + id_str + "'");
    if (label_str != "0" && label_str != "1")
      row_error(path, row, "label must be 0 or 1, got '" + label_str + "'");
    labels.emplace_back(id, label_str == "1" ? 1 : 0);
  }
  return labels;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << "window_id,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace tsad
