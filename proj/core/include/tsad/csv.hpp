#ifndef TSAD_CSV_HPP
#define TSAD_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "tsad/timeseries.hpp"

namespace tsad {

/// Reads a `timestamp,value` CSV. Timestamps are ISO-8601
/// (YYYY-MM-DD[T ]HH:MM:SS, optional trailing Z) or integer epoch seconds.
/// The sample interval is taken from the first two rows. Any malformed row is
/// a hard FormatError naming the row number.
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Writes the matching `timestamp,value` CSV with integer epoch-second
/// timestamps spaced by the series' sample interval.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      std::int64_t start_epoch_s = 0);

/// Reads a `window_id,label` CSV; labels must be 0 or 1.
std::vector<std::pair<std::size_t, int>> read_labels_csv(const std::filesystem::path& path);

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);

/// Shortest decimal form that parses back to exactly the same 64-bit value.
std::string format_double(double v);

}  // namespace tsad

#endif  // TSAD_CSV_HPP
