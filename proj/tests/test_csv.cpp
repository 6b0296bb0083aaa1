#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tsad/csv.hpp"
#include "tsad/error.hpp"
#include "tsad/rng.hpp"

using namespace tsad;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "tsad_csv_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    double v;
    switch (i % 4) {
      case 0: v = rng.uniform(-1.0, 1.0); break;
      case 1: v = rng.normal(0.0, 1e9); break;
      case 2: v = rng.normal(0.0, 1e-9); break;
      default: v = static_cast<double>(rng.next_u64()) * 0x1.0p-32; break;
    }
    const std::string text = format_double(v);
    double back = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("series CSV writes and reads back the exact values") {
  const fs::path path = temp_file("roundtrip.csv");
  TimeSeries s;
  s.sample_interval_s = 120.0;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) s.values.push_back(rng.normal(10.0, 3.0));
  write_series_csv(path, s, 1000);

  const TimeSeries back = read_series_csv(path);
  CHECK(back.sample_interval_s == 120.0);
  REQUIRE(back.values.size() == s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) CHECK(back.values[i] == s.values[i]);
}

TEST_CASE("series CSV accepts ISO-8601 timestamps with T, space and Z") {
  const fs::path path = temp_file("iso.csv");
  write_file(path,
             "timestamp,value\n"
             "2023-01-01T00:00:00,1.5\n"
             "2023-01-01 00:10:00Z,2.5\n"
             "2023-01-01T00:20:00,3.5\n");
  const TimeSeries s = read_series_csv(path);
  CHECK(s.values == std::vector<double>{1.5, 2.5, 3.5});
  CHECK(s.sample_interval_s == 600.0);
}

TEST_CASE("series CSV interval comes from the first two rows") {
  const fs::path path = temp_file("epoch.csv");
  write_file(path, "timestamp,value\n0,1\n30,2\n90,3\n");
  const TimeSeries s = read_series_csv(path);
  CHECK(s.sample_interval_s == 30.0);
}

TEST_CASE("series CSV rejects malformed input naming the row") {
  const fs::path path = temp_file("bad.csv");

  write_file(path, "time,value\n0,1\n");
  CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("header"), Error);

  write_file(path, "timestamp,value\n0,1\nnot-a-time,2\n");
  try {
    read_series_csv(path);
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
    CHECK(e.message().find("row 3") != std::string::npos);
  }

  write_file(path, "timestamp,value\n0,oops\n");
  CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("bad value"), Error);

  write_file(path, "timestamp,value\n0 1\n");
  CHECK_THROWS_WITH_AS(read_series_csv(path), doctest::Contains("comma"), Error);

  write_file(path, "timestamp,value\n");
  CHECK_THROWS_AS(read_series_csv(path), Error);

  CHECK_THROWS_AS(read_series_csv(temp_file("missing.csv")), Error);
}

TEST_CASE("labels CSV round-trips and validates labels") {
  const fs::path path = temp_file("labels.csv");
  write_labels_csv(path, {0, 1, 1, 0});
  const auto labels = read_labels_csv(path);
  REQUIRE(labels.size() == 4);
  for (std::size_t i = 0; i < labels.size(); ++i) CHECK(labels[i].first == i);
  CHECK(labels[0].second == 0);
  CHECK(labels[1].second == 1);

  write_file(path, "window_id,label\n0,2\n");
  CHECK_THROWS_WITH_AS(read_labels_csv(path), doctest::Contains("label must be 0 or 1"), Error);

  write_file(path, "id,label\n0,1\n");
  CHECK_THROWS_AS(read_labels_csv(path), Error);
}
