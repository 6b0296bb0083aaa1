#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsad/config.hpp"
#include "tsad/error.hpp"

using namespace tsad;

TEST_CASE("empty config object yields the documented defaults") {
  const ExperimentConfig cfg = parse_config("{}", "inline");
  CHECK(cfg.archetype == "power");
  CHECK(cfg.n_normal == 500);
  CHECK(cfg.n_abnormal == 60);
  CHECK_FALSE(cfg.noise_sigma.has_value());
  CHECK_FALSE(cfg.anomaly_amplitude.has_value());
  CHECK(cfg.downsample_factor == 1);
  CHECK(cfg.window_len == 0);
  CHECK(cfg.train_ratio == 0.8);
  CHECK(cfg.valid_ratio == 0.1);
  CHECK(cfg.test_ratio == 0.1);
  CHECK(cfg.error_split_ratio == 0.8);
  CHECK(cfg.hidden == 8);
  CHECK(cfg.learning_rate == 0.05);
  CHECK(cfg.epochs == 60);
  CHECK(cfg.dropout == 0.0);
  CHECK(cfg.l2 == 1e-4);
  CHECK(cfg.classifier_epochs == 60);
  CHECK(cfg.mlp_epochs == 200);
  CHECK(cfg.beta == 1.0);
  CHECK(cfg.cv_folds == 5);
  CHECK(cfg.seed == 0);
  CHECK(cfg.out_dir.empty());
}

TEST_CASE("unknown keys are hard errors") {
  try {
    parse_config(R"({"epoch": 10})", "inline");
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
    CHECK(e.message().find("unknown key 'epoch'") != std::string::npos);
  }
}

TEST_CASE("every key parses into its field") {
  const ExperimentConfig cfg = parse_config(R"({
    "archetype": "land",
    "n_normal": 40,
    "n_abnormal": 8,
    "noise_sigma": 0.5,
    "anomaly_amplitude": 2.25,
    "downsample_factor": 2,
    "window_len": 30,
    "stride": 15,
    "train_ratio": 0.7,
    "valid_ratio": 0.2,
    "test_ratio": 0.1,
    "error_split_ratio": 0.75,
    "hidden": 16,
    "learning_rate": 0.01,
    "epochs": 3,
    "dropout": 0.2,
    "l2": 0.001,
    "classifier_hidden": 4,
    "classifier_epochs": 2,
    "mlp_epochs": 5,
    "classifier_dropout": 0.1,
    "beta": 2.0,
    "cv_folds": 3,
    "cv_epochs": 7,
    "hidden_grid": [4, 8],
    "learning_rate_grid": [0.01, 0.1],
    "dropout_grid": [0.0, 0.3],
    "l2_grid": [0.0],
    "seed": 123,
    "out_dir": "results"
  })",
                                             "inline");
  CHECK(cfg.archetype == "land");
  CHECK(cfg.n_normal == 40);
  CHECK(cfg.noise_sigma == 0.5);
  CHECK(cfg.anomaly_amplitude == 2.25);
  CHECK(cfg.downsample_factor == 2);
  CHECK(cfg.window_len == 30);
  CHECK(cfg.stride == 15);
  CHECK(cfg.train_ratio == 0.7);
  CHECK(cfg.error_split_ratio == 0.75);
  CHECK(cfg.hidden == 16);
  CHECK(cfg.learning_rate == 0.01);
  CHECK(cfg.epochs == 3);
  CHECK(cfg.dropout == 0.2);
  CHECK(cfg.l2 == 0.001);
  CHECK(cfg.classifier_hidden == 4);
  CHECK(cfg.classifier_epochs == 2);
  CHECK(cfg.mlp_epochs == 5);
  CHECK(cfg.classifier_dropout == 0.1);
  CHECK(cfg.beta == 2.0);
  CHECK(cfg.cv_folds == 3);
  CHECK(cfg.cv_epochs == 7);
  CHECK(cfg.hidden_grid == std::vector<int>{4, 8});
  CHECK(cfg.learning_rate_grid == std::vector<double>{0.01, 0.1});
  CHECK(cfg.dropout_grid == std::vector<double>{0.0, 0.3});
  CHECK(cfg.l2_grid == std::vector<double>{0.0});
  CHECK(cfg.seed == 123);
  CHECK(cfg.out_dir == "results");
}

TEST_CASE("type mismatches name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"hidden": "big"})", "inline"),
                       doctest::Contains("'hidden'"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"n_normal": -3})", "inline"),
                       doctest::Contains("nonnegative"), Error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"hidden_grid": [1, "x"]})", "inline"),
                       doctest::Contains("array of integers"), Error);
  CHECK_THROWS_AS(parse_config("[1, 2]", "inline"), Error);
  CHECK_THROWS_AS(parse_config("not json", "inline"), Error);
}

TEST_CASE("validate rejects out-of-range settings") {
  auto broken = [](auto mutate) {
    ExperimentConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(broken([](auto& c) { c.archetype = "wind"; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.series_csv = "/no/such/file.csv"; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.train_ratio = 0.5; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.error_split_ratio = 1.0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.downsample_factor = 0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.hidden = 0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.epochs = -1; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.learning_rate = 0.0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.dropout = 1.0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.l2 = -0.1; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.beta = 0.0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.cv_folds = 1; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.noise_sigma = -1.0; }).validate(), Error);
  CHECK_THROWS_AS(broken([](auto& c) { c.anomaly_amplitude = 0.0; }).validate(), Error);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("describe_config lists every key alphabetically with placeholders") {
  const ExperimentConfig cfg;
  const std::string echo = describe_config(cfg);

  std::vector<std::string> keys;
  std::istringstream in(echo);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    keys.push_back(line.substr(0, eq));
  }
  CHECK(keys.size() == 31);
  CHECK(std::is_sorted(keys.begin(), keys.end()));

  CHECK(echo.find("noise_sigma = auto\n") != std::string::npos);
  CHECK(echo.find("anomaly_amplitude = auto\n") != std::string::npos);
  CHECK(echo.find("series_csv = (generated)\n") != std::string::npos);
  CHECK(echo.find("labels_csv = (none)\n") != std::string::npos);
  CHECK(echo.find("archetype = power\n") != std::string::npos);

  ExperimentConfig csv_cfg;
  csv_cfg.archetype.clear();
  csv_cfg.series_csv = "data.csv";
  CHECK(describe_config(csv_cfg).find("archetype = (csv input)\n") != std::string::npos);
}

TEST_CASE("load_config reads a file and reports parse failures with the path") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tsad_config_tests";
  fs::create_directories(dir);
  const fs::path path = dir / "cfg.json";
  {
    std::ofstream out(path);
    out << R"({"archetype": "loop", "seed": 9})";
  }
  const ExperimentConfig cfg = load_config(path);
  CHECK(cfg.archetype == "loop");
  CHECK(cfg.seed == 9);

  CHECK_THROWS_AS(load_config(dir / "nope.json"), Error);
}
