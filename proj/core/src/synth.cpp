#include "tsad/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tsad/error.hpp"
#include "tsad/rng.hpp"

namespace tsad {

namespace {

double gauss_bump(double pos, double center, double width) {
  const double d = (pos - center) / width;
  return std::exp(-0.5 * d * d);
}

void check_counts(const GeneratorConfig& c) {
  if (c.noise_sigma < 0.0) fail(ErrorCode::InvalidArgument, "noise_sigma must be >= 0");
  if (c.n_normal + c.n_abnormal == 0)
    fail(ErrorCode::InvalidArgument, "at least one window must be requested");
}

}  // namespace

GeneratorConfig power_defaults() {
  GeneratorConfig c;
  c.noise_sigma = 2.0;
  c.points_per_day = 12;
  c.peak_jitter = 1;
  c.base_level = 10.0;
  c.peak_amplitude = 40.0;
  c.anomaly_amplitude = 6.0;
  return c;
}

GeneratorConfig loop_defaults() {
  GeneratorConfig c;
  c.noise_sigma = 3.4;
  c.window_len = 36;
  c.peak_jitter = 6;
  c.base_level = 20.0;
  c.first_peak = 8.0;
  c.valley_depth = 5.5;
  c.surge_amplitude = 36.0;
  c.anomaly_amplitude = 10.2;
  return c;
}

GeneratorConfig land_defaults() {
  GeneratorConfig c;
  c.noise_sigma = 1.2;
  c.window_len = 50;
  c.ar_coefficient = 0.3;
  c.band_low = 42.0;
  c.band_high = 58.0;
  c.anomaly_amplitude = 3.6;
  return c;
}

std::vector<Window> gen_power_like(const GeneratorConfig& config) {
  check_counts(config);
  if (config.points_per_day < 4)
    fail(ErrorCode::InvalidArgument, "power generator needs points_per_day >= 4");
  if (config.peak_jitter < 0)
    fail(ErrorCode::InvalidArgument, "peak_jitter must be >= 0");

  const int per_day = config.points_per_day;
  const int total = 7 * per_day;
  const double hump_width = static_cast<double>(per_day) / 5.0;
  Rng rng(config.seed);

  std::vector<Window> out;
  out.reserve(config.n_normal + config.n_abnormal);
  const std::size_t n_total = config.n_normal + config.n_abnormal;
  for (std::size_t idx = 0; idx < n_total; ++idx) {
    const bool abnormal = idx >= config.n_normal;
    int anomaly_day = -1;
    if (abnormal) anomaly_day = static_cast<int>(rng.index(7));

    std::array<double, 7> center{};
    for (int day = 0; day < 7; ++day) {
      const int jitter =
          config.peak_jitter > 0
              ? static_cast<int>(rng.index(2 * static_cast<std::size_t>(config.peak_jitter) + 1)) -
                    config.peak_jitter
              : 0;
      center[static_cast<std::size_t>(day)] =
          (static_cast<double>(per_day) - 1.0) / 2.0 + static_cast<double>(jitter);
    }

    Window w;
    w.label = abnormal ? 1 : 0;
    w.source_offset = idx;
    w.points.resize(static_cast<std::size_t>(total));
    for (int k = 0; k < total; ++k) {
      const int day = k / per_day;
      const double pos = static_cast<double>(k % per_day);
      bool has_peak = day < 5;
      if (abnormal) {
        if (day == anomaly_day) has_peak = day >= 5;  // flatten a weekday, or peak a weekend
      }
      double v = config.base_level;
      if (has_peak)
        v += config.peak_amplitude *
             gauss_bump(pos, center[static_cast<std::size_t>(day)], hump_width);
      w.points[static_cast<std::size_t>(k)] = v + rng.normal(0.0, config.noise_sigma);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Window> gen_loop_like(const GeneratorConfig& config) {
  check_counts(config);
  if (config.window_len < 12)
    fail(ErrorCode::InvalidArgument, "loop generator needs window_len >= 12");
  if (config.peak_jitter < 0)
    fail(ErrorCode::InvalidArgument, "peak_jitter must be >= 0");

  const std::size_t total = config.window_len;
  Rng rng(config.seed);

  auto shape = [&](double u_valley, double u_surge, double surge_scale, double valley_scale) {
    double v = config.base_level + config.first_peak * gauss_bump(u_valley, 0.2, 0.08);
    v += valley_scale * config.valley_depth * gauss_bump(u_valley, 0.45, 0.03);
    v += surge_scale * config.surge_amplitude * gauss_bump(u_surge, 0.72, 0.025);
    return v;
  };

  std::vector<Window> out;
  out.reserve(config.n_normal + config.n_abnormal);
  const std::size_t n_total = config.n_normal + config.n_abnormal;
  for (std::size_t idx = 0; idx < n_total; ++idx) {
    const bool abnormal = idx >= config.n_normal;
    // attendance swings game to game, so the exit surge does too
    double surge_scale = rng.uniform(0.75, 1.65);
    double valley_scale = -1.0;
    if (abnormal) {
      // cancelled or relocated games are the common anomaly; a mid-game crowd
      // flood is the rare one, and it thins the exit surge because many leave
      // before the end
      if (rng.index(4) != 3) {
        surge_scale = rng.uniform(0.1, 0.4);
      } else {
        valley_scale = rng.uniform(1.6, 2.4);
        surge_scale = rng.uniform(0.2, 0.45);
      }
    }
    // windows are aligned on the game clock, but the lull bottoms out and the
    // exit surge starts at offsets that drift with how the game runs
    auto draw_jitter = [&](int spread) {
      return spread > 0
                 ? static_cast<int>(rng.index(2 * static_cast<std::size_t>(spread) + 1)) - spread
                 : 0;
    };
    // short windows leave less room before the surge would slide off the end
    const int surge_room = static_cast<int>(0.2 * static_cast<double>(total - 1));
    const int surge_jitter = draw_jitter(std::min(config.peak_jitter, surge_room));
    const int valley_jitter = draw_jitter(std::min(config.peak_jitter, 2));

    Window w;
    w.label = abnormal ? 1 : 0;
    w.source_offset = idx;
    w.points.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
      const double u_valley = static_cast<double>(static_cast<int>(k) - valley_jitter) /
                              static_cast<double>(total - 1);
      const double u_surge = static_cast<double>(static_cast<int>(k) - surge_jitter) /
                             static_cast<double>(total - 1);
      const double v = shape(u_valley, u_surge, surge_scale, valley_scale);
      w.points[k] = v + rng.normal(0.0, config.noise_sigma);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Window> gen_land_like(const GeneratorConfig& config) {
  check_counts(config);
  if (config.ar_coefficient < 0.0 || config.ar_coefficient > 0.5)
    fail(ErrorCode::InvalidArgument, "land generator needs an AR coefficient in [0, 0.5]");
  if (config.band_high <= config.band_low)
    fail(ErrorCode::DegenerateRange, "band_high must exceed band_low");
  if (config.window_len < 2)
    fail(ErrorCode::InvalidArgument, "land generator needs window_len >= 2");

  const std::size_t total = config.window_len;
  const double mu = 0.5 * (config.band_low + config.band_high);
  const double phi = config.ar_coefficient;
  const double stationary_sd = config.noise_sigma / std::sqrt(1.0 - phi * phi);
  Rng rng(config.seed);

  std::vector<Window> out;
  out.reserve(config.n_normal + config.n_abnormal);
  const std::size_t n_total = config.n_normal + config.n_abnormal;
  for (std::size_t idx = 0; idx < n_total; ++idx) {
    const bool abnormal = idx >= config.n_normal;

    Window w;
    w.label = abnormal ? 1 : 0;
    w.source_offset = idx;
    w.points.resize(total);
    double prev = mu + rng.normal(0.0, stationary_sd);
    for (std::size_t k = 0; k < total; ++k) {
      const double x = k == 0 ? prev : mu + phi * (prev - mu) + rng.normal(0.0, config.noise_sigma);
      prev = x;
      w.points[k] = std::clamp(x, config.band_low, config.band_high);
    }

    if (abnormal) {
      if (rng.index(2) == 0) {  // two spikes escaping the band
        for (int s = 0; s < 2; ++s) {
          const std::size_t pos = rng.index(total);
          const bool high = rng.index(2) == 1;
          w.points[pos] = high ? config.band_high + config.anomaly_amplitude
                               : config.band_low - config.anomaly_amplitude;
        }
      } else {  // level-shifted run escaping the band
        const std::size_t run = std::max<std::size_t>(2, total / 5);
        const std::size_t start = rng.index(total - run + 1);
        const bool high = rng.index(2) == 1;
        const double offset = high ? (config.band_high - mu) + config.anomaly_amplitude
                                   : -((mu - config.band_low) + config.anomaly_amplitude);
        for (std::size_t k = start; k < start + run; ++k) w.points[k] += offset;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace tsad
