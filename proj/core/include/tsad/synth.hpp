#ifndef TSAD_SYNTH_HPP
#define TSAD_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tsad/timeseries.hpp"

namespace tsad {

// One knob set shared by all three archetypes; each generator reads the
// fields that apply to it and the *_defaults() factories pick coherent
// values. Anomaly deviations default to 3x the noise level.
struct GeneratorConfig {
  std::size_t n_normal = 500;
  std::size_t n_abnormal = 60;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;

  // power-like: weekday humps over a 7-day window
  int points_per_day = 12;
  int peak_jitter = 1;  // peak-position jitter in samples, per day
  double base_level = 10.0;
  double peak_amplitude = 40.0;

  // loop-like: two peaks around a mid-window valley
  std::size_t window_len = 36;
  double first_peak = 10.0;
  double valley_depth = 8.0;
  double surge_amplitude = 18.0;

  // land-like: banded AR(1) fluctuation
  double ar_coefficient = 0.3;
  double band_low = 42.0;
  double band_high = 58.0;
  double anomaly_amplitude = 6.0;
};

GeneratorConfig power_defaults();
GeneratorConfig loop_defaults();
GeneratorConfig land_defaults();

// Weekly consumption shape: five identical weekday humps (with per-day peak
// jitter), two flat weekend days. Anomalies flatten one weekday to the trough
// level or give one weekend day a peak. T = 7 * points_per_day. Output is
// n_normal label-0 windows followed by n_abnormal label-1 windows.
std::vector<Window> gen_power_like(const GeneratorConfig& config);

// Event-traffic shape over one window: a small pre-event peak, a mid-window
// valley, then the largest peak after the valley. Anomalies omit the closing
// surge or invert the valley into a bump.
std::vector<Window> gen_loop_like(const GeneratorConfig& config);

// Humidity-like AR(1) fluctuation clamped to [band_low, band_high] for normal
// windows; anomalies inject a spike or a level-shifted run escaping the band.
std::vector<Window> gen_land_like(const GeneratorConfig& config);

}  // namespace tsad

#endif  // TSAD_SYNTH_HPP
