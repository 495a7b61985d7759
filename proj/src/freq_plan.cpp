#include "sstft/freq_plan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sstft {

CombPlan derive_plan(const SystemConfig& config) {
  config.validate();
  const int n = config.n_channels;
  const double fs = config.sweep_bandwidth;
  const double df = config.subcarrier_step;

  CombPlan plan;
  plan.fsr_sweep = n * fs;
  plan.fsr_pump = plan.fsr_sweep + fs;
  plan.fsr_reference = plan.fsr_pump - df;

  plan.pump_lines.resize(n);
  plan.sweep_lines.resize(n);
  plan.reference_lines.resize(n);
  plan.gain_centers.resize(n);
  plan.channel_coverage.resize(n);
  plan.subcarriers.resize(n);
  for (int i = 0; i < n; ++i) {
    const double fp = config.pump_base_freq + i * plan.fsr_pump;
    plan.pump_lines[i] = fp;
    plan.sweep_lines[i] = fp - i * fs - config.brillouin_shift;
    plan.gain_centers[i] = fp - config.brillouin_shift;
    plan.reference_lines[i] = fp - config.brillouin_shift - config.subcarrier_min - i * df;
    plan.channel_coverage[i] = {i * fs, (i + 1) * fs};
    plan.subcarriers[i] = config.subcarrier_min + i * df;
  }
  return plan;
}

namespace {

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-6 * std::max(std::abs(scale), 1.0);
}

std::string hz(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v * 1e-9 << " GHz";
  return os.str();
}

}  // namespace

std::vector<Violation> validate_plan(const CombPlan& plan, const SystemConfig& config) {
  std::vector<Violation> v;
  const int n = config.n_channels;
  const double fs = config.sweep_bandwidth;
  const double df = config.subcarrier_step;

  auto add = [&](const std::string& constraint, const std::string& detail) {
    v.push_back({constraint, detail});
  };

  const auto sz = static_cast<std::size_t>(n);
  if (plan.sweep_lines.size() != sz || plan.pump_lines.size() != sz ||
      plan.reference_lines.size() != sz || plan.gain_centers.size() != sz ||
      plan.channel_coverage.size() != sz || plan.subcarriers.size() != sz) {
    add("table_size", "plan tables must have one entry per channel");
    return v;
  }

  if (!close(plan.fsr_sweep, n * fs, plan.fsr_sweep))
    add("sweep_fsr", "sweep comb FSR must equal N * sweep_bandwidth, got " + hz(plan.fsr_sweep));
  if (!close(plan.fsr_pump, plan.fsr_sweep + fs, plan.fsr_pump))
    add("pump_fsr", "pump comb FSR must exceed the sweep FSR by the sweep bandwidth, got " +
                        hz(plan.fsr_pump));
  if (!close(plan.fsr_reference, plan.fsr_pump - df, plan.fsr_reference))
    add("reference_fsr",
        "reference comb FSR must equal the pump FSR minus the subcarrier step, got " +
            hz(plan.fsr_reference));

  for (int i = 0; i < n; ++i) {
    const double fp = plan.pump_lines[i];
    if (!close(plan.sweep_lines[i], fp - i * fs - config.brillouin_shift, fp))
      add("sweep_line", "sweep line " + std::to_string(i + 1) +
                            " must sit (n-1)*f_s + f_SBS below its pump line");
    if (!close(plan.gain_centers[i], fp - config.brillouin_shift, fp))
      add("gain_center", "gain center " + std::to_string(i + 1) +
                             " must sit the Brillouin shift below its pump line");
    if (!close(plan.reference_lines[i],
               fp - config.brillouin_shift - config.subcarrier_min - i * df, fp))
      add("reference_line", "reference line " + std::to_string(i + 1) +
                                " must beat against its gain center at the channel subcarrier");
    if (!close(plan.subcarriers[i], config.subcarrier_min + i * df, plan.subcarriers[i]))
      add("subcarrier", "subcarrier " + std::to_string(i + 1) +
                            " must equal subcarrier_min + (n-1)*subcarrier_step");
    if (i + 1 < n && !close(plan.pump_lines[i + 1] - fp, plan.fsr_pump, plan.fsr_pump))
      add("pump_spacing", "pump lines must be spaced by the pump FSR");
  }

  // channel coverage must tile [0, N*f_s) without gap or overlap
  for (int i = 0; i < n; ++i) {
    const auto [lo, hi] = plan.channel_coverage[i];
    if (!close(lo, i * fs, n * fs) || !close(hi, (i + 1) * fs, n * fs)) {
      add("channel_coverage", "channel " + std::to_string(i + 1) +
                                  " coverage must be [(n-1)*f_s, n*f_s), got [" + hz(lo) + ", " +
                                  hz(hi) + ")");
    }
  }

  // demodulation feasibility: the default low-pass at subcarrier_step/2 must
  // pass the pulse spectrum, whose width is set by the wider of the
  // quasi-static pulse (gain_fwhm / k in time) and the phonon response.
  const double pulse_width = std::max(config.gain_fwhm / config.chirp_rate, config.phonon_lifetime);
  const double required_cutoff = 1.0 / (3.14159265358979323846 * pulse_width);
  if (df / 2.0 < required_cutoff) {
    add("subcarrier_spacing",
        "subcarrier spacing below demodulation bandwidth: step/2 = " + hz(df / 2.0) +
            " but the pulse spectrum needs " + hz(required_cutoff));
  }

  const double top_subcarrier = config.subcarrier_min + (n - 1) * df;
  if (!(config.sample_rate > 2.0 * (top_subcarrier + df / 2.0))) {
    add("nyquist", "sample_rate must exceed twice the highest subcarrier plus the demod bandwidth");
  }

  if (!(plan.fsr_pump > 100.0 * config.gain_fwhm)) {
    add("gain_separation",
        "adjacent gain centers must be separated by more than 100x the gain FWHM");
  }

  return v;
}

double analysis_bandwidth(const SystemConfig& config) {
  return config.n_channels * config.chirp_rate * config.sweep_period;
}

ChannelBudget channel_budget(int n, std::array<int, 3> split, double chirp_rate, double period) {
  const auto [n1, n2, n3] = split;
  if (n1 < 1 || n2 < 1 || n3 < 1 || n1 * n2 * n3 != n) {
    std::ostringstream os;
    os << "channel_budget: split " << n1 << "x" << n2 << "x" << n3 << " does not factor N=" << n;
    throw std::invalid_argument(os.str());
  }
  return {n1 * chirp_rate * period, chirp_rate / n2, period / n3};
}

ChannelPos map_frequency_to_channel(double freq, const SystemConfig& config) {
  const double band = config.analysis_band();
  if (!(freq >= 0.0 && freq < band)) {
    std::ostringstream os;
    os.precision(12);
    os << "frequency " << freq * 1e-9 << " GHz outside the analysis band [0, " << band * 1e-9
       << ") GHz";
    throw std::out_of_range(os.str());
  }
  int channel = static_cast<int>(std::floor(freq / config.sweep_bandwidth)) + 1;
  if (channel > config.n_channels) channel = config.n_channels;  // guard against fp rounding
  return {channel, freq - (channel - 1) * config.sweep_bandwidth};
}

}  // namespace sstft
