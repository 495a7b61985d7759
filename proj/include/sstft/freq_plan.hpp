#ifndef SSTFT_FREQ_PLAN_HPP
#define SSTFT_FREQ_PLAN_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "sstft/config.hpp"

namespace sstft {

/// Per-channel frequency tables of the three combs.
///
/// FSR relations: fsr_sweep = N * f_s, fsr_pump = fsr_sweep + f_s,
/// fsr_reference = fsr_pump - subcarrier_step. Comb line n is anchored at
/// pump_base_freq + (n-1) * fsr_pump; the sweep and reference lines follow
/// from the Brillouin shift and the subcarrier plan.
struct CombPlan {
  std::vector<double> sweep_lines;       // f_s,n
  std::vector<double> pump_lines;        // f_p,n
  std::vector<double> reference_lines;   // f_r,n
  std::vector<double> gain_centers;      // f_p,n - f_SBS
  std::vector<std::pair<double, double>> channel_coverage;  // [lo, hi) in SUT frequency
  std::vector<double> subcarriers;       // f_sc,n
  double fsr_sweep = 0.0;
  double fsr_pump = 0.0;
  double fsr_reference = 0.0;
};

struct Violation {
  std::string constraint;  // short identifier of the failed relation
  std::string detail;
};

/// Derives the full comb plan from a valid config.
CombPlan derive_plan(const SystemConfig& config);

/// Checks the plan algebra plus simulation feasibility. Empty result means
/// the plan is usable; each violation names the failed constraint.
std::vector<Violation> validate_plan(const CombPlan& plan, const SystemConfig& config);

/// Instantaneous analysis bandwidth N * k * T.
double analysis_bandwidth(const SystemConfig& config);

struct ChannelBudget {
  double bandwidth;   // Hz
  double chirp_rate;  // Hz/s
  double period;      // s
};

/// Splits the channel count N = n1*n2*n3 into bandwidth, chirp-rate, and
/// period improvements: B' = n1*k*T, k' = k/n2, T' = T/n3.
ChannelBudget channel_budget(int n, std::array<int, 3> split, double chirp_rate, double period);

struct ChannelPos {
  int channel;    // 1-based
  double offset;  // Hz from the channel's lower edge
};

/// Maps an in-band frequency to its half-open channel interval,
/// [(n-1)*f_s, n*f_s). Out-of-band input throws std::out_of_range.
ChannelPos map_frequency_to_channel(double freq, const SystemConfig& config);

}  // namespace sstft

#endif
